//! Persistent homology over the two-element field.
//!
//! Two independent routes into the same invariants live here:
//!
//! * [`reduce_and_pair`] — the standard left-to-right boundary-matrix
//!   reduction (with the clearing optimization), producing birth/death
//!   intervals per homology dimension.
//! * [`betti_at_scale`] — a static computation at one scale: restrict the
//!   filtration, run dense Gaussian elimination, and read off
//!   `beta_k = rank Z_k - rank B_k`.
//!
//! The interval counts of the first route must agree with the second at every
//! scale; the test suites lean on that equivalence heavily.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::complex::Filtration;
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// Boundary matrix of a filtration in filtration order: column `j` holds the
/// (sorted) positions of the codimension-1 faces of simplex `j`. Vertex
/// columns are empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMatrix {
    columns: Vec<Vec<usize>>,
}

impl BoundaryMatrix {
    pub fn columns(&self) -> &[Vec<usize>] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }
}

/// Builds the mod-2 boundary matrix of a filtration.
pub fn boundary_matrix(filtration: &Filtration) -> Result<BoundaryMatrix> {
    let mut position: BTreeMap<&[usize], usize> = BTreeMap::new();
    for (at, s) in filtration.simplices().iter().enumerate() {
        position.insert(s.vertices(), at);
    }
    let mut columns = Vec::with_capacity(filtration.len());
    for s in filtration.simplices() {
        let mut column = Vec::new();
        if s.dim() > 0 {
            for face in s.faces() {
                match position.get(face.as_slice()) {
                    Some(at) => column.push(*at),
                    None => return Err(Error::FaceNotFound { simplex: face }),
                }
            }
            column.sort_unstable();
        }
        columns.push(column);
    }
    Ok(BoundaryMatrix { columns })
}

/// One persistence interval `[birth, death)`. Essential classes never die
/// within the filtration; they are reported with `death` set to the cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistencePair {
    pub birth: f64,
    pub death: f64,
    pub essential: bool,
}

/// All intervals of one homology dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceDiagram {
    pub dim: usize,
    /// Intervals with `birth < death`, sorted by (birth, death). Includes
    /// essential classes capped at the filtration cap.
    pub pairs: Vec<PersistencePair>,
    /// Number of never-dying classes, counted before capping (so a class born
    /// exactly at the cap still counts here even though its capped interval
    /// is empty and dropped from `pairs`).
    pub essential_count: usize,
}

impl PersistenceDiagram {
    fn empty(dim: usize) -> Self {
        Self {
            dim,
            pairs: Vec::new(),
            essential_count: 0,
        }
    }

    /// Number of intervals alive at `scale` (essential classes stay alive
    /// past the cap).
    pub fn alive_at(&self, scale: f64) -> usize {
        self.pairs
            .iter()
            .filter(|p| p.birth <= scale && (p.essential || scale < p.death))
            .count()
    }
}

fn xor_sorted(target: &mut Vec<usize>, other: &[usize]) {
    let mut merged = Vec::with_capacity(target.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() && j < other.len() {
        match target[i].cmp(&other[j]) {
            core::cmp::Ordering::Less => {
                merged.push(target[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                merged.push(other[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    merged.extend_from_slice(&target[i..]);
    merged.extend_from_slice(&other[j..]);
    *target = merged;
}

/// Reduces the boundary matrix and assembles persistence diagrams for
/// dimensions `0 ..= max_dim - 1`.
///
/// Columns are processed dimension by dimension from the top down, so the
/// pivot of a reduced column immediately clears its paired birth column.
/// Unpaired creators become essential classes `[birth, cap)`; intervals with
/// zero persistence are dropped.
pub fn reduce_and_pair(
    matrix: &BoundaryMatrix,
    filtration: &Filtration,
    cap: f64,
) -> Result<Vec<PersistenceDiagram>> {
    if matrix.len() != filtration.len() {
        return Err(Error::LengthMismatch {
            left: matrix.len(),
            right: filtration.len(),
        });
    }
    if !cap.is_finite() || cap < filtration.max_value() {
        return Err(Error::InvalidCap { cap });
    }
    let n = filtration.len();
    let max_dim = filtration.max_dim();
    let mut diagrams: Vec<PersistenceDiagram> =
        (0..max_dim).map(PersistenceDiagram::empty).collect();
    if n == 0 {
        return Ok(diagrams);
    }

    let dim_of: Vec<usize> = filtration.simplices().iter().map(|s| s.dim()).collect();
    let value_of: Vec<f64> = filtration.simplices().iter().map(|s| s.value()).collect();

    // pivot_owner[r] = column whose reduced form has lowest entry r.
    let mut pivot_owner: Vec<Option<usize>> = alloc::vec![None; n];
    let mut reduced: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
    // cleared[j]: column j is the birth of an already-found pair; its reduced
    // form is null, so it is skipped entirely.
    let mut cleared: Vec<bool> = alloc::vec![false; n];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut essentials: Vec<usize> = Vec::new();

    for dim in (1..=max_dim).rev() {
        for j in 0..n {
            if dim_of[j] != dim || cleared[j] {
                continue;
            }
            let mut column = matrix.columns()[j].clone();
            while let Some(&low) = column.last() {
                match pivot_owner[low] {
                    Some(owner) => xor_sorted(&mut column, &reduced[owner]),
                    None => break,
                }
            }
            match column.last() {
                Some(&low) => {
                    pivot_owner[low] = Some(j);
                    cleared[low] = true;
                    pairs.push((low, j));
                    reduced[j] = column;
                }
                None => {
                    if dim < max_dim {
                        essentials.push(j);
                    }
                }
            }
        }
    }
    // Vertices have empty columns; every uncleared one is an essential class.
    for j in 0..n {
        if dim_of[j] == 0 && !cleared[j] {
            essentials.push(j);
        }
    }

    for (birth_at, death_at) in pairs {
        let dim = dim_of[birth_at];
        debug_assert!(dim + 1 == dim_of[death_at]);
        let (birth, death) = (value_of[birth_at], value_of[death_at]);
        if birth < death {
            diagrams[dim].pairs.push(PersistencePair {
                birth,
                death,
                essential: false,
            });
        }
    }
    for at in essentials {
        let dim = dim_of[at];
        let birth = value_of[at];
        diagrams[dim].essential_count += 1;
        if birth < cap {
            diagrams[dim].pairs.push(PersistencePair {
                birth,
                death: cap,
                essential: true,
            });
        }
    }
    for diagram in &mut diagrams {
        diagram.pairs.sort_by(|a, b| {
            a.birth
                .total_cmp(&b.birth)
                .then(a.death.total_cmp(&b.death))
        });
    }
    Ok(diagrams)
}

/// Betti number and cycle/boundary ranks of one dimension at one scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BettiProfile {
    pub dim: usize,
    pub betti: usize,
    /// rank of the cycle group Z_k (kernel of the k-th boundary map).
    pub rank_cycles: usize,
    /// rank of the boundary group B_k (image of the (k+1)-th boundary map).
    pub rank_boundaries: usize,
}

/// Computes `beta_k` of the subcomplex at scale `epsilon` by dense Gaussian
/// elimination: `beta_k = nullity(d_k) - rank(d_{k+1})`.
///
/// Answering dimension `k` needs `(k+1)`-simplices, so `k` must be at most
/// `max_dim - 1`.
pub fn betti_at_scale(filtration: &Filtration, epsilon: f64, k: usize) -> Result<BettiProfile> {
    if k + 1 > filtration.max_dim() {
        return Err(Error::DimensionOutOfRange {
            dim: k,
            max_dim: filtration.max_dim(),
        });
    }
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::InvalidFiltration {
            reason: alloc::format!("scale {epsilon} must be finite and non-negative"),
        });
    }

    // Local column/row numbering of the simplices present at this scale,
    // per relevant dimension.
    let mut rows: BTreeMap<&[usize], usize> = BTreeMap::new(); // (k-1)-simplices
    let mut cols: BTreeMap<&[usize], usize> = BTreeMap::new(); // k-simplices
    let mut cofaces: Vec<&crate::complex::Simplex> = Vec::new(); // (k+1)-simplices
    for s in filtration.simplices() {
        if s.value() > epsilon {
            continue;
        }
        if k > 0 && s.dim() == k - 1 {
            let at = rows.len();
            rows.insert(s.vertices(), at);
        } else if s.dim() == k {
            let at = cols.len();
            cols.insert(s.vertices(), at);
        } else if s.dim() == k + 1 {
            cofaces.push(s);
        }
    }

    let rank_dk = if k == 0 {
        0
    } else {
        let mut matrix = BitMatrix::zeros(rows.len(), cols.len());
        for (vertices, col) in &cols {
            let simplex = crate::complex::Simplex::new(vertices.to_vec(), 0.0)?;
            for face in simplex.faces() {
                let row = rows.get(face.as_slice()).ok_or(Error::FaceNotFound {
                    simplex: face.clone(),
                })?;
                matrix.set(*row, *col);
            }
        }
        matrix.rank()
    };

    let rank_dk1 = {
        let mut matrix = BitMatrix::zeros(cols.len(), cofaces.len());
        for (col, s) in cofaces.iter().enumerate() {
            for face in s.faces() {
                let row = cols.get(face.as_slice()).ok_or(Error::FaceNotFound {
                    simplex: face.clone(),
                })?;
                matrix.set(*row, col);
            }
        }
        matrix.rank()
    };

    let rank_cycles = cols.len() - rank_dk;
    debug_assert!(rank_cycles >= rank_dk1);
    Ok(BettiProfile {
        dim: k,
        betti: rank_cycles - rank_dk1,
        rank_cycles,
        rank_boundaries: rank_dk1,
    })
}

/// Feature counts per dimension: the number of intervals left after
/// zero-persistence filtering, essential classes included.
pub fn feature_counts(diagrams: &[PersistenceDiagram]) -> Vec<usize> {
    let size = diagrams.iter().map(|d| d.dim + 1).max().unwrap_or(0);
    let mut counts = alloc::vec![0usize; size];
    for d in diagrams {
        counts[d.dim] = d.pairs.len();
    }
    counts
}
