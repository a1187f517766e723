//! Ensemble statistics over a populated grid, plus normalized-Laplacian
//! spectra for before/after comparisons of a pruned network.

use alloc::vec::Vec;

use crate::corpus::ConceptNetwork;
use crate::eigen::symmetric_eigenvalues;
use crate::error::{Error, Result};
use crate::image::lp_norm;
use crate::stability::ParameterGrid;

/// Entrywise mean of the dimension-`k` image block over all cells.
pub fn mean_image(grid: &ParameterGrid, k: usize) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if k == 0 || k > grid.k_max() {
        return Err(Error::DimensionOutOfRange {
            dim: k,
            max_dim: grid.k_max(),
        });
    }
    let mut mean = alloc::vec![0.0f64; grid.block_len()];
    for flat in 0..grid.len() {
        for (acc, v) in mean.iter_mut().zip(grid.image_block(flat, k)) {
            *acc += v;
        }
    }
    let n = grid.len() as f64;
    for v in &mut mean {
        *v /= n;
    }
    Ok(mean)
}

/// Deviation of one cell from the ensemble means, with the cross-dimension
/// term subtracted:
///
/// ```text
/// (1 / (N - 1)) * sum_i [ a_i^2 + c_i^2 - 2 a_i c_i ]
/// ```
///
/// where `a` and `c` are the mean-shifted dimension-1 and dimension-2 blocks
/// and `N` is the block length. Algebraically this equals
/// `(1 / (N - 1)) * sum_i (a_i - c_i)^2`, so it is non-negative; the
/// summation is kept in the expanded form on purpose.
pub fn cross_term_variance(
    block1: &[f64],
    block2: &[f64],
    mean1: &[f64],
    mean2: &[f64],
) -> Result<f64> {
    let n = block1.len();
    for other in [block2.len(), mean1.len(), mean2.len()] {
        if other != n {
            return Err(Error::LengthMismatch {
                left: n,
                right: other,
            });
        }
    }
    if n < 2 {
        return Err(Error::TooFewSamples { n });
    }
    let mut total = 0.0f64;
    for i in 0..n {
        let a = block1[i] - mean1[i];
        let c = block2[i] - mean2[i];
        total += a * a + c * c - 2.0 * a * c;
    }
    Ok(total / (n - 1) as f64)
}

/// Scale factor for [`pnorm_variance`] matching the Euclidean convention:
/// `1 / (N - 1)` for block length `N`.
pub fn euclidean_alpha(block_len: usize) -> Result<f64> {
    if block_len < 2 {
        return Err(Error::TooFewSamples { n: block_len });
    }
    Ok(1.0 / (block_len - 1) as f64)
}

/// The p-norm variance alternative, valid for any number of dimensions:
///
/// ```text
/// (alpha / k_max) * sum_k || block_k - mean_k ||_p^2
/// ```
pub fn pnorm_variance(blocks: &[&[f64]], means: &[Vec<f64>], p: f64, alpha: f64) -> Result<f64> {
    if blocks.len() != means.len() {
        return Err(Error::LengthMismatch {
            left: blocks.len(),
            right: means.len(),
        });
    }
    if blocks.is_empty() {
        return Err(Error::InvalidVariance {
            reason: "no dimension blocks".into(),
        });
    }
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::InvalidVariance {
            reason: alloc::format!("alpha must be positive and finite, got {alpha}"),
        });
    }
    let k_max = blocks.len() as f64;
    let mut total = 0.0f64;
    for (block, mean) in blocks.iter().zip(means) {
        if block.len() != mean.len() {
            return Err(Error::LengthMismatch {
                left: block.len(),
                right: mean.len(),
            });
        }
        let norm = lp_norm(block.iter().zip(mean).map(|(b, m)| b - m), p)?;
        total += norm * norm;
    }
    Ok(alpha / k_max * total)
}

/// Which estimator a [`VarianceField`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarianceKind {
    /// [`cross_term_variance`]; requires exactly two homology dimensions.
    CrossTerm,
    /// [`pnorm_variance`]; any number of dimensions.
    PNorm,
}

/// Per-cell variance values in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceField {
    values: Vec<f64>,
    kind: VarianceKind,
}

impl VarianceField {
    /// Evaluates the chosen estimator at every cell. `alpha` defaults to
    /// `1 / (N - 1)` when not given; it only applies to [`VarianceKind::PNorm`].
    pub fn compute(
        grid: &ParameterGrid,
        kind: VarianceKind,
        p: f64,
        alpha: Option<f64>,
    ) -> Result<Self> {
        let means: Vec<Vec<f64>> = (1..=grid.k_max())
            .map(|k| mean_image(grid, k))
            .collect::<Result<_>>()?;
        let values = match kind {
            VarianceKind::CrossTerm => {
                if grid.k_max() != 2 {
                    return Err(Error::InvalidVariance {
                        reason: alloc::format!(
                            "the cross-term estimator is defined for exactly two homology \
                             dimensions, got k_max = {}",
                            grid.k_max()
                        ),
                    });
                }
                (0..grid.len())
                    .map(|flat| {
                        cross_term_variance(
                            grid.image_block(flat, 1),
                            grid.image_block(flat, 2),
                            &means[0],
                            &means[1],
                        )
                    })
                    .collect::<Result<Vec<f64>>>()?
            }
            VarianceKind::PNorm => {
                let alpha = match alpha {
                    Some(alpha) => alpha,
                    None => euclidean_alpha(grid.block_len())?,
                };
                (0..grid.len())
                    .map(|flat| {
                        let blocks: Vec<&[f64]> = (1..=grid.k_max())
                            .map(|k| grid.image_block(flat, k))
                            .collect();
                        pnorm_variance(&blocks, &means, p, alpha)
                    })
                    .collect::<Result<Vec<f64>>>()?
            }
        };
        Ok(Self { values, kind })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> VarianceKind {
        self.kind
    }
}

/// Eigenvalues of a network's normalized Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    requested: usize,
}

impl Spectrum {
    /// All eigenvalues, ascending; one per non-isolated vertex.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// How many leading eigenvalues the caller asked to report.
    pub fn requested(&self) -> usize {
        self.requested
    }

    /// The `requested` largest eigenvalues, descending (fewer if the graph is
    /// small).
    pub fn largest(&self) -> impl Iterator<Item = f64> + '_ {
        self.eigenvalues.iter().rev().take(self.requested).copied()
    }
}

/// Spectrum of `D^{-1/2} (D - A) D^{-1/2}` over the non-isolated vertices.
///
/// Vertices with weighted degree zero contribute nothing to either `D` or `A`
/// and are dropped before normalizing; a network where that removes everything
/// is an error.
pub fn laplacian_spectrum(network: &ConceptNetwork, count: usize) -> Result<Spectrum> {
    let n = network.node_count();
    let mut degree = alloc::vec![0.0f64; n];
    for edge in network.edges() {
        degree[edge.source] += edge.weight;
        degree[edge.target] += edge.weight;
    }
    let kept: Vec<usize> = (0..n).filter(|v| degree[*v] > 0.0).collect();
    if kept.is_empty() {
        return Err(Error::AllVerticesIsolated);
    }
    let mut local = alloc::vec![usize::MAX; n];
    for (at, v) in kept.iter().enumerate() {
        local[*v] = at;
    }

    let m = kept.len();
    let mut matrix = alloc::vec![alloc::vec![0.0f64; m]; m];
    for (at, row) in matrix.iter_mut().enumerate() {
        row[at] = 1.0;
    }
    let scale: Vec<f64> = kept.iter().map(|v| 1.0 / libm::sqrt(degree[*v])).collect();
    for edge in network.edges() {
        if edge.weight == 0.0 {
            continue;
        }
        let (i, j) = (local[edge.source], local[edge.target]);
        let value = -edge.weight * scale[i] * scale[j];
        matrix[i][j] = value;
        matrix[j][i] = value;
    }

    Ok(Spectrum {
        eigenvalues: symmetric_eigenvalues(matrix),
        requested: count,
    })
}
