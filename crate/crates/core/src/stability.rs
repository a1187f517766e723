//! The discrete tangent field over a parameter grid, and the constrained
//! argmin that picks the most stable cell.
//!
//! Every grid cell holds the concatenated persistence-image vector of the
//! network built at that cell's threshold point. The field value at a cell is
//! the p-norm of its per-axis averaged difference quotients against grid
//! neighbors: small values mean the cell's topology barely moves when the
//! thresholds wiggle. The optimizer minimizes the field over the cells that
//! carry at least `delta_k` features in every homology dimension `k`.

use alloc::vec::Vec;

use crate::corpus::ThresholdPoint;
use crate::error::{Error, Result};
use crate::image::lp_norm;

/// One evaluated grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub point: ThresholdPoint,
    /// Concatenated persistence-image vector (dimension blocks ascending).
    pub image: Vec<f64>,
    /// `feature_counts[k - 1]` is the interval count in homology dimension k.
    pub feature_counts: Vec<usize>,
    pub node_count: usize,
    pub edge_count: usize,
}

/// A dense D-dimensional lattice of evaluated cells, row-major with the last
/// axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterGrid {
    axes: Vec<Vec<f64>>,
    cells: Vec<GridCell>,
    k_max: usize,
    /// Length of one per-dimension image block.
    block_len: usize,
}

impl ParameterGrid {
    /// Validates and assembles the grid. Cells must arrive in row-major order
    /// and agree with the axes coordinate-for-coordinate.
    pub fn new(
        axes: Vec<Vec<f64>>,
        cells: Vec<GridCell>,
        k_max: usize,
        block_len: usize,
    ) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidAxes {
                reason: "no axes".into(),
            });
        }
        for axis in &axes {
            if axis.is_empty() {
                return Err(Error::InvalidAxes {
                    reason: "empty axis".into(),
                });
            }
            if axis.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidAxes {
                    reason: "non-finite axis value".into(),
                });
            }
            if axis.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidAxes {
                    reason: "axis values must be strictly increasing".into(),
                });
            }
        }
        let expected: usize = axes.iter().map(Vec::len).product();
        if cells.len() != expected {
            return Err(Error::InvalidAxes {
                reason: alloc::format!("expected {expected} cells, got {}", cells.len()),
            });
        }
        if k_max == 0 {
            return Err(Error::InvalidAxes {
                reason: "k_max must be at least 1".into(),
            });
        }
        let grid = Self {
            axes,
            cells,
            k_max,
            block_len,
        };
        for (flat, cell) in grid.cells.iter().enumerate() {
            let indices = grid.multi_index(flat);
            if cell.point.dim() != grid.axes.len() {
                return Err(Error::InvalidAxes {
                    reason: "cell point dimensionality differs from axis count".into(),
                });
            }
            for (d, at) in indices.iter().enumerate() {
                if cell.point.coords()[d] != grid.axes[d][*at] {
                    return Err(Error::InvalidAxes {
                        reason: alloc::format!("cell {indices:?} disagrees with its axes"),
                    });
                }
            }
            if cell.image.len() != k_max * block_len {
                return Err(Error::LengthMismatch {
                    left: cell.image.len(),
                    right: k_max * block_len,
                });
            }
            if cell.feature_counts.len() != k_max {
                return Err(Error::LengthMismatch {
                    left: cell.feature_counts.len(),
                    right: k_max,
                });
            }
            if cell.image.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidAxes {
                    reason: alloc::format!("cell {indices:?} has a non-finite image entry"),
                });
            }
        }
        Ok(grid)
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }

    pub fn cells(&self) -> &[GridCell] {
        &self.cells
    }

    pub fn cell(&self, flat: usize) -> &GridCell {
        &self.cells[flat]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    /// The dimension-k block of a cell's concatenated image vector.
    pub fn image_block(&self, flat: usize, k: usize) -> &[f64] {
        debug_assert!((1..=self.k_max).contains(&k));
        let start = (k - 1) * self.block_len;
        &self.cells[flat].image[start..start + self.block_len]
    }

    /// Axis lengths.
    pub fn dims(&self) -> Vec<usize> {
        self.axes.iter().map(Vec::len).collect()
    }

    pub fn flat_index(&self, indices: &[usize]) -> usize {
        debug_assert_eq!(indices.len(), self.axes.len());
        let mut flat = 0usize;
        for (d, at) in indices.iter().enumerate() {
            debug_assert!(*at < self.axes[d].len());
            flat = flat * self.axes[d].len() + at;
        }
        flat
    }

    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        let mut rest = flat;
        let mut indices = alloc::vec![0usize; self.axes.len()];
        for d in (0..self.axes.len()).rev() {
            let len = self.axes[d].len();
            indices[d] = rest % len;
            rest /= len;
        }
        indices
    }

    /// Flat indices of the previous/next neighbor along one axis.
    fn neighbors_along(&self, flat: usize, axis: usize) -> (Option<usize>, Option<usize>) {
        let indices = self.multi_index(flat);
        let at = indices[axis];
        let prev = (at > 0).then(|| {
            let mut n = indices.clone();
            n[axis] = at - 1;
            self.flat_index(&n)
        });
        let next = (at + 1 < self.axes[axis].len()).then(|| {
            let mut n = indices.clone();
            n[axis] = at + 1;
            self.flat_index(&n)
        });
        (prev, next)
    }

    /// Largest feature count per dimension over all cells (`F_k`, index k-1).
    pub fn max_feature_counts(&self) -> Vec<usize> {
        let mut max = alloc::vec![0usize; self.k_max];
        for cell in &self.cells {
            for (k, f) in cell.feature_counts.iter().enumerate() {
                max[k] = max[k].max(*f);
            }
        }
        max
    }
}

/// Magnitude of the discrete directional derivative between two cells:
/// image distance over parameter distance.
pub fn directional_derivative(
    image_a: &[f64],
    image_b: &[f64],
    theta_a: f64,
    theta_b: f64,
    p: f64,
) -> Result<f64> {
    if theta_a == theta_b {
        return Err(Error::EqualParameterValues { theta: theta_a });
    }
    let distance = crate::image::image_distance(image_a, image_b, p)?;
    Ok(distance / (theta_a - theta_b).abs())
}

/// Averaged gradient magnitude at one cell.
///
/// Per axis, the difference quotients toward the existing neighbors are
/// summed; with two neighbors each quotient carries a factor 1/2 so interior
/// and boundary cells stay comparable, with a single neighbor it enters at
/// full weight. The per-axis sums form a D-vector whose p-norm is returned.
#[allow(clippy::needless_range_loop)] // the axis index addresses three parallel structures
pub fn averaged_gradient_magnitude(grid: &ParameterGrid, flat: usize, p: f64) -> Result<f64> {
    let cell = grid.cell(flat);
    let indices = grid.multi_index(flat);
    let mut per_axis = Vec::with_capacity(grid.axes().len());
    let mut any_neighbor = false;
    for axis in 0..grid.axes().len() {
        let (prev, next) = grid.neighbors_along(flat, axis);
        let weight = if prev.is_some() && next.is_some() {
            2.0
        } else {
            1.0
        };
        let mut sum = 0.0;
        for neighbor in [prev, next].into_iter().flatten() {
            any_neighbor = true;
            let other = grid.cell(neighbor);
            let quotient = directional_derivative(
                &cell.image,
                &other.image,
                grid.axes()[axis][indices[axis]],
                other.point.coords()[axis],
                p,
            )?;
            sum += quotient / weight;
        }
        per_axis.push(sum);
    }
    if !any_neighbor {
        return Err(Error::GridTooSmall);
    }
    lp_norm(per_axis.into_iter(), p)
}

/// The tangent-field magnitudes, one value per cell in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityField {
    values: Vec<f64>,
}

impl StabilityField {
    /// Evaluates `averaged_gradient_magnitude` at every cell.
    pub fn compute(grid: &ParameterGrid, p: f64) -> Result<Self> {
        let values = (0..grid.len())
            .map(|flat| averaged_gradient_magnitude(grid, flat, p))
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A minimum feature-count requirement for one homology dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaSpec {
    /// Require `f_k >= value` outright.
    Absolute(f64),
    /// Require `f_k >= fraction * F_k`, with `F_k` the grid-wide maximum.
    FractionOfMax(f64),
}

/// Feature-count constraints, one spec per dimension `k = 1 ..= k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraints {
    deltas: Vec<DeltaSpec>,
}

impl Constraints {
    pub fn new(deltas: Vec<DeltaSpec>) -> Result<Self> {
        for spec in &deltas {
            match spec {
                DeltaSpec::Absolute(v) => {
                    if !v.is_finite() || *v < 0.0 {
                        return Err(Error::InvalidConstraint {
                            reason: alloc::format!("absolute delta {v} must be >= 0"),
                        });
                    }
                }
                DeltaSpec::FractionOfMax(v) => {
                    if !v.is_finite() || !(0.0..=1.0).contains(v) {
                        return Err(Error::InvalidConstraint {
                            reason: alloc::format!("fraction {v} must lie in [0, 1]"),
                        });
                    }
                }
            }
        }
        Ok(Self { deltas })
    }

    /// All-zero constraints for `k_max` dimensions (every cell feasible).
    pub fn none(k_max: usize) -> Self {
        Self {
            deltas: alloc::vec![DeltaSpec::Absolute(0.0); k_max],
        }
    }

    pub fn deltas(&self) -> &[DeltaSpec] {
        &self.deltas
    }

    /// Evaluates fractional specs against the grid's `F_k` values.
    pub fn resolve(&self, grid: &ParameterGrid) -> Result<ResolvedConstraints> {
        if self.deltas.len() != grid.k_max() {
            return Err(Error::InvalidConstraint {
                reason: alloc::format!(
                    "got {} deltas for k_max = {}",
                    self.deltas.len(),
                    grid.k_max()
                ),
            });
        }
        let max_features = grid.max_feature_counts();
        let deltas = self
            .deltas
            .iter()
            .zip(&max_features)
            .map(|(spec, max_f)| match spec {
                DeltaSpec::Absolute(v) => *v,
                DeltaSpec::FractionOfMax(fraction) => fraction * *max_f as f64,
            })
            .collect();
        Ok(ResolvedConstraints {
            deltas,
            max_features,
        })
    }
}

/// Constraints with fractions already multiplied out.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedConstraints {
    /// Required feature count per dimension (index k-1).
    pub deltas: Vec<f64>,
    /// `F_k` per dimension (index k-1).
    pub max_features: Vec<usize>,
}

impl ResolvedConstraints {
    pub fn is_feasible(&self, cell: &GridCell) -> bool {
        cell.feature_counts
            .iter()
            .zip(&self.deltas)
            .all(|(f, delta)| *f as f64 >= *delta)
    }
}

/// The optimizer's answer: which cell, and how contested the choice was.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub flat_index: usize,
    pub indices: Vec<usize>,
    pub point: ThresholdPoint,
    pub field_value: f64,
    pub feasible_count: usize,
}

/// Minimizes the field over the feasible cells; ties break toward the
/// lexicographically smallest axis-index tuple.
pub fn optimize(
    grid: &ParameterGrid,
    field: &StabilityField,
    constraints: &ResolvedConstraints,
) -> Result<Selection> {
    if field.len() != grid.len() {
        return Err(Error::LengthMismatch {
            left: field.len(),
            right: grid.len(),
        });
    }
    let mut best: Option<(usize, f64)> = None;
    let mut feasible_count = 0usize;
    for (flat, cell) in grid.cells().iter().enumerate() {
        if !constraints.is_feasible(cell) {
            continue;
        }
        feasible_count += 1;
        let value = field.values()[flat];
        // Row-major flat order is lexicographic on index tuples, so a strict
        // comparison keeps the first minimizer.
        if best.is_none_or(|(_, best_value)| value < best_value) {
            best = Some((flat, value));
        }
    }
    match best {
        Some((flat, value)) => Ok(Selection {
            flat_index: flat,
            indices: grid.multi_index(flat),
            point: grid.cell(flat).point.clone(),
            field_value: value,
            feasible_count,
        }),
        None => {
            let binding = constraints
                .deltas
                .iter()
                .zip(&constraints.max_features)
                .enumerate()
                .map(|(at, (delta, max_f))| (at + 1, *delta, *max_f))
                .collect();
            Err(Error::Infeasible { binding })
        }
    }
}

/// One entry of a hyperparameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    /// The constraint specs of this combination, dimension 1 first.
    pub specs: Vec<DeltaSpec>,
    /// Resolved numeric deltas.
    pub deltas: Vec<f64>,
    /// `None` marks an infeasible combination.
    pub selection: Option<Selection>,
}

/// Runs the optimizer over the Cartesian product of per-dimension delta
/// lists, ordered with the dimension-1 list outermost. Infeasible
/// combinations are recorded, not fatal.
pub fn sweep(
    grid: &ParameterGrid,
    field: &StabilityField,
    delta_lists: &[Vec<DeltaSpec>],
) -> Result<Vec<SweepOutcome>> {
    if delta_lists.len() != grid.k_max() {
        return Err(Error::InvalidConstraint {
            reason: alloc::format!(
                "got {} delta lists for k_max = {}",
                delta_lists.len(),
                grid.k_max()
            ),
        });
    }
    if delta_lists.iter().any(Vec::is_empty) {
        return Err(Error::InvalidConstraint {
            reason: "empty delta list".into(),
        });
    }
    let total: usize = delta_lists.iter().map(Vec::len).product();
    let mut outcomes = Vec::with_capacity(total);
    let mut odometer = alloc::vec![0usize; delta_lists.len()];
    loop {
        let specs: Vec<DeltaSpec> = odometer
            .iter()
            .enumerate()
            .map(|(dim, at)| delta_lists[dim][*at])
            .collect();
        let resolved = Constraints::new(specs.clone())?.resolve(grid)?;
        let selection = match optimize(grid, field, &resolved) {
            Ok(selection) => Some(selection),
            Err(Error::Infeasible { .. }) => None,
            Err(other) => return Err(other),
        };
        outcomes.push(SweepOutcome {
            specs,
            deltas: resolved.deltas,
            selection,
        });

        // Advance with the last dimension fastest.
        let mut dim = delta_lists.len();
        loop {
            if dim == 0 {
                return Ok(outcomes);
            }
            dim -= 1;
            odometer[dim] += 1;
            if odometer[dim] < delta_lists[dim].len() {
                break;
            }
            odometer[dim] = 0;
        }
    }
}

/// The default sweep fractions: ten increasingly strict values per dimension.
pub fn default_sweep_fractions() -> Vec<f64> {
    alloc::vec![0.01, 0.11, 0.21, 0.31, 0.41, 0.51, 0.61, 0.71, 0.81, 0.91]
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// A grid with explicitly planted image vectors, k_max = 1.
    pub(crate) fn planted_grid(
        axes: Vec<Vec<f64>>,
        images: Vec<Vec<f64>>,
        features: Vec<usize>,
    ) -> ParameterGrid {
        let block_len = images[0].len();
        let dims: Vec<usize> = axes.iter().map(Vec::len).collect();
        let mut cells = Vec::new();
        for (flat, image) in images.into_iter().enumerate() {
            // Decode the row-major index against `dims`.
            let mut rest = flat;
            let mut indices = vec![0usize; dims.len()];
            for d in (0..dims.len()).rev() {
                indices[d] = rest % dims[d];
                rest /= dims[d];
            }
            let coords: Vec<f64> = indices
                .iter()
                .enumerate()
                .map(|(d, at)| axes[d][*at])
                .collect();
            cells.push(GridCell {
                point: ThresholdPoint::new(coords).unwrap(),
                image,
                feature_counts: vec![features[flat]],
                node_count: 0,
                edge_count: 0,
            });
        }
        ParameterGrid::new(axes, cells, 1, block_len).unwrap()
    }

    #[test]
    fn directional_derivative_basics() {
        assert_eq!(
            directional_derivative(&[1.0, 2.0], &[1.0, 2.0], 0.0, 1.0, 2.0).unwrap(),
            0.0
        );
        // ||diff|| = 0.6 over |delta theta| = 2.
        let q = directional_derivative(&[0.6, 0.0], &[0.0, 0.0], 1.0, 3.0, 2.0).unwrap();
        assert!((q - 0.3).abs() < 1e-15);
        assert!(matches!(
            directional_derivative(&[0.0], &[1.0], 0.5, 0.5, 2.0),
            Err(Error::EqualParameterValues { .. })
        ));
    }

    #[test]
    fn directional_derivative_matches_direct_formula() {
        let mut state = 0xc0ffee123457u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..25 {
            let a: Vec<f64> = (0..64).map(|_| next()).collect();
            let b: Vec<f64> = (0..64).map(|_| next()).collect();
            let (ta, tb) = (next() * 10.0, 12.0 + next());
            let got = directional_derivative(&a, &b, ta, tb, 2.0).unwrap();
            let mut sum = 0.0;
            for i in 0..a.len() {
                sum += (a[i] - b[i]) * (a[i] - b[i]);
            }
            let expected = libm::sqrt(sum) / (ta - tb).abs();
            assert!((got - expected).abs() <= 1e-12);
        }
    }

    /// Interior cell of a 3x3 grid with planted vectors: the four-term
    /// average written out by hand.
    #[test]
    fn interior_cell_matches_hand_expansion() {
        let axes = vec![vec![1.0, 2.0, 4.0], vec![0.0, 3.0, 4.0]];
        // Images are 1-vectors; distances are plain absolute differences.
        let images: Vec<Vec<f64>> = (0..9).map(|i| vec![(i * i) as f64 * 0.25]).collect();
        let grid = planted_grid(axes, images, vec![0; 9]);
        let center = grid.flat_index(&[1, 1]); // value (1,1) -> image 4.0
        let got = averaged_gradient_magnitude(&grid, center, 2.0).unwrap();

        // Axis 0 neighbors: cells (0,1) image 0.25 at theta 1, (2,1) image
        // 12.25 at theta 4. Axis 1 neighbors: (1,0) image 2.25 at theta 0,
        // (1,2) image 6.25 at theta 4.
        let axis0 = (4.0f64 - 0.25).abs() / (2.0 * 1.0) + (4.0f64 - 12.25).abs() / (2.0 * 2.0);
        let axis1 = (4.0f64 - 2.25).abs() / (2.0 * 3.0) + (4.0f64 - 6.25).abs() / (2.0 * 1.0);
        let expected = libm::sqrt(axis0 * axis0 + axis1 * axis1);
        assert!(
            (got - expected).abs() < 1e-12,
            "got {got}, expected {expected}"
        );
    }

    /// Corner cell of a 2x2 grid: one neighbor per axis at full weight.
    #[test]
    fn corner_cell_gives_full_weight_to_single_neighbors() {
        let axes = vec![vec![0.0, 2.0], vec![0.0, 5.0]];
        let images = vec![vec![1.0], vec![2.0], vec![7.0], vec![3.5]];
        let grid = planted_grid(axes, images, vec![0; 4]);
        let corner = grid.flat_index(&[0, 0]);
        let got = averaged_gradient_magnitude(&grid, corner, 2.0).unwrap();
        let axis0 = (1.0f64 - 7.0).abs() / 2.0; // single neighbor, spacing 2
        let axis1 = (1.0f64 - 2.0).abs() / 5.0; // single neighbor, spacing 5
        let expected = libm::sqrt(axis0 * axis0 + axis1 * axis1);
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn shared_image_grid_has_zero_field() {
        let axes = vec![vec![0.0, 1.0, 2.0], vec![0.0, 1.0]];
        let images = vec![vec![0.5, 0.25]; 6];
        let grid = planted_grid(axes, images, vec![0; 6]);
        let field = StabilityField::compute(&grid, 2.0).unwrap();
        assert!(field.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn single_cell_grid_is_an_error() {
        let grid = planted_grid(vec![vec![1.0]], vec![vec![0.0]], vec![0]);
        assert!(matches!(
            averaged_gradient_magnitude(&grid, 0, 2.0),
            Err(Error::GridTooSmall)
        ));
    }

    #[test]
    fn translation_leaves_field_unchanged() {
        // Dyadic values keep the float arithmetic exact.
        let axes = vec![vec![0.0, 1.0, 2.0], vec![0.0, 2.0, 8.0]];
        let images: Vec<Vec<f64>> = (0..9)
            .map(|i| vec![i as f64 * 0.5, 8.0 - i as f64 * 0.25])
            .collect();
        let grid = planted_grid(axes.clone(), images.clone(), vec![0; 9]);
        let shifted: Vec<Vec<f64>> = images
            .iter()
            .map(|v| v.iter().map(|x| x + 16.0).collect())
            .collect();
        let grid_shifted = planted_grid(axes, shifted, vec![0; 9]);
        let field = StabilityField::compute(&grid, 2.0).unwrap();
        let field_shifted = StabilityField::compute(&grid_shifted, 2.0).unwrap();
        assert_eq!(field.values(), field_shifted.values());
    }

    #[test]
    fn scaling_every_axis_by_two_halves_the_field() {
        let axes = vec![vec![0.0, 1.0, 3.0], vec![1.0, 2.0]];
        let images: Vec<Vec<f64>> = (0..6)
            .map(|i| vec![(i % 3) as f64, (i * i) as f64 * 0.125])
            .collect();
        let grid = planted_grid(axes.clone(), images.clone(), vec![0; 6]);
        let doubled: Vec<Vec<f64>> = axes
            .iter()
            .map(|axis| axis.iter().map(|v| v * 2.0).collect())
            .collect();
        let grid2 = planted_grid(doubled, images, vec![0; 6]);
        let f1 = StabilityField::compute(&grid, 2.0).unwrap();
        let f2 = StabilityField::compute(&grid2, 2.0).unwrap();
        for (a, b) in f1.values().iter().zip(f2.values()) {
            assert!((b - a / 2.0).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    fn field_of(values: Vec<f64>) -> StabilityField {
        StabilityField { values }
    }

    #[test]
    fn optimizer_picks_unique_feasible_minimum() {
        let axes = vec![vec![0.0, 1.0], vec![0.0, 1.0]];
        let images = vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]];
        let grid = planted_grid(axes, images, vec![3, 1, 4, 2]);
        let field = field_of(vec![0.9, 0.2, 0.4, 0.8]);

        // Unconstrained: cell 1 wins.
        let all = Constraints::none(1).resolve(&grid).unwrap();
        let selection = optimize(&grid, &field, &all).unwrap();
        assert_eq!(selection.flat_index, 1);
        assert_eq!(selection.feasible_count, 4);

        // Requiring f >= 2 excludes the unconstrained winner.
        let resolved = Constraints::new(vec![DeltaSpec::Absolute(2.0)])
            .unwrap()
            .resolve(&grid)
            .unwrap();
        let selection = optimize(&grid, &field, &resolved).unwrap();
        assert_eq!(selection.flat_index, 2);

        // A delta above F_1 = 4 is infeasible.
        let resolved = Constraints::new(vec![DeltaSpec::Absolute(5.0)])
            .unwrap()
            .resolve(&grid)
            .unwrap();
        assert!(matches!(
            optimize(&grid, &field, &resolved),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn optimizer_ties_break_lexicographically() {
        let axes = vec![vec![0.0, 1.0], vec![0.0, 1.0]];
        let images = vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]];
        let grid = planted_grid(axes, images, vec![1; 4]);
        let field = field_of(vec![0.5, 0.2, 0.2, 0.9]);
        let resolved = Constraints::none(1).resolve(&grid).unwrap();
        let selection = optimize(&grid, &field, &resolved).unwrap();
        assert_eq!(selection.indices, vec![0, 1]);
    }

    #[test]
    fn optimizer_matches_exhaustive_scan() {
        let mut state = 0xfeedbeefu64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let axes = vec![vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 1.0, 2.0]];
        let images: Vec<Vec<f64>> = (0..12).map(|_| vec![next()]).collect();
        let features: Vec<usize> = (0..12).map(|_| (next() * 6.0) as usize).collect();
        let grid = planted_grid(axes, images, features.clone());
        let field = field_of((0..12).map(|_| next()).collect());

        for _ in 0..50 {
            let delta = (next() * 7.0).floor();
            let resolved = Constraints::new(vec![DeltaSpec::Absolute(delta)])
                .unwrap()
                .resolve(&grid)
                .unwrap();
            let scan = (0..12usize)
                .filter(|i| features[*i] as f64 >= delta)
                .min_by(|a, b| field.values()[*a].total_cmp(&field.values()[*b]));
            match (optimize(&grid, &field, &resolved), scan) {
                (Ok(selection), Some(expected)) => {
                    assert_eq!(
                        field.values()[selection.flat_index],
                        field.values()[expected]
                    );
                }
                (Err(Error::Infeasible { .. }), None) => {}
                (got, expected) => panic!("mismatch: {got:?} vs {expected:?}"),
            }
        }
    }

    #[test]
    fn sweep_covers_the_cartesian_product_in_order() {
        let axes = vec![vec![0.0, 1.0], vec![0.0, 1.0]];
        let images = vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]];
        let grid = planted_grid(axes, images, vec![0, 1, 2, 4]);
        let field = field_of(vec![0.1, 0.2, 0.3, 0.4]);
        let lists = vec![default_sweep_fractions()
            .into_iter()
            .map(DeltaSpec::FractionOfMax)
            .collect::<Vec<_>>()];
        let outcomes = sweep(&grid, &field, &lists).unwrap();
        assert_eq!(outcomes.len(), 10);
        // Fractions ascend, so resolved deltas must ascend too.
        for pair in outcomes.windows(2) {
            assert!(pair[0].deltas[0] <= pair[1].deltas[0]);
        }

        // All-zero deltas repeat the unconstrained argmin.
        let zero = vec![vec![DeltaSpec::Absolute(0.0)]];
        let outcomes = sweep(&grid, &field, &zero).unwrap();
        assert_eq!(outcomes.len(), 1);
        assert_eq!(outcomes[0].selection.as_ref().unwrap().flat_index, 0);

        // Deltas beyond F are marked infeasible, not fatal.
        let over = vec![vec![DeltaSpec::Absolute(100.0)]];
        let outcomes = sweep(&grid, &field, &over).unwrap();
        assert!(outcomes[0].selection.is_none());
    }

    #[test]
    fn selections_under_growing_delta_never_lose_features() {
        let mut state = 0xabcdef99u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let axes = vec![vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 1.0, 2.0]];
        let images: Vec<Vec<f64>> = (0..12).map(|_| vec![next()]).collect();
        let features: Vec<usize> = (0..12).map(|_| (next() * 9.0) as usize).collect();
        let grid = planted_grid(axes, images, features);
        let field = field_of((0..12).map(|_| next()).collect());
        let lists = vec![default_sweep_fractions()
            .into_iter()
            .map(DeltaSpec::FractionOfMax)
            .collect::<Vec<_>>()];
        let outcomes = sweep(&grid, &field, &lists).unwrap();
        let mut last = 0usize;
        for outcome in outcomes {
            if let Some(selection) = outcome.selection {
                let f = grid.cell(selection.flat_index).feature_counts[0];
                assert!(f >= last, "feature count dropped along increasing delta");
                last = f;
            }
        }
    }
}
