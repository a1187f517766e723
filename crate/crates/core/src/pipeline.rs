//! End-to-end evaluation of grid cells: records → network → flag filtration →
//! persistence → images → concatenated vector.
//!
//! [`populate_grid`] walks the whole lattice sequentially. Cells are
//! independent, so callers wanting parallelism can instead map
//! [`evaluate_cell`] over [`grid_points`] themselves and hand the results to
//! [`assemble_grid`]; the output is identical either way.

use alloc::vec::Vec;

use crate::complex::Filtration;
use crate::corpus::{build_network, CorpusIndex, SingleYearPolicy, ThresholdPoint};
use crate::error::{Error, Result};
use crate::homology::{boundary_matrix, feature_counts, reduce_and_pair};
use crate::image::{concat_images, persistence_image, ImageConfig};
use crate::stability::{GridCell, ParameterGrid};

/// Everything needed to turn one threshold point into a grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Largest homology dimension carried through the pipeline.
    pub k_max: usize,
    /// Death value assigned to essential classes.
    pub cap: f64,
    pub image: ImageConfig,
    /// Norm order shared by image distances and the field's outer norm.
    pub p: f64,
    pub single_year: SingleYearPolicy,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            k_max: 2,
            cap: 1.0,
            image: ImageConfig::default(),
            p: 2.0,
            single_year: SingleYearPolicy::Error,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_max == 0 {
            return Err(Error::InvalidMaxDim { max_dim: 0 });
        }
        if !self.cap.is_finite() || self.cap <= 0.0 {
            return Err(Error::InvalidCap { cap: self.cap });
        }
        if self.p < 1.0 || !self.p.is_finite() {
            return Err(Error::InvalidNorm { p: self.p });
        }
        self.image.validate()
    }
}

/// Runs the full per-cell pipeline at one threshold point.
pub fn evaluate_cell(
    index: &CorpusIndex,
    point: &ThresholdPoint,
    year_range: (i32, i32),
    config: &PipelineConfig,
) -> Result<GridCell> {
    config.validate()?;
    let network = build_network(index, point, year_range, config.single_year)?;
    let filtration = Filtration::flag(&network, config.k_max + 1)?;
    let matrix = boundary_matrix(&filtration)?;
    let diagrams = reduce_and_pair(&matrix, &filtration, config.cap)?;

    let images = (1..=config.k_max)
        .map(|k| persistence_image(&diagrams[k], &config.image))
        .collect::<Result<Vec<_>>>()?;
    let image = concat_images(&images)?;

    let counts = feature_counts(&diagrams);
    let mut per_dim = alloc::vec![0usize; config.k_max];
    for k in 1..=config.k_max {
        if let Some(count) = counts.get(k) {
            per_dim[k - 1] = *count;
        }
    }

    Ok(GridCell {
        point: point.clone(),
        image,
        feature_counts: per_dim,
        node_count: network.node_count(),
        edge_count: network.edge_count(),
    })
}

/// The row-major list of threshold points spanned by the axes (last axis
/// fastest), matching grid cell order.
pub fn grid_points(axes: &[Vec<f64>]) -> Result<Vec<ThresholdPoint>> {
    if axes.is_empty() || axes.iter().any(Vec::is_empty) {
        return Err(Error::InvalidAxes {
            reason: "axes must be non-empty".into(),
        });
    }
    let total: usize = axes.iter().map(Vec::len).product();
    let mut points = Vec::with_capacity(total);
    let mut odometer = alloc::vec![0usize; axes.len()];
    loop {
        let coords: Vec<f64> = odometer
            .iter()
            .enumerate()
            .map(|(d, at)| axes[d][*at])
            .collect();
        points.push(ThresholdPoint::new(coords)?);
        let mut d = axes.len();
        loop {
            if d == 0 {
                return Ok(points);
            }
            d -= 1;
            odometer[d] += 1;
            if odometer[d] < axes[d].len() {
                break;
            }
            odometer[d] = 0;
        }
    }
}

/// Wraps pre-evaluated cells (in `grid_points` order) into a grid.
pub fn assemble_grid(
    axes: Vec<Vec<f64>>,
    cells: Vec<GridCell>,
    config: &PipelineConfig,
) -> Result<ParameterGrid> {
    ParameterGrid::new(axes, cells, config.k_max, config.image.pixel_count())
}

/// Evaluates every cell of the lattice sequentially.
///
/// Per-cell failures come back tagged with the failing cell's axis indices.
pub fn populate_grid(
    index: &CorpusIndex,
    axes: Vec<Vec<f64>>,
    year_range: (i32, i32),
    config: &PipelineConfig,
) -> Result<ParameterGrid> {
    let points = grid_points(&axes)?;
    let dims: Vec<usize> = axes.iter().map(Vec::len).collect();
    let mut cells = Vec::with_capacity(points.len());
    for (flat, point) in points.iter().enumerate() {
        let cell = evaluate_cell(index, point, year_range, config).map_err(|e| {
            let mut rest = flat;
            let mut indices = alloc::vec![0usize; dims.len()];
            for d in (0..dims.len()).rev() {
                indices[d] = rest % dims[d];
                rest /= dims[d];
            }
            e.at_cell(indices)
        })?;
        cells.push(cell);
    }
    assemble_grid(axes, cells, config)
}
