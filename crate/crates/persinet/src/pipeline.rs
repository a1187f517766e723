//! End-to-end runs: load a corpus, populate the grid (optionally in
//! parallel), optimize, and write the artifact files.
//!
//! Grid cells are independent work units evaluated over read-only inputs;
//! results are merged in cell order, so the artifacts are byte-identical at
//! any parallelism degree.

use std::path::{Path, PathBuf};

use persinet_core::{
    assemble_grid, boundary_matrix, build_network, evaluate_cell, grid_points, laplacian_spectrum,
    optimize, persistence_image, reduce_and_pair, sweep, ConceptNetwork, Constraints, CorpusIndex,
    DeltaSpec, Filtration, GridCell, ParameterGrid, PipelineConfig, ResolvedConstraints, Selection,
    StabilityField, SweepOutcome, ThresholdPoint, VarianceField, VarianceKind,
};
use rayon::prelude::*;

use crate::config::{InputFormat, RunConfig, VarianceKindConfig};
use crate::error::{Error, Result};
use crate::formats;
use crate::synth;

/// Threshold point admitting every concept (used for "pre" spectra).
fn widest_point() -> ThresholdPoint {
    ThresholdPoint::lower_upper(1.0, f64::MAX).expect("static point")
}

/// Populates the grid with `jobs` worker threads (0 = one per core). The
/// result is identical to the sequential [`persinet_core::populate_grid`].
pub fn populate_grid_parallel(
    index: &CorpusIndex,
    axes: Vec<Vec<f64>>,
    year_range: (i32, i32),
    config: &PipelineConfig,
    jobs: usize,
) -> Result<ParameterGrid> {
    let points = grid_points(&axes)?;
    let results: Vec<std::result::Result<GridCell, persinet_core::Error>> = if jobs == 1 {
        points
            .iter()
            .map(|point| evaluate_cell(index, point, year_range, config))
            .collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
        pool.install(|| {
            points
                .par_iter()
                .map(|point| evaluate_cell(index, point, year_range, config))
                .collect()
        })
    };

    let dims: Vec<usize> = axes.iter().map(Vec::len).collect();
    let mut cells = Vec::with_capacity(results.len());
    for (flat, result) in results.into_iter().enumerate() {
        let cell = result.map_err(|e| {
            let mut rest = flat;
            let mut indices = vec![0usize; dims.len()];
            for d in (0..dims.len()).rev() {
                indices[d] = rest % dims[d];
                rest /= dims[d];
            }
            Error::Core(e.at_cell(indices))
        })?;
        cells.push(cell);
    }
    Ok(assemble_grid(axes, cells, config)?)
}

/// The corpus and evaluated grid shared by `select` and `sweep`.
pub struct PreparedRun {
    pub index: CorpusIndex,
    pub year_range: (i32, i32),
    pub grid: ParameterGrid,
    pub field: StabilityField,
}

fn load_index(config: &RunConfig) -> Result<CorpusIndex> {
    let input = config
        .input
        .as_ref()
        .ok_or_else(|| Error::Config("no input file configured".into()))?;
    if config.format != InputFormat::Records {
        return Err(Error::Config(
            "the selection pipeline needs records input; edge lists carry no \
             concept frequencies (use the spectrum subcommand instead)"
                .into(),
        ));
    }
    let raw = formats::read_records_csv(input)?;
    let records = persinet_core::normalize_records(raw)?;
    Ok(CorpusIndex::from_records(&records)?)
}

/// The declared year range must contain every record's year; Eq-style edge
/// weights are undefined outside it.
fn effective_year_range(config: &RunConfig, index: &CorpusIndex) -> Result<(i32, i32)> {
    let (data_min, data_max) = index.year_range();
    match config.year_range {
        Some((lo, hi)) => {
            if data_min < lo || data_max > hi {
                return Err(Error::Config(format!(
                    "corpus years span [{data_min}, {data_max}] but the declared range is \
                     [{lo}, {hi}]"
                )));
            }
            Ok((lo, hi))
        }
        None => Ok((data_min, data_max)),
    }
}

/// Loads the corpus and evaluates the whole grid and field.
pub fn prepare(config: &RunConfig) -> Result<PreparedRun> {
    let index = load_index(config)?;
    let year_range = effective_year_range(config, &index)?;
    let axes = config.axes.resolve(index.article_count())?;
    let grid = populate_grid_parallel(&index, axes, year_range, &config.pipeline(), config.jobs)?;
    let field = StabilityField::compute(&grid, config.p)?;
    Ok(PreparedRun {
        index,
        year_range,
        grid,
        field,
    })
}

fn variance_kind(config: &RunConfig) -> VarianceKind {
    // The cross-term estimator only exists for two homology dimensions; any
    // other k_max falls back to the p-norm form.
    match config.variance.kind {
        VarianceKindConfig::CrossTerm if config.k_max == 2 => VarianceKind::CrossTerm,
        VarianceKindConfig::CrossTerm => VarianceKind::PNorm,
        VarianceKindConfig::PNorm => VarianceKind::PNorm,
    }
}

/// Everything `select` computed, plus the paths it wrote.
pub struct SelectOutput {
    pub grid: ParameterGrid,
    pub field: StabilityField,
    pub variance: VarianceField,
    pub resolved: ResolvedConstraints,
    pub selection: Selection,
    pub report: formats::SelectionReport,
    pub written: Vec<PathBuf>,
}

fn ensure_out_dir(out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir).map_err(Error::io(out_dir))
}

fn selected_network(
    run: &PreparedRun,
    config: &RunConfig,
    selection: &Selection,
) -> Result<ConceptNetwork> {
    Ok(build_network(
        &run.index,
        &selection.point,
        run.year_range,
        config.pipeline().single_year,
    )?)
}

/// Runs the full selection pipeline and writes grid, variance, and report
/// artifacts (plus spectrum, network, and debug dumps when requested).
pub fn run_select(config: &RunConfig) -> Result<SelectOutput> {
    let run = prepare(config)?;
    let variance = VarianceField::compute(
        &run.grid,
        variance_kind(config),
        config.p,
        config.variance.alpha,
    )?;
    let constraints = Constraints::new(config.delta_specs())?;
    let resolved = constraints.resolve(&run.grid)?;
    let selection = optimize(&run.grid, &run.field, &resolved)?;

    let out_dir = &config.out_dir;
    ensure_out_dir(out_dir)?;
    let mut written = Vec::new();

    let heatmap = out_dir.join("heatmap.csv");
    formats::write_heatmap_csv(&heatmap, &run.grid, &run.field)?;
    written.push(heatmap);

    let variance_path = out_dir.join("variance.csv");
    formats::write_variance_csv(&variance_path, &run.grid, &variance)?;
    written.push(variance_path);

    let cell = run.grid.cell(selection.flat_index);
    let report = formats::SelectionReport {
        lower_axis: run.grid.axes()[0].clone(),
        upper_axis: run.grid.axes()[1].clone(),
        constraints: resolved
            .deltas
            .iter()
            .zip(&resolved.max_features)
            .enumerate()
            .map(|(at, (delta, max))| formats::ConstraintReport {
                k: at + 1,
                delta: *delta,
                max_features: *max,
            })
            .collect(),
        feasible_count: selection.feasible_count,
        selection: formats::SelectedCellReport {
            lower: selection.point.coords()[0],
            upper: selection.point.coords()[1],
            indices: selection.indices.clone(),
            field_value: selection.field_value,
            feature_counts: cell.feature_counts.clone(),
            nodes: cell.node_count,
            edges: cell.edge_count,
        },
    };
    let report_path = out_dir.join("selection.json");
    formats::write_selection_json(&report_path, &report)?;
    written.push(report_path);

    if config.spectrum {
        let pre = build_network(
            &run.index,
            &widest_point(),
            run.year_range,
            config.pipeline().single_year,
        )?;
        let post = selected_network(&run, config, &selection)?;
        let spectrum_path = out_dir.join("spectrum.csv");
        formats::write_spectrum_csv(
            &spectrum_path,
            &laplacian_spectrum(&pre, config.spectrum_count)?,
            &laplacian_spectrum(&post, config.spectrum_count)?,
        )?;
        written.push(spectrum_path);
    }

    if config.emit_network {
        let network = selected_network(&run, config, &selection)?;
        let network_path = out_dir.join("selected_network.csv");
        formats::write_network_edge_list(&network_path, &network)?;
        written.push(network_path);
    }

    if config.dump_selected {
        let pipeline = config.pipeline();
        let network = selected_network(&run, config, &selection)?;
        let filtration = Filtration::flag(&network, pipeline.k_max + 1)?;
        let matrix = boundary_matrix(&filtration)?;
        let diagrams = reduce_and_pair(&matrix, &filtration, pipeline.cap)?;

        let filtration_path = out_dir.join("selected_filtration.txt");
        formats::write_filtration_dump(&filtration_path, &filtration)?;
        written.push(filtration_path);

        let diagrams_path = out_dir.join("selected_diagrams.csv");
        formats::write_diagrams_csv(&diagrams_path, &diagrams)?;
        written.push(diagrams_path);

        for (k, diagram) in diagrams.iter().enumerate().skip(1).take(pipeline.k_max) {
            let image = persistence_image(diagram, &pipeline.image)?;
            let image_path = out_dir.join(format!("selected_image_dim{k}.csv"));
            formats::write_image_csv(&image_path, &image)?;
            written.push(image_path);
        }
        let sidecar_path = out_dir.join("image_config.json");
        formats::write_image_config_json(&sidecar_path, &pipeline.image)?;
        written.push(sidecar_path);
    }

    Ok(SelectOutput {
        grid: run.grid,
        field: run.field,
        variance,
        resolved,
        selection,
        report,
        written,
    })
}

/// Everything `sweep` computed, plus the file it wrote.
pub struct SweepOutput {
    pub grid: ParameterGrid,
    pub field: StabilityField,
    pub outcomes: Vec<SweepOutcome>,
    pub written: Vec<PathBuf>,
}

/// Runs the optimizer over the whole delta Cartesian product and writes the
/// path CSV.
pub fn run_sweep(config: &RunConfig) -> Result<SweepOutput> {
    let run = prepare(config)?;
    let lists: Vec<Vec<DeltaSpec>> = config
        .sweep_fractions()
        .into_iter()
        .map(|fractions| {
            fractions
                .into_iter()
                .map(DeltaSpec::FractionOfMax)
                .collect()
        })
        .collect();
    let outcomes = sweep(&run.grid, &run.field, &lists)?;

    ensure_out_dir(&config.out_dir)?;
    let path = config.out_dir.join("sweep.csv");
    formats::write_sweep_csv(&path, &outcomes)?;
    Ok(SweepOutput {
        grid: run.grid,
        field: run.field,
        outcomes,
        written: vec![path],
    })
}

/// Generates the synthetic corpus and writes it as records CSV.
pub fn run_synth(config: &RunConfig) -> Result<PathBuf> {
    let records = synth::generate(&config.synth, config.seed);
    ensure_out_dir(&config.out_dir)?;
    let path = config.out_dir.join("synthetic_corpus.csv");
    formats::write_records_csv(&path, &records)?;
    Ok(path)
}

/// Computes pre/post spectra and writes the comparison CSV.
///
/// With records input, `pre` is the unthresholded network and `post` the
/// network at `(lower, upper)`. With edge-list input the network is taken as
/// given and only `pre` rows are written.
pub fn run_spectrum(config: &RunConfig, bounds: Option<(f64, f64)>) -> Result<PathBuf> {
    ensure_out_dir(&config.out_dir)?;
    let path = config.out_dir.join("spectrum.csv");
    match config.format {
        InputFormat::Records => {
            let (lower, upper) = bounds.ok_or_else(|| {
                Error::Config("records input needs --lower and --upper thresholds".into())
            })?;
            let index = load_index(config)?;
            let year_range = effective_year_range(config, &index)?;
            let single_year = config.pipeline().single_year;
            let pre = build_network(&index, &widest_point(), year_range, single_year)?;
            let point = ThresholdPoint::lower_upper(lower, upper)?;
            let post = build_network(&index, &point, year_range, single_year)?;
            formats::write_spectrum_csv(
                &path,
                &laplacian_spectrum(&pre, config.spectrum_count)?,
                &laplacian_spectrum(&post, config.spectrum_count)?,
            )?;
        }
        InputFormat::EdgeList => {
            let input = config
                .input
                .as_ref()
                .ok_or_else(|| Error::Config("no input file configured".into()))?;
            let network = formats::read_edge_list_csv(input)?;
            let spectrum = laplacian_spectrum(&network, config.spectrum_count)?;
            formats::write_spectrum_pre_only(&path, &spectrum)?;
        }
    }
    Ok(path)
}
