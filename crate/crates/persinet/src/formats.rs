//! Readers and writers for every file the tool consumes or produces.
//!
//! All CSV files are RFC 4180 with a header row; floats are printed with
//! Rust's shortest round-trip formatting, so re-parsing an output file
//! reproduces the in-memory values exactly.

use std::path::Path;

use persinet_core::{
    ConceptNetwork, Filtration, ImageConfig, NetworkEdge, NetworkNode, ParameterGrid,
    PersistenceDiagram, PersistenceImage, RawRecord, Spectrum, StabilityField, SweepOutcome,
    VarianceField, Weighting,
};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn parse<T: std::str::FromStr>(path: &Path, line: u64, field: &str, raw: &str) -> Result<T> {
    raw.trim().parse().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        line,
        message: format!("cannot parse {field} from {raw:?}"),
    })
}

fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(Error::io(path))
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn finish(path: &Path, writer: csv::Writer<Vec<u8>>) -> Result<()> {
    let bytes = writer.into_inner().expect("in-memory csv writer");
    write_file(path, &bytes)
}

// ---------------------------------------------------------------------------
// Corpus records
// ---------------------------------------------------------------------------

/// Reads `article_id,year,concept[,frequency]` rows.
pub fn read_records_csv(path: &Path) -> Result<Vec<RawRecord>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: format!("{other:?}"),
        },
    })?;
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let column = |name: &str| headers.iter().position(|h| h.trim() == name);
    let (id_at, year_at, concept_at) =
        match (column("article_id"), column("year"), column("concept")) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: 1,
                    message: format!(
                        "header must name article_id, year and concept; got {headers:?}"
                    ),
                })
            }
        };
    let frequency_at = column("frequency");

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        })?;
        let line = line_of(&row);
        let take = |at: usize, field: &str| -> Result<&str> {
            row.get(at).ok_or_else(|| Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("missing {field} column"),
            })
        };
        let year: i32 = parse(path, line, "year", take(year_at, "year")?)?;
        let frequency = match frequency_at {
            Some(at) => Some(parse::<u64>(
                path,
                line,
                "frequency",
                take(at, "frequency")?,
            )?),
            None => None,
        };
        records.push(RawRecord {
            article_id: take(id_at, "article_id")?.to_string(),
            year,
            concept: take(concept_at, "concept")?.to_string(),
            frequency,
        });
    }
    if records.is_empty() {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: "no data rows".into(),
        });
    }
    Ok(records)
}

/// Writes records without a frequency column (frequencies are recomputed on
/// ingest).
pub fn write_records_csv(path: &Path, records: &[RawRecord]) -> Result<()> {
    let mut writer = csv_writer();
    writer
        .write_record(["article_id", "year", "concept"])
        .expect("header");
    for r in records {
        writer
            .write_record([
                r.article_id.as_str(),
                &r.year.to_string(),
                r.concept.as_str(),
            ])
            .expect("row");
    }
    finish(path, writer)
}

// ---------------------------------------------------------------------------
// Edge lists
// ---------------------------------------------------------------------------

/// Reads a pre-built network from `source,target,weight` rows. Node
/// frequencies are unknown in this format and recorded as 1.
pub fn read_edge_list_csv(path: &Path) -> Result<ConceptNetwork> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: format!("{other:?}"),
        },
    })?;
    let mut rows: Vec<(String, String, f64, u64)> = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        })?;
        let line = line_of(&row);
        if row.len() < 3 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: "expected source,target,weight".into(),
            });
        }
        let source = row[0].trim().to_lowercase();
        let target = row[1].trim().to_lowercase();
        let weight: f64 = parse(path, line, "weight", &row[2])?;
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("weight {weight} outside [0, 1]"),
            });
        }
        if source == target {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("self-loop on {source:?}"),
            });
        }
        rows.push((source, target, weight, line));
    }

    let mut labels: Vec<String> = rows
        .iter()
        .flat_map(|(s, t, _, _)| [s.clone(), t.clone()])
        .collect();
    labels.sort();
    labels.dedup();
    let index_of = |label: &str| labels.binary_search_by(|l| l.as_str().cmp(label)).unwrap();

    let nodes: Vec<NetworkNode> = labels
        .iter()
        .map(|concept| NetworkNode {
            concept: concept.clone(),
            frequency: 1,
        })
        .collect();
    let mut edges: Vec<NetworkEdge> = Vec::with_capacity(rows.len());
    let mut seen = std::collections::BTreeSet::new();
    for (source, target, weight, line) in rows {
        let (a, b) = (index_of(&source), index_of(&target));
        let key = (a.min(b), a.max(b));
        if !seen.insert(key) {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("duplicate edge {source:?} - {target:?}"),
            });
        }
        edges.push(NetworkEdge {
            source: key.0,
            target: key.1,
            weight,
        });
    }
    edges.sort_by_key(|e| (e.source, e.target));
    Ok(ConceptNetwork::new(nodes, edges, (0, 0))?)
}

/// Writes a network as a `source,target,weight` edge list (parsable by
/// [`read_edge_list_csv`]).
pub fn write_network_edge_list(path: &Path, network: &ConceptNetwork) -> Result<()> {
    let mut writer = csv_writer();
    writer
        .write_record(["source", "target", "weight"])
        .expect("header");
    for edge in network.edges() {
        writer
            .write_record([
                network.nodes()[edge.source].concept.as_str(),
                network.nodes()[edge.target].concept.as_str(),
                &format!("{}", edge.weight),
            ])
            .expect("row");
    }
    finish(path, writer)
}

// ---------------------------------------------------------------------------
// Grid heatmap and variance
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapRow {
    pub ell: f64,
    pub u: f64,
    pub grad_magnitude: f64,
    pub f1: usize,
    pub f2: usize,
    pub nodes: usize,
    pub edges: usize,
}

fn expect_two_axes(grid: &ParameterGrid) -> Result<()> {
    if grid.axes().len() != 2 {
        return Err(Error::Config(format!(
            "this writer expects a 2-axis grid, got {} axes",
            grid.axes().len()
        )));
    }
    Ok(())
}

/// One row per cell: `ell,u,grad_magnitude,f1,f2,nodes,edges`.
pub fn write_heatmap_csv(path: &Path, grid: &ParameterGrid, field: &StabilityField) -> Result<()> {
    expect_two_axes(grid)?;
    let mut writer = csv_writer();
    writer
        .write_record(["ell", "u", "grad_magnitude", "f1", "f2", "nodes", "edges"])
        .expect("header");
    for (flat, cell) in grid.cells().iter().enumerate() {
        let coords = cell.point.coords();
        let f1 = cell.feature_counts.first().copied().unwrap_or(0);
        let f2 = cell.feature_counts.get(1).copied().unwrap_or(0);
        writer
            .write_record([
                format!("{}", coords[0]),
                format!("{}", coords[1]),
                format!("{}", field.values()[flat]),
                f1.to_string(),
                f2.to_string(),
                cell.node_count.to_string(),
                cell.edge_count.to_string(),
            ])
            .expect("row");
    }
    finish(path, writer)
}

pub fn read_heatmap_csv(path: &Path) -> Result<Vec<HeatmapRow>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: format!("{other:?}"),
        },
    })?;
    let mut rows = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        })?;
        let line = line_of(&row);
        rows.push(HeatmapRow {
            ell: parse(path, line, "ell", &row[0])?,
            u: parse(path, line, "u", &row[1])?,
            grad_magnitude: parse(path, line, "grad_magnitude", &row[2])?,
            f1: parse(path, line, "f1", &row[3])?,
            f2: parse(path, line, "f2", &row[4])?,
            nodes: parse(path, line, "nodes", &row[5])?,
            edges: parse(path, line, "edges", &row[6])?,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarianceRow {
    pub ell: f64,
    pub u: f64,
    pub variance: f64,
}

/// One row per cell: `ell,u,variance`.
pub fn write_variance_csv(
    path: &Path,
    grid: &ParameterGrid,
    variance: &VarianceField,
) -> Result<()> {
    expect_two_axes(grid)?;
    let mut writer = csv_writer();
    writer
        .write_record(["ell", "u", "variance"])
        .expect("header");
    for (flat, cell) in grid.cells().iter().enumerate() {
        let coords = cell.point.coords();
        writer
            .write_record([
                format!("{}", coords[0]),
                format!("{}", coords[1]),
                format!("{}", variance.values()[flat]),
            ])
            .expect("row");
    }
    finish(path, writer)
}

pub fn read_variance_csv(path: &Path) -> Result<Vec<VarianceRow>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: format!("{other:?}"),
        },
    })?;
    let mut rows = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        })?;
        let line = line_of(&row);
        rows.push(VarianceRow {
            ell: parse(path, line, "ell", &row[0])?,
            u: parse(path, line, "u", &row[1])?,
            variance: parse(path, line, "variance", &row[2])?,
        });
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Sweep paths
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub delta1: f64,
    pub delta2: f64,
    /// `None` when the combination was infeasible.
    pub ell: Option<f64>,
    pub u: Option<f64>,
    pub feasible: bool,
}

/// One row per delta combination: `delta1,delta2,ell,u,feasible`; the
/// coordinate fields stay empty on infeasible rows.
pub fn write_sweep_csv(path: &Path, outcomes: &[SweepOutcome]) -> Result<()> {
    let mut writer = csv_writer();
    writer
        .write_record(["delta1", "delta2", "ell", "u", "feasible"])
        .expect("header");
    for outcome in outcomes {
        let delta = |k: usize| outcome.deltas.get(k).copied().unwrap_or(0.0);
        let (ell, u, feasible) = match &outcome.selection {
            Some(selection) => {
                let coords = selection.point.coords();
                (format!("{}", coords[0]), format!("{}", coords[1]), "true")
            }
            None => (String::new(), String::new(), "false"),
        };
        writer
            .write_record([
                format!("{}", delta(0)),
                format!("{}", delta(1)),
                ell,
                u,
                feasible.to_string(),
            ])
            .expect("row");
    }
    finish(path, writer)
}

pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: format!("{other:?}"),
        },
    })?;
    let mut rows = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        })?;
        let line = line_of(&row);
        let optional = |at: usize, field: &str| -> Result<Option<f64>> {
            let raw = row[at].trim();
            if raw.is_empty() {
                Ok(None)
            } else {
                parse(path, line, field, raw).map(Some)
            }
        };
        rows.push(SweepRow {
            delta1: parse(path, line, "delta1", &row[0])?,
            delta2: parse(path, line, "delta2", &row[1])?,
            ell: optional(2, "ell")?,
            u: optional(3, "u")?,
            feasible: parse(path, line, "feasible", &row[4])?,
        });
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Spectra
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub rank: usize,
    pub eigenvalue: f64,
    pub label: String,
}

/// `rank,eigenvalue,label` rows, ranking the largest eigenvalues first, for
/// the unpruned (`pre`) and pruned (`post`) networks.
pub fn write_spectrum_csv(path: &Path, pre: &Spectrum, post: &Spectrum) -> Result<()> {
    let mut writer = csv_writer();
    writer
        .write_record(["rank", "eigenvalue", "label"])
        .expect("header");
    for (label, spectrum) in [("pre", pre), ("post", post)] {
        for (at, eigenvalue) in spectrum.largest().enumerate() {
            writer
                .write_record([
                    (at + 1).to_string(),
                    format!("{eigenvalue}"),
                    label.to_string(),
                ])
                .expect("row");
        }
    }
    finish(path, writer)
}

/// Like [`write_spectrum_csv`] but for a single network (all rows `pre`).
pub fn write_spectrum_pre_only(path: &Path, spectrum: &Spectrum) -> Result<()> {
    let mut writer = csv_writer();
    writer
        .write_record(["rank", "eigenvalue", "label"])
        .expect("header");
    for (at, eigenvalue) in spectrum.largest().enumerate() {
        writer
            .write_record([
                (at + 1).to_string(),
                format!("{eigenvalue}"),
                "pre".to_string(),
            ])
            .expect("row");
    }
    finish(path, writer)
}

pub fn read_spectrum_csv(path: &Path) -> Result<Vec<SpectrumRow>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: format!("{other:?}"),
        },
    })?;
    let mut rows = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        })?;
        let line = line_of(&row);
        rows.push(SpectrumRow {
            rank: parse(path, line, "rank", &row[0])?,
            eigenvalue: parse(path, line, "eigenvalue", &row[1])?,
            label: row[2].to_string(),
        });
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Diagrams, images, filtrations
// ---------------------------------------------------------------------------

/// `dim,birth,death,essential` rows, one per interval.
pub fn write_diagrams_csv(path: &Path, diagrams: &[PersistenceDiagram]) -> Result<()> {
    let mut writer = csv_writer();
    writer
        .write_record(["dim", "birth", "death", "essential"])
        .expect("header");
    for diagram in diagrams {
        for pair in &diagram.pairs {
            writer
                .write_record([
                    diagram.dim.to_string(),
                    format!("{}", pair.birth),
                    format!("{}", pair.death),
                    pair.essential.to_string(),
                ])
                .expect("row");
        }
    }
    finish(path, writer)
}

/// The pixel matrix of one image, one CSV row per pixel row.
pub fn write_image_csv(path: &Path, image: &PersistenceImage) -> Result<()> {
    let mut writer = csv_writer();
    for row in image.values.chunks(image.config.cols) {
        let fields: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        writer.write_record(&fields).expect("row");
    }
    // No header: this file is a plain matrix.
    let mut bytes = writer.into_inner().expect("in-memory csv writer");
    if bytes.is_empty() {
        bytes = b"\n".to_vec();
    }
    write_file(path, &bytes)
}

/// JSON sidecar describing the configuration an image matrix was built with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageConfigSidecar {
    pub rows: usize,
    pub cols: usize,
    pub sigma: f64,
    pub weighting: String,
    pub birth_range: (f64, f64),
    pub persistence_range: (f64, f64),
    pub p_norm: f64,
}

impl From<&ImageConfig> for ImageConfigSidecar {
    fn from(config: &ImageConfig) -> Self {
        Self {
            rows: config.rows,
            cols: config.cols,
            sigma: config.sigma,
            weighting: match config.weighting {
                Weighting::LinearPersistence => "linear_persistence".to_string(),
            },
            birth_range: config.birth_range,
            persistence_range: config.persistence_range,
            p_norm: config.p_norm,
        }
    }
}

pub fn write_image_config_json(path: &Path, config: &ImageConfig) -> Result<()> {
    let sidecar = ImageConfigSidecar::from(config);
    let mut text = serde_json::to_string_pretty(&sidecar).expect("serializable sidecar");
    text.push('\n');
    write_file(path, text.as_bytes())
}

/// One simplex per line in filtration order: `value dim v0 v1 ...`.
pub fn write_filtration_dump(path: &Path, filtration: &Filtration) -> Result<()> {
    let mut text = String::new();
    for s in filtration.simplices() {
        text.push_str(&format!("{} {}", s.value(), s.dim()));
        for v in s.vertices() {
            text.push_str(&format!(" {v}"));
        }
        text.push('\n');
    }
    write_file(path, text.as_bytes())
}

// ---------------------------------------------------------------------------
// Selection report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    /// Homology dimension of this constraint.
    pub k: usize,
    /// Resolved minimum feature count.
    pub delta: f64,
    /// Grid-wide maximum feature count in this dimension (`F_k`).
    pub max_features: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectedCellReport {
    pub lower: f64,
    pub upper: f64,
    /// Axis indices of the selected cell.
    pub indices: Vec<usize>,
    pub field_value: f64,
    pub feature_counts: Vec<usize>,
    pub nodes: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub lower_axis: Vec<f64>,
    pub upper_axis: Vec<f64>,
    pub constraints: Vec<ConstraintReport>,
    pub feasible_count: usize,
    pub selection: SelectedCellReport,
}

pub fn write_selection_json(path: &Path, report: &SelectionReport) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report).expect("serializable report");
    text.push('\n');
    write_file(path, text.as_bytes())
}

pub fn read_selection_json(path: &Path) -> Result<SelectionReport> {
    let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line() as u64,
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use persinet_core::PersistencePair;
    use std::io::Write;

    fn temp_dir() -> tempfile::TempDir {
        tempfile::tempdir().unwrap()
    }

    #[test]
    fn records_round_trip_and_dedup_happen_downstream() {
        let dir = temp_dir();
        let path = dir.path().join("records.csv");
        let records = vec![
            RawRecord {
                article_id: "p1".into(),
                year: 2000,
                concept: "graph theory".into(),
                frequency: None,
            },
            RawRecord {
                article_id: "p2, the sequel".into(),
                year: 2001,
                concept: "topology".into(),
                frequency: None,
            },
        ];
        write_records_csv(&path, &records).unwrap();
        let back = read_records_csv(&path).unwrap();
        assert_eq!(back, records);
    }

    #[test]
    fn malformed_year_is_reported_with_its_line() {
        let dir = temp_dir();
        let path = dir.path().join("bad.csv");
        let mut file = std::fs::File::create(&path).unwrap();
        writeln!(file, "article_id,year,concept").unwrap();
        writeln!(file, "p1,2000,alpha").unwrap();
        writeln!(file, "p2,20x1,beta").unwrap();
        drop(file);
        match read_records_csv(&path) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("year"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn records_with_frequency_column() {
        let dir = temp_dir();
        let path = dir.path().join("freq.csv");
        let mut file = std::fs::File::create(&path).unwrap();
        writeln!(file, "article_id,year,concept,frequency").unwrap();
        writeln!(file, "p1,2000,alpha,17").unwrap();
        drop(file);
        let records = read_records_csv(&path).unwrap();
        assert_eq!(records[0].frequency, Some(17));
    }

    #[test]
    fn edge_list_round_trip() {
        let dir = temp_dir();
        let path = dir.path().join("edges.csv");
        let mut file = std::fs::File::create(&path).unwrap();
        writeln!(file, "source,target,weight").unwrap();
        writeln!(file, "beta,alpha,0.25").unwrap();
        writeln!(file, "beta,gamma,1").unwrap();
        drop(file);
        let network = read_edge_list_csv(&path).unwrap();
        assert_eq!(network.node_count(), 3);
        let out = dir.path().join("out.csv");
        write_network_edge_list(&out, &network).unwrap();
        let again = read_edge_list_csv(&out).unwrap();
        assert_eq!(again, network);
    }

    #[test]
    fn edge_list_rejects_bad_weight_and_self_loop() {
        let dir = temp_dir();
        let path = dir.path().join("edges.csv");
        std::fs::write(&path, "source,target,weight\na,b,1.5\n").unwrap();
        assert!(matches!(
            read_edge_list_csv(&path),
            Err(Error::Parse { line: 2, .. })
        ));
        std::fs::write(&path, "source,target,weight\na,a,0.5\n").unwrap();
        assert!(matches!(
            read_edge_list_csv(&path),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn diagrams_csv_lists_every_interval() {
        let dir = temp_dir();
        let path = dir.path().join("diagrams.csv");
        let diagrams = vec![PersistenceDiagram {
            dim: 1,
            pairs: vec![
                PersistencePair {
                    birth: 0.5,
                    death: 1.0,
                    essential: true,
                },
                PersistencePair {
                    birth: 0.25,
                    death: 0.75,
                    essential: false,
                },
            ],
            essential_count: 1,
        }];
        write_diagrams_csv(&path, &diagrams).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.contains("1,0.5,1,true"));
        assert!(text.contains("1,0.25,0.75,false"));
    }

    #[test]
    fn selection_report_round_trips() {
        let dir = temp_dir();
        let path = dir.path().join("selection.json");
        let report = SelectionReport {
            lower_axis: vec![1.0, 2.0],
            upper_axis: vec![10.0, 20.0],
            constraints: vec![ConstraintReport {
                k: 1,
                delta: 0.5,
                max_features: 4,
            }],
            feasible_count: 3,
            selection: SelectedCellReport {
                lower: 2.0,
                upper: 10.0,
                indices: vec![1, 0],
                field_value: 0.125,
                feature_counts: vec![2, 1],
                nodes: 40,
                edges: 17,
            },
        };
        write_selection_json(&path, &report).unwrap();
        assert_eq!(read_selection_json(&path).unwrap(), report);
    }
}
