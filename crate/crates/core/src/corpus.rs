//! Concept corpora and the weighted networks thresholded out of them.
//!
//! A corpus is a flat list of (article, year, concept) observations. Each
//! concept `v` carries a corpus frequency `tau(v)`; a threshold point
//! `(lower, upper)` keeps exactly the concepts with `lower <= tau(v) <= upper`
//! (after taking the ceiling of the lower bound and the floor of the upper
//! bound, so fractional bounds behave predictably). Two surviving concepts are
//! joined by an edge when they co-appear in at least one article, and the edge
//! weight encodes the relative timing of the *first* co-appearance:
//!
//! ```text
//! w = (year_first - y_min) / (y_max - y_min)      in [0, 1]
//! ```
//!
//! Everything here is a pure function of its inputs; building networks for
//! different threshold points in parallel is safe.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// One observation as it appears in raw input: the frequency column is
/// optional and will be recomputed when absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRecord {
    pub article_id: String,
    pub year: i32,
    pub concept: String,
    pub frequency: Option<u64>,
}

/// A normalized (article, year, concept, frequency) observation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusRecord {
    pub article_id: String,
    pub year: i32,
    /// Lowercased and whitespace-trimmed concept label.
    pub concept: String,
    /// Number of articles in the corpus containing this concept.
    pub frequency: u64,
}

/// A point in the threshold parameter space.
///
/// The canonical two-dimensional case is `(lower, upper)` frequency bounds;
/// higher-dimensional points are accepted so grids over other parameter
/// domains can reuse the stability machinery.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdPoint {
    coords: Vec<f64>,
}

impl ThresholdPoint {
    /// A general point; every coordinate must be finite.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidThreshold {
                reason: "no coordinates".into(),
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidThreshold {
                reason: "non-finite coordinate".into(),
            });
        }
        Ok(Self { coords })
    }

    /// The canonical `(lower, upper)` frequency-bound point.
    pub fn lower_upper(lower: f64, upper: f64) -> Result<Self> {
        if lower > upper {
            return Err(Error::InvalidThreshold {
                reason: alloc::format!("lower bound {lower} exceeds upper bound {upper}"),
            });
        }
        Self::new(alloc::vec![lower, upper])
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Interprets the point as `(lower, upper)` bounds; errors for other
    /// dimensionalities.
    pub fn as_bounds(&self) -> Result<(f64, f64)> {
        match self.coords.as_slice() {
            [lower, upper] => Ok((*lower, *upper)),
            other => Err(Error::InvalidThreshold {
                reason: alloc::format!(
                    "frequency thresholding needs a (lower, upper) pair, got {} coordinates",
                    other.len()
                ),
            }),
        }
    }
}

/// A node of a thresholded network: concept label plus corpus frequency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkNode {
    pub concept: String,
    pub frequency: u64,
}

/// An undirected weighted edge between two node indices, `source < target`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkEdge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

/// A thresholded, time-weighted concept network.
///
/// Nodes are sorted lexicographically by concept, so node indices order the
/// same way as labels; edges are sorted by `(source, target)`. Identical
/// inputs always produce identical networks.
#[derive(Debug, Clone, PartialEq)]
pub struct ConceptNetwork {
    nodes: Vec<NetworkNode>,
    edges: Vec<NetworkEdge>,
    year_range: (i32, i32),
}

impl ConceptNetwork {
    /// Assembles a network from parts, validating the structural invariants.
    pub fn new(
        nodes: Vec<NetworkNode>,
        edges: Vec<NetworkEdge>,
        year_range: (i32, i32),
    ) -> Result<Self> {
        for pair in nodes.windows(2) {
            if pair[0].concept >= pair[1].concept {
                return Err(Error::InvalidNetwork {
                    reason: "nodes must be strictly sorted by concept".into(),
                });
            }
        }
        for edge in &edges {
            if edge.source >= edge.target || edge.target >= nodes.len() {
                return Err(Error::InvalidNetwork {
                    reason: "edge endpoints must satisfy source < target < node count".into(),
                });
            }
            if !(0.0..=1.0).contains(&edge.weight) {
                return Err(Error::InvalidNetwork {
                    reason: alloc::format!("edge weight {} outside [0, 1]", edge.weight),
                });
            }
        }
        Ok(Self {
            nodes,
            edges,
            year_range,
        })
    }

    pub fn nodes(&self) -> &[NetworkNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[NetworkEdge] {
        &self.edges
    }

    pub fn year_range(&self) -> (i32, i32) {
        self.year_range
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// What to do when the corpus spans a single year and Eq-style weights are
/// undefined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingleYearPolicy {
    /// Fail loudly (the default; a degenerate filtration is rarely intended).
    Error,
    /// Assign weight 0 to every edge.
    ZeroWeights,
}

/// Normalizes raw records: lowercases and trims concepts, drops duplicate
/// `(article, concept)` pairs (keeping the first occurrence), and fills in
/// frequencies.
///
/// If any record lacks a frequency, frequencies for *all* records are
/// recomputed as the number of distinct articles containing the concept;
/// otherwise the provided values are kept.
pub fn normalize_records(raw: Vec<RawRecord>) -> Result<Vec<CorpusRecord>> {
    if raw.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let recompute = raw.iter().any(|r| r.frequency.is_none());

    let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
    let mut records: Vec<CorpusRecord> = Vec::with_capacity(raw.len());
    for r in raw {
        let concept: String = r.concept.trim().to_lowercase();
        let key = (r.article_id.clone(), concept.clone());
        if !seen.insert(key) {
            continue;
        }
        let frequency = r.frequency.unwrap_or(0);
        if !recompute && frequency == 0 {
            return Err(Error::InvalidFrequency { concept });
        }
        records.push(CorpusRecord {
            article_id: r.article_id,
            year: r.year,
            concept,
            frequency,
        });
    }

    if recompute {
        let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
        for r in &records {
            *counts.entry(r.concept.as_str()).or_insert(0) += 1;
        }
        let counts: BTreeMap<String, u64> = counts
            .into_iter()
            .map(|(k, v)| (String::from(k), v))
            .collect();
        for r in &mut records {
            r.frequency = counts[&r.concept];
        }
    }
    Ok(records)
}

/// Relative timing of a publication year within the corpus range.
///
/// Maps `y_min` to 0, `y_max` to 1, and is affine in between. A degenerate
/// range is an error; see [`SingleYearPolicy`] for the caller-side override.
pub fn edge_weight(y_publication: i32, y_min: i32, y_max: i32) -> Result<f64> {
    if y_min == y_max {
        return Err(Error::DegenerateYearRange { y_min, y_max });
    }
    if y_publication < y_min || y_publication > y_max {
        return Err(Error::YearOutOfRange {
            year: y_publication,
            y_min,
            y_max,
        });
    }
    Ok(f64::from(y_publication - y_min) / f64::from(y_max - y_min))
}

/// A corpus reorganized for repeated network construction: interned concepts
/// with their frequencies, plus per-article concept lists.
///
/// Build it once, then call [`build_network`] for as many threshold points as
/// needed.
#[derive(Debug, Clone)]
pub struct CorpusIndex {
    /// Sorted by concept label; index is the global concept id.
    concepts: Vec<(String, u64)>,
    /// One entry per distinct article: (year, sorted concept ids).
    articles: Vec<(i32, Vec<usize>)>,
}

impl CorpusIndex {
    pub fn from_records(records: &[CorpusRecord]) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut freq_by_concept: BTreeMap<&str, u64> = BTreeMap::new();
        for r in records {
            if r.frequency == 0 {
                return Err(Error::InvalidFrequency {
                    concept: r.concept.clone(),
                });
            }
            freq_by_concept.insert(r.concept.as_str(), r.frequency);
        }
        // Concept ids follow the sorted label order.
        let concept_ids: BTreeMap<&str, usize> = freq_by_concept
            .keys()
            .enumerate()
            .map(|(i, name)| (*name, i))
            .collect();
        let concepts: Vec<(String, u64)> = freq_by_concept
            .iter()
            .map(|(name, tau)| (String::from(*name), *tau))
            .collect();

        // Group records by article, keeping the year of the first record seen.
        let mut articles: BTreeMap<&str, (i32, Vec<usize>)> = BTreeMap::new();
        for r in records {
            let entry = articles
                .entry(r.article_id.as_str())
                .or_insert((r.year, Vec::new()));
            let id = concept_ids[r.concept.as_str()];
            if !entry.1.contains(&id) {
                entry.1.push(id);
            }
        }
        let articles = articles
            .into_values()
            .map(|(year, mut ids)| {
                ids.sort_unstable();
                (year, ids)
            })
            .collect();
        Ok(Self { concepts, articles })
    }

    /// `(min, max)` publication year over all articles.
    pub fn year_range(&self) -> (i32, i32) {
        let mut y_min = i32::MAX;
        let mut y_max = i32::MIN;
        for (year, _) in &self.articles {
            y_min = y_min.min(*year);
            y_max = y_max.max(*year);
        }
        (y_min, y_max)
    }

    pub fn concept_count(&self) -> usize {
        self.concepts.len()
    }

    pub fn article_count(&self) -> usize {
        self.articles.len()
    }

    /// Concept labels with frequencies, sorted by label.
    pub fn concepts(&self) -> &[(String, u64)] {
        &self.concepts
    }
}

/// Builds the thresholded network for one threshold point.
///
/// Keeps the concepts with `ceil(lower) <= tau(v) <= floor(upper)`, joins two
/// survivors when they co-appear in an article (all pairs of an article's
/// concepts co-appear), and weights each edge by the earliest co-appearance
/// year. An empty filtered node set yields an empty network, not an error.
pub fn build_network(
    index: &CorpusIndex,
    point: &ThresholdPoint,
    year_range: (i32, i32),
    single_year: SingleYearPolicy,
) -> Result<ConceptNetwork> {
    let (lower, upper) = point.as_bounds()?;
    let lower = libm::ceil(lower);
    let upper = libm::floor(upper);
    let (y_min, y_max) = year_range;
    if y_min > y_max {
        return Err(Error::InvalidThreshold {
            reason: alloc::format!("year range ({y_min}, {y_max}) is reversed"),
        });
    }

    // Old concept id -> new node index, for survivors only. Concept ids are
    // sorted by label, so the dense renumbering stays lexicographic.
    let mut node_of: Vec<Option<usize>> = alloc::vec![None; index.concepts.len()];
    let mut nodes: Vec<NetworkNode> = Vec::new();
    for (id, (concept, tau)) in index.concepts.iter().enumerate() {
        let tau_f = *tau as f64;
        if tau_f >= lower && tau_f <= upper {
            node_of[id] = Some(nodes.len());
            nodes.push(NetworkNode {
                concept: concept.clone(),
                frequency: *tau,
            });
        }
    }

    // Earliest co-appearance year per surviving pair.
    let mut first_year: BTreeMap<(usize, usize), i32> = BTreeMap::new();
    for (year, concept_ids) in &index.articles {
        let members: Vec<usize> = concept_ids.iter().filter_map(|id| node_of[*id]).collect();
        if members.len() < 2 {
            continue;
        }
        if *year < y_min || *year > y_max {
            return Err(Error::YearOutOfRange {
                year: *year,
                y_min,
                y_max,
            });
        }
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                let key = (members[i], members[j]);
                match first_year.get_mut(&key) {
                    Some(existing) => *existing = (*existing).min(*year),
                    None => {
                        first_year.insert(key, *year);
                    }
                }
            }
        }
    }

    let mut edges: Vec<NetworkEdge> = Vec::with_capacity(first_year.len());
    for ((source, target), year) in first_year {
        let weight = if y_min == y_max {
            match single_year {
                SingleYearPolicy::ZeroWeights => 0.0,
                SingleYearPolicy::Error => return Err(Error::DegenerateYearRange { y_min, y_max }),
            }
        } else {
            edge_weight(year, y_min, y_max)?
        };
        edges.push(NetworkEdge {
            source,
            target,
            weight,
        });
    }

    ConceptNetwork::new(nodes, edges, year_range)
}

/// Convenience wrapper: index the records and build a single network.
pub fn build_network_from_records(
    records: &[CorpusRecord],
    point: &ThresholdPoint,
    year_range: (i32, i32),
    single_year: SingleYearPolicy,
) -> Result<ConceptNetwork> {
    let index = CorpusIndex::from_records(records)?;
    build_network(&index, point, year_range, single_year)
}
