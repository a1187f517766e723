//! Deterministic synthetic corpora with planted topological structure.
//!
//! The generator produces a concept-frequency profile with a heavy head of
//! rare terms and a thin tail of frequent ones, then plants co-appearance
//! structures whose homology is known by construction:
//!
//! * a 4-cycle of concepts contributes one dimension-1 feature,
//! * a hollow octahedron (all pairs among six concepts except three
//!   "antipodal" ones) contributes one dimension-2 feature.
//!
//! Structure members co-appear only inside their own structure's edge
//! articles — frequencies are padded with single-concept articles — so the
//! feature counts of any thresholded network can be read off from which
//! frequency bands the thresholds admit. Structures live in two bands (a
//! mid-frequency band and a high-frequency band), which makes wide threshold
//! windows strictly richer than narrow ones.

use persinet_core::RawRecord;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Knobs of the generator. The defaults produce a corpus whose default-axes
/// grid has a large constant region (stable plateau), an empty corner, and a
/// feature-rich fringe admitted only by the widest windows.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthProfile {
    pub year_range: (i32, i32),
    /// Isolated concepts appearing exactly 1, 2, and 3 times.
    pub rare_counts: (usize, usize, usize),
    /// Isolated concepts with frequencies inside `band_tau`.
    pub band_concepts: usize,
    pub band_tau: (u64, u64),
    /// Isolated concepts with frequencies inside `tail_tau`.
    pub tail_concepts: usize,
    pub tail_tau: (u64, u64),
    /// Isolated concepts with frequencies inside `hub_tau`.
    pub hub_concepts: usize,
    pub hub_tau: (u64, u64),
    /// Planted structures with member frequencies inside `band_tau`.
    pub band_cycles: usize,
    pub band_octahedra: usize,
    /// Planted structures with member frequencies inside `hub_tau`.
    pub hub_cycles: usize,
    pub hub_octahedra: usize,
}

impl Default for SynthProfile {
    fn default() -> Self {
        Self {
            year_range: (1950, 2020),
            rare_counts: (300, 120, 50),
            band_concepts: 30,
            band_tau: (10, 25),
            tail_concepts: 18,
            tail_tau: (30, 60),
            hub_concepts: 2,
            hub_tau: (110, 140),
            band_cycles: 4,
            band_octahedra: 2,
            hub_cycles: 1,
            hub_octahedra: 1,
        }
    }
}

struct Builder {
    rng: ChaCha8Rng,
    year_range: (i32, i32),
    articles: Vec<(i32, Vec<String>)>,
}

impl Builder {
    /// Years eligible for structure edges: strictly inside the corpus range,
    /// so no planted feature is born at weight 0 or at the cap.
    fn structure_year(&mut self) -> i32 {
        let (lo, hi) = self.year_range;
        self.rng.random_range((lo + 5)..=(hi - 5))
    }

    fn any_year(&mut self) -> i32 {
        let (lo, hi) = self.year_range;
        self.rng.random_range(lo..=hi)
    }

    fn singleton(&mut self, concept: &str, year: i32) {
        self.articles.push((year, vec![concept.to_string()]));
    }

    fn edge(&mut self, a: &str, b: &str, year: i32) {
        self.articles
            .push((year, vec![a.to_string(), b.to_string()]));
    }

    /// Pads `concept` with singletons until it appears `target` times in
    /// total, given it already appears `current` times.
    fn pad_to(&mut self, concept: &str, current: u64, target: u64) {
        for _ in current..target {
            let year = self.any_year();
            self.singleton(concept, year);
        }
    }

    /// A 4-cycle: one dimension-1 feature wherever all members are admitted.
    fn plant_cycle(&mut self, prefix: &str, tau: (u64, u64)) {
        let members: Vec<String> = (0..4).map(|i| format!("{prefix}-n{i}")).collect();
        let year = self.structure_year();
        for i in 0..4 {
            self.edge(&members[i], &members[(i + 1) % 4], year);
        }
        for member in &members {
            let target = self.rng.random_range(tau.0..=tau.1);
            self.pad_to(member, 2, target);
        }
    }

    /// A hollow octahedron: one dimension-2 feature wherever all members are
    /// admitted. Pairs (0,1), (2,3), (4,5) stay disconnected so the flag
    /// complex fills the eight faces but not the interior.
    fn plant_octahedron(&mut self, prefix: &str, tau: (u64, u64)) {
        let members: Vec<String> = (0..6).map(|i| format!("{prefix}-n{i}")).collect();
        let year = self.structure_year();
        for a in 0..6 {
            for b in (a + 1)..6 {
                if (a, b) == (0, 1) || (a, b) == (2, 3) || (a, b) == (4, 5) {
                    continue;
                }
                self.edge(&members[a], &members[b], year);
            }
        }
        for member in &members {
            let target = self.rng.random_range(tau.0.max(4)..=tau.1);
            self.pad_to(member, 4, target);
        }
    }

    fn background(&mut self, prefix: &str, count: usize, tau: (u64, u64)) {
        for i in 0..count {
            let concept = format!("{prefix}-{i:04}");
            let target = self.rng.random_range(tau.0..=tau.1);
            self.pad_to(&concept, 0, target);
        }
    }
}

/// Generates the corpus rows. The same profile and seed always produce the
/// same rows in the same order.
pub fn generate(profile: &SynthProfile, seed: u64) -> Vec<RawRecord> {
    let mut builder = Builder {
        rng: ChaCha8Rng::seed_from_u64(seed),
        year_range: profile.year_range,
        articles: Vec::new(),
    };

    // Anchor the inferred year range at both ends.
    builder.singleton("epoch-start", profile.year_range.0);
    builder.singleton("epoch-end", profile.year_range.1);

    for i in 0..profile.band_cycles {
        builder.plant_cycle(&format!("cycle-band-{i}"), profile.band_tau);
    }
    for i in 0..profile.band_octahedra {
        builder.plant_octahedron(&format!("void-band-{i}"), profile.band_tau);
    }
    for i in 0..profile.hub_cycles {
        builder.plant_cycle(&format!("cycle-hub-{i}"), profile.hub_tau);
    }
    for i in 0..profile.hub_octahedra {
        builder.plant_octahedron(&format!("void-hub-{i}"), profile.hub_tau);
    }

    builder.background("rare1", profile.rare_counts.0, (1, 1));
    builder.background("rare2", profile.rare_counts.1, (2, 2));
    builder.background("rare3", profile.rare_counts.2, (3, 3));
    builder.background("band", profile.band_concepts, profile.band_tau);
    builder.background("tail", profile.tail_concepts, profile.tail_tau);
    builder.background("hub", profile.hub_concepts, profile.hub_tau);

    let mut records = Vec::new();
    for (at, (year, concepts)) in builder.articles.iter().enumerate() {
        for concept in concepts {
            records.push(RawRecord {
                article_id: format!("a{at:06}"),
                year: *year,
                concept: concept.clone(),
                frequency: None,
            });
        }
    }
    records
}
