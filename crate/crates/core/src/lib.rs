//! Topology-guided selection of network thresholding parameters.
//!
//! Given a corpus of (article, year, concept) observations and a grid of
//! candidate frequency thresholds, this crate builds the thresholded concept
//! network at every grid cell, summarizes each network's higher-order
//! structure with persistent homology, vectorizes the persistence diagrams as
//! persistence images, and scores every cell by how much that vector moves
//! toward its grid neighbors. The selected thresholds are the feasible cell
//! — one carrying enough homological features per dimension — where the
//! summary is most stable.
//!
//! The crate is `no_std` (with `alloc`); file formats, parallel grid
//! population, and the command-line interface live in the companion
//! `persinet` crate.
//!
//! Module map:
//!
//! * [`corpus`] — records, thresholding, time-weighted network construction.
//! * [`complex`] — flag (clique) filtrations of weighted networks.
//! * [`homology`] — mod-2 boundary reduction and a static Betti oracle.
//! * [`image`] — persistence images and distances between them.
//! * [`stability`] — the parameter grid, tangent field, and constrained argmin.
//! * [`pipeline`] — per-cell evaluation wiring the above together.
//! * [`stats`] — ensemble means, variance fields, Laplacian spectra.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod complex;
pub mod corpus;
mod eigen;
pub mod error;
pub mod gf2;
pub mod homology;
pub mod image;
pub mod pipeline;
pub mod stability;
pub mod stats;

pub use complex::{Filtration, Simplex};
pub use corpus::{
    build_network, build_network_from_records, edge_weight, normalize_records, ConceptNetwork,
    CorpusIndex, CorpusRecord, NetworkEdge, NetworkNode, RawRecord, SingleYearPolicy,
    ThresholdPoint,
};
pub use error::{Error, Result};
pub use homology::{
    betti_at_scale, boundary_matrix, feature_counts, reduce_and_pair, BettiProfile, BoundaryMatrix,
    PersistenceDiagram, PersistencePair,
};
pub use image::{
    birth_persistence_transform, concat_images, image_distance, persistence_image, ImageConfig,
    PersistenceImage, Weighting,
};
pub use pipeline::{assemble_grid, evaluate_cell, grid_points, populate_grid, PipelineConfig};
pub use stability::{
    averaged_gradient_magnitude, default_sweep_fractions, directional_derivative, optimize, sweep,
    Constraints, DeltaSpec, GridCell, ParameterGrid, ResolvedConstraints, Selection,
    StabilityField, SweepOutcome,
};
pub use stats::{
    cross_term_variance, euclidean_alpha, laplacian_spectrum, mean_image, pnorm_variance, Spectrum,
    VarianceField, VarianceKind,
};
