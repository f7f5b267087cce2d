//! Parameter-space and attractor analysis.

pub mod antiphase;
pub mod census;
pub mod markov;
pub mod orbit;
pub mod scan;
pub mod stars;

pub use antiphase::{antiphase_condition, antiphase_gap, antiphase_root};
pub use census::{census, Census, CensusEntry, DEDUP_TOL};
pub use markov::{build_markov, spectral_radius, Interval, MarkovModel};
pub use orbit::{
    canonical_rotation, detect_periodic_orbit, hausdorff, AttractorKind, AttractorRecord,
    DEFAULT_RECURRENCE_TOL,
};
pub use scan::{bifurcation_scan, central_component_reaches_boundary, BifurcationSample};
pub use stars::{find_star, spacing_ratios, star_values, xi2, StarValue};
