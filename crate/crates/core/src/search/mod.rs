//! Latin square enumeration, seeded factor sampling and witness search.

mod factors;
mod latin;
mod run;

pub use factors::{
    automorphisms, candidate_rng, is_xi_homomorphism, perturb_xi, random_smash_factors, random_smash_factors_with,
    sample_skew_factors, xi_classes, NSpec, SmashConstraints, MAX_AUTOMORPHISM_ORDER,
};
pub use latin::{count_latin_squares, enumerate_latin_squares, LatinSquares, MAX_ENUMERATION_ORDER};
pub use run::{run_search, InverseGap, SearchOutcome, SearchResult, SearchStats, SearchTarget, SearchTask, Witness};
