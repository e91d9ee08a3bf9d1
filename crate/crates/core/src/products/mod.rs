//! Direct, smashed and skew smashed products.
//!
//! Pairs `(a, b)` with `a ∈ A`, `b ∈ B` are encoded as `a·|B| + b`; longer
//! tuples use the same mixed-radix scheme with the first factor most
//! significant.

mod direct;
mod skew;
mod smash;

pub use direct::{
    direct_product, direct_product_certificate, direct_product_with_limit, MixedRadix, DEFAULT_MAX_PRODUCT_ORDER,
};
pub use skew::{
    skew_div, skew_smashed_product, validate_skew_factors, DivisionSide, SkewFactors, SkewProduct, ValidationIssue,
    ValidationReport,
};
pub use smash::{
    right_solvability_probe, smashed_div_l, smashed_product, RightDivisionWitness, RightSolvability, SmashFactors,
};

#[inline]
pub fn encode_pair(order_b: usize, a: usize, b: usize) -> usize {
    a * order_b + b
}

#[inline]
pub fn decode_pair(order_b: usize, x: usize) -> (usize, usize) {
    (x / order_b, x % order_b)
}
