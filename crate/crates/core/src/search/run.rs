use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::factors::{candidate_rng, perturb_xi, random_smash_factors_with, NSpec, SmashConstraints};
use super::latin::count_latin_squares;
use crate::corpus::cyclic;
use crate::error::{QgError, Result};
use crate::magma::FiniteMagma;
use crate::products::{
    right_solvability_probe, skew_smashed_product, smashed_product, validate_skew_factors, RightDivisionWitness,
    RightSolvability, SkewFactors, SmashFactors,
};
use crate::structure::fan_certificate;

/// Candidates are evaluated in parallel batches of this size; the first
/// hit in index order wins, so results do not depend on thread count.
const BATCH: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchTarget {
    LeftNotRight,
    NontrivialFan,
    OneSidedInverseGap,
    LatinSquareCensus,
}

impl SearchTarget {
    pub fn name(self) -> &'static str {
        match self {
            SearchTarget::LeftNotRight => "left-not-right",
            SearchTarget::NontrivialFan => "nontrivial-fan",
            SearchTarget::OneSidedInverseGap => "one-sided-inverse-gap",
            SearchTarget::LatinSquareCensus => "latin-square-census",
        }
    }
}

impl fmt::Display for SearchTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SearchTarget {
    type Err = QgError;

    fn from_str(s: &str) -> Result<Self> {
        [
            SearchTarget::LeftNotRight,
            SearchTarget::NontrivialFan,
            SearchTarget::OneSidedInverseGap,
            SearchTarget::LatinSquareCensus,
        ]
        .into_iter()
        .find(|t| t.name() == s)
        .ok_or_else(|| QgError::Parse(format!("unknown search target '{s}'")))
    }
}

/// A search over `A = ℤ_{order_a}`, `B = ℤ_{order_b}`. For the skew
/// targets `N = ℤ_k` sits in both as the multiples of `order/k`, with `k`
/// defaulting to the smallest prime factor of `gcd(order_a, order_b)`.
/// The census target counts Latin squares of order `order_a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchTask {
    pub target: SearchTarget,
    pub order_a: usize,
    pub order_b: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_order: Option<usize>,
    pub seed: u64,
    pub budget: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub candidates_tried: u64,
    /// Rejected candidates by reason.
    pub rejections: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InverseGap {
    pub element: usize,
    /// `e/a`
    pub right_quotient: usize,
    /// `a\e`
    pub left_quotient: usize,
}

/// A self-contained search result; [`Witness::reverify`] checks it from
/// scratch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "target", rename_all = "kebab-case")]
pub enum Witness {
    LeftNotRight {
        candidate: u64,
        a: FiniteMagma,
        b: FiniteMagma,
        factors: SmashFactors,
        product: FiniteMagma,
        failure: RightDivisionWitness,
    },
    NontrivialFan {
        candidate: u64,
        a: FiniteMagma,
        b: FiniteMagma,
        factors: SkewFactors,
        product: FiniteMagma,
        fan: Vec<usize>,
    },
    OneSidedInverseGap {
        candidate: u64,
        a: FiniteMagma,
        b: FiniteMagma,
        factors: SkewFactors,
        product: FiniteMagma,
        gap_count: usize,
        gaps: Vec<InverseGap>,
    },
    LatinSquareCensus {
        order: usize,
        reduced: u64,
        total: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SearchOutcome {
    Found { witness: Box<Witness> },
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub task: SearchTask,
    pub outcome: SearchOutcome,
    pub stats: SearchStats,
}

impl SearchResult {
    pub fn witness(&self) -> Option<&Witness> {
        match &self.outcome {
            SearchOutcome::Found { witness } => Some(witness),
            SearchOutcome::Exhausted => None,
        }
    }
}

fn gaps_of(m: &FiniteMagma) -> Vec<InverseGap> {
    let e = m.find_unit().expect("unital");
    (0..m.order())
        .filter_map(|a| {
            let (r, l) = (m.rd(a, e), m.ld(a, e));
            (r != l).then_some(InverseGap {
                element: a,
                right_quotient: r,
                left_quotient: l,
            })
        })
        .collect()
}

impl Witness {
    /// Rebuilds everything from the stored inputs and lists every way the
    /// stored claims disagree with the rebuilt objects.
    pub fn reverify(&self) -> Result<Vec<String>> {
        let mut problems = Vec::new();
        match self {
            Witness::LeftNotRight {
                a,
                b,
                factors,
                product,
                failure,
                ..
            } => {
                let rebuilt = smashed_product(a, b, factors)?;
                if &rebuilt != product {
                    problems.push("stored product differs from the rebuilt one".into());
                }
                if !rebuilt.is_left_quasigroup() {
                    problems.push("product is not a left quasigroup".into());
                }
                if rebuilt.is_right_quasigroup() {
                    problems.push("product is a right quasigroup".into());
                }
                let nb = b.order();
                let col = failure.column.0 * nb + failure.column.1;
                let target = failure.target.0 * nb + failure.target.1;
                let solutions: Vec<(usize, usize)> = (0..rebuilt.order())
                    .filter(|&y| rebuilt.mul(y, col) == target)
                    .map(|y| (y / nb, y % nb))
                    .collect();
                if solutions != failure.solutions || solutions.len() == 1 {
                    problems.push(format!("column {:?} has solutions {solutions:?}", failure.column));
                }
            }
            Witness::NontrivialFan {
                a,
                b,
                factors,
                product,
                fan,
                ..
            } => {
                let g = skew_smashed_product(a, b, factors)?;
                if &g.magma != product {
                    problems.push("stored product differs from the rebuilt one".into());
                }
                let cert = fan_certificate(product)
                    .ok_or_else(|| QgError::AxiomViolation("stored product is not a fan quasigroup".into()))?;
                if &cert.fan().to_vec() != fan {
                    problems.push(format!("fan is {} not {fan:?}", cert.fan()));
                }
                if cert.fan().len() <= 1 {
                    problems.push("fan is trivial".into());
                }
            }
            Witness::OneSidedInverseGap {
                a,
                b,
                factors,
                product,
                gap_count,
                gaps,
                ..
            } => {
                let g = skew_smashed_product(a, b, factors)?;
                if &g.magma != product {
                    problems.push("stored product differs from the rebuilt one".into());
                }
                let found = gaps_of(&g.magma);
                if found.len() != *gap_count || &found != gaps {
                    problems.push(format!("rebuilt product has {} gaps, stored {gap_count}", found.len()));
                }
                if found.is_empty() {
                    problems.push("no element has e/a ≠ a\\e".into());
                }
            }
            Witness::LatinSquareCensus { order, reduced, total } => {
                let (r, t) = (count_latin_squares(*order, true)?, count_latin_squares(*order, false)?);
                if (r, t) != (*reduced, *total) {
                    problems.push(format!("recount gives {r} reduced and {t} total"));
                }
            }
        }
        Ok(problems)
    }
}

enum Verdict {
    Hit(Box<Witness>),
    Reject(&'static str),
}

fn default_n_order(order_a: usize, order_b: usize) -> usize {
    let (mut x, mut y) = (order_a, order_b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    (2..=x).find(|p| x % p == 0).unwrap_or(1)
}

/// Runs a search. Running out of budget is an ordinary outcome; errors
/// mean the task itself is malformed.
pub fn run_search(task: &SearchTask) -> Result<SearchResult> {
    if task.budget == 0 {
        return Err(QgError::Precondition("search budget must be at least 1".into()));
    }
    if task.order_a == 0 || task.order_b == 0 {
        return Err(QgError::Precondition("orders must be at least 1".into()));
    }
    let (a, b) = (cyclic(task.order_a), cyclic(task.order_b));

    if task.target == SearchTarget::LatinSquareCensus {
        let witness = Witness::LatinSquareCensus {
            order: task.order_a,
            reduced: count_latin_squares(task.order_a, true)?,
            total: count_latin_squares(task.order_a, false)?,
        };
        return Ok(SearchResult {
            task: task.clone(),
            outcome: SearchOutcome::Found {
                witness: Box::new(witness),
            },
            stats: SearchStats {
                candidates_tried: 1,
                ..Default::default()
            },
        });
    }

    let base = if task.target == SearchTarget::LeftNotRight {
        None
    } else {
        let k = task
            .n_order
            .unwrap_or_else(|| default_n_order(task.order_a, task.order_b));
        let base = NSpec::cyclic(task.order_a, task.order_b, k)?.trivial_factors(task.order_a, task.order_b)?;
        if let Some(first) = validate_skew_factors(&a, &b, &base).issues.first() {
            return Err(QgError::Precondition(format!("N does not fit A and B: {first:?}")));
        }
        Some(base)
    };

    let evaluate = |i: u64| -> Result<Verdict> {
        let mut rng = candidate_rng(task.seed, i);
        match task.target {
            SearchTarget::LeftNotRight => {
                let factors = random_smash_factors_with(&mut rng, &a, &b, &SmashConstraints::default())?;
                match right_solvability_probe(&a, &b, &factors)? {
                    RightSolvability::RightQuasigroup => Ok(Verdict::Reject("right-quasigroup")),
                    RightSolvability::NotRight { witness } => Ok(Verdict::Hit(Box::new(Witness::LeftNotRight {
                        candidate: i,
                        a: a.clone(),
                        b: b.clone(),
                        product: smashed_product(&a, &b, &factors)?,
                        factors,
                        failure: witness,
                    }))),
                }
            }
            SearchTarget::NontrivialFan | SearchTarget::OneSidedInverseGap => {
                let factors = perturb_xi(&mut rng, &a, &b, base.as_ref().expect("skew target"));
                if !validate_skew_factors(&a, &b, &factors).is_valid() {
                    return Ok(Verdict::Reject("invalid-factors"));
                }
                let g = skew_smashed_product(&a, &b, &factors)?;
                if task.target == SearchTarget::NontrivialFan {
                    if g.certificate.fan().len() <= 1 {
                        return Ok(Verdict::Reject("trivial-fan"));
                    }
                    Ok(Verdict::Hit(Box::new(Witness::NontrivialFan {
                        candidate: i,
                        a: a.clone(),
                        b: b.clone(),
                        factors,
                        fan: g.certificate.fan().to_vec(),
                        product: g.magma,
                    })))
                } else {
                    let gaps = gaps_of(&g.magma);
                    if gaps.is_empty() {
                        return Ok(Verdict::Reject("no-gap"));
                    }
                    Ok(Verdict::Hit(Box::new(Witness::OneSidedInverseGap {
                        candidate: i,
                        a: a.clone(),
                        b: b.clone(),
                        factors,
                        product: g.magma,
                        gap_count: gaps.len(),
                        gaps,
                    })))
                }
            }
            SearchTarget::LatinSquareCensus => unreachable!("handled above"),
        }
    };

    let mut stats = SearchStats::default();
    let mut start = 0;
    while start < task.budget {
        let end = (start + BATCH).min(task.budget);
        let verdicts: Vec<Result<Verdict>> = (start..end).into_par_iter().map(evaluate).collect();
        for v in verdicts {
            stats.candidates_tried += 1;
            match v? {
                Verdict::Reject(reason) => *stats.rejections.entry(reason.into()).or_default() += 1,
                Verdict::Hit(w) => {
                    return Ok(SearchResult {
                        task: task.clone(),
                        outcome: SearchOutcome::Found { witness: w },
                        stats,
                    })
                }
            }
        }
        start = end;
    }
    Ok(SearchResult {
        task: task.clone(),
        outcome: SearchOutcome::Exhausted,
        stats,
    })
}
