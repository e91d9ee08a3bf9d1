use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QgError, Result};
use crate::magma::FiniteMagma;
use crate::products::{validate_skew_factors, SkewFactors, SmashFactors};

/// Largest order for which automorphisms are found by trying every
/// permutation.
pub const MAX_AUTOMORPHISM_ORDER: usize = 8;

/// Rejection sampling gives up after this many draws per factor.
const MAX_DRAWS: usize = 100_000;

/// The per-candidate generator: stream `index` of the ChaCha8 generator
/// seeded with `seed`.
pub fn candidate_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Every permutation of `0..n` that is a table automorphism.
pub fn automorphisms(m: &FiniteMagma) -> Result<Vec<Vec<usize>>> {
    let n = m.order();
    if n > MAX_AUTOMORPHISM_ORDER {
        return Err(QgError::Capacity(format!(
            "automorphism search is limited to order {MAX_AUTOMORPHISM_ORDER}, got {n}"
        )));
    }
    Ok((0..n).permutations(n).filter(|p| m.is_automorphism(p)).collect())
}

/// Whether `xi: A × B × A → B` (indexed as in [`SmashFactors`]) is a
/// homomorphism from the direct product `A × B × A` to `B`.
pub fn is_xi_homomorphism(a: &FiniteMagma, b: &FiniteMagma, xi: &[usize]) -> bool {
    let (na, nb) = (a.order(), b.order());
    let idx = |x: usize, y: usize, z: usize| (x * nb + y) * na + z;
    for x1 in 0..na {
        for y1 in 0..nb {
            for z1 in 0..na {
                let v1 = xi[idx(x1, y1, z1)];
                for x2 in 0..na {
                    for y2 in 0..nb {
                        for z2 in 0..na {
                            let prod = xi[idx(a.mul(x1, x2), b.mul(y1, y2), a.mul(z1, z2))];
                            if prod != b.mul(v1, xi[idx(x2, y2, z2)]) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmashConstraints {
    /// Every `φⱼ(a)` fixes the unit of `B`.
    pub fix_unit: bool,
    /// `φⱼ(a)` is not an automorphism of `B`, for every `a`.
    pub non_automorphism: [bool; 3],
    /// `ξᵢ` is not a homomorphism `A × B × A → B`.
    pub non_homomorphism: [bool; 2],
}

fn random_permutation<R: Rng>(rng: &mut R, n: usize, fixed: Option<usize>) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    match fixed {
        Some(e) => {
            let mut rest: Vec<usize> = (0..n).filter(|&x| x != e).collect();
            rest.shuffle(rng);
            let mut it = rest.into_iter();
            for (x, slot) in p.iter_mut().enumerate() {
                if x != e {
                    *slot = it.next().expect("same length");
                }
            }
        }
        None => p.shuffle(rng),
    }
    p
}

/// Samples smashing factors from `rng`: each `φⱼ(a)` a uniform permutation
/// of `B` (fixing the unit if asked), each `ξᵢ` a uniform map, redrawn
/// until the constraints hold.
pub fn random_smash_factors_with<R: Rng>(
    rng: &mut R,
    a: &FiniteMagma,
    b: &FiniteMagma,
    constraints: &SmashConstraints,
) -> Result<SmashFactors> {
    let (na, nb) = (a.order(), b.order());
    let fixed = if constraints.fix_unit {
        Some(
            b.find_unit()
                .ok_or_else(|| QgError::Precondition("fixing the unit needs B to have one".into()))?,
        )
    } else {
        None
    };
    if constraints.non_automorphism.iter().any(|&c| c) && nb <= MAX_AUTOMORPHISM_ORDER {
        let pool = if fixed.is_some() {
            (1..nb).product::<usize>()
        } else {
            (1..=nb).product::<usize>()
        };
        let auts = automorphisms(b)?
            .into_iter()
            .filter(|p| fixed.is_none_or(|e| p[e] == e))
            .count();
        if auts == pool {
            return Err(QgError::SearchExhausted(
                "every admissible permutation of B is an automorphism".into(),
            ));
        }
    }
    if constraints.non_homomorphism.iter().any(|&c| c) && nb == 1 {
        return Err(QgError::SearchExhausted(
            "every map into a one-element B is a homomorphism".into(),
        ));
    }

    let mut xi = [Vec::new(), Vec::new()];
    for (i, slot) in xi.iter_mut().enumerate() {
        let mut draws = 0;
        *slot = loop {
            let cand: Vec<usize> = (0..na * nb * na).map(|_| rng.random_range(0..nb)).collect();
            if !constraints.non_homomorphism[i] || !is_xi_homomorphism(a, b, &cand) {
                break cand;
            }
            draws += 1;
            if draws >= MAX_DRAWS {
                return Err(QgError::SearchExhausted(format!("no non-homomorphic xi{}", i + 1)));
            }
        };
    }
    let mut phi: [Vec<usize>; 3] = Default::default();
    for (j, table) in phi.iter_mut().enumerate() {
        for _ in 0..na {
            let mut draws = 0;
            let p = loop {
                let p = random_permutation(rng, nb, fixed);
                if !constraints.non_automorphism[j] || !b.is_automorphism(&p) {
                    break p;
                }
                draws += 1;
                if draws >= MAX_DRAWS {
                    return Err(QgError::SearchExhausted(format!("no non-automorphism phi{}", j + 1)));
                }
            };
            table.extend(p);
        }
    }
    let [xi1, xi2] = xi;
    SmashFactors::new(na, nb, xi1, xi2, phi)
}

/// [`random_smash_factors_with`] on a ChaCha8 generator seeded by `seed`.
pub fn random_smash_factors(
    a: &FiniteMagma,
    b: &FiniteMagma,
    seed: u64,
    constraints: &SmashConstraints,
) -> Result<SmashFactors> {
    random_smash_factors_with(&mut ChaCha8Rng::seed_from_u64(seed), a, b, constraints)
}

/// The group `N` together with its embeddings into `A` and `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NSpec {
    pub n_group: FiniteMagma,
    pub embed_a: Vec<usize>,
    pub embed_b: Vec<usize>,
}

impl NSpec {
    /// `ℤₖ` inside `ℤ_{order_a}` and `ℤ_{order_b}` as the multiples of
    /// `order_a/k` and `order_b/k`.
    pub fn cyclic(order_a: usize, order_b: usize, k: usize) -> Result<Self> {
        if k == 0 || !order_a.is_multiple_of(k) || !order_b.is_multiple_of(k) {
            return Err(QgError::Precondition(format!(
                "Z{k} does not embed in both Z{order_a} and Z{order_b}"
            )));
        }
        Ok(NSpec {
            n_group: crate::corpus::cyclic(k),
            embed_a: (0..k).map(|g| g * (order_a / k)).collect(),
            embed_b: (0..k).map(|g| g * (order_b / k)).collect(),
        })
    }

    pub fn trivial_factors(&self, order_a: usize, order_b: usize) -> Result<SkewFactors> {
        SkewFactors::trivial(
            order_a,
            order_b,
            self.n_group.clone(),
            self.embed_a.clone(),
            self.embed_b.clone(),
        )
    }
}

/// Classes of `A × B` (encoded `a·|B| + b`) under the shifts
/// `(a, b) ↦ (γa, b), (aγ, b), (a, γb), (a, bγ)` for `γ ∈ N`, numbered in
/// order of first appearance. These contain the `Ξ`-classes.
pub fn xi_classes(a: &FiniteMagma, b: &FiniteMagma, embed_a: &[usize], embed_b: &[usize]) -> Vec<usize> {
    let (na, nb) = (a.order(), b.order());
    let mut class = vec![usize::MAX; na * nb];
    let mut next = 0;
    for start in 0..na * nb {
        if class[start] != usize::MAX {
            continue;
        }
        class[start] = next;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            let (u, c) = (x / nb, x % nb);
            for (&ga, &gb) in embed_a.iter().zip(embed_b) {
                for y in [
                    a.mul(ga, u) * nb + c,
                    a.mul(u, ga) * nb + c,
                    u * nb + b.mul(gb, c),
                    u * nb + b.mul(c, gb),
                ] {
                    if class[y] == usize::MAX {
                        class[y] = next;
                        stack.push(y);
                    }
                }
            }
        }
        next += 1;
    }
    class
}

/// Draws one candidate: trivial `φ`, `η`, `κ` and `ξ` chosen uniformly in
/// `N` on each pair of classes, with the unit class pinned to `e`.
pub fn perturb_xi<R: RngCore>(rng: &mut R, a: &FiniteMagma, b: &FiniteMagma, base: &SkewFactors) -> SkewFactors {
    let classes = xi_classes(a, b, base.embed_a(), base.embed_b());
    let k = classes.iter().max().map_or(0, |m| m + 1);
    let e_n = base.n_group().find_unit().expect("group");
    let unit_class = classes[a.find_unit().expect("fan") * b.order() + b.find_unit().expect("fan")];
    let nn = base.n_group().order();
    let values: Vec<usize> = (0..k * k)
        .map(|i| {
            if i / k == unit_class || i % k == unit_class {
                e_n
            } else {
                rng.random_range(0..nn)
            }
        })
        .collect();
    let n = a.order() * b.order();
    let xi = (0..n * n)
        .map(|i| values[classes[i / n] * k + classes[i % n]])
        .collect();
    base.with_xi(xi).expect("shape preserved")
}

/// First candidate (in index order) whose `ξ` is nontrivial and which
/// passes [`validate_skew_factors`]. With `N` trivial the trivial factors
/// are returned at once. `None` when the budget runs out or is 0.
pub fn sample_skew_factors(
    a: &FiniteMagma,
    b: &FiniteMagma,
    n_spec: &NSpec,
    seed: u64,
    budget: u64,
) -> Result<Option<SkewFactors>> {
    if budget == 0 {
        return Ok(None);
    }
    let base = n_spec.trivial_factors(a.order(), b.order())?;
    let report = validate_skew_factors(a, b, &base);
    if let Some(first) = report.issues.first() {
        return Err(QgError::Precondition(format!("N does not fit A and B: {first:?}")));
    }
    if n_spec.n_group.order() == 1 {
        return Ok(Some(base));
    }
    for i in 0..budget {
        let cand = perturb_xi(&mut candidate_rng(seed, i), a, b, &base);
        if cand.has_nontrivial_xi() && validate_skew_factors(a, b, &cand).is_valid() {
            return Ok(Some(cand));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::products::{skew_smashed_product, smashed_product};

    #[test]
    fn automorphisms_of_small_groups() {
        assert_eq!(
            automorphisms(&corpus::cyclic(3)).unwrap(),
            vec![vec![0, 1, 2], vec![0, 2, 1]]
        );
        assert_eq!(automorphisms(&corpus::cyclic(2)).unwrap(), vec![vec![0, 1]]);
        assert_eq!(automorphisms(&corpus::klein()).unwrap().len(), 6);
        assert_eq!(automorphisms(&corpus::symmetric(3)).unwrap().len(), 6);
        assert!(automorphisms(&corpus::cyclic(9)).is_err());
    }

    #[test]
    fn unconstrained_factors_give_left_quasigroups() {
        let (z3, s3) = (corpus::cyclic(3), corpus::symmetric(3));
        for seed in 0..20 {
            let f = random_smash_factors(&s3, &z3, seed, &SmashConstraints::default()).unwrap();
            assert!(smashed_product(&s3, &z3, &f).unwrap().is_left_quasigroup());
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let z3 = corpus::cyclic(3);
        let c = SmashConstraints::default();
        assert_eq!(
            random_smash_factors(&z3, &z3, 7, &c).unwrap(),
            random_smash_factors(&z3, &z3, 7, &c).unwrap()
        );
        assert_ne!(
            random_smash_factors(&z3, &z3, 7, &c).unwrap(),
            random_smash_factors(&z3, &z3, 8, &c).unwrap()
        );
    }

    #[test]
    fn non_automorphism_constraint() {
        let z3 = corpus::cyclic(3);
        let c = SmashConstraints {
            non_automorphism: [true, false, false],
            ..Default::default()
        };
        for seed in 0..20 {
            let f = random_smash_factors(&z3, &z3, seed, &c).unwrap();
            for a in 0..3 {
                assert!(!z3.is_automorphism(f.phi(1, a)));
            }
        }
        // Fixing 0 in Z2 leaves only the identity, an automorphism.
        let z2 = corpus::cyclic(2);
        let c = SmashConstraints {
            fix_unit: true,
            non_automorphism: [true, false, false],
            ..Default::default()
        };
        assert!(matches!(
            random_smash_factors(&z2, &z2, 0, &c),
            Err(QgError::SearchExhausted(_))
        ));
        let c = SmashConstraints {
            non_automorphism: [true, false, false],
            ..Default::default()
        };
        let f = random_smash_factors(&z2, &z2, 0, &c).unwrap();
        assert_eq!(f.phi(1, 0), &[1, 0]);
    }

    #[test]
    fn fixed_unit_permutations() {
        let z4 = corpus::cyclic(4);
        let c = SmashConstraints {
            fix_unit: true,
            ..Default::default()
        };
        for seed in 0..10 {
            let f = random_smash_factors(&z4, &z4, seed, &c).unwrap();
            for j in 1..=3 {
                for a in 0..4 {
                    assert_eq!(f.phi(j, a)[0], 0);
                }
            }
        }
    }

    #[test]
    fn homomorphism_check_and_constraint() {
        let z2 = corpus::cyclic(2);
        let zero = vec![0; 8];
        assert!(is_xi_homomorphism(&z2, &z2, &zero));
        // ξ(a,b,a') = b + a'
        let sum: Vec<usize> = (0..8).map(|i| ((i / 2) % 2 + i % 2) % 2).collect();
        assert!(is_xi_homomorphism(&z2, &z2, &sum));
        let mut bent = sum.clone();
        bent[7] ^= 1;
        assert!(!is_xi_homomorphism(&z2, &z2, &bent));
        let c = SmashConstraints {
            non_homomorphism: [true, true],
            ..Default::default()
        };
        let f = random_smash_factors(&z2, &z2, 3, &c).unwrap();
        assert!(!is_xi_homomorphism(&z2, &z2, f.xi1_table()));
        assert!(!is_xi_homomorphism(&z2, &z2, f.xi2_table()));
        let z1 = corpus::cyclic(1);
        assert!(random_smash_factors(&z2, &z1, 0, &c).is_err());
    }

    #[test]
    fn xi_classes_of_z4_mod_z2() {
        let z4 = corpus::cyclic(4);
        let classes = xi_classes(&z4, &z4, &[0, 2], &[0, 2]);
        // (u, c) ~ (u + 2, c) ~ (u, c + 2): four classes by parities.
        assert_eq!(classes.iter().max(), Some(&3));
        for x in 0..16 {
            let (u, c) = (x / 4, x % 4);
            assert_eq!(classes[x], classes[(u % 2) * 4 + c % 2]);
        }
    }

    #[test]
    fn skew_sampling() {
        let z4 = corpus::cyclic(4);
        let spec = NSpec::cyclic(4, 4, 2).unwrap();
        let f = sample_skew_factors(&z4, &z4, &spec, 1, 100).unwrap().unwrap();
        assert!(f.has_nontrivial_xi());
        assert!(skew_smashed_product(&z4, &z4, &f).is_ok());
        assert_eq!(sample_skew_factors(&z4, &z4, &spec, 1, 0).unwrap(), None);
        let trivial = NSpec::cyclic(4, 4, 1).unwrap();
        let f = sample_skew_factors(&z4, &z4, &trivial, 1, 1).unwrap().unwrap();
        assert!(!f.has_nontrivial_xi());
        assert!(NSpec::cyclic(4, 6, 4).is_err());
    }

    /// Exhaustive enumeration of ξ over class pairs of Z4/Z2 finds valid
    /// nontrivial assignments, so the sampler's target set is nonempty.
    #[test]
    fn nontrivial_xi_exists_over_z4() {
        let z4 = corpus::cyclic(4);
        let base = NSpec::cyclic(4, 4, 2).unwrap().trivial_factors(4, 4).unwrap();
        let classes = xi_classes(&z4, &z4, &[0, 2], &[0, 2]);
        let free: Vec<(usize, usize)> = (1..4).flat_map(|x| (1..4).map(move |y| (x, y))).collect();
        let mut valid = 0;
        for mask in 1u32..(1 << free.len()) {
            let value = |x: usize, y: usize| {
                free.iter()
                    .position(|&p| p == (x, y))
                    .map_or(0, |i| ((mask >> i) & 1) as usize)
            };
            let xi = (0..256).map(|i| value(classes[i / 16], classes[i % 16])).collect();
            if validate_skew_factors(&z4, &z4, &base.with_xi(xi).unwrap()).is_valid() {
                valid += 1;
            }
        }
        assert_eq!(valid, (1 << free.len()) - 1);
    }
}
