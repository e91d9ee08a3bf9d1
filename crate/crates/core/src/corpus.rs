//! Small named structures used by tests, the acceptance suite and the CLI.
//!
//! Permutation groups compose as `(p·q)(i) = p[q[i]]` and list their
//! elements in lexicographic order, so the identity is always element 0.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::magma::FiniteMagma;
use crate::products::{skew_smashed_product, SkewFactors, SkewProduct};

#[derive(Clone, Debug)]
pub struct NamedMagma {
    pub name: String,
    pub magma: FiniteMagma,
}

/// `ℤₙ` with `a·b = (a + b) mod n`.
pub fn cyclic(n: usize) -> FiniteMagma {
    FiniteMagma::from_fn(n, |a, b| (a + b) % n).expect("cyclic group")
}

pub fn klein() -> FiniteMagma {
    FiniteMagma::from_fn(4, |a, b| a ^ b).expect("Klein group")
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&i| p[i]).collect()
}

/// The closure of `generators` under composition, as a sorted element list
/// and its Cayley table.
fn permutation_group(degree: usize, generators: &[Vec<usize>]) -> (Vec<Vec<usize>>, FiniteMagma) {
    let mut elements = vec![(0..degree).collect::<Vec<_>>()];
    let mut frontier = elements.clone();
    while let Some(x) = frontier.pop() {
        for g in generators {
            let y = compose(&x, g);
            if !elements.contains(&y) {
                elements.push(y.clone());
                frontier.push(y);
            }
        }
    }
    elements.sort();
    let index = |p: &Vec<usize>| elements.binary_search(p).expect("closed");
    let n = elements.len();
    let table = (0..n * n)
        .map(|i| index(&compose(&elements[i / n], &elements[i % n])))
        .collect();
    let m = FiniteMagma::from_flat(n, table).expect("permutation group");
    (elements, m)
}

fn symmetric_generators(k: usize) -> Vec<Vec<usize>> {
    let mut gens = Vec::new();
    if k >= 2 {
        let mut swap: Vec<usize> = (0..k).collect();
        swap.swap(0, 1);
        gens.push(swap);
        gens.push((0..k).map(|i| (i + 1) % k).collect());
    }
    gens
}

/// The symmetric group on `k` points.
pub fn symmetric(k: usize) -> FiniteMagma {
    permutation_group(k, &symmetric_generators(k)).1
}

/// Index of a permutation in [`symmetric`]`(k)`.
pub fn symmetric_index(k: usize, perm: &[usize]) -> usize {
    let (elements, _) = permutation_group(k, &symmetric_generators(k));
    elements
        .iter()
        .position(|p| p == perm)
        .expect("not a permutation of 0..k")
}

/// Symmetries of a square with vertices `0..4` in cyclic order.
pub fn dihedral4() -> FiniteMagma {
    permutation_group(4, &[vec![1, 2, 3, 0], vec![3, 2, 1, 0]]).1
}

/// `Q₈` with elements `1, i, j, k, −1, −i, −j, −k` in that order.
pub fn quaternion() -> FiniteMagma {
    // Products of basis units as (sign flip, unit).
    const UNITS: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    FiniteMagma::from_fn(8, |x, y| {
        let (flip, unit) = UNITS[x % 4][y % 4];
        ((x / 4 + y / 4 + flip) % 2) * 4 + unit
    })
    .expect("quaternion group")
}

/// `ℤ₂..ℤ₈`, Klein four, `S₃`, `D₄`, `Q₈`.
pub fn groups() -> Vec<NamedMagma> {
    let mut out: Vec<NamedMagma> = (2..=8)
        .map(|n| NamedMagma {
            name: format!("Z{n}"),
            magma: cyclic(n),
        })
        .collect();
    for (name, magma) in [
        ("Klein", klein()),
        ("S3", symmetric(3)),
        ("D4", dihedral4()),
        ("Q8", quaternion()),
    ] {
        out.push(NamedMagma {
            name: name.into(),
            magma,
        });
    }
    out
}

/// Every nonassociative reduced Latin square of order 5, in enumeration
/// order. Each is a loop with unit 0.
pub fn nonassociative_loops_of_order_5() -> Vec<FiniteMagma> {
    crate::search::enumerate_latin_squares(5, true)
        .expect("order 5 is enumerable")
        .filter(|m| !m.is_associative())
        .collect()
}

/// A named skew smashed product construction.
#[derive(Clone, Debug)]
pub struct SkewInstance {
    pub name: &'static str,
    pub a: FiniteMagma,
    pub b: FiniteMagma,
    pub factors: SkewFactors,
}

impl SkewInstance {
    pub fn build(&self) -> Result<SkewProduct> {
        skew_smashed_product(&self.a, &self.b, &self.factors)
    }
}

/// `ξ` tabulated from a rule on `(u, c, v, b)`.
fn tabulate_xi(na: usize, nb: usize, rule: impl Fn(usize, usize, usize, usize) -> usize) -> Vec<usize> {
    let mut xi = Vec::with_capacity(na * nb * na * nb);
    for u in 0..na {
        for c in 0..nb {
            for v in 0..na {
                for b in 0..nb {
                    xi.push(rule(u, c, v, b));
                }
            }
        }
    }
    xi
}

fn trivial_instance(name: &'static str, na: usize, nb: usize) -> SkewInstance {
    SkewInstance {
        name,
        a: cyclic(na),
        b: cyclic(nb),
        factors: SkewFactors::trivial(na, nb, cyclic(1), vec![0], vec![0]).expect("trivial factors"),
    }
}

/// `A = B = ℤ₄`, `N = ℤ₂ = {0, 2}`, `ξ = u·c·v·b` on residues mod 2.
fn z4_z4() -> SkewInstance {
    let base = SkewFactors::trivial(4, 4, cyclic(2), vec![0, 2], vec![0, 2]).expect("trivial factors");
    let xi = tabulate_xi(4, 4, |u, c, v, b| (u & c & v & b) & 1);
    SkewInstance {
        name: "Z4*Z4/Z2",
        a: cyclic(4),
        b: cyclic(4),
        factors: base.with_xi(xi).expect("shape"),
    }
}

/// `A = ℤ₂`, `B = ℤ₆`, `N = ℤ₂` as all of `A` and as `{0, 3}`.
/// `ξ = 1` iff `c ≡ 1` and `b ≡ 2 (mod 3)`.
fn z2_z6() -> SkewInstance {
    let base = SkewFactors::trivial(2, 6, cyclic(2), vec![0, 1], vec![0, 3]).expect("trivial factors");
    let xi = tabulate_xi(2, 6, |_, c, _, b| usize::from(c % 3 == 1 && b % 3 == 2));
    SkewInstance {
        name: "Z2*Z6/Z2",
        a: cyclic(2),
        b: cyclic(6),
        factors: base.with_xi(xi).expect("shape"),
    }
}

/// As [`z4_z4`] with odd elements of `A` acting on `B` by negation and
/// `ξ = u·b + c·v·b` on residues mod 2.
fn z4_z4_twisted() -> SkewInstance {
    let phi = (0..4)
        .flat_map(|a| (0..4).map(move |b| if a % 2 == 1 { (4 - b) % 4 } else { b }))
        .collect();
    let xi = tabulate_xi(4, 4, |u, c, v, b| ((u & b) ^ (c & v & b)) & 1);
    let factors = SkewFactors::new(
        4,
        4,
        cyclic(2),
        vec![0, 2],
        vec![0, 2],
        phi,
        vec![0; 4 * 4 * 4],
        vec![0; 4 * 4 * 4],
        xi,
    )
    .expect("shape");
    SkewInstance {
        name: "Z4*Z4/Z2 twisted",
        a: cyclic(4),
        b: cyclic(4),
        factors,
    }
}

/// `A = ℤ₄ ⊃ {0, 2}`, `B = ℤ₈ ⊃ {0, 4}`. Odd `u` shifts odd `b` by 2, so
/// `η(v,u,b)` and `κ(u,c,b)` are 4 exactly when all three arguments are odd.
/// `ξ` is a seeded random function of the residues `(u mod 2, c mod 4,
/// v mod 2, b mod 4)`, trivial when either pair is in the unit class.
fn z4_z8() -> SkewInstance {
    let phi = (0..4)
        .flat_map(|u| (0..8).map(move |b| if u % 2 == 1 && b % 2 == 1 { (b + 2) % 8 } else { b }))
        .collect();
    let mut eta = Vec::with_capacity(4 * 4 * 8);
    for v in 0..4 {
        for u in 0..4 {
            for b in 0..8 {
                eta.push(v & u & b & 1);
            }
        }
    }
    let mut kappa = Vec::with_capacity(4 * 8 * 8);
    for u in 0..4 {
        for c in 0..8 {
            for b in 0..8 {
                kappa.push(u & c & b & 1);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let classes: Vec<usize> = (0..2 * 4 * 2 * 4).map(|_| rng.random_range(0..2)).collect();
    let xi = tabulate_xi(4, 8, |u, c, v, b| {
        let (u, c, v, b) = (u % 2, c % 4, v % 2, b % 4);
        if (u, c) == (0, 0) || (v, b) == (0, 0) {
            0
        } else {
            classes[((u * 4 + c) * 2 + v) * 4 + b]
        }
    });
    let factors = SkewFactors::new(4, 8, cyclic(2), vec![0, 2], vec![0, 4], phi, eta, kappa, xi).expect("shape");
    SkewInstance {
        name: "Z4*Z8/Z2",
        a: cyclic(4),
        b: cyclic(8),
        factors,
    }
}

/// Validator-passing skew factor sets, smallest first.
pub fn skew_corpus() -> Vec<SkewInstance> {
    vec![
        trivial_instance("Z2*Z3/1", 2, 3),
        trivial_instance("Z2*Z2/1", 2, 2),
        z2_z6(),
        z4_z4(),
        z4_z4_twisted(),
        z4_z8(),
    ]
}

/// Looks up a skew instance by name.
pub fn skew_instance(name: &str) -> Option<SkewInstance> {
    skew_corpus().into_iter().find(|c| c.name == name)
}

/// Every fan quasigroup the corpus knows about: the groups and the skew
/// products.
pub fn fan_quasigroups() -> Vec<NamedMagma> {
    let mut out = groups();
    for inst in skew_corpus() {
        out.push(NamedMagma {
            name: inst.name.to_string(),
            magma: inst.build().expect("corpus instance").magma,
        });
    }
    out
}
