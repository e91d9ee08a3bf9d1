use serde::{Deserialize, Serialize};

use super::{decode_pair, encode_pair};
use crate::error::{QgError, Result};
use crate::magma::{is_permutation, FiniteMagma};

/// The five smashing factors of a smashed product `A ℘ B`.
///
/// `xi1`, `xi2` map `A × B × A → B`; `phi1..phi3` map each `a ∈ A` to a
/// permutation of `B`. With `b^a = φ₁(a)b`, `b^(a) = φ₂(a)b` and
/// `b^{a} = φ₃(a)b`, the product is
///
/// ```text
/// (a₁,b₁)(a₂,b₂) = (a₁a₂, [(ξ₁(a₁,b₁,a₂)·b₁^(a₂))·ξ₂(a₁,b₁,a₂)]^{a₁} · b₂^a₁)
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmashFactors {
    order_a: usize,
    order_b: usize,
    /// Indexed by `(a·|B| + b)·|A| + a'`.
    xi1: Vec<usize>,
    xi2: Vec<usize>,
    /// Indexed by `a·|B| + b`.
    phi: [Vec<usize>; 3],
}

impl SmashFactors {
    /// Builds factors from flat tables, checking shapes, ranges and that
    /// every `φⱼ(a)` is a permutation.
    pub fn new(order_a: usize, order_b: usize, xi1: Vec<usize>, xi2: Vec<usize>, phi: [Vec<usize>; 3]) -> Result<Self> {
        let xi_len = order_a * order_b * order_a;
        for (name, xi) in [("xi1", &xi1), ("xi2", &xi2)] {
            if xi.len() != xi_len {
                return Err(QgError::shape(
                    name,
                    format!("expected {xi_len} entries, found {}", xi.len()),
                ));
            }
            if let Some(i) = xi.iter().position(|&v| v >= order_b) {
                return Err(QgError::shape(
                    format!(
                        "{name}[{}][{}][{}]",
                        i / (order_b * order_a),
                        (i / order_a) % order_b,
                        i % order_a
                    ),
                    format!("value {} is outside 0..{order_b}", xi[i]),
                ));
            }
        }
        for (j, table) in phi.iter().enumerate() {
            if table.len() != order_a * order_b {
                return Err(QgError::shape(
                    format!("phi{}", j + 1),
                    format!("expected {} permutations of length {order_b}", order_a),
                ));
            }
            for a in 0..order_a {
                if !is_permutation(&table[a * order_b..(a + 1) * order_b], order_b) {
                    return Err(QgError::shape(format!("phi{}[{a}]", j + 1), "not a permutation"));
                }
            }
        }
        Ok(SmashFactors {
            order_a,
            order_b,
            xi1,
            xi2,
            phi,
        })
    }

    /// Constant `ξ₁ ≡ ξ₂ ≡ fill` and identity permutations. With `fill` the
    /// unit of `B`, the smashed product is the direct product.
    pub fn trivial(order_a: usize, order_b: usize, fill: usize) -> Self {
        let id: Vec<usize> = (0..order_a).flat_map(|_| 0..order_b).collect();
        SmashFactors {
            order_a,
            order_b,
            xi1: vec![fill; order_a * order_b * order_a],
            xi2: vec![fill; order_a * order_b * order_a],
            phi: [id.clone(), id.clone(), id],
        }
    }

    pub fn order_a(&self) -> usize {
        self.order_a
    }

    pub fn order_b(&self) -> usize {
        self.order_b
    }

    #[inline]
    fn xi_index(&self, a: usize, b: usize, a2: usize) -> usize {
        (a * self.order_b + b) * self.order_a + a2
    }

    #[inline]
    pub fn xi1(&self, a: usize, b: usize, a2: usize) -> usize {
        self.xi1[self.xi_index(a, b, a2)]
    }

    #[inline]
    pub fn xi2(&self, a: usize, b: usize, a2: usize) -> usize {
        self.xi2[self.xi_index(a, b, a2)]
    }

    /// `φⱼ(a)` as a permutation of `B`, for `j ∈ {1, 2, 3}`.
    pub fn phi(&self, j: usize, a: usize) -> &[usize] {
        &self.phi[j - 1][a * self.order_b..(a + 1) * self.order_b]
    }

    pub fn xi1_table(&self) -> &[usize] {
        &self.xi1
    }

    pub fn xi2_table(&self) -> &[usize] {
        &self.xi2
    }

    pub fn phi_table(&self, j: usize) -> &[usize] {
        &self.phi[j - 1]
    }

    fn check_against(&self, a: &FiniteMagma, b: &FiniteMagma) -> Result<()> {
        if a.order() != self.order_a || b.order() != self.order_b {
            return Err(QgError::Precondition(format!(
                "factors are shaped for |A| = {}, |B| = {} but got {} and {}",
                self.order_a,
                self.order_b,
                a.order(),
                b.order()
            )));
        }
        if !a.is_left_quasigroup() || !b.is_left_quasigroup() {
            return Err(QgError::Precondition("smashed products take left quasigroups".into()));
        }
        Ok(())
    }

    /// The bracket `[(ξ₁(a,b,x)·b^(x))·ξ₂(a,b,x)]^{a}`.
    #[inline]
    fn twisted(&self, bm: &FiniteMagma, a: usize, b: usize, x: usize) -> usize {
        let inner = bm.mul(self.xi1(a, b, x), self.phi(2, x)[b]);
        let inner = bm.mul(inner, self.xi2(a, b, x));
        self.phi(3, a)[inner]
    }
}

/// The smashed product `A ℘ B`. Always a left quasigroup; a construction
/// that is not one is reported as an internal error.
pub fn smashed_product(a: &FiniteMagma, b: &FiniteMagma, f: &SmashFactors) -> Result<FiniteMagma> {
    f.check_against(a, b)?;
    let nb = b.order();
    let m = FiniteMagma::from_fn(a.order() * nb, |x, y| {
        let (a1, b1) = decode_pair(nb, x);
        let (a2, b2) = decode_pair(nb, y);
        let bpart = b.mul(f.twisted(b, a1, b1, a2), f.phi(1, a1)[b2]);
        encode_pair(nb, a.mul(a1, a2), bpart)
    })?;
    if !m.is_left_quasigroup() {
        return Err(QgError::Internal(
            "smashed product of left quasigroups is not a left quasigroup".into(),
        ));
    }
    Ok(m)
}

/// `(a,b)\(c,d)` in the smashed product, from the closed form
/// `x = a\c`, `z = [(ξ₁(a,b,x)·b^(x))·ξ₂(a,b,x)]^{a} \ d`, `y = φ₁(a)⁻¹z`.
pub fn smashed_div_l(
    a: &FiniteMagma,
    b: &FiniteMagma,
    f: &SmashFactors,
    left: (usize, usize),
    target: (usize, usize),
) -> Result<(usize, usize)> {
    f.check_against(a, b)?;
    let ((a0, b0), (c, d)) = (left, target);
    let x = a.div_l(a0, c)?;
    let z = b.div_l(f.twisted(b, a0, b0, x), d)?;
    let y = f.phi(1, a0).iter().position(|&v| v == z).expect("phi is a permutation");
    Ok((x, y))
}

/// An equation `(x,y)·column = target` without a unique solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RightDivisionWitness {
    pub column: (usize, usize),
    pub target: (usize, usize),
    /// Every solution `(x, y)`; empty or of length at least two.
    pub solutions: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RightSolvability {
    RightQuasigroup,
    NotRight { witness: RightDivisionWitness },
}

/// Classifies the smashed product by scanning its columns. When some right
/// translation is not bijective, reports the first column and the first
/// target value whose equation has zero or several solutions.
pub fn right_solvability_probe(a: &FiniteMagma, b: &FiniteMagma, f: &SmashFactors) -> Result<RightSolvability> {
    let m = smashed_product(a, b, f)?;
    Ok(probe_columns(&m, b.order()))
}

pub(crate) fn probe_columns(m: &FiniteMagma, order_b: usize) -> RightSolvability {
    if m.is_right_quasigroup() {
        return RightSolvability::RightQuasigroup;
    }
    let n = m.order();
    let mut hits = vec![Vec::new(); n];
    for col in 0..n {
        hits.iter_mut().for_each(Vec::clear);
        for y in 0..n {
            hits[m.mul(y, col)].push(y);
        }
        if let Some(target) = hits.iter().position(|h| h.len() != 1) {
            return RightSolvability::NotRight {
                witness: RightDivisionWitness {
                    column: decode_pair(order_b, col),
                    target: decode_pair(order_b, target),
                    solutions: hits[target].iter().map(|&s| decode_pair(order_b, s)).collect(),
                },
            };
        }
    }
    unreachable!("a magma without right division has a non-bijective column")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::products::direct_product;

    fn doubling_factors() -> SmashFactors {
        // φ₁(1) = (b ↦ 2b mod 3), everything else trivial.
        let mut f = SmashFactors::trivial(3, 3, 0);
        f.phi[0][3..6].copy_from_slice(&[0, 2, 1]);
        f
    }

    #[test]
    fn trivial_factors_give_the_direct_product() {
        let z2 = corpus::cyclic(2);
        let f = SmashFactors::trivial(2, 2, 0);
        assert_eq!(
            smashed_product(&z2, &z2, &f).unwrap(),
            direct_product(&[z2.clone(), z2]).unwrap()
        );
    }

    #[test]
    fn doubling_twist_gives_a_left_quasigroup() {
        let z3 = corpus::cyclic(3);
        let m = smashed_product(&z3, &z3, &doubling_factors()).unwrap();
        assert_eq!(m.order(), 9);
        assert!(m.is_left_quasigroup());
        // φ₁ is applied to the right factor only, so columns stay bijective
        // exactly when the twisted B-part is.
        let brute_right = (0..9).all(|c| {
            let mut col: Vec<usize> = (0..9).map(|y| m.mul(y, c)).collect();
            col.sort();
            col == (0..9).collect::<Vec<_>>()
        });
        assert_eq!(m.is_right_quasigroup(), brute_right);
    }

    #[test]
    fn closed_form_left_division_matches_row_scan() {
        let z3 = corpus::cyclic(3);
        let f = doubling_factors();
        let m = smashed_product(&z3, &z3, &f).unwrap();
        for p in 0..9 {
            for q in 0..9 {
                let scan = m.row(p).iter().position(|&v| v == q).unwrap();
                let closed = smashed_div_l(&z3, &z3, &f, decode_pair(3, p), decode_pair(3, q)).unwrap();
                assert_eq!(encode_pair(3, closed.0, closed.1), scan);
            }
        }
    }

    #[test]
    fn trivial_factors_divide_componentwise() {
        let (a, b) = (corpus::symmetric(3), corpus::cyclic(4));
        let f = SmashFactors::trivial(6, 4, 0);
        for (p, q) in [((1, 2), (4, 3)), ((5, 0), (0, 0)), ((3, 3), (2, 1))] {
            let got = smashed_div_l(&a, &b, &f, p, q).unwrap();
            assert_eq!(got, (a.div_l(p.0, q.0).unwrap(), b.div_l(p.1, q.1).unwrap()));
        }
    }

    #[test]
    fn dividing_a_product_recovers_the_factor() {
        let z3 = corpus::cyclic(3);
        let f = doubling_factors();
        let m = smashed_product(&z3, &z3, &f).unwrap();
        for p in 0..9 {
            for r in 0..9 {
                let q = m.mul(p, r);
                let got = smashed_div_l(&z3, &z3, &f, decode_pair(3, p), decode_pair(3, q)).unwrap();
                assert_eq!(got, decode_pair(3, r));
            }
        }
    }

    #[test]
    fn probe_on_trivial_and_twisted_factors() {
        let z3 = corpus::cyclic(3);
        assert_eq!(
            right_solvability_probe(&z3, &z3, &SmashFactors::trivial(3, 3, 0)).unwrap(),
            RightSolvability::RightQuasigroup
        );
        // ξ₁(a, b, a') = b makes the B-part 2b₁ + b₂, not injective in b₁.
        let z4 = corpus::cyclic(4);
        let mut f = SmashFactors::trivial(2, 4, 0);
        for a in 0..2 {
            for b in 0..4 {
                for a2 in 0..2 {
                    let i = f.xi_index(a, b, a2);
                    f.xi1[i] = b;
                }
            }
        }
        let z2 = corpus::cyclic(2);
        let m = smashed_product(&z2, &z4, &f).unwrap();
        match right_solvability_probe(&z2, &z4, &f).unwrap() {
            RightSolvability::NotRight { witness } => {
                assert_ne!(witness.solutions.len(), 1);
                let col = encode_pair(4, witness.column.0, witness.column.1);
                let target = encode_pair(4, witness.target.0, witness.target.1);
                let sols: Vec<_> = (0..8).filter(|&y| m.mul(y, col) == target).collect();
                assert_eq!(
                    sols,
                    witness
                        .solutions
                        .iter()
                        .map(|&(x, y)| encode_pair(4, x, y))
                        .collect::<Vec<_>>()
                );
            }
            other => panic!("expected a failing column, got {other:?}"),
        }
    }

    #[test]
    fn constant_non_automorphism_twist_is_classified_by_column_scan() {
        // Every φⱼ(a) is the transposition (1 2) of Z4, never an automorphism;
        // ξ constant 1.
        let z4 = corpus::cyclic(4);
        let z2 = corpus::cyclic(2);
        let perm = [0, 2, 1, 3];
        let phi: Vec<usize> = (0..2).flat_map(|_| perm).collect();
        let f = SmashFactors::new(2, 4, vec![1; 16], vec![1; 16], [phi.clone(), phi.clone(), phi]).unwrap();
        assert!(!z4.is_automorphism(&perm));
        let m = smashed_product(&z2, &z4, &f).unwrap();
        let verdict = right_solvability_probe(&z2, &z4, &f).unwrap();
        assert_eq!(
            matches!(verdict, RightSolvability::RightQuasigroup),
            m.is_right_quasigroup()
        );
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(SmashFactors::new(2, 2, vec![0; 7], vec![0; 8], Default::default()).is_err());
        let id = vec![0, 1, 0, 1];
        assert!(SmashFactors::new(2, 2, vec![0; 8], vec![2; 8], [id.clone(), id.clone(), id.clone()]).is_err());
        assert!(SmashFactors::new(2, 2, vec![0; 8], vec![0; 8], [id.clone(), id.clone(), vec![0, 0, 0, 1]]).is_err());
        let f = SmashFactors::trivial(2, 2, 0);
        let z3 = corpus::cyclic(3);
        assert!(matches!(smashed_product(&z3, &z3, &f), Err(QgError::Precondition(_))));
        let proj = FiniteMagma::from_table(2, &[vec![0, 0], vec![1, 1]]).unwrap();
        assert!(matches!(
            smashed_product(&proj, &corpus::cyclic(2), &f),
            Err(QgError::Precondition(_))
        ));
    }
}
