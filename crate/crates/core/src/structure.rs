//! Commutant, nuclei, center, associators, fans, normality and quotients.

use rayon::prelude::*;

use crate::error::{QgError, Result};
use crate::magma::FiniteMagma;
use crate::subset::ElementSubset;

/// Orders up to this size get materialized `n³` associator tables.
pub const ASSOCIATOR_TABLE_MAX_ORDER: usize = 24;

/// The distinguished subsets of a magma, each computed by exhaustive
/// quantifier elimination over the Cayley table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    /// Elements commuting with everything.
    pub com: ElementSubset,
    /// `a` with `(ab)c = a(bc)` for all `b, c`.
    pub n_l: ElementSubset,
    /// `a` with `(ba)c = b(ac)` for all `b, c`.
    pub n_m: ElementSubset,
    /// `a` with `(bc)a = b(ca)` for all `b, c`.
    pub n_r: ElementSubset,
    pub nucleus: ElementSubset,
    pub center: ElementSubset,
    pub unit: Option<usize>,
    pub left_units: Vec<usize>,
    pub right_units: Vec<usize>,
}

fn parallel_filter(n: usize, pred: impl Fn(usize) -> bool + Sync) -> ElementSubset {
    let members: Vec<usize> = (0..n).into_par_iter().filter(|&a| pred(a)).collect();
    ElementSubset::from_elements(n, members).expect("members are in range")
}

pub fn structure_report(m: &FiniteMagma) -> StructureReport {
    let n = m.order();
    let com = parallel_filter(n, |a| (0..n).all(|b| m.mul(a, b) == m.mul(b, a)));
    let n_l = parallel_filter(n, |a| {
        (0..n).all(|b| {
            let ab = m.mul(a, b);
            (0..n).all(|c| m.mul(ab, c) == m.mul(a, m.mul(b, c)))
        })
    });
    let n_m = parallel_filter(n, |a| {
        (0..n).all(|b| {
            let ba = m.mul(b, a);
            (0..n).all(|c| m.mul(ba, c) == m.mul(b, m.mul(a, c)))
        })
    });
    let n_r = parallel_filter(n, |a| {
        (0..n).all(|b| (0..n).all(|c| m.mul(m.mul(b, c), a) == m.mul(b, m.mul(c, a))))
    });
    let nucleus = n_l.intersection(&n_m).intersection(&n_r);
    let center = com.intersection(&nucleus);
    StructureReport {
        com,
        n_l,
        n_m,
        n_r,
        nucleus,
        center,
        unit: m.find_unit(),
        left_units: m.left_units(),
        right_units: m.right_units(),
    }
}

/// `t(a,b,c) = ((ab)c)/(a(bc))`.
pub fn associator_t(m: &FiniteMagma, a: usize, b: usize, c: usize) -> Result<usize> {
    let lhs = m.mul(m.mul(a, b), c);
    let rhs = m.mul(a, m.mul(b, c));
    m.div_r(rhs, lhs)
}

/// `p(a,b,c) = (a(bc))\((ab)c)`.
pub fn associator_p(m: &FiniteMagma, a: usize, b: usize, c: usize) -> Result<usize> {
    let lhs = m.mul(m.mul(a, b), c);
    let rhs = m.mul(a, m.mul(b, c));
    m.div_l(rhs, lhs)
}

/// The closure of `generators ∪ {unit}` under multiplication.
///
/// Inside a finite group this is the generated subgroup.
pub fn generated_submagma(
    m: &FiniteMagma,
    unit: Option<usize>,
    generators: impl IntoIterator<Item = usize>,
) -> ElementSubset {
    let mut set = ElementSubset::empty(m.order());
    let mut members = Vec::new();
    for g in unit.into_iter().chain(generators) {
        if set.insert(g) {
            members.push(g);
        }
    }
    let mut next = 0;
    while next < members.len() {
        let x = members[next];
        next += 1;
        let mut i = 0;
        while i < members.len() {
            let y = members[i];
            for z in [m.mul(x, y), m.mul(y, x)] {
                if set.insert(z) {
                    members.push(z);
                }
            }
            i += 1;
        }
    }
    set
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Associators {
    Tables { t: Vec<usize>, p: Vec<usize> },
    OnDemand,
}

/// Witness that a unital quasigroup is a fan quasigroup: every associator
/// `t(a,b,c)` and `p(a,b,c)` lies in the nucleus.
///
/// Carries the nucleus, the center and the fan, the subgroup generated by
/// all associator values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanCertificate {
    base: FiniteMagma,
    unit: usize,
    nucleus: ElementSubset,
    center: ElementSubset,
    fan: ElementSubset,
    assoc: Associators,
}

impl FanCertificate {
    pub fn base(&self) -> &FiniteMagma {
        &self.base
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn nucleus(&self) -> &ElementSubset {
        &self.nucleus
    }

    pub fn center(&self) -> &ElementSubset {
        &self.center
    }

    /// The fan `N₀`.
    pub fn fan(&self) -> &ElementSubset {
        &self.fan
    }

    pub fn is_materialized(&self) -> bool {
        matches!(self.assoc, Associators::Tables { .. })
    }

    #[inline]
    pub fn t(&self, a: usize, b: usize, c: usize) -> usize {
        match &self.assoc {
            Associators::Tables { t, .. } => t[self.index(a, b, c)],
            Associators::OnDemand => {
                let m = &self.base;
                m.rd(m.mul(a, m.mul(b, c)), m.mul(m.mul(a, b), c))
            }
        }
    }

    #[inline]
    pub fn p(&self, a: usize, b: usize, c: usize) -> usize {
        match &self.assoc {
            Associators::Tables { p, .. } => p[self.index(a, b, c)],
            Associators::OnDemand => {
                let m = &self.base;
                m.ld(m.mul(a, m.mul(b, c)), m.mul(m.mul(a, b), c))
            }
        }
    }

    /// Inverse of a nucleus element, `x\e`.
    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.base.ld(x, self.unit)
    }

    #[inline]
    fn index(&self, a: usize, b: usize, c: usize) -> usize {
        let n = self.base.order();
        (a * n + b) * n + c
    }

    fn materialize(&mut self) {
        if self.is_materialized() {
            return;
        }
        let n = self.base.order();
        let mut t = Vec::with_capacity(n * n * n);
        let mut p = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    t.push(self.t(a, b, c));
                    p.push(self.p(a, b, c));
                }
            }
        }
        self.assoc = Associators::Tables { t, p };
    }

    /// Overwrites one stored `t` value. For harness self-tests that need a
    /// deliberately broken certificate.
    pub fn override_t(&mut self, a: usize, b: usize, c: usize, value: usize) {
        self.materialize();
        let i = self.index(a, b, c);
        if let Associators::Tables { t, .. } = &mut self.assoc {
            t[i] = value;
        }
    }

    /// Overwrites one stored `p` value. See [`FanCertificate::override_t`].
    pub fn override_p(&mut self, a: usize, b: usize, c: usize, value: usize) {
        self.materialize();
        let i = self.index(a, b, c);
        if let Associators::Tables { p, .. } = &mut self.assoc {
            p[i] = value;
        }
    }

    /// Replaces the stored nucleus and center. For harness self-tests.
    pub fn override_subsets(&mut self, nucleus: ElementSubset, center: ElementSubset) {
        self.nucleus = nucleus;
        self.center = center;
    }

    /// Builds a certificate from externally supplied associator functions,
    /// such as the componentwise ones of a direct product.
    ///
    /// The supplied values are checked against `(ab)c = t·(a(bc))` and
    /// `(ab)c = (a(bc))·p` and against nucleus membership.
    pub fn from_associators(
        base: FiniteMagma,
        t: impl Fn(usize, usize, usize) -> usize,
        p: impl Fn(usize, usize, usize) -> usize,
    ) -> Result<Self> {
        let unit = base
            .find_unit()
            .filter(|_| base.is_quasigroup())
            .ok_or_else(|| QgError::Precondition("a fan quasigroup must be a unital quasigroup".into()))?;
        let report = structure_report(&base);
        let n = base.order();
        let mut tt = Vec::with_capacity(n * n * n);
        let mut pp = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (tv, pv) = (t(a, b, c), p(a, b, c));
                    let lhs = base.mul(base.mul(a, b), c);
                    let rhs = base.mul(a, base.mul(b, c));
                    if tv >= n || pv >= n || base.mul(tv, rhs) != lhs || base.mul(rhs, pv) != lhs {
                        return Err(QgError::Precondition(format!(
                            "supplied associators do not satisfy (ab)c = t·a(bc) = a(bc)·p at ({a}, {b}, {c})"
                        )));
                    }
                    if !report.nucleus.contains(tv) || !report.nucleus.contains(pv) {
                        return Err(QgError::Precondition(format!(
                            "associator value at ({a}, {b}, {c}) is outside the nucleus"
                        )));
                    }
                    tt.push(tv);
                    pp.push(pv);
                }
            }
        }
        let mut values = ElementSubset::empty(n);
        for &v in tt.iter().chain(&pp) {
            values.insert(v);
        }
        let fan = generated_submagma(&base, Some(unit), values.iter());
        Ok(FanCertificate {
            base,
            unit,
            nucleus: report.nucleus,
            center: report.center,
            fan,
            assoc: Associators::Tables { t: tt, p: pp },
        })
    }
}

/// Decides whether `m` is a fan quasigroup and, if so, returns the
/// certificate. Absence is the negative answer.
pub fn fan_certificate(m: &FiniteMagma) -> Option<FanCertificate> {
    if !m.is_quasigroup() {
        return None;
    }
    let unit = m.find_unit()?;
    let report = structure_report(m);
    let n = m.order();
    let nucleus = &report.nucleus;

    // One row of (t, p) values per leading element; None on the first
    // associator that escapes the nucleus.
    let rows: Option<Vec<(Vec<usize>, Vec<usize>)>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut t = Vec::with_capacity(n * n);
            let mut p = Vec::with_capacity(n * n);
            for b in 0..n {
                let ab = m.mul(a, b);
                for c in 0..n {
                    let lhs = m.mul(ab, c);
                    let rhs = m.mul(a, m.mul(b, c));
                    let tv = m.rd(rhs, lhs);
                    let pv = m.ld(rhs, lhs);
                    if !nucleus.contains(tv) || !nucleus.contains(pv) {
                        return None;
                    }
                    t.push(tv);
                    p.push(pv);
                }
            }
            Some((t, p))
        })
        .collect();
    let rows = rows?;

    let mut values = ElementSubset::empty(n);
    for (t, p) in &rows {
        for &v in t.iter().chain(p) {
            values.insert(v);
        }
    }
    let fan = generated_submagma(m, Some(unit), values.iter());
    let assoc = if n <= ASSOCIATOR_TABLE_MAX_ORDER {
        let (t, p): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
        Associators::Tables {
            t: t.concat(),
            p: p.concat(),
        }
    } else {
        Associators::OnDemand
    };
    Some(FanCertificate {
        base: m.clone(),
        unit,
        nucleus: report.nucleus,
        center: report.center,
        fan,
        assoc,
    })
}

/// Checks that `h` is a nonempty subquasigroup: closed under
/// multiplication and both divisions.
pub fn is_subquasigroup(m: &FiniteMagma, h: &ElementSubset) -> Result<bool> {
    if !m.is_quasigroup() {
        return Err(QgError::AxiomViolation(
            "subquasigroups are defined inside quasigroups".into(),
        ));
    }
    if h.parent_order() != m.order() {
        return Err(QgError::Precondition(format!(
            "subset of an order-{} structure used with an order-{} magma",
            h.parent_order(),
            m.order()
        )));
    }
    if h.is_empty() {
        return Ok(false);
    }
    let members = h.to_vec();
    Ok(members.iter().all(|&a| {
        members
            .iter()
            .all(|&b| h.contains(m.mul(a, b)) && h.contains(m.ld(a, b)) && h.contains(m.rd(a, b)))
    }))
}

fn left_translate(m: &FiniteMagma, x: usize, h: &ElementSubset) -> ElementSubset {
    let mut s = ElementSubset::empty(m.order());
    for a in h.iter() {
        s.insert(m.mul(x, a));
    }
    s
}

fn right_translate(m: &FiniteMagma, h: &ElementSubset, x: usize) -> ElementSubset {
    let mut s = ElementSubset::empty(m.order());
    for a in h.iter() {
        s.insert(m.mul(a, x));
    }
    s
}

/// Normality of a subquasigroup: `xH = Hx` and
/// `(xy)H = x(yH)`, `(xH)y = x(Hy)`, `H(xy) = (Hx)y` for all `x, y`,
/// each compared as literal sets.
pub fn is_normal(m: &FiniteMagma, h: &ElementSubset) -> Result<bool> {
    if !is_subquasigroup(m, h)? {
        return Err(QgError::Precondition("subset is not a nonempty subquasigroup".into()));
    }
    let n = m.order();
    let left: Vec<ElementSubset> = (0..n).map(|x| left_translate(m, x, h)).collect();
    let right: Vec<ElementSubset> = (0..n).map(|x| right_translate(m, h, x)).collect();
    if (0..n).any(|x| left[x] != right[x]) {
        return Ok(false);
    }
    let image_left = |x: usize, s: &ElementSubset| {
        let mut out = ElementSubset::empty(n);
        for a in s.iter() {
            out.insert(m.mul(x, a));
        }
        out
    };
    let image_right = |s: &ElementSubset, y: usize| {
        let mut out = ElementSubset::empty(n);
        for a in s.iter() {
            out.insert(m.mul(a, y));
        }
        out
    };
    let ok = (0..n).into_par_iter().all(|x| {
        (0..n).all(|y| {
            let xy = m.mul(x, y);
            left[xy] == image_left(x, &left[y])
                && image_right(&left[x], y) == image_left(x, &right[y])
                && right[xy] == image_right(&right[x], y)
        })
    });
    Ok(ok)
}

/// The quotient of a fan quasigroup by a normal subgroup `N₁` with
/// `fan ⊆ N₁ ⊆ N(G)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientGroup {
    pub base: FiniteMagma,
    pub subgroup: ElementSubset,
    /// Cosets `aN₁`, ordered by their smallest member.
    pub cosets: Vec<Vec<usize>>,
    pub quotient: FiniteMagma,
    /// Coset index of each element.
    pub projection: Vec<usize>,
}

pub fn quotient(m: &FiniteMagma, n1: &ElementSubset) -> Result<QuotientGroup> {
    let cert = fan_certificate(m)
        .ok_or_else(|| QgError::Precondition("quotients are taken of fan quasigroups only".into()))?;
    if n1.parent_order() != m.order() {
        return Err(QgError::Precondition("subgroup has the wrong parent order".into()));
    }
    if !cert.fan().is_subset(n1) {
        return Err(QgError::Precondition(format!(
            "subgroup {n1} does not contain the fan {}",
            cert.fan()
        )));
    }
    if !n1.is_subset(cert.nucleus()) {
        return Err(QgError::Precondition(format!(
            "subgroup {n1} is not inside the nucleus {}",
            cert.nucleus()
        )));
    }
    if !n1.contains(cert.unit()) || generated_submagma(m, None, n1.iter()) != *n1 {
        return Err(QgError::Precondition(format!("{n1} is not a subgroup")));
    }
    let n = m.order();
    if (0..n).any(|x| left_translate(m, x, n1) != right_translate(m, n1, x)) {
        return Err(QgError::Precondition(format!("{n1} fails xH = Hx")));
    }

    let mut projection = vec![usize::MAX; n];
    let mut cosets: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        if projection[a] != usize::MAX {
            continue;
        }
        let coset = left_translate(m, a, n1);
        let idx = cosets.len();
        for x in coset.iter() {
            if projection[x] != usize::MAX {
                return Err(QgError::Internal(format!(
                    "cosets overlap at element {x}; {n1} does not partition the carrier"
                )));
            }
            projection[x] = idx;
        }
        cosets.push(coset.to_vec());
    }

    let k = cosets.len();
    let mut table = vec![usize::MAX; k * k];
    for a in 0..n {
        for b in 0..n {
            let cell = &mut table[projection[a] * k + projection[b]];
            let value = projection[m.mul(a, b)];
            if *cell == usize::MAX {
                *cell = value;
            } else if *cell != value {
                return Err(QgError::Internal(format!(
                    "coset product is ill-defined at representatives ({a}, {b})"
                )));
            }
        }
    }
    let quotient = FiniteMagma::from_flat(k, table)?;
    if !quotient.is_group() {
        return Err(QgError::Internal("quotient table is not a group".into()));
    }
    Ok(QuotientGroup {
        base: m.clone(),
        subgroup: n1.clone(),
        cosets,
        quotient,
        projection,
    })
}

/// The conjugation maps `((a·β)/a, a\(β·a))`.
pub fn conj_maps(m: &FiniteMagma, a: usize, beta: usize) -> Result<(usize, usize)> {
    let r = m.div_r(a, m.mul(a, beta))?;
    let r_check = m.div_l(a, m.mul(beta, a))?;
    Ok((r, r_check))
}
