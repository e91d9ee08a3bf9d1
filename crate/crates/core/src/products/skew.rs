use serde::{Deserialize, Serialize};

use super::{decode_pair, encode_pair};
use crate::error::{QgError, Result};
use crate::magma::{is_permutation, FiniteMagma};
use crate::structure::{fan_certificate, generated_submagma, is_normal, FanCertificate};
use crate::subset::ElementSubset;

/// Validation stops recording instances past this many; the count goes on.
pub const MAX_REPORTED_ISSUES: usize = 256;

/// Smashing factors of a skew smashed product `A ♣ B`.
///
/// `N` is a group given by its own table together with embeddings into
/// `A` and `B`. The maps `η`, `κ`, `ξ` take values in `N` (as indices into
/// `n_group`); `φ(a)` is a permutation of `B` and `b^a` denotes `φ(a)b`.
/// The product is
///
/// ```text
/// (a₁,b₁)(a₂,b₂) = (a₁a₂, (b₂^a₁ · b₁) · ξ((a₁,b₁),(a₂,b₂)))
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewFactors {
    order_a: usize,
    order_b: usize,
    n_group: FiniteMagma,
    embed_a: Vec<usize>,
    embed_b: Vec<usize>,
    /// `φ(a)b` at `a·|B| + b`.
    phi: Vec<usize>,
    /// `η(v,u,b)` at `(v·|A| + u)·|B| + b`.
    eta: Vec<usize>,
    /// `κ(u,c,b)` at `(u·|B| + c)·|B| + b`.
    kappa: Vec<usize>,
    /// `ξ((u,c),(v,b))` at `((u·|B| + c)·|A| + v)·|B| + b`.
    xi: Vec<usize>,
}

fn check_table(name: &str, table: &[usize], len: usize, bound: usize) -> Result<()> {
    if table.len() != len {
        return Err(QgError::shape(
            name,
            format!("expected {len} entries, found {}", table.len()),
        ));
    }
    if let Some(i) = table.iter().position(|&v| v >= bound) {
        return Err(QgError::shape(
            format!("{name} entry {i}"),
            format!("value {} is outside 0..{bound}", table[i]),
        ));
    }
    Ok(())
}

impl SkewFactors {
    /// Builds factors from flat tables, checking shapes and ranges only.
    /// The algebraic conditions are checked by [`validate_skew_factors`].
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        order_a: usize,
        order_b: usize,
        n_group: FiniteMagma,
        embed_a: Vec<usize>,
        embed_b: Vec<usize>,
        phi: Vec<usize>,
        eta: Vec<usize>,
        kappa: Vec<usize>,
        xi: Vec<usize>,
    ) -> Result<Self> {
        let (na, nb, nn) = (order_a, order_b, n_group.order());
        check_table("embed_a", &embed_a, nn, na)?;
        check_table("embed_b", &embed_b, nn, nb)?;
        check_table("phi", &phi, na * nb, nb)?;
        for a in 0..na {
            if !is_permutation(&phi[a * nb..(a + 1) * nb], nb) {
                return Err(QgError::shape(format!("phi[{a}]"), "not a permutation"));
            }
        }
        check_table("eta", &eta, na * na * nb, nn)?;
        check_table("kappa", &kappa, na * nb * nb, nn)?;
        check_table("xi", &xi, na * nb * na * nb, nn)?;
        Ok(SkewFactors {
            order_a,
            order_b,
            n_group,
            embed_a,
            embed_b,
            phi,
            eta,
            kappa,
            xi,
        })
    }

    /// Identity `φ` and `η ≡ κ ≡ ξ ≡ e`.
    pub fn trivial(
        order_a: usize,
        order_b: usize,
        n_group: FiniteMagma,
        embed_a: Vec<usize>,
        embed_b: Vec<usize>,
    ) -> Result<Self> {
        let e = n_group
            .find_unit()
            .ok_or_else(|| QgError::Precondition("the group N must have a unit".into()))?;
        let phi = (0..order_a).flat_map(|_| 0..order_b).collect();
        Self::new(
            order_a,
            order_b,
            n_group,
            embed_a,
            embed_b,
            phi,
            vec![e; order_a * order_a * order_b],
            vec![e; order_a * order_b * order_b],
            vec![e; order_a * order_b * order_a * order_b],
        )
    }

    /// The same factors with `ξ` replaced.
    pub fn with_xi(&self, xi: Vec<usize>) -> Result<Self> {
        Self::new(
            self.order_a,
            self.order_b,
            self.n_group.clone(),
            self.embed_a.clone(),
            self.embed_b.clone(),
            self.phi.clone(),
            self.eta.clone(),
            self.kappa.clone(),
            xi,
        )
    }

    pub fn order_a(&self) -> usize {
        self.order_a
    }

    pub fn order_b(&self) -> usize {
        self.order_b
    }

    pub fn n_group(&self) -> &FiniteMagma {
        &self.n_group
    }

    pub fn embed_a(&self) -> &[usize] {
        &self.embed_a
    }

    pub fn embed_b(&self) -> &[usize] {
        &self.embed_b
    }

    pub fn phi_table(&self) -> &[usize] {
        &self.phi
    }

    pub fn eta_table(&self) -> &[usize] {
        &self.eta
    }

    pub fn kappa_table(&self) -> &[usize] {
        &self.kappa
    }

    pub fn xi_table(&self) -> &[usize] {
        &self.xi
    }

    /// `b^a = φ(a)b`.
    #[inline]
    pub fn act(&self, a: usize, b: usize) -> usize {
        self.phi[a * self.order_b + b]
    }

    #[inline]
    pub fn eta(&self, v: usize, u: usize, b: usize) -> usize {
        self.eta[(v * self.order_a + u) * self.order_b + b]
    }

    #[inline]
    pub fn kappa(&self, u: usize, c: usize, b: usize) -> usize {
        self.kappa[(u * self.order_b + c) * self.order_b + b]
    }

    #[inline]
    pub fn xi_index(&self, u: usize, c: usize, v: usize, b: usize) -> usize {
        ((u * self.order_b + c) * self.order_a + v) * self.order_b + b
    }

    #[inline]
    pub fn xi(&self, u: usize, c: usize, v: usize, b: usize) -> usize {
        self.xi[self.xi_index(u, c, v, b)]
    }

    /// `ξ((u,c),(v,b))` as an element of `B`.
    #[inline]
    pub fn xi_in_b(&self, u: usize, c: usize, v: usize, b: usize) -> usize {
        self.embed_b[self.xi(u, c, v, b)]
    }

    pub fn n_image_a(&self) -> ElementSubset {
        ElementSubset::from_elements(self.order_a, self.embed_a.iter().copied()).expect("checked")
    }

    pub fn n_image_b(&self) -> ElementSubset {
        ElementSubset::from_elements(self.order_b, self.embed_b.iter().copied()).expect("checked")
    }

    /// Whether `ξ` differs from the unit of `N` somewhere.
    pub fn has_nontrivial_xi(&self) -> bool {
        let e = self.n_group.find_unit();
        self.xi.iter().any(|&x| Some(x) != e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ValidationIssue {
    /// A condition on a whole object (a factor, an embedding) failed.
    Structural { equation: String, message: String },
    /// An equation failed at specific arguments.
    Instance {
        equation: String,
        arguments: Vec<usize>,
        expected: usize,
        got: usize,
    },
}

impl ValidationIssue {
    pub fn equation(&self) -> &str {
        match self {
            ValidationIssue::Structural { equation, .. } | ValidationIssue::Instance { equation, .. } => equation,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// The first [`MAX_REPORTED_ISSUES`] failures, in check order.
    pub issues: Vec<ValidationIssue>,
    pub issue_count: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issue_count == 0
    }

    fn push(&mut self, issue: ValidationIssue) {
        self.issue_count += 1;
        if self.issues.len() < MAX_REPORTED_ISSUES {
            self.issues.push(issue);
        }
    }

    fn structural(&mut self, equation: &str, message: impl Into<String>) {
        self.push(ValidationIssue::Structural {
            equation: equation.into(),
            message: message.into(),
        });
    }

    fn expect(&mut self, equation: &str, arguments: &[usize], expected: usize, got: usize) {
        if expected != got {
            self.push(ValidationIssue::Instance {
                equation: equation.into(),
                arguments: arguments.to_vec(),
                expected,
                got,
            });
        }
    }
}

/// Checks the admission conditions for skew smashing factors exhaustively.
///
/// * `41`: `A`, `B` are fan quasigroups, `N` is a group, the embeddings are
///   injective unit-preserving homomorphisms whose images lie in the nuclei,
///   contain the fans and are normal.
/// * `44`: `(b^u)^v = b^{vu}·η(v,u,b)`, `γ^u = γ`, `b^γ = b`.
/// * `45`: `η` is constant on `N`-shifts of `b` and trivial on `N`.
/// * `46`: `(cb)^u = (c^u·b^u)·κ(u,c,b)`.
/// * `47`: `κ` is constant on `N`-shifts of `c`, `b` and trivial on `N`.
/// * `48`: `ξ` is constant on `N`-shifts of all four slots and
///   `ξ((e,e),·) = ξ(·,(e,e)) = e`.
///
/// Invariance under combined shifts such as `(γ₁b)γ₂` follows from
/// invariance under each one-sided shift, which is what is checked.
pub fn validate_skew_factors(a: &FiniteMagma, b: &FiniteMagma, f: &SkewFactors) -> ValidationReport {
    let mut report = ValidationReport::default();
    if a.order() != f.order_a || b.order() != f.order_b {
        report.structural(
            "shape",
            format!(
                "factors are shaped for |A| = {}, |B| = {} but got {} and {}",
                f.order_a,
                f.order_b,
                a.order(),
                b.order()
            ),
        );
        return report;
    }
    let ng = &f.n_group;
    if !ng.is_group() {
        report.structural("41", "N is not a group");
        return report;
    }
    let cert_a = fan_certificate(a);
    let cert_b = fan_certificate(b);
    if cert_a.is_none() {
        report.structural("41", "A is not a fan quasigroup");
    }
    if cert_b.is_none() {
        report.structural("41", "B is not a fan quasigroup");
    }
    let (Some(cert_a), Some(cert_b)) = (cert_a, cert_b) else {
        return report;
    };
    let (ea, eb, en) = (cert_a.unit(), cert_b.unit(), ng.find_unit().expect("group"));
    let nn = ng.order();

    for (side, m, cert, embed, unit) in [("A", a, &cert_a, &f.embed_a, ea), ("B", b, &cert_b, &f.embed_b, eb)] {
        let image = ElementSubset::from_elements(m.order(), embed.iter().copied()).expect("checked");
        if image.len() != nn {
            report.structural("41", format!("embedding into {side} is not injective"));
        }
        if embed[en] != unit {
            report.structural("41", format!("embedding into {side} does not send e to the unit"));
        }
        for g in 0..nn {
            for h in 0..nn {
                report.expect(
                    &format!("41:hom-{side}"),
                    &[g, h],
                    m.mul(embed[g], embed[h]),
                    embed[ng.mul(g, h)],
                );
            }
        }
        if !image.is_subset(cert.nucleus()) {
            report.structural("41", format!("image of N is not inside the nucleus of {side}"));
        }
        if !cert.fan().is_subset(&image) {
            report.structural("41", format!("image of N does not contain the fan of {side}"));
        }
        match is_normal(m, &image) {
            Ok(true) => {}
            Ok(false) => report.structural("41", format!("image of N is not normal in {side}")),
            Err(e) => report.structural("41", format!("image of N in {side}: {e}")),
        }
    }
    if !report.is_valid() {
        return report;
    }

    let (na, nb) = (a.order(), b.order());
    let in_na = f.n_image_a();
    let in_nb = f.n_image_b();
    let ga = |g: usize| f.embed_a[g];
    let gb = |g: usize| f.embed_b[g];

    // 44
    for u in 0..na {
        for v in 0..na {
            let vu = a.mul(v, u);
            for x in 0..nb {
                let lhs = f.act(v, f.act(u, x));
                let rhs = b.mul(f.act(vu, x), gb(f.eta(v, u, x)));
                report.expect("44", &[v, u, x], lhs, rhs);
            }
        }
        for g in 0..nn {
            report.expect("44:gamma^u", &[u, g], gb(g), f.act(u, gb(g)));
        }
    }
    for g in 0..nn {
        for x in 0..nb {
            report.expect("44:b^gamma", &[g, x], x, f.act(ga(g), x));
        }
    }

    // 45
    for v in 0..na {
        for u in 0..na {
            for x in 0..nb {
                let base = f.eta(v, u, x);
                for g in 0..nn {
                    report.expect("45", &[v, u, b.mul(gb(g), x)], base, f.eta(v, u, b.mul(gb(g), x)));
                    report.expect("45", &[v, u, b.mul(x, gb(g))], base, f.eta(v, u, b.mul(x, gb(g))));
                }
                if in_na.contains(v) || in_na.contains(u) || in_nb.contains(x) {
                    report.expect("45:unit", &[v, u, x], en, base);
                }
            }
        }
    }

    // 46, 47
    for u in 0..na {
        for c in 0..nb {
            for x in 0..nb {
                let lhs = f.act(u, b.mul(c, x));
                let rhs = b.mul(b.mul(f.act(u, c), f.act(u, x)), gb(f.kappa(u, c, x)));
                report.expect("46", &[u, c, x], lhs, rhs);

                let base = f.kappa(u, c, x);
                for g in 0..nn {
                    let n = gb(g);
                    for (c2, x2) in [(b.mul(n, c), x), (b.mul(c, n), x), (c, b.mul(n, x)), (c, b.mul(x, n))] {
                        report.expect("47", &[u, c2, x2], base, f.kappa(u, c2, x2));
                    }
                }
                if in_na.contains(u) || in_nb.contains(c) || in_nb.contains(x) {
                    report.expect("47:unit", &[u, c, x], en, base);
                }
            }
        }
    }

    // 48
    for u in 0..na {
        for c in 0..nb {
            for v in 0..na {
                for x in 0..nb {
                    let base = f.xi(u, c, v, x);
                    for g in 0..nn {
                        let (ng_a, ng_b) = (ga(g), gb(g));
                        for args in [
                            [a.mul(ng_a, u), c, v, x],
                            [a.mul(u, ng_a), c, v, x],
                            [u, b.mul(ng_b, c), v, x],
                            [u, b.mul(c, ng_b), v, x],
                            [u, c, a.mul(ng_a, v), x],
                            [u, c, a.mul(v, ng_a), x],
                            [u, c, v, b.mul(ng_b, x)],
                            [u, c, v, b.mul(x, ng_b)],
                        ] {
                            report.expect("48", &args, base, f.xi(args[0], args[1], args[2], args[3]));
                        }
                    }
                }
            }
        }
    }
    for u in 0..na {
        for c in 0..nb {
            report.expect("48:unit", &[ea, eb, u, c], en, f.xi(ea, eb, u, c));
            report.expect("48:unit", &[u, c, ea, eb], en, f.xi(u, c, ea, eb));
        }
    }
    report
}

/// Which division [`SkewProduct::div`] computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DivisionSide {
    /// `g\h`, the unique `x` with `g·x = h`.
    Left,
    /// `h/g`, the unique `y` with `y·g = h`.
    Right,
}

/// A skew smashed product together with its fan certificate and the data
/// it was built from.
#[derive(Clone, Debug)]
pub struct SkewProduct {
    pub magma: FiniteMagma,
    pub certificate: FanCertificate,
    a: FiniteMagma,
    b: FiniteMagma,
    factors: SkewFactors,
}

/// Builds `A ♣ B`. The factors must pass [`validate_skew_factors`]. The
/// result is checked to be a unital quasigroup with unit `(e,e)` whose
/// associators lie in the subgroup generated by `(N,e) ∪ (e,N)`.
pub fn skew_smashed_product(a: &FiniteMagma, b: &FiniteMagma, f: &SkewFactors) -> Result<SkewProduct> {
    let report = validate_skew_factors(a, b, f);
    if let Some(first) = report.issues.first() {
        return Err(QgError::Precondition(format!(
            "{} skew factor condition(s) fail, first: {first:?}",
            report.issue_count
        )));
    }
    let nb = b.order();
    let mut grouping_error = None;
    let magma = FiniteMagma::from_fn(a.order() * nb, |x, y| {
        let (a1, b1) = decode_pair(nb, x);
        let (a2, b2) = decode_pair(nb, y);
        let twist = f.xi_in_b(a1, b1, a2, b2);
        let lead = f.act(a1, b2);
        let left = b.mul(b.mul(lead, b1), twist);
        if grouping_error.is_none() && left != b.mul(lead, b.mul(b1, twist)) {
            grouping_error = Some((x, y));
        }
        encode_pair(nb, a.mul(a1, a2), left)
    })?;
    if let Some((x, y)) = grouping_error {
        return Err(QgError::Internal(format!(
            "B-part grouping depends on bracketing at ({x}, {y})"
        )));
    }
    let unit = encode_pair(nb, a.find_unit().expect("fan"), b.find_unit().expect("fan"));
    if !magma.is_quasigroup() || magma.find_unit() != Some(unit) {
        return Err(QgError::Internal(
            "skew smashed product is not a quasigroup with unit (e,e)".into(),
        ));
    }
    let certificate = fan_certificate(&magma)
        .ok_or_else(|| QgError::Internal("skew smashed product is not a fan quasigroup".into()))?;

    let (ea, eb) = decode_pair(nb, unit);
    let generators = f
        .embed_a
        .iter()
        .map(|&g| encode_pair(nb, g, eb))
        .chain(f.embed_b.iter().map(|&g| encode_pair(nb, ea, g)));
    let nn_sub = generated_submagma(&magma, Some(unit), generators);
    let n = magma.order();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (t, p) = (certificate.t(x, y, z), certificate.p(x, y, z));
                if !nn_sub.contains(t) || !nn_sub.contains(p) {
                    return Err(QgError::Internal(format!(
                        "associator at ({x}, {y}, {z}) escapes the subgroup generated by (N,e) and (e,N)"
                    )));
                }
            }
        }
    }
    Ok(SkewProduct {
        magma,
        certificate,
        a: a.clone(),
        b: b.clone(),
        factors: f.clone(),
    })
}

impl SkewProduct {
    pub fn a(&self) -> &FiniteMagma {
        &self.a
    }

    pub fn b(&self) -> &FiniteMagma {
        &self.b
    }

    pub fn factors(&self) -> &SkewFactors {
        &self.factors
    }

    pub fn encode(&self, a: usize, b: usize) -> usize {
        encode_pair(self.b.order(), a, b)
    }

    pub fn decode(&self, x: usize) -> (usize, usize) {
        decode_pair(self.b.order(), x)
    }

    fn units(&self) -> (usize, usize) {
        (self.a.find_unit().expect("fan"), self.b.find_unit().expect("fan"))
    }

    /// `(e,e)/(a,b)` from `x = e/a`, `y = (b^x\e)/ξ((x, b^x\e),(a,b))`.
    pub fn unit_right_quotient(&self, pair: (usize, usize)) -> (usize, usize) {
        let (a, b) = pair;
        let (ea, eb) = self.units();
        let f = &self.factors;
        let x = self.a.rd(a, ea);
        let w = self.b.ld(f.act(x, b), eb);
        let y = self.b.rd(f.xi_in_b(x, w, a, b), w);
        (x, y)
    }

    /// `(a,b)\(e,e)` from `v = a\e` and
    /// `z = {[ξ((a,b),(v,(e/b)^{e/a}))]⁻¹/b}^{e/a} / η(e/a,a,(e/b)^{e/a})`.
    pub fn unit_left_quotient(&self, pair: (usize, usize)) -> (usize, usize) {
        let (a, b) = pair;
        let (ea, eb) = self.units();
        let f = &self.factors;
        let v = self.a.ld(a, ea);
        let a_bar = self.a.rd(a, ea);
        let probe = f.act(a_bar, self.b.rd(b, eb));
        let xi = f.xi_in_b(a, b, v, probe);
        let xi_inv = self.b.ld(xi, eb);
        let lifted = f.act(a_bar, self.b.rd(b, xi_inv));
        let eta = f.embed_b()[f.eta(a_bar, a, probe)];
        let z = self.b.rd(eta, lifted);
        (v, z)
    }

    /// `g\h` (left) or `h/g` (right) through the closed forms
    /// `g\h = ((g\e)h)·p(g, g\e, h)` and `h/g = [t(h, e/g, g)]⁻¹·(h(e/g))`.
    pub fn div(&self, side: DivisionSide, g: (usize, usize), h: (usize, usize)) -> Result<(usize, usize)> {
        let n = self.magma.order();
        let (gi, hi) = (self.encode(g.0, g.1), self.encode(h.0, h.1));
        if g.0 >= self.a.order()
            || h.0 >= self.a.order()
            || g.1 >= self.b.order()
            || h.1 >= self.b.order()
            || gi >= n
            || hi >= n
        {
            return Err(QgError::Precondition("pair is outside A × B".into()));
        }
        let m = &self.magma;
        let cert = &self.certificate;
        let out = match side {
            DivisionSide::Left => {
                let (v, z) = self.unit_left_quotient(g);
                let w = self.encode(v, z);
                m.mul(m.mul(w, hi), cert.p(gi, w, hi))
            }
            DivisionSide::Right => {
                let (x, y) = self.unit_right_quotient(g);
                let w = self.encode(x, y);
                m.mul(cert.inv(cert.t(hi, w, gi)), m.mul(hi, w))
            }
        };
        Ok(self.decode(out))
    }
}

/// Builds the skew smashed product and divides in it. See
/// [`SkewProduct::div`].
pub fn skew_div(
    a: &FiniteMagma,
    b: &FiniteMagma,
    f: &SkewFactors,
    side: DivisionSide,
    g: (usize, usize),
    h: (usize, usize),
) -> Result<(usize, usize)> {
    skew_smashed_product(a, b, f)?.div(side, g, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::products::direct_product;

    fn trivial_group() -> FiniteMagma {
        corpus::cyclic(1)
    }

    #[test]
    fn trivial_factors_over_z2_z3_give_z6() {
        let (z2, z3) = (corpus::cyclic(2), corpus::cyclic(3));
        let f = SkewFactors::trivial(2, 3, trivial_group(), vec![0], vec![0]).unwrap();
        assert!(validate_skew_factors(&z2, &z3, &f).is_valid());
        let g = skew_smashed_product(&z2, &z3, &f).unwrap();
        assert_eq!(g.magma, direct_product(&[z2, z3]).unwrap());
        assert_eq!(g.certificate.fan().to_vec(), vec![0]);
    }

    #[test]
    fn trivial_factors_over_z2_z2_give_klein() {
        let z2 = corpus::cyclic(2);
        let f = SkewFactors::trivial(2, 2, trivial_group(), vec![0], vec![0]).unwrap();
        let g = skew_smashed_product(&z2, &z2, &f).unwrap();
        assert_eq!(g.magma, corpus::klein());
    }

    #[test]
    fn b_parts_multiply_in_reverse_order() {
        let (z2, s3) = (corpus::cyclic(2), corpus::symmetric(3));
        let f = SkewFactors::trivial(2, 6, trivial_group(), vec![0], vec![0]).unwrap();
        let g = skew_smashed_product(&z2, &s3, &f).unwrap();
        for x in 0..12 {
            for y in 0..12 {
                let ((a1, b1), (a2, b2)) = (decode_pair(6, x), decode_pair(6, y));
                assert_eq!(decode_pair(6, g.magma.mul(x, y)), (z2.mul(a1, a2), s3.mul(b2, b1)));
            }
        }
    }

    #[test]
    fn eta_violation_is_pinpointed() {
        // N = Z2 in A = B = Z4; a nontrivial η with identity φ breaks 44.
        let inst = corpus::skew_corpus()
            .into_iter()
            .find(|c| c.name == "Z4*Z4/Z2")
            .unwrap();
        let f = &inst.factors;
        let mut eta = f.eta.clone();
        let (v, u, b) = (1, 3, 1);
        let idx = (v * 4 + u) * 4 + b;
        eta[idx] = 1;
        let bad = SkewFactors { eta, ..f.clone() };
        let report = validate_skew_factors(&inst.a, &inst.b, &bad);
        assert!(!report.is_valid());
        assert!(report.issues.iter().any(|i| matches!(
            i,
            ValidationIssue::Instance { equation, arguments, .. } if equation == "44" && arguments == &vec![1, 3, 1]
        )));
        assert!(matches!(
            skew_smashed_product(&inst.a, &inst.b, &bad),
            Err(QgError::Precondition(_))
        ));
    }

    #[test]
    fn structural_failures_are_reported() {
        let z4 = corpus::cyclic(4);
        let z2 = corpus::cyclic(2);
        // Embedding {0,1} is not a subgroup image.
        let f = SkewFactors::trivial(4, 4, z2.clone(), vec![0, 1], vec![0, 2]).unwrap();
        let r = validate_skew_factors(&z4, &z4, &f);
        assert!(r.issues.iter().any(|i| i.equation() == "41:hom-A"));
        // Non-fan A.
        let loop5 = corpus::nonassociative_loops_of_order_5()[0].clone();
        let f = SkewFactors::trivial(5, 4, trivial_group(), vec![0], vec![0]).unwrap();
        let r = validate_skew_factors(&loop5, &z4, &f);
        assert_eq!(
            r.issues[0],
            ValidationIssue::Structural {
                equation: "41".into(),
                message: "A is not a fan quasigroup".into()
            }
        );
        // Shape mismatch.
        let r = validate_skew_factors(&z2, &z4, &f);
        assert_eq!(r.issues[0].equation(), "shape");
        // Non-normal image: N = Z2 as {e, (12)} in S3.
        let s3 = corpus::symmetric(3);
        let swap = corpus::symmetric_index(3, &[1, 0, 2]);
        let f = SkewFactors::trivial(6, 6, z2, vec![0, swap], vec![0, swap]).unwrap();
        let r = validate_skew_factors(&s3, &s3, &f);
        assert!(r
            .issues
            .iter()
            .any(|i| matches!(i, ValidationIssue::Structural { message, .. } if message.contains("not normal"))));
    }

    #[test]
    fn xi_unit_conditions() {
        let inst = corpus::skew_corpus()
            .into_iter()
            .find(|c| c.name == "Z4*Z4/Z2")
            .unwrap();
        let mut xi = inst.factors.xi.clone();
        let i = inst.factors.xi_index(0, 0, 1, 1);
        xi[i] = 1;
        let bad = inst.factors.with_xi(xi).unwrap();
        let r = validate_skew_factors(&inst.a, &inst.b, &bad);
        assert!(r.issues.iter().any(|i| i.equation() == "48:unit"));
        assert!(r.issues.iter().any(|i| i.equation() == "48"));
    }

    #[test]
    fn shape_checks() {
        let z2 = corpus::cyclic(2);
        assert!(SkewFactors::new(
            2,
            2,
            z2.clone(),
            vec![0],
            vec![0, 1],
            vec![0, 1, 0, 1],
            vec![0; 8],
            vec![0; 8],
            vec![0; 16]
        )
        .is_err());
        assert!(SkewFactors::new(
            2,
            2,
            z2.clone(),
            vec![0, 1],
            vec![0, 1],
            vec![0, 0, 0, 1],
            vec![0; 8],
            vec![0; 8],
            vec![0; 16]
        )
        .is_err());
        assert!(SkewFactors::new(
            2,
            2,
            z2.clone(),
            vec![0, 1],
            vec![0, 1],
            vec![0, 1, 0, 1],
            vec![0; 8],
            vec![0; 8],
            vec![2; 16]
        )
        .is_err());
        assert!(SkewFactors::new(
            2,
            2,
            z2,
            vec![0, 1],
            vec![0, 1],
            vec![0, 1, 0, 1],
            vec![0; 8],
            vec![0; 8],
            vec![0; 16]
        )
        .is_ok());
    }

    fn brute_left(m: &FiniteMagma, g: usize, h: usize) -> usize {
        (0..m.order()).find(|&x| m.mul(g, x) == h).unwrap()
    }

    fn brute_right(m: &FiniteMagma, g: usize, h: usize) -> usize {
        (0..m.order()).find(|&y| m.mul(y, g) == h).unwrap()
    }

    #[test]
    fn closed_form_divisions_match_brute_force_on_the_corpus() {
        for inst in corpus::skew_corpus() {
            let g = inst.build().unwrap();
            let m = &g.magma;
            let n = m.order();
            for x in 0..n {
                let px = g.decode(x);
                let unit = m.find_unit().unwrap();
                assert_eq!(
                    g.encode(g.unit_right_quotient(px).0, g.unit_right_quotient(px).1),
                    brute_right(m, x, unit),
                    "{}",
                    inst.name
                );
                let (v, z) = g.unit_left_quotient(px);
                assert_eq!(g.encode(v, z), brute_left(m, x, unit), "{}", inst.name);
                for y in 0..n {
                    let py = g.decode(y);
                    assert_eq!(
                        g.encode_pair(g.div(DivisionSide::Left, px, py).unwrap()),
                        brute_left(m, x, y)
                    );
                    assert_eq!(
                        g.encode_pair(g.div(DivisionSide::Right, px, py).unwrap()),
                        brute_right(m, x, y)
                    );
                }
            }
        }
    }

    #[test]
    fn dividing_by_the_unit() {
        let inst = corpus::skew_corpus()
            .into_iter()
            .find(|c| c.name == "Z4*Z4/Z2")
            .unwrap();
        for b in 0..4 {
            for a in 0..4 {
                assert_eq!(
                    skew_div(&inst.a, &inst.b, &inst.factors, DivisionSide::Left, (0, 0), (a, b)).unwrap(),
                    (a, b)
                );
            }
        }
    }

    #[test]
    fn trivial_factor_division_is_group_inversion() {
        let (z2, z3) = (corpus::cyclic(2), corpus::cyclic(3));
        let f = SkewFactors::trivial(2, 3, trivial_group(), vec![0], vec![0]).unwrap();
        let g = skew_smashed_product(&z2, &z3, &f).unwrap();
        for a in 0..2 {
            for b in 0..3 {
                let inv = ((2 - a) % 2, (3 - b) % 3);
                assert_eq!(g.unit_left_quotient((a, b)), inv);
                assert_eq!(g.unit_right_quotient((a, b)), inv);
            }
        }
    }

    /// The expansion of `(a₁,b₁)((a₂,b₂)(a₃,b₃))` through `η` and `κ`:
    /// B-part `(((b₃^{a₁a₂}·η(a₁,a₂,b₃))·b₂^{a₁})·κ(a₁,b₃^{a₂},b₂)·ξ₂₃)·b₁·ξ`.
    #[test]
    fn right_nested_product_expands_through_eta_and_kappa() {
        for inst in corpus::skew_corpus() {
            let g = inst.build().unwrap();
            let (a, b, f) = (&inst.a, &inst.b, &inst.factors);
            let nb = b.order();
            for x in 0..g.magma.order() {
                for y in 0..g.magma.order() {
                    for z in (0..g.magma.order()).step_by(3) {
                        let ((a1, b1), (a2, b2), (a3, b3)) =
                            (decode_pair(nb, x), decode_pair(nb, y), decode_pair(nb, z));
                        let i2 = g.magma.mul(x, g.magma.mul(y, z));
                        let a23 = a.mul(a2, a3);
                        let b23 = b.mul(b.mul(f.act(a2, b3), b2), f.xi_in_b(a2, b2, a3, b3));
                        let mut w = b.mul(f.act(a.mul(a1, a2), b3), f.embed_b()[f.eta(a1, a2, b3)]);
                        w = b.mul(w, f.act(a1, b2));
                        w = b.mul(w, f.embed_b()[f.kappa(a1, f.act(a2, b3), b2)]);
                        w = b.mul(w, f.xi_in_b(a2, b2, a3, b3));
                        w = b.mul(w, b1);
                        w = b.mul(w, f.xi_in_b(a1, b1, a23, b23));
                        assert_eq!(decode_pair(nb, i2), (a.mul(a1, a23), w), "{}", inst.name);
                    }
                }
            }
        }
    }

    /// `t_G` is the conjugate of `p_G` by `a(bc)`: `t = (I₂·p)/I₂`.
    #[test]
    fn t_is_conjugate_of_p() {
        for inst in corpus::skew_corpus() {
            let g = inst.build().unwrap();
            let (m, c) = (&g.magma, &g.certificate);
            let n = m.order();
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let i2 = m.mul(x, m.mul(y, z));
                        assert_eq!(c.t(x, y, z), m.rd(i2, m.mul(i2, c.p(x, y, z))));
                    }
                }
            }
        }
    }

    impl SkewProduct {
        fn encode_pair(&self, p: (usize, usize)) -> usize {
            self.encode(p.0, p.1)
        }
    }
}
