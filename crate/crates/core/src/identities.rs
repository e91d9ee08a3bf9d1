//! Exhaustive checker for the associator identities of fan quasigroups.
//!
//! Notation follows the usual conventions: `a\b` solves `a·x = b`, `a/b`
//! solves `y·b = a`, `t` and `p` are the left and right associators with
//! `(ab)c = t(a,b,c)·(a(bc)) = (a(bc))·p(a,b,c)`, and `x⁻¹` is the inverse
//! inside the nucleus, computed as `x\e`.
//!
//! Each identity has a fixed quantification domain (variables range over
//! `G`, the nucleus `N` or the center `C`) and is never evaluated outside
//! it. Loops are parallelized over the leading variable; failures come
//! back sorted lexicographically by argument tuple.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QgError, Result};
use crate::magma::FiniteMagma;
use crate::structure::FanCertificate;

pub const LEMMA1_IDS: &[&str] = &["70", "71", "72", "72b", "73", "74", "75", "76a", "76", "77", "78", "79"];
pub const LEMMA2_IDS: &[&str] = &["82", "83", "84", "85", "86", "87", "88", "89", "90", "94"];
pub const THEOREM4_IDS: &[&str] = &["60", "61", "62", "63", "64", "65"];
pub const BASIC_IDS: &[&str] = &["80a", "80b", "81a", "81b"];

/// Identities with four free variables over `G`, subject to
/// [`IdentityConfig::quartic_max_order`].
pub const QUARTIC_IDS: &[&str] = &["63", "64", "65"];

/// Every identity id, in report order.
pub fn all_identity_ids() -> Vec<&'static str> {
    BASIC_IDS
        .iter()
        .chain(LEMMA1_IDS)
        .chain(LEMMA2_IDS)
        .chain(THEOREM4_IDS)
        .copied()
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityConfig {
    /// Identities in [`QUARTIC_IDS`] are skipped above this order.
    pub quartic_max_order: usize,
    /// Failures beyond this many are counted but not listed.
    pub max_recorded_failures: usize,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        IdentityConfig {
            quartic_max_order: 10,
            max_recorded_failures: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityFailure {
    pub args: Vec<usize>,
    pub lhs: usize,
    pub rhs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity_id: String,
    /// Argument tuples checked; 0 when skipped.
    pub domain_size: u64,
    pub failures: Vec<IdentityFailure>,
    pub failure_count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.skipped.is_none()
    }

    fn skipped(id: &str, reason: impl Into<String>) -> Self {
        IdentityReport {
            identity_id: id.into(),
            domain_size: 0,
            failures: Vec::new(),
            failure_count: 0,
            skipped: Some(reason.into()),
        }
    }
}

/// Outcome of a single evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Evaluation {
    /// Some argument lies outside the identity's domain.
    OutOfDomain,
    Holds {
        value: usize,
    },
    Fails {
        lhs: usize,
        rhs: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Var {
    G,
    N,
    C,
}

struct Ctx<'a> {
    m: &'a FiniteMagma,
    c: &'a FanCertificate,
    e: usize,
}

impl Ctx<'_> {
    #[inline]
    fn m(&self, a: usize, b: usize) -> usize {
        self.m.mul(a, b)
    }
    /// `a\b`
    #[inline]
    fn l(&self, a: usize, b: usize) -> usize {
        self.m.ld(a, b)
    }
    /// `a/b`
    #[inline]
    fn r(&self, a: usize, b: usize) -> usize {
        self.m.rd(b, a)
    }
    #[inline]
    fn t(&self, a: usize, b: usize, c: usize) -> usize {
        self.c.t(a, b, c)
    }
    #[inline]
    fn p(&self, a: usize, b: usize, c: usize) -> usize {
        self.c.p(a, b, c)
    }
    #[inline]
    fn inv(&self, x: usize) -> usize {
        self.c.inv(x)
    }
}

type Eval = fn(&Ctx, &[usize]) -> (usize, usize);

struct Spec {
    id: &'static str,
    vars: &'static [Var],
    eval: Eval,
}

use Var::{C, G, N};

#[rustfmt::skip]
static SPECS: &[Spec] = &[
    // b\e = t(e/b, b, b\e)·(e/b)
    Spec { id: "70", vars: &[G], eval: |x, v| {
        let b = v[0];
        let (eb, be) = (x.r(x.e, b), x.l(b, x.e));
        (be, x.m(x.t(eb, b, be), eb))
    }},
    // b\e = (e/b)·p(e/b, b, b\e)
    Spec { id: "71", vars: &[G], eval: |x, v| {
        let b = v[0];
        let (eb, be) = (x.r(x.e, b), x.l(b, x.e));
        (be, x.m(eb, x.p(eb, b, be)))
    }},
    // (a\e)b = t(e/a, a, a\e)·t(e/a, a, a\b)⁻¹·(a\b)
    Spec { id: "72", vars: &[G, G], eval: |x, v| {
        let (a, b) = (v[0], v[1]);
        let (ea, ae, ab) = (x.r(x.e, a), x.l(a, x.e), x.l(a, b));
        let k = x.m(x.t(ea, a, ae), x.inv(x.t(ea, a, ab)));
        (x.m(ae, b), x.m(k, ab))
    }},
    // a\b = ((a\e)b)·p(a, a\e, b)
    Spec { id: "72b", vars: &[G, G], eval: |x, v| {
        let (a, b) = (v[0], v[1]);
        let ae = x.l(a, x.e);
        (x.l(a, b), x.m(x.m(ae, b), x.p(a, ae, b)))
    }},
    // (bc)\a = (c\(b\a))·p(b, c, (bc)\a)⁻¹
    Spec { id: "73", vars: &[G, G, G], eval: |x, v| {
        let (a, b, c) = (v[0], v[1], v[2]);
        let lhs = x.l(x.m(b, c), a);
        (lhs, x.m(x.l(c, x.l(b, a)), x.inv(x.p(b, c, lhs))))
    }},
    // (a\b)c = (a\(bc))·p(a, a\b, c)⁻¹
    Spec { id: "74", vars: &[G, G, G], eval: |x, v| {
        let (a, b, c) = (v[0], v[1], v[2]);
        let ab = x.l(a, b);
        (x.m(ab, c), x.m(x.l(a, x.m(b, c)), x.inv(x.p(a, ab, c))))
    }},
    // (ab)\e = (((b\e)(a\e))·t(a, b, b\e)⁻¹)·t(ab, b\e, a\e)
    Spec { id: "75", vars: &[G, G], eval: |x, v| {
        let (a, b) = (v[0], v[1]);
        let (ae, be, ab) = (x.l(a, x.e), x.l(b, x.e), x.m(a, b));
        let rhs = x.m(x.m(x.m(be, ae), x.inv(x.t(a, b, be))), x.t(ab, be, ae));
        (x.l(ab, x.e), rhs)
    }},
    // b(e/a) = ((b/a)·p(b/a, a, a\e))·p(e/a, a, a\e)⁻¹
    Spec { id: "76a", vars: &[G, G], eval: |x, v| {
        let (a, b) = (v[0], v[1]);
        let (ea, ae, ba) = (x.r(x.e, a), x.l(a, x.e), x.r(b, a));
        let rhs = x.m(x.m(ba, x.p(ba, a, ae)), x.inv(x.p(ea, a, ae)));
        (x.m(b, ea), rhs)
    }},
    // b/a = t(b, e/a, a)⁻¹·(b(e/a))
    Spec { id: "76", vars: &[G, G], eval: |x, v| {
        let (a, b) = (v[0], v[1]);
        let ea = x.r(x.e, a);
        (x.r(b, a), x.m(x.inv(x.t(b, ea, a)), x.m(b, ea)))
    }},
    // a/(bc) = t(a/(bc), b, c)·((a/c)/b)
    Spec { id: "77", vars: &[G, G, G], eval: |x, v| {
        let (a, b, c) = (v[0], v[1], v[2]);
        let lhs = x.r(a, x.m(b, c));
        (lhs, x.m(x.t(lhs, b, c), x.r(x.r(a, c), b)))
    }},
    // c(b/a) = t(c, b/a, a)·((cb)/a)
    Spec { id: "78", vars: &[G, G, G], eval: |x, v| {
        let (a, b, c) = (v[0], v[1], v[2]);
        let ba = x.r(b, a);
        (x.m(c, ba), x.m(x.t(c, ba, a), x.r(x.m(c, b), a)))
    }},
    // e/(ab) = (p(e/b, e/a, ab)⁻¹·p(e/a, a, b))·((e/b)(e/a))
    Spec { id: "79", vars: &[G, G], eval: |x, v| {
        let (a, b) = (v[0], v[1]);
        let (ea, eb, ab) = (x.r(x.e, a), x.r(x.e, b), x.m(a, b));
        let k = x.m(x.inv(x.p(eb, ea, ab)), x.p(ea, a, b));
        (x.r(x.e, ab), x.m(k, x.m(eb, ea)))
    }},
    // t(z₁a₁, z₂a₂, z₃a₃) = t(a₁, a₂, a₃); arguments (a₁, a₂, a₃, z₁, z₂, z₃)
    Spec { id: "82", vars: &[G, G, G, C, C, C], eval: |x, v| {
        (x.t(x.m(v[3], v[0]), x.m(v[4], v[1]), x.m(v[5], v[2])), x.t(v[0], v[1], v[2]))
    }},
    Spec { id: "83", vars: &[G, G, G, C, C, C], eval: |x, v| {
        (x.p(x.m(v[3], v[0]), x.m(v[4], v[1]), x.m(v[5], v[2])), x.p(v[0], v[1], v[2]))
    }},
    // t(a, a\e, a)·a = a·p(a, a\e, a)
    Spec { id: "84", vars: &[G], eval: |x, v| {
        let a = v[0];
        let ae = x.l(a, x.e);
        (x.m(x.t(a, ae, a), a), x.m(a, x.p(a, ae, a)))
    }},
    // t(a, e/a, a)·a = a·p(a, e/a, a)
    Spec { id: "85", vars: &[G], eval: |x, v| {
        let a = v[0];
        let ea = x.r(x.e, a);
        (x.m(x.t(a, ea, a), a), x.m(a, x.p(a, ea, a)))
    }},
    // p(a, a\e, a)·t(e/a, a, a\e) = e
    Spec { id: "86", vars: &[G], eval: |x, v| {
        let a = v[0];
        let (ea, ae) = (x.r(x.e, a), x.l(a, x.e));
        (x.m(x.p(a, ae, a), x.t(ea, a, ae)), x.e)
    }},
    // t(a₁, a₂, a₃b) = t(a₁, a₂, a₃); arguments (a₁, a₂, a₃, b)
    Spec { id: "87", vars: &[G, G, G, N], eval: |x, v| {
        (x.t(v[0], v[1], x.m(v[2], v[3])), x.t(v[0], v[1], v[2]))
    }},
    // p(ba₁, a₂, a₃) = p(a₁, a₂, a₃)
    Spec { id: "88", vars: &[G, G, G, N], eval: |x, v| {
        (x.p(x.m(v[3], v[0]), v[1], v[2]), x.p(v[0], v[1], v[2]))
    }},
    // t(ba₁, a₂, a₃) = b·t(a₁, a₂, a₃)·b⁻¹
    Spec { id: "89", vars: &[G, G, G, N], eval: |x, v| {
        let b = v[3];
        (x.t(x.m(b, v[0]), v[1], v[2]), x.m(x.m(b, x.t(v[0], v[1], v[2])), x.inv(b)))
    }},
    // p(a₁, a₂, a₃b) = b⁻¹·p(a₁, a₂, a₃)·b
    Spec { id: "90", vars: &[G, G, G, N], eval: |x, v| {
        let b = v[3];
        (x.p(v[0], v[1], x.m(v[2], b)), x.m(x.m(x.inv(b), x.p(v[0], v[1], v[2])), b))
    }},
    // (t(a, a\e, a)·a)·t(e/a, a, a\e) = a
    Spec { id: "94", vars: &[G], eval: |x, v| {
        let a = v[0];
        let (ea, ae) = (x.r(x.e, a), x.l(a, x.e));
        (x.m(x.m(x.t(a, ae, a), a), x.t(ea, a, ae)), a)
    }},
    // x\(ab) = (x\a)b; arguments (a, b, x)
    Spec { id: "60", vars: &[N, N, G], eval: |x, v| {
        let (a, b, y) = (v[0], v[1], v[2]);
        (x.l(y, x.m(a, b)), x.m(x.l(y, a), b))
    }},
    // (ab)/x = a(b/x)
    Spec { id: "61", vars: &[N, N, G], eval: |x, v| {
        let (a, b, y) = (v[0], v[1], v[2]);
        (x.r(x.m(a, b), y), x.m(a, x.r(b, y)))
    }},
    // (x\(ab))x = ((x\a)x)((x\b)x)·p(x\a, x, (x\b)x)⁻¹·p(x, x\b, x).
    // The two ways of grouping the right side must agree; when they do
    // not, the pair of groupings is returned as the failure.
    Spec { id: "62", vars: &[N, N, G], eval: |x, v| {
        let (a, b, y) = (v[0], v[1], v[2]);
        let (ya, yb) = (x.l(y, a), x.l(y, b));
        let ybx = x.m(yb, y);
        let w = x.m(x.m(ya, y), ybx);
        let (k1, k2) = (x.inv(x.p(ya, y, ybx)), x.p(y, yb, y));
        let left = x.m(x.m(w, k1), k2);
        let right = x.m(w, x.m(k1, k2));
        if left != right {
            return (left, right);
        }
        (x.m(x.l(y, x.m(a, b)), y), right)
    }},
    // x\((u\v)y) = ((ux)\(vy))·p(u, x, (ux)\(vy))·p(u, u\v, y)⁻¹;
    // arguments (u, v, x, y)
    Spec { id: "63", vars: &[G, G, G, G], eval: |x, v| {
        let (u, w, y, z) = (v[0], v[1], v[2], v[3]);
        let q = x.l(x.m(u, y), x.m(w, z));
        let rhs = x.m(x.m(q, x.p(u, y, q)), x.inv(x.p(u, x.l(u, w), z)));
        (x.l(y, x.m(x.l(u, w), z)), rhs)
    }},
    // x\(p(a,b,c)x) = (p(b,c,x)·p(a,bc,x))⁻¹·p(a,b,cx)·p(ab,c,x)·p(u,x,(ux)\(vx))
    // with u = a(bc), v = (ab)c; arguments (a, b, c, x)
    Spec { id: "64", vars: &[G, G, G, G], eval: |x, v| {
        let (a, b, c, y) = (v[0], v[1], v[2], v[3]);
        let (bc, ab) = (x.m(b, c), x.m(a, b));
        let (u, w) = (x.m(a, bc), x.m(ab, c));
        let lhs = x.l(y, x.m(x.p(a, b, c), y));
        let mut rhs = x.inv(x.m(x.p(b, c, y), x.p(a, bc, y)));
        rhs = x.m(rhs, x.p(a, b, x.m(c, y)));
        rhs = x.m(rhs, x.p(ab, c, y));
        let uy = x.m(u, y);
        rhs = x.m(rhs, x.p(u, y, x.l(uy, x.m(w, y))));
        (lhs, rhs)
    }},
    // z\(tz) = [x\(px)]·p(u, u\(tu), x)·p(u, x, (ux)\(t(ux)))⁻¹ with
    // t = t(a,b,c), p = p(a,b,c), u = a(bc), x = u\z; arguments (a, b, c, z)
    Spec { id: "65", vars: &[G, G, G, G], eval: |x, v| {
        let (a, b, c, z) = (v[0], v[1], v[2], v[3]);
        let (t, p) = (x.t(a, b, c), x.p(a, b, c));
        let u = x.m(a, x.m(b, c));
        let y = x.l(u, z);
        let uy = x.m(u, y);
        let mut rhs = x.l(y, x.m(p, y));
        rhs = x.m(rhs, x.p(u, x.l(u, x.m(t, u)), y));
        rhs = x.m(rhs, x.inv(x.p(u, y, x.l(uy, x.m(t, uy)))));
        (x.l(z, x.m(t, z)), rhs)
    }},
];

fn spec(id: &str) -> Result<&'static Spec> {
    SPECS
        .iter()
        .find(|s| s.id == id)
        .ok_or_else(|| QgError::Precondition(format!("unknown identity '{id}'")))
}

/// Runs `eval` over the product of `domains`, in parallel over the first
/// coordinate, returning failures in lexicographic order.
fn sweep(
    id: &str,
    domains: &[Vec<usize>],
    config: &IdentityConfig,
    eval: impl Fn(&[usize]) -> (usize, usize) + Sync,
) -> IdentityReport {
    let domain_size = domains.iter().map(|d| d.len() as u64).product();
    let cap = config.max_recorded_failures;
    let chunks: Vec<(u64, Vec<IdentityFailure>)> = if domains.iter().any(|d| d.is_empty()) {
        Vec::new()
    } else {
        domains[0]
            .par_iter()
            .map(|&lead| {
                let k = domains.len();
                let mut idx = vec![0usize; k];
                let mut args: Vec<usize> = domains.iter().map(|d| d[0]).collect();
                args[0] = lead;
                let (mut count, mut found) = (0u64, Vec::new());
                loop {
                    let (lhs, rhs) = eval(&args);
                    if lhs != rhs {
                        count += 1;
                        if found.len() < cap {
                            found.push(IdentityFailure {
                                args: args.clone(),
                                lhs,
                                rhs,
                            });
                        }
                    }
                    // Odometer over coordinates 1..k, last fastest.
                    let mut j = k;
                    loop {
                        if j == 1 {
                            return (count, found);
                        }
                        j -= 1;
                        idx[j] += 1;
                        if idx[j] < domains[j].len() {
                            args[j] = domains[j][idx[j]];
                            break;
                        }
                        idx[j] = 0;
                        args[j] = domains[j][0];
                    }
                }
            })
            .collect()
    };
    let failure_count = chunks.iter().map(|c| c.0).sum();
    let failures = chunks.into_iter().flat_map(|c| c.1).take(cap).collect();
    IdentityReport {
        identity_id: id.into(),
        domain_size,
        failures,
        failure_count,
        skipped: None,
    }
}

fn domain(cert: &FanCertificate, var: Var) -> Vec<usize> {
    match var {
        G => (0..cert.base().order()).collect(),
        N => cert.nucleus().to_vec(),
        C => cert.center().to_vec(),
    }
}

/// Checks one certificate-dependent identity over its full domain.
pub fn check_identity(cert: &FanCertificate, id: &str, config: &IdentityConfig) -> Result<IdentityReport> {
    if BASIC_IDS.contains(&id) {
        return Ok(check_basic(cert.base(), id, config));
    }
    let s = spec(id)?;
    let n = cert.base().order();
    if QUARTIC_IDS.contains(&id) && n > config.quartic_max_order {
        return Ok(IdentityReport::skipped(
            id,
            format!("order {n} exceeds the quartic ceiling {}", config.quartic_max_order),
        ));
    }
    let ctx = Ctx {
        m: cert.base(),
        c: cert,
        e: cert.unit(),
    };
    let domains: Vec<_> = s.vars.iter().map(|&v| domain(cert, v)).collect();
    Ok(sweep(id, &domains, config, |args| (s.eval)(&ctx, args)))
}

/// Evaluates one identity at one argument tuple. Arguments outside the
/// identity's domain (for instance a non-nuclear `a` in `60`) give
/// [`Evaluation::OutOfDomain`] rather than a failure.
pub fn evaluate(cert: &FanCertificate, id: &str, args: &[usize]) -> Result<Evaluation> {
    let n = cert.base().order();
    type Eval<'a> = Box<dyn Fn(&[usize]) -> (usize, usize) + 'a>;
    let (vars, eval): (&[Var], Eval) = if BASIC_IDS.contains(&id) {
        let m = cert.base();
        (
            &[G, G],
            Box::new(move |v: &[usize]| {
                basic_eval(id, v[0], v[1], |a, b| m.ld(a, b), |a, b| m.rd(b, a), |a, b| m.mul(a, b))
            }),
        )
    } else {
        let s = spec(id)?;
        let ctx = Ctx {
            m: cert.base(),
            c: cert,
            e: cert.unit(),
        };
        (s.vars, Box::new(move |v: &[usize]| (s.eval)(&ctx, v)))
    };
    if args.len() != vars.len() {
        return Err(QgError::Precondition(format!(
            "identity {id} takes {} arguments, got {}",
            vars.len(),
            args.len()
        )));
    }
    for (&a, &var) in args.iter().zip(vars) {
        let inside = a < n
            && match var {
                G => true,
                N => cert.nucleus().contains(a),
                C => cert.center().contains(a),
            };
        if !inside {
            return Ok(Evaluation::OutOfDomain);
        }
    }
    let (lhs, rhs) = eval(args);
    Ok(if lhs == rhs {
        Evaluation::Holds { value: lhs }
    } else {
        Evaluation::Fails { lhs, rhs }
    })
}

fn check_all(cert: &FanCertificate, ids: &[&str], config: &IdentityConfig) -> Vec<IdentityReport> {
    ids.iter()
        .map(|id| check_identity(cert, id, config).expect("known identity"))
        .collect()
}

/// Lemma 1 family: `70`–`79` together with `72b` and `76a`.
pub fn check_lemma1(cert: &FanCertificate, config: &IdentityConfig) -> Vec<IdentityReport> {
    check_all(cert, LEMMA1_IDS, config)
}

/// Lemma 2 family: `82`–`90` and `94`.
pub fn check_lemma2(cert: &FanCertificate, config: &IdentityConfig) -> Vec<IdentityReport> {
    check_all(cert, LEMMA2_IDS, config)
}

/// `60`–`65`. `63`–`65` are skipped above the quartic ceiling.
pub fn check_theorem4_identities(cert: &FanCertificate, config: &IdentityConfig) -> Vec<IdentityReport> {
    check_all(cert, THEOREM4_IDS, config)
}

fn basic_eval(
    id: &str,
    a: usize,
    b: usize,
    ld: impl Fn(usize, usize) -> usize,
    rd: impl Fn(usize, usize) -> usize,
    mul: impl Fn(usize, usize) -> usize,
) -> (usize, usize) {
    match id {
        "80a" => (mul(b, ld(b, a)), a),
        "80b" => (ld(b, mul(b, a)), a),
        "81a" => (mul(rd(a, b), b), a),
        "81b" => (rd(mul(a, b), b), a),
        _ => unreachable!("basic identity"),
    }
}

fn check_basic(m: &FiniteMagma, id: &str, config: &IdentityConfig) -> IdentityReport {
    let left = id.starts_with("80");
    if left && !m.is_left_quasigroup() {
        return IdentityReport::skipped(id, "not a left quasigroup");
    }
    if !left && !m.is_right_quasigroup() {
        return IdentityReport::skipped(id, "not a right quasigroup");
    }
    check_quasigroup_basics_with(m, &[id], config, |a, b| m.ld(a, b), |a, b| m.rd(b, a)).remove(0)
}

/// `b(b\a) = a`, `b\(ba) = a`, `(a/b)b = a`, `(ab)/b = a` over all pairs
/// `(a, b)`, skipping the side whose division does not exist.
pub fn check_quasigroup_basics(m: &FiniteMagma, config: &IdentityConfig) -> Vec<IdentityReport> {
    BASIC_IDS.iter().map(|id| check_basic(m, id, config)).collect()
}

/// As [`check_quasigroup_basics`] with caller-supplied divisions, where
/// `ld(a, b) = a\b` and `rd(a, b) = a/b`.
pub fn check_quasigroup_basics_with(
    m: &FiniteMagma,
    ids: &[&str],
    config: &IdentityConfig,
    ld: impl Fn(usize, usize) -> usize + Sync,
    rd: impl Fn(usize, usize) -> usize + Sync,
) -> Vec<IdentityReport> {
    let all: Vec<usize> = (0..m.order()).collect();
    ids.iter()
        .map(|id| {
            sweep(id, &[all.clone(), all.clone()], config, |v| {
                basic_eval(id, v[0], v[1], &ld, &rd, |a, b| m.mul(a, b))
            })
        })
        .collect()
}

/// Expands a selection such as `70-79,82-94,60-65,80-81` into identity
/// ids. A number range selects every id whose numeric part falls inside
/// it, so `72` also selects `72b` and `80` selects `80a` and `80b`.
pub fn parse_identity_selection(selection: &str) -> Result<Vec<&'static str>> {
    let ids = all_identity_ids();
    let numeric = |id: &str| -> u32 {
        id.trim_end_matches(|c: char| c.is_ascii_alphabetic())
            .parse()
            .expect("numeric id")
    };
    let mut chosen = vec![false; ids.len()];
    for part in selection.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || QgError::Parse(format!("bad identity selection '{part}'"));
        if let Some(pos) = ids.iter().position(|id| *id == part) {
            chosen[pos] = true;
            continue;
        }
        let (lo, hi) = match part.split_once('-') {
            Some((lo, hi)) => (
                lo.trim().parse::<u32>().map_err(|_| bad())?,
                hi.trim().parse::<u32>().map_err(|_| bad())?,
            ),
            None => {
                let v = part.parse::<u32>().map_err(|_| bad())?;
                (v, v)
            }
        };
        let mut hit = false;
        for (i, id) in ids.iter().enumerate() {
            if (lo..=hi).contains(&numeric(id)) {
                chosen[i] = true;
                hit = true;
            }
        }
        if !hit {
            return Err(QgError::Parse(format!("selection '{part}' matches no identity")));
        }
    }
    Ok(ids
        .into_iter()
        .zip(chosen)
        .filter(|(_, c)| *c)
        .map(|(id, _)| id)
        .collect())
}

/// Runs the selected identities on `m`. The basic division identities
/// need only the magma; everything else needs a fan certificate.
pub fn verify(
    m: &FiniteMagma,
    cert: Option<&FanCertificate>,
    ids: &[&str],
    config: &IdentityConfig,
) -> Result<Vec<IdentityReport>> {
    ids.iter()
        .map(|id| {
            if BASIC_IDS.contains(id) {
                return Ok(check_basic(m, id, config));
            }
            let cert = cert.ok_or_else(|| QgError::Precondition(format!("identity {id} needs a fan quasigroup")))?;
            check_identity(cert, id, config)
        })
        .collect()
}
