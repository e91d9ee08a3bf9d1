//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints its PASS/FAIL line; exits nonzero if any fails.
//!
//! Each check compares library output against an oracle written here from
//! the definitions, by direct scans of Cayley tables.

use std::time::{Duration, Instant};

use qgforge::corpus::{self, NamedMagma};
use qgforge::identities::{self, IdentityConfig};
use qgforge::io;
use qgforge::products::{
    decode_pair, direct_product, encode_pair, skew_div, skew_smashed_product, smashed_div_l, smashed_product,
    validate_skew_factors, DivisionSide, SkewFactors, SmashFactors,
};
use qgforge::search::{
    count_latin_squares, enumerate_latin_squares, random_smash_factors, run_search, SearchOutcome, SearchTarget,
    SearchTask, SmashConstraints, Witness,
};
use qgforge::structure::{fan_certificate, is_normal, quotient, structure_report};
use qgforge::FiniteMagma;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed for the left-not-right search over `ℤ₃ × ℤ₃`.
const LEFT_NOT_RIGHT_SEED: u64 = 20_240_601;
/// Seed for choosing direct product pairs.
const PAIR_SEED: u64 = 7;
/// Seed for the single-cell mutations.
const MUTATION_SEED: u64 = 10;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Option<Duration>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---- oracles ----

fn naive_unit(m: &FiniteMagma) -> Option<usize> {
    let n = m.order();
    (0..n).find(|&e| (0..n).all(|x| m.mul(e, x) == x && m.mul(x, e) == x))
}

fn naive_nucleus(m: &FiniteMagma) -> Vec<usize> {
    let n = m.order();
    let assoc = |x: usize, y: usize, z: usize| m.mul(m.mul(x, y), z) == m.mul(x, m.mul(y, z));
    (0..n)
        .filter(|&a| (0..n).all(|b| (0..n).all(|c| assoc(a, b, c) && assoc(b, a, c) && assoc(b, c, a))))
        .collect()
}

fn naive_center(m: &FiniteMagma) -> Vec<usize> {
    let n = m.order();
    naive_nucleus(m)
        .into_iter()
        .filter(|&a| (0..n).all(|b| m.mul(a, b) == m.mul(b, a)))
        .collect()
}

fn solve_left(m: &FiniteMagma, a: usize, b: usize) -> Vec<usize> {
    (0..m.order()).filter(|&x| m.mul(a, x) == b).collect()
}

fn solve_right(m: &FiniteMagma, a: usize, b: usize) -> Vec<usize> {
    (0..m.order()).filter(|&y| m.mul(y, a) == b).collect()
}

fn rows_are_permutations(m: &FiniteMagma) -> bool {
    let n = m.order();
    (0..n).all(|a| (0..n).all(|b| solve_left(m, a, b).len() == 1))
}

fn columns_are_permutations(m: &FiniteMagma) -> bool {
    let n = m.order();
    (0..n).all(|a| (0..n).all(|b| solve_right(m, a, b).len() == 1))
}

/// `t` with `(ab)c = t·(a(bc))` and `p` with `(ab)c = (a(bc))·p`.
fn naive_associators(m: &FiniteMagma, a: usize, b: usize, c: usize) -> (usize, usize) {
    let (lhs, rhs) = (m.mul(m.mul(a, b), c), m.mul(a, m.mul(b, c)));
    (solve_right(m, rhs, lhs)[0], solve_left(m, rhs, lhs)[0])
}

/// Closure of `gens ∪ {e}` under multiplication.
fn naive_generated(m: &FiniteMagma, e: usize, gens: &[usize]) -> Vec<bool> {
    let mut inside = vec![false; m.order()];
    inside[e] = true;
    gens.iter().for_each(|&g| inside[g] = true);
    loop {
        let members: Vec<usize> = (0..m.order()).filter(|&x| inside[x]).collect();
        let mut grew = false;
        for &x in &members {
            for &y in &members {
                let z = m.mul(x, y);
                if !inside[z] {
                    inside[z] = true;
                    grew = true;
                }
            }
        }
        if !grew {
            return inside;
        }
    }
}

fn independent_direct(g1: &FiniteMagma, g2: &FiniteMagma) -> FiniteMagma {
    let nb = g2.order();
    FiniteMagma::from_fn(g1.order() * nb, |x, y| {
        let (a1, b1) = (x / nb, x % nb);
        let (a2, b2) = (y / nb, y % nb);
        g1.mul(a1, a2) * nb + g2.mul(b1, b2)
    })
    .unwrap()
}

fn corpus_magmas() -> Vec<NamedMagma> {
    let mut out = corpus::fan_quasigroups();
    for (i, l) in corpus::nonassociative_loops_of_order_5()
        .into_iter()
        .take(3)
        .enumerate()
    {
        out.push(NamedMagma {
            name: format!("loop5#{i}"),
            magma: l,
        });
    }
    out.push(NamedMagma {
        name: "subtraction mod 4".into(),
        magma: FiniteMagma::from_fn(4, |a, b| (a + 4 - b) % 4).unwrap(),
    });
    out
}

// ---- criteria ----

fn group_sanity() -> Check {
    let groups = corpus::groups();
    for g in &groups {
        let m = &g.magma;
        let n = m.order();
        let cert = fan_certificate(m).ok_or(format!("{}: no fan certificate", g.name))?;
        let e = naive_unit(m).ok_or(format!("{}: no unit", g.name))?;
        ensure(cert.unit() == e, || format!("{}: unit {} != {e}", g.name, cert.unit()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    ensure(cert.t(a, b, c) == e && cert.p(a, b, c) == e, || {
                        format!("{}: associator at ({a},{b},{c}) is not the unit", g.name)
                    })?;
                }
            }
        }
        ensure(cert.fan().to_vec() == vec![e], || {
            format!("{}: fan {}", g.name, cert.fan())
        })?;
        let r = structure_report(m);
        ensure(r.nucleus.len() == n, || format!("{}: nucleus {}", g.name, r.nucleus))?;
        ensure(naive_nucleus(m).len() == n, || {
            format!("{}: oracle nucleus is not G", g.name)
        })?;
    }
    Ok(format!("{} groups", groups.len()))
}

fn direct_product_laws() -> Check {
    let magmas = corpus_magmas();
    let mut rng = ChaCha8Rng::seed_from_u64(PAIR_SEED);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 24 {
        attempts += 1;
        if attempts > 10_000 {
            return Err("could not draw enough pairs".into());
        }
        let g1 = &magmas[rng.random_range(0..magmas.len())];
        let g2 = &magmas[rng.random_range(0..magmas.len())];
        if g1.magma.order() * g2.magma.order() > 64 {
            continue;
        }
        let prod = direct_product(&[g1.magma.clone(), g2.magma.clone()]).map_err(|e| e.to_string())?;
        let label = format!("{} x {}", g1.name, g2.name);
        ensure(prod == independent_direct(&g1.magma, &g2.magma), || {
            format!("{label}: table differs")
        })?;
        let nb = g2.magma.order();
        let componentwise = |s1: &[usize], s2: &[usize]| -> Vec<usize> {
            let mut v: Vec<usize> = s1.iter().flat_map(|&a| s2.iter().map(move |&b| a * nb + b)).collect();
            v.sort_unstable();
            v
        };
        let r = structure_report(&prod);
        let nuc = componentwise(&naive_nucleus(&g1.magma), &naive_nucleus(&g2.magma));
        let cen = componentwise(&naive_center(&g1.magma), &naive_center(&g2.magma));
        ensure(r.nucleus.to_vec() == nuc, || {
            format!("{label}: nucleus {} vs {nuc:?}", r.nucleus)
        })?;
        ensure(r.center.to_vec() == cen, || {
            format!("{label}: center {} vs {cen:?}", r.center)
        })?;
        ensure(naive_nucleus(&prod) == nuc && naive_center(&prod) == cen, || {
            format!("{label}: brute-force product subsets disagree with componentwise")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} pairs"))
}

fn smashed_left_quasigroups() -> Check {
    let pairs = [
        ("Z3,Z3", corpus::cyclic(3), corpus::cyclic(3)),
        ("Z2,Z4", corpus::cyclic(2), corpus::cyclic(4)),
        ("S3,Z3", corpus::symmetric(3), corpus::cyclic(3)),
    ];
    let mut not_right = 0;
    for (label, a, b) in &pairs {
        for seed in 0..1000u64 {
            let f = random_smash_factors(a, b, seed, &SmashConstraints::default()).map_err(|e| e.to_string())?;
            let m = smashed_product(a, b, &f).map_err(|e| format!("{label} seed {seed}: {e}"))?;
            ensure(rows_are_permutations(&m), || {
                format!("{label} seed {seed}: not a left quasigroup")
            })?;
            not_right += usize::from(!columns_are_permutations(&m));
            let nb = b.order();
            for g in 0..m.order() {
                for h in 0..m.order() {
                    let (x, y) =
                        smashed_div_l(a, b, &f, decode_pair(nb, g), decode_pair(nb, h)).map_err(|e| e.to_string())?;
                    ensure(solve_left(&m, g, h) == vec![encode_pair(nb, x, y)], || {
                        format!("{label} seed {seed}: closed-form {g}\\{h} wrong")
                    })?;
                }
            }
        }
    }
    Ok(format!("3000/3000 left quasigroups, {not_right} not right quasigroups"))
}

fn left_not_right_search() -> Check {
    let task = SearchTask {
        target: SearchTarget::LeftNotRight,
        order_a: 3,
        order_b: 3,
        n_order: None,
        seed: LEFT_NOT_RIGHT_SEED,
        budget: 1_000_000,
    };
    let result = run_search(&task).map_err(|e| e.to_string())?;
    let SearchOutcome::Found { witness } = &result.outcome else {
        return Err(format!("exhausted after {} candidates", result.stats.candidates_tried));
    };
    let serialized = io::to_canonical_json(&result).map_err(|e| e.to_string())?;
    let reloaded: qgforge::search::SearchResult = serde_json::from_str(&serialized).map_err(|e| e.to_string())?;
    let SearchOutcome::Found { witness: w } = &reloaded.outcome else {
        return Err("outcome changed on reload".into());
    };
    let problems = w.reverify().map_err(|e| e.to_string())?;
    ensure(problems.is_empty(), || format!("reverify: {problems:?}"))?;
    let Witness::LeftNotRight {
        a,
        b,
        factors,
        product,
        failure,
        candidate,
    } = w.as_ref()
    else {
        return Err("wrong witness kind".into());
    };
    ensure(
        product == &smashed_product(a, b, factors).map_err(|e| e.to_string())?,
        || "product mismatch".into(),
    )?;
    ensure(rows_are_permutations(product), || {
        "witness is not a left quasigroup".into()
    })?;
    ensure(!columns_are_permutations(product), || {
        "witness is a right quasigroup".into()
    })?;
    let col = encode_pair(3, failure.column.0, failure.column.1);
    let target = encode_pair(3, failure.target.0, failure.target.1);
    ensure(solve_right(product, col, target).len() != 1, || {
        "recorded column failure does not reproduce".into()
    })?;
    ensure(w.as_ref() == witness.as_ref(), || "witness changed on reload".into())?;
    Ok(format!("seed {LEFT_NOT_RIGHT_SEED}, witness at candidate {candidate}"))
}

fn skew_products_are_fan() -> Check {
    let mut built = Vec::new();
    for inst in corpus::skew_corpus() {
        if !validate_skew_factors(&inst.a, &inst.b, &inst.factors).is_valid() {
            continue;
        }
        let g = inst.build().map_err(|e| format!("{}: {e}", inst.name))?;
        let m = &g.magma;
        let n = m.order();
        let nb = inst.b.order();
        ensure(rows_are_permutations(m) && columns_are_permutations(m), || {
            format!("{}: not a quasigroup", inst.name)
        })?;
        let e = naive_unit(m).ok_or(format!("{}: no unit", inst.name))?;
        let cert = fan_certificate(m).ok_or(format!("{}: no fan certificate", inst.name))?;
        let f = &inst.factors;
        let (ea, eb) = decode_pair(nb, e);
        let gens: Vec<usize> = f
            .embed_a()
            .iter()
            .map(|&x| encode_pair(nb, x, eb))
            .chain(f.embed_b().iter().map(|&y| encode_pair(nb, ea, y)))
            .collect();
        let nn = naive_generated(m, e, &gens);
        let nucleus = naive_nucleus(m);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (t, p) = naive_associators(m, a, b, c);
                    ensure(cert.t(a, b, c) == t && cert.p(a, b, c) == p, || {
                        format!("{}: certificate associators wrong at ({a},{b},{c})", inst.name)
                    })?;
                    ensure(nn[t] && nn[p], || {
                        format!("{}: associator escapes (N,N) at ({a},{b},{c})", inst.name)
                    })?;
                    ensure(nucleus.contains(&t) && nucleus.contains(&p), || {
                        format!("{}: associator outside the nucleus", inst.name)
                    })?;
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let (gx, hy) = (decode_pair(nb, x), decode_pair(nb, y));
                let l = skew_div(&inst.a, &inst.b, f, DivisionSide::Left, gx, hy).map_err(|e| e.to_string())?;
                let r = skew_div(&inst.a, &inst.b, f, DivisionSide::Right, gx, hy).map_err(|e| e.to_string())?;
                ensure(solve_left(m, x, y) == vec![encode_pair(nb, l.0, l.1)], || {
                    format!("{}: closed-form {x}\\{y} wrong", inst.name)
                })?;
                ensure(solve_right(m, x, y) == vec![encode_pair(nb, r.0, r.1)], || {
                    format!("{}: closed-form {y}/{x} wrong", inst.name)
                })?;
            }
        }
        built.push(inst.name);
    }
    for required in ["Z2*Z3/1", "Z2*Z2/1", "Z4*Z4/Z2"] {
        ensure(built.contains(&required), || {
            format!("{required} missing from the validated corpus")
        })?;
    }
    Ok(format!("{} instances: {}", built.len(), built.join(", ")))
}

fn trivial_factor_collapse() -> Check {
    let groups = corpus::groups();
    let mut smash_pairs = 0;
    let mut skew_pairs = 0;
    for g1 in &groups {
        for g2 in &groups {
            let (a, b) = (&g1.magma, &g2.magma);
            if a.order() * b.order() > 64 {
                continue;
            }
            let label = format!("{} x {}", g1.name, g2.name);
            let direct = independent_direct(a, b);
            let f = SmashFactors::trivial(a.order(), b.order(), naive_unit(b).unwrap());
            let sm = smashed_product(a, b, &f).map_err(|e| e.to_string())?;
            ensure(sm == direct, || {
                format!("{label}: trivial smashed product differs from A x B")
            })?;
            smash_pairs += 1;

            let sf = SkewFactors::trivial(a.order(), b.order(), corpus::cyclic(1), vec![0], vec![0])
                .map_err(|e| e.to_string())?;
            let sk = skew_smashed_product(a, b, &sf).map_err(|e| format!("{label}: {e}"))?;
            let nb = b.order();
            let opposite = FiniteMagma::from_fn(a.order() * nb, |x, y| {
                let (a1, b1) = (x / nb, x % nb);
                let (a2, b2) = (y / nb, y % nb);
                a.mul(a1, a2) * nb + b.mul(b2, b1)
            })
            .unwrap();
            ensure(sk.magma == opposite, || {
                format!("{label}: trivial skew product is not A x B with b2 b1")
            })?;
            if b.is_commutative() {
                ensure(sk.magma == direct, || {
                    format!("{label}: trivial skew product differs from A x B")
                })?;
            }
            skew_pairs += 1;
        }
    }
    for name in ["Z2*Z3/1", "Z2*Z2/1"] {
        let inst = corpus::skew_instance(name).ok_or(format!("{name} missing"))?;
        let g = inst.build().map_err(|e| e.to_string())?;
        ensure(g.magma == independent_direct(&inst.a, &inst.b), || {
            format!("{name} differs from A x B")
        })?;
    }
    Ok(format!("{smash_pairs} smashed and {skew_pairs} skew pairs"))
}

fn identity_suite() -> Check {
    // The whole corpus is checked, four-variable identities included.
    let config = IdentityConfig {
        quartic_max_order: 32,
        ..IdentityConfig::default()
    };
    let mut total_cases = 0u64;
    let fans = corpus::fan_quasigroups();
    for g in &fans {
        let cert = fan_certificate(&g.magma).ok_or(format!("{}: not a fan quasigroup", g.name))?;
        let reports = [
            identities::check_lemma1(&cert, &config),
            identities::check_lemma2(&cert, &config),
            identities::check_theorem4_identities(&cert, &config),
            identities::check_quasigroup_basics(&g.magma, &config),
        ]
        .concat();
        ensure(reports.len() == identities::all_identity_ids().len(), || {
            "missing identities".into()
        })?;
        for r in &reports {
            ensure(r.skipped.is_none(), || format!("{}: {} skipped", g.name, r.identity_id))?;
            ensure(r.failure_count == 0, || {
                format!(
                    "{}: {} fails {} times, first {:?}",
                    g.name,
                    r.identity_id,
                    r.failure_count,
                    r.failures.first()
                )
            })?;
            total_cases += r.domain_size;
        }
    }
    Ok(format!(
        "{} fan quasigroups up to order 32, {total_cases} cases",
        fans.len()
    ))
}

fn quotient_by_fan() -> Check {
    let fans = corpus::fan_quasigroups();
    for g in &fans {
        let m = &g.magma;
        let cert = fan_certificate(m).ok_or(format!("{}: no certificate", g.name))?;
        ensure(is_normal(m, cert.fan()).map_err(|e| e.to_string())?, || {
            format!("{}: fan is not normal", g.name)
        })?;
        let q = quotient(m, cert.fan()).map_err(|e| format!("{}: {e}", g.name))?;
        let qm = &q.quotient;
        let k = qm.order();
        ensure(k * cert.fan().len() == m.order(), || {
            format!("{}: wrong quotient order", g.name)
        })?;
        for x in 0..m.order() {
            for y in 0..m.order() {
                ensure(
                    q.projection[m.mul(x, y)] == qm.mul(q.projection[x], q.projection[y]),
                    || format!("{}: projection is not a homomorphism", g.name),
                )?;
            }
        }
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    ensure(qm.mul(qm.mul(a, b), c) == qm.mul(a, qm.mul(b, c)), || {
                        format!("{}: quotient not associative at ({a},{b},{c})", g.name)
                    })?;
                }
            }
        }
        let e = naive_unit(qm).ok_or(format!("{}: quotient has no unit", g.name))?;
        for a in 0..k {
            ensure((0..k).any(|b| qm.mul(a, b) == e && qm.mul(b, a) == e), || {
                format!("{}: {a} has no two-sided inverse", g.name)
            })?;
        }
    }
    Ok(format!("{} fan quasigroups", fans.len()))
}

/// Counts Latin squares among all `3^9` tables and, at order 4, among all
/// tables whose rows are permutations (every Latin square is one).
fn census_oracle(n: usize) -> (u64, u64) {
    let latin = |t: &[usize]| {
        (0..n).all(|r| (0..n).map(|c| 1u32 << t[r * n + c]).fold(0, |acc, b| acc | b) == (1 << n) - 1)
            && (0..n).all(|c| (0..n).map(|r| 1u32 << t[r * n + c]).fold(0, |acc, b| acc | b) == (1 << n) - 1)
    };
    let reduced = |t: &[usize]| (0..n).all(|i| t[i] == i && t[i * n] == i);
    let (mut total, mut red) = (0, 0);
    let mut tally = |t: &[usize]| {
        if latin(t) {
            total += 1;
            red += u64::from(reduced(t));
        }
    };
    if n <= 3 {
        let cells = n * n;
        for code in 0..n.pow(cells as u32) {
            let t: Vec<usize> = (0..cells).map(|i| code / n.pow(i as u32) % n).collect();
            tally(&t);
        }
    } else {
        use itertools::Itertools;
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        for rows in (0..n).map(|_| perms.iter()).multi_cartesian_product() {
            let t: Vec<usize> = rows.into_iter().flatten().copied().collect();
            tally(&t);
        }
    }
    (total, red)
}

fn census_cross_check() -> Check {
    ensure(count_latin_squares(3, true).map_err(|e| e.to_string())? == 1, || {
        "n=3 reduced != 1".into()
    })?;
    ensure(count_latin_squares(4, true).map_err(|e| e.to_string())? == 4, || {
        "n=4 reduced != 4".into()
    })?;
    ensure(count_latin_squares(4, false).map_err(|e| e.to_string())? == 576, || {
        "n=4 total != 576".into()
    })?;
    for n in 1..=4 {
        let (total, reduced) = census_oracle(n);
        let emitted = enumerate_latin_squares(n, false).map_err(|e| e.to_string())?;
        let emitted_reduced = enumerate_latin_squares(n, true).map_err(|e| e.to_string())?;
        ensure(
            emitted.count() as u64 == total && emitted_reduced.count() as u64 == reduced,
            || format!("n={n}: enumeration disagrees with oracle ({total} total, {reduced} reduced)"),
        )?;
    }
    Ok("n=3: 1 reduced; n=4: 4 reduced, 576 total".into())
}

fn mutation_sensitivity() -> Check {
    let fans = corpus::fan_quasigroups();
    let config = IdentityConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(MUTATION_SEED);
    let (mut by_axioms, mut by_identities) = (0, 0);
    for i in 0..50 {
        let g = &fans[rng.random_range(0..fans.len())];
        let n = g.magma.order();
        let (r, c) = (rng.random_range(0..n), rng.random_range(0..n));
        let old = g.magma.mul(r, c);
        let new = (old + rng.random_range(1..n)) % n;
        let mut table = g.magma.table().to_vec();
        table[r * n + c] = new;
        let m = FiniteMagma::from_flat(n, table).map_err(|e| e.to_string())?;
        let axioms_fail = !m.is_quasigroup() || m.find_unit().is_none() || fan_certificate(&m).is_none();
        let identities_fail = match fan_certificate(&m) {
            Some(cert) => identities::verify(&m, Some(&cert), &identities::all_identity_ids(), &config)
                .map_err(|e| e.to_string())?
                .iter()
                .any(|r| r.failure_count > 0),
            None => identities::check_quasigroup_basics(&m, &config)
                .iter()
                .any(|r| r.failure_count > 0),
        };
        by_axioms += usize::from(axioms_fail);
        by_identities += usize::from(identities_fail);
        ensure(axioms_fail || identities_fail, || {
            format!("mutation {i} of {} at ({r},{c}) {old}->{new} went undetected", g.name)
        })?;
    }
    Ok(format!(
        "50/50 detected ({by_axioms} by axioms, {by_identities} by identities)"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("group sanity", group_sanity, Some(Duration::from_secs(1))),
        ("direct product nucleus and center", direct_product_laws, None),
        (
            "smashed products are left quasigroups",
            smashed_left_quasigroups,
            Some(Duration::from_secs(30)),
        ),
        (
            "left-not-right witness search",
            left_not_right_search,
            Some(Duration::from_secs(60)),
        ),
        ("skew smashed products are fan quasigroups", skew_products_are_fan, None),
        (
            "trivial factors collapse to direct products",
            trivial_factor_collapse,
            None,
        ),
        (
            "identity suite on the corpus",
            identity_suite,
            Some(Duration::from_secs(300)),
        ),
        ("fan is normal and the quotient is a group", quotient_by_fan, None),
        ("Latin square census", census_cross_check, None),
        ("single-cell mutations are detected", mutation_sensitivity, None),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut result = check();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(limit)) = (&result, limit) {
            if elapsed > *limit {
                result = Err(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {}/10 passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
