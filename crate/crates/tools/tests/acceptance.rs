//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test -p og6-tools --test acceptance -- --nocapture`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use og6_lattice::classify::{
    classify_l, classify_lambda, diff_rows, gluing_exists, nontrivial_pipeline, order4_gluing_filter, ReferenceData, Side,
};
use og6_lattice::embed::{brute_force_vector_classes, det_identity_stats, primitive_embeddings};
use og6_lattice::genus::genus_equal;
use og6_lattice::isometry::{
    analyze, index_exponent, invariant_coinvariant, spinor_norm_involution, spinor_norm_orientation, verify_isometry,
};
use og6_lattice::{discriminant_form, parse_lattice, GramLattice, IntMatrix};
use og6_tools::cli::{computed_rows, restrict_to_table};
use og6_tools::data::{self, TableId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LIMIT_TABLE1: Duration = Duration::from_secs(60);
const LIMIT_TABLE2: Duration = Duration::from_secs(30);
const LIMIT_TABLE3: Duration = Duration::from_secs(60);
const LIMIT_TABLE4: Duration = Duration::from_secs(5);
const LIMIT_TABLE5: Duration = Duration::from_secs(120);
const LIMIT_PROPERTIES: Duration = Duration::from_secs(60);
const LIMIT_ORACLE: Duration = Duration::from_secs(30);
const INVOLUTION_SAMPLES: usize = 200;
const ORACLE_BOX: i128 = 6;
const SEED: u64 = 0x0906;

struct Verdict {
    pass: bool,
    detail: String,
}

fn report(n: usize, name: &str, elapsed: Duration, limit: Option<Duration>, v: Verdict) -> bool {
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let pass = v.pass && in_time;
    let time = match limit {
        Some(l) => format!("{:.2}s/{}s", elapsed.as_secs_f64(), l.as_secs()),
        None => format!("{:.2}s", elapsed.as_secs_f64()),
    };
    println!("{} criterion {n} ({name}) [{time}]: {}", if pass { "PASS" } else { "FAIL" }, v.detail);
    pass
}

fn timed(f: impl FnOnce() -> Verdict) -> (Duration, Verdict) {
    let t = Instant::now();
    let v = f();
    (t.elapsed(), v)
}

fn refs() -> ReferenceData {
    data::reference_data(&data::data_dir()).expect("bundled data loads")
}

fn lat(s: &str) -> GramLattice {
    parse_lattice(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

/// Diffs one table block; returns (equal, realized count, summary).
fn diff_block(id: &str, refs: &ReferenceData) -> (bool, usize, String) {
    let id = TableId::parse(id).unwrap();
    let expected = data::expected_rows(&data::data_dir(), &id).unwrap();
    let computed = restrict_to_table(computed_rows(&id, refs).unwrap(), &expected);
    let realized = computed.iter().filter(|r| r.status.is_realized()).count();
    let d = diff_rows(&computed, &expected).unwrap();
    let mut s = format!("{id}: {}/{} matched", d.matched, expected.len());
    for m in &d.missing {
        s.push_str(&format!("; missing {m}"));
    }
    for x in &d.extra {
        s.push_str(&format!("; extra {x}"));
    }
    for (e, c) in &d.mismatched {
        s.push_str(&format!("; {e} computed as {c}"));
    }
    (d.is_equal(), realized, s)
}

fn criterion_table1(refs: &ReferenceData) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut total = 0;
    for (p, id) in [(2, "table1#p2"), (3, "table1#p3"), (5, "table1#p5"), (7, "table1#p7")] {
        let rows = classify_lambda(p, refs).unwrap();
        total += rows.iter().filter(|r| r.status.is_realized()).count();
        let (eq, _, s) = diff_block(id, refs);
        pass &= eq;
        parts.push(s);
    }
    pass &= total == 34;
    Verdict { pass, detail: format!("{total} realized rows, expected 34; {}", parts.join(" | ")) }
}

fn criterion_table2(refs: &ReferenceData) -> Verdict {
    let (eq, _, s) = diff_block("table2", refs);
    let report = nontrivial_pipeline(refs).unwrap();
    let n = report.square4.len();
    Verdict { pass: eq && n == 20, detail: format!("{n} complements, expected 20; {s}") }
}

fn set_str(s: &BTreeSet<usize>) -> String {
    format!("{:?}", s)
}

fn criterion_table3(refs: &ReferenceData) -> Verdict {
    let dir = data::data_dir();
    let id = TableId::parse("table3").unwrap();
    let (file, rows) = data::load_table(&dir, &id).unwrap();
    let report = nontrivial_pipeline(refs).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();

    let n = report.gluing_pairs.len();
    pass &= n == 27;
    parts.push(format!("{n} candidate pairs generated, expected 27"));

    let want_det: BTreeSet<usize> = [1, 2, 3, 5, 11, 13, 17, 19, 21, 23, 25, 27].into();
    let want_o4: BTreeSet<usize> = [4, 6, 8, 9, 14, 15, 16, 18, 22].into();
    let mut got_det = BTreeSet::new();
    let mut got_o4 = BTreeSet::new();
    for r in &rows {
        let s = lat(r.s.as_deref().unwrap());
        let t = lat(r.t.as_deref().unwrap());
        if s.determinant().abs() != t.determinant().abs() {
            got_det.insert(r.no);
        } else if !order4_gluing_filter(&s, &t).unwrap() {
            got_o4.insert(r.no);
        }
    }
    pass &= got_det == want_det && got_o4 == want_o4;
    parts.push(format!("determinant filter removes {}, order-4 filter removes {}", set_str(&got_det), set_str(&got_o4)));

    let r25 = rows.iter().find(|r| r.no == 25).unwrap();
    let literal = gluing_exists(&lat(r25.s.as_deref().unwrap()), &lat(r25.t.as_deref().unwrap()), true).unwrap();
    let alt = file.case25_alternate.as_ref().unwrap();
    let alternate = gluing_exists(&lat(&alt.s), &lat(&alt.t), true).unwrap();
    pass &= !literal && !alternate;
    parts.push(format!("case 25 gluing exists: literal {literal}, alternate {alternate}"));

    let survivors = report.gluing_pairs.iter().filter(|r| r.marker).count();
    let (eq, _, s) = diff_block("table3", refs);
    pass &= survivors == 6 && eq;
    parts.push(format!("{survivors} survivors, expected 6"));
    parts.push(s);
    Verdict { pass, detail: parts.join("; ") }
}

fn criterion_table4() -> Verdict {
    let l = lat("U^3+[-2]^2");
    let certs = data::load_certificates(&data::data_dir()).unwrap();
    let mut bad = Vec::new();
    for c in &certs {
        let ok = (|| {
            let rec = analyze(&l, &c.matrix).ok()?;
            let co = genus_equal(&rec.coinvariant.lattice, &lat(&c.coinvariant)).ok()?;
            let inv = genus_equal(&rec.invariant.lattice, &lat(&c.invariant)).ok()?;
            Some(rec.order == 2 && rec.disc_order == 2 && co && inv)
        })();
        if ok != Some(true) {
            bad.push(c.no);
        }
    }
    Verdict { pass: certs.len() == 6 && bad.is_empty(), detail: format!("{} matrices, failing {:?}", certs.len(), bad) }
}

fn criterion_table5(refs: &ReferenceData) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for (id, want) in [("table5#p2t", 24), ("table5#p2n", 6), ("table5#p3", 4), ("table5#p5", 1), ("table5#p7", 1)] {
        let (eq, realized, s) = diff_block(id, refs);
        pass &= eq && realized == want;
        parts.push(format!("{realized} realized (expected {want}), {s}"));
    }
    let p3 = classify_l(3, 1, refs).unwrap();
    let excluded: Vec<String> =
        p3.iter().filter_map(|r| r.status.reason().map(|x| format!("{} ({})", r.coinvariant.label(), x.name()))).collect();
    pass &= excluded.len() == 1;
    parts.push(format!("p=3 exclusions {excluded:?}"));
    Verdict { pass, detail: parts.join(" | ") }
}

/// `P` with `det P = ±1` from random elementary operations.
fn random_unimodular(n: usize, rng: &mut ChaCha8Rng) -> IntMatrix {
    let mut p = IntMatrix::identity(n);
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let k = rng.gen_range(-1..=1);
        for r in 0..n {
            let v = p[(r, j)];
            p[(r, i)] += k * v;
        }
    }
    p
}

fn unimodular_inverse(p: &IntMatrix) -> IntMatrix {
    og6_lattice::linalg::unimodular_inverse(p).unwrap()
}

/// `±1` on each orthogonal block, conjugated by a random change of basis.
fn random_involution(blocks: &[&str], rng: &mut ChaCha8Rng) -> (GramLattice, IntMatrix) {
    let parts: Vec<GramLattice> = blocks.iter().map(|b| lat(b)).collect();
    let refs: Vec<&GramLattice> = parts.iter().collect();
    let base = GramLattice::direct_sum(&refs);
    let n = base.rank();
    let mut g = IntMatrix::identity(n);
    let mut k = 0;
    for part in &parts {
        let sign = if rng.gen_bool(0.5) { -1 } else { 1 };
        for i in k..k + part.rank() {
            g[(i, i)] = sign;
        }
        k += part.rank();
    }
    let p = random_unimodular(n, rng);
    let lattice = base.transform(&p).unwrap();
    let conj = unimodular_inverse(&p).mul(&g).unwrap().mul(&p).unwrap();
    (lattice, conj)
}

fn check_involution(l: &GramLattice, g: &IntMatrix, unimodular: bool) -> Result<(), String> {
    let order = verify_isometry(l, g).map_err(|e| e.to_string())?;
    if order > 2 {
        return Err(format!("order {order}"));
    }
    let (inv, coinv) = invariant_coinvariant(l, g, 2).map_err(|e| e.to_string())?;
    let cross = inv.basis.transpose().mul(l.gram()).unwrap().mul(&coinv.basis).unwrap();
    if cross != IntMatrix::zeros(inv.basis.cols(), coinv.basis.cols()) {
        return Err("kernels not orthogonal".into());
    }
    if unimodular && inv.lattice.rank() > 0 && coinv.lattice.rank() > 0 {
        let (fi, fc) = (discriminant_form(&inv.lattice), discriminant_form(&coinv.lattice));
        if !fi.is_p_elementary(2) || !fc.is_p_elementary(2) {
            return Err("kernel forms not 2-elementary".into());
        }
        if !fc.is_isometric(&fi.rescaled(-1)).map_err(|e| e.to_string())? {
            return Err("kernel forms not anti-isometric".into());
        }
    }
    let want: i8 = if coinv.lattice.signature().plus % 2 == 0 { 1 } else { -1 };
    let a = spinor_norm_orientation(l, g).map_err(|e| e.to_string())?;
    let b = spinor_norm_involution(l, g).map_err(|e| e.to_string())?;
    if a != want || b != want {
        return Err(format!("spinor norms {a}, {b}, expected {want}"));
    }
    let e = index_exponent(l, &inv.basis, &coinv.basis, 2).map_err(|e| e.to_string())?;
    if e > inv.lattice.rank().min(coinv.lattice.rank()) {
        return Err(format!("index exponent {e} too large"));
    }
    Ok(())
}

fn criterion_properties() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let lambda = ["U", "U", "U", "U", "U"];
    let og6 = ["U", "U", "U", "[-2]", "[-2]"];
    let mut failures = Vec::new();
    for i in 0..INVOLUTION_SAMPLES {
        let on_lambda = i % 2 == 0;
        let (l, g) = random_involution(if on_lambda { &lambda } else { &og6 }, &mut rng);
        if let Err(e) = check_involution(&l, &g, on_lambda) {
            failures.push(format!("sample {i}: {e}"));
        }
    }
    Verdict {
        pass: failures.is_empty(),
        detail: format!("{}/{} involutions pass{}", INVOLUTION_SAMPLES - failures.len(), INVOLUTION_SAMPLES, failures.first().map(|f| format!("; first failure {f}")).unwrap_or_default()),
    }
}

/// Drops genus duplicates.
fn genus_set(ls: Vec<GramLattice>) -> Vec<GramLattice> {
    let mut out: Vec<GramLattice> = Vec::new();
    for l in ls {
        if !out.iter().any(|k| genus_equal(k, &l).unwrap()) {
            out.push(l);
        }
    }
    out
}

fn criterion_oracle() -> Verdict {
    let mut mismatches = Vec::new();
    let mut cases = 0;
    for sub in ["[2]", "[-2]", "[4]", "[-4]", "[6]", "[-6]"] {
        for ambient in ["U", "U(2)", "U+[-2]", "[2]+[-2]"] {
            cases += 1;
            let (s, l) = (lat(sub), lat(ambient));
            let fast: Vec<GramLattice> = primitive_embeddings(&s, &l)
                .unwrap()
                .iter()
                .map(|r| {
                    let side = Side::complement_of(r);
                    side.lattice.unwrap_or_else(|| panic!("{sub} in {ambient}: complement without representative"))
                })
                .collect();
            let fast = genus_set(fast);
            let slow = brute_force_vector_classes(&l, s.gram()[(0, 0)], ORACLE_BOX).unwrap();
            let same = fast.len() == slow.len() && fast.iter().all(|f| slow.iter().any(|b| genus_equal(f, b).unwrap()));
            if !same {
                mismatches.push(format!("{sub} in {ambient}: {} vs {} classes", fast.len(), slow.len()));
            }
        }
    }
    Verdict { pass: mismatches.is_empty(), detail: format!("{cases} cases, mismatches {mismatches:?}") }
}

#[test]
fn acceptance() {
    let refs = refs();
    let mut results = Vec::new();
    let (t, v) = timed(|| criterion_table1(&refs));
    results.push(report(1, "table 1", t, Some(LIMIT_TABLE1), v));
    let (t, v) = timed(|| criterion_table2(&refs));
    results.push(report(2, "table 2", t, Some(LIMIT_TABLE2), v));
    let (t, v) = timed(|| criterion_table3(&refs));
    results.push(report(3, "table 3 and filters", t, Some(LIMIT_TABLE3), v));
    let (t, v) = timed(criterion_table4);
    results.push(report(4, "table 4 certificates", t, Some(LIMIT_TABLE4), v));
    let (t, v) = timed(|| criterion_table5(&refs));
    results.push(report(5, "table 5", t, Some(LIMIT_TABLE5), v));
    let (t, v) = timed(criterion_properties);
    results.push(report(6, "involution properties", t, Some(LIMIT_PROPERTIES), v));
    let (t, v) = timed(criterion_oracle);
    results.push(report(7, "embedding oracle", t, Some(LIMIT_ORACLE), v));
    let stats = det_identity_stats();
    let v = Verdict {
        pass: stats.checks > 0 && stats.violations == 0,
        detail: format!("{} determinant identity checks, {} violations", stats.checks, stats.violations),
    };
    results.push(report(8, "determinant identity", Duration::ZERO, None, v));
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, p)| !**p).map(|(i, _)| i + 1).collect();
    println!("{} of {} criteria pass", results.len() - failed.len(), results.len());
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
