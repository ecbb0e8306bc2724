//! JSON, CSV and plain-text rendering of library values.
//!
//! JSON objects come out with sorted keys and canonical fraction strings, so
//! identical inputs give byte-identical output.

use og6_lattice::classify::{Certificate, CertificateSource, ClassificationRow, DiffReport, PairRow, Side, Status};
use og6_lattice::embed::EmbeddingRecord;
use og6_lattice::finite::fmt_mod2;
use og6_lattice::genus::CatalogEntry;
use og6_lattice::isometry::IsometryRecord;
use og6_lattice::{parse_lattice, Int, IntMatrix, Rat, SignaturePair, TorsionQuadraticForm};
use serde_json::{json, Value};

pub fn fmt_mod1(x: Rat) -> String {
    let one = Rat::from_integer(1);
    let r = x - (x / one).floor();
    if r.denom() == &1 {
        format!("{} mod 1", r.numer())
    } else {
        format!("{}/{} mod 1", r.numer(), r.denom())
    }
}

/// Parses `"a/b mod m"` or `"a mod m"`.
pub fn parse_fraction(s: &str) -> Option<Rat> {
    let head = s.split(" mod ").next()?.trim();
    match head.split_once('/') {
        Some((n, d)) => {
            let n: Int = n.trim().parse().ok()?;
            let d: Int = d.trim().parse().ok()?;
            (d != 0).then(|| Rat::new(n, d))
        }
        None => Some(Rat::from_integer(head.parse().ok()?)),
    }
}

pub fn matrix_json(m: &IntMatrix) -> Value {
    json!(m.to_rows())
}

pub fn form_json(f: &TorsionQuadraticForm) -> Value {
    json!({
        "divisors": f.divisors(),
        "order": f.order().to_string(),
        "length": f.length(),
        "q": f.q_table().iter().map(|x| fmt_mod2(*x)).collect::<Vec<_>>(),
        "b": f.b_table().iter().map(|r| r.iter().map(|x| fmt_mod1(*x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn form_from_json(v: &Value) -> Option<TorsionQuadraticForm> {
    let divisors: Vec<Int> = v.get("divisors")?.as_array()?.iter().map(|d| d.as_i64().map(Int::from)).collect::<Option<_>>()?;
    let q: Vec<Rat> = v.get("q")?.as_array()?.iter().map(|s| parse_fraction(s.as_str()?)).collect::<Option<_>>()?;
    let b: Vec<Vec<Rat>> = v
        .get("b")?
        .as_array()?
        .iter()
        .map(|r| r.as_array()?.iter().map(|s| parse_fraction(s.as_str()?)).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()?;
    TorsionQuadraticForm::from_tables(divisors, q, b).ok()
}

pub fn side_json(s: &Side) -> Value {
    json!({
        "expression": s.expr.as_ref().map(|e| e.to_string()),
        "signature": s.signature.to_string(),
        "rank": s.rank(),
        "discriminant": form_json(&s.form),
    })
}

fn parse_signature(s: &str) -> Option<SignaturePair> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    let (p, m) = inner.split_once(',')?;
    Some(SignaturePair::new(p.trim().parse().ok()?, m.trim().parse().ok()?))
}

/// Rebuilds a side from its JSON rendering, preferring the expression.
pub fn side_from_json(v: &Value) -> Option<Side> {
    if let Some(e) = v.get("expression").and_then(Value::as_str) {
        let expr = og6_lattice::LatticeExpr::parse(e).ok()?;
        let lattice = parse_lattice(e).ok()?;
        return Some(Side::concrete(expr, lattice));
    }
    let signature = parse_signature(v.get("signature")?.as_str()?)?;
    let form = form_from_json(v.get("discriminant")?)?;
    Some(Side { expr: None, lattice: None, signature, form })
}

fn status_fields(s: Status) -> (&'static str, Option<&'static str>) {
    match s {
        Status::Realized => ("realized", None),
        Status::Excluded(r) => ("excluded", Some(r.name())),
    }
}

pub fn certificate_json(c: &Certificate) -> Value {
    let source = match c.source {
        CertificateSource::Bundled(i) => format!("bundled:{}", i + 1),
        CertificateSource::Constructed => "constructed".into(),
    };
    json!({
        "source": source,
        "gram": matrix_json(&c.gram),
        "matrix": matrix_json(&c.matrix),
        "spinor": c.spinor,
        "disc_order": c.disc_order,
    })
}

pub fn row_json(r: &ClassificationRow) -> Value {
    let (status, reason) = status_fields(r.status);
    json!({
        "p": r.p,
        "disc_action_order": r.disc_action_order,
        "coinvariant": side_json(&r.coinvariant),
        "invariant": r.invariant.as_ref().map(side_json),
        "signature_coinv": r.signature_coinv().to_string(),
        "a": r.a,
        "delta": r.delta,
        "status": status,
        "reason": reason,
        "certificate": r.certificate.as_ref().map(certificate_json),
    })
}

pub fn pair_json(r: &PairRow) -> Value {
    let (status, reason) = status_fields(r.status);
    json!({
        "first": side_json(&r.first),
        "second": r.second.as_ref().map(side_json),
        "status": status,
        "reason": reason,
        "marker": r.marker,
    })
}

/// Reads back a row rendered by [`row_json`] or [`pair_json`].
pub fn pair_from_json(v: &Value) -> Option<PairRow> {
    let (first, second) = match v.get("first") {
        Some(f) => (f, v.get("second")),
        None => (v.get("coinvariant")?, v.get("invariant")),
    };
    let first = side_from_json(first)?;
    let second = match second {
        Some(Value::Null) | None => None,
        Some(s) => Some(side_from_json(s)?),
    };
    let status = match v.get("reason").and_then(Value::as_str) {
        None => Status::Realized,
        Some(name) => Status::Excluded(reason_by_name(name)?),
    };
    let marker = v.get("marker").and_then(Value::as_bool).unwrap_or(false);
    Some(PairRow { first, second, status, marker })
}

fn reason_by_name(name: &str) -> Option<og6_lattice::classify::Reason> {
    use og6_lattice::classify::Reason::*;
    use og6_lattice::genus::AdmissibilityFailure as A;
    let all = [
        Admissibility(A::RankDivisibility),
        Admissibility(A::IndexBound),
        Admissibility(A::AmbientRank),
        Admissibility(A::SquareTest),
        NoEmbedding,
        K3Certificate,
        NotK3Realizable,
        LengthExceedsRank,
        Determinant,
        Order4Gluing,
        NoNontrivialGluing,
        CertificateFailed,
    ];
    all.into_iter().find(|r| r.name() == name)
}

pub fn record_json(r: &EmbeddingRecord) -> Value {
    let complement = Side::complement_of(r);
    json!({
        "h_order": r.h_order.to_string(),
        "h_basis": r.h_basis,
        "gamma": r.gamma.images,
        "complement": side_json(&complement),
        "det_identity": r.det_identity_holds(),
    })
}

pub fn isometry_json(r: &IsometryRecord, effective: Option<bool>) -> Value {
    let sub = |s: &og6_lattice::isometry::Sublattice| {
        let side = Side::of_lattice(&s.lattice).ok();
        json!({
            "basis": s.basis.to_cols(),
            "gram": matrix_json(s.lattice.gram()),
            "signature": s.lattice.signature().to_string(),
            "expression": side.and_then(|x| x.expr).map(|e| e.to_string()),
        })
    };
    json!({
        "order": r.order,
        "disc_order": r.disc_order,
        "invariant": sub(&r.invariant),
        "coinvariant": sub(&r.coinvariant),
        "spinor": r.spinor,
        "index_exponent": r.index_exponent,
        "effective": effective,
    })
}

pub fn catalog_json(e: &CatalogEntry) -> Value {
    json!({
        "expression": e.expr.to_string(),
        "signature": e.tag.signature.to_string(),
        "a": e.tag.a,
        "delta": e.tag.delta,
    })
}

pub fn diff_json(table: &str, d: &DiffReport) -> Value {
    json!({
        "table": table,
        "equal": d.is_equal(),
        "matched": d.matched,
        "missing": d.missing,
        "extra": d.extra,
        "mismatched": d.mismatched.iter().map(|(e, c)| json!({"expected": e, "computed": c})).collect::<Vec<_>>(),
    })
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub const ROW_COLUMNS: [&str; 9] = ["p", "disc_action_order", "coinvariant", "invariant", "signature_coinv", "a", "delta", "status", "reason"];
pub const PAIR_COLUMNS: [&str; 5] = ["first", "second", "status", "reason", "marker"];

pub fn row_record(r: &ClassificationRow) -> Vec<String> {
    let (status, reason) = status_fields(r.status);
    vec![
        r.p.to_string(),
        r.disc_action_order.to_string(),
        r.coinvariant.label(),
        opt(r.invariant.as_ref().map(Side::label)),
        r.signature_coinv().to_string(),
        r.a.to_string(),
        opt(r.delta),
        status.into(),
        opt(reason),
    ]
}

pub fn pair_record(r: &PairRow) -> Vec<String> {
    let (status, reason) = status_fields(r.status);
    vec![r.first.label(), opt(r.second.as_ref().map(Side::label)), status.into(), opt(reason), r.marker.to_string()]
}

pub fn csv_table(header: &[&str], records: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in records {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Column-aligned text with a numbered first column.
pub fn pretty_table(header: &[&str], records: &[Vec<String>]) -> String {
    let mut cols: Vec<Vec<String>> = vec![std::iter::once("No.".to_string()).chain(header.iter().map(|s| s.to_string())).collect()];
    for (i, r) in records.iter().enumerate() {
        cols.push(std::iter::once((i + 1).to_string()).chain(r.iter().cloned()).collect());
    }
    let n = cols[0].len();
    let widths: Vec<usize> = (0..n).map(|j| cols.iter().map(|r| r[j].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for (k, r) in cols.iter().enumerate() {
        let line: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(line.join(" | ").trim_end());
        out.push('\n');
        if k == 0 {
            out.push_str(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("-+-"));
            out.push('\n');
        }
    }
    out
}

pub fn pretty_form(f: &TorsionQuadraticForm) -> String {
    if f.is_trivial() {
        return "trivial group".into();
    }
    let group: Vec<String> = f.divisors().iter().map(|d| format!("Z/{d}")).collect();
    let q: Vec<String> = f.q_table().iter().map(|x| fmt_mod2(*x)).collect();
    format!("{} with q = [{}]", group.join(" + "), q.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use og6_lattice::discriminant_form;

    #[test]
    fn fractions_round_trip() {
        assert_eq!(parse_fraction("3/2 mod 2"), Some(Rat::new(3, 2)));
        assert_eq!(parse_fraction("0 mod 2"), Some(Rat::from_integer(0)));
        assert_eq!(fmt_mod1(Rat::new(-1, 2)), "1/2 mod 1");
        assert_eq!(parse_fraction("x/2 mod 2"), None);
    }

    #[test]
    fn form_round_trip() {
        let f = discriminant_form(&parse_lattice("U(2)+[-4]").unwrap());
        let g = form_from_json(&form_json(&f)).unwrap();
        assert!(f.is_isometric(&g).unwrap());
    }

    #[test]
    fn pretty_trivial() {
        assert_eq!(pretty_form(&discriminant_form(&parse_lattice("U").unwrap())), "trivial group");
    }
}
