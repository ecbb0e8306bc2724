//! Classification of prime-order nonsymplectic actions on `Λ = U⁵` and on
//! `L = U³ ⊕ [−2]²`, with every excluded candidate kept and labelled.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::embed::{gluings, overlattice, primitive_embeddings, EmbeddingRecord, GluingQuery};
use crate::error::{Error, Result};
use crate::expr::{parse_lattice, LatticeExpr};
use crate::finite::{discriminant_form, TorsionQuadraticForm};
use crate::genus::{
    admissible_coinvariant, catalog_p_elementary, find_representative, genus_equal, genus_matches,
    k3_embedding_certificate, k3_realizable, AdmissibilityFailure, GenusTag,
};
use crate::isometry::{analyze, effectiveness};
use crate::lattice::{GramLattice, SignaturePair};
use crate::linalg::{Int, IntMatrix};
use crate::embed::length_case_analysis;

pub const LAMBDA: &str = "U^5";
pub const OG6: &str = "U^3+[-2]^2";

pub fn lambda() -> GramLattice {
    parse_lattice(LAMBDA).expect("valid expression")
}

pub fn og6() -> GramLattice {
    parse_lattice(OG6).expect("valid expression")
}

/// One column of a table: a genus, with a block-sum representative when known.
#[derive(Clone, Debug)]
pub struct Side {
    pub expr: Option<LatticeExpr>,
    pub lattice: Option<GramLattice>,
    pub signature: SignaturePair,
    pub form: TorsionQuadraticForm,
}

impl Side {
    pub fn concrete(expr: LatticeExpr, lattice: GramLattice) -> Side {
        let form = discriminant_form(&lattice);
        Side { expr: Some(expr), signature: lattice.signature(), lattice: Some(lattice), form }
    }

    /// Names the genus of `l` by a block sum when one is found.
    pub fn of_lattice(l: &GramLattice) -> Result<Side> {
        let form = discriminant_form(l);
        let expr = find_representative(l.signature(), &form)?.map(|(e, _)| e);
        Ok(Side { expr, signature: l.signature(), lattice: Some(l.clone()), form })
    }

    pub fn complement_of(r: &EmbeddingRecord) -> Side {
        match &r.representative {
            Some((e, l)) => Side::concrete(e.clone(), l.clone()),
            None => Side { expr: None, lattice: None, signature: r.complement_signature, form: r.complement_form.clone() },
        }
    }

    pub fn rank(&self) -> usize {
        self.signature.rank()
    }

    pub fn matches(&self, l: &GramLattice) -> Result<bool> {
        genus_matches(l, self.signature, &self.form)
    }

    pub fn same_genus(&self, other: &Side) -> Result<bool> {
        Ok(self.signature == other.signature && self.form.is_isometric(&other.form)?)
    }

    /// The `p`-elementary tag, if the form is `p`-elementary.
    pub fn tag(&self, p: Int) -> Option<GenusTag> {
        if !self.form.is_p_elementary(p) {
            return None;
        }
        let delta = if p == 2 { self.form.delta().ok() } else { None };
        Some(GenusTag { signature: self.signature, p, a: self.form.length(), delta })
    }

    pub fn label(&self) -> String {
        match &self.expr {
            Some(e) => format!("{e}"),
            None => format!("genus{} disc{:?}", self.signature, self.form.elementary_divisors()),
        }
    }
}

/// Why a candidate was dropped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reason {
    Admissibility(AdmissibilityFailure),
    NoEmbedding,
    K3Certificate,
    NotK3Realizable,
    LengthExceedsRank,
    Determinant,
    Order4Gluing,
    NoNontrivialGluing,
    CertificateFailed,
}

impl Reason {
    pub fn name(self) -> &'static str {
        match self {
            Reason::Admissibility(f) => f.name(),
            Reason::NoEmbedding => "no primitive embedding",
            Reason::K3Certificate => "k3 certificate",
            Reason::NotK3Realizable => "not k3 realizable",
            Reason::LengthExceedsRank => "length exceeds rank",
            Reason::Determinant => "determinant",
            Reason::Order4Gluing => "order-4 gluing",
            Reason::NoNontrivialGluing => "no nontrivial gluing",
            Reason::CertificateFailed => "certificate failed",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Realized,
    Excluded(Reason),
}

impl Status {
    pub fn is_realized(self) -> bool {
        self == Status::Realized
    }

    pub fn reason(self) -> Option<Reason> {
        match self {
            Status::Realized => None,
            Status::Excluded(r) => Some(r),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateSource {
    /// Index into the bundled matrix list.
    Bundled(usize),
    /// Built from a gluing of the two kernels.
    Constructed,
}

/// An explicit involution realizing a row, on a lattice in the genus of `L`.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub source: CertificateSource,
    pub gram: IntMatrix,
    pub matrix: IntMatrix,
    pub spinor: i8,
    pub disc_order: u32,
}

#[derive(Clone, Debug)]
pub struct ClassificationRow {
    pub p: Int,
    pub disc_action_order: u32,
    pub coinvariant: Side,
    pub invariant: Option<Side>,
    pub a: usize,
    pub delta: Option<u8>,
    pub status: Status,
    pub certificate: Option<Certificate>,
}

impl ClassificationRow {
    fn new(p: Int, disc_action_order: u32, coinvariant: Side, invariant: Option<Side>, status: Status) -> Self {
        let a = coinvariant.form.length();
        let delta = if p == 2 { coinvariant.tag(2).and_then(|t| t.delta) } else { None };
        ClassificationRow { p, disc_action_order, coinvariant, invariant, a, delta, status, certificate: None }
    }

    pub fn signature_coinv(&self) -> SignaturePair {
        self.coinvariant.signature
    }

    pub fn as_pair(&self) -> PairRow {
        PairRow { first: self.coinvariant.clone(), second: self.invariant.clone(), status: self.status, marker: false }
    }
}

/// A two-column row of the intermediate tables.
#[derive(Clone, Debug)]
pub struct PairRow {
    pub first: Side,
    pub second: Option<Side>,
    pub status: Status,
    /// Table-specific flag: embeds into `L` for the `[4]` table, survives all
    /// filters for the gluing table.
    pub marker: bool,
}

/// Bundled inputs that are data rather than computation.
#[derive(Clone, Debug, Default)]
pub struct ReferenceData {
    /// Coinvariant genus tags realized by nonsymplectic actions on K3 surfaces.
    pub k3_realizable: Vec<GenusTag>,
    /// Involutions of `L` in column convention.
    pub certificates: Vec<IntMatrix>,
}

fn check_prime(p: Int) -> Result<()> {
    if matches!(p, 2 | 3 | 5 | 7) {
        Ok(())
    } else {
        Err(Error::Unsupported("p must be 2, 3, 5 or 7"))
    }
}

/// Coinvariant/invariant pairs for order-`p` actions on `Λ`.
pub fn classify_lambda(p: Int, refs: &ReferenceData) -> Result<Vec<ClassificationRow>> {
    check_prime(p)?;
    let lam = lambda();
    let ambient = lam.signature();
    let filter = move |s: SignaturePair| (s.plus == 2 || (p == 2 && s.plus == 3)) && s.fits_in(ambient);
    let max_rank = if p == 2 { 8 } else { 7 };
    let mut rows = Vec::new();
    for entry in catalog_p_elementary(p, max_rank, &filter)? {
        let side = Side::concrete(entry.expr.clone(), entry.lattice.clone());
        let failures = admissible_coinvariant(&entry.lattice, p, lam.rank());
        if let Some(&f) = failures.first() {
            rows.push(ClassificationRow::new(p, 1, side, None, Status::Excluded(Reason::Admissibility(f))));
            continue;
        }
        let records = primitive_embeddings(&entry.lattice, &lam)?;
        let Some(rec) = records.first() else {
            rows.push(ClassificationRow::new(p, 1, side, None, Status::Excluded(Reason::NoEmbedding)));
            continue;
        };
        let inv = Side::complement_of(rec);
        let status = if p == 2 {
            Status::Realized
        } else if !k3_embedding_certificate(&entry.lattice)? {
            Status::Excluded(Reason::K3Certificate)
        } else if !k3_realizable(&entry.tag, &refs.k3_realizable) {
            Status::Excluded(Reason::NotK3Realizable)
        } else {
            Status::Realized
        };
        rows.push(ClassificationRow::new(p, 1, side, Some(inv), status));
    }
    Ok(rows)
}

/// Coinvariant/invariant pairs for effective nonsymplectic order-`p` actions
/// on `L` whose action on `L♯` has order `disc_action`.
pub fn classify_l(p: Int, disc_action: u32, refs: &ReferenceData) -> Result<Vec<ClassificationRow>> {
    check_prime(p)?;
    match (p, disc_action) {
        (2, 1) => classify_l_trivial(refs),
        (2, 2) => Ok(nontrivial_pipeline(refs)?.rows),
        (_, 1) => classify_l_odd(p, refs),
        _ => Err(Error::Unsupported("a non-trivial discriminant action needs p = 2")),
    }
}

fn realized_lambda(p: Int, plus: usize, refs: &ReferenceData) -> Result<Vec<ClassificationRow>> {
    Ok(classify_lambda(p, refs)?
        .into_iter()
        .filter(|r| r.status.is_realized() && r.coinvariant.signature.plus == plus)
        .collect())
}

fn classify_l_trivial(refs: &ReferenceData) -> Result<Vec<ClassificationRow>> {
    let l = og6();
    let mut rows = Vec::new();
    for lam_row in realized_lambda(2, 2, refs)? {
        let s = lam_row.coinvariant.lattice.clone().expect("catalog rows are concrete");
        let cases = length_case_analysis(&s, l.rank())?;
        if !cases.iter().any(|c| c.feasible) {
            rows.push(ClassificationRow::new(2, 1, lam_row.coinvariant, None, Status::Excluded(Reason::LengthExceedsRank)));
            continue;
        }
        let records = primitive_embeddings(&s, &l)?;
        if records.is_empty() {
            rows.push(ClassificationRow::new(2, 1, lam_row.coinvariant, None, Status::Excluded(Reason::NoEmbedding)));
            continue;
        }
        for rec in &records {
            let inv = Side::complement_of(rec);
            rows.push(ClassificationRow::new(2, 1, lam_row.coinvariant.clone(), Some(inv), Status::Realized));
        }
    }
    Ok(rows)
}

fn classify_l_odd(p: Int, refs: &ReferenceData) -> Result<Vec<ClassificationRow>> {
    let l = og6();
    let fl = discriminant_form(&l);
    let mut rows = Vec::new();
    for lam_row in realized_lambda(p, 2, refs)? {
        let s = lam_row.coinvariant.lattice.clone().expect("catalog rows are concrete");
        let rank_t = l.rank() - s.rank().min(l.rank());
        // H = {id}: T♯ ≅ L♯ ⊕ S♯(−1)
        let forced = fl.direct_sum(&discriminant_form(&s).rescaled(-1));
        if s.rank() > l.rank() || forced.length() > rank_t {
            rows.push(ClassificationRow::new(p, 1, lam_row.coinvariant, None, Status::Excluded(Reason::LengthExceedsRank)));
            continue;
        }
        let records = primitive_embeddings(&s, &l)?;
        let Some(rec) = records.iter().find(|r| r.h_order == 1) else {
            rows.push(ClassificationRow::new(p, 1, lam_row.coinvariant, None, Status::Excluded(Reason::NoEmbedding)));
            continue;
        };
        rows.push(ClassificationRow::new(p, 1, lam_row.coinvariant, Some(Side::complement_of(rec)), Status::Realized));
    }
    Ok(rows)
}

/// Intermediate tables and final rows for involutions acting non-trivially on `L♯`.
#[derive(Clone, Debug)]
pub struct NontrivialReport {
    /// `(Λ_G, S)` with `S` the complement of a square-4 vector; marker = `S ↪ L`.
    pub square4: Vec<PairRow>,
    /// `(S, T)` with `T` the complement of `S` in `L`; marker = survivor.
    pub gluing_pairs: Vec<PairRow>,
    pub rows: Vec<ClassificationRow>,
}

pub fn nontrivial_pipeline(refs: &ReferenceData) -> Result<NontrivialReport> {
    let l = og6();
    let lam_rows = realized_lambda(2, 3, refs)?;
    let square4 = square4_table(&lam_rows)?;
    let gluing_pairs = gluing_table(&square4, &l, refs)?;
    let mut rows = Vec::new();
    for pair in &gluing_pairs {
        let mut row = ClassificationRow::new(2, 2, pair.first.clone(), pair.second.clone(), pair.status);
        if pair.status.is_realized() {
            row.certificate = certify(&l, pair, refs)?;
        }
        rows.push(row);
    }
    Ok(NontrivialReport { square4, gluing_pairs, rows })
}

/// Complements of square-4 vectors in each signature-(3, ·) coinvariant.
pub fn square4_table(lam_rows: &[ClassificationRow]) -> Result<Vec<PairRow>> {
    let l = og6();
    let four = GramLattice::from_rows(&[[4]])?;
    let mut out = Vec::new();
    for row in lam_rows {
        let lam_g = row.coinvariant.lattice.as_ref().expect("catalog rows are concrete");
        for rec in primitive_embeddings(&four, lam_g)? {
            let s = Side::complement_of(&rec);
            let embeds = match &s.lattice {
                Some(sl) => !primitive_embeddings(sl, &l)?.is_empty(),
                None => false,
            };
            out.push(PairRow { first: row.coinvariant.clone(), second: Some(s), status: Status::Realized, marker: embeds });
        }
    }
    Ok(out)
}

/// `(S, T)` candidates from distinct `S` of the square-4 table, with the
/// determinant, order-4 and nontrivial-gluing filters applied in that order.
pub fn gluing_table(square4: &[PairRow], l: &GramLattice, refs: &ReferenceData) -> Result<Vec<PairRow>> {
    let mut seen: Vec<Side> = Vec::new();
    let mut out = Vec::new();
    for row in square4.iter().filter(|r| r.marker) {
        let s_side = row.second.as_ref().expect("square-4 rows have a complement");
        let mut dup = false;
        for x in &seen {
            if x.same_genus(s_side)? {
                dup = true;
                break;
            }
        }
        if dup {
            continue;
        }
        seen.push(s_side.clone());
        let s = s_side.lattice.as_ref().expect("marked rows are concrete");
        for rec in primitive_embeddings(s, l)? {
            let t_side = Side::complement_of(&rec);
            let status = match &t_side.lattice {
                Some(t) => gluing_status(s, t, l)?,
                None => Status::Excluded(Reason::NoEmbedding),
            };
            out.push(PairRow { first: s_side.clone(), second: Some(t_side), status, marker: status.is_realized() });
        }
    }
    let _ = refs;
    Ok(out)
}

fn gluing_status(s: &GramLattice, t: &GramLattice, l: &GramLattice) -> Result<Status> {
    if s.determinant().abs() != t.determinant().abs() {
        return Ok(Status::Excluded(Reason::Determinant));
    }
    if !order4_gluing_filter(s, t)? {
        return Ok(Status::Excluded(Reason::Order4Gluing));
    }
    let target = discriminant_form(l);
    let found = gluings(s, t, &target, GluingQuery { elementary_only: true, limit: None })?;
    if !found.iter().any(|g| g.swaps_discriminant) {
        return Ok(Status::Excluded(Reason::NoNontrivialGluing));
    }
    Ok(Status::Realized)
}

/// Whether `S ⊕ T` has an overlattice in the genus of `L` through a gluing
/// subgroup without elements of order 4.
pub fn order4_gluing_filter(s: &GramLattice, t: &GramLattice) -> Result<bool> {
    let (ds, dt) = (s.determinant().abs(), t.determinant().abs());
    if ds != dt {
        return Err(Error::DeterminantMismatch(ds, dt));
    }
    gluing_exists(s, t, true)
}

/// Whether `S ⊕ T` has any overlattice with discriminant form that of `L`.
pub fn gluing_exists(s: &GramLattice, t: &GramLattice, elementary_only: bool) -> Result<bool> {
    let target = discriminant_form(&og6());
    Ok(!gluings(s, t, &target, GluingQuery { elementary_only, limit: Some(1) })?.is_empty())
}

/// Checks an involution end-to-end against a claimed `(L_G, L^G)`:
/// order 2, `|G♯| = 2`, kernels in the claimed genera, effective.
pub fn verify_certificate(l: &GramLattice, g: &IntMatrix, coinv: &Side, inv: &Side) -> Result<Option<(i8, u32)>> {
    let Ok(rec) = analyze(l, g) else { return Ok(None) };
    if rec.order != 2 || rec.disc_order != 2 {
        return Ok(None);
    }
    if !coinv.matches(&rec.coinvariant.lattice)? || !inv.matches(&rec.invariant.lattice)? {
        return Ok(None);
    }
    if !effectiveness(l, g, 2)? {
        return Ok(None);
    }
    Ok(Some((rec.spinor, rec.disc_order)))
}

fn certify(l: &GramLattice, pair: &PairRow, refs: &ReferenceData) -> Result<Option<Certificate>> {
    let Some(t_side) = &pair.second else { return Ok(None) };
    for (i, g) in refs.certificates.iter().enumerate() {
        if let Some((spinor, disc_order)) = verify_certificate(l, g, &pair.first, t_side)? {
            return Ok(Some(Certificate { source: CertificateSource::Bundled(i), gram: l.gram().clone(), matrix: g.clone(), spinor, disc_order }));
        }
    }
    let (Some(s), Some(t)) = (&pair.first.lattice, &t_side.lattice) else { return Ok(None) };
    let target = discriminant_form(l);
    for gl in gluings(s, t, &target, GluingQuery { elementary_only: true, limit: None })? {
        if !gl.swaps_discriminant {
            continue;
        }
        let m = overlattice(s, t, &gl)?;
        if !genus_equal(&m.lattice, l)? {
            continue;
        }
        let g = m.involution()?;
        if let Some((spinor, disc_order)) = verify_certificate(&m.lattice, &g, &pair.first, t_side)? {
            return Ok(Some(Certificate { source: CertificateSource::Constructed, gram: m.lattice.gram().clone(), matrix: g, spinor, disc_order }));
        }
    }
    Ok(None)
}

/// A row of a reference table, parsed.
#[derive(Clone, Debug)]
pub struct ExpectedRow {
    pub label: String,
    pub first: GramLattice,
    pub second: Option<GramLattice>,
    /// Exclusion reason name, for rows listed as excluded.
    pub excluded: Option<String>,
    pub marker: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffReport {
    pub matched: usize,
    pub missing: Vec<String>,
    pub extra: Vec<String>,
    /// `(expected, computed)` with equal first column and differing rest.
    pub mismatched: Vec<(String, String)>,
}

impl DiffReport {
    pub fn is_equal(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.mismatched.is_empty()
    }
}

fn pair_label(r: &PairRow) -> String {
    let mut s = r.first.label();
    if let Some(x) = &r.second {
        s.push_str(" | ");
        s.push_str(&x.label());
    }
    if let Some(reason) = r.status.reason() {
        s.push_str(&format!(" [excluded: {}]", reason.name()));
    }
    if r.marker {
        s.push_str(" *");
    }
    s
}

fn first_matches(c: &PairRow, e: &ExpectedRow) -> Result<bool> {
    c.first.matches(&e.first)
}

fn row_matches(c: &PairRow, e: &ExpectedRow) -> Result<bool> {
    if !first_matches(c, e)? {
        return Ok(false);
    }
    match (&c.second, &e.second) {
        (Some(cs), Some(es)) if !cs.matches(es)? => return Ok(false),
        (None, Some(_)) => return Ok(false),
        _ => {}
    }
    let status_ok = match (&e.excluded, c.status.reason()) {
        (None, None) => true,
        (Some(want), Some(got)) => want == got.name(),
        _ => false,
    };
    Ok(status_ok && e.marker.is_none_or(|m| m == c.marker))
}

/// Multiset comparison by genus of both columns, status and marker.
pub fn diff_rows(computed: &[PairRow], expected: &[ExpectedRow]) -> Result<DiffReport> {
    let mut used = alloc::vec![false; computed.len()];
    let mut missing_idx = Vec::new();
    let mut matched = 0;
    for (ei, e) in expected.iter().enumerate() {
        let mut hit = None;
        for (ci, c) in computed.iter().enumerate() {
            if !used[ci] && row_matches(c, e)? {
                hit = Some(ci);
                break;
            }
        }
        match hit {
            Some(ci) => {
                used[ci] = true;
                matched += 1;
            }
            None => missing_idx.push(ei),
        }
    }
    let mut report = DiffReport { matched, ..Default::default() };
    for ei in missing_idx {
        let e = &expected[ei];
        let mut pairing = None;
        for (ci, c) in computed.iter().enumerate() {
            if !used[ci] && first_matches(c, e)? {
                pairing = Some(ci);
                break;
            }
        }
        match pairing {
            Some(ci) => {
                used[ci] = true;
                report.mismatched.push((e.label.clone(), pair_label(&computed[ci])));
            }
            None => report.missing.push(e.label.clone()),
        }
    }
    for (ci, c) in computed.iter().enumerate() {
        if !used[ci] {
            report.extra.push(pair_label(c));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn refs() -> ReferenceData {
        let tag = |p, plus, minus, a| GenusTag { signature: SignaturePair::new(plus, minus), p, a, delta: None };
        ReferenceData {
            k3_realizable: alloc::vec![tag(3, 2, 4, 1), tag(3, 2, 4, 3), tag(3, 2, 2, 0), tag(3, 2, 2, 2), tag(3, 2, 0, 1), tag(5, 2, 2, 1), tag(7, 2, 4, 1)],
            certificates: Vec::new(),
        }
    }

    fn realized(rows: &[ClassificationRow]) -> Vec<&ClassificationRow> {
        rows.iter().filter(|r| r.status.is_realized()).collect()
    }

    #[test]
    fn lambda_p7_and_p5() {
        let rows = classify_lambda(7, &refs()).unwrap();
        let r = realized(&rows);
        assert_eq!(r.len(), 1);
        assert!(genus_equal(r[0].coinvariant.lattice.as_ref().unwrap(), &parse_lattice("U^2+K7").unwrap()).unwrap());
        assert!(r[0].invariant.as_ref().unwrap().matches(&parse_lattice("U+K7(-1)").unwrap()).unwrap());
        let rows = classify_lambda(5, &refs()).unwrap();
        let r = realized(&rows);
        assert_eq!(r.len(), 1);
        assert!(r[0].invariant.as_ref().unwrap().matches(&parse_lattice("U^2+H5").unwrap()).unwrap());
    }

    #[test]
    fn l_p5() {
        let rows = classify_l(5, 1, &refs()).unwrap();
        let r = realized(&rows);
        assert_eq!(r.len(), 1);
        assert!(r[0].invariant.as_ref().unwrap().matches(&parse_lattice("[-2]+[-10]+U").unwrap()).unwrap());
    }

    #[test]
    fn l_p3_excludes_by_length() {
        let rows = classify_l(3, 1, &refs()).unwrap();
        assert_eq!(realized(&rows).len(), 4);
        let bad = parse_lattice("U+A2(-1)+U(3)").unwrap();
        let ex: Vec<_> = rows.iter().filter(|r| !r.status.is_realized()).collect();
        assert_eq!(ex.len(), 1);
        assert!(ex[0].coinvariant.matches(&bad).unwrap());
        assert_eq!(ex[0].status, Status::Excluded(Reason::LengthExceedsRank));
    }

    #[test]
    fn invalid_combination() {
        assert!(classify_l(3, 2, &refs()).is_err());
        assert!(classify_lambda(11, &refs()).is_err());
    }

    #[test]
    fn order4_filter_cases() {
        let s = parse_lattice("U+[2]+[-2]+[-4]").unwrap();
        let t = parse_lattice("[2]+[-2]+[-4]").unwrap();
        assert!(order4_gluing_filter(&s, &t).unwrap());
        let s = parse_lattice("U(2)+[4]").unwrap();
        let t = parse_lattice("U+[-2]^2+[-4]").unwrap();
        assert!(!order4_gluing_filter(&s, &t).unwrap());
        assert!(order4_gluing_filter(&parse_lattice("U").unwrap(), &parse_lattice("[4]").unwrap()).is_err());
    }

    #[test]
    fn diff_detects_missing() {
        let expected = alloc::vec![ExpectedRow {
            label: "U".into(),
            first: parse_lattice("U").unwrap(),
            second: None,
            excluded: None,
            marker: None,
        }];
        let rep = diff_rows(&[], &expected).unwrap();
        assert_eq!(rep.missing.len(), 1);
        assert!(!rep.is_equal());
    }
}
