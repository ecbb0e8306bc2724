//! Genus comparison, block catalogs and arithmetic admissibility filters.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::expr::{Atom, LatticeExpr};
use crate::finite::{discriminant_form, prime_factors, TorsionQuadraticForm};
use crate::lattice::{Block, GramLattice, SignaturePair};
use crate::linalg::{Int, Rat};

/// `(signature, p, a, δ)`; `δ` only for `p = 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenusTag {
    pub signature: SignaturePair,
    pub p: Int,
    pub a: usize,
    pub delta: Option<u8>,
}

impl fmt::Display for GenusTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} sig={} a={}", self.p, self.signature, self.a)?;
        if let Some(d) = self.delta {
            write!(f, " δ={d}")?;
        }
        Ok(())
    }
}

impl GenusTag {
    /// Tag of a `p`-elementary lattice; `None` otherwise.
    pub fn of(l: &GramLattice, p: Int) -> Option<GenusTag> {
        let f = discriminant_form(l);
        if !f.is_p_elementary(p) {
            return None;
        }
        let delta = if p == 2 { f.delta().ok() } else { None };
        Some(GenusTag { signature: l.signature(), p, a: f.length(), delta })
    }
}

/// Same signature and isometric discriminant forms.
pub fn genus_equal(a: &GramLattice, b: &GramLattice) -> Result<bool> {
    if a.rank() != b.rank() || a.signature() != b.signature() {
        return Ok(false);
    }
    discriminant_form(a).is_isometric(&discriminant_form(b))
}

/// Genus check against a signature and form, without a Gram matrix.
pub fn genus_matches(l: &GramLattice, sig: SignaturePair, form: &TorsionQuadraticForm) -> Result<bool> {
    if l.signature() != sig {
        return Ok(false);
    }
    discriminant_form(l).is_isometric(form)
}

/// A precomputed summand for block searches.
#[derive(Clone, Debug)]
pub struct CatalogBlock {
    pub atom: Atom,
    pub lattice: GramLattice,
    pub signature: SignaturePair,
    pub abs_det: Int,
    pub form: TorsionQuadraticForm,
}

impl CatalogBlock {
    pub fn new(atom: Atom) -> Result<Self> {
        let lattice = GramLattice::new(atom.gram()?)?;
        let signature = lattice.signature();
        let abs_det = lattice.determinant().abs();
        let form = discriminant_form(&lattice);
        Ok(CatalogBlock { atom, lattice, signature, abs_det, form })
    }

    fn named(block: Block, scale: Int) -> Self {
        Self::new(Atom::named(block, scale)).expect("standard block")
    }
}

/// A catalog entry: one representative per genus.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub expr: LatticeExpr,
    pub lattice: GramLattice,
    pub form: TorsionQuadraticForm,
    pub tag: GenusTag,
}

fn p_blocks(p: Int) -> Vec<CatalogBlock> {
    let mut v = vec![CatalogBlock::named(Block::U, 1), CatalogBlock::named(Block::U, p)];
    match p {
        2 => {
            v.push(CatalogBlock::named(Block::Rank1(2), 1));
            v.push(CatalogBlock::named(Block::Rank1(-2), 1));
            v.push(CatalogBlock::named(Block::D(4), 1));
            v.push(CatalogBlock::named(Block::D(4), -1));
        }
        3 => {
            v.push(CatalogBlock::named(Block::A(2), 1));
            v.push(CatalogBlock::named(Block::A(2), -1));
            v.push(CatalogBlock::named(Block::E(6), 1));
            v.push(CatalogBlock::named(Block::E(6), -1));
        }
        5 => {
            v.push(CatalogBlock::named(Block::H5, 1));
            v.push(CatalogBlock::named(Block::H5, -1));
            v.push(CatalogBlock::named(Block::A(4), 1));
            v.push(CatalogBlock::named(Block::A(4), -1));
        }
        7 => {
            v.push(CatalogBlock::named(Block::K7, 1));
            v.push(CatalogBlock::named(Block::K7, -1));
            v.push(CatalogBlock::named(Block::A(6), 1));
            v.push(CatalogBlock::named(Block::A(6), -1));
        }
        _ => {}
    }
    v.push(CatalogBlock::named(Block::E(8), 1));
    v.push(CatalogBlock::named(Block::E(8), -1));
    v
}

/// Multisets of blocks (non-decreasing indices) with total rank ≤ `max_rank`,
/// ordered by number of blocks, then lexicographically.
fn multisets(blocks: &[CatalogBlock], max_rank: usize, mut visit: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    fn rec(
        blocks: &[CatalogBlock],
        len: usize,
        start: usize,
        rank: usize,
        max_rank: usize,
        cur: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> Result<()>,
    ) -> Result<()> {
        if cur.len() == len {
            return visit(cur);
        }
        for i in start..blocks.len() {
            let r = rank + blocks[i].lattice.rank();
            if r <= max_rank {
                cur.push(i);
                rec(blocks, len, i, r, max_rank, cur, visit)?;
                cur.pop();
            }
        }
        Ok(())
    }
    let min_rank = blocks.iter().map(|b| b.lattice.rank()).min().unwrap_or(1).max(1);
    let mut cur = Vec::new();
    for len in 1..=max_rank / min_rank {
        rec(blocks, len, 0, 0, max_rank, &mut cur, &mut visit)?;
    }
    Ok(())
}

fn sum_form(blocks: &[CatalogBlock], idx: &[usize]) -> TorsionQuadraticForm {
    idx.iter().fold(TorsionQuadraticForm::trivial(), |f, &i| f.direct_sum(&blocks[i].form))
}

fn sum_expr(blocks: &[CatalogBlock], idx: &[usize]) -> LatticeExpr {
    LatticeExpr::from_atoms(idx.iter().map(|&i| blocks[i].atom.clone())).canonical()
}

/// Rank guard for catalog searches.
pub const CATALOG_MAX_RANK: usize = 12;

/// One representative per genus of `p`-elementary block sums with
/// rank ≤ `max_rank` whose signature passes `sig_filter`.
pub fn catalog_p_elementary(
    p: Int,
    max_rank: usize,
    sig_filter: &dyn Fn(SignaturePair) -> bool,
) -> Result<Vec<CatalogEntry>> {
    if max_rank > CATALOG_MAX_RANK {
        return Err(Error::RankGuard(max_rank));
    }
    let blocks = p_blocks(p);
    let mut classes: BTreeMap<(GenusTag, Vec<(Int, Rat, usize)>), Vec<usize>> = BTreeMap::new();
    let mut out: Vec<CatalogEntry> = Vec::new();
    multisets(&blocks, max_rank, |idx| {
        let sig = idx.iter().fold(SignaturePair::default(), |s, &i| s + blocks[i].signature);
        if !sig_filter(sig) {
            return Ok(());
        }
        let form = sum_form(&blocks, idx);
        if !form.is_p_elementary(p) {
            return Ok(());
        }
        let delta = if p == 2 { Some(form.delta()?) } else { None };
        let tag = GenusTag { signature: sig, p, a: form.length(), delta };
        let key = (tag, form.value_histogram()?);
        let bucket = classes.entry(key).or_default();
        for &j in bucket.iter() {
            if out[j].form.is_isometric(&form)? {
                return Ok(());
            }
        }
        let expr = sum_expr(&blocks, idx);
        let lattice = expr.lattice()?;
        bucket.push(out.len());
        out.push(CatalogEntry { expr, lattice, form, tag });
        Ok(())
    })?;
    out.sort_by(|a, b| {
        (b.tag.signature.plus, b.lattice.rank(), b.tag.a, b.tag.delta)
            .cmp(&(a.tag.signature.plus, a.lattice.rank(), a.tag.a, a.tag.delta))
    });
    Ok(out)
}

/// Blocks that can occur in a lattice with discriminant order `n` and rank ≤ `rank`.
fn representative_blocks(n: Int, rank: usize) -> Vec<CatalogBlock> {
    let primes = prime_factors(n);
    let divides = |d: Int| d != 0 && n % d == 0;
    let admissible = |d: Int| divides(d) && prime_factors(d).iter().all(|p| primes.contains(p));
    let mut v = vec![CatalogBlock::named(Block::U, 1)];
    for k in 2..=n {
        if k * k > n {
            break;
        }
        if admissible(k * k) {
            v.push(CatalogBlock::named(Block::U, k));
        }
    }
    for m in (2..=n).step_by(2) {
        if admissible(m) {
            v.push(CatalogBlock::named(Block::Rank1(m), 1));
            v.push(CatalogBlock::named(Block::Rank1(-m), 1));
        }
    }
    let mut push_pm = |b: Block, det: Int, r: usize| {
        if r <= rank && admissible(det) {
            v.push(CatalogBlock::named(b, 1));
            v.push(CatalogBlock::named(b, -1));
        }
    };
    for k in 2..=8usize {
        push_pm(Block::A(k), k as Int + 1, k);
    }
    for k in 4..=8usize {
        push_pm(Block::D(k), 4, k);
    }
    push_pm(Block::E(6), 3, 6);
    push_pm(Block::E(7), 2, 7);
    push_pm(Block::H5, 5, 2);
    push_pm(Block::K7, 7, 2);
    if rank >= 8 {
        v.push(CatalogBlock::named(Block::E(8), 1));
        v.push(CatalogBlock::named(Block::E(8), -1));
    }
    v
}

/// A block sum with the given signature and discriminant form, if one exists
/// with at most 10 summands.
pub fn find_representative(sig: SignaturePair, form: &TorsionQuadraticForm) -> Result<Option<(LatticeExpr, GramLattice)>> {
    let n = form.order() as Int;
    let rank = sig.rank();
    if rank == 0 {
        return Ok(if form.is_trivial() { Some((LatticeExpr::default(), GramLattice::zero())) } else { None });
    }
    if form.length() > rank {
        return Ok(None);
    }
    let blocks = representative_blocks(n, rank);
    let target_hist = form.value_histogram()?;
    let mut cur = Vec::new();
    let found = rep_rec(&blocks, sig, n, form, &target_hist, 0, &mut cur)?;
    Ok(match found {
        Some(idx) => {
            let expr = sum_expr(&blocks, &idx);
            let lattice = expr.lattice()?;
            Some((expr, lattice))
        }
        None => None,
    })
}

fn rep_rec(
    blocks: &[CatalogBlock],
    remaining: SignaturePair,
    remaining_det: Int,
    form: &TorsionQuadraticForm,
    hist: &[(Int, Rat, usize)],
    start: usize,
    cur: &mut Vec<usize>,
) -> Result<Option<Vec<usize>>> {
    if remaining.rank() == 0 {
        if remaining_det != 1 {
            return Ok(None);
        }
        let f = sum_form(blocks, cur);
        if f.value_histogram()? == hist && f.is_isometric(form)? {
            return Ok(Some(cur.clone()));
        }
        return Ok(None);
    }
    for i in start..blocks.len() {
        let b = &blocks[i];
        if !b.signature.fits_in(remaining) || remaining_det % b.abs_det != 0 {
            continue;
        }
        cur.push(i);
        let r = rep_rec(blocks, remaining - b.signature, remaining_det / b.abs_det, form, hist, i, cur)?;
        cur.pop();
        if r.is_some() {
            return Ok(r);
        }
    }
    Ok(None)
}

/// A named arithmetic criterion that a coinvariant candidate can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AdmissibilityFailure {
    /// `(p − 1) ∤ rank`.
    RankDivisibility,
    /// `a > rank/(p − 1)`.
    IndexBound,
    /// Rank or length too large for the ambient lattice.
    AmbientRank,
    /// Rank `p − 1` and `det/p^{p−2}` not a rational square.
    SquareTest,
}

impl AdmissibilityFailure {
    pub fn name(self) -> &'static str {
        match self {
            AdmissibilityFailure::RankDivisibility => "rank-divisibility",
            AdmissibilityFailure::IndexBound => "index-bound",
            AdmissibilityFailure::AmbientRank => "ambient-rank",
            AdmissibilityFailure::SquareTest => "square-test",
        }
    }
}

/// Failed criteria for a `p`-elementary coinvariant candidate inside a
/// unimodular ambient lattice of rank `ambient_rank`; empty means admissible.
pub fn admissible_coinvariant(l: &GramLattice, p: Int, ambient_rank: usize) -> Vec<AdmissibilityFailure> {
    let mut out = Vec::new();
    let r = l.rank();
    let a = discriminant_form(l).length();
    let pm1 = (p - 1) as usize;
    if !r.is_multiple_of(pm1) {
        out.push(AdmissibilityFailure::RankDivisibility);
    }
    if a > r / pm1 {
        out.push(AdmissibilityFailure::IndexBound);
    }
    if r > ambient_rank || a > ambient_rank - r {
        out.push(AdmissibilityFailure::AmbientRank);
    }
    if r == pm1 && !is_rational_square(Rat::new(l.determinant(), p.pow((p - 2) as u32))) {
        out.push(AdmissibilityFailure::SquareTest);
    }
    out
}

pub fn is_rational_square(x: Rat) -> bool {
    if *x.numer() < 0 {
        return false;
    }
    let sq = |n: Int| {
        let r = num_integer::Roots::sqrt(&n);
        r * r == n
    };
    sq(*x.numer()) && sq(*x.denom())
}

/// The inequalities that give a primitive embedding into the K3 lattice
/// `U³ ⊕ E₈(−1)²` of signature (3, 19).
pub fn k3_embedding_certificate(s: &GramLattice) -> Result<bool> {
    let sig = s.signature();
    if sig.plus != 2 {
        return Err(Error::Signature("coinvariant must have signature (2, rank-2)"));
    }
    let r = s.rank();
    if r > 7 {
        return Err(Error::Signature("rank exceeds 7"));
    }
    let l = discriminant_form(s).length();
    Ok(3 >= sig.plus && 19 >= sig.minus && 22 - r > l)
}

/// Membership of a genus tag in a list of K3-realizable coinvariant tags;
/// `p = 2` is always realizable.
pub fn k3_realizable(tag: &GenusTag, realizable: &[GenusTag]) -> bool {
    tag.p == 2 || realizable.contains(tag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_lattice;
    use alloc::string::ToString;

    fn lat(s: &str) -> GramLattice {
        parse_lattice(s).unwrap()
    }

    #[test]
    fn genus_equality_examples() {
        assert!(genus_equal(&lat("U+U"), &lat("U+U")).unwrap());
        assert!(!genus_equal(&lat("U"), &lat("U(2)")).unwrap());
        assert!(!genus_equal(&lat("[2]+[-2]"), &lat("U(2)")).unwrap());
        assert!(genus_equal(&lat("[2]^2+[-2]^2"), &lat("U(2)+[2]+[-2]")).unwrap());
    }

    #[test]
    fn catalog_rank4_p2() {
        let c = catalog_p_elementary(2, 4, &|s| s == SignaturePair::new(2, 2)).unwrap();
        assert_eq!(c.len(), 5);
        for want in ["[2]^2+[-2]^2", "U(2)^2", "U+[2]+[-2]", "U+U(2)", "U^2"] {
            let w = lat(want);
            assert_eq!(c.iter().filter(|e| genus_equal(&e.lattice, &w).unwrap()).count(), 1, "{want}");
        }
    }

    #[test]
    fn catalog_p7_and_p3() {
        let c: Vec<_> = catalog_p_elementary(7, 7, &|s| s.plus == 2)
            .unwrap()
            .into_iter()
            .filter(|e| admissible_coinvariant(&e.lattice, 7, 10).is_empty())
            .collect();
        assert_eq!(c.len(), 1);
        assert!(genus_equal(&c[0].lattice, &lat("U^2+K7")).unwrap());
        let c = catalog_p_elementary(3, 2, &|s| s == SignaturePair::new(2, 0)).unwrap();
        assert_eq!(c.len(), 1);
        assert!(genus_equal(&c[0].lattice, &lat("A2")).unwrap());
    }

    #[test]
    fn admissibility_examples() {
        assert!(admissible_coinvariant(&lat("U^2+A2(-1)"), 3, 10).is_empty());
        assert!(admissible_coinvariant(&lat("U+H5"), 5, 10).is_empty());
        // rank 2, 3-elementary, det −9: ratio −3 is not a square
        assert_eq!(
            admissible_coinvariant(&lat("U(3)"), 3, 10),
            vec![AdmissibilityFailure::IndexBound, AdmissibilityFailure::SquareTest]
        );
        assert!(admissible_coinvariant(&lat("A2"), 3, 10).is_empty());
    }

    #[test]
    fn k3_certificate_examples() {
        assert!(k3_embedding_certificate(&lat("U+H5")).unwrap());
        assert!(k3_embedding_certificate(&lat("U^2+K7")).unwrap());
        assert!(k3_embedding_certificate(&lat("U^3+[-2]^2")).is_err());
    }

    #[test]
    fn representatives() {
        let f = discriminant_form(&lat("U^2+[-2]^3"));
        let (e, l) = find_representative(SignaturePair::new(2, 5), &f).unwrap().unwrap();
        assert!(genus_equal(&l, &lat("U^2+[-2]^3")).unwrap(), "{e}");
        let f = discriminant_form(&lat("U+D4(-1)"));
        let (_, l) = find_representative(SignaturePair::new(1, 5), &f).unwrap().unwrap();
        assert!(genus_equal(&l, &lat("U+D4(-1)")).unwrap());
        let f = discriminant_form(&lat("[-2]+[-10]+U"));
        let (e, _) = find_representative(SignaturePair::new(1, 3), &f).unwrap().unwrap();
        assert!(!e.to_string().is_empty());
    }
}
