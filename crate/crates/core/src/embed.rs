//! Primitive embeddings via discriminant gluing, and concrete complements.
//!
//! For a primitive embedding `S ↪ L` with complement `T`, the gluing data is
//! a subgroup `H ⊂ L♯` and an isometric embedding `γ: H → S♯`. Its graph `Γ`
//! is isotropic in `L♯ ⊕ S♯(−1)` and `T♯ ≅ Γ⊥/Γ`.

use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::expr::LatticeExpr;
use crate::finite::{discriminant_form, Elem, FqfHom, TorsionQuadraticForm};
use crate::genus::{find_representative, genus_equal};
use crate::lattice::{GramLattice, SignaturePair};
use crate::linalg::{saturate, solve_in_span, Int, IntMatrix, Rat};

static DET_CHECKS: AtomicUsize = AtomicUsize::new(0);
static DET_VIOLATIONS: AtomicUsize = AtomicUsize::new(0);

/// Running totals of determinant-identity checks made by this process.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DetIdentityStats {
    pub checks: usize,
    pub violations: usize,
}

pub fn det_identity_stats() -> DetIdentityStats {
    DetIdentityStats { checks: DET_CHECKS.load(Ordering::SeqCst), violations: DET_VIOLATIONS.load(Ordering::SeqCst) }
}

/// `|det T| · |H|² = |det L| · |det S|`.
fn check_det_identity(det_t: u128, det_l: u128, det_s: u128, h: u128) -> bool {
    DET_CHECKS.fetch_add(1, Ordering::SeqCst);
    let ok = det_t * h * h == det_l * det_s;
    if !ok {
        DET_VIOLATIONS.fetch_add(1, Ordering::SeqCst);
    }
    ok
}

/// One level-(1) class of primitive embeddings `S ↪ L`.
#[derive(Clone, Debug)]
pub struct EmbeddingRecord {
    pub sub: GramLattice,
    pub ambient: GramLattice,
    /// Cyclic basis of `H ⊂ L♯`.
    pub h_basis: Vec<Elem>,
    pub h_order: u128,
    /// `γ: H → S♯` on the basis of `H`.
    pub gamma: FqfHom,
    pub complement_form: TorsionQuadraticForm,
    pub complement_signature: SignaturePair,
    pub representative: Option<(LatticeExpr, GramLattice)>,
}

impl EmbeddingRecord {
    pub fn det_identity_holds(&self) -> bool {
        let det_t = self.complement_form.order();
        let det_l = self.ambient.determinant().unsigned_abs();
        let det_s = self.sub.determinant().unsigned_abs();
        det_t * self.h_order * self.h_order == det_l * det_s
    }
}

/// All level-(1) classes of primitive embeddings `sub ↪ ambient`, keyed by
/// `(|H|, complement signature, complement form)`.
pub fn primitive_embeddings(sub: &GramLattice, ambient: &GramLattice) -> Result<Vec<EmbeddingRecord>> {
    let sig_s = sub.signature();
    let sig_l = ambient.signature();
    let Some(sig_t) = sig_l.checked_sub(sig_s) else { return Ok(vec![]) };
    let rank_t = sig_t.rank();
    let fl = discriminant_form(ambient);
    let fs = discriminant_form(sub);
    let glue_space = fl.direct_sum(&fs.rescaled(-1));
    let kl = fl.divisors().len();
    let det_l = ambient.determinant().unsigned_abs();
    let det_s = sub.determinant().unsigned_abs();
    let target_sig = sig_t.index().rem_euclid(8);

    let mut out: Vec<EmbeddingRecord> = Vec::new();
    for h in fl.subgroups()? {
        if !fs.order().is_multiple_of(h.order()) {
            continue;
        }
        let hform = fl.restricted(&h.basis);
        for gamma in hform.embeddings_into(&fs, None)? {
            let gens: Vec<Elem> = h
                .basis
                .iter()
                .zip(&gamma.images)
                .map(|(x, y)| {
                    let mut e = x.clone();
                    e.extend_from_slice(y);
                    e
                })
                .collect();
            debug_assert_eq!(gens.first().map_or(kl, |g| g.len() - fs.divisors().len()), kl);
            let tform = glue_space.orthogonal_quotient(&gens)?;
            check_det_identity(tform.order(), det_l, det_s, h.order());
            if tform.length() > rank_t {
                continue;
            }
            let sig_ok = if rank_t == 0 {
                tform.is_trivial()
            } else {
                tform.gauss_signature()? == Some(target_sig)
            };
            if !sig_ok {
                continue;
            }
            let mut dup = false;
            for r in &out {
                if r.h_order == h.order() && r.complement_form.is_isometric(&tform)? {
                    dup = true;
                    break;
                }
            }
            if dup {
                continue;
            }
            let representative = find_representative(sig_t, &tform)?;
            if representative.is_none() && rank_t == tform.length() && rank_t <= 1 {
                // the block search is exhaustive in rank ≤ 1
                continue;
            }
            out.push(EmbeddingRecord {
                sub: sub.clone(),
                ambient: ambient.clone(),
                h_basis: h.basis.clone(),
                h_order: h.order(),
                gamma,
                complement_form: tform,
                complement_signature: sig_t,
                representative,
            });
        }
    }
    out.sort_by_cached_key(|r| {
        (r.h_order, r.representative.as_ref().map(|(e, _)| alloc::format!("{e}")))
    });
    Ok(out)
}

/// The orthogonal complement of a span inside a fixed lattice.
#[derive(Clone, Debug)]
pub struct Complement {
    pub lattice: GramLattice,
    /// Kernel basis (columns) in the ambient coordinates.
    pub basis: IntMatrix,
    /// Whether the given columns already spanned a primitive sublattice.
    pub was_primitive: bool,
    /// Saturated basis of the span.
    pub saturated: IntMatrix,
}

pub fn complement_in_fixed(l: &GramLattice, basis_s: &IntMatrix) -> Result<Complement> {
    if basis_s.rows() != l.rank() {
        return Err(Error::Dimension("basis rows must match the lattice rank"));
    }
    if basis_s.rank() != basis_s.cols() {
        return Err(Error::DependentColumns);
    }
    let sat = saturate(basis_s);
    let pairing = l.gram().mul(&sat.basis)?.transpose();
    let kernel = pairing.kernel();
    let lattice = GramLattice::new(kernel.congruence(l.gram())?)?;
    Ok(Complement { lattice, basis: kernel, was_primitive: sat.index == 1, saturated: sat.basis })
}

/// Complements of the level-(1) classes of primitive embeddings `[4] ↪ Λ_G`.
pub fn embeddings_of_square4(lam_g: &GramLattice) -> Result<Vec<EmbeddingRecord>> {
    let four = GramLattice::from_rows(&[[4]])?;
    primitive_embeddings(&four, lam_g)
}

/// One row of the length bookkeeping for `L_G ↪ L` with `H ≅ (ℤ/2)ⁿ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LengthCase {
    pub h_order: u128,
    pub predicted_length: i64,
    pub complement_rank: usize,
    pub feasible: bool,
}

/// `l((L^G)♯) = l((L_G)♯) + 2 − 2n` for `|H| = 2ⁿ`, `n = 0, 1, 2`, inside
/// a lattice of rank `ambient_rank` with 2-elementary discriminant of length 2.
pub fn length_case_analysis(l_g: &GramLattice, ambient_rank: usize) -> Result<Vec<LengthCase>> {
    let f = discriminant_form(l_g);
    if !f.is_p_elementary(2) {
        return Err(Error::NotTwoElementary);
    }
    let a = f.length() as i64;
    let complement_rank = ambient_rank.saturating_sub(l_g.rank());
    Ok((0..=2i64)
        .map(|n| {
            let predicted = a + 2 - 2 * n;
            let feasible = n <= a && predicted >= 0 && predicted <= complement_rank as i64;
            LengthCase { h_order: 1 << n, predicted_length: predicted, complement_rank, feasible }
        })
        .collect())
}

/// A gluing of `S ⊕ T`: graph of an anti-isometry `K ⊂ S♯ → T♯`.
#[derive(Clone, Debug)]
pub struct Gluing {
    /// Cyclic basis of `K ⊂ S♯`.
    pub k_basis: Vec<Elem>,
    /// Images in `T♯`.
    pub images: Vec<Elem>,
    /// Whether `K` has an element of order 4.
    pub has_order4: bool,
    /// Whether `−1_S ⊕ 1_T` acts non-trivially on the glued discriminant.
    pub swaps_discriminant: bool,
}

impl Gluing {
    fn generators(&self) -> Vec<Elem> {
        self.k_basis
            .iter()
            .zip(&self.images)
            .map(|(x, y)| {
                let mut e = x.clone();
                e.extend_from_slice(y);
                e
            })
            .collect()
    }
}

/// Options for [`gluings`].
#[derive(Clone, Copy, Debug, Default)]
pub struct GluingQuery {
    /// Only `K` with no element of order 4.
    pub elementary_only: bool,
    /// Stop after this many results.
    pub limit: Option<usize>,
}

/// Gluings of `S ⊕ T` whose overlattice has discriminant form isometric to `target`.
pub fn gluings(s: &GramLattice, t: &GramLattice, target: &TorsionQuadraticForm, query: GluingQuery) -> Result<Vec<Gluing>> {
    let fs = discriminant_form(s);
    let ft = discriminant_form(t);
    let both = fs.direct_sum(&ft);
    let ks = fs.divisors().len();
    let need = fs.order() * ft.order();
    let mut out = Vec::new();
    for k in fs.subgroups()? {
        if k.order() * k.order() * target.order() != need {
            continue;
        }
        let has_order4 = k.basis.iter().any(|e| fs.elem_order(e) % 4 == 0);
        if query.elementary_only && has_order4 {
            continue;
        }
        let kform = fs.restricted(&k.basis);
        for phi in kform.rescaled(-1).embeddings_into(&ft, None)? {
            let g = Gluing { k_basis: k.basis.clone(), images: phi.images, has_order4, swaps_discriminant: false };
            let gens = g.generators();
            let quotient = both.orthogonal_quotient(&gens)?;
            if !quotient.is_isometric(target)? {
                continue;
            }
            let swaps = swaps_discriminant(&both, ks, &gens)?;
            out.push(Gluing { swaps_discriminant: swaps, ..g });
            if query.limit.is_some_and(|l| out.len() >= l) {
                return Ok(out);
            }
        }
    }
    Ok(out)
}

/// Whether `(x, y) ↦ (−x, y)` is non-trivial on `Γ⊥/Γ`.
fn swaps_discriminant(both: &TorsionQuadraticForm, ks: usize, gamma: &[Elem]) -> Result<bool> {
    let gamma_set = both.closure(gamma)?;
    for i in both.orthogonal_elements(gamma)? {
        let x = both.elem_at(i);
        let mut flipped = x.clone();
        for c in flipped.iter_mut().take(ks) {
            *c = -*c;
        }
        let mut diff: Elem = flipped.iter().zip(&x).map(|(a, b)| a - b).collect();
        both.reduce(&mut diff);
        if gamma_set.binary_search(&both.index_of(&diff)).is_err() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `S ⊕ T` extended by glue vectors.
#[derive(Clone, Debug)]
pub struct Overlattice {
    /// `denom ·` basis of the overlattice, as columns in `S ⊕ T` coordinates.
    pub scaled_basis: IntMatrix,
    pub denom: Int,
    pub lattice: GramLattice,
    pub rank_s: usize,
}

impl Overlattice {
    /// Matrix in the overlattice basis of an isometry of `S ⊕ T` given in
    /// block coordinates; errors if it does not preserve the overlattice.
    pub fn transport(&self, g: &IntMatrix) -> Result<IntMatrix> {
        let n = self.scaled_basis.rows();
        let img = g.mul(&self.scaled_basis)?;
        let mut m = IntMatrix::zeros(n, n);
        for j in 0..n {
            let y = solve_in_span(&self.scaled_basis, &img.col(j)).ok_or(Error::NotIsometry)?;
            for i in 0..n {
                m[(i, j)] = y[i];
            }
        }
        Ok(m)
    }

    /// `−1` on `S`, `+1` on `T`, in the overlattice basis.
    pub fn involution(&self) -> Result<IntMatrix> {
        let n = self.scaled_basis.rows();
        let d = IntMatrix::from_fn(n, n, |i, j| if i != j { 0 } else if i < self.rank_s { -1 } else { 1 });
        self.transport(&d)
    }

    /// Columns spanning `S` in the overlattice basis.
    pub fn s_columns(&self) -> Result<IntMatrix> {
        let n = self.scaled_basis.rows();
        let mut cols = Vec::new();
        for j in 0..self.rank_s {
            let mut v = vec![0; n];
            v[j] = self.denom;
            cols.push(solve_in_span(&self.scaled_basis, &v).ok_or(Error::Dimension("S not in overlattice"))?);
        }
        IntMatrix::from_cols(n, &cols)
    }
}

/// The overlattice of `S ⊕ T` defined by a gluing.
pub fn overlattice(s: &GramLattice, t: &GramLattice, gluing: &Gluing) -> Result<Overlattice> {
    let fs = discriminant_form(s);
    let ft = discriminant_form(t);
    let (rs, rt) = (s.rank(), t.rank());
    let n = rs + rt;
    let mut glue: Vec<Vec<Rat>> = Vec::new();
    for (x, y) in gluing.k_basis.iter().zip(&gluing.images) {
        let mut v = fs.lift_of(x)?;
        v.extend(ft.lift_of(y)?);
        glue.push(v);
    }
    let denom = glue.iter().flatten().fold(1, |d, r| num_integer::lcm(d, *r.denom()));
    let mut cols: Vec<Vec<Int>> = (0..n)
        .map(|j| {
            let mut c = vec![0; n];
            c[j] = denom;
            c
        })
        .collect();
    for v in &glue {
        cols.push(v.iter().map(|r| (r * Rat::from_integer(denom)).to_integer()).collect());
    }
    let gens = IntMatrix::from_cols(n, &cols)?;
    let sm = gens.smith();
    let scaled_basis = IntMatrix::from_fn(n, n, |i, j| sm.left_inv[(i, j)] * sm.diag[j]);
    let gram_p = GramLattice::direct_sum(&[s, t]);
    let raw = scaled_basis.congruence(gram_p.gram())?;
    let d2 = denom * denom;
    let mut gram = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if raw[(i, j)] % d2 != 0 {
                return Err(Error::InvalidGram("glue is not integral"));
            }
            gram[(i, j)] = raw[(i, j)] / d2;
        }
    }
    let lattice = GramLattice::new(gram)?;
    Ok(Overlattice { scaled_basis, denom, lattice, rank_s: rs })
}

/// Cross-check of a record: glue `S` to the representative complement and
/// confirm the overlattice is in the genus of the ambient lattice and the
/// complement of `S` inside it is in the genus of the representative.
pub fn materialize(record: &EmbeddingRecord) -> Result<Option<Overlattice>> {
    let Some((_, t)) = &record.representative else { return Ok(None) };
    let target = discriminant_form(&record.ambient);
    let found = gluings(&record.sub, t, &target, GluingQuery { elementary_only: false, limit: Some(1) })?;
    let Some(g) = found.first() else { return Ok(None) };
    let m = overlattice(&record.sub, t, g)?;
    if !genus_equal(&m.lattice, &record.ambient)? {
        return Ok(None);
    }
    let c = complement_in_fixed(&m.lattice, &m.s_columns()?)?;
    if !c.was_primitive || !genus_equal(&c.lattice, t)? {
        return Ok(None);
    }
    Ok(Some(m))
}

/// Primitive vectors of a given square in a box, grouped by complement genus.
pub fn brute_force_vector_classes(l: &GramLattice, square: Int, bound: Int) -> Result<Vec<GramLattice>> {
    let n = l.rank();
    let mut classes: Vec<GramLattice> = Vec::new();
    let mut v = vec![-bound; n];
    loop {
        if l.norm(&v) == square && crate::linalg::gcd_slice(&v) == 1 {
            let b = IntMatrix::from_cols(n, &[v.clone()])?;
            let c = complement_in_fixed(l, &b)?;
            let mut known = false;
            for k in &classes {
                if genus_equal(k, &c.lattice)? {
                    known = true;
                    break;
                }
            }
            if !known {
                classes.push(c.lattice);
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(classes);
            }
            if v[i] < bound {
                v[i] += 1;
                break;
            }
            v[i] = -bound;
            i += 1;
        }
    }
}
