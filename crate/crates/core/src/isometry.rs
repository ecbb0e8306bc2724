//! Explicit lattice isometries: order, kernels, discriminant action, spinor norm.
//!
//! Matrices act on column vectors of lattice coordinates: `g·x`.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::finite::discriminant_form;
use crate::lattice::GramLattice;
use crate::linalg::{Int, IntMatrix, Rat};

/// Largest order searched by [`verify_isometry`].
pub const ORDER_GUARD: u32 = 60;

/// A primitive sublattice with its basis in ambient coordinates.
#[derive(Clone, Debug)]
pub struct Sublattice {
    pub basis: IntMatrix,
    pub lattice: GramLattice,
}

impl Sublattice {
    fn of(l: &GramLattice, basis: IntMatrix) -> Result<Self> {
        let lattice = GramLattice::new(basis.congruence(l.gram())?)?;
        Ok(Sublattice { basis, lattice })
    }
}

/// Everything computed about one isometry.
#[derive(Clone, Debug)]
pub struct IsometryRecord {
    pub lattice: GramLattice,
    pub g: IntMatrix,
    pub order: u32,
    /// Order of the induced action on the discriminant group.
    pub disc_order: u32,
    pub invariant: Sublattice,
    pub coinvariant: Sublattice,
    pub spinor: i8,
    /// `a` with `L/(L^G ⊕ L_G) ≅ (ℤ/p)ᵃ`, for prime order.
    pub index_exponent: Option<usize>,
}

/// Checks `gᵀGg = G` and `|det g| = 1`; returns the multiplicative order.
pub fn verify_isometry(l: &GramLattice, g: &IntMatrix) -> Result<u32> {
    let n = l.rank();
    if g.rows() != n || g.cols() != n {
        return Err(Error::Dimension("isometry size"));
    }
    if g.congruence(l.gram())? != *l.gram() || g.det()?.abs() != 1 {
        return Err(Error::NotIsometry);
    }
    let id = IntMatrix::identity(n);
    let mut p = g.clone();
    for k in 1..=ORDER_GUARD {
        if p == id {
            return Ok(k);
        }
        p = p.mul(g)?;
    }
    Err(Error::OrderGuard(ORDER_GUARD))
}

/// `Ker(g − 1)` and `Ker(1 + g + … + g^{n−1})`, both saturated.
pub fn invariant_coinvariant(l: &GramLattice, g: &IntMatrix, order: u32) -> Result<(Sublattice, Sublattice)> {
    let n = l.rank();
    let id = IntMatrix::identity(n);
    let inv = g.add(&id.scale(-1))?.kernel();
    let mut sum = IntMatrix::zeros(n, n);
    let mut p = id;
    for _ in 0..order {
        sum = sum.add(&p)?;
        p = p.mul(g)?;
    }
    let coinv = sum.kernel();
    let cross = inv.transpose().mul(l.gram())?.mul(&coinv)?;
    if cross != IntMatrix::zeros(inv.cols(), coinv.cols()) || inv.cols() + coinv.cols() != n {
        return Err(Error::NotIsometry);
    }
    Ok((Sublattice::of(l, inv)?, Sublattice::of(l, coinv)?))
}

/// Orientation character on a maximal positive definite subspace;
/// `+1` on reflections in vectors of negative square.
pub fn spinor_norm_orientation(l: &GramLattice, g: &IntMatrix) -> Result<i8> {
    let (frame, pivots) = l.diagonal_frame();
    let pos: Vec<&Vec<Rat>> = frame.iter().zip(&pivots).filter(|(_, d)| d.is_positive()).map(|(w, _)| w).collect();
    let k = pos.len();
    let images: Vec<Vec<Rat>> = pos.iter().map(|w| g.mul_rat_vec(w)).collect::<Result<_>>()?;
    // sign of det( (w_i, g w_j) )
    let mut m: Vec<Vec<Rat>> = (0..k).map(|i| (0..k).map(|j| l.inner_rat(pos[i], &images[j])).collect()).collect();
    let mut sign = 1i8;
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| !m[r][c].is_zero()) else {
            return Err(Error::InvalidGram("degenerate projection onto the positive frame"));
        };
        if p != c {
            m.swap(p, c);
            sign = -sign;
        }
        if m[c][c].is_negative() {
            sign = -sign;
        }
        for r in c + 1..k {
            let f = m[r][c] / m[c][c];
            for j in c..k {
                let v = m[c][j];
                m[r][j] -= f * v;
            }
        }
    }
    Ok(sign)
}

/// `(−1)^{s₊(L_g)}` for an involution `g`.
pub fn spinor_norm_involution(l: &GramLattice, g: &IntMatrix) -> Result<i8> {
    let (_, coinv) = invariant_coinvariant(l, g, 2)?;
    Ok(if coinv.lattice.signature().plus % 2 == 0 { 1 } else { -1 })
}

/// Spinor norm by the orientation method; for involutions the closed
/// formula is evaluated as well and the two must agree.
pub fn spinor_norm(l: &GramLattice, g: &IntMatrix) -> Result<i8> {
    let s = spinor_norm_orientation(l, g)?;
    if verify_isometry(l, g)? == 2 {
        let t = spinor_norm_involution(l, g)?;
        assert_eq!(s, t, "spinor norm methods disagree");
    }
    Ok(s)
}

/// `log_p [L : L^G ⊕ L_G]`; errors unless the quotient is `(ℤ/p)ᵃ` with
/// `a ≤ rank(L_G)/(p − 1)`.
pub fn index_exponent(l: &GramLattice, inv: &IntMatrix, coinv: &IntMatrix, p: Int) -> Result<usize> {
    let n = l.rank();
    if inv.rows() != n || coinv.rows() != n {
        return Err(Error::Dimension("kernel bases"));
    }
    let combined = inv.hstack(coinv)?;
    let s = combined.smith();
    if s.rank != n {
        return Err(Error::DependentColumns);
    }
    let mut a = 0;
    for d in &s.diag {
        match *d {
            1 => {}
            x if x == p => a += 1,
            _ => return Err(Error::IndexNotElementary(p)),
        }
    }
    if a > coinv.cols() / (p as usize - 1) {
        return Err(Error::IndexNotElementary(p));
    }
    Ok(a)
}

/// Membership in `O⁺` for a nonsymplectic-shaped action of prime order `p`.
pub fn effectiveness(l: &GramLattice, g: &IntMatrix, p: Int) -> Result<bool> {
    let order = verify_isometry(l, g)?;
    let (inv, coinv) = invariant_coinvariant(l, g, order)?;
    if coinv.lattice.signature().plus != 2 || inv.lattice.signature().plus != 1 {
        return Err(Error::Signature("coinvariant (2, r-2) and invariant (1, r-1) expected"));
    }
    Ok(p % 2 == 1 || spinor_norm(l, g)? == 1)
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Verifies `g` and computes its full record.
pub fn analyze(l: &GramLattice, g: &IntMatrix) -> Result<IsometryRecord> {
    let order = verify_isometry(l, g)?;
    let form = discriminant_form(l);
    let disc_order = form.induced_action(l, g)?.order(ORDER_GUARD)?;
    let (invariant, coinvariant) = invariant_coinvariant(l, g, order)?;
    let spinor = spinor_norm(l, g)?;
    let index_exponent = if is_prime(order) {
        Some(index_exponent(l, &invariant.basis, &coinvariant.basis, order as Int)?)
    } else {
        None
    };
    Ok(IsometryRecord { lattice: l.clone(), g: g.clone(), order, disc_order, invariant, coinvariant, spinor, index_exponent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_lattice;
    use crate::genus::genus_equal;

    fn og6() -> GramLattice {
        parse_lattice("U^3+[-2]^2").unwrap()
    }

    /// Row 3 of the certificate list, rows are images of basis vectors.
    fn row3() -> IntMatrix {
        let mut m = IntMatrix::zeros(8, 8);
        for i in 0..4 {
            m[(i, i)] = -1;
        }
        m[(4, 4)] = 1;
        m[(5, 5)] = 1;
        m[(6, 7)] = 1;
        m[(7, 6)] = 1;
        m.transpose()
    }

    #[test]
    fn identity_and_minus_identity() {
        let l = og6();
        assert_eq!(verify_isometry(&l, &IntMatrix::identity(8)).unwrap(), 1);
        let minus = IntMatrix::identity(8).scale(-1);
        assert_eq!(verify_isometry(&l, &minus).unwrap(), 2);
        let (inv, coinv) = invariant_coinvariant(&l, &minus, 2).unwrap();
        assert_eq!(inv.lattice.rank(), 0);
        assert!(genus_equal(&coinv.lattice, &l).unwrap());
        assert_eq!(spinor_norm(&l, &minus).unwrap(), -1);
    }

    #[test]
    fn certificate_row3() {
        let l = og6();
        let rec = analyze(&l, &row3()).unwrap();
        assert_eq!(rec.order, 2);
        assert_eq!(rec.disc_order, 2);
        assert!(genus_equal(&rec.invariant.lattice, &parse_lattice("U+[-4]").unwrap()).unwrap());
        assert!(genus_equal(&rec.coinvariant.lattice, &parse_lattice("U^2+[-4]").unwrap()).unwrap());
        assert_eq!(rec.spinor, 1);
        assert_eq!(rec.index_exponent, Some(1));
        assert!(effectiveness(&l, &row3(), 2).unwrap());
    }

    #[test]
    fn swap_on_u_is_a_negative_reflection() {
        let u = parse_lattice("U").unwrap();
        let swap = IntMatrix::from_rows(&[[0, 1], [1, 0]]).unwrap();
        assert_eq!(spinor_norm_orientation(&u, &swap).unwrap(), 1);
        assert_eq!(spinor_norm(&u, &swap).unwrap(), 1);
    }

    #[test]
    fn orthogonal_split_has_index_zero() {
        let lam = parse_lattice("U^5").unwrap();
        let mut g = IntMatrix::identity(10);
        g[(0, 0)] = -1;
        g[(1, 1)] = -1;
        let rec = analyze(&lam, &g).unwrap();
        assert_eq!(rec.index_exponent, Some(0));
    }

    #[test]
    fn rejects_non_isometries() {
        let l = og6();
        let mut g = IntMatrix::identity(8);
        g[(0, 1)] = 1;
        assert_eq!(verify_isometry(&l, &g), Err(Error::NotIsometry));
    }
}
