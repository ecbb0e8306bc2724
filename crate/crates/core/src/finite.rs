//! Finite quadratic forms and discriminant groups.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::GramLattice;
use crate::linalg::{rat_mod, Int, IntMatrix, Rat};

/// Enumeration guard for brute-force searches.
pub const GROUP_GUARD: u128 = 1 << 16;

/// Coordinates of a group element with respect to the cyclic generators.
pub type Elem = Vec<Int>;

/// Dual-lattice representatives of the generators and the map back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lifts {
    /// Generator `i` as a vector of `L*` in lattice coordinates.
    pub vectors: Vec<Vec<Rat>>,
    /// `V⁻¹` from the Smith form of the Gram matrix.
    right_inv: IntMatrix,
    /// Elementary divisors of the Gram matrix (all of them, including 1s).
    all_divisors: Vec<Int>,
    /// Indices into `all_divisors` of the non-trivial ones, in generator order.
    nontrivial: Vec<usize>,
}

/// A finite abelian group `⊕ ℤ/dᵢ` with `q` in `ℚ/2ℤ` and `b` in `ℚ/ℤ`.
///
/// The cyclic decomposition need not be in invariant-factor form; direct sums
/// simply concatenate generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionQuadraticForm {
    divisors: Vec<Int>,
    q: Vec<Rat>,
    b: Vec<Vec<Rat>>,
    lifts: Option<Lifts>,
}

/// A homomorphism given by the images of the source generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqfHom {
    pub images: Vec<Elem>,
    pub target_divisors: Vec<Int>,
}

/// An automorphism of a form, stored like any homomorphism.
pub type FqfIsometry = FqfHom;

/// A subgroup: its sorted element indices and a cyclic basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub elements: Vec<u32>,
    pub basis: Vec<Elem>,
}

impl Subgroup {
    pub fn order(&self) -> u128 {
        self.elements.len() as u128
    }
}

fn mod1(x: Rat) -> Rat {
    rat_mod(x, 1)
}

fn mod2(x: Rat) -> Rat {
    rat_mod(x, 2)
}

impl FqfHom {
    pub fn apply(&self, e: &[Int]) -> Elem {
        let mut out = vec![0; self.target_divisors.len()];
        for (c, img) in e.iter().zip(&self.images) {
            for (o, v) in out.iter_mut().zip(img) {
                *o += c * v;
            }
        }
        for (o, d) in out.iter_mut().zip(&self.target_divisors) {
            *o = o.mod_floor(d);
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FqfHom) -> FqfHom {
        FqfHom { images: other.images.iter().map(|e| self.apply(e)).collect(), target_divisors: self.target_divisors.clone() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, img)| {
            img.iter().enumerate().all(|(j, v)| *v == if i == j { 1 % self.target_divisors[j] } else { 0 })
        })
    }

    pub fn identity(divisors: &[Int]) -> FqfHom {
        let n = divisors.len();
        FqfHom {
            images: (0..n).map(|i| (0..n).map(|j| if i == j { 1 } else { 0 }).collect()).collect(),
            target_divisors: divisors.to_vec(),
        }
    }

    /// Order of an automorphism, up to `guard`.
    pub fn order(&self, guard: u32) -> Result<u32> {
        let mut p = self.clone();
        for k in 1..=guard {
            if p.is_identity() {
                return Ok(k);
            }
            p = self.compose(&p);
        }
        Err(Error::OrderGuard(guard))
    }
}

impl TorsionQuadraticForm {
    /// Builds a form from generator data; validates the tables.
    pub fn from_tables(divisors: Vec<Int>, q: Vec<Rat>, b: Vec<Vec<Rat>>) -> Result<Self> {
        let k = divisors.len();
        if q.len() != k || b.len() != k || b.iter().any(|r| r.len() != k) {
            return Err(Error::Dimension("form tables"));
        }
        if divisors.iter().any(|d| *d < 2) {
            return Err(Error::Dimension("divisors must exceed 1"));
        }
        let f = Self::raw(divisors, q, b, None);
        for i in 0..k {
            if f.b[i][i] != mod1(f.q[i]) || f.q[i] * Rat::from_integer(f.divisors[i] * f.divisors[i]) % Rat::from_integer(2) != Rat::zero() {
                return Err(Error::InvalidGram("inconsistent q-table"));
            }
            for j in 0..k {
                if f.b[i][j] != f.b[j][i] || (f.b[i][j] * Rat::from_integer(f.divisors[i])).fract() != Rat::zero() {
                    return Err(Error::InvalidGram("inconsistent b-table"));
                }
            }
        }
        Ok(f)
    }

    fn raw(divisors: Vec<Int>, q: Vec<Rat>, b: Vec<Vec<Rat>>, lifts: Option<Lifts>) -> Self {
        let q = q.into_iter().map(mod2).collect();
        let b = b.into_iter().map(|r| r.into_iter().map(mod1).collect()).collect();
        TorsionQuadraticForm { divisors, q, b, lifts }
    }

    pub fn trivial() -> Self {
        Self::raw(vec![], vec![], vec![], None)
    }

    /// `L♯ = L*/L` with generators `V_i/d_i` from the Smith form `U G V = D`.
    pub fn of_lattice(l: &GramLattice) -> Self {
        let g = l.gram();
        let s = g.smith();
        let n = g.rows();
        let nontrivial: Vec<usize> = (0..n).filter(|&i| s.diag[i] > 1).collect();
        let vectors: Vec<Vec<Rat>> = nontrivial
            .iter()
            .map(|&i| (0..n).map(|r| Rat::new(s.right[(r, i)], s.diag[i])).collect())
            .collect();
        let divisors: Vec<Int> = nontrivial.iter().map(|&i| s.diag[i]).collect();
        let k = divisors.len();
        let mut q = Vec::with_capacity(k);
        let mut b = vec![vec![Rat::zero(); k]; k];
        for i in 0..k {
            q.push(l.inner_rat(&vectors[i], &vectors[i]));
            for j in 0..k {
                b[i][j] = l.inner_rat(&vectors[i], &vectors[j]);
            }
        }
        let lifts = Lifts { vectors, right_inv: s.right_inv, all_divisors: s.diag, nontrivial };
        Self::raw(divisors, q, b, Some(lifts))
    }

    pub fn divisors(&self) -> &[Int] {
        &self.divisors
    }

    pub fn q_table(&self) -> &[Rat] {
        &self.q
    }

    pub fn b_table(&self) -> &[Vec<Rat>] {
        &self.b
    }

    pub fn lifts(&self) -> Option<&Lifts> {
        self.lifts.as_ref()
    }

    pub fn order(&self) -> u128 {
        self.divisors.iter().map(|d| *d as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.divisors.is_empty()
    }

    /// Minimal number of generators: the largest `p`-rank.
    pub fn length(&self) -> usize {
        let mut primes: BTreeSet<Int> = BTreeSet::new();
        for d in &self.divisors {
            primes.extend(prime_factors(*d));
        }
        primes.iter().map(|p| self.divisors.iter().filter(|d| *d % p == 0).count()).max().unwrap_or(0)
    }

    /// Multiset of prime-power orders of the cyclic factors; a group isomorphism invariant.
    pub fn elementary_divisors(&self) -> Vec<Int> {
        let mut out = Vec::new();
        for d in &self.divisors {
            let mut d = *d;
            for p in prime_factors(d) {
                let mut pk = 1;
                while d % p == 0 {
                    d /= p;
                    pk *= p;
                }
                out.push(pk);
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_p_elementary(&self, p: Int) -> bool {
        self.divisors.iter().all(|d| *d == p)
    }

    /// `δ`: 0 iff `q` takes only integer values.
    pub fn delta(&self) -> Result<u8> {
        if !self.is_p_elementary(2) {
            return Err(Error::NotTwoElementary);
        }
        // q is integral on the whole group iff it is on generators, as 2b(x,y) ∈ ℤ here
        Ok(if self.q.iter().all(|v| v.is_integer()) { 0 } else { 1 })
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.divisors.len()]
    }

    pub fn generator(&self, i: usize) -> Elem {
        let mut e = self.zero();
        e[i] = 1;
        e
    }

    pub fn reduce(&self, e: &mut [Int]) {
        for (x, d) in e.iter_mut().zip(&self.divisors) {
            *x = x.mod_floor(d);
        }
    }

    pub fn add(&self, x: &[Int], y: &[Int]) -> Elem {
        let mut e: Elem = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.reduce(&mut e);
        e
    }

    pub fn mul(&self, k: Int, x: &[Int]) -> Elem {
        let mut e: Elem = x.iter().map(|a| a * k).collect();
        self.reduce(&mut e);
        e
    }

    pub fn elem_order(&self, x: &[Int]) -> Int {
        x.iter().zip(&self.divisors).fold(1, |acc, (c, d)| acc.lcm(&(d / c.gcd(d))))
    }

    /// `q(x) ∈ [0, 2)`.
    pub fn q_of(&self, x: &[Int]) -> Rat {
        let mut s = Rat::zero();
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            s += self.q[i] * Rat::from_integer(x[i] * x[i]);
            for j in i + 1..x.len() {
                if x[j] != 0 {
                    s += self.b[i][j] * Rat::from_integer(2 * x[i] * x[j]);
                }
            }
        }
        mod2(s)
    }

    /// `b(x, y) ∈ [0, 1)`.
    pub fn b_of(&self, x: &[Int], y: &[Int]) -> Rat {
        let mut s = Rat::zero();
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            for j in 0..y.len() {
                if y[j] != 0 {
                    s += self.b[i][j] * Rat::from_integer(x[i] * y[j]);
                }
            }
        }
        mod1(s)
    }

    pub fn index_of(&self, x: &[Int]) -> u32 {
        let mut idx: u128 = 0;
        for (c, d) in x.iter().zip(&self.divisors) {
            idx = idx * (*d as u128) + (*c as u128);
        }
        idx as u32
    }

    pub fn elem_at(&self, mut idx: u32) -> Elem {
        let mut e = self.zero();
        for i in (0..self.divisors.len()).rev() {
            let d = self.divisors[i] as u32;
            e[i] = (idx % d) as Int;
            idx /= d;
        }
        e
    }

    fn guard(&self) -> Result<()> {
        if self.order() > GROUP_GUARD {
            return Err(Error::GroupGuard(self.order()));
        }
        Ok(())
    }

    /// All elements, in index order.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        self.guard()?;
        Ok((0..self.order() as u32).map(|i| self.elem_at(i)).collect())
    }

    /// `F(k)`: every value multiplied by `k` (`k = −1` gives the opposite form).
    pub fn rescaled(&self, k: Int) -> Self {
        let k = Rat::from_integer(k);
        Self::raw(
            self.divisors.clone(),
            self.q.iter().map(|v| v * k).collect(),
            self.b.iter().map(|r| r.iter().map(|v| v * k).collect()).collect(),
            None,
        )
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let (m, n) = (self.divisors.len(), other.divisors.len());
        let mut divisors = self.divisors.clone();
        divisors.extend_from_slice(&other.divisors);
        let mut q = self.q.clone();
        q.extend_from_slice(&other.q);
        let mut b = vec![vec![Rat::zero(); m + n]; m + n];
        for i in 0..m {
            for j in 0..m {
                b[i][j] = self.b[i][j];
            }
        }
        for i in 0..n {
            for j in 0..n {
                b[m + i][m + j] = other.b[i][j];
            }
        }
        Self::raw(divisors, q, b, None)
    }

    /// Checks the polarisation identity and `q(nx) = n²q(x)` on every pair.
    pub fn check_consistency(&self) -> Result<bool> {
        let els = self.elements()?;
        for x in &els {
            let qx = self.q_of(x);
            let n = self.elem_order(x);
            if !self.q_of(&self.mul(n, x)).is_zero() {
                return Ok(false);
            }
            for k in 2..4 {
                if self.q_of(&self.mul(k, x)) != mod2(qx * Rat::from_integer(k * k)) {
                    return Ok(false);
                }
            }
            for y in &els {
                let lhs = mod2(self.q_of(&self.add(x, y)) - qx - self.q_of(y));
                if lhs != mod2(self.b_of(x, y) * Rat::from_integer(2)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The element of `L♯` represented by a dual vector `x` (lattice coordinates).
    pub fn reduce_dual(&self, x: &[Rat]) -> Result<Elem> {
        let lifts = self.lifts.as_ref().ok_or(Error::NoLifts)?;
        let y = lifts.right_inv.mul_rat_vec(x)?;
        for (i, yi) in y.iter().enumerate() {
            if !(yi * Rat::from_integer(lifts.all_divisors[i])).is_integer() {
                return Err(Error::NotDual);
            }
        }
        let mut e: Elem =
            lifts.nontrivial.iter().map(|&i| (y[i] * Rat::from_integer(lifts.all_divisors[i])).to_integer()).collect();
        self.reduce(&mut e);
        Ok(e)
    }

    /// Representative in `L*` of an element (lattice coordinates).
    pub fn lift_of(&self, e: &[Int]) -> Result<Vec<Rat>> {
        let lifts = self.lifts.as_ref().ok_or(Error::NoLifts)?;
        let n = lifts.all_divisors.len();
        let mut v = vec![Rat::zero(); n];
        for (c, g) in e.iter().zip(&lifts.vectors) {
            for (vi, gi) in v.iter_mut().zip(g) {
                *vi += gi * Rat::from_integer(*c);
            }
        }
        Ok(v)
    }

    /// Element indices of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[Elem]) -> Result<Vec<u32>> {
        self.guard()?;
        let n = self.order() as usize;
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![self.zero()];
        let mut out = vec![0u32];
        while let Some(x) = stack.pop() {
            for g in gens {
                let y = self.add(&x, g);
                let i = self.index_of(&y) as usize;
                if !seen[i] {
                    seen[i] = true;
                    out.push(i as u32);
                    stack.push(y);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// A small generating set of the subgroup with the given elements.
    pub fn generators_of(&self, elements: &[u32]) -> Result<Vec<Elem>> {
        let mut gens: Vec<Elem> = Vec::new();
        let mut current: BTreeSet<u32> = [0].into_iter().collect();
        for &i in elements {
            if !current.contains(&i) {
                gens.push(self.elem_at(i));
                current = self.closure(&gens)?.into_iter().collect();
            }
        }
        Ok(gens)
    }

    /// `N/M` for subgroups `M ⊂ N` given by generators, as a form with a
    /// cyclic basis in invariant-factor order; also returns the basis in
    /// `self`'s coordinates.
    pub fn subquotient(&self, n_gens: &[Elem], m_gens: &[Elem]) -> Result<(Self, Vec<Elem>)> {
        let k = self.divisors.len();
        if k == 0 {
            return Ok((Self::trivial(), vec![]));
        }
        let relations = |gens: &[Elem]| {
            let mut cols: Vec<Vec<Int>> = gens.to_vec();
            for i in 0..k {
                let mut c = vec![0; k];
                c[i] = self.divisors[i];
                cols.push(c);
            }
            IntMatrix::from_cols(k, &cols)
        };
        let nm = relations(n_gens)?;
        let s = nm.smith();
        // N = B ℤᵏ with B = U⁻¹ diag(D)
        let b = IntMatrix::from_fn(k, k, |i, j| s.left_inv[(i, j)] * s.diag[j]);
        let mm = relations(m_gens)?;
        let um = s.left.mul(&mm)?;
        let mut r = IntMatrix::zeros(k, mm.cols());
        for i in 0..k {
            for j in 0..mm.cols() {
                if um[(i, j)] % s.diag[i] != 0 {
                    return Err(Error::Dimension("M is not contained in N"));
                }
                r[(i, j)] = um[(i, j)] / s.diag[i];
            }
        }
        let s2 = r.smith();
        let basis_mat = b.mul(&s2.left_inv)?;
        let mut divisors = Vec::new();
        let mut basis = Vec::new();
        for i in 0..k {
            if s2.diag[i] > 1 {
                divisors.push(s2.diag[i]);
                let mut e = basis_mat.col(i);
                self.reduce(&mut e);
                basis.push(e);
            }
        }
        let q = basis.iter().map(|e| self.q_of(e)).collect();
        let bt = basis.iter().map(|x| basis.iter().map(|y| self.b_of(x, y)).collect()).collect();
        Ok((Self::raw(divisors, q, bt, None), basis))
    }

    /// Invariant-factor normal form of the group (same form).
    pub fn normalized(&self) -> Result<Self> {
        let gens: Vec<Elem> = (0..self.divisors.len()).map(|i| self.generator(i)).collect();
        Ok(self.subquotient(&gens, &[])?.0)
    }

    pub fn is_isotropic(&self, gens: &[Elem]) -> bool {
        gens.iter().enumerate().all(|(i, x)| {
            self.q_of(x).is_zero() && gens[i + 1..].iter().all(|y| self.b_of(x, y).is_zero())
        })
    }

    /// Elements orthogonal to all of `gens`.
    pub fn orthogonal_elements(&self, gens: &[Elem]) -> Result<Vec<u32>> {
        let els = self.elements()?;
        Ok((0..els.len() as u32)
            .filter(|&i| gens.iter().all(|g| self.b_of(&els[i as usize], g).is_zero()))
            .collect())
    }

    /// `Γ⊥/Γ` for an isotropic subgroup `Γ`.
    pub fn orthogonal_quotient(&self, gamma: &[Elem]) -> Result<Self> {
        if !self.is_isotropic(gamma) {
            return Err(Error::NotIsotropic);
        }
        let perp = self.orthogonal_elements(gamma)?;
        let perp_gens = self.generators_of(&perp)?;
        Ok(self.subquotient(&perp_gens, gamma)?.0)
    }

    /// All subgroups, ordered by (order, element list).
    pub fn subgroups(&self) -> Result<Vec<Subgroup>> {
        self.guard()?;
        let n = self.order() as u32;
        let mut found: BTreeSet<(usize, Vec<u32>)> = BTreeSet::new();
        let mut queue: Vec<(Vec<u32>, Vec<Elem>)> = vec![(vec![0], vec![])];
        found.insert((1, vec![0]));
        while let Some((els, gens)) = queue.pop() {
            let set: BTreeSet<u32> = els.iter().copied().collect();
            for x in 1..n {
                if set.contains(&x) {
                    continue;
                }
                let mut g2 = gens.clone();
                g2.push(self.elem_at(x));
                let c = self.closure(&g2)?;
                if found.insert((c.len(), c.clone())) {
                    queue.push((c, g2));
                }
            }
        }
        let mut out = Vec::with_capacity(found.len());
        for (_, els) in found {
            let gens = self.generators_of(&els)?;
            let (_, basis) = self.subquotient(&gens, &[])?;
            out.push(Subgroup { elements: els, basis });
        }
        Ok(out)
    }

    /// The form restricted to a subgroup with a cyclic basis (in `self` coordinates).
    pub fn restricted(&self, basis: &[Elem]) -> Self {
        let divisors = basis.iter().map(|e| self.elem_order(e)).collect();
        let q = basis.iter().map(|e| self.q_of(e)).collect();
        let b = basis.iter().map(|x| basis.iter().map(|y| self.b_of(x, y)).collect()).collect();
        Self::raw(divisors, q, b, None)
    }

    /// Injective `q`-preserving homomorphisms `self → target`, up to `limit`.
    pub fn embeddings_into(&self, target: &Self, limit: Option<usize>) -> Result<Vec<FqfHom>> {
        target.guard()?;
        self.guard()?;
        let els = target.elements()?;
        let info: Vec<(Int, Rat)> = els.iter().map(|e| (target.elem_order(e), target.q_of(e))).collect();
        let k = self.divisors.len();
        let cands: Vec<Vec<usize>> = (0..k)
            .map(|i| (0..els.len()).filter(|&j| info[j].0 == self.divisors[i] && info[j].1 == self.q[i]).collect())
            .collect();
        let src_elems = self.elements()?;
        let mut out = Vec::new();
        let mut chosen: Vec<usize> = Vec::with_capacity(k);
        self.embed_rec(target, &els, &cands, &src_elems, &mut chosen, &mut out, limit);
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn embed_rec(
        &self,
        target: &Self,
        els: &[Elem],
        cands: &[Vec<usize>],
        src_elems: &[Elem],
        chosen: &mut Vec<usize>,
        out: &mut Vec<FqfHom>,
        limit: Option<usize>,
    ) {
        if limit.is_some_and(|l| out.len() >= l) {
            return;
        }
        let i = chosen.len();
        if i == cands.len() {
            let hom = FqfHom { images: chosen.iter().map(|&j| els[j].clone()).collect(), target_divisors: target.divisors.clone() };
            let mut seen = BTreeSet::new();
            for x in src_elems {
                if !seen.insert(hom.apply(x)) {
                    return;
                }
            }
            out.push(hom);
            return;
        }
        for &c in &cands[i] {
            let ok = chosen.iter().enumerate().all(|(j, &cj)| target.b_of(&els[c], &els[cj]) == self.b[i][j]);
            if ok {
                chosen.push(c);
                self.embed_rec(target, els, cands, src_elems, chosen, out, limit);
                chosen.pop();
            }
        }
    }

    /// All isometries `self → other`.
    pub fn isometries_between(&self, other: &Self) -> Result<Vec<FqfIsometry>> {
        if self.order() != other.order() {
            return Ok(vec![]);
        }
        self.embeddings_into(other, None)
    }

    /// Histogram of `(order, q)` over the group; an isometry invariant.
    pub fn value_histogram(&self) -> Result<Vec<(Int, Rat, usize)>> {
        let mut counts: alloc::collections::BTreeMap<(Int, Rat), usize> = alloc::collections::BTreeMap::new();
        for e in self.elements()? {
            *counts.entry((self.elem_order(&e), self.q_of(&e))).or_default() += 1;
        }
        Ok(counts.into_iter().map(|((o, q), c)| (o, q, c)).collect())
    }

    pub fn is_isometric(&self, other: &Self) -> Result<bool> {
        if self.order() != other.order() || self.elementary_divisors() != other.elementary_divisors() {
            return Ok(false);
        }
        if self.value_histogram()? != other.value_histogram()? {
            return Ok(false);
        }
        Ok(!self.embeddings_into(other, Some(1))?.is_empty())
    }

    /// `σ mod 8` from the Gauss sum `Σ exp(πi q(x)) = √|A| exp(πi σ/4)`;
    /// `None` if the form is degenerate.
    pub fn gauss_signature(&self) -> Result<Option<i64>> {
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for e in self.elements()? {
            let q = self.q_of(&e);
            let t = core::f64::consts::PI * (*q.numer() as f64) / (*q.denom() as f64);
            re += libm::cos(t);
            im += libm::sin(t);
        }
        let n = self.order() as f64;
        let abs = libm::sqrt(re * re + im * im);
        if libm::fabs(abs - libm::sqrt(n)) > 1e-6 * libm::sqrt(n) {
            return Ok(None);
        }
        let ang = libm::atan2(im, re) / (core::f64::consts::PI / 4.0);
        let k = libm::round(ang) as i64;
        if libm::fabs(ang - k as f64) > 1e-6 {
            return Ok(None);
        }
        Ok(Some(k.rem_euclid(8)))
    }

    /// Action of a lattice isometry on the discriminant group.
    pub fn induced_action(&self, l: &GramLattice, g: &IntMatrix) -> Result<FqfIsometry> {
        let lifts = self.lifts.as_ref().ok_or(Error::NoLifts)?;
        if g.congruence(l.gram())? != *l.gram() {
            return Err(Error::NotIsometry);
        }
        let images = lifts.vectors.iter().map(|v| self.reduce_dual(&g.mul_rat_vec(v)?)).collect::<Result<Vec<_>>>()?;
        let act = FqfHom { images, target_divisors: self.divisors.clone() };
        for e in self.elements()? {
            if self.q_of(&act.apply(&e)) != self.q_of(&e) {
                return Err(Error::NotIsometry);
            }
        }
        Ok(act)
    }
}

/// Discriminant form of a lattice.
pub fn discriminant_form(l: &GramLattice) -> TorsionQuadraticForm {
    TorsionQuadraticForm::of_lattice(l)
}

pub fn prime_factors(mut n: Int) -> Vec<Int> {
    n = n.abs();
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Renders `x ∈ ℚ/2ℤ` as `"a/b mod 2"`.
pub fn fmt_mod2(x: Rat) -> alloc::string::String {
    let x = mod2(x);
    if x.denom().is_one() {
        alloc::format!("{} mod 2", x.numer())
    } else {
        alloc::format!("{}/{} mod 2", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_lattice;

    fn disc(s: &str) -> TorsionQuadraticForm {
        discriminant_form(&parse_lattice(s).unwrap())
    }

    #[test]
    fn examples() {
        assert!(disc("U").is_trivial());
        let m2 = disc("[-2]");
        assert_eq!(m2.divisors(), &[2]);
        assert_eq!(m2.q_table()[0], Rat::new(3, 2));
        let u2 = disc("U(2)");
        assert_eq!(u2.divisors(), &[2, 2]);
        assert!(u2.q_table().iter().all(|q| q.is_zero()));
        assert_eq!(u2.b_table()[0][1], Rat::new(1, 2));
    }

    #[test]
    fn lengths_and_elementarity() {
        assert_eq!(disc("[-2]^2").length(), 2);
        assert_eq!(disc("U").length(), 0);
        assert_eq!(disc("U(3)+A2").length(), 3);
        assert!(disc("U(2)^2").is_p_elementary(2));
        assert!(!disc("U+[4]").is_p_elementary(2));
        assert!(disc("U^2+K7").is_p_elementary(7));
    }

    #[test]
    fn delta_values() {
        assert_eq!(disc("U(2)^2").delta().unwrap(), 0);
        assert_eq!(disc("[2]^2").delta().unwrap(), 1);
        assert_eq!(TorsionQuadraticForm::trivial().delta().unwrap(), 0);
        assert_eq!(disc("[4]").delta(), Err(Error::NotTwoElementary));
    }

    #[test]
    fn isometry_counts() {
        let t = TorsionQuadraticForm::trivial();
        assert_eq!(t.isometries_between(&t).unwrap().len(), 1);
        assert!(disc("[2]").isometries_between(&disc("[-2]")).unwrap().is_empty());
        assert_eq!(disc("[-2]^2").isometries_between(&disc("[-2]^2")).unwrap().len(), 2);
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(disc("U(2)").subgroups().unwrap().len(), 5);
        assert_eq!(TorsionQuadraticForm::trivial().subgroups().unwrap().len(), 1);
        assert_eq!(disc("[4]").subgroups().unwrap().len(), 3);
    }

    #[test]
    fn orthogonal_quotient_examples() {
        let f = disc("U(2)");
        assert_eq!(f.orthogonal_quotient(&[]).unwrap().order(), 4);
        let a = f.direct_sum(&f.rescaled(-1));
        let diag = vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]];
        assert!(a.orthogonal_quotient(&diag).unwrap().is_trivial());
        // L ⊕ R(−1) glued along the graph of the identity of (ℤ/2)²
        let l = disc("U^3+[-2]^2");
        let r = disc("[2]^2");
        let a = l.direct_sum(&r.rescaled(-1));
        let graph = vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]];
        let _ = a.orthogonal_quotient(&graph).map(|_| ()).unwrap_err();
        let r_minus = disc("[-2]^2");
        let a = l.direct_sum(&r_minus.rescaled(-1));
        assert!(a.orthogonal_quotient(&graph).unwrap().is_trivial());
    }

    #[test]
    fn consistency_and_gauss() {
        for s in ["U(2)+[-2]+[4]", "A2(-1)+U(3)", "H5", "K7+[6]"] {
            let f = disc(s);
            assert!(f.check_consistency().unwrap(), "{s}");
            let l = parse_lattice(s).unwrap();
            let sig = l.signature().index().rem_euclid(8);
            assert_eq!(f.gauss_signature().unwrap(), Some(sig), "{s}");
        }
    }

    #[test]
    fn induced_action_of_minus_identity() {
        let l = parse_lattice("U^3+[-2]^2").unwrap();
        let f = discriminant_form(&l);
        let minus = IntMatrix::identity(8).scale(-1);
        assert!(f.induced_action(&l, &minus).unwrap().is_identity());
        assert_eq!(f.induced_action(&l, &IntMatrix::identity(8)).unwrap().order(60).unwrap(), 1);
    }
}
