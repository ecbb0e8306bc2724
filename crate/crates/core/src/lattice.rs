//! Even integral lattices given by Gram matrices.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Sub};

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::linalg::{diagonalize, gcd_slice, Int, IntMatrix, Rat};

/// Signature `(s₊, s₋)` of a non-degenerate form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SignaturePair {
    pub plus: usize,
    pub minus: usize,
}

impl SignaturePair {
    pub const fn new(plus: usize, minus: usize) -> Self {
        SignaturePair { plus, minus }
    }

    pub fn rank(self) -> usize {
        self.plus + self.minus
    }

    /// `s₊ − s₋`.
    pub fn index(self) -> i64 {
        self.plus as i64 - self.minus as i64
    }

    /// Componentwise `self ≤ other`.
    pub fn fits_in(self, other: SignaturePair) -> bool {
        self.plus <= other.plus && self.minus <= other.minus
    }

    pub fn checked_sub(self, other: SignaturePair) -> Option<SignaturePair> {
        Some(SignaturePair::new(self.plus.checked_sub(other.plus)?, self.minus.checked_sub(other.minus)?))
    }

    pub fn swap(self) -> SignaturePair {
        SignaturePair::new(self.minus, self.plus)
    }
}

impl Add for SignaturePair {
    type Output = SignaturePair;
    fn add(self, o: SignaturePair) -> SignaturePair {
        SignaturePair::new(self.plus + o.plus, self.minus + o.minus)
    }
}

impl Sub for SignaturePair {
    type Output = SignaturePair;
    fn sub(self, o: SignaturePair) -> SignaturePair {
        self.checked_sub(o).expect("signature underflow")
    }
}

impl fmt::Display for SignaturePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.plus, self.minus)
    }
}

/// A non-degenerate even lattice `Z^n` with Gram matrix `G`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GramLattice {
    gram: IntMatrix,
}

impl GramLattice {
    /// Validates symmetry, evenness and non-degeneracy.
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::InvalidGram("not symmetric"));
        }
        if (0..gram.rows()).any(|i| gram[(i, i)] % 2 != 0) {
            return Err(Error::InvalidGram("odd diagonal entry"));
        }
        if gram.det()? == 0 {
            return Err(Error::InvalidGram("degenerate"));
        }
        Ok(GramLattice { gram })
    }

    pub fn from_rows<R: AsRef<[Int]>>(rows: &[R]) -> Result<Self> {
        Self::new(IntMatrix::from_rows(rows)?)
    }

    /// The zero lattice.
    pub fn zero() -> Self {
        GramLattice { gram: IntMatrix::zeros(0, 0) }
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    /// `L(n)`: the Gram matrix multiplied by `n`.
    pub fn scaled(&self, n: Int) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGram("zero scale"));
        }
        Ok(GramLattice { gram: self.gram.scale(n) })
    }

    pub fn determinant(&self) -> Int {
        self.gram.det().expect("square Gram matrix")
    }

    pub fn signature(&self) -> SignaturePair {
        let (_, d) = self.diagonal_frame();
        let plus = d.iter().filter(|x| x.is_positive()).count();
        SignaturePair::new(plus, d.len() - plus)
    }

    /// Rational orthogonal basis (columns) and the squares of its vectors.
    pub fn diagonal_frame(&self) -> (Vec<Vec<Rat>>, Vec<Rat>) {
        diagonalize(&self.gram).expect("non-degenerate Gram matrix")
    }

    pub fn inner(&self, x: &[Int], y: &[Int]) -> Int {
        let gy = self.gram.mul_vec(y).expect("dimension");
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self, x: &[Int]) -> Int {
        self.inner(x, x)
    }

    pub fn inner_rat(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let gy = self.gram.mul_rat_vec(y).expect("dimension");
        x.iter().zip(&gy).fold(Rat::from_integer(0), |acc, (a, b)| acc + a * b)
    }

    /// The positive generator of `(v, L) ⊂ Z`.
    pub fn divisibility(&self, v: &[Int]) -> Result<Int> {
        if v.len() != self.rank() {
            return Err(Error::Dimension("vector length"));
        }
        if v.iter().all(|x| *x == 0) {
            return Err(Error::ZeroVector);
        }
        Ok(gcd_slice(&self.gram.mul_vec(v)?))
    }

    pub fn direct_sum(parts: &[&GramLattice]) -> GramLattice {
        let grams: Vec<&IntMatrix> = parts.iter().map(|p| &p.gram).collect();
        GramLattice { gram: IntMatrix::block_diag(&grams) }
    }

    /// Sublattice spanned by the columns of `basis` (which must be independent).
    pub fn restrict(&self, basis: &IntMatrix) -> Result<GramLattice> {
        GramLattice::new(basis.congruence(&self.gram)?)
    }

    /// Change of basis by a unimodular matrix.
    pub fn transform(&self, p: &IntMatrix) -> Result<GramLattice> {
        Ok(GramLattice { gram: p.congruence(&self.gram)? })
    }
}

/// Named building blocks of lattice expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    U,
    A(usize),
    D(usize),
    E(usize),
    /// `[n]`, `n` even and non-zero.
    Rank1(Int),
    /// `[[2,1],[1,-2]]`, determinant −5.
    H5,
    /// `[[-4,1],[1,-2]]`, determinant 7.
    K7,
}

impl Block {
    pub fn gram(self) -> Result<IntMatrix> {
        let rows: Vec<Vec<Int>> = match self {
            Block::U => alloc::vec![alloc::vec![0, 1], alloc::vec![1, 0]],
            Block::H5 => alloc::vec![alloc::vec![2, 1], alloc::vec![1, -2]],
            Block::K7 => alloc::vec![alloc::vec![-4, 1], alloc::vec![1, -2]],
            Block::Rank1(n) => {
                if n == 0 || n % 2 != 0 {
                    return Err(Error::OddRankOne(n));
                }
                alloc::vec![alloc::vec![n]]
            }
            Block::A(n) => {
                if n == 0 {
                    return Err(Error::BlockParameter { name: "A", value: 0 });
                }
                return Ok(cartan(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>()));
            }
            Block::D(n) => {
                if n < 4 {
                    return Err(Error::BlockParameter { name: "D", value: n as Int });
                }
                let mut edges: Vec<(usize, usize)> = (1..n - 1).map(|i| (i - 1, i)).collect();
                edges.push((n - 3, n - 1));
                return Ok(cartan(n, &edges));
            }
            Block::E(n) => {
                if !(6..=8).contains(&n) {
                    return Err(Error::BlockParameter { name: "E", value: n as Int });
                }
                // chain 0-1-..-(n-2), node n-1 attached to node 2
                let mut edges: Vec<(usize, usize)> = (1..n - 1).map(|i| (i - 1, i)).collect();
                edges.push((2, n - 1));
                return Ok(cartan(n, &edges));
            }
        };
        IntMatrix::from_rows(&rows)
    }
}

fn cartan(n: usize, edges: &[(usize, usize)]) -> IntMatrix {
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = 2;
    }
    for &(a, b) in edges {
        g[(a, b)] = -1;
        g[(b, a)] = -1;
    }
    g
}

/// `block(scale)`; the scale multiplies the Gram matrix.
pub fn make_standard(block: Block, scale: Int) -> Result<GramLattice> {
    GramLattice::new(block.gram()?)?.scaled(scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_determinants() {
        let cases = [
            (Block::U, 1, -1),
            (Block::A(2), 1, 3),
            (Block::A(3), -1, -4),
            (Block::D(4), 1, 4),
            (Block::D(5), 1, 4),
            (Block::E(6), 1, 3),
            (Block::E(7), 1, 2),
            (Block::E(8), 1, 1),
            (Block::E(8), -1, 1),
            (Block::H5, 1, -5),
            (Block::K7, 1, 7),
            (Block::U, 2, -4),
        ];
        for (b, s, d) in cases {
            assert_eq!(make_standard(b, s).unwrap().determinant(), d, "{b:?}({s})");
        }
    }

    #[test]
    fn rejects_odd_rank_one() {
        assert_eq!(make_standard(Block::Rank1(3), 1), Err(Error::OddRankOne(3)));
    }

    #[test]
    fn signatures() {
        assert_eq!(make_standard(Block::E(8), 1).unwrap().signature(), SignaturePair::new(8, 0));
        assert_eq!(make_standard(Block::H5, 1).unwrap().signature(), SignaturePair::new(1, 1));
        assert_eq!(make_standard(Block::K7, 1).unwrap().signature(), SignaturePair::new(0, 2));
        let u = make_standard(Block::U, 1).unwrap();
        let m2 = make_standard(Block::Rank1(-2), 1).unwrap();
        let l = GramLattice::direct_sum(&[&u, &u, &u, &m2, &m2]);
        assert_eq!(l.signature(), SignaturePair::new(3, 5));
        assert_eq!(l.determinant(), -4);
    }

    #[test]
    fn divisibility_examples() {
        let u2 = make_standard(Block::U, 2).unwrap();
        assert_eq!(u2.divisibility(&[1, 1]).unwrap(), 2);
        let u = make_standard(Block::U, 1).unwrap();
        assert_eq!(u.divisibility(&[1, 1]).unwrap(), 1);
        assert_eq!(u.divisibility(&[0, 0]), Err(Error::ZeroVector));
    }
}
