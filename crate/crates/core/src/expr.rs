//! Lattice literals.
//!
//! ```text
//! expr   := term (('+' | '⊕') term)*
//! term   := atom ['^' uint]
//! atom   := NAME ['(' int ')']
//!         | '[' int ']' ['(' int ')']
//!         | '[' '[' int (',' int)* ']' (',' '[' ... ']')* ']'
//! NAME   := 'U' | 'A' uint | 'D' uint | 'E' uint | 'H5' | 'K7'
//! ```
//!
//! `A_2` is accepted for `A2`, and `−` (U+2212) for `-`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::lattice::{make_standard, Block, GramLattice};
use crate::linalg::{Int, IntMatrix};

/// One summand: a named block with scale, or an explicit Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Named { block: Block, scale: Int },
    Matrix(IntMatrix),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub atom: Atom,
    pub count: usize,
}

/// A direct sum of atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LatticeExpr {
    pub terms: Vec<Term>,
}

impl Atom {
    pub fn named(block: Block, scale: Int) -> Self {
        match block {
            Block::Rank1(n) => Atom::Named { block: Block::Rank1(n * scale), scale: 1 },
            _ => Atom::Named { block, scale },
        }
    }

    pub fn gram(&self) -> Result<IntMatrix> {
        match self {
            Atom::Named { block, scale } => Ok(make_standard(*block, *scale)?.gram().clone()),
            Atom::Matrix(m) => Ok(m.clone()),
        }
    }

    fn sort_key(&self) -> (usize, Int, IntMatrix) {
        let g = self.gram().expect("validated atom");
        let d = g.det().expect("square");
        (g.rows(), d, g)
    }
}

impl LatticeExpr {
    pub fn parse(s: &str) -> Result<Self> {
        Parser::new(s).expr()
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = Atom>) -> Self {
        let mut e = LatticeExpr::default();
        for a in atoms {
            e.push(a, 1);
        }
        e
    }

    pub fn push(&mut self, atom: Atom, count: usize) {
        if count == 0 {
            return;
        }
        if let Some(t) = self.terms.iter_mut().find(|t| t.atom == atom) {
            t.count += count;
        } else {
            self.terms.push(Term { atom, count });
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lattice(&self) -> Result<GramLattice> {
        let mut grams = Vec::new();
        for t in &self.terms {
            let g = t.atom.gram()?;
            for _ in 0..t.count {
                grams.push(g.clone());
            }
        }
        let refs: Vec<&IntMatrix> = grams.iter().collect();
        GramLattice::new(IntMatrix::block_diag(&refs))
    }

    /// Merges equal atoms and sorts by (rank, determinant, Gram).
    pub fn canonical(&self) -> Self {
        let mut merged = LatticeExpr::default();
        for t in &self.terms {
            merged.push(t.atom.clone(), t.count);
        }
        merged.terms.sort_by_cached_key(|t| t.atom.sort_key());
        merged
    }

    /// Same terms with every scale multiplied by `k`.
    pub fn scaled(&self, k: Int) -> Self {
        let mut out = LatticeExpr::default();
        for t in &self.terms {
            let atom = match &t.atom {
                Atom::Named { block, scale } => Atom::named(*block, scale * k),
                Atom::Matrix(m) => Atom::Matrix(m.scale(k)),
            };
            out.push(atom, t.count);
        }
        out
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Named { block: Block::Rank1(n), .. } => write!(f, "[{n}]"),
            Atom::Named { block, scale } => {
                match block {
                    Block::U => f.write_str("U")?,
                    Block::A(n) => write!(f, "A{n}")?,
                    Block::D(n) => write!(f, "D{n}")?,
                    Block::E(n) => write!(f, "E{n}")?,
                    Block::H5 => f.write_str("H5")?,
                    Block::K7 => f.write_str("K7")?,
                    Block::Rank1(_) => unreachable!(),
                }
                if *scale != 1 {
                    write!(f, "({scale})")?;
                }
                Ok(())
            }
            Atom::Matrix(m) => {
                f.write_str("[")?;
                for i in 0..m.rows() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    f.write_str("[")?;
                    for (j, v) in m.row(i).iter().enumerate() {
                        if j > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{v}")?;
                    }
                    f.write_str("]")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Display for LatticeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{}", t.atom)?;
            if t.count > 1 {
                write!(f, "^{}", t.count)?;
            }
        }
        Ok(())
    }
}

impl core::str::FromStr for LatticeExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        LatticeExpr::parse(s)
    }
}

/// Parses an expression straight to a lattice.
pub fn parse_lattice(s: &str) -> Result<GramLattice> {
    LatticeExpr::parse(s)?.lattice()
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn new(s: &str) -> Self {
        let chars = s
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i, if c == '−' { '-' } else { c }))
            .collect();
        Parser { chars, pos: 0, len: s.len() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|p| p.1)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |p| p.0)
    }

    fn err(&self, msg: &'static str) -> Error {
        let token: String = match self.chars.get(self.pos) {
            Some(_) => self.chars[self.pos..].iter().take(8).map(|p| p.1).collect(),
            None => "<end>".to_string(),
        };
        Error::Parse { pos: self.offset(), token, msg }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, msg: &'static str) -> Result<()> {
        if self.eat(c) { Ok(()) } else { Err(self.err(msg)) }
    }

    fn expr(&mut self) -> Result<LatticeExpr> {
        let mut e = LatticeExpr::default();
        if self.peek().is_none() {
            return Err(self.err("empty expression"));
        }
        if self.peek() == Some('0') && self.chars.len() == 1 {
            return Ok(e);
        }
        loop {
            let (atom, count) = self.term()?;
            e.push(atom, count);
            if !(self.eat('+') || self.eat('⊕')) {
                break;
            }
        }
        if self.peek().is_some() {
            return Err(self.err("unexpected token"));
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<(Atom, usize)> {
        let atom = self.atom()?;
        let count = if self.eat('^') {
            let n = self.uint()?;
            if n == 0 {
                return Err(self.err("exponent must be positive"));
            }
            n as usize
        } else {
            1
        };
        Ok((atom, count))
    }

    fn atom(&mut self) -> Result<Atom> {
        let start = self.pos;
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                if self.peek() == Some('[') {
                    return self.matrix_tail(start);
                }
                let n = self.int()?;
                self.expect(']', "expected `]`")?;
                let scale = self.opt_scale()?;
                let v = n * scale;
                if v == 0 || v % 2 != 0 {
                    self.pos = start;
                    return Err(self.err("rank-one entry must be even and non-zero"));
                }
                Ok(Atom::named(Block::Rank1(v), 1))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        if c != '_' {
                            name.push(c);
                        }
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let block = block_from_name(&name).ok_or_else(|| {
                    self.pos = start;
                    self.err("unknown block name")
                })?;
                let scale = self.opt_scale()?;
                let atom = Atom::named(block, scale);
                atom.gram().map_err(|_| {
                    self.pos = start;
                    self.err("invalid block parameters")
                })?;
                Ok(atom)
            }
            _ => Err(self.err("expected a block name, `[n]` or a matrix")),
        }
    }

    fn matrix_tail(&mut self, start: usize) -> Result<Atom> {
        let mut rows: Vec<Vec<Int>> = Vec::new();
        loop {
            self.expect('[', "expected `[` opening a matrix row")?;
            let mut row = Vec::new();
            loop {
                row.push(self.int()?);
                if !self.eat(',') {
                    break;
                }
            }
            self.expect(']', "expected `]` closing a matrix row")?;
            rows.push(row);
            if !self.eat(',') {
                break;
            }
        }
        self.expect(']', "expected `]` closing the matrix")?;
        let m = IntMatrix::from_rows(&rows).map_err(|_| {
            self.pos = start;
            self.err("ragged matrix")
        })?;
        GramLattice::new(m.clone()).map_err(|_| {
            self.pos = start;
            self.err("matrix is not an even non-degenerate symmetric Gram matrix")
        })?;
        Ok(Atom::Matrix(m))
    }

    fn opt_scale(&mut self) -> Result<Int> {
        if self.eat('(') {
            let s = self.int()?;
            if s == 0 {
                return Err(self.err("scale must be non-zero"));
            }
            self.expect(')', "expected `)`")?;
            Ok(s)
        } else {
            Ok(1)
        }
    }

    fn int(&mut self) -> Result<Int> {
        let neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        let n = self.uint()?;
        Ok(if neg { -n } else { n })
    }

    fn uint(&mut self) -> Result<Int> {
        let mut seen = false;
        let mut n: Int = 0;
        while let Some(c) = self.peek() {
            if let Some(d) = c.to_digit(10) {
                n = n.checked_mul(10).and_then(|n| n.checked_add(d as Int)).ok_or_else(|| self.err("integer overflow"))?;
                seen = true;
                self.pos += 1;
            } else {
                break;
            }
        }
        if seen { Ok(n) } else { Err(self.err("expected an integer")) }
    }
}

fn block_from_name(name: &str) -> Option<Block> {
    match name {
        "U" => return Some(Block::U),
        "H5" => return Some(Block::H5),
        "K7" => return Some(Block::K7),
        _ => {}
    }
    let (head, tail) = name.split_at(1);
    let n: usize = tail.parse().ok()?;
    match head {
        "A" => Some(Block::A(n)),
        "D" => Some(Block::D(n)),
        "E" => Some(Block::E(n)),
        _ => None,
    }
}
