//! Bricks over an arbitrary sidelength lattice, the combine operation, the
//! extension closures and the minimal tilable set.
//!
//! Directions are numbered from 1 throughout the public API.

mod closure;
mod intern;

use std::fmt;
use std::str::FromStr;

use crate::dedekind::Phrase;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::numlat::{parse_nat, FactoredNat};

pub use closure::{ClosureOptions, Derivation, NodeId, Origin};

/// A product of `d >= 1` sidelengths.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Brick<L> {
    sides: Vec<L>,
}

impl<L: Lattice> Brick<L> {
    pub fn new(sides: Vec<L>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::Empty("a brick needs at least one side"));
        }
        Ok(Self { sides })
    }

    /// `side^×d`.
    pub fn cube(side: L, d: usize) -> Result<Self> {
        Self::new(vec![side; d])
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn sides(&self) -> &[L] {
        &self.sides
    }

    /// Side in direction `dir` (1-based).
    pub fn side(&self, dir: usize) -> &L {
        &self.sides[dir - 1]
    }

    pub fn into_sides(self) -> Vec<L> {
        self.sides
    }

    /// Coordinatewise `leq`: this brick parapacks `other`.
    pub fn divides(&self, other: &Self) -> Result<bool> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.sides.iter().zip(&other.sides).all(|(a, b)| a.leq(b)))
    }
}

impl<L: fmt::Debug> fmt::Debug for Brick<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.sides).finish()
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn check_dir(dir: usize, dim: usize) -> Result<()> {
    if dir == 0 || dir > dim {
        return Err(Error::DirectionOutOfRange { dir, dim });
    }
    Ok(())
}

pub fn brick_divides<L: Lattice>(b: &Brick<L>, t: &Brick<L>) -> Result<bool> {
    b.divides(t)
}

/// Meet of the `dir` sides, join of every other side.
pub fn comb<L: Lattice>(dir: usize, bricks: &[Brick<L>]) -> Result<Brick<L>> {
    let (first, rest) = bricks
        .split_first()
        .ok_or(Error::Empty("comb needs at least one brick"))?;
    let dim = first.dim();
    check_dir(dir, dim)?;
    let mut sides = first.sides.clone();
    for b in rest {
        check_dim(dim, b.dim())?;
        for (j, (acc, s)) in sides.iter_mut().zip(&b.sides).enumerate() {
            *acc = if j + 1 == dir { acc.meet(s) } else { acc.join(s) };
        }
    }
    Ok(Brick { sides })
}

/// Binary combine in direction `dir`.
pub fn cix<L: Lattice>(dir: usize, a: &Brick<L>, b: &Brick<L>) -> Result<Brick<L>> {
    comb(dir, &[a.clone(), b.clone()])
}

/// Canonically ordered bricks, none dividing another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrickAntichain<L> {
    bricks: Vec<Brick<L>>,
}

impl<L: Lattice> BrickAntichain<L> {
    /// Checks the antichain property and sorts.
    pub fn new(mut bricks: Vec<Brick<L>>) -> Result<Self> {
        bricks.sort();
        bricks.dedup();
        let ac = Self { bricks };
        if !ac.is_antichain() {
            return Err(Error::Assertion("bricks are not mutually incomparable".into()));
        }
        Ok(ac)
    }

    pub fn len(&self) -> usize {
        self.bricks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bricks.is_empty()
    }

    pub fn bricks(&self) -> &[Brick<L>] {
        &self.bricks
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Brick<L>> {
        self.bricks.iter()
    }

    pub fn contains(&self, b: &Brick<L>) -> bool {
        self.bricks.binary_search(b).is_ok()
    }

    pub fn is_antichain(&self) -> bool {
        self.bricks.iter().enumerate().all(|(i, a)| {
            self.bricks
                .iter()
                .enumerate()
                .all(|(j, b)| i == j || !a.sides.iter().zip(&b.sides).all(|(x, y)| x.leq(y)))
        })
    }

    /// The first member dividing `t`, if any.
    pub fn divisor_of(&self, t: &Brick<L>) -> Result<Option<&Brick<L>>> {
        for m in &self.bricks {
            if m.divides(t)? {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }
}

impl<L> IntoIterator for BrickAntichain<L> {
    type Item = Brick<L>;
    type IntoIter = std::vec::IntoIter<Brick<L>>;

    fn into_iter(self) -> Self::IntoIter {
        self.bricks.into_iter()
    }
}

fn uniform_dim<L: Lattice>(bricks: &[Brick<L>]) -> Result<usize> {
    let first = bricks.first().ok_or(Error::Empty("no bricks given"))?;
    for b in bricks {
        check_dim(first.dim(), b.dim())?;
    }
    Ok(first.dim())
}

/// The bricks of `s` not strictly divisible by another brick of `s`.
pub fn minimal_elements<L: Lattice>(s: &[Brick<L>]) -> Result<BrickAntichain<L>> {
    uniform_dim(s)?;
    let mut sorted: Vec<Brick<L>> = s.to_vec();
    sorted.sort();
    sorted.dedup();
    let divides = |a: &Brick<L>, b: &Brick<L>| a.sides.iter().zip(&b.sides).all(|(x, y)| x.leq(y));
    let minimal: Vec<Brick<L>> = sorted
        .iter()
        .filter(|b| !sorted.iter().any(|a| a != *b && divides(a, b)))
        .cloned()
        .collect();
    Ok(BrickAntichain { bricks: minimal })
}

/// `{comb_dir(A) : A non-empty subset of p}`, or only its minimal elements
/// when `opts.prune` is set.
pub fn ext_dir<L: Lattice>(dir: usize, p: &[Brick<L>], opts: ClosureOptions) -> Result<Vec<Brick<L>>> {
    let mut der = Derivation::new(p)?;
    let roots = der.proto_ids();
    let out = der.ext_dir(dir, &roots, opts)?;
    let mut bricks: Vec<Brick<L>> = out.into_iter().map(|id| der.brick(id)).collect();
    bricks.sort();
    Ok(bricks)
}

/// `Ext_d(... Ext_1(p) ...)`.
pub fn ext_all<L: Lattice>(p: &[Brick<L>], opts: ClosureOptions) -> Result<Vec<Brick<L>>> {
    let dim = uniform_dim(p)?;
    let order: Vec<usize> = (1..=dim).collect();
    ext_in_order(p, &order, opts)
}

/// Applies the extensions in the listed direction order.
pub fn ext_in_order<L: Lattice>(p: &[Brick<L>], order: &[usize], opts: ClosureOptions) -> Result<Vec<Brick<L>>> {
    let mut der = Derivation::new(p)?;
    let mut ids = der.proto_ids();
    for &dir in order {
        ids = der.ext_dir(dir, &ids, opts)?;
    }
    let mut bricks: Vec<Brick<L>> = ids.into_iter().map(|id| der.brick(id)).collect();
    bricks.sort();
    Ok(bricks)
}

/// The minimal tilable boxes `M(p)`.
pub fn minimal_set<L: Lattice>(p: &[Brick<L>]) -> Result<BrickAntichain<L>> {
    minimal_set_with(p, ClosureOptions::default())
}

pub fn minimal_set_with<L: Lattice>(p: &[Brick<L>], opts: ClosureOptions) -> Result<BrickAntichain<L>> {
    let all = ext_all(p, opts)?;
    minimal_elements(&all)
}

pub fn rank<L: Lattice>(p: &[Brick<L>]) -> Result<usize> {
    Ok(minimal_set(p)?.len())
}

/// Membership in the up-set generated by `m`; one pass over `m`.
pub fn is_tilable<L: Lattice>(t: &Brick<L>, m: &BrickAntichain<L>) -> Result<bool> {
    Ok(m.divisor_of(t)?.is_some())
}

/// Text form of a single sidelength inside a brick literal.
pub trait SideText: Sized {
    fn write_side(&self, out: &mut String);
    fn parse_sides(text: &str) -> Result<Vec<Self>>;
}

impl SideText for FactoredNat {
    fn write_side(&self, out: &mut String) {
        out.push_str(&self.to_string());
    }

    fn parse_sides(text: &str) -> Result<Vec<Self>> {
        text.split('x').map(parse_nat).collect()
    }
}

/// Symbolic sides are always parenthesized, so the separator `x` never
/// collides with the letter `x`.
impl SideText for Phrase {
    fn write_side(&self, out: &mut String) {
        out.push('(');
        out.push_str(&self.to_string());
        out.push(')');
    }

    fn parse_sides(text: &str) -> Result<Vec<Self>> {
        parse_paren_sides(text)
    }
}

pub(crate) fn parse_paren_sides(text: &str) -> Result<Vec<Phrase>> {
    let mut sides = Vec::new();
    let mut rest = text;
    loop {
        let inner = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected '(' in brick {text:?}")))?;
        let close = inner
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unclosed '(' in brick {text:?}")))?;
        sides.push(inner[..close].parse::<Phrase>()?);
        rest = &inner[close + 1..];
        if rest.is_empty() {
            return Ok(sides);
        }
        rest = rest
            .strip_prefix('x')
            .ok_or_else(|| Error::Parse(format!("expected 'x' between sides in {text:?}")))?;
    }
}

impl<L: Lattice + SideText> fmt::Display for Brick<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, s) in self.sides.iter().enumerate() {
            if i > 0 {
                out.push('x');
            }
            s.write_side(&mut out);
        }
        f.write_str(&out)
    }
}

impl<L: Lattice + SideText> FromStr for Brick<L> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty brick".into()));
        }
        Brick::new(L::parse_sides(s)?)
    }
}

pub fn parse_bricks<L: Lattice + SideText>(items: &[&str]) -> Result<Vec<Brick<L>>> {
    items.iter().map(|s| s.parse()).collect()
}
