//! Explicit signed tilings: construction from the combine provenance and
//! independent verification on the unit-cell grid.

use std::collections::BTreeMap;
use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::brick::{ClosureOptions, Derivation, NodeId, Origin};
use crate::error::{Error, Result};
use crate::numlat::FactoredNat;
use crate::Brick;

/// Default bound on the cells of the verification grid.
pub const DEFAULT_CELL_LIMIT: u64 = 10_000_000;

/// Bound on the number of placements a construction may produce.
pub const PLACEMENT_LIMIT: usize = 5_000_000;

/// A translate of proto brick `proto` with integer weight `coeff`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Placement {
    pub proto: usize,
    pub offset: Vec<i64>,
    pub coeff: i64,
}

/// `ind(target) = Σ coeff · ind(proto + offset)`, the target sitting at the
/// origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TilingWitness {
    pub target: Brick<FactoredNat>,
    pub placements: Vec<Placement>,
}

#[derive(Serialize, Deserialize)]
struct WitnessJson {
    target: String,
    placements: Vec<Placement>,
}

impl TilingWitness {
    /// Merges placements at the same position and drops zero weights; the
    /// result is ordered by proto index, then offset.
    pub fn normalized(target: Brick<FactoredNat>, placements: impl IntoIterator<Item = Placement>) -> Self {
        let mut acc: BTreeMap<(usize, Vec<i64>), i64> = BTreeMap::new();
        for p in placements {
            *acc.entry((p.proto, p.offset)).or_default() += p.coeff;
        }
        let placements = acc
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|((proto, offset), coeff)| Placement { proto, offset, coeff })
            .collect();
        Self { target, placements }
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = WitnessJson {
            target: self.target.to_string(),
            placements: self.placements.clone(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "target": self.target.to_string(),
            "placements": self.placements,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: WitnessJson = serde_json::from_str(text)?;
        Ok(Self {
            target: doc.target.parse()?,
            placements: doc.placements,
        })
    }

    /// Total weight per proto index.
    pub fn net_counts(&self) -> BTreeMap<usize, i64> {
        let mut out = BTreeMap::new();
        for p in &self.placements {
            *out.entry(p.proto).or_default() += p.coeff;
        }
        out
    }

    pub fn max_abs_coeff(&self) -> i64 {
        self.placements.iter().map(|p| p.coeff.abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for TilingWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "target {}", self.target)?;
        for p in &self.placements {
            let offset: Vec<String> = p.offset.iter().map(i64::to_string).collect();
            writeln!(f, "{:+} * proto {} at ({})", p.coeff, p.proto, offset.join(","))?;
        }
        Ok(())
    }
}

fn sides_u64(b: &Brick<FactoredNat>) -> Result<Vec<u64>> {
    b.sides()
        .iter()
        .map(|s| s.to_u64().ok_or_else(|| Error::Guard(format!("side {s} is too large to place"))))
        .collect()
}

fn volume(sides: &[u64]) -> i128 {
    sides.iter().map(|&s| s as i128).product()
}

/// Checks the volume identity, then the indicator identity cell by cell over
/// the bounding box of the target and all placements.
pub fn verify_witness(w: &TilingWitness, protos: &[Brick<FactoredNat>]) -> Result<bool> {
    verify_witness_with(w, protos, DEFAULT_CELL_LIMIT)
}

pub fn verify_witness_with(w: &TilingWitness, protos: &[Brick<FactoredNat>], cell_limit: u64) -> Result<bool> {
    let dim = w.target.dim();
    let target = sides_u64(&w.target)?;
    let mut shapes = Vec::with_capacity(protos.len());
    for p in protos {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        shapes.push(sides_u64(p)?);
    }
    let mut signed_volume: i128 = 0;
    for p in &w.placements {
        if p.coeff == 0 || p.proto >= shapes.len() {
            return Ok(false);
        }
        if p.offset.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.offset.len(),
            });
        }
        signed_volume += p.coeff as i128 * volume(&shapes[p.proto]);
    }
    if signed_volume != volume(&target) {
        return Ok(false);
    }

    let mut lo: Vec<i64> = vec![0; dim];
    let mut hi: Vec<i64> = target.iter().map(|&t| t as i64).collect();
    for p in &w.placements {
        for j in 0..dim {
            lo[j] = lo[j].min(p.offset[j]);
            hi[j] = hi[j].max(p.offset[j] + shapes[p.proto][j] as i64);
        }
    }
    // one extra slot per axis for the upper corners of the difference array
    let extent: Vec<usize> = (0..dim).map(|j| (hi[j] - lo[j]) as usize + 1).collect();
    let cells = extent
        .iter()
        .try_fold(1u64, |acc, &e| acc.checked_mul(e as u64))
        .filter(|&c| c <= cell_limit)
        .ok_or_else(|| Error::Guard(format!("verification grid exceeds {cell_limit} cells")))?;
    let mut grid = vec![0i64; cells as usize];
    let mut strides = vec![1usize; dim];
    for j in (0..dim.saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * extent[j + 1];
    }

    let mut add_box = |offset: &[i64], sides: &[u64], coeff: i64| {
        for corner in 0..1usize << dim {
            let mut idx = 0;
            let mut sign = coeff;
            for j in 0..dim {
                let mut c = offset[j] - lo[j];
                if corner >> j & 1 == 1 {
                    c += sides[j] as i64;
                    sign = -sign;
                }
                idx += c as usize * strides[j];
            }
            grid[idx] += sign;
        }
    };
    for p in &w.placements {
        add_box(&p.offset, &shapes[p.proto], p.coeff);
    }
    add_box(&vec![0; dim], &target, -1);

    for j in 0..dim {
        let stride = strides[j];
        for idx in 0..grid.len() {
            if (idx / stride) % extent[j] != 0 {
                grid[idx] += grid[idx - stride];
            }
        }
    }
    Ok(grid.iter().all(|&v| v == 0))
}

/// `t` is filled by the grid of translates of `b`.
pub fn parallel_pack(b: &Brick<FactoredNat>, t: &Brick<FactoredNat>) -> Result<TilingWitness> {
    if !b.divides(t)? {
        return Err(Error::NotDivisible(b.to_string(), t.to_string()));
    }
    let base = TilingWitness {
        target: b.clone(),
        placements: vec![Placement {
            proto: 0,
            offset: vec![0; b.dim()],
            coeff: 1,
        }],
    };
    pack_into(&base, t)
}

/// Replaces `t` by the grid of copies of `w.target`, each expanded by `w`.
fn pack_into(w: &TilingWitness, t: &Brick<FactoredNat>) -> Result<TilingWitness> {
    let cell = sides_u64(&w.target)?;
    let outer = sides_u64(t)?;
    let counts: Vec<u64> = cell.iter().zip(&outer).map(|(c, o)| o / c).collect();
    let copies: u64 = counts.iter().product();
    if (copies as usize).saturating_mul(w.placements.len()) > PLACEMENT_LIMIT {
        return Err(Error::Guard(format!("witness would exceed {PLACEMENT_LIMIT} placements")));
    }
    let mut out = Vec::with_capacity(copies as usize * w.placements.len());
    let mut index = vec![0u64; cell.len()];
    for _ in 0..copies {
        for p in &w.placements {
            let offset = p
                .offset
                .iter()
                .zip(&index)
                .zip(&cell)
                .map(|((o, &i), &c)| o + (i * c) as i64)
                .collect();
            out.push(Placement {
                proto: p.proto,
                offset,
                coeff: p.coeff,
            });
        }
        for j in 0..index.len() {
            index[j] += 1;
            if index[j] < counts[j] {
                break;
            }
            index[j] = 0;
        }
    }
    Ok(TilingWitness::normalized(t.clone(), out))
}

/// Extended Euclid with the smallest `|u| + |v|` among all Bézout pairs.
fn bezout_pair(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    let g = r0;
    let (da, db) = (b / g, a / g);
    let cost = |k: i128| (s0 + k * da).abs() + (t0 - k * db).abs();
    let mut k = 0;
    while cost(k - 1) < cost(k) {
        k -= 1;
    }
    while cost(k + 1) < cost(k) {
        k += 1;
    }
    (g, s0 + k * da, t0 - k * db)
}

/// `gcd(values) = Σ coeffs[i] · values[i]`, pairs folded left to right.
pub fn bezout(values: &[u64]) -> Result<(u64, Vec<i64>)> {
    let (&first, rest) = values.split_first().ok_or(Error::Empty("bezout needs a value"))?;
    let mut g = first as i128;
    let mut coeffs: Vec<i128> = vec![1];
    for &v in rest {
        let (ng, u, w) = bezout_pair(g, v as i128);
        for c in &mut coeffs {
            *c *= u;
        }
        coeffs.push(w);
        g = ng;
    }
    let coeffs = coeffs
        .into_iter()
        .map(|c| i64::try_from(c).map_err(|_| Error::Overflow("bezout coefficients")))
        .collect::<Result<_>>()?;
    Ok((g as u64, coeffs))
}

/// A witness for `comb_dir` of the inputs' targets, built from their
/// witnesses: along `dir` the gcd is a signed sum of the input sides, and each
/// signed segment is thickened to a slab packed by its source brick.
pub fn combine_witness(dir: usize, inputs: &[TilingWitness]) -> Result<TilingWitness> {
    let bricks: Vec<Brick<FactoredNat>> = inputs.iter().map(|w| w.target.clone()).collect();
    let combined = crate::brick::comb(dir, &bricks)?;
    let outer = sides_u64(&combined)?;
    let lengths: Vec<u64> = bricks
        .iter()
        .map(|b| sides_u64(b).map(|s| s[dir - 1]))
        .collect::<Result<_>>()?;
    let (g, coeffs) = bezout(&lengths)?;
    debug_assert_eq!(g, outer[dir - 1]);

    // positive segments fill [0, P) from 0, negative ones fill [g, P) from g
    let mut pos_cursor: i64 = 0;
    let mut neg_cursor: i64 = g as i64;
    let mut out = Vec::new();
    for ((w, &c), &len) in inputs.iter().zip(&coeffs).zip(&lengths) {
        if c == 0 {
            continue;
        }
        let len = len as i64;
        let mut slab_sides = outer.clone();
        slab_sides[dir - 1] = len as u64;
        let slab = Brick::new(slab_sides.iter().map(|&s| FactoredNat::from_u64(s)).collect::<Result<_>>()?)?;
        let packed = pack_into(w, &slab)?;
        let (cursor, sign) = if c > 0 { (&mut pos_cursor, 1) } else { (&mut neg_cursor, -1) };
        for _ in 0..c.abs() {
            for p in &packed.placements {
                let mut offset = p.offset.clone();
                offset[dir - 1] += *cursor;
                out.push(Placement {
                    proto: p.proto,
                    offset,
                    coeff: sign * p.coeff,
                });
            }
            *cursor += len;
        }
        if out.len() > PLACEMENT_LIMIT {
            return Err(Error::Guard(format!("witness would exceed {PLACEMENT_LIMIT} placements")));
        }
    }
    Ok(TilingWitness::normalized(combined, out))
}

fn node_witness(
    der: &Derivation<FactoredNat>,
    protos: &[Brick<FactoredNat>],
    id: NodeId,
    memo: &mut FxHashMap<NodeId, TilingWitness>,
) -> Result<TilingWitness> {
    if let Some(w) = memo.get(&id) {
        return Ok(w.clone());
    }
    let w = match der.origin(id) {
        Origin::Proto(i) => TilingWitness {
            target: protos[i].clone(),
            placements: vec![Placement {
                proto: i,
                offset: vec![0; der.dim()],
                coeff: 1,
            }],
        },
        Origin::Comb { dir, left, right } => {
            let l = node_witness(der, protos, left, memo)?;
            let r = node_witness(der, protos, right, memo)?;
            combine_witness(dir, &[l, r])?
        }
    };
    memo.insert(id, w.clone());
    Ok(w)
}

/// A verified signed tiling of `t` by translates of `protos`, or `None` when
/// `t` is not tilable.
pub fn tile_witness(protos: &[Brick<FactoredNat>], t: &Brick<FactoredNat>) -> Result<Option<TilingWitness>> {
    let mut der = Derivation::new(protos)?;
    let minimal = der.minimal_ids_all(ClosureOptions::default())?;
    let mut chosen = None;
    for id in minimal {
        if der.divides(id, t)? {
            chosen = Some(id);
            break;
        }
    }
    let Some(m) = chosen else { return Ok(None) };
    let mut memo = FxHashMap::default();
    let wm = node_witness(&der, protos, m, &mut memo)?;
    let w = pack_into(&wm, t)?;
    if !verify_witness(&w, protos)? {
        return Err(Error::Assertion(format!("constructed witness for {t} does not verify")));
    }
    Ok(Some(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nb(s: &str) -> Brick<FactoredNat> {
        s.parse().unwrap()
    }

    fn place(proto: usize, offset: &[i64], coeff: i64) -> Placement {
        Placement {
            proto,
            offset: offset.to_vec(),
            coeff,
        }
    }

    #[test]
    fn bezout_examples() {
        assert_eq!(bezout(&[25, 9]).unwrap(), (1, vec![4, -11]));
        assert_eq!(bezout(&[4, 6]).unwrap(), (2, vec![-1, 1]));
        assert_eq!(bezout(&[6, 10, 15]).unwrap().0, 1);
        assert_eq!(bezout(&[8]).unwrap(), (8, vec![1]));
        assert_eq!(bezout(&[3, 12]).unwrap(), (3, vec![1, 0]));
        for a in 1..60u64 {
            for b in 1..60u64 {
                let (g, c) = bezout(&[a, b]).unwrap();
                assert_eq!(c[0] * a as i64 + c[1] * b as i64, g as i64);
                assert_eq!(a % g + b % g, 0);
            }
        }
    }

    #[test]
    fn trivial_and_packed() {
        let t = nb("3x8");
        let w = TilingWitness {
            target: t.clone(),
            placements: vec![place(0, &[0, 0], 1)],
        };
        assert!(verify_witness(&w, std::slice::from_ref(&t)).unwrap());
        assert_eq!(parallel_pack(&t, &t).unwrap().placements.len(), 1);
        let w = parallel_pack(&nb("2"), &nb("6")).unwrap();
        let offs: Vec<i64> = w.placements.iter().map(|p| p.offset[0]).collect();
        assert_eq!(offs, vec![0, 2, 4]);
        let w = parallel_pack(&nb("2x3"), &nb("4x3")).unwrap();
        assert_eq!(w.placements.len(), 2);
        assert!(verify_witness(&w, &[nb("2x3")]).unwrap());
        assert!(matches!(parallel_pack(&nb("2x2"), &nb("3x3")), Err(Error::NotDivisible(..))));
    }

    #[test]
    fn wrong_witnesses_fail() {
        let p = [nb("2x2")];
        let w = TilingWitness {
            target: nb("2x4"),
            placements: vec![place(0, &[0, 0], 1), place(0, &[0, 1], 1)],
        };
        // right volume, wrong cells
        assert!(!verify_witness(&w, &p).unwrap());
        let w = TilingWitness {
            target: nb("2x4"),
            placements: vec![place(0, &[0, 0], 1)],
        };
        assert!(!verify_witness(&w, &p).unwrap());
        let w = TilingWitness {
            target: nb("2x2"),
            placements: vec![place(3, &[0, 0], 1)],
        };
        assert!(!verify_witness(&w, &p).unwrap());
    }

    #[test]
    fn one_dimensional_combine() {
        let w4 = parallel_pack(&nb("4"), &nb("4")).unwrap();
        let mut w6 = parallel_pack(&nb("6"), &nb("6")).unwrap();
        w6.placements[0].proto = 1;
        let w = combine_witness(1, &[w4, w6]).unwrap();
        assert_eq!(w.target, nb("2"));
        assert_eq!(w.net_counts(), BTreeMap::from([(0, -1), (1, 1)]));
        assert!(verify_witness(&w, &[nb("4"), nb("6")]).unwrap());
    }

    #[test]
    fn two_dimensional_combine() {
        let a = parallel_pack(&nb("25x3"), &nb("25x3")).unwrap();
        let mut b = parallel_pack(&nb("9x8"), &nb("9x8")).unwrap();
        b.placements[0].proto = 1;
        let w = combine_witness(1, &[a, b]).unwrap();
        assert_eq!(w.target, nb("1x24"));
        // 4 slabs 25x24 of eight 25x3 bricks, 11 slabs 9x24 of three 9x8 bricks
        assert_eq!(w.net_counts(), BTreeMap::from([(0, 32), (1, -33)]));
        assert!(verify_witness(&w, &[nb("25x3"), nb("9x8")]).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let p = [nb("3x8"), nb("4x5"), nb("7x3")];
        let w = tile_witness(&p, &nb("3x1")).unwrap().unwrap();
        let back = TilingWitness::from_json(&w.to_json().unwrap()).unwrap();
        assert_eq!(back, w);
        let sorted = w.placements.windows(2).all(|x| (x[0].proto, &x[0].offset) < (x[1].proto, &x[1].offset));
        assert!(sorted);
    }

    #[test]
    fn grid_guard() {
        let p = [nb("1x1")];
        let w = TilingWitness {
            target: nb("10000x10000"),
            placements: vec![],
        };
        assert!(matches!(verify_witness(&w, &p), Ok(false)));
        let w = parallel_pack(&nb("1000x1000"), &nb("4000x4000")).unwrap();
        assert!(matches!(
            verify_witness(&w, &[nb("1000x1000")]),
            Err(Error::Guard(_))
        ));
    }
}
