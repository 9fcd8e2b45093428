//! Symbolic bricks over the free distributive lattice, the level-by-level
//! computation of the minimal bricks, archetypes and the rank polynomials.
//!
//! A level-`d` brick is stored as a `Brick<Phrase>` with `d + 1` sides: the
//! first `d` are ordinary sides and the last one stands for the infinite
//! envelope tail. The tail never is a combine direction, so it is joined in
//! every combine, and it compares like any other side.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::brick::{cix, ext_dir, minimal_elements, parse_paren_sides, Brick, ClosureOptions};
use crate::dedekind::{enumerate_lattice, Phrase, MAX_LETTERS};
use crate::error::{Error, Result};

/// Largest `n` whose certificate runs without the override.
pub const DEFAULT_MAX_N: usize = 4;

fn alphabet_union<'a>(sides: impl IntoIterator<Item = &'a Phrase>) -> u8 {
    sides.into_iter().fold(0, |m, s| m | s.alphabet_mask())
}

/// The pure sum over the union of the sides' alphabets.
pub fn envelope_of(b: &Brick<Phrase>) -> Phrase {
    Phrase::pure_sum(alphabet_union(b.sides())).expect("phrases have letters")
}

/// All sides share one alphabet.
pub fn is_balanced(b: &Brick<Phrase>) -> bool {
    let first = b.sides()[0].alphabet_mask();
    b.sides().iter().all(|s| s.alphabet_mask() == first)
}

/// `b × e^b`.
pub fn extend_brick(b: &Brick<Phrase>) -> Brick<Phrase> {
    let mut sides = b.sides().to_vec();
    sides.push(envelope_of(b));
    Brick::new(sides).expect("non-empty")
}

/// A brick followed by infinitely many copies of its envelope.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SymBrick {
    prefix: Vec<Phrase>,
    envelope: Phrase,
}

impl SymBrick {
    /// Trailing prefix entries equal to the envelope are absorbed into the tail.
    pub fn new(mut prefix: Vec<Phrase>, envelope: Phrase) -> Result<Self> {
        if !envelope.is_pure_sum() {
            return Err(Error::Parse(format!("envelope {envelope} is not a pure sum")));
        }
        let env_mask = envelope.alphabet_mask();
        if alphabet_union(&prefix) & !env_mask != 0 {
            return Err(Error::Parse(format!("sides use letters outside the envelope {envelope}")));
        }
        while prefix.last() == Some(&envelope) {
            prefix.pop();
        }
        Ok(Self { prefix, envelope })
    }

    pub fn cube(letter: usize) -> Result<Self> {
        Self::new(Vec::new(), Phrase::generator(letter)?)
    }

    /// Reads a level brick: the last side is the tail.
    pub fn from_level_brick(b: &Brick<Phrase>) -> Result<Self> {
        let (tail, prefix) = b.sides().split_last().expect("bricks are non-empty");
        Self::new(prefix.to_vec(), *tail)
    }

    /// The level-`d` form: the prefix padded with envelopes to `d` sides,
    /// followed by the tail.
    pub fn to_level_brick(&self, d: usize) -> Result<Brick<Phrase>> {
        if self.prefix.len() > d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: self.prefix.len(),
            });
        }
        let mut sides = self.prefix.clone();
        sides.resize(d + 1, self.envelope);
        Brick::new(sides)
    }

    pub fn prefix(&self) -> &[Phrase] {
        &self.prefix
    }

    pub fn envelope(&self) -> Phrase {
        self.envelope
    }

    pub fn is_balanced(&self) -> bool {
        let m = self.envelope.alphabet_mask();
        self.prefix.iter().all(|s| s.alphabet_mask() == m)
    }

    /// Number of sides different from the envelope.
    pub fn true_dim(&self) -> usize {
        self.prefix.iter().filter(|s| **s != self.envelope).count()
    }

    /// Sides with letters named for an `n`-letter universe, tail marked `*`.
    pub fn render(&self, n: usize) -> String {
        let mut out = String::new();
        for s in &self.prefix {
            out.push_str(&format!("({})x", s.render(n)));
        }
        out.push_str(&format!("({})*", self.envelope.render(n)));
        out
    }
}

fn top_letter(p: Phrase) -> usize {
    8 - p.alphabet_mask().leading_zeros() as usize
}

impl fmt::Display for SymBrick {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(top_letter(self.envelope)))
    }
}

impl FromStr for SymBrick {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_suffix('*')
            .ok_or_else(|| Error::Parse(format!("symbolic brick {s:?} must end with the tail '(e)*'")))?;
        let mut sides = parse_paren_sides(body)?;
        let envelope = sides.pop().expect("at least one side");
        Self::new(sides, envelope)
    }
}

/// The canonical form of a minimal brick up to permuting coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Archetype {
    envelope: Phrase,
    parts: Vec<(Phrase, u32)>,
}

impl Archetype {
    pub fn new(envelope: Phrase, parts: Vec<(Phrase, u32)>) -> Result<Self> {
        if !envelope.is_pure_sum() {
            return Err(Error::Parse(format!("archetype envelope {envelope} is not a pure sum")));
        }
        for (a, r) in &parts {
            if a.is_pure_sum() {
                return Err(Error::Parse(format!("archetype part {a} is a pure sum")));
            }
            if *r == 0 {
                return Err(Error::Parse("archetype multiplicities must be positive".into()));
            }
        }
        if parts.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Parse("archetype parts must be strictly increasing".into()));
        }
        Ok(Self { envelope, parts })
    }

    pub fn envelope(&self) -> Phrase {
        self.envelope
    }

    pub fn parts(&self) -> &[(Phrase, u32)] {
        &self.parts
    }

    /// `τ = Σ r_i`.
    pub fn true_dim(&self) -> usize {
        self.parts.iter().map(|&(_, r)| r as usize).sum()
    }

    /// The brick with the parts in canonical order.
    pub fn representative(&self) -> SymBrick {
        let prefix = self
            .parts
            .iter()
            .flat_map(|&(a, r)| std::iter::repeat(a).take(r as usize))
            .collect();
        SymBrick::new(prefix, self.envelope).expect("validated at construction")
    }

    pub fn render(&self, n: usize) -> String {
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|(a, r)| format!("({})^{r}", a.render(n)))
            .collect();
        format!("[{}; {}]", self.envelope.render(n), parts.join(","))
    }
}

impl fmt::Display for Archetype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(top_letter(self.envelope)))
    }
}

impl FromStr for Archetype {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("archetype {s:?} must look like [e; (a)^r,...]"));
        let inner = s.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
        let (env, rest) = inner.split_once(';').ok_or_else(bad)?;
        let envelope: Phrase = env.parse()?;
        let mut parts = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (phrase, r) = item.rsplit_once('^').ok_or_else(bad)?;
            let phrase = phrase.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
            let r: u32 = r.parse().map_err(|_| bad())?;
            parts.push((phrase.parse()?, r));
        }
        Self::new(envelope, parts)
    }
}

/// Groups the non-envelope sides by phrase.
pub fn archetype_of(b: &SymBrick) -> Result<Archetype> {
    if !b.is_balanced() {
        return Err(Error::Unbalanced(b.to_string()));
    }
    let mut counts: BTreeMap<Phrase, u32> = BTreeMap::new();
    for s in b.prefix.iter().filter(|s| **s != b.envelope) {
        *counts.entry(*s).or_default() += 1;
    }
    Archetype::new(b.envelope, counts.into_iter().collect())
}

/// `d! / (r_1! ⋯ r_K! (d − τ)!)`, zero when `d < τ`.
pub fn placement_count(a: &Archetype, d: usize) -> Result<u128> {
    let tau = a.true_dim();
    if d < tau {
        return Ok(0);
    }
    let mut left = d as u128;
    let mut total: u128 = 1;
    for &(_, r) in &a.parts {
        total = total
            .checked_mul(binomial(left, r as u128)?)
            .ok_or(Error::Overflow("placement count"))?;
        left -= r as u128;
    }
    Ok(total)
}

fn binomial(n: u128, k: u128) -> Result<u128> {
    let mut acc: u128 = 1;
    for i in 0..k.min(n - k) {
        // acc * (n - i) is divisible by (i + 1)
        acc = acc.checked_mul(n - i).ok_or(Error::Overflow("binomial"))? / (i + 1);
    }
    Ok(acc)
}

fn check_n(n: usize, allow_big: bool) -> Result<()> {
    if n == 0 || n > MAX_LETTERS {
        return Err(Error::Guard(format!("n must lie in 1..={MAX_LETTERS}, got {n}")));
    }
    if n > DEFAULT_MAX_N && !allow_big {
        return Err(Error::Guard(format!(
            "the certificate for n = {n} is a long computation; pass the override to run it"
        )));
    }
    Ok(())
}

/// The `n` one-letter cubes as level-0 bricks.
pub fn cube_level(n: usize) -> Result<Vec<Brick<Phrase>>> {
    (1..=n)
        .map(|k| Brick::new(vec![Phrase::generator(k)?]))
        .collect()
}

/// From the level-`d−1` minimal bricks to the level-`d` ones: extend each
/// brick, close under combining in direction `d`, keep the minimal elements.
pub fn next_minimal_level(prev: &[Brick<Phrase>], d: usize) -> Result<Vec<Brick<Phrase>>> {
    if prev.is_empty() {
        return Err(Error::Empty("previous level is empty"));
    }
    if prev.iter().any(|b| b.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: prev[0].dim(),
        });
    }
    let extended: Vec<Brick<Phrase>> = prev.iter().map(extend_brick).collect();
    let closed = ext_dir(d, &extended, ClosureOptions::default())?;
    Ok(minimal_elements(&closed)?.into_iter().collect())
}

/// One computed level of minimal bricks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub dimension: usize,
    pub bricks: Vec<SymBrick>,
}

impl Level {
    pub fn len(&self) -> usize {
        self.bricks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bricks.is_empty()
    }

    pub fn max_true_dim(&self) -> usize {
        self.bricks.iter().map(SymBrick::true_dim).max().unwrap_or(0)
    }

    pub fn level_bricks(&self) -> Result<Vec<Brick<Phrase>>> {
        self.bricks.iter().map(|b| b.to_level_brick(self.dimension)).collect()
    }

    pub fn contains(&self, b: &SymBrick) -> bool {
        self.bricks.binary_search(b).is_ok()
    }

    pub fn archetypes(&self) -> Result<Vec<Archetype>> {
        let set: BTreeSet<Archetype> = self.bricks.iter().map(archetype_of).collect::<Result<_>>()?;
        Ok(set.into_iter().collect())
    }

    fn from_level_bricks(dimension: usize, bricks: &[Brick<Phrase>]) -> Result<Self> {
        let mut out = Vec::with_capacity(bricks.len());
        for b in bricks {
            let sb = SymBrick::from_level_brick(b)?;
            if !sb.is_balanced() {
                return Err(Error::Assertion(format!(
                    "level {dimension} brick {sb} is minimal but not balanced"
                )));
            }
            if sb.envelope != envelope_of(b) {
                return Err(Error::Assertion(format!("level {dimension} brick {sb} has a foreign tail")));
            }
            out.push(sb);
        }
        out.sort();
        Ok(Self { dimension, bricks: out })
    }

    fn next(&self) -> Result<Self> {
        let d = self.dimension + 1;
        let bricks = next_minimal_level(&self.level_bricks()?, d)?;
        Self::from_level_bricks(d, &bricks)
    }
}

/// Levels `0..=d_max`, without the stopping rule.
pub fn compute_levels(n: usize, d_max: usize, allow_big: bool) -> Result<Vec<Level>> {
    check_n(n, allow_big)?;
    let mut levels = vec![Level::from_level_bricks(0, &cube_level(n)?)?];
    while levels.len() <= d_max {
        let next = levels.last().expect("non-empty").next()?;
        levels.push(next);
    }
    Ok(levels)
}

/// Progress report after each level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelSummary {
    pub dimension: usize,
    pub size: usize,
    pub max_true_dim: usize,
}

#[derive(Default)]
pub struct CertificateOptions<'a> {
    pub allow_big: bool,
    /// Directory for `level_<d>.json` checkpoints; existing ones are resumed.
    pub checkpoint_dir: Option<PathBuf>,
    pub progress: Option<&'a mut dyn FnMut(LevelSummary)>,
}

/// The computed levels up to the first one with no brick of full true
/// dimension, and the archetypes read off that final level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub n: usize,
    pub levels: Vec<Level>,
    pub max_true_dim: usize,
    pub archetypes: Vec<Archetype>,
}

/// On-disk form of one level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelFile {
    pub n: usize,
    pub dimension: usize,
    pub bricks: Vec<String>,
    pub max_true_dim: usize,
    pub archetypes: Vec<String>,
}

impl LevelFile {
    pub fn from_level(n: usize, level: &Level, max_so_far: usize) -> Result<Self> {
        Ok(Self {
            n,
            dimension: level.dimension,
            bricks: level.bricks.iter().map(|b| b.render(n)).collect(),
            max_true_dim: max_so_far,
            archetypes: level.archetypes()?.iter().map(|a| a.render(n)).collect(),
        })
    }

    pub fn to_level(&self) -> Result<Level> {
        let mut bricks: Vec<SymBrick> = self.bricks.iter().map(|s| s.parse()).collect::<Result<_>>()?;
        bricks.sort();
        Ok(Level {
            dimension: self.dimension,
            bricks,
        })
    }
}

pub fn level_path(dir: &Path, d: usize) -> PathBuf {
    dir.join(format!("level_{d}.json"))
}

fn load_checkpoints(dir: &Path, n: usize) -> Result<Vec<Level>> {
    let mut levels = Vec::new();
    loop {
        let path = level_path(dir, levels.len());
        if !path.exists() {
            return Ok(levels);
        }
        let file: LevelFile = serde_json::from_str(&fs::read_to_string(&path)?)?;
        if file.n != n || file.dimension != levels.len() {
            return Err(Error::Parse(format!(
                "{} does not hold level {} for n = {n}",
                path.display(),
                levels.len()
            )));
        }
        levels.push(file.to_level()?);
    }
}

fn is_final(level: &Level) -> bool {
    level.dimension > 0 && level.max_true_dim() < level.dimension
}

pub fn certificate(n: usize) -> Result<Certificate> {
    certificate_with(n, CertificateOptions::default())
}

/// Iterates the levels until one has no brick of true dimension equal to its
/// dimension; the largest true dimension must then be `n − 1`.
pub fn certificate_with(n: usize, mut opts: CertificateOptions<'_>) -> Result<Certificate> {
    check_n(n, opts.allow_big)?;
    let mut levels = match &opts.checkpoint_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            load_checkpoints(dir, n)?
        }
        None => Vec::new(),
    };
    if levels.is_empty() {
        levels.push(Level::from_level_bricks(0, &cube_level(n)?)?);
    }
    let mut max_so_far = levels.iter().map(Level::max_true_dim).max().unwrap_or(0);
    loop {
        let last = levels.last().expect("non-empty");
        if let Some(dir) = &opts.checkpoint_dir {
            let path = level_path(dir, last.dimension);
            if !path.exists() {
                let file = LevelFile::from_level(n, last, max_so_far)?;
                fs::write(&path, serde_json::to_string_pretty(&file)?)?;
            }
        }
        if let Some(progress) = opts.progress.as_mut() {
            progress(LevelSummary {
                dimension: last.dimension,
                size: last.len(),
                max_true_dim: last.max_true_dim(),
            });
        }
        if is_final(last) {
            break;
        }
        let next = last.next()?;
        max_so_far = max_so_far.max(next.max_true_dim());
        levels.push(next);
    }
    let final_level = levels.last().expect("non-empty");
    let max_true_dim = final_level.max_true_dim();
    if max_true_dim + 1 != n {
        return Err(Error::Assertion(format!(
            "maximum true dimension for n = {n} is {max_true_dim}, expected {}",
            n - 1
        )));
    }
    let archetypes = final_level.archetypes()?;
    Ok(Certificate {
        n,
        levels,
        max_true_dim,
        archetypes,
    })
}

/// Memoized [`certificate`] for the default guard.
pub fn certificate_cached(n: usize) -> Result<Arc<Certificate>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Certificate>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().expect("cache lock").get(&n) {
        return Ok(Arc::clone(c));
    }
    let c = Arc::new(certificate(n)?);
    cache.lock().expect("cache lock").insert(n, Arc::clone(&c));
    Ok(c)
}

impl Certificate {
    pub fn level(&self, d: usize) -> Option<&Level> {
        self.levels.get(d)
    }

    pub fn final_level(&self) -> &Level {
        self.levels.last().expect("certificates have levels")
    }

    /// `Σ_A placement_count(A, d)`.
    pub fn lattice_maxrank(&self, d: usize) -> Result<u128> {
        self.archetypes.iter().try_fold(0u128, |acc, a| {
            acc.checked_add(placement_count(a, d)?)
                .ok_or(Error::Overflow("lattice maxrank"))
        })
    }

    /// Number of archetypes of each true dimension `0..=max_true_dim`.
    pub fn arch_count_table(&self) -> Vec<usize> {
        let mut counts = vec![0; self.max_true_dim + 1];
        for a in &self.archetypes {
            counts[a.true_dim()] += 1;
        }
        counts
    }

    pub fn rank_polynomial(&self) -> RankPolynomial {
        RankPolynomial::from_archetypes(&self.archetypes)
    }

    /// `(d, Σ placements, |M_d|)` for every computed level.
    pub fn counting_identity(&self) -> Result<Vec<(usize, u128, usize)>> {
        self.levels
            .iter()
            .map(|l| Ok((l.dimension, self.lattice_maxrank(l.dimension)?, l.len())))
            .collect()
    }

    /// Whether the canonical brick of `a` is minimal at the final level.
    pub fn archetype_is_minimal(&self, a: &Archetype) -> bool {
        let level = self.final_level();
        a.true_dim() <= level.dimension && level.contains(&a.representative())
    }
}

pub fn lattice_maxrank(n: usize, d: usize) -> Result<u128> {
    certificate_cached(n)?.lattice_maxrank(d)
}

pub fn arch_count_table(n: usize) -> Result<Vec<usize>> {
    Ok(certificate_cached(n)?.arch_count_table())
}

pub fn rank_polynomial(n: usize) -> Result<RankPolynomial> {
    Ok(certificate_cached(n)?.rank_polynomial())
}

/// A polynomial in `d` with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankPolynomial {
    coeffs: Vec<BigRational>,
}

impl RankPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        Self { coeffs }
    }

    /// `Σ_A (τ; r_1..r_K) · binom(d, τ)`.
    pub fn from_archetypes(archetypes: &[Archetype]) -> Self {
        let top = archetypes.iter().map(Archetype::true_dim).max().unwrap_or(0);
        let mut coeffs = vec![BigRational::zero(); top + 1];
        for a in archetypes {
            let tau = a.true_dim();
            // multinomial(τ; r) / τ! = 1 / Π r_i!
            let mut denom = BigInt::one();
            for &(_, r) in a.parts() {
                for k in 1..=r {
                    denom *= BigInt::from(k);
                }
            }
            // d (d − 1) ⋯ (d − τ + 1)
            let mut falling = vec![BigInt::one()];
            for j in 0..tau {
                let mut next = vec![BigInt::zero(); falling.len() + 1];
                for (i, c) in falling.iter().enumerate() {
                    next[i + 1] += c;
                    next[i] -= c * BigInt::from(j);
                }
                falling = next;
            }
            for (i, c) in falling.into_iter().enumerate() {
                coeffs[i] += BigRational::new(c, denom.clone());
            }
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, d: i64) -> BigRational {
        let x = BigRational::from_integer(BigInt::from(d));
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &x + c)
    }

    /// Integer value at `d`, if the value is integral.
    pub fn eval_integer(&self, d: i64) -> Option<BigInt> {
        let v = self.eval(d);
        v.is_integer().then(|| v.to_integer())
    }
}

fn monomial(c: &BigInt, power: usize) -> String {
    let var = if power == 1 { "d".to_string() } else { format!("d^{power}") };
    let mag = c.abs();
    if mag.is_one() {
        var
    } else {
        format!("{mag}*{var}")
    }
}

/// `3 + 1/2*(d + 7*d^2)`: the constant, then the remaining terms over their
/// common denominator.
impl fmt::Display for RankPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c0 = &self.coeffs[0];
        let rest = &self.coeffs[1..];
        let denom = rest
            .iter()
            .fold(BigInt::one(), |l, c| num_integer::lcm(l, c.denom().clone()));
        let mut terms = String::new();
        for (i, c) in rest.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let scaled = (c * BigRational::from_integer(denom.clone())).to_integer();
            let body = monomial(&scaled, i + 1);
            if terms.is_empty() {
                if scaled.is_negative() {
                    terms.push('-');
                }
            } else {
                terms.push_str(if scaled.is_negative() { " - " } else { " + " });
            }
            terms.push_str(&body);
        }
        let constant = if c0.is_integer() {
            c0.to_integer().to_string()
        } else {
            format!("{}/{}", c0.numer(), c0.denom())
        };
        if terms.is_empty() {
            return f.write_str(&constant);
        }
        let scaled_terms = if denom.is_one() {
            terms
        } else {
            format!("1/{denom}*({terms})")
        };
        if c0.is_zero() {
            f.write_str(&scaled_terms)
        } else {
            write!(f, "{constant} + {scaled_terms}")
        }
    }
}

/// The nested brick `((w1 ⊻1 w2) ⊻2 w3) ⋯ ⊻_{n−1} wn` at level `n − 1`.
pub fn nested_brick(n: usize) -> Result<SymBrick> {
    let dim = n.saturating_sub(1);
    let cube = |k: usize| -> Result<Brick<Phrase>> { Brick::cube(Phrase::generator(k)?, dim + 1) };
    let mut acc = cube(1)?;
    for k in 2..=n {
        acc = cix(k - 1, &acc, &cube(k)?)?;
    }
    SymBrick::from_level_brick(&acc)
}

/// The nested brick is minimal and has true dimension `n − 1`.
pub fn check_nested_brick(n: usize) -> Result<(bool, SymBrick)> {
    let cert = certificate_cached(n)?;
    let b = nested_brick(n)?;
    let level = cert
        .level(n.saturating_sub(1))
        .ok_or_else(|| Error::Assertion(format!("level {} not computed", n - 1)))?;
    Ok((level.contains(&b) && b.true_dim() + 1 == n, b))
}

/// `α ↦ α × dual(α) × e` is a bijection from the phrases over `n` letters
/// onto the level-2 minimal bricks.
pub fn check_d2_bijection(n: usize) -> Result<(bool, usize)> {
    check_n(n, false)?;
    let levels = compute_levels(n, 2, false)?;
    let level2 = &levels[2];
    let mut image = Vec::new();
    for alpha in enumerate_lattice(n)? {
        let env = alpha.envelope();
        image.push(SymBrick::new(vec![alpha, alpha.dual()], env)?);
    }
    image.sort();
    image.dedup();
    Ok((image == level2.bricks, image.len()))
}

/// For `2 <= d < last level`, every level-`d` minimal brick stays minimal at
/// level `d + 1`. Returns the offending bricks.
pub fn minimality_breaks(cert: &Certificate) -> Vec<(usize, SymBrick)> {
    let mut bad = Vec::new();
    for pair in cert.levels.windows(2) {
        if pair[0].dimension < 2 {
            continue;
        }
        for b in &pair[0].bricks {
            if !pair[1].contains(b) {
                bad.push((pair[0].dimension, b.clone()));
            }
        }
    }
    bad
}

/// Outcome of the disjoint-alphabet experiment on one level.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DisjointQuery {
    pub pairs: usize,
    pub minimal: usize,
    pub counterexamples: Vec<(SymBrick, SymBrick, SymBrick)>,
}

/// For minimal `B, C` at level `d` with disjoint alphabets, tests whether
/// `B ⊻1 C` is minimal at level `d` as well.
pub fn disjoint_alphabet_query(level: &Level) -> Result<DisjointQuery> {
    let mut out = DisjointQuery::default();
    if level.dimension == 0 {
        return Ok(out);
    }
    for (i, b) in level.bricks.iter().enumerate() {
        for c in &level.bricks[i + 1..] {
            if b.envelope.alphabet_mask() & c.envelope.alphabet_mask() != 0 {
                continue;
            }
            out.pairs += 1;
            let joined = cix(1, &b.to_level_brick(level.dimension)?, &c.to_level_brick(level.dimension)?)?;
            let joined = SymBrick::from_level_brick(&joined)?;
            if level.contains(&joined) {
                out.minimal += 1;
            } else {
                out.counterexamples.push((b.clone(), c.clone(), joined));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Phrase {
        s.parse().unwrap()
    }

    fn fb(s: &str) -> Brick<Phrase> {
        s.parse().unwrap()
    }

    fn sb(s: &str) -> SymBrick {
        s.parse().unwrap()
    }

    #[test]
    fn envelope_and_balance() {
        assert_eq!(envelope_of(&fb("(xy+xz)x(zw+y)")), p("w+x+y+z"));
        assert_eq!(envelope_of(&fb("(w)x(w)x(w)")), p("w"));
        assert_eq!(envelope_of(&fb("(wx)x(w+x)")), p("w+x"));
        assert!(is_balanced(&fb("(wx)x(w+x)")));
        assert!(is_balanced(&fb("(w)x(w)")));
        assert!(!is_balanced(&fb("(xy+xz)x(zw+y)")));
    }

    #[test]
    fn extend_examples() {
        assert_eq!(extend_brick(&fb("(w)")), fb("(w)x(w)"));
        assert_eq!(extend_brick(&fb("(wx)x(w+x)")), fb("(wx)x(w+x)x(w+x)"));
        assert_eq!(extend_brick(&fb("(wxy)x(w+x+y)")), fb("(wxy)x(w+x+y)x(w+x+y)"));
    }

    #[test]
    fn symbrick_text_and_true_dim() {
        let b = sb("(wx)x(w+x)x(w+x)*");
        assert_eq!(b.to_string(), "(wx)x(w+x)*");
        assert_eq!(b.true_dim(), 1);
        assert_eq!(sb("(w)*").true_dim(), 0);
        assert_eq!(sb("(w)*"), SymBrick::cube(1).unwrap());
        assert_eq!(b.to_level_brick(3).unwrap(), fb("(wx)x(w+x)x(w+x)x(w+x)"));
        assert!(b.to_level_brick(0).is_err());
        // the interior envelope entry is positional and stays
        assert_eq!(sb("(w+x)x(wx)x(w+x)*").prefix().len(), 2);
        assert_eq!(sb("(w+x)x(wx)x(w+x)*").true_dim(), 1);
        for bad in ["(wx)", "(wx)x(wx)*", "(y)x(w)*", "wx*"] {
            assert!(bad.parse::<SymBrick>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn archetype_examples() {
        assert_eq!(archetype_of(&sb("(w)*")).unwrap().to_string(), "[w; ]");
        let a = archetype_of(&sb("(wx)x(w+x)*")).unwrap();
        assert_eq!(a.to_string(), "[w+x; (wx)^1]");
        assert_eq!(a, archetype_of(&sb("(w+x)x(wx)x(w+x)*")).unwrap());
        assert_eq!(a, "[w+x; (wx)^1]".parse().unwrap());
        let b = sb("(wy+x)x(wx+y)x(wy+x)x(w+x+y)*");
        let arch = archetype_of(&b).unwrap();
        assert_eq!(arch.parts().len(), 2);
        let mut rs: Vec<u32> = arch.parts().iter().map(|&(_, r)| r).collect();
        rs.sort();
        assert_eq!(rs, vec![1, 2]);
        let permuted = sb("(wx+y)x(wy+x)x(w+x+y)x(wy+x)x(w+x+y)*");
        assert_eq!(archetype_of(&permuted).unwrap(), arch);
        assert!(matches!(archetype_of(&sb("(wx)x(x)x(w+x)*")), Err(Error::Unbalanced(_))));
        assert!("[wx; ]".parse::<Archetype>().is_err());
        assert!("[w+x; (w+x)^1]".parse::<Archetype>().is_err());
    }

    #[test]
    fn placement_counts() {
        let cube: Archetype = "[w; ]".parse().unwrap();
        for d in 0..6 {
            assert_eq!(placement_count(&cube, d).unwrap(), 1);
        }
        let two: Archetype = "[w+x+y; (wx)^1,(wx+y)^1]".parse().unwrap();
        assert_eq!(placement_count(&two, 3).unwrap(), 6);
        assert_eq!(placement_count(&two, 1).unwrap(), 0);
        let rep: Archetype = "[w+x+y; (wx)^2,(wx+y)^1]".parse().unwrap();
        assert_eq!(placement_count(&rep, 4).unwrap(), 12);
    }

    #[test]
    fn small_certificates() {
        let c1 = certificate(1).unwrap();
        assert_eq!(c1.max_true_dim, 0);
        assert_eq!(c1.archetypes.len(), 1);
        let c2 = certificate(2).unwrap();
        assert_eq!(c2.max_true_dim, 1);
        assert_eq!(c2.levels[2].len(), 4);
        assert_eq!(c2.arch_count_table(), vec![2, 1]);
        assert_eq!(c2.rank_polynomial().to_string(), "2 + d");
        assert_eq!(certificate(1).unwrap().rank_polynomial().to_string(), "1");
    }

    #[test]
    fn polynomial_rendering() {
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        let p = RankPolynomial::new(vec![r(4, 1), r(-112, 6), r(57, 6), r(121, 6)]);
        assert_eq!(p.to_string(), "4 + 1/6*(-112*d + 57*d^2 + 121*d^3)");
        let q = RankPolynomial::new(vec![r(5, 1), r(29898, 24), r(-81241, 24), r(48066, 24), r(3901, 24)]);
        assert_eq!(
            q.to_string(),
            "5 + 1/24*(29898*d - 81241*d^2 + 48066*d^3 + 3901*d^4)"
        );
        assert_eq!(RankPolynomial::new(vec![r(0, 1), r(1, 1)]).to_string(), "d");
        assert_eq!(p.eval_integer(3), Some(BigInt::from(578)));
    }

    #[test]
    fn level_file_round_trip() {
        let c = certificate(2).unwrap();
        for level in &c.levels {
            let file = LevelFile::from_level(2, level, 1).unwrap();
            let json = serde_json::to_string(&file).unwrap();
            let back: LevelFile = serde_json::from_str(&json).unwrap();
            assert_eq!(&back.to_level().unwrap(), level);
        }
    }
}
