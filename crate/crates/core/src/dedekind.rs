//! The free distributive lattice on up to six generators.
//!
//! A [`Phrase`] is a reduced sum of words (an antichain of letter sets), which
//! is the same thing as a non-decreasing Boolean function other than the two
//! constants. Internally a phrase is its truth table over the six-letter
//! universe: bit `S` is set when the function is true on the letter set `S`.
//! Phrases over fewer letters embed unchanged, so `L[1] ⊂ L[2] ⊂ ... ⊂ L[6]`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Largest alphabet a phrase can use.
pub const MAX_LETTERS: usize = 6;

const NAMED: [char; 4] = ['w', 'x', 'y', 'z'];

/// A generator of the lattice, numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    pub fn new(index: usize) -> Result<Self> {
        if index == 0 || index > MAX_LETTERS {
            return Err(Error::Parse(format!(
                "letter index {index} outside 1..={MAX_LETTERS}"
            )));
        }
        Ok(Letter(index as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    fn bit(self) -> u8 {
        1 << (self.0 - 1)
    }

    /// `w, x, y, z` when `named`, otherwise `w1, w2, ...`.
    pub fn render(self, named: bool) -> String {
        if named && self.index() <= NAMED.len() {
            NAMED[self.index() - 1].to_string()
        } else {
            format!("w{}", self.0)
        }
    }
}

/// A non-empty set of letters, stored as a bitmask (bit `i` is letter `i+1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Word(u8);

impl Word {
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Result<Self> {
        let mask = letters.into_iter().fold(0u8, |m, l| m | l.bit());
        Self::from_mask(mask)
    }

    pub fn from_mask(mask: u8) -> Result<Self> {
        if mask == 0 || mask >> MAX_LETTERS != 0 {
            return Err(Error::Parse(format!("invalid word mask {mask:#b}")));
        }
        Ok(Word(mask))
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn letters(self) -> impl Iterator<Item = Letter> {
        (0..MAX_LETTERS as u8)
            .filter(move |i| self.0 & (1 << i) != 0)
            .map(|i| Letter(i + 1))
    }

    pub fn render(self, named: bool) -> String {
        self.letters().map(|l| l.render(named)).collect()
    }
}

/// Words ordered by size, then by their sorted letter indices.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        word_rank()[self.0 as usize].cmp(&word_rank()[other.0 as usize])
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn word_rank() -> &'static [u8; 64] {
    static RANK: OnceLock<[u8; 64]> = OnceLock::new();
    RANK.get_or_init(|| {
        let key = |m: u8| {
            let letters: Vec<u8> = (0..8).filter(|i| m & (1 << i) != 0).collect();
            (letters.len(), letters)
        };
        let mut masks: Vec<u8> = (1..64).collect();
        masks.sort_by_key(|&m| key(m));
        let mut rank = [0u8; 64];
        for (r, m) in masks.into_iter().enumerate() {
            rank[m as usize] = r as u8 + 1;
        }
        rank
    })
}

/// Bits `T` with `T ⊇ S`, for every letter set `S`.
const fn up_sets() -> [u64; 64] {
    let mut out = [0u64; 64];
    let mut s = 0;
    while s < 64 {
        let mut t = 0;
        while t < 64 {
            if t & s == s {
                out[s] |= 1 << t;
            }
            t += 1;
        }
        s += 1;
    }
    out
}

const UP: [u64; 64] = up_sets();

/// Bits `T` with letter `i` absent from `T`.
const WITHOUT: [u64; MAX_LETTERS] = {
    let mut out = [0u64; MAX_LETTERS];
    let mut i = 0;
    while i < MAX_LETTERS {
        let mut t = 0;
        while t < 64 {
            if t & (1 << i) == 0 {
                out[i] |= 1 << t;
            }
            t += 1;
        }
        i += 1;
    }
    out
};

/// An element of the free distributive lattice: a reduced, non-empty sum of
/// words. Equality is equality of the Boolean functions.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phrase(u64);

impl Phrase {
    pub fn letter(l: Letter) -> Self {
        Phrase(UP[l.bit() as usize])
    }

    /// The phrase for the generator with the given 1-based index.
    pub fn generator(index: usize) -> Result<Self> {
        Letter::new(index).map(Phrase::letter)
    }

    pub fn word(w: Word) -> Self {
        Phrase(UP[w.0 as usize])
    }

    /// The pure sum of the given letters.
    pub fn pure_sum(mask: u8) -> Result<Self> {
        if mask == 0 || mask >> MAX_LETTERS != 0 {
            return Err(Error::Empty("pure sum needs at least one letter"));
        }
        Ok((0..MAX_LETTERS as u8)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| Phrase(UP[1 << i]))
            .reduce(|a, b| a.join(&b))
            .expect("non-empty mask"))
    }

    /// Accepts a truth table only if it is monotone and not constant.
    pub fn from_truth_table(table: u64) -> Result<Self> {
        if table == 0 {
            return Err(Error::Parse("constant-0 function is not a phrase".into()));
        }
        if table & 1 != 0 {
            return Err(Error::Parse("constant-1 function is not a phrase".into()));
        }
        let monotone = (0..MAX_LETTERS).all(|i| {
            let shifted = (table & WITHOUT[i]) << (1u32 << i);
            shifted & !table == 0
        });
        if !monotone {
            return Err(Error::Parse("truth table is not monotone".into()));
        }
        Ok(Phrase(table))
    }

    pub fn truth_table(self) -> u64 {
        self.0
    }

    pub fn eval(self, true_letters: u8) -> bool {
        self.0 & (1 << (true_letters & 63)) != 0
    }

    fn minimal_points(self) -> u64 {
        let f = self.0;
        let mut covered = 0u64;
        for (i, mask) in WITHOUT.iter().enumerate() {
            covered |= (f & mask) << (1u32 << i);
        }
        f & !covered
    }

    /// The canonical words, in canonical order.
    pub fn words(self) -> Vec<Word> {
        let mut bits = self.minimal_points();
        let mut out = Vec::with_capacity(bits.count_ones() as usize);
        while bits != 0 {
            let s = bits.trailing_zeros() as u8;
            out.push(Word(s));
            bits &= bits - 1;
        }
        out.sort();
        out
    }

    pub fn word_count(self) -> usize {
        self.minimal_points().count_ones() as usize
    }

    /// Logical OR.
    pub fn join(&self, other: &Self) -> Self {
        Phrase(self.0 | other.0)
    }

    /// Logical AND.
    pub fn meet(&self, other: &Self) -> Self {
        Phrase(self.0 & other.0)
    }

    /// Pointwise implication.
    pub fn leq(&self, other: &Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Swaps sum and product: the reduced sum of the minimal transversals of
    /// this phrase's words.
    pub fn dual(&self) -> Self {
        let edges: Vec<u8> = self.words().into_iter().map(Word::mask).collect();
        let transversals = minimal_transversals(&edges);
        reduce(transversals.into_iter().map(Word)).expect("a phrase has a transversal")
    }

    pub fn is_pure_sum(&self) -> bool {
        self.words().iter().all(|w| w.len() == 1)
    }

    /// Letters used by the canonical words, as a bitmask.
    pub fn alphabet_mask(&self) -> u8 {
        self.words().iter().fold(0, |m, w| m | w.0)
    }

    pub fn alphabet(&self) -> BTreeSet<Letter> {
        Word(self.alphabet_mask()).letters().collect()
    }

    /// The sum of the letters in this phrase's alphabet.
    pub fn envelope(&self) -> Self {
        Phrase::pure_sum(self.alphabet_mask()).expect("phrases have letters")
    }

    /// Renders with `w, x, y, z` when `n <= 4`, else `w1..wn`.
    pub fn render(&self, n: usize) -> String {
        let named = n <= NAMED.len();
        let words: Vec<String> = self.words().into_iter().map(|w| w.render(named)).collect();
        words.join("+")
    }

    /// Evaluates the phrase in another lattice, sending `+` to join and
    /// juxtaposition to meet.
    pub fn eval_hom<L, F>(&self, assign: F) -> Result<L>
    where
        L: Lattice,
        F: Fn(Letter) -> Option<L>,
    {
        let mut acc: Option<L> = None;
        for w in self.words() {
            let mut term: Option<L> = None;
            for l in w.letters() {
                let v = assign(l).ok_or_else(|| Error::UnassignedLetter(l.render(true)))?;
                term = Some(match term {
                    None => v,
                    Some(t) => t.meet(&v),
                });
            }
            let term = term.expect("words are non-empty");
            acc = Some(match acc {
                None => term,
                Some(a) => a.join(&term),
            });
        }
        Ok(acc.expect("phrases are non-empty"))
    }
}

/// Builds the phrase for a sum of words, dropping every word that contains
/// another.
pub fn reduce<I: IntoIterator<Item = Word>>(words: I) -> Result<Phrase> {
    let table = words.into_iter().fold(0u64, |t, w| t | UP[w.0 as usize]);
    if table == 0 {
        return Err(Error::Empty("a phrase needs at least one word"));
    }
    Ok(Phrase(table))
}

pub fn join(a: &Phrase, b: &Phrase) -> Phrase {
    a.join(b)
}

pub fn meet(a: &Phrase, b: &Phrase) -> Phrase {
    a.meet(b)
}

pub fn leq(a: &Phrase, b: &Phrase) -> bool {
    a.leq(b)
}

pub fn dual(a: &Phrase) -> Phrase {
    a.dual()
}

pub fn is_pure_sum(a: &Phrase) -> bool {
    a.is_pure_sum()
}

pub fn phrase_alphabet(a: &Phrase) -> BTreeSet<Letter> {
    a.alphabet()
}

/// The fixed total order on phrases: fewer words first, then the sorted word
/// lists compared lexicographically.
pub fn cmp_phrase(a: &Phrase, b: &Phrase) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    a.word_count()
        .cmp(&b.word_count())
        .then_with(|| a.words().cmp(&b.words()))
}

impl Ord for Phrase {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_phrase(self, other)
    }
}

impl PartialOrd for Phrase {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimal hitting sets of a family of letter sets, by recursion on the
/// family: transversals of the tail are kept when they already meet the head
/// and otherwise extended by each letter of the head.
fn minimal_transversals(edges: &[u8]) -> Vec<u8> {
    let Some((&head, tail)) = edges.split_first() else {
        return vec![0];
    };
    let rest = minimal_transversals(tail);
    let mut out: Vec<u8> = Vec::new();
    for t in rest {
        if t & head != 0 {
            out.push(t);
        } else {
            let mut bits = head;
            while bits != 0 {
                let v = bits & bits.wrapping_neg();
                out.push(t | v);
                bits &= bits - 1;
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    let minimal: Vec<u8> = out
        .iter()
        .copied()
        .filter(|&t| !out.iter().any(|&s| s != t && s & t == s))
        .collect();
    minimal
}

/// All `D(n)` phrases over the first `n` letters, in canonical order.
///
/// The generators are closed under meet (giving the words), then the words are
/// closed under join.
pub fn enumerate_lattice(n: usize) -> Result<Vec<Phrase>> {
    let mut all: Vec<Phrase> = closure_over(n)?.into_iter().collect();
    all.sort();
    Ok(all)
}

/// `D(n)` by the same closure as [`enumerate_lattice`], without sorting.
pub fn dedekind_count(n: usize) -> Result<usize> {
    Ok(closure_over(n)?.len())
}

fn closure_over(n: usize) -> Result<FxHashSet<Phrase>> {
    if !(1..=MAX_LETTERS).contains(&n) {
        return Err(Error::Guard(format!(
            "enumerate_lattice supports 1 <= n <= {MAX_LETTERS}, got {n}"
        )));
    }
    let generators: Vec<Phrase> = (1..=n)
        .map(|i| Phrase::generator(i).expect("index in range"))
        .collect();
    let words = close(&generators, Phrase::meet);
    let words: Vec<Phrase> = words.into_iter().collect();
    Ok(close(&words, Phrase::join))
}

fn close(generators: &[Phrase], op: fn(&Phrase, &Phrase) -> Phrase) -> FxHashSet<Phrase> {
    let mut seen: FxHashSet<Phrase> = generators.iter().copied().collect();
    let mut work: Vec<Phrase> = generators.to_vec();
    while let Some(p) = work.pop() {
        for g in generators {
            let q = op(&p, g);
            if seen.insert(q) {
                work.push(q);
            }
        }
    }
    seen
}

/// Counts monotone Boolean functions on `n` variables other than the two
/// constants by checking every truth table.
pub fn monotone_count_oracle(n: usize) -> Result<u64> {
    if !(1..=4).contains(&n) {
        return Err(Error::Guard(format!(
            "monotone_count_oracle supports 1 <= n <= 4, got {n}"
        )));
    }
    let points = 1usize << n;
    let mut count = 0u64;
    for f in 0u64..(1u64 << points) {
        let value = |s: usize| f >> s & 1 == 1;
        let monotone = (0..points).all(|s| {
            (0..n).all(|i| s & (1 << i) != 0 || !value(s) || value(s | 1 << i))
        });
        let constant = f == 0 || f == (1u64 << points) - 1;
        if monotone && !constant {
            count += 1;
        }
    }
    Ok(count)
}

impl fmt::Display for Phrase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let top = 8 - self.alphabet_mask().leading_zeros() as usize;
        f.write_str(&self.render(top))
    }
}

impl fmt::Debug for Phrase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phrase({self})")
    }
}

impl FromStr for Phrase {
    type Err = Error;

    /// Accepts both letter conventions; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(Error::Parse("empty phrase".into()));
        }
        let mut words = Vec::new();
        for part in text.split('+') {
            words.push(parse_word(part, s)?);
        }
        reduce(words)
    }
}

fn parse_word(part: &str, whole: &str) -> Result<Word> {
    if part.is_empty() {
        return Err(Error::Parse(format!("empty word in {whole:?}")));
    }
    let chars: Vec<char> = part.chars().collect();
    let mut letters = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let mut j = i + 1;
        while j < chars.len() && chars[j].is_ascii_digit() {
            j += 1;
        }
        let letter = if j > i + 1 {
            if c != 'w' {
                return Err(Error::Parse(format!("indexed letters are written w<k>, in {whole:?}")));
            }
            let digits: String = chars[i + 1..j].iter().collect();
            let k: usize = digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad letter index in {whole:?}")))?;
            Letter::new(k)?
        } else {
            let k = NAMED
                .iter()
                .position(|&n| n == c)
                .ok_or_else(|| Error::Parse(format!("unexpected {c:?} in phrase {whole:?}")))?;
            Letter::new(k + 1)?
        };
        letters.push(letter);
        i = j;
    }
    Word::from_letters(letters)
}
