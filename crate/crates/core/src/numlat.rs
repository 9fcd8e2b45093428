//! Positive integers in factored form.
//!
//! Divisibility makes the positive integers a distributive lattice with gcd as
//! meet and lcm as join. Keeping numbers factored turns both operations into
//! exponentwise min/max and keeps the worst-case sidelengths (products of many
//! primes) exact without big-integer arithmetic.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// A positive integer stored as its prime factorization.
///
/// Factors are kept sorted by prime with every exponent at least one, so two
/// values are equal exactly when their factor lists are equal.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FactoredNat {
    factors: Vec<(u64, u32)>,
}

impl FactoredNat {
    pub fn one() -> Self {
        Self::default()
    }

    /// Builds a value from `(prime, exponent)` pairs. Pairs may come in any
    /// order and repeated primes are merged; zero exponents are dropped.
    pub fn from_factors<I>(factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u32)>,
    {
        let mut merged: Vec<(u64, u32)> = Vec::new();
        for (p, e) in factors {
            if !is_prime(p) {
                return Err(Error::Parse(format!("{p} is not prime")));
            }
            if e == 0 {
                continue;
            }
            merged.push((p, e));
        }
        merged.sort_unstable();
        let mut factors: Vec<(u64, u32)> = Vec::with_capacity(merged.len());
        for (p, e) in merged {
            match factors.last_mut() {
                Some((q, f)) if *q == p => {
                    *f = f.checked_add(e).ok_or(Error::Overflow("exponent"))?;
                }
                _ => factors.push((p, e)),
            }
        }
        Ok(Self { factors })
    }

    /// Factors `n` by trial division. Fails for zero.
    pub fn from_u64(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parse("zero is not a positive integer".into()));
        }
        Ok(Self {
            factors: trial_factor(n),
        })
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent(&self, p: u64) -> u32 {
        self.factors
            .binary_search_by_key(&p, |&(q, _)| q)
            .map_or(0, |i| self.factors[i].1)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len().min(b.len()));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1.min(b[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        Self { factors: out }
    }

    pub fn lcm(&self, other: &Self) -> Self {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len().max(b.len()));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1.max(b[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self { factors: out }
    }

    /// True iff `self` divides `other`.
    pub fn divides(&self, other: &Self) -> bool {
        let b = &other.factors;
        let mut j = 0;
        for &(p, e) in &self.factors {
            while j < b.len() && b[j].0 < p {
                j += 1;
            }
            if j == b.len() || b[j].0 != p || b[j].1 < e {
                return false;
            }
            j += 1;
        }
        true
    }

    pub fn to_u64(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for &(p, e) in &self.factors {
            acc = acc.checked_mul(p.checked_pow(e)?)?;
        }
        Some(acc)
    }

    pub fn to_u128(&self) -> Option<u128> {
        let mut acc: u128 = 1;
        for &(p, e) in &self.factors {
            acc = acc.checked_mul(u128::from(p).checked_pow(e)?)?;
        }
        Some(acc)
    }

    pub fn to_biguint(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::from(1u32), |acc, &(p, e)| acc * BigUint::from(p).pow(e))
    }

    /// The factored literal `p1^e1*p2^e2*...`; `1` for the unit.
    pub fn render_factored(&self) -> String {
        if self.factors.is_empty() {
            return "1".to_string();
        }
        let parts: Vec<String> = self.factors.iter().map(|(p, e)| format!("{p}^{e}")).collect();
        parts.join("*")
    }
}

/// Parses a decimal literal or a factored literal `p1^e1*p2^e2*...` with
/// strictly increasing primes.
pub fn parse_nat(text: &str) -> Result<FactoredNat> {
    if text.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if text.bytes().all(|b| b.is_ascii_digit()) {
        let n: u64 = text
            .parse()
            .map_err(|_| Error::Parse(format!("decimal literal {text:?} does not fit in 64 bits")))?;
        return FactoredNat::from_u64(n);
    }
    if text.starts_with('-') {
        return Err(Error::Parse(format!("{text:?} is not positive")));
    }
    let mut factors = Vec::new();
    let mut last: Option<u64> = None;
    for part in text.split('*') {
        let (base, exp) = part
            .split_once('^')
            .ok_or_else(|| Error::Parse(format!("malformed factor {part:?} in {text:?}")))?;
        let p = parse_digits(base, text)?;
        let e = parse_digits(exp, text)?;
        let e = u32::try_from(e).map_err(|_| Error::Parse(format!("exponent too large in {text:?}")))?;
        if e == 0 {
            return Err(Error::Parse(format!("zero exponent in {text:?}")));
        }
        if !is_prime(p) {
            return Err(Error::Parse(format!("{p} is not prime in {text:?}")));
        }
        if last.is_some_and(|q| q >= p) {
            return Err(Error::Parse(format!("primes not strictly increasing in {text:?}")));
        }
        last = Some(p);
        factors.push((p, e));
    }
    Ok(FactoredNat { factors })
}

fn parse_digits(s: &str, whole: &str) -> Result<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("malformed literal {whole:?}")));
    }
    s.parse()
        .map_err(|_| Error::Parse(format!("number too large in {whole:?}")))
}

/// The factored literal, followed by the decimal value when it fits in 64 bits.
pub fn render_nat(n: &FactoredNat) -> (String, Option<String>) {
    (n.render_factored(), n.to_u64().map(|v| v.to_string()))
}

impl FromStr for FactoredNat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_nat(s)
    }
}

/// Decimal when the value fits in 64 bits, factored literal otherwise.
impl fmt::Display for FactoredNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_u64() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str(&self.render_factored()),
        }
    }
}

impl fmt::Debug for FactoredNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FactoredNat({})", self.render_factored())
    }
}

/// Numeric order.
impl Ord for FactoredNat {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        match (self.to_u128(), other.to_u128()) {
            (Some(a), Some(b)) => a.cmp(&b),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => self.to_biguint().cmp(&other.to_biguint()),
        }
    }
}

impl PartialOrd for FactoredNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    if n % 3 == 0 {
        return n == 3;
    }
    let mut k: u64 = 5;
    while k.saturating_mul(k) <= n {
        if n % k == 0 || n % (k + 2) == 0 {
            return false;
        }
        k += 6;
    }
    true
}

fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut k: u64 = 5;
    while k.saturating_mul(k) <= n {
        push(k, &mut n);
        push(k + 2, &mut n);
        k += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Incremental sieve of Eratosthenes; yields 2, 3, 5, ... without a bound.
#[derive(Debug, Default)]
pub struct Primes {
    // composite -> one of its prime factors, for composites above the cursor
    pending: HashMap<u64, u64>,
    next: u64,
}

impl Primes {
    pub fn new() -> Self {
        Self {
            pending: HashMap::new(),
            next: 2,
        }
    }
}

impl Iterator for Primes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            let q = self.next;
            self.next += 1;
            match self.pending.remove(&q) {
                None => {
                    self.pending.insert(q * q, q);
                    return Some(q);
                }
                Some(p) => {
                    let mut m = q + p;
                    while self.pending.contains_key(&m) {
                        m += p;
                    }
                    self.pending.insert(m, p);
                }
            }
        }
    }
}

pub fn first_primes(count: usize) -> Vec<u64> {
    Primes::new().take(count).collect()
}
