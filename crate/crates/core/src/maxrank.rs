//! The worst-case cube proto-sets and the geometric maxrank table.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::brick::{rank, Brick};
use crate::error::{Error, Result};
use crate::numlat::{first_primes, FactoredNat};

/// Largest proto count for which the n! primes are generated at all.
pub const MAX_N: usize = 5;

/// The first n! primes, one per permutation of `1..=n` in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorstCaseSpec {
    pub n: usize,
    pub d: usize,
    pub perms: Vec<Vec<u32>>,
    pub primes: Vec<u64>,
}

impl WorstCaseSpec {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::Guard(format!("proto count {n} outside 1..={MAX_N}")));
        }
        if d == 0 {
            return Err(Error::Guard("dimension must be at least 1".into()));
        }
        let perms: Vec<Vec<u32>> = (1..=n as u32).permutations(n).collect();
        let primes = first_primes(perms.len());
        Ok(Self { n, d, perms, primes })
    }

    /// `Π_π p_π^{π(m)}` for `m` in `1..=n`.
    pub fn sidelength(&self, m: usize) -> FactoredNat {
        let factors = self.perms.iter().zip(&self.primes).map(|(pi, &p)| (p, pi[m - 1]));
        FactoredNat::from_factors(factors).expect("first_primes yields primes")
    }
}

pub fn worst_sidelengths(n: usize) -> Result<Vec<FactoredNat>> {
    let spec = WorstCaseSpec::new(n, 1)?;
    Ok((1..=n).map(|m| spec.sidelength(m)).collect())
}

/// The n cubes `(s^(m))^{×d}`.
pub fn worst_protoset(n: usize, d: usize) -> Result<Vec<Brick<FactoredNat>>> {
    let spec = WorstCaseSpec::new(n, d)?;
    (1..=n).map(|m| Brick::cube(spec.sidelength(m), d)).collect()
}

/// Whether `(n, d)` is within the default resource guard.
pub fn within_guard(n: usize, d: usize) -> bool {
    match n {
        0 => false,
        1..=4 => d <= 8,
        5 => d <= 2,
        _ => false,
    }
}

fn check_guard(n: usize, d: usize, allow_big: bool) -> Result<()> {
    if n == 0 || d == 0 {
        return Err(Error::Guard("n and d must be at least 1".into()));
    }
    if !allow_big && !within_guard(n, d) {
        return Err(Error::Guard(format!(
            "maxrank({n},{d}) is a long computation; pass the override to run it"
        )));
    }
    Ok(())
}

/// `rank(worst_protoset(n, d))`.
pub fn geometric_maxrank(n: usize, d: usize) -> Result<usize> {
    geometric_maxrank_with(n, d, false)
}

pub fn geometric_maxrank_with(n: usize, d: usize, allow_big: bool) -> Result<usize> {
    check_guard(n, d, allow_big)?;
    rank(&worst_protoset(n, d)?)
}

/// Rows `n = 1..=n_max`, columns `d = d_min..=d_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxrankTable {
    pub d_min: usize,
    pub d_max: usize,
    pub rows: Vec<MaxrankRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxrankRow {
    pub n: usize,
    pub values: Vec<usize>,
}

impl MaxrankTable {
    pub fn get(&self, n: usize, d: usize) -> Option<usize> {
        let row = self.rows.iter().find(|r| r.n == n)?;
        row.values.get(d.checked_sub(self.d_min)?).copied()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n");
        for d in self.d_min..=self.d_max {
            out.push_str(&format!(",d={d}"));
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.n.to_string());
            for v in &row.values {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Every cell is computed independently, so the cells run on the rayon pool.
pub fn maxrank_table(n_max: usize, d_min: usize, d_max: usize, allow_big: bool) -> Result<MaxrankTable> {
    if d_min == 0 || d_min > d_max {
        return Err(Error::Guard(format!("bad dimension range {d_min}..={d_max}")));
    }
    let cells: Vec<(usize, usize)> = (1..=n_max)
        .flat_map(|n| (d_min..=d_max).map(move |d| (n, d)))
        .collect();
    for &(n, d) in &cells {
        check_guard(n, d, allow_big)?;
    }
    let values: Vec<usize> = cells
        .par_iter()
        .map(|&(n, d)| geometric_maxrank_with(n, d, allow_big))
        .collect::<Result<_>>()?;
    let width = d_max - d_min + 1;
    let rows = values
        .chunks(width)
        .enumerate()
        .map(|(i, vs)| MaxrankRow { n: i + 1, values: vs.to_vec() })
        .collect();
    Ok(MaxrankTable { d_min, d_max, rows })
}
