use std::fmt;
use std::hash::Hash;

use crate::dedekind::Phrase;
use crate::numlat::FactoredNat;

/// A distributive lattice of sidelengths.
///
/// `meet` plays the role of gcd and `join` of lcm; `leq(a, b)` must hold
/// exactly when `meet(a, b) == a`. `Ord` is only a total order for canonical
/// output and is unrelated to `leq`.
pub trait Lattice: Clone + Eq + Hash + Ord + fmt::Display + fmt::Debug + Send + Sync {
    fn meet(&self, other: &Self) -> Self;
    fn join(&self, other: &Self) -> Self;
    fn leq(&self, other: &Self) -> bool;
}

impl Lattice for FactoredNat {
    fn meet(&self, other: &Self) -> Self {
        self.gcd(other)
    }

    fn join(&self, other: &Self) -> Self {
        self.lcm(other)
    }

    fn leq(&self, other: &Self) -> bool {
        self.divides(other)
    }
}

impl Lattice for Phrase {
    fn meet(&self, other: &Self) -> Self {
        Phrase::meet(self, other)
    }

    fn join(&self, other: &Self) -> Self {
        Phrase::join(self, other)
    }

    fn leq(&self, other: &Self) -> bool {
        Phrase::leq(self, other)
    }
}
