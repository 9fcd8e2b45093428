//! Minimal tilable boxes for parallel-packed signed brick tilings.
//!
//! Sidelengths live in a distributive lattice: positive integers under
//! gcd/lcm ([`FactoredNat`]) or the free distributive lattice on a few
//! letters ([`Phrase`]). The brick engine is generic over both.

pub mod archetypes;
pub mod brick;
pub mod dedekind;
pub mod error;
pub mod lattice;
pub mod maxrank;
pub mod numlat;
pub mod witness;

pub use brick::{
    brick_divides, cix, comb, ext_all, ext_dir, ext_in_order, is_tilable, minimal_elements, minimal_set,
    minimal_set_with, rank, Brick, BrickAntichain, ClosureOptions,
};
pub use dedekind::{Letter, Phrase, Word};
pub use error::{Error, Result};
pub use lattice::Lattice;
pub use numlat::FactoredNat;
