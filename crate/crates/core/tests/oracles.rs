//! The engine against a naive fixpoint over plain integers.

use std::collections::BTreeSet;

use proptest::prelude::*;

use brickrank::dedekind::dedekind_count;
use brickrank::maxrank::{geometric_maxrank, worst_sidelengths};
use brickrank::{archetypes, minimal_set, rank, Brick, FactoredNat};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Closes under every binary combine, one direction after the other, with
/// no pruning and no sharing; then keeps the divisibility-minimal boxes.
fn naive_minimal(protos: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
    let dim = protos[0].len();
    let mut set: BTreeSet<Vec<u64>> = protos.iter().cloned().collect();
    for dir in 0..dim {
        loop {
            let items: Vec<Vec<u64>> = set.iter().cloned().collect();
            let mut grew = false;
            for a in &items {
                for b in &items {
                    let c: Vec<u64> = (0..dim)
                        .map(|j| if j == dir { gcd(a[j], b[j]) } else { lcm(a[j], b[j]) })
                        .collect();
                    grew |= set.insert(c);
                }
            }
            if !grew {
                break;
            }
        }
    }
    let divides = |a: &Vec<u64>, b: &Vec<u64>| a.iter().zip(b).all(|(x, y)| y % x == 0);
    set.iter()
        .filter(|b| !set.iter().any(|a| a != *b && divides(a, b)))
        .cloned()
        .collect()
}

fn to_bricks(protos: &[Vec<u64>]) -> Vec<Brick<FactoredNat>> {
    protos
        .iter()
        .map(|s| Brick::new(s.iter().map(|&v| FactoredNat::from_u64(v).unwrap()).collect()).unwrap())
        .collect()
}

fn from_bricks<'a>(bricks: impl IntoIterator<Item = &'a Brick<FactoredNat>>) -> BTreeSet<Vec<u64>> {
    bricks
        .into_iter()
        .map(|b| b.sides().iter().map(|s| s.to_u64().unwrap()).collect())
        .collect()
}

fn protos(dim: usize, max_len: usize) -> impl Strategy<Value = Vec<Vec<u64>>> {
    let side = prop::sample::select(vec![1u64, 2, 3, 4, 5, 6, 7, 9, 10, 12, 14, 15, 21, 30]);
    prop::collection::vec(prop::collection::vec(side, dim), 1..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn minimal_set_matches_naive_2d(p in protos(2, 4)) {
        let got = minimal_set(&to_bricks(&p)).unwrap();
        prop_assert_eq!(from_bricks(got.iter()), naive_minimal(&p));
    }

    #[test]
    fn minimal_set_matches_naive_3d(p in protos(3, 3)) {
        let got = minimal_set(&to_bricks(&p)).unwrap();
        prop_assert_eq!(from_bricks(got.iter()), naive_minimal(&p));
    }

    #[test]
    fn worst_case_rank_bounds_random_sets(p in protos(2, 3)) {
        let n = p.len();
        prop_assert!(rank(&to_bricks(&p)).unwrap() <= geometric_maxrank(n, 2).unwrap());
    }

    #[test]
    fn worst_case_rank_bounds_random_3d_sets(p in protos(3, 2)) {
        prop_assert!(rank(&to_bricks(&p)).unwrap() <= geometric_maxrank(p.len(), 3).unwrap());
    }
}

#[test]
fn worked_examples_match_naive() {
    let fig1 = vec![vec![25, 3], vec![9, 8], vec![16, 5]];
    assert_eq!(naive_minimal(&fig1), BTreeSet::from([vec![1, 1]]));
    let rot = vec![vec![2, 3, 7], vec![3, 7, 2], vec![7, 2, 3]];
    let got = minimal_set(&to_bricks(&rot)).unwrap();
    assert_eq!(from_bricks(got.iter()), naive_minimal(&rot));
}

#[test]
fn worst_case_two_dimensional_rank_is_dedekind() {
    for n in 1..=4 {
        assert_eq!(geometric_maxrank(n, 2).unwrap(), dedekind_count(n).unwrap(), "n = {n}");
    }
}

#[test]
fn geometric_and_lattice_maxrank_agree() {
    for (n, d_max) in [(1, 6), (2, 6), (3, 6), (4, 4)] {
        for d in 2..=d_max {
            let g = geometric_maxrank(n, d).unwrap() as u128;
            assert_eq!(g, archetypes::lattice_maxrank(n, d).unwrap(), "n = {n}, d = {d}");
        }
    }
}

#[test]
fn worst_sidelengths_are_pairwise_incomparable() {
    for n in 2..=4 {
        let s = worst_sidelengths(n).unwrap();
        for (i, a) in s.iter().enumerate() {
            for (j, b) in s.iter().enumerate() {
                assert_eq!(a.divides(b), i == j);
            }
        }
    }
}
