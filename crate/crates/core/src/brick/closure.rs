use rustc_hash::{FxHashMap, FxHashSet};
use smallvec::SmallVec;

use super::intern::Interner;
use super::{check_dim, check_dir, Brick};
use crate::error::{Error, Result};
use crate::lattice::Lattice;

type IBrick = SmallVec<[u32; 8]>;

pub type NodeId = u32;

/// How a node of a [`Derivation`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    /// The proto brick at this index of the input.
    Proto(usize),
    /// `cix(dir, left, right)`.
    Comb { dir: usize, left: NodeId, right: NodeId },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureOptions {
    /// Keep only the minimal elements while closing. The minimal elements of
    /// the result are unchanged because combining is monotone.
    pub prune: bool,
    /// Upper bound on the number of distinct bricks generated in one closure.
    pub limit: Option<usize>,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        Self {
            prune: true,
            limit: None,
        }
    }
}

/// A growing arena of bricks, each recording how it was combined from the
/// proto bricks.
#[derive(Debug, Clone)]
pub struct Derivation<L> {
    int: Interner<L>,
    dim: usize,
    nodes: Vec<IBrick>,
    origins: Vec<Origin>,
    index: FxHashMap<IBrick, NodeId>,
    protos: Vec<NodeId>,
}

impl<L: Lattice> Derivation<L> {
    pub fn new(protos: &[Brick<L>]) -> Result<Self> {
        let first = protos.first().ok_or(Error::Empty("no proto bricks given"))?;
        let mut der = Self {
            int: Interner::new(),
            dim: first.dim(),
            nodes: Vec::new(),
            origins: Vec::new(),
            index: FxHashMap::default(),
            protos: Vec::new(),
        };
        for (i, b) in protos.iter().enumerate() {
            check_dim(der.dim, b.dim())?;
            let ib: IBrick = b.sides().iter().map(|s| der.int.intern(s)).collect();
            let id = der.insert(ib, Origin::Proto(i));
            if !der.protos.contains(&id) {
                der.protos.push(id);
            }
        }
        Ok(der)
    }

    fn insert(&mut self, ib: IBrick, origin: Origin) -> NodeId {
        if let Some(&id) = self.index.get(&ib) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(ib.clone());
        self.origins.push(origin);
        self.index.insert(ib, id);
        id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Node ids of the distinct proto bricks.
    pub fn proto_ids(&self) -> Vec<NodeId> {
        self.protos.clone()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn origin(&self, id: NodeId) -> Origin {
        self.origins[id as usize]
    }

    pub fn brick(&self, id: NodeId) -> Brick<L> {
        let sides = self.nodes[id as usize].iter().map(|&s| self.int.value(s).clone()).collect();
        Brick { sides }
    }

    fn divides_ids(&self, a: &[u32], b: &[u32]) -> bool {
        a.iter().zip(b).all(|(&x, &y)| self.int.leq(x, y))
    }

    /// Whether node `id` divides `t`.
    pub fn divides(&mut self, id: NodeId, t: &Brick<L>) -> Result<bool> {
        check_dim(self.dim, t.dim())?;
        let node = self.nodes[id as usize].clone();
        Ok(node.iter().zip(t.sides()).all(|(&x, y)| self.int.value(x).leq(y)))
    }

    fn minimal_ids(&self, ids: &[NodeId]) -> Vec<NodeId> {
        let mut uniq: Vec<NodeId> = ids.to_vec();
        uniq.sort_unstable();
        uniq.dedup();
        uniq.iter()
            .copied()
            .filter(|&b| {
                !uniq.iter().any(|&a| {
                    a != b && self.divides_ids(&self.nodes[a as usize], &self.nodes[b as usize])
                })
            })
            .collect()
    }

    fn combine(&mut self, dir: usize, a: NodeId, b: NodeId) -> IBrick {
        let (x, y) = (self.nodes[a as usize].clone(), self.nodes[b as usize].clone());
        x.iter()
            .zip(&y)
            .enumerate()
            .map(|(j, (&s, &t))| {
                if j + 1 == dir {
                    self.int.meet(s, t)
                } else {
                    self.int.join(s, t)
                }
            })
            .collect()
    }

    /// Closes `input` under `cix(dir, ., .)`. Returns every generated node,
    /// or only the minimal ones when pruning.
    pub fn ext_dir(&mut self, dir: usize, input: &[NodeId], opts: ClosureOptions) -> Result<Vec<NodeId>> {
        check_dir(dir, self.dim)?;
        let gens = if opts.prune {
            self.minimal_ids(input)
        } else {
            let mut g = input.to_vec();
            g.sort_unstable();
            g.dedup();
            g
        };
        let mut seen: FxHashSet<IBrick> = gens.iter().map(|&g| self.nodes[g as usize].clone()).collect();
        // live[k] is None once a strictly smaller brick has been found
        let mut live: Vec<Option<NodeId>> = gens.iter().map(|&g| Some(g)).collect();
        let mut queue: Vec<usize> = (0..live.len()).collect();
        let mut head = 0;
        while head < queue.len() {
            let slot = queue[head];
            head += 1;
            let Some(x) = live[slot] else { continue };
            for &g in &gens {
                let cand = self.combine(dir, x, g);
                if seen.contains(&cand) {
                    continue;
                }
                if let Some(limit) = opts.limit {
                    if seen.len() >= limit {
                        return Err(Error::Guard(format!(
                            "closure exceeded {limit} bricks; enable pruning or raise the limit"
                        )));
                    }
                }
                seen.insert(cand.clone());
                if opts.prune {
                    let dominated = live
                        .iter()
                        .flatten()
                        .any(|&l| self.divides_ids(&self.nodes[l as usize], &cand));
                    if dominated {
                        continue;
                    }
                    for entry in live.iter_mut() {
                        if let Some(l) = *entry {
                            if self.divides_ids(&cand, &self.nodes[l as usize]) {
                                *entry = None;
                            }
                        }
                    }
                }
                let id = self.insert(cand, Origin::Comb { dir, left: x, right: g });
                live.push(Some(id));
                queue.push(live.len() - 1);
            }
        }
        Ok(live.into_iter().flatten().collect())
    }

    /// The minimal tilable set as node ids, in direction order `1..=dim`.
    pub fn minimal_ids_all(&mut self, opts: ClosureOptions) -> Result<Vec<NodeId>> {
        let mut ids = self.proto_ids();
        for dir in 1..=self.dim {
            ids = self.ext_dir(dir, &ids, opts)?;
        }
        Ok(self.minimal_ids(&ids))
    }
}
