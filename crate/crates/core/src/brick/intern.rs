use rustc_hash::FxHashMap;

use crate::lattice::Lattice;

/// Maps sidelengths to dense ids and memoizes the lattice operations on them.
///
/// The sidelengths met during one closure all lie in the sublattice generated
/// by the proto sidelengths, which is small, so every meet/join is computed
/// once and every comparison becomes a bit lookup.
#[derive(Debug, Clone)]
pub(crate) struct Interner<L> {
    values: Vec<L>,
    index: FxHashMap<L, u32>,
    meet: FxHashMap<u64, u32>,
    join: FxHashMap<u64, u32>,
    // leq[a] has bit b set iff values[a] <= values[b]
    leq: Vec<Vec<u64>>,
}

fn key(a: u32, b: u32) -> u64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    (u64::from(hi) << 32) | u64::from(lo)
}

impl<L: Lattice> Interner<L> {
    pub(crate) fn new() -> Self {
        Self {
            values: Vec::new(),
            index: FxHashMap::default(),
            meet: FxHashMap::default(),
            join: FxHashMap::default(),
            leq: Vec::new(),
        }
    }

    pub(crate) fn intern(&mut self, v: &L) -> u32 {
        if let Some(&id) = self.index.get(v) {
            return id;
        }
        let id = self.values.len() as u32;
        let words = (id as usize) / 64 + 1;
        for row in &mut self.leq {
            row.resize(words, 0);
        }
        let mut row = vec![0u64; words];
        for (u, other) in self.values.iter().enumerate() {
            if v.leq(other) {
                row[u / 64] |= 1 << (u % 64);
            }
            if other.leq(v) {
                self.leq[u][id as usize / 64] |= 1 << (id % 64);
            }
        }
        row[id as usize / 64] |= 1 << (id % 64);
        self.leq.push(row);
        self.values.push(v.clone());
        self.index.insert(v.clone(), id);
        id
    }

    pub(crate) fn value(&self, id: u32) -> &L {
        &self.values[id as usize]
    }

    #[inline]
    pub(crate) fn leq(&self, a: u32, b: u32) -> bool {
        self.leq[a as usize][b as usize / 64] >> (b % 64) & 1 == 1
    }

    pub(crate) fn meet(&mut self, a: u32, b: u32) -> u32 {
        if a == b {
            return a;
        }
        if let Some(&r) = self.meet.get(&key(a, b)) {
            return r;
        }
        let v = self.values[a as usize].meet(&self.values[b as usize]);
        let r = self.intern(&v);
        self.meet.insert(key(a, b), r);
        r
    }

    pub(crate) fn join(&mut self, a: u32, b: u32) -> u32 {
        if a == b {
            return a;
        }
        if let Some(&r) = self.join.get(&key(a, b)) {
            return r;
        }
        let v = self.values[a as usize].join(&self.values[b as usize]);
        let r = self.intern(&v);
        self.join.insert(key(a, b), r);
        r
    }
}
