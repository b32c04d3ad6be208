use std::hash::BuildHasher;

use hashbrown::hash_table::{Entry, HashTable};
use hashbrown::HashSet;
use rustc_hash::FxBuildHasher;

/// Insertion-ordered set of fixed-width rows of residues below `modulus`.
///
/// When a whole row fits in 64 bits it is stored as a single packed word,
/// both in the order list and inline in the hash set; otherwise rows live
/// contiguously as `u32`s and the hash table stores row indices.
#[derive(Clone)]
pub(crate) struct MatrixArena {
    width: usize,
    storage: Storage,
    hasher: FxBuildHasher,
}

#[derive(Clone)]
enum Storage {
    Packed {
        bits: u32,
        codes: Vec<u64>,
        set: HashSet<u64, FxBuildHasher>,
    },
    Wide {
        rows: Vec<u32>,
        table: HashTable<u32>,
    },
}

fn pack(bits: u32, row: &[u32]) -> u64 {
    row.iter().fold(0u64, |acc, &e| (acc << bits) | e as u64)
}

fn unpack(bits: u32, mut code: u64, out: &mut [u32]) {
    let mask = (1u64 << bits) - 1;
    for slot in out.iter_mut().rev() {
        *slot = (code & mask) as u32;
        code >>= bits;
    }
}

impl MatrixArena {
    pub fn new(width: usize, modulus: u64) -> Self {
        let bits = 64 - (modulus - 1).max(1).leading_zeros();
        let storage = if width as u32 * bits <= 64 {
            Storage::Packed {
                bits,
                codes: Vec::new(),
                set: HashSet::default(),
            }
        } else {
            Storage::Wide {
                rows: Vec::new(),
                table: HashTable::new(),
            }
        };
        MatrixArena {
            width,
            storage,
            hasher: FxBuildHasher,
        }
    }

    pub fn len(&self) -> usize {
        match &self.storage {
            Storage::Packed { codes, .. } => codes.len(),
            Storage::Wide { table, .. } => table.len(),
        }
    }

    #[cfg(test)]
    pub fn is_packed(&self) -> bool {
        matches!(self.storage, Storage::Packed { .. })
    }

    pub fn read(&self, idx: usize, out: &mut [u32]) {
        match &self.storage {
            Storage::Packed { bits, codes, .. } => unpack(*bits, codes[idx], out),
            Storage::Wide { rows, .. } => {
                out.copy_from_slice(&rows[idx * self.width..(idx + 1) * self.width])
            }
        }
    }

    pub fn row(&self, idx: usize) -> Vec<u32> {
        let mut out = vec![0; self.width];
        self.read(idx, &mut out);
        out
    }

    /// Calls `f` on every row in insertion order until it returns `false`.
    pub fn visit(&self, mut f: impl FnMut(&[u32]) -> bool) {
        match &self.storage {
            Storage::Packed { bits, codes, .. } => {
                let mut buf = vec![0u32; self.width];
                for &c in codes {
                    unpack(*bits, c, &mut buf);
                    if !f(&buf) {
                        return;
                    }
                }
            }
            Storage::Wide { rows, .. } => {
                for r in rows.chunks_exact(self.width) {
                    if !f(r) {
                        return;
                    }
                }
            }
        }
    }

    pub fn contains(&self, row: &[u32]) -> bool {
        let w = self.width;
        match &self.storage {
            Storage::Packed { bits, set, .. } => set.contains(&pack(*bits, row)),
            Storage::Wide { rows, table } => table
                .find(self.hasher.hash_one(row), |&i| {
                    &rows[i as usize * w..(i as usize + 1) * w] == row
                })
                .is_some(),
        }
    }

    /// Inserts `row` if absent; returns whether it was new.
    pub fn insert(&mut self, row: &[u32]) -> bool {
        debug_assert_eq!(row.len(), self.width);
        let w = self.width;
        let hasher = &self.hasher;
        match &mut self.storage {
            Storage::Packed { bits, codes, set } => {
                let code = pack(*bits, row);
                let new = set.insert(code);
                if new {
                    codes.push(code);
                }
                new
            }
            Storage::Wide { rows, table } => {
                let idx = u32::try_from(rows.len() / w).expect("arena holds fewer than 2^32 rows");
                let slice = |i: u32| &rows[i as usize * w..(i as usize + 1) * w];
                let entry = table.entry(
                    hasher.hash_one(row),
                    |&i| slice(i) == row,
                    |&i| hasher.hash_one(slice(i)),
                );
                match entry {
                    Entry::Occupied(_) => false,
                    Entry::Vacant(e) => {
                        e.insert(idx);
                        rows.extend_from_slice(row);
                        true
                    }
                }
            }
        }
    }
}
