//! Bit-parallel set kernels.
//!
//! Two fixed-width masks carry the model: [`StateSet`] over environment
//! states and [`FactSet`] over a vocabulary's fact indices (both capped at 64
//! members). [`IdSet`] is a growable bitset over statement ids within an
//! enumerated language.

use std::fmt;

macro_rules! mask64_newtype {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
        pub struct $name(pub u64);

        impl $name {
            pub const EMPTY: Self = Self(0);

            pub fn singleton(index: usize) -> Self {
                debug_assert!(index < 64);
                Self(1 << index)
            }

            pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
                let mut bits = 0u64;
                for i in indices {
                    debug_assert!(i < 64);
                    bits |= 1 << i;
                }
                Self(bits)
            }

            /// All of `0..n` set.
            pub fn full(n: usize) -> Self {
                debug_assert!(n <= 64);
                if n == 64 {
                    Self(u64::MAX)
                } else {
                    Self((1u64 << n) - 1)
                }
            }

            pub fn bits(self) -> u64 {
                self.0
            }

            pub fn is_empty(self) -> bool {
                self.0 == 0
            }

            pub fn len(self) -> usize {
                self.0.count_ones() as usize
            }

            pub fn contains(self, index: usize) -> bool {
                index < 64 && self.0 & (1 << index) != 0
            }

            pub fn insert(&mut self, index: usize) {
                debug_assert!(index < 64);
                self.0 |= 1 << index;
            }

            pub fn intersect(self, other: Self) -> Self {
                Self(self.0 & other.0)
            }

            pub fn union(self, other: Self) -> Self {
                Self(self.0 | other.0)
            }

            pub fn is_subset_of(self, other: Self) -> bool {
                self.0 & !other.0 == 0
            }

            pub fn iter(self) -> Mask64Iter {
                Mask64Iter(self.0)
            }

            pub fn indices(self) -> Vec<usize> {
                self.iter().collect()
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!(stringify!($name), "{{"))?;
                let mut first = true;
                for i in self.iter() {
                    if !first {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", i)?;
                    first = false;
                }
                write!(f, "}}")
            }
        }
    };
}

mask64_newtype!(
    /// A set of environment states (a fact's members, or a truth set).
    StateSet
);
mask64_newtype!(
    /// A set of fact indices within one vocabulary (a statement's form).
    FactSet
);

/// Ascending-index iterator over the set bits of a 64-bit mask.
pub struct Mask64Iter(u64);

impl Iterator for Mask64Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let i = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(i)
        }
    }
}

/// Iterates every submask of `set`, ascending, starting from 0 and ending
/// with `set` itself (the carry-rippler walk).
pub fn submasks(set: u64) -> SubmaskIter {
    SubmaskIter {
        set,
        next: Some(0),
    }
}

pub struct SubmaskIter {
    set: u64,
    next: Option<u64>,
}

impl Iterator for SubmaskIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let current = self.next?;
        let step = current.wrapping_sub(self.set) & self.set;
        self.next = if step == 0 { None } else { Some(step) };
        Some(current)
    }
}

const BLOCK_BITS: usize = 64;

/// A growable bitset over statement ids within one language.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IdSet {
    blocks: Vec<u64>,
}

impl IdSet {
    /// Empty set sized for ids `0..len`.
    pub fn with_capacity(len: usize) -> Self {
        Self {
            blocks: vec![0; len.div_ceil(BLOCK_BITS)],
        }
    }

    pub fn from_ids<I: IntoIterator<Item = usize>>(len: usize, ids: I) -> Self {
        let mut set = Self::with_capacity(len);
        for id in ids {
            set.insert(id);
        }
        set
    }

    /// Interprets the low 64 bits of a mask as ids (single-block sets only).
    pub fn from_block(len: usize, block: u64) -> Self {
        debug_assert!(len <= BLOCK_BITS);
        let mut set = Self::with_capacity(len);
        if !set.blocks.is_empty() {
            set.blocks[0] = block;
        } else if block != 0 {
            set.blocks.push(block);
        }
        set
    }

    /// The raw block for single-block sets (panics otherwise).
    pub fn as_block(&self) -> u64 {
        assert!(self.blocks.len() <= 1, "IdSet spans more than 64 ids");
        self.blocks.first().copied().unwrap_or(0)
    }

    pub fn insert(&mut self, id: usize) {
        let block = id / BLOCK_BITS;
        if block >= self.blocks.len() {
            self.blocks.resize(block + 1, 0);
        }
        self.blocks[block] |= 1 << (id % BLOCK_BITS);
    }

    pub fn contains(&self, id: usize) -> bool {
        self.blocks
            .get(id / BLOCK_BITS)
            .is_some_and(|b| b & (1 << (id % BLOCK_BITS)) != 0)
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn union_with(&mut self, other: &Self) {
        if other.blocks.len() > self.blocks.len() {
            self.blocks.resize(other.blocks.len(), 0);
        }
        for (dst, src) in self.blocks.iter_mut().zip(&other.blocks) {
            *dst |= src;
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a & b)
            .collect();
        Self { blocks }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.blocks.iter().enumerate().all(|(i, &b)| {
            b & !other.blocks.get(i).copied().unwrap_or(0) == 0
        })
    }

    /// Set equality ignoring trailing zero blocks.
    pub fn same_ids(&self, other: &Self) -> bool {
        let common = self.blocks.len().min(other.blocks.len());
        self.blocks[..common] == other.blocks[..common]
            && self.blocks[common..].iter().all(|&b| b == 0)
            && other.blocks[common..].iter().all(|&b| b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            Mask64Iter(block).map(move |i| bi * BLOCK_BITS + i)
        })
    }

    pub fn ids(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for IdSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
