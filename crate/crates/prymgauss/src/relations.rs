//! Degree vectors, the induced block structure on ⟦1,2g⟧, and the relation set Rel_d̲.
//!
//! A degree vector d̲ = (d₁,…,d_n) splits ⟦1,2g⟧ (g = Σd_k) into consecutive blocks of
//! sizes 2d₁,…,2d_n. A relation is an index set meeting block k in exactly d_k indices;
//! there are ∏ C(2d_k, d_k) of them. Indices are 0-based internally and 1-based on every
//! external surface.

use alloc::vec::Vec;
use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// d̲ = (d₁,…,d_n), all parts ≥ 1. Block k covers indices `[2d^{k-1}, 2d^k)` with
/// d^k the prefix sums and d^0 = 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<u32>", into = "Vec<u32>"))]
pub struct DegreeVector {
    parts: Vec<u32>,
}

impl TryFrom<Vec<u32>> for DegreeVector {
    type Error = Error;
    fn try_from(parts: Vec<u32>) -> Result<Self> {
        DegreeVector::new(parts)
    }
}

impl From<DegreeVector> for Vec<u32> {
    fn from(d: DegreeVector) -> Vec<u32> {
        d.parts
    }
}

impl DegreeVector {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidDegreeVector);
        }
        Ok(DegreeVector { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn num_blocks(&self) -> usize {
        self.parts.len()
    }

    /// g = Σ d_k.
    pub fn genus(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// 2g, the number of indices.
    pub fn index_count(&self) -> usize {
        2 * self.genus() as usize
    }

    /// Start offset (0-based) of block k.
    pub fn block_start(&self, k: usize) -> usize {
        2 * self.parts[..k].iter().sum::<u32>() as usize
    }

    /// 0-based index range of block k.
    pub fn block_range(&self, k: usize) -> core::ops::Range<usize> {
        let s = self.block_start(k);
        s..s + 2 * self.parts[k] as usize
    }

    /// Sorted copy of the parts, largest last.
    pub fn sorted_parts(&self) -> Vec<u32> {
        let mut p = self.parts.clone();
        p.sort_unstable();
        p
    }
}

/// A relation: sorted 0-based index set with |I ∩ block_k| = d_k.
/// Serializes as a sorted 1-based integer array.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<u32>", into = "Vec<u32>"))]
pub struct Relation {
    indices: Vec<u16>,
}

impl TryFrom<Vec<u32>> for Relation {
    type Error = Error;
    fn try_from(one_based: Vec<u32>) -> Result<Self> {
        let mut indices = Vec::with_capacity(one_based.len());
        let mut prev: i64 = 0;
        for &i in &one_based {
            if i == 0 || i64::from(i) <= prev || i > u16::MAX as u32 + 1 {
                return Err(Error::InvalidRelation);
            }
            prev = i64::from(i);
            indices.push((i - 1) as u16);
        }
        Ok(Relation { indices })
    }
}

impl From<Relation> for Vec<u32> {
    fn from(r: Relation) -> Vec<u32> {
        r.indices.iter().map(|&i| u32::from(i) + 1).collect()
    }
}

impl Relation {
    /// Builds a relation from 0-based indices, checking the per-block counts.
    pub fn new(d: &DegreeVector, mut indices: Vec<u16>) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        let r = Relation { indices };
        if !r.is_valid_for(d) {
            return Err(Error::InvalidRelation);
        }
        Ok(r)
    }

    /// 0-based sorted indices.
    pub fn indices(&self) -> &[u16] {
        &self.indices
    }

    /// 1-based sorted indices, the external form.
    pub fn indices_one_based(&self) -> Vec<u32> {
        self.indices.iter().map(|&i| u32::from(i) + 1).collect()
    }

    pub fn is_valid_for(&self, d: &DegreeVector) -> bool {
        if self.indices.iter().any(|&i| i as usize >= d.index_count()) {
            return false;
        }
        for k in 0..d.num_blocks() {
            let range = d.block_range(k);
            let in_block = self
                .indices
                .iter()
                .filter(|&&i| range.contains(&(i as usize)))
                .count();
            if in_block != d.parts()[k] as usize {
                return false;
            }
        }
        true
    }
}

/// |Rel_d̲| = ∏ C(2d_k, d_k), exactly.
pub fn relation_count(d: &DegreeVector) -> BigUint {
    d.parts().iter().fold(BigUint::one(), |acc, &dk| {
        acc * crate::formulas::binom(2 * dk as i64, dk as i64)
    })
}

/// Number of choices for the first block, C(2d₁, d₁); the shard count for
/// [`enumerate_relations_shard`].
pub fn first_block_choice_count(d: &DegreeVector) -> u64 {
    let c = crate::formulas::binom(2 * d.parts()[0] as i64, d.parts()[0] as i64);
    // d₁ ≤ 32 is in scope, so this fits
    c.try_into().unwrap_or(u64::MAX)
}

/// ⟦1,2g⟧ ∖ I; again a relation since every block has size 2d_k.
pub fn complement(d: &DegreeVector, rel: &Relation) -> Relation {
    let inside: alloc::collections::BTreeSet<u16> = rel.indices.iter().copied().collect();
    let indices = (0..d.index_count() as u16)
        .filter(|i| !inside.contains(i))
        .collect();
    Relation { indices }
}

/// Iterator over the k-subsets of `0..n` in lexicographic order.
#[derive(Debug, Clone)]
pub(crate) struct Combinations {
    n: usize,
    state: Option<Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        let state = if k <= n { Some((0..k).collect()) } else { None };
        Combinations { n, state }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.state.take()?;
        let k = current.len();
        let mut succ = current.clone();
        // find rightmost position that can advance
        let mut i = k;
        loop {
            if i == 0 {
                break; // exhausted
            }
            i -= 1;
            if succ[i] < self.n - (k - i) {
                succ[i] += 1;
                for j in i + 1..k {
                    succ[j] = succ[j - 1] + 1;
                }
                self.state = Some(succ);
                break;
            }
        }
        Some(current)
    }
}

/// Yields every relation exactly once, lexicographically in the per-block choices
/// (block 1 outermost).
pub fn enumerate_relations(d: &DegreeVector) -> RelationIter {
    RelationIter::new(d, None)
}

/// The sub-iterator with the first block's choice pinned to `first_choice`
/// (its lexicographic rank, `0..first_block_choice_count(d)`). The shards for
/// distinct ranks partition Rel_d̲, so consumers can fan out over them.
pub fn enumerate_relations_shard(d: &DegreeVector, first_choice: u64) -> RelationIter {
    RelationIter::new(d, Some(first_choice))
}

pub struct RelationIter {
    d: DegreeVector,
    /// per-block combination iterators, current choices; None once exhausted
    iters: Vec<Combinations>,
    current: Option<Vec<Vec<usize>>>,
    pin_first: bool,
}

impl RelationIter {
    fn new(d: &DegreeVector, first_choice: Option<u64>) -> Self {
        let mut iters: Vec<Combinations> = d
            .parts()
            .iter()
            .map(|&dk| Combinations::new(2 * dk as usize, dk as usize))
            .collect();
        let mut current = Vec::with_capacity(iters.len());
        let mut dead = false;
        for (k, it) in iters.iter_mut().enumerate() {
            if k == 0 {
                if let Some(rank) = first_choice {
                    let mut skipped = it.by_ref().skip(rank as usize);
                    match skipped.next() {
                        Some(c) => current.push(c),
                        None => dead = true,
                    }
                    continue;
                }
            }
            match it.next() {
                Some(c) => current.push(c),
                None => dead = true,
            }
        }
        RelationIter {
            d: d.clone(),
            iters,
            current: if dead { None } else { Some(current) },
            pin_first: first_choice.is_some(),
        }
    }

    fn assemble(&self, choices: &[Vec<usize>]) -> Relation {
        let mut indices = Vec::with_capacity(self.d.genus() as usize);
        for (k, choice) in choices.iter().enumerate() {
            let start = self.d.block_start(k);
            for &off in choice {
                indices.push((start + off) as u16);
            }
        }
        Relation { indices }
    }
}

impl Iterator for RelationIter {
    type Item = Relation;

    fn next(&mut self) -> Option<Relation> {
        let snapshot = self.current.clone()?;
        let rel = self.assemble(&snapshot);
        let choices = self.current.as_mut().expect("checked above");
        // advance, last block fastest; block 0 frozen when sharded
        let floor = usize::from(self.pin_first);
        let mut k = choices.len();
        loop {
            if k == floor {
                self.current = None;
                break;
            }
            k -= 1;
            if let Some(next) = self.iters[k].next() {
                choices[k] = next;
                break;
            }
            self.iters[k] =
                Combinations::new(2 * self.d.parts()[k] as usize, self.d.parts()[k] as usize);
            choices[k] = self.iters[k].next().expect("block has at least one choice");
        }
        Some(rel)
    }
}
