//! Maximizing (or hitting a target value of) 𝔛 over zero-sum, off-diagonal
//! configurations in a finite abelian group.
//!
//! Exhaustive mode enumerates configurations up to the cheap symmetries (in-block
//! order, equal-degree block order, negation and unit-multiplier automorphisms) and
//! certifies its maximum; local search is steepest-ascent over single-point
//! replacements with the zero-sum constraint maintained by re-solving a dependent
//! point, and is bit-reproducible for a fixed seed.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use num_traits::ToPrimitive;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::{AbelianGroup, GroupElement};
use crate::counting::{count_xi, satisfied_relations, Configuration, CountMethod};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::lattice::build_relation_module;
use crate::relations::{Combinations, DegreeVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SearchMode {
    Exhaustive,
    LocalSearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SearchBudget {
    /// Exhaustive mode refuses to start above this many estimated candidates.
    pub exhaustive_ceiling: u64,
    pub restarts: u32,
    pub steps_per_restart: u32,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            exhaustive_ceiling: 20_000_000,
            restarts: 64,
            steps_per_restart: 256,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SymmetryOptions {
    pub negation: bool,
    pub unit_automorphisms: bool,
    /// Unit-multiplier orbit pruning is applied only when |G| is at most this.
    pub automorphism_order_limit: u128,
}

impl Default for SymmetryOptions {
    fn default() -> Self {
        SymmetryOptions {
            negation: true,
            unit_automorphisms: true,
            automorphism_order_limit: 1024,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchSpec {
    pub group: AbelianGroup,
    pub degree: DegreeVector,
    pub mode: SearchMode,
    #[cfg_attr(feature = "serde", serde(default))]
    pub target: Option<u64>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub budget: SearchBudget,
    #[cfg_attr(feature = "serde", serde(default))]
    pub seed: u64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub symmetry: SymmetryOptions,
}

impl SearchSpec {
    pub fn exhaustive(group: AbelianGroup, degree: DegreeVector) -> Self {
        SearchSpec {
            group,
            degree,
            mode: SearchMode::Exhaustive,
            target: None,
            budget: SearchBudget::default(),
            seed: 0,
            symmetry: SymmetryOptions::default(),
        }
    }

    pub fn local(group: AbelianGroup, degree: DegreeVector, seed: u64) -> Self {
        SearchSpec {
            group,
            degree,
            mode: SearchMode::LocalSearch,
            target: None,
            budget: SearchBudget::default(),
            seed,
            symmetry: SymmetryOptions::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.group.is_finite() {
            return Err(Error::InfiniteGroup);
        }
        if let Some(t) = self.target {
            if t % 2 != 0 {
                return Err(Error::OddTarget(t));
            }
        }
        Ok(())
    }
}

/// A certified or best-found witness. `exhaustive` records whether `best_xi` is the
/// maximum over the whole space; the witness is always re-counted by the naive
/// method, off-diagonal and zero-sum before being returned.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchResult {
    pub best_xi: u64,
    pub witness: Configuration,
    pub exhaustive: bool,
    pub visited: u64,
    pub module_rank: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FindOutcome {
    Found(SearchResult),
    /// `exhaustive` = true means certified nonexistence (full enumeration, or the
    /// upper bound rules the target out); otherwise only budget exhaustion.
    NotFound {
        exhaustive: bool,
        visited: u64,
        reason: String,
    },
}

/// Element-index view of one candidate: blocks of indices into the group's
/// element enumeration.
type Blocks = Vec<Vec<usize>>;

struct Ctx {
    group: AbelianGroup,
    degree: DegreeVector,
    elems: Vec<GroupElement>,
    index_of: BTreeMap<GroupElement, usize>,
    /// permutations of element indices to minimize over (identity excluded)
    maps: Vec<Vec<usize>>,
}

impl Ctx {
    fn new(spec: &SearchSpec) -> Result<Self> {
        spec.validate()?;
        let group = spec.group.clone();
        let elems: Vec<GroupElement> = group.enumerate_elements()?.collect();
        let index_of: BTreeMap<GroupElement, usize> = elems
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let mut maps: Vec<Vec<usize>> = Vec::new();
        let order = group.order().unwrap_or(u128::MAX);
        if spec.symmetry.unit_automorphisms && order <= spec.symmetry.automorphism_order_limit {
            maps = unit_multiplier_maps(&group, &elems, &index_of);
        } else if spec.symmetry.negation {
            let neg: Vec<usize> = elems
                .iter()
                .map(|e| index_of[&group.neg(e).expect("same group")])
                .collect();
            if neg.iter().enumerate().any(|(i, &j)| i != j) {
                maps.push(neg);
            }
        }
        Ok(Ctx {
            group,
            degree: spec.degree.clone(),
            elems,
            index_of,
            maps,
        })
    }

    fn configuration(&self, blocks: &Blocks) -> Configuration {
        let points: Vec<GroupElement> = blocks
            .iter()
            .flatten()
            .map(|&i| self.elems[i].clone())
            .collect();
        Configuration::new(self.group.clone(), self.degree.clone(), points)
            .expect("candidate blocks have the right sizes")
    }

    /// Blocks with each block sorted and blocks of equal degree sorted among
    /// themselves (at their original positions).
    fn canonical_key(&self, blocks: &Blocks) -> Blocks {
        let mut out: Blocks = blocks.clone();
        for b in &mut out {
            b.sort_unstable();
        }
        let parts = self.degree.parts();
        let mut by_d: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (k, &d) in parts.iter().enumerate() {
            by_d.entry(d).or_default().push(k);
        }
        for positions in by_d.values() {
            let mut group_blocks: Vec<Vec<usize>> =
                positions.iter().map(|&k| out[k].clone()).collect();
            group_blocks.sort();
            for (&k, b) in positions.iter().zip(group_blocks) {
                out[k] = b;
            }
        }
        out
    }

    /// Sum of every point of the selected blocks.
    fn points_sum(&self, blocks: &Blocks, which: &[usize]) -> GroupElement {
        let mut s = self.group.identity();
        for &j in which {
            for &i in &blocks[j] {
                s = self.group.add(&s, &self.elems[i]).expect("same group");
            }
        }
        s
    }

    /// Sums of all size-`take` in-block choices of one block.
    fn block_choice_sums(&self, block: &[usize], take: usize) -> Vec<GroupElement> {
        Combinations::new(block.len(), take)
            .map(|choice| {
                self.group
                    .sum(choice.iter().map(|&i| &self.elems[block[i]]))
                    .expect("same group")
            })
            .collect()
    }

    /// Multiplicity table of joint choice sums over the selected blocks.
    fn untouched_sums_table(&self, blocks: &Blocks, which: &[usize]) -> BTreeMap<GroupElement, u64> {
        let mut table = BTreeMap::new();
        table.insert(self.group.identity(), 1u64);
        for &j in which {
            let take = self.degree.parts()[j] as usize;
            let sums = self.block_choice_sums(&blocks[j], take);
            let mut next: BTreeMap<GroupElement, u64> = BTreeMap::new();
            for (s, n) in &table {
                for t in &sums {
                    *next
                        .entry(self.group.add(s, t).expect("same group"))
                        .or_insert(0) += n;
                }
            }
            table = next;
        }
        table
    }

    /// Joint choices of the touched blocks whose sum cancels against the table.
    fn count_against_table(
        &self,
        table: &BTreeMap<GroupElement, u64>,
        touched: &[(&Vec<usize>, usize)],
    ) -> u64 {
        match touched {
            [(block, take)] => self
                .block_choice_sums(block, *take)
                .iter()
                .map(|s| {
                    let need = self.group.neg(s).expect("same group");
                    table.get(&need).copied().unwrap_or(0)
                })
                .sum(),
            [(b1, t1), (b2, t2)] => {
                let s1 = self.block_choice_sums(b1, *t1);
                let s2 = self.block_choice_sums(b2, *t2);
                let mut n = 0;
                for a in &s1 {
                    for b in &s2 {
                        let ab = self.group.add(a, b).expect("same group");
                        let need = self.group.neg(&ab).expect("same group");
                        n += table.get(&need).copied().unwrap_or(0);
                    }
                }
                n
            }
            _ => unreachable!("a move touches at most two blocks"),
        }
    }

    /// True iff the candidate's canonical key is minimal over its symmetry orbit.
    fn is_orbit_minimal(&self, blocks: &Blocks) -> bool {
        if self.maps.is_empty() {
            return true;
        }
        let key = self.canonical_key(blocks);
        for map in &self.maps {
            let mapped: Blocks = blocks
                .iter()
                .map(|b| b.iter().map(|&i| map[i]).collect())
                .collect();
            if self.canonical_key(&mapped) < key {
                return false;
            }
        }
        true
    }
}

/// All element-index permutations induced by coordinate-wise unit multipliers,
/// identity excluded. Negation is among them (every −1 is a unit).
fn unit_multiplier_maps(
    group: &AbelianGroup,
    elems: &[GroupElement],
    index_of: &BTreeMap<GroupElement, usize>,
) -> Vec<Vec<usize>> {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let unit_lists: Vec<Vec<i64>> = group
        .torsion()
        .iter()
        .map(|&m| (1..m).filter(|&u| gcd(u, m) == 1).collect())
        .collect();
    let mut tuples: Vec<Vec<i64>> = alloc::vec![Vec::new()];
    for units in &unit_lists {
        let mut next = Vec::with_capacity(tuples.len() * units.len());
        for t in &tuples {
            for &u in units {
                let mut t2 = t.clone();
                t2.push(u);
                next.push(t2);
            }
        }
        tuples = next;
    }
    let mut maps = Vec::new();
    for t in tuples {
        if t.iter().all(|&u| u == 1) {
            continue;
        }
        let map: Vec<usize> = elems
            .iter()
            .map(|e| {
                let coords: Vec<i64> = e.coords().iter().zip(&t).map(|(&c, &u)| c * u).collect();
                index_of[&group.element(coords).expect("same signature")]
            })
            .collect();
        maps.push(map);
    }
    maps
}

/// C(n + r − 1, r): multisets of size r from n items.
fn multiset_count(n: u64, r: u64) -> num_bigint::BigUint {
    crate::formulas::binom((n + r - 1) as i64, r as i64)
}

/// Estimated number of assembled candidates, used against the ceiling.
fn estimate_space(ctx: &Ctx) -> num_bigint::BigUint {
    use num_traits::One;
    let n_el = ctx.elems.len() as u64;
    let parts = ctx.degree.parts();
    let last = parts.len() - 1;
    let mut est = num_bigint::BigUint::one();
    // consecutive equal-degree runs among the prefix blocks
    let mut k = 0;
    while k < last {
        let mut run = 1u64;
        while k + (run as usize) < last && parts[k + run as usize] == parts[k] {
            run += 1;
        }
        let combos = crate::formulas::binom(n_el as i64, 2 * parts[k] as i64);
        match combos.to_u64() {
            Some(c) => est *= multiset_count(c, run),
            None => est *= combos.pow(run as u32),
        }
        k += run as usize;
    }
    est * crate::formulas::binom(n_el as i64, 2 * parts[last] as i64 - 1)
}

enum Goal {
    Maximize,
    Hit(u64),
}

struct ExhaustiveOutcome {
    best: Option<(u64, Blocks)>,
    visited: u64,
    hit: Option<Blocks>,
}

/// Exhaustive walk state: per-size combination tables plus the enumeration goal.
/// `outer` pins the outermost choice (the first prefix block's combination rank,
/// or the free-part rank when there is a single block), which is the sharding
/// axis for data-parallel drivers.
struct Scan<'a> {
    ctx: &'a Ctx,
    combos_by_size: BTreeMap<usize, Vec<Vec<usize>>>,
    free_combos: Vec<Vec<usize>>,
    goal: &'a Goal,
    outer: Option<u64>,
}

impl Scan<'_> {
    fn last_block(&self, prefix: &[usize], acc: &GroupElement, out: &mut ExhaustiveOutcome) {
        let ctx = self.ctx;
        let parts = ctx.degree.parts();
        let n_blocks = parts.len();
        let iter: Box<dyn Iterator<Item = &Vec<usize>>> = if n_blocks == 1 {
            match self.outer {
                Some(o) => Box::new(self.free_combos.get(o as usize).into_iter()),
                None => Box::new(self.free_combos.iter()),
            }
        } else {
            Box::new(self.free_combos.iter())
        };
        for free in iter {
            let mut sum = acc.clone();
            for &i in free {
                sum = ctx.group.add(&sum, &ctx.elems[i]).expect("same group");
            }
            let dep = ctx.group.neg(&sum).expect("same group");
            let dep_idx = ctx.index_of[&dep];
            if free.binary_search(&dep_idx).is_ok() {
                continue; // dependent point would collide inside the block
            }
            let mut last: Vec<usize> = free.clone();
            let pos = last.partition_point(|&i| i < dep_idx);
            last.insert(pos, dep_idx);
            let mut blocks: Blocks = Vec::with_capacity(n_blocks);
            for (j, &rank) in prefix.iter().enumerate() {
                blocks.push(self.combos_by_size[&(2 * parts[j] as usize)][rank].clone());
            }
            blocks.push(last);
            out.visited += 1;
            if !ctx.is_orbit_minimal(&blocks) {
                continue;
            }
            let c = ctx.configuration(&blocks);
            let xi = count_xi(&c, CountMethod::MeetInMiddle).xi;
            match self.goal {
                Goal::Maximize => {
                    let better = match &out.best {
                        None => true,
                        Some((bx, bb)) => {
                            xi > *bx
                                || (xi == *bx && ctx.canonical_key(&blocks) < ctx.canonical_key(bb))
                        }
                    };
                    if better {
                        out.best = Some((xi, blocks));
                    }
                }
                Goal::Hit(t) => {
                    if xi == *t && out.hit.is_none() {
                        out.hit = Some(blocks);
                        return;
                    }
                }
            }
        }
    }

    fn walk(
        &self,
        k: usize,
        prefix: &mut Vec<usize>,
        acc: &GroupElement,
        out: &mut ExhaustiveOutcome,
    ) {
        let ctx = self.ctx;
        let parts = ctx.degree.parts();
        if k + 1 == parts.len() {
            self.last_block(prefix, acc, out);
            return;
        }
        let size = 2 * parts[k] as usize;
        let combos = &self.combos_by_size[&size];
        let (lo, hi) = if k == 0 {
            match self.outer {
                Some(o) => {
                    let o = o as usize;
                    (o, (o + 1).min(combos.len()))
                }
                None => (0, combos.len()),
            }
        } else if parts[k] == parts[k - 1] {
            (prefix[k - 1], combos.len()) // keep equal-degree runs non-decreasing
        } else {
            (0, combos.len())
        };
        for (rank, combo) in combos.iter().enumerate().take(hi).skip(lo) {
            prefix[k] = rank;
            let mut sum = acc.clone();
            for &i in combo {
                sum = ctx.group.add(&sum, &ctx.elems[i]).expect("same group");
            }
            self.walk(k + 1, prefix, &sum, out);
            if matches!(self.goal, Goal::Hit(_)) && out.hit.is_some() {
                return;
            }
        }
    }
}

fn exhaustive_scan(ctx: &Ctx, goal: &Goal, outer: Option<u64>) -> ExhaustiveOutcome {
    let parts = ctx.degree.parts();
    let n_blocks = parts.len();
    let n_el = ctx.elems.len();
    let mut combos_by_size: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for &d in parts {
        combos_by_size
            .entry(2 * d as usize)
            .or_insert_with(|| Combinations::new(n_el, 2 * d as usize).collect());
    }
    let free_size = 2 * parts[n_blocks - 1] as usize - 1;
    let free_combos: Vec<Vec<usize>> = Combinations::new(n_el, free_size).collect();

    let scan = Scan {
        ctx,
        combos_by_size,
        free_combos,
        goal,
        outer,
    };
    let mut out = ExhaustiveOutcome {
        best: None,
        visited: 0,
        hit: None,
    };
    let mut prefix: Vec<usize> = alloc::vec![0; n_blocks.saturating_sub(1)];
    scan.walk(0, &mut prefix, &ctx.group.identity(), &mut out);
    out
}

/// Number of shards for [`search_max_xi_shard`] / [`find_xi_value_shard`].
pub fn exhaustive_outer_count(spec: &SearchSpec) -> Result<u64> {
    let ctx = Ctx::new(spec)?;
    let parts = ctx.degree.parts();
    let n_el = ctx.elems.len() as i64;
    let size = if parts.len() == 1 {
        2 * parts[0] as i64 - 1
    } else {
        2 * parts[0] as i64
    };
    Ok(crate::formulas::binom(n_el, size).to_u64().unwrap_or(0))
}

fn verify_and_build(
    spec: &SearchSpec,
    xi: u64,
    blocks_cfg: Configuration,
    visited: u64,
    exhaustive: bool,
) -> SearchResult {
    let recount = count_xi(&blocks_cfg, CountMethod::Naive);
    assert_eq!(recount.xi, xi, "independent naive re-count must agree");
    assert!(recount.total_sum_zero, "witness must have zero total sum");
    assert!(!recount.on_diagonal, "witness must be off-diagonal");
    let rels = satisfied_relations(&blocks_cfg);
    let module = build_relation_module(&blocks_cfg.degree().clone(), &rels)
        .expect("satisfied relations are valid");
    SearchResult {
        best_xi: xi,
        witness: blocks_cfg,
        exhaustive,
        visited,
        module_rank: module.rank(),
        seed: spec.seed,
    }
}

fn ceiling_check(spec: &SearchSpec, ctx: &Ctx) -> Result<()> {
    let est = estimate_space(ctx);
    if est > num_bigint::BigUint::from(spec.budget.exhaustive_ceiling) {
        return Err(Error::SearchSpaceTooLarge {
            estimated: alloc::string::ToString::to_string(&est),
            ceiling: spec.budget.exhaustive_ceiling,
        });
    }
    Ok(())
}

/// Certified maximum (exhaustive mode) or best found within budget (local mode).
pub fn search_max_xi(spec: &SearchSpec) -> Result<SearchResult> {
    match spec.mode {
        SearchMode::Exhaustive => {
            let ctx = Ctx::new(spec)?;
            ceiling_check(spec, &ctx)?;
            let out = exhaustive_scan(&ctx, &Goal::Maximize, None);
            let (xi, blocks) = out.best.ok_or(Error::SearchSpaceTooLarge {
                estimated: String::from("0"),
                ceiling: spec.budget.exhaustive_ceiling,
            })?;
            Ok(verify_and_build(
                spec,
                xi,
                ctx.configuration(&blocks),
                out.visited,
                true,
            ))
        }
        SearchMode::LocalSearch => local_search(spec, &Goal::Maximize).map(|(r, _)| r),
    }
}

/// Partial result of one exhaustive shard. The visited count is carried even when
/// the shard produced no candidate, so merged totals match a single full scan.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShardResult {
    pub visited: u64,
    pub best: Option<SearchResult>,
}

impl ShardResult {
    /// Final result with the accumulated visited count patched in.
    pub fn into_result(self) -> Option<SearchResult> {
        let visited = self.visited;
        self.best.map(|mut r| {
            r.visited = visited;
            r
        })
    }
}

/// One exhaustive shard, for parallel drivers; results merge by max then by
/// canonical witness order, independent of shard interleaving.
pub fn search_max_xi_shard(spec: &SearchSpec, outer: u64) -> Result<ShardResult> {
    let ctx = Ctx::new(spec)?;
    ceiling_check(spec, &ctx)?;
    let out = exhaustive_scan(&ctx, &Goal::Maximize, Some(outer));
    Ok(ShardResult {
        visited: out.visited,
        best: out.best.map(|(xi, blocks)| {
            verify_and_build(spec, xi, ctx.configuration(&blocks), out.visited, true)
        }),
    })
}

/// Deterministic merge for sharded maxima: higher xi wins, ties go to the
/// lexicographically smaller witness; visited counts add.
pub fn merge_max(a: ShardResult, b: ShardResult) -> ShardResult {
    let visited = a.visited + b.visited;
    let best = match (a.best, b.best) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(match x.best_xi.cmp(&y.best_xi) {
            core::cmp::Ordering::Greater => x,
            core::cmp::Ordering::Less => y,
            core::cmp::Ordering::Equal => {
                if x.witness.points() <= y.witness.points() {
                    x
                } else {
                    y
                }
            }
        }),
    };
    ShardResult { visited, best }
}

/// Finds a witness with 𝔛 exactly equal to the (even) target, or reports
/// not-found; the report is a nonexistence certificate only in exhaustive mode
/// or when the rough upper bound already excludes the target.
pub fn find_xi_value(spec: &SearchSpec) -> Result<FindOutcome> {
    let target = spec.target.ok_or(Error::OddTarget(1))?;
    spec.validate()?;
    let bound = crate::formulas::xi_upper_bound(&spec.degree);
    if num_bigint::BigUint::from(target) > bound {
        return Ok(FindOutcome::NotFound {
            exhaustive: true,
            visited: 0,
            reason: alloc::format!(
                "target {target} exceeds the upper bound {bound} = floor(prod C(2d_k, d_k) / d_max)"
            ),
        });
    }
    match spec.mode {
        SearchMode::Exhaustive => {
            let ctx = Ctx::new(spec)?;
            ceiling_check(spec, &ctx)?;
            let out = exhaustive_scan(&ctx, &Goal::Hit(target), None);
            match out.hit {
                Some(blocks) => Ok(FindOutcome::Found(verify_and_build(
                    spec,
                    target,
                    ctx.configuration(&blocks),
                    out.visited,
                    true,
                ))),
                None => Ok(FindOutcome::NotFound {
                    exhaustive: true,
                    visited: out.visited,
                    reason: alloc::format!(
                        "exhausted all {} candidates without xi = {target}",
                        out.visited
                    ),
                }),
            }
        }
        SearchMode::LocalSearch => {
            let (result, hit) = local_search(spec, &Goal::Hit(target))?;
            if hit {
                Ok(FindOutcome::Found(result))
            } else {
                Ok(FindOutcome::NotFound {
                    exhaustive: false,
                    visited: result.visited,
                    reason: alloc::format!(
                        "budget exhausted without xi = {target}; best seen {}",
                        result.best_xi
                    ),
                })
            }
        }
    }
}

/// One exhaustive find shard; the caller takes the lowest shard index that found.
pub fn find_xi_value_shard(spec: &SearchSpec, outer: u64) -> Result<ShardResult> {
    let target = spec.target.ok_or(Error::OddTarget(1))?;
    let ctx = Ctx::new(spec)?;
    ceiling_check(spec, &ctx)?;
    let out = exhaustive_scan(&ctx, &Goal::Hit(target), Some(outer));
    Ok(ShardResult {
        visited: out.visited,
        best: out.hit.map(|blocks| {
            verify_and_build(spec, target, ctx.configuration(&blocks), out.visited, true)
        }),
    })
}

fn rand_below(rng: &mut ChaCha8Rng, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

fn has_duplicate(block: &[usize]) -> bool {
    let mut sorted = block.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).any(|w| w[0] == w[1])
}

/// Distinct random element indices, sorted.
fn random_subset(rng: &mut ChaCha8Rng, n_el: usize, k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n_el).collect();
    for i in 0..k {
        let j = i + rand_below(rng, n_el - i);
        pool.swap(i, j);
    }
    let mut chosen = pool[..k].to_vec();
    chosen.sort_unstable();
    chosen
}

/// Steepest-ascent local search. Returns the best verified result and, in target
/// mode, whether the target was hit. A restart happens on every local optimum;
/// restart r uses a rng derived deterministically from the base seed.
#[allow(clippy::too_many_lines)]
fn local_search(spec: &SearchSpec, goal: &Goal) -> Result<(SearchResult, bool)> {
    let ctx = Ctx::new(spec)?;
    let parts = ctx.degree.parts();
    let n_el = ctx.elems.len();
    let n_blocks = parts.len();
    let last_block = n_blocks - 1;
    if ctx.elems.len() < 2 * parts.iter().copied().max().unwrap_or(1) as usize {
        return Err(Error::SearchSpaceTooLarge {
            estimated: String::from("0"),
            ceiling: spec.budget.exhaustive_ceiling,
        });
    }

    let score = |xi: u64| -> i128 {
        match goal {
            Goal::Maximize => xi as i128,
            Goal::Hit(t) => -((xi as i128 - *t as i128).abs()),
        }
    };
    let hit_goal = |xi: u64| matches!(goal, Goal::Hit(t) if xi == *t);

    let mut visited: u64 = 0;
    let mut best: Option<(u64, Blocks)> = None;

    'restarts: for r in 0..spec.budget.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(
            spec.seed
                .wrapping_add(u64::from(r).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        );
        // sample a zero-sum off-diagonal start: free blocks at random, dependent solved
        let mut blocks: Blocks = Vec::new();
        let mut ok = false;
        for _attempt in 0..64 {
            blocks = (0..n_blocks)
                .map(|k| random_subset(&mut rng, n_el, 2 * parts[k] as usize))
                .collect();
            // re-solve the dependent point (last point of last block)
            let mut sum = ctx.group.identity();
            for (k, b) in blocks.iter().enumerate() {
                let skip_last = k == last_block;
                let m = if skip_last { b.len() - 1 } else { b.len() };
                for &i in &b[..m] {
                    sum = ctx.group.add(&sum, &ctx.elems[i]).expect("same group");
                }
            }
            let dep = ctx.index_of[&ctx.group.neg(&sum).expect("same group")];
            let lb = &mut blocks[last_block];
            lb.pop();
            if !lb.contains(&dep) {
                lb.push(dep);
                lb.sort_unstable();
                ok = true;
                break;
            }
        }
        if !ok {
            continue;
        }
        let mut cur_xi = count_xi(&ctx.configuration(&blocks), CountMethod::MeetInMiddle).xi;
        visited += 1;
        let consider = |best: &mut Option<(u64, Blocks)>, xi: u64, blocks: &Blocks| {
            let better = match best {
                None => true,
                Some((bx, _)) => score(xi) > score(*bx),
            };
            if better {
                *best = Some((xi, blocks.clone()));
            }
        };
        consider(&mut best, cur_xi, &blocks);
        if hit_goal(cur_xi) {
            break 'restarts;
        }

        for _step in 0..spec.budget.steps_per_restart {
            let mut improved: Option<(i128, Blocks, u64)> = None;
            // single-point replacement at every non-dependent position; a move
            // touches its own block and the last block (dependent point), so the
            // choice sums of every other block are tabulated once per touched block
            for bk in 0..n_blocks {
                let untouched: Vec<usize> =
                    (0..n_blocks).filter(|&j| j != bk && j != last_block).collect();
                let table = ctx.untouched_sums_table(&blocks, &untouched);
                let sum_untouched = ctx.points_sum(&blocks, &untouched);
                let dep_slot = blocks[last_block].len() - 1;
                let slots = if bk == last_block { dep_slot } else { blocks[bk].len() };
                for slot in 0..slots {
                    for cand in 0..n_el {
                        if blocks[bk].contains(&cand) {
                            continue;
                        }
                        let mut trial_bk = blocks[bk].clone();
                        trial_bk[slot] = cand;
                        // re-solve the dependent point from the fixed remainder
                        let mut fixed = sum_untouched.clone();
                        if bk == last_block {
                            for &i in &trial_bk[..dep_slot] {
                                fixed = ctx.group.add(&fixed, &ctx.elems[i]).expect("same group");
                            }
                        } else {
                            for &i in &trial_bk {
                                fixed = ctx.group.add(&fixed, &ctx.elems[i]).expect("same group");
                            }
                            for &i in &blocks[last_block][..dep_slot] {
                                fixed = ctx.group.add(&fixed, &ctx.elems[i]).expect("same group");
                            }
                        }
                        let dep = ctx.index_of[&ctx.group.neg(&fixed).expect("same group")];
                        let mut trial_last = if bk == last_block {
                            trial_bk.clone()
                        } else {
                            blocks[last_block].clone()
                        };
                        trial_last[dep_slot] = dep;
                        if has_duplicate(&trial_last) {
                            continue;
                        }
                        let xi = if bk == last_block {
                            ctx.count_against_table(&table, &[(&trial_last, parts[bk] as usize)])
                        } else {
                            ctx.count_against_table(
                                &table,
                                &[
                                    (&trial_bk, parts[bk] as usize),
                                    (&trial_last, parts[last_block] as usize),
                                ],
                            )
                        };
                        visited += 1;
                        if score(xi) > score(cur_xi)
                            && improved.as_ref().is_none_or(|(s, _, _)| score(xi) > *s)
                        {
                            let mut trial = blocks.clone();
                            trial[bk] = trial_bk.clone();
                            trial[last_block] = trial_last.clone();
                            for b in &mut trial {
                                b.sort_unstable();
                            }
                            debug_assert_eq!(
                                count_xi(&ctx.configuration(&trial), CountMethod::Naive).xi,
                                xi,
                                "tabulated move evaluation must match a full re-count"
                            );
                            improved = Some((score(xi), trial, xi));
                        }
                    }
                }
            }
            match improved {
                Some((_, nb, xi)) => {
                    blocks = nb;
                    cur_xi = xi;
                    consider(&mut best, cur_xi, &blocks);
                    if hit_goal(cur_xi) {
                        break 'restarts;
                    }
                }
                None => break, // local optimum; restart
            }
        }
    }

    let (xi, blocks) = best.ok_or(Error::SearchSpaceTooLarge {
        estimated: String::from("0"),
        ceiling: spec.budget.exhaustive_ceiling,
    })?;
    let hit = hit_goal(xi);
    Ok((
        verify_and_build(spec, xi, ctx.configuration(&blocks), visited, false),
        hit,
    ))
}

/// One local-search restart in isolation, for parallel drivers; merge keeps the
/// best score with ties to the lowest restart index. A restart that fails to find
/// any valid starting state yields `None`.
pub fn local_search_restart(spec: &SearchSpec, restart: u32) -> Result<Option<SearchResult>> {
    let mut one = spec.clone();
    one.budget.restarts = 1;
    one.seed = spec
        .seed
        .wrapping_add(u64::from(restart).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let goal = match spec.target {
        Some(t) => Goal::Hit(t),
        None => Goal::Maximize,
    };
    match local_search(&one, &goal) {
        Ok((r, _)) => Ok(Some(r)),
        Err(Error::SearchSpaceTooLarge { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Table1RowReport {
    pub parts: Vec<u32>,
    pub group: String,
    pub expected_xi_half: u64,
    pub computed_xi: u64,
    pub expected_rank: usize,
    pub computed_rank: usize,
    pub total_sum_zero: bool,
    pub off_diagonal: bool,
    pub obstruction_free: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Table1Report {
    pub rows: Vec<Table1RowReport>,
}

impl Table1Report {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Re-counts 𝔛 and recomputes rank M for each stored genus-5 witness and compares
/// with the frozen expected pair.
pub fn verify_table1() -> Table1Report {
    let rows = fixtures::table1()
        .iter()
        .map(|fx| {
            let c = fx.configuration();
            let naive = count_xi(&c, CountMethod::Naive);
            let mitm = count_xi(&c, CountMethod::MeetInMiddle);
            let rels = satisfied_relations(&c);
            let module = build_relation_module(&fx.degree(), &rels).expect("relations valid");
            let computed_rank = module.rank();
            let obstruction_free = crate::lattice::obstruction_free(&module);
            let pass = naive.xi == mitm.xi
                && naive.xi == 2 * fx.xi_half
                && computed_rank == fx.rank
                && naive.total_sum_zero
                && !naive.on_diagonal
                && obstruction_free;
            Table1RowReport {
                parts: fx.parts.to_vec(),
                group: alloc::format!("{}", fx.group()),
                expected_xi_half: fx.xi_half,
                computed_xi: naive.xi,
                expected_rank: fx.rank,
                computed_rank,
                total_sum_zero: naive.total_sum_zero,
                off_diagonal: !naive.on_diagonal,
                obstruction_free,
                pass,
            }
        })
        .collect();
    Table1Report { rows }
}
