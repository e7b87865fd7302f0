//! Thread-parallel drivers over the core's sharding hooks. Results are folded in
//! shard order, so the output is bit-identical for any thread count.

use anyhow::Result;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use prymgauss::counting::{count_xi, count_xi_first_choice, Configuration, CountMethod, XiCount};
use prymgauss::relations::first_block_choice_count;
use prymgauss::search::{
    find_xi_value_shard, merge_max, search_max_xi_shard, FindOutcome, SearchResult, SearchSpec,
    ShardResult,
};

/// Applies `f` to every index below `count`, preserving index order in the output.
pub fn ordered_map<R, F>(count: u64, threads: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync,
{
    let threads = threads.max(1).min(count.max(1) as usize);
    if threads <= 1 {
        return (0..count).map(f).collect();
    }
    let next = AtomicU64::new(0);
    let slots: Vec<Mutex<Option<R>>> = (0..count).map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let r = f(i);
                *slots[i as usize].lock().expect("poisoned slot") = Some(r);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| {
            slot.into_inner()
                .expect("poisoned slot")
                .expect("all indices computed")
        })
        .collect()
}

/// Naive count sharded over the first block's choices; meet-in-the-middle runs
/// single-threaded (its table build dominates and is already sublinear).
pub fn count_parallel(c: &Configuration, method: CountMethod, threads: usize) -> XiCount {
    if threads <= 1 || matches!(method, CountMethod::MeetInMiddle) {
        return count_xi(c, method);
    }
    let shards = first_block_choice_count(c.degree());
    let partials = ordered_map(shards, threads, |i| count_xi_first_choice(c, i));
    let mut base = count_xi(c, CountMethod::MeetInMiddle);
    base.xi = partials.iter().sum();
    base
}

pub fn search_max_parallel(spec: &SearchSpec, threads: usize) -> Result<SearchResult> {
    if threads <= 1 {
        return Ok(prymgauss::search::search_max_xi(spec)?);
    }
    match spec.mode {
        prymgauss::search::SearchMode::Exhaustive => {
            let shards = prymgauss::search::exhaustive_outer_count(spec)?;
            let partials = ordered_map(shards, threads, |i| search_max_xi_shard(spec, i));
            let mut merged = ShardResult {
                visited: 0,
                best: None,
            };
            for p in partials {
                merged = merge_max(merged, p?);
            }
            merged
                .into_result()
                .ok_or_else(|| anyhow::anyhow!("search space is empty"))
        }
        prymgauss::search::SearchMode::LocalSearch => {
            let restarts = spec.budget.restarts;
            let partials = ordered_map(u64::from(restarts), threads, |r| {
                prymgauss::search::local_search_restart(spec, r as u32)
            });
            let mut best: Option<SearchResult> = None;
            let mut visited = 0;
            for p in partials {
                if let Some(r) = p? {
                    visited += r.visited;
                    let better = match (&best, spec.target) {
                        (None, _) => true,
                        (Some(b), None) => r.best_xi > b.best_xi,
                        (Some(b), Some(t)) => r.best_xi.abs_diff(t) < b.best_xi.abs_diff(t),
                    };
                    if better {
                        best = Some(r);
                    }
                }
            }
            let mut best = best.ok_or_else(|| anyhow::anyhow!("no restart produced a state"))?;
            best.visited = visited;
            best.seed = spec.seed;
            Ok(best)
        }
    }
}

pub fn find_parallel(spec: &SearchSpec, threads: usize) -> Result<FindOutcome> {
    if threads <= 1 || !matches!(spec.mode, prymgauss::search::SearchMode::Exhaustive) {
        return Ok(prymgauss::search::find_xi_value(spec)?);
    }
    let target = spec.target.expect("find requires a target");
    // bound short-circuit matches the sequential path
    let bound = prymgauss::formulas::xi_upper_bound(&spec.degree);
    if num_bigint::BigUint::from(target) > bound {
        return Ok(prymgauss::search::find_xi_value(spec)?);
    }
    let shards = prymgauss::search::exhaustive_outer_count(spec)?;
    let partials = ordered_map(shards, threads, |i| find_xi_value_shard(spec, i));
    let mut visited = 0;
    for p in partials {
        let p = p?;
        visited += p.visited;
        if let Some(mut found) = p.best {
            found.visited = visited;
            return Ok(FindOutcome::Found(found));
        }
    }
    Ok(FindOutcome::NotFound {
        exhaustive: true,
        visited,
        reason: format!("exhausted all {visited} candidates without xi = {target}"),
    })
}
