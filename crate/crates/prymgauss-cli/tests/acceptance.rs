//! Acceptance suite: each test pins one criterion of the reference tables and
//! identities at its stated tolerance (everything here is exact integer math) and
//! prints one pass/fail line. Run with `-- --nocapture` to see the lines for
//! passing criteria too.
//!
//! Criterion 9 as stated asserts that every even xi in 0..10 is attainable over
//! Z3 with d = (1,1,1,1,1). The exhaustive sweep disproves that: on the zero-sum
//! off-diagonal locus over Z3 the count is identically 10 (each block is a
//! 2-subset {x, x+e} with e in {1,2}, and a character sum over Z3 forces the
//! value). That test is therefore expected to FAIL, with the nonexistence
//! certificate produced by the sweep itself; the companion test shows the full
//! range is attained over Z6, the smallest cyclic group where it is.

use std::time::Instant;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use prymgauss::abelian::{AbelianGroup, GroupElement};
use prymgauss::counting::{
    count_xi, satisfied_relations, varley_configuration, Configuration, CountMethod,
};
use prymgauss::formulas::{dim5_tables, mu, to_u64, xi_upper_bound};
use prymgauss::lattice::{build_relation_module, obstruction_free};
use prymgauss::relations::DegreeVector;
use prymgauss::search::{
    find_xi_value, search_max_xi, verify_table1, FindOutcome, SearchMode, SearchSpec,
};

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "[{}] {criterion}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

#[test]
fn criterion_1_table1_reproduction() {
    let start = Instant::now();
    let table = verify_table1();
    let xi_halves: Vec<u64> = table.rows.iter().map(|r| r.computed_xi / 2).collect();
    let ranks: Vec<usize> = table.rows.iter().map(|r| r.computed_rank).collect();
    let want_xi = vec![5, 6, 7, 8, 7, 9, 8, 10, 9, 8, 11, 10, 9];
    let want_rank = vec![6, 7, 8, 8, 8, 9, 9, 9, 9, 9, 10, 10, 10];
    let elapsed = start.elapsed();
    let pass =
        table.all_pass() && xi_halves == want_xi && ranks == want_rank && elapsed.as_secs() < 10;
    report(
        "criterion 1: table1 reproduction",
        pass,
        &format!(
            "xi/2 {xi_halves:?}, rank {ranks:?}, {} ms single-threaded",
            elapsed.as_millis()
        ),
    );
    assert_eq!(xi_halves, want_xi);
    assert_eq!(ranks, want_rank);
    assert!(table.all_pass());
    assert!(elapsed.as_secs() < 10, "took {elapsed:?}, limit 10 s");
}

#[test]
fn criterion_2_z14_certificate() {
    let start = Instant::now();
    let group = AbelianGroup::cyclic(14).unwrap();
    let degree = DegreeVector::new(vec![5]).unwrap();
    let points: Vec<GroupElement> = [9, 4, 11, 6, 7, 10, 3, 0, 8, 12]
        .iter()
        .map(|&x| group.element(vec![x]).unwrap())
        .collect();
    let config = Configuration::new(group, degree.clone(), points).unwrap();

    let sum_zero = config.total_sum_zero();
    let xi = count_xi(&config, CountMethod::Naive).xi;
    let rels = satisfied_relations(&config);
    let module = build_relation_module(&degree, &rels).unwrap();
    let rank = module.rank();
    let no_differences = obstruction_free(&module);
    let elapsed = start.elapsed();

    let pass = sum_zero && xi == 20 && rank == 10 && no_differences && elapsed.as_secs() < 5;
    report(
        "criterion 2: Z14 certificate",
        pass,
        &format!(
            "sum zero {sum_zero}, xi {xi}, rank {rank}, no e_i - e_j in module {no_differences}, {} ms",
            elapsed.as_millis()
        ),
    );
    assert!(sum_zero);
    assert_eq!(xi, 20);
    assert_eq!(rank, 10);
    assert!(no_differences);
    assert!(elapsed.as_secs() < 5, "took {elapsed:?}, limit 5 s");
}

#[test]
fn criterion_3_dimension_5_tables() {
    let r = dim5_tables();
    let families: Vec<(u64, Option<u64>)> = r
        .families
        .iter()
        .map(|f| (to_u64(&f.degree).unwrap(), f.max_xi))
        .collect();
    let boundary: Vec<(u64, u64)> = r
        .boundary
        .iter()
        .map(|b| (to_u64(&b.degree).unwrap(), b.max_xi))
        .collect();
    let mut achievable = vec![0u64, 16];
    achievable.extend((20..=92).step_by(2).filter(|d| *d != 72 && *d != 74));

    let want_families = vec![
        (70, None),
        (0, None),
        (70, Some(22)),
        (94, Some(18)),
        (60, Some(20)),
    ];
    let want_boundary = vec![
        (30, 10),
        (36, 12),
        (52, 14),
        (44, 16),
        (70, 18),
        (52, 20),
        (70, 20),
    ];
    let pass = families == want_families
        && boundary == want_boundary
        && r.achievable_degrees == achievable;
    report(
        "criterion 3: dimension-5 tables",
        pass,
        &format!(
            "families {families:?}, boundary {boundary:?}, achievable set size {}",
            r.achievable_degrees.len()
        ),
    );
    assert_eq!(families, want_families);
    assert_eq!(boundary, want_boundary);
    assert_eq!(r.achievable_degrees, achievable);
}

#[test]
fn criterion_4_formula_identity_suite() {
    let start = Instant::now();
    let checks = prymgauss_cli::identities_report(9);
    let elapsed = start.elapsed();
    let all = checks.iter().all(|(_, p)| *p);
    report(
        "criterion 4: formula identities (deg <= 9, shapes to g = 30)",
        all && elapsed.as_secs() < 30,
        &format!("{} identities, {} ms", checks.len(), elapsed.as_millis()),
    );
    for (name, pass) in &checks {
        assert!(pass, "identity failed: {name}");
    }
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}, limit 30 s");
}

#[test]
fn criterion_5_monotonicity_to_g30() {
    let r = prymgauss::formulas::monotonicity_report(30).unwrap();
    let table: Vec<(u64, u64)> = r
        .rows
        .iter()
        .filter(|row| row.g <= 7)
        .map(|row| {
            let e2 = to_u64(&row.bielliptic[1.min(row.bielliptic.len() - 1)]).unwrap();
            (e2, to_u64(&row.jacobian).unwrap())
        })
        .collect();
    let want = vec![(16, 20), (60, 70), (228, 252), (860, 924)];
    let pass = r.all_ok() && table == want;
    report(
        "criterion 5: monotonicity g <= 30",
        pass,
        &format!(
            "violations {:?}, (E_g2, J_g) for g=4..7: {table:?}",
            r.violations
        ),
    );
    assert!(r.all_ok(), "violations: {:?}", r.violations);
    assert_eq!(table, want);
}

#[test]
fn criterion_6_varley_generalization() {
    let start = Instant::now();
    let mut all = true;
    for g in 1..=16u32 {
        let (config, expected) = varley_configuration(g).unwrap();
        let counted = count_xi(&config, CountMethod::MeetInMiddle).xi;
        let want = if g % 2 == 0 {
            1u64 << (g - 1)
        } else {
            ((1u64 << g) - 2) / 3
        };
        all &= counted == expected && expected == want && config.total_sum_zero();
        assert_eq!(counted, want, "g = {g}");
    }
    // g = 4 instance: Gauss degree mu((1,1,1,1)) - 8 = 4
    let d = DegreeVector::new(vec![1, 1, 1, 1]).unwrap();
    let gauss = mu(&d) - BigUint::from(8u32);
    all &= to_u64(&gauss) == Some(4);
    let elapsed = start.elapsed();
    report(
        "criterion 6: varley generalization g <= 16",
        all && elapsed.as_secs() < 60,
        &format!(
            "g=4 gauss degree {gauss}, {} ms with meet-in-the-middle",
            elapsed.as_millis()
        ),
    );
    assert_eq!(to_u64(&gauss), Some(4));
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}, limit 60 s");
}

#[test]
fn criterion_7_exhaustive_search_certification() {
    let start = Instant::now();
    let z3 = SearchSpec::exhaustive(
        AbelianGroup::cyclic(3).unwrap(),
        DegreeVector::new(vec![1, 1, 1, 1, 1]).unwrap(),
    );
    let r3 = search_max_xi(&z3).unwrap();
    let t3 = start.elapsed();

    let start4 = Instant::now();
    let z4 = SearchSpec::exhaustive(
        AbelianGroup::cyclic(4).unwrap(),
        DegreeVector::new(vec![1, 1, 1, 2]).unwrap(),
    );
    let r4 = search_max_xi(&z4).unwrap();
    let t4 = start4.elapsed();

    let pass = r3.best_xi == 10
        && r3.exhaustive
        && r4.best_xi == 12
        && r4.exhaustive
        && t3.as_secs() < 120
        && t4.as_secs() < 120;
    report(
        "criterion 7: exhaustive certification",
        pass,
        &format!(
            "Z3 (1,1,1,1,1) max {} in {} ms; Z4 (1,1,1,2) max {} in {} ms",
            r3.best_xi,
            t3.as_millis(),
            r4.best_xi,
            t4.as_millis()
        ),
    );
    assert_eq!((r3.best_xi, r3.exhaustive), (10, true));
    assert_eq!((r4.best_xi, r4.exhaustive), (12, true));
    assert!(t3.as_secs() < 120 && t4.as_secs() < 120);
}

/// xorshift64*, enough randomness for fixture generation and fully deterministic.
struct MiniRng(u64);

impl MiniRng {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

#[test]
fn criterion_8_oracle_equivalence_on_random_instances() {
    let start = Instant::now();
    let mut rng = MiniRng(0xC0FF_EE11_D00D_5EED);
    let group_pool: Vec<Vec<i64>> = vec![
        vec![2],
        vec![3],
        vec![4],
        vec![5],
        vec![7],
        vec![8],
        vec![11],
        vec![12],
        vec![2, 2],
        vec![2, 4],
        vec![2, 6],
        vec![3, 3],
        vec![2, 2, 3],
    ];
    let degree_pool: Vec<Vec<u32>> = vec![
        vec![1],
        vec![2],
        vec![3],
        vec![1, 1],
        vec![1, 2],
        vec![2, 2],
        vec![1, 1, 2],
        vec![1, 1, 1, 1],
        vec![2, 3],
        vec![6],
        vec![1, 1, 1, 1, 1, 1],
    ];
    let mut checked = 0;
    while checked < 200 {
        let torsion = &group_pool[rng.below(group_pool.len() as u64) as usize];
        let parts = &degree_pool[rng.below(degree_pool.len() as u64) as usize];
        let group = AbelianGroup::torsion_product(torsion).unwrap();
        let degree = DegreeVector::new(parts.clone()).unwrap();
        let order = group.order().unwrap() as u64;
        let n = degree.index_count();
        // force a zero total sum so the parity and bound clauses are exercised
        let mut pts: Vec<GroupElement> = (0..n - 1)
            .map(|_| {
                let coords: Vec<i64> = group
                    .torsion()
                    .iter()
                    .map(|&m| rng.below(m as u64) as i64)
                    .collect();
                group.element(coords).unwrap()
            })
            .collect();
        let _ = order;
        let partial = group.sum(&pts).unwrap();
        pts.push(group.neg(&partial).unwrap());
        let config = Configuration::new(group, degree.clone(), pts).unwrap();

        let naive = count_xi(&config, CountMethod::Naive);
        let mitm = count_xi(&config, CountMethod::MeetInMiddle);
        assert_eq!(naive, mitm, "methods disagree on {config:?}");
        assert!(naive.total_sum_zero);
        assert_eq!(
            naive.xi % 2,
            0,
            "xi must be even on zero-sum configurations"
        );
        if !naive.on_diagonal {
            let bound = xi_upper_bound(&degree).to_u64().unwrap();
            assert!(naive.xi <= bound, "xi {} above bound {bound}", naive.xi);
        }
        checked += 1;
    }
    let elapsed = start.elapsed();
    report(
        "criterion 8: oracle equivalence on 200 random instances",
        elapsed.as_secs() < 60,
        &format!("200 configurations checked in {} ms", elapsed.as_millis()),
    );
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}, limit 60 s");
}

/// As stated: every even target 0..10 should be attainable over Z3 with
/// d = (1,1,1,1,1). The exhaustive sweep itself certifies that only 10 is, so
/// this test documents the discrepancy by failing; see the module docs.
#[test]
fn criterion_9_achievability_sweep_as_stated() {
    let mut found = Vec::new();
    let mut certified_absent = Vec::new();
    for target in [0u64, 2, 4, 6, 8, 10] {
        let mut spec = SearchSpec::exhaustive(
            AbelianGroup::cyclic(3).unwrap(),
            DegreeVector::new(vec![1, 1, 1, 1, 1]).unwrap(),
        );
        spec.target = Some(target);
        match find_xi_value(&spec).unwrap() {
            FindOutcome::Found(r) => found.push((target, r.best_xi)),
            FindOutcome::NotFound { exhaustive, .. } => {
                assert!(exhaustive, "absence must be certified, not budget-limited");
                certified_absent.push(target);
            }
        }
    }
    let pass = certified_absent.is_empty();
    report(
        "criterion 9: achievability sweep over Z3 (as stated)",
        pass,
        &format!("found {found:?}; certified absent {certified_absent:?}"),
    );
    assert!(
        certified_absent.is_empty(),
        "targets {certified_absent:?} are certifiably unattainable over Z3 with d = (1,1,1,1,1): \
         the exhaustive sweep covers the whole zero-sum off-diagonal space and every \
         configuration there has xi = 10 exactly (all 2-subsets of Z3 are {{x, x+e}} with \
         e in {{1,2}}; a character sum over Z3 then pins the count at (32 - 2)/3 = 10). \
         The companion test shows all six targets are attained over Z6."
    );
}

/// The same sweep over the smallest cyclic group where the claim does hold.
#[test]
fn criterion_9_achievability_sweep_over_z6() {
    let mut all = true;
    for target in [0u64, 2, 4, 6, 8, 10] {
        let mut spec = SearchSpec::exhaustive(
            AbelianGroup::cyclic(6).unwrap(),
            DegreeVector::new(vec![1, 1, 1, 1, 1]).unwrap(),
        );
        spec.target = Some(target);
        let outcome = find_xi_value(&spec).unwrap();
        let ok = matches!(&outcome, FindOutcome::Found(r) if r.best_xi == target);
        all &= ok;
        assert!(ok, "target {target} should be attainable over Z6");
    }
    report(
        "criterion 9 (companion): achievability sweep over Z6",
        all,
        "witnesses found for every even target 0..10",
    );
}

/// Soft criterion: seeded heuristic search reaches the maximal xi = 22 on
/// (Z2 x Z2 x Z3, (5)); the stored witness makes the value hard-verifiable
/// regardless (criteria 1 and 3 re-count it).
#[test]
fn soft_criterion_local_search_reaches_22() {
    let start = Instant::now();
    let mut spec = SearchSpec::local(
        AbelianGroup::torsion_product(&[2, 2, 3]).unwrap(),
        DegreeVector::new(vec![5]).unwrap(),
        1,
    );
    spec.mode = SearchMode::LocalSearch;
    spec.budget.restarts = 64;
    spec.budget.steps_per_restart = 128;
    let r = search_max_xi(&spec).unwrap();
    let elapsed = start.elapsed();
    let pass = r.best_xi >= 22 && elapsed.as_secs() < 300;
    report(
        "soft criterion: heuristic xi = 22 on Z2xZ2xZ3",
        pass,
        &format!(
            "best {} after {} evaluations in {} ms, seed {}",
            r.best_xi,
            r.visited,
            elapsed.as_millis(),
            r.seed
        ),
    );
    assert!(r.best_xi >= 22, "best found {}", r.best_xi);
    assert!(!r.exhaustive);
    assert!(elapsed.as_secs() < 300);
}
