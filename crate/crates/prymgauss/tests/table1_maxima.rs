//! Certifies that the stored genus-5 witnesses are not just valid but maximal:
//! every fixture's (group, degree) pair is distinct, and exhaustive search over
//! that pair must find exactly the stored xi — the strongest check the fixtures
//! admit.

use prymgauss::search::{search_max_xi, SearchSpec};

#[test]
fn every_fixture_is_maximal_over_its_own_group() {
    for (i, fx) in prymgauss::fixtures::table1().iter().enumerate() {
        let spec = SearchSpec::exhaustive(fx.group(), fx.degree());
        let result = search_max_xi(&spec).unwrap();
        assert!(result.exhaustive);
        assert_eq!(
            result.best_xi,
            2 * fx.xi_half,
            "row {i}: exhaustive max over {} with d = {:?} is {}, stored witness has {}",
            fx.group(),
            fx.parts,
            result.best_xi,
            2 * fx.xi_half
        );
    }
}
