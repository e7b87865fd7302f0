//! Exact evaluation of the closed-form Gauss-degree formulas, the boundary degree
//! μ(d̲) and its correction μ̃(d̲), intersection numbers, the rough upper bound on 𝔛,
//! and the fixed summary tables in dimension 5. All arithmetic is arbitrary
//! precision; there is no floating point anywhere in this module.

use alloc::string::ToString;
use alloc::vec::Vec;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::counting::{count_xi, CountMethod};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::relations::DegreeVector;

/// Exact C(n, k); zero when k is negative or exceeds n.
pub fn binom(n: i64, k: i64) -> BigUint {
    if k < 0 || n < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let mut res = BigUint::one();
    for i in 0..k {
        res = res * BigUint::from((n as u64) - i) / BigUint::from(i + 1);
    }
    res
}

/// Gauss degree of a non-hyperelliptic Jacobian: C(2g−2, g−1).
pub fn jacobian_degree(g: u32) -> Result<BigUint> {
    if g < 2 {
        return Err(Error::GenusOutOfRange { min: 2, got: g });
    }
    Ok(binom(2 * g as i64 - 2, g as i64 - 1))
}

/// Which branch of the bielliptic degree formula applies. Hyperellipticity of the
/// intermediate curves is geometric input the caller supplies (see
/// [`crate::counting::cprime_is_hyperelliptic`] for the divisor criterion).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BiellipticCase {
    /// t = 0: C(2g−2, g−1) − 𝔛.
    TZero,
    /// (g, t) = (4, 2) with both intermediate curves hyperelliptic: 18 − 𝔛.
    G4T2BothHyperelliptic,
    /// t = 2 with C′ hyperelliptic: 2C(2g−4,g−2) + 4C(2g−6,g−3) − 2^{g−2} − 𝔛̃.
    T2CPrimeHyperelliptic,
    /// the remaining cases: C(2t−2,t−1)C(2g−2t,g−t) + C(2t,t)C(2g−2t−2,g−t−1) − 2^{g−1} − 𝔛.
    Generic,
}

impl BiellipticCase {
    pub fn name(self) -> &'static str {
        match self {
            BiellipticCase::TZero => "t_zero",
            BiellipticCase::G4T2BothHyperelliptic => "g4t2_both_hyperelliptic",
            BiellipticCase::T2CPrimeHyperelliptic => "t2_cprime_hyperelliptic",
            BiellipticCase::Generic => "generic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DegreeFamily {
    Jacobian {
        g: u32,
    },
    Bielliptic {
        g: u32,
        t: u32,
        case: BiellipticCase,
    },
    Boundary {
        degree_vector: DegreeVector,
    },
}

/// A computed Gauss degree together with the 𝔛 (or 𝔛̃) input it was corrected by.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussDegreeReport {
    pub family: DegreeFamily,
    pub xi_input: u64,
    pub degree: BigUint,
}

fn checked_degree(base: BigUint, xi: u64, family: DegreeFamily) -> Result<GaussDegreeReport> {
    let xi_big = BigUint::from(xi);
    if xi_big > base {
        return Err(Error::XiExceedsDegree {
            xi,
            max_xi: base.to_string(),
        });
    }
    Ok(GaussDegreeReport {
        family,
        xi_input: xi,
        degree: base - xi_big,
    })
}

/// Degree of the Gauss map for a bielliptic Prym of the given case. `xi` is 𝔛 for
/// every case except `T2CPrimeHyperelliptic`, which takes 𝔛̃. An `xi` pushing the
/// degree negative is reported as an error, never clamped.
pub fn bielliptic_degree(
    g: u32,
    t: u32,
    case: BiellipticCase,
    xi: u64,
) -> Result<GaussDegreeReport> {
    if g < 4 {
        return Err(Error::GenusOutOfRange { min: 4, got: g });
    }
    if 2 * t > g {
        return Err(Error::TOutOfRange { g, t });
    }
    let consistent = match case {
        BiellipticCase::TZero => t == 0,
        BiellipticCase::G4T2BothHyperelliptic => (g, t) == (4, 2),
        BiellipticCase::T2CPrimeHyperelliptic => t == 2,
        BiellipticCase::Generic => t >= 1,
    };
    if !consistent {
        return Err(Error::CaseMismatch {
            g,
            t,
            case: case.name(),
        });
    }
    let gi = g as i64;
    let ti = t as i64;
    let base = match case {
        BiellipticCase::TZero => binom(2 * gi - 2, gi - 1),
        BiellipticCase::G4T2BothHyperelliptic => BigUint::from(18u32),
        BiellipticCase::T2CPrimeHyperelliptic => {
            let sum = BigUint::from(2u32) * binom(2 * gi - 4, gi - 2)
                + BigUint::from(4u32) * binom(2 * gi - 6, gi - 3);
            let pow = BigUint::from(1u32) << (g - 2);
            if pow > sum {
                return Err(Error::CaseMismatch {
                    g,
                    t,
                    case: case.name(),
                });
            }
            sum - pow
        }
        BiellipticCase::Generic => {
            let sum = binom(2 * ti - 2, ti - 1) * binom(2 * gi - 2 * ti, gi - ti)
                + binom(2 * ti, ti) * binom(2 * gi - 2 * ti - 2, gi - ti - 1);
            let pow = BigUint::from(1u32) << (g - 1);
            debug_assert!(pow <= sum);
            sum - pow
        }
    };
    checked_degree(base, xi, DegreeFamily::Bielliptic { g, t, case })
}

/// The proof-variant constant for the (4, 2) both-hyperelliptic case, 14 − 𝔛̃.
/// Kept separate from [`bielliptic_degree`]: the theorem statement says 18 − 𝔛 and
/// callers must opt into this variant explicitly.
pub fn bielliptic_degree_g4t2_proof_variant(xi_tilde: u64) -> Result<GaussDegreeReport> {
    checked_degree(
        BigUint::from(14u32),
        xi_tilde,
        DegreeFamily::Bielliptic {
            g: 4,
            t: 2,
            case: BiellipticCase::G4T2BothHyperelliptic,
        },
    )
}

/// μ(d̲) = Σ_{ε∈{0,1}^n} |ε| 2^{n−|ε|} C(|ε|−1, ⌊(|ε|−1)/2⌋) ∏ C(2d_i−2, d_i−ε_i).
///
/// Positions with d_i = 1 force ε_i = 1 (their factor is C(0, 1) = 0 otherwise),
/// so the sum only ranges over the positions with d_i ≥ 2; this keeps d̲ = (1,…,1)
/// evaluable at any length.
pub fn mu(d: &DegreeVector) -> BigUint {
    let n = d.num_blocks();
    let free: Vec<usize> = (0..n).filter(|&i| d.parts()[i] >= 2).collect();
    assert!(free.len() < 64, "mu over 2^{} terms is out of range", free.len());
    let forced = n - free.len();
    let mut total = BigUint::zero();
    for mask in 0u64..(1u64 << free.len()) {
        let ones = forced + mask.count_ones() as usize;
        if ones == 0 {
            continue; // the |ε| factor kills the empty term
        }
        let mut term = BigUint::from(ones as u64)
            * (BigUint::one() << (n - ones))
            * binom(ones as i64 - 1, (ones as i64 - 1) / 2);
        for (bit, &i) in free.iter().enumerate() {
            let di = d.parts()[i] as i64;
            let eps = (mask >> bit & 1) as i64;
            term *= binom(2 * di - 2, di - eps);
        }
        // forced positions contribute a factor C(0, 0) = 1 each
        total += term;
    }
    total
}

/// μ̃(d̲) by the direct double sum
/// Σ_{ε⁰,ε^∞∈{0,1}^k} min(|ε⁰|,|ε^∞|) ∏ C(2d_i−2, d_i−ε⁰_i−ε^∞_i).
/// Must agree with [`mu_tilde_closed_form`]; the two routes are kept independent.
pub fn mu_tilde(d: &DegreeVector) -> BigUint {
    let k = d.num_blocks();
    assert!(k < 32, "mu_tilde over 4^{k} terms is out of range");
    let mut total = BigUint::zero();
    for m0 in 0u64..(1u64 << k) {
        for m1 in 0u64..(1u64 << k) {
            let coeff = m0.count_ones().min(m1.count_ones()) as u64;
            if coeff == 0 {
                continue;
            }
            let mut term = BigUint::from(coeff);
            for i in 0..k {
                let di = d.parts()[i] as i64;
                let e = (m0 >> i & 1) as i64 + (m1 >> i & 1) as i64;
                term *= binom(2 * di - 2, di - e);
                if term.is_zero() {
                    break;
                }
            }
            total += term;
        }
    }
    total
}

/// μ̃(d̲) by the closed form k·2^{k−1}·∏C(2d_i−1, d_i) − μ(d̲).
pub fn mu_tilde_closed_form(d: &DegreeVector) -> BigUint {
    let k = d.num_blocks();
    let mut lead = BigUint::from(k as u64) * (BigUint::one() << (k - 1));
    for &di in d.parts() {
        lead *= binom(2 * di as i64 - 1, di as i64);
    }
    lead - mu(d)
}

/// Intersection number of the two cycles in the smooth bielliptic case:
/// 2(C(2t−2,t−1)C(2g−2t,g−t) + C(2t,t)C(2g−2t−2,g−t−1)). At t = 0 the first
/// product vanishes through the binomial conventions and the value is
/// 2·C(2g−2, g−1).
pub fn intersection_number_smooth(g: u32, t: u32) -> Result<BigUint> {
    if g < 2 {
        return Err(Error::GenusOutOfRange { min: 2, got: g });
    }
    if 2 * t > g {
        return Err(Error::TOutOfRange { g, t });
    }
    let gi = g as i64;
    let ti = t as i64;
    Ok(BigUint::from(2u32)
        * (binom(2 * ti - 2, ti - 1) * binom(2 * gi - 2 * ti, gi - ti)
            + binom(2 * ti, ti) * binom(2 * gi - 2 * ti - 2, gi - ti - 1)))
}

/// Intersection number in the boundary case: k·2^k·∏C(2d_i−1, d_i).
pub fn intersection_number_boundary(d: &DegreeVector) -> BigUint {
    let k = d.num_blocks();
    let mut v = BigUint::from(k as u64) << k;
    for &di in d.parts() {
        v *= binom(2 * di as i64 - 1, di as i64);
    }
    v
}

/// Rough upper bound ⌊(1/d_max)·∏C(2d_k, d_k)⌋ on 𝔛 over zero-sum off-diagonal
/// configurations; parts are sorted internally.
pub fn xi_upper_bound(d: &DegreeVector) -> BigUint {
    let sorted = d.sorted_parts();
    let dmax = *sorted.last().expect("degree vector is nonempty");
    crate::relations::relation_count(d) / BigUint::from(dmax)
}

/// One row of the dimension-5 family table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyRow {
    pub label: &'static str,
    pub degree: BigUint,
    pub max_xi: Option<u64>,
}

/// One row of the dimension-5 boundary table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryRow {
    pub degree_vector: DegreeVector,
    pub degree: BigUint,
    pub max_xi: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dim5Report {
    pub families: Vec<FamilyRow>,
    pub boundary: Vec<BoundaryRow>,
    /// Gauss degrees attainable in dimension 5 on the loci covered here:
    /// {0, 16} ∪ {20, 22, …, 92} ∖ {72, 74}.
    pub achievable_degrees: Vec<u64>,
}

/// The attainable-degree set {0,16} ∪ {20,…,92} ∖ {72,74}, as published.
fn dim5_achievable_degrees() -> Vec<u64> {
    let mut v = alloc::vec![0u64, 16];
    v.extend((20..=92).step_by(2).filter(|d| *d != 72 && *d != 74));
    v
}

/// Reproduces both dimension-5 summary tables. Degrees come from the formulas;
/// the max-𝔛 entries are re-counted on the stored certified configurations at
/// call time, never copied.
pub fn dim5_tables() -> Dim5Report {
    let recount = |fixture_idx: usize| -> u64 {
        let c = fixtures::table1()[fixture_idx].configuration();
        count_xi(&c, CountMethod::MeetInMiddle).xi
    };
    let families = alloc::vec![
        FamilyRow {
            label: "J_5",
            degree: jacobian_degree(5).expect("g = 5"),
            max_xi: None
        },
        FamilyRow {
            label: "A_5_dec",
            degree: BigUint::zero(),
            max_xi: None
        },
        FamilyRow {
            label: "E'_{5,0}",
            degree: bielliptic_degree(5, 0, BiellipticCase::TZero, 0)
                .expect("valid")
                .degree,
            max_xi: Some(recount(fixtures::DIM5_E50_MAX)),
        },
        FamilyRow {
            label: "E'_{5,1}",
            degree: bielliptic_degree(5, 1, BiellipticCase::Generic, 0)
                .expect("valid")
                .degree,
            max_xi: Some(recount(fixtures::DIM5_E51_MAX)),
        },
        FamilyRow {
            label: "E'_{5,2}",
            degree: bielliptic_degree(5, 2, BiellipticCase::Generic, 0)
                .expect("valid")
                .degree,
            max_xi: Some(recount(fixtures::DIM5_E52_MAX)),
        },
    ];
    let boundary = fixtures::DIM5_BOUNDARY_MAX
        .iter()
        .map(|&(parts, fixture_idx)| {
            let d = DegreeVector::new(parts.to_vec()).expect("fixture degree vectors are valid");
            BoundaryRow {
                degree: mu(&d),
                degree_vector: d,
                max_xi: recount(fixture_idx),
            }
        })
        .collect();
    Dim5Report {
        families,
        boundary,
        achievable_degrees: dim5_achievable_degrees(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityRow {
    pub g: u32,
    pub jacobian: BigUint,
    /// degree of the generic-case family at 𝔛 = 0, indexed by t = 1..⌊g/2⌋
    pub bielliptic: Vec<BigUint>,
    pub strictly_decreasing: bool,
    /// deg(t=1) > jacobian > deg(t) for every 2 ≤ t ≤ g/2
    pub sandwich: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityReport {
    pub rows: Vec<MonotonicityRow>,
    pub violations: Vec<alloc::string::String>,
}

impl MonotonicityReport {
    pub fn all_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, for every 4 ≤ g ≤ g_max with 𝔛 = 0: the generic-case degree is strictly
/// decreasing in t on 1..⌊g/2⌋, and deg(t=1) > Jacobian > deg(t) for t ≥ 2.
pub fn monotonicity_report(g_max: u32) -> Result<MonotonicityReport> {
    if g_max < 4 {
        return Err(Error::GenusOutOfRange { min: 4, got: g_max });
    }
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for g in 4..=g_max {
        let jacobian = jacobian_degree(g)?;
        let bielliptic: Vec<BigUint> = (1..=g / 2)
            .map(|t| {
                bielliptic_degree(g, t, BiellipticCase::Generic, 0)
                    .map(|r| r.degree)
                    .expect("generic case valid for 1 <= t <= g/2")
            })
            .collect();
        let strictly_decreasing = bielliptic.windows(2).all(|w| w[0] > w[1]);
        if !strictly_decreasing {
            violations.push(alloc::format!("g={g}: degree not strictly decreasing in t"));
        }
        let mut sandwich = bielliptic[0] > jacobian;
        if !sandwich {
            violations.push(alloc::format!("g={g}: deg(t=1) <= jacobian"));
        }
        for (i, v) in bielliptic.iter().enumerate().skip(1) {
            if v >= &jacobian {
                violations.push(alloc::format!("g={g}: deg(t={}) >= jacobian", i + 1));
                sandwich = false;
            }
        }
        rows.push(MonotonicityRow {
            g,
            jacobian,
            bielliptic,
            strictly_decreasing,
            sandwich,
        });
    }
    Ok(MonotonicityReport { rows, violations })
}

/// Convenience: u64 view of a small BigUint, for report rendering.
pub fn to_u64(v: &BigUint) -> Option<u64> {
    v.to_u64()
}
