//! Counting the relation invariant 𝔛 of a point configuration, its bielliptic
//! two-divisor variants, diagonal membership, and the explicit low-degree
//! configurations generalizing Varley's fourfold.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::abelian::{AbelianGroup, GroupElement};
use crate::error::{Error, Result};
use crate::relations::{Combinations, DegreeVector, Relation};

/// 2g points of a group, positionally partitioned into blocks of sizes 2d_k.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(try_from = "ConfigurationRepr", into = "ConfigurationRepr")
)]
pub struct Configuration {
    group: AbelianGroup,
    degree: DegreeVector,
    points: Vec<GroupElement>,
}

/// Wire form: blocks nested, elements as flat coordinate arrays.
#[derive(Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
struct ConfigurationRepr {
    group: AbelianGroup,
    degree: DegreeVector,
    blocks: Vec<Vec<GroupElement>>,
}

impl TryFrom<ConfigurationRepr> for Configuration {
    type Error = Error;
    fn try_from(r: ConfigurationRepr) -> Result<Self> {
        for (k, block) in r.blocks.iter().enumerate() {
            let want = r.degree.parts().get(k).map(|&d| 2 * d as usize);
            if want != Some(block.len()) {
                return Err(Error::PointCountMismatch {
                    expected: want.unwrap_or(0),
                    got: block.len(),
                });
            }
        }
        let points = r.blocks.into_iter().flatten().collect();
        Configuration::new(r.group, r.degree, points)
    }
}

impl From<Configuration> for ConfigurationRepr {
    fn from(c: Configuration) -> Self {
        let blocks = (0..c.degree.num_blocks())
            .map(|k| c.points[c.degree.block_range(k)].to_vec())
            .collect();
        ConfigurationRepr {
            group: c.group,
            degree: c.degree,
            blocks,
        }
    }
}

impl Configuration {
    pub fn new(
        group: AbelianGroup,
        degree: DegreeVector,
        points: Vec<GroupElement>,
    ) -> Result<Self> {
        if points.len() != degree.index_count() {
            return Err(Error::PointCountMismatch {
                expected: degree.index_count(),
                got: points.len(),
            });
        }
        // normalize every point through the group so comparisons are canonical
        let points = points
            .into_iter()
            .map(|p| group.element(p.coords().to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Configuration {
            group,
            degree,
            points,
        })
    }

    /// Convenience constructor from raw coordinate lists, one list per block.
    pub fn from_blocks(
        group: AbelianGroup,
        degree: DegreeVector,
        blocks: &[Vec<Vec<i64>>],
    ) -> Result<Self> {
        let mut points = Vec::with_capacity(degree.index_count());
        for block in blocks {
            for coords in block {
                points.push(group.element(coords.clone())?);
            }
        }
        Configuration::new(group, degree, points)
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn degree(&self) -> &DegreeVector {
        &self.degree
    }

    pub fn points(&self) -> &[GroupElement] {
        &self.points
    }

    pub fn block_points(&self, k: usize) -> &[GroupElement] {
        &self.points[self.degree.block_range(k)]
    }

    pub fn total_sum(&self) -> GroupElement {
        self.group
            .sum(&self.points)
            .expect("points validated at construction")
    }

    pub fn total_sum_zero(&self) -> bool {
        self.group.is_identity(&self.total_sum())
    }
}

/// True iff two points within the same block coincide. Equal points in
/// different blocks are allowed.
pub fn is_on_diagonal(c: &Configuration) -> bool {
    (0..c.degree().num_blocks()).any(|k| {
        let pts = c.block_points(k);
        let mut sorted: Vec<&GroupElement> = pts.iter().collect();
        sorted.sort();
        sorted.windows(2).any(|w| w[0] == w[1])
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CountMethod {
    Naive,
    MeetInMiddle,
}

/// Result of a count: the exact 𝔛 plus the two validity flags. A false
/// `total_sum_zero` does not stop the count (search intermediates need it)
/// but voids the geometric interpretation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct XiCount {
    pub xi: u64,
    pub total_sum_zero: bool,
    pub on_diagonal: bool,
}

/// Per-block sums: entry k lists, for each of the C(2d_k, d_k) in-block choices in
/// lexicographic order, the sum of the chosen points.
fn block_sum_tables(c: &Configuration) -> Vec<Vec<GroupElement>> {
    let g = c.group();
    c.degree()
        .parts()
        .iter()
        .enumerate()
        .map(|(k, &dk)| {
            let pts = c.block_points(k);
            Combinations::new(2 * dk as usize, dk as usize)
                .map(|choice| {
                    g.sum(choice.iter().map(|&i| &pts[i]))
                        .expect("block points share the group")
                })
                .collect()
        })
        .collect()
}

fn count_naive(group: &AbelianGroup, tables: &[Vec<GroupElement>]) -> u64 {
    fn go(group: &AbelianGroup, tables: &[Vec<GroupElement>], acc: &GroupElement) -> u64 {
        match tables.split_first() {
            None => u64::from(group.is_identity(acc)),
            Some((head, rest)) => head
                .iter()
                .map(|s| go(group, rest, &group.add(acc, s).expect("validated")))
                .sum(),
        }
    }
    go(group, tables, &group.identity())
}

/// Splits the block list so the two sides have choice products as close as possible.
fn balanced_split(tables: &[Vec<GroupElement>]) -> usize {
    let total: u128 = tables.iter().map(|t| t.len() as u128).product();
    let mut best = (0usize, u128::MAX);
    let mut left: u128 = 1;
    for split in 0..=tables.len() {
        let right = total / left.max(1);
        let imbalance = left.abs_diff(right);
        if imbalance < best.1 {
            best = (split, imbalance);
        }
        if split < tables.len() {
            left *= tables[split].len() as u128;
        }
    }
    best.0
}

fn count_meet_in_middle(group: &AbelianGroup, tables: &[Vec<GroupElement>]) -> u64 {
    let split = balanced_split(tables);
    let (left, right) = tables.split_at(split);
    // tabulate the right half: sum -> multiplicity
    let mut table: BTreeMap<GroupElement, u64> = BTreeMap::new();
    fn fill(
        group: &AbelianGroup,
        tables: &[Vec<GroupElement>],
        acc: &GroupElement,
        out: &mut BTreeMap<GroupElement, u64>,
    ) {
        match tables.split_first() {
            None => *out.entry(acc.clone()).or_insert(0) += 1,
            Some((head, rest)) => {
                for s in head {
                    fill(group, rest, &group.add(acc, s).expect("validated"), out);
                }
            }
        }
    }
    fill(group, right, &group.identity(), &mut table);

    fn walk(
        group: &AbelianGroup,
        tables: &[Vec<GroupElement>],
        acc: &GroupElement,
        table: &BTreeMap<GroupElement, u64>,
    ) -> u64 {
        match tables.split_first() {
            None => {
                let need = group.neg(acc).expect("validated");
                table.get(&need).copied().unwrap_or(0)
            }
            Some((head, rest)) => head
                .iter()
                .map(|s| walk(group, rest, &group.add(acc, s).expect("validated"), table))
                .sum(),
        }
    }
    walk(group, left, &group.identity(), &table)
}

/// 𝔛(X): the number of relations I with Σ_{i∈I} x_i = 0. Both methods are exact
/// and agree; meet-in-the-middle trades memory for roughly the square root of the
/// naive loop count.
pub fn count_xi(c: &Configuration, method: CountMethod) -> XiCount {
    let tables = block_sum_tables(c);
    let xi = match method {
        CountMethod::Naive => count_naive(c.group(), &tables),
        CountMethod::MeetInMiddle => count_meet_in_middle(c.group(), &tables),
    };
    XiCount {
        xi,
        total_sum_zero: c.total_sum_zero(),
        on_diagonal: is_on_diagonal(c),
    }
}

/// Partial naive count restricted to one choice of the first block, for
/// data-parallel consumers; summing over `0..first_block_choice_count(d)`
/// reproduces `count_xi(..., Naive)`.
pub fn count_xi_first_choice(c: &Configuration, first_choice: u64) -> u64 {
    let tables = block_sum_tables(c);
    let Some(start) = tables[0].get(first_choice as usize) else {
        return 0;
    };
    fn go(group: &AbelianGroup, tables: &[Vec<GroupElement>], acc: &GroupElement) -> u64 {
        match tables.split_first() {
            None => u64::from(group.is_identity(acc)),
            Some((head, rest)) => head
                .iter()
                .map(|s| go(group, rest, &group.add(acc, s).expect("validated")))
                .sum(),
        }
    }
    go(c.group(), &tables[1..], start)
}

/// The set ℐ_X of relations satisfied by the configuration.
pub fn satisfied_relations(c: &Configuration) -> Vec<Relation> {
    crate::relations::enumerate_relations(c.degree())
        .filter(|rel| {
            let s = c
                .group()
                .sum(rel.indices().iter().map(|&i| &c.points()[i as usize]))
                .expect("validated");
            c.group().is_identity(&s)
        })
        .collect()
}

/// Branch data of a bielliptic tower, reduced to group terms: the 2t points of Δ′,
/// the 2(g−t) points of Δ″, and the images of δ, δ′ under a fixed origin. The
/// caller performs any Abel–Jacobi identification; this type never does.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(try_from = "BiellipticRepr", into = "BiellipticRepr")
)]
pub struct BiellipticData {
    group: AbelianGroup,
    t: u32,
    g: u32,
    delta_prime_points: Vec<GroupElement>,
    delta_dprime_points: Vec<GroupElement>,
    delta: GroupElement,
    delta_prime: GroupElement,
}

#[derive(Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
struct BiellipticRepr {
    group: AbelianGroup,
    t: u32,
    g: u32,
    delta_prime_points: Vec<GroupElement>,
    delta_dprime_points: Vec<GroupElement>,
    delta: GroupElement,
    delta_prime: GroupElement,
}

impl TryFrom<BiellipticRepr> for BiellipticData {
    type Error = Error;
    fn try_from(r: BiellipticRepr) -> Result<Self> {
        BiellipticData::new(
            r.group,
            r.t,
            r.g,
            r.delta_prime_points,
            r.delta_dprime_points,
            r.delta,
            r.delta_prime,
        )
    }
}

impl From<BiellipticData> for BiellipticRepr {
    fn from(b: BiellipticData) -> Self {
        BiellipticRepr {
            group: b.group,
            t: b.t,
            g: b.g,
            delta_prime_points: b.delta_prime_points,
            delta_dprime_points: b.delta_dprime_points,
            delta: b.delta,
            delta_prime: b.delta_prime,
        }
    }
}

impl BiellipticData {
    pub fn new(
        group: AbelianGroup,
        t: u32,
        g: u32,
        delta_prime_points: Vec<GroupElement>,
        delta_dprime_points: Vec<GroupElement>,
        delta: GroupElement,
        delta_prime: GroupElement,
    ) -> Result<Self> {
        if 2 * t > g {
            return Err(Error::TOutOfRange { g, t });
        }
        if delta_prime_points.len() != 2 * t as usize {
            return Err(Error::DivisorDegreeMismatch {
                expected: 2 * t as usize,
                got: delta_prime_points.len(),
            });
        }
        if delta_dprime_points.len() != 2 * (g - t) as usize {
            return Err(Error::DivisorDegreeMismatch {
                expected: 2 * (g - t) as usize,
                got: delta_dprime_points.len(),
            });
        }
        let delta_prime_points = delta_prime_points
            .into_iter()
            .map(|p| group.element(p.coords().to_vec()))
            .collect::<Result<Vec<_>>>()?;
        let delta_dprime_points = delta_dprime_points
            .into_iter()
            .map(|p| group.element(p.coords().to_vec()))
            .collect::<Result<Vec<_>>>()?;
        let delta = group.element(delta.coords().to_vec())?;
        let delta_prime = group.element(delta_prime.coords().to_vec())?;

        // Δ′ ∈ |2δ′| and Δ″ ∈ |2δ″| with δ″ = δ − δ′
        let sum_prime = group.sum(&delta_prime_points)?;
        if sum_prime != group.scale(2, &delta_prime)? {
            return Err(Error::BiellipticInvariant(
                "sum of delta-prime points is not 2*delta_prime",
            ));
        }
        let delta_dprime = group.sub(&delta, &delta_prime)?;
        let sum_dprime = group.sum(&delta_dprime_points)?;
        if sum_dprime != group.scale(2, &delta_dprime)? {
            return Err(Error::BiellipticInvariant(
                "sum of delta-double-prime points is not 2*(delta - delta_prime)",
            ));
        }
        Ok(BiellipticData {
            group,
            t,
            g,
            delta_prime_points,
            delta_dprime_points,
            delta,
            delta_prime,
        })
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }
    pub fn t(&self) -> u32 {
        self.t
    }
    pub fn g(&self) -> u32 {
        self.g
    }
    pub fn delta(&self) -> &GroupElement {
        &self.delta
    }
    pub fn delta_prime(&self) -> &GroupElement {
        &self.delta_prime
    }
    pub fn delta_prime_points(&self) -> &[GroupElement] {
        &self.delta_prime_points
    }
    pub fn delta_dprime_points(&self) -> &[GroupElement] {
        &self.delta_dprime_points
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BiellipticCounts {
    pub xi: u64,
    pub xi_tilde: u64,
}

/// Sums of all size-`take` index-subsets of `points`, as a multiset keyed by value.
fn subset_sum_table(
    group: &AbelianGroup,
    points: &[GroupElement],
    take: usize,
) -> BTreeMap<GroupElement, u64> {
    let mut out = BTreeMap::new();
    for choice in Combinations::new(points.len(), take) {
        let s = group
            .sum(choice.iter().map(|&i| &points[i]))
            .expect("validated");
        *out.entry(s).or_insert(0) += 1;
    }
    out
}

/// 𝔛 and 𝔛̃ of bielliptic data:
/// 𝔛 counts index-subset pairs (S′ of size t from Δ′, S″ of size g−t from Δ″) with
/// ΣS′ + ΣS″ = δ; 𝔛̃ subtracts the split pairs with ΣS′ = δ′ (hence ΣS″ = δ − δ′).
/// Subsets are index-subsets: repeated group values count per occurrence.
pub fn count_xi_bielliptic(b: &BiellipticData) -> BiellipticCounts {
    let g = b.group();
    let prime = subset_sum_table(g, b.delta_prime_points(), b.t() as usize);
    let dprime = subset_sum_table(g, b.delta_dprime_points(), (b.g() - b.t()) as usize);
    let mut xi: u64 = 0;
    for (s, n) in &prime {
        let need = g.sub(b.delta(), s).expect("validated");
        if let Some(m) = dprime.get(&need) {
            xi += n * m;
        }
    }
    let delta_dprime = g.sub(b.delta(), b.delta_prime()).expect("validated");
    let split = prime.get(b.delta_prime()).copied().unwrap_or(0)
        * dprime.get(&delta_dprime).copied().unwrap_or(0);
    BiellipticCounts {
        xi,
        xi_tilde: xi - split,
    }
}

/// Hyperellipticity of the intermediate curve of genus t+1 attached to Δ′:
/// always for t = 1, never for t ≥ 3, and for t = 2 exactly when some
/// degree-2 subdivisor of Δ′ is linearly equivalent to δ′, i.e. some pair of
/// Δ′-points sums to δ′.
pub fn cprime_is_hyperelliptic(b: &BiellipticData) -> bool {
    match b.t() {
        1 => true,
        2 => {
            let pts = b.delta_prime_points();
            let g = b.group();
            (0..pts.len()).any(|i| {
                (i + 1..pts.len())
                    .any(|j| g.add(&pts[i], &pts[j]).expect("validated") == *b.delta_prime())
            })
        }
        _ => false,
    }
}

/// The explicit maximizing configuration for d̲ = (1,…,1): for even g every block is
/// {0,1} in ℤ₂ and 𝔛 = 2^{g−1}; for odd g every block is {1,2} in ℤ₃ and
/// 𝔛 = (2^g − 2)/3. Both have zero total sum. Returns the configuration together
/// with the predicted count.
pub fn varley_configuration(g: u32) -> Result<(Configuration, u64)> {
    if g == 0 || g > 63 {
        // the predicted count leaves u64 beyond 63
        return Err(Error::GenusOutOfRange { min: 1, got: g });
    }
    let degree = DegreeVector::new(alloc::vec![1; g as usize])?;
    if g.is_multiple_of(2) {
        let group = AbelianGroup::cyclic(2)?;
        let block = alloc::vec![alloc::vec![0i64], alloc::vec![1]];
        let blocks = alloc::vec![block; g as usize];
        let c = Configuration::from_blocks(group, degree, &blocks)?;
        Ok((c, 1u64 << (g - 1)))
    } else {
        let group = AbelianGroup::cyclic(3)?;
        let block = alloc::vec![alloc::vec![1i64], alloc::vec![2]];
        let blocks = alloc::vec![block; g as usize];
        let c = Configuration::from_blocks(group, degree, &blocks)?;
        Ok((c, ((1u64 << g) - 2) / 3))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(torsion: &[i64], parts: &[u32], blocks: &[&[&[i64]]]) -> Configuration {
        let group = AbelianGroup::torsion_product(torsion).unwrap();
        let degree = DegreeVector::new(parts.to_vec()).unwrap();
        let blocks: Vec<Vec<Vec<i64>>> = blocks
            .iter()
            .map(|b| b.iter().map(|c| c.to_vec()).collect())
            .collect();
        Configuration::from_blocks(group, degree, &blocks).unwrap()
    }

    #[test]
    fn diagonal_detection() {
        let c = config(&[3], &[1], &[&[&[1], &[1]]]);
        assert!(is_on_diagonal(&c));
        let c = config(&[3], &[1, 1], &[&[&[1], &[2]], &[&[1], &[2]]]);
        assert!(!is_on_diagonal(&c));
        let c = config(&[4], &[2], &[&[&[0], &[1], &[2], &[3]]]);
        assert!(!is_on_diagonal(&c));
    }

    #[test]
    fn xi_of_z3_table_row() {
        let c = config(
            &[3],
            &[1, 1, 1, 1, 1],
            &[
                &[&[0], &[1]],
                &[&[0], &[1]],
                &[&[0], &[1]],
                &[&[0], &[1]],
                &[&[0], &[2]],
            ],
        );
        let n = count_xi(&c, CountMethod::Naive);
        let m = count_xi(&c, CountMethod::MeetInMiddle);
        assert_eq!(n, m);
        assert_eq!(n.xi, 10);
        assert!(n.total_sum_zero);
        assert!(!n.on_diagonal);
    }

    #[test]
    fn xi_of_z14_fixture() {
        let pts: Vec<Vec<i64>> = [9, 4, 11, 6, 7, 10, 3, 0, 8, 12]
            .iter()
            .map(|&x| alloc::vec![x])
            .collect();
        let refs: Vec<&[i64]> = pts.iter().map(|v| v.as_slice()).collect();
        let c = config(&[14], &[5], &[&refs]);
        assert_eq!(count_xi(&c, CountMethod::Naive).xi, 20);
        assert_eq!(count_xi(&c, CountMethod::MeetInMiddle).xi, 20);
    }

    #[test]
    fn xi_of_minimal_pair() {
        let c = config(&[3], &[1], &[&[&[1], &[2]]]);
        let n = count_xi(&c, CountMethod::Naive);
        assert_eq!(n.xi, 0);
        assert!(n.total_sum_zero);
    }

    #[test]
    fn first_choice_partials_sum_to_total() {
        let c = config(&[5], &[2, 1], &[&[&[0], &[1], &[2], &[4]], &[&[1], &[2]]]);
        let total = count_xi(&c, CountMethod::Naive).xi;
        let sharded: u64 = (0..6).map(|s| count_xi_first_choice(&c, s)).sum();
        assert_eq!(total, sharded);
    }

    #[test]
    fn bielliptic_z5_pairs() {
        let g = AbelianGroup::cyclic(5).unwrap();
        let e = |x: i64| g.element(alloc::vec![x]).unwrap();
        let b = BiellipticData::new(
            g.clone(),
            1,
            2,
            alloc::vec![e(1), e(4)],
            alloc::vec![e(2), e(3)],
            e(0),
            e(0),
        )
        .unwrap();
        let counts = count_xi_bielliptic(&b);
        assert_eq!(counts, BiellipticCounts { xi: 0, xi_tilde: 0 });
    }

    #[test]
    fn bielliptic_invariant_checked() {
        let g = AbelianGroup::cyclic(5).unwrap();
        let e = |x: i64| g.element(alloc::vec![x]).unwrap();
        // sum of delta-prime points is 3, not 2*delta_prime = 0
        let bad = BiellipticData::new(
            g.clone(),
            1,
            2,
            alloc::vec![e(1), e(2)],
            alloc::vec![e(2), e(3)],
            e(0),
            e(0),
        );
        assert!(matches!(bad, Err(Error::BiellipticInvariant(_))));
    }

    #[test]
    fn varley_small_counts() {
        for (g, want) in [(1, 0), (2, 2), (3, 2), (4, 8), (5, 10), (6, 32), (7, 42)] {
            let (c, predicted) = varley_configuration(g).unwrap();
            assert_eq!(predicted, want, "g = {g}");
            assert!(c.total_sum_zero());
            assert!(!is_on_diagonal(&c));
            assert_eq!(count_xi(&c, CountMethod::MeetInMiddle).xi, want, "g = {g}");
        }
        assert!(varley_configuration(0).is_err());
    }

    #[test]
    fn cprime_hyperelliptic_criterion() {
        let g = AbelianGroup::cyclic(7).unwrap();
        let e = |x: i64| g.element(alloc::vec![x]).unwrap();
        // t = 2, delta_prime = 3, pair (1, 2) sums to it
        let b = BiellipticData::new(
            g.clone(),
            2,
            4,
            alloc::vec![e(1), e(2), e(0), e(3)],
            alloc::vec![e(0), e(1), e(6), e(2)],
            e(4),
            e(3),
        )
        .unwrap();
        assert!(cprime_is_hyperelliptic(&b));
        // t = 2, delta_prime = 0, and no pair of {0,1,2,4} sums to 0 mod 7
        let b2 = BiellipticData::new(
            g.clone(),
            2,
            4,
            alloc::vec![e(0), e(1), e(2), e(4)],
            alloc::vec![e(0), e(1), e(2), e(6)],
            e(1),
            e(0),
        )
        .unwrap();
        assert!(!cprime_is_hyperelliptic(&b2));
    }
}
