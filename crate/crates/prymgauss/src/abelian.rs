//! Finitely generated abelian groups ℤ^r × ℤ_{m₁} × … × ℤ_{m_s} and their elements.
//!
//! These are the ambient groups for point configurations: torsion subgroups of an
//! elliptic curve and finite subgroups of ℂ* are both covered by the same signature.
//! Elements are stored in canonical reduced form (torsion coordinate i in `[0, m_i)`),
//! so equality, ordering and map keys are plain coordinate comparisons.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Group signature: free rank followed by a list of torsion moduli (each ≥ 2).
///
/// The torsion moduli are kept exactly as given (ℤ₂×ℤ₆ stays ℤ₂×ℤ₆, not ℤ₂×ℤ₂×ℤ₃
/// or ℤ₁₂), so group descriptions round-trip literally.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "GroupRepr", into = "GroupRepr"))]
pub struct AbelianGroup {
    free_rank: usize,
    torsion: Vec<i64>,
}

#[derive(Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
struct GroupRepr {
    free_rank: usize,
    torsion: Vec<i64>,
}

impl TryFrom<GroupRepr> for AbelianGroup {
    type Error = Error;
    fn try_from(r: GroupRepr) -> Result<Self> {
        AbelianGroup::new(r.free_rank, r.torsion)
    }
}

impl From<AbelianGroup> for GroupRepr {
    fn from(g: AbelianGroup) -> Self {
        GroupRepr {
            free_rank: g.free_rank,
            torsion: g.torsion,
        }
    }
}

/// Element of an [`AbelianGroup`]: free coordinates first, then reduced torsion
/// coordinates. Serializes as a flat integer array.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct GroupElement {
    coords: Vec<i64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl AbelianGroup {
    pub fn new(free_rank: usize, torsion: Vec<i64>) -> Result<Self> {
        if let Some(&m) = torsion.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidTorsionModulus(m));
        }
        Ok(AbelianGroup { free_rank, torsion })
    }

    /// ℤ_m.
    pub fn cyclic(m: i64) -> Result<Self> {
        Self::new(0, alloc::vec![m])
    }

    /// ℤ_{m₁} × … × ℤ_{m_s}.
    pub fn torsion_product(moduli: &[i64]) -> Result<Self> {
        Self::new(0, moduli.to_vec())
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[i64] {
        &self.torsion
    }

    /// Number of coordinates of an element.
    pub fn dim(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order; `None` when the free rank is positive or the product overflows u128.
    pub fn order(&self) -> Option<u128> {
        if !self.is_finite() {
            return None;
        }
        self.torsion
            .iter()
            .try_fold(1u128, |acc, &m| acc.checked_mul(m as u128))
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            coords: alloc::vec![0; self.dim()],
        }
    }

    /// Builds an element from raw coordinates, reducing torsion coordinates mod m_i.
    pub fn element(&self, coords: Vec<i64>) -> Result<GroupElement> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: coords.len(),
            });
        }
        let mut coords = coords;
        for (c, &m) in coords[self.free_rank..].iter_mut().zip(&self.torsion) {
            *c = c.rem_euclid(m);
        }
        Ok(GroupElement { coords })
    }

    fn check(&self, a: &GroupElement) -> Result<()> {
        if a.coords.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: a.coords.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        let mut coords = Vec::with_capacity(self.dim());
        for i in 0..self.free_rank {
            coords.push(a.coords[i] + b.coords[i]);
        }
        for (i, &m) in self.torsion.iter().enumerate() {
            let j = self.free_rank + i;
            // widen: the sum of two reduced coordinates can pass i64 for huge moduli
            let s = i128::from(a.coords[j]) + i128::from(b.coords[j]);
            coords.push(s.rem_euclid(i128::from(m)) as i64);
        }
        Ok(GroupElement { coords })
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        let mut coords = Vec::with_capacity(self.dim());
        for i in 0..self.free_rank {
            coords.push(-a.coords[i]);
        }
        for (i, &m) in self.torsion.iter().enumerate() {
            coords.push((-a.coords[self.free_rank + i]).rem_euclid(m));
        }
        Ok(GroupElement { coords })
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    /// Fold of [`AbelianGroup::add`]; the empty sequence yields the identity.
    pub fn sum<'a, I>(&self, elems: I) -> Result<GroupElement>
    where
        I: IntoIterator<Item = &'a GroupElement>,
    {
        let mut acc = self.identity();
        for e in elems {
            acc = self.add(&acc, e)?;
        }
        Ok(acc)
    }

    pub fn is_identity(&self, a: &GroupElement) -> bool {
        a.coords.iter().all(|&c| c == 0)
    }

    /// Yields each element exactly once, in lexicographic coordinate order.
    /// Errors on infinite groups.
    pub fn enumerate_elements(&self) -> Result<ElementIter<'_>> {
        if !self.is_finite() {
            return Err(Error::NotEnumerable);
        }
        Ok(ElementIter {
            group: self,
            next: Some(alloc::vec![0; self.torsion.len()]),
        })
    }

    /// Scales an element by an integer (repeated addition done coordinate-wise).
    pub fn scale(&self, n: i64, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        let mut coords = Vec::with_capacity(self.dim());
        for i in 0..self.free_rank {
            coords.push(n * a.coords[i]);
        }
        for (i, &m) in self.torsion.iter().enumerate() {
            // widen: k * a can pass i64 even with both factors reduced
            let prod = i128::from(n.rem_euclid(m)) * i128::from(a.coords[self.free_rank + i]);
            coords.push(prod.rem_euclid(i128::from(m)) as i64);
        }
        Ok(GroupElement { coords })
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if self.free_rank > 0 {
            write!(f, "Z^{}", self.free_rank)?;
            first = false;
        }
        for &m in &self.torsion {
            if !first {
                write!(f, "x")?;
            }
            write!(f, "Z{m}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub struct ElementIter<'a> {
    group: &'a AbelianGroup,
    next: Option<Vec<i64>>,
}

impl Iterator for ElementIter<'_> {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        // odometer increment, last coordinate fastest
        let mut pos = succ.len();
        loop {
            if pos == 0 {
                break; // wrapped: enumeration finished
            }
            pos -= 1;
            succ[pos] += 1;
            if succ[pos] < self.group.torsion[pos] {
                self.next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(GroupElement { coords: current })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: i64) -> AbelianGroup {
        AbelianGroup::cyclic(m).unwrap()
    }

    #[test]
    fn add_reduces_mod_torsion() {
        let g = z(3);
        let a = g.element(alloc::vec![1]).unwrap();
        let b = g.element(alloc::vec![2]).unwrap();
        assert_eq!(g.add(&a, &b).unwrap(), g.identity());
    }

    #[test]
    fn add_componentwise() {
        let g = AbelianGroup::torsion_product(&[2, 6]).unwrap();
        let a = g.element(alloc::vec![1, 4]).unwrap();
        let b = g.element(alloc::vec![1, 5]).unwrap();
        assert_eq!(
            g.add(&a, &b).unwrap(),
            g.element(alloc::vec![0, 3]).unwrap()
        );
    }

    #[test]
    fn free_part_inverse() {
        let g = AbelianGroup::new(1, alloc::vec![]).unwrap();
        let a = g.element(alloc::vec![7]).unwrap();
        let b = g.element(alloc::vec![-7]).unwrap();
        assert_eq!(g.add(&a, &b).unwrap(), g.identity());
    }

    #[test]
    fn sum_of_z14_fixture_vanishes() {
        let g = z(14);
        let pts: Vec<GroupElement> = [9, 4, 11, 6, 7, 10, 3, 0, 8, 12]
            .iter()
            .map(|&x| g.element(alloc::vec![x]).unwrap())
            .collect();
        assert!(g.is_identity(&g.sum(&pts).unwrap()));
    }

    #[test]
    fn empty_sum_is_identity() {
        let g = AbelianGroup::torsion_product(&[2, 6]).unwrap();
        assert_eq!(g.sum([]).unwrap(), g.identity());
    }

    #[test]
    fn enumerate_lexicographic() {
        let g = AbelianGroup::torsion_product(&[2, 2]).unwrap();
        let all: Vec<_> = g.enumerate_elements().unwrap().collect();
        let want: Vec<_> = [[0, 0], [0, 1], [1, 0], [1, 1]]
            .iter()
            .map(|c| g.element(c.to_vec()).unwrap())
            .collect();
        assert_eq!(all, want);
    }

    #[test]
    fn enumerate_infinite_errors() {
        let g = AbelianGroup::new(1, alloc::vec![]).unwrap();
        assert_eq!(g.enumerate_elements().err(), Some(Error::NotEnumerable));
    }

    #[test]
    fn dimension_mismatch_detected() {
        let g = z(3);
        let h = AbelianGroup::torsion_product(&[2, 2]).unwrap();
        let a = h.element(alloc::vec![1, 1]).unwrap();
        assert!(matches!(g.neg(&a), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn modulus_below_two_rejected() {
        assert!(AbelianGroup::cyclic(1).is_err());
        assert!(AbelianGroup::torsion_product(&[3, 0]).is_err());
    }

    #[test]
    fn order_is_product_of_moduli() {
        assert_eq!(
            AbelianGroup::torsion_product(&[2, 6]).unwrap().order(),
            Some(12)
        );
        assert_eq!(AbelianGroup::new(2, alloc::vec![5]).unwrap().order(), None);
    }
}
