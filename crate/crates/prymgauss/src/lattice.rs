//! Exact integer-matrix normal forms and row-lattice membership.
//!
//! Everything here runs over arbitrary-precision integers: the inputs are tiny 0/1
//! matrices but naive elimination can grow intermediate entries, and certification
//! tolerates no rounding. Smith invariants classify the row lattice; membership
//! queries go through a cached row-echelon (Hermite-style) form so that testing many
//! vectors against one lattice does the reduction once.

use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::relations::{DegreeVector, Relation};

/// Dense row-major integer matrix with exact entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::MatrixShapeMismatch {
                rows,
                cols,
                entries: entries.len(),
            });
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: alloc::vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::from(1);
        }
        m
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::MatrixShapeMismatch {
                rows: r,
                cols: c,
                entries: rows.iter().map(|row| row.len()).sum(),
            });
        }
        let entries = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
        IntMatrix::new(r, c, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row a -= q * row b
    fn row_sub_mul(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = q * self.at(b, j);
            *self.at_mut(a, j) -= delta;
        }
    }

    /// col a -= q * col b
    fn col_sub_mul(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = q * self.at(i, b);
            *self.at_mut(i, a) -= delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.at(i, j).clone();
            *self.at_mut(i, j) = v;
        }
    }
}

/// Position of a nonzero entry of minimal absolute value in the trailing
/// submatrix starting at (t, t).
fn min_pivot(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            let v = m.at(i, j);
            if v.is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some((bi, bj)) => {
                    if v.abs() < m.at(bi, bj).abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

/// Nonzero invariant factors d₁ | d₂ | … | d_r of the row lattice, and its rank r.
pub fn smith_invariants(m: &IntMatrix) -> (Vec<BigUint>, usize) {
    let mut w = m.clone();
    let n = w.rows().min(w.cols());
    let mut t = 0;
    while t < n {
        let Some((pi, pj)) = min_pivot(&w, t) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            // clear the pivot column, keeping remainders as new smaller pivots
            let mut dirty = false;
            for i in t + 1..w.rows() {
                if w.at(i, t).is_zero() {
                    continue;
                }
                let (q, r) = w.at(i, t).div_rem(w.at(t, t));
                w.row_sub_mul(i, t, &q);
                if !r.is_zero() {
                    w.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..w.cols() {
                if w.at(t, j).is_zero() {
                    continue;
                }
                let (q, r) = w.at(t, j).div_rem(w.at(t, t));
                w.col_sub_mul(j, t, &q);
                if !r.is_zero() {
                    w.swap_cols(t, j);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        if w.at(t, t).is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let rank = t;
    // enforce the divisibility chain d_i | d_{i+1}
    let mut diag: Vec<BigInt> = (0..rank).map(|i| w.at(i, i).clone()).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..rank.saturating_sub(1) {
            if !(&diag[i + 1] % &diag[i]).is_zero() {
                let g = diag[i].gcd(&diag[i + 1]);
                let l = (&diag[i] / &g) * &diag[i + 1];
                diag[i] = g;
                diag[i + 1] = l;
                changed = true;
            }
        }
    }
    let factors = diag
        .into_iter()
        .map(|d| d.to_biguint().expect("pivots normalized positive"))
        .collect();
    (factors, rank)
}

/// Row-echelon form of a set of generators, cached for repeated membership queries.
/// Rows are pivot-ordered: each stored row has a positive leading entry in a column
/// where all later rows are zero.
#[derive(Debug, Clone)]
pub struct LatticeBasis {
    cols: usize,
    /// (pivot column, row) pairs in increasing pivot column order
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl LatticeBasis {
    pub fn from_matrix(m: &IntMatrix) -> Self {
        let cols = m.cols();
        let mut work: Vec<Vec<BigInt>> = m.row_vecs();
        let mut out: Vec<(usize, Vec<BigInt>)> = Vec::new();
        let mut col = 0;
        let mut head = 0; // rows before head are consumed
        while col < cols && head < work.len() {
            loop {
                // pick the row with smallest nonzero |entry| in this column
                let mut pivot: Option<usize> = None;
                for (i, row) in work.iter().enumerate().skip(head) {
                    if row[col].is_zero() {
                        continue;
                    }
                    match pivot {
                        None => pivot = Some(i),
                        Some(p) => {
                            if row[col].abs() < work[p][col].abs() {
                                pivot = Some(i);
                            }
                        }
                    }
                }
                let Some(p) = pivot else { break };
                work.swap(head, p);
                let pivot_row = work[head].clone();
                let mut done = true;
                for row in work.iter_mut().skip(head + 1) {
                    if row[col].is_zero() {
                        continue;
                    }
                    let q = Integer::div_floor(&row[col], &pivot_row[col]);
                    for (w, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                        *w -= &q * p;
                    }
                    if !row[col].is_zero() {
                        done = false;
                    }
                }
                if done {
                    if work[head][col].is_negative() {
                        for v in work[head].iter_mut() {
                            *v = -core::mem::take(v);
                        }
                    }
                    out.push((col, work[head].clone()));
                    head += 1;
                    break;
                }
            }
            col += 1;
        }
        LatticeBasis { cols, rows: out }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// True iff `v` lies in the ℤ-row-span.
    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::VectorLengthMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let mut w = v.to_vec();
        for (pcol, row) in &self.rows {
            if w[*pcol].is_zero() {
                continue;
            }
            let (q, r) = w[*pcol].div_rem(&row[*pcol]);
            if !r.is_zero() {
                return Ok(false);
            }
            for j in *pcol..self.cols {
                let delta = &q * &row[j];
                w[j] -= delta;
            }
        }
        Ok(w.iter().all(|x| x.is_zero()))
    }
}

/// One-shot membership: `v` in the ℤ-row-span of `basis`.
pub fn lattice_contains(basis: &IntMatrix, v: &[BigInt]) -> Result<bool> {
    LatticeBasis::from_matrix(basis).contains(v)
}

/// The module M_ℐ = ⟨1̄, T_I : I ∈ ℐ⟩ ⊂ ℤ^{2g} presented by a matrix whose first row
/// is all ones and whose remaining rows are relation indicators in a deterministic
/// order (sorted by index set).
#[derive(Debug, Clone)]
pub struct RelationModule {
    degree: DegreeVector,
    relations: Vec<Relation>,
    matrix: IntMatrix,
}

pub fn build_relation_module(d: &DegreeVector, rels: &[Relation]) -> Result<RelationModule> {
    if let Some(bad) = rels.iter().find(|r| !r.is_valid_for(d)) {
        let _ = bad;
        return Err(Error::InvalidRelation);
    }
    let mut relations: Vec<Relation> = rels.to_vec();
    relations.sort();
    relations.dedup();
    let cols = d.index_count();
    let mut entries: Vec<BigInt> = Vec::with_capacity((relations.len() + 1) * cols);
    entries.extend((0..cols).map(|_| BigInt::from(1)));
    for rel in &relations {
        let mut row = alloc::vec![BigInt::zero(); cols];
        for &i in rel.indices() {
            row[i as usize] = BigInt::from(1);
        }
        entries.extend(row);
    }
    let matrix = IntMatrix::new(relations.len() + 1, cols, entries)?;
    Ok(RelationModule {
        degree: d.clone(),
        relations,
        matrix,
    })
}

impl RelationModule {
    pub fn degree(&self) -> &DegreeVector {
        &self.degree
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        LatticeBasis::from_matrix(&self.matrix).rank()
    }
}

/// True iff no forbidden difference e_i − e_j (i, j inside one block) lies in the
/// row lattice of the module. Realizable relation sets of off-diagonal zero-sum
/// configurations always pass.
pub fn obstruction_free(m: &RelationModule) -> bool {
    let basis = LatticeBasis::from_matrix(&m.matrix);
    let cols = m.matrix.cols();
    for k in 0..m.degree.num_blocks() {
        let range = m.degree.block_range(k);
        for i in range.clone() {
            for j in i + 1..range.end {
                let mut v = alloc::vec![BigInt::zero(); cols];
                v[i] = BigInt::from(1);
                v[j] = BigInt::from(-1);
                if basis.contains(&v).expect("length matches") {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn smith_of_identity() {
        let (factors, rank) = smith_invariants(&IntMatrix::identity(3));
        assert_eq!(rank, 3);
        assert!(factors.iter().all(|f| f == &BigUint::one()));
    }

    #[test]
    fn smith_of_zero() {
        let (factors, rank) = smith_invariants(&IntMatrix::zero(2, 5));
        assert_eq!(rank, 0);
        assert!(factors.is_empty());
    }

    #[test]
    fn smith_divisibility_chain() {
        // diag(2, 3) has invariants (1, 6)
        let m = IntMatrix::from_i64_rows(&[alloc::vec![2, 0], alloc::vec![0, 3]]).unwrap();
        let (factors, rank) = smith_invariants(&m);
        assert_eq!(rank, 2);
        assert_eq!(factors, alloc::vec![BigUint::one(), BigUint::from(6u32)]);
    }

    #[test]
    fn membership_basics() {
        let id = IntMatrix::identity(4);
        let v: Vec<BigInt> = [3, -7, 0, 2].iter().map(|&x| BigInt::from(x)).collect();
        assert!(lattice_contains(&id, &v).unwrap());

        let two_id = IntMatrix::from_i64_rows(&[alloc::vec![2, 0], alloc::vec![0, 2]]).unwrap();
        let e1: Vec<BigInt> = [1, 0].iter().map(|&x| BigInt::from(x)).collect();
        assert!(!lattice_contains(&two_id, &e1).unwrap());

        let short: Vec<BigInt> = alloc::vec![BigInt::one()];
        assert!(lattice_contains(&two_id, &short).is_err());
    }

    #[test]
    fn module_rows_for_single_block() {
        let d = DegreeVector::new(alloc::vec![1]).unwrap();
        let rel = Relation::try_from(alloc::vec![1u32]).unwrap();
        let m = build_relation_module(&d, &[rel]).unwrap();
        assert_eq!(m.matrix().rows(), 2);
        assert_eq!(m.matrix().row(0), &[BigInt::one(), BigInt::one()]);
        assert_eq!(m.matrix().row(1), &[BigInt::one(), BigInt::zero()]);
    }

    #[test]
    fn empty_relation_set_gives_all_ones_row() {
        let d = DegreeVector::new(alloc::vec![1, 1]).unwrap();
        let m = build_relation_module(&d, &[]).unwrap();
        assert_eq!(m.matrix().rows(), 1);
        assert_eq!(m.rank(), 1);
        assert!(obstruction_free(&m));
    }

    #[test]
    fn opposite_singletons_are_obstructed() {
        let d = DegreeVector::new(alloc::vec![1]).unwrap();
        let r1 = Relation::try_from(alloc::vec![1u32]).unwrap();
        let r2 = Relation::try_from(alloc::vec![2u32]).unwrap();
        let m = build_relation_module(&d, &[r1, r2]).unwrap();
        assert!(!obstruction_free(&m));
    }
}
