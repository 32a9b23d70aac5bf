//! Sparse exact linear algebra over the rationals.
//!
//! Plain fraction Gaussian elimination with deterministic pivoting: columns
//! are processed left to right and the pivot is the not-yet-used row with the
//! smallest index holding a nonzero entry. Solutions set all free variables
//! to zero, so solver output is reproducible across runs and platforms.

use std::collections::BTreeMap;

use crate::error::CoreError;
use crate::scalar::Scalar;

/// Sparse matrix; absent entries are zero, stored entries are nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_rows(data: Vec<Vec<Scalar>>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::zero(rows, cols);
        for (i, row) in data.into_iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.entries
            .get(&(r, c))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Scalar) {
        let mut cur = self.get(r, c);
        cur += v;
        self.set(r, c, cur);
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Matrix-vector product; `x` must have length `cols`.
    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![Scalar::zero(); self.rows];
        for ((r, c), v) in &self.entries {
            if !x[*c].is_zero() {
                out[*r] += &(v * &x[*c]);
            }
        }
        out
    }

    fn to_row_maps(&self) -> Vec<BTreeMap<usize, Scalar>> {
        let mut rows: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); self.rows];
        for ((r, c), v) in &self.entries {
            rows[*r].insert(*c, v.clone());
        }
        rows
    }

    /// Reduced row echelon form of `[self | rhs]`, eliminating sparsely.
    /// Returns (row maps after reduction, pivot list as (row, col) pairs,
    /// reduced rhs) where rhs columns ride along with the elimination.
    fn rref(
        &self,
        rhs: Option<&[Scalar]>,
    ) -> (
        Vec<BTreeMap<usize, Scalar>>,
        Vec<(usize, usize)>,
        Vec<Scalar>,
    ) {
        let mut rows = self.to_row_maps();
        let mut b: Vec<Scalar> = match rhs {
            Some(v) => v.to_vec(),
            None => vec![Scalar::zero(); self.rows],
        };
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut used = vec![false; self.rows];

        for col in 0..self.cols {
            // smallest-index unused row with a nonzero in this column
            let Some(p) = (0..self.rows)
                .find(|&r| !used[r] && rows[r].get(&col).is_some_and(|v| !v.is_zero()))
            else {
                continue;
            };
            used[p] = true;
            pivots.push((p, col));

            let inv = rows[p].get(&col).unwrap().recip();
            if !inv.is_one() {
                for v in rows[p].values_mut() {
                    *v *= &inv;
                }
                b[p] *= &inv;
            }
            let pivot_row = rows[p].clone();
            let pivot_b = b[p].clone();
            for r in 0..self.rows {
                if r == p {
                    continue;
                }
                let Some(f) = rows[r].get(&col).cloned() else {
                    continue;
                };
                if f.is_zero() {
                    continue;
                }
                for (c2, v2) in &pivot_row {
                    let mut cur = rows[r].get(c2).cloned().unwrap_or_else(Scalar::zero);
                    cur -= &(&f * v2);
                    if cur.is_zero() {
                        rows[r].remove(c2);
                    } else {
                        rows[r].insert(*c2, cur);
                    }
                }
                let delta = &f * &pivot_b;
                b[r] -= &delta;
            }
        }
        (rows, pivots, b)
    }

    pub fn rank(&self) -> usize {
        self.rref(None).1.len()
    }

    /// Exact basis of the null space; empty iff the map is injective.
    /// One basis vector per free column, in ascending column order, with the
    /// free coordinate set to 1.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let (rows, pivots, _) = self.rref(None);
        let mut pivot_of_col: BTreeMap<usize, usize> = BTreeMap::new();
        for (r, c) in &pivots {
            pivot_of_col.insert(*c, *r);
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col.contains_key(&free) {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (c, r) in &pivot_of_col {
                if let Some(coef) = rows[*r].get(&free) {
                    v[*c] = -coef;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Some `x` with `self * x = b`, or `None` if the system is inconsistent.
    /// Free variables are set to zero (lexicographically-first pivot solution).
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, CoreError> {
        if b.len() != self.rows {
            return Err(CoreError::DimensionMismatch(format!(
                "rhs length {} != rows {}",
                b.len(),
                self.rows
            )));
        }
        let (rows, pivots, rb) = self.rref(Some(b));
        // inconsistency: a zero row with nonzero rhs
        let mut pivot_rows = vec![false; self.rows];
        for (r, _) in &pivots {
            pivot_rows[*r] = true;
        }
        for r in 0..self.rows {
            if !pivot_rows[r] && rows[r].is_empty() && !rb[r].is_zero() {
                return Ok(None);
            }
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (r, c) in &pivots {
            x[*c] = rb[*r].clone();
        }
        Ok(Some(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn kernel_of_zero_map() {
        let m = SparseMatrix::zero(1, 1);
        assert_eq!(m.kernel_basis(), vec![vec![Scalar::one()]]);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let m = SparseMatrix::identity(2);
        assert!(m.kernel_basis().is_empty());
    }

    #[test]
    fn kernel_two_by_three() {
        // [[1,1,0],[0,1,1]] has null space spanned by (1,-1,1)
        let m = SparseMatrix::from_rows(vec![vec![s(1), s(1), s(0)], vec![s(0), s(1), s(1)]]);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        // proportional to (1,-1,1)
        assert!(!v[0].is_zero());
        let t = v[0].recip();
        let norm: Vec<Scalar> = v.iter().map(|x| x * &t).collect();
        assert_eq!(norm, vec![s(1), s(-1), s(1)]);
        // kernel vectors multiply to exactly zero
        assert_eq!(m.mul_vec(v), vec![s(0), s(0)]);
    }

    #[test]
    fn solve_identity() {
        let m = SparseMatrix::identity(2);
        let b = vec![Scalar::from_ratio(3, 2), s(-1)];
        let x = m.solve(&b).unwrap().unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_underdetermined_free_vars_zero() {
        let m = SparseMatrix::from_rows(vec![vec![s(1), s(1)]]);
        let x = m.solve(&[s(2)]).unwrap().unwrap();
        assert_eq!(x, vec![s(2), s(0)]);
    }

    #[test]
    fn solve_inconsistent() {
        let m = SparseMatrix::zero(1, 1);
        assert_eq!(m.solve(&[s(1)]).unwrap(), None);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let m = SparseMatrix::zero(2, 2);
        assert!(m.solve(&[s(1)]).is_err());
    }

    fn arb_matrix() -> impl Strategy<Value = SparseMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-4i64..4, r * c).prop_map(move |vals| {
                let data: Vec<Vec<Scalar>> = vals
                    .chunks(c)
                    .map(|row| row.iter().map(|&v| s(v)).collect())
                    .collect();
                SparseMatrix::from_rows(data)
            })
        })
    }

    proptest! {
        #[test]
        fn solved_systems_verify(m in arb_matrix(), seed in proptest::collection::vec(-3i64..3, 0..5)) {
            // build b in the column space so a solution must exist
            let mut x0 = vec![Scalar::zero(); m.cols()];
            for (i, v) in seed.iter().enumerate() {
                if i < x0.len() {
                    x0[i] = s(*v);
                }
            }
            let b = m.mul_vec(&x0);
            let x = m.solve(&b).unwrap().expect("consistent by construction");
            prop_assert_eq!(m.mul_vec(&x), b);
        }

        #[test]
        fn kernel_vectors_annihilate(m in arb_matrix()) {
            let zero = vec![Scalar::zero(); m.rows()];
            for v in m.kernel_basis() {
                prop_assert_eq!(m.mul_vec(&v), zero.clone());
            }
            // rank-nullity
            prop_assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
        }
    }
}
