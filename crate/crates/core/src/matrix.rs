//! Dense exact matrices over GF(q), with reduced row echelon form, rank and
//! kernel computations. Everything is table-lookup field arithmetic; there is
//! no floating point and no pivoting heuristics to worry about.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};

/// A rows x cols matrix over a shared [`FieldSpec`], row-major.
#[derive(Clone)]
pub struct MatrixGF {
    field: Arc<FieldSpec>,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl fmt::Debug for MatrixGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixGF {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            writeln!(
                f,
                "  [{}]",
                self.row(i)
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            )?;
        }
        Ok(())
    }
}

impl PartialEq for MatrixGF {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}
impl Eq for MatrixGF {}

impl Hash for MatrixGF {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order().hash(state);
        self.rows.hash(state);
        self.cols.hash(state);
        for e in &self.data {
            e.0.hash(state);
        }
    }
}

impl PartialOrd for MatrixGF {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order by (field order, shape, entries); used to canonically sort
/// member lists so that output never depends on scheduling.
impl Ord for MatrixGF {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .order()
            .cmp(&other.field.order())
            .then_with(|| self.rows.cmp(&other.rows))
            .then_with(|| self.cols.cmp(&other.cols))
            .then_with(|| self.data.cmp(&other.data))
    }
}

/// Result of a reduced row echelon computation: the canonical form with zero
/// rows removed, its rank, and the strictly increasing pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: MatrixGF,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl MatrixGF {
    pub fn new(field: Arc<FieldSpec>, rows: usize, cols: usize, data: Vec<FieldElem>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length mismatch");
        debug_assert!(data.iter().all(|e| e.0 < field.order()));
        MatrixGF {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn zeros(field: Arc<FieldSpec>, rows: usize, cols: usize) -> Self {
        MatrixGF {
            field,
            rows,
            cols,
            data: vec![FieldElem::ZERO; rows * cols],
        }
    }

    pub fn identity(field: Arc<FieldSpec>, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, FieldElem::ONE);
        }
        m
    }

    pub fn from_rows(field: Arc<FieldSpec>, cols: usize, rows: &[Vec<FieldElem>]) -> Result<Self> {
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a {cols}-column matrix",
                    r.len()
                )));
            }
        }
        Ok(MatrixGF {
            field,
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn row_count(&self) -> usize {
        self.rows
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[FieldElem]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn data(&self) -> &[FieldElem] {
        &self.data
    }

    pub fn transpose(&self) -> MatrixGF {
        let mut out = Self::zeros(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Rows of `self` on top of rows of `other`.
    pub fn vstack(&self, other: &MatrixGF) -> Result<MatrixGF> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(MatrixGF {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn mul(&self, other: &MatrixGF) -> Result<MatrixGF> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(self.field.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// The unique reduced row echelon form with zero rows removed.
    pub fn rref(&self) -> Rref {
        let (r, _t, pivots) = self.rref_inner(false);
        let rank = pivots.len();
        Rref {
            matrix: r.take_rows(rank),
            rank,
            pivots,
        }
    }

    /// RREF together with the transform U satisfying `rref = U * self`
    /// (rows of U trimmed to the rank).
    pub fn rref_with_transform(&self) -> (Rref, MatrixGF) {
        let (r, t, pivots) = self.rref_inner(true);
        let rank = pivots.len();
        (
            Rref {
                matrix: r.take_rows(rank),
                rank,
                pivots: pivots.clone(),
            },
            t.unwrap().take_rows(rank),
        )
    }

    fn take_rows(&self, n: usize) -> MatrixGF {
        MatrixGF {
            field: self.field.clone(),
            rows: n,
            cols: self.cols,
            data: self.data[..n * self.cols].to_vec(),
        }
    }

    fn rref_inner(&self, with_transform: bool) -> (MatrixGF, Option<MatrixGF>, Vec<usize>) {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut t = with_transform.then(|| MatrixGF::identity(f.clone(), self.rows));
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            let Some(pivot_row) = (r..self.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pivot_row);
            if let Some(t) = t.as_mut() {
                t.swap_rows(r, pivot_row);
            }
            let scale = f.inv(m.get(r, c)).expect("pivot is nonzero");
            if scale != FieldElem::ONE {
                m.scale_row(r, scale);
                if let Some(t) = t.as_mut() {
                    t.scale_row(r, scale);
                }
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                m.sub_scaled_row(i, r, factor);
                if let Some(t) = t.as_mut() {
                    t.sub_scaled_row(i, r, factor);
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        (m, t, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, s: FieldElem) {
        for j in 0..self.cols {
            let v = self.field.mul(self.get(i, j), s);
            self.set(i, j, v);
        }
    }

    /// row_i -= factor * row_r
    fn sub_scaled_row(&mut self, i: usize, r: usize, factor: FieldElem) {
        for j in 0..self.cols {
            let v = self
                .field
                .sub(self.get(i, j), self.field.mul(factor, self.get(r, j)));
            self.set(i, j, v);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right null space `{x : M x^T = 0}`, rows as basis
    /// vectors, returned in RREF. Row count is cols - rank.
    pub fn kernel(&self) -> MatrixGF {
        let Rref {
            matrix: r,
            rank,
            pivots,
        } = self.rref();
        let f = &self.field;
        let mut free_cols: Vec<usize> = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for j in 0..self.cols {
            if !is_pivot[j] {
                free_cols.push(j);
            }
        }
        let mut rows: Vec<Vec<FieldElem>> = Vec::with_capacity(free_cols.len());
        for &fc in &free_cols {
            let mut v = vec![FieldElem::ZERO; self.cols];
            v[fc] = FieldElem::ONE;
            for i in 0..rank {
                v[pivots[i]] = f.neg(r.get(i, fc));
            }
            rows.push(v);
        }
        let naive = MatrixGF::from_rows(self.field.clone(), self.cols, &rows)
            .expect("kernel rows have matching width");
        naive.rref().matrix
    }
}

/// Reduce `v` against an RREF basis; returns the combination coefficients and
/// leaves the residual in `v` (zero iff `v` was in the row space).
pub(crate) fn reduce_vector(
    rref: &MatrixGF,
    pivots: &[usize],
    v: &mut [FieldElem],
) -> Vec<FieldElem> {
    let f = rref.field();
    let mut coeffs = Vec::with_capacity(pivots.len());
    for (i, &p) in pivots.iter().enumerate() {
        let c = v[p];
        coeffs.push(c);
        if c.is_zero() {
            continue;
        }
        for j in 0..rref.col_count() {
            v[j] = f.sub(v[j], f.mul(c, rref.get(i, j)));
        }
    }
    coeffs
}
