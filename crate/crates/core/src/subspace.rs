//! Canonical subspaces of V(n, q) and their lattice operations.
//!
//! A subspace is represented by the unique reduced row echelon basis of its
//! row space, so equality, hashing and deduplication are exact and cheap.
//! Meets and joins are computed by a single echelon pass over the Zassenhaus
//! double matrix.


use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};
use crate::matrix::{reduce_vector, MatrixGF};

/// A subspace of V(n, q), held as its canonical RREF basis (no zero rows).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    basis: MatrixGF,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} of V({}, {}))",
            self.dim(),
            self.ambient,
            self.basis.field().order()
        )
    }
}

impl Subspace {
    /// Canonical form of the row space of `rows`.
    pub fn from_rows(field: Arc<FieldSpec>, ambient: usize, rows: &[Vec<FieldElem>]) -> Result<Self> {
        let m = MatrixGF::from_rows(field, ambient, rows)?;
        Ok(Self::from_matrix(&m))
    }

    /// Canonical form of the row space of a matrix.
    pub fn from_matrix(m: &MatrixGF) -> Self {
        Subspace {
            ambient: m.col_count(),
            basis: m.rref().matrix,
        }
    }

    /// Wrap a matrix that is already in RREF with no zero rows.
    pub(crate) fn from_rref_unchecked(m: MatrixGF) -> Self {
        Subspace {
            ambient: m.col_count(),
            basis: m,
        }
    }

    pub fn zero(field: Arc<FieldSpec>, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: MatrixGF::zeros(field, 0, ambient),
        }
    }

    pub fn full(field: Arc<FieldSpec>, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: MatrixGF::identity(field, ambient),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.row_count()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        self.basis.field()
    }

    pub fn basis(&self) -> &MatrixGF {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Pivot columns of the canonical basis, strictly increasing.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|i| {
                self.basis
                    .row(i)
                    .iter()
                    .position(|e| !e.is_zero())
                    .expect("canonical basis has no zero rows")
            })
            .collect()
    }

    /// A compact canonical encoding, usable as an exact bucket key.
    pub fn encoding(&self) -> Vec<u32> {
        let mut key = Vec::with_capacity(2 + self.basis.data().len());
        key.push(self.ambient as u32);
        key.push(self.dim() as u32);
        key.extend(self.basis.data().iter().map(|e| e.0));
        key
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient || self.field() != other.field() {
            return Err(Error::AmbientMismatch(format!(
                "V({}, {}) vs V({}, {})",
                self.ambient,
                self.field().order(),
                other.ambient,
                other.field().order()
            )));
        }
        Ok(())
    }

    pub fn contains_vector(&self, v: &[FieldElem]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut w = v.to_vec();
        reduce_vector(&self.basis, &self.pivots(), &mut w);
        w.iter().all(|e| e.is_zero())
    }

    /// Whether `other` is a subspace of `self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && self.field() == other.field()
            && other.basis.rows_iter().all(|r| self.contains_vector(r))
    }

    /// S + U, canonical.
    pub fn join(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        Ok(Self::from_matrix(&self.basis.vstack(&other.basis)?))
    }

    /// S intersect U via the Zassenhaus double matrix.
    pub fn meet(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let f = self.field().clone();
        let n = self.ambient;
        let a = self.dim();
        let b = other.dim();
        let mut rows: Vec<Vec<FieldElem>> = Vec::with_capacity(a + b);
        for r in self.basis.rows_iter() {
            let mut row = vec![FieldElem::ZERO; 2 * n];
            row[..n].copy_from_slice(r);
            row[n..].copy_from_slice(r);
            rows.push(row);
        }
        for r in other.basis.rows_iter() {
            let mut row = vec![FieldElem::ZERO; 2 * n];
            row[..n].copy_from_slice(r);
            rows.push(row);
        }
        let double = MatrixGF::from_rows(f.clone(), 2 * n, &rows)?;
        let reduced = double.rref();
        // rows whose left half vanished carry an intersection basis on the right
        let mut meet_rows: Vec<Vec<FieldElem>> = Vec::new();
        for (i, &p) in reduced.pivots.iter().enumerate() {
            if p >= n {
                meet_rows.push(reduced.matrix.row(i)[n..].to_vec());
            }
        }
        Subspace::from_rows(f, n, &meet_rows)
    }

    /// dim(S + U) - dim(S intersect U), the subspace metric.
    pub fn distance(&self, other: &Subspace) -> Result<usize> {
        self.check_compatible(other)?;
        let join_dim = self.basis.vstack(&other.basis)?.rank();
        // delta = dim S + dim U - 2 dim(S cap U) = 2 dim(S+U) - dim S - dim U
        Ok(2 * join_dim - self.dim() - other.dim())
    }

    pub fn is_disjoint_from(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        let join_dim = self.basis.vstack(&other.basis)?.rank();
        Ok(join_dim == self.dim() + other.dim())
    }

    /// The deterministic complement of `inner` in `self`: the span of the
    /// canonical basis rows of `self` whose pivot is not a pivot of `inner`.
    pub fn complement_of(&self, inner: &Subspace) -> Result<Subspace> {
        self.check_compatible(inner)?;
        if !self.contains(inner) {
            return Err(Error::NotContained(
                "complement requires the inner space to lie in the outer".into(),
            ));
        }
        let inner_pivots = inner.pivots();
        let rows: Vec<Vec<FieldElem>> = (0..self.dim())
            .filter(|&i| {
                let p = self.basis.row(i).iter().position(|e| !e.is_zero()).unwrap();
                !inner_pivots.contains(&p)
            })
            .map(|i| self.basis.row(i).to_vec())
            .collect();
        let c = Subspace::from_rows(self.field().clone(), self.ambient, &rows)?;
        debug_assert_eq!(c.dim() + inner.dim(), self.dim());
        debug_assert!(c.meet(inner).unwrap().is_zero());
        Ok(c)
    }

    /// The span of the given canonical coordinates of the full space.
    pub fn coordinate_span(field: Arc<FieldSpec>, ambient: usize, coords: &[usize]) -> Subspace {
        let rows: Vec<Vec<FieldElem>> = coords
            .iter()
            .map(|&c| {
                let mut row = vec![FieldElem::ZERO; ambient];
                row[c] = FieldElem::ONE;
                row
            })
            .collect();
        Subspace::from_rows(field, ambient, &rows).expect("coordinate rows are well-formed")
    }

    /// Span of the first `k` standard coordinates.
    pub fn first_coordinates(field: Arc<FieldSpec>, ambient: usize, k: usize) -> Subspace {
        let coords: Vec<usize> = (0..k).collect();
        Self::coordinate_span(field, ambient, &coords)
    }
}

/// Whether the joint span has dimension equal to the sum of dimensions.
pub fn in_general_position(spaces: &[Subspace]) -> Result<bool> {
    let Some(first) = spaces.first() else {
        return Ok(true);
    };
    let mut stacked = first.basis().clone();
    let mut total = first.dim();
    for s in &spaces[1..] {
        first.check_compatible(s)?;
        stacked = stacked.vstack(s.basis())?;
        total += s.dim();
    }
    Ok(stacked.rank() == total)
}

/// Join of a whole family (the zero space for an empty family).
pub fn span_of(field: &Arc<FieldSpec>, ambient: usize, spaces: &[Subspace]) -> Result<Subspace> {
    let mut rows: Vec<Vec<FieldElem>> = Vec::new();
    for s in spaces {
        if s.ambient_dim() != ambient || s.field() != field {
            return Err(Error::AmbientMismatch("span over mixed ambients".into()));
        }
        rows.extend(s.basis().rows_iter().map(|r| r.to_vec()));
    }
    Subspace::from_rows(field.clone(), ambient, &rows)
}
