//! Quotient maps V/T with deterministic sections.
//!
//! Subspaces of V containing T correspond to subspaces of the quotient; the
//! section realizes the quotient concretely on the deterministic complement
//! of T in V (see [`Subspace::complement_of`]), so push/pull round-trips are
//! exact and reproducible.

use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::matrix::{reduce_vector, MatrixGF};
use crate::subspace::Subspace;

/// The projection V -> V/T together with its section.
///
/// The quotient is presented as the abstract space V(dim V - dim T, q); the
/// kernel of the projection is exactly T, and the image of the section is
/// the fixed complement of T in V.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    ambient: Subspace,
    modulus: Subspace,
    comp: Subspace,
    /// RREF of [T.basis; comp.basis] (equals the canonical basis of V).
    solve_rref: MatrixGF,
    solve_pivots: Vec<usize>,
    /// U with solve_rref = U * [T.basis; comp.basis].
    solve_transform: MatrixGF,
}

impl QuotientMap {
    /// The quotient of `ambient` by `modulus`; requires modulus to lie in
    /// ambient.
    pub fn new(ambient: Subspace, modulus: Subspace) -> Result<QuotientMap> {
        if !ambient.contains(&modulus) {
            return Err(Error::NotContained(
                "quotient modulus must lie in the ambient space".into(),
            ));
        }
        let comp = ambient.complement_of(&modulus)?;
        let stacked = modulus.basis().vstack(comp.basis())?;
        let (rref, transform) = stacked.rref_with_transform();
        debug_assert_eq!(rref.rank, ambient.dim());
        Ok(QuotientMap {
            ambient,
            modulus,
            comp,
            solve_rref: rref.matrix,
            solve_pivots: rref.pivots,
            solve_transform: transform,
        })
    }

    pub fn ambient(&self) -> &Subspace {
        &self.ambient
    }

    pub fn modulus(&self) -> &Subspace {
        &self.modulus
    }

    /// Dimension of the quotient space.
    pub fn quotient_dim(&self) -> usize {
        self.ambient.dim() - self.modulus.dim()
    }

    /// Coordinates of a vector of V over the basis [T rows; complement rows].
    fn coordinates(&self, v: &[FieldElem]) -> Result<Vec<FieldElem>> {
        let mut w = v.to_vec();
        let beta = reduce_vector(&self.solve_rref, &self.solve_pivots, &mut w);
        if !w.iter().all(|e| e.is_zero()) {
            return Err(Error::NotContained(
                "vector lies outside the quotient ambient".into(),
            ));
        }
        // v = beta * rref = beta * U * basis
        let f = self.solve_transform.field();
        let r = self.solve_transform.row_count();
        let mut alpha = vec![FieldElem::ZERO; r];
        for (i, &b) in beta.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            for j in 0..r {
                alpha[j] = f.add(alpha[j], f.mul(b, self.solve_transform.get(i, j)));
            }
        }
        Ok(alpha)
    }

    /// (A + T)/T as a subspace of the abstract quotient space.
    pub fn push(&self, a: &Subspace) -> Result<Subspace> {
        let tau = self.modulus.dim();
        let c = self.quotient_dim();
        let mut rows: Vec<Vec<FieldElem>> = Vec::with_capacity(a.dim());
        for row in a.basis().rows_iter() {
            let alpha = self.coordinates(row)?;
            rows.push(alpha[tau..tau + c].to_vec());
        }
        Subspace::from_rows(self.ambient.field().clone(), c, &rows)
    }

    /// Full preimage of a subspace of the quotient; always contains T and
    /// has dimension dim(B) + dim(T).
    pub fn pull(&self, b: &Subspace) -> Result<Subspace> {
        if b.ambient_dim() != self.quotient_dim() || b.field() != self.ambient.field() {
            return Err(Error::AmbientMismatch(format!(
                "expected a subspace of the {}-dimensional quotient",
                self.quotient_dim()
            )));
        }
        let lifted = b.basis().mul(self.comp.basis())?;
        let stacked = self.modulus.basis().vstack(&lifted)?;
        let s = Subspace::from_matrix(&stacked);
        debug_assert_eq!(s.dim(), b.dim() + self.modulus.dim());
        Ok(s)
    }
}
