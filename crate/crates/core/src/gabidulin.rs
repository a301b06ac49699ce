//! Gabidulin rank-metric codes over GF(q^e).
//!
//! A codeword is the evaluation vector of a linearized polynomial
//! f(x) = sum_i a_i x^(q^i) (with deg_q f < k') at a fixed tuple of
//! GF(q)-linearly independent points. Expanding each coordinate over GF(q)
//! turns codewords into l x e matrices; the minimum rank of a nonzero
//! codeword matrix is exactly l - k' + 1 (the maximum-rank-distance bound).

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::field::{ExtFieldSpec, FieldElem};
use crate::matrix::MatrixGF;

/// A Gabidulin code: alphabet GF(q^e), length l <= e, dimension k' <= l,
/// with GF(q)-independent evaluation points.
pub struct GabidulinCode {
    ext: ExtFieldSpec,
    length: usize,
    dim: usize,
    points: Vec<FieldElem>,
    /// frob\[j\]\[i\] = points\[j\]^(q^i), for i < dim.
    frob: Vec<Vec<FieldElem>>,
}

impl GabidulinCode {
    /// Code with the deterministic evaluation points 1, alpha, ...,
    /// alpha^(l-1) (the polynomial basis prefix).
    pub fn new(ext: ExtFieldSpec, length: usize, dim: usize) -> Result<GabidulinCode> {
        let alpha = ext.alpha();
        let points: Vec<FieldElem> = (0..length).map(|i| ext.pow(alpha, i as u64)).collect();
        Self::with_points(ext, length, dim, points)
    }

    /// Code with explicit evaluation points (validated for independence).
    pub fn with_points(
        ext: ExtFieldSpec,
        length: usize,
        dim: usize,
        points: Vec<FieldElem>,
    ) -> Result<GabidulinCode> {
        if length > ext.ext_degree() {
            return Err(Error::InvalidParameter(format!(
                "code length {length} exceeds extension degree {}",
                ext.ext_degree()
            )));
        }
        if dim > length {
            return Err(Error::InvalidParameter(format!(
                "code dimension {dim} exceeds length {length}"
            )));
        }
        if points.len() != length {
            return Err(Error::DimensionMismatch(format!(
                "{} evaluation points for length {length}",
                points.len()
            )));
        }
        let base = ext.base().clone();
        let rows: Vec<Vec<FieldElem>> = points.iter().map(|&p| ext.expand(p)).collect();
        let mat = MatrixGF::from_rows(base, ext.ext_degree(), &rows)?;
        if mat.rank() != length {
            return Err(Error::InvalidParameter(
                "evaluation points are linearly dependent over the base field".into(),
            ));
        }
        let frob: Vec<Vec<FieldElem>> = points
            .iter()
            .map(|&p| (0..dim).map(|i| ext.frobenius(p, i)).collect())
            .collect();
        Ok(GabidulinCode {
            ext,
            length,
            dim,
            points,
            frob,
        })
    }

    pub fn ext(&self) -> &ExtFieldSpec {
        &self.ext
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[FieldElem] {
        &self.points
    }

    /// Number of codewords, q^(e * k').
    pub fn size(&self) -> BigUint {
        BigUint::from(self.ext.order()).pow(self.dim as u32)
    }

    /// Evaluate the message's linearized polynomial at every point.
    pub fn encode(&self, message: &[FieldElem]) -> Result<Vec<FieldElem>> {
        if message.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "message length {} for code dimension {}",
                message.len(),
                self.dim
            )));
        }
        Ok(self
            .frob
            .iter()
            .map(|powers| {
                let mut acc = FieldElem::ZERO;
                for (i, &a) in message.iter().enumerate() {
                    acc = self.ext.add(acc, self.ext.mul(a, powers[i]));
                }
                acc
            })
            .collect())
    }

    /// Expand a codeword into its l x e matrix over GF(q); the rank of a
    /// difference of two such matrices is the rank distance.
    pub fn codeword_matrix(&self, codeword: &[FieldElem]) -> MatrixGF {
        assert_eq!(codeword.len(), self.length);
        let rows: Vec<Vec<FieldElem>> = codeword.iter().map(|&c| self.ext.expand(c)).collect();
        MatrixGF::from_rows(self.ext.base().clone(), self.ext.ext_degree(), &rows)
            .expect("expanded rows have the extension degree as width")
    }

    /// The i-th message vector under base-(q^e) positional encoding.
    pub fn message(&self, index: u64) -> Vec<FieldElem> {
        let size = self.ext.order();
        let mut v = index;
        (0..self.dim)
            .map(|_| {
                let d = FieldElem((v % size) as u32);
                v /= size;
                d
            })
            .collect()
    }

    /// Total number of messages if it fits the cap.
    pub fn enumerable_size(&self, cap: u64) -> Result<u64> {
        self.size().to_u64().filter(|&s| s <= cap).ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "code with {} codewords exceeds the enumeration cap {cap}",
                self.size()
            ))
        })
    }

    /// Minimum rank over nonzero codewords; by linearity this is the
    /// minimum rank distance, and for an MRD code it equals l - k' + 1.
    pub fn min_rank_distance(&self, cap: u64) -> Result<usize> {
        if self.dim == 0 {
            return Err(Error::InvalidParameter(
                "minimum distance of the zero code is undefined".into(),
            ));
        }
        let total = self.enumerable_size(cap)?;
        let mut min_rank = usize::MAX;
        for idx in 1..total {
            let cw = self.encode(&self.message(idx))?;
            let rank = self.codeword_matrix(&cw).rank();
            min_rank = min_rank.min(rank);
            if min_rank == 1 {
                break;
            }
        }
        Ok(min_rank)
    }
}
