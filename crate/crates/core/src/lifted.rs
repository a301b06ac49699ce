//! Lifted MRD subspace codes: families of m-spaces of V(n, q) with a
//! guaranteed minimum subspace distance, all disjoint from the fixed
//! (n-m)-space spanned by the last n-m coordinates.
//!
//! A member is the row space of [I_m | A] where A runs over the expanded
//! codewords of a Gabidulin code; lifting doubles the rank distance. The
//! wide case n < 2m transposes codewords of a code built over GF(q^m).

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{ExtFieldSpec, FieldElem, FieldSpec};
use crate::gabidulin::GabidulinCode;
use crate::matrix::MatrixGF;
use crate::subspace::Subspace;

/// Which side of n = 2m the construction sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// n >= 2m: code alphabet GF(q^(n-m)), length m.
    Tall,
    /// n < 2m: code alphabet GF(q^m), length n-m, codeword matrices
    /// transposed.
    Wide,
}

/// A materialized lifted MRD code.
#[derive(Debug, Clone)]
pub struct LiftedMrdCode {
    pub ambient: usize,
    pub member_dim: usize,
    /// Minimum pairwise subspace distance D (even).
    pub min_distance: usize,
    /// Cover parameter d: no d-space lies in two members; D = 2(m - d + 1).
    pub cover_dim: usize,
    pub orientation: Orientation,
    /// The fixed (n-m)-space every member avoids: the span of the last
    /// n-m standard coordinates.
    pub avoided: Subspace,
    /// Members in canonical order.
    pub members: Vec<Subspace>,
}

impl LiftedMrdCode {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Check that all members avoid W and keep pairwise distance at least
    /// D: exhaustively when the member count is at most `exhaustive_limit`,
    /// otherwise on `sample` deterministically sampled pairs. Returns the
    /// number of pairs checked and whether the check was exhaustive.
    pub fn check_pairwise(&self, exhaustive_limit: usize, sample: u64) -> Result<(u64, bool)> {
        use rand::{Rng, SeedableRng};
        for member in &self.members {
            if !member.meet(&self.avoided)?.is_zero() {
                return Err(Error::InvalidParameter(
                    "a member meets the avoided space".into(),
                ));
            }
        }
        let n = self.members.len();
        let check = |i: usize, j: usize| -> Result<()> {
            let delta = self.members[i].distance(&self.members[j])?;
            if delta < self.min_distance {
                return Err(Error::InvalidParameter(format!(
                    "members {i} and {j} have distance {delta} < {}",
                    self.min_distance
                )));
            }
            Ok(())
        };
        if n <= exhaustive_limit {
            let mut pairs = 0u64;
            for i in 0..n {
                for j in i + 1..n {
                    pairs += 1;
                    check(i, j)?;
                }
            }
            Ok((pairs, true))
        } else {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x11f7ed);
            let mut pairs = 0u64;
            while pairs < sample {
                let i = rng.random_range(0..n);
                let j = rng.random_range(0..n);
                if i == j {
                    continue;
                }
                pairs += 1;
                check(i.min(j), i.max(j))?;
            }
            Ok((pairs, false))
        }
    }
}

/// Member count promised by the construction:
/// q^(max(m, n-m) * (min(m, n-m) - D/2 + 1)).
pub fn lifted_mrd_size(n: usize, dist: usize, m: usize, q: u64) -> BigUint {
    let hi = m.max(n - m) as u32;
    let lo = m.min(n - m) as u32;
    BigUint::from(q).pow(hi * (lo + 1 - (dist / 2) as u32))
}

/// Member count of the cover-free reformulation: q^(d(n-m)) in the tall
/// case, q^(m(n-2m+d)) in the wide case.
pub fn cover_free_size(n: usize, m: usize, d: usize, q: u64) -> BigUint {
    if n >= 2 * m {
        BigUint::from(q).pow((d * (n - m)) as u32)
    } else {
        BigUint::from(q).pow((m * (n + d - 2 * m)) as u32)
    }
}

fn avoided_space(field: &Arc<FieldSpec>, n: usize, m: usize) -> Subspace {
    let coords: Vec<usize> = (m..n).collect();
    Subspace::coordinate_span(field.clone(), n, &coords)
}

/// Row space of [I_m | A]; this matrix is already in RREF.
fn lift_matrix(field: &Arc<FieldSpec>, n: usize, m: usize, a: &MatrixGF) -> Subspace {
    debug_assert_eq!(a.row_count(), m);
    debug_assert_eq!(a.col_count(), n - m);
    let mut mat = MatrixGF::zeros(field.clone(), m, n);
    for i in 0..m {
        mat.set(i, i, FieldElem::ONE);
        for j in 0..n - m {
            mat.set(i, m + j, a.get(i, j));
        }
    }
    Subspace::from_rref_unchecked(mat)
}

/// An (n, D; m) subspace code of size q^(max(m,n-m)(min(m,n-m)-D/2+1)) whose
/// members all avoid the fixed (n-m)-space of the last coordinates.
pub fn lifted_mrd(
    n: usize,
    dist: usize,
    m: usize,
    field: &Arc<FieldSpec>,
    cap: u64,
) -> Result<LiftedMrdCode> {
    if m > n {
        return Err(Error::InvalidParameter(format!(
            "member dimension {m} exceeds ambient {n}"
        )));
    }
    if !dist.is_multiple_of(2) || dist < 2 {
        return Err(Error::InvalidParameter(format!(
            "subspace distance {dist} must be even and at least 2"
        )));
    }
    if dist > 2 * m.min(n - m) {
        return Err(Error::InvalidParameter(format!(
            "distance {dist} exceeds 2 min(m, n-m) = {}",
            2 * m.min(n - m)
        )));
    }
    let q = field.order() as u64;
    let expected = lifted_mrd_size(n, dist, m, q);
    let count = expected.to_u64().filter(|&c| c <= cap).ok_or_else(|| {
        Error::BudgetExceeded(format!(
            "lifted MRD code with {expected} members exceeds the cap {cap}"
        ))
    })?;

    let tall = n >= 2 * m;
    let (e, length) = if tall { (n - m, m) } else { (m, n - m) };
    let code_dim = m.min(n - m) - dist / 2 + 1;
    let ext = ExtFieldSpec::new(field.clone(), e)?;
    let code = GabidulinCode::new(ext, length, code_dim)?;

    let mut members: Vec<Subspace> = (0..count)
        .into_par_iter()
        .map(|idx| {
            let cw = code
                .encode(&code.message(idx))
                .expect("message length matches code dimension");
            let cm = code.codeword_matrix(&cw);
            let a = if tall { cm } else { cm.transpose() };
            lift_matrix(field, n, m, &a)
        })
        .collect();
    members.sort_unstable();

    Ok(LiftedMrdCode {
        ambient: n,
        member_dim: m,
        min_distance: dist,
        cover_dim: m + 1 - dist / 2,
        orientation: if tall {
            Orientation::Tall
        } else {
            Orientation::Wide
        },
        avoided: avoided_space(field, n, m),
        members,
    })
}

/// A family of m-spaces of V(n, q) in which no d-space lies in two members
/// (equivalently, pairwise intersections have dimension at most d-1), all
/// disjoint from the fixed (n-m)-space.
///
/// For d = m this is the full lift (every matrix A); the degenerate case
/// n - 2m + d = 0 yields the single member [I_m | 0].
pub fn cover_free_code(
    n: usize,
    m: usize,
    d: usize,
    field: &Arc<FieldSpec>,
    cap: u64,
) -> Result<LiftedMrdCode> {
    if d > m || m > n {
        return Err(Error::InvalidParameter(format!(
            "cover-free parameters require n >= m >= d >= 0, got ({n}, {m}, {d})"
        )));
    }
    if n < 2 * m && n + d < 2 * m {
        return Err(Error::InvalidParameter(format!(
            "wide case requires n - 2m + d >= 0, got {}",
            n as i64 + d as i64 - 2 * m as i64
        )));
    }
    let tall = n >= 2 * m;
    // Degenerate sizes: a single member suffices and the code machinery
    // would be out of range.
    if d == 0 || (!tall && n + d == 2 * m) {
        let a = MatrixGF::zeros(field.clone(), m, n - m);
        return Ok(LiftedMrdCode {
            ambient: n,
            member_dim: m,
            min_distance: 2 * (m - d + 1),
            cover_dim: d,
            orientation: if tall {
                Orientation::Tall
            } else {
                Orientation::Wide
            },
            avoided: avoided_space(field, n, m),
            members: vec![lift_matrix(field, n, m, &a)],
        });
    }
    let mut code = lifted_mrd(n, 2 * (m - d + 1), m, field, cap)?;
    code.cover_dim = d;
    Ok(code)
}
