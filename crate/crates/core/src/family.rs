//! Families of m-spaces pinned to a flag T <= Sigma <= V: every member
//! meets Sigma exactly in T, and no d-space disjoint from T lies in two
//! members. Realized by taking the quotient V/T, rotating coordinates so
//! the avoided space of a cover-free lifted MRD code contains Sigma/T, and
//! pulling every member back.

use std::sync::Arc;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lifted::{cover_free_code, cover_free_size};
use crate::quotient::QuotientMap;
use crate::subspace::Subspace;

/// Parameter bundle (m, d; V, Sigma, T) for [`build_family`].
#[derive(Debug, Clone)]
pub struct FamilySpec {
    member_dim: usize,
    cover: usize,
    ambient: Subspace,
    sigma: Subspace,
    t_space: Subspace,
}

impl FamilySpec {
    /// Validates T <= Sigma <= V, d <= m - tau, sigma - tau <= n - m, and
    /// the quotient-level case split (n - tau >= 2(m - tau) or
    /// n - 2m + tau + d >= 0).
    pub fn new(
        member_dim: usize,
        cover: usize,
        ambient: Subspace,
        sigma: Subspace,
        t_space: Subspace,
    ) -> Result<FamilySpec> {
        if !sigma.contains(&t_space) {
            return Err(Error::NotContained("T must lie in Sigma".into()));
        }
        if !ambient.contains(&sigma) {
            return Err(Error::NotContained("Sigma must lie in V".into()));
        }
        let n = ambient.dim() as i64;
        let m = member_dim as i64;
        let d = cover as i64;
        let tau = t_space.dim() as i64;
        let sig = sigma.dim() as i64;
        if d > m - tau {
            return Err(Error::InvalidParameter(format!(
                "cover parameter d = {d} exceeds m - tau = {}",
                m - tau
            )));
        }
        if sig - tau > n - m {
            return Err(Error::InvalidParameter(format!(
                "sigma - tau = {} exceeds n - m = {}",
                sig - tau,
                n - m
            )));
        }
        if n - tau < 2 * (m - tau) && n - 2 * m + tau + d < 0 {
            return Err(Error::InvalidParameter(format!(
                "no realizable case: n - tau = {} < 2(m - tau) = {} and n - 2m + tau + d = {}",
                n - tau,
                2 * (m - tau),
                n - 2 * m + tau + d
            )));
        }
        Ok(FamilySpec {
            member_dim,
            cover,
            ambient,
            sigma,
            t_space,
        })
    }

    pub fn member_dim(&self) -> usize {
        self.member_dim
    }

    pub fn cover(&self) -> usize {
        self.cover
    }

    pub fn ambient(&self) -> &Subspace {
        &self.ambient
    }

    pub fn sigma(&self) -> &Subspace {
        &self.sigma
    }

    pub fn t_space(&self) -> &Subspace {
        &self.t_space
    }

    pub fn n(&self) -> usize {
        self.ambient.dim()
    }

    pub fn tau(&self) -> usize {
        self.t_space.dim()
    }

    pub fn sigma_dim(&self) -> usize {
        self.sigma.dim()
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        self.ambient.field()
    }

    /// Pairwise intersections of members stay at or below this dimension.
    pub fn pairwise_cap(&self) -> usize {
        self.tau() + self.cover - 1
    }

    /// Exact size of the realized family: q^(d(n-m)) if n - tau >= 2(m - tau),
    /// else q^((m-tau)(n-2m+tau+d)).
    pub fn expected_size(&self) -> BigUint {
        cover_free_size(
            self.n() - self.tau(),
            self.member_dim - self.tau(),
            self.cover,
            self.field().order() as u64,
        )
    }
}

/// Build the (m, d; V, Sigma, T)-family.
///
/// Members are returned in canonical order; every member contains T, meets
/// Sigma exactly in T, and pairwise intersections have dimension at most
/// tau + d - 1.
pub fn build_family(spec: &FamilySpec, cap: u64) -> Result<Vec<Subspace>> {
    let field = spec.field().clone();
    let quot = QuotientMap::new(spec.ambient.clone(), spec.t_space.clone())?;
    let sigma_q = quot.push(&spec.sigma)?;
    let nq = quot.quotient_dim();
    let mq = spec.member_dim - spec.tau();

    // Coordinate frame on the quotient whose trailing rows span Sigma/T,
    // so the avoided space of the cover-free code contains it.
    let full = Subspace::full(field.clone(), nq);
    let rest = full.complement_of(&sigma_q)?;
    let frame = rest.basis().vstack(sigma_q.basis())?;
    debug_assert_eq!(frame.rank(), nq);

    let code = cover_free_code(nq, mq, spec.cover, &field, cap)?;
    let mut members: Vec<Subspace> = code
        .members
        .par_iter()
        .map(|member| {
            let rotated = Subspace::from_matrix(&member.basis().mul(&frame)?);
            quot.pull(&rotated)
        })
        .collect::<Result<Vec<_>>>()?;
    members.sort_unstable();
    debug_assert_eq!(BigUint::from(members.len()), spec.expected_size());
    Ok(members)
}
