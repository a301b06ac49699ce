//! Three self-contained sunflower-free families: the partite analog (one
//! 1-space chosen inside each of k coordinate blocks), the cover-free family
//! of k-spaces in which no (k/2 + 1)-space repeats, and the spread-based
//! family of planes in V(5, q).

use std::sync::Arc;

use crate::enumerate::{subspaces_of, SubspaceIter};
use crate::error::{Error, Result};
use crate::field::{ExtFieldSpec, FieldElem, FieldSpec};
use crate::lifted::cover_free_code;
use crate::quotient::QuotientMap;
use crate::subspace::Subspace;

/// All k-spaces of V(k(s-1), q) meeting each of k coordinate-aligned
/// (s-1)-spaces in a 1-space; size [s-1]_q^k.
pub fn construct_partite(
    s: usize,
    k: usize,
    field: &Arc<FieldSpec>,
    cap: u64,
) -> Result<Vec<Subspace>> {
    if s < 3 || k < 1 {
        return Err(Error::InvalidParameter(format!(
            "partite family requires s >= 3 and k >= 1, got s = {s}, k = {k}"
        )));
    }
    let block = s - 1;
    let n = k * block;
    // the 1-spaces of one (s-1)-dimensional block, as row vectors
    let lines: Vec<Vec<FieldElem>> = SubspaceIter::new(field.clone(), block, 1, cap)?
        .map(|l| l.basis().row(0).to_vec())
        .collect();
    let total = (lines.len() as u64)
        .checked_pow(k as u32)
        .filter(|&t| t <= cap)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "partite family of {}^{k} members exceeds the cap {cap}",
                lines.len()
            ))
        })?;
    let mut members = Vec::with_capacity(total as usize);
    let mut choice = vec![0usize; k];
    loop {
        let rows: Vec<Vec<FieldElem>> = choice
            .iter()
            .enumerate()
            .map(|(b, &ix)| {
                let mut row = vec![FieldElem::ZERO; n];
                row[b * block..(b + 1) * block].copy_from_slice(&lines[ix]);
                row
            })
            .collect();
        members.push(Subspace::from_rows(field.clone(), n, &rows)?);
        // odometer over the k block choices
        let mut pos = 0;
        while pos < k {
            choice[pos] += 1;
            if choice[pos] < lines.len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
        if pos == k {
            break;
        }
    }
    members.sort_unstable();
    Ok(members)
}

/// The cover-free family of k-spaces of V((s+1)k/2 - 1, q) in which no
/// (k/2 + 1)-space lies in two members; size q^((s-1)k^2/4 + (s-2)k/2 - 1),
/// met with equality by the realization.
pub fn construct_g(s: usize, k: usize, field: &Arc<FieldSpec>, cap: u64) -> Result<Vec<Subspace>> {
    if !k.is_multiple_of(2) || k == 0 {
        return Err(Error::InvalidParameter(format!(
            "this family needs an even member dimension, got k = {k}"
        )));
    }
    if s < 4 {
        return Err(Error::InvalidParameter(format!(
            "this family needs s >= 4, got s = {s}"
        )));
    }
    let n = (s + 1) * k / 2 - 1;
    if n < k {
        return Err(Error::InvalidParameter(format!(
            "ambient dimension {n} is smaller than k = {k}"
        )));
    }
    let code = cover_free_code(n, k, k / 2 + 1, field, cap)?;
    Ok(code.members)
}

/// The plane spread of V(2e', q) = GF(q^(e'))^2: one 2e'-dimensional block
/// per point of the projective line over the extension field.
fn field_spread(field: &Arc<FieldSpec>, half: usize, cap: u64) -> Result<Vec<Subspace>> {
    let ext = ExtFieldSpec::new(field.clone(), half)?;
    let n = 2 * half;
    let count = ext.order() + 1;
    if count > cap {
        return Err(Error::BudgetExceeded(format!(
            "spread of {count} blocks exceeds the cap {cap}"
        )));
    }
    // basis of GF(q^half) over GF(q): 1, alpha, ..., alpha^(half-1)
    let alpha = ext.alpha();
    let basis: Vec<FieldElem> = (0..half).map(|i| ext.pow(alpha, i as u64)).collect();
    let block = |u: FieldElem, v: FieldElem| -> Result<Subspace> {
        let rows: Vec<Vec<FieldElem>> = basis
            .iter()
            .map(|&lambda| {
                let mut row = ext.expand(ext.mul(lambda, u));
                row.extend(ext.expand(ext.mul(lambda, v)));
                row
            })
            .collect();
        Subspace::from_rows(field.clone(), n, &rows)
    };
    let mut blocks = Vec::with_capacity(count as usize);
    // representatives (1, c) for every c, plus (0, 1)
    for c in ext.elems() {
        blocks.push(block(FieldElem::ONE, c)?);
    }
    blocks.push(block(FieldElem::ZERO, FieldElem::ONE)?);
    blocks.sort_unstable();
    Ok(blocks)
}

/// The spread-based family of planes of V(5, q): fix a 1-space T and q^2+1
/// solids through T meeting pairwise in T; take every plane of the first
/// solid and the q^2 planes avoiding T in each other solid. Size
/// q^4 + q^2 + q + 1, and 3-sunflower-free.
pub fn construct_example1(field: &Arc<FieldSpec>, cap: u64) -> Result<Vec<Subspace>> {
    let n = 5;
    let v = Subspace::full(field.clone(), n);
    let t = Subspace::first_coordinates(field.clone(), n, 1);
    let quot = QuotientMap::new(v, t.clone())?;

    // a line spread of the 4-dimensional quotient, pulled back to solids
    // through T that pairwise meet exactly in T
    let spread = field_spread(field, 2, cap)?;
    let solids: Vec<Subspace> = spread
        .iter()
        .map(|b| quot.pull(b))
        .collect::<Result<Vec<_>>>()?;
    debug_assert!(solids.iter().all(|p| p.dim() == 3));

    let mut members: Vec<Subspace> = Vec::new();
    for (i, solid) in solids.iter().enumerate() {
        let planes = subspaces_of(solid, 2, cap)?;
        if i == 0 {
            members.extend(planes);
        } else {
            members.extend(
                planes
                    .into_iter()
                    .filter(|pl| pl.meet(&t).map(|m| m.is_zero()).unwrap_or(false)),
            );
        }
    }
    members.sort_unstable();
    members.dedup();
    Ok(members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::gauss_bracket;
    use num_bigint::BigUint;
    use std::collections::BTreeSet;

    fn gf(q: u64) -> Arc<FieldSpec> {
        FieldSpec::from_order(q).unwrap()
    }

    #[test]
    fn partite_sizes() {
        let fam = construct_partite(3, 2, &gf(2), 1 << 20).unwrap();
        assert_eq!(fam.len(), 9);
        let fam = construct_partite(3, 1, &gf(2), 1 << 20).unwrap();
        assert_eq!(fam.len(), 3);
        let fam = construct_partite(4, 2, &gf(2), 1 << 20).unwrap();
        assert_eq!(fam.len(), 49);
        // [s-1]_q^k in general
        let fam = construct_partite(4, 3, &gf(3), 1 << 20).unwrap();
        let bracket = gauss_bracket(3, 3);
        assert_eq!(BigUint::from(fam.len()), &bracket * &bracket * &bracket);
    }

    #[test]
    fn partite_members_meet_blocks_in_lines() {
        let f = gf(2);
        let fam = construct_partite(3, 2, &f, 1 << 20).unwrap();
        let w0 = Subspace::coordinate_span(f.clone(), 4, &[0, 1]);
        let w1 = Subspace::coordinate_span(f.clone(), 4, &[2, 3]);
        for m in &fam {
            assert_eq!(m.dim(), 2);
            assert_eq!(m.meet(&w0).unwrap().dim(), 1);
            assert_eq!(m.meet(&w1).unwrap().dim(), 1);
        }
        let distinct: BTreeSet<&Subspace> = fam.iter().collect();
        assert_eq!(distinct.len(), 9);
    }

    #[test]
    fn g_family_sizes() {
        // the size bound q^((s-1)k^2/4 + (s-2)k/2 - 1) is met with equality
        let fam = construct_g(4, 2, &gf(2), 1 << 20).unwrap();
        assert_eq!(fam.len(), 16);
        let fam = construct_g(4, 2, &gf(3), 1 << 20).unwrap();
        assert_eq!(fam.len(), 81);
        for (s, k, q) in [(4usize, 2usize, 2u64), (4, 2, 3), (5, 2, 2), (4, 4, 2)] {
            let fam = construct_g(s, k, &gf(q), 1 << 22).unwrap();
            let bound = crate::certify::construction_lower_bound("g", s, k, q).unwrap();
            assert_eq!(BigUint::from(fam.len()), bound, "s={s} k={k} q={q}");
        }
    }

    #[test]
    fn g_family_pairwise_intersections() {
        // no (k/2 + 1)-space in two members means pairwise meets of
        // dimension at most k/2
        let fam = construct_g(4, 2, &gf(2), 1 << 20).unwrap();
        for (i, a) in fam.iter().enumerate() {
            for b in fam.iter().skip(i + 1) {
                assert!(a.meet(b).unwrap().dim() <= 1);
            }
        }
    }

    #[test]
    fn g_family_parameter_checks() {
        assert!(construct_g(4, 3, &gf(2), 1 << 20).is_err()); // odd k
        assert!(construct_g(3, 2, &gf(2), 1 << 20).is_err()); // s < 4
    }

    #[test]
    fn spread_partitions_nonzero_vectors() {
        for q in [2u64, 3] {
            let blocks = field_spread(&gf(q), 2, 1 << 20).unwrap();
            assert_eq!(blocks.len(), (q * q + 1) as usize);
            for (i, a) in blocks.iter().enumerate() {
                assert_eq!(a.dim(), 2);
                for b in blocks.iter().skip(i + 1) {
                    assert!(a.meet(b).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn example1_sizes() {
        let fam = construct_example1(&gf(2), 1 << 20).unwrap();
        assert_eq!(fam.len(), 23);
        let fam = construct_example1(&gf(3), 1 << 20).unwrap();
        assert_eq!(fam.len(), 94);
    }

    #[test]
    fn example1_solids_meet_in_t() {
        let f = gf(2);
        let t = Subspace::first_coordinates(f.clone(), 5, 1);
        let v = Subspace::full(f.clone(), 5);
        let quot = QuotientMap::new(v, t.clone()).unwrap();
        let solids: Vec<Subspace> = field_spread(&f, 2, 1 << 20)
            .unwrap()
            .iter()
            .map(|b| quot.pull(b).unwrap())
            .collect();
        assert_eq!(solids.len(), 5);
        for (i, a) in solids.iter().enumerate() {
            for b in solids.iter().skip(i + 1) {
                assert_eq!(a.meet(b).unwrap(), t);
            }
        }
    }

    #[test]
    fn example1_member_breakdown() {
        // only the q+1 planes of the first solid pass through T; every
        // other member avoids T entirely
        let f = gf(3);
        let fam = construct_example1(&f, 1 << 20).unwrap();
        let t = Subspace::first_coordinates(f, 5, 1);
        let through = fam
            .iter()
            .filter(|m| !m.meet(&t).unwrap().is_zero())
            .count();
        assert_eq!(through, 4);
        for m in &fam {
            let mt = m.meet(&t).unwrap();
            assert!(mt.is_zero() || mt == t);
        }
    }
}
