//! Sunflower detection.
//!
//! A set of s equal-dimensional subspaces is an s-sunflower with kernel K
//! when every pairwise intersection equals K and the joint span has
//! dimension d + s(k - d) (the quotients by K are in general position). The
//! set-like variant drops the span condition.
//!
//! The search buckets all pairwise meets by their canonical kernel, looks
//! for s-cliques inside each bucket, and validates the span condition per
//! clique. Families at or below a size threshold fall back to plain
//! s-subset enumeration. Negative answers are only "proven free" when the
//! full pair set and every candidate clique were explored within budget.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::bounds::upper_bound;
use crate::certify::{family_hash, BoundReport, Certificate, Outcome, SearchStats};
use crate::error::{Error, Result};
use crate::subspace::{span_of, Subspace};

/// Which sunflower definition a search targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Pairwise-equal kernels plus the general-position span condition.
    GeneralPosition,
    /// Pairwise-equal kernels only.
    SetLike,
}

impl std::fmt::Display for SearchMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SearchMode::GeneralPosition => write!(f, "general"),
            SearchMode::SetLike => write!(f, "setlike"),
        }
    }
}

/// Search budgets. A search that runs into a budget reports its negative
/// result as budgeted, never as a proof.
#[derive(Debug, Clone, Copy)]
pub struct SearchBudget {
    /// Cap on pairwise meet computations.
    pub max_pairs: u64,
    /// Cap on enumerated subsets / clique-search nodes.
    pub max_subsets: u64,
    /// Plain s-subset enumeration at or below this family size.
    pub subset_threshold: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_pairs: 5_000_000,
            max_subsets: 10_000_000,
            subset_threshold: 30,
        }
    }
}

/// A found sunflower: member indices, the kernel, and the dimensions that
/// certify it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SunflowerWitness {
    pub member_indices: Vec<usize>,
    pub kernel: Subspace,
    pub kernel_dim: usize,
    pub span_dim: usize,
}

fn check_members(members: &[Subspace]) -> Result<(usize, usize)> {
    let first = members.first().ok_or_else(|| {
        Error::InvalidParameter("sunflower check needs at least two members".into())
    })?;
    let k = first.dim();
    for m in members {
        if m.ambient_dim() != first.ambient_dim() || m.field() != first.field() {
            return Err(Error::AmbientMismatch(
                "sunflower members must share an ambient space".into(),
            ));
        }
        if m.dim() != k {
            return Err(Error::DimensionMismatch(format!(
                "sunflower members must share a dimension, got {} and {k}",
                m.dim()
            )));
        }
    }
    let mut keys: Vec<Vec<u32>> = members.iter().map(|m| m.encoding()).collect();
    keys.sort_unstable();
    keys.dedup();
    if keys.len() != members.len() {
        return Err(Error::InvalidParameter(
            "sunflower members must be distinct".into(),
        ));
    }
    Ok((k, first.ambient_dim()))
}

/// The kernel of an s-sunflower in the general-position sense, or None.
pub fn sunflower_kernel(members: &[Subspace]) -> Result<Option<(Subspace, usize)>> {
    let (k, _) = check_members(members)?;
    if members.len() < 2 {
        return Err(Error::InvalidParameter(
            "sunflower check needs at least two members".into(),
        ));
    }
    let Some((kernel, d)) = pairwise_kernel(members)? else {
        return Ok(None);
    };
    let span = span_of(members[0].field(), members[0].ambient_dim(), members)?;
    if span.dim() == d + members.len() * (k - d) {
        Ok(Some((kernel, d)))
    } else {
        Ok(None)
    }
}

/// The kernel of an s-set-like sunflower (pairwise-equal intersections
/// only), or None.
pub fn set_like_kernel(members: &[Subspace]) -> Result<Option<(Subspace, usize)>> {
    check_members(members)?;
    pairwise_kernel(members)
}

fn pairwise_kernel(members: &[Subspace]) -> Result<Option<(Subspace, usize)>> {
    let kernel = members[0].meet(&members[1])?;
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            if (i, j) == (0, 1) {
                continue;
            }
            if members[i].meet(&members[j])? != kernel {
                return Ok(None);
            }
        }
    }
    let d = kernel.dim();
    Ok(Some((kernel, d)))
}

/// Lexicographic next combination of indices below `n`; false when done.
fn next_combination(ix: &mut [usize], n: usize) -> bool {
    let m = ix.len();
    let mut i = m;
    while i > 0 {
        i -= 1;
        if ix[i] < n - (m - i) {
            ix[i] += 1;
            for j in i + 1..m {
                ix[j] = ix[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn witness_for(
    family: &[Subspace],
    indices: &[usize],
    kernel: &Subspace,
    mode: SearchMode,
) -> Result<Option<SunflowerWitness>> {
    let members: Vec<Subspace> = indices.iter().map(|&i| family[i].clone()).collect();
    let k = members[0].dim();
    let d = kernel.dim();
    let span = span_of(members[0].field(), members[0].ambient_dim(), &members)?;
    let general = span.dim() == d + members.len() * (k - d);
    if mode == SearchMode::GeneralPosition && !general {
        return Ok(None);
    }
    Ok(Some(SunflowerWitness {
        member_indices: indices.to_vec(),
        kernel: kernel.clone(),
        kernel_dim: d,
        span_dim: span.dim(),
    }))
}

fn plain_search(
    family: &[Subspace],
    s: usize,
    mode: SearchMode,
    budget: &SearchBudget,
    stats: &mut SearchStats,
) -> Result<Option<SunflowerWitness>> {
    let mut ix: Vec<usize> = (0..s).collect();
    loop {
        if stats.subsets_examined >= budget.max_subsets {
            stats.exhaustive = false;
            return Ok(None);
        }
        stats.subsets_examined += 1;
        let members: Vec<Subspace> = ix.iter().map(|&i| family[i].clone()).collect();
        let found = match mode {
            SearchMode::GeneralPosition => sunflower_kernel(&members)?,
            SearchMode::SetLike => set_like_kernel(&members)?,
        };
        if let Some((kernel, d)) = found {
            let span = span_of(family[0].field(), family[0].ambient_dim(), &members)?;
            return Ok(Some(SunflowerWitness {
                member_indices: ix.clone(),
                kernel,
                kernel_dim: d,
                span_dim: span.dim(),
            }));
        }
        if !next_combination(&mut ix, family.len()) {
            return Ok(None);
        }
    }
}

/// Enumerate s-cliques of the graph given by `adj` (vertices sorted);
/// `visit` returns true to stop. Returns false if the node budget ran out.
fn clique_search(
    adj: &BTreeMap<usize, Vec<usize>>,
    s: usize,
    nodes_left: &mut u64,
    visit: &mut dyn FnMut(&[usize]) -> Result<bool>,
) -> Result<(bool, bool)> {
    // (stopped_by_visit, exhausted)
    fn extend(
        adj: &BTreeMap<usize, Vec<usize>>,
        s: usize,
        current: &mut Vec<usize>,
        candidates: &[usize],
        nodes_left: &mut u64,
        visit: &mut dyn FnMut(&[usize]) -> Result<bool>,
    ) -> Result<(bool, bool)> {
        if current.len() == s {
            return Ok((visit(current)?, true));
        }
        for (pos, &v) in candidates.iter().enumerate() {
            if *nodes_left == 0 {
                return Ok((false, false));
            }
            *nodes_left -= 1;
            // prune: not enough candidates left to finish the clique
            if current.len() + (candidates.len() - pos) < s {
                break;
            }
            current.push(v);
            let next: Vec<usize> = candidates[pos + 1..]
                .iter()
                .copied()
                .filter(|w| adj[&v].binary_search(w).is_ok())
                .collect();
            let (stopped, exhausted) = extend(adj, s, current, &next, nodes_left, visit)?;
            current.pop();
            if stopped {
                return Ok((true, true));
            }
            if !exhausted {
                return Ok((false, false));
            }
        }
        Ok((false, true))
    }
    let vertices: Vec<usize> = adj.keys().copied().collect();
    let mut current = Vec::with_capacity(s);
    extend(adj, s, &mut current, &vertices, nodes_left, visit)
}

/// Pairs of member indices realizing each kernel, keyed by the kernel's
/// canonical encoding, with one representative kernel per bucket.
type KernelBuckets = BTreeMap<Vec<u32>, (Subspace, Vec<(usize, usize)>)>;

fn bucket_search(
    family: &[Subspace],
    s: usize,
    mode: SearchMode,
    budget: &SearchBudget,
    stats: &mut SearchStats,
) -> Result<Option<SunflowerWitness>> {
    let n = family.len();
    let total_pairs = (n as u64) * (n as u64 - 1) / 2;
    let pair_cap = total_pairs.min(budget.max_pairs);
    if pair_cap < total_pairs {
        stats.exhaustive = false;
    }

    // bucket pairwise meets by canonical kernel
    let mut buckets: KernelBuckets = BTreeMap::new();
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(4096);
    let flush = |pairs: &mut Vec<(usize, usize)>, buckets: &mut KernelBuckets| -> Result<()> {
        let meets: Vec<(usize, usize, Subspace)> = pairs
            .par_iter()
            .map(|&(i, j)| Ok((i, j, family[i].meet(&family[j])?)))
            .collect::<Result<Vec<_>>>()?;
        for (i, j, meet) in meets {
            let key = meet.encoding();
            buckets
                .entry(key)
                .or_insert_with(|| (meet, Vec::new()))
                .1
                .push((i, j));
        }
        pairs.clear();
        Ok(())
    };
    let mut done: u64 = 0;
    'outer: for i in 0..n {
        for j in i + 1..n {
            if done == pair_cap {
                break 'outer;
            }
            done += 1;
            pairs.push((i, j));
            if pairs.len() == 4096 {
                flush(&mut pairs, &mut buckets)?;
            }
        }
    }
    flush(&mut pairs, &mut buckets)?;
    stats.pairs_examined += done;

    // per-kernel clique search, in canonical kernel order
    let min_edges = (s as u64) * (s as u64 - 1) / 2;
    let mut witness: Option<SunflowerWitness> = None;
    let mut nodes_left = budget.max_subsets.saturating_sub(stats.subsets_examined);
    for (kernel, edges) in buckets.values() {
        if (edges.len() as u64) < min_edges {
            continue;
        }
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(i, j) in edges {
            adj.entry(i).or_default().push(j);
            adj.entry(j).or_default().push(i);
        }
        // iteratively drop vertices that cannot sit in an s-clique
        loop {
            let low: Vec<usize> = adj
                .iter()
                .filter(|(_, nb)| nb.len() + 1 < s)
                .map(|(&v, _)| v)
                .collect();
            if low.is_empty() {
                break;
            }
            for v in &low {
                adj.remove(v);
            }
            for nb in adj.values_mut() {
                nb.retain(|w| !low.contains(w));
            }
        }
        if adj.len() < s {
            continue;
        }
        for nb in adj.values_mut() {
            nb.sort_unstable();
        }
        let before = nodes_left;
        let (stopped, exhausted) = clique_search(&adj, s, &mut nodes_left, &mut |clique| {
            match witness_for(family, clique, kernel, mode)? {
                Some(w) => {
                    witness = Some(w);
                    Ok(true)
                }
                None => Ok(false),
            }
        })?;
        stats.subsets_examined += before - nodes_left;
        if stopped {
            break;
        }
        if !exhausted {
            stats.exhaustive = false;
            break;
        }
    }
    Ok(witness)
}

/// Search a family for an s-sunflower in the requested mode.
///
/// The returned certificate's status is exhaustive only if the whole pair
/// set and every candidate clique (or every s-subset on the plain path) was
/// explored within budget; a negative outcome under a blown budget is
/// inconclusive, never a proof.
pub fn find_sunflower(
    family: &[Subspace],
    s: usize,
    mode: SearchMode,
    budget: &SearchBudget,
) -> Result<Certificate> {
    if s < 3 {
        return Err(Error::InvalidParameter(format!(
            "sunflower search needs s >= 3, got {s}"
        )));
    }
    let mut stats = SearchStats {
        exhaustive: true,
        pairs_examined: 0,
        subsets_examined: 0,
    };
    let mut witness = None;
    let mut bounds = None;
    if !family.is_empty() {
        let (k, _) = check_members(family)?;
        let q = family[0].field().order() as u64;
        bounds = Some(BoundReport {
            lower: None,
            actual: family.len().into(),
            upper: upper_bound(s, k, q),
        });
        if family.len() >= s {
            witness = if family.len() <= budget.subset_threshold {
                plain_search(family, s, mode, budget, &mut stats)?
            } else {
                bucket_search(family, s, mode, budget, &mut stats)?
            };
        }
    }
    if let Some(w) = &witness {
        // a returned witness must revalidate from scratch
        let members: Vec<Subspace> = w.member_indices.iter().map(|&i| family[i].clone()).collect();
        debug_assert!(set_like_kernel(&members).unwrap().is_some());
        if mode == SearchMode::GeneralPosition {
            debug_assert!(sunflower_kernel(&members).unwrap().is_some());
        }
    }
    let outcome = match witness {
        Some(w) => Outcome::Witness(w),
        None => Outcome::SunflowerFree,
    };
    Ok(Certificate {
        family_hash: family_hash(family),
        family_size: family.len(),
        s,
        mode: Some(mode),
        stats,
        outcome,
        bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expository::{construct_example1, construct_partite};
    use crate::field::{FieldElem, FieldSpec};
    use std::sync::Arc;

    fn gf(q: u64) -> Arc<FieldSpec> {
        FieldSpec::from_order(q).unwrap()
    }

    fn sub(q: u64, n: usize, rows: &[&[u32]]) -> Subspace {
        let rows: Vec<Vec<FieldElem>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| FieldElem(x)).collect())
            .collect();
        Subspace::from_rows(gf(q), n, &rows).unwrap()
    }

    fn spread_triple() -> Vec<Subspace> {
        vec![
            sub(2, 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]),
            sub(2, 4, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]),
            sub(2, 4, &[&[1, 0, 1, 0], &[0, 1, 0, 1]]),
        ]
    }

    #[test]
    fn disjoint_planes_spanning_six_dims() {
        let members = vec![
            sub(2, 6, &[&[1, 0, 0, 0, 0, 0], &[0, 1, 0, 0, 0, 0]]),
            sub(2, 6, &[&[0, 0, 1, 0, 0, 0], &[0, 0, 0, 1, 0, 0]]),
            sub(2, 6, &[&[0, 0, 0, 0, 1, 0], &[0, 0, 0, 0, 0, 1]]),
        ];
        let (kernel, d) = sunflower_kernel(&members).unwrap().unwrap();
        assert!(kernel.is_zero());
        assert_eq!(d, 0);
    }

    #[test]
    fn spread_triple_is_set_like_but_not_general() {
        let members = spread_triple();
        assert!(sunflower_kernel(&members).unwrap().is_none());
        let (kernel, d) = set_like_kernel(&members).unwrap().unwrap();
        assert!(kernel.is_zero());
        assert_eq!(d, 0);
    }

    #[test]
    fn planes_through_a_common_line() {
        let members = vec![
            sub(2, 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]),
            sub(2, 4, &[&[1, 0, 0, 0], &[0, 0, 1, 0]]),
            sub(2, 4, &[&[1, 0, 0, 0], &[0, 0, 0, 1]]),
        ];
        let (kernel, d) = sunflower_kernel(&members).unwrap().unwrap();
        assert_eq!(d, 1);
        assert_eq!(kernel, sub(2, 4, &[&[1, 0, 0, 0]]));
    }

    #[test]
    fn set_like_on_two_members_is_their_meet() {
        let a = sub(2, 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let b = sub(2, 4, &[&[1, 0, 0, 0], &[0, 0, 1, 0]]);
        let (kernel, d) = set_like_kernel(&[a.clone(), b.clone()]).unwrap().unwrap();
        assert_eq!(kernel, a.meet(&b).unwrap());
        assert_eq!(d, 1);
    }

    #[test]
    fn duplicates_are_rejected() {
        let a = sub(2, 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        assert!(sunflower_kernel(&[a.clone(), a]).is_err());
    }

    #[test]
    fn example1_is_three_sunflower_free_exhaustively() {
        let fam = construct_example1(&gf(2), 1 << 20).unwrap();
        let cert = find_sunflower(&fam, 3, SearchMode::GeneralPosition, &SearchBudget::default())
            .unwrap();
        assert!(matches!(cert.outcome, Outcome::SunflowerFree));
        assert!(cert.stats.exhaustive);
        // plain path: all C(23, 3) triples
        assert_eq!(cert.stats.subsets_examined, 1771);
    }

    #[test]
    fn small_family_trivially_free() {
        let fam = spread_triple();
        let cert = find_sunflower(&fam[..2], 3, SearchMode::GeneralPosition, &SearchBudget::default())
            .unwrap();
        assert!(matches!(cert.outcome, Outcome::SunflowerFree));
        assert!(cert.stats.exhaustive);
        assert_eq!(cert.stats.subsets_examined, 0);
    }

    #[test]
    fn spread_triple_family_split_by_mode() {
        let fam = spread_triple();
        let general =
            find_sunflower(&fam, 3, SearchMode::GeneralPosition, &SearchBudget::default()).unwrap();
        assert!(matches!(general.outcome, Outcome::SunflowerFree));
        let setlike =
            find_sunflower(&fam, 3, SearchMode::SetLike, &SearchBudget::default()).unwrap();
        match setlike.outcome {
            Outcome::Witness(w) => {
                assert_eq!(w.kernel_dim, 0);
                assert_eq!(w.member_indices, vec![0, 1, 2]);
            }
            other => panic!("expected a set-like witness, got {other:?}"),
        }
    }

    /// Oracle: plain s-subset scan written independently of the search path.
    fn oracle(family: &[Subspace], s: usize, general: bool) -> Option<Vec<usize>> {
        let mut ix: Vec<usize> = (0..s).collect();
        loop {
            let k = family[0].dim();
            let members: Vec<&Subspace> = ix.iter().map(|&i| &family[i]).collect();
            let kernel = members[0].meet(members[1]).unwrap();
            let mut ok = true;
            for a in 0..s {
                for b in a + 1..s {
                    if members[a].meet(members[b]).unwrap() != kernel {
                        ok = false;
                    }
                }
            }
            if ok && general {
                let mut stacked = members[0].basis().clone();
                for m in &members[1..] {
                    stacked = stacked.vstack(m.basis()).unwrap();
                }
                let d = kernel.dim();
                ok = stacked.rank() == d + s * (k - d);
            }
            if ok {
                return Some(ix);
            }
            if !next_combination(&mut ix, family.len()) {
                return None;
            }
        }
    }

    #[test]
    fn partite_plus_extra_member_gains_a_witness() {
        let f = gf(2);
        let fam = construct_partite(3, 2, &f, 1 << 20).unwrap();
        // deterministically pick the first plane whose addition the oracle
        // rejects
        let mut found = None;
        for cand in crate::enumerate::SubspaceIter::new(f, 4, 2, 1 << 20).unwrap() {
            if fam.contains(&cand) {
                continue;
            }
            let mut extended = fam.clone();
            extended.push(cand.clone());
            if let Some(ix) = oracle(&extended, 3, true) {
                found = Some((extended, ix));
                break;
            }
        }
        let (extended, oracle_ix) = found.expect("the partite family rejects some addition");
        let cert =
            find_sunflower(&extended, 3, SearchMode::GeneralPosition, &SearchBudget::default())
                .unwrap();
        match cert.outcome {
            Outcome::Witness(w) => {
                // the plain path scans subsets in the same lexicographic order
                assert_eq!(w.member_indices, oracle_ix);
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn bucket_path_agrees_with_plain_path() {
        // force the bucket path by dropping the threshold to zero
        let fam = construct_example1(&gf(2), 1 << 20).unwrap();
        let bucket_budget = SearchBudget {
            subset_threshold: 0,
            ..SearchBudget::default()
        };
        // general-position mode: both paths prove freeness
        let plain =
            find_sunflower(&fam, 3, SearchMode::GeneralPosition, &SearchBudget::default()).unwrap();
        let bucket =
            find_sunflower(&fam, 3, SearchMode::GeneralPosition, &bucket_budget).unwrap();
        assert!(matches!(plain.outcome, Outcome::SunflowerFree));
        assert!(matches!(bucket.outcome, Outcome::SunflowerFree));
        assert!(bucket.stats.exhaustive);
        assert_eq!(
            bucket.stats.pairs_examined,
            (fam.len() * (fam.len() - 1) / 2) as u64
        );
        // set-like mode: weaker condition, witnesses exist (three planes of
        // one solid through a common line); both paths must find one
        for budget in [SearchBudget::default(), bucket_budget] {
            let cert = find_sunflower(&fam, 3, SearchMode::SetLike, &budget).unwrap();
            match cert.outcome {
                Outcome::Witness(w) => {
                    let members: Vec<Subspace> =
                        w.member_indices.iter().map(|&i| fam[i].clone()).collect();
                    assert!(set_like_kernel(&members).unwrap().is_some());
                    assert!(sunflower_kernel(&members).unwrap().is_none());
                }
                other => panic!("expected a set-like witness, got {other:?}"),
            }
        }
        // and on a family that does contain sunflowers
        let f = gf(2);
        let all_planes: Vec<Subspace> = crate::enumerate::SubspaceIter::new(f, 4, 2, 1 << 20)
            .unwrap()
            .collect();
        let plain = find_sunflower(&all_planes, 3, SearchMode::GeneralPosition, &SearchBudget::default())
            .unwrap();
        let bucket =
            find_sunflower(&all_planes, 3, SearchMode::GeneralPosition, &bucket_budget).unwrap();
        match (&plain.outcome, &bucket.outcome) {
            (Outcome::Witness(a), Outcome::Witness(b)) => {
                assert!(sunflower_kernel(
                    &a.member_indices.iter().map(|&i| all_planes[i].clone()).collect::<Vec<_>>()
                )
                .unwrap()
                .is_some());
                assert!(sunflower_kernel(
                    &b.member_indices.iter().map(|&i| all_planes[i].clone()).collect::<Vec<_>>()
                )
                .unwrap()
                .is_some());
            }
            other => panic!("both paths should find a witness, got {other:?}"),
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let fam = construct_example1(&gf(2), 1 << 20).unwrap();
        let tiny = SearchBudget {
            max_pairs: 10,
            max_subsets: 10,
            subset_threshold: 0,
        };
        let cert = find_sunflower(&fam, 3, SearchMode::GeneralPosition, &tiny).unwrap();
        assert!(!cert.stats.exhaustive);
        assert!(matches!(cert.outcome, Outcome::SunflowerFree));
    }

    #[test]
    fn monotonicity_of_freeness() {
        // subfamilies of an exhaustively certified family stay free
        let fam = construct_example1(&gf(2), 1 << 20).unwrap();
        for stride in [2usize, 3, 5] {
            let sub: Vec<Subspace> = fam.iter().step_by(stride).cloned().collect();
            let cert =
                find_sunflower(&sub, 3, SearchMode::GeneralPosition, &SearchBudget::default())
                    .unwrap();
            assert!(matches!(cert.outcome, Outcome::SunflowerFree));
            assert!(cert.stats.exhaustive);
        }
    }
}
