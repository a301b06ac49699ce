//! Machine-checkable verification reports.
//!
//! Every verification entry point returns a [`Certificate`] that records the
//! scope of the search (exhaustive, or budgeted with exact counts) next to
//! the outcome, so a negative result is never silently weaker than claimed.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::enumerate::{subspaces_of, SubspaceIter};
use crate::error::{Error, Result};
use crate::family::FamilySpec;
use crate::gaussian::gaussian;
use crate::nesting::{FamilyNode, FamilyTree};
use crate::subspace::{span_of, Subspace};
use crate::sunflower::{SearchMode, SunflowerWitness};

/// How much of the search space a verification actually covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchStats {
    /// True only if the full space was explored; a negative outcome is a
    /// proof exactly in this case.
    pub exhaustive: bool,
    pub pairs_examined: u64,
    pub subsets_examined: u64,
}

impl SearchStats {
    pub fn exhaustive_with(pairs: u64, subsets: u64) -> SearchStats {
        SearchStats {
            exhaustive: true,
            pairs_examined: pairs,
            subsets_examined: subsets,
        }
    }
}

/// Exact bound context attached to a certificate, all values big integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    /// A construction-specific lower bound, when one is known.
    pub lower: Option<BigUint>,
    pub actual: BigUint,
    /// The product upper bound for s-sunflower-free families of k-spaces.
    pub upper: BigUint,
}

/// What a verification concluded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    SunflowerFree,
    Witness(SunflowerWitness),
    ConditionsHold,
    ConditionViolation { detail: String },
    NestingValid,
    NestingViolation { detail: String },
    Maximal { candidates_checked: u64 },
    Extendable { candidate: Subspace },
}

/// A verification report: what was checked, how thoroughly, and the result.
#[derive(Debug, Clone)]
pub struct Certificate {
    /// FNV-1a hash of the canonical member encodings.
    pub family_hash: String,
    pub family_size: usize,
    pub s: usize,
    pub mode: Option<SearchMode>,
    pub stats: SearchStats,
    pub outcome: Outcome,
    pub bounds: Option<BoundReport>,
}

impl Certificate {
    /// True if the certificate proves its negative claim at full scope.
    pub fn is_proof(&self) -> bool {
        self.stats.exhaustive
    }
}

/// FNV-1a over the canonical encodings, as a fixed-width hex string.
pub fn family_hash(members: &[Subspace]) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for m in members {
        for v in m.encoding() {
            h ^= v as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    format!("{h:016x}")
}

/// Knobs for the structural verifications.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Leaf pairs checked per tree; exhaustive below, deterministic
    /// sampling above.
    pub leaf_pair_budget: u64,
    /// Cross-validate the cover condition by enumerating d-spaces when
    /// their count is at most this (0 disables the cross-check).
    pub dspace_cap: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            leaf_pair_budget: 100_000,
            dspace_cap: 0,
        }
    }
}

/// Check the two defining conditions of an (m, d; V, Sigma, T)-family:
/// every member meets Sigma exactly in T, and pairwise intersections stay
/// at dimension tau + d - 1 or below. Optionally cross-validates the cover
/// condition by exhaustive d-space enumeration.
pub fn verify_family_conditions(
    members: &[Subspace],
    spec: &FamilySpec,
    opts: &VerifyOptions,
) -> Result<Certificate> {
    let mut outcome = Outcome::ConditionsHold;
    let mut pairs = 0u64;
    let mut subsets = 0u64;

    for (i, c) in members.iter().enumerate() {
        if c.dim() != spec.member_dim() || !spec.ambient().contains(c) {
            outcome = Outcome::ConditionViolation {
                detail: format!("member {i} is not an m-space of V"),
            };
            break;
        }
        if c.meet(spec.sigma())? != *spec.t_space() {
            outcome = Outcome::ConditionViolation {
                detail: format!("member {i} meets Sigma outside T"),
            };
            break;
        }
    }

    let cap = spec.pairwise_cap();
    if outcome == Outcome::ConditionsHold {
        let n = members.len();
        let violation = (0..n)
            .into_par_iter()
            .flat_map(|i| (i + 1..n).into_par_iter().map(move |j| (i, j)))
            .map(|(i, j)| {
                let dim = members[i].meet(&members[j])?.dim();
                Ok(((i, j), dim))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .find(|&(_, dim)| dim > cap);
        pairs = (n as u64) * (n as u64).saturating_sub(1) / 2;
        if let Some(((i, j), dim)) = violation {
            outcome = Outcome::ConditionViolation {
                detail: format!(
                    "members {i} and {j} intersect in dimension {dim} > tau + d - 1 = {cap}"
                ),
            };
        }
    }

    // direct witness of the cover condition: every d-space disjoint from T
    // lies in at most one member
    if outcome == Outcome::ConditionsHold && opts.dspace_cap > 0 {
        let q = spec.field().order() as u64;
        let d = spec.cover() as i64;
        if gaussian(spec.n() as i64, d, q) <= BigUint::from(opts.dspace_cap) {
            for dspace in subspaces_of(spec.ambient(), spec.cover(), opts.dspace_cap)? {
                if !dspace.meet(spec.t_space())?.is_zero() {
                    continue;
                }
                subsets += 1;
                let hits = members.iter().filter(|m| m.contains(&dspace)).count();
                if hits > 1 {
                    outcome = Outcome::ConditionViolation {
                        detail: format!("a {}-space lies in {hits} members", spec.cover()),
                    };
                    break;
                }
            }
        }
    }

    Ok(Certificate {
        family_hash: family_hash(members),
        family_size: members.len(),
        s: 0,
        mode: None,
        stats: SearchStats {
            exhaustive: true,
            pairs_examined: pairs,
            subsets_examined: subsets,
        },
        outcome,
        bounds: None,
    })
}

struct NodeRef<'a> {
    depth: usize,
    parent: &'a Subspace,
    node: &'a FamilyNode,
}

fn collect_nodes<'a>(tree: &'a FamilyTree, v: &'a Subspace) -> Vec<NodeRef<'a>> {
    let mut out = Vec::new();
    fn walk<'a>(node: &'a FamilyNode, depth: usize, out: &mut Vec<NodeRef<'a>>) {
        for child in &node.children {
            out.push(NodeRef {
                depth: depth + 1,
                parent: &node.member,
                node: child,
            });
            walk(child, depth + 1, out);
        }
    }
    for root in &tree.roots {
        out.push(NodeRef {
            depth: 0,
            parent: v,
            node: root,
        });
        walk(root, 0, &mut out);
    }
    out
}

/// Verify the structure of a nesting tree.
///
/// Per node: the children satisfy their level's family conditions
/// (exhaustive pairwise). Across branches: sampled or exhaustive leaf pairs
/// satisfy dim(S cap S') <= d - 1 of the level where their paths diverge.
/// Arithmetically: a sunflower crossing branches at any level would need a
/// span larger than the member that contains it.
pub fn verify_nesting(tree: &FamilyTree, s: usize, opts: &VerifyOptions) -> Result<Certificate> {
    let v = Subspace::full(tree.field.clone(), tree.params.ambient_dim);
    let leaves_flat = tree.leaf_subspaces();
    let mut stats = SearchStats {
        exhaustive: true,
        pairs_examined: 0,
        subsets_examined: 0,
    };
    let fail = |detail: String, stats: SearchStats| Certificate {
        family_hash: family_hash(&leaves_flat),
        family_size: leaves_flat.len(),
        s,
        mode: None,
        stats,
        outcome: Outcome::NestingViolation { detail },
        bounds: None,
    };

    // the span-dimension impossibility argument, per level: a sunflower
    // crossing branches of a depth-j family has kernel dimension at most
    // d_j - 1, so its span needs (d_j - 1) + s(k - d_j + 1) dimensions,
    // which must exceed the dimension of the containing member
    let k = tree.params.k;
    for (depth, level) in tree.params.levels.iter().enumerate() {
        let container = if depth == 0 {
            tree.params.ambient_dim
        } else {
            tree.params.levels[depth - 1].member_dim
        };
        let kappa = level.cover - 1;
        let span_needed = kappa + s * (k - kappa);
        if span_needed <= container {
            return Ok(fail(
                format!(
                    "level {depth}: span bound {span_needed} does not exceed the container \
                     dimension {container}"
                ),
                stats,
            ));
        }
    }

    // per-node structural checks: dimensions, containment, family conditions
    let nodes = collect_nodes(tree, &v);
    for nref in &nodes {
        let level = &tree.params.levels[nref.depth];
        if nref.node.member.dim() != level.member_dim {
            return Ok(fail(
                format!(
                    "a depth-{} member has dimension {}, expected {}",
                    nref.depth,
                    nref.node.member.dim(),
                    level.member_dim
                ),
                stats,
            ));
        }
        if !nref.parent.contains(&nref.node.member) {
            return Ok(fail(
                format!("a depth-{} member escapes its parent", nref.depth),
                stats,
            ));
        }
    }
    let internal: Vec<&NodeRef> = nodes.iter().filter(|n| !n.node.children.is_empty()).collect();
    let mut family_checks: Vec<(usize, &Subspace, Vec<Subspace>)> = Vec::new();
    family_checks.push((
        0,
        &v,
        tree.roots.iter().map(|r| r.member.clone()).collect(),
    ));
    for nref in &internal {
        family_checks.push((
            nref.depth + 1,
            &nref.node.member,
            nref.node.children.iter().map(|c| c.member.clone()).collect(),
        ));
    }
    for (depth, parent, members) in &family_checks {
        let spec = tree.level_spec(*depth, parent)?;
        let cert = verify_family_conditions(members, &spec, opts)?;
        stats.pairs_examined += cert.stats.pairs_examined;
        stats.subsets_examined += cert.stats.subsets_examined;
        if let Outcome::ConditionViolation { detail } = cert.outcome {
            return Ok(fail(format!("depth-{depth} family: {detail}"), stats));
        }
    }

    // leaf count must equal the product of the per-level sizes
    let expected: usize = tree.level_sizes().iter().product();
    if leaves_flat.len() != expected {
        return Ok(fail(
            format!(
                "leaf count {} differs from the level-size product {expected}",
                leaves_flat.len()
            ),
            stats,
        ));
    }

    // cross-branch leaf pairs, exhaustive or deterministically sampled
    let leaves = tree.leaves();
    let total_pairs = (leaves.len() as u64) * (leaves.len() as u64 - 1) / 2;
    let bound_for = |a: &[usize], b: &[usize]| -> usize {
        let depth = a
            .iter()
            .zip(b)
            .position(|(x, y)| x != y)
            .expect("distinct leaves have distinct paths");
        tree.params.levels[depth].cover - 1
    };
    let check_pair = |ia: usize, ib: usize| -> Result<Option<String>> {
        let (pa, sa) = &leaves[ia];
        let (pb, sb) = &leaves[ib];
        let cap = bound_for(pa, pb);
        let dim = sa.meet(sb)?.dim();
        if dim > cap {
            return Ok(Some(format!(
                "leaves {pa:?} and {pb:?} intersect in dimension {dim} > {cap}"
            )));
        }
        Ok(None)
    };
    if total_pairs <= opts.leaf_pair_budget {
        for ia in 0..leaves.len() {
            for ib in ia + 1..leaves.len() {
                stats.pairs_examined += 1;
                if let Some(detail) = check_pair(ia, ib)? {
                    return Ok(fail(detail, stats));
                }
            }
        }
    } else {
        stats.exhaustive = false;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f1d0);
        let mut done = 0u64;
        while done < opts.leaf_pair_budget {
            let ia = rng.random_range(0..leaves.len());
            let ib = rng.random_range(0..leaves.len());
            if ia == ib {
                continue;
            }
            done += 1;
            stats.pairs_examined += 1;
            if let Some(detail) = check_pair(ia.min(ib), ia.max(ib))? {
                return Ok(fail(detail, stats));
            }
        }
    }

    Ok(Certificate {
        family_hash: family_hash(&leaves_flat),
        family_size: leaves_flat.len(),
        s,
        mode: None,
        stats,
        outcome: Outcome::NestingValid,
        bounds: None,
    })
}

/// Largest candidate space for maximality checking.
pub const MAXIMALITY_CAP: u64 = 100_000;

/// Check whether every k-space of the ambient outside the family creates an
/// s-sunflower through itself when added. Refuses ambients with more than
/// [`MAXIMALITY_CAP`] k-spaces rather than sampling.
pub fn is_maximal(
    family: &[Subspace],
    s: usize,
    ambient: &Subspace,
    k: usize,
    budget_subsets: u64,
) -> Result<Certificate> {
    if s < 3 {
        return Err(Error::InvalidParameter(format!(
            "maximality check needs s >= 3, got {s}"
        )));
    }
    let q = ambient.field().order() as u64;
    if gaussian(ambient.dim() as i64, k as i64, q) > BigUint::from(MAXIMALITY_CAP) {
        return Err(Error::BudgetExceeded(format!(
            "maximality is a universal claim; refusing ambient with more than {MAXIMALITY_CAP} \
             candidate {k}-spaces"
        )));
    }
    let mut stats = SearchStats {
        exhaustive: true,
        pairs_examined: 0,
        subsets_examined: 0,
    };
    let members: std::collections::BTreeSet<Vec<u32>> =
        family.iter().map(|m| m.encoding()).collect();
    let mut checked = 0u64;
    let mut extendable: Option<Subspace> = None;
    for cand in subspaces_of(ambient, k, MAXIMALITY_CAP)? {
        if members.contains(&cand.encoding()) {
            continue;
        }
        checked += 1;
        if !creates_sunflower(family, &cand, s, budget_subsets, &mut stats)? {
            extendable = Some(cand);
            break;
        }
    }
    let outcome = match extendable {
        Some(candidate) => Outcome::Extendable { candidate },
        None => Outcome::Maximal {
            candidates_checked: checked,
        },
    };
    Ok(Certificate {
        family_hash: family_hash(family),
        family_size: family.len(),
        s,
        mode: Some(SearchMode::GeneralPosition),
        stats,
        outcome,
        bounds: None,
    })
}

/// Does family + {x} contain an s-sunflower through x? Only subsets through
/// x need checking when the family itself is sunflower-free.
fn creates_sunflower(
    family: &[Subspace],
    x: &Subspace,
    s: usize,
    budget_subsets: u64,
    stats: &mut SearchStats,
) -> Result<bool> {
    use std::collections::BTreeMap;
    let k = x.dim();
    // bucket members by their meet with x
    let mut buckets: BTreeMap<Vec<u32>, (Subspace, Vec<usize>)> = BTreeMap::new();
    for (i, m) in family.iter().enumerate() {
        stats.pairs_examined += 1;
        let meet = x.meet(m)?;
        buckets
            .entry(meet.encoding())
            .or_insert_with(|| (meet, Vec::new()))
            .1
            .push(i);
    }
    for (kernel, group) in buckets.values() {
        if group.len() + 1 < s {
            continue;
        }
        let d = kernel.dim();
        // (s-1)-subsets of the group, all pairwise meeting in the kernel,
        // spanning d + s(k-d) together with x
        let mut ix: Vec<usize> = (0..s - 1).collect();
        loop {
            if stats.subsets_examined >= budget_subsets {
                stats.exhaustive = false;
                return Ok(false);
            }
            stats.subsets_examined += 1;
            let chosen: Vec<&Subspace> = ix.iter().map(|&g| &family[group[g]]).collect();
            let mut ok = true;
            'pairs: for a in 0..chosen.len() {
                for b in a + 1..chosen.len() {
                    if chosen[a].meet(chosen[b])? != *kernel {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
            if ok {
                let mut all: Vec<Subspace> = chosen.into_iter().cloned().collect();
                all.push(x.clone());
                let span = span_of(x.field(), x.ambient_dim(), &all)?;
                if span.dim() == d + s * (k - d) {
                    return Ok(true);
                }
            }
            if !next_subset(&mut ix, group.len()) {
                break;
            }
        }
    }
    Ok(false)
}

fn next_subset(ix: &mut [usize], n: usize) -> bool {
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

/// All k-spaces of an ambient, for tests and the maximality surface.
pub fn all_k_spaces(ambient: &Subspace, k: usize, cap: u64) -> Result<Vec<Subspace>> {
    if ambient.dim() == ambient.ambient_dim() {
        Ok(SubspaceIter::new(ambient.field().clone(), ambient.dim(), k, cap)?.collect())
    } else {
        subspaces_of(ambient, k, cap)
    }
}

/// Construction-specific lower bounds for the bound report.
pub fn construction_lower_bound(
    tag: &str,
    s: usize,
    k: usize,
    q: u64,
) -> Option<BigUint> {
    let kk = k as u32;
    match tag {
        "a" => {
            let e = (s as u32 - 1) * kk * (kk + 1) / 2 - kk;
            Some(BigUint::from(q).pow(e))
        }
        "b" => {
            let g = num_integer::Integer::gcd(&(k as i64), &(s as i64 - 1));
            let e = (s as i64 - 2) * (k as i64) * (k as i64 + 1) / 2 + (k as i64) * (g - 3) / 2;
            (e >= 0).then(|| BigUint::from(q).pow(e as u32))
        }
        "g" => {
            let e = (s as i64 - 1) * (k as i64) * (k as i64) / 4 + (s as i64 - 2) * (k as i64) / 2
                - 1;
            (e >= 0).then(|| BigUint::from(q).pow(e as u32))
        }
        "partite" => Some(crate::gaussian::gauss_bracket(s as u64 - 1, q).pow(kk)),
        "example1" => {
            let q = BigUint::from(q);
            Some(&q * &q * &q * &q + &q * &q + &q + 1u32)
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expository::construct_example1;
    use crate::family::build_family;
    use crate::field::FieldSpec;
    use crate::nesting::{construct_a, construct_b};
    use std::sync::Arc;

    fn gf(q: u64) -> Arc<FieldSpec> {
        FieldSpec::from_order(q).unwrap()
    }

    #[test]
    fn family_conditions_pass_for_built_family() {
        let f = gf(2);
        let v = Subspace::full(f.clone(), 5);
        let t = Subspace::first_coordinates(f.clone(), 5, 1);
        let spec = FamilySpec::new(3, 1, v, t.clone(), t).unwrap();
        let fam = build_family(&spec, 1 << 20).unwrap();
        let opts = VerifyOptions {
            dspace_cap: 100_000,
            ..VerifyOptions::default()
        };
        let cert = verify_family_conditions(&fam, &spec, &opts).unwrap();
        assert_eq!(cert.outcome, Outcome::ConditionsHold);
        assert!(cert.stats.subsets_examined > 0); // d-space cross-check ran
    }

    #[test]
    fn family_conditions_catch_overlap() {
        let f = gf(2);
        let v = Subspace::full(f.clone(), 5);
        let t = Subspace::first_coordinates(f.clone(), 5, 1);
        let spec = FamilySpec::new(3, 1, v.clone(), t.clone(), t.clone()).unwrap();
        // two members meeting in a (tau + d)-space violate condition 2
        let a = Subspace::first_coordinates(f.clone(), 5, 3);
        let b = Subspace::coordinate_span(f.clone(), 5, &[0, 1, 3]);
        let cert = verify_family_conditions(&[a, b], &spec, &VerifyOptions::default()).unwrap();
        match cert.outcome {
            Outcome::ConditionViolation { ref detail } => {
                assert!(detail.contains("intersect"), "{detail}")
            }
            ref other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn family_conditions_catch_sigma_leak() {
        let f = gf(2);
        let v = Subspace::full(f.clone(), 5);
        let t = Subspace::first_coordinates(f.clone(), 5, 1);
        let sigma = Subspace::first_coordinates(f.clone(), 5, 2);
        let spec = FamilySpec::new(3, 1, v, sigma.clone(), t).unwrap();
        // a member containing all of Sigma breaks condition 1
        let bad = Subspace::first_coordinates(f, 5, 3);
        let cert =
            verify_family_conditions(&[bad], &spec, &VerifyOptions::default()).unwrap();
        assert!(matches!(cert.outcome, Outcome::ConditionViolation { .. }));
    }

    #[test]
    fn nesting_a_3_2_verifies() {
        let tree = construct_a(3, 2, &gf(2), 1 << 20).unwrap();
        let cert = verify_nesting(&tree, 3, &VerifyOptions::default()).unwrap();
        assert_eq!(cert.outcome, Outcome::NestingValid);
        assert!(cert.stats.exhaustive);
    }

    #[test]
    fn nesting_b_3_3_verifies() {
        let tree = construct_b(3, 3, &gf(2), 1 << 20).unwrap();
        let cert = verify_nesting(&tree, 3, &VerifyOptions::default()).unwrap();
        assert_eq!(cert.outcome, Outcome::NestingValid);
        assert!(cert.stats.exhaustive);
    }

    #[test]
    fn corrupted_tree_is_rejected() {
        let mut tree = construct_a(3, 2, &gf(2), 1 << 20).unwrap();
        // replace one leaf with a leaf from a different branch
        let stolen = tree.roots[1].children[0].member.clone();
        tree.roots[0].children[0].member = stolen;
        let cert = verify_nesting(&tree, 3, &VerifyOptions::default()).unwrap();
        assert!(matches!(cert.outcome, Outcome::NestingViolation { .. }));
    }

    #[test]
    fn example1_is_maximal() {
        let f = gf(2);
        let fam = construct_example1(&f, 1 << 20).unwrap();
        let ambient = Subspace::full(f, 5);
        let cert = is_maximal(&fam, 3, &ambient, 2, 10_000_000).unwrap();
        match cert.outcome {
            Outcome::Maximal { candidates_checked } => {
                assert_eq!(candidates_checked, 155 - 23)
            }
            ref other => panic!("expected maximal, got {other:?}"),
        }
        assert!(cert.stats.exhaustive);
    }

    #[test]
    fn strict_subfamily_is_extendable() {
        let f = gf(2);
        let fam = construct_example1(&f, 1 << 20).unwrap();
        let ambient = Subspace::full(f, 5);
        let cert = is_maximal(&fam[..fam.len() - 1], 3, &ambient, 2, 10_000_000).unwrap();
        assert!(matches!(cert.outcome, Outcome::Extendable { .. }));
    }

    #[test]
    fn everything_family_is_vacuously_maximal() {
        let f = gf(2);
        let ambient = Subspace::full(f.clone(), 3);
        let fam = all_k_spaces(&ambient, 2, 1 << 20).unwrap();
        assert_eq!(fam.len(), 7);
        let cert = is_maximal(&fam, 3, &ambient, 2, 10_000_000).unwrap();
        assert!(matches!(
            cert.outcome,
            Outcome::Maximal {
                candidates_checked: 0
            }
        ));
    }

    #[test]
    fn maximality_refuses_large_ambients() {
        let f = gf(2);
        let ambient = Subspace::full(f, 20);
        assert!(matches!(
            is_maximal(&[], 3, &ambient, 2, 1000),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn construction_bounds() {
        assert_eq!(
            construction_lower_bound("a", 3, 2, 2),
            Some(BigUint::from(16u32))
        );
        assert_eq!(
            construction_lower_bound("b", 3, 3, 2),
            Some(BigUint::from(8u32))
        );
        assert_eq!(
            construction_lower_bound("example1", 3, 2, 3),
            Some(BigUint::from(94u32))
        );
        assert_eq!(
            construction_lower_bound("partite", 3, 2, 2),
            Some(BigUint::from(9u32))
        );
        assert_eq!(
            construction_lower_bound("g", 4, 2, 2),
            Some(BigUint::from(16u32))
        );
    }
}
