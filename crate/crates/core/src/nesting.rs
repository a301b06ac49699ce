//! Recursive nesting of cover-free families along a tower of coordinate
//! subspaces T_1 <= T_2 <= ... of V(sk-1, q).
//!
//! Two parameter schedules are provided: schedule A for s >= k+1 nests k
//! levels with (m_i, d_i) = (k-1+i(s-1), k-i); schedule B for 3 <= s <= k
//! nests s-1 levels with (m_i, d_i) = (ik-1, floor((s-1-i)k/(s-1))+1).
//! Every member of a level is recursively replaced by a full family inside
//! it; the leaves are the resulting k-spaces.

use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{build_family, FamilySpec};
use crate::field::FieldSpec;
use crate::subspace::Subspace;

/// Which nesting schedule a tree was built with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstructionTag {
    A,
    B,
}

impl std::fmt::Display for ConstructionTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConstructionTag::A => write!(f, "a"),
            ConstructionTag::B => write!(f, "b"),
        }
    }
}

/// One nesting depth: the family built inside each member of the previous
/// depth. `sigma_tower`/`tau_tower` index into the tower, `None` meaning the
/// zero space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelParams {
    /// The schedule's own level index i (k-spaces sit at index 0 for A,
    /// index 1 for B).
    pub index: usize,
    pub member_dim: usize,
    pub cover: usize,
    pub sigma_tower: usize,
    pub tau_tower: Option<usize>,
}

/// Full parameter table of a nesting, depth order (roots first).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestingParams {
    pub tag: ConstructionTag,
    pub s: usize,
    pub k: usize,
    /// sk - 1.
    pub ambient_dim: usize,
    /// Dimensions of the tower subspaces (T_1.. for A, T_2.. for B).
    pub tower_dims: Vec<usize>,
    pub levels: Vec<LevelParams>,
}

/// Schedule A, for s >= k+1 >= 3.
pub fn params_a(s: usize, k: usize) -> Result<NestingParams> {
    if k < 2 || s < k + 1 {
        return Err(Error::InvalidParameter(format!(
            "schedule A requires s >= k+1 >= 3, got s = {s}, k = {k}"
        )));
    }
    let m = |i: usize| k - 1 + i * (s - 1);
    let d = |i: usize| k - i;
    // dim T_i = 2 m_i - m_{i+1} = m_{i-1}
    let tower_dims: Vec<usize> = (1..k).map(|i| m(i - 1)).collect();
    for i in 1..k {
        let next = if i + 1 == k { s * k - 1 } else { m(i + 1) };
        debug_assert_eq!(2 * m(i) - next, m(i - 1));
    }
    let mut levels = Vec::with_capacity(k);
    // top: (m_{k-1}, d_{k-1}; V, T_{k-1}, T_{k-1})
    levels.push(LevelParams {
        index: k - 1,
        member_dim: m(k - 1),
        cover: d(k - 1),
        sigma_tower: k - 2,
        tau_tower: Some(k - 2),
    });
    // middle: (m_i, d_i; C_{i+1}, T_{i+1}, T_i) for i = k-2 .. 1
    for depth in 1..=k.saturating_sub(2) {
        let i = k - 1 - depth;
        levels.push(LevelParams {
            index: i,
            member_dim: m(i),
            cover: d(i),
            sigma_tower: i,     // T_{i+1}
            tau_tower: Some(i - 1), // T_i
        });
    }
    // bottom: (k, k; C_1, T_1, 0)
    levels.push(LevelParams {
        index: 0,
        member_dim: k,
        cover: k,
        sigma_tower: 0,
        tau_tower: None,
    });
    Ok(NestingParams {
        tag: ConstructionTag::A,
        s,
        k,
        ambient_dim: s * k - 1,
        tower_dims,
        levels,
    })
}

/// Schedule B, for 3 <= s <= k.
pub fn params_b(s: usize, k: usize) -> Result<NestingParams> {
    if s < 3 || s > k {
        return Err(Error::InvalidParameter(format!(
            "schedule B requires 3 <= s <= k, got s = {s}, k = {k}"
        )));
    }
    let m = |i: usize| i * k - 1;
    let d = |i: usize| (s - 1 - i) * k / (s - 1) + 1;
    // tower holds T_2 .. T_{s-1}, dim T_i = 2 m_i - m_{i+1} = m_{i-1}
    let tower_dims: Vec<usize> = (2..s).map(|i| m(i - 1)).collect();
    for i in 2..s {
        let next = if i + 1 == s { s * k - 1 } else { m(i + 1) };
        debug_assert_eq!(2 * m(i) - next, m(i - 1));
    }
    let mut levels = Vec::with_capacity(s - 1);
    // top: (m_{s-1}, d_{s-1}; V, T_{s-1}, T_{s-1})
    levels.push(LevelParams {
        index: s - 1,
        member_dim: m(s - 1),
        cover: d(s - 1),
        sigma_tower: s - 3,
        tau_tower: Some(s - 3),
    });
    // middle: (m_i, d_i; C_{i+1}, T_{i+1}, T_i) for i = s-2 .. 2
    for depth in 1..=s.saturating_sub(3) {
        let i = s - 1 - depth;
        levels.push(LevelParams {
            index: i,
            member_dim: m(i),
            cover: d(i),
            sigma_tower: i - 1, // T_{i+1}
            tau_tower: Some(i - 2), // T_i
        });
    }
    // bottom: (k, d_1; C_2, T_2, 0)
    levels.push(LevelParams {
        index: 1,
        member_dim: k,
        cover: d(1),
        sigma_tower: 0,
        tau_tower: None,
    });
    Ok(NestingParams {
        tag: ConstructionTag::B,
        s,
        k,
        ambient_dim: s * k - 1,
        tower_dims,
        levels,
    })
}

/// A member together with the family recursively built inside it. Nodes
/// without children are leaves (k-spaces).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyNode {
    pub member: Subspace,
    pub children: Vec<FamilyNode>,
}

/// The whole nesting: parameters, the concrete tower, and one subtree per
/// top-level member.
#[derive(Debug, Clone)]
pub struct FamilyTree {
    pub params: NestingParams,
    pub field: Arc<FieldSpec>,
    pub tower: Vec<Subspace>,
    pub roots: Vec<FamilyNode>,
}

impl FamilyTree {
    /// Leaves with their tree paths (index of the child taken at each depth).
    pub fn leaves(&self) -> Vec<(Vec<usize>, &Subspace)> {
        let mut out = Vec::new();
        fn walk<'a>(
            node: &'a FamilyNode,
            path: &mut Vec<usize>,
            out: &mut Vec<(Vec<usize>, &'a Subspace)>,
        ) {
            if node.children.is_empty() {
                out.push((path.clone(), &node.member));
                return;
            }
            for (i, child) in node.children.iter().enumerate() {
                path.push(i);
                walk(child, path, out);
                path.pop();
            }
        }
        for (i, root) in self.roots.iter().enumerate() {
            let mut path = vec![i];
            walk(root, &mut path, &mut out);
        }
        out
    }

    /// The flat family: all leaves in canonical order.
    pub fn leaf_subspaces(&self) -> Vec<Subspace> {
        let mut leaves: Vec<Subspace> = self
            .leaves()
            .into_iter()
            .map(|(_, s)| s.clone())
            .collect();
        leaves.sort_unstable();
        leaves
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().len()
    }

    /// Family size at each depth (roots first). Sizes are uniform across
    /// sibling families of a depth by construction.
    pub fn level_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![self.roots.len()];
        let mut nodes: Vec<&FamilyNode> = self.roots.iter().collect();
        while let Some(first) = nodes.first() {
            if first.children.is_empty() {
                break;
            }
            sizes.push(first.children.len());
            nodes = nodes.iter().flat_map(|n| n.children.iter()).collect();
        }
        sizes
    }

    /// The FamilySpec of the family at `depth` inside a given parent member.
    pub fn level_spec(&self, depth: usize, parent: &Subspace) -> Result<FamilySpec> {
        let level = &self.params.levels[depth];
        let sigma = self.tower[level.sigma_tower].clone();
        let t_space = match level.tau_tower {
            Some(ix) => self.tower[ix].clone(),
            None => Subspace::zero(self.field.clone(), self.params.ambient_dim),
        };
        FamilySpec::new(
            level.member_dim,
            level.cover,
            parent.clone(),
            sigma,
            t_space,
        )
    }
}

/// Exact per-level sizes of a nesting (as exponents of q), their product,
/// and the closed-form lower bound the schedule was designed to meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizePrediction {
    /// Exponents by level, bottom family first.
    pub exponents: Vec<usize>,
    pub total_exponent: usize,
    /// q^total_exponent.
    pub product: BigUint,
    pub bound_exponent: usize,
    /// q^bound_exponent.
    pub bound: BigUint,
}

/// Per-level sizes from the two-case family size formula, next to the
/// closed-form target: for schedule A that is q^((s-1) k(k+1)/2 - k), for B
/// it is q^((s-2) k(k+1)/2 + k (gcd(k, s-1) - 3)/2). The product is always
/// at least the closed form.
pub fn predicted_sizes(params: &NestingParams, q: u64) -> SizePrediction {
    let mut exponents = Vec::with_capacity(params.levels.len());
    for (depth, level) in params.levels.iter().enumerate() {
        let n = if depth == 0 {
            params.ambient_dim
        } else {
            params.levels[depth - 1].member_dim
        };
        let m = level.member_dim;
        let d = level.cover;
        let tau = level.tau_tower.map_or(0, |ix| params.tower_dims[ix]);
        let exp = if n - tau >= 2 * (m - tau) {
            d * (n - m)
        } else {
            (m - tau) * (n + tau + d - 2 * m)
        };
        exponents.push(exp);
    }
    exponents.reverse();
    let total_exponent: usize = exponents.iter().sum();
    let (s, k) = (params.s as i64, params.k as i64);
    let bound_exponent = match params.tag {
        ConstructionTag::A => (s - 1) * k * (k + 1) / 2 - k,
        ConstructionTag::B => {
            let g = k.gcd(&(s - 1));
            (s - 2) * k * (k + 1) / 2 + k * (g - 3) / 2
        }
    };
    assert!(bound_exponent >= 0 && total_exponent as i64 >= bound_exponent);
    let bound_exponent = bound_exponent as usize;
    SizePrediction {
        exponents,
        total_exponent,
        product: BigUint::from(q).pow(total_exponent as u32),
        bound_exponent,
        bound: BigUint::from(q).pow(bound_exponent as u32),
    }
}

fn construct_tree(
    params: NestingParams,
    field: &Arc<FieldSpec>,
    cap: u64,
) -> Result<FamilyTree> {
    let q = field.order() as u64;
    let prediction = predicted_sizes(&params, q);
    if prediction.product.to_u64().is_none_or(|c| c > cap) {
        return Err(Error::BudgetExceeded(format!(
            "nesting with {} leaves exceeds the cap {cap}",
            prediction.product
        )));
    }
    let n = params.ambient_dim;
    let tower: Vec<Subspace> = params
        .tower_dims
        .iter()
        .map(|&dim| Subspace::first_coordinates(field.clone(), n, dim))
        .collect();
    let tree = FamilyTree {
        params,
        field: field.clone(),
        tower,
        roots: Vec::new(),
    };

    fn descend(tree: &FamilyTree, depth: usize, parent: &Subspace, cap: u64) -> Result<Vec<FamilyNode>> {
        let spec = tree.level_spec(depth, parent)?;
        let members = build_family(&spec, cap)?;
        if depth + 1 == tree.params.levels.len() {
            return Ok(members
                .into_iter()
                .map(|member| FamilyNode {
                    member,
                    children: Vec::new(),
                })
                .collect());
        }
        members
            .into_par_iter()
            .map(|member| {
                let children = descend(tree, depth + 1, &member, cap)?;
                Ok(FamilyNode { member, children })
            })
            .collect()
    }

    let v = Subspace::full(field.clone(), n);
    let roots = descend(&tree, 0, &v, cap)?;
    Ok(FamilyTree { roots, ..tree })
}

/// Nesting A(s, k) in V(sk-1, q); leaf count q^((s-1) k(k+1)/2 - k).
pub fn construct_a(s: usize, k: usize, field: &Arc<FieldSpec>, cap: u64) -> Result<FamilyTree> {
    construct_tree(params_a(s, k)?, field, cap)
}

/// Nesting B(s, k) in V(sk-1, q); leaf count at least
/// q^((s-2) k(k+1)/2 + k (gcd(k, s-1) - 3)/2).
pub fn construct_b(s: usize, k: usize, field: &Arc<FieldSpec>, cap: u64) -> Result<FamilyTree> {
    construct_tree(params_b(s, k)?, field, cap)
}
