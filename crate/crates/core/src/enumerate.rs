//! Exhaustive enumeration of the m-subspaces of V(n, q).
//!
//! Every m-subspace has a unique RREF basis, determined by its pivot-column
//! set and the values of the free entries. The stream fixes pivot-column
//! sets in colexicographic order and counts free entries in integer-code
//! order, so enumeration order is part of the library contract and safe to
//! freeze in golden tests. The total count equals gaussian(n, m, q).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};
use crate::gaussian::{gaussian, gaussian_within};
use crate::matrix::MatrixGF;
use crate::subspace::Subspace;

/// Default cap on materialized enumerations.
pub const DEFAULT_ENUM_CAP: u64 = 10_000_000;

/// m-subsets of {0, ..., n-1} in colexicographic order.
struct ColexCombinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl ColexCombinations {
    fn new(n: usize, m: usize) -> Self {
        let current = (m <= n).then(|| (0..m).collect());
        ColexCombinations { n, current }
    }
}

impl Iterator for ColexCombinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        let m = cur.len();
        let mut advanced = false;
        for i in 0..m {
            let limit = if i + 1 < m { cur[i + 1] } else { self.n };
            if cur[i] + 1 < limit {
                cur[i] += 1;
                for (j, slot) in cur.iter_mut().enumerate().take(i) {
                    *slot = j;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            self.current = None;
        }
        Some(out)
    }
}

/// Streams every m-subspace of V(n, q) exactly once.
pub struct SubspaceIter {
    field: Arc<FieldSpec>,
    n: usize,
    m: usize,
    pivot_sets: ColexCombinations,
    /// Current pivot set, its free positions (row-major), and the counter.
    state: Option<PivotBlock>,
}

struct PivotBlock {
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    counter: u64,
    total: u64,
}

impl SubspaceIter {
    /// Errors with a budget violation if gaussian(n, m, q) exceeds `cap`.
    pub fn new(field: Arc<FieldSpec>, n: usize, m: usize, cap: u64) -> Result<SubspaceIter> {
        if m > n {
            return Err(Error::InvalidParameter(format!(
                "cannot enumerate {m}-subspaces of V({n})"
            )));
        }
        let q = field.order() as u64;
        if !gaussian_within(n as i64, m as i64, q, cap) {
            return Err(Error::BudgetExceeded(format!(
                "gaussian({n}, {m}, {q}) = {} exceeds the enumeration cap {cap}",
                gaussian(n as i64, m as i64, q)
            )));
        }
        Ok(SubspaceIter {
            field,
            n,
            m,
            pivot_sets: ColexCombinations::new(n, m),
            state: None,
        })
    }

    fn open_block(&mut self) -> bool {
        let Some(pivots) = self.pivot_sets.next() else {
            return false;
        };
        let mut is_pivot = vec![false; self.n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut free = Vec::new();
        for (i, &p) in pivots.iter().enumerate() {
            for j in p + 1..self.n {
                if !is_pivot[j] {
                    free.push((i, j));
                }
            }
        }
        let q = self.field.order() as u64;
        let total = q.pow(free.len() as u32);
        self.state = Some(PivotBlock {
            pivots,
            free,
            counter: 0,
            total,
        });
        true
    }

    fn emit(&self, block: &PivotBlock) -> Subspace {
        let q = self.field.order() as u64;
        let mut mat = MatrixGF::zeros(self.field.clone(), self.m, self.n);
        for (i, &p) in block.pivots.iter().enumerate() {
            mat.set(i, p, FieldElem::ONE);
        }
        let mut v = block.counter;
        for &(i, j) in &block.free {
            mat.set(i, j, FieldElem((v % q) as u32));
            v /= q;
        }
        Subspace::from_rref_unchecked(mat)
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        loop {
            if self.state.is_none() && !self.open_block() {
                return None;
            }
            let block = self.state.as_mut().unwrap();
            if block.counter < block.total {
                let out = self.emit(self.state.as_ref().unwrap());
                self.state.as_mut().unwrap().counter += 1;
                return Some(out);
            }
            self.state = None;
        }
    }
}

/// The m-subspaces of an arbitrary subspace, via its canonical coordinates.
pub fn subspaces_of(parent: &Subspace, m: usize, cap: u64) -> Result<Vec<Subspace>> {
    let inner = SubspaceIter::new(parent.field().clone(), parent.dim(), m, cap)?;
    inner
        .map(|s| {
            let rows = s.basis().mul(parent.basis())?;
            Ok(Subspace::from_matrix(&rows))
        })
        .collect()
}
