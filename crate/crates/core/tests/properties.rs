//! Property tests for the exact linear algebra and quotient layers.

use proptest::prelude::*;
use std::sync::Arc;

use sunflower_core::{FieldElem, FieldSpec, MatrixGF, QuotientMap, Subspace};

fn gf(q: u64) -> Arc<FieldSpec> {
    FieldSpec::from_order(q).unwrap()
}

fn matrix_strategy(q: u64, max_rows: usize, max_cols: usize) -> impl Strategy<Value = MatrixGF> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        prop::collection::vec(0..q as u32, r * c).prop_map(move |data| {
            MatrixGF::new(gf(q), r, c, data.into_iter().map(FieldElem).collect())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// RREF is idempotent and canonical: row operations never change it.
    #[test]
    fn rref_is_canonical(m in matrix_strategy(3, 4, 5), seed in any::<u64>()) {
        let r = m.rref();
        prop_assert_eq!(r.matrix.rref().matrix, r.matrix.clone());

        // apply a few deterministic pseudo-random row operations
        let f = gf(3);
        let mut state = seed | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let rows = m.row_count();
        let mut data: Vec<Vec<FieldElem>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
        for _ in 0..6 {
            let i = (next() % rows as u64) as usize;
            let j = (next() % rows as u64) as usize;
            let scale = FieldElem((next() % 2 + 1) as u32);
            if i != j {
                for c in 0..m.col_count() {
                    let v = f.add(data[i][c], f.mul(scale, data[j][c]));
                    data[i][c] = v;
                }
            }
        }
        let m2 = MatrixGF::from_rows(f, m.col_count(), &data).unwrap();
        prop_assert_eq!(m2.rref().matrix, r.matrix);
    }

    /// rank(M) + dim ker(M) = number of columns.
    #[test]
    fn rank_nullity(m in matrix_strategy(4, 4, 6)) {
        let k = m.kernel();
        prop_assert_eq!(m.rank() + k.row_count(), m.col_count());
        // and the kernel really annihilates M
        let prod = m.mul(&k.transpose()).unwrap();
        prop_assert!(prod.data().iter().all(|e| e.is_zero()));
    }

    /// dim S + dim U = dim(S meet U) + dim(S join U).
    #[test]
    fn modular_law(a in matrix_strategy(2, 3, 5), b in matrix_strategy(2, 3, 5)) {
        let n = a.col_count().max(b.col_count());
        let f = gf(2);
        let pad = |m: &MatrixGF| {
            let rows: Vec<Vec<FieldElem>> = (0..m.row_count())
                .map(|i| {
                    let mut r = m.row(i).to_vec();
                    r.resize(n, FieldElem::ZERO);
                    r.into_iter().map(|e| FieldElem(e.0 % 2)).collect()
                })
                .collect();
            Subspace::from_rows(f.clone(), n, &rows).unwrap()
        };
        let s = pad(&a);
        let u = pad(&b);
        let meet = s.meet(&u).unwrap();
        let join = s.join(&u).unwrap();
        prop_assert_eq!(s.dim() + u.dim(), meet.dim() + join.dim());
        prop_assert_eq!(
            s.distance(&u).unwrap(),
            s.dim() + u.dim() - 2 * meet.dim()
        );
    }

    /// Quotient round trips: push(pull(B)) = B and pull(push(A)) = A + T.
    #[test]
    fn quotient_round_trip(t_rows in matrix_strategy(2, 2, 5), a_rows in matrix_strategy(2, 3, 5)) {
        let f = gf(2);
        let n = 5;
        let fix = |m: &MatrixGF| {
            let rows: Vec<Vec<FieldElem>> = (0..m.row_count())
                .map(|i| {
                    let mut r: Vec<FieldElem> =
                        m.row(i).iter().map(|e| FieldElem(e.0 % 2)).collect();
                    r.resize(n, FieldElem::ZERO);
                    r
                })
                .collect();
            Subspace::from_rows(f.clone(), n, &rows).unwrap()
        };
        let t = fix(&t_rows);
        let a = fix(&a_rows);
        let v = Subspace::full(f.clone(), n);
        let quot = QuotientMap::new(v, t.clone()).unwrap();
        let pushed = quot.push(&a).unwrap();
        prop_assert_eq!(quot.pull(&pushed).unwrap(), a.join(&t).unwrap());
        prop_assert_eq!(
            pushed.dim(),
            a.dim() - a.meet(&t).unwrap().dim()
        );
        prop_assert_eq!(quot.push(&quot.pull(&pushed).unwrap()).unwrap(), pushed);
    }
}
