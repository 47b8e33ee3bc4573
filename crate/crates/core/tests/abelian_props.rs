use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use pvcoh::abelian::{
    cohomology_at, direct_limit_fg, smith_normal_form, DirectSystem, GroupPresentation, IntMatrix,
    LimitStatus,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;

use common::{oracle_invariant_factors, random_matrix};

#[test]
fn snf_matches_elementary_operation_oracle_on_1000_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        let m = random_matrix(&mut rng);
        let s = smith_normal_form(&m);
        assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d);
        assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(m.rows()));
        assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMatrix::identity(m.cols()));
        assert_eq!(s.invariant_factors(), oracle_invariant_factors(&m), "matrix {m:?}");
    }
}

fn arb_matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r)
            .prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

/// Random unimodular matrix as a product of elementary operations.
fn arb_unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -3i64..=3, any::<bool>()), 0..12).prop_map(move |ops| {
        let mut u = IntMatrix::identity(n);
        for (i, j, c, neg) in ops {
            if i != j {
                u.add_row_multiple(i, j, &BigInt::from(c));
            } else if neg {
                u.negate_row(i);
            }
        }
        u
    })
}

proptest! {
    #[test]
    fn snf_is_deterministic_and_diagonal(m in arb_matrix(6)) {
        let a = smith_normal_form(&m);
        let b = smith_normal_form(&m);
        prop_assert_eq!(&a.d, &b.d);
        prop_assert_eq!(&a.u, &b.u);
        prop_assert!(a.d.is_diagonal());
        let det_u = a.u.determinant().unwrap().abs();
        prop_assert_eq!(det_u, BigInt::from(1));
    }

    #[test]
    fn cohomology_invariant_under_basis_change(
        (d_in, d_out, p) in (1usize..=4, 1usize..=4, 1usize..=4).prop_flat_map(|(a, b, c)| {
            (arb_rank_one_pair(a, b, c), arb_unimodular(b))
                .prop_map(|((x, y), u)| (x, y, u))
        })
    ) {
        let h = cohomology_at(&d_in, &d_out).unwrap();
        // change basis of the middle cochain group: d_in' = P d_in, d_out' = d_out P^{-1}
        let s = smith_normal_form(&p);
        let p_inv = s.v.mul(&s.u).unwrap();
        prop_assert_eq!(p.mul(&p_inv).unwrap(), IntMatrix::identity(p.rows()));
        let d_in2 = p.mul(&d_in).unwrap();
        let d_out2 = d_out.mul(&p_inv).unwrap();
        prop_assert_eq!(cohomology_at(&d_in2, &d_out2).unwrap(), h);
    }

    #[test]
    fn stabilized_only_with_isomorphisms(entries in prop::collection::vec(-3i64..=3, 4), len in 2usize..5) {
        let m = IntMatrix::from_rows(&[vec![entries[0], entries[1]], vec![entries[2], entries[3]]]);
        let g = GroupPresentation::free(2);
        let sys = DirectSystem::new(vec![g; len], vec![m.clone(); len - 1], 1);
        let r = direct_limit_fg(&sys).unwrap();
        let unimodular = m.determinant().unwrap().abs() == BigInt::from(1);
        prop_assert_eq!(r.status == LimitStatus::Stabilized, unimodular);
        if r.status == LimitStatus::Stabilized {
            prop_assert!(r.maps.iter().all(|m| m.kernel.is_trivial() && m.cokernel.is_trivial()));
        }
    }
}

/// A pair `d_in: Z^a -> Z^b`, `d_out: Z^b -> Z^c` with `d_out d_in = 0`, built
/// as `d_in = x y^T` and `d_out = z w^T` with `w ⟂ x`.
fn arb_rank_one_pair(a: usize, b: usize, c: usize) -> impl Strategy<Value = (IntMatrix, IntMatrix)> {
    (
        prop::collection::vec(-4i64..=4, b),
        prop::collection::vec(-4i64..=4, a),
        prop::collection::vec(-4i64..=4, c),
        prop::collection::vec(-4i64..=4, b),
    )
        .prop_map(move |(x, y, z, w)| {
            // project w to be orthogonal to x over Z: w' = (x.x) w - (x.w) x
            let xx: i64 = x.iter().map(|v| v * v).sum();
            let xw: i64 = x.iter().zip(&w).map(|(p, q)| p * q).sum();
            let wp: Vec<i64> = w.iter().zip(&x).map(|(wi, xi)| xx * wi - xw * xi).collect();
            let d_in: Vec<Vec<i64>> = x.iter().map(|xi| y.iter().map(|yj| xi * yj).collect()).collect();
            let d_out: Vec<Vec<i64>> = z.iter().map(|zi| wp.iter().map(|wj| zi * wj).collect()).collect();
            (IntMatrix::from_rows(&d_in), IntMatrix::from_rows(&d_out))
        })
}
