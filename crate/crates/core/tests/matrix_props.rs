use elemop::json::{conjugation_from_json, conjugation_to_json, matrix_from_json, matrix_to_json};
use elemop::linalg::family_rank;
use elemop::{Conjugation, GaussianRational, QMatrix};
use proptest::prelude::*;

fn q(re: i64, im: i64, den: i64) -> GaussianRational {
    GaussianRational::complex(re, den, im, den)
}

fn scalar() -> impl Strategy<Value = GaussianRational> {
    (-4i64..=4, -2i64..=2, 1i64..=3).prop_map(|(re, im, den)| q(re, im, den))
}

fn matrix(dim: usize) -> impl Strategy<Value = QMatrix> {
    proptest::collection::vec(scalar(), dim * dim).prop_map(move |e| QMatrix::new(dim, e).unwrap())
}

fn same_dim(count: usize) -> impl Strategy<Value = Vec<QMatrix>> {
    (1usize..=3).prop_flat_map(move |d| proptest::collection::vec(matrix(d), count))
}

fn e(i: usize, j: usize) -> QMatrix {
    QMatrix::unit(2, i, j)
}

/// Plain row reduction with field division, no fraction-free tricks.
fn naive_rank(mut rows: Vec<Vec<GaussianRational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != GaussianRational::default()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != GaussianRational::default() {
                let f = &rows[r][col] / &pivot;
                for c in 0..ncols {
                    let t = &f * &rows[rank][c];
                    rows[r][c] = &rows[r][c] - &t;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn nilpotent_unit_squares_to_zero() {
    assert!(e(0, 1).pow(2).is_zero());
    assert!(!e(0, 1).is_zero());
}

#[test]
fn inverse_of_unipotent() {
    let id = QMatrix::identity(2);
    let inv = (&id + &e(0, 1)).inverse().unwrap();
    assert_eq!(inv, &id - &e(0, 1));
}

#[test]
fn kron_of_nilpotents_is_nilpotent() {
    let k = e(0, 1).kron(&e(0, 1));
    assert_eq!(k.dim(), 4);
    assert!(k.pow(2).is_zero());
}

#[test]
fn identity_and_unit_are_independent() {
    assert_eq!(family_rank(&[QMatrix::identity(2), e(0, 1)]), 2);
    assert_eq!(family_rank(&[QMatrix::identity(2), QMatrix::identity(2).scale(&q(3, 0, 1))]), 1);
}

#[test]
fn commutator_of_units() {
    let c = e(0, 1).commutator(&e(1, 0)).unwrap();
    assert_eq!(c, QMatrix::diagonal(vec![q(1, 0, 1), q(-1, 0, 1)]));
}

#[test]
fn singular_has_no_inverse() {
    assert!(e(0, 1).inverse().is_err());
    assert!(QMatrix::identity(2).checked_mul(&QMatrix::identity(3)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(ms in same_dim(3)) {
        let (a, b, c) = (&ms[0], &ms[1], &ms[2]);
        let id = QMatrix::identity(a.dim());
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(&(a + b) + c, a + &(b + c));
        prop_assert_eq!(&(a * b) * c, a * &(b * c));
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        prop_assert_eq!(&(a + b) * c, &(a * c) + &(b * c));
        prop_assert_eq!(&(a * &id), a);
        prop_assert!((a - a).is_zero());
    }

    #[test]
    fn kron_mixed_product(x in same_dim(2), y in same_dim(2)) {
        let lhs = &x[0].kron(&y[0]) * &x[1].kron(&y[1]);
        let rhs = (&x[0] * &x[1]).kron(&(&y[0] * &y[1]));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn adjoint_reverses_products(ms in same_dim(2)) {
        let (a, b) = (&ms[0], &ms[1]);
        prop_assert_eq!((a * b).conj_transpose(), &b.conj_transpose() * &a.conj_transpose());
        prop_assert_eq!(a.conj_transpose().conj_transpose(), a.clone());
    }

    #[test]
    fn inverse_is_two_sided(ms in same_dim(1)) {
        let a = &ms[0];
        let id = QMatrix::identity(a.dim());
        match a.inverse() {
            Ok(inv) => {
                prop_assert_eq!(&(a * &inv), &id);
                prop_assert_eq!(&(&inv * a), &id);
            }
            Err(_) => prop_assert!(a.rank() < a.dim()),
        }
    }

    #[test]
    fn rank_matches_naive_elimination(ms in same_dim(2), k in 0usize..3) {
        let d = ms[0].dim();
        // Variants 1 and 2 force rank deficiency.
        let a = match k {
            0 => ms[0].clone(),
            1 => &ms[0] * &QMatrix::from_fn(d, |i, j| if i == j && i > 0 { q(1, 0, 1) } else { GaussianRational::default() }),
            _ => {
                let mut a = ms[0].clone();
                let last: Vec<_> = (0..d).map(|j| a.get(0, j) + ms[1].get(0, 0)).collect();
                for (j, v) in last.into_iter().enumerate() {
                    a.set(d - 1, j, v);
                }
                &a * &ms[1]
            }
        };
        let rows: Vec<Vec<_>> = a.rows().map(<[_]>::to_vec).collect();
        prop_assert_eq!(a.rank(), naive_rank(rows));
    }

    #[test]
    fn family_rank_matches_naive(ms in same_dim(4)) {
        let mut fam = ms.clone();
        fam.push(&ms[0] + &ms[1]);
        let rows: Vec<Vec<_>> = fam.iter().map(QMatrix::vectorize).collect();
        prop_assert_eq!(family_rank(&fam), naive_rank(rows));
    }

    #[test]
    fn conjugation_is_multiplicative(ms in same_dim(2), flip in any::<bool>()) {
        let d = ms[0].dim();
        let c = if flip { Conjugation::flip(d) } else { Conjugation::identity(d) };
        let (a, b) = (&ms[0], &ms[1]);
        prop_assert_eq!(c.apply(&(a * b)).unwrap(), &c.apply(a).unwrap() * &c.apply(b).unwrap());
        prop_assert_eq!(c.apply(&c.apply(a).unwrap()).unwrap(), a.clone());
    }

    #[test]
    fn json_round_trip(ms in same_dim(1)) {
        let s = matrix_to_json(&ms[0]);
        let back = matrix_from_json(&s).unwrap();
        prop_assert_eq!(&back, &ms[0]);
        prop_assert_eq!(matrix_to_json(&back), s);
    }

    #[test]
    fn wire_scalar_round_trip(z in scalar()) {
        let back: GaussianRational = z.to_wire().parse().unwrap();
        prop_assert_eq!(back, z);
    }
}

#[test]
fn conjugation_json_round_trip() {
    let c = Conjugation::flip(3);
    assert_eq!(conjugation_from_json(&conjugation_to_json(&c)).unwrap(), c);
    assert!(matrix_from_json(r#"{"dim":2,"entries":[["1"]]}"#).is_err());
    assert!(matrix_from_json(r#"{"dim":1,"entries":[["1/0"]]}"#).is_err());
}
