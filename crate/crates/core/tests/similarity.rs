use std::collections::BTreeSet;

use netgames::simnet::{build_similarity_network, coincidence, interiority_signed, jaccard_signed, FeatureMatrix};
use proptest::prelude::*;

mod common;

use common::masses;

const PAIRS: u32 = 10_000;

fn close(a: f64, b: f64) -> bool {
    common::close(a, b, 1e-12)
}

fn entry() -> impl Strategy<Value = f64> {
    prop_oneof![1 => Just(0.0), 4 => -10.0f64..10.0]
}

fn nonzero_vec(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(entry(), len).prop_filter("needs mass", |v| v.iter().any(|&x| x != 0.0))
}

fn pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..9).prop_flat_map(|n| (nonzero_vec(n), nonzero_vec(n)))
}

#[test]
fn worked_example() {
    let (v, r) = ([1.5, -2.1], [3.5, -1.6]);
    let j = jaccard_signed(&v, &r).unwrap();
    let i = interiority_signed(&v, &r).unwrap();
    assert!((j - 31.0 / 56.0).abs() < 1e-12);
    assert!((i - 31.0 / 36.0).abs() < 1e-12);
    assert!((coincidence(&v, &r, 1.0, 0.0).unwrap() - j * i).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(PAIRS))]

    #[test]
    fn indices_match_the_oracle_and_are_symmetric_and_bounded((v, r) in pair(), d in 0.1f64..6.0, reg in 0.0f64..3.0) {
        let (common, total) = masses(&v, &r);
        let (sv, sr) = (v.iter().map(|x| x.abs()).sum::<f64>(), r.iter().map(|x| x.abs()).sum::<f64>());
        let j = jaccard_signed(&v, &r).unwrap();
        let i = interiority_signed(&v, &r).unwrap();
        let c = coincidence(&v, &r, d, reg).unwrap();
        prop_assert!(close(j, common / total));
        prop_assert!(close(i, common / sv.min(sr)));
        prop_assert!(close(c, ((common + reg) / (total + reg)).powf(d) * i));
        prop_assert_eq!(j, jaccard_signed(&r, &v).unwrap());
        prop_assert_eq!(i, interiority_signed(&r, &v).unwrap());
        prop_assert_eq!(c, coincidence(&r, &v, d, reg).unwrap());
        for x in [j, i, c] {
            prop_assert!((0.0..=1.0).contains(&x), "{} out of range", x);
        }
    }

    #[test]
    fn positive_scaling_changes_nothing((v, r) in pair(), alpha in 1e-3f64..1e3) {
        let (sv, sr): (Vec<f64>, Vec<f64>) = (v.iter().map(|x| alpha * x).collect(), r.iter().map(|x| alpha * x).collect());
        prop_assert!(close(jaccard_signed(&v, &r).unwrap(), jaccard_signed(&sv, &sr).unwrap()));
        prop_assert!(close(interiority_signed(&v, &r).unwrap(), interiority_signed(&sv, &sr).unwrap()));
        prop_assert!(close(coincidence(&v, &r, 2.0, 0.0).unwrap(), coincidence(&sv, &sr, 2.0, 0.0).unwrap()));
    }

    #[test]
    fn stricter_d_lowers_coincidence((v, r) in pair(), d1 in 0.1f64..5.0, step in 0.01f64..3.0) {
        let d2 = d1 + step;
        let j = jaccard_signed(&v, &r).unwrap();
        let (c1, c2) = (coincidence(&v, &r, d1, 0.0).unwrap(), coincidence(&v, &r, d2, 0.0).unwrap());
        if j > 0.0 && j < 1.0 {
            prop_assert!(c2 < c1, "J={} C({})={} C({})={}", j, d1, c1, d2, c2);
        } else {
            prop_assert_eq!(c1, c2);
        }
    }

    #[test]
    fn self_similarity_is_one(v in (1usize..9).prop_flat_map(nonzero_vec), d in 0.1f64..6.0) {
        prop_assert_eq!(jaccard_signed(&v, &v).unwrap(), 1.0);
        prop_assert_eq!(interiority_signed(&v, &v).unwrap(), 1.0);
        prop_assert_eq!(coincidence(&v, &v, d, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn jaccard_is_multiset_jaccard_on_counts(
        (v, r) in (1usize..7).prop_flat_map(|n| (prop::collection::vec(0u32..6, n), prop::collection::vec(0u32..6, n)))
    ) {
        prop_assume!(v.iter().chain(&r).any(|&x| x > 0));
        // Expand counts into explicit multisets of (element, copy) tokens.
        let expand = |c: &[u32]| -> BTreeSet<(usize, u32)> {
            c.iter().enumerate().flat_map(|(e, &k)| (0..k).map(move |copy| (e, copy))).collect()
        };
        let (a, b) = (expand(&v), expand(&r));
        let expected = a.intersection(&b).count() as f64 / a.union(&b).count() as f64;
        let (vf, rf): (Vec<f64>, Vec<f64>) = (v.iter().map(|&x| x as f64).collect(), r.iter().map(|&x| x as f64).collect());
        prop_assert!(close(jaccard_signed(&vf, &rf).unwrap(), expected));
    }
}

fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2usize..30, 1usize..6).prop_flat_map(|(n, m)| prop::collection::vec(prop::collection::vec(-1e3f64..1e3, m), n))
}

fn matrix(rows: Vec<Vec<f64>>) -> FeatureMatrix {
    let labels = (0..rows.len()).map(|i| format!("r{i}")).collect();
    let columns = (0..rows[0].len()).map(|j| format!("f{j}")).collect();
    FeatureMatrix::new(labels, columns, rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn standardized_columns_have_zero_mean_unit_std(rows in matrix_strategy()) {
        let x = matrix(rows);
        prop_assume!(x.column_stds().iter().all(|&s| s > 1e-6));
        let z = x.standardize().unwrap();
        let n = z.shape().0 as f64;
        for j in 0..z.shape().1 {
            let col: Vec<f64> = z.column(j).collect();
            let mean = col.iter().sum::<f64>() / n;
            let std = (col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
            prop_assert!(mean.abs() < 1e-9, "mean {}", mean);
            prop_assert!((std - 1.0).abs() < 1e-9, "std {}", std);
        }
        let back = z.recenter(&x.column_means()).unwrap();
        for (got, want) in back.column_means().iter().zip(x.column_means()) {
            prop_assert!((got - want).abs() < 1e-9 * want.abs().max(1.0));
        }
    }

    #[test]
    fn networks_are_symmetric_bounded_and_zero_on_the_diagonal(rows in matrix_strategy(), d in 0.5f64..3.0) {
        let x = matrix(rows);
        prop_assume!(x.rows().iter().all(|r| r.iter().any(|&v| v != 0.0)));
        let net = build_similarity_network(&x, d, 0.0, 0.0).unwrap();
        let n = x.shape().0;
        for i in 0..n {
            prop_assert_eq!(net.weights[i][i], 0.0);
            for j in 0..n {
                prop_assert_eq!(net.weights[i][j], net.weights[j][i]);
                prop_assert!((0.0..=1.0).contains(&net.weights[i][j]));
                if i != j {
                    prop_assert_eq!(net.weights[i][j], coincidence(x.row(i), x.row(j), d, 0.0).unwrap());
                }
            }
        }
        prop_assert_eq!(net.edges().len(), n * (n - 1) / 2);
    }
}
