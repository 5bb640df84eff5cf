use proptest::prelude::*;

use somp_bounds::bounds::{
    bound_report, correct_split, ratio_r, theorem1_bound, theorem2_bound, DeltaOrigin, DeltaValue,
};
use somp_bounds::linalg::{norm_frobenius, norm_inf_to_inf, norm_vec, DenseMatrix, VectorNorm};
use somp_bounds::model::{assemble_instance, CoefficientPattern, InstanceRecipe, MatrixEnsemble};
use somp_bounds::pursuit::{somp, PursuitConfig};
use somp_bounds::rip::support_delta;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec(-10.0f64..10.0, rows * cols)
        .prop_map(move |v| DenseMatrix::new(rows, cols, v).unwrap())
}

fn nonzero_matrix() -> impl Strategy<Value = DenseMatrix> {
    (1usize..6, 1usize..8)
        .prop_flat_map(|(r, c)| matrix(r, c))
        .prop_filter("nonzero", |m| norm_frobenius(m) > 1e-6)
}

fn recipe(k: usize) -> InstanceRecipe {
    InstanceRecipe {
        m: 32,
        n: 64,
        k,
        sparsity: 5,
        ensemble: MatrixEnsemble::Gaussian,
        pattern: CoefficientPattern::GenericRandom,
    }
}

proptest! {
    #[test]
    fn ratio_stays_in_its_bracket(x in nonzero_matrix(), delta in 0.0f64..0.99) {
        let jt = x.rows();
        let b = ratio_r(delta, jt + 2, jt, &x).unwrap();
        prop_assert!(b.contains_ratio(1e-12), "{b:?}");
    }

    #[test]
    fn row_l1_over_l2_is_between_one_and_sqrt_k(row in prop::collection::vec(-5.0f64..5.0, 1..20)) {
        let l2 = norm_vec(&row, VectorNorm::L2);
        prop_assume!(l2 > 1e-9);
        let q = norm_vec(&row, VectorNorm::L1) / l2;
        prop_assert!(q >= 1.0 - 1e-12);
        prop_assert!(q <= (row.len() as f64).sqrt() * (1.0 + 1e-12));
    }

    #[test]
    fn inf_norm_and_frobenius_relation(x in nonzero_matrix()) {
        // ||X||_F / sqrt(J) <= ||X||_inf <= sqrt(K) ||X||_F
        let (j, k) = (x.rows() as f64, x.cols() as f64);
        let inf = norm_inf_to_inf(&x);
        let fro = norm_frobenius(&x);
        prop_assert!(fro / j.sqrt() <= inf * (1.0 + 1e-12));
        prop_assert!(inf <= k.sqrt() * fro * (1.0 + 1e-12));
    }

    #[test]
    fn bounds_shrink_as_delta_grows(x in nonzero_matrix(), d1 in 0.0f64..0.98, step in 0.001f64..0.5) {
        let d2 = (d1 + step).min(0.999);
        let jt = x.rows();
        let t1a = theorem1_bound(d1, jt, 0, &x).unwrap().bound;
        let t1b = theorem1_bound(d2, jt, 0, &x).unwrap().bound;
        let t2a = theorem2_bound(d1, jt, 0, &x).unwrap();
        let t2b = theorem2_bound(d2, jt, 0, &x).unwrap();
        prop_assert!(t1b <= t1a * (1.0 + 1e-12));
        prop_assert!(t2b <= t2a * (1.0 + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bounds_hold_on_random_instances(seed in any::<u64>(), k in 1usize..8) {
        let inst = recipe(k).sample(seed).unwrap();
        let (delta, _) = support_delta(&inst.phi, &inst.support).unwrap();
        prop_assume!(delta < 1.0);
        let trace = somp(&inst.y, &inst.phi, &PursuitConfig::new(5)).unwrap();
        let dv = DeltaValue { value: delta.max(0.0), origin: DeltaOrigin::SupportGram };
        let tol = 1e-10 * norm_frobenius(&inst.x).max(1.0);
        for t in 0..5 {
            if correct_split(&inst, &trace, t).is_err() {
                break;
            }
            let rep = bound_report(&inst, &trace, t, dv).unwrap();
            prop_assert!(rep.thm1_slack() >= -tol, "t={t} {rep:?}");
            prop_assert!(rep.thm2_slack() >= -tol, "t={t} {rep:?}");
        }
    }

    #[test]
    fn measurement_column_order_does_not_matter(seed in any::<u64>(), k in 2usize..6) {
        let inst = recipe(k).sample(seed).unwrap();
        let perm: Vec<usize> = (0..k).rev().collect();
        let y_perm = inst.y.permute_columns(&perm).unwrap();
        let a = somp(&inst.y, &inst.phi, &PursuitConfig::new(5)).unwrap();
        let b = somp(&y_perm, &inst.phi, &PursuitConfig::new(5)).unwrap();
        prop_assert_eq!(a.selected_atoms(), b.selected_atoms());
    }

    #[test]
    fn selection_norm_is_irrelevant_for_one_vector(seed in any::<u64>()) {
        let inst = recipe(1).sample(seed).unwrap();
        let base = somp(&inst.y, &inst.phi, &PursuitConfig::new(5)).unwrap().selected_atoms();
        for p in [VectorNorm::L2, VectorNorm::Inf] {
            let other = somp(&inst.y, &inst.phi, &PursuitConfig::new(5).with_norm(p)).unwrap();
            prop_assert_eq!(&other.selected_atoms(), &base);
        }
    }
}

#[test]
fn somp_recovers_most_supports() {
    let recovered = (0..100)
        .filter(|&seed| {
            let inst = recipe(4).sample(seed).unwrap();
            let trace = somp(&inst.y, &inst.phi, &PursuitConfig::new(5)).unwrap();
            trace.final_support == inst.support
        })
        .count();
    assert!(recovered >= 95, "recovered {recovered}/100");
}

#[test]
fn single_atom_instance_is_recovered_immediately() {
    let phi = DenseMatrix::identity(4);
    let x = DenseMatrix::from_rows(&[
        vec![0.0, 0.0],
        vec![0.0, 0.0],
        vec![3.0, -1.0],
        vec![0.0, 0.0],
    ])
    .unwrap();
    let inst = assemble_instance(phi, x).unwrap();
    let trace = somp(&inst.y, &inst.phi, &PursuitConfig::new(1)).unwrap();
    assert_eq!(trace.selected_atoms(), vec![2]);
    assert!(trace.residual(1).unwrap().max_abs() < 1e-15);
}
