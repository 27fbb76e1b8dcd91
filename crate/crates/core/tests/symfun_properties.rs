use curvlab_core::symfun::oracle::{newton_matrix_oracle, sigma_subsets};
use curvlab_core::symfun::{
    binomial, convexity_order, garding_sample, lemma_c_gap, maclaurin_ratio_gap, newton_spectrum, normalized_h,
    normalized_hs, restricted_h, sigma, sigma_split_residual, sigmas, split_identity_residual, CurvatureVector,
};
use proptest::prelude::*;

fn vector(max_m: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, 2..=max_m)
}

fn cv(v: &[f64]) -> CurvatureVector {
    CurvatureVector::new(v.to_vec()).unwrap()
}

fn abs_sigma(k: usize, v: &[f64]) -> f64 {
    let a: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    sigma_subsets(k, &a)
}

proptest! {
    #[test]
    fn recurrence_matches_subset_sum(v in vector(8)) {
        let lam = cv(&v);
        for k in 0..=v.len() {
            let fast = sigma(k, &lam).unwrap();
            let slow = sigma_subsets(k, &v);
            prop_assert!((fast - slow).abs() <= 1e-12 * abs_sigma(k, &v).max(1.0), "k={k}: {fast} vs {slow}");
        }
    }

    #[test]
    fn sigmas_are_permutation_invariant(v in vector(8), rot in 0usize..8) {
        let mut w = v.clone();
        w.rotate_left(rot % v.len());
        w.reverse();
        let (a, b) = (sigmas(&cv(&v)), sigmas(&cv(&w)));
        for (k, (x, y)) in a.iter().zip(&b).enumerate() {
            prop_assert!((x - y).abs() <= 1e-12 * abs_sigma(k, &v).max(1.0));
        }
    }

    #[test]
    fn normalization_uses_binomials(v in vector(8)) {
        let lam = cv(&v);
        let m = v.len();
        let hs = normalized_hs(&lam);
        prop_assert_eq!(hs[0], 1.0);
        for k in 1..=m {
            let want = sigma(k, &lam).unwrap() / binomial(m as u64, k as u64) as f64;
            prop_assert!((hs[k] - want).abs() <= 1e-14 * want.abs().max(1.0));
            prop_assert_eq!(hs[k], normalized_h(k, &lam).unwrap());
        }
    }

    #[test]
    fn splitting_identities(v in vector(8)) {
        let lam = cv(&v);
        for i in 1..=v.len() {
            for l in 0..v.len() {
                let (r, s) = split_identity_residual(i, l, &lam).unwrap();
                prop_assert!(r.abs() <= 1e-12 * s.max(1.0));
                let (r, s) = sigma_split_residual(i, l, &lam).unwrap();
                prop_assert!(r.abs() <= 1e-12 * s.max(1.0));
            }
        }
    }

    #[test]
    fn newton_trace(v in vector(8)) {
        let lam = cv(&v);
        let m = v.len();
        for k in 0..m {
            let t = newton_spectrum(k, &lam).unwrap();
            let want = (m - k) as f64 * sigma(k, &lam).unwrap();
            prop_assert!((t.trace() - want).abs() <= 1e-11 * ((m - k) as f64 * abs_sigma(k, &v)).max(1.0));
        }
    }

    #[test]
    fn newton_eigenvalues_are_restricted_sigmas(v in vector(8)) {
        let lam = cv(&v);
        let m = v.len();
        for k in 0..m {
            let t = newton_spectrum(k, &lam).unwrap();
            for j in 0..m {
                let mut rest = v.clone();
                rest.remove(j);
                let want = sigma_subsets(k, &rest);
                prop_assert!((t.eigenvalues[j] - want).abs() <= 1e-12 * abs_sigma(k, &rest).max(1.0));
            }
        }
    }

    #[test]
    fn delta_formula_on_diagonals(v in prop::collection::vec(-2.0f64..2.0, 2..=4)) {
        let m = v.len();
        let a: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| if i == j { v[i] } else { 0.0 }).collect()).collect();
        for k in 1..m {
            let t = newton_matrix_oracle(k, &a).unwrap();
            let spec = newton_spectrum(k, &cv(&v)).unwrap();
            for i in 0..m {
                for j in 0..m {
                    let want = if i == j { spec.eigenvalues[i] } else { 0.0 };
                    prop_assert!((t[i][j] - want).abs() <= 1e-10 * want.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn garding_cone_chain(m in 2usize..=8, p_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let p = 1 + ((m - 1) as f64 * p_frac) as usize;
        let lam = garding_sample(m, p, seed).unwrap();
        let hs = normalized_hs(&lam);
        prop_assert!(convexity_order(&lam) >= p);
        for j in 2..=p {
            for i in 1..j {
                let gap = maclaurin_ratio_gap(i, j, &lam).unwrap();
                let scale = (hs[j - 1] / hs[j]).abs().max(hs[i - 1] / hs[i]).abs();
                prop_assert!(gap >= -1e-12 * scale, "ratio gap {gap} at i={i} j={j}");
                for l in 0..m {
                    prop_assert!(lemma_c_gap(i, j, l, &lam).unwrap() > 0.0);
                }
            }
        }
        // restricted curvatures stay positive one order down
        for k in 1..p {
            for j in 0..m {
                prop_assert!(restricted_h(k, j, &lam).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn umbilic_vectors_close_the_chain(m in 2usize..=8, c in 0.1f64..5.0) {
        let lam = CurvatureVector::umbilic(m, c).unwrap();
        for j in 2..=m {
            for i in 1..j {
                prop_assert!(maclaurin_ratio_gap(i, j, &lam).unwrap().abs() <= 1e-12 / c);
            }
        }
    }
}

#[test]
fn binomial_bridges_normalizations() {
    // H_k = σ_k / C(m, k) for the all-ones vector equals 1
    for m in 2..=10 {
        let lam = CurvatureVector::umbilic(m, 1.0).unwrap();
        for k in 0..=m {
            assert_eq!(sigma(k, &lam).unwrap(), binomial(m as u64, k as u64) as f64);
            assert!((normalized_h(k, &lam).unwrap() - 1.0).abs() < 1e-15);
        }
    }
}
