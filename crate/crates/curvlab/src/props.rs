//! Randomized sweeps over the symmetric-function algebra.

use curvlab_core::symfun::oracle::{newton_matrix_oracle, sigma_subsets};
use curvlab_core::symfun::{
    garding_sample, lemma_c_gap, maclaurin_ratio_gap, newton_spectrum, normalized_hs, restricted_h, sigmas,
    split_identity_residual, CurvatureVector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Worst-case errors of the recurrences against the brute-force oracles.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OracleSweep {
    pub vectors: usize,
    /// `|σ_k - oracle| / σ_k(|Λ|)`, maximized over vectors and orders.
    pub sigma_rel: f64,
    /// Newton oracle vs `diag(Λ_j)`, same scaling, on vectors with `m <= 5`.
    pub newton_rel: f64,
    pub newton_vectors: usize,
}

/// Vectors with entries in `[-2, 2]` and `2 <= m <= max_m`.
fn random_vector(rng: &mut ChaCha8Rng, max_m: usize) -> Vec<f64> {
    let m = rng.gen_range(2..=max_m);
    (0..m).map(|_| rng.gen_range(-2.0..=2.0)).collect()
}

fn stream_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index as u64)
}

/// Mixed-sign entries make `σ_k` cancel, so errors are measured against
/// `σ_k(|Λ|)`, the size of the terms being summed.
pub fn oracle_sweep(vectors: usize, max_m: usize, newton_max_m: usize, seed: u64) -> OracleSweep {
    let per: Vec<(f64, Option<f64>)> = (0..vectors)
        .into_par_iter()
        .map(|idx| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, idx));
            let v = random_vector(&mut rng, max_m);
            let abs: Vec<f64> = v.iter().map(|x| x.abs()).collect();
            let lambda = CurvatureVector::new(v.clone()).expect("finite entries");
            let rec = sigmas(&lambda);
            let mut sigma_rel = 0.0f64;
            for (k, s) in rec.iter().enumerate() {
                let scale = sigma_subsets(k, &abs);
                sigma_rel = sigma_rel.max((s - sigma_subsets(k, &v)).abs() / scale);
            }
            let m = v.len();
            let newton = (m <= newton_max_m).then(|| {
                let diag: Vec<Vec<f64>> =
                    (0..m).map(|i| (0..m).map(|j| if i == j { v[i] } else { 0.0 }).collect()).collect();
                let mut worst = 0.0f64;
                for k in 1..m {
                    let t = newton_matrix_oracle(k, &diag).expect("oracle-sized input");
                    let spec = newton_spectrum(k, &lambda).expect("order in range");
                    let scale = sigma_subsets(k, &abs).max(f64::MIN_POSITIVE);
                    for i in 0..m {
                        for j in 0..m {
                            let want = if i == j { spec.eigenvalues[i] } else { 0.0 };
                            worst = worst.max((t[i][j] - want).abs() / scale);
                        }
                    }
                }
                worst
            });
            (sigma_rel, newton)
        })
        .collect();
    let mut out = OracleSweep { vectors, ..Default::default() };
    for (s, n) in per {
        out.sigma_rel = out.sigma_rel.max(s);
        if let Some(n) = n {
            out.newton_rel = out.newton_rel.max(n);
            out.newton_vectors += 1;
        }
    }
    out
}

/// Worst cases of the Newton–Maclaurin family over Gårding-cone samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaSweep {
    pub samples: usize,
    /// `min (H_{j-1}/H_j - H_{i-1}/H_i) / max(|H_{j-1}/H_j|, |H_{i-1}/H_i|)`.
    pub ratio_gap_rel: f64,
    /// Smallest raw `j H_i H_{j-1;l} - i H_j H_{i-1;l}`.
    pub lemma_c_min: f64,
    /// The same divided by `j |H_i H_{j-1;l}| + i |H_j H_{i-1;l}|`.
    pub lemma_c_rel: f64,
    /// Largest relative residual of the splitting identity.
    pub split_rel: f64,
    /// Smallest Newton eigenvalue or restricted curvature of order `< p`.
    pub cascade_min: f64,
}

pub fn lemma_sweep(samples: usize, max_m: usize, seed: u64) -> curvlab_core::Result<LemmaSweep> {
    let per = (0..samples)
        .into_par_iter()
        .map(|idx| {
            let s = stream_seed(seed, idx);
            let mut rng = ChaCha8Rng::seed_from_u64(s ^ 0x5555_5555);
            let m = rng.gen_range(2..=max_m);
            let p = rng.gen_range(1..=m);
            let lambda = garding_sample(m, p, s)?;
            let h = normalized_hs(&lambda);
            let mut ratio = f64::INFINITY;
            let mut lc_min = f64::INFINITY;
            let mut lc_rel = f64::INFINITY;
            for j in 2..=p {
                for i in 1..j {
                    let gap = maclaurin_ratio_gap(i, j, &lambda)?;
                    let scale = (h[j - 1] / h[j]).abs().max((h[i - 1] / h[i]).abs());
                    ratio = ratio.min(gap / scale);
                    for l in 0..m {
                        let g = lemma_c_gap(i, j, l, &lambda)?;
                        let scale = j as f64 * (h[i] * restricted_h(j - 1, l, &lambda)?).abs()
                            + i as f64 * (h[j] * restricted_h(i - 1, l, &lambda)?).abs();
                        lc_min = lc_min.min(g);
                        lc_rel = lc_rel.min(g / scale);
                    }
                }
            }
            let mut split = 0.0f64;
            for i in 1..=m {
                for l in 0..m {
                    let (r, scale) = split_identity_residual(i, l, &lambda)?;
                    if scale > 0.0 {
                        split = split.max(r.abs() / scale);
                    }
                }
            }
            let mut cascade = f64::INFINITY;
            for k in 0..p {
                let spec = newton_spectrum(k, &lambda)?;
                cascade = spec.eigenvalues.iter().fold(cascade, |c, &v| c.min(v));
                for l in 0..m {
                    cascade = cascade.min(restricted_h(k, l, &lambda)?);
                }
            }
            Ok((ratio, lc_min, lc_rel, split, cascade))
        })
        .collect::<curvlab_core::Result<Vec<_>>>()?;
    let mut out = LemmaSweep {
        samples,
        ratio_gap_rel: f64::INFINITY,
        lemma_c_min: f64::INFINITY,
        lemma_c_rel: f64::INFINITY,
        split_rel: 0.0,
        cascade_min: f64::INFINITY,
    };
    for (r, lc, lcr, sp, c) in per {
        out.ratio_gap_rel = out.ratio_gap_rel.min(r);
        out.lemma_c_min = out.lemma_c_min.min(lc);
        out.lemma_c_rel = out.lemma_c_rel.min(lcr);
        out.split_rel = out.split_rel.max(sp);
        out.cascade_min = out.cascade_min.min(c);
    }
    Ok(out)
}
