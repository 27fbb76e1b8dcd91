//! Symmetric-function algebra of principal curvatures.
//!
//! Everything here is a pure function of a [`CurvatureVector`]. Orders `k`
//! follow the usual convention `σ_0 = H_0 = 1`; entry indices (`j`, `l`) are
//! zero-based.

pub mod oracle;
mod sample;

use alloc::vec::Vec;

use crate::{Error, Result};

pub use sample::garding_sample;

/// Principal curvatures `λ_1..λ_m` at one point, `m = n - 1 >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureVector {
    values: Vec<f64>,
}

impl CurvatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidVector("need at least two entries"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidVector("entries must be finite"));
        }
        Ok(Self { values })
    }

    /// `m` copies of `c` (an umbilical point).
    pub fn umbilic(m: usize, c: f64) -> Result<Self> {
        Self::new(alloc::vec![c; m])
    }

    pub fn m(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Spread `max λ - min λ`; zero at umbilical points.
    pub fn spread(&self) -> f64 {
        let (lo, hi) = self
            .values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        hi - lo
    }
}

/// Exact binomial coefficient `C(n, k)` (zero when `k > n`).
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `σ_0..=σ_k` of a slice via the one-pass recurrence. Orders beyond the
/// slice length are zero.
fn sigma_table(k: usize, values: &[f64]) -> Vec<f64> {
    let mut e = alloc::vec![0.0; k + 1];
    e[0] = 1.0;
    for (seen, &x) in values.iter().enumerate() {
        let top = k.min(seen + 1);
        for q in (1..=top).rev() {
            e[q] += x * e[q - 1];
        }
    }
    e
}

fn sigma_slice(k: usize, values: &[f64]) -> f64 {
    if k > values.len() {
        return 0.0;
    }
    sigma_table(k, values)[k]
}

fn normalized_slice(k: usize, values: &[f64]) -> f64 {
    sigma_slice(k, values) / binomial(values.len() as u64, k as u64) as f64
}

fn without(values: &[f64], j: usize) -> Vec<f64> {
    values
        .iter()
        .enumerate()
        .filter_map(|(i, &v)| (i != j).then_some(v))
        .collect()
}

fn check_order(k: usize, max: usize) -> Result<()> {
    if k > max {
        Err(Error::OrderOutOfRange { k, max })
    } else {
        Ok(())
    }
}

fn check_index(j: usize, len: usize) -> Result<()> {
    if j >= len {
        Err(Error::IndexOutOfRange { index: j, len })
    } else {
        Ok(())
    }
}

/// `k`-th elementary symmetric function `σ_k(Λ)`.
pub fn sigma(k: usize, lambda: &CurvatureVector) -> Result<f64> {
    check_order(k, lambda.m())?;
    Ok(sigma_slice(k, lambda.values()))
}

/// All of `σ_0..=σ_m`.
pub fn sigmas(lambda: &CurvatureVector) -> Vec<f64> {
    sigma_table(lambda.m(), lambda.values())
}

/// Normalized mean curvature `H_k = σ_k / C(m, k)`.
pub fn normalized_h(k: usize, lambda: &CurvatureVector) -> Result<f64> {
    check_order(k, lambda.m())?;
    Ok(normalized_slice(k, lambda.values()))
}

/// All of `H_0..=H_m`.
pub fn normalized_hs(lambda: &CurvatureVector) -> Vec<f64> {
    let m = lambda.m() as u64;
    sigmas(lambda)
        .into_iter()
        .enumerate()
        .map(|(k, s)| s / binomial(m, k as u64) as f64)
        .collect()
}

/// `H_{k;j}`: `H_k` of the `m - 1` curvatures left after removing entry `j`.
pub fn restricted_h(k: usize, j: usize, lambda: &CurvatureVector) -> Result<f64> {
    check_order(k, lambda.m() - 1)?;
    check_index(j, lambda.m())?;
    Ok(normalized_slice(k, &without(lambda.values(), j)))
}

/// Eigenvalues of the Newton transformation `T_k` in the principal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonSpectrum {
    pub k: usize,
    pub eigenvalues: Vec<f64>,
}

impl NewtonSpectrum {
    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

/// `Λ_j = σ_k(Λ without entry j)`; `T_0` is the identity.
pub fn newton_spectrum(k: usize, lambda: &CurvatureVector) -> Result<NewtonSpectrum> {
    check_order(k, lambda.m() - 1)?;
    let eigenvalues = (0..lambda.m())
        .map(|j| sigma_slice(k, &without(lambda.values(), j)))
        .collect();
    Ok(NewtonSpectrum { k, eigenvalues })
}

/// `H_{j-1}/H_j - H_{i-1}/H_i` for `1 <= i < j`. Nonnegative on the
/// Gårding cone `Γ_j`, zero exactly at umbilical points.
pub fn maclaurin_ratio_gap(i: usize, j: usize, lambda: &CurvatureVector) -> Result<f64> {
    if i == 0 || i >= j {
        return Err(Error::Precondition(alloc::format!(
            "need 1 <= i < j, got i = {i}, j = {j}"
        )));
    }
    check_order(j, lambda.m())?;
    let h = normalized_hs(lambda);
    if h[i] == 0.0 || h[j] == 0.0 {
        return Err(Error::Precondition(alloc::format!(
            "H_{i} or H_{j} vanishes; the ratio gap is undefined"
        )));
    }
    Ok(h[j - 1] / h[j] - h[i - 1] / h[i])
}

/// `j H_i H_{j-1;l} - i H_j H_{i-1;l}`; strictly positive on `Γ_p` for
/// `1 <= i < j <= p`.
pub fn lemma_c_gap(i: usize, j: usize, l: usize, lambda: &CurvatureVector) -> Result<f64> {
    if i == 0 || i >= j {
        return Err(Error::Precondition(alloc::format!(
            "need 1 <= i < j, got i = {i}, j = {j}"
        )));
    }
    check_order(j, lambda.m())?;
    check_index(l, lambda.m())?;
    let h = normalized_hs(lambda);
    let rest = without(lambda.values(), l);
    let hr_j1 = normalized_slice(j - 1, &rest);
    let hr_i1 = normalized_slice(i - 1, &rest);
    Ok(j as f64 * h[i] * hr_j1 - i as f64 * h[j] * hr_i1)
}

/// Residual of `H_i = (i/m) λ_l H_{i-1;l} + ((m-i)/m) H_{i;l}`.
///
/// Returned as `(residual, scale)` where `scale` is the largest magnitude
/// among the terms, for relative comparisons.
pub fn split_identity_residual(i: usize, l: usize, lambda: &CurvatureVector) -> Result<(f64, f64)> {
    let m = lambda.m();
    if i == 0 {
        return Err(Error::Precondition("split identity needs i >= 1".into()));
    }
    check_order(i, m)?;
    check_index(l, m)?;
    let rest = without(lambda.values(), l);
    let lam = lambda.values()[l];
    let lhs = normalized_slice(i, lambda.values());
    let a = (i as f64 / m as f64) * lam * normalized_slice(i - 1, &rest);
    // H_{m;l} is never needed: its coefficient (m - i)/m vanishes.
    let b = if i < m {
        ((m - i) as f64 / m as f64) * normalized_slice(i, &rest)
    } else {
        0.0
    };
    let scale = lhs.abs().max(a.abs()).max(b.abs());
    Ok((lhs - (a + b), scale))
}

/// Residual of the unnormalized splitting `σ_i = λ_l σ_{i-1;l} + σ_{i;l}`.
pub fn sigma_split_residual(i: usize, l: usize, lambda: &CurvatureVector) -> Result<(f64, f64)> {
    if i == 0 {
        return Err(Error::Precondition("split identity needs i >= 1".into()));
    }
    check_order(i, lambda.m())?;
    check_index(l, lambda.m())?;
    let rest = without(lambda.values(), l);
    let lhs = sigma_slice(i, lambda.values());
    let a = lambda.values()[l] * sigma_slice(i - 1, &rest);
    let b = sigma_slice(i, &rest);
    Ok((lhs - (a + b), lhs.abs().max(a.abs()).max(b.abs())))
}

/// Largest `q` with `H_1, ..., H_q > 0` (0 if `H_1 <= 0`).
pub fn convexity_order(lambda: &CurvatureVector) -> usize {
    normalized_hs(lambda)
        .iter()
        .skip(1)
        .take_while(|&&h| h > 0.0)
        .count()
}

/// `C(n-3, k-2)` and its printed alternative `(n-k)/(n-2) · C(n-2, k-2)`
/// agree for `2 <= k <= n-1`; checked in integer arithmetic.
pub fn div_coefficient_forms_agree(n: u64, k: u64) -> bool {
    assert!(n >= 3 && (2..n).contains(&k));
    (n - k) * binomial(n - 2, k - 2) == (n - 2) * binomial(n - 3, k - 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn cv(v: &[f64]) -> CurvatureVector {
        CurvatureVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn sigma_examples() {
        let l = cv(&[1.0, 2.0, 3.0]);
        assert_eq!(sigma(0, &l).unwrap(), 1.0);
        assert_eq!(sigma(2, &l).unwrap(), 11.0);
        assert_eq!(sigma(3, &cv(&[1.0, 1.0, 1.0])).unwrap(), 1.0);
        assert!(matches!(sigma(4, &l), Err(Error::OrderOutOfRange { .. })));
    }

    #[test]
    fn vector_validation() {
        assert!(CurvatureVector::new(vec![1.0]).is_err());
        assert!(CurvatureVector::new(vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn normalized_examples() {
        assert!((normalized_h(1, &cv(&[2.0, 0.4])).unwrap() - 1.2).abs() < 1e-15);
        assert!((normalized_h(2, &cv(&[1.0, 2.0, 3.0])).unwrap() - 11.0 / 3.0).abs() < 1e-15);
        let c = 1.7f64;
        let u = CurvatureVector::umbilic(4, c).unwrap();
        assert!((normalized_h(4, &u).unwrap() - c.powi(4)).abs() < 1e-12);
        assert_eq!(normalized_h(0, &u).unwrap(), 1.0);
    }

    #[test]
    fn restricted_examples() {
        let l = cv(&[5.0, 1.0, 1.0]);
        assert_eq!(restricted_h(0, 1, &l).unwrap(), 1.0);
        assert_eq!(restricted_h(1, 0, &l).unwrap(), 1.0);
        assert_eq!(restricted_h(2, 2, &cv(&[1.0, 2.0, 3.0])).unwrap(), 2.0);
        assert!(matches!(restricted_h(1, 3, &l), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(restricted_h(3, 0, &l), Err(Error::OrderOutOfRange { .. })));
    }

    #[test]
    fn newton_spectrum_examples() {
        let l = cv(&[1.0, 2.0, 3.0]);
        assert_eq!(newton_spectrum(0, &l).unwrap().eigenvalues, vec![1.0; 3]);
        let t1 = newton_spectrum(1, &l).unwrap();
        assert_eq!(t1.eigenvalues, vec![5.0, 4.0, 3.0]);
        assert_eq!(t1.trace(), 12.0);
        assert_eq!(t1.trace(), 2.0 * sigma(1, &l).unwrap());
        assert!(newton_spectrum(3, &l).is_err());
    }

    #[test]
    fn maclaurin_examples() {
        let g = maclaurin_ratio_gap(1, 2, &cv(&[1.0, 2.0, 3.0])).unwrap();
        assert!((g - 1.0 / 22.0).abs() < 1e-15);
        let u = CurvatureVector::umbilic(5, 0.3).unwrap();
        for j in 2..=5 {
            for i in 1..j {
                assert!(maclaurin_ratio_gap(i, j, &u).unwrap().abs() < 1e-12);
            }
        }
        // H_2 = 0 for (1, -1): the ratio is undefined
        assert!(matches!(
            maclaurin_ratio_gap(1, 2, &cv(&[1.0, 0.0])),
            Err(Error::Precondition(_))
        ));
        assert!(maclaurin_ratio_gap(2, 2, &u).is_err());
    }

    #[test]
    fn lemma_c_examples() {
        let l = cv(&[1.0, 1.0, 1.0]);
        assert!((lemma_c_gap(1, 2, 0, &l).unwrap() - 1.0).abs() < 1e-15);
        let (res, scale) = split_identity_residual(2, 1, &cv(&[1.0, 2.0, 3.0])).unwrap();
        assert!(res.abs() <= 1e-12 * scale);
    }

    #[test]
    fn split_identity_top_order() {
        let l = cv(&[0.5, -2.0, 3.0, 1.25]);
        for idx in 0..4 {
            let (res, scale) = split_identity_residual(4, idx, &l).unwrap();
            assert!(res.abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn binomial_bridge() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 5), 0);
        for n in 3..20u64 {
            for k in 2..n {
                assert!(div_coefficient_forms_agree(n, k));
            }
        }
    }

    #[test]
    fn convexity_order_counts() {
        assert_eq!(convexity_order(&cv(&[3.0, 2.0, -1.0])), 2);
        assert_eq!(convexity_order(&cv(&[1.0, 2.0, 3.0])), 3);
        assert_eq!(convexity_order(&cv(&[-1.0, -2.0])), 0);
    }
}
