//! Exponential-cost reference evaluators. They share no code with the
//! recurrences in the parent module and exist to cross-check them.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// `σ_k` as the literal sum over all `k`-subsets (bitmask enumeration).
pub fn sigma_subsets(k: usize, values: &[f64]) -> f64 {
    let m = values.len();
    assert!(m < 32, "subset oracle is limited to small vectors");
    if k == 0 {
        return 1.0;
    }
    let mut total = 0.0;
    for mask in 0u32..(1u32 << m) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let mut prod = 1.0;
        for (i, v) in values.iter().enumerate() {
            if mask & (1 << i) != 0 {
                prod *= v;
            }
        }
        total += prod;
    }
    total
}

/// Permutations of `0..len` paired with their signs.
fn signed_permutations(len: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut perms = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; len], &mut perms);
    perms
        .into_iter()
        .map(|p| {
            let inversions = (0..len)
                .flat_map(|a| (a + 1..len).map(move |b| (a, b)))
                .filter(|&(a, b)| p[a] > p[b])
                .count();
            let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
            (p, sign)
        })
        .collect()
}

/// Newton transformation from the generalized Kronecker delta formula
///
/// `(T_k)^i_j = 1/k! Σ δ^{i i_1..i_k}_{j j_1..j_k} A^{j_1}_{i_1} ⋯ A^{j_k}_{i_k}`.
///
/// `a[p][q]` holds `A^q_p`; the result `t[i][j]` holds `(T_k)^i_j`. Terms with
/// a vanishing delta (repeated upper indices, or lower indices that are not
/// a permutation of the upper ones) are skipped rather than multiplied by
/// zero. Limited to `m <= 6`.
pub fn newton_matrix_oracle(k: usize, a: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let m = a.len();
    if m > 6 {
        return Err(Error::OracleTooLarge { m });
    }
    if a.iter().any(|row| row.len() != m) {
        return Err(Error::InvalidVector("matrix must be square"));
    }
    if k == 0 || k >= m {
        return Err(Error::OrderOutOfRange { k, max: m.saturating_sub(1) });
    }
    let perms = signed_permutations(k + 1);
    let factorial: f64 = (1..=k).map(|x| x as f64).product();
    let mut t = vec![vec![0.0; m]; m];
    let mut upper = vec![0usize; k + 1];
    let total = m.pow(k as u32);
    for i in 0..m {
        for code in 0..total {
            upper[0] = i;
            let mut c = code;
            for slot in upper.iter_mut().skip(1) {
                *slot = c % m;
                c /= m;
            }
            if (0..=k).any(|x| (x + 1..=k).any(|y| upper[x] == upper[y])) {
                continue;
            }
            for (perm, sign) in &perms {
                let j = upper[perm[0]];
                let mut prod = *sign;
                for s in 1..=k {
                    prod *= a[upper[s]][upper[perm[s]]];
                }
                t[i][j] += prod;
            }
        }
    }
    for row in t.iter_mut() {
        for v in row.iter_mut() {
            *v /= factorial;
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_sum_small() {
        assert_eq!(sigma_subsets(2, &[1.0, 2.0, 3.0]), 11.0);
        assert_eq!(sigma_subsets(0, &[4.0, 5.0]), 1.0);
        assert_eq!(sigma_subsets(3, &[4.0, 5.0]), 0.0);
    }

    #[test]
    fn permutation_signs() {
        let perms = signed_permutations(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms.iter().map(|p| p.1).sum::<f64>(), 0.0);
    }

    fn diag(d: &[f64]) -> Vec<Vec<f64>> {
        (0..d.len())
            .map(|i| (0..d.len()).map(|j| if i == j { d[i] } else { 0.0 }).collect())
            .collect()
    }

    #[test]
    fn delta_formula_examples() {
        let t = newton_matrix_oracle(1, &diag(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(t, diag(&[5.0, 4.0, 3.0]));
        let t = newton_matrix_oracle(1, &diag(&[1.0, 1.0, 1.0])).unwrap();
        assert_eq!(t, diag(&[2.0, 2.0, 2.0]));
        let t = newton_matrix_oracle(2, &diag(&[1.0, 1.0, 1.0])).unwrap();
        assert_eq!(t, diag(&[1.0, 1.0, 1.0]));
    }

    #[test]
    fn refuses_large_or_bad_orders() {
        assert!(matches!(
            newton_matrix_oracle(1, &diag(&[1.0; 7])),
            Err(Error::OracleTooLarge { m: 7 })
        ));
        assert!(newton_matrix_oracle(0, &diag(&[1.0; 3])).is_err());
        assert!(newton_matrix_oracle(3, &diag(&[1.0; 3])).is_err());
    }
}
