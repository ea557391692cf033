//! Fraction-free determinants.

use crate::scalar::Scalar;

/// Determinant by Bareiss elimination.
///
/// Every division performed is exact over an integral domain, so integer
/// matrices never leave the integers.
pub fn det_bareiss<T: Scalar>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    debug_assert!(m.iter().all(|row| row.len() == n));
    let mut sign_flip = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = v / prev.clone();
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign_flip {
        -d
    } else {
        d
    }
}

/// Leading principal minors `Δ_1, ..., Δ_n` of a square matrix.
pub fn leading_principal_minors<T: Scalar>(m: &[Vec<T>]) -> Vec<T> {
    (1..=m.len())
        .map(|k| det_bareiss(m[..k].iter().map(|row| row[..k].to_vec()).collect()))
        .collect()
}
