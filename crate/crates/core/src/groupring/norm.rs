use super::RingElem;
use crate::matrix::Matrix;

/// Dimension from which the operator norm switches from SVD to power iteration.
const SVD_LIMIT: usize = 64;

/// Operator 2-norm of left multiplication by `x`.
pub fn matrix_norm(x: &RingElem<f64>) -> f64 {
    spectral_norm(&x.matrix_rep())
}

/// Largest singular value.
pub fn spectral_norm(m: &Matrix<f64>) -> f64 {
    if m.rows().max(m.cols()) < SVD_LIMIT {
        if let Ok(sv) = m.to_faer().singular_values() {
            return sv.into_iter().fold(0.0, f64::max);
        }
    }
    power_iteration(m)
}

/// Power iteration on `M^T M`.
fn power_iteration(m: &Matrix<f64>) -> f64 {
    let n = m.cols();
    // deterministic start with components in every direction
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + (i as f64 * 0.618_033_988_7).fract()).collect();
    let norm0 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm0);
    let mt = m.transpose();
    let mut estimate = 0.0;
    for _ in 0..(10 * n).max(1000) {
        let w = mt.mul_vec(&m.mul_vec(&v));
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        v = w.into_iter().map(|x| x / norm).collect();
        let converged = (norm - estimate).abs() <= 1e-12 * norm;
        estimate = norm;
        if converged {
            break;
        }
    }
    estimate.sqrt()
}
