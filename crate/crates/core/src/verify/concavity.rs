use crate::error::{domain, Result};

/// Largest generalized second difference of `w = u - (q/2)x²` on a
/// strictly increasing grid: at every interior node, twice the amount by
/// which `w` falls below the chord of its neighbours. On a uniform grid this
/// is the usual `w_{i-1} - 2w_i + w_{i+1}`.
pub fn qconcavity_defect(xs: &[f64], us: &[f64], q: f64) -> Result<f64> {
    if xs.len() < 3 || xs.len() != us.len() {
        return Err(domain(format!(
            "need at least three samples with matching lengths (got {} and {})",
            xs.len(),
            us.len()
        )));
    }
    if xs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(domain("grid must be strictly increasing"));
    }
    let w: Vec<f64> = xs.iter().zip(us).map(|(&x, &u)| u - 0.5 * q * x * x).collect();
    let mut worst = f64::NEG_INFINITY;
    for i in 1..xs.len() - 1 {
        let lam = (xs[i + 1] - xs[i]) / (xs[i + 1] - xs[i - 1]);
        let chord = lam * w[i - 1] + (1.0 - lam) * w[i + 1];
        worst = worst.max(2.0 * (chord - w[i]));
    }
    Ok(worst)
}

/// `true` iff all second differences of `u - (q/2)x²` are `≤ tol`.
pub fn check_qconcave(xs: &[f64], us: &[f64], q: f64, tol: f64) -> Result<bool> {
    Ok(qconcavity_defect(xs, us, q)? <= tol)
}

/// The 2D version: samples `u` at `k + 1` equispaced points along every
/// segment and checks the second differences of `u - (q/2)|x|²`.
pub fn check_qconcave_segments<F>(u: F, segments: &[([f64; 2], [f64; 2])], k: usize, q: f64, tol: f64) -> Result<bool>
where
    F: Fn([f64; 2]) -> Result<f64>,
{
    if k < 2 {
        return Err(domain("need at least three points per segment"));
    }
    for &(a, b) in segments {
        if a == b {
            return Err(domain("degenerate segment"));
        }
        let mut w = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let t = i as f64 / k as f64;
            let x = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
            w.push(u(x)? - 0.5 * q * (x[0] * x[0] + x[1] * x[1]));
        }
        if w.windows(3).any(|t| t[0] - 2.0 * t[1] + t[2] > tol) {
            return Ok(false);
        }
    }
    Ok(true)
}
