//! Bessel functions of the first kind and the Jacobi–Anger coefficients built from them.

use crate::linalg::C64;

const RESCALE_ABOVE: f64 = 1e250;

/// `J_0(x) … J_nmax(x)` by Miller's backward recurrence, normalised with
/// `J_0 + 2 Σ J_{2k} = 1`.
pub fn bessel_j_sequence(x: f64, nmax: usize) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    let reach = (nmax as f64).max(ax);
    let mut start = (reach + 20.0 + (40.0 * reach.max(1.0)).sqrt()).ceil() as usize;
    start += start % 2;
    let mut vals = vec![0.0; start + 2];
    vals[start] = 1e-30;
    for m in (1..=start).rev() {
        let next = (2.0 * m as f64 / ax) * vals[m] - vals[m + 1];
        vals[m - 1] = next;
        if next.abs() > RESCALE_ABOVE {
            for v in vals[m - 1..].iter_mut() {
                *v /= RESCALE_ABOVE;
            }
        }
    }
    let norm = vals[0] + 2.0 * vals.iter().skip(2).step_by(2).sum::<f64>();
    for (m, o) in out.iter_mut().enumerate() {
        let v = if m < vals.len() { vals[m] / norm } else { 0.0 };
        // J_m(−x) = (−1)^m J_m(x)
        *o = if x < 0.0 && m % 2 == 1 { -v } else { v };
    }
    out
}

/// Degree past which the series for `e^{−iτx}` can be cut with remainder `≤ tol`.
fn tail_cut(j: &[f64], tol: f64) -> usize {
    let mut tail = 0.0;
    let mut d = j.len() - 1;
    // Walk down while the remainder 2·Σ_{m>d}|J_m| still fits.
    while d > 0 {
        let next_tail = tail + 2.0 * j[d].abs();
        if next_tail > tol {
            break;
        }
        tail = next_tail;
        d -= 1;
    }
    d
}

/// Chebyshev coefficients of `e^{−iτx} = J_0(τ) + 2 Σ_{m≥1} (−i)^m J_m(τ) T_m(x)`.
///
/// The truncation degree is the smallest `d` whose remainder bound `2 Σ_{m>d} |J_m(τ)|`
/// is at most `eps/2`.
pub fn jacobi_anger_coefficients(tau: f64, eps: f64) -> Vec<C64> {
    let nmax = (tau.abs() + 25.0 * tau.abs().cbrt() + 60.0).ceil() as usize;
    let j = bessel_j_sequence(tau, nmax);
    let d = tail_cut(&j, eps / 2.0);
    let mut coeffs = Vec::with_capacity(d + 1);
    coeffs.push(C64::new(j[0], 0.0));
    let minus_i = C64::new(0.0, -1.0);
    let mut phase = C64::new(1.0, 0.0);
    for &jm in &j[1..=d] {
        phase *= minus_i;
        coeffs.push(phase * (2.0 * jm));
    }
    coeffs
}
