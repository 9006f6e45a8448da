//! Independent reference computations on plain `Vec<Vec<f64>>`, sharing no code with the crate.
#![allow(dead_code)]

use qsubspace::Matrix;

pub fn real_rows(x: &Matrix) -> Vec<Vec<f64>> {
    (0..x.rows()).map(|i| x.row(i).iter().map(|z| z.re).collect()).collect()
}

pub fn transpose(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

/// Rectangular product.
pub fn product(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    (0..a.len())
        .map(|i| (0..b[0].len()).map(|j| (0..b.len()).map(|l| a[i][l] * b[l][j]).sum()).collect())
        .collect()
}

/// Real Gauss-Jordan inverse with partial pivoting.
pub fn gauss_jordan_inverse(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut aug: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| aug[x][c].abs().total_cmp(&aug[y][c].abs())).unwrap();
        aug.swap(c, p);
        let piv = aug[c][c];
        for v in aug[c].iter_mut() {
            *v /= piv;
        }
        for r in 0..n {
            if r != c {
                let f = aug[r][c];
                let pivot_row = aug[c].clone();
                for (v, pv) in aug[r].iter_mut().zip(pivot_row) {
                    *v -= f * pv;
                }
            }
        }
    }
    aug.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|l| a[i][l] * b[l][j]).sum()).collect()).collect()
}

/// Eigenvalues of a real matrix with real spectrum by unshifted QR iteration (Gram-Schmidt QR).
pub fn qr_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _ in 0..5000 {
        let mut q = vec![vec![0.0; n]; n];
        let mut r = vec![vec![0.0; n]; n];
        for j in 0..n {
            let mut v: Vec<f64> = (0..n).map(|i| a[i][j]).collect();
            for p in 0..j {
                let d: f64 = (0..n).map(|i| q[i][p] * a[i][j]).sum();
                r[p][j] = d;
                for i in 0..n {
                    v[i] -= d * q[i][p];
                }
            }
            let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            r[j][j] = nrm;
            for i in 0..n {
                q[i][j] = v[i] / nrm;
            }
        }
        a = matmul(&r, &q);
    }
    (0..n).map(|i| a[i][i]).collect()
}

pub fn ellipsoid_oracle(m: &Matrix, n: &Matrix) -> f64 {
    let p = matmul(&gauss_jordan_inverse(&real_rows(m)), &real_rows(n));
    qr_eigenvalues(p).iter().map(|l| l.ln().powi(2)).sum::<f64>().sqrt()
}

/// `T_d(x)` by the three-term recurrence.
pub fn chebyshev(x: &[Vec<f64>], d: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let eye: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    if d == 0 {
        return eye;
    }
    let (mut prev, mut cur) = (eye, x.to_vec());
    for _ in 1..d {
        let next: Vec<Vec<f64>> = product(x, &cur)
            .iter()
            .zip(&prev)
            .map(|(a, b)| a.iter().zip(b).map(|(u, v)| 2.0 * u - v).collect())
            .collect();
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `exp(−i·h·t)` for real symmetric `h` by scaled Taylor series and repeated squaring,
/// returned as `(re, im)` parts.
pub fn expm_minus_i(h: &[Vec<f64>], t: f64) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let n = h.len();
    let norm: f64 = h.iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max) * t.abs();
    let mut squarings = 0;
    while norm / 2f64.powi(squarings) > 0.25 {
        squarings += 1;
    }
    let tau = t / 2f64.powi(squarings);
    // X = −i·h·τ; accumulate Σ X^m/m! with complex entries split in two real matrices.
    let x_im: Vec<Vec<f64>> = h.iter().map(|r| r.iter().map(|v| -v * tau).collect()).collect();
    let eye: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let zero = vec![vec![0.0; n]; n];
    let (mut sum_re, mut sum_im) = (eye.clone(), zero.clone());
    let (mut term_re, mut term_im) = (eye, zero);
    for m in 1..30 {
        // term ← term·X/m with X purely imaginary.
        let new_re: Vec<Vec<f64>> = product(&term_im, &x_im).iter().map(|r| r.iter().map(|v| -v / m as f64).collect()).collect();
        let new_im: Vec<Vec<f64>> = product(&term_re, &x_im).iter().map(|r| r.iter().map(|v| v / m as f64).collect()).collect();
        term_re = new_re;
        term_im = new_im;
        for i in 0..n {
            for j in 0..n {
                sum_re[i][j] += term_re[i][j];
                sum_im[i][j] += term_im[i][j];
            }
        }
    }
    for _ in 0..squarings {
        let rr = product(&sum_re, &sum_re);
        let ii = product(&sum_im, &sum_im);
        let ri = product(&sum_re, &sum_im);
        let ir = product(&sum_im, &sum_re);
        sum_re = rr.iter().zip(&ii).map(|(a, b)| a.iter().zip(b).map(|(u, v)| u - v).collect()).collect();
        sum_im = ri.iter().zip(&ir).map(|(a, b)| a.iter().zip(b).map(|(u, v)| u + v).collect()).collect();
    }
    (sum_re, sum_im)
}
