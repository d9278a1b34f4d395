//! Reference implementations used only by the tests.

#![allow(dead_code)]

use std::f64::consts::TAU;

/// Cyclic Jacobi eigenvalues of a real symmetric matrix, ascending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (head, tail) = a.split_at_mut(q);
                for (x, y) in head[p].iter_mut().zip(tail[0].iter_mut()) {
                    let (apk, aqk) = (*x, *y);
                    *x = c * apk - s * aqk;
                    *y = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// Real and imaginary parts of the ladder Hamiltonian, written out from the
/// hopping rules with sites ordered leg-major: `(L,1..N)` then `(R,1..N)`.
pub fn ladder_parts(n: usize, g: f64, k: f64, phi: f64) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let m = 2 * n;
    let mut re = vec![vec![0.0; m]; m];
    let mut im = vec![vec![0.0; m]; m];
    for leg in 0..2 {
        for l in 0..n - 1 {
            let (a, b) = (leg * n + l, leg * n + l + 1);
            re[a][b] = -g;
            re[b][a] = -g;
        }
    }
    for l in 0..n {
        let (lsite, rsite) = (l, n + l);
        let angle = phi * (l + 1) as f64;
        re[rsite][lsite] = -k * angle.cos();
        im[rsite][lsite] = -k * angle.sin();
        re[lsite][rsite] = -k * angle.cos();
        im[lsite][rsite] = k * angle.sin();
    }
    (re, im)
}

/// Eigenvalues of the ladder through the real embedding `[[A, −B], [B, A]]`,
/// whose spectrum is that of `A + iB` with every level doubled.
pub fn ladder_spectrum(n: usize, g: f64, k: f64, phi: f64) -> Vec<f64> {
    let (a, b) = ladder_parts(n, g, k, phi);
    let m = 2 * n;
    let mut big = vec![vec![0.0; 2 * m]; 2 * m];
    for i in 0..m {
        for j in 0..m {
            big[i][j] = a[i][j];
            big[i + m][j + m] = a[i][j];
            big[i][j + m] = -b[i][j];
            big[i + m][j] = b[i][j];
        }
    }
    let doubled = jacobi_eigenvalues(big);
    doubled.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

/// Lower band by direct diagonalization of the 2×2 Bloch matrix.
pub fn lower_band(q: f64, g: f64, k: f64, phi: f64) -> f64 {
    let e_l = -2.0 * g * (q - phi / 2.0).cos();
    let e_r = -2.0 * g * (q + phi / 2.0).cos();
    let mean = 0.5 * (e_l + e_r);
    let half = 0.5 * (e_l - e_r);
    mean - (half * half + k * k).sqrt()
}

/// Minima of the lower band counted on a very fine periodic grid.
pub fn brute_minima(g: f64, k: f64, phi: f64, points: usize) -> usize {
    let v: Vec<f64> =
        (0..points).map(|i| lower_band(-std::f64::consts::PI + TAU * i as f64 / points as f64, g, k, phi)).collect();
    (0..points).filter(|&i| v[i] < v[(i + points - 1) % points] && v[i] <= v[(i + 1) % points]).count()
}

/// Two-site damped Rabi oscillation from the closed-form solution of the
/// lossless problem multiplied by the coherence envelope.
pub fn two_site_population_difference(t: f64, coupling_mhz: f64, gamma_tilde: f64, p0: f64, j_over_c: f64) -> f64 {
    let w = 2.0 * TAU * coupling_mhz;
    (-gamma_tilde * t).exp() * (p0 * (w * t).cos() + j_over_c / TAU * (w * t).sin())
}
