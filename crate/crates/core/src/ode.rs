//! Fixed-step classical Runge–Kutta for complex state vectors.

use num_complex::Complex64;

/// One RK4 step of `y' = f(t, y)`; `f` writes the derivative into its third
/// argument.
pub fn rk4_step<F>(f: &mut F, t: f64, y: &mut [Complex64], h: f64, work: &mut Rk4Work)
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
{
    let n = y.len();
    work.resize(n);
    let Rk4Work { k1, k2, k3, k4, tmp } = work;
    f(t, y, k1);
    for i in 0..n {
        tmp[i] = y[i] + k1[i] * (h / 2.0);
    }
    f(t + h / 2.0, tmp, k2);
    for i in 0..n {
        tmp[i] = y[i] + k2[i] * (h / 2.0);
    }
    f(t + h / 2.0, tmp, k3);
    for i in 0..n {
        tmp[i] = y[i] + k3[i] * h;
    }
    f(t + h, tmp, k4);
    for i in 0..n {
        y[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
    }
}

/// Scratch buffers reused across steps.
#[derive(Debug, Default, Clone)]
pub struct Rk4Work {
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    tmp: Vec<Complex64>,
}

impl Rk4Work {
    fn resize(&mut self, n: usize) {
        for v in [&mut self.k1, &mut self.k2, &mut self.k3, &mut self.k4, &mut self.tmp] {
            v.resize(n, Complex64::new(0.0, 0.0));
        }
    }
}

/// Number of equal steps of size at most `max_step` covering `horizon`.
pub fn step_count(horizon: f64, max_step: f64) -> usize {
    ((horizon / max_step).ceil() as usize).max(1)
}
