//! Special functions and quadrature rules shared by the operator and phase-space code.

use num_complex::Complex64;
use std::f64::consts::PI;

/// ln(n!) by direct summation; exact enough for the index ranges used here.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Binomial coefficient as f64.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Normalized Hermite functions `h_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) e^{-x^2/2}` for
/// `n < count`, by the stable upward recurrence.
pub fn hermite_functions(x: f64, count: usize) -> Vec<f64> {
    let mut out = vec![0.0; count];
    if count == 0 {
        return out;
    }
    out[0] = PI.powf(-0.25) * (-0.5 * x * x).exp();
    if count > 1 {
        out[1] = 2.0_f64.sqrt() * x * out[0];
    }
    for n in 1..count.saturating_sub(1) {
        let nf = n as f64;
        out[n + 1] = (2.0 / (nf + 1.0)).sqrt() * x * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
    }
    out
}

/// Calls `visit(k, j, value)` with `value = |<j+k|D(beta)|j>|`-style normalized Laguerre
/// terms: `f_j^{(k)}(x) = sqrt(j!/(j+k)!) x^{k/2} e^{-x/2} L_j^{(k)}(x)` for `x = |beta|^2`,
/// every offset `k` and `j + k < dim`.
///
/// The recurrence runs on the normalized quantities so nothing overflows for large `dim`.
fn normalized_laguerre(x: f64, dim: usize, mut visit: impl FnMut(usize, usize, f64)) {
    let ln_x = if x > 0.0 { x.ln() } else { f64::NEG_INFINITY };
    for k in 0..dim {
        let kf = k as f64;
        let f0 = if k == 0 {
            (-0.5 * x).exp()
        } else if x == 0.0 {
            0.0
        } else {
            (0.5 * kf * ln_x - 0.5 * x - 0.5 * ln_factorial(k)).exp()
        };
        let len = dim - k;
        let mut prev = 0.0;
        let mut cur = f0;
        visit(k, 0, cur);
        for j in 0..len.saturating_sub(1) {
            let jf = j as f64;
            let next = ((2.0 * jf + 1.0 + kf - x) * cur - (jf * (jf + kf)).sqrt() * prev)
                / ((jf + 1.0) * (jf + kf + 1.0)).sqrt();
            prev = cur;
            cur = next;
            visit(k, j + 1, cur);
        }
    }
}

/// Fock matrix elements `<m|D(beta)|n>` of the untruncated displacement operator,
/// via generalized Laguerre polynomials. Returned row-major as `dim x dim`.
pub fn displacement_elements(beta: Complex64, dim: usize) -> Vec<Complex64> {
    let x = beta.norm_sqr();
    let r = beta.norm();
    let phase_up = if r > 0.0 { beta / r } else { Complex64::new(1.0, 0.0) };
    let phase_down = if r > 0.0 { -beta.conj() / r } else { Complex64::new(1.0, 0.0) };
    let mut pows_up = vec![Complex64::new(1.0, 0.0); dim];
    let mut pows_down = vec![Complex64::new(1.0, 0.0); dim];
    for k in 1..dim {
        pows_up[k] = pows_up[k - 1] * phase_up;
        pows_down[k] = pows_down[k - 1] * phase_down;
    }
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    normalized_laguerre(x, dim, |k, j, f| {
        // <j+k|D|j> carries (beta/|beta|)^k, <j|D|j+k> carries (-beta*/|beta|)^k
        out[(j + k) * dim + j] = pows_up[k] * f;
        if k > 0 {
            out[j * dim + j + k] = pows_down[k] * f;
        }
    });
    out
}

/// `Tr(D(beta) rho)` for a row-major `dim x dim` matrix `rho`, without forming `D(beta)`.
pub fn trace_displacement(rho: &[Complex64], dim: usize, beta: Complex64) -> Complex64 {
    let x = beta.norm_sqr();
    let r = beta.norm();
    let phase_up = if r > 0.0 { beta / r } else { Complex64::new(1.0, 0.0) };
    let phase_down = if r > 0.0 { -beta.conj() / r } else { Complex64::new(1.0, 0.0) };
    let mut acc_up = vec![Complex64::new(0.0, 0.0); dim];
    let mut acc_down = vec![Complex64::new(0.0, 0.0); dim];
    normalized_laguerre(x, dim, |k, j, f| {
        // D[j+k, j] * rho[j, j+k]
        acc_up[k] += rho[j * dim + j + k] * f;
        if k > 0 {
            acc_down[k] += rho[(j + k) * dim + j] * f;
        }
    });
    let mut total = acc_up[0];
    let mut pu = Complex64::new(1.0, 0.0);
    let mut pd = Complex64::new(1.0, 0.0);
    for k in 1..dim {
        pu *= phase_up;
        pd *= phase_down;
        total += pu * acc_up[k] + pd * acc_down[k];
    }
    total
}

/// Gauss–Hermite rule for `∫ e^{-x^2} f(x) dx` with `n` nodes (Newton iteration on the
/// orthonormal Hermite recurrence). Nodes ascending.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "gauss_hermite needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let pim4 = PI.powf(-0.25);
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    x.reverse();
    w.reverse();
    (x, w)
}

/// Lagrange interpolation stencil on a uniform axis `x0 + i*h, i < len`.
///
/// Returns the first stencil index and the weights, or `None` when `x` lies outside
/// the axis (the sampled function is taken as zero there).
pub fn lagrange_stencil(x: f64, x0: f64, h: f64, len: usize, order: usize) -> Option<(usize, Vec<f64>)> {
    let t = (x - x0) / h;
    let last = (len - 1) as f64;
    if t < -1e-9 || t > last + 1e-9 {
        return None;
    }
    let order = order.min(len);
    let half = order as f64 / 2.0;
    let start = ((t - half + 1.0).floor().max(0.0) as usize).min(len - order);
    let nodes: Vec<f64> = (0..order).map(|i| (start + i) as f64).collect();
    // exact hit avoids 0/0 in the barycentric-free product form
    if let Some(hit) = nodes.iter().position(|&n| (n - t).abs() < 1e-12) {
        let mut w = vec![0.0; order];
        w[hit] = 1.0;
        return Some((start, w));
    }
    let w = (0..order)
        .map(|i| {
            (0..order)
                .filter(|&j| j != i)
                .map(|j| (t - nodes[j]) / (nodes[i] - nodes[j]))
                .product()
        })
        .collect();
    Some((start, w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_functions_are_orthonormal() {
        let h = 0.01;
        let n = 8;
        let mut gram = vec![0.0; n * n];
        let mut x = -15.0;
        while x <= 15.0 {
            let v = hermite_functions(x, n);
            for i in 0..n {
                for j in 0..n {
                    gram[i * n + j] += v[i] * v[j] * h;
                }
            }
            x += h;
        }
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((gram[i * n + j] - expect).abs() < 1e-10, "({i},{j}) {}", gram[i * n + j]);
            }
        }
    }

    #[test]
    fn gauss_hermite_integrates_moments() {
        let (x, w) = gauss_hermite(20);
        let m0: f64 = w.iter().sum();
        assert!((m0 - PI.sqrt()).abs() < 1e-13);
        let m2: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
        assert!((m2 - PI.sqrt() / 2.0).abs() < 1e-13);
        let m10: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        // (9!!)/2^5 sqrt(pi)
        assert!((m10 - 945.0 / 32.0 * PI.sqrt()).abs() < 1e-10);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn displacement_elements_at_origin_is_identity() {
        let d = displacement_elements(Complex64::new(0.0, 0.0), 5);
        for i in 0..5 {
            for j in 0..5 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((d[i * 5 + j] - Complex64::new(e, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn displacement_first_column_is_coherent_state() {
        let beta = Complex64::new(0.7, -0.4);
        let dim = 12;
        let d = displacement_elements(beta, dim);
        let mut coeff = Complex64::new((-beta.norm_sqr() / 2.0).exp(), 0.0);
        for n in 0..dim {
            assert!((d[n * dim] - coeff).norm() < 1e-14, "n = {n}");
            coeff *= beta / ((n + 1) as f64).sqrt();
        }
    }

    #[test]
    fn lagrange_reproduces_polynomials() {
        let (start, w) = lagrange_stencil(0.37, 0.0, 0.1, 50, 6).unwrap();
        let f = |x: f64| 1.0 + x - 3.0 * x.powi(4) + x.powi(5);
        let v: f64 = w.iter().enumerate().map(|(i, w)| w * f((start + i) as f64 * 0.1)).sum();
        assert!((v - f(0.37)).abs() < 1e-12);
        assert!(lagrange_stencil(5.2, 0.0, 0.1, 50, 6).is_none());
    }
}
