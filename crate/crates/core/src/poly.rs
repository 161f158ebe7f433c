//! Closed-form roots of real quadratics and monic cubics.
//!
//! Cubics are reduced to depressed form and solved with the trigonometric
//! method (three real roots) or Cardano's formula (one real root). Real roots
//! get a guarded Newton polish on the original polynomial; the complex pair is
//! recovered by deflating with the polished real root.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Real roots of `a x^2 + b x + c` in ascending order.
pub fn quadratic_real_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        return if b == 0.0 { vec![] } else { vec![-c / b] };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return vec![];
    }
    // avoid cancellation between -b and sqrt(disc)
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut roots = if q == 0.0 { vec![0.0, 0.0] } else { vec![q / a, c / q] };
    roots.sort_by(f64::total_cmp);
    roots
}

fn quadratic_complex_roots(b: f64, c: f64) -> [Complex64; 2] {
    // x^2 + b x + c
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        let r = quadratic_real_roots(1.0, b, c);
        [Complex64::new(r[0], 0.0), Complex64::new(r[1], 0.0)]
    } else {
        let re = -0.5 * b;
        let im = 0.5 * (-disc).sqrt();
        [Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

fn eval(b: f64, c: f64, d: f64, x: f64) -> f64 {
    ((x + b) * x + c) * x + d
}

/// Newton steps on `x^3 + b x^2 + c x + d`, each accepted only if it shrinks the residual.
pub fn polish_cubic_root(b: f64, c: f64, d: f64, mut x: f64) -> f64 {
    let mut fx = eval(b, c, d, x);
    for _ in 0..8 {
        if fx == 0.0 {
            break;
        }
        let dfx = (3.0 * x + 2.0 * b) * x + c;
        if dfx == 0.0 {
            break;
        }
        let cand = x - fx / dfx;
        let fc = eval(b, c, d, cand);
        if fc.abs() < fx.abs() {
            x = cand;
            fx = fc;
        } else {
            break;
        }
    }
    x
}

/// All three roots of the monic cubic `x^3 + b x^2 + c x + d`.
///
/// Real roots carry an imaginary part of exactly zero. Order: real roots
/// ascending first, then the conjugate pair (positive imaginary part first).
pub fn cubic_roots(b: f64, c: f64, d: f64) -> [Complex64; 3] {
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = 0.25 * q * q + p * p * p / 27.0;

    if disc < 0.0 {
        // three distinct real roots; p < 0 here
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let mut roots: Vec<f64> = (0..3)
            .map(|k| m * (theta - 2.0 * PI * k as f64 / 3.0).cos() - shift)
            .map(|x| polish_cubic_root(b, c, d, x))
            .collect();
        roots.sort_by(f64::total_cmp);
        return [
            Complex64::new(roots[0], 0.0),
            Complex64::new(roots[1], 0.0),
            Complex64::new(roots[2], 0.0),
        ];
    }

    let sq = disc.sqrt();
    let u = (-0.5 * q - q.signum() * sq).cbrt();
    let t = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
    let x1 = polish_cubic_root(b, c, d, t - shift);

    // deflate: x^3 + b x^2 + c x + d = (x - x1)(x^2 + e x + f)
    let e = b + x1;
    let f = if x1.abs() > 1.0 && x1 != 0.0 {
        -d / x1
    } else {
        c + x1 * e
    };
    let [r2, r3] = quadratic_complex_roots(e, f);
    if r2.im == 0.0 {
        let mut roots = [x1, polish_cubic_root(b, c, d, r2.re), polish_cubic_root(b, c, d, r3.re)];
        roots.sort_by(f64::total_cmp);
        [
            Complex64::new(roots[0], 0.0),
            Complex64::new(roots[1], 0.0),
            Complex64::new(roots[2], 0.0),
        ]
    } else {
        [Complex64::new(x1, 0.0), r2, r3]
    }
}

/// Real roots of `x^3 + b x^2 + c x + d`, ascending.
pub fn cubic_real_roots(b: f64, c: f64, d: f64) -> Vec<f64> {
    cubic_roots(b, c, d)
        .iter()
        .filter(|z| z.im == 0.0)
        .map(|z| z.re)
        .collect()
}

/// Discriminant of `x^3 + a1 x^2 + a2 x + a3`: positive for three distinct
/// real roots, negative for one real root and a complex pair.
pub fn cubic_discriminant(a1: f64, a2: f64, a3: f64) -> f64 {
    18.0 * a1 * a2 * a3 + (a1 * a2).powi(2) - 4.0 * a3 * a1.powi(3) - 4.0 * a2.powi(3) - 27.0 * a3 * a3
}
