//! Local and global stability of the food-chain equilibria.
//!
//! Local stability of a fractional system of order `m` follows the eigenvalue
//! argument test: an equilibrium is locally asymptotically stable when every
//! Jacobian eigenvalue satisfies `|arg ξ| > m π / 2`. A zero eigenvalue makes
//! the test inapplicable and the point is reported non-hyperbolic.
//!
//! For interior points the characteristic polynomial
//! `F(ξ) = ξ^3 + A1 ξ^2 + A2 ξ + A3` is also classified by coefficient signs
//! and its discriminant (see [`CoefficientCase`]); that classification is
//! always cross-checked against the eigenvalue test.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::equilibria::{interior_equilibrium, Equilibrium, EquilibriumKind};
use crate::error::{Error, Result};
use crate::model::{jacobian, nondimensionalize, DimParams, NondimParams, State};
use crate::poly::{cubic_discriminant, cubic_roots};

/// Eigenvalues with modulus below this (relative to the spectrum scale) count as zero.
pub const ZERO_EIGEN_TOL: f64 = 1e-12;

/// Relative tolerance for the `A1 A2 = A3` equality of [`CoefficientCase::PureImaginaryPair`].
pub const PRODUCT_EQ_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Stable,
    Unstable,
    NonHyperbolic,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Stable => "stable",
            Verdict::Unstable => "unstable",
            Verdict::NonHyperbolic => "non-hyperbolic",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Coefficient/discriminant hypothesis sets for the interior characteristic cubic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CoefficientCase {
    /// (i) D > 0, A1 > 0, A3 > 0, A1 A2 > A3: three negative real roots, stable for every order.
    RealNegative,
    /// (ii) D < 0, A1 ≥ 0, A2 ≥ 0, A3 > 0 with m < 2/3: stable.
    ComplexLowOrder,
    /// (iii) D < 0, A1 < 0, A2 < 0 with m > 2/3: unstable.
    ComplexUnstable,
    /// (iv) D < 0, A1 > 0, A2 > 0, A1 A2 = A3 with m < 1: stable (roots −b, ±iγ).
    PureImaginaryPair,
    /// No hypothesis set matched.
    Unmatched,
}

impl CoefficientCase {
    pub fn label(self) -> &'static str {
        match self {
            CoefficientCase::RealNegative => "i",
            CoefficientCase::ComplexLowOrder => "ii",
            CoefficientCase::ComplexUnstable => "iii",
            CoefficientCase::PureImaginaryPair => "iv",
            CoefficientCase::Unmatched => "none",
        }
    }

    /// Verdict implied by the case, `Inconclusive` when unmatched.
    pub fn verdict(self) -> Verdict {
        match self {
            CoefficientCase::RealNegative | CoefficientCase::ComplexLowOrder | CoefficientCase::PureImaginaryPair => {
                Verdict::Stable
            }
            CoefficientCase::ComplexUnstable => Verdict::Unstable,
            CoefficientCase::Unmatched => Verdict::Inconclusive,
        }
    }
}

/// Coefficients of the monic characteristic cubic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharCoeffs {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl CharCoeffs {
    pub fn discriminant(&self) -> f64 {
        discriminant(self.a1, self.a2, self.a3)
    }

    pub fn roots(&self) -> [Complex64; 3] {
        cubic_roots(self.a1, self.a2, self.a3)
    }

    /// Coefficients of `(ξ - r1)(ξ - r2)(ξ - r3)`.
    pub fn from_roots(roots: [Complex64; 3]) -> Self {
        let [r1, r2, r3] = roots;
        CharCoeffs {
            a1: -(r1 + r2 + r3).re,
            a2: (r1 * r2 + r1 * r3 + r2 * r3).re,
            a3: -(r1 * r2 * r3).re,
        }
    }
}

/// Characteristic coefficients of a 3×3 matrix: `A1 = -tr`, `A2` = sum of
/// principal 2×2 minors, `A3 = -det`.
pub fn matrix_char_coeffs(j: &[[f64; 3]; 3]) -> CharCoeffs {
    let tr = j[0][0] + j[1][1] + j[2][2];
    let minors = j[0][0] * j[1][1] - j[0][1] * j[1][0] + j[0][0] * j[2][2] - j[0][2] * j[2][0] + j[1][1] * j[2][2]
        - j[1][2] * j[2][1];
    let det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1]) - j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0])
        + j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
    CharCoeffs {
        a1: -tr,
        a2: minors,
        a3: -det,
    }
}

pub fn matrix_eigenvalues(j: &[[f64; 3]; 3]) -> [Complex64; 3] {
    matrix_char_coeffs(j).roots()
}

/// Eigenvalues of the nondimensional Jacobian at `e`.
pub fn eigenvalues_at(q: &NondimParams, e: &Equilibrium) -> [Complex64; 3] {
    matrix_eigenvalues(&jacobian(q, e.coords_nondim))
}

/// Eigenvalue-argument test at order `m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArgumentTest {
    pub verdict: Verdict,
    /// `|arg ξ| - m π/2` per eigenvalue; `None` where `ξ = 0`.
    pub margins: [Option<f64>; 3],
    /// Nonzero eigenvalues with positive real part.
    pub unstable_directions: usize,
}

pub fn matignon_classify(eigs: &[Complex64; 3], m: f64) -> ArgumentTest {
    let scale = eigs.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
    let threshold = m * PI / 2.0;
    let mut margins = [None; 3];
    for (slot, z) in margins.iter_mut().zip(eigs) {
        if z.norm() > ZERO_EIGEN_TOL * scale {
            *slot = Some(z.arg().abs() - threshold);
        }
    }
    let unstable_directions = eigs
        .iter()
        .zip(&margins)
        .filter(|(z, mg)| mg.is_some() && z.re > 0.0)
        .count();

    let verdict = if margins.iter().any(Option::is_none) {
        Verdict::NonHyperbolic
    } else if margins.iter().flatten().all(|&g| g > ZERO_EIGEN_TOL) {
        Verdict::Stable
    } else if margins.iter().flatten().any(|&g| g < -ZERO_EIGEN_TOL) {
        Verdict::Unstable
    } else {
        Verdict::Inconclusive
    };
    ArgumentTest {
        verdict,
        margins,
        unstable_directions,
    }
}

/// Closed-form characteristic coefficients at an interior equilibrium, with
/// the equilibrium relations substituted into the Jacobian.
pub fn characteristic_coeffs(q: &NondimParams, e: &Equilibrium) -> Result<CharCoeffs> {
    if e.kind != EquilibriumKind::Interior {
        return Err(Error::config(
            "equilibrium",
            "characteristic coefficients need an interior point",
        ));
    }
    let State { x, y, z } = e.coords_nondim;
    let den = q.a + x * x;
    let prey = 1.0 - 2.0 * x - (1.0 - x) * (q.a - x * x) / den;
    let pred = y * z / ((y + q.d) * (y + q.d));
    let top = q.p * y * z * z / ((y + q.d) * (y + q.r));
    Ok(CharCoeffs {
        a1: -prey - pred,
        a2: pred * prey + q.c * x * (1.0 - x) * (q.a - x * x) / (den * den) + top,
        a3: -top * prey,
    })
}

pub fn discriminant(a1: f64, a2: f64, a3: f64) -> f64 {
    cubic_discriminant(a1, a2, a3)
}

/// First matching hypothesis set for `coeffs` at order `m`.
pub fn classify_coefficients(coeffs: &CharCoeffs, m: f64) -> CoefficientCase {
    let CharCoeffs { a1, a2, a3 } = *coeffs;
    let d = coeffs.discriminant();
    let two_thirds = 2.0 / 3.0;
    let product_eq = (a1 * a2 - a3).abs() <= PRODUCT_EQ_RTOL * a3.abs().max((a1 * a2).abs());
    if d > 0.0 && a1 > 0.0 && a3 > 0.0 && a1 * a2 - a3 > 0.0 {
        CoefficientCase::RealNegative
    } else if d < 0.0 && a1 >= 0.0 && a2 >= 0.0 && a3 > 0.0 && m > 0.0 && m < two_thirds {
        CoefficientCase::ComplexLowOrder
    } else if d < 0.0 && a1 < 0.0 && a2 < 0.0 && m > two_thirds {
        CoefficientCase::ComplexUnstable
    } else if d < 0.0 && a1 > 0.0 && a2 > 0.0 && product_eq && m < 1.0 {
        CoefficientCase::PureImaginaryPair
    } else {
        CoefficientCase::Unmatched
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub kind: EquilibriumKind,
    pub coords_nondim: State,
    pub order: f64,
    pub eigenvalues: [Complex64; 3],
    pub matignon: ArgumentTest,
    /// Final verdict: the coefficient case's verdict for interior points
    /// (inconclusive when no case matched), the argument test otherwise.
    pub verdict: Verdict,
    pub coefficients: Option<CharCoeffs>,
    pub discriminant: Option<f64>,
    pub case: Option<CoefficientCase>,
    pub warnings: Vec<String>,
}

/// Full local-stability report for any equilibrium.
pub fn stability_report(q: &NondimParams, e: &Equilibrium, m: f64) -> StabilityReport {
    let eigenvalues = eigenvalues_at(q, e);
    let matignon = matignon_classify(&eigenvalues, m);
    let mut report = StabilityReport {
        kind: e.kind,
        coords_nondim: e.coords_nondim,
        order: m,
        eigenvalues,
        verdict: matignon.verdict,
        matignon,
        coefficients: None,
        discriminant: None,
        case: None,
        warnings: vec![],
    };
    if let Ok(coeffs) = characteristic_coeffs(q, e) {
        let case = classify_coefficients(&coeffs, m);
        report.discriminant = Some(coeffs.discriminant());
        report.coefficients = Some(coeffs);
        report.case = Some(case);
        report.verdict = case.verdict();
        if case != CoefficientCase::Unmatched && case.verdict() != report.matignon.verdict {
            report.warnings.push(format!(
                "coefficient case {} implies {} but the eigenvalue argument test gives {}",
                case.label(),
                case.verdict().as_str(),
                report.matignon.verdict.as_str()
            ));
        }
    }
    report
}

/// Coefficient-case classification of an interior equilibrium.
pub fn classify_interior(q: &NondimParams, e: &Equilibrium, m: f64) -> Result<StabilityReport> {
    if e.kind != EquilibriumKind::Interior {
        return Err(Error::config("equilibrium", "expected an interior point"));
    }
    Ok(stability_report(q, e, m))
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.6}", z.re)
    } else {
        format!("{:.6}{:+.6}i", z.re, z.im)
    }
}

impl StabilityReport {
    /// Human-readable block: summary lines then one line per eigenvalue.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let c = self.coords_nondim;
        let _ = writeln!(
            s,
            "equilibrium {} at ({:.4}, {:.4}, {:.4}), order m = {}",
            self.kind.as_str(),
            c.x,
            c.y,
            c.z,
            self.order
        );
        if let (Some(co), Some(d)) = (self.coefficients, self.discriminant) {
            let _ = writeln!(
                s,
                "A1 = {:.4}  A2 = {:.4}  A3 = {:.4}  D(F) = {:.4}",
                co.a1, co.a2, co.a3, d
            );
        }
        if let Some(case) = self.case {
            let _ = writeln!(s, "case {}: {}", case.label(), case.verdict().as_str());
        }
        for (i, (z, mg)) in self.eigenvalues.iter().zip(&self.matignon.margins).enumerate() {
            let arg = z.arg().abs();
            match mg {
                Some(g) => {
                    let tag = if *g > 0.0 { "stable" } else { "unstable" };
                    let _ = writeln!(
                        s,
                        "xi{} = {}  |arg| = {:.6}  margin = {:+.6}  {}",
                        i + 1,
                        fmt_complex(*z),
                        arg,
                        g,
                        tag
                    );
                }
                None => {
                    let _ = writeln!(
                        s,
                        "xi{} = {}  |arg| = undefined  margin = undefined  zero",
                        i + 1,
                        fmt_complex(*z)
                    );
                }
            }
        }
        let _ = writeln!(s, "argument test: {}", self.matignon.verdict.as_str());
        let _ = writeln!(s, "verdict: {}", self.verdict.as_str());
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }

    /// `(quantity, value)` pairs in CSV cell format.
    pub fn csv_rows(&self) -> Vec<(String, String)> {
        let mut rows = vec![
            ("kind".to_string(), self.kind.as_str().to_string()),
            ("order".to_string(), self.order.to_string()),
        ];
        for (i, (z, mg)) in self.eigenvalues.iter().zip(&self.matignon.margins).enumerate() {
            rows.push((format!("xi{}_re", i + 1), format!("{:.12e}", z.re)));
            rows.push((format!("xi{}_im", i + 1), format!("{:.12e}", z.im)));
            rows.push((
                format!("xi{}_margin", i + 1),
                mg.map(|g| format!("{g:.12e}")).unwrap_or_default(),
            ));
        }
        if let (Some(co), Some(d)) = (self.coefficients, self.discriminant) {
            for (k, v) in [("A1", co.a1), ("A2", co.a2), ("A3", co.a3), ("D", d)] {
                rows.push((k.to_string(), format!("{v:.12e}")));
            }
        }
        if let Some(case) = self.case {
            rows.push(("case".to_string(), case.label().to_string()));
        }
        rows.push(("argument_test".to_string(), self.matignon.verdict.as_str().to_string()));
        rows.push(("verdict".to_string(), self.verdict.as_str().to_string()));
        rows
    }

    /// `quantity,value` CSV.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "quantity,value")?;
        for (k, v) in self.csv_rows() {
            writeln!(out, "{k},{v}")?;
        }
        Ok(())
    }
}

/// Sufficient conditions for global asymptotic stability of the interior point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlobalStabilityReport {
    pub cond1: f64,
    pub cond2: f64,
    pub cond3: f64,
    pub alpha: f64,
    pub all_satisfied: bool,
    pub equilibrium: State,
}

/// `β + β/(4b) + r`, the bound shared by the boundedness and global conditions.
fn bound_sum(q: &NondimParams) -> f64 {
    q.beta + q.beta / (4.0 * q.b) + q.r
}

/// Evaluates the three Lyapunov-derived conditions at the first feasible
/// interior equilibrium, with `β = v1/a0`.
pub fn global_stability_check(p: &DimParams) -> Result<GlobalStabilityReport> {
    let q = nondimensionalize(p);
    let e = interior_equilibrium(&q, Some(p)).ok_or(Error::NoInteriorEquilibrium)?;
    Ok(global_conditions(&q, e.coords_nondim))
}

/// The three conditions at a given nondimensional `(x*, y*)`.
pub fn global_conditions(q: &NondimParams, e: State) -> GlobalStabilityReport {
    let (x, y) = (e.x, e.y);
    let (a, b, beta) = (q.a, q.b, q.beta);
    let sum = bound_sum(q);
    let alpha = 1.0 / (b * b * sum);
    let den = x * x + a;
    let coupling =
        q.q / (4.0 * b * q.r * alpha * (q.q - q.p * sum)) - den / (a * beta * (beta + beta / (4.0 * b) + q.d));
    let cond1 = 2.0 * q.s * y / (a * den) + q.s / (2.0 * a * a) - 1.0;
    let cond2 = (q.c * x - b * den) / (a * beta * q.d) + q.s / (2.0 * a * a) + 0.5 * coupling;
    let cond3 = coupling;
    GlobalStabilityReport {
        cond1,
        cond2,
        cond3,
        alpha,
        all_satisfied: cond1 < 0.0 && cond2 < 0.0 && cond3 < 0.0,
        equilibrium: e,
    }
}

/// Ultimate-boundedness condition and the absorbing region in nondimensional
/// coordinates:
/// `x ≤ 1`, `x + y/β ≤ 1 + 1/(4b)`, `x + y/β + α z ≤ 1 + 1/(4b) + M/b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundednessReport {
    /// `β + β/(4b) + r`
    pub lhs: f64,
    /// `q / p`
    pub rhs: f64,
    pub satisfied: bool,
    /// `1 / (4 (q - lhs p))`, present only when satisfied.
    pub m_bound: Option<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub omega_bounds: (f64, f64, Option<f64>),
}

impl BoundednessReport {
    /// Whether a nondimensional state lies in the region inflated by `slack`
    /// (relative). Always `None` when the condition fails.
    pub fn contains(&self, s: State, slack: f64) -> Option<bool> {
        let third = self.omega_bounds.2?;
        let k = 1.0 + slack;
        let v1 = s.x + s.y / self.beta;
        let v2 = v1 + self.alpha * s.z;
        Some(s.x <= self.omega_bounds.0 * k && v1 <= self.omega_bounds.1 * k && v2 <= third * k)
    }
}

pub fn boundedness_check(p: &DimParams) -> BoundednessReport {
    boundedness_from_nondim(&nondimensionalize(p))
}

pub fn boundedness_from_nondim(q: &NondimParams) -> BoundednessReport {
    let lhs = bound_sum(q);
    let rhs = q.q / q.p;
    let satisfied = lhs < rhs;
    let m_bound = satisfied.then(|| 1.0 / (4.0 * (q.q - lhs * q.p)));
    let second = 1.0 + 1.0 / (4.0 * q.b);
    BoundednessReport {
        lhs,
        rhs,
        satisfied,
        m_bound,
        alpha: 1.0 / (q.b * q.b * lhs),
        beta: q.beta,
        omega_bounds: (1.0, second, m_bound.map(|m| second + m / q.b)),
    }
}

/// Lipschitz constant of the nondimensional field on the cube `max |·| ≤ m1`.
pub fn lipschitz_constant(q: &NondimParams, m1: f64) -> Result<f64> {
    if !(m1 > 0.0 && m1.is_finite()) {
        return Err(Error::config("M1", format!("must be positive, got {m1}")));
    }
    let sc = q.s + q.c;
    let (a, b, d, p, qq, r) = (q.a, q.b, q.d, q.p, q.q, q.r);
    let first = 1.0 + 2.0 * m1 + m1 * sc / a + m1.powi(3) * sc / (a * a);
    let second = m1 * (sc / a + 1.0 / d) + b + m1 * m1 * (m1 * sc / (a * a) + qq / (r * r));
    let third = m1 * (2.0 * p + 1.0 / d + 2.0 * qq / r) + m1 * m1 * (1.0 / (d * d) + 2.0 * qq / (r * r));
    Ok(first.max(second).max(third))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::find_equilibria;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn negative_reals_are_stable_for_any_order() {
        let eigs = [c(-1.0, 0.0), c(-2.0, 0.0), c(-3.0, 0.0)];
        for m in [0.1, 0.5, 1.0] {
            let t = matignon_classify(&eigs, m);
            assert_eq!(t.verdict, Verdict::Stable);
            for g in t.margins {
                assert!((g.unwrap() - (PI - m * PI / 2.0)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_eigenvalue_is_non_hyperbolic() {
        let b = 0.3;
        let t = matignon_classify(&[c(1.0, 0.0), c(-b, 0.0), c(0.0, 0.0)], 0.8);
        assert_eq!(t.verdict, Verdict::NonHyperbolic);
        assert_eq!(t.margins[2], None);
        assert_eq!(t.unstable_directions, 1);
    }

    #[test]
    fn imaginary_pair_stable_below_order_one() {
        let eigs = [c(-0.4, 0.0), c(0.0, 0.7), c(0.0, -0.7)];
        assert_eq!(matignon_classify(&eigs, 0.9).verdict, Verdict::Stable);
        assert_eq!(matignon_classify(&eigs, 1.0).verdict, Verdict::Inconclusive);
    }

    #[test]
    fn boundary_equilibria_eigenvalues() {
        let p = DimParams::example3();
        let q = nondimensionalize(&p);
        let eqs = find_equilibria(&q, Some(&p));
        let mut e0: Vec<f64> = eigenvalues_at(&q, &eqs[0]).iter().map(|z| z.re).collect();
        e0.sort_by(f64::total_cmp);
        assert!((e0[0] + q.b).abs() < 1e-14 && e0[1].abs() < 1e-14 && (e0[2] - 1.0).abs() < 1e-14);
        let mut e1: Vec<f64> = eigenvalues_at(&q, &eqs[1]).iter().map(|z| z.re).collect();
        e1.sort_by(f64::total_cmp);
        let xi2 = (q.c - q.b - q.a * q.b) / (1.0 + q.a);
        let mut want = vec![-1.0, xi2, 0.0];
        want.sort_by(f64::total_cmp);
        for (g, w) in e1.iter().zip(want) {
            assert!((g - w).abs() < 1e-12);
        }
        let r = stability_report(&q, &eqs[0], 0.9);
        assert_eq!(r.verdict, Verdict::NonHyperbolic);
        assert!(r.case.is_none());
    }

    #[test]
    fn case_i_from_negative_real_roots() {
        let co = CharCoeffs::from_roots([c(-1.0, 0.0), c(-2.0, 0.0), c(-3.0, 0.0)]);
        assert_eq!((co.a1, co.a2, co.a3), (6.0, 11.0, 6.0));
        for m in [0.2, 0.7, 1.0] {
            assert_eq!(classify_coefficients(&co, m), CoefficientCase::RealNegative);
        }
    }

    #[test]
    fn case_iv_from_imaginary_pair() {
        let (b, g) = (0.8, 1.3);
        // (ξ + b)(ξ² + γ²)
        let co = CharCoeffs {
            a1: b,
            a2: g * g,
            a3: b * (g * g),
        };
        let via_roots = CharCoeffs::from_roots([c(-b, 0.0), c(0.0, g), c(0.0, -g)]);
        assert!((via_roots.a3 - co.a3).abs() < 1e-15);
        assert_eq!(co.a1 * co.a2, co.a3);
        assert_eq!(classify_coefficients(&co, 0.9), CoefficientCase::PureImaginaryPair);
        assert_eq!(classify_coefficients(&co, 0.5), CoefficientCase::ComplexLowOrder);
        assert_eq!(classify_coefficients(&co, 1.0), CoefficientCase::Unmatched);
    }

    #[test]
    fn unmatched_is_inconclusive() {
        // stable complex pair but order above 2/3 and A1 A2 != A3
        let co = CharCoeffs::from_roots([c(-1.0, 0.0), c(-0.1, 1.0), c(-0.1, -1.0)]);
        let case = classify_coefficients(&co, 0.9);
        assert_eq!(case, CoefficientCase::Unmatched);
        assert_eq!(case.verdict(), Verdict::Inconclusive);
    }

    #[test]
    fn example3_coefficients_and_case() {
        let p = DimParams::example3();
        let q = nondimensionalize(&p);
        let e = interior_equilibrium(&q, Some(&p)).unwrap();
        let co = characteristic_coeffs(&q, &e).unwrap();
        assert!((co.a1 - 0.4033).abs() < 1e-3);
        assert!((co.a2 - 0.0689).abs() < 1e-3);
        assert!((co.a3 - 0.0221).abs() < 1e-3);
        assert!((co.discriminant() + 0.0084).abs() < 1e-3);
        let r = classify_interior(&q, &e, 0.6).unwrap();
        assert_eq!(r.case, Some(CoefficientCase::ComplexLowOrder));
        assert_eq!(r.verdict, Verdict::Stable);
        assert!(r.warnings.is_empty());
        let text = r.to_text();
        assert!(text.contains("case ii"), "{text}");
        for v in ["0.4033", "0.0689", "0.0221", "-0.0084"] {
            assert!(text.contains(v), "{v} missing from\n{text}");
        }
    }

    #[test]
    fn example4_is_unstable_case() {
        let p = DimParams::example4();
        let q = nondimensionalize(&p);
        let e = interior_equilibrium(&q, Some(&p)).unwrap();
        let co = characteristic_coeffs(&q, &e).unwrap();
        assert!((co.a1 + 0.0131).abs() < 1e-3);
        assert!((co.a2 + 0.0044).abs() < 1e-3);
        assert!((co.discriminant() + 0.0217).abs() < 1e-3);
        for m in [0.85, 0.95] {
            let r = classify_interior(&q, &e, m).unwrap();
            assert_eq!(r.case, Some(CoefficientCase::ComplexUnstable));
            assert_eq!(r.verdict, Verdict::Unstable);
        }
    }

    #[test]
    fn non_interior_rejected() {
        let p = DimParams::example3();
        let q = nondimensionalize(&p);
        let eqs = find_equilibria(&q, Some(&p));
        assert!(characteristic_coeffs(&q, &eqs[1]).is_err());
        assert!(classify_interior(&q, &eqs[0], 0.5).is_err());
    }

    #[test]
    fn example5_global_conditions() {
        let g = global_stability_check(&DimParams::example5()).unwrap();
        assert!((g.cond1 + 0.8084).abs() < 1e-3);
        assert!((g.cond2 + 0.0906).abs() < 1e-3);
        assert!((g.cond3 + 0.2623).abs() < 1e-3);
        assert!((g.alpha - 0.6330).abs() < 1e-3);
        assert!(g.all_satisfied);
    }

    #[test]
    fn inflated_s_violates_first_condition() {
        let p = DimParams::example5();
        let mut q = nondimensionalize(&p);
        let e = interior_equilibrium(&q, Some(&p)).unwrap();
        q.s *= 100.0;
        let g = global_conditions(&q, e.coords_nondim);
        assert!(g.cond1 > 0.0);
        assert!(!g.all_satisfied);
    }

    #[test]
    fn global_check_needs_interior_point() {
        // v3 < c3 d3 leaves no interior equilibrium
        let p = DimParams::example5().with("v3", 0.5).unwrap();
        assert_eq!(global_stability_check(&p), Err(Error::NoInteriorEquilibrium));
    }

    #[test]
    fn example5_not_bounded() {
        let r = boundedness_check(&DimParams::example5());
        assert!(!r.satisfied);
        assert!((r.lhs - 31.65).abs() < 5e-3);
        assert!((r.rhs - 24.08).abs() < 5e-3);
        assert!(r.m_bound.is_none() && r.omega_bounds.2.is_none());
        assert_eq!(r.contains(State::ZERO, 0.05), None);
    }

    #[test]
    fn large_v3_makes_bounded() {
        let p = DimParams::example5().with("v3", 100.0).unwrap();
        let r = boundedness_check(&p);
        assert!(r.satisfied);
        assert!(r.m_bound.unwrap() > 0.0);
        let q = nondimensionalize(&p);
        assert_eq!(r.omega_bounds.1, 1.0 + 1.0 / (4.0 * q.b));
        assert_eq!(r.contains(State::ZERO, 0.0), Some(true));
        assert_eq!(r.contains(State::new(2.0, 0.0, 0.0), 0.05), Some(false));
    }

    #[test]
    fn lipschitz_limits_and_monotonicity() {
        let q = nondimensionalize(&DimParams::example1());
        let tiny = lipschitz_constant(&q, 1e-12).unwrap();
        assert!((tiny - 1.0).abs() < 1e-9);
        let l10 = lipschitz_constant(&q, 10.0).unwrap();
        let l20 = lipschitz_constant(&q, 20.0).unwrap();
        assert!(l20 >= l10 && l10 >= 1.0);
        assert!(lipschitz_constant(&q, 0.0).is_err());
    }

    #[test]
    fn report_csv_lists_coefficients() {
        let p = DimParams::example3();
        let q = nondimensionalize(&p);
        let e = interior_equilibrium(&q, Some(&p)).unwrap();
        let mut buf = Vec::new();
        stability_report(&q, &e, 0.6).write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("case,ii"));
        assert!(text.lines().any(|l| l.starts_with("A1,")));
    }
}
