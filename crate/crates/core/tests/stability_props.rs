use fracchain::equilibria::{interior_equilibrium, residual};
use fracchain::model::jacobian;
use fracchain::poly::cubic_roots;
use fracchain::stability::{
    characteristic_coeffs, classify_coefficients, discriminant, eigenvalues_at, matignon_classify, matrix_char_coeffs,
    CharCoeffs,
};
use fracchain::{nondimensionalize, DimParams, Verdict};
use nalgebra::Matrix3;
use num_complex::Complex64;
use proptest::prelude::*;

fn companion(a1: f64, a2: f64, a3: f64) -> Vec<Complex64> {
    let m = Matrix3::new(-a1, -a2, -a3, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0);
    let mut ev: Vec<Complex64> = m
        .complex_eigenvalues()
        .iter()
        .map(|z| Complex64::new(z.re, z.im))
        .collect();
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    ev
}

fn params() -> impl Strategy<Value = DimParams> {
    (1u32..=5, prop::collection::vec(0.8f64..1.2, 6)).prop_map(|(n, f)| {
        let b = DimParams::example(n).unwrap();
        DimParams {
            a0: b.a0 * f[0],
            b0: b.b0 * f[1],
            v1: b.v1 * f[2],
            v2: b.v2 * f[3],
            a1: b.a1 * f[4],
            c3: b.c3 * f[5],
            ..b
        }
    })
}

fn eigen_set() -> impl Strategy<Value = [Complex64; 3]> {
    prop_oneof![
        (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b, c)| [
            Complex64::new(a, 0.0),
            Complex64::new(b, 0.0),
            Complex64::new(c, 0.0)
        ]),
        (-3.0f64..3.0, -3.0f64..3.0, 0.01f64..3.0).prop_map(|(a, re, im)| [
            Complex64::new(a, 0.0),
            Complex64::new(re, im),
            Complex64::new(re, -im)
        ]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn discriminant_sign_law(a1 in -3.0f64..3.0, a2 in -3.0f64..3.0, a3 in -3.0f64..3.0) {
        let d = discriminant(a1, a2, a3);
        prop_assume!(d.abs() > 1e-6);
        let ev = companion(a1, a2, a3);
        let scale = ev.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let n_real = ev.iter().filter(|z| z.im.abs() <= 1e-7 * scale).count();
        if d > 0.0 {
            prop_assert_eq!(n_real, 3);
            let mut re: Vec<f64> = ev.iter().map(|z| z.re).collect();
            re.sort_by(f64::total_cmp);
            prop_assert!(re[0] < re[1] && re[1] < re[2]);
        } else {
            prop_assert_eq!(n_real, 1);
        }
        // the closed-form solver sees the same root structure
        let ours = cubic_roots(a1, a2, a3);
        prop_assert_eq!(ours.iter().filter(|z| z.im == 0.0).count(), n_real);
    }

    #[test]
    fn matignon_is_monotone_in_order(eigs in eigen_set(), m in 0.05f64..=1.0, shrink in 0.0f64..1.0) {
        let lower = m * shrink.max(0.01);
        let hi = matignon_classify(&eigs, m);
        let lo = matignon_classify(&eigs, lower);
        if hi.verdict == Verdict::Stable {
            prop_assert_eq!(lo.verdict, Verdict::Stable);
        }
        for (a, b) in hi.margins.iter().zip(&lo.margins) {
            if let (Some(a), Some(b)) = (a, b) {
                prop_assert!(b >= a);
            }
        }
    }

    #[test]
    fn pure_imaginary_pair_is_stable_below_one(b in 0.01f64..3.0, g in 0.01f64..3.0, m in 0.05f64..0.999) {
        let co = CharCoeffs { a1: b, a2: g * g, a3: b * (g * g) };
        let case = classify_coefficients(&co, m);
        prop_assert_eq!(case.verdict(), Verdict::Stable, "{:?}", case);
        let eigs = [Complex64::new(-b, 0.0), Complex64::new(0.0, g), Complex64::new(0.0, -g)];
        prop_assert_eq!(matignon_classify(&eigs, m).verdict, Verdict::Stable);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn planted_roots_are_recovered(mut r in prop::array::uniform3(0.0f64..1.0)) {
        r.sort_by(f64::total_cmp);
        let (b, c, d) = (-(r[0] + r[1] + r[2]), r[0] * r[1] + r[0] * r[2] + r[1] * r[2], -r[0] * r[1] * r[2]);
        let got = cubic_roots(b, c, d);
        let mut re: Vec<f64> = got.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        for k in 0..3 {
            prop_assert!((re[k] - r[k]).abs() <= 1e-9, "planted {:?}, got {:?}", r, got);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn closed_form_coefficients_match_the_jacobian(p in params()) {
        let q = nondimensionalize(&p);
        let e = interior_equilibrium(&q, None);
        prop_assume!(e.is_some());
        let e = e.unwrap();
        prop_assert!(residual(&q, &e) < 1e-9);
        let j = jacobian(&q, e.coords_nondim);
        let closed = characteristic_coeffs(&q, &e).unwrap();
        let direct = matrix_char_coeffs(&j);
        let trace = j[0][0] + j[1][1] + j[2][2];
        prop_assert!((closed.a1 + trace).abs() <= 1e-8 * trace.abs().max(1.0));
        for (a, b) in [(closed.a1, direct.a1), (closed.a2, direct.a2), (closed.a3, direct.a3)] {
            prop_assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0), "{a} vs {b}");
        }

        let ours = eigenvalues_at(&q, &e);
        let oracle: Vec<Complex64> = Matrix3::from_fn(|r, c| j[r][c])
            .complex_eigenvalues()
            .iter()
            .map(|z| Complex64::new(z.re, z.im))
            .collect();
        for z in &ours {
            let nearest = oracle.iter().map(|w| (z - w).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(nearest <= 1e-8 * z.norm().max(1.0), "{z} not in {oracle:?}");
        }
    }
}

#[test]
fn negative_real_eigenvalues_are_stable_at_every_order() {
    let eigs = [-1.0, -2.0, -3.0].map(|x| Complex64::new(x, 0.0));
    for m in [0.1, 0.5, 1.0] {
        let t = matignon_classify(&eigs, m);
        assert_eq!(t.verdict, Verdict::Stable);
        for g in t.margins {
            assert!((g.unwrap() - (std::f64::consts::PI - m * std::f64::consts::FRAC_PI_2)).abs() < 1e-15);
        }
    }
}
