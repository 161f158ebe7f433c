use fracchain::fode::{corrector_weight, integrate_pece_with, predictor_weight, FodeProblem, HistorySum, MemoryPolicy};
use fracchain::model::rhs_dimensional;
use fracchain::specfun::mittag_leffler;
use fracchain::{integrate_pece, DimParams, State};
use proptest::prelude::*;

fn chain(order: f64, init: [f64; 3], t_final: f64, step: f64) -> FodeProblem<impl Fn(f64, &[f64], &mut [f64])> {
    let p = DimParams::example5();
    FodeProblem::new(
        order,
        init.to_vec(),
        0.0,
        t_final,
        step,
        move |_t, y: &[f64], dy: &mut [f64]| {
            let f = rhs_dimensional(&p, State::from_slice(y));
            dy.copy_from_slice(&f.to_array());
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Predictor weights integrate 1 exactly: Σ_j b_{j,n+1} = h^m (n+1)^m / m.
    #[test]
    fn predictor_weights_integrate_constants(m in 0.05f64..=1.0, n in 0usize..400, h in 0.001f64..0.5) {
        let sum: f64 = (0..=n).map(|j| predictor_weight(m, h, j, n)).sum();
        let want = h.powf(m) * ((n + 1) as f64).powf(m) / m;
        prop_assert!(((sum - want) / want).abs() <= 1e-10);
    }

    /// Corrector weights (with a_{n+1,n+1} = 1) sum to (m+1)(n+1)^m.
    #[test]
    fn corrector_weights_integrate_constants(m in 0.05f64..=1.0, n in 0usize..400) {
        let sum: f64 = (0..=n).map(|j| corrector_weight(m, j, n)).sum::<f64>() + 1.0;
        let want = (m + 1.0) * ((n + 1) as f64).powf(m);
        prop_assert!(((sum - want) / want).abs() <= 1e-10);
    }

    #[test]
    fn spanning_window_is_full_memory(m in 0.5f64..=1.0, extra in 0.0f64..50.0, x0 in 0.5f64..3.0) {
        let prob = chain(m, [x0, 1.0, 2.0], 20.0, 0.05);
        let full = integrate_pece(&prob, &MemoryPolicy::Full).unwrap();
        let trunc = integrate_pece(&prob, &MemoryPolicy::Truncated { window_length: 20.0 + extra }).unwrap();
        prop_assert_eq!(full, trunc);
    }
}

/// Euler predictor and trapezoidal corrector on y(t) = y0 + ∫ f, coded
/// without reference to the fractional weights.
fn classical_pair(init: [f64; 3], steps: usize, h: f64) -> Vec<[f64; 3]> {
    let p = DimParams::example5();
    let f = |y: [f64; 3]| rhs_dimensional(&p, State::new(y[0], y[1], y[2])).to_array();
    let mut ys = vec![init];
    let mut fs = vec![f(init)];
    for _ in 0..steps {
        let mut pred = init;
        let mut corr = init;
        for k in 0..3 {
            let all: f64 = fs.iter().map(|v| v[k]).sum();
            pred[k] += h * all;
            corr[k] += h * (all - 0.5 * fs[0][k]);
        }
        let fp = f(pred);
        for k in 0..3 {
            corr[k] += 0.5 * h * fp[k];
        }
        fs.push(f(corr));
        ys.push(corr);
    }
    ys
}

#[test]
fn order_one_reduces_to_classical_pece() {
    let init = [1.2, 1.2, 1.2];
    let reference = classical_pair(init, 100, 0.05);
    for engine in [HistorySum::Auto, HistorySum::Direct, HistorySum::Blocked] {
        let traj = integrate_pece_with(&chain(1.0, init, 5.0, 0.05), &MemoryPolicy::Full, engine).unwrap();
        assert_eq!(traj.len(), 101);
        for (i, want) in reference.iter().enumerate() {
            for (k, (got, w)) in traj.state(i).iter().zip(want).enumerate() {
                assert!((got - w).abs() <= 1e-12, "{engine:?} step {i} comp {k}: {got} vs {w}");
            }
        }
    }
}

#[test]
fn runs_are_deterministic() {
    for m in [0.75, 1.0] {
        let a = integrate_pece(&chain(m, [1.2, 1.2, 1.2], 300.0, 0.05), &MemoryPolicy::Full).unwrap();
        let b = integrate_pece(&chain(m, [1.2, 1.2, 1.2], 300.0, 0.05), &MemoryPolicy::Full).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn engines_agree_on_the_food_chain() {
    let prob = chain(0.8, [1.2, 1.2, 1.2], 250.0, 0.05);
    let direct = integrate_pece_with(&prob, &MemoryPolicy::Full, HistorySum::Direct).unwrap();
    let blocked = integrate_pece_with(&prob, &MemoryPolicy::Full, HistorySum::Blocked).unwrap();
    let worst = direct
        .states_flat()
        .iter()
        .zip(blocked.states_flat())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-9, "max deviation {worst}");
}

#[test]
fn relaxation_matches_mittag_leffler() {
    for m in [0.5, 0.8, 1.0] {
        let prob = FodeProblem::new(m, vec![1.0], 0.0, 5.0, 0.01, |_t, y: &[f64], dy: &mut [f64]| {
            dy[0] = -y[0]
        });
        let traj = integrate_pece(&prob, &MemoryPolicy::Full).unwrap();
        let sup = traj
            .times
            .iter()
            .zip(traj.component(0))
            .map(|(&t, x)| (x - mittag_leffler(m, -t.powf(m)).unwrap()).abs())
            .fold(0.0, f64::max);
        assert!(sup <= 1e-3, "m = {m}: sup error {sup}");
    }
}

#[test]
fn logistic_at_order_one() {
    let prob = FodeProblem::new(1.0, vec![0.1], 0.0, 10.0, 0.01, |_t, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[0] * (1.0 - y[0])
    });
    let traj = integrate_pece(&prob, &MemoryPolicy::Full).unwrap();
    for (t, x) in traj.times.iter().zip(traj.component(0)) {
        let exact = 1.0 / (1.0 + 9.0 * f64::exp(-t));
        assert!((x - exact).abs() < 1e-3);
    }
}
