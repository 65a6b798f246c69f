use dgbo_core::functionals::ConservedPair;
use dgbo_core::threshold::{barrier_function, check_conditions_from_invariants, compute_sk};
use dgbo_core::ModelParams;
use proptest::prelude::*;

fn supercritical() -> impl Strategy<Value = ModelParams> {
    (1.0..2.0f64, 1u32..=6).prop_filter_map("needs k > 2 beta", |(beta, extra)| {
        let k = (2.0 * beta).floor() as u32 + extra;
        ModelParams::new(beta, k)
            .ok()
            .filter(|p| p.is_supercritical())
    })
}

/// Invariants `(M, E, X)` with `E <= X / 2` so they can come from a field.
fn invariants() -> impl Strategy<Value = (f64, f64, f64)> {
    (-3.0..3.0f64, -3.0..3.0f64, -1.0..1.0f64)
        .prop_map(|(lm, lx, e)| (10f64.powf(lm), 0.5 * 10f64.powf(lx) * e, 10f64.powf(lx)))
}

fn pair(m: f64, e: f64, x: f64) -> ConservedPair {
    ConservedPair {
        mass: m,
        energy: e,
        h_half_beta: x.sqrt(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn conditions_are_invariant_under_the_equation_scaling(
        params in supercritical(),
        (m, e, x) in invariants(),
        q_mass in 0.5..20.0f64,
        log_mu in -1.0..1.0f64,
    ) {
        // u_mu(x) = mu^{beta/k} u(mu x): M ~ mu^a, E and X ~ mu^{a + beta}.
        let mu = 10f64.powf(log_mu);
        let a = 2.0 * params.beta() / params.kf() - 1.0;
        let (ms, es, xs) = (m * mu.powf(a), e * mu.powf(a + params.beta()), x * mu.powf(a + params.beta()));
        let r = check_conditions_from_invariants(&params, &pair(m, e, x), q_mass, None).unwrap();
        let rs = check_conditions_from_invariants(&params, &pair(ms, es, xs), q_mass, None).unwrap();
        prop_assert!(rel(r.lhs_gradient_mass, rs.lhs_gradient_mass) < 1e-9);
        if e != 0.0 {
            prop_assert!(rel(r.lhs_energy_mass, rs.lhs_energy_mass) < 1e-9);
        }
        let near = |lhs: f64, rhs: f64| rel(lhs, rhs) < 1e-8;
        if !near(r.lhs_energy_mass, r.rhs_energy_mass) && !near(r.lhs_gradient_mass, r.rhs_gradient_mass) {
            prop_assert_eq!(r.admissible, rs.admissible);
        }
    }

    #[test]
    fn mass_power_and_barrier_forms_agree(
        params in supercritical(),
        (m, e, x) in invariants(),
        q_mass in 0.5..20.0f64,
    ) {
        // Compared in logs: near k = 2 beta the exponents reach the thousands.
        let r = check_conditions_from_invariants(&params, &pair(m, e, x), q_mass, None).unwrap();
        let s = compute_sk(&params);
        let log_x0 = r.log_x0.unwrap();
        let log_gap = r.log_lhs_gradient_mass.unwrap() - r.log_rhs_gradient_mass;
        let d = (2.0 / s * log_gap - (x.ln() - log_x0)).abs();
        prop_assert!(d < 1e-9 * (1.0 + log_x0.abs()), "gradient forms differ by {:e}", d);
        if e > 0.0 {
            let k = params.kf();
            let log_f_x0 = ((k - 2.0 * params.beta()) / k).ln() + log_x0;
            let log_gap = r.log_lhs_energy_mass.unwrap() - r.log_rhs_energy_mass;
            let d = (log_gap / s - ((2.0 * e).ln() - log_f_x0)).abs();
            prop_assert!(d < 1e-9 * (1.0 + log_x0.abs()), "energy forms differ by {:e}", d);
        }
    }

    #[test]
    fn barrier_rises_to_x0_then_falls(
        params in supercritical(),
        log_b in -3.0..3.0f64,
        t in 0.01..0.99f64,
    ) {
        let f = barrier_function(&params, 10f64.powf(log_b)).unwrap();
        prop_assume!(f.x0.is_normal() && (f.x0 / (t * t)).is_finite());
        let below = t * f.x0;
        let above = f.x0 / t;
        prop_assert!(f.derivative(below) > 0.0);
        prop_assert!(f.derivative(above) < 0.0);
        prop_assert!(f.eval(below) < f.f_x0);
        prop_assert!(f.eval(above) < f.f_x0);
        prop_assert!(f.eval(below * t) < f.eval(below));
        prop_assert!(f.eval(above / t) < f.eval(above));
    }

    #[test]
    fn sub_threshold_data_scale_into_admissible_set(
        params in supercritical(),
        (m, e, x) in invariants(),
        q_mass in 0.5..20.0f64,
    ) {
        // Shrinking mass at fixed E, X can only help.
        let r = check_conditions_from_invariants(&params, &pair(m, e, x), q_mass, None).unwrap();
        let smaller = check_conditions_from_invariants(&params, &pair(0.5 * m, e, x), q_mass, None).unwrap();
        if r.admissible {
            prop_assert!(smaller.admissible);
        }
    }
}
