use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;
use proptest::prelude::*;

use specdelay::cli::{roundtrip, RunConfig};
use specdelay::forward::{compute_spectrum, solve_ivp_method_of_steps, Boundary};
use specdelay::inverse::{
    assemble_volterra, estimate_omega_ratio, estimate_omega_sample, run_algorithm1, ProductCharFn,
};
use specdelay::kernels::{kernel_k, omega_of_x};
use specdelay::numerics::volterra::{dense_system, solve_triangular_volterra};
use specdelay::potential::random_smooth;
use specdelay::{build_w_functions, CharFnEvaluator, DelayParameter, GridSpec, PotentialPair};

fn delay() -> impl Strategy<Value = DelayParameter> {
    prop_oneof![Just(0.5), Just(0.6), Just(0.75), 0.5..0.95f64]
        .prop_map(|f| DelayParameter::new(f * PI).unwrap())
}

fn potential(m: usize) -> impl Strategy<Value = PotentialPair> {
    (delay(), any::<u64>(), 0.1..3.0f64)
        .prop_map(move |(a, seed, norm)| random_smooth(GridSpec::new(m).unwrap(), a, seed, norm))
}

fn lambda(radius: f64) -> impl Strategy<Value = C> {
    (0.0..radius, 0.0..2.0 * PI).prop_map(|(r, t)| C::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pieces_vanish_outside_their_support(pot in potential(128)) {
        let zero = C::new(0.0, 0.0);
        let ka = pot.a_index();
        let m = pot.grid().subintervals();
        for k in 0..ka {
            prop_assert_eq!(pot.qplus().left()[k], zero);
            prop_assert_eq!(pot.qplus().right()[k], zero);
        }
        for k in ka + 1..=m {
            prop_assert_eq!(pot.qminus().left()[k], zero);
            prop_assert_eq!(pot.qminus().right()[k], zero);
        }
    }

    #[test]
    fn densities_reproduce_qminus_near_the_right_end(pot in potential(128)) {
        let model = build_w_functions(&pot);
        let g = pot.grid();
        let start = g.subintervals() - pot.a_index();
        for k in start + 1..g.subintervals() {
            let want = pot.qminus().eval(PI - g.x(k));
            prop_assert!((model.w0.node(k) - want).norm() <= 1e-12);
            prop_assert!((model.w1.node(k) - want).norm() <= 1e-12);
        }
    }

    #[test]
    fn cosine_kernel_on_the_diagonal_is_omega(pot in potential(128), s in 0.0..1.0f64) {
        let a = pot.a();
        let x = a + s * (PI - a);
        let diff = kernel_k(x, a, &pot).unwrap() - omega_of_x(x, &pot).unwrap();
        prop_assert!(diff.norm() <= 1e-13);
    }

    #[test]
    fn characteristic_functions_are_even_in_rho(
        pot in potential(128),
        re in -30.0..30.0f64,
        im in -4.0..4.0f64,
    ) {
        let ev = CharFnEvaluator::new(build_w_functions(&pot));
        let rho = C::new(re, im);
        for j in [Boundary::Dirichlet, Boundary::Neumann] {
            let (p, q) = (ev.eval_rho(j, rho), ev.eval_rho(j, -rho));
            prop_assert!((p - q).norm() <= 1e-12 * p.norm().max(1.0));
        }
    }

    #[test]
    fn evaluation_does_not_depend_on_the_square_root_branch(
        pot in potential(128),
        l in lambda(400.0),
    ) {
        let ev = CharFnEvaluator::new(build_w_functions(&pot));
        for j in [Boundary::Dirichlet, Boundary::Neumann] {
            let v = ev.eval(j, l);
            let w = ev.eval_rho(j, -l.sqrt());
            prop_assert!((v - w).norm() <= 1e-12 * v.norm().max(1.0));
        }
    }

    #[test]
    fn representation_matches_the_initial_value_problem(
        pot in potential(1024),
        l in lambda(50.0),
    ) {
        let model = build_w_functions(&pot);
        let ev = CharFnEvaluator::new(model);
        let ivp = solve_ivp_method_of_steps(&pot, l).unwrap();
        let scale = (1.0 + l.norm()) * ivp.y_end.norm().max(ivp.dy_end.norm()).max(1.0);
        prop_assert!((ev.eval(Boundary::Dirichlet, l) - ivp.y_end).norm() <= 1e-6 * scale);
        prop_assert!((ev.eval(Boundary::Neumann, l) - ivp.dy_end).norm() <= 1e-6 * scale);
    }

    #[test]
    fn volterra_sweep_matches_dense_gaussian_elimination(pot in potential(64)) {
        let model = build_w_functions(&pot);
        let sys = assemble_volterra(&model.w0, &model.w1, pot.qminus(), pot.delay());
        let xs = sys.nodes();
        let n = xs.len();
        let sweep = solve_triangular_volterra(&xs, |x, t| sys.kernel(x, t), sys.rhs()).values;
        let rows = dense_system(&xs, |x, t| sys.kernel(x, t));
        let dense = DMatrix::from_fn(n, n, |k, i| rows[k][i])
            .lu()
            .solve(&DVector::from_column_slice(sys.rhs()))
            .unwrap();
        for (u, v) in sweep.iter().zip(dense.iter()) {
            prop_assert!((u - v).norm() <= 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn omega_estimators_agree(pot in potential(512)) {
        let model = build_w_functions(&pot);
        let omega = model.omega;
        let s1 = compute_spectrum(Boundary::Neumann, &model, 128).unwrap();
        let ratio = estimate_omega_ratio(&s1, pot.delay()).unwrap();
        let sample = estimate_omega_sample(&s1, pot.delay()).unwrap();
        let tol = 0.05 * (1.0 + omega.norm());
        prop_assert!((ratio - sample).norm() <= tol, "ratio {} sample {}", ratio, sample);
        prop_assert!((ratio - omega).norm() <= tol);
    }

    #[test]
    fn product_reproduces_the_characteristic_function(
        pot in potential(512),
        l in lambda(20.0),
    ) {
        let model = build_w_functions(&pot);
        let ev = CharFnEvaluator::new(model.clone());
        for j in [Boundary::Dirichlet, Boundary::Neumann] {
            let s = compute_spectrum(j, &model, 256).unwrap();
            let want = ev.eval(j, l);
            let got = ProductCharFn::new(&s).eval(l);
            let scale = want.norm().max(1.0);
            prop_assert!((got - want).norm() <= 1e-3 * scale, "j={:?} {} vs {}", j, got, want);
        }
    }

    #[test]
    fn fitted_omega_is_accurate(pot in potential(512)) {
        let model = build_w_functions(&pot);
        let s0 = compute_spectrum(Boundary::Dirichlet, &model, 128).unwrap();
        let s1 = compute_spectrum(Boundary::Neumann, &model, 128).unwrap();
        let grid = pot.grid();
        let r = run_algorithm1(&s0, &s1, pot.delay(), grid).unwrap();
        let err = (r.diagnostics.omega - model.omega).norm();
        prop_assert!(err <= 2e-3 * (1.0 + model.omega.norm()), "fitted {} exact {}", r.diagnostics.omega, model.omega);
    }

    #[test]
    fn more_eigenvalues_reconstruct_better(a in delay(), seed in any::<u64>()) {
        let run = |n_eigen: usize, grid_m: usize| {
            let cfg = RunConfig { n_eigen, grid_m, ..RunConfig::default() };
            let pot = random_smooth(GridSpec::new(grid_m).unwrap(), a, seed, 2.0);
            roundtrip(&cfg, &pot).unwrap().error
        };
        let coarse = run(64, 256);
        let fine = run(128, 512);
        prop_assert!(fine < coarse, "{} then {}", coarse, fine);
    }
}
