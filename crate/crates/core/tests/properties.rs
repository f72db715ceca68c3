mod common;

use std::collections::HashMap;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use weakval_core::ensemble::grid_mean;
use weakval_core::expr::{evaluate, parse, BinOp, Expr};
use weakval_core::extraction::{extract_weak_value, DualExtractor, Extractor};
use weakval_core::numerics::{dual_apply, dual_mul, eigh, mixed_fd, DualBi, Func, Scalar, DEFAULT_STEP};
use weakval_core::pointer::{synthesize_postselected, AvSeries, Scaled};
use weakval_core::quantum::{spectral_coefficients, weak_moment, weak_value_direct, QuantumState};
use weakval_core::scenarios::{preset, preset_names, ScenarioSystem};

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| c(re, im))
}

fn unit_complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| c(re, im))
}

fn dual() -> impl Strategy<Value = DualBi> {
    (complex(), complex(), complex(), complex()).prop_map(|(v, dq, db, dqb)| DualBi::new(v, dq, db, dqb))
}

fn ast() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..1000).prop_map(|k| Expr::Num(k as f64 / 8.0)),
        (1e-6..1e6f64).prop_map(Expr::Num),
        prop::sample::select(vec!["Q", "beta", "alpha", "y", "x_1"]).prop_map(Expr::var),
        Just(Expr::ImagUnit),
        Just(Expr::Pi),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        let ops = prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow]);
        prop_oneof![
            inner.clone().prop_map(Expr::negate),
            (ops, inner.clone(), inner.clone()).prop_map(|(op, l, r)| Expr::binary(op, l, r)),
            (prop::sample::select(Func::ALL.to_vec()), inner).prop_map(|(f, e)| Expr::call(f, e)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn print_parse_round_trip(e in ast()) {
        let printed = e.to_string();
        prop_assert_eq!(parse(&printed).unwrap(), e, "printed as {}", printed);
    }

    #[test]
    fn nilpotent_square(dq in complex(), db in complex()) {
        let x = DualBi::new(c(0.0, 0.0), dq, db, c(0.0, 0.0));
        let sq = dual_mul(x, x);
        prop_assert_eq!(sq.v, c(0.0, 0.0));
        prop_assert_eq!(sq.dq, c(0.0, 0.0));
        prop_assert_eq!(sq.db, c(0.0, 0.0));
        prop_assert!((sq.dqb - dq * db * 2.0).norm() < 1e-14);
    }

    #[test]
    fn product_rule_is_commutative_and_associative(a in dual(), b in dual(), d in dual()) {
        let ab = dual_mul(a, b);
        let ba = dual_mul(b, a);
        prop_assert!((ab.dqb - ba.dqb).norm() < 1e-12 && (ab.v - ba.v).norm() < 1e-12);
        let l = dual_mul(ab, d);
        let r = dual_mul(a, dual_mul(b, d));
        prop_assert!((l.dqb - r.dqb).norm() < 1e-11);
    }

    /// Every primitive: dual mixed derivative of ln f(u(Q, β)) against the stencil.
    #[test]
    fn autodiff_matches_finite_differences(
        f in prop::sample::select(Func::ALL.to_vec()),
        x0 in (0.3..2.5f64, -0.3..0.3f64),
        p in unit_complex(), r in unit_complex(), s in unit_complex(),
    ) {
        let base = c(x0.0, x0.1);
        // Keep ln f well conditioned so the stencil's h^2 error stays small.
        let f0 = f.value(base).unwrap().norm();
        prop_assume!((0.5..=2.0).contains(&f0));
        let u = |q: DualBi, b: DualBi| DualBi::from_complex(base) + q.scale(p) + b.scale(r) + (q * b).scale(s);
        let dual_val = dual_apply(Func::Ln, dual_apply(f, u(DualBi::seed_q(c(0.0, 0.0)), DualBi::seed_beta(c(0.0, 0.0)))).unwrap()).unwrap().dqb;
        let fd = mixed_fd(|q, b| f.value(base + q * p + b * r + q * b * s), DEFAULT_STEP, DEFAULT_STEP).unwrap();
        prop_assert!((dual_val - fd).norm() <= 1e-6 * (1.0 + dual_val.norm()), "{:?}: {} vs {}", f, dual_val, fd);
    }

    #[test]
    fn eigh_reconstructs(seed in any::<u64>(), dim in 1usize..9) {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let m = random_hermitian(&mut rng, dim);
        let eig = eigh(&m).unwrap();
        prop_assert!(frobenius_diff(&eig.reconstruct(), m.entries()) <= 1e-9);
    }

    #[test]
    fn weak_value_is_linear_in_the_observable(seed in any::<u64>(), alpha in -3.0..3.0f64, gamma in -3.0..3.0f64) {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let pre = random_state(&mut rng, 3);
        let post = post_with_overlap(&mut rng, &pre, 0.3);
        let a = random_observable(&mut rng, 3, 2.0);
        let b = random_observable(&mut rng, 3, 1.0);
        let combo = weakval_core::quantum::Observable::new(a.matrix().combine(alpha, b.matrix(), gamma).unwrap()).unwrap();
        let lhs = weak_value_direct(&pre, &post, &combo).unwrap().value;
        let rhs = weak_value_direct(&pre, &post, &a).unwrap().value * alpha + weak_value_direct(&pre, &post, &b).unwrap().value * gamma;
        prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn eigenstate_collapse(seed in any::<u64>(), k in 0usize..4) {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let obs = random_observable(&mut rng, 4, 3.0);
        let pre = QuantumState::new(obs.eigen().vectors[k].clone()).unwrap();
        let post = post_with_overlap(&mut rng, &pre, 0.5);
        let wv = weak_value_direct(&pre, &post, &obs).unwrap().value;
        prop_assert!((wv - obs.eigen().values[k]).norm() < 1e-12);
    }

    #[test]
    fn spectral_consistency(seed in any::<u64>(), n in 0u32..8) {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let obs = random_observable(&mut rng, 4, 1.5);
        let pre = random_state(&mut rng, 4);
        let post = post_with_overlap(&mut rng, &pre, 0.4);
        let overlap = weakval_core::quantum::inner(&post, &pre).unwrap();
        let weights: Vec<(f64, Complex64)> = spectral_coefficients(&pre, &post, &obs).unwrap()
            .into_iter().map(|(l, a)| (l, a / overlap)).collect();
        let total: Complex64 = weights.iter().map(|(_, w)| w).sum();
        prop_assert!((total - 1.0).norm() < 1e-12);
        let via_weights: Complex64 = weights.iter().map(|(l, w)| w * l.powi(n as i32)).sum();
        // Independent route: repeated matrix products.
        let mut v = pre.amplitudes().to_vec();
        for _ in 0..n {
            v = obs.matrix().mul_vec(&v).unwrap();
        }
        let direct: Complex64 = post.amplitudes().iter().zip(&v).map(|(a, b)| a.conj() * b).sum::<Complex64>() / overlap;
        prop_assert!((via_weights - direct).norm() < 1e-10 * (1.0 + direct.norm()));
        prop_assert!((weak_moment(&pre, &post, &obs, n).unwrap() - via_weights).norm() < 1e-12 * (1.0 + direct.norm()));
    }

    /// Mixed log-derivative of the synthesized pointer equals the direct ratio.
    #[test]
    fn exactness_anchor(seed in any::<u64>(), dim in 2usize..7, beta in 0.01..5.0f64) {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let obs = random_observable(&mut rng, dim, 3.0);
        let pre = random_state(&mut rng, dim);
        let post = post_with_overlap(&mut rng, &pre, 0.05);
        let direct = weak_value_direct(&pre, &post, &obs).unwrap().value;
        let wave = synthesize_postselected(&pre, &post, &obs, beta).unwrap();
        let extracted = DualExtractor.extract(&wave).unwrap();
        prop_assert!((extracted - direct).norm() <= 1e-10 * direct.norm().max(1.0));
    }

    #[test]
    fn proportionality_freedom(seed in any::<u64>(), mag in 1e-3..1e3f64, arg in 0.0..std::f64::consts::TAU) {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let obs = random_observable(&mut rng, 3, 2.0);
        let pre = random_state(&mut rng, 3);
        let post = post_with_overlap(&mut rng, &pre, 0.2);
        let wave = synthesize_postselected(&pre, &post, &obs, 1.0).unwrap();
        let factor = Complex64::from_polar(mag, arg);
        let base = DualExtractor.extract(&wave).unwrap();
        prop_assert!((DualExtractor.extract(&wave.scaled(factor)).unwrap() - base).norm() <= 1e-12 * (1.0 + base.norm()));
        let wrapped = Scaled { inner: wave, factor };
        let via_wrapper = DualExtractor.extract(&wrapped).unwrap();
        prop_assert!((via_wrapper - base).norm() <= 1e-12 * (1.0 + base.norm()));
    }

    /// Zero infinitesimal seeds reproduce complex evaluation exactly.
    #[test]
    fn algebra_coherence(e in ast(), vals in prop::collection::vec(complex(), 5)) {
        let names = ["Q", "beta", "alpha", "y", "x_1"];
        let cmap: HashMap<String, Complex64> = names.iter().zip(&vals).map(|(n, v)| (n.to_string(), *v)).collect();
        let dmap: HashMap<String, DualBi> = cmap.iter().map(|(k, v)| (k.clone(), DualBi::constant(*v))).collect();
        let plain = evaluate(&e, &cmap);
        let lifted = evaluate(&e, &dmap);
        match (plain, lifted) {
            (Ok(p), Ok(d)) => {
                prop_assert!(p == d.v || (p.re.is_nan() || p.im.is_nan()), "{} vs {}", p, d.v);
                prop_assert_eq!(d.dq, c(0.0, 0.0));
            }
            (Err(_), Err(_)) => {}
            // The dual algebra additionally rejects derivatives that do not
            // exist (sqrt at 0), which complex evaluation never needs.
            (Ok(_), Err(_)) => {}
            (Err(a), Ok(_)) => prop_assert!(false, "complex failed but dual succeeded: {}", a),
        }
    }
}

#[test]
fn series_corrections_vanish_with_beta() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(9);
    let obs = random_observable(&mut rng, 3, 2.0);
    let pre = random_state(&mut rng, 3);
    let post = post_with_overlap(&mut rng, &pre, 0.3);
    let s = AvSeries::new(&pre, &post, &obs, 2).unwrap();
    let q = 1.3;
    let small = s.term(2, 1e-6, q).norm();
    let smaller = s.term(2, 1e-8, q).norm();
    // The n = 2 term is linear in beta near zero.
    assert!((small / smaller - 100.0).abs() < 1e-2, "{small} {smaller}");
}

#[test]
fn weak_regime_grid_mean_tracks_real_weak_value() {
    for name in preset_names() {
        let scenario = preset(name).unwrap();
        let ScenarioSystem::Matrix(m) = scenario.system().unwrap() else { continue };
        let wv = weak_value_direct(&m.pre, &m.post, &m.obs).unwrap().value;
        let rho = m.obs.spectral_radius();
        let beta = if rho > 0.0 { 1e-3 / (rho * rho) } else { 1e-3 };
        let wave = synthesize_postselected(&m.pre, &m.post, &m.obs, beta).unwrap();
        let mean = grid_mean(&wave, wave.default_grid().unwrap()).unwrap();
        assert!((mean - wv.re).abs() <= 0.05 * wv.norm(), "{name}: mean {mean} vs Re C_w {}", wv.re);
    }
}

#[test]
fn method_agreement_on_presets() {
    for name in preset_names() {
        let scenario = preset(name).unwrap();
        let r = match scenario.system().unwrap() {
            ScenarioSystem::Matrix(m) => {
                extract_weak_value(&synthesize_postselected(&m.pre, &m.post, &m.obs, scenario.beta).unwrap()).unwrap()
            }
            ScenarioSystem::Expression(w) => extract_weak_value(&w).unwrap(),
        };
        assert!(r.cross_check_delta.unwrap() <= 1e-6, "{name}: {r:?}");
        assert!(r.consistent);
    }
}
