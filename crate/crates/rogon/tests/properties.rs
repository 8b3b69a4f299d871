//! Property-based invariants: modulus symmetries of the closed forms over
//! randomized valid parameters, pricing monotonicity/bounds, parameter
//! rejection totality, and config round-tripping.

use proptest::prelude::*;
use rogon::config::{parse_config, serialize_config};
use rogon::params::MarketParams;
use rogon::rogons::SolutionKind;
use rogon::{bs_call_price, bs_put_price, put_call_parity_gap, BsParams};

/// Valid model parameters: sigma*beta > 0 (either sign pair), alpha != 0.
fn valid_params() -> impl Strategy<Value = MarketParams> {
    (
        0.05f64..3.0,
        0.005f64..1.0,
        prop::bool::ANY,
        (0.2f64..3.0).prop_flat_map(|a| prop_oneof![Just(a), Just(-a)]),
        -3.0f64..3.0,
    )
        .prop_map(|(sigma, beta, flip, alpha, k)| {
            // Flip both signs together to stay focusing.
            let (s, b) = if flip { (-sigma, -beta) } else { (sigma, beta) };
            MarketParams::new(s, b, alpha, k).unwrap()
        })
}

/// Both localized solutions.
fn rogon_kind() -> impl Strategy<Value = SolutionKind> {
    prop_oneof![Just(SolutionKind::Rogon1), Just(SolutionKind::Rogon2)]
}

/// Mixed absolute/relative tolerance: the moduli range up to 5|A| which can
/// reach O(100) at the strategy's edges.
fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    /// |psi| is even in the comoving offset about the drift center sigma*k*t.
    #[test]
    fn comoving_evenness(p in valid_params(), kind in rogon_kind(),
                         xi in -30.0f64..30.0, t in -5.0f64..5.0) {
        let center = p.sigma() * p.k() * t;
        let plus = kind.sample(&p, center + xi, t).unwrap().norm();
        let minus = kind.sample(&p, center - xi, t).unwrap().norm();
        prop_assert!(close(plus, minus), "plus={plus}, minus={minus}");
    }

    /// At k = 0 the modulus is even in time.
    #[test]
    fn time_evenness_at_rest(p in valid_params(), kind in rogon_kind(),
                             s in -30.0f64..30.0, t in -5.0f64..5.0) {
        let rest = MarketParams::new(p.sigma(), p.beta(), p.alpha(), 0.0).unwrap();
        let fwd = kind.sample(&rest, s, t).unwrap().norm();
        let bwd = kind.sample(&rest, s, -t).unwrap().norm();
        prop_assert!(close(fwd, bwd), "fwd={fwd}, bwd={bwd}");
    }

    /// Boosting the gauge k only drifts the modulus: |psi_k(s, t)| equals
    /// |psi_0(s - sigma k t, t)|.
    #[test]
    fn galilean_boost_modulus(p in valid_params(), kind in rogon_kind(),
                              s in -30.0f64..30.0, t in -5.0f64..5.0) {
        let rest = MarketParams::new(p.sigma(), p.beta(), p.alpha(), 0.0).unwrap();
        let moving = kind.sample(&p, s, t).unwrap().norm();
        let comoving = kind.sample(&rest, s - p.sigma() * p.k() * t, t).unwrap().norm();
        prop_assert!(close(moving, comoving), "moving={moving}, comoving={comoving}");
    }

    /// Nonfocusing sign combinations are rejected, always.
    #[test]
    fn nonfocusing_parameters_rejected(sigma in -3.0f64..3.0, beta in -1.0f64..1.0,
                                       alpha in 0.2f64..3.0, k in -3.0f64..3.0) {
        let result = MarketParams::new(sigma, beta, alpha, k);
        if sigma * beta > 0.0 {
            prop_assert!(result.is_ok());
        } else {
            prop_assert!(result.is_err());
        }
    }

    /// Call prices are nondecreasing in spot and pinned inside the rational
    /// no-arbitrage envelope; parity holds pointwise.
    #[test]
    fn pricing_bounds_and_parity(s in 1.0f64..500.0, bump in 0.01f64..50.0,
                                 strike in 20.0f64..300.0, r in -0.02f64..0.12,
                                 sigma in 0.05f64..0.8, tau in 0.0f64..3.0) {
        let bp = BsParams::new(r, sigma, strike, tau).unwrap();
        let c = bs_call_price(s, &bp).unwrap();
        let c_up = bs_call_price(s + bump, &bp).unwrap();
        prop_assert!(c_up >= c - 1e-10, "call not monotone: {c} -> {c_up}");

        let disc_strike = strike * (-r * tau).exp();
        prop_assert!(c >= (s - disc_strike).max(0.0) - 1e-9, "call below envelope: {c}");
        prop_assert!(c <= s + 1e-9, "call above spot: {c}");

        let put = bs_put_price(s, &bp).unwrap();
        prop_assert!(put >= (disc_strike - s).max(0.0) - 1e-9, "put below envelope: {put}");
        prop_assert!(put <= disc_strike + 1e-9, "put above discounted strike: {put}");

        prop_assert!(put_call_parity_gap(s, &bp).unwrap() <= 1e-12);
    }

    /// Field-kind configs round-trip: parse(serialize(cfg)) == cfg.
    #[test]
    fn config_roundtrip(p in valid_params(), n_s in 1usize..512, n_t in 1usize..64,
                        half_width in 1.0f64..100.0, t_max in 0.1f64..10.0,
                        kind_idx in 0usize..3) {
        let kind = ["plane", "rogon1", "rogon2"][kind_idx];
        let text = format!(
            "solution = {kind}\n\
             params.sigma = {}\nparams.beta = {}\nparams.alpha = {}\nparams.k = {}\n\
             grid.s_min = {}\ngrid.s_max = {half_width}\ngrid.n_s = {n_s}\n\
             grid.t_min = {}\ngrid.t_max = {t_max}\ngrid.n_t = {n_t}\n",
            p.sigma(), p.beta(), p.alpha(), p.k(), -half_width, -t_max,
        );
        let cfg = parse_config(&text).unwrap();
        let canonical = serialize_config(&cfg);
        let reparsed = parse_config(&canonical).unwrap();
        prop_assert_eq!(&cfg, &reparsed);
        // Serialization is a fixed point.
        prop_assert_eq!(canonical.clone(), serialize_config(&reparsed));
    }
}
