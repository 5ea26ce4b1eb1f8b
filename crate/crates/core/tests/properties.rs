mod common;

use common::{pct_du_pipeline_exact, rebalance_ratio_by_hand, rel_err};
use proptest::prelude::*;
use talmud::curves::{
    budget_from_depth, demand_area, demand_price, marginal_slopes, supply_price, CurveAnchor,
};
use talmud::rule::{
    growth_ratio, pct_du_exact, ratio_from_rel_diff, rebalance, rel_diff, target_holdings,
    utility_value, Holdings, UtilityContext, Weights,
};
use talmud::sim::{gen_gbm, gen_zigzag, run_backtest, PricePath, TriggerPolicy};

fn price() -> impl Strategy<Value = f64> {
    (-4.0f64..4.0).prop_map(|e| 10f64.powf(e))
}

fn alpha() -> impl Strategy<Value = f64> {
    0.02f64..0.98
}

fn wealth() -> impl Strategy<Value = f64> {
    (-3.0f64..6.0).prop_map(|e| 10f64.powf(e))
}

fn weights(a: f64) -> Weights<f64> {
    Weights::new(a).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn utility_is_homogeneous(m in wealth(), q in wealth(), p0 in price(), a in alpha(), k in 1e-3f64..1e3) {
        let ctx = UtilityContext::new(p0, weights(a)).unwrap();
        let u = utility_value(&Holdings::new(m, q).unwrap(), &ctx);
        let uk = utility_value(&Holdings::new(k * m, k * q).unwrap(), &ctx);
        prop_assert!(rel_err(uk, k * u) <= 1e-12, "{uk} vs {}", k * u);
    }

    #[test]
    fn utility_of_target_is_the_budget(w in wealth(), p0 in price(), a in alpha()) {
        let ctx = UtilityContext::new(p0, weights(a)).unwrap();
        let h = target_holdings(w, p0, weights(a)).unwrap();
        prop_assert!(rel_err(utility_value(&h, &ctx), w) <= 1e-12);
        prop_assert!(rel_err(h.money_fraction_at(p0), a) <= 1e-12);
    }

    #[test]
    fn utility_constant_along_indifference_curve(m0 in wealth(), q0 in wealth(), p0 in price(), a in alpha(), s in prop::collection::vec(-2.0f64..2.0, 3)) {
        // m^alpha q^beta = const  <=>  (m, q) = (m0 * t^beta, q0 * t^-alpha)
        let ctx = UtilityContext::new(p0, weights(a)).unwrap();
        let base = utility_value(&Holdings::new(m0, q0).unwrap(), &ctx);
        for e in s {
            let t = 10f64.powf(e);
            let h = Holdings::new(m0 * t.powf(1.0 - a), q0 * t.powf(-a)).unwrap();
            prop_assert!(rel_err(utility_value(&h, &ctx), base) <= 1e-12);
        }
    }

    #[test]
    fn growth_ratio_is_at_least_one(p0 in price(), p1 in price(), a in alpha()) {
        let g = growth_ratio(p0, p1, weights(a)).unwrap();
        if p0 == p1 {
            prop_assert_eq!(g, 1.0);
        } else {
            prop_assert!(g > 1.0, "{g}");
        }
    }

    #[test]
    fn simulated_rebalance_matches_growth_ratio(p0 in price(), p1 in price(), a in alpha(), w in wealth()) {
        let g = growth_ratio(p0, p1, weights(a)).unwrap();
        let ctx = UtilityContext::new(p0, weights(a)).unwrap();
        let h0 = target_holdings(w, p0, weights(a)).unwrap();
        let (_, h1) = rebalance(&h0, p1, weights(a), 0.0).unwrap();
        let via_library = utility_value(&h1, &ctx) / utility_value(&h0, &ctx);
        prop_assert!(rel_err(via_library, g) <= 1e-12);
        prop_assert!(rel_err(rebalance_ratio_by_hand(p0, p1, a, w), g) <= 1e-12);
    }

    #[test]
    fn equal_weights_are_direction_symmetric(p0 in price(), p1 in price()) {
        let w = Weights::equal();
        let there = growth_ratio(p0, p1, w).unwrap();
        let back = growth_ratio(p1, p0, w).unwrap();
        prop_assert!(rel_err(there, back) <= 1e-12);
    }

    #[test]
    fn rel_diff_round_trips(d in 0.0f64..1.9) {
        let r = ratio_from_rel_diff(d).unwrap();
        prop_assert!((rel_diff(1.0, r).unwrap() - d).abs() <= 1e-12);
    }

    #[test]
    fn zero_fee_trade_cash_is_exact(m in wealth(), q in wealth(), p in price(), a in alpha()) {
        let (trade, h1) = rebalance(&Holdings::new(m, q).unwrap(), p, weights(a), 0.0).unwrap();
        prop_assert_eq!(trade.delta_m, -(p * trade.delta_q));
        prop_assert_eq!(trade.fee_paid, 0.0);
        prop_assert!(rel_err(h1.money_fraction_at(p), a) <= 1e-9);
    }

    #[test]
    fn depth_budget_round_trip(p0 in price(), q0 in wealth()) {
        let budget = budget_from_depth(p0, q0 / (2.0 * p0)).unwrap();
        prop_assert!(rel_err(budget, 2.0 * p0 * q0) <= 1e-12);
    }

    #[test]
    fn zero_fee_backtests_never_lose_utility(seed in any::<u64>(), sigma in 0.001f64..0.1, threshold in 0.001f64..0.3, a in alpha()) {
        let path = gen_gbm(1.0, 0.0, sigma, 200, seed).unwrap();
        let report = run_backtest(&path, weights(a), TriggerPolicy::new(threshold).unwrap(), 0.0, 1.0).unwrap();
        let mut prev = report.initial_utility;
        for &u in &report.utility_series {
            prop_assert!(u >= prev * (1.0 - 1e-14), "{u} < {prev}");
            prev = u;
        }
        prop_assert!(report.growth_ratio_total >= 1.0 - 1e-13);
    }
}

proptest! {
    #[test]
    fn supply_curve_points_lie_on_the_indifference_curve(p0 in price(), q0 in wealth(), a in alpha(), frac in 0.0f64..0.95) {
        let anchor = CurveAnchor::new(p0, q0, weights(a)).unwrap();
        let qs = frac * q0;
        let ps = supply_price(qs, &anchor).unwrap();
        // holdings on target at p_s
        let q = q0 - qs;
        let m = a / (1.0 - a) * ps * q;
        // compare m^alpha q^beta in log space; a 1e-10 log gap is a 1e-10 relative gap
        let lhs = a * m.ln() + (1.0 - a) * q.ln();
        let rhs = a * anchor.m0().ln() + (1.0 - a) * q0.ln();
        prop_assert!((lhs - rhs).abs() <= 1e-10);
    }

    #[test]
    fn demand_curve_points_lie_on_the_indifference_curve(p0 in price(), q0 in wealth(), a in alpha(), frac in 0.0f64..20.0) {
        let anchor = CurveAnchor::new(p0, q0, weights(a)).unwrap();
        let qd = frac * q0;
        let pd = demand_price(qd, &anchor).unwrap();
        let q = q0 + qd;
        let m = a / (1.0 - a) * pd * q;
        let lhs = a * m.ln() + (1.0 - a) * q.ln();
        let rhs = a * anchor.m0().ln() + (1.0 - a) * q0.ln();
        prop_assert!((lhs - rhs).abs() <= 1e-10);
    }

    #[test]
    fn curves_meet_at_the_anchor(p0 in price(), q0 in wealth(), a in alpha()) {
        let anchor = CurveAnchor::new(p0, q0, weights(a)).unwrap();
        prop_assert_eq!(supply_price(0.0, &anchor).unwrap(), p0);
        prop_assert_eq!(demand_price(0.0, &anchor).unwrap(), p0);
    }

    #[test]
    fn weighted_growth_ratio_is_swap_asymmetric(a in 0.05f64..0.45) {
        for alpha in [a, 1.0 - a] {
            let w = weights(alpha);
            let up = growth_ratio(1.0, 4.0, w).unwrap();
            let down = growth_ratio(4.0, 1.0, w).unwrap();
            prop_assert!((up - down).abs() > 1e-6, "alpha {alpha}: {up} {down}");
        }
    }

    #[test]
    fn fee_lowers_growth_monotonically(seed in any::<u64>()) {
        let path = gen_gbm(1.0, 0.0, 0.02, 300, seed).unwrap();
        let policy = TriggerPolicy::new(0.01).unwrap();
        let mut prev = f64::INFINITY;
        for fee in [0.0, 1e-4, 1e-3, 5e-3, 2e-2] {
            let g = run_backtest(&path, Weights::equal(), policy, fee, 1.0).unwrap().growth_ratio_total;
            prop_assert!(g <= prev, "fee {fee}: {g} > {prev}");
            prev = g;
        }
    }

    #[test]
    fn backtests_are_deterministic(seed in any::<u64>(), fee in 0.0f64..0.01) {
        let run = || {
            let path = gen_gbm(2.0, 0.001, 0.03, 150, seed).unwrap();
            run_backtest(&path, weights(0.4), TriggerPolicy::new(0.02).unwrap(), fee, 3.0).unwrap()
        };
        prop_assert_eq!(run(), run());
    }

    #[test]
    fn untriggered_noise_does_not_change_trades(legs in 1usize..40, d in 0.01f64..0.5, a in alpha(), noise in prop::collection::vec(-0.45f64..0.45, 4)) {
        let clean = gen_zigzag(1.0, d, legs).unwrap();
        // wiggle strictly inside the trigger band around each zigzag point
        let mut noisy = Vec::new();
        for &p in clean.prices() {
            noisy.push(p);
            for &n in &noise {
                noisy.push(p * ratio_from_rel_diff(d * n.abs()).unwrap().powf(n.signum()));
            }
        }
        let noisy = PricePath::new(noisy, "noisy").unwrap();
        let policy = TriggerPolicy::new(d).unwrap();
        let a_report = run_backtest(&clean, weights(a), policy, 0.0, 1.0).unwrap();
        let b_report = run_backtest(&noisy, weights(a), policy, 0.0, 1.0).unwrap();
        prop_assert_eq!(a_report.trade_count, legs);
        prop_assert_eq!(&a_report.trades, &b_report.trades);
        prop_assert_eq!(a_report.growth_ratio_total, b_report.growth_ratio_total);
    }

    #[test]
    fn demand_area_law_random_anchor(p0 in price(), q0 in wealth(), a in 0.1f64..0.9) {
        let area = demand_area(&CurveAnchor::new(p0, q0, weights(a)).unwrap());
        prop_assert!(area.relative_gap() <= 1e-6, "{area:?}");
    }

    #[test]
    fn marginal_slopes_match_finite_differences(p0 in price(), q0 in wealth(), a in alpha()) {
        let anchor = CurveAnchor::new(p0, q0, weights(a)).unwrap();
        let (up, down) = marginal_slopes(&anchor);
        let h = 1e-6 * q0;
        // mirror image: p_s(-x) = p_d(x), so this is a central difference at 0
        let central = (supply_price(h, &anchor).unwrap() - demand_price(h, &anchor).unwrap()) / (2.0 * h);
        prop_assert!(rel_err(central, up) <= 1e-6);
        prop_assert!(rel_err(-central, down) <= 1e-6);
    }
}

#[test]
fn closed_form_matches_exact_pipeline() {
    let mut d: f64 = 1e-4;
    while d <= 1.9 {
        let closed = pct_du_exact(d).unwrap();
        let oracle = pct_du_pipeline_exact(d);
        assert!(
            rel_err(closed, oracle) <= 1e-10,
            "d={d}: {closed:e} vs {oracle:e}"
        );
        d *= 1.07;
    }
    let oracle = pct_du_pipeline_exact(1.9);
    assert!(rel_err(pct_du_exact(1.9).unwrap(), oracle) <= 1e-10);
}

#[test]
fn series_remainder_is_sixth_order() {
    // leading remainder coefficient is 5/2048; 0.003 bounds it on (0, 0.5]
    const C: f64 = 0.003;
    let mut d: f64 = 1e-3;
    while d <= 0.5 {
        let exact = pct_du_exact(d).unwrap();
        let remainder = exact - d * d / 8.0 - d.powi(4) / 64.0;
        assert!(remainder.abs() <= C * d.powi(6), "d={d}: {remainder:e}");
        d *= 1.1;
    }
}

#[test]
fn weighted_zigzag_compounds_both_directions() {
    // alpha != 1/2: up legs and down legs grow by different factors
    let (d, legs) = (0.05, 41);
    for a in [0.2, 0.5, 0.8] {
        let w = weights(a);
        let path = gen_zigzag(3.0, d, legs).unwrap();
        let (p0, p1) = (path.prices()[0], path.prices()[1]);
        let report = run_backtest(&path, w, TriggerPolicy::new(d).unwrap(), 0.0, 1.0).unwrap();
        let up = growth_ratio(p0, p1, w).unwrap();
        let down = growth_ratio(p1, p0, w).unwrap();
        let expected = up.powi(21) * down.powi(20);
        assert!(
            rel_err(report.growth_ratio_total, expected) <= 1e-9,
            "alpha {a}"
        );
    }
}
