mod common;

use common::*;
use metocean_joint::form::*;
use metocean_joint::models::hn_rosenblatt_chain;

#[test]
fn linear_limit_state_closed_form() {
    let r = form_search(&LimitState::standard(2, |u| 3.0 - u[0]), None, &[0.0, 0.0]).unwrap();
    assert!((r.beta - 3.0).abs() < 1e-10);
    assert!((r.p_f - phi(-3.0)).abs() < 1e-10);
    let r = form_search(&LimitState::standard(2, |u| 6.0 - u[0] - u[1]), None, &[0.0, 0.0]).unwrap();
    assert!((r.beta - 6.0 / 2f64.sqrt()).abs() < 1e-8);
    assert!((r.u_star[0] - r.u_star[1]).abs() < 1e-8);
}

/// Smallest radius over 10^6 rays of the first root of `4 − u₁ − 0.1u₂² = 0`.
fn quadratic_oracle() -> f64 {
    let n = 1_000_000;
    let mut best = f64::INFINITY;
    for i in 0..n {
        let th = std::f64::consts::TAU * i as f64 / n as f64;
        let (c, s) = (th.cos(), th.sin());
        let a = 0.1 * s * s;
        let r = if a < 1e-15 {
            if c > 0.0 { 4.0 / c } else { f64::INFINITY }
        } else {
            (-c + (c * c + 16.0 * a).sqrt()) / (2.0 * a)
        };
        best = best.min(r);
    }
    best
}

#[test]
fn quadratic_limit_state_matches_polar_oracle() {
    let r = form_search(&LimitState::standard(2, |u| 4.0 - u[0] - 0.1 * u[1] * u[1]), None, &[0.0, 0.1]).unwrap();
    let oracle = quadratic_oracle();
    assert!((r.beta - oracle).abs() < 1e-3, "{} {oracle}", r.beta);
}

#[test]
fn physical_normal_margin() {
    // R − S with R ~ N(10, 1), S ~ N(5, 2): β = 5/√5
    let chain = RosenblattChain::new().with_stage(Normal { mean: 10.0, sd: 1.0 }).with_stage(Normal { mean: 5.0, sd: 2.0 });
    let r = form_search(&LimitState::physical(2, |x| x[0] - x[1]), Some(&chain), &[0.0, 0.0]).unwrap();
    assert!((r.beta - 5f64.sqrt()).abs() < 1e-8);
    assert!((r.x_star[0] - r.x_star[1]).abs() < 1e-6);
}

#[test]
fn chain_roundtrip() {
    let chain = hn_rosenblatt_chain(&demo_hn()).unwrap();
    for u in [[0.0, 0.0], [3.0, -2.0], [-2.5, 4.0], [4.5, 4.5]] {
        let x = chain.inverse(&u).unwrap();
        let back = chain.forward(&x).unwrap();
        assert!((back[0] - u[0]).abs() < 1e-8 && (back[1] - u[1]).abs() < 1e-8, "{u:?} {back:?}");
    }
}

#[test]
fn contour_theta_zero_is_weibull_quantile() {
    let chain = hn_rosenblatt_chain(&demo_hn()).unwrap();
    for t in [10.0, 100.0, 1000.0] {
        let c = environmental_contour(&chain, t, 2922.0, 360).unwrap();
        let expected = 2.5 * (t * 2922.0f64).ln().powf(1.0 / 1.5);
        assert!((c.points[0][0] - expected).abs() < 1e-6, "{t}: {} {expected}", c.points[0][0]);
    }
}

#[test]
fn contours_nest() {
    let chain = hn_rosenblatt_chain(&demo_hn()).unwrap();
    let cs: Vec<_> = [10.0, 100.0, 1000.0].iter().map(|&t| environmental_contour(&chain, t, 2922.0, 360).unwrap()).collect();
    for w in cs.windows(2) {
        for p in &w[0].points {
            assert!(inside(*p, &w[1].points));
        }
    }
    assert!(check_nesting(&cs).is_ok());
}

#[test]
fn inverse_form_on_contour_radius() {
    let chain = hn_rosenblatt_chain(&demo_hn()).unwrap();
    let ls = LimitState::physical(2, |x| -x[0]);
    let d = inverse_form_design_point(&ls, Some(&chain), 4.0).unwrap();
    assert!(((d.u[0] * d.u[0] + d.u[1] * d.u[1]).sqrt() - 4.0).abs() < 1e-9);
    // maximum Hs on the sphere sits at u₂ = 0
    assert!(d.u[1].abs() < 1e-4 && d.u[0] > 0.0, "{:?}", d.u);
}

#[test]
fn small_contour_is_rejected() {
    let chain = hn_rosenblatt_chain(&demo_hn()).unwrap();
    assert!(environmental_contour(&chain, 10.0, 2922.0, 7).is_err());
    assert!(environmental_contour(&chain, 1e-4, 2922.0, 8).is_err());
}
