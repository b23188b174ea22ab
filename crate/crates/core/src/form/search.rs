use super::RosenblattChain;
use crate::error::{Error, Result};
use crate::numeric::normal::norm_sf;
use crate::numeric::optimize::golden_section;
use serde::{Deserialize, Serialize};
use std::fmt;

const MAX_ITER: usize = 200;
const G_TOL: f64 = 1e-6;
const ANGLE_TOL: f64 = 1e-4;
const STEP_TOL: f64 = 1e-10;
const GRAD_REL_STEP: f64 = 1e-6;

type Evaluator = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Safety margin: failure iff `g ≤ 0`.
pub struct LimitState {
    dim: usize,
    physical: bool,
    g: Evaluator,
}

impl fmt::Debug for LimitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LimitState").field("dim", &self.dim).field("physical", &self.physical).finish()
    }
}

impl LimitState {
    /// `g_U(u)` given directly in standard-normal space.
    pub fn standard(dim: usize, g: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self { dim, physical: false, g: Box::new(g) }
    }

    /// `g(x)` in physical space; needs a chain to evaluate `g_U`.
    pub fn physical(dim: usize, g: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self { dim, physical: true, g: Box::new(g) }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    fn to_physical(&self, chain: Option<&RosenblattChain>, u: &[f64]) -> Result<Vec<f64>> {
        match chain {
            Some(c) => c.inverse(u),
            None if self.physical => Err(Error::invalid("physical-space limit state needs a Rosenblatt chain")),
            None => Ok(u.to_vec()),
        }
    }

    /// `g_U(u)`.
    pub fn eval_u(&self, chain: Option<&RosenblattChain>, u: &[f64]) -> Result<f64> {
        let v = if self.physical {
            let x = self.to_physical(chain, u)?;
            (self.g)(&x)
        } else {
            (self.g)(u)
        };
        if v.is_nan() {
            return Err(Error::Numerical("limit state returned NaN".into()));
        }
        Ok(v)
    }

    fn check(&self, chain: Option<&RosenblattChain>) -> Result<()> {
        if let Some(c) = chain {
            if c.dimension() != self.dim {
                return Err(Error::invalid(format!("chain dimension {} vs limit state {}", c.dimension(), self.dim)));
            }
        } else if self.physical {
            return Err(Error::invalid("physical-space limit state needs a Rosenblatt chain"));
        }
        Ok(())
    }
}

/// Most probable point and reliability index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormResult {
    pub u_star: Vec<f64>,
    pub x_star: Vec<f64>,
    pub beta: f64,
    pub p_f: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// `p_F = 1 − Φ(β)`.
pub fn failure_probability(beta: f64) -> Result<f64> {
    if !(beta >= 0.0) {
        return Err(Error::invalid(format!("reliability index must be non-negative, got {beta}")));
    }
    Ok(norm_sf(beta))
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gradient(ls: &LimitState, chain: Option<&RosenblattChain>, u: &[f64]) -> Result<Vec<f64>> {
    let mut grad = vec![0.0; u.len()];
    let mut p = u.to_vec();
    for j in 0..u.len() {
        let h = GRAD_REL_STEP * u[j].abs().max(1.0);
        p[j] = u[j] + h;
        let fp = ls.eval_u(chain, &p)?;
        p[j] = u[j] - h;
        let fm = ls.eval_u(chain, &p)?;
        p[j] = u[j];
        grad[j] = (fp - fm) / (2.0 * h);
    }
    Ok(grad)
}

/// Angle between `u` and `−∇g`.
fn stationarity_angle(u: &[f64], grad: &[f64]) -> f64 {
    let nu = norm(u);
    let ng = norm(grad);
    if nu == 0.0 || ng == 0.0 {
        return std::f64::consts::PI;
    }
    let c = (-dot(u, grad) / (nu * ng)).clamp(-1.0, 1.0);
    // 2·asin(|a − b|/2) keeps resolution near zero where acos does not
    let diff: f64 = u.iter().zip(grad).map(|(a, g)| (a / nu + g / ng).powi(2)).sum::<f64>().sqrt();
    if c > 0.0 { 2.0 * (diff / 2.0).min(1.0).asin() } else { c.acos() }
}

/// Hasofer–Lind–Rackwitz–Fiessler search for the most probable failure point.
///
/// Each step moves towards the HL-RF update `[(∇g·u − g)/‖∇g‖²]∇g`, halving
/// the step until the merit `½‖u‖² + c|g|` decreases. Gradients are central
/// differences. Hitting the iteration cap returns the best iterate with
/// `converged = false`.
pub fn form_search(ls: &LimitState, chain: Option<&RosenblattChain>, start: &[f64]) -> Result<FormResult> {
    ls.check(chain)?;
    if start.len() != ls.dim {
        return Err(Error::invalid("start point has wrong dimension"));
    }
    let origin = vec![0.0; ls.dim];
    let g0 = ls.eval_u(chain, &origin)?;
    if g0 <= 0.0 {
        return Err(Error::invalid("origin lies in the failure domain (g_U(0) ≤ 0)"));
    }

    let mut u = start.to_vec();
    let mut g = ls.eval_u(chain, &u)?;
    let mut converged = false;
    let mut iterations = 0;
    let mut last_step = f64::INFINITY;

    for it in 0..MAX_ITER {
        iterations = it + 1;
        let grad = gradient(ls, chain, &u)?;
        let gn2 = dot(&grad, &grad);
        if !(gn2 > 0.0) {
            return Err(Error::Numerical("vanishing limit-state gradient".into()));
        }
        if g.abs() < G_TOL && last_step < STEP_TOL * norm(&u).max(1.0) && stationarity_angle(&u, &grad) < ANGLE_TOL {
            converged = true;
            break;
        }
        let scale = (dot(&grad, &u) - g) / gn2;
        let target: Vec<f64> = grad.iter().map(|v| scale * v).collect();
        let dir: Vec<f64> = target.iter().zip(&u).map(|(t, a)| t - a).collect();

        let c = 2.0 * norm(&u).max(norm(&target)) / gn2.sqrt() + 10.0;
        let merit = |p: &[f64], gp: f64| 0.5 * dot(p, p) + c * gp.abs();
        let m0 = merit(&u, g);
        let mut lambda = 1.0;
        let (mut cand, mut g_cand);
        loop {
            cand = u.iter().zip(&dir).map(|(a, d)| a + lambda * d).collect::<Vec<f64>>();
            g_cand = ls.eval_u(chain, &cand)?;
            if merit(&cand, g_cand) <= m0 || lambda < 1e-8 {
                break;
            }
            lambda *= 0.5;
        }
        last_step = norm(&dir) * lambda;
        u = cand;
        g = g_cand;
    }

    let beta = norm(&u);
    let x_star = ls.to_physical(chain, &u)?;
    Ok(FormResult { p_f: norm_sf(beta), beta, x_star, u_star: u, iterations, converged })
}

/// Design point on the sphere `‖u‖ = β` minimising `g_U`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignPoint {
    pub u: Vec<f64>,
    pub x: Vec<f64>,
    pub g: f64,
    pub converged: bool,
}

const ANGLE_SCAN: usize = 3600;
// Differences in g_U below this (relative) count as ties, resolved to the smaller angle.
const TIE_TOL: f64 = 1e-13;

/// Minimise `g_U` over the sphere of radius `beta` (inverse FORM).
///
/// In two dimensions a uniform angular scan is refined by golden-section
/// search; exact ties keep the smallest angle. Higher dimensions use projected
/// gradient descent from the ± coordinate directions and keep the best result.
pub fn inverse_form_design_point(ls: &LimitState, chain: Option<&RosenblattChain>, beta: f64) -> Result<DesignPoint> {
    ls.check(chain)?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::invalid(format!("beta must be positive, got {beta}")));
    }
    let (u, g, converged) = match ls.dim {
        0 => return Err(Error::invalid("zero-dimensional limit state")),
        1 => {
            let gp = ls.eval_u(chain, &[beta])?;
            let gm = ls.eval_u(chain, &[-beta])?;
            if gm < gp { (vec![-beta], gm, true) } else { (vec![beta], gp, true) }
        }
        2 => design_point_2d(ls, chain, beta)?,
        _ => design_point_nd(ls, chain, beta)?,
    };
    let x = ls.to_physical(chain, &u)?;
    Ok(DesignPoint { u, x, g, converged })
}

fn design_point_2d(ls: &LimitState, chain: Option<&RosenblattChain>, beta: f64) -> Result<(Vec<f64>, f64, bool)> {
    let at = |th: f64| -> Result<f64> { ls.eval_u(chain, &[beta * th.cos(), beta * th.sin()]) };
    let dth = std::f64::consts::TAU / ANGLE_SCAN as f64;
    let mut best_i = 0;
    let mut best_g = at(0.0)?;
    for i in 1..ANGLE_SCAN {
        let g = at(i as f64 * dth)?;
        if g < best_g - TIE_TOL * best_g.abs().max(1.0) {
            best_g = g;
            best_i = i;
        }
    }
    let th0 = best_i as f64 * dth;
    let th_ref = golden_section(|th| at(th).unwrap_or(f64::INFINITY), th0 - dth, th0 + dth, 1e-14);
    let g_ref = at(th_ref)?;
    let (th, g) = if g_ref < best_g - TIE_TOL * best_g.abs().max(1.0) { (th_ref, g_ref) } else { (th0, best_g) };
    let th = th.rem_euclid(std::f64::consts::TAU);
    Ok((vec![beta * th.cos(), beta * th.sin()], g, true))
}

fn design_point_nd(ls: &LimitState, chain: Option<&RosenblattChain>, beta: f64) -> Result<(Vec<f64>, f64, bool)> {
    let d = ls.dim;
    let mut best: Option<(Vec<f64>, f64, bool)> = None;
    for start in 0..2 * d {
        let mut u = vec![0.0; d];
        u[start / 2] = if start % 2 == 0 { beta } else { -beta };
        let mut g = ls.eval_u(chain, &u)?;
        let mut step = 0.1 * beta;
        let mut converged = false;
        for _ in 0..500 {
            let grad = gradient(ls, chain, &u)?;
            // tangential component of the gradient
            let radial = dot(&grad, &u) / (beta * beta);
            let tang: Vec<f64> = grad.iter().zip(&u).map(|(gr, ui)| gr - radial * ui).collect();
            let tn = norm(&tang);
            if tn < 1e-12 {
                converged = true;
                break;
            }
            let mut moved = false;
            while step > 1e-12 * beta {
                let cand: Vec<f64> = u.iter().zip(&tang).map(|(ui, t)| ui - step * t / tn).collect();
                let scale = beta / norm(&cand);
                let cand: Vec<f64> = cand.iter().map(|c| c * scale).collect();
                let gc = ls.eval_u(chain, &cand)?;
                if gc < g {
                    u = cand;
                    g = gc;
                    step *= 1.5;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if !moved {
                converged = true;
                break;
            }
        }
        if best.as_ref().is_none_or(|b| g < b.1) {
            best = Some((u, g, converged));
        }
    }
    best.ok_or_else(|| Error::NonConvergence("no design point candidate".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_closed_form() {
        let ls = LimitState::standard(2, |u| 3.0 - u[0]);
        let r = form_search(&ls, None, &[0.0, 0.0]).unwrap();
        assert!(r.converged);
        assert!((r.beta - 3.0).abs() < 1e-10);
        assert!((r.p_f - 1.349_898_031_630_094_6e-3).abs() < 1e-10);
        assert!(r.u_star[1].abs() < 1e-10);
    }

    #[test]
    fn origin_in_failure_rejected() {
        let ls = LimitState::standard(2, |u| -1.0 - u[0]);
        assert!(form_search(&ls, None, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn physical_needs_chain() {
        let ls = LimitState::physical(2, |x| 3.0 - x[0]);
        assert!(form_search(&ls, None, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn failure_probability_domain() {
        assert_eq!(failure_probability(0.0).unwrap(), 0.5);
        assert!(failure_probability(-0.1).is_err());
    }

    #[test]
    fn inverse_form_linear_and_symmetric() {
        let ls = LimitState::standard(2, |u| 5.0 - u[0]);
        let d = inverse_form_design_point(&ls, None, 2.0).unwrap();
        assert!((d.u[0] - 2.0).abs() < 1e-9 && d.u[1].abs() < 1e-6, "{:?}", d.u);
        let radial = LimitState::standard(2, |u| 9.0 - u[0] * u[0] - u[1] * u[1]);
        let d = inverse_form_design_point(&radial, None, 2.0).unwrap();
        assert_eq!(d.u, vec![2.0, 0.0]);
    }

    #[test]
    fn inverse_form_three_dimensions() {
        let ls = LimitState::standard(3, |u| 10.0 - u[0] - 2.0 * u[1] + u[2]);
        let d = inverse_form_design_point(&ls, None, 3.0).unwrap();
        let n = 6f64.sqrt();
        let expect = [3.0 / n, 6.0 / n, -3.0 / n];
        for (a, b) in d.u.iter().zip(expect) {
            assert!((a - b).abs() < 1e-5, "{:?}", d.u);
        }
    }
}
