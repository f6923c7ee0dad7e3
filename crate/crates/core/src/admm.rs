//! Sparse reconstruction of one element by ADMM.
//!
//! Minimizes `||L v||_1 + (mu/2) ||v - u||_2^2` through the splitting
//! `g = L v` with multipliers `sigma` (for `L v = g`) and `delta` (for
//! `v = u`). The `g` step is an exact soft threshold; the `v` step is a fixed
//! step gradient descent on the augmented objective.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pa::PaMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmmParams {
    pub mu: f64,
    pub beta: f64,
    pub alpha: f64,
    pub tol: f64,
    pub outer_iters: usize,
    pub inner_max: usize,
}

impl Default for AdmmParams {
    fn default() -> Self {
        Self {
            mu: 2.0 / 4e2,
            beta: 20.0,
            alpha: 1e-4,
            tol: 1e-3,
            outer_iters: 400,
            inner_max: 50,
        }
    }
}

impl AdmmParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("mu", self.mu),
            ("beta", self.beta),
            ("alpha", self.alpha),
            ("tol", self.tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidAdmmParam(name));
            }
        }
        if self.inner_max < 1 {
            return Err(Error::InvalidAdmmParam("inner_max"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmmState {
    pub v: Vec<f64>,
    pub g: Vec<f64>,
    pub sigma: Vec<f64>,
    pub delta: Vec<f64>,
}

impl AdmmState {
    /// Warm start at the data: `v = u`, `g = L u`, zero multipliers.
    pub fn warm_start(data: &[f64], pa: &PaMatrix) -> Self {
        let mut g = vec![0.0; pa.rows()];
        pa.apply_into(data, &mut g);
        Self {
            v: data.to_vec(),
            g,
            sigma: vec![0.0; pa.rows()],
            delta: vec![0.0; pa.cols()],
        }
    }
}

/// Soft threshold `sign(x) max(|x| - gamma, 0)`, with `shrink(0, gamma) = 0`.
pub fn shrink(x: f64, gamma: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    x.signum() * (x.abs() - gamma).max(0.0)
}

/// Augmented objective `J_{sigma,delta}(v, g)`.
pub fn objective(state: &AdmmState, data: &[f64], pa: &PaMatrix, params: &AdmmParams) -> f64 {
    let mut lv = vec![0.0; pa.rows()];
    pa.apply_into(&state.v, &mut lv);
    let g1: f64 = state.g.iter().map(|x| x.abs()).sum();
    let mut fid = 0.0;
    let mut lin_delta = 0.0;
    for ((v, u), d) in state.v.iter().zip(data).zip(&state.delta) {
        fid += (v - u) * (v - u);
        lin_delta += (v - u) * d;
    }
    let mut aug = 0.0;
    let mut lin_sigma = 0.0;
    for ((l, g), s) in lv.iter().zip(&state.g).zip(&state.sigma) {
        aug += (l - g) * (l - g);
        lin_sigma += (l - g) * s;
    }
    g1 + 0.5 * params.mu * fid + 0.5 * params.beta * aug - lin_sigma - lin_delta
}

/// Gradient of `J` in `v`: `mu (v - u) + beta L^T (L v - g) - L^T sigma - delta`.
pub fn objective_gradient(
    state: &AdmmState,
    data: &[f64],
    pa: &PaMatrix,
    params: &AdmmParams,
) -> Vec<f64> {
    let mut ws = Workspace::new(pa);
    let mut grad = vec![0.0; pa.cols()];
    gradient_into(
        &state.v,
        &state.g,
        &state.sigma,
        &state.delta,
        data,
        pa,
        params,
        &mut ws,
        &mut grad,
    );
    grad
}

struct Workspace {
    lv: Vec<f64>,
    resid: Vec<f64>,
    back: Vec<f64>,
}

impl Workspace {
    fn new(pa: &PaMatrix) -> Self {
        Self {
            lv: vec![0.0; pa.rows()],
            resid: vec![0.0; pa.rows()],
            back: vec![0.0; pa.cols()],
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn gradient_into(
    v: &[f64],
    g: &[f64],
    sigma: &[f64],
    delta: &[f64],
    data: &[f64],
    pa: &PaMatrix,
    params: &AdmmParams,
    ws: &mut Workspace,
    grad: &mut [f64],
) {
    pa.apply_into(v, &mut ws.lv);
    // beta (L v - g) - sigma, pulled back through L^T in one pass
    for ((r, (l, gk)), s) in ws.resid.iter_mut().zip(ws.lv.iter().zip(g)).zip(sigma) {
        *r = params.beta * (l - gk) - s;
    }
    pa.apply_transpose_into(&ws.resid, &mut ws.back);
    for (i, out) in grad.iter_mut().enumerate() {
        *out = params.mu * (v[i] - data[i]) + ws.back[i] - delta[i];
    }
}

/// Runs `outer_iters` ADMM sweeps and returns the sparse reconstruction.
pub fn admm_solve(data: &[f64], pa: &PaMatrix, params: &AdmmParams) -> Result<Vec<f64>> {
    Ok(admm_solve_state(data, pa, params)?.v)
}

/// Same as [`admm_solve`] but returns the final iterate quadruple.
pub fn admm_solve_state(data: &[f64], pa: &PaMatrix, params: &AdmmParams) -> Result<AdmmState> {
    params.validate()?;
    if data.len() != pa.cols() {
        return Err(Error::ShapeMismatch {
            expected: pa.cols(),
            actual: data.len(),
        });
    }
    if data.iter().any(|x| !x.is_finite()) {
        return Err(Error::AdmmDiverged(0));
    }
    let mut st = AdmmState::warm_start(data, pa);
    let mut ws = Workspace::new(pa);
    let mut grad = vec![0.0; pa.cols()];
    let inv_beta = 1.0 / params.beta;

    for outer in 0..params.outer_iters {
        for _ in 0..params.inner_max {
            pa.apply_into(&st.v, &mut ws.lv);
            for ((g, l), s) in st.g.iter_mut().zip(&ws.lv).zip(&st.sigma) {
                *g = shrink(l - inv_beta * s, inv_beta);
            }
            gradient_into(
                &st.v, &st.g, &st.sigma, &st.delta, data, pa, params, &mut ws, &mut grad,
            );
            let mut step_sq = 0.0;
            for (v, d) in st.v.iter_mut().zip(&grad) {
                let dv = params.alpha * d;
                *v -= dv;
                step_sq += dv * dv;
            }
            if step_sq.sqrt() <= params.tol {
                break;
            }
        }
        pa.apply_into(&st.v, &mut ws.lv);
        for ((s, l), g) in st.sigma.iter_mut().zip(&ws.lv).zip(&st.g) {
            *s -= params.beta * (l - g);
        }
        for ((d, v), u) in st.delta.iter_mut().zip(&st.v).zip(data) {
            *d -= params.mu * (v - u);
        }
        if st
            .v
            .iter()
            .chain(&st.sigma)
            .chain(&st.delta)
            .any(|x| !x.is_finite())
        {
            return Err(Error::AdmmDiverged(outer));
        }
    }
    Ok(st)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::ReferenceElement;

    #[test]
    fn shrink_examples() {
        assert_eq!(shrink(3.0, 1.0), 2.0);
        assert_eq!(shrink(-0.5, 1.0), 0.0);
        assert_eq!(shrink(0.0, 7.0), 0.0);
        assert_eq!(shrink(-3.0, 1.0), -2.0);
    }

    #[test]
    fn gradient_vanishes_at_warm_start() {
        let e = ReferenceElement::new(5).unwrap();
        let pa = PaMatrix::new(&e, 3).unwrap();
        let data: Vec<f64> = e.nodes.iter().map(|x| x.sin() + x * x).collect();
        let st = AdmmState::warm_start(&data, &pa);
        let g = objective_gradient(&st, &data, &pa, &AdmmParams::default());
        assert!(g.iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn gradient_fidelity_only_limit() {
        let e = ReferenceElement::new(4).unwrap();
        let pa = PaMatrix::new(&e, 3).unwrap();
        let data = vec![0.1, -0.3, 0.8, 1.1, 0.0];
        let v = vec![0.5, 0.2, -0.1, 0.9, 1.0];
        let st = AdmmState {
            v: v.clone(),
            g: vec![0.0; 4],
            sigma: vec![0.0; 4],
            delta: vec![0.0; 5],
        };
        let params = AdmmParams {
            mu: 0.7,
            beta: 1e-300,
            ..AdmmParams::default()
        };
        let g = objective_gradient(&st, &data, &pa, &params);
        for i in 0..5 {
            assert!((g[i] - 0.7 * (v[i] - data[i])).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_data_is_a_fixed_point() {
        let e = ReferenceElement::new(6).unwrap();
        let pa = PaMatrix::new(&e, 3).unwrap();
        let data: Vec<f64> = e.nodes.iter().map(|x| 0.3 - 2.0 * x).collect();
        let out = admm_solve(&data, &pa, &AdmmParams::default()).unwrap();
        let dev = out
            .iter()
            .zip(&data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!(dev <= 1e-3);
    }

    #[test]
    fn rejects_bad_params_and_nonfinite_data() {
        let e = ReferenceElement::new(4).unwrap();
        let pa = PaMatrix::new(&e, 3).unwrap();
        let bad = AdmmParams {
            beta: 0.0,
            ..AdmmParams::default()
        };
        assert!(matches!(
            admm_solve(&[0.0; 5], &pa, &bad),
            Err(Error::InvalidAdmmParam("beta"))
        ));
        let nan = [0.0, f64::NAN, 0.0, 0.0, 0.0];
        assert!(matches!(
            admm_solve(&nan, &pa, &AdmmParams::default()),
            Err(Error::AdmmDiverged(0))
        ));
    }

    #[test]
    fn huge_step_diverges_with_index() {
        let e = ReferenceElement::new(8).unwrap();
        let pa = PaMatrix::new(&e, 3).unwrap();
        let data: Vec<f64> = e
            .nodes
            .iter()
            .map(|&x| if x > 0.1 { 1.0 } else { -1.0 })
            .collect();
        // the fidelity term is the only unbounded one, so alpha * mu > 2 blows up
        let params = AdmmParams {
            alpha: 1e4,
            ..AdmmParams::default()
        };
        assert!(matches!(
            admm_solve(&data, &pa, &params),
            Err(Error::AdmmDiverged(_))
        ));
    }
}
