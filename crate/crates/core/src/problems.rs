//! Benchmark initial data, reference solutions, and discrete norms.

use std::f64::consts::PI;

use serde::Serialize;

use crate::element::{Mesh, ReferenceElement};
use crate::error::{Error, Result};
use crate::solver::SolutionState;

const NEWTON_TOL: f64 = 1e-13;
const NEWTON_MAX_ITERS: usize = 100;
const BUMP_RADIUS: f64 = 0.5;

pub fn burgers_initial(x: f64) -> f64 {
    (PI * x).sin()
}

/// Time at which the sine profile first steepens into a shock.
pub fn burgers_shock_time() -> f64 {
    1.0 / PI
}

/// Foot `x0` of the surviving characteristic through `x` in `[0, 1]`.
///
/// Characteristics `x = x0 + t sin(pi x0)` leave `[0, 1]` moving right and
/// are absorbed by the stationary shock at `x = 1`. The map is increasing on
/// `[0, x0c]` with `x0c` the fold point, so the root there is unique.
fn left_foot(x: f64, t: f64) -> Result<f64> {
    let fold = if t > burgers_shock_time() {
        (-1.0 / (PI * t)).acos() / PI
    } else {
        1.0
    };
    let map = |x0: f64| x0 + t * (PI * x0).sin();
    let (mut lo, mut hi) = (0.0, fold);
    let mut x0 = x.clamp(lo, hi);
    for _ in 0..NEWTON_MAX_ITERS {
        let f = map(x0) - x;
        if f == 0.0 {
            return Ok(x0);
        }
        if f > 0.0 {
            hi = x0;
        } else {
            lo = x0;
        }
        let df = 1.0 + PI * t * (PI * x0).cos();
        let mut next = x0 - f / df;
        if !(df > 0.0) || !(lo..=hi).contains(&next) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - x0).abs();
        x0 = next;
        if step <= NEWTON_TOL || hi - lo <= NEWTON_TOL {
            return Ok(x0);
        }
    }
    Err(Error::NewtonFailed { x, t })
}

/// Exact Burgers solution for `sin(pi x)` data on the periodic domain `[0, 2]`.
///
/// After shock formation the shock sits at `x = 1`; the left limit is
/// returned there.
pub fn burgers_reference(x: f64, t: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&t) {
        return Err(Error::ReferenceTimeOutOfRange { t });
    }
    if t == 0.0 {
        return Ok(burgers_initial(x));
    }
    let xw = x.rem_euclid(2.0);
    if xw <= 1.0 {
        Ok((PI * left_foot(xw, t)?).sin())
    } else {
        Ok(-(PI * left_foot(2.0 - xw, t)?).sin())
    }
}

pub fn advection_initial(x: f64) -> f64 {
    (2.0 * PI * x).sin()
}

pub fn advection_reference(x: f64, t: f64) -> f64 {
    advection_initial((x - t).rem_euclid(2.0))
}

/// Smooth bump of height 1 supported on `|x - 0.5| < r`.
pub fn bump(x: f64) -> f64 {
    let s = x - 0.5;
    let r2 = BUMP_RADIUS * BUMP_RADIUS;
    if s.abs() < BUMP_RADIUS {
        // e * exp(-r^2 / (r^2 - s^2)) == exp(-s^2 / (r^2 - s^2))
        (-(s * s) / (r2 - s * s)).exp()
    } else {
        0.0
    }
}

/// Initial state `(1 + b(x), b(x))` of the two-mode chaos system.
pub fn pc_initial(x: f64) -> [f64; 2] {
    let b = bump(x);
    [1.0 + b, b]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorReport {
    pub m_norm: f64,
    pub one_norm: f64,
    pub inf_norm: f64,
}

/// Discrete M-, 1- and max-norm errors of component 0 against `reference`.
pub fn error_norms(
    numerical: &SolutionState,
    reference: impl Fn(f64) -> Result<f64>,
    mesh: &Mesh,
    element: &ReferenceElement,
) -> Result<ErrorReport> {
    let mut m2 = 0.0;
    let mut one = 0.0;
    let mut inf: f64 = 0.0;
    for i in 0..mesh.element_count {
        let u = numerical.element(0, i);
        let (mut local2, mut local1) = (0.0, 0.0);
        for (k, &xi) in element.nodes.iter().enumerate() {
            let e = u[k] - reference(mesh.map_point(i, xi))?;
            local2 += element.weights[k] * e * e;
            local1 += element.weights[k] * e.abs();
            inf = inf.max(e.abs());
        }
        m2 += mesh.jacobians[i] * local2;
        one += mesh.jacobians[i] * local1;
    }
    Ok(ErrorReport {
        m_norm: m2.sqrt(),
        one_norm: one,
        inf_norm: inf,
    })
}

/// Discrete `L^2` energy `1/2 sum_c sum_i J_i sum_k w_k u^2`.
pub fn energy(state: &SolutionState, mesh: &Mesh, element: &ReferenceElement) -> f64 {
    let mut e = 0.0;
    for c in 0..state.components {
        for i in 0..state.elements {
            let u = state.element(c, i);
            let local: f64 = element.weights.iter().zip(u).map(|(w, v)| w * v * v).sum();
            e += mesh.jacobians[i] * local;
        }
    }
    0.5 * e
}

/// Discrete total mass `sum_i J_i sum_k w_k u` of one component.
pub fn total_mass(
    state: &SolutionState,
    component: usize,
    mesh: &Mesh,
    element: &ReferenceElement,
) -> f64 {
    (0..state.elements)
        .map(|i| mesh.jacobians[i] * element.integrate(state.element(component, i)))
        .sum()
}

/// Total variation of the concatenated nodal trace of one component.
pub fn total_variation(state: &SolutionState, component: usize) -> f64 {
    state
        .component(component)
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .sum()
}
