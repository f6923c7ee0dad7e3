use super::problem::ProblemDef;
use super::state::SolutionState;
use crate::element::{Mesh, ReferenceElement};

/// One Shu-Osher SSPRK(3,3) step. `rhs(u, out)` must overwrite `out`.
pub fn ssprk33_step(
    state: &SolutionState,
    mut rhs: impl FnMut(&SolutionState, &mut SolutionState),
    dt: f64,
) -> SolutionState {
    let mut rate = SolutionState::zeros(state.components, state.elements, state.nodes);

    rhs(state, &mut rate);
    let mut u1 = state.clone();
    u1.axpy(dt, &rate);

    rhs(&u1, &mut rate);
    let mut u2 = u1;
    u2.axpy(dt, &rate);
    for (x, u0) in u2.values.iter_mut().zip(&state.values) {
        *x = 0.75 * u0 + 0.25 * *x;
    }

    rhs(&u2, &mut rate);
    let mut u3 = u2;
    u3.axpy(dt, &rate);
    for (x, u0) in u3.values.iter_mut().zip(&state.values) {
        *x = u0 / 3.0 + 2.0 / 3.0 * *x;
    }
    u3.time = state.time + dt;
    u3
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSize {
    pub dt: f64,
    /// The state had zero wave speed and the speed-free fallback was used.
    pub zero_speed: bool,
    /// The step was shortened to land on `t_end`.
    pub lands_on_end: bool,
}

/// `dt = cfl * min(h) / ((2p + 1) * max speed)`, capped at `t_end - t`.
pub fn compute_dt(
    state: &SolutionState,
    mesh: &Mesh,
    element: &ReferenceElement,
    problem: &ProblemDef,
    cfl: f64,
    t_end: f64,
) -> StepSize {
    let h = mesh.min_width();
    let n = state.components;
    let mut speed: f64 = 0.0;
    let mut u = [0.0; 2];
    for i in 0..state.elements {
        for k in 0..state.nodes {
            for (c, uc) in u.iter_mut().enumerate().take(n) {
                *uc = state.element(c, i)[k];
            }
            speed = speed.max(problem.max_speed(&u[..n]));
        }
    }
    let zero_speed = !(speed > 0.0);
    let mut dt = if zero_speed {
        cfl * h
    } else {
        cfl * h / ((2 * element.degree + 1) as f64 * speed)
    };
    let remaining = t_end - state.time;
    let lands_on_end = dt >= remaining;
    if lands_on_end {
        dt = remaining;
    }
    StepSize {
        dt,
        zero_speed,
        lands_on_end,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::problem::{InterfaceFlux, ProblemKind};
    use approx::assert_abs_diff_eq;

    fn scalar(v: f64) -> SolutionState {
        let mut s = SolutionState::zeros(1, 1, 1);
        s.values[0] = v;
        s
    }

    #[test]
    fn zero_rhs_keeps_state() {
        let s = scalar(3.0);
        let next = ssprk33_step(&s, |_, out| out.values.fill(0.0), 0.1);
        assert_eq!(next.values, s.values);
        assert_abs_diff_eq!(next.time, 0.1);
    }

    #[test]
    fn exponential_matches_third_order_taylor() {
        let s = scalar(1.0);
        let next = ssprk33_step(&s, |u, out| out.values[0] = u.values[0], 0.1);
        let expect = 1.0 + 0.1 + 0.005 + 0.001 / 6.0;
        assert_abs_diff_eq!(next.values[0], expect, epsilon = 1e-15);
    }

    #[test]
    fn third_order_self_convergence() {
        let solve = |steps: usize| {
            let dt = 1.0 / steps as f64;
            let mut s = scalar(1.0);
            for _ in 0..steps {
                s = ssprk33_step(&s, |u, out| out.values[0] = -u.values[0], dt);
            }
            (s.values[0] - (-1.0f64).exp()).abs()
        };
        let errs: Vec<f64> = [10, 20, 40, 80].iter().map(|&n| solve(n)).collect();
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= 2.9, "order {order}");
        }
    }

    #[test]
    fn dt_examples() {
        let e = ReferenceElement::new(3).unwrap();
        let adv = ProblemDef::new(ProblemKind::Advection, InterfaceFlux::LocalLaxFriedrichs);
        let mesh = Mesh::new(0.0, 2.0, 8).unwrap();
        let s = SolutionState::zeros(1, 8, 4);
        let st = compute_dt(&s, &mesh, &e, &adv, 0.5, 10.0);
        assert_abs_diff_eq!(st.dt, 0.5 * 0.25 / 7.0, epsilon = 1e-15);
        assert!(!st.lands_on_end);

        let mesh16 = Mesh::new(0.0, 2.0, 16).unwrap();
        let s16 = SolutionState::zeros(1, 16, 4);
        let st16 = compute_dt(&s16, &mesh16, &e, &adv, 0.5, 10.0);
        assert_abs_diff_eq!(st16.dt, 0.5 * st.dt, epsilon = 1e-15);

        let mut near = s.clone();
        near.time = 9.99;
        let st = compute_dt(&near, &mesh, &e, &adv, 0.5, 10.0);
        assert!(st.lands_on_end);
        assert_abs_diff_eq!(st.dt, 10.0 - 9.99);

        let burgers = ProblemDef::new(ProblemKind::Burgers, InterfaceFlux::LocalLaxFriedrichs);
        let st = compute_dt(&s, &mesh, &e, &burgers, 0.5, 10.0);
        assert!(st.zero_speed);
        assert_abs_diff_eq!(st.dt, 0.5 * 0.25);
    }
}
