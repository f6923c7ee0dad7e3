//! Semidiscrete right-hand sides on a periodic mesh.

use super::flux::pc_triple_products;
use super::problem::{ProblemDef, ProblemKind};
use super::state::SolutionState;
use crate::element::{Mesh, ReferenceElement};

/// Numerical flux at every face; face `i` is the left face of element `i`.
fn face_fluxes(state: &SolutionState, problem: &ProblemDef) -> Vec<[f64; 2]> {
    let n = state.components;
    let ne = state.elements;
    let p = state.nodes - 1;
    let mut out = vec![[0.0; 2]; ne];
    let mut left = [0.0; 2];
    let mut right = [0.0; 2];
    for (i, face) in out.iter_mut().enumerate() {
        let prev = (i + ne - 1) % ne;
        for c in 0..n {
            left[c] = state.element(c, prev)[p];
            right[c] = state.element(c, i)[0];
        }
        problem.interface_flux(&left[..n], &right[..n], &mut face[..n]);
    }
    out
}

/// Weak-form nodal DG rates for a scalar conservation law:
/// `(1/J) M^-1 (D^T M f - R^T B f_num)`.
pub fn dg_rhs_scalar(
    state: &SolutionState,
    element: &ReferenceElement,
    mesh: &Mesh,
    problem: &ProblemDef,
    rates: &mut SolutionState,
) {
    debug_assert_eq!(state.components, 1);
    let ne = state.elements;
    let np = state.nodes;
    let p = np - 1;
    let w = &element.weights;
    let d = &element.diff;
    let faces = face_fluxes(state, problem);
    let mut mf = vec![0.0; np];
    for i in 0..ne {
        let u = state.element(0, i);
        for k in 0..np {
            let mut f = [0.0];
            problem.physical_flux(&u[k..k + 1], &mut f);
            mf[k] = w[k] * f[0];
        }
        let inv_j = 1.0 / mesh.jacobians[i];
        let f_left = faces[i][0];
        let f_right = faces[(i + 1) % ne][0];
        let out = rates.element_mut(0, i);
        for (k, o) in out.iter_mut().enumerate() {
            let mut vol = 0.0;
            for j in 0..np {
                vol += d[(j, k)] * mf[j];
            }
            let mut r = vol;
            if k == 0 {
                r += f_left;
            }
            if k == p {
                r -= f_right;
            }
            *o = inv_j * r / w[k];
        }
    }
}

/// Skew-symmetric split-form rates for the two-mode chaos Burgers system.
pub fn pc_system_rhs(
    state: &SolutionState,
    element: &ReferenceElement,
    mesh: &Mesh,
    problem: &ProblemDef,
    rates: &mut SolutionState,
) {
    debug_assert_eq!(state.components, 2);
    let t = pc_triple_products();
    let ne = state.elements;
    let np = state.nodes;
    let p = np - 1;
    let w = &element.weights;
    let d = &element.diff;
    let faces = face_fluxes(state, problem);

    let mut prod = vec![0.0; np];
    let mut dprod = vec![0.0; np];
    let mut du = [vec![0.0; np], vec![0.0; np]];
    let mut out = [vec![0.0; np], vec![0.0; np]];
    for i in 0..ne {
        let u = [state.element(0, i), state.element(1, i)];
        for c in 0..2 {
            for k in 0..np {
                du[c][k] = (0..np).map(|j| d[(k, j)] * u[c][j]).sum();
            }
        }
        out.iter_mut()
            .for_each(|o| o.iter_mut().for_each(|x| *x = 0.0));
        let mut corr = [[0.0; 2]; 2]; // [component][face]
        for ci in 0..2 {
            for cj in 0..2 {
                for (k, pk) in prod.iter_mut().enumerate() {
                    *pk = u[ci][k] * u[cj][k];
                }
                for (k, dk) in dprod.iter_mut().enumerate() {
                    *dk = (0..np).map(|j| d[(k, j)] * prod[j]).sum();
                }
                for comp in 0..2 {
                    let tijk = t[ci][cj][comp];
                    if tijk == 0.0 {
                        continue;
                    }
                    for k in 0..np {
                        out[comp][k] -= tijk / 3.0 * (dprod[k] + u[cj][k] * du[ci][k]);
                    }
                    corr[comp][0] += tijk * (prod[0] / 3.0 + u[ci][0] * u[cj][0] / 6.0);
                    corr[comp][1] += tijk * (prod[p] / 3.0 + u[ci][p] * u[cj][p] / 6.0);
                }
            }
        }
        let inv_j = 1.0 / mesh.jacobians[i];
        let f_left = faces[i];
        let f_right = faces[(i + 1) % ne];
        for comp in 0..2 {
            // -M^-1 R^T B (f_num - corr): B = diag(-1, 1)
            out[comp][0] += (f_left[comp] - corr[comp][0]) / w[0];
            out[comp][p] -= (f_right[comp] - corr[comp][1]) / w[p];
            let dst = rates.element_mut(comp, i);
            for (o, v) in dst.iter_mut().zip(&out[comp]) {
                *o = inv_j * v;
            }
        }
    }
}

/// Dispatches to the form used for each problem.
pub fn rhs(
    state: &SolutionState,
    element: &ReferenceElement,
    mesh: &Mesh,
    problem: &ProblemDef,
    rates: &mut SolutionState,
) {
    match problem.kind {
        ProblemKind::PcSystem => pc_system_rhs(state, element, mesh, problem, rates),
        _ => dg_rhs_scalar(state, element, mesh, problem, rates),
    }
}
