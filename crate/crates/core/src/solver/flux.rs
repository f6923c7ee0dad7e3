//! Interface fluxes and the two-mode polynomial chaos Burgers system.

use super::problem::{InterfaceFlux, ProblemDef};

/// Local Lax-Friedrichs flux applied componentwise.
pub fn llf_flux(left: &[f64], right: &[f64], problem: &ProblemDef, out: &mut [f64]) {
    let n = problem.component_count();
    let mut fl = [0.0; 2];
    let mut fr = [0.0; 2];
    problem.physical_flux(left, &mut fl);
    problem.physical_flux(right, &mut fr);
    let alpha = problem.max_speed(left).max(problem.max_speed(right));
    for c in 0..n {
        out[c] = 0.5 * (fr[c] + fl[c]) - 0.5 * alpha * (right[c] - left[c]);
    }
}

/// `<phi_i phi_j phi_k>` for the normalized Hermite pair `phi_0 = 1`, `phi_1 = xi`.
pub fn pc_triple_products() -> [[[f64; 2]; 2]; 2] {
    let mut t = [[[0.0; 2]; 2]; 2];
    for (i, ti) in t.iter_mut().enumerate() {
        for (j, tij) in ti.iter_mut().enumerate() {
            for (k, v) in tij.iter_mut().enumerate() {
                // nonzero iff the number of phi_1 factors is 0 or 2
                let ones = i + j + k;
                *v = if ones == 0 || ones == 2 { 1.0 } else { 0.0 };
            }
        }
    }
    t
}

/// `f_k(u) = 1/2 sum_ij <phi_i phi_j phi_k> u_i u_j`, i.e. `((u0^2 + u1^2)/2, u0 u1)`.
pub fn pc_physical_flux(u: [f64; 2]) -> [f64; 2] {
    [0.5 * (u[0] * u[0] + u[1] * u[1]), u[0] * u[1]]
}

/// Largest eigenvalue magnitude of the flux Jacobian `[[u0, u1], [u1, u0]]`.
pub fn pc_max_speed(u: [f64; 2]) -> f64 {
    (u[0] + u[1]).abs().max((u[0] - u[1]).abs())
}

fn pc_entropy_conservative(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    let t = pc_triple_products();
    let mut out = [0.0; 2];
    for (k, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let tijk = t[i][j][k];
                if tijk == 0.0 {
                    continue;
                }
                // each term is invariant under a <-> b
                let cross = 0.5 * (a[i] * b[j] + b[i] * a[j]);
                acc += tijk * ((a[i] * a[j] + b[i] * b[j]) + cross);
            }
        }
        *o = acc / 6.0;
    }
    out
}

/// Interface flux for the chaos system in the requested mode.
pub fn pc_interface_flux(left: [f64; 2], right: [f64; 2], mode: InterfaceFlux) -> [f64; 2] {
    match mode {
        InterfaceFlux::EntropyConservative => pc_entropy_conservative(left, right),
        InterfaceFlux::EntropyStable => {
            let ec = pc_entropy_conservative(left, right);
            let alpha = pc_max_speed(left).max(pc_max_speed(right));
            [
                ec[0] - 0.5 * alpha * (right[0] - left[0]),
                ec[1] - 0.5 * alpha * (right[1] - left[1]),
            ]
        }
        InterfaceFlux::LocalLaxFriedrichs => {
            let fl = pc_physical_flux(left);
            let fr = pc_physical_flux(right);
            let alpha = pc_max_speed(left).max(pc_max_speed(right));
            [
                0.5 * (fl[0] + fr[0]) - 0.5 * alpha * (right[0] - left[0]),
                0.5 * (fl[1] + fr[1]) - 0.5 * alpha * (right[1] - left[1]),
            ]
        }
    }
}
