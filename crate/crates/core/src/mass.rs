//! Element-wise mass repair after sparse reconstruction.

use crate::element::ReferenceElement;

/// Legendre mean coefficient `<u, P_0>_M / <P_0, P_0>_M`.
pub fn mean_coefficient(nodal: &[f64], element: &ReferenceElement) -> f64 {
    element.integrate(nodal) / element.weights.iter().sum::<f64>()
}

/// Replaces the modal mean of `sparse` by that of `original`, leaving every
/// higher Legendre coefficient untouched.
pub fn mass_correct(original: &[f64], sparse: &[f64], element: &ReferenceElement) -> Vec<f64> {
    let mut modal = element.to_modal(sparse);
    modal[0] = mean_coefficient(original, element);
    element.to_nodal(&modal)
}
