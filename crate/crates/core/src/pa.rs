//! Polynomial annihilation (PA) operators evaluated at collocation midpoints.
//!
//! For a stencil `x_0 < ... < x_m` the order-`m` operator is
//! `L_m[u](xi) = (1 / q_m(xi)) * sum_j c_j u(x_j)` with `c_j = m! / prod_{i != j}(x_j - x_i)`
//! and `q_m(xi)` the sum of `c_j` over stencil points at or right of `xi`. It
//! annihilates polynomials of degree below `m` and reproduces jump heights.

use nalgebra::DMatrix;

use crate::element::ReferenceElement;
use crate::error::{Error, Result};

const DEGENERATE_Q: f64 = 1e-12;

fn factorial(m: usize) -> f64 {
    (1..=m).map(|k| k as f64).product()
}

/// Annihilation coefficients `m! / omega_j` for the given stencil.
pub fn annihilation_coefficients(stencil: &[f64]) -> Result<Vec<f64>> {
    let m = stencil.len().saturating_sub(1);
    let mf = factorial(m);
    let mut out = Vec::with_capacity(stencil.len());
    for (j, &xj) in stencil.iter().enumerate() {
        let mut omega = 1.0;
        for (i, &xi) in stencil.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = xj - xi;
            if d == 0.0 {
                return Err(Error::DuplicateNodes(i.min(j), i.max(j)));
            }
            omega *= d;
        }
        out.push(mf / omega);
    }
    Ok(out)
}

/// Normalization `q_m`: the sum of coefficients at stencil points `>= eval_point`.
pub fn normalization_factor(stencil: &[f64], eval_point: f64, coeffs: &[f64]) -> Result<f64> {
    let lo = stencil.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = stencil.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(lo <= eval_point && eval_point <= hi) {
        return Err(Error::OutsideStencil {
            point: eval_point,
            lo,
            hi,
        });
    }
    let q: f64 = stencil
        .iter()
        .zip(coeffs)
        .filter(|(x, _)| **x >= eval_point)
        .map(|(_, c)| *c)
        .sum();
    if q.abs() < DEGENERATE_Q {
        return Err(Error::DegenerateNormalization {
            value: q,
            point: eval_point,
        });
    }
    Ok(q)
}

/// Indices of the `m + 1` nodes nearest to `point`, grown outward from the
/// bracketing pair `(k, k + 1)`. Distance ties go to the lower index.
fn nearest_stencil(nodes: &[f64], k: usize, point: f64, m: usize) -> Vec<usize> {
    let last = nodes.len() - 1;
    let (mut lo, mut hi) = if m == 0 { (k, k) } else { (k, k + 1) };
    while hi - lo < m {
        let left = (lo > 0).then(|| (point - nodes[lo - 1]).abs());
        let right = (hi < last).then(|| (nodes[hi + 1] - point).abs());
        match (left, right) {
            (Some(l), Some(r)) if l <= r => lo -= 1,
            (Some(_), Some(_)) => hi += 1,
            (Some(_), None) => lo -= 1,
            (None, Some(_)) => hi += 1,
            (None, None) => break,
        }
    }
    (lo..=hi).collect()
}

/// Order-`m` PA operator as a `p x (p + 1)` matrix acting on nodal values.
#[derive(Debug, Clone)]
pub struct PaMatrix {
    pub order: usize,
    pub degree: usize,
    pub matrix: DMatrix<f64>,
    pub midpoints: Vec<f64>,
    pub stencils: Vec<Vec<usize>>,
    /// Row-wise nonzero weights aligned with `stencils`.
    weights: Vec<Vec<f64>>,
}

impl PaMatrix {
    pub fn new(element: &ReferenceElement, m: usize) -> Result<Self> {
        let p = element.degree;
        if m < 1 || m > p {
            return Err(Error::InvalidOrder {
                order: m,
                degree: p,
            });
        }
        let nodes = &element.nodes;
        let mut matrix = DMatrix::zeros(p, p + 1);
        let mut midpoints = Vec::with_capacity(p);
        let mut stencils = Vec::with_capacity(p);
        let mut weights = Vec::with_capacity(p);
        for k in 0..p {
            let mid = 0.5 * (nodes[k] + nodes[k + 1]);
            let idx = nearest_stencil(nodes, k, mid, m);
            let pts: Vec<f64> = idx.iter().map(|&i| nodes[i]).collect();
            let c = annihilation_coefficients(&pts)?;
            let q = normalization_factor(&pts, mid, &c)?;
            let row: Vec<f64> = c.iter().map(|cj| cj / q).collect();
            for (&i, &w) in idx.iter().zip(&row) {
                matrix[(k, i)] = w;
            }
            midpoints.push(mid);
            stencils.push(idx);
            weights.push(row);
        }
        Ok(Self {
            order: m,
            degree: p,
            matrix,
            midpoints,
            stencils,
            weights,
        })
    }

    pub fn rows(&self) -> usize {
        self.degree
    }

    pub fn cols(&self) -> usize {
        self.degree + 1
    }

    /// `out = L v`.
    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        for ((o, idx), w) in out.iter_mut().zip(&self.stencils).zip(&self.weights) {
            *o = idx.iter().zip(w).map(|(&i, &c)| c * v[i]).sum();
        }
    }

    /// `out = L^T y`.
    pub fn apply_transpose_into(&self, y: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for ((&yk, idx), w) in y.iter().zip(&self.stencils).zip(&self.weights) {
            for (&i, &c) in idx.iter().zip(w) {
                out[i] += c * yk;
            }
        }
    }

    /// `sum_k |(L v)_k|`, the sparsity penalty.
    pub fn l1_norm(&self, v: &[f64]) -> f64 {
        let mut buf = vec![0.0; self.rows()];
        self.apply_into(v, &mut buf);
        buf.iter().map(|x| x.abs()).sum()
    }
}

pub fn build_pa_matrix(element: &ReferenceElement, m: usize) -> Result<PaMatrix> {
    PaMatrix::new(element, m)
}

pub fn apply_pa(pa: &PaMatrix, nodal: &[f64]) -> Result<Vec<f64>> {
    if nodal.len() != pa.cols() {
        return Err(Error::ShapeMismatch {
            expected: pa.cols(),
            actual: nodal.len(),
        });
    }
    let mut out = vec![0.0; pa.rows()];
    pa.apply_into(nodal, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn assert_vec(actual: &[f64], expected: &[f64], eps: f64) {
        assert_eq!(actual.len(), expected.len());
        for (a, e) in actual.iter().zip(expected) {
            assert_abs_diff_eq!(*a, *e, epsilon = eps);
        }
    }

    #[test]
    fn coefficient_examples() {
        assert_vec(
            &annihilation_coefficients(&[0.0, 1.0]).unwrap(),
            &[-1.0, 1.0],
            1e-15,
        );
        assert_vec(
            &annihilation_coefficients(&[-1.0, 0.0, 1.0]).unwrap(),
            &[1.0, -2.0, 1.0],
            1e-15,
        );
        assert_vec(
            &annihilation_coefficients(&[0.0, 1.0, 2.0, 3.0]).unwrap(),
            &[-1.0, 3.0, -3.0, 1.0],
            1e-15,
        );
        assert!(annihilation_coefficients(&[0.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn normalization_examples() {
        let q = normalization_factor(&[0.0, 1.0], 0.5, &[-1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(q, 1.0);
        let q = normalization_factor(&[0.0, 1.0, 2.0, 3.0], 1.5, &[-1.0, 3.0, -3.0, 1.0]).unwrap();
        assert_abs_diff_eq!(q, -2.0);
        let q = normalization_factor(&[-1.0, 0.0, 1.0], -0.5, &[1.0, -2.0, 1.0]).unwrap();
        assert_abs_diff_eq!(q, -1.0);
    }

    #[test]
    fn normalization_degenerate_and_outside() {
        // all coefficients to the right cancel
        let err = normalization_factor(&[-1.0, 0.0, 1.0], -1.0, &[1.0, -2.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::DegenerateNormalization { .. }));
        let err = normalization_factor(&[0.0, 1.0], 2.0, &[-1.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::OutsideStencil { .. }));
    }

    #[test]
    fn stencils_are_symmetric_for_odd_order() {
        let e = ReferenceElement::new(7).unwrap();
        let pa = PaMatrix::new(&e, 3).unwrap();
        assert_eq!(pa.stencils[3], vec![2, 3, 4, 5]);
        assert_eq!(pa.stencils[0], vec![0, 1, 2, 3]);
        assert_eq!(pa.stencils[6], vec![4, 5, 6, 7]);
        for row in 0..pa.rows() {
            let nnz = (0..pa.cols())
                .filter(|&c| pa.matrix[(row, c)] != 0.0)
                .count();
            assert_eq!(nnz, 4);
        }
    }

    #[test]
    fn annihilates_constants_for_all_orders() {
        for p in 1..=12 {
            let e = ReferenceElement::new(p).unwrap();
            for m in 1..=p {
                let pa = PaMatrix::new(&e, m).unwrap();
                let out = apply_pa(&pa, &vec![1.0; p + 1]).unwrap();
                assert!(out.iter().all(|v| v.abs() < 1e-10), "p={p} m={m}");
            }
        }
    }

    #[test]
    fn step_at_centre_recovered_exactly() {
        let e = ReferenceElement::new(7).unwrap();
        let pa = PaMatrix::new(&e, 3).unwrap();
        let u: Vec<f64> = e
            .nodes
            .iter()
            .map(|&x| if x > 0.0 { 1.0 } else { 0.0 })
            .collect();
        let out = apply_pa(&pa, &u).unwrap();
        assert_abs_diff_eq!(out[3], 1.0, epsilon = 1e-10);
    }

    #[test]
    fn linear_data_annihilated_for_order_two_and_up() {
        let e = ReferenceElement::new(6).unwrap();
        for m in 2..=6 {
            let pa = PaMatrix::new(&e, m).unwrap();
            let out = apply_pa(&pa, &e.nodes).unwrap();
            assert!(out.iter().all(|v| v.abs() < 1e-10));
            assert!(apply_pa(&pa, &[0.0; 7]).unwrap().iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn invalid_order_and_shape() {
        let e = ReferenceElement::new(3).unwrap();
        assert!(PaMatrix::new(&e, 0).is_err());
        assert!(PaMatrix::new(&e, 4).is_err());
        let pa = PaMatrix::new(&e, 1).unwrap();
        assert!(apply_pa(&pa, &[0.0; 3]).is_err());
    }

    #[test]
    fn transpose_matches_dense() {
        let e = ReferenceElement::new(5).unwrap();
        let pa = PaMatrix::new(&e, 3).unwrap();
        let y = [0.3, -1.2, 0.7, 2.0, -0.4];
        let mut out = vec![0.0; 6];
        pa.apply_transpose_into(&y, &mut out);
        let dense = pa.matrix.transpose() * nalgebra::DVector::from_column_slice(&y);
        for i in 0..6 {
            assert_abs_diff_eq!(out[i], dense[i], epsilon = 1e-12);
        }
    }
}
