//! Reference element operators on [-1, 1] and the equidistant physical mesh.
//!
//! All nodal operators live on the Gauss-Lobatto points of degree `p`. The
//! node ordering is ascending, so the restriction matrix picks index `0` for
//! the left face and index `p` for the right face.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX_ITERS: usize = 100;

/// Values of the Legendre polynomials `P_0..=P_n` at `x`.
pub fn legendre_values(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(x);
    }
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0) * x * out[j] - jf * out[j - 1]) / (jf + 1.0);
        out.push(next);
    }
    out
}

/// Gauss-Lobatto nodes and weights for `p + 1` points on [-1, 1].
///
/// Interior nodes are the roots of `P_p'`, found by Newton iteration on
/// `x P_p(x) - P_{p-1}(x)` (which vanishes exactly at the Lobatto points)
/// starting from Chebyshev-Gauss-Lobatto points. The returned set is exactly
/// symmetric about zero.
pub fn gauss_lobatto(p: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if p < 1 {
        return Err(Error::InvalidDegree(p));
    }
    let n = p + 1;
    let pf = p as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for (k, (node, weight)) in nodes.iter_mut().zip(weights.iter_mut()).enumerate() {
        let mut x = -(std::f64::consts::PI * k as f64 / pf).cos();
        for _ in 0..NEWTON_MAX_ITERS {
            let vals = legendre_values(p, x);
            let (pp, pm) = (vals[p], vals[p - 1]);
            let step = (x * pp - pm) / ((pf + 1.0) * pp);
            x -= step;
            if step.abs() <= NEWTON_TOL {
                break;
            }
        }
        let pp = legendre_values(p, x)[p];
        *node = x;
        *weight = 2.0 / (pf * (pf + 1.0) * pp * pp);
    }
    nodes[0] = -1.0;
    nodes[p] = 1.0;
    // enforce exact mirror symmetry
    for k in 0..n / 2 {
        let x = 0.5 * (nodes[p - k] - nodes[k]);
        nodes[k] = -x;
        nodes[p - k] = x;
        let w = 0.5 * (weights[k] + weights[p - k]);
        weights[k] = w;
        weights[p - k] = w;
    }
    if n % 2 == 1 {
        nodes[p / 2] = 0.0;
    }
    Ok((nodes, weights))
}

/// Barycentric weights `1 / prod_{i != j} (x_j - x_i)`.
pub fn barycentric_weights(nodes: &[f64]) -> Result<Vec<f64>> {
    let n = nodes.len();
    let mut w = vec![1.0; n];
    for j in 0..n {
        for i in 0..n {
            if i == j {
                continue;
            }
            let d = nodes[j] - nodes[i];
            if d == 0.0 {
                return Err(Error::DuplicateNodes(i.min(j), i.max(j)));
            }
            w[j] *= d;
        }
    }
    Ok(w.into_iter().map(|v| 1.0 / v).collect())
}

/// Lagrange differentiation matrix with `D[(k, i)] = l_i'(x_k)`.
///
/// Off-diagonal entries use barycentric weights; the diagonal is the negative
/// row sum so constants are differentiated to zero.
pub fn differentiation_matrix(nodes: &[f64]) -> Result<DMatrix<f64>> {
    let n = nodes.len();
    let w = barycentric_weights(nodes)?;
    let mut d = DMatrix::zeros(n, n);
    for k in 0..n {
        let mut diag = 0.0;
        for i in 0..n {
            if i != k {
                let v = (w[i] / w[k]) / (nodes[k] - nodes[i]);
                d[(k, i)] = v;
                diag -= v;
            }
        }
        d[(k, k)] = diag;
    }
    Ok(d)
}

/// All single-element operators for one polynomial degree.
#[derive(Debug, Clone)]
pub struct ReferenceElement {
    pub degree: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub mass: DMatrix<f64>,
    pub diff: DMatrix<f64>,
    pub restriction: DMatrix<f64>,
    pub boundary: DMatrix<f64>,
    pub legendre_vandermonde: DMatrix<f64>,
    /// Discrete norms `<P_j, P_j>_M`.
    modal_norms: Vec<f64>,
}

impl ReferenceElement {
    pub fn new(p: usize) -> Result<Self> {
        let (nodes, weights) = gauss_lobatto(p)?;
        let n = p + 1;
        let diff = differentiation_matrix(&nodes)?;
        let mass = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&weights));
        let mut restriction = DMatrix::zeros(2, n);
        restriction[(0, 0)] = 1.0;
        restriction[(1, p)] = 1.0;
        let boundary = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&[-1.0, 1.0]));
        let mut vand = DMatrix::zeros(n, n);
        for (k, &x) in nodes.iter().enumerate() {
            for (j, v) in legendre_values(p, x).into_iter().enumerate() {
                vand[(k, j)] = v;
            }
        }
        let modal_norms = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| weights[k] * vand[(k, j)] * vand[(k, j)])
                    .sum()
            })
            .collect();
        Ok(Self {
            degree: p,
            nodes,
            weights,
            mass,
            diff,
            restriction,
            boundary,
            legendre_vandermonde: vand,
            modal_norms,
        })
    }

    pub fn len(&self) -> usize {
        self.degree + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Discrete integral over the reference element, `sum_k w_k u_k`.
    pub fn integrate(&self, nodal: &[f64]) -> f64 {
        self.weights.iter().zip(nodal).map(|(w, u)| w * u).sum()
    }

    /// Legendre coefficients by discrete projection onto each `P_j`.
    pub fn to_modal(&self, nodal: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|j| {
                let s: f64 = (0..n)
                    .map(|k| self.weights[k] * nodal[k] * self.legendre_vandermonde[(k, j)])
                    .sum();
                s / self.modal_norms[j]
            })
            .collect()
    }

    pub fn to_nodal(&self, modal: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| self.legendre_vandermonde[(k, j)] * modal[j])
                    .sum()
            })
            .collect()
    }

    /// Max-norm residual of `M D + D^T M - R^T B R`.
    pub fn sbp_residual(&self) -> f64 {
        let lhs = &self.mass * &self.diff + self.diff.transpose() * &self.mass;
        let rhs = self.restriction.transpose() * &self.boundary * &self.restriction;
        (lhs - rhs).amax()
    }
}

/// Equidistant partition of `[a, b]` into `element_count` elements.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub domain: (f64, f64),
    pub element_count: usize,
    pub boundaries: Vec<f64>,
    pub jacobians: Vec<f64>,
}

impl Mesh {
    pub fn new(a: f64, b: f64, element_count: usize) -> Result<Self> {
        if !(a < b) {
            return Err(Error::InvalidDomain { a, b });
        }
        if element_count == 0 {
            return Err(Error::NoElements);
        }
        let h = (b - a) / element_count as f64;
        let mut boundaries: Vec<f64> = (0..=element_count).map(|i| a + h * i as f64).collect();
        boundaries[element_count] = b;
        let jacobians = vec![0.5 * h; element_count];
        Ok(Self {
            domain: (a, b),
            element_count,
            boundaries,
            jacobians,
        })
    }

    /// Physical coordinate of reference point `xi` in element `i`.
    pub fn map_point(&self, i: usize, xi: f64) -> f64 {
        self.boundaries[i] + (xi + 1.0) * self.jacobians[i]
    }

    pub fn min_width(&self) -> f64 {
        self.jacobians
            .iter()
            .map(|j| 2.0 * j)
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn build_reference_element(p: usize) -> Result<ReferenceElement> {
    ReferenceElement::new(p)
}

pub fn build_mesh(a: f64, b: f64, element_count: usize) -> Result<Mesh> {
    Mesh::new(a, b, element_count)
}
