use crate::element::{Mesh, ReferenceElement};

/// Nodal values laid out as `[component][element][node]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionState {
    pub components: usize,
    pub elements: usize,
    pub nodes: usize,
    pub values: Vec<f64>,
    pub time: f64,
}

impl SolutionState {
    pub fn zeros(components: usize, elements: usize, nodes: usize) -> Self {
        Self {
            components,
            elements,
            nodes,
            values: vec![0.0; components * elements * nodes],
            time: 0.0,
        }
    }

    /// Samples `init(x)` (one value per component) at every physical node.
    pub fn sample(
        components: usize,
        mesh: &Mesh,
        element: &ReferenceElement,
        init: impl Fn(f64) -> Vec<f64>,
    ) -> Self {
        let mut s = Self::zeros(components, mesh.element_count, element.len());
        for i in 0..mesh.element_count {
            for (k, &xi) in element.nodes.iter().enumerate() {
                let u = init(mesh.map_point(i, xi));
                for (c, val) in u.into_iter().enumerate().take(components) {
                    let idx = s.index(c, i, k);
                    s.values[idx] = val;
                }
            }
        }
        s
    }

    #[inline]
    pub fn index(&self, component: usize, element: usize, node: usize) -> usize {
        (component * self.elements + element) * self.nodes + node
    }

    pub fn element(&self, component: usize, element: usize) -> &[f64] {
        let start = self.index(component, element, 0);
        &self.values[start..start + self.nodes]
    }

    pub fn element_mut(&mut self, component: usize, element: usize) -> &mut [f64] {
        let start = self.index(component, element, 0);
        &mut self.values[start..start + self.nodes]
    }

    pub fn component(&self, component: usize) -> &[f64] {
        let n = self.elements * self.nodes;
        &self.values[component * n..(component + 1) * n]
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &SolutionState) {
        for (x, y) in self.values.iter_mut().zip(&other.values) {
            *x += a * y;
        }
    }
}
