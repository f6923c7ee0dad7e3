use serde::{Deserialize, Serialize};

use super::flux;
use crate::error::Result;
use crate::problems;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    Burgers,
    Advection,
    PcSystem,
}

impl ProblemKind {
    pub const NAMES: [&'static str; 3] = ["burgers", "advection", "pc-system"];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Burgers => "burgers",
            ProblemKind::Advection => "advection",
            ProblemKind::PcSystem => "pc-system",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterfaceFlux {
    #[serde(rename = "llf")]
    LocalLaxFriedrichs,
    EntropyConservative,
    EntropyStable,
}

impl InterfaceFlux {
    pub const NAMES: [&'static str; 3] = ["llf", "entropy-conservative", "entropy-stable"];

    pub fn name(self) -> &'static str {
        match self {
            InterfaceFlux::LocalLaxFriedrichs => "llf",
            InterfaceFlux::EntropyConservative => "entropy-conservative",
            InterfaceFlux::EntropyStable => "entropy-stable",
        }
    }
}

/// A periodic benchmark problem together with its interface flux choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemDef {
    pub kind: ProblemKind,
    pub interface_flux: InterfaceFlux,
}

impl ProblemDef {
    pub fn new(kind: ProblemKind, interface_flux: InterfaceFlux) -> Self {
        Self {
            kind,
            interface_flux,
        }
    }

    pub fn component_count(&self) -> usize {
        match self.kind {
            ProblemKind::Burgers | ProblemKind::Advection => 1,
            ProblemKind::PcSystem => 2,
        }
    }

    pub fn physical_flux(&self, u: &[f64], out: &mut [f64]) {
        match self.kind {
            ProblemKind::Burgers => out[0] = 0.5 * u[0] * u[0],
            ProblemKind::Advection => out[0] = u[0],
            ProblemKind::PcSystem => {
                let f = flux::pc_physical_flux([u[0], u[1]]);
                out[..2].copy_from_slice(&f);
            }
        }
    }

    pub fn max_speed(&self, u: &[f64]) -> f64 {
        match self.kind {
            ProblemKind::Burgers => u[0].abs(),
            ProblemKind::Advection => 1.0,
            ProblemKind::PcSystem => flux::pc_max_speed([u[0], u[1]]),
        }
    }

    pub fn initial(&self, x: f64) -> Vec<f64> {
        match self.kind {
            ProblemKind::Burgers => vec![problems::burgers_initial(x)],
            ProblemKind::Advection => vec![problems::advection_initial(x)],
            ProblemKind::PcSystem => problems::pc_initial(x).to_vec(),
        }
    }

    pub fn has_reference(&self) -> bool {
        !matches!(self.kind, ProblemKind::PcSystem)
    }

    /// Reference value of component 0, when one exists.
    pub fn reference(&self, x: f64, t: f64) -> Option<Result<f64>> {
        match self.kind {
            ProblemKind::Burgers => Some(problems::burgers_reference(x, t)),
            ProblemKind::Advection => Some(Ok(problems::advection_reference(x, t))),
            ProblemKind::PcSystem => None,
        }
    }

    /// Numerical flux across one interface with `left`/`right` traces.
    pub fn interface_flux(&self, left: &[f64], right: &[f64], out: &mut [f64]) {
        match self.kind {
            ProblemKind::PcSystem => {
                let f = flux::pc_interface_flux(
                    [left[0], left[1]],
                    [right[0], right[1]],
                    self.interface_flux,
                );
                out[..2].copy_from_slice(&f);
            }
            _ => flux::llf_flux(left, right, self, out),
        }
    }
}
