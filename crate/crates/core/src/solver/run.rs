//! Time loop with per-step troubled-element regularization.

use log::{debug, info, warn};
use serde::Serialize;

use super::problem::ProblemDef;
use super::rhs::rhs;
use super::state::SolutionState;
use super::time::{compute_dt, ssprk33_step};
use crate::admm::admm_solve;
use crate::config::{RegularizationMode, RunConfig};
use crate::element::{Mesh, ReferenceElement};
use crate::error::Result;
use crate::mass::mass_correct;
use crate::pa::PaMatrix;
use crate::problems::{energy, error_norms, total_mass, ErrorReport};
use crate::sensor::{read_element, SensorReading};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsRow {
    pub step: usize,
    pub time: f64,
    pub dt: f64,
    pub mass: Vec<f64>,
    pub energy: f64,
    pub troubled_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensorLogRow {
    pub step: usize,
    pub element: usize,
    pub variable: usize,
    pub reading: SensorReading,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Breakdown {
    pub step: usize,
    pub time: f64,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub config: RunConfig,
    pub problem: ProblemDef,
    pub element: ReferenceElement,
    pub mesh: Mesh,
    /// Last finite state reached.
    pub final_state: SolutionState,
    pub steps: usize,
    pub errors: Option<ErrorReport>,
    pub breakdown: Option<Breakdown>,
    pub diagnostics: Vec<DiagnosticsRow>,
    pub sensor_log: Vec<SensorLogRow>,
    /// Readings of every element and variable at the last sensor evaluation.
    pub final_readings: Vec<SensorLogRow>,
}

impl RunReport {
    pub fn broke_down(&self) -> bool {
        self.breakdown.is_some()
    }
}

struct Regularizer {
    pa_low: PaMatrix,
    pa_high: PaMatrix,
}

fn diagnostics_row(
    step: usize,
    dt: f64,
    state: &SolutionState,
    mesh: &Mesh,
    element: &ReferenceElement,
    troubled_count: usize,
) -> DiagnosticsRow {
    DiagnosticsRow {
        step,
        time: state.time,
        dt,
        mass: (0..state.components)
            .map(|c| total_mass(state, c, mesh, element))
            .collect(),
        energy: energy(state, mesh, element),
        troubled_count,
    }
}

/// Evaluates the sensor on every element and variable, regularizing troubled
/// ones when `mode` asks for it. Returns all readings.
fn sense_and_regularize(
    state: &mut SolutionState,
    step: usize,
    reg: &Regularizer,
    config: &RunConfig,
    element: &ReferenceElement,
) -> Result<Vec<SensorLogRow>> {
    let mut rows = Vec::with_capacity(state.components * state.elements);
    for i in 0..state.elements {
        for c in 0..state.components {
            let u = state.element(c, i);
            let reading = read_element(u, &reg.pa_low, &reg.pa_high, &config.sensor);
            rows.push(SensorLogRow {
                step,
                element: i,
                variable: c,
                reading,
            });
            if config.mode == RegularizationMode::None || reading.lambda <= 0.0 {
                continue;
            }
            let params = config.admm.params(reading.lambda);
            let sparse = admm_solve(u, &reg.pa_high, &params)?;
            let new = match config.mode {
                RegularizationMode::L1MassCorrected => mass_correct(u, &sparse, element),
                _ => sparse,
            };
            state.element_mut(c, i).copy_from_slice(&new);
        }
    }
    Ok(rows)
}

/// Runs one configuration (sweeps must be expanded first).
pub fn run_simulation(config: &RunConfig) -> Result<RunReport> {
    let problem = ProblemDef::new(config.problem, config.flux);
    let element = ReferenceElement::new(config.p)?;
    let mesh = Mesh::new(config.domain[0], config.domain[1], config.elements)?;
    let mut state = SolutionState::sample(problem.component_count(), &mesh, &element, |x| {
        problem.initial(x)
    });

    let regularizer = if config.p >= config.sensor.order_high {
        Some(Regularizer {
            pa_low: PaMatrix::new(&element, config.sensor.order_low)?,
            pa_high: PaMatrix::new(&element, config.sensor.order_high)?,
        })
    } else {
        None
    };

    let mut diagnostics = vec![diagnostics_row(0, 0.0, &state, &mesh, &element, 0)];
    let mut sensor_log = Vec::new();
    let mut final_readings = Vec::new();
    let mut breakdown = None;
    let mut step = 0;

    while state.time < config.t_end {
        if step >= config.max_steps {
            breakdown = Some(Breakdown {
                step,
                time: state.time,
                reason: format!("step limit {} reached", config.max_steps),
            });
            break;
        }
        let st = compute_dt(&state, &mesh, &element, &problem, config.cfl, config.t_end);
        if !(st.dt > 0.0 && st.dt.is_finite()) {
            breakdown = Some(Breakdown {
                step,
                time: state.time,
                reason: format!("invalid time step {}", st.dt),
            });
            break;
        }
        let mut next = ssprk33_step(
            &state,
            |u, out| rhs(u, &element, &mesh, &problem, out),
            st.dt,
        );
        if st.lands_on_end {
            next.time = config.t_end;
        }
        step += 1;
        if !next.is_finite() {
            breakdown = Some(Breakdown {
                step,
                time: next.time,
                reason: "non-finite state after time step".into(),
            });
            break;
        }

        let mut troubled = 0;
        if let Some(reg) = &regularizer {
            if step % config.apply_every == 0 {
                match sense_and_regularize(&mut next, step, reg, config, &element) {
                    Ok(rows) => {
                        troubled = rows.iter().filter(|r| r.reading.troubled).count();
                        sensor_log.extend(rows.iter().filter(|r| r.reading.troubled).copied());
                        final_readings = rows;
                    }
                    Err(e) => {
                        breakdown = Some(Breakdown {
                            step,
                            time: next.time,
                            reason: e.to_string(),
                        });
                        break;
                    }
                }
                if !next.is_finite() {
                    breakdown = Some(Breakdown {
                        step,
                        time: next.time,
                        reason: "non-finite state after regularization".into(),
                    });
                    break;
                }
            }
        }
        state = next;
        diagnostics.push(diagnostics_row(
            step, st.dt, &state, &mesh, &element, troubled,
        ));
        debug!(
            "step {step} t={:.6} dt={:.3e} troubled={troubled}",
            state.time, st.dt
        );
    }

    // Untroubled readings of the final evaluation are logged too.
    if breakdown.is_none() {
        sensor_log.extend(
            final_readings
                .iter()
                .filter(|r| !r.reading.troubled)
                .copied(),
        );
        sensor_log.sort_by_key(|r| (r.step, r.element, r.variable));
    }

    let errors = match (&breakdown, problem.has_reference()) {
        (None, true) => {
            let t = state.time;
            match error_norms(
                &state,
                |x| {
                    problem
                        .reference(x, t)
                        .expect("scalar problems have a reference")
                },
                &mesh,
                &element,
            ) {
                Ok(r) => Some(r),
                Err(e) => {
                    warn!("no error report: {e}");
                    None
                }
            }
        }
        _ => None,
    };

    match &breakdown {
        Some(b) => warn!(
            "breakdown at step {} (t = {}): {}",
            b.step, b.time, b.reason
        ),
        None => info!(
            "{} p={} I={} mode={} finished in {step} steps",
            config.problem.name(),
            config.p,
            config.elements,
            config.mode.name()
        ),
    }

    Ok(RunReport {
        config: config.clone(),
        problem,
        element,
        mesh,
        final_state: state,
        steps: step,
        errors,
        breakdown,
        diagnostics,
        sensor_log,
        final_readings,
    })
}
