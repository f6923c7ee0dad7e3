//! Troubled-element detection by comparing PA sensor values of two orders.

use serde::{Deserialize, Serialize};

use crate::pa::PaMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorConfig {
    pub kappa: f64,
    pub lambda_max: f64,
    pub order_low: usize,
    pub order_high: usize,
    /// Relative floor: elements with `s1 <= s1_floor * (1 + max|u|)` count as smooth.
    pub s1_floor: f64,
}

impl Default for SensorConfig {
    fn default() -> Self {
        Self {
            kappa: 0.8,
            lambda_max: 4e2,
            order_low: 1,
            order_high: 3,
            s1_floor: 1e-10,
        }
    }
}

impl SensorConfig {
    pub fn validate(&self, degree: usize) -> Result<(), String> {
        if !(0.0..1.0).contains(&self.kappa) {
            return Err(format!(
                "sensor.kappa must lie in [0, 1), got {}",
                self.kappa
            ));
        }
        if !(self.lambda_max > 0.0) {
            return Err(format!(
                "sensor.lambda_max must be positive, got {}",
                self.lambda_max
            ));
        }
        if self.order_low < 1 || self.order_low >= self.order_high {
            return Err(format!(
                "sensor orders must satisfy 1 <= order_low < order_high, got ({}, {})",
                self.order_low, self.order_high
            ));
        }
        if self.order_high > degree {
            return Err(format!(
                "sensor.order_high = {} exceeds the polynomial degree {}",
                self.order_high, degree
            ));
        }
        if !(self.s1_floor > 0.0) {
            return Err("sensor.s1_floor must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensorReading {
    pub s1: f64,
    pub s3: f64,
    pub ratio: f64,
    pub lambda: f64,
    pub troubled: bool,
}

fn max_abs_pa(pa: &PaMatrix, nodal: &[f64]) -> f64 {
    let mut buf = vec![0.0; pa.rows()];
    pa.apply_into(nodal, &mut buf);
    buf.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Largest PA magnitudes at the midpoints for the low- and high-order operators.
pub fn sensor_values(nodal: &[f64], pa_low: &PaMatrix, pa_high: &PaMatrix) -> (f64, f64) {
    (max_abs_pa(pa_low, nodal), max_abs_pa(pa_high, nodal))
}

/// Piecewise-linear ramp from 0 at `kappa` to `lambda_max` at ratio 1.
pub fn ramp(ratio: f64, kappa: f64, lambda_max: f64) -> f64 {
    if ratio <= kappa {
        0.0
    } else if ratio < 1.0 {
        lambda_max * (ratio - kappa) / (1.0 - kappa)
    } else {
        lambda_max
    }
}

fn reading_with_floor(s1: f64, s3: f64, floor: f64, cfg: &SensorConfig) -> SensorReading {
    let ratio = if s1 > floor { s3 / s1 } else { 0.0 };
    let lambda = ramp(ratio, cfg.kappa, cfg.lambda_max);
    SensorReading {
        s1,
        s3,
        ratio,
        lambda,
        troubled: lambda > 0.0,
    }
}

/// Regularization strength from precomputed sensor values. `cfg.s1_floor`
/// is used as an absolute floor here.
pub fn regularization_strength(s1: f64, s3: f64, cfg: &SensorConfig) -> SensorReading {
    reading_with_floor(s1, s3, cfg.s1_floor, cfg)
}

/// Full sensor evaluation for one element's nodal values.
pub fn read_element(
    nodal: &[f64],
    pa_low: &PaMatrix,
    pa_high: &PaMatrix,
    cfg: &SensorConfig,
) -> SensorReading {
    let (s1, s3) = sensor_values(nodal, pa_low, pa_high);
    let scale = nodal.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    reading_with_floor(s1, s3, cfg.s1_floor * (1.0 + scale), cfg)
}
