//! Closed-form feedback region of the binary symmetric broadcast channel
//! under the superposition / noisy-relay family
//! `U ~ Bern(1/2)`, `X = U xor Bern(alpha)`, `Yt = U xor Y1 xor Bern(beta)`.

use serde::{Deserialize, Serialize};

use super::aux::example1_alphas;
use super::eval::{eval_nofb, SearchConfig, FEAS_SLACK};
use super::rate::{max_vertical_gain, RatePoint, RateRegion};
use crate::channel::make_bsbc;
use crate::error::{Error, Result};
use crate::prob::{binary_entropy as h, entropy_bits, star};

/// Bounds of one `(alpha, beta)` member of the family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleBounds {
    pub alpha: f64,
    pub beta: f64,
    /// Cap on `R1`: the smaller of the two `R1` constraints.
    pub r1: f64,
    pub r2: f64,
    /// Compression rate that has to fit into the feedback link.
    pub feedback: f64,
}

impl ExampleBounds {
    pub fn point(&self, rfb: f64) -> Option<RatePoint> {
        if self.feedback > rfb + FEAS_SLACK || self.r1 < -FEAS_SLACK {
            return None;
        }
        Some(RatePoint { r1: self.r1.max(0.0), r2: self.r2.max(0.0) })
    }
}

fn check_order(p1: f64, p2: f64) -> Result<()> {
    if !(0.0 < p2 && p2 < p1 && p1 < 0.5) {
        return Err(Error::Precondition(format!("need 0 < p2 < p1 < 1/2, got p1 = {p1}, p2 = {p2}")));
    }
    Ok(())
}

pub fn example_bounds(p1: f64, p2: f64, alpha: f64, beta: f64) -> Result<ExampleBounds> {
    check_order(p1, p2)?;
    for (n, v) in [("alpha", alpha), ("beta", beta)] {
        if !(0.0..=0.5).contains(&v) {
            return Err(Error::Domain(format!("{n} = {v} outside [0, 1/2]")));
        }
    }
    let ha = entropy_bits(&example1_alphas(p1, p2, alpha, beta)?);
    Ok(ExampleBounds {
        alpha,
        beta,
        r1: (1.0 - h(star(alpha, p1)?)).min(1.0 + h(beta) - ha),
        r2: ha - h(p2) - h(star(p1, beta)?),
        feedback: ha - h(star(alpha, p2)?) - h(beta),
    })
}

/// Every feasible point of the family over the `alphas x betas` grid.
pub fn eval_bsbc_example(p1: f64, p2: f64, rfb: f64, alphas: &[f64], betas: &[f64]) -> Result<RateRegion> {
    check_order(p1, p2)?;
    if rfb.is_nan() || rfb < 0.0 {
        return Err(Error::Domain(format!("feedback rate {rfb}")));
    }
    if alphas.is_empty() || betas.is_empty() {
        return Err(Error::Empty("empty (alpha, beta) grid".into()));
    }
    let mut region = RateRegion::default();
    for &a in alphas {
        for &b in betas {
            if let Some(p) = example_bounds(p1, p2, a, b)?.point(rfb) {
                region.push(p);
            }
        }
    }
    Ok(region)
}

/// `steps + 1` evenly spaced values in `[0, 1/2]`.
pub fn half_grid(steps: usize) -> Vec<f64> {
    let steps = steps.max(1);
    (0..=steps).map(|k| 0.5 * k as f64 / steps as f64).collect()
}

/// One curve pair of the feedback-gain figure.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GainCurve {
    pub p1: f64,
    pub p2: f64,
    pub rfb: f64,
    pub nofb: RateRegion,
    pub fb: RateRegion,
    /// Largest vertical gap between the two envelopes and where it occurs.
    pub gain: f64,
    pub gain_at: f64,
}

/// No-feedback region by search and feedback region by the closed form,
/// compared on a fine `R1` sweep.
pub fn gain_curve(p1: f64, p2: f64, rfb: f64, grid_steps: usize, cfg: &SearchConfig) -> Result<GainCurve> {
    let g = half_grid(grid_steps);
    let fb = eval_bsbc_example(p1, p2, rfb, &g, &g)?;
    let nofb = eval_nofb(&make_bsbc(p1, p2)?, cfg)?;
    let hi = nofb.max_r1().min(fb.max_r1());
    let (gain, gain_at) = max_vertical_gain(&fb, &nofb, 0.0, hi, 1001)?;
    Ok(GainCurve { p1, p2, rfb, nofb, fb, gain, gain_at })
}
