//! Monte Carlo simulation of the block-Markov feedback scheme with random
//! codebooks, typicality decoding and binned compression indices.

mod scheme;
mod typical;

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use scheme::{run_trial, Codebooks, FailureCounts, TrialResult};
pub use typical::Typical;

use crate::channel::Dmbc;
use crate::error::{Error, Result};
use crate::region::AuxCoding;
use crate::simplex::mix_seed;

/// Default cap on the total number of codebook symbols per trial.
pub const DEFAULT_MEM_CAP: u64 = 1 << 26;
/// Relative slack put on the compression rates above their information values.
pub const RATE_SLACK: f64 = 0.05;

/// Rates chosen for a given auxiliary structure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeRates {
    pub r1: f64,
    pub r2: f64,
    /// Bin (feedback) rate.
    pub r_tilde: f64,
    /// Compression codebook rate.
    pub r_hat: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeParams {
    pub n: usize,
    /// Message-carrying blocks; one extra block closes the chain.
    pub blocks: usize,
    pub rates: SchemeRates,
    pub epsilon: f64,
    pub seed: u64,
    pub rfb: f64,
    pub mem_cap: u64,
}

/// Integer set sizes `floor(2^{nR})` of one block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetSizes {
    pub m1: usize,
    pub m2: usize,
    pub bins: usize,
    pub comp: usize,
}

fn set_size(n: usize, r: f64) -> Result<usize> {
    let e = n as f64 * r;
    if e >= 40.0 {
        return Err(Error::MemoryCap(format!("2^{e:.1} codewords in one set")));
    }
    Ok((e.exp2().floor() as usize).max(1))
}

impl SchemeParams {
    pub fn new(rates: SchemeRates, n: usize, blocks: usize, epsilon: f64, seed: u64, rfb: f64) -> Result<Self> {
        let p = Self { n, blocks, rates, epsilon, seed, rfb, mem_cap: DEFAULT_MEM_CAP };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let r = &self.rates;
        if self.n == 0 || self.blocks == 0 {
            return Err(Error::Config("block length and block count must be positive".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Config("typicality tolerance must be positive".into()));
        }
        if [r.r1, r.r2, r.r_tilde, r.r_hat].iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::Domain("rates must be finite and nonnegative".into()));
        }
        if r.r_hat < r.r_tilde {
            return Err(Error::Config("compression rate below bin rate".into()));
        }
        if r.r_tilde > self.rfb + 1e-12 {
            return Err(Error::Infeasible(format!("bin rate {} exceeds feedback rate {}", r.r_tilde, self.rfb)));
        }
        Ok(())
    }

    pub fn sizes(&self) -> Result<SetSizes> {
        let r = &self.rates;
        let s = SetSizes {
            m1: set_size(self.n, r.r1)?,
            m2: set_size(self.n, r.r2)?,
            bins: set_size(self.n, r.r_tilde)?,
            comp: set_size(self.n, r.r_hat)?,
        };
        Ok(SetSizes { comp: s.comp.max(s.bins), ..s })
    }

    /// Codebook symbols a trial allocates.
    pub fn codebook_symbols(&self) -> Result<u64> {
        let s = self.sizes()?;
        let cells = (s.m1 as u64).saturating_mul(s.bins as u64);
        let per_cell = 1 + s.m2 as u64 + s.comp as u64;
        Ok(cells
            .saturating_mul(per_cell)
            .saturating_mul(self.n as u64)
            .saturating_mul(self.blocks as u64 + 1))
    }

    pub fn check_memory(&self) -> Result<()> {
        let need = self.codebook_symbols()?;
        if need > self.mem_cap {
            let s = self.sizes()?;
            return Err(Error::MemoryCap(format!(
                "codebooks need {need} symbols (cap {}): n = {}, |M1| = {}, |M2| = {}, bins = {}, compression = {}",
                self.mem_cap, self.n, s.m1, s.m2, s.bins, s.comp
            )));
        }
        Ok(())
    }

    /// `N = (B + 1) n`.
    pub fn total_uses(&self) -> usize {
        (self.blocks + 1) * self.n
    }

    /// Largest feedback bit count allowed over the whole transmission,
    /// including one bit of rounding slack.
    pub fn feedback_budget(&self) -> f64 {
        self.total_uses() as f64 * self.rfb + 1.0
    }
}

/// Rates at `margin` times the scheme's bounds for `aux` (with `|Q| = 1`).
pub fn rates_from_aux(ch: &Dmbc, aux: &AuxCoding, rfb: f64, margin: f64) -> Result<SchemeRates> {
    if !(margin > 0.0 && margin < 1.0) {
        return Err(Error::Config(format!("margin {margin} outside (0, 1)")));
    }
    if aux.q_card() != 1 {
        return Err(Error::Precondition("the simulated scheme needs |Q| = 1".into()));
    }
    let m = aux.measures(ch)?;
    if m.i_yt_y1_given_uy2 > rfb + 1e-12 {
        return Err(Error::Infeasible(format!(
            "compression needs {:.6} bits per use, feedback link carries {rfb}",
            m.i_yt_y1_given_uy2
        )));
    }
    // rounding noise of a constant compression must not become a rate
    let floor = |v: f64| if v < 1e-12 { 0.0 } else { v };
    let r_tilde = (floor(m.i_yt_y1_given_uy2) * (1.0 + RATE_SLACK)).min(rfb);
    let r1_cap = m.i_u_y1.min(m.i_u_y2 - r_tilde);
    if r1_cap <= 0.0 {
        return Err(Error::Infeasible(format!(
            "no positive R1: I(U;Y1) = {:.6}, I(U;Y2) - Rt = {:.6}",
            m.i_u_y1,
            m.i_u_y2 - r_tilde
        )));
    }
    let r_hat = (floor(m.i_yt_y1_given_u) * (1.0 + RATE_SLACK)).max(r_tilde);
    Ok(SchemeRates { r1: margin * r1_cap, r2: margin * m.i_x_yty2_given_u, r_tilde, r_hat })
}

/// Wilson score interval at 95%.
pub fn wilson95(errors: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = errors as f64 / n;
    let denom = 1.0 + z * z / n;
    let center = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub n: usize,
    pub trials: usize,
    pub errors: usize,
    pub p_err: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub failures: FailureCounts,
    pub max_feedback_bits: u64,
    pub feedback_budget: f64,
    /// Trials whose feedback use exceeded the budget.
    pub feedback_violations: usize,
}

/// Runs `trials` independent trials (fresh codebooks each) in parallel.
pub fn estimate_error(ch: &Dmbc, aux: &AuxCoding, p: &SchemeParams, trials: usize) -> Result<ErrorEstimate> {
    if trials == 0 {
        return Err(Error::Config("need at least one trial".into()));
    }
    p.validate()?;
    p.check_memory()?;
    let results: Vec<TrialResult> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut q = p.clone();
            q.seed = mix_seed(p.seed, t as u64);
            run_trial(ch, aux, &q)
        })
        .collect::<Result<_>>()?;
    let errors = results.iter().filter(|r| !r.success()).count();
    let mut failures = FailureCounts::default();
    for r in &results {
        failures.add(&r.failures);
    }
    let budget = p.feedback_budget();
    let (lo, hi) = wilson95(errors, trials);
    Ok(ErrorEstimate {
        n: p.n,
        trials,
        errors,
        p_err: errors as f64 / trials as f64,
        ci_low: lo,
        ci_high: hi,
        failures,
        max_feedback_bits: results.iter().map(|r| r.feedback_bits_used).max().unwrap_or(0),
        feedback_budget: budget,
        feedback_violations: results.iter().filter(|r| r.feedback_bits_used as f64 > budget).count(),
    })
}

/// `n,p_err,ci95` rows; the last column is the upper Wilson bound.
pub fn write_series_csv<W: Write>(series: &[ErrorEstimate], mut w: W) -> Result<()> {
    writeln!(w, "n,p_err,ci95")?;
    for e in series {
        writeln!(w, "{},{},{}", e.n, e.p_err, e.ci_high)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::make_bsbc;
    use crate::region::{example1_aux, InputPmf};
    use approx::assert_abs_diff_eq;

    #[test]
    fn wilson_examples() {
        let (lo, hi) = wilson95(0, 100);
        assert_abs_diff_eq!(lo, 0.0, epsilon = 1e-15);
        // close to the rule of three
        assert!(hi > 0.03 && hi < 0.04);
        let (lo, hi) = wilson95(50, 100);
        assert!(lo < 0.5 && hi > 0.5);
        assert_abs_diff_eq!(0.5 - lo, hi - 0.5, epsilon = 1e-12);
    }

    #[test]
    fn constant_compression_gives_zero_feedback_rates() {
        let ch = make_bsbc(0.2, 0.1).unwrap();
        let aux = InputPmf::superposition(0.15).unwrap().to_aux(&ch).unwrap();
        let r = rates_from_aux(&ch, &aux, 0.5, 0.5).unwrap();
        assert_eq!(r.r_tilde, 0.0);
        assert_eq!(r.r_hat, 0.0);
        let m = aux.measures(&ch).unwrap();
        assert_abs_diff_eq!(r.r1, 0.5 * m.i_u_y1, epsilon = 1e-12);
        assert_abs_diff_eq!(r.r2, 0.5 * m.i_x_y2_given_u, epsilon = 1e-12);
    }

    #[test]
    fn rates_shrink_with_margin() {
        let ch = make_bsbc(0.2, 0.1).unwrap();
        let aux = example1_aux(&ch, 0.15, 0.35).unwrap();
        let a = rates_from_aux(&ch, &aux, 0.85, 0.9).unwrap();
        let b = rates_from_aux(&ch, &aux, 0.85, 1e-6).unwrap();
        assert!(b.r1 < a.r1 && b.r2 < a.r2 && b.r1 < 1e-5);
        assert!(rates_from_aux(&ch, &aux, 0.85, 0.0).is_err());
        assert!(rates_from_aux(&ch, &aux, 0.85, 1.0).is_err());
    }

    #[test]
    fn infeasible_structures_are_rejected() {
        let ch = make_bsbc(0.2, 0.1).unwrap();
        let aux = example1_aux(&ch, 0.15, 0.05).unwrap();
        // needs more feedback than offered
        assert!(matches!(rates_from_aux(&ch, &aux, 0.1, 0.8), Err(Error::Infeasible(_))));
    }

    #[test]
    fn memory_cap_refuses_large_codebooks() {
        let rates = SchemeRates { r1: 0.2, r2: 0.2, r_tilde: 0.0, r_hat: 0.0 };
        let p = SchemeParams::new(rates, 200, 2, 0.3, 0, 0.5).unwrap();
        assert!(matches!(p.check_memory(), Err(Error::MemoryCap(_))));
        let p = SchemeParams::new(rates, 20, 2, 0.3, 0, 0.5).unwrap();
        assert!(p.check_memory().is_ok());
    }
}
