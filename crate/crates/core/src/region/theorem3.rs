//! Explicit strict-improvement construction for strictly less-noisy channels.
//!
//! A boundary point of the no-feedback region is mixed, through a binary
//! time-sharing variable, with a dominating point of the enhanced channel
//! where Receiver 1 simply feeds back its whole output.

use serde::{Deserialize, Serialize};

use super::aux::{AuxCoding, AuxMeasures, InputPmf};
use super::eval::{cor1_feasible, nofb_point};
use super::rate::RatePoint;
use crate::channel::{enhance, Dmbc};
use crate::error::{Error, Result};

/// Slack of the capped-compression feasibility check on the mixture.
pub const FEAS_TOL: f64 = 1e-12;
/// Safety factor that keeps the chosen mixing weight off its upper limit.
pub const GAMMA_SHRINK: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem3Result {
    pub base: RatePoint,
    /// The dominating enhanced-channel point.
    pub enhanced: RatePoint,
    pub improved: RatePoint,
    pub gamma: f64,
    /// `H(Y1 | Y2, U)` under the enhanced-channel pmf.
    pub h2: f64,
    /// `I(U;Y2) - I(U;Y1)` under the base pmf.
    pub i1: f64,
    /// `I(U;Y2) - I(U;Y1)` under the enhanced-channel pmf.
    pub i2: f64,
    /// `I(Yt;Y1|U,Y2,Q)` of the mixture.
    pub compression: f64,
    /// `I(U;Y2|Q) - I(U;Y1|Q)` of the mixture.
    pub gap: f64,
    pub feasible: bool,
}

struct Side {
    point: RatePoint,
    measures: AuxMeasures,
}

fn base_side(ch: &Dmbc, p: &InputPmf) -> Result<Side> {
    let m = p.to_aux(ch)?.measures(ch)?;
    Ok(Side { point: nofb_point(&m), measures: m })
}

/// Enhanced-channel rates of `p`, measured on the original channel with
/// `Yt = Y1`, which gives `I(X;Y1 Y2|U)` as the `R2` term.
fn enh_side(ch: &Dmbc, p: &InputPmf) -> Result<Side> {
    let aux = relay_aux(ch, p)?;
    let m = aux.measures(ch)?;
    Ok(Side { point: RatePoint { r1: m.i_u_y1, r2: m.i_x_yty2_given_u }, measures: m })
}

fn identity_rows(n: usize) -> impl Iterator<Item = Vec<f64>> {
    (0..n).map(move |i| {
        let mut r = vec![0.0; n];
        r[i] = 1.0;
        r
    })
}

fn relay_aux(ch: &Dmbc, p: &InputPmf) -> Result<AuxCoding> {
    let ny = ch.y1_size();
    let mut yt = Vec::with_capacity(p.u_card * ny);
    for _ in 0..p.u_card {
        yt.extend(identity_rows(ny));
    }
    AuxCoding::new(ch, vec![1.0], vec![p.p_u()], p.x_given_u(), yt)
}

/// The `Q`-mixture: `Q = 1` (weight `1 - gamma`) runs `base` with constant
/// `Yt`, `Q = 2` (weight `gamma`) runs `enh` with `Yt = Y1`.
pub fn mixture_aux(ch: &Dmbc, base: &InputPmf, enh: &InputPmf, gamma: f64) -> Result<AuxCoding> {
    let nu = base.u_card.max(enh.u_card);
    let ny = ch.y1_size();
    let nx = ch.x_size();
    let pad = |v: Vec<f64>| {
        let mut v = v;
        v.resize(nu, 0.0);
        v
    };
    let xs = |p: &InputPmf, u: usize| {
        if u < p.u_card {
            p.x_given_u()[u].clone()
        } else {
            vec![1.0 / nx as f64; nx]
        }
    };
    let mut x_rows = Vec::with_capacity(nu * 2);
    for u in 0..nu {
        x_rows.push(xs(base, u));
        x_rows.push(xs(enh, u));
    }
    let mut yt_rows = Vec::with_capacity(nu * ny * 2);
    let mut constant = vec![0.0; ny];
    constant[0] = 1.0;
    for _u in 0..nu {
        for relay in identity_rows(ny) {
            yt_rows.push(constant.clone());
            yt_rows.push(relay);
        }
    }
    AuxCoding::new(
        ch,
        vec![1.0 - gamma, gamma],
        vec![pad(base.p_u()), pad(enh.p_u())],
        x_rows,
        yt_rows,
    )
}

/// Largest mixing weight allowed by the feedback budget and the rate gap,
/// shrunk by [`GAMMA_SHRINK`] and clamped into `(0, 1)`.
pub fn choose_gamma(rfb: f64, h2: f64, i1: f64, i2: f64) -> f64 {
    let budget = if h2 > 0.0 { rfb / h2 } else { 1.0 };
    let denom = h2 - i2 + i1;
    let gap = if denom > 0.0 { i1 / denom } else { 1.0 };
    let g = budget.min(gap).min(1.0) * (1.0 - GAMMA_SHRINK);
    g.clamp(f64::MIN_POSITIVE, 1.0 - GAMMA_SHRINK)
}

pub fn theorem3_construct(ch: &Dmbc, base: &InputPmf, enh: &InputPmf, rfb: f64) -> Result<Theorem3Result> {
    if !(rfb > 0.0) {
        return Err(Error::Precondition(format!("feedback rate must be positive, got {rfb}")));
    }
    let b = base_side(ch, base)?;
    let e = enh_side(ch, enh)?;
    if !e.point.strictly_dominates(&b.point, 0.0) {
        return Err(Error::Precondition("enhanced point does not dominate the base point".into()));
    }
    let i1 = b.measures.i_u_y2 - b.measures.i_u_y1;
    let i2 = e.measures.i_u_y2 - e.measures.i_u_y1;
    if i1 <= 0.0 || i2 <= 0.0 {
        return Err(Error::Precondition("channel not strictly less-noisy at these structures".into()));
    }
    let h2 = e.measures.h_y1_given_y2u;
    let gamma = choose_gamma(rfb, h2, i1, i2);
    let m = mixture_aux(ch, base, enh, gamma)?.measures(ch)?;
    let improved = RatePoint { r1: m.i_u_y1, r2: m.i_x_yty2_given_u };
    let feasible = cor1_feasible(&m, rfb, FEAS_TOL) && improved.strictly_dominates(&b.point, 0.0);
    Ok(Theorem3Result {
        base: b.point,
        enhanced: e.point,
        improved,
        gamma,
        h2,
        i1,
        i2,
        compression: m.i_yt_y1_given_uy2,
        gap: m.i_u_y2 - m.i_u_y1,
        feasible,
    })
}

/// Among `candidates`, the pmf whose enhanced-channel point beats the
/// no-feedback point of `base` by the widest margin in the worse coordinate.
pub fn find_dominating_enh(ch: &Dmbc, base: &InputPmf, candidates: &[InputPmf]) -> Result<InputPmf> {
    let b = base_side(ch, base)?.point;
    let mut best: Option<(f64, &InputPmf)> = None;
    for c in candidates {
        let e = enh_side(ch, c)?;
        if e.measures.i_u_y2 - e.measures.i_u_y1 <= 0.0 || e.measures.h_y1_given_y2u <= 0.0 {
            continue;
        }
        let margin = (e.point.r1 - b.r1).min(e.point.r2 - b.r2);
        if margin > 0.0 && best.map_or(true, |(m, _)| margin > m) {
            best = Some((margin, c));
        }
    }
    best.map(|(_, c)| c.clone())
        .ok_or_else(|| Error::Precondition("no candidate dominates the base point on the enhanced channel".into()))
}

/// Enhanced-channel rates of `p` computed directly on `enhance(ch)`.
pub fn enhanced_point(ch: &Dmbc, p: &InputPmf) -> Result<RatePoint> {
    let e = enhance(ch);
    Ok(nofb_point(&p.to_aux(&e)?.measures(&e)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{make_bebc, make_bsbc};
    use approx::assert_abs_diff_eq;

    fn family(step: f64) -> Vec<InputPmf> {
        let n = (0.5 / step).round() as usize;
        (0..=n).map(|k| InputPmf::superposition(k as f64 * step).unwrap()).collect()
    }

    #[test]
    fn relay_side_matches_enhanced_channel() {
        let ch = make_bsbc(0.2, 0.1).unwrap();
        let p = InputPmf::superposition(0.12).unwrap();
        let direct = enhanced_point(&ch, &p).unwrap();
        let relay = enh_side(&ch, &p).unwrap().point;
        assert_abs_diff_eq!(direct.r1, relay.r1, epsilon = 1e-12);
        assert_abs_diff_eq!(direct.r2, relay.r2, epsilon = 1e-12);
    }

    #[test]
    fn bsbc_construction_is_feasible() {
        let ch = make_bsbc(0.2, 0.1).unwrap();
        let base = InputPmf::superposition(0.15).unwrap();
        let enh = find_dominating_enh(&ch, &base, &family(0.001)).unwrap();
        let r = theorem3_construct(&ch, &base, &enh, 0.05).unwrap();
        assert!(r.feasible);
        assert!(r.gamma <= 0.05 / r.h2);
        assert!(r.improved.strictly_dominates(&r.base, 1e-6));
        // compression rate of the mixture is gamma * H2
        assert_abs_diff_eq!(r.compression, r.gamma * r.h2, epsilon = 1e-9);
        // mixture point is the convex combination
        let g = r.gamma;
        assert_abs_diff_eq!(r.improved.r1, (1.0 - g) * r.base.r1 + g * r.enhanced.r1, epsilon = 1e-9);
        assert_abs_diff_eq!(r.improved.r2, (1.0 - g) * r.base.r2 + g * r.enhanced.r2, epsilon = 1e-9);
        assert!(g * r.h2 <= 0.05f64.min(g * r.i2 + (1.0 - g) * r.i1) + 1e-12);
    }

    #[test]
    fn bebc_construction_is_feasible() {
        let ch = make_bebc(0.3, 0.1).unwrap();
        let base = InputPmf::superposition(0.2).unwrap();
        let enh = find_dominating_enh(&ch, &base, &family(0.001)).unwrap();
        let r = theorem3_construct(&ch, &base, &enh, 0.01).unwrap();
        assert!(r.feasible);
    }

    #[test]
    fn preconditions() {
        let ch = make_bsbc(0.2, 0.1).unwrap();
        let base = InputPmf::superposition(0.15).unwrap();
        assert!(theorem3_construct(&ch, &base, &base, 0.0).is_err());
        // same pmf only ties on R1
        assert!(theorem3_construct(&ch, &base, &base, 0.1).is_err());
        // equal-noise channel has no rate gap
        let flat = make_bsbc(0.2, 0.2).unwrap();
        let enh = InputPmf::superposition(0.1).unwrap();
        assert!(theorem3_construct(&flat, &base, &enh, 0.1).is_err());
    }
}
