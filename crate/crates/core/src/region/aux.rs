use serde::{Deserialize, Serialize};

use crate::channel::{Dmbc, X, Y1, Y2};
use crate::error::{Error, Result};
use crate::prob::{star, Axis, FinitePmf, JointPmf, Kernel};

pub const Q: &str = "Q";
pub const U: &str = "U";
pub const YT: &str = "Yt";

/// Auxiliary structure `P_Q P_{U|Q} P_{X|UQ} P_{Yt|U Y1 Q}`.
///
/// `Yt` only depends on `(U, Y1, Q)`, so it is conditionally independent of
/// `(X, Y2)` given those by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct AuxCoding {
    q_pmf: FinitePmf,
    u_given_q: Kernel,
    x_given_uq: Kernel,
    ytilde_given_uy1q: Kernel,
}

/// The flat parameter rows of an [`AuxCoding`], in the order
/// `P_Q`, `P_{U|Q=q}` per `q`, `P_{X|U=u,Q=q}` per `(u, q)`,
/// `P_{Yt|U=u,Y1=y,Q=q}` per `(u, y, q)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuxParams {
    pub q_card: usize,
    pub u_card: usize,
    pub yt_card: usize,
    pub rows: Vec<Vec<f64>>,
}

impl AuxParams {
    /// Row lengths for the given cardinalities.
    pub fn layout(q_card: usize, u_card: usize, x_card: usize, y1_card: usize, yt_card: usize) -> Vec<usize> {
        let mut dims = vec![q_card];
        dims.extend(std::iter::repeat_n(u_card, q_card));
        dims.extend(std::iter::repeat_n(x_card, u_card * q_card));
        dims.extend(std::iter::repeat_n(yt_card, u_card * y1_card * q_card));
        dims
    }
}

impl AuxCoding {
    /// Builds from row lists: `x_given_uq` is indexed by `u * |Q| + q`, and
    /// `ytilde_given_uy1q` by `(u * |Y1| + y1) * |Q| + q`.
    pub fn new(
        ch: &Dmbc,
        q_pmf: Vec<f64>,
        u_given_q: Vec<Vec<f64>>,
        x_given_uq: Vec<Vec<f64>>,
        ytilde_given_uy1q: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let q_card = q_pmf.len();
        let u_card = u_given_q.first().map_or(0, Vec::len);
        let yt_card = ytilde_given_uy1q.first().map_or(0, Vec::len);
        if q_card == 0 || u_card == 0 || yt_card == 0 {
            return Err(Error::Structure("auxiliary alphabets must be nonempty".into()));
        }
        let q_axis = Axis::indexed(Q, q_card);
        let u_axis = Axis::indexed(U, u_card);
        let yt_axis = Axis::indexed(YT, yt_card);
        let q_pmf = FinitePmf::from_probs(q_pmf)?;
        let u_given_q = Kernel::from_rows(vec![q_axis.clone()], vec![u_axis.clone()], u_given_q)?;
        let x_given_uq = Kernel::from_rows(
            vec![u_axis.clone(), q_axis.clone()],
            vec![ch.x().clone()],
            x_given_uq,
        )?;
        let ytilde_given_uy1q = Kernel::from_rows(
            vec![u_axis, ch.y1().clone(), q_axis],
            vec![yt_axis],
            ytilde_given_uy1q,
        )?;
        Ok(Self {
            q_pmf,
            u_given_q,
            x_given_uq,
            ytilde_given_uy1q,
        })
    }

    pub fn from_params(ch: &Dmbc, p: &AuxParams) -> Result<Self> {
        let dims = AuxParams::layout(p.q_card, p.u_card, ch.x_size(), ch.y1_size(), p.yt_card);
        if dims.len() != p.rows.len() || dims.iter().zip(&p.rows).any(|(d, r)| *d != r.len()) {
            return Err(Error::Structure("parameter rows do not match the layout".into()));
        }
        let nu = p.q_card;
        let nx = p.u_card * p.q_card;
        Self::new(
            ch,
            p.rows[0].clone(),
            p.rows[1..1 + nu].to_vec(),
            p.rows[1 + nu..1 + nu + nx].to_vec(),
            p.rows[1 + nu + nx..].to_vec(),
        )
    }

    pub fn to_params(&self) -> AuxParams {
        let mut rows = vec![self.q_pmf.probs().to_vec()];
        rows.extend(self.u_given_q.rows().map(<[f64]>::to_vec));
        rows.extend(self.x_given_uq.rows().map(<[f64]>::to_vec));
        rows.extend(self.ytilde_given_uy1q.rows().map(<[f64]>::to_vec));
        AuxParams {
            q_card: self.q_card(),
            u_card: self.u_card(),
            yt_card: self.yt_card(),
            rows,
        }
    }

    pub fn q_card(&self) -> usize {
        self.q_pmf.len()
    }

    pub fn u_card(&self) -> usize {
        self.u_given_q.n_outputs()
    }

    pub fn yt_card(&self) -> usize {
        self.ytilde_given_uy1q.n_outputs()
    }

    pub fn q_pmf(&self) -> &FinitePmf {
        &self.q_pmf
    }

    pub fn u_given_q(&self) -> &Kernel {
        &self.u_given_q
    }

    pub fn x_given_uq(&self) -> &Kernel {
        &self.x_given_uq
    }

    pub fn ytilde_given_uy1q(&self) -> &Kernel {
        &self.ytilde_given_uy1q
    }

    /// Joint over `(Q, U, X, Y1, Y2, Yt)`.
    pub fn joint(&self, ch: &Dmbc) -> Result<JointPmf> {
        self.q_pmf
            .clone()
            .into_joint(Q)
            .compose(&self.u_given_q)?
            .compose(&self.x_given_uq)?
            .compose(ch.law())?
            .compose(&self.ytilde_given_uy1q)
    }

    pub fn measures(&self, ch: &Dmbc) -> Result<AuxMeasures> {
        AuxMeasures::from_joint(&self.joint(ch)?)
    }

    /// Replaces `Yt` by a constant, keeping `(Q, U, X)`.
    pub fn without_feedback(&self, ch: &Dmbc) -> Result<Self> {
        let mut p = self.to_params();
        let n_yt = self.u_card() * ch.y1_size() * self.q_card();
        let keep = p.rows.len() - n_yt;
        p.rows.truncate(keep);
        p.rows.extend(std::iter::repeat_n(vec![1.0], n_yt));
        p.yt_card = 1;
        Self::from_params(ch, &p)
    }
}

/// A pmf `P_UX` (no time sharing, no compression variable).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputPmf {
    pub u_card: usize,
    pub x_card: usize,
    /// Row-major `P(u, x)`.
    pub probs: Vec<f64>,
}

impl InputPmf {
    pub fn new(u_card: usize, x_card: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != u_card * x_card {
            return Err(Error::Structure("P_UX size mismatch".into()));
        }
        FinitePmf::from_probs(probs.clone())?;
        Ok(Self { u_card, x_card, probs })
    }

    /// `U ~ Bern(1/2)`, `X = U xor Bern(alpha)`.
    pub fn superposition(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Domain(format!("alpha = {alpha}")));
        }
        let a = 0.5 * alpha;
        let b = 0.5 * (1.0 - alpha);
        Self::new(2, 2, vec![b, a, a, b])
    }

    pub fn p_u(&self) -> Vec<f64> {
        self.probs.chunks(self.x_card).map(|r| r.iter().sum()).collect()
    }

    /// `P(x | u)`; rows for zero-mass `u` are uniform.
    pub fn x_given_u(&self) -> Vec<Vec<f64>> {
        self.probs
            .chunks(self.x_card)
            .map(|r| {
                let s: f64 = r.iter().sum();
                if s > 0.0 {
                    r.iter().map(|p| p / s).collect()
                } else {
                    vec![1.0 / self.x_card as f64; self.x_card]
                }
            })
            .collect()
    }

    /// As an auxiliary structure with `|Q| = 1` and constant `Yt`.
    pub fn to_aux(&self, ch: &Dmbc) -> Result<AuxCoding> {
        if self.x_card != ch.x_size() {
            return Err(Error::Structure("P_UX input alphabet differs from the channel's".into()));
        }
        AuxCoding::new(
            ch,
            vec![1.0],
            vec![self.p_u()],
            self.x_given_u(),
            vec![vec![1.0]; self.u_card * ch.y1_size()],
        )
    }
}

/// `U ~ Bern(1/2)`, `X = U xor Bern(alpha)`, `Yt = U xor Y1 xor Bern(beta)`
/// on a binary-input, binary-`Y1` channel.
pub fn example1_aux(ch: &Dmbc, alpha: f64, beta: f64) -> Result<AuxCoding> {
    if ch.x_size() != 2 || ch.y1_size() != 2 {
        return Err(Error::Structure("example family needs binary X and Y1".into()));
    }
    for (n, v) in [("alpha", alpha), ("beta", beta)] {
        if !(0.0..=0.5).contains(&v) {
            return Err(Error::Domain(format!("{n} = {v} outside [0, 1/2]")));
        }
    }
    let bsc = |p: f64, flip: bool| if flip { vec![p, 1.0 - p] } else { vec![1.0 - p, p] };
    let mut yt = Vec::with_capacity(4);
    for u in 0..2 {
        for y1 in 0..2 {
            yt.push(bsc(beta, (u ^ y1) == 1));
        }
    }
    AuxCoding::new(
        ch,
        vec![1.0],
        vec![vec![0.5, 0.5]],
        vec![bsc(alpha, false), bsc(alpha, true)],
        yt,
    )
}

/// Every information quantity the inner bounds need, conditioned on `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuxMeasures {
    /// `I(U;Y1|Q)`
    pub i_u_y1: f64,
    /// `I(U;Y2|Q)`
    pub i_u_y2: f64,
    /// `I(X;Y2|U,Q)`
    pub i_x_y2_given_u: f64,
    /// `I(X;Yt,Y2|U,Q)`
    pub i_x_yty2_given_u: f64,
    /// `I(Yt;Y1|U,Y2,Q)`: the compression rate Receiver 2 must be told.
    pub i_yt_y1_given_uy2: f64,
    /// `I(Yt;Y1|U,Q)`
    pub i_yt_y1_given_u: f64,
    /// `I(X;Y2|Q)`
    pub i_x_y2: f64,
    /// `I(X;Yt|U,Y2,Q)`
    pub i_x_yt_given_uy2: f64,
    /// `I(X,Y2;Yt|U,Q)`
    pub i_xy2_yt_given_u: f64,
    /// `I(X;Y1,Y2|U,Q)`
    pub i_x_y1y2_given_u: f64,
    /// `H(Y1|Y2,U,Q)`
    pub h_y1_given_y2u: f64,
}

impl AuxMeasures {
    /// `joint` must carry axes `Q, U, X, Y1, Y2, Yt`.
    pub fn from_joint(j: &JointPmf) -> Result<Self> {
        Ok(Self {
            i_u_y1: j.cond_mutual_info(&[U], &[Y1], &[Q])?,
            i_u_y2: j.cond_mutual_info(&[U], &[Y2], &[Q])?,
            i_x_y2_given_u: j.cond_mutual_info(&[X], &[Y2], &[U, Q])?,
            i_x_yty2_given_u: j.cond_mutual_info(&[X], &[YT, Y2], &[U, Q])?,
            i_yt_y1_given_uy2: j.cond_mutual_info(&[YT], &[Y1], &[U, Y2, Q])?,
            i_yt_y1_given_u: j.cond_mutual_info(&[YT], &[Y1], &[U, Q])?,
            i_x_y2: j.cond_mutual_info(&[X], &[Y2], &[Q])?,
            i_x_yt_given_uy2: j.cond_mutual_info(&[X], &[YT], &[U, Y2, Q])?,
            i_xy2_yt_given_u: j.cond_mutual_info(&[X, Y2], &[YT], &[U, Q])?,
            i_x_y1y2_given_u: j.cond_mutual_info(&[X], &[Y1, Y2], &[U, Q])?,
            h_y1_given_y2u: j.cond_entropy(&[Y1], &[Y2, U, Q])?,
        })
    }
}

/// The four joint probabilities of `(U xor Yt, U xor Y2)` in the example
/// family, in the order the closed form lists them.
pub fn example1_alphas(p1: f64, p2: f64, alpha: f64, beta: f64) -> Result<[f64; 4]> {
    let s = star(p1, beta)?;
    let (a, ab) = (alpha, 1.0 - alpha);
    let (q, qb) = (p2, 1.0 - p2);
    Ok([
        s * q * a + (1.0 - s) * qb * ab,
        s * qb * a + (1.0 - s) * q * ab,
        s * qb * ab + (1.0 - s) * q * a,
        s * q * ab + (1.0 - s) * qb * a,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::make_bsbc;
    use approx::assert_abs_diff_eq;

    #[test]
    fn params_round_trip() {
        let ch = make_bsbc(0.2, 0.1).unwrap();
        let aux = example1_aux(&ch, 0.15, 0.05).unwrap();
        let back = AuxCoding::from_params(&ch, &aux.to_params()).unwrap();
        assert_eq!(aux, back);
    }

    #[test]
    fn joint_is_normalised_and_factorises() {
        let ch = make_bsbc(0.2, 0.1).unwrap();
        let aux = example1_aux(&ch, 0.2, 0.1).unwrap();
        let j = aux.joint(&ch).unwrap();
        assert_abs_diff_eq!(j.total_mass(), 1.0, epsilon = 1e-12);
        // Yt - (U, Y1, Q) - (X, Y2)
        let m = j.cond_mutual_info(&[YT], &[X, Y2], &[U, Y1, Q]).unwrap();
        assert_abs_diff_eq!(m, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn superposition_measures() {
        let ch = make_bsbc(0.2, 0.1).unwrap();
        let m = InputPmf::superposition(0.15).unwrap().to_aux(&ch).unwrap().measures(&ch).unwrap();
        let h = crate::prob::binary_entropy;
        let s = |a, b| crate::prob::star(a, b).unwrap();
        assert_abs_diff_eq!(m.i_u_y1, 1.0 - h(s(0.15, 0.2)), epsilon = 1e-12);
        assert_abs_diff_eq!(m.i_x_y2_given_u, h(s(0.15, 0.1)) - h(0.1), epsilon = 1e-12);
        assert_eq!(m.i_yt_y1_given_uy2, 0.0);
    }

    #[test]
    fn alphas_sum_to_one() {
        for (a, b) in [(0.0, 0.0), (0.1, 0.3), (0.5, 0.5), (0.27, 0.02)] {
            let s: f64 = example1_alphas(0.25, 0.1, a, b).unwrap().iter().sum();
            assert_abs_diff_eq!(s, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn without_feedback_drops_compression() {
        let ch = make_bsbc(0.2, 0.1).unwrap();
        let aux = example1_aux(&ch, 0.2, 0.1).unwrap();
        let plain = aux.without_feedback(&ch).unwrap();
        assert_eq!(plain.yt_card(), 1);
        let (a, b) = (aux.measures(&ch).unwrap(), plain.measures(&ch).unwrap());
        assert_abs_diff_eq!(a.i_u_y1, b.i_u_y1, epsilon = 1e-15);
        assert_abs_diff_eq!(b.i_x_yty2_given_u, b.i_x_y2_given_u, epsilon = 1e-12);
    }
}
