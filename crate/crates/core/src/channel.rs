//! Discrete memoryless broadcast channels and the orderings between their
//! two receivers.
//!
//! A [`Dmbc`] holds the law `P(y1, y2 | x)` as a [`Kernel`] from axis `X` to
//! axes `(Y1, Y2)`. Constructors cover the binary symmetric and binary
//! erasure families, cascades `X -> Y2 -> Y1`, arbitrary matrices and the
//! enhanced channel in which receiver 2 also sees `Y1`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{Axis, Kernel};
use crate::simplex;

pub const X: &str = "X";
pub const Y1: &str = "Y1";
pub const Y2: &str = "Y2";

/// Tie tolerance for comparing information quantities.
pub const TIE_TOL: f64 = 1e-9;

const GRID_CAP: usize = 200_000;
const BATCH: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct Dmbc {
    law: Kernel,
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {v} is not in [0, 1]")))
    }
}

impl Dmbc {
    /// `rows[x]` lists `P(y1, y2 | x)` with `y2` varying fastest.
    pub fn from_matrix(
        x: Vec<String>,
        y1: Vec<String>,
        y2: Vec<String>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let x = Axis::new(X, x)?;
        let y1 = Axis::new(Y1, y1)?;
        let y2 = Axis::new(Y2, y2)?;
        if rows.len() != x.size() {
            return Err(Error::Structure(format!(
                "{} rows for an input alphabet of {}",
                rows.len(),
                x.size()
            )));
        }
        Self::from_kernel(Kernel::from_rows(vec![x], vec![y1, y2], rows)?)
    }

    pub fn from_kernel(law: Kernel) -> Result<Self> {
        let from: Vec<&str> = law.from_axes().iter().map(Axis::name).collect();
        let to: Vec<&str> = law.to_axes().iter().map(Axis::name).collect();
        if from != [X] || to != [Y1, Y2] {
            return Err(Error::Structure(format!(
                "channel law must map [X] to [Y1, Y2], got {from:?} -> {to:?}"
            )));
        }
        Ok(Self { law })
    }

    pub fn law(&self) -> &Kernel {
        &self.law
    }

    pub fn x(&self) -> &Axis {
        &self.law.from_axes()[0]
    }

    pub fn y1(&self) -> &Axis {
        &self.law.to_axes()[0]
    }

    pub fn y2(&self) -> &Axis {
        &self.law.to_axes()[1]
    }

    pub fn x_size(&self) -> usize {
        self.x().size()
    }

    pub fn y1_size(&self) -> usize {
        self.y1().size()
    }

    pub fn y2_size(&self) -> usize {
        self.y2().size()
    }

    /// `P(y1, y2 | x)`.
    pub fn prob(&self, x: usize, y1: usize, y2: usize) -> f64 {
        self.law.row(x)[y1 * self.y2_size() + y2]
    }

    /// `P(y1 | x)` as an `|X| x |Y1|` row-major matrix.
    pub fn y1_marginal(&self) -> Vec<f64> {
        let (ny1, ny2) = (self.y1_size(), self.y2_size());
        let mut out = vec![0.0; self.x_size() * ny1];
        for x in 0..self.x_size() {
            for a in 0..ny1 {
                out[x * ny1 + a] = (0..ny2).map(|b| self.prob(x, a, b)).sum();
            }
        }
        out
    }

    /// `P(y2 | x)` as an `|X| x |Y2|` row-major matrix.
    pub fn y2_marginal(&self) -> Vec<f64> {
        let (ny1, ny2) = (self.y1_size(), self.y2_size());
        let mut out = vec![0.0; self.x_size() * ny2];
        for x in 0..self.x_size() {
            for b in 0..ny2 {
                out[x * ny2 + b] = (0..ny1).map(|a| self.prob(x, a, b)).sum();
            }
        }
        out
    }

    /// Cardinality bound `min{|X|, |Y1|, |Y2|} + 1` for the auxiliary `U`.
    pub fn aux_bound(&self) -> usize {
        self.x_size().min(self.y1_size()).min(self.y2_size()) + 1
    }
}

/// `Y_i = X xor Z_i` with independent `Z_i ~ Bern(p_i)`.
pub fn make_bsbc(p1: f64, p2: f64) -> Result<Dmbc> {
    check_unit("p1", p1)?;
    check_unit("p2", p2)?;
    let flip = |x: usize, y: usize, p: f64| if x == y { 1.0 - p } else { p };
    let rows = (0..2)
        .map(|x| {
            let mut r = Vec::with_capacity(4);
            for y1 in 0..2 {
                for y2 in 0..2 {
                    r.push(flip(x, y1, p1) * flip(x, y2, p2));
                }
            }
            r
        })
        .collect();
    let b = || vec!["0".to_string(), "1".to_string()];
    Dmbc::from_matrix(b(), b(), b(), rows)
}

/// Binary input, each output independently erased (`e`) with probability `d_i`.
pub fn make_bebc(d1: f64, d2: f64) -> Result<Dmbc> {
    check_unit("d1", d1)?;
    check_unit("d2", d2)?;
    // output index 2 is the erasure symbol
    let out = |x: usize, y: usize, d: f64| {
        if y == 2 {
            d
        } else if y == x {
            1.0 - d
        } else {
            0.0
        }
    };
    let rows = (0..2)
        .map(|x| {
            let mut r = Vec::with_capacity(9);
            for y1 in 0..3 {
                for y2 in 0..3 {
                    r.push(out(x, y1, d1) * out(x, y2, d2));
                }
            }
            r
        })
        .collect();
    let t = || vec!["0".to_string(), "1".to_string(), "e".to_string()];
    Dmbc::from_matrix(vec!["0".into(), "1".into()], t(), t(), rows)
}

/// Physically degraded channel `X -> Y2 -> Y1` from two stochastic matrices.
pub fn make_cascade(x_to_y2: &[Vec<f64>], y2_to_y1: &[Vec<f64>]) -> Result<Dmbc> {
    let nx = x_to_y2.len();
    let ny2 = x_to_y2.first().map_or(0, Vec::len);
    let ny1 = y2_to_y1.first().map_or(0, Vec::len);
    if nx == 0 || ny2 == 0 || ny1 == 0 || y2_to_y1.len() != ny2 {
        return Err(Error::Structure("cascade matrices do not chain".into()));
    }
    let first = Kernel::from_rows(vec![Axis::indexed(X, nx)], vec![Axis::indexed(Y2, ny2)], x_to_y2.to_vec())?;
    let second = Kernel::from_rows(vec![Axis::indexed(Y2, ny2)], vec![Axis::indexed(Y1, ny1)], y2_to_y1.to_vec())?;
    let mut rows = vec![vec![0.0; ny1 * ny2]; nx];
    for (x, row) in rows.iter_mut().enumerate() {
        for y1 in 0..ny1 {
            for y2 in 0..ny2 {
                row[y1 * ny2 + y2] = first.row(x)[y2] * second.row(y2)[y1];
            }
        }
    }
    let labels = |n: usize| (0..n).map(|i| i.to_string()).collect();
    Dmbc::from_matrix(labels(nx), labels(ny1), labels(ny2), rows)
}

/// Reveals `Y1` to receiver 2: the new second output is the pair `(Y1, Y2)`.
pub fn enhance(ch: &Dmbc) -> Dmbc {
    let (ny1, ny2) = (ch.y1_size(), ch.y2_size());
    let mut pair_labels = Vec::with_capacity(ny1 * ny2);
    for a in ch.y1().labels() {
        for b in ch.y2().labels() {
            pair_labels.push(format!("({a},{b})"));
        }
    }
    let width = ny1 * ny1 * ny2;
    let rows = (0..ch.x_size())
        .map(|x| {
            let mut r = vec![0.0; width];
            for a in 0..ny1 {
                for b in 0..ny2 {
                    r[a * (ny1 * ny2) + a * ny2 + b] = ch.prob(x, a, b);
                }
            }
            r
        })
        .collect();
    Dmbc::from_matrix(
        ch.x().labels().to_vec(),
        ch.y1().labels().to_vec(),
        pair_labels,
        rows,
    )
    .expect("enhanced law is valid whenever the original is")
}

/// True when `P(y1 | y2, x)` does not depend on `x` wherever `P(y2 | x) > 0`,
/// i.e. `X - Y2 - Y1` is a Markov chain.
pub fn is_physically_degraded(ch: &Dmbc) -> bool {
    const ENTRY_TOL: f64 = 1e-9;
    const SUPPORT: f64 = 1e-12;
    let (ny1, ny2) = (ch.y1_size(), ch.y2_size());
    let py2 = ch.y2_marginal();
    for b in 0..ny2 {
        let mut reference: Option<Vec<f64>> = None;
        for x in 0..ch.x_size() {
            let mass = py2[x * ny2 + b];
            if mass <= SUPPORT {
                continue;
            }
            let cond: Vec<f64> = (0..ny1).map(|a| ch.prob(x, a, b) / mass).collect();
            match &reference {
                None => reference = Some(cond),
                Some(r) => {
                    if r.iter().zip(&cond).any(|(p, q)| (p - q).abs() > ENTRY_TOL) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Violated,
    UndecidedAtResolution,
}

/// A pmf `P_UX` at which the two receivers were compared.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub u_card: usize,
    pub x_card: usize,
    /// Row-major `P(u, x)`.
    pub p_ux: Vec<f64>,
    pub i_u_y1: f64,
    pub i_u_y2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderingReport {
    pub verdict: Verdict,
    /// Present whenever the verdict is `Violated`; otherwise the worst point seen.
    pub witness: Option<Witness>,
    /// Largest observed `I(U;Y1) - I(U;Y2)`.
    pub max_deficit: f64,
    /// Smallest `I(U;Y2) - I(U;Y1)` over points with `I(U;Y1) > 1e-6`.
    pub min_strict_gap: f64,
    pub strict: bool,
    pub points_checked: usize,
}

/// `I(A;B)` of a row-major joint matrix `|A| x |B|`.
pub(crate) fn matrix_mutual_info(joint: &[f64], rows: usize, cols: usize) -> f64 {
    let mut pa = vec![0.0; rows];
    let mut pb = vec![0.0; cols];
    for a in 0..rows {
        for b in 0..cols {
            let p = joint[a * cols + b];
            pa[a] += p;
            pb[b] += p;
        }
    }
    let mut mi = 0.0;
    for a in 0..rows {
        for b in 0..cols {
            let p = joint[a * cols + b];
            if p > 0.0 {
                mi += p * (p / (pa[a] * pb[b])).log2();
            }
        }
    }
    mi.max(0.0)
}

struct Probe {
    index: usize,
    deficit: f64,
    strict_gap: f64,
    witness: Witness,
}

fn evaluate(p_ux: &[f64], u_card: usize, ch: &Dmbc, w1: &[f64], w2: &[f64]) -> (f64, f64) {
    let nx = ch.x_size();
    let side = |w: &[f64], ny: usize| {
        let mut j = vec![0.0; u_card * ny];
        for u in 0..u_card {
            for x in 0..nx {
                let p = p_ux[u * nx + x];
                if p == 0.0 {
                    continue;
                }
                for y in 0..ny {
                    j[u * ny + y] += p * w[x * ny + y];
                }
            }
        }
        matrix_mutual_info(&j, u_card, ny)
    };
    (side(w1, ch.y1_size()), side(w2, ch.y2_size()))
}

/// Searches for a pmf `P_UX` with `I(U;Y1) > I(U;Y2)`, i.e. a certificate
/// that receiver 2 is *not* less noisy than receiver 1.
///
/// `|U|` is held at the usual cardinality bound. The search covers the
/// simplex grid of the given resolution over `P_UX` (when that grid is small
/// enough to enumerate) plus `samples` uniform random points. A `Holds`
/// verdict is therefore only as good as the resolution.
pub fn check_less_noisy(ch: &Dmbc, grid_resolution: usize, samples: usize, seed: u64) -> Result<OrderingReport> {
    if grid_resolution < 2 {
        return Err(Error::Config("grid resolution must be at least 2".into()));
    }
    let u_card = ch.aux_bound();
    let dim = u_card * ch.x_size();
    let w1 = ch.y1_marginal();
    let w2 = ch.y2_marginal();

    let probe = |index: usize, p: Vec<f64>| -> Probe {
        let (i1, i2) = evaluate(&p, u_card, ch, &w1, &w2);
        let strict_gap = if i1 > 1e-6 { i2 - i1 } else { f64::INFINITY };
        Probe {
            index,
            deficit: i1 - i2,
            strict_gap,
            witness: Witness {
                u_card,
                x_card: ch.x_size(),
                p_ux: p,
                i_u_y1: i1,
                i_u_y2: i2,
            },
        }
    };
    let better = |a: Probe, b: Probe| -> Probe {
        if b.deficit > a.deficit || (b.deficit == a.deficit && b.index < a.index) {
            Probe { strict_gap: a.strict_gap.min(b.strict_gap), ..b }
        } else {
            Probe { strict_gap: a.strict_gap.min(b.strict_gap), ..a }
        }
    };

    let grid: Vec<Vec<f64>> = if simplex::grid_size(dim, grid_resolution) <= GRID_CAP {
        simplex::grid(dim, grid_resolution)
    } else {
        Vec::new()
    };
    let n_grid = grid.len();
    let from_grid = grid
        .into_par_iter()
        .enumerate()
        .map(|(i, p)| probe(i, p))
        .reduce_with(better);

    let batches = samples.div_ceil(BATCH);
    let from_samples = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(simplex::mix_seed(seed, b as u64));
            let count = BATCH.min(samples - b * BATCH);
            (0..count)
                .map(|k| probe(n_grid + b * BATCH + k, simplex::uniform(dim, &mut rng)))
                .reduce(better)
        })
        .filter_map(|x| x)
        .reduce_with(better);

    let best = match (from_grid, from_samples) {
        (Some(a), Some(b)) => better(a, b),
        (a, b) => a.or(b).ok_or_else(|| Error::Config("less-noisy search evaluated no points".into()))?,
    };

    let verdict = if best.deficit > TIE_TOL {
        Verdict::Violated
    } else if best.deficit > 1e-12 {
        Verdict::UndecidedAtResolution
    } else {
        Verdict::Holds
    };
    Ok(OrderingReport {
        verdict,
        witness: Some(best.witness),
        max_deficit: best.deficit,
        min_strict_gap: best.strict_gap,
        strict: verdict == Verdict::Holds && best.strict_gap > 1e-12,
        points_checked: n_grid + samples,
    })
}

/// Receiver 2 of `BS-BC(p1, p2)` is less noisy than receiver 1 iff its
/// crossover is at least as far from 1/2.
pub fn bsbc_less_noisy(p1: f64, p2: f64) -> bool {
    (1.0 - 2.0 * p2).abs() >= (1.0 - 2.0 * p1).abs()
}

pub fn bsbc_strictly_less_noisy(p1: f64, p2: f64) -> bool {
    (1.0 - 2.0 * p2).abs() > (1.0 - 2.0 * p1).abs()
}

pub fn bebc_less_noisy(d1: f64, d2: f64) -> bool {
    d2 <= d1
}

pub fn bebc_strictly_less_noisy(d1: f64, d2: f64) -> bool {
    d2 < d1 && d2 < 1.0
}

/// Alphabet given either as a size or as explicit labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphabetSpec {
    Size(usize),
    Labels(Vec<String>),
}

impl AlphabetSpec {
    fn labels(&self) -> Vec<String> {
        match self {
            AlphabetSpec::Size(n) => (0..*n).map(|i| i.to_string()).collect(),
            AlphabetSpec::Labels(l) => l.clone(),
        }
    }
}

/// Channel description as read from JSON files or the `bsbc:p1,p2` shorthand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ChannelSpec {
    Bsbc { p1: f64, p2: f64 },
    Bebc { d1: f64, d2: f64 },
    Matrix {
        x: AlphabetSpec,
        y1: AlphabetSpec,
        y2: AlphabetSpec,
        /// `rows[x]` is `P(y1, y2 | x)` with `y2` varying fastest.
        rows: Vec<Vec<f64>>,
    },
}

impl ChannelSpec {
    pub fn build(&self) -> Result<Dmbc> {
        match self {
            ChannelSpec::Bsbc { p1, p2 } => make_bsbc(*p1, *p2),
            ChannelSpec::Bebc { d1, d2 } => make_bebc(*d1, *d2),
            ChannelSpec::Matrix { x, y1, y2, rows } => {
                Dmbc::from_matrix(x.labels(), y1.labels(), y2.labels(), rows.clone())
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Parses `bsbc:p1,p2` or `bebc:d1,d2`.
    pub fn parse_shorthand(s: &str) -> Result<Self> {
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("`{s}` is not of the form kind:a,b")))?;
        let vals: Vec<f64> = args
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Config(format!("`{s}`: {e}")))?;
        let [a, b] = vals[..] else {
            return Err(Error::Config(format!("`{s}` needs exactly two parameters")));
        };
        match kind {
            "bsbc" => Ok(ChannelSpec::Bsbc { p1: a, p2: b }),
            "bebc" => Ok(ChannelSpec::Bebc { d1: a, d2: b }),
            _ => Err(Error::Config(format!("unknown channel kind `{kind}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{FinitePmf, JointPmf};
    use approx::assert_abs_diff_eq;

    #[test]
    fn bsbc_entries() {
        let ch = make_bsbc(0.0, 0.0).unwrap();
        assert_eq!(ch.prob(0, 0, 0), 1.0);
        assert_eq!(ch.prob(1, 1, 1), 1.0);
        let noise = make_bsbc(0.5, 0.5).unwrap();
        for x in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    assert_abs_diff_eq!(noise.prob(x, a, b), 0.25);
                }
            }
        }
        let ch = make_bsbc(0.2, 0.1).unwrap();
        assert_abs_diff_eq!(ch.prob(0, 1, 1), 0.02, epsilon = 1e-15);
        assert_abs_diff_eq!(ch.prob(1, 0, 0), 0.02, epsilon = 1e-15);
        assert!(make_bsbc(1.1, 0.0).is_err());
    }

    #[test]
    fn bebc_entries() {
        let ch = make_bebc(0.0, 0.0).unwrap();
        assert_eq!(ch.prob(1, 1, 1), 1.0);
        let all = make_bebc(1.0, 1.0).unwrap();
        assert_eq!(all.prob(0, 2, 2), 1.0);
        let ch = make_bebc(0.3, 0.1).unwrap();
        assert_abs_diff_eq!(ch.prob(0, 2, 0), 0.27, epsilon = 1e-15);
        assert_abs_diff_eq!(ch.prob(1, 2, 1), 0.27, epsilon = 1e-15);
        assert!(make_bebc(0.3, -0.1).is_err());
    }

    #[test]
    fn enhance_entries() {
        let e = enhance(&make_bsbc(0.0, 0.0).unwrap());
        // Y2' = (y1, y2) encoded as y1 * 2 + y2
        assert_eq!(e.prob(1, 1, 3), 1.0);
        assert_eq!(e.y2().labels()[3], "(1,1)");
        let e = enhance(&make_bsbc(0.2, 0.1).unwrap());
        assert_abs_diff_eq!(e.prob(0, 1, 2), 0.18, epsilon = 1e-15);
        assert!(is_physically_degraded(&e));
    }

    #[test]
    fn degradedness() {
        assert!(!is_physically_degraded(&make_bsbc(0.2, 0.1).unwrap()));
        let bsc = |p: f64| vec![vec![1.0 - p, p], vec![p, 1.0 - p]];
        let cas = make_cascade(&bsc(0.1), &bsc(0.15)).unwrap();
        assert!(is_physically_degraded(&cas));
        // the end-to-end crossover of the cascade
        let w1 = cas.y1_marginal();
        assert_abs_diff_eq!(w1[1], star(0.1, 0.15), epsilon = 1e-15);
    }

    fn star(a: f64, b: f64) -> f64 {
        crate::prob::star(a, b).unwrap()
    }

    #[test]
    fn enhance_preserves_joint_receiver_information() {
        let ch = make_bebc(0.4, 0.2).unwrap();
        let e = enhance(&ch);
        let pu = FinitePmf::from_probs(vec![0.3, 0.7]).unwrap().into_joint("U");
        let xk = Kernel::from_rows(
            vec![Axis::binary("U")],
            vec![Axis::binary(X)],
            vec![vec![0.8, 0.2], vec![0.35, 0.65]],
        )
        .unwrap();
        let base: JointPmf = pu.compose(&xk).unwrap();
        let j = base.compose(ch.law()).unwrap();
        let je = base.compose(e.law()).unwrap();
        let a = j.mutual_info(&["U"], &[Y1, Y2]).unwrap();
        let b = je.mutual_info(&["U"], &[Y2]).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-9);
    }

    #[test]
    fn matrix_mi_matches_prob_core() {
        let joint = vec![0.1, 0.2, 0.05, 0.3, 0.15, 0.2];
        let jp = JointPmf::new(vec![Axis::indexed("A", 2), Axis::indexed("B", 3)], joint.clone()).unwrap();
        assert_abs_diff_eq!(
            matrix_mutual_info(&joint, 2, 3),
            jp.mutual_info(&["A"], &["B"]).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn less_noisy_bsbc() {
        let holds = check_less_noisy(&make_bsbc(0.2, 0.1).unwrap(), 20, 2000, 7).unwrap();
        assert_eq!(holds.verdict, Verdict::Holds);
        assert!(holds.strict);
        let bad = check_less_noisy(&make_bsbc(0.1, 0.2).unwrap(), 20, 2000, 7).unwrap();
        assert_eq!(bad.verdict, Verdict::Violated);
        let w = bad.witness.unwrap();
        assert!(w.i_u_y1 > w.i_u_y2 + TIE_TOL);
    }

    #[test]
    fn less_noisy_bebc() {
        let r = check_less_noisy(&make_bebc(0.3, 0.1).unwrap(), 12, 2000, 1).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(r.strict);
        let r = check_less_noisy(&make_bebc(0.1, 0.3).unwrap(), 12, 2000, 1).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
    }

    #[test]
    fn less_noisy_report_is_deterministic() {
        let ch = make_bsbc(0.3, 0.35).unwrap();
        let a = check_less_noisy(&ch, 8, 10_000, 99).unwrap();
        let b = check_less_noisy(&ch, 8, 10_000, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn less_noisy_rejects_coarse_grid() {
        assert!(check_less_noisy(&make_bsbc(0.2, 0.1).unwrap(), 1, 10, 0).is_err());
    }

    #[test]
    fn analytic_orderings() {
        assert!(bsbc_strictly_less_noisy(0.2, 0.1));
        assert!(!bsbc_less_noisy(0.1, 0.2));
        assert!(bebc_strictly_less_noisy(0.3, 0.1));
        assert!(!bebc_less_noisy(0.1, 0.3));
    }

    #[test]
    fn channel_spec_parsing() {
        assert_eq!(
            ChannelSpec::parse_shorthand("bsbc:0.2,0.1").unwrap(),
            ChannelSpec::Bsbc { p1: 0.2, p2: 0.1 }
        );
        assert!(ChannelSpec::parse_shorthand("bsbc:0.2").is_err());
        assert!(ChannelSpec::parse_shorthand("awgn:1,2").is_err());
        let m = ChannelSpec::from_json(
            r#"{"type":"matrix","x":2,"y1":["a","b"],"y2":2,
               "rows":[[0.72,0.08,0.18,0.02],[0.02,0.18,0.08,0.72]]}"#,
        )
        .unwrap();
        let ch = m.build().unwrap();
        assert_eq!(ch.y1().labels(), &["a".to_string(), "b".to_string()]);
        let ref_ch = make_bsbc(0.2, 0.1).unwrap();
        for x in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    assert_abs_diff_eq!(ch.prob(x, a, b), ref_ch.prob(x, a, b), epsilon = 1e-15);
                }
            }
        }
        let j = ChannelSpec::from_json(r#"{"type":"bebc","d1":0.3,"d2":0.1}"#).unwrap();
        assert_eq!(j, ChannelSpec::Bebc { d1: 0.3, d2: 0.1 });
    }
}
