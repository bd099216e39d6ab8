//! Point rules for every region and the parameter search that feeds them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::aux::{AuxCoding, AuxMeasures, AuxParams, InputPmf};
use super::rate::{RatePoint, RateRegion};
use crate::channel::{enhance, Dmbc};
use crate::error::{Error, Result};
use crate::simplex;

/// Slack on every "information <= budget" feasibility test.
pub const FEAS_SLACK: f64 = 1e-12;

const GRID_CAP: usize = 100_000;

fn point(r1: f64, r2: f64) -> Option<RatePoint> {
    if r1 < -FEAS_SLACK || r2 < -FEAS_SLACK {
        return None;
    }
    Some(RatePoint { r1: r1.max(0.0), r2: r2.max(0.0) })
}

/// `(I(U;Y1|Q), I(X;Y2|UQ))`.
pub fn nofb_point(m: &AuxMeasures) -> RatePoint {
    RatePoint { r1: m.i_u_y1, r2: m.i_x_y2_given_u }
}

/// `(I(U;Y1|Q), I(X;Y1Y2|UQ))`: the no-feedback point of the enhanced channel.
pub fn enh_point(m: &AuxMeasures) -> RatePoint {
    RatePoint { r1: m.i_u_y1, r2: m.i_x_y1y2_given_u }
}

/// Corner of the binned-compression rectangle, or `None` when the structure needs
/// more feedback than `rfb` or leaves no nonnegative `R1`.
pub fn thm1_point(m: &AuxMeasures, rfb: f64) -> Option<RatePoint> {
    if m.i_yt_y1_given_uy2 > rfb + FEAS_SLACK {
        return None;
    }
    point(m.i_u_y1.min(m.i_u_y2 - m.i_yt_y1_given_uy2), m.i_x_yty2_given_u)
}

/// Capped-compression point: the compression rate must also fit under the gap
/// `I(U;Y2|Q) - I(U;Y1|Q)`.
pub fn cor1_point(m: &AuxMeasures, rfb: f64) -> Option<RatePoint> {
    if !cor1_feasible(m, rfb, FEAS_SLACK) {
        return None;
    }
    point(m.i_u_y1, m.i_x_yty2_given_u)
}

pub fn cor1_feasible(m: &AuxMeasures, rfb: f64, slack: f64) -> bool {
    m.i_yt_y1_given_uy2 <= rfb.min(m.i_u_y2 - m.i_u_y1) + slack
}

/// Right-hand sides of the four less-noisy rate constraints.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thm2Bounds {
    pub r1_a: f64,
    pub r1_b: f64,
    pub r2: f64,
    pub sum: f64,
    /// Left side of the feedback constraint.
    pub feedback: f64,
}

impl Thm2Bounds {
    pub fn from_measures(m: &AuxMeasures) -> Self {
        let compress = m.i_yt_y1_given_uy2;
        Self {
            r1_a: m.i_u_y1,
            r1_b: m.i_x_y2 + m.i_x_yt_given_uy2 - compress,
            r2: m.i_x_yty2_given_u,
            sum: m.i_x_y2 + m.i_xy2_yt_given_u + m.i_x_yt_given_uy2 - compress,
            feedback: compress - m.i_x_yt_given_uy2,
        }
    }

    pub fn feasible(&self, rfb: f64) -> bool {
        self.feedback <= rfb + FEAS_SLACK
    }

    pub fn contains(&self, p: &RatePoint, slack: f64) -> bool {
        p.r1 <= self.r1_a + slack
            && p.r1 <= self.r1_b + slack
            && p.r2 <= self.r2 + slack
            && p.r1 + p.r2 <= self.sum + slack
    }

    /// The (at most two) Pareto corners of the pentagon.
    pub fn corners(&self) -> Vec<RatePoint> {
        let r1_max = self.r1_a.min(self.r1_b);
        if r1_max < -FEAS_SLACK || self.r2 < -FEAS_SLACK || self.sum < -FEAS_SLACK {
            return Vec::new();
        }
        let (r1_max, r2_max, sum) = (r1_max.max(0.0), self.r2.max(0.0), self.sum.max(0.0));
        let a1 = r1_max.min(sum);
        let a = RatePoint { r1: a1, r2: r2_max.min(sum - a1).max(0.0) };
        let b2 = r2_max.min(sum);
        let b = RatePoint { r1: r1_max.min(sum - b2).max(0.0), r2: b2 };
        if a == b {
            vec![a]
        } else {
            vec![a, b]
        }
    }
}

pub fn thm2_points(m: &AuxMeasures, rfb: f64) -> Vec<RatePoint> {
    let b = Thm2Bounds::from_measures(m);
    if b.feasible(rfb) {
        b.corners()
    } else {
        Vec::new()
    }
}

fn measure_all(ch: &Dmbc, auxes: &[AuxCoding]) -> Result<Vec<AuxMeasures>> {
    auxes.par_iter().map(|a| a.measures(ch)).collect()
}

fn collect(ms: &[AuxMeasures], rule: impl Fn(&AuxMeasures) -> Vec<RatePoint>) -> RateRegion {
    RateRegion::new(ms.iter().flat_map(rule).collect())
}

/// No-feedback points of the given structures.
pub fn eval_nofb_aux(ch: &Dmbc, auxes: &[AuxCoding]) -> Result<RateRegion> {
    Ok(collect(&measure_all(ch, auxes)?, |m| vec![nofb_point(m)]))
}

/// Enhanced-channel points of the given structures.
pub fn eval_enh_aux(ch: &Dmbc, auxes: &[AuxCoding]) -> Result<RateRegion> {
    Ok(collect(&measure_all(ch, auxes)?, |m| vec![enh_point(m)]))
}

pub fn eval_thm1(ch: &Dmbc, rfb: f64, auxes: &[AuxCoding]) -> Result<RateRegion> {
    check_rfb(rfb)?;
    Ok(collect(&measure_all(ch, auxes)?, |m| thm1_point(m, rfb).into_iter().collect()))
}

pub fn eval_corollary1(ch: &Dmbc, rfb: f64, auxes: &[AuxCoding]) -> Result<RateRegion> {
    check_rfb(rfb)?;
    Ok(collect(&measure_all(ch, auxes)?, |m| cor1_point(m, rfb).into_iter().collect()))
}

pub fn eval_thm2(ch: &Dmbc, rfb: f64, auxes: &[AuxCoding]) -> Result<RateRegion> {
    check_rfb(rfb)?;
    Ok(collect(&measure_all(ch, auxes)?, |m| thm2_points(m, rfb)))
}

fn check_rfb(rfb: f64) -> Result<()> {
    if rfb.is_nan() || rfb < 0.0 {
        return Err(Error::Domain(format!("feedback rate {rfb}")));
    }
    Ok(())
}

/// Controls how auxiliary structures are generated and refined.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Simplex grid resolution for sampled pmf rows.
    pub resolution: usize,
    /// Number of sampled structures (on top of any enumerated grid).
    pub samples: usize,
    /// Hill-climbing steps per weight direction.
    pub refine_steps: usize,
    /// Number of weight directions `lambda R1 + (1 - lambda) R2` to climb.
    pub directions: usize,
    pub seed: u64,
    /// Largest time-sharing alphabet; half the samples use `|Q| = 1`.
    pub q_card: usize,
    /// Defaults to the usual `min{|X|,|Y1|,|Y2|} + 1`.
    pub u_card: Option<usize>,
    /// Defaults to `|Y1| + 1`.
    pub yt_card: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            resolution: 10,
            samples: 2000,
            refine_steps: 300,
            directions: 16,
            seed: 0,
            q_card: 2,
            u_card: None,
            yt_card: None,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.resolution < 2 {
            return Err(Error::Config("grid resolution must be at least 2".into()));
        }
        if self.samples == 0 && self.directions == 0 {
            return Err(Error::Empty("search config evaluates nothing".into()));
        }
        if self.q_card == 0 || self.u_card == Some(0) || self.yt_card == Some(0) {
            return Err(Error::Config("auxiliary cardinalities must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
struct Shape {
    q: usize,
    u: usize,
    x: usize,
    y1: usize,
    yt: usize,
}

impl Shape {
    fn layout(&self) -> Vec<usize> {
        AuxParams::layout(self.q, self.u, self.x, self.y1, self.yt)
    }

    fn params(&self, rows: Vec<Vec<f64>>) -> AuxParams {
        AuxParams { q_card: self.q, u_card: self.u, yt_card: self.yt, rows }
    }
}

fn random_params<R: Rng>(shape: Shape, res: usize, rng: &mut R) -> AuxParams {
    let rows = shape
        .layout()
        .into_iter()
        .map(|d| {
            if rng.gen_bool(0.5) {
                simplex::grid_point(d, res, rng)
            } else {
                simplex::uniform(d, rng)
            }
        })
        .collect();
    shape.params(rows)
}

/// Draws `count` auxiliary structures deterministically from `cfg.seed`;
/// half of them use `|Q| = 1`.
pub fn sample_aux(ch: &Dmbc, cfg: &SearchConfig, count: usize) -> Result<Vec<AuxCoding>> {
    cfg.validate()?;
    let full = shape_for(ch, cfg, true);
    let single = Shape { q: 1, ..full };
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(simplex::mix_seed(cfg.seed, i as u64));
            let shape = if i % 2 == 0 { single } else { full };
            AuxCoding::from_params(ch, &random_params(shape, cfg.resolution, &mut rng))
        })
        .collect()
}

fn shape_for(ch: &Dmbc, cfg: &SearchConfig, with_feedback: bool) -> Shape {
    Shape {
        q: cfg.q_card,
        u: cfg.u_card.unwrap_or_else(|| ch.aux_bound()),
        x: ch.x_size(),
        y1: ch.y1_size(),
        yt: if with_feedback { cfg.yt_card.unwrap_or(ch.y1_size() + 1) } else { 1 },
    }
}

type Rule<'a> = dyn Fn(&AuxMeasures) -> Vec<RatePoint> + Sync + 'a;

fn score(points: &[RatePoint], lambda: f64) -> f64 {
    points
        .iter()
        .map(|p| lambda * p.r1 + (1.0 - lambda) * p.r2)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Evaluates `seeds`, then hill-climbs once per weight direction starting
/// from the best seed for that direction. Every evaluated point is kept.
fn climb(ch: &Dmbc, seeds: Vec<AuxParams>, cfg: &SearchConfig, rule: &Rule<'_>) -> Result<RateRegion> {
    let evaluated: Vec<(AuxParams, Vec<RatePoint>)> = seeds
        .into_par_iter()
        .map(|p| {
            let m = AuxCoding::from_params(ch, &p)?.measures(ch)?;
            Ok((p, rule(&m)))
        })
        .collect::<Result<_>>()?;
    let mut region = RateRegion::new(evaluated.iter().flat_map(|(_, pts)| pts.iter().copied()).collect());
    if evaluated.is_empty() || cfg.directions == 0 || cfg.refine_steps == 0 {
        return Ok(region);
    }

    let dirs = cfg.directions;
    let climbs: Vec<Vec<RatePoint>> = (0..dirs)
        .into_par_iter()
        .map(|k| -> Result<Vec<RatePoint>> {
            let lambda = if dirs == 1 { 0.5 } else { k as f64 / (dirs - 1) as f64 };
            let (start, start_pts) = evaluated
                .iter()
                .max_by(|a, b| score(&a.1, lambda).total_cmp(&score(&b.1, lambda)))
                .expect("nonempty");
            let mut cur = start.clone();
            let mut best = score(start_pts, lambda);
            let mut rng = ChaCha8Rng::seed_from_u64(simplex::mix_seed(cfg.seed ^ 0xC11B, k as u64));
            let mut step = 0.25;
            let mut misses = 0;
            let mut found = Vec::new();
            for _ in 0..cfg.refine_steps {
                let mut cand = cur.clone();
                let r = rng.gen_range(0..cand.rows.len());
                simplex::perturb(&mut cand.rows[r], step, &mut rng);
                let m = AuxCoding::from_params(ch, &cand)?.measures(ch)?;
                let pts = rule(&m);
                let s = score(&pts, lambda);
                found.extend_from_slice(&pts);
                if s > best {
                    best = s;
                    cur = cand;
                    misses = 0;
                } else {
                    misses += 1;
                    if misses >= 20 {
                        step = (step * 0.5).max(1e-4);
                        misses = 0;
                    }
                }
            }
            Ok(found)
        })
        .collect::<Result<_>>()?;
    for pts in climbs {
        for p in pts {
            region.push(p);
        }
    }
    Ok(region)
}

fn input_pmf_params(p: &InputPmf, y1_card: usize) -> AuxParams {
    let mut rows = vec![vec![1.0], p.p_u()];
    rows.extend(p.x_given_u());
    rows.extend(std::iter::repeat_n(vec![1.0], p.u_card * y1_card));
    AuxParams { q_card: 1, u_card: p.u_card, yt_card: 1, rows }
}

/// No-feedback region by search over `P_UX` (`|Q| = 1`; time sharing enters
/// through the envelope). Enumerates the joint simplex grid when it is small
/// enough, adds random samples, then refines.
pub fn eval_nofb(ch: &Dmbc, cfg: &SearchConfig) -> Result<RateRegion> {
    cfg.validate()?;
    let shape = Shape { q: 1, ..shape_for(ch, cfg, false) };
    let dim = shape.u * shape.x;
    let mut seeds = Vec::new();
    if simplex::grid_size(dim, cfg.resolution) <= GRID_CAP {
        for p in simplex::grid(dim, cfg.resolution) {
            seeds.push(input_pmf_params(&InputPmf { u_card: shape.u, x_card: shape.x, probs: p }, shape.y1));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.samples {
        seeds.push(random_params(shape, cfg.resolution, &mut rng));
    }
    climb(ch, seeds, cfg, &|m| vec![nofb_point(m)])
}

/// No-feedback region of the enhanced channel.
pub fn eval_enh(ch: &Dmbc, cfg: &SearchConfig) -> Result<RateRegion> {
    eval_nofb(&enhance(ch), cfg)
}

fn search(ch: &Dmbc, cfg: &SearchConfig, rule: &Rule<'_>) -> Result<RateRegion> {
    cfg.validate()?;
    let auxes = sample_aux(ch, cfg, cfg.samples)?;
    let mut seeds: Vec<AuxParams> = auxes.iter().map(AuxCoding::to_params).collect();
    // constant-Yt copies make the no-feedback corner reachable from the start
    for a in &auxes {
        seeds.push(a.without_feedback(ch)?.to_params());
    }
    let mut region = climb(ch, seeds, cfg, rule)?;
    // every no-feedback point is reached by a constant-Yt structure, for
    // which all three feedback rules reduce to the no-feedback point
    region.merge(&eval_nofb(ch, cfg)?);
    Ok(region)
}

pub fn search_thm1(ch: &Dmbc, rfb: f64, cfg: &SearchConfig) -> Result<RateRegion> {
    check_rfb(rfb)?;
    search(ch, cfg, &|m| thm1_point(m, rfb).into_iter().collect())
}

pub fn search_corollary1(ch: &Dmbc, rfb: f64, cfg: &SearchConfig) -> Result<RateRegion> {
    check_rfb(rfb)?;
    search(ch, cfg, &|m| cor1_point(m, rfb).into_iter().collect())
}

pub fn search_thm2(ch: &Dmbc, rfb: f64, cfg: &SearchConfig) -> Result<RateRegion> {
    check_rfb(rfb)?;
    search(ch, cfg, &|m| thm2_points(m, rfb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{make_bsbc, make_cascade};
    use crate::prob::binary_entropy as h;
    use crate::region::aux::example1_aux;
    use crate::region::rate::includes;
    use approx::assert_abs_diff_eq;

    fn small() -> SearchConfig {
        SearchConfig { resolution: 10, samples: 300, refine_steps: 150, directions: 8, ..Default::default() }
    }

    #[test]
    fn nofb_endpoints_bsbc() {
        let ch = make_bsbc(0.2, 0.1).unwrap();
        let r = eval_nofb(&ch, &small()).unwrap();
        let f = r.frontier().unwrap();
        assert_abs_diff_eq!(f.last().unwrap().r1, 1.0 - h(0.2), epsilon = 2e-3);
        assert_abs_diff_eq!(f[0].r2, 1.0 - h(0.1), epsilon = 2e-3);
        assert!(r.points().iter().any(|p| p.r1 == 0.0 && p.r2 == 0.0));
    }

    #[test]
    fn enh_contains_nofb_and_has_joint_endpoint() {
        let ch = make_bsbc(0.2, 0.1).unwrap();
        let cfg = small();
        let nofb = eval_nofb(&ch, &cfg).unwrap();
        let enh = eval_enh(&ch, &cfg).unwrap();
        assert!(includes(&enh, &nofb, 2e-3).unwrap());
        // I(X; Y1 Y2) at uniform X: H(Y1 Y2) - H(Z1) - H(Z2)
        let p = |a: f64, b: f64| 0.5 * (a * b + (1.0 - a) * (1.0 - b));
        let q = |a: f64, b: f64| 0.5 * (a * (1.0 - b) + (1.0 - a) * b);
        let hy = crate::prob::entropy_bits(&[p(0.2, 0.1), q(0.2, 0.1), q(0.2, 0.1), p(0.2, 0.1)]);
        let expect = hy - h(0.2) - h(0.1);
        assert_abs_diff_eq!(enh.max_r2(), expect, epsilon = 2e-3);
    }

    #[test]
    fn degraded_channel_enhancement_changes_nothing() {
        let bsc = |p: f64| vec![vec![1.0 - p, p], vec![p, 1.0 - p]];
        let ch = make_cascade(&bsc(0.1), &bsc(0.15)).unwrap();
        let cfg = small();
        let nofb = eval_nofb(&ch, &cfg).unwrap();
        let enh = eval_enh(&ch, &cfg).unwrap();
        assert!(includes(&enh, &nofb, 2e-3).unwrap());
        assert!(includes(&nofb, &enh, 2e-3).unwrap());
    }

    #[test]
    fn constant_yt_thm1_point_is_nofb_point() {
        let ch = make_bsbc(0.2, 0.1).unwrap();
        let aux = example1_aux(&ch, 0.2, 0.3).unwrap().without_feedback(&ch).unwrap();
        let m = aux.measures(&ch).unwrap();
        assert_eq!(thm1_point(&m, 0.0), Some(nofb_point(&m)));
        assert_eq!(thm2_points(&m, 0.0), vec![nofb_point(&m)]);
        assert_eq!(cor1_point(&m, 0.0), Some(nofb_point(&m)));
    }

    #[test]
    fn thm1_points_lie_in_thm2_region() {
        let ch = make_bsbc(0.2, 0.1).unwrap();
        let auxes = sample_aux(&ch, &small(), 200).unwrap();
        for a in &auxes {
            let m = a.measures(&ch).unwrap();
            if let Some(p) = thm1_point(&m, 0.85) {
                let b = Thm2Bounds::from_measures(&m);
                assert!(b.feasible(0.85));
                assert!(b.contains(&p, 1e-9));
            }
        }
    }

    #[test]
    fn large_feedback_rate_disables_feedback_constraint() {
        let ch = make_bsbc(0.2, 0.1).unwrap();
        let auxes = sample_aux(&ch, &small(), 100).unwrap();
        for a in &auxes {
            let m = a.measures(&ch).unwrap();
            assert!(Thm2Bounds::from_measures(&m).feasible(1.0));
        }
    }

    #[test]
    fn cor1_points_are_thm1_points() {
        let ch = make_bsbc(0.2, 0.1).unwrap();
        for a in sample_aux(&ch, &small(), 200).unwrap() {
            let m = a.measures(&ch).unwrap();
            if let Some(p) = cor1_point(&m, 0.3) {
                assert_eq!(thm1_point(&m, 0.3), Some(p));
            }
        }
    }

    #[test]
    fn search_is_deterministic() {
        let ch = make_bsbc(0.2, 0.1).unwrap();
        let cfg = SearchConfig { samples: 60, refine_steps: 40, directions: 4, ..Default::default() };
        let a = search_thm1(&ch, 0.5, &cfg).unwrap();
        let b = search_thm1(&ch, 0.5, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_inputs() {
        let ch = make_bsbc(0.2, 0.1).unwrap();
        assert!(eval_thm1(&ch, -1.0, &[]).is_err());
        let cfg = SearchConfig { resolution: 1, ..Default::default() };
        assert!(eval_nofb(&ch, &cfg).is_err());
        let cfg = SearchConfig { samples: 0, directions: 0, ..Default::default() };
        assert!(eval_nofb(&ch, &cfg).is_err());
    }
}
