use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack absorbed when interpolating along an envelope.
const INTERP_SLACK: f64 = 1e-12;

/// A rate pair in bits per channel use.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub r1: f64,
    pub r2: f64,
}

impl RatePoint {
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        if !(r1.is_finite() && r2.is_finite()) || r1 < 0.0 || r2 < 0.0 {
            return Err(Error::Domain(format!("rate pair ({r1}, {r2})")));
        }
        Ok(Self { r1, r2 })
    }

    /// Componentwise `self >= other - tol`.
    pub fn covers(&self, other: &RatePoint, tol: f64) -> bool {
        self.r1 >= other.r1 - tol && self.r2 >= other.r2 - tol
    }

    /// Strictly larger in both coordinates by more than `margin`.
    pub fn strictly_dominates(&self, other: &RatePoint, margin: f64) -> bool {
        self.r1 > other.r1 + margin && self.r2 > other.r2 + margin
    }
}

/// A finite cloud of achievable rate pairs.
///
/// The region it stands for is the downward closure of the convex hull of
/// the points (time sharing), which is what [`RateRegion::envelope`] and
/// [`includes`] work with.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RateRegion {
    points: Vec<RatePoint>,
}

impl RateRegion {
    pub fn new(points: Vec<RatePoint>) -> Self {
        Self { points }
    }

    pub fn points(&self) -> &[RatePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn push(&mut self, p: RatePoint) {
        self.points.push(p);
    }

    pub fn merge(&mut self, other: &RateRegion) {
        self.points.extend_from_slice(&other.points);
    }

    pub fn max_r1(&self) -> f64 {
        self.points.iter().map(|p| p.r1).fold(0.0, f64::max)
    }

    pub fn max_r2(&self) -> f64 {
        self.points.iter().map(|p| p.r2).fold(0.0, f64::max)
    }

    /// Pareto-maximal points, `r1` ascending and `r2` strictly decreasing.
    pub fn frontier(&self) -> Result<Vec<RatePoint>> {
        if self.points.is_empty() {
            return Err(Error::Empty("rate region has no points".into()));
        }
        let mut pts = self.points.clone();
        pts.sort_by(|a, b| b.r1.total_cmp(&a.r1).then(b.r2.total_cmp(&a.r2)));
        let mut out: Vec<RatePoint> = Vec::new();
        let mut best_r2 = f64::NEG_INFINITY;
        for p in pts {
            if p.r2 > best_r2 {
                best_r2 = p.r2;
                out.push(p);
            }
        }
        out.reverse();
        Ok(out)
    }

    /// Vertices of the upper concave envelope of the frontier, anchored on
    /// both axes: the boundary of the time-sharing closure.
    pub fn envelope(&self) -> Result<Vec<RatePoint>> {
        let f = self.frontier()?;
        let mut pts = Vec::with_capacity(f.len() + 2);
        if f[0].r1 > 0.0 {
            pts.push(RatePoint { r1: 0.0, r2: f[0].r2 });
        }
        pts.extend_from_slice(&f);
        let last = *f.last().unwrap();
        if last.r2 > 0.0 {
            pts.push(RatePoint { r1: last.r1, r2: 0.0 });
        }
        let mut hull: Vec<RatePoint> = Vec::with_capacity(pts.len());
        for p in pts {
            while hull.len() >= 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                let cross = (b.r1 - a.r1) * (p.r2 - a.r2) - (b.r2 - a.r2) * (p.r1 - a.r1);
                if cross >= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        Ok(hull)
    }

    /// Largest `r2` reachable together with `r1` (time sharing allowed);
    /// `None` beyond the largest `r1`.
    pub fn height_at(&self, r1: f64) -> Result<Option<f64>> {
        Ok(envelope_height(&self.envelope()?, r1))
    }

    /// Writes the envelope as `r1,r2` CSV.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "r1,r2")?;
        for p in self.envelope()? {
            writeln!(w, "{},{}", p.r1, p.r2)?;
        }
        Ok(())
    }
}

fn envelope_height(env: &[RatePoint], r1: f64) -> Option<f64> {
    let last = env.last()?;
    if r1 > last.r1 {
        return None;
    }
    if r1 <= env[0].r1 {
        return Some(env[0].r2);
    }
    for w in env.windows(2) {
        let (a, b) = (w[0], w[1]);
        if r1 == b.r1 {
            return Some(b.r2);
        }
        if r1 < b.r1 {
            let t = (r1 - a.r1) / (b.r1 - a.r1);
            return Some(a.r2 + t * (b.r2 - a.r2));
        }
    }
    Some(last.r2)
}

pub fn frontier(region: &RateRegion) -> Result<Vec<RatePoint>> {
    region.frontier()
}

/// True iff every frontier point of `inner` lies, up to `tol` in each
/// coordinate, under the time-sharing envelope of `outer`.
pub fn includes(outer: &RateRegion, inner: &RateRegion, tol: f64) -> Result<bool> {
    let env = outer.envelope()?;
    let max_r1 = env.last().map(|p| p.r1).unwrap_or(0.0);
    for p in inner.frontier()? {
        let x = (p.r1 - tol).max(0.0);
        if x > max_r1 + INTERP_SLACK {
            return Ok(false);
        }
        let h = envelope_height(&env, x.min(max_r1)).unwrap_or(0.0);
        if h < p.r2 - tol - INTERP_SLACK {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest vertical gap `outer(r1) - inner(r1)` over `samples` evenly spaced
/// `r1` values in `[lo, hi]`, along with the `r1` where it occurs.
pub fn max_vertical_gain(outer: &RateRegion, inner: &RateRegion, lo: f64, hi: f64, samples: usize) -> Result<(f64, f64)> {
    let eo = outer.envelope()?;
    let ei = inner.envelope()?;
    let mut best = (f64::NEG_INFINITY, lo);
    let n = samples.max(2);
    for k in 0..n {
        let x = lo + (hi - lo) * k as f64 / (n - 1) as f64;
        let (Some(a), Some(b)) = (envelope_height(&eo, x), envelope_height(&ei, x)) else {
            continue;
        };
        if a - b > best.0 {
            best = (a - b, x);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rp(r1: f64, r2: f64) -> RatePoint {
        RatePoint { r1, r2 }
    }

    #[test]
    fn frontier_examples() {
        let r = RateRegion::new(vec![rp(1.0, 1.0), rp(0.5, 0.5)]);
        assert_eq!(r.frontier().unwrap(), vec![rp(1.0, 1.0)]);
        let r = RateRegion::new(vec![rp(1.0, 0.0), rp(0.0, 1.0)]);
        assert_eq!(r.frontier().unwrap(), vec![rp(0.0, 1.0), rp(1.0, 0.0)]);
        let r = RateRegion::new(vec![rp(0.3, 0.2)]);
        assert_eq!(r.frontier().unwrap(), vec![rp(0.3, 0.2)]);
        assert!(RateRegion::default().frontier().is_err());
    }

    #[test]
    fn envelope_time_shares() {
        let r = RateRegion::new(vec![rp(0.0, 1.0), rp(0.4, 0.5), rp(1.0, 0.0)]);
        // (0.4, 0.5) is below the chord from (0,1) to (1,0)
        assert_eq!(r.envelope().unwrap(), vec![rp(0.0, 1.0), rp(1.0, 0.0)]);
        assert!((r.height_at(0.4).unwrap().unwrap() - 0.6).abs() < 1e-12);
        assert_eq!(r.height_at(1.5).unwrap(), None);
    }

    #[test]
    fn includes_examples() {
        let a = RateRegion::new(vec![rp(0.0, 1.0), rp(0.6, 0.6), rp(1.0, 0.0)]);
        assert!(includes(&a, &a, 0.0).unwrap());
        let b = RateRegion::new(vec![rp(0.5, 0.5)]);
        assert!(includes(&a, &b, 0.0).unwrap());
        assert!(!includes(&b, &a, 0.0).unwrap());
        let c = RateRegion::new(vec![rp(0.3, 0.801)]);
        assert!(!includes(&a, &c, 0.0).unwrap());
        // chord from (0,1) to (0.6,0.6) at 0.3 is 0.8
        assert!(includes(&a, &c, 2e-3).unwrap());
    }

    #[test]
    fn rate_point_validation() {
        assert!(RatePoint::new(-0.1, 0.0).is_err());
        assert!(RatePoint::new(f64::NAN, 0.0).is_err());
        assert!(rp(0.5, 0.5).strictly_dominates(&rp(0.4, 0.4), 1e-6));
        assert!(!rp(0.5, 0.4).strictly_dominates(&rp(0.4, 0.4), 1e-6));
    }

    proptest! {
        #[test]
        fn frontier_is_an_antichain_covering_all_points(
            pts in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..60)
        ) {
            let region = RateRegion::new(pts.iter().map(|&(a, b)| rp(a, b)).collect());
            let f = region.frontier().unwrap();
            for w in f.windows(2) {
                prop_assert!(w[0].r1 < w[1].r1);
                prop_assert!(w[0].r2 > w[1].r2);
            }
            for p in region.points() {
                prop_assert!(f.iter().any(|q| q.covers(p, 0.0)));
            }
            prop_assert!(includes(&region, &region, 0.0).unwrap());
        }

        #[test]
        fn supersets_include_subsets(
            pts in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), 2..40),
            cut in 1usize..40,
        ) {
            let all: Vec<RatePoint> = pts.iter().map(|&(a, b)| rp(a, b)).collect();
            let k = cut.min(all.len());
            let sub = RateRegion::new(all[..k].to_vec());
            let sup = RateRegion::new(all);
            prop_assert!(includes(&sup, &sub, 0.0).unwrap());
        }
    }
}
