//! Robust (letter-frequency) typicality tests.

use crate::error::Result;
use crate::prob::JointPmf;

/// Tests `|count(a)/n - p(a)| <= eps * p(a)` for every symbol tuple `a`.
#[derive(Clone, Debug)]
pub struct Typical {
    dims: Vec<usize>,
    probs: Vec<f64>,
    eps: f64,
}

impl Typical {
    pub fn new(joint: &JointPmf, axes: &[&str], eps: f64) -> Result<Self> {
        let m = joint.marginalize(axes)?;
        Ok(Self { dims: m.shape(), probs: m.probs().to_vec(), eps })
    }

    pub fn arity(&self) -> usize {
        self.dims.len()
    }

    /// `seqs` are aligned symbol sequences, one per axis, all of length `n`.
    pub fn check(&self, seqs: &[&[u8]]) -> bool {
        self.deviation(seqs).is_some()
    }

    /// Largest `|count(a)/n - p(a)| / p(a)` over the support, or `None`
    /// when the sequences are not typical.
    pub fn deviation(&self, seqs: &[&[u8]]) -> Option<f64> {
        debug_assert_eq!(seqs.len(), self.dims.len());
        let n = seqs[0].len();
        if n == 0 {
            return Some(0.0);
        }
        let mut counts = vec![0u32; self.probs.len()];
        for t in 0..n {
            let mut idx = 0;
            for (s, d) in seqs.iter().zip(&self.dims) {
                idx = idx * d + s[t] as usize;
            }
            if self.probs[idx] == 0.0 {
                return None;
            }
            counts[idx] += 1;
        }
        let nf = n as f64;
        let mut worst = 0.0f64;
        for (&c, &p) in counts.iter().zip(&self.probs) {
            if p > 0.0 {
                let d = (c as f64 / nf - p).abs();
                if d > self.eps * p {
                    return None;
                }
                worst = worst.max(d / p);
            }
        }
        Some(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{Axis, JointPmf};

    #[test]
    fn frequencies_within_tolerance() {
        let j = JointPmf::new(vec![Axis::binary("A")], vec![0.25, 0.75]).unwrap();
        let t = Typical::new(&j, &["A"], 0.1).unwrap();
        assert!(t.check(&[&[0, 1, 1, 1]]));
        assert!(!t.check(&[&[0, 0, 1, 1]]));
        let j = JointPmf::new(vec![Axis::binary("A")], vec![0.0, 1.0]).unwrap();
        let t = Typical::new(&j, &["A"], 10.0).unwrap();
        assert!(!t.check(&[&[1, 1, 0, 1]]));
        let j = JointPmf::new(vec![Axis::binary("A")], vec![0.5, 0.5]).unwrap();
        let t = Typical::new(&j, &["A"], 0.5).unwrap();
        assert_eq!(t.deviation(&[&[0, 1, 0, 1]]), Some(0.0));
        assert_eq!(t.deviation(&[&[0, 0, 0, 1]]), Some(0.5));
        assert_eq!(t.deviation(&[&[0, 0, 0, 0]]), None);
    }
}
