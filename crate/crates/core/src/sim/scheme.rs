use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::typical::Typical;
use super::{SchemeParams, SetSizes};
use crate::channel::{Dmbc, X, Y1, Y2};
use crate::error::{Error, Result};
use crate::region::aux::{U, YT};
use crate::region::AuxCoding;

/// How often each typicality search came back empty.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureCounts {
    /// Receiver 1, cloud-center (message) search.
    pub r1_message: u32,
    /// Receiver 1, compression index search; bin 0 is fed back instead.
    pub r1_compression: u32,
    /// Receiver 2, joint search for the cloud center and previous bin.
    pub r2_cloud: u32,
    /// Receiver 2, compression index search inside the decoded bin.
    pub r2_compression: u32,
    /// Receiver 2, satellite (message) search.
    pub r2_message: u32,
}

impl FailureCounts {
    pub fn add(&mut self, o: &FailureCounts) {
        self.r1_message += o.r1_message;
        self.r1_compression += o.r1_compression;
        self.r2_cloud += o.r2_cloud;
        self.r2_compression += o.r2_compression;
        self.r2_message += o.r2_message;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    /// Per message block.
    pub m1_ok: Vec<bool>,
    pub m2_ok: Vec<bool>,
    /// `ceil(log2 of the product of feedback alphabet sizes)`.
    pub feedback_bits_used: u64,
    pub failures: FailureCounts,
}

impl TrialResult {
    pub fn success(&self) -> bool {
        self.m1_ok.iter().chain(&self.m2_ok).all(|&b| b)
    }
}

/// Random codebooks for one block; cells are indexed `m1 * bins + l`.
#[derive(Clone, Debug)]
pub struct Codebooks {
    n: usize,
    sizes: SetSizes,
    u: Vec<u8>,
    x: Vec<u8>,
    yt: Vec<u8>,
}

impl Codebooks {
    fn generate<R: Rng>(n: usize, sizes: SetSizes, laws: &Laws, rng: &mut R) -> Self {
        let cells = sizes.m1 * sizes.bins;
        let mut u = vec![0u8; cells * n];
        for s in &mut u {
            *s = laws.u.sample(rng) as u8;
        }
        let mut x = vec![0u8; cells * sizes.m2 * n];
        let mut yt = vec![0u8; cells * sizes.comp * n];
        for c in 0..cells {
            let cloud = &u[c * n..(c + 1) * n];
            for k in 0..sizes.m2 {
                let w = &mut x[(c * sizes.m2 + k) * n..][..n];
                for (t, s) in w.iter_mut().enumerate() {
                    *s = laws.x_given_u[cloud[t] as usize].sample(rng) as u8;
                }
            }
            for k in 0..sizes.comp {
                let w = &mut yt[(c * sizes.comp + k) * n..][..n];
                for (t, s) in w.iter_mut().enumerate() {
                    *s = laws.yt_given_u[cloud[t] as usize].sample(rng) as u8;
                }
            }
        }
        Self { n, sizes, u, x, yt }
    }

    fn cell(&self, m1: usize, l: usize) -> usize {
        m1 * self.sizes.bins + l
    }

    pub fn u(&self, cell: usize) -> &[u8] {
        &self.u[cell * self.n..][..self.n]
    }

    pub fn x(&self, cell: usize, m2: usize) -> &[u8] {
        &self.x[(cell * self.sizes.m2 + m2) * self.n..][..self.n]
    }

    pub fn yt(&self, cell: usize, m: usize) -> &[u8] {
        &self.yt[(cell * self.sizes.comp + m) * self.n..][..self.n]
    }

    fn bin_width(&self) -> usize {
        self.sizes.comp / self.sizes.bins
    }

    /// Bins are contiguous; the last one absorbs the remainder.
    pub fn bin_of(&self, m: usize) -> usize {
        (m / self.bin_width()).min(self.sizes.bins - 1)
    }

    pub fn bin_range(&self, l: usize) -> std::ops::Range<usize> {
        let w = self.bin_width();
        let end = if l + 1 == self.sizes.bins { self.sizes.comp } else { (l + 1) * w };
        l * w..end
    }
}

struct Laws {
    u: WeightedIndex<f64>,
    x_given_u: Vec<WeightedIndex<f64>>,
    yt_given_u: Vec<WeightedIndex<f64>>,
    channel: Vec<WeightedIndex<f64>>,
    y2_card: usize,
}

struct Tests {
    uy1: Typical,
    uyty1: Typical,
    uy2: Typical,
    uyty2: Typical,
    uxyty2: Typical,
}

fn weighted(w: &[f64]) -> Result<WeightedIndex<f64>> {
    WeightedIndex::new(w).map_err(|e| Error::InvalidPmf(e.to_string()))
}

/// Point mass on 0 for rows with no mass (never sampled from).
fn weighted_or_point(w: &[f64]) -> Result<WeightedIndex<f64>> {
    if w.iter().sum::<f64>() > 0.0 {
        weighted(w)
    } else {
        let mut v = vec![0.0; w.len()];
        v[0] = 1.0;
        weighted(&v)
    }
}

fn setup(ch: &Dmbc, aux: &AuxCoding, eps: f64) -> Result<(Laws, Tests)> {
    if aux.q_card() != 1 {
        return Err(Error::Precondition("the simulated scheme needs |Q| = 1".into()));
    }
    let cards = [aux.u_card(), aux.yt_card(), ch.x_size(), ch.y1_size(), ch.y2_size()];
    if cards.iter().any(|&c| c > 256) {
        return Err(Error::Precondition("alphabets above 256 symbols are not simulated".into()));
    }
    let j = aux.joint(ch)?;
    let pu = j.marginalize(&[U])?;
    let puyt = j.marginalize(&[U, YT])?;
    let nyt = aux.yt_card();
    let mut yt_given_u = Vec::new();
    for (u, &p) in pu.probs().iter().enumerate() {
        let row: Vec<f64> = puyt.probs()[u * nyt..(u + 1) * nyt].iter().map(|q| if p > 0.0 { q / p } else { 0.0 }).collect();
        yt_given_u.push(weighted_or_point(&row)?);
    }
    let laws = Laws {
        u: weighted(pu.probs())?,
        x_given_u: aux.x_given_uq().rows().map(weighted_or_point).collect::<Result<_>>()?,
        yt_given_u,
        channel: ch.law().rows().map(weighted_or_point).collect::<Result<_>>()?,
        y2_card: ch.y2_size(),
    };
    let tests = Tests {
        uy1: Typical::new(&j, &[U, Y1], eps)?,
        uyty1: Typical::new(&j, &[U, YT, Y1], eps)?,
        uy2: Typical::new(&j, &[U, Y2], eps)?,
        uyty2: Typical::new(&j, &[U, YT, Y2], eps)?,
        uxyty2: Typical::new(&j, &[U, X, YT, Y2], eps)?,
    };
    Ok((laws, tests))
}

/// What Receiver 1 does with one block: it sees only its own output and the
/// bin index it fed back in the previous block.
struct R1Out {
    m1: Option<usize>,
    /// Fed-back bin index, `None` in the closing block.
    bin: Option<usize>,
}

/// The candidate with the smallest typicality deviation; ties go to the lower index.
fn most_typical(cands: impl Iterator<Item = usize>, dev: impl Fn(usize) -> Option<f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for c in cands {
        if let Some(d) = dev(c) {
            if best.is_none_or(|(_, b)| d < b) {
                best = Some((c, d));
            }
        }
    }
    best.map(|(c, _)| c)
}

fn receiver1(cb: &Codebooks, tests: &Tests, l_prev: usize, y1: &[u8], feed_back: bool, f: &mut FailureCounts) -> R1Out {
    let s = cb.sizes;
    let m1 = most_typical(0..s.m1, |m| tests.uy1.deviation(&[cb.u(cb.cell(m, l_prev)), y1]));
    if m1.is_none() {
        f.r1_message += 1;
    }
    if !feed_back {
        return R1Out { m1, bin: None };
    }
    let comp = m1.and_then(|m| {
        let c = cb.cell(m, l_prev);
        (0..s.comp).find(|&k| tests.uyty1.check(&[cb.u(c), cb.yt(c, k), y1]))
    });
    let bin = match comp {
        Some(k) => cb.bin_of(k),
        None => {
            f.r1_compression += 1;
            0
        }
    };
    R1Out { m1, bin: Some(bin) }
}

/// Receiver 2's first stage on block `b`: the cloud center together with
/// the bin index fed back during block `b - 1`.
fn receiver2_cloud(cb: &Codebooks, tests: &Tests, y2: &[u8], f: &mut FailureCounts) -> Option<(usize, usize)> {
    let s = cb.sizes;
    let hit = most_typical(0..s.m1 * s.bins, |c| tests.uy2.deviation(&[cb.u(c), y2]));
    if hit.is_none() {
        f.r2_cloud += 1;
    }
    hit.map(|c| (c / s.bins, c % s.bins))
}

/// Receiver 2's second stage on block `b - 1`, once the bin index of that
/// block's compression is known from block `b`.
fn receiver2_message(
    cb: &Codebooks,
    tests: &Tests,
    cloud: (usize, usize),
    bin: usize,
    y2: &[u8],
    f: &mut FailureCounts,
) -> Option<usize> {
    let c = cb.cell(cloud.0, cloud.1);
    let u = cb.u(c);
    let Some(k) = most_typical(cb.bin_range(bin), |k| tests.uyty2.deviation(&[u, cb.yt(c, k), y2])) else {
        f.r2_compression += 1;
        return None;
    };
    let yt = cb.yt(c, k);
    let m2 = most_typical(0..cb.sizes.m2, |m| tests.uxyty2.deviation(&[u, cb.x(c, m), yt, y2]));
    if m2.is_none() {
        f.r2_message += 1;
    }
    m2
}

/// One transmission of `B` message blocks plus the closing block, with
/// fresh codebooks drawn from `p.seed`.
pub fn run_trial(ch: &Dmbc, aux: &AuxCoding, p: &SchemeParams) -> Result<TrialResult> {
    p.validate()?;
    p.check_memory()?;
    let (laws, tests) = setup(ch, aux, p.epsilon)?;
    let sizes = p.sizes()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let nb = p.blocks + 1;
    let books: Vec<Codebooks> = (0..nb).map(|_| Codebooks::generate(p.n, sizes, &laws, &mut rng)).collect();
    let m1: Vec<usize> = (0..nb).map(|b| if b < p.blocks { rng.gen_range(0..sizes.m1) } else { 0 }).collect();
    let m2: Vec<usize> = (0..nb).map(|b| if b < p.blocks { rng.gen_range(0..sizes.m2) } else { 0 }).collect();

    let mut f = FailureCounts::default();
    let mut y2s: Vec<Vec<u8>> = Vec::with_capacity(nb);
    let mut m1_ok = Vec::with_capacity(p.blocks);
    let mut l_prev = 0;
    let mut fed_back = 0usize;
    for b in 0..nb {
        let cb = &books[b];
        let x = cb.x(cb.cell(m1[b], l_prev), m2[b]);
        let mut y1 = vec![0u8; p.n];
        let mut y2 = vec![0u8; p.n];
        for t in 0..p.n {
            let o = laws.channel[x[t] as usize].sample(&mut rng);
            y1[t] = (o / laws.y2_card) as u8;
            y2[t] = (o % laws.y2_card) as u8;
        }
        let out = receiver1(cb, &tests, l_prev, &y1, b < p.blocks, &mut f);
        if b < p.blocks {
            m1_ok.push(out.m1 == Some(m1[b]));
        }
        if let Some(l) = out.bin {
            fed_back += 1;
            l_prev = l;
        }
        y2s.push(y2);
    }

    let clouds: Vec<Option<(usize, usize)>> =
        (0..nb).map(|b| receiver2_cloud(&books[b], &tests, &y2s[b], &mut f)).collect();
    let mut m2_ok = Vec::with_capacity(p.blocks);
    for b in 0..p.blocks {
        let guess = match (clouds[b], clouds[b + 1]) {
            (Some(cloud), Some((_, bin))) => receiver2_message(&books[b], &tests, cloud, bin, &y2s[b], &mut f),
            _ => None,
        };
        m2_ok.push(guess == Some(m2[b]));
    }

    let bits = fed_back as f64 * (sizes.bins as f64).log2();
    Ok(TrialResult { m1_ok, m2_ok, feedback_bits_used: (bits - 1e-9).ceil().max(0.0) as u64, failures: f })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::make_bsbc;
    use crate::region::InputPmf;
    use crate::sim::SchemeRates;

    #[test]
    fn bins_partition_the_compression_set() {
        let laws_ch = make_bsbc(0.1, 0.1).unwrap();
        let aux = InputPmf::superposition(0.2).unwrap().to_aux(&laws_ch).unwrap();
        let (laws, _) = setup(&laws_ch, &aux, 0.3).unwrap();
        let sizes = SetSizes { m1: 1, m2: 1, bins: 3, comp: 11 };
        let cb = Codebooks::generate(4, sizes, &laws, &mut ChaCha8Rng::seed_from_u64(1));
        let mut seen = vec![0; 11];
        for l in 0..3 {
            for k in cb.bin_range(l) {
                seen[k] += 1;
                assert_eq!(cb.bin_of(k), l);
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
        assert_eq!(cb.bin_range(2), 6..11);
    }

    #[test]
    fn noiseless_channel_decodes_everything() {
        let ch = make_bsbc(0.0, 0.0).unwrap();
        // X = U, so only the cloud carries information
        let aux = InputPmf::superposition(0.0).unwrap().to_aux(&ch).unwrap();
        let rates = SchemeRates { r1: 0.25, r2: 0.0, r_tilde: 0.0, r_hat: 0.0 };
        let p = SchemeParams::new(rates, 24, 3, 1.0, 9, 0.0).unwrap();
        let r = run_trial(&ch, &aux, &p).unwrap();
        assert!(r.success(), "{r:?}");
        assert_eq!(r.feedback_bits_used, 0);
    }

    #[test]
    fn trials_are_deterministic() {
        let ch = make_bsbc(0.1, 0.05).unwrap();
        let aux = crate::region::example1_aux(&ch, 0.1, 0.3).unwrap();
        let rates = SchemeRates { r1: 0.1, r2: 0.1, r_tilde: 0.1, r_hat: 0.2 };
        let p = SchemeParams::new(rates, 20, 2, 0.5, 4, 0.2).unwrap();
        let a = run_trial(&ch, &aux, &p).unwrap();
        let b = run_trial(&ch, &aux, &p).unwrap();
        assert_eq!(a, b);
        assert!(a.feedback_bits_used as f64 <= p.feedback_budget());
    }
}
