//! Sampling helpers for probability simplices.

use rand::Rng;

/// Number of points of the resolution-`res` grid on the `dim`-entry simplex,
/// saturating at `usize::MAX`.
pub fn grid_size(dim: usize, res: usize) -> usize {
    if dim == 0 {
        return 0;
    }
    // C(res + dim - 1, dim - 1)
    let k = dim - 1;
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        acc = acc * (res as u128 + i) / i;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// All pmfs on `dim` symbols whose entries are multiples of `1/res`.
pub fn grid(dim: usize, res: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    if dim == 0 {
        return out;
    }
    let mut counts = vec![0usize; dim];
    fn rec(pos: usize, left: usize, counts: &mut Vec<usize>, res: usize, out: &mut Vec<Vec<f64>>) {
        let dim = counts.len();
        if pos == dim - 1 {
            counts[pos] = left;
            out.push(counts.iter().map(|&c| c as f64 / res as f64).collect());
            return;
        }
        for c in 0..=left {
            counts[pos] = c;
            rec(pos + 1, left - c, counts, res, out);
        }
    }
    rec(0, res, &mut counts, res, &mut out);
    out
}

/// Uniform point of the simplex (flat Dirichlet).
pub fn uniform<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = v.iter().sum();
    if s <= 0.0 {
        return vec![1.0 / dim as f64; dim];
    }
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// Uniformly chosen point of the resolution-`res` grid (stars and bars).
pub fn grid_point<R: Rng + ?Sized>(dim: usize, res: usize, rng: &mut R) -> Vec<f64> {
    let slots = res + dim - 1;
    let mut bars: Vec<usize> = rand::seq::index::sample(rng, slots, dim - 1).into_vec();
    bars.sort_unstable();
    let mut out = Vec::with_capacity(dim);
    let mut prev = 0usize;
    for (i, &b) in bars.iter().enumerate() {
        let start = if i == 0 { 0 } else { prev + 1 };
        out.push((b - start) as f64 / res as f64);
        prev = b;
    }
    let start = if bars.is_empty() { 0 } else { prev + 1 };
    out.push((slots - start) as f64 / res as f64);
    out
}

/// Moves up to `step` mass between two random entries of `p`.
pub fn perturb<R: Rng + ?Sized>(p: &mut [f64], step: f64, rng: &mut R) {
    if p.len() < 2 {
        return;
    }
    let i = rng.gen_range(0..p.len());
    let mut j = rng.gen_range(0..p.len() - 1);
    if j >= i {
        j += 1;
    }
    let delta = (rng.gen::<f64>() * step).min(p[i]);
    p[i] -= delta;
    p[j] += delta;
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= s);
}

/// Derives a child seed (splitmix64 finaliser).
pub fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
