//! Finite-alphabet probability: pmfs, joint tensors, kernels, entropy and
//! (conditional) mutual information.
//!
//! Everything is dense `f64` and logarithms are base 2, so every information
//! quantity is in bits. A [`JointPmf`] is a row-major tensor with one named
//! axis per random variable; marginals and information measures are requested
//! by axis name.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Tolerance on total mass and on kernel row sums.
pub const MASS_TOL: f64 = 1e-12;
/// Negative information values down to `-MI_CLAMP` are rounding noise.
pub const MI_CLAMP: f64 = 1e-9;
/// Largest joint tensor we are willing to allocate.
pub const MAX_JOINT_SIZE: usize = 10_000_000;

/// A named finite alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axis {
    name: String,
    labels: Vec<String>,
}

impl Axis {
    pub fn new(name: impl Into<String>, labels: Vec<String>) -> Result<Self> {
        let name = name.into();
        if labels.is_empty() {
            return Err(Error::Structure(format!("axis `{name}` has no symbols")));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::Structure(format!(
                    "axis `{name}` repeats label `{l}`"
                )));
            }
        }
        Ok(Self { name, labels })
    }

    /// Alphabet `{0, 1, ..., size-1}`.
    pub fn indexed(name: impl Into<String>, size: usize) -> Self {
        let size = size.max(1);
        Self {
            name: name.into(),
            labels: (0..size).map(|i| i.to_string()).collect(),
        }
    }

    pub fn binary(name: impl Into<String>) -> Self {
        Self::indexed(name, 2)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            labels: self.labels.clone(),
        }
    }
}

fn check_probs(probs: &[f64], what: &str) -> Result<()> {
    let mut total = 0.0;
    for &p in probs {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::InvalidPmf(format!("{what}: entry {p} is not a probability")));
        }
        total += p;
    }
    if (total - 1.0).abs() > MASS_TOL * (probs.len().max(1) as f64).sqrt().max(1.0) {
        return Err(Error::InvalidPmf(format!("{what}: total mass {total}")));
    }
    Ok(())
}

fn volume(axes: &[Axis]) -> Result<usize> {
    axes.iter().try_fold(1usize, |acc, a| {
        acc.checked_mul(a.size())
            .filter(|&v| v <= MAX_JOINT_SIZE)
            .ok_or_else(|| Error::Structure(format!("joint exceeds {MAX_JOINT_SIZE} entries")))
    })
}

/// Shannon entropy in bits of a probability vector, with `0 log 0 = 0`.
pub fn entropy_bits(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// `h(p) = -p log p - (1-p) log (1-p)`.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_bits(&[p, 1.0 - p])
}

/// Binary convolution `a * b = (1-a) b + a (1-b)`.
pub fn star(a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
        return Err(Error::Domain(format!("star({a}, {b}) needs arguments in [0,1]")));
    }
    Ok((1.0 - a) * b + a * (1.0 - b))
}

/// A pmf over a single labelled alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct FinitePmf {
    alphabet: Vec<String>,
    probs: Vec<f64>,
}

impl FinitePmf {
    pub fn new(alphabet: Vec<String>, probs: Vec<f64>) -> Result<Self> {
        if alphabet.len() != probs.len() {
            return Err(Error::Structure(format!(
                "{} labels for {} probabilities",
                alphabet.len(),
                probs.len()
            )));
        }
        // reuse the label checks
        Axis::new("pmf", alphabet.clone())?;
        check_probs(&probs, "pmf")?;
        Ok(Self { alphabet, probs })
    }

    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        let alphabet = (0..probs.len()).map(|i| i.to_string()).collect();
        Self::new(alphabet, probs)
    }

    pub fn uniform(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Empty("uniform pmf over empty alphabet".into()));
        }
        Self::from_probs(vec![1.0 / size as f64; size])
    }

    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("Bern({p})")));
        }
        Self::from_probs(vec![1.0 - p, p])
    }

    pub fn point_mass(size: usize, at: usize) -> Result<Self> {
        if at >= size {
            return Err(Error::Domain(format!("point mass at {at} of {size}")));
        }
        let mut probs = vec![0.0; size];
        probs[at] = 1.0;
        Self::from_probs(probs)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn entropy(&self) -> f64 {
        entropy_bits(&self.probs)
    }

    pub fn axis(&self, name: &str) -> Axis {
        Axis {
            name: name.to_string(),
            labels: self.alphabet.clone(),
        }
    }

    pub fn into_joint(self, name: &str) -> JointPmf {
        JointPmf {
            axes: vec![self.axis(name)],
            probs: self.probs,
        }
    }
}

/// Conditional pmf from one group of axes to another.
///
/// Row `i` (input tuple in row-major order over `from`) is a pmf over the
/// row-major product of `to`.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    from: Vec<Axis>,
    to: Vec<Axis>,
    rows: Vec<f64>,
}

impl Kernel {
    /// `rows` is flattened: `inputs * outputs` entries, input-major.
    pub fn new(from: Vec<Axis>, to: Vec<Axis>, rows: Vec<f64>) -> Result<Self> {
        let n_in = volume(&from)?;
        let n_out = volume(&to)?;
        ensure_distinct(from.iter().chain(to.iter()))?;
        if rows.len() != n_in * n_out {
            return Err(Error::Structure(format!(
                "kernel expects {} entries, got {}",
                n_in * n_out,
                rows.len()
            )));
        }
        for (i, row) in rows.chunks(n_out).enumerate() {
            check_probs(row, &format!("kernel row {i}"))?;
        }
        Ok(Self { from, to, rows })
    }

    pub fn from_rows(from: Vec<Axis>, to: Vec<Axis>, rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(from, to, rows.into_iter().flatten().collect())
    }

    /// Deterministic kernel copying `from` into a fresh axis named `to_name`.
    pub fn identity(from: &Axis, to_name: &str) -> Self {
        let n = from.size();
        let mut rows = vec![0.0; n * n];
        for i in 0..n {
            rows[i * n + i] = 1.0;
        }
        Self {
            from: vec![from.clone()],
            to: vec![from.renamed(to_name)],
            rows,
        }
    }

    /// Every input maps to the same output pmf.
    pub fn constant(from: Vec<Axis>, to: Axis, pmf: &FinitePmf) -> Result<Self> {
        if pmf.len() != to.size() {
            return Err(Error::Structure("constant kernel pmf size mismatch".into()));
        }
        let n_in = volume(&from)?;
        let rows = (0..n_in).flat_map(|_| pmf.probs().iter().copied()).collect();
        Self::new(from, vec![to], rows)
    }

    pub fn from_axes(&self) -> &[Axis] {
        &self.from
    }

    pub fn to_axes(&self) -> &[Axis] {
        &self.to
    }

    pub fn n_inputs(&self) -> usize {
        self.from.iter().map(Axis::size).product()
    }

    pub fn n_outputs(&self) -> usize {
        self.to.iter().map(Axis::size).product()
    }

    pub fn row(&self, input: usize) -> &[f64] {
        let n = self.n_outputs();
        &self.rows[input * n..(input + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.rows.chunks(self.n_outputs())
    }

    pub fn flat(&self) -> &[f64] {
        &self.rows
    }
}

fn ensure_distinct<'a>(axes: impl Iterator<Item = &'a Axis>) -> Result<()> {
    let mut seen = HashSet::new();
    for a in axes {
        if !seen.insert(a.name()) {
            return Err(Error::Structure(format!("axis `{}` appears twice", a.name())));
        }
    }
    Ok(())
}

/// Joint pmf over named axes, stored row-major (last axis fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct JointPmf {
    axes: Vec<Axis>,
    probs: Vec<f64>,
}

impl JointPmf {
    pub fn new(axes: Vec<Axis>, probs: Vec<f64>) -> Result<Self> {
        ensure_distinct(axes.iter())?;
        let n = volume(&axes)?;
        if probs.len() != n {
            return Err(Error::Structure(format!(
                "joint expects {n} entries, got {}",
                probs.len()
            )));
        }
        check_probs(&probs, "joint")?;
        Ok(Self { axes, probs })
    }

    /// The trivial joint over no variables (a single unit mass).
    pub fn unit() -> Self {
        Self {
            axes: Vec::new(),
            probs: vec![1.0],
        }
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Axis::size).collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn axis_index(&self, name: &str) -> Result<usize> {
        self.axes
            .iter()
            .position(|a| a.name() == name)
            .ok_or_else(|| Error::UnknownAxis(name.to_string()))
    }

    pub fn axis(&self, name: &str) -> Result<&Axis> {
        Ok(&self.axes[self.axis_index(name)?])
    }

    /// Probability at a coordinate tuple (one index per axis, in axis order).
    pub fn get(&self, coords: &[usize]) -> Result<f64> {
        if coords.len() != self.axes.len() {
            return Err(Error::Structure("coordinate arity mismatch".into()));
        }
        let mut flat = 0;
        for (c, a) in coords.iter().zip(&self.axes) {
            if *c >= a.size() {
                return Err(Error::Domain(format!("index {c} outside `{}`", a.name())));
            }
            flat = flat * a.size() + c;
        }
        Ok(self.probs[flat])
    }

    fn resolve(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut seen = HashSet::new();
        names
            .iter()
            .map(|n| {
                if !seen.insert(*n) {
                    return Err(Error::Structure(format!("axis `{n}` listed twice")));
                }
                self.axis_index(n)
            })
            .collect()
    }

    /// Maps every flat index of `self` to the flat index of the sub-tensor
    /// spanned by `keep` (in the order given).
    fn projection(&self, keep: &[usize]) -> Vec<usize> {
        let shape = self.shape();
        let mut out_stride = vec![0usize; shape.len()];
        let mut s = 1;
        for &k in keep.iter().rev() {
            out_stride[k] = s;
            s *= shape[k];
        }
        let mut map = Vec::with_capacity(self.probs.len());
        let mut coords = vec![0usize; shape.len()];
        let mut cur = 0usize;
        for _ in 0..self.probs.len() {
            map.push(cur);
            // odometer increment, last axis fastest
            for ax in (0..shape.len()).rev() {
                coords[ax] += 1;
                cur += out_stride[ax];
                if coords[ax] < shape[ax] {
                    break;
                }
                cur -= out_stride[ax] * shape[ax];
                coords[ax] = 0;
            }
        }
        map
    }

    fn marginal_probs(&self, keep: &[usize]) -> Vec<f64> {
        let size: usize = keep.iter().map(|&k| self.axes[k].size()).product();
        let mut out = vec![0.0; size];
        for (p, j) in self.probs.iter().zip(self.projection(keep)) {
            out[j] += p;
        }
        out
    }

    /// Sums out every axis not in `keep`; the result's axes follow `keep`.
    pub fn marginalize(&self, keep: &[&str]) -> Result<JointPmf> {
        let idx = self.resolve(keep)?;
        Ok(JointPmf {
            axes: idx.iter().map(|&i| self.axes[i].clone()).collect(),
            probs: self.marginal_probs(&idx),
        })
    }

    /// Entropy in bits of the marginal on `axes`.
    pub fn entropy(&self, axes: &[&str]) -> Result<f64> {
        let idx = self.resolve(axes)?;
        Ok(entropy_bits(&self.marginal_probs(&idx)))
    }

    /// `H(A | C)`.
    pub fn cond_entropy(&self, a: &[&str], c: &[&str]) -> Result<f64> {
        let ac: Vec<&str> = a.iter().chain(c).copied().collect();
        Ok(self.entropy(&ac)? - self.entropy(c)?)
    }

    /// `I(A; B | C)` in bits. `c` may be empty.
    pub fn cond_mutual_info(&self, a: &[&str], b: &[&str], c: &[&str]) -> Result<f64> {
        let all: Vec<&str> = a.iter().chain(b).chain(c).copied().collect();
        // also rejects overlap between the three groups
        self.resolve(&all)?;
        let ac: Vec<&str> = a.iter().chain(c).copied().collect();
        let bc: Vec<&str> = b.iter().chain(c).copied().collect();
        let v = self.entropy(&ac)? + self.entropy(&bc)? - self.entropy(&all)? - self.entropy(c)?;
        clamp_information(v)
    }

    pub fn mutual_info(&self, a: &[&str], b: &[&str]) -> Result<f64> {
        self.cond_mutual_info(a, b, &[])
    }

    /// Chains `kernel` onto this joint; the new axes are appended.
    pub fn compose(&self, kernel: &Kernel) -> Result<JointPmf> {
        let mut from_idx = Vec::with_capacity(kernel.from.len());
        for a in &kernel.from {
            let i = self.axis_index(a.name())?;
            if self.axes[i] != *a {
                return Err(Error::Structure(format!(
                    "kernel input `{}` does not match the joint's alphabet",
                    a.name()
                )));
            }
            from_idx.push(i);
        }
        for a in &kernel.to {
            if self.axis_index(a.name()).is_ok() {
                return Err(Error::Structure(format!(
                    "kernel output `{}` already present",
                    a.name()
                )));
            }
        }
        let mut axes = self.axes.clone();
        axes.extend(kernel.to.iter().cloned());
        volume(&axes)?;
        let n_out = kernel.n_outputs();
        let map = self.projection(&from_idx);
        let mut probs = Vec::with_capacity(self.probs.len() * n_out);
        for (&p, &row) in self.probs.iter().zip(&map) {
            probs.extend(kernel.row(row).iter().map(|k| p * k));
        }
        Ok(JointPmf { axes, probs })
    }

    /// Independent product `self x other`.
    pub fn product(&self, other: &JointPmf) -> Result<JointPmf> {
        let mut axes = self.axes.clone();
        axes.extend(other.axes.iter().cloned());
        ensure_distinct(axes.iter())?;
        volume(&axes)?;
        let probs = self
            .probs
            .iter()
            .flat_map(|p| other.probs.iter().map(move |q| p * q))
            .collect();
        Ok(JointPmf { axes, probs })
    }
}

/// Free-function form of [`JointPmf::compose`].
pub fn compose(prior: &JointPmf, kernel: &Kernel) -> Result<JointPmf> {
    prior.compose(kernel)
}

pub(crate) fn clamp_information(v: f64) -> Result<f64> {
    if v >= 0.0 {
        Ok(v)
    } else if v >= -MI_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::Consistency(format!("negative information {v}")))
    }
}
