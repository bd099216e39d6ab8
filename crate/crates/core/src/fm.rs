//! Fourier-Motzkin elimination for small systems `A x <= b`.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Comparison tolerance on normalized rows.
pub const TOL: f64 = 1e-9;
/// Half-width of the box that bounds vertex enumeration.
pub const BOX: f64 = 1e6;

/// One inequality `coeffs . x <= bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub coeffs: Vec<f64>,
    pub bound: f64,
}

impl Row {
    pub fn new(coeffs: Vec<f64>, bound: f64) -> Self {
        Self { coeffs, bound }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0.0)
    }

    /// Scales so the largest coefficient magnitude is 1 and flushes tiny
    /// coefficients to zero. Constant rows are left as they are.
    fn normalized(mut self) -> Self {
        let m = self.coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()));
        if m > 0.0 {
            self.coeffs.iter_mut().for_each(|c| *c /= m);
            self.bound /= m;
        }
        for c in &mut self.coeffs {
            if c.abs() <= TOL {
                *c = 0.0;
            }
        }
        self
    }

    pub fn satisfied_by(&self, x: &[f64], slack: f64) -> bool {
        let lhs: f64 = self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        lhs <= self.bound + slack
    }

    fn same_as(&self, other: &Row) -> bool {
        (self.bound - other.bound).abs() <= TOL
            && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| (a - b).abs() <= TOL)
    }
}

/// A linear inequality system over named variables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinSys {
    vars: Vec<String>,
    rows: Vec<Row>,
}

impl LinSys {
    pub fn new(vars: Vec<String>, rows: Vec<Row>) -> Result<Self> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::Structure(format!("variable `{v}` listed twice")));
            }
        }
        for r in &rows {
            if r.coeffs.len() != vars.len() {
                return Err(Error::Structure(format!(
                    "row has {} coefficients for {} variables",
                    r.coeffs.len(),
                    vars.len()
                )));
            }
            if !r.bound.is_finite() || r.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::Domain("non-finite coefficient".into()));
            }
        }
        Ok(Self { vars, rows: rows.into_iter().map(Row::normalized).collect() })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownAxis(name.to_string()))
    }

    pub fn satisfied_by(&self, x: &[f64], slack: f64) -> bool {
        self.rows.iter().all(|r| r.satisfied_by(x, slack))
    }

    /// True iff no constant row reads `0 <= negative`.
    pub fn constants_hold(&self) -> bool {
        self.rows.iter().filter(|r| r.is_constant()).all(|r| r.bound >= -TOL)
    }

    fn infeasible(vars: Vec<String>) -> Self {
        let n = vars.len();
        Self { vars, rows: vec![Row::new(vec![0.0; n], -1.0)] }
    }
}

impl fmt::Display for LinSys {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let mut terms = Vec::new();
            for (c, v) in r.coeffs.iter().zip(&self.vars) {
                if *c != 0.0 {
                    terms.push(format!("{c:+.6} {v}"));
                }
            }
            let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" ") };
            writeln!(f, "{lhs} <= {:.6}", r.bound)?;
        }
        Ok(())
    }
}

/// Projects out `var`: every row with a positive coefficient is paired with
/// every row with a negative one, rows not mentioning `var` are kept.
pub fn eliminate(sys: &LinSys, var: &str) -> Result<LinSys> {
    let k = sys.var_index(var)?;
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    for r in &sys.rows {
        let c = r.coeffs[k];
        if c > 0.0 {
            pos.push(r);
        } else if c < 0.0 {
            neg.push(r);
        } else {
            out.push(drop_coord(r, k));
        }
    }
    for p in &pos {
        for q in &neg {
            let (a, b) = (p.coeffs[k], -q.coeffs[k]);
            let coeffs = p.coeffs.iter().zip(&q.coeffs).map(|(x, y)| x / a + y / b).collect();
            let mut row = Row::new(coeffs, p.bound / a + q.bound / b);
            row.coeffs[k] = 0.0;
            out.push(drop_coord(&row, k));
        }
    }
    let mut vars = sys.vars.clone();
    vars.remove(k);
    LinSys::new(vars, out)
}

fn drop_coord(r: &Row, k: usize) -> Row {
    let mut coeffs = r.coeffs.clone();
    coeffs.remove(k);
    Row::new(coeffs, r.bound)
}

fn box_rows(d: usize) -> Vec<Row> {
    let mut rows = Vec::with_capacity(2 * d);
    for i in 0..d {
        let mut c = vec![0.0; d];
        c[i] = 1.0;
        rows.push(Row::new(c.clone(), BOX));
        c[i] = -1.0;
        rows.push(Row::new(c, BOX));
    }
    rows
}

/// Vertices of `{x : rows} ∩ box`, by solving every `d`-subset of tight rows.
fn vertices(d: usize, rows: &[&Row]) -> Vec<Vec<f64>> {
    let boxed = box_rows(d);
    let all: Vec<&Row> = rows.iter().copied().filter(|r| !r.is_constant()).chain(boxed.iter()).collect();
    let mut out = Vec::new();
    if d == 0 {
        out.push(Vec::new());
        return out;
    }
    let m = all.len();
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        let a = DMatrix::from_fn(d, d, |i, j| all[idx[i]].coeffs[j]);
        let b = DVector::from_fn(d, |i, _| all[idx[i]].bound);
        if let Some(x) = a.lu().solve(&b) {
            let x: Vec<f64> = x.iter().copied().collect();
            if x.iter().all(|v| v.is_finite()) && all.iter().all(|r| r.satisfied_by(&x, 1e-7)) {
                out.push(x);
            }
        }
        // next combination
        let mut i = d;
        while i > 0 && idx[i - 1] == m - d + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..d {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

/// True iff the system has a solution inside the `[-BOX, BOX]` box.
pub fn is_feasible(sys: &LinSys) -> bool {
    if !sys.constants_hold() {
        return false;
    }
    let rows: Vec<&Row> = sys.rows.iter().collect();
    !vertices(sys.vars.len(), &rows).is_empty()
}

/// Drops rows implied by the others (within the bounding box). Duplicates
/// and always-true constant rows disappear; an infeasible system collapses
/// to the single row `0 <= -1`.
pub fn remove_redundant(sys: &LinSys) -> LinSys {
    if !is_feasible(sys) {
        return LinSys::infeasible(sys.vars.clone());
    }
    let d = sys.vars.len();
    let mut kept: Vec<Row> = Vec::new();
    for r in &sys.rows {
        if r.is_constant() || kept.iter().any(|k| k.same_as(r)) {
            continue;
        }
        kept.push(r.clone());
    }
    let mut i = 0;
    while i < kept.len() {
        let others: Vec<&Row> = kept.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, r)| r).collect();
        let row = &kept[i];
        let max = vertices(d, &others)
            .iter()
            .map(|x| row.coeffs.iter().zip(x).map(|(a, v)| a * v).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max);
        if max <= row.bound + TOL {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    LinSys { vars: sys.vars.clone(), rows: kept }
}

/// Information values that parametrize the single-letter scheme analysis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thm1Values {
    /// `I(U;Y1)`
    pub i_u_y1: f64,
    /// `I(U;Y2)`
    pub i_u_y2: f64,
    /// `I(X;Yt Y2|U)`
    pub i_x_yty2_given_u: f64,
    /// `I(Yt;Y1|U Y2)`
    pub i_yt_y1_given_uy2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thm1Derivation {
    /// Scheme constraints over `(R1, R2, Rt)`.
    pub full: LinSys,
    /// After eliminating `Rt`.
    pub projected: LinSys,
    /// After dropping redundant rows.
    pub reduced: LinSys,
    pub feasible: bool,
}

pub const R1: &str = "R1";
pub const R2: &str = "R2";
pub const RT: &str = "Rt";

/// The scheme constraints with all `epsilon` terms at zero, plus the
/// feedback-link cap on the bin rate `Rt`.
pub fn scheme_system(v: &Thm1Values, rfb: f64) -> Result<LinSys> {
    LinSys::new(
        vec![R1.into(), R2.into(), RT.into()],
        vec![
            Row::new(vec![1.0, 0.0, 0.0], v.i_u_y1),
            Row::new(vec![0.0, 0.0, -1.0], -v.i_yt_y1_given_uy2),
            Row::new(vec![1.0, 0.0, 1.0], v.i_u_y2),
            Row::new(vec![0.0, 1.0, 0.0], v.i_x_yty2_given_u),
            Row::new(vec![0.0, 0.0, 1.0], rfb),
        ],
    )
}

/// The binned-compression region constraints written directly, plus the
/// feedback condition as a constant row.
pub fn theorem1_system(v: &Thm1Values, rfb: f64) -> Result<LinSys> {
    LinSys::new(
        vec![R1.into(), R2.into()],
        vec![
            Row::new(vec![1.0, 0.0], v.i_u_y1),
            Row::new(vec![1.0, 0.0], v.i_u_y2 - v.i_yt_y1_given_uy2),
            Row::new(vec![0.0, 1.0], v.i_x_yty2_given_u),
            Row::new(vec![0.0, 0.0], rfb - v.i_yt_y1_given_uy2),
        ],
    )
}

pub fn derive_thm1_constraints(v: &Thm1Values, rfb: f64) -> Result<Thm1Derivation> {
    let vals = [v.i_u_y1, v.i_u_y2, v.i_x_yty2_given_u, v.i_yt_y1_given_uy2];
    if vals.iter().any(|x| !(*x >= 0.0)) {
        return Err(Error::Domain("information values must be nonnegative".into()));
    }
    let full = scheme_system(v, rfb)?;
    let projected = eliminate(&full, RT)?;
    let reduced = remove_redundant(&projected);
    let feasible = is_feasible(&projected);
    Ok(Thm1Derivation { full, projected, reduced, feasible })
}

/// Same rows up to order (rows are compared after normalization).
pub fn same_rows(a: &LinSys, b: &LinSys, tol: f64) -> bool {
    if a.vars != b.vars || a.rows.len() != b.rows.len() {
        return false;
    }
    let close = |x: &Row, y: &Row| {
        (x.bound - y.bound).abs() <= tol && x.coeffs.iter().zip(&y.coeffs).all(|(p, q)| (p - q).abs() <= tol)
    };
    let mut used = vec![false; b.rows.len()];
    for r in &a.rows {
        match (0..b.rows.len()).find(|&j| !used[j] && close(r, &b.rows[j])) {
            Some(j) => used[j] = true,
            None => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    fn sys(vars: &[&str], rows: Vec<(Vec<f64>, f64)>) -> LinSys {
        LinSys::new(
            vars.iter().map(|s| s.to_string()).collect(),
            rows.into_iter().map(|(c, b)| Row::new(c, b)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn eliminate_hand_example() {
        // Rt >= 0.3, R1 + Rt <= 0.9, Rt <= 0.85
        let s = sys(&["R1", "Rt"], vec![(vec![0.0, -1.0], -0.3), (vec![1.0, 1.0], 0.9), (vec![0.0, 1.0], 0.85)]);
        let p = eliminate(&s, "Rt").unwrap();
        let want = sys(&["R1"], vec![(vec![1.0], 0.6), (vec![0.0], 0.55)]);
        assert!(same_rows(&p, &want, 1e-12), "{p}");
    }

    #[test]
    fn eliminate_absent_variable_keeps_rows() {
        let s = sys(&["a", "b"], vec![(vec![1.0, 0.0], 1.0), (vec![-1.0, 0.0], 0.5)]);
        let p = eliminate(&s, "b").unwrap();
        assert_eq!(p.rows().len(), 2);
        assert!(eliminate(&s, "c").is_err());
    }

    #[test]
    fn infeasibility_survives_projection() {
        let s = sys(&["x", "y"], vec![(vec![1.0, 0.0], 0.0), (vec![-1.0, 0.0], -1.0), (vec![0.0, 1.0], 2.0)]);
        assert!(!is_feasible(&s));
        assert!(!is_feasible(&eliminate(&s, "y").unwrap()));
        let r = remove_redundant(&s);
        assert_eq!(r.rows().len(), 1);
        assert!(!r.constants_hold());
    }

    #[test]
    fn redundancy_examples() {
        let s = sys(&["x"], vec![(vec![1.0], 1.0), (vec![1.0], 2.0)]);
        let r = remove_redundant(&s);
        assert!(same_rows(&r, &sys(&["x"], vec![(vec![1.0], 1.0)]), 1e-12));
        let minimal = sys(&["x", "y"], vec![(vec![1.0, 0.0], 1.0), (vec![0.0, 1.0], 1.0), (vec![-1.0, -1.0], 0.0)]);
        assert!(same_rows(&remove_redundant(&minimal), &minimal, 1e-12));
        let dup = sys(&["x"], vec![(vec![2.0], 2.0), (vec![1.0], 1.0)]);
        assert_eq!(remove_redundant(&dup).rows().len(), 1);
    }

    #[test]
    fn thm1_derivation_rows() {
        let v = Thm1Values { i_u_y1: 0.3, i_u_y2: 0.5, i_x_yty2_given_u: 0.4, i_yt_y1_given_uy2: 0.1 };
        let d = derive_thm1_constraints(&v, 0.2).unwrap();
        assert!(d.feasible);
        assert!(same_rows(&d.projected, &theorem1_system(&v, 0.2).unwrap(), 1e-12), "{}", d.projected);
        // R1 <= 0.3 is tighter than R1 <= 0.4
        let r = &d.reduced;
        assert_eq!(r.rows().len(), 2);
        assert!(r.satisfied_by(&[0.3, 0.4], 1e-12));
        assert!(!r.satisfied_by(&[0.31, 0.0], 1e-12));
    }

    #[test]
    fn thm1_derivation_infeasible_and_zero_compression() {
        let v = Thm1Values { i_u_y1: 0.3, i_u_y2: 0.5, i_x_yty2_given_u: 0.4, i_yt_y1_given_uy2: 0.3 };
        assert!(!derive_thm1_constraints(&v, 0.2).unwrap().feasible);
        let v0 = Thm1Values { i_yt_y1_given_uy2: 0.0, ..v };
        let d = derive_thm1_constraints(&v0, 0.0).unwrap();
        assert!(d.feasible);
        let r = &d.reduced;
        assert!(r.satisfied_by(&[0.3, 0.4], 1e-12));
        assert!(!r.satisfied_by(&[0.3, 0.41], 1e-12));
        assert_eq!(r.rows().len(), 2);
    }
}
