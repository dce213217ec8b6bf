//! The boundary measure ν on [0,1]: the latent distribution that drives the
//! θ-parameter growth model and the limit kernel.
//!
//! Built-in families are a point mass δ_p, the two-point measure
//! p·δ_1 + (1-p)·δ_0, the uniform (Lebesgue) measure, and a tabulated
//! right-continuous inverse CDF ψ for everything else.

use std::fmt;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};
use crate::numeric::{binom_scaled, KahanSum};
use crate::rng::RandomStream;

/// Minimum number of midpoint panels used for quadrature over a ψ table.
const MIN_PANELS: usize = 1 << 12;

/// A probability measure on [0,1].
///
/// Invariants are enforced by the checked constructors: all parameters lie
/// in [0,1] and table knots are nondecreasing in both coordinates.
#[derive(Clone, Debug)]
pub enum BoundaryMeasure {
    /// δ_p: all mass at `p`.
    PointMass(f64),
    /// p·δ_1 + (1-p)·δ_0, i.e. Bernoulli(p) on {0,1}.
    TwoPoint(f64),
    /// Lebesgue measure on [0,1].
    Uniform,
    /// Measure given by a tabulated right-continuous inverse CDF.
    InverseCdfTable(CdfTable),
}

/// Piecewise-linear inverse CDF ψ: [0,1] → [0,1], nondecreasing.
///
/// Jumps are encoded as duplicate `u` knots; ψ is right-continuous there.
/// Flat stretches of ψ are atoms of the measure.
#[derive(Clone, Debug)]
pub struct CdfTable {
    knots: Vec<(f64, f64)>,
    /// Refined midpoint quadrature nodes (weight, ψ at panel midpoint);
    /// weights sum to 1. Precomputed once since the table is immutable.
    nodes: Vec<(f64, f64)>,
}

impl CdfTable {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<CdfTable> {
        if knots.len() < 2 {
            return Err(Error::InvalidMeasure("table needs at least 2 knots".into()));
        }
        if knots[0].0 != 0.0 || knots[knots.len() - 1].0 != 1.0 {
            return Err(Error::InvalidMeasure(
                "table must start at u=0 and end at u=1".into(),
            ));
        }
        for &(u, psi) in &knots {
            if !(u.is_finite() && psi.is_finite() && (0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&psi)) {
                return Err(Error::InvalidMeasure(format!("knot ({u}, {psi}) outside [0,1]")));
            }
        }
        for w in knots.windows(2) {
            if w[1].0 < w[0].0 || w[1].1 < w[0].1 {
                return Err(Error::InvalidMeasure(format!(
                    "nonmonotone knots ({}, {}) -> ({}, {})",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        let nodes = CdfTable::refine(&knots);
        Ok(CdfTable { knots, nodes })
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    /// Split every segment into panels no wider than 1/MIN_PANELS so knots
    /// stay panel boundaries (the integrand is linear inside each panel).
    fn refine(knots: &[(f64, f64)]) -> Vec<(f64, f64)> {
        let mut nodes = Vec::with_capacity(MIN_PANELS + knots.len());
        for w in knots.windows(2) {
            let (u0, p0) = w[0];
            let (u1, p1) = w[1];
            let width = u1 - u0;
            if width <= 0.0 {
                continue; // jump knot, zero Lebesgue weight
            }
            let panels = (width * MIN_PANELS as f64).ceil().max(1.0) as usize;
            let h = width / panels as f64;
            for j in 0..panels {
                let umid = u0 + (j as f64 + 0.5) * h;
                let psi = p0 + (p1 - p0) * (umid - u0) / width;
                nodes.push((h, psi));
            }
        }
        nodes
    }

    pub(crate) fn quadrature_nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    /// ψ(u), right-continuous and nondecreasing.
    fn eval(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        // First knot strictly past u; the one before is the latest knot with
        // knot.u <= u, which at a duplicated u picks the post-jump value.
        let i = self.knots.partition_point(|k| k.0 <= u);
        if i == self.knots.len() {
            return self.knots[i - 1].1;
        }
        debug_assert!(i > 0, "knots start at u=0");
        let (u0, p0) = self.knots[i - 1];
        if u == u0 {
            return p0;
        }
        let (u1, p1) = self.knots[i];
        p0 + (p1 - p0) * (u - u0) / (u1 - u0)
    }

    /// Lebesgue measure of { u : ψ(u) <= x }.
    fn cdf(&self, x: f64) -> f64 {
        let mut total = 0.0;
        for w in self.knots.windows(2) {
            let (u0, p0) = w[0];
            let (u1, p1) = w[1];
            if u1 <= u0 {
                continue;
            }
            if p1 <= x {
                total += u1 - u0;
            } else if p0 <= x {
                // ψ crosses x inside this segment (p0 <= x < p1).
                total += (x - p0) / (p1 - p0) * (u1 - u0);
                break;
            } else {
                break;
            }
        }
        total
    }

    /// Atoms: maximal flat stretches of ψ with positive u-length.
    fn atoms(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for w in self.knots.windows(2) {
            let (u0, p0) = w[0];
            let (u1, p1) = w[1];
            if u1 > u0 && p0 == p1 {
                match out.last_mut() {
                    Some(last) if last.0 == p0 => last.1 += u1 - u0,
                    _ => out.push((p0, u1 - u0)),
                }
            }
        }
        out
    }
}

impl BoundaryMeasure {
    pub fn point_mass(p: f64) -> Result<BoundaryMeasure> {
        check_unit(p)?;
        Ok(BoundaryMeasure::PointMass(p))
    }

    pub fn two_point(p: f64) -> Result<BoundaryMeasure> {
        check_unit(p)?;
        Ok(BoundaryMeasure::TwoPoint(p))
    }

    pub fn uniform() -> BoundaryMeasure {
        BoundaryMeasure::Uniform
    }

    pub fn from_table_knots(knots: Vec<(f64, f64)>) -> Result<BoundaryMeasure> {
        Ok(BoundaryMeasure::InverseCdfTable(CdfTable::new(knots)?))
    }

    /// Parse the table file format: one "u psi" pair per line, `u` covering
    /// 0 and 1 on the first and last lines.
    pub fn from_table_str(text: &str) -> Result<BoundaryMeasure> {
        let mut knots = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<f64> {
                tok.ok_or_else(|| Error::Parse(format!("table line {}: expected two numbers", lineno + 1)))?
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("table line {}: {e}", lineno + 1)))
            };
            let u = parse(it.next())?;
            let psi = parse(it.next())?;
            if it.next().is_some() {
                return Err(Error::Parse(format!("table line {}: trailing tokens", lineno + 1)));
            }
            knots.push((u, psi));
        }
        BoundaryMeasure::from_table_knots(knots)
    }

    pub fn from_table_file<P: AsRef<Path>>(path: P) -> Result<BoundaryMeasure> {
        BoundaryMeasure::from_table_str(&std::fs::read_to_string(path)?)
    }

    /// One draw from ν. Always consumes exactly one uniform from the stream
    /// and maps it through the right-continuous inverse CDF.
    pub fn sample_theta(&self, rng: &mut RandomStream) -> f64 {
        self.inverse_cdf(rng.random::<f64>())
    }

    /// ψ(u): right-continuous inverse of the distribution function.
    pub fn inverse_cdf(&self, u: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&u), "inverse_cdf: u={u}");
        match self {
            BoundaryMeasure::PointMass(p) => *p,
            BoundaryMeasure::TwoPoint(p) => {
                if u < 1.0 - p {
                    0.0
                } else {
                    1.0
                }
            }
            BoundaryMeasure::Uniform => u.clamp(0.0, 1.0),
            BoundaryMeasure::InverseCdfTable(t) => t.eval(u),
        }
    }

    /// M_d = ∫ x^d dν(x).
    pub fn moment(&self, d: u32) -> f64 {
        match self {
            BoundaryMeasure::PointMass(p) => p.powi(d as i32),
            BoundaryMeasure::TwoPoint(p) => {
                if d == 0 {
                    1.0
                } else {
                    *p
                }
            }
            BoundaryMeasure::Uniform => 1.0 / (d as f64 + 1.0),
            BoundaryMeasure::InverseCdfTable(_) => self.beta_integral(d, 0),
        }
    }

    /// ∫ θ^a (1-θ)^b dν(θ), with the 0^0 = 1 convention.
    ///
    /// Closed forms for the point-mass, two-point and uniform families,
    /// midpoint quadrature over the ψ table otherwise. May underflow to 0
    /// for very large a+b; degree-law construction uses an internal scaled
    /// path instead of this f64 surface.
    pub fn beta_integral(&self, a: u32, b: u32) -> f64 {
        if a == 0 && b == 0 {
            return 1.0;
        }
        match self {
            BoundaryMeasure::PointMass(p) => p.powi(a as i32) * (1.0 - p).powi(b as i32),
            BoundaryMeasure::TwoPoint(p) => {
                let at_one = if b == 0 { *p } else { 0.0 };
                let at_zero = if a == 0 { 1.0 - *p } else { 0.0 };
                at_one + at_zero
            }
            // a! b! / (a+b+1)! = 1 / ((a+b+1) * C(a+b, a))
            BoundaryMeasure::Uniform => binom_scaled((a + b) as u64, a as u64)
                .mul_f64((a + b + 1) as f64)
                .recip()
                .to_f64(),
            BoundaryMeasure::InverseCdfTable(t) => {
                let mut acc = KahanSum::new();
                for &(w, psi) in t.quadrature_nodes() {
                    acc.add(w * psi.powi(a as i32) * (1.0 - psi).powi(b as i32));
                }
                acc.value()
            }
        }
    }

    /// Right-continuous distribution function F(x) = ν[0, x].
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            BoundaryMeasure::PointMass(p) => {
                if x < *p {
                    0.0
                } else {
                    1.0
                }
            }
            BoundaryMeasure::TwoPoint(p) => {
                if x < 0.0 {
                    0.0
                } else if x < 1.0 {
                    1.0 - p
                } else {
                    1.0
                }
            }
            BoundaryMeasure::Uniform => x.clamp(0.0, 1.0),
            BoundaryMeasure::InverseCdfTable(t) => t.cdf(x),
        }
    }

    /// Atoms of ν as (location, mass) pairs, in increasing location order.
    pub fn atoms(&self) -> Vec<(f64, f64)> {
        match self {
            BoundaryMeasure::PointMass(p) => vec![(*p, 1.0)],
            BoundaryMeasure::TwoPoint(p) => {
                let mut v = Vec::new();
                if *p < 1.0 {
                    v.push((0.0, 1.0 - p));
                }
                if *p > 0.0 {
                    v.push((1.0, *p));
                }
                v
            }
            BoundaryMeasure::Uniform => Vec::new(),
            BoundaryMeasure::InverseCdfTable(t) => t.atoms(),
        }
    }
}

impl fmt::Display for BoundaryMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryMeasure::PointMass(p) => write!(f, "point:{p}"),
            BoundaryMeasure::TwoPoint(p) => write!(f, "twopoint:{p}"),
            BoundaryMeasure::Uniform => write!(f, "uniform"),
            BoundaryMeasure::InverseCdfTable(t) => write!(f, "table:{}knots", t.knots.len()),
        }
    }
}

fn check_unit(p: f64) -> Result<()> {
    if p.is_finite() && (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidMeasure(format!("parameter {p} outside [0,1]")))
    }
}
