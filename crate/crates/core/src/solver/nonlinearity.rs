use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use libm::fabs;

use super::SolverError;

/// The reaction term `f`.
#[derive(Debug, Clone, PartialEq)]
pub enum Nonlinearity {
    /// `f(s) = s (1 - s) (s - a)` with `0 < a < 1`.
    Nagumo { a: f64 },
    /// Coefficients in ascending degree.
    Polynomial(Vec<f64>),
}

impl Nonlinearity {
    pub fn nagumo(a: f64) -> Result<Self, SolverError> {
        if !(a > 0.0 && a < 1.0) {
            return Err(SolverError::BadParameter(
                "nagumo parameter must lie in (0, 1)",
            ));
        }
        Ok(Nonlinearity::Nagumo { a })
    }

    pub fn polynomial(mut coefficients: Vec<f64>) -> Result<Self, SolverError> {
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(SolverError::BadParameter(
                "polynomial coefficients must be finite",
            ));
        }
        while coefficients.last() == Some(&0.0) {
            coefficients.pop();
        }
        if coefficients.len() < 2 {
            return Err(SolverError::BadParameter(
                "polynomial degree must be at least 1",
            ));
        }
        Ok(Nonlinearity::Polynomial(coefficients))
    }

    /// Ascending coefficients; Nagumo expands to `-a s + (1 + a) s^2 - s^3`.
    pub fn coefficients(&self) -> Vec<f64> {
        match self {
            Nonlinearity::Nagumo { a } => vec![0.0, -a, 1.0 + a, -1.0],
            Nonlinearity::Polynomial(c) => c.clone(),
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Nonlinearity::Nagumo { a } => s * (1.0 - s) * (s - a),
            Nonlinearity::Polynomial(c) => horner(c, s),
        }
    }

    pub fn derivative(&self, s: f64) -> f64 {
        match self {
            Nonlinearity::Nagumo { a } => -3.0 * s * s + 2.0 * (1.0 + a) * s - a,
            Nonlinearity::Polynomial(c) => horner(&differentiate(c), s),
        }
    }

    /// Largest `|f'|` over `[lo, hi]`, sampled at the endpoints and the
    /// critical points of `f'`.
    pub fn lipschitz_on(&self, lo: f64, hi: f64) -> f64 {
        let d1 = differentiate(&self.coefficients());
        let mut best = fabs(horner(&d1, lo)).max(fabs(horner(&d1, hi)));
        for c in polynomial_real_roots(&differentiate(&d1)) {
            if c > lo && c < hi {
                best = best.max(fabs(horner(&d1, c)));
            }
        }
        best
    }

    /// Real roots in increasing order, multiple roots listed once.
    pub fn real_roots(&self) -> Vec<f64> {
        match self {
            Nonlinearity::Nagumo { a } => vec![0.0, *a, 1.0],
            Nonlinearity::Polynomial(c) => polynomial_real_roots(c),
        }
    }
}

impl fmt::Display for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nonlinearity::Nagumo { a } => write!(f, "nagumo({a})"),
            Nonlinearity::Polynomial(c) => write!(f, "polynomial({c:?})"),
        }
    }
}

fn horner(c: &[f64], s: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &x| acc * s + x)
}

fn differentiate(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &x)| i as f64 * x)
        .collect()
}

/// Real roots by recursive isolation: the critical points of `p` split the
/// line into monotone pieces, each holding at most one root.
pub fn polynomial_real_roots(c: &[f64]) -> Vec<f64> {
    let mut c = c.to_vec();
    while c.last() == Some(&0.0) {
        c.pop();
    }
    match c.len() {
        0 | 1 => return Vec::new(),
        2 => return vec![-c[0] / c[1]],
        _ => {}
    }
    let lead = *c.last().unwrap();
    let bound = 1.0
        + c[..c.len() - 1]
            .iter()
            .map(|x| fabs(x / lead))
            .fold(0.0, f64::max);
    let scale = c.iter().map(|x| fabs(*x)).fold(0.0, f64::max);
    let crit = polynomial_real_roots(&differentiate(&c));
    let mut marks = vec![-bound];
    marks.extend(crit.iter().copied().filter(|x| x.abs() < bound));
    marks.push(bound);

    let mut roots = Vec::new();
    for &m in &marks[1..marks.len() - 1] {
        if fabs(horner(&c, m)) <= 1e-12 * scale {
            roots.push(m);
        }
    }
    for w in marks.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (horner(&c, lo), horner(&c, hi));
        if flo == 0.0 && !roots.iter().any(|r| fabs(r - lo) < 1e-12) {
            roots.push(lo);
        }
        if flo * fhi >= 0.0 {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if (horner(&c, mid) < 0.0) == (flo < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let r = 0.5 * (lo + hi);
        if !roots.iter().any(|x| fabs(x - r) < 1e-10) {
            roots.push(r);
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}
