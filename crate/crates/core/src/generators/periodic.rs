use alloc::sync::Arc;
use alloc::vec::Vec;

use super::GeneratorError;
use crate::coloring::{extract_matrix, Coloring, ColoringMatrix};
use crate::lattice::{GridKind, Patch, PeriodVectors};

/// The finest `(v1, v2)`-periodic coloring: one color per point of the
/// half-open fundamental parallelogram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicLift {
    pub periods: PeriodVectors,
    /// Domain point carrying each color, sorted by `(y, x)`.
    pub domain: Vec<(i64, i64)>,
    pub coloring: Coloring,
    pub matrix: ColoringMatrix,
}

/// Hermite basis `(w, 0)`, `(shear, h)` of the period lattice, `0 <= shear < w`.
#[derive(Debug, Clone, Copy)]
struct Hermite {
    w: i64,
    shear: i64,
    h: i64,
}

impl Hermite {
    fn new(p: &PeriodVectors) -> Self {
        let [a, b] = [p.v1, p.v2];
        let (g, s, t) = ext_gcd(a[1], b[1]);
        let det = p.determinant().abs();
        if g == 0 {
            unreachable!("independent vectors have a nonzero y component");
        }
        let w = det / g;
        let shear = (s * a[0] + t * b[0]).rem_euclid(w);
        Hermite { w, shear, h: g }
    }

    /// Canonical representative of `(x, y)` modulo the lattice, inside
    /// `[0, w) x [0, h)`.
    fn reduce(&self, x: i64, y: i64) -> (i64, i64) {
        let q = y.div_euclid(self.h);
        let yr = y - q * self.h;
        let xr = (x - q * self.shear).rem_euclid(self.w);
        (xr, yr)
    }
}

/// Returns `(g, s, t)` with `g = s a + t b = gcd(a, b) >= 0`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1, mut s0, mut s1, mut t0, mut t1) = (a, b, 1, 0, 0, 1);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    ext_gcd(a, b).0
}

/// Smallest torus `(W, H)` such that both period vectors reduce to zero.
pub fn period_torus_extents(periods: &PeriodVectors) -> (usize, usize) {
    let hm = Hermite::new(periods);
    let g = gcd(hm.w, hm.shear);
    (hm.w as usize, (hm.h * (hm.w / g)) as usize)
}

pub fn periodic_lift(
    kind: GridKind,
    v1: [i64; 2],
    v2: [i64; 2],
) -> Result<PeriodicLift, GeneratorError> {
    let periods = PeriodVectors::for_kind(v1, v2, kind)?;
    let hm = Hermite::new(&periods);
    let det = periods.determinant();
    let sign = det.signum();

    let xs = [0, v1[0], v2[0], v1[0] + v2[0]];
    let ys = [0, v1[1], v2[1], v1[1] + v2[1]];
    let (x_lo, x_hi) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
    let (y_lo, y_hi) = (*ys.iter().min().unwrap(), *ys.iter().max().unwrap());
    let mut domain = Vec::with_capacity(periods.index() as usize);
    for y in y_lo..=y_hi {
        for x in x_lo..=x_hi {
            // p = s v1 + t v2 with s = det(p, v2) / det, t = det(v1, p) / det
            let s_num = (x * v2[1] - y * v2[0]) * sign;
            let t_num = (v1[0] * y - v1[1] * x) * sign;
            if (0..det.abs()).contains(&s_num) && (0..det.abs()).contains(&t_num) {
                domain.push((x, y));
            }
        }
    }
    debug_assert_eq!(domain.len() as u64, periods.index());

    let (w, h) = period_torus_extents(&periods);
    let cell_color = {
        let mut by_cell: Vec<usize> = alloc::vec![usize::MAX; (hm.w * hm.h) as usize];
        for (c, &(x, y)) in domain.iter().enumerate() {
            let (xr, yr) = hm.reduce(x, y);
            by_cell[(yr * hm.w + xr) as usize] = c;
        }
        by_cell
    };
    let patch = Arc::new(Patch::torus(kind, w, h)?);
    let colors = (0..patch.len())
        .map(|v| {
            let (x, y) = patch.coord(v);
            let (xr, yr) = hm.reduce(x, y);
            cell_color[(yr * hm.w + xr) as usize]
        })
        .collect();
    let coloring = Coloring::new(patch, colors, domain.len())?;
    let matrix = extract_matrix(&coloring)?;
    Ok(PeriodicLift {
        periods,
        domain,
        coloring,
        matrix,
    })
}
