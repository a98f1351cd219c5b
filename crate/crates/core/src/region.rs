//! Secrecy DoF region of the two-user confidential broadcast channel with
//! delayed CSIT on both receivers:
//!
//! ```text
//! { (d1, d2) >= 0 : 3 d1 + d2 <= 2,  d1 + 3 d2 <= 2 }
//! ```
//!
//! The region is stored as half-spaces; the vertex list is derived from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An SDoF pair `(d1, d2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionPoint {
    pub d1: f64,
    pub d2: f64,
}

impl RegionPoint {
    /// Finite, non-negative coordinates only.
    pub fn new(d1: f64, d2: f64) -> Result<Self> {
        if d1.is_finite() && d2.is_finite() && d1 >= 0.0 && d2 >= 0.0 {
            Ok(Self { d1, d2 })
        } else {
            Err(Error::InvalidRegionPoint { d1, d2 })
        }
    }

    pub fn swapped(self) -> Self {
        Self {
            d1: self.d2,
            d2: self.d1,
        }
    }
}

/// Half-space `a1 d1 + a2 d2 <= b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpace {
    pub a: [f64; 2],
    pub b: f64,
}

impl HalfSpace {
    fn slack(&self, d1: f64, d2: f64) -> f64 {
        self.b - (self.a[0] * d1 + self.a[1] * d2)
    }
}

pub const HALF_SPACES: [HalfSpace; 4] = [
    HalfSpace { a: [3.0, 1.0], b: 2.0 },
    HalfSpace { a: [1.0, 3.0], b: 2.0 },
    HalfSpace { a: [-1.0, 0.0], b: 0.0 },
    HalfSpace { a: [0.0, -1.0], b: 0.0 },
];

/// Membership with every constraint relaxed by `tol`.
///
/// Accepts any finite coordinates, including slightly negative ones, so that
/// noisy estimates can be tested directly.
pub fn contains(d1: f64, d2: f64, tol: f64) -> bool {
    d1.is_finite()
        && d2.is_finite()
        && HALF_SPACES.iter().all(|h| h.slack(d1, d2) >= -tol)
}

pub fn contains_point(p: RegionPoint, tol: f64) -> bool {
    contains(p.d1, p.d2, tol)
}

fn intersect(p: &HalfSpace, q: &HalfSpace) -> Option<(f64, f64)> {
    let det = p.a[0] * q.a[1] - p.a[1] * q.a[0];
    if det == 0.0 {
        return None;
    }
    let d1 = (p.b * q.a[1] - p.a[1] * q.b) / det;
    let d2 = (p.a[0] * q.b - p.b * q.a[0]) / det;
    // normalise -0.0
    Some((d1 + 0.0, d2 + 0.0))
}

/// Vertices in counter-clockwise order starting from the origin:
/// `(0, 0), (2/3, 0), (1/2, 1/2), (0, 2/3)`.
pub fn vertices() -> Vec<RegionPoint> {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for (i, p) in HALF_SPACES.iter().enumerate() {
        for q in &HALF_SPACES[i + 1..] {
            if let Some((d1, d2)) = intersect(p, q) {
                if contains(d1, d2, 1e-12)
                    && !pts
                        .iter()
                        .any(|&(x, y)| (x - d1).abs() < 1e-12 && (y - d2).abs() < 1e-12)
                {
                    pts.push((d1, d2));
                }
            }
        }
    }
    let n = pts.len() as f64;
    let cx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let angle = |&(x, y): &(f64, f64)| {
        let a = (y - cy).atan2(x - cx);
        if a < 0.0 {
            a + std::f64::consts::TAU
        } else {
            a
        }
    };
    pts.sort_by(|p, q| angle(p).total_cmp(&angle(q)));
    let start = pts
        .iter()
        .position(|&(x, y)| x == 0.0 && y == 0.0)
        .expect("origin is a vertex");
    pts.rotate_left(start);
    pts.into_iter().map(|(d1, d2)| RegionPoint { d1, d2 }).collect()
}

/// `n >= 2` points evenly spaced by arc length along the closed boundary,
/// counter-clockwise from the origin and back to it.
pub fn boundary(n: usize) -> Result<Vec<RegionPoint>> {
    if n < 2 {
        return Err(Error::Config("boundary needs at least 2 points".into()));
    }
    let vs = vertices();
    let edges: Vec<(RegionPoint, RegionPoint, f64)> = (0..vs.len())
        .map(|i| {
            let (a, b) = (vs[i], vs[(i + 1) % vs.len()]);
            (a, b, (b.d1 - a.d1).hypot(b.d2 - a.d2))
        })
        .collect();
    let perimeter: f64 = edges.iter().map(|e| e.2).sum();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut s = perimeter * k as f64 / (n - 1) as f64;
        let mut point = vs[0];
        for &(a, b, len) in &edges {
            if s <= len {
                let t = if len > 0.0 { s / len } else { 0.0 };
                point = RegionPoint {
                    d1: (a.d1 + t * (b.d1 - a.d1)).max(0.0),
                    d2: (a.d2 + t * (b.d2 - a.d2)).max(0.0),
                };
                break;
            }
            s -= len;
        }
        out.push(point);
    }
    Ok(out)
}

/// Barycentric weights of `target` over `points` (2 or 3 of them), or `None`
/// when the system is degenerate or the target lies outside their hull.
fn barycentric(target: RegionPoint, points: &[RegionPoint]) -> Option<Vec<f64>> {
    const TOL: f64 = 1e-9;
    match points {
        [a, b] => {
            let (ex, ey) = (b.d1 - a.d1, b.d2 - a.d2);
            let len2 = ex * ex + ey * ey;
            let (px, py) = (target.d1 - a.d1, target.d2 - a.d2);
            let t = (px * ex + py * ey) / len2;
            let off_line = (px - t * ex).hypot(py - t * ey);
            (len2 > 0.0 && off_line <= TOL && (-TOL..=1.0 + TOL).contains(&t))
                .then(|| vec![1.0 - t, t])
        }
        [a, b, c] => {
            let det = (b.d1 - a.d1) * (c.d2 - a.d2) - (c.d1 - a.d1) * (b.d2 - a.d2);
            if det.abs() < 1e-15 {
                return None;
            }
            let (px, py) = (target.d1 - a.d1, target.d2 - a.d2);
            let wb = (px * (c.d2 - a.d2) - (c.d1 - a.d1) * py) / det;
            let wc = ((b.d1 - a.d1) * py - px * (b.d2 - a.d2)) / det;
            let w = vec![1.0 - wb - wc, wb, wc];
            w.iter().all(|&x| x >= -TOL).then_some(w)
        }
        _ => None,
    }
}

/// Convex weights over [`vertices`] that reproduce `target`.
///
/// Prefers the fewest non-zero weights (a vertex, then an edge or chord,
/// then a triangle); among equally small supports the lexicographically
/// first vertex subset wins.
pub fn time_share(target: RegionPoint) -> Result<Vec<f64>> {
    if !contains_point(target, 1e-9) {
        return Err(Error::OutsideRegion {
            d1: target.d1,
            d2: target.d2,
        });
    }
    let vs = vertices();
    let n = vs.len();
    let mut weights = vec![0.0; n];

    for (i, v) in vs.iter().enumerate() {
        if (v.d1 - target.d1).abs() <= 1e-9 && (v.d2 - target.d2).abs() <= 1e-9 {
            weights[i] = 1.0;
            return Ok(weights);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if let Some(w) = barycentric(target, &[vs[i], vs[j]]) {
                weights[i] = w[0].max(0.0);
                weights[j] = w[1].max(0.0);
                return Ok(weights);
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if let Some(w) = barycentric(target, &[vs[i], vs[j], vs[k]]) {
                    weights[i] = w[0].max(0.0);
                    weights[j] = w[1].max(0.0);
                    weights[k] = w[2].max(0.0);
                    return Ok(weights);
                }
            }
        }
    }
    Err(Error::OutsideRegion {
        d1: target.d1,
        d2: target.d2,
    })
}

/// `sum_i weights[i] * vertices()[i]`.
pub fn combine(weights: &[f64]) -> RegionPoint {
    vertices()
        .iter()
        .zip(weights)
        .fold(RegionPoint { d1: 0.0, d2: 0.0 }, |acc, (v, w)| RegionPoint {
            d1: acc.d1 + w * v.d1,
            d2: acc.d2 + w * v.d2,
        })
}
