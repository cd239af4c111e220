//! Minimum-norm points of polytopes given by their vertices (Wolfe's
//! algorithm), including the Minkowski difference `conv(b) − conv(a)`
//! whose vertices are generated on demand.

use crate::error::Result;
use crate::geometry::{dot, ensure_dim, norm_sq, PointSet};
use nalgebra::{DMatrix, DVector};

pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;
pub const DEFAULT_GAP_TOLERANCE: f64 = 1e-9;

/// A vertex set accessed through a linear minimization oracle.
trait Vertices {
    type Id: Copy + PartialEq;
    fn dim(&self) -> usize;
    fn first(&self) -> Self::Id;
    /// Vertex minimizing `<x, q>`, with that value.
    fn argmin(&self, x: &[f64]) -> (Self::Id, f64);
    fn vertex(&self, id: Self::Id) -> Vec<f64>;
}

struct Explicit<'a>(&'a PointSet);

impl Vertices for Explicit<'_> {
    type Id = usize;

    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn first(&self) -> usize {
        0
    }

    fn argmin(&self, x: &[f64]) -> (usize, f64) {
        self.0
            .iter()
            .enumerate()
            .map(|(i, p)| (i, dot(x, p)))
            .fold((0, f64::INFINITY), |acc, v| if v.1 < acc.1 { v } else { acc })
    }

    fn vertex(&self, id: usize) -> Vec<f64> {
        self.0.point(id).to_vec()
    }
}

/// Vertices `b_j − a_i`, identified by `(i, j)`.
struct Difference<'a> {
    a: &'a PointSet,
    b: &'a PointSet,
}

impl Vertices for Difference<'_> {
    type Id = (usize, usize);

    fn dim(&self) -> usize {
        self.a.dim()
    }

    fn first(&self) -> (usize, usize) {
        (0, 0)
    }

    fn argmin(&self, x: &[f64]) -> ((usize, usize), f64) {
        let (j, lo) = Explicit(self.b).argmin(x);
        let (i, hi) = self
            .a
            .iter()
            .enumerate()
            .map(|(i, p)| (i, dot(x, p)))
            .fold((0, f64::NEG_INFINITY), |acc, v| if v.1 > acc.1 { v } else { acc });
        ((i, j), lo - hi)
    }

    fn vertex(&self, (i, j): (usize, usize)) -> Vec<f64> {
        self.b.point(j).iter().zip(self.a.point(i)).map(|(y, x)| y - x).collect()
    }
}

#[derive(Debug, Clone)]
pub struct MinNormPoint<Id> {
    pub point: Vec<f64>,
    /// Active vertices and their convex weights.
    pub support: Vec<(Id, f64)>,
    /// `|x|² − min_q <x, q>` at termination.
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl<Id> MinNormPoint<Id> {
    pub fn norm(&self) -> f64 {
        norm_sq(&self.point).sqrt()
    }
}

/// Weights of the affine minimizer of the points, `None` if singular.
fn affine_minimizer(pts: &[Vec<f64>]) -> Option<Vec<f64>> {
    let k = pts.len();
    let mut m = DMatrix::<f64>::zeros(k + 1, k + 1);
    for i in 0..k {
        for j in 0..=i {
            let g = dot(&pts[i], &pts[j]);
            m[(i, j)] = g;
            m[(j, i)] = g;
        }
        m[(i, k)] = 1.0;
        m[(k, i)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = m.lu().solve(&rhs)?;
    let w: Vec<f64> = sol.iter().take(k).copied().collect();
    w.iter().all(|v| v.is_finite()).then_some(w)
}

fn combine(pts: &[Vec<f64>], w: &[f64], dim: usize) -> Vec<f64> {
    let mut x = vec![0.0; dim];
    for (p, &l) in pts.iter().zip(w) {
        for (xi, pi) in x.iter_mut().zip(p) {
            *xi += l * pi;
        }
    }
    x
}

fn wolfe<V: Vertices>(src: &V, max_iterations: usize, gap_tol: f64, zero_tol: f64) -> MinNormPoint<V::Id> {
    let dim = src.dim();
    let id0 = src.first();
    let mut ids = vec![id0];
    let mut pts = vec![src.vertex(id0)];
    let mut lam: Vec<f64> = vec![1.0];
    let mut x = pts[0].clone();
    let mut scale = norm_sq(&x);
    let mut gap = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_iterations {
        iterations += 1;
        let xx = norm_sq(&x);
        let (qid, xq) = src.argmin(&x);
        gap = xx - xq;
        if xx.sqrt() <= zero_tol || gap <= gap_tol * scale.max(1.0) {
            converged = true;
            break;
        }
        if ids.contains(&qid) {
            break;
        }
        let q = src.vertex(qid);
        scale = scale.max(norm_sq(&q));
        ids.push(qid);
        pts.push(q);
        lam.push(0.0);

        loop {
            let Some(alpha) = affine_minimizer(&pts) else {
                // Affinely dependent corral: drop the lightest old vertex.
                let drop = (0..pts.len() - 1).min_by(|&i, &j| lam[i].total_cmp(&lam[j])).unwrap_or(0);
                ids.remove(drop);
                pts.remove(drop);
                lam.remove(drop);
                let s: f64 = lam.iter().sum();
                if s > 0.0 {
                    lam.iter_mut().for_each(|l| *l /= s);
                } else {
                    lam.iter_mut().for_each(|l| *l = 1.0 / pts.len() as f64);
                }
                continue;
            };
            if alpha.iter().all(|&a| a > 0.0) {
                lam = alpha;
                x = combine(&pts, &lam, dim);
                break;
            }
            let (mut theta, mut hit) = (f64::INFINITY, 0);
            for (i, (&a, &l)) in alpha.iter().zip(&lam).enumerate() {
                if a <= 0.0 {
                    let t = l / (l - a);
                    if t < theta {
                        theta = t;
                        hit = i;
                    }
                }
            }
            for (l, a) in lam.iter_mut().zip(&alpha) {
                *l = theta * a + (1.0 - theta) * *l;
            }
            lam[hit] = 0.0;
            let mut k = 0;
            while k < lam.len() {
                if lam[k] > 0.0 {
                    k += 1;
                } else {
                    ids.remove(k);
                    pts.remove(k);
                    lam.remove(k);
                }
            }
            let s: f64 = lam.iter().sum();
            lam.iter_mut().for_each(|l| *l /= s);
            x = combine(&pts, &lam, dim);
            if pts.len() == 1 {
                break;
            }
        }
    }
    MinNormPoint { point: x, support: ids.into_iter().zip(lam).collect(), gap, iterations, converged }
}

/// Minimum-norm point of `conv(s)`.
pub fn min_norm_point(s: &PointSet, max_iterations: usize, gap_tol: f64, zero_tol: f64) -> MinNormPoint<usize> {
    wolfe(&Explicit(s), max_iterations, gap_tol, zero_tol)
}

/// Minimum-norm point of `conv(b) − conv(a)`; the support pairs `(i, j)`
/// stand for the vertices `b_j − a_i`.
pub fn min_norm_difference(
    a: &PointSet,
    b: &PointSet,
    max_iterations: usize,
    gap_tol: f64,
    zero_tol: f64,
) -> Result<MinNormPoint<(usize, usize)>> {
    ensure_dim(a.dim(), b.dim())?;
    if a.is_empty() || b.is_empty() {
        return Err(crate::error::Error::EmptySet);
    }
    Ok(wolfe(&Difference { a, b }, max_iterations, gap_tol, zero_tol))
}
