//! Dimension-checked points, point sets and the basic metric quantities
//! (cross-class distance, diameters, enclosing radius).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

#[inline]
pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist_sq(a, b).sqrt()
}

fn check_finite(coords: &[f64]) -> Result<()> {
    match coords.iter().position(|c| !c.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}

/// A point of `R^d` with finite coordinates, `d >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension(0));
        }
        check_finite(&coords)?;
        Ok(Vector(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "vector dimension must be positive");
        Vector(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn dot(&self, other: &Vector) -> Result<f64> {
        ensure_dim(self.dim(), other.dim())?;
        Ok(dot(&self.0, &other.0))
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Vector::new(v)
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

impl AsRef<[f64]> for Vector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

pub(crate) fn ensure_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// A finite list of equal-dimension points, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct PointSet {
    dim: usize,
    data: Vec<f64>,
}

impl PointSet {
    /// Builds a nonempty set; rejects ragged rows and non-finite coordinates.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptySet)?;
        let dim = first.as_ref().len();
        if dim == 0 {
            return Err(Error::ZeroDimension(0));
        }
        let mut data = Vec::with_capacity(dim * rows.len());
        for (row, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(Error::Ragged { row, expected: dim, found: r.len() });
            }
            check_finite(r).map_err(|_| Error::NonFinite(row))?;
            data.extend_from_slice(r);
        }
        Ok(PointSet { dim, data })
    }

    pub fn from_vectors(points: &[Vector]) -> Result<Self> {
        Self::from_rows(points)
    }

    /// Wraps row-major data of `data.len() / dim` points.
    pub fn from_flat(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension(0));
        }
        if data.is_empty() {
            return Err(Error::EmptySet);
        }
        if !data.len().is_multiple_of(dim) {
            return Err(Error::Ragged { row: data.len() / dim, expected: dim, found: data.len() % dim });
        }
        check_finite(&data).map_err(|i| match i {
            Error::NonFinite(pos) => Error::NonFinite(pos / dim),
            other => other,
        })?;
        Ok(PointSet { dim, data })
    }

    /// The explicitly empty set of dimension `dim`.
    pub fn empty(dim: usize) -> Self {
        assert!(dim >= 1, "point set dimension must be positive");
        PointSet { dim, data: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn to_vectors(&self) -> Vec<Vector> {
        self.iter().map(|p| Vector(p.to_vec())).collect()
    }

    pub fn push(&mut self, p: &[f64]) -> Result<()> {
        ensure_dim(self.dim, p.len())?;
        check_finite(p)?;
        self.data.extend_from_slice(p);
        Ok(())
    }

    /// Subset by indices, in the given order.
    pub fn select(&self, indices: &[usize]) -> PointSet {
        let mut data = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            data.extend_from_slice(self.point(i));
        }
        PointSet { dim: self.dim, data }
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        ensure_dim(self.dim, other.dim)?;
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(PointSet { dim: self.dim, data })
    }

    /// Applies `f` to every point, producing a set of dimension `out_dim`.
    pub fn map_points<F: FnMut(&[f64], &mut [f64])>(&self, out_dim: usize, mut f: F) -> PointSet {
        let mut data = vec![0.0; self.len() * out_dim];
        for (p, out) in self.iter().zip(data.chunks_exact_mut(out_dim)) {
            f(p, out);
        }
        PointSet { dim: out_dim, data }
    }

    pub fn translate(&self, v: &[f64]) -> Result<PointSet> {
        ensure_dim(self.dim, v.len())?;
        Ok(self.map_points(self.dim, |p, out| {
            for ((o, x), s) in out.iter_mut().zip(p).zip(v) {
                *o = x + s;
            }
        }))
    }

    pub fn scale(&self, s: f64) -> PointSet {
        PointSet { dim: self.dim, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn max_norm(&self) -> f64 {
        self.iter().map(norm).fold(0.0, f64::max)
    }

    /// Largest pairwise distance within the set (0 for singletons).
    pub fn diameter(&self) -> f64 {
        let n = self.len();
        let mut best = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                best = best.max(dist_sq(self.point(i), self.point(j)));
            }
        }
        best.sqrt()
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record((0..self.dim).map(|i| format!("x{i}")))?;
        for p in self.iter() {
            w.write_record(p.iter().map(|x| format!("{x:?}")))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the `x0,...,x{d-1}` CSV layout; ragged rows are rejected.
    pub fn read_csv<R: Read>(reader: R) -> Result<PointSet> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(reader);
        let dim = r.headers()?.len();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (row, rec) in r.records().enumerate() {
            let rec = rec?;
            if rec.len() != dim {
                return Err(Error::Ragged { row, expected: dim, found: rec.len() });
            }
            let parsed = rec
                .iter()
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Domain(format!("row {row}: {e}")))?;
            rows.push(parsed);
        }
        PointSet::from_rows(&rows)
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<PointSet> {
        Self::read_csv(std::fs::File::open(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<PointSet> {
        Ok(serde_json::from_str(s)?)
    }
}

impl TryFrom<Vec<Vec<f64>>> for PointSet {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        PointSet::from_rows(&rows)
    }
}

impl From<PointSet> for Vec<Vec<f64>> {
    fn from(s: PointSet) -> Self {
        s.iter().map(<[f64]>::to_vec).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationStats {
    pub delta: f64,
    pub diameter_minus: f64,
    pub diameter_plus: f64,
    pub radius_bound: f64,
}

fn ensure_pair(a: &PointSet, b: &PointSet) -> Result<()> {
    ensure_dim(a.dim(), b.dim())?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(())
}

/// Smallest Euclidean distance between a point of `a` and a point of `b`.
pub fn min_cross_distance(a: &PointSet, b: &PointSet) -> Result<f64> {
    ensure_pair(a, b)?;
    let mut best = f64::INFINITY;
    for p in a.iter() {
        for q in b.iter() {
            best = best.min(dist_sq(p, q));
        }
    }
    Ok(best.sqrt())
}

/// Distance from `p` to the nearest point of `s` (`+inf` for an empty set).
pub fn dist_to_set(p: &[f64], s: &PointSet) -> f64 {
    dist_sq_to_set(p, s).sqrt()
}

pub fn dist_sq_to_set(p: &[f64], s: &PointSet) -> f64 {
    s.iter().map(|q| dist_sq(p, q)).fold(f64::INFINITY, f64::min)
}

pub fn set_stats(a: &PointSet, b: &PointSet) -> Result<SeparationStats> {
    let delta = min_cross_distance(a, b)?;
    Ok(SeparationStats {
        delta,
        diameter_minus: a.diameter(),
        diameter_plus: b.diameter(),
        radius_bound: a.max_norm().max(b.max_norm()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ps(rows: &[&[f64]]) -> PointSet {
        PointSet::from_rows(rows).unwrap()
    }

    #[test]
    fn cross_distance_examples() {
        assert_eq!(min_cross_distance(&ps(&[&[0.0, 0.0]]), &ps(&[&[3.0, 4.0]])).unwrap(), 5.0);
        assert_eq!(min_cross_distance(&ps(&[&[1.0, 0.0]]), &ps(&[&[1.0, 0.0]])).unwrap(), 0.0);
        let a = ps(&[&[0.0, 0.0], &[0.0, 1.0]]);
        let b = ps(&[&[2.0, 0.0], &[5.0, 5.0]]);
        // brute force over the four pairs: 2, sqrt(50), sqrt(5), sqrt(41)
        assert_eq!(min_cross_distance(&a, &b).unwrap(), 2.0);
    }

    #[test]
    fn cross_distance_errors() {
        let a = ps(&[&[0.0, 0.0]]);
        let b = ps(&[&[0.0, 0.0, 0.0]]);
        assert!(matches!(min_cross_distance(&a, &b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(min_cross_distance(&a, &PointSet::empty(2)), Err(Error::EmptySet)));
    }

    #[test]
    fn stats_examples() {
        let s = set_stats(&ps(&[&[0.0, 0.0]]), &ps(&[&[1.0, 0.0]])).unwrap();
        assert_eq!((s.delta, s.diameter_minus, s.diameter_plus, s.radius_bound), (1.0, 0.0, 0.0, 1.0));

        let s = set_stats(&ps(&[&[-1.0, 0.0], &[1.0, 0.0]]), &ps(&[&[0.0, 3.0]])).unwrap();
        assert_eq!(s.diameter_minus, 2.0);
        assert!((s.delta - 10f64.sqrt()).abs() < 1e-15);

        let s = set_stats(&ps(&[&[0.0, 0.0]]), &ps(&[&[0.0, 0.0]])).unwrap();
        assert_eq!((s.delta, s.radius_bound), (0.0, 0.0));
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(PointSet::from_rows::<Vec<f64>>(&[]), Err(Error::EmptySet)));
        assert!(matches!(
            PointSet::from_rows(&[vec![0.0, 1.0], vec![2.0]]),
            Err(Error::Ragged { row: 1, .. })
        ));
        assert!(matches!(PointSet::from_rows(&[vec![f64::NAN]]), Err(Error::NonFinite(0))));
        assert!(Vector::new(vec![]).is_err());
        assert!(Vector::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn csv_and_json_readers() {
        let s = ps(&[&[0.5, -1.0], &[2.0, 3.25]]);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x0,x1\n"));
        assert_eq!(PointSet::read_csv(buf.as_slice()).unwrap(), s);
        assert_eq!(PointSet::from_json(&s.to_json().unwrap()).unwrap(), s);

        let ragged = "x0,x1\n1,2\n3\n";
        assert!(matches!(PointSet::read_csv(ragged.as_bytes()), Err(Error::Ragged { .. })));
        assert!(PointSet::from_json("[[1.0,2.0],[3.0]]").is_err());
    }

    fn rotation(angle: f64, offset: (f64, f64)) -> impl Fn(&[f64], &mut [f64]) {
        move |p, out| {
            let (c, s) = (angle.cos(), angle.sin());
            out[0] = c * p[0] - s * p[1] + offset.0;
            out[1] = s * p[0] + c * p[1] + offset.1;
        }
    }

    fn planar_set() -> impl Strategy<Value = Vec<Vec<f64>>> {
        prop::collection::vec(prop::collection::vec(-5.0..5.0f64, 2), 1..12)
    }

    proptest! {
        #[test]
        fn cross_distance_is_symmetric(a in planar_set(), b in planar_set()) {
            let a = PointSet::from_rows(&a).unwrap();
            let b = PointSet::from_rows(&b).unwrap();
            prop_assert_eq!(min_cross_distance(&a, &b).unwrap(), min_cross_distance(&b, &a).unwrap());
        }

        #[test]
        fn cross_distance_is_rigid_motion_invariant(
            a in planar_set(), b in planar_set(), angle in 0.0..6.3f64, ox in -3.0..3.0f64, oy in -3.0..3.0f64
        ) {
            let a = PointSet::from_rows(&a).unwrap();
            let b = PointSet::from_rows(&b).unwrap();
            let before = min_cross_distance(&a, &b).unwrap();
            let ra = a.map_points(2, rotation(angle, (ox, oy)));
            let rb = b.map_points(2, rotation(angle, (ox, oy)));
            let after = min_cross_distance(&ra, &rb).unwrap();
            prop_assert!((before - after).abs() <= 1e-10);
        }

        #[test]
        fn radius_bound_dominates_every_norm(a in planar_set(), b in planar_set()) {
            let a = PointSet::from_rows(&a).unwrap();
            let b = PointSet::from_rows(&b).unwrap();
            let stats = set_stats(&a, &b).unwrap();
            for p in a.union(&b).unwrap().iter() {
                prop_assert!(norm(p) <= stats.radius_bound);
            }
        }
    }
}
