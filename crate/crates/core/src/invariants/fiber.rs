//! Preimages of regular values under maps one dimension down: oriented
//! polygonal loops, plus arcs ending on the boundary of the source.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use super::degree::{
    check_map, drop_coord, image_matrix, maps_into_facet, regular_value_candidates, target_sign,
    RegularValue,
};
use super::InvariantError;
use crate::cover::PLMap;
use crate::exec::par_map;
use crate::rational::{det, is_consistent, rank, sign, solve, Rational};
use crate::simplicial::{induced_sign, GeometricRealization, Simplex};

/// A point on a face of the source, given by its support and the positive
/// barycentric coordinates on it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurvePoint {
    pub face: Simplex,
    pub bary: Vec<Rational>,
}

impl CurvePoint {
    fn from_bary(simplex: &[u32], lambda: &[Rational]) -> Self {
        let mut face = Vec::new();
        let mut bary = Vec::new();
        for (&v, x) in simplex.iter().zip(lambda) {
            if !x.is_zero() {
                face.push(v);
                bary.push(x.clone());
            }
        }
        Self { face, bary }
    }

    pub fn coordinates(&self, r: &GeometricRealization) -> Vec<Rational> {
        r.point(&self.face, &self.bary)
    }
}

/// One connected piece of a preimage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveComponent {
    pub closed: bool,
    /// Vertices in curve order. A loop does not repeat its first point.
    pub points: Vec<CurvePoint>,
    /// Facet of the source containing each segment.
    pub cells: Vec<Simplex>,
    /// For arcs: local degrees of the boundary map at the start and end.
    pub end_signs: Option<(i8, i8)>,
}

impl CurveComponent {
    pub fn polygon(&self, r: &GeometricRealization) -> Vec<Vec<Rational>> {
        self.points.iter().map(|p| p.coordinates(r)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLCurve {
    pub components: Vec<CurveComponent>,
    pub regular_value: RegularValue,
}

impl PLCurve {
    pub fn loops(&self) -> impl Iterator<Item = &CurveComponent> {
        self.components.iter().filter(|c| c.closed)
    }

    pub fn arcs(&self) -> impl Iterator<Item = &CurveComponent> {
        self.components.iter().filter(|c| !c.closed)
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Preimage of the first regular value at or after position `start` in the
/// candidate sequence.
///
/// The source must have dimension one more than the target sphere. Each
/// segment is oriented so that its direction followed by a pulled-back
/// target frame gives the source orientation.
pub fn preimage_curve(f: &PLMap, start: usize) -> Result<PLCurve, InvariantError> {
    check_map(f, f.num_sets().saturating_sub(1))?;
    let mut attempts = 0;
    for y in regular_value_candidates(f.num_sets()).skip(start) {
        if let Some(c) = preimage_curve_at(f, &y) {
            return Ok(c);
        }
        attempts += 1;
    }
    Err(InvariantError::GenericityExhausted { attempts })
}

/// Preimage of `y`, or `None` if `y` is not regular for `f`.
pub fn preimage_curve_at(f: &PLMap, y: &RegularValue) -> Option<PLCurve> {
    let m = f.source();
    let items: Vec<(&Simplex, i8)> = m.oriented_facets().collect();
    let pieces = par_map(&items, |&(cell, s)| cell_segment(f, cell, s, y));
    let mut segments = Vec::new();
    for p in pieces {
        match p {
            Ok(Some(seg)) => segments.push(seg),
            Ok(None) => {}
            Err(Degenerate) => return None,
        }
    }
    let boundary: BTreeSet<&Simplex> = m.boundary_faces().iter().collect();
    chain(f, segments, &boundary, y).ok()
}

struct Degenerate;

struct Segment {
    cell: Simplex,
    sign: i8,
    start: CurvePoint,
    end: CurvePoint,
}

fn cell_segment(f: &PLMap, cell: &Simplex, s: i8, y: &RegularValue) -> Result<Option<Segment>, Degenerate> {
    let j = y.facet_index;
    if !maps_into_facet(f, cell, j) {
        return Ok(None);
    }
    let a = image_matrix(f, cell, j);
    let rhs = drop_coord(&y.point, j);
    let rows = a.len();
    if rank(&a) < rows {
        return if is_consistent(&a, &rhs) { Err(Degenerate) } else { Ok(None) };
    }
    // Kernel direction from signed maximal minors, negated so that the
    // direction followed by a positive target frame is positive in the
    // ascending orientation of the cell.
    let minors: Vec<Rational> = (0..cell.len())
        .map(|k| {
            let sub: Vec<Vec<Rational>> = a
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != k).map(|(_, x)| x.clone()).collect())
                .collect();
            det(&sub)
        })
        .collect();
    let dir: Vec<Rational> = minors
        .iter()
        .enumerate()
        .map(|(k, m)| if k % 2 == 0 { -m } else { m.clone() })
        .collect();
    let k0 = minors.iter().position(|m| !m.is_zero()).expect("full rank");
    let square: Vec<Vec<Rational>> = a
        .iter()
        .map(|row| row.iter().enumerate().filter(|&(c, _)| c != k0).map(|(_, x)| x.clone()).collect())
        .collect();
    let partial = solve(&square, &rhs).expect("nonzero minor");
    let mut base = partial;
    base.insert(k0, Rational::zero());

    // Clip the line base + t * dir to the cell.
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for (b, d) in base.iter().zip(&dir) {
        if d.is_zero() {
            if b.is_negative() {
                return Ok(None);
            }
            continue;
        }
        let t = -b / d;
        if d.is_positive() {
            if lo.as_ref().is_none_or(|l| t > *l) {
                lo = Some(t);
            }
        } else if hi.as_ref().is_none_or(|h| t < *h) {
            hi = Some(t);
        }
    }
    let (lo, hi) = (lo.expect("direction sums to zero"), hi.expect("direction sums to zero"));
    if lo > hi {
        return Ok(None);
    }
    if lo == hi {
        return Err(Degenerate);
    }
    let at = |t: &Rational| -> Vec<Rational> { base.iter().zip(&dir).map(|(b, d)| b + t * d).collect() };
    let p0 = at(&lo);
    let p1 = at(&hi);
    // Both ends must cross a ridge in its relative interior.
    for p in [&p0, &p1] {
        if p.iter().filter(|x| x.is_zero()).count() != 1 {
            return Err(Degenerate);
        }
    }
    let orient = s * target_sign(f.num_sets(), j);
    let (start, end) = if orient > 0 { (p0, p1) } else { (p1, p0) };
    Ok(Some(Segment {
        cell: cell.clone(),
        sign: s,
        start: CurvePoint::from_bary(cell, &start),
        end: CurvePoint::from_bary(cell, &end),
    }))
}

/// Local degree of the boundary map at an arc end lying on boundary face
/// `face` of `cell`.
fn boundary_sign(f: &PLMap, seg: &Segment, face: &Simplex, j: usize) -> Option<i8> {
    let pos = seg.cell.iter().position(|v| !face.contains(v))?;
    let s_face = induced_sign(seg.sign, seg.cell.len() - 1, pos);
    let d = det(&image_matrix(f, face, j));
    if d.is_zero() {
        return None;
    }
    Some(s_face * target_sign(f.num_sets(), j) * sign(&d))
}

fn chain(
    f: &PLMap,
    segments: Vec<Segment>,
    boundary: &BTreeSet<&Simplex>,
    y: &RegularValue,
) -> Result<PLCurve, Degenerate> {
    let mut by_start: BTreeMap<&CurvePoint, usize> = BTreeMap::new();
    let mut ends: BTreeSet<&CurvePoint> = BTreeSet::new();
    for (i, s) in segments.iter().enumerate() {
        if by_start.insert(&s.start, i).is_some() || !ends.insert(&s.end) {
            return Err(Degenerate);
        }
    }
    // Unmatched ends must sit on the boundary of the source.
    for s in &segments {
        if !ends.contains(&s.start) && !boundary.contains(&s.start.face) {
            return Err(Degenerate);
        }
        if !by_start.contains_key(&s.end) && !boundary.contains(&s.end.face) {
            return Err(Degenerate);
        }
    }
    let mut used = vec![false; segments.len()];
    let mut components = Vec::new();
    let j = y.facet_index;
    // Arcs first, in order of their first segment.
    for i in 0..segments.len() {
        if used[i] || ends.contains(&segments[i].start) {
            continue;
        }
        let first = &segments[i];
        let start_sign = boundary_sign(f, first, &first.start.face, j).ok_or(Degenerate)?;
        let mut points = vec![first.start.clone()];
        let mut cells = Vec::new();
        let mut cur = i;
        loop {
            used[cur] = true;
            let s = &segments[cur];
            points.push(s.end.clone());
            cells.push(s.cell.clone());
            match by_start.get(&s.end) {
                Some(&next) => cur = next,
                None => {
                    let end_sign = boundary_sign(f, s, &s.end.face, j).ok_or(Degenerate)?;
                    components.push(CurveComponent {
                        closed: false,
                        points,
                        cells,
                        end_signs: Some((start_sign, end_sign)),
                    });
                    break;
                }
            }
        }
    }
    for i in 0..segments.len() {
        if used[i] {
            continue;
        }
        let mut points = Vec::new();
        let mut cells = Vec::new();
        let mut cur = i;
        while !used[cur] {
            used[cur] = true;
            let s = &segments[cur];
            points.push(s.start.clone());
            cells.push(s.cell.clone());
            cur = *by_start.get(&s.end).ok_or(Degenerate)?;
        }
        if cur != i {
            return Err(Degenerate);
        }
        components.push(CurveComponent {
            closed: true,
            points,
            cells,
            end_signs: None,
        });
    }
    Ok(PLCurve {
        components,
        regular_value: y.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{default_partition, pl_map, Cover};
    use crate::simplicial::{build_complex, prism, sphere_facets, validate_pseudomanifold};

    #[test]
    fn annulus_fibres_are_arcs_across() {
        // Prism over the triangle boundary, projected to the base.
        let base = validate_pseudomanifold(build_complex(sphere_facets(1)).unwrap(), true).unwrap();
        let p = prism(&base, None).unwrap();
        let labels = p.manifold.complex().vertices().iter().map(|&w| (w, [p.original(w).0 as usize]));
        let c = Cover::from_lists(3, labels).unwrap();
        let f = pl_map(&p.manifold, &c, &default_partition(&c)).unwrap();
        let curve = preimage_curve(&f, 0).unwrap();
        assert_eq!(curve.loops().count(), 0);
        let arcs: Vec<_> = curve.arcs().collect();
        assert_eq!(arcs.len(), 1);
        let (a, b) = arcs[0].end_signs.unwrap();
        assert_eq!(a + b, 0);
        // one end on each boundary circle
        let layer = |pt: &CurvePoint| pt.face.iter().all(|&v| v < p.offset);
        assert_ne!(layer(&arcs[0].points[0]), layer(arcs[0].points.last().unwrap()));
    }

    #[test]
    fn constant_map_has_empty_preimage() {
        let m = validate_pseudomanifold(build_complex(sphere_facets(2)).unwrap(), true).unwrap();
        let c = Cover::from_lists(3, (0..4).map(|v| (v, [0]))).unwrap();
        let f = pl_map(&m, &c, &default_partition(&c)).unwrap();
        assert!(preimage_curve(&f, 0).unwrap().is_empty());
    }
}
