use num_traits::{Signed, Zero};

use super::InvariantError;
use crate::rational::{det, dot, is_consistent, sign, solve, Rational};

/// Number of projection directions tried before giving up.
pub const DIRECTION_CANDIDATES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    /// `true` when a segment of the first curve passes over the second.
    pub first_over: bool,
    pub first_segment: usize,
    pub second_segment: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingResult {
    pub linking_number: i64,
    pub crossings: Vec<Crossing>,
    /// Viewing direction: the projection is along this vector, seen from its
    /// positive end.
    pub direction: Vec<Rational>,
}

/// Directions `(1, k, k^2)` for `k = 2, 3, ..`; points on the moment curve
/// avoid any finite set of planes through the origin eventually.
fn directions() -> impl Iterator<Item = Vec<Rational>> {
    (2..2 + DIRECTION_CANDIDATES as i64).map(|k| {
        vec![
            Rational::from_integer(1.into()),
            Rational::from_integer(k.into()),
            Rational::from_integer((k * k).into()),
        ]
    })
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn columns(cols: [&[Rational]; 3]) -> Vec<Vec<Rational>> {
    (0..3).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
}

enum Failure {
    Degenerate,
    Intersect,
}

/// Linking number of two disjoint closed polygons in 3-space, given by
/// their vertex lists (the last vertex joins the first).
pub fn linking_number(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Result<LinkingResult, InvariantError> {
    assert!(a.len() >= 2 && b.len() >= 2, "polygons need at least two vertices");
    let mut tried = 0;
    for d in directions() {
        tried += 1;
        match crossings(a, b, &d) {
            Ok(crossings) => {
                let total: i64 = crossings.iter().map(|c| i64::from(c.sign)).sum();
                debug_assert_eq!(total % 2, 0);
                let over: i64 = crossings.iter().filter(|c| c.first_over).map(|c| i64::from(c.sign)).sum();
                debug_assert_eq!(over * 2, total);
                return Ok(LinkingResult {
                    linking_number: total / 2,
                    crossings,
                    direction: d,
                });
            }
            Err(Failure::Intersect) => return Err(InvariantError::CurvesIntersect),
            Err(Failure::Degenerate) => {}
        }
    }
    Err(InvariantError::GenericityExhausted { attempts: tried })
}

fn crossings(a: &[Vec<Rational>], b: &[Vec<Rational>], d: &[Rational]) -> Result<Vec<Crossing>, Failure> {
    let zero = Rational::zero();
    let one = Rational::from_integer(1.into());
    let neg_d: Vec<Rational> = d.iter().map(|x| -x).collect();
    let mut out = Vec::new();
    for i in 0..a.len() {
        let a0 = &a[i];
        let da = sub(&a[(i + 1) % a.len()], a0);
        for k in 0..b.len() {
            let b0 = &b[k];
            let db = sub(&b[(k + 1) % b.len()], b0);
            let neg_db: Vec<Rational> = db.iter().map(|x| -x).collect();
            // a0 + s da = b0 + t db + g d
            let m = columns([&da, &neg_db, &neg_d]);
            let rhs = sub(b0, a0);
            if det(&m).is_zero() {
                if is_consistent(&m, &rhs) && projections_overlap(a0, &da, b0, &db, d) {
                    return Err(Failure::Degenerate);
                }
                continue;
            }
            let sol = solve(&m, &rhs).expect("nonsingular");
            let (s, t, g) = (&sol[0], &sol[1], &sol[2]);
            if *s < zero || *s > one || *t < zero || *t > one {
                continue;
            }
            if g.is_zero() {
                return Err(Failure::Intersect);
            }
            if s.is_zero() || *s == one || t.is_zero() || *t == one {
                return Err(Failure::Degenerate);
            }
            let base = sign(&det(&columns([&da, &db, d])));
            let first_over = g.is_positive();
            out.push(Crossing {
                first_over,
                first_segment: i,
                second_segment: k,
                sign: if first_over { base } else { -base },
            });
        }
    }
    Ok(out)
}

/// For two segments whose projections along `d` lie on one line: whether
/// the projected segments share a point.
fn projections_overlap(a0: &[Rational], da: &[Rational], b0: &[Rational], db: &[Rational], d: &[Rational]) -> bool {
    let dd = dot(d, d);
    let project = |x: &[Rational]| -> Vec<Rational> {
        let c = dot(x, d) / &dd;
        x.iter().zip(d).map(|(xi, di)| xi - &c * di).collect()
    };
    let a1: Vec<Rational> = a0.iter().zip(da).map(|(x, y)| x + y).collect();
    let b1: Vec<Rational> = b0.iter().zip(db).map(|(x, y)| x + y).collect();
    let (pa0, pa1, pb0, pb1) = (project(a0), project(&a1), project(b0), project(&b1));
    let u = [sub(&pa1, &pa0), sub(&pb1, &pb0), sub(&pb0, &pa0)]
        .into_iter()
        .find(|v| v.iter().any(|x| !x.is_zero()));
    let Some(u) = u else { return true };
    let (x0, x1) = (dot(&pa0, &u), dot(&pa1, &u));
    let (y0, y1) = (dot(&pb0, &u), dot(&pb1, &u));
    let (alo, ahi) = if x0 <= x1 { (x0, x1) } else { (x1, x0) };
    let (blo, bhi) = if y0 <= y1 { (y0, y1) } else { (y1, y0) };
    !(ahi < blo || bhi < alo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn pts(v: &[[i64; 3]]) -> Vec<Vec<Rational>> {
        v.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn separated_triangles() {
        let a = pts(&[[0, 0, 0], [1, 0, 0], [0, 1, 0]]);
        let b = pts(&[[10, 0, 0], [11, 0, 0], [10, 1, 0]]);
        assert_eq!(linking_number(&a, &b).unwrap().linking_number, 0);
    }

    #[test]
    fn touching_curves() {
        let a = pts(&[[0, 0, 0], [2, 0, 0], [0, 2, 0]]);
        let b = pts(&[[1, 0, -1], [1, 0, 1], [1, 5, 1]]);
        assert_eq!(linking_number(&a, &b), Err(InvariantError::CurvesIntersect));
    }
}
