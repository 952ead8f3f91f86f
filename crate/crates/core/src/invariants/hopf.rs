//! Hopf invariant of a map from a realized 3-sphere to the boundary of the
//! 3-simplex: the linking number of two regular fibres.
//!
//! The source must be realized as the boundary of a star-shaped polytope
//! around the origin whose vertices lie in the closed unit ball. Fibres are
//! pushed to 3-space by central projection from a pole `p` on the unit
//! sphere, which is stereographic projection on the sphere itself and keeps
//! chords straight. The projection is injective on the cells whose
//! supporting hyperplane separates `p` from the origin strictly, so a pole is
//! valid when every fibre segment lies in such a cell.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::fiber::{preimage_curve, PLCurve};
use super::linking::{linking_number, LinkingResult};
use super::InvariantError;
use crate::cover::PLMap;
use crate::rational::{det, dot, rank, sign, solve, sqrt_floor, Rational};
use crate::simplicial::{homology, GeometricRealization, OrientedPseudomanifold, Simplex};

/// Poles tried from cell directions are rounded to this denominator.
const POLE_SCALE: u64 = 1000;

/// A closed pseudomanifold realized as the boundary of a polytope that is
/// star-shaped around the origin.
#[derive(Clone, Debug)]
pub struct ConvexSphere<'a> {
    manifold: &'a OrientedPseudomanifold,
    realization: &'a GeometricRealization,
    functionals: BTreeMap<Simplex, Vec<Rational>>,
}

fn bad(reason: impl Into<String>) -> InvariantError {
    InvariantError::BadRealization {
        reason: reason.into(),
    }
}

impl<'a> ConvexSphere<'a> {
    /// Checks that each cell spans a hyperplane missing the origin, that all
    /// vertices lie on the origin side of every such hyperplane, that cell
    /// orientations agree with the radial orientation, and that a generic
    /// ray from the origin meets exactly one cell.
    pub fn new(
        manifold: &'a OrientedPseudomanifold,
        realization: &'a GeometricRealization,
    ) -> Result<Self, InvariantError> {
        if !manifold.is_closed() {
            return Err(InvariantError::NotClosed);
        }
        if realization.ambient_dim() != manifold.dim() + 1 {
            return Err(bad(format!(
                "ambient dimension {} for a {}-dimensional complex",
                realization.ambient_dim(),
                manifold.dim()
            )));
        }
        let one = Rational::one();
        let mut functionals = BTreeMap::new();
        let mut radial: Option<i8> = None;
        for (cell, s) in manifold.oriented_facets() {
            let a = realization
                .supporting_functional(cell)
                .ok_or_else(|| bad(format!("cell {cell:?} spans a hyperplane through the origin")))?;
            for &v in manifold.complex().vertices() {
                if dot(&a, realization.coords(v).unwrap()) > one {
                    return Err(bad(format!("vertex {v} lies beyond the hyperplane of {cell:?}")));
                }
            }
            let m: Vec<Vec<Rational>> = cell.iter().map(|&v| realization.coords(v).unwrap().to_vec()).collect();
            let o = s * sign(&det(&m));
            if *radial.get_or_insert(o) != o {
                return Err(bad(format!("cell {cell:?} is folded over")));
            }
            functionals.insert(cell.clone(), a);
        }
        let sphere = Self {
            manifold,
            realization,
            functionals,
        };
        sphere.check_single_cover()?;
        Ok(sphere)
    }

    fn check_single_cover(&self) -> Result<(), InvariantError> {
        let dim = self.realization.ambient_dim();
        'ray: for k in 2..66i64 {
            let ray: Vec<Rational> = (0..dim as u32).map(|i| Rational::from_integer(k.pow(i).into())).collect();
            let mut hits = 0;
            for cell in self.functionals.keys() {
                let m: Vec<Vec<Rational>> = (0..dim)
                    .map(|r| cell.iter().map(|&v| self.realization.coords(v).unwrap()[r].clone()).collect())
                    .collect();
                let Some(mu) = solve(&m, &ray) else { continue };
                if mu.iter().any(Zero::is_zero) {
                    continue 'ray;
                }
                if mu.iter().all(Signed::is_positive) {
                    hits += 1;
                }
            }
            return if hits == 1 {
                Ok(())
            } else {
                Err(bad(format!("a generic ray meets {hits} cells")))
            };
        }
        Err(bad("no generic ray found"))
    }

    pub fn manifold(&self) -> &OrientedPseudomanifold {
        self.manifold
    }

    pub fn realization(&self) -> &GeometricRealization {
        self.realization
    }

    /// `pole` is on the unit sphere and every one of `cells` faces away from
    /// it strictly.
    pub fn pole_is_valid<'c>(&self, pole: &[Rational], cells: impl IntoIterator<Item = &'c Simplex>) -> bool {
        if dot(pole, pole) != Rational::one() {
            return false;
        }
        cells.into_iter().all(|c| dot(&self.functionals[c], pole) < Rational::one())
    }

    /// Candidate poles in a fixed order: vertices on the unit sphere, then
    /// rational points of the sphere near each distinct cell normal and near
    /// small tilts of it.
    pub fn pole_candidates(&self) -> Vec<Vec<Rational>> {
        let mut out: Vec<Vec<Rational>> = Vec::new();
        for c in self.realization.all_coords().values() {
            if dot(c, c).is_one() {
                out.push(c.clone());
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for a in self.functionals.values() {
            if !seen.insert(a.clone()) {
                continue;
            }
            let n = a.len();
            let tilt = sqrt_floor(&dot(a, a), POLE_SCALE) / Rational::from_integer(8.into());
            out.push(rational_sphere_point(a));
            for k in 0..n {
                for sgn in [1, -1] {
                    let mut u = a.clone();
                    u[k] += &tilt * Rational::from_integer(sgn.into());
                    out.push(rational_sphere_point(&u));
                }
            }
        }
        out
    }
}

/// An exact point of the unit sphere close to the direction of `u`.
pub fn rational_sphere_point(u: &[Rational]) -> Vec<Rational> {
    let n = u.len();
    let norm = sqrt_floor(&dot(u, u), POLE_SCALE);
    let w: Vec<Rational> = u.iter().map(|x| x / &norm).collect();
    // Round-trip through stereographic coordinates from the pole farther
    // from w, which lands exactly on the sphere.
    let last = &w[n - 1];
    let flip = last.is_negative();
    let denom = if flip { Rational::one() - last } else { Rational::one() + last };
    let q: Vec<Rational> = w[..n - 1]
        .iter()
        .map(|x| {
            let v = x / &denom;
            // keep the denominators small
            round(&v, POLE_SCALE)
        })
        .collect();
    let qq = dot(&q, &q);
    let scale = Rational::one() + &qq;
    let mut p: Vec<Rational> = q.iter().map(|x| (x + x) / &scale).collect();
    let tail = (Rational::one() - &qq) / &scale;
    p.push(if flip { -tail } else { tail });
    p
}

fn round(x: &Rational, scale: u64) -> Rational {
    let s = num_bigint::BigInt::from(scale);
    Rational::new((x * Rational::from_integer(s.clone())).round().to_integer(), s)
}

/// Central projection from `pole` to the orthogonal complement of the pole,
/// with a basis chosen so that the basis followed by the pole is positive.
pub fn stereographic_project(
    polygon: &[Vec<Rational>],
    pole: &[Rational],
) -> Result<Vec<Vec<Rational>>, InvariantError> {
    let n = pole.len();
    let pp = dot(pole, pole);
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    for k in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[k] = Rational::one();
        let c = &pole[k] / &pp;
        let b: Vec<Rational> = e.iter().zip(pole).map(|(x, p)| x - &c * p).collect();
        let mut trial = basis.clone();
        trial.push(b.clone());
        if rank(&trial) == trial.len() {
            basis = trial;
        }
        if basis.len() == n - 1 {
            break;
        }
    }
    let mut frame = basis.clone();
    frame.push(pole.to_vec());
    if sign(&det(&frame)) < 0 {
        let last = basis.last_mut().unwrap();
        for x in last.iter_mut() {
            *x = -x.clone();
        }
    }
    let one = Rational::one();
    polygon
        .iter()
        .map(|x| {
            let h = &one - dot(x, pole);
            if !h.is_positive() {
                return Err(InvariantError::PoleOnCurve);
            }
            Ok(basis.iter().map(|b| dot(x, b) / &h).collect())
        })
        .collect()
}

/// Number of regular fibres computed when looking for a usable pair.
pub const MAX_FIBRES: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfResult {
    pub invariant: i64,
    pub first: PLCurve,
    pub second: PLCurve,
    pub pole: Vec<Rational>,
    /// One entry per pair of loops.
    pub linking: Vec<LinkingResult>,
}

/// Regular fibres of a map from a realized 3-sphere, with the geometry
/// needed to link them.
pub struct HopfSetup<'a> {
    pub sphere: ConvexSphere<'a>,
    /// Fibres over consecutive regular values in candidate order.
    pub fibres: Vec<PLCurve>,
}

impl<'a> HopfSetup<'a> {
    pub fn new(f: &'a PLMap, r: Option<&'a GeometricRealization>) -> Result<Self, InvariantError> {
        let r = r.ok_or(InvariantError::NoRealization)?;
        let m = f.source();
        if !m.is_closed() {
            return Err(InvariantError::NotClosed);
        }
        if m.dim() != 3 || f.num_sets() != 4 {
            return Err(InvariantError::DimensionMismatch {
                source_dim: m.dim(),
                expected: 3,
                num_sets: f.num_sets(),
            });
        }
        if !homology(m.complex(), 3)?.is_sphere(3) {
            return Err(bad("source is not a homology 3-sphere"));
        }
        let sphere = ConvexSphere::new(m, r)?;
        let mut fibres: Vec<PLCurve> = Vec::new();
        let mut next = 0;
        while fibres.len() < MAX_FIBRES {
            let c = match preimage_curve(f, next) {
                Ok(c) => c,
                Err(InvariantError::GenericityExhausted { .. }) if fibres.len() >= 2 => break,
                Err(e) => return Err(e),
            };
            if c.arcs().next().is_some() {
                return Err(InvariantError::OpenCurve);
            }
            next = c.regular_value.candidate + 1;
            fibres.push(c);
        }
        Ok(Self { sphere, fibres })
    }

    fn cells(&self, i: usize, j: usize) -> Vec<&Simplex> {
        self.fibres[i]
            .components
            .iter()
            .chain(&self.fibres[j].components)
            .flat_map(|c| &c.cells)
            .collect()
    }

    /// The first `limit` poles, in candidate order, from which fibres `i`
    /// and `j` can be projected.
    pub fn valid_poles(&self, i: usize, j: usize, limit: usize) -> Vec<Vec<Rational>> {
        let cells = self.cells(i, j);
        self.sphere
            .pole_candidates()
            .into_iter()
            .filter(|p| self.sphere.pole_is_valid(p, cells.iter().copied()))
            .take(limit)
            .collect()
    }

    /// First pair of fibres, in lexicographic order, with a valid pole.
    pub fn first_usable_pair(&self) -> Option<(usize, usize, Vec<Rational>)> {
        for j in 1..self.fibres.len() {
            for i in 0..j {
                if let Some(p) = self.valid_poles(i, j, 1).pop() {
                    return Some((i, j, p));
                }
            }
        }
        None
    }

    pub fn invariant_with_pole(&self, i: usize, j: usize, pole: &[Rational]) -> Result<HopfResult, InvariantError> {
        let r = self.sphere.realization();
        let project = |curve: &PLCurve| -> Result<Vec<Vec<Vec<Rational>>>, InvariantError> {
            curve
                .loops()
                .map(|l| stereographic_project(&l.polygon(r), pole))
                .collect()
        };
        let a = project(&self.fibres[i])?;
        let b = project(&self.fibres[j])?;
        let mut linking = Vec::new();
        for x in &a {
            for y in &b {
                linking.push(linking_number(x, y)?);
            }
        }
        Ok(HopfResult {
            invariant: linking.iter().map(|l| l.linking_number).sum(),
            first: self.fibres[i].clone(),
            second: self.fibres[j].clone(),
            pole: pole.to_vec(),
            linking,
        })
    }
}

/// Linking number of two regular fibres: the first pair in candidate order
/// that admits a valid pole, projected from the first such pole.
pub fn hopf_invariant(f: &PLMap, r: Option<&GeometricRealization>) -> Result<HopfResult, InvariantError> {
    let setup = HopfSetup::new(f, r)?;
    if let Some(i) = setup.fibres.iter().position(PLCurve::is_empty) {
        // an empty fibre links nothing
        let j = if i == 0 { 1 } else { 0 };
        let (a, b) = (setup.fibres[i.min(j)].clone(), setup.fibres[i.max(j)].clone());
        return Ok(HopfResult {
            invariant: 0,
            first: a,
            second: b,
            pole: Vec::new(),
            linking: Vec::new(),
        });
    }
    let (i, j, pole) = setup.first_usable_pair().ok_or(InvariantError::NoValidPole)?;
    setup.invariant_with_pole(i, j, &pole)
}
