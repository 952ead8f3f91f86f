use num_traits::{One, Zero};

use super::InvariantError;
use crate::cover::{image_in_boundary, PLMap};
use crate::exec::par_map;
use crate::rational::{det, is_consistent, sign, solve, Rational};
use crate::simplicial::{induced_sign, Simplex};

/// Number of perturbation rounds; each round offers one point per target
/// facet.
pub const CANDIDATE_ROUNDS: usize = 16;

const PRIMES: [u64; CANDIDATE_ROUNDS] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// A point in the interior of facet `facet_index` of the target boundary,
/// in barycentric coordinates of the whole target simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularValue {
    pub facet_index: usize,
    pub point: Vec<Rational>,
    /// Position in the deterministic candidate sequence.
    pub candidate: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preimage {
    pub facet: Simplex,
    /// Barycentric coordinates in `facet`, all strictly positive.
    pub point: Vec<Rational>,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeResult {
    pub degree: i64,
    pub preimages: Vec<Preimage>,
    pub regular_value: RegularValue,
    /// Candidates rejected before `regular_value`.
    pub rejected: usize,
}

/// Candidate regular values for a target simplex with `num_sets` vertices.
///
/// Round 0 uses weights proportional to `1, 2, .., n+1` on the facet's
/// vertices; round `k` adds `1/p^(i+1)` to the `i`-th weight, `p` the `k`-th
/// prime. The perturbations trace a moment curve, so only finitely many
/// candidates can lie on any finite set of hyperplanes.
pub fn regular_value_candidates(num_sets: usize) -> impl Iterator<Item = RegularValue> {
    (0..CANDIDATE_ROUNDS).flat_map(move |round| {
        (0..num_sets).map(move |j| {
            let mut raw = Vec::with_capacity(num_sets);
            let mut idx = 0u32;
            for i in 0..num_sets {
                if i == j {
                    raw.push(Rational::zero());
                    continue;
                }
                let mut w = Rational::from_integer((idx + 1).into());
                if round > 0 {
                    let p = num_bigint::BigInt::from(PRIMES[round - 1]).pow(idx + 1);
                    w += Rational::new(1.into(), p);
                }
                raw.push(w);
                idx += 1;
            }
            let total: Rational = raw.iter().sum();
            RegularValue {
                facet_index: j,
                point: raw.into_iter().map(|w| w / &total).collect(),
                candidate: round * num_sets + j,
            }
        })
    })
}

/// Orientation sign of facet `j` of the boundary of the standard simplex
/// with `num_sets` vertices, relative to its ascending vertex tuple.
pub(crate) fn target_sign(num_sets: usize, j: usize) -> i8 {
    induced_sign(1, num_sets - 1, j)
}

/// Square system sending barycentric coordinates on `simplex` to the
/// target coordinates other than `j`.
pub(crate) fn image_matrix(f: &PLMap, simplex: &[u32], j: usize) -> Vec<Vec<Rational>> {
    (0..f.num_sets())
        .filter(|&i| i != j)
        .map(|i| simplex.iter().map(|&v| f.image(v)[i].clone()).collect())
        .collect()
}

pub(crate) fn drop_coord(point: &[Rational], j: usize) -> Vec<Rational> {
    point
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, x)| x.clone())
        .collect()
}

/// Every vertex of `simplex` maps into the facet opposite vertex `j`.
pub(crate) fn maps_into_facet(f: &PLMap, simplex: &[u32], j: usize) -> bool {
    simplex.iter().all(|&v| f.image(v)[j].is_zero())
}

pub(crate) fn check_map(f: &PLMap, expected_dim: usize) -> Result<(), InvariantError> {
    let source_dim = f.source().dim();
    if f.num_sets() < 3 || source_dim != expected_dim {
        return Err(InvariantError::DimensionMismatch {
            source_dim,
            expected: expected_dim,
            num_sets: f.num_sets(),
        });
    }
    image_in_boundary(f).map_err(|simplex| InvariantError::ImageNotInBoundary { simplex })
}

/// Degree of `f` as a map from its closed source to the boundary sphere.
pub fn degree(f: &PLMap) -> Result<DegreeResult, InvariantError> {
    let m = f.source();
    if !m.is_closed() {
        return Err(InvariantError::NotClosed);
    }
    check_map(f, f.num_sets().saturating_sub(2))?;
    let mut rejected = 0;
    for y in regular_value_candidates(f.num_sets()) {
        match count_preimages(f, &y) {
            Some(preimages) => {
                let degree = preimages.iter().map(|p| i64::from(p.sign)).sum();
                return Ok(DegreeResult {
                    degree,
                    preimages,
                    regular_value: y,
                    rejected,
                });
            }
            None => rejected += 1,
        }
    }
    Err(InvariantError::GenericityExhausted { attempts: rejected })
}

/// Signed preimage count at a given value, or `None` if the value is not
/// regular for `f`. The caller is responsible for the preconditions checked
/// by [`degree`].
pub fn degree_at(f: &PLMap, y: &RegularValue) -> Option<DegreeResult> {
    let preimages = count_preimages(f, y)?;
    Some(DegreeResult {
        degree: preimages.iter().map(|p| i64::from(p.sign)).sum(),
        preimages,
        regular_value: y.clone(),
        rejected: 0,
    })
}

struct Degenerate;

fn count_preimages(f: &PLMap, y: &RegularValue) -> Option<Vec<Preimage>> {
    let m = f.source();
    let items: Vec<(&Simplex, i8)> = m.oriented_facets().collect();
    let found = par_map(&items, |&(facet, s)| facet_preimage(f, facet, s, y));
    let mut out = Vec::new();
    for r in found {
        match r {
            Ok(Some(p)) => out.push(p),
            Ok(None) => {}
            Err(Degenerate) => return None,
        }
    }
    Some(out)
}

fn facet_preimage(
    f: &PLMap,
    facet: &Simplex,
    s: i8,
    y: &RegularValue,
) -> Result<Option<Preimage>, Degenerate> {
    let j = y.facet_index;
    // Outside the facet the value can only be reached through points whose
    // j-th coordinate vanishes on a face, and such faces are covered by
    // the facets that lie entirely over it.
    if !maps_into_facet(f, facet, j) {
        return Ok(None);
    }
    let a = image_matrix(f, facet, j);
    let rhs = drop_coord(&y.point, j);
    let d = det(&a);
    if d.is_zero() {
        return if is_consistent(&a, &rhs) {
            Err(Degenerate)
        } else {
            Ok(None)
        };
    }
    let lambda = solve(&a, &rhs).expect("nonsingular system");
    let zero = Rational::zero();
    if lambda.iter().any(|x| *x < zero) {
        return Ok(None);
    }
    if lambda.iter().any(Zero::is_zero) {
        return Err(Degenerate);
    }
    debug_assert!(lambda.iter().sum::<Rational>().is_one());
    Ok(Some(Preimage {
        facet: facet.clone(),
        point: lambda,
        sign: s * target_sign(f.num_sets(), j) * sign(&d),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{default_partition, pl_map, Cover};
    use crate::simplicial::{build_complex, sphere_facets, validate_pseudomanifold};

    fn sphere_map(n: usize, labels: &[usize]) -> PLMap {
        let m = validate_pseudomanifold(build_complex(sphere_facets(n)).unwrap(), true).unwrap();
        let c = Cover::from_lists(n + 2, labels.iter().enumerate().map(|(v, &l)| (v as u32, [l])))
            .unwrap();
        pl_map(&m, &c, &default_partition(&c)).unwrap()
    }

    #[test]
    fn candidates_are_interior_points() {
        for num_sets in 3..=5 {
            let all: Vec<_> = regular_value_candidates(num_sets).collect();
            assert_eq!(all.len(), CANDIDATE_ROUNDS * num_sets);
            for y in &all {
                assert!(y.point[y.facet_index].is_zero());
                assert!(y.point.iter().enumerate().all(|(i, x)| i == y.facet_index || *x > Rational::zero()));
                assert!(y.point.iter().sum::<Rational>().is_one());
            }
            let mut points: Vec<_> = all.iter().map(|y| y.point.clone()).collect();
            points.sort();
            points.dedup();
            assert_eq!(points.len(), all.len());
        }
    }

    #[test]
    fn circle_identity_hand_audit() {
        // Triangle boundary with facets [1,2], [0,2], [0,1]; the canonical
        // orientation runs 0 -> 1 -> 2 -> 0, so [0,2] is negative. The
        // regular value sits on the target edge {1,2}, whose only preimage
        // is the source edge [1,2] mapped identically with sign +1.
        let f = sphere_map(1, &[0, 1, 2]);
        assert_eq!(f.source().signs(), &[1, -1, 1][..]);
        let r = degree(&f).unwrap();
        assert_eq!(r.regular_value.facet_index, 0);
        assert_eq!(r.preimages.len(), 1);
        assert_eq!(r.preimages[0].facet, vec![1, 2]);
        assert_eq!(r.degree, 1);
    }

    #[test]
    fn identity_and_transposition() {
        for n in 1..=3 {
            let id: Vec<usize> = (0..n + 2).collect();
            assert_eq!(degree(&sphere_map(n, &id)).unwrap().degree, 1);
            let mut swapped = id.clone();
            swapped.swap(0, 1);
            assert_eq!(degree(&sphere_map(n, &swapped)).unwrap().degree, -1);
        }
    }

    #[test]
    fn constant_map_has_degree_zero() {
        let f = sphere_map(2, &[1, 1, 1, 1]);
        let r = degree(&f).unwrap();
        assert_eq!(r.degree, 0);
        assert!(r.preimages.is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        let m = validate_pseudomanifold(build_complex(sphere_facets(2)).unwrap(), true).unwrap();
        let c = Cover::from_lists(3, (0..4).map(|v| (v, [v as usize % 3]))).unwrap();
        let f = pl_map(&m, &c, &default_partition(&c)).unwrap();
        assert!(matches!(degree(&f), Err(InvariantError::DimensionMismatch { .. })));

        let c = Cover::from_lists(4, [(0, vec![0, 1]), (1, vec![2]), (2, vec![3]), (3, vec![0])])
            .unwrap();
        let f = pl_map(&m, &c, &default_partition(&c)).unwrap();
        assert!(matches!(degree(&f), Err(InvariantError::ImageNotInBoundary { .. })));
    }
}
