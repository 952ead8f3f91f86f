//! Standard small examples, also shipped as files under `fixtures/`.

use std::collections::BTreeMap;

use crate::cover::{simplicial_map_as_cover, Cover, PartitionOfUnity};
use crate::io::{ComplexFile, CoverFile};
use crate::rational::{int, ratio, Rational};
use crate::simplicial::{
    barycentric_subdivide, build_complex, simplex_facets, sphere_facets, validate_pseudomanifold,
    GeometricRealization, OrientedPseudomanifold, SimplicialComplex, Simplex, VertexId,
};

/// Boundary of the `(n+1)`-simplex on vertices `0..=n+1`.
pub fn sphere(n: usize) -> OrientedPseudomanifold {
    validate_pseudomanifold(build_complex(sphere_facets(n)).expect("valid"), true).expect("sphere")
}

/// The `n`-simplex as a single facet.
pub fn simplex(n: usize) -> OrientedPseudomanifold {
    validate_pseudomanifold(build_complex(simplex_facets(n)).expect("valid"), false).expect("disc")
}

/// Vertex `k` labelled `k` on the boundary of the `(n+1)`-simplex.
pub fn identity_cover(n: usize) -> Cover {
    Cover::from_lists(n + 2, (0..n as VertexId + 2).map(|v| (v, [v as usize]))).expect("valid")
}

/// Every vertex labelled 0.
pub fn constant_cover(n: usize) -> Cover {
    Cover::from_lists(n + 2, (0..n as VertexId + 2).map(|v| (v, [0]))).expect("valid")
}

/// Cone over a hexagon: boundary vertices `0..6` in cyclic order, apex 6.
pub fn hexagon_cone() -> OrientedPseudomanifold {
    let facets: Vec<Simplex> = (0..6).map(|i| vec![i, (i + 1) % 6, 6]).collect();
    validate_pseudomanifold(build_complex(facets).expect("valid"), false).expect("disc")
}

pub fn hexagon_boundary_cover(labels: [usize; 6]) -> Cover {
    Cover::from_lists(3, labels.iter().enumerate().map(|(v, &l)| (v as VertexId, [l]))).expect("valid")
}

/// The `n`-simplex subdivided `times` times, with the carrier face of every
/// vertex.
pub fn subdivided_simplex(n: usize, times: usize) -> (OrientedPseudomanifold, BTreeMap<VertexId, Simplex>) {
    let base = simplex(n);
    if times == 0 {
        return (base, (0..=n as VertexId).map(|v| (v, vec![v])).collect());
    }
    let (m, sub) = barycentric_subdivide(&base, times).expect("subdivision");
    (m, sub.carriers())
}

/// Labels each vertex by the smallest vertex of its carrier.
pub fn sperner_labels(n: usize, carriers: &BTreeMap<VertexId, Simplex>) -> Cover {
    Cover::from_lists(n + 1, carriers.iter().map(|(&v, c)| (v, [c[0] as usize]))).expect("valid")
}

/// The standard six-vertex projective plane.
pub fn rp2() -> SimplicialComplex {
    build_complex(vec![
        vec![1, 2, 3],
        vec![1, 3, 4],
        vec![1, 4, 5],
        vec![1, 5, 6],
        vec![1, 6, 2],
        vec![2, 3, 5],
        vec![3, 4, 6],
        vec![4, 5, 2],
        vec![5, 6, 3],
        vec![6, 2, 4],
    ])
    .expect("valid")
}

/// A simplicial map from a 3-sphere in `R^4` onto the boundary of the
/// 3-simplex with Hopf invariant one.
pub struct HopfFixture {
    pub manifold: OrientedPseudomanifold,
    pub realization: GeometricRealization,
    pub vertex_map: BTreeMap<VertexId, usize>,
    pub cover: Cover,
    pub partition: PartitionOfUnity,
}

/// The join of two triangles, each inscribed in a unit circle in one of two
/// orthogonal planes, with the nine edge midpoints `m_ij = (x_i + y_j) / 2`
/// added. Vertices: `x_i = i`, `y_j = 3 + j`, `m_ij = 6 + 3i + j`.
///
/// Each square `[x_i, x_i+1] x [y_j, y_j+1]` of the torus of midpoints is
/// coned to the two circles through a pair of triangular prisms, three
/// tetrahedra each. The map sends `x` to 0, `y` to 3 and `m_ij` to
/// `(i - j) mod 3`, so the midpoint torus wraps once around each circle
/// direction of the target.
///
/// The triangle vertices are the rational points `(1, 0)` and
/// `(-33/65, +-56/65)`, close enough to equilateral that the convex hull has
/// plenty of valid projection poles.
pub fn hopf() -> HopfFixture {
    let mid = |i: usize, j: usize| (6 + 3 * (i % 3) + (j % 3)) as VertexId;
    let mut facets = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let prisms = [
                [i as VertexId, mid(i, j), mid(i, j + 1), ((i + 1) % 3) as VertexId, mid(i + 1, j), mid(i + 1, j + 1)],
                [(3 + j) as VertexId, mid(i, j), mid(i + 1, j), (3 + (j + 1) % 3) as VertexId, mid(i, j + 1), mid(i + 1, j + 1)],
            ];
            for [p0, q0, r0, p1, q1, r1] in prisms {
                facets.push(vec![p0, p1, q1, r1]);
                facets.push(vec![p0, q0, q1, r1]);
                facets.push(vec![p0, q0, r0, r1]);
            }
        }
    }
    let manifold = validate_pseudomanifold(build_complex(facets).expect("valid"), true).expect("closed");

    let circle = [(int(1), int(0)), (ratio(-33, 65), ratio(56, 65)), (ratio(-33, 65), ratio(-56, 65))];
    let zero = || Rational::from_integer(0.into());
    let mut coords: BTreeMap<VertexId, Vec<Rational>> = BTreeMap::new();
    for (i, (c, s)) in circle.iter().enumerate() {
        coords.insert(i as VertexId, vec![c.clone(), s.clone(), zero(), zero()]);
        coords.insert(3 + i as VertexId, vec![zero(), zero(), c.clone(), s.clone()]);
    }
    for i in 0..3 {
        for j in 0..3 {
            let x = &coords[&(i as VertexId)];
            let y = &coords[&(3 + j as VertexId)];
            let m: Vec<Rational> = x.iter().zip(y).map(|(a, b)| (a + b) / int(2)).collect();
            coords.insert(mid(i, j), m);
        }
    }
    let realization = GeometricRealization::new(manifold.complex(), coords).expect("independent");

    let mut vertex_map = BTreeMap::new();
    for i in 0..3 {
        vertex_map.insert(i as VertexId, 0);
        vertex_map.insert(3 + i as VertexId, 3);
        for j in 0..3 {
            vertex_map.insert(mid(i, j), (3 + i - j) % 3);
        }
    }
    let (cover, partition) = simplicial_map_as_cover(4, &vertex_map).expect("valid");
    HopfFixture {
        manifold,
        realization,
        vertex_map,
        cover,
        partition,
    }
}

/// Every shipped fixture file, by name, with its contents.
pub fn fixture_files() -> Vec<(String, String)> {
    let mut out = Vec::new();
    let complex = |m: &OrientedPseudomanifold| ComplexFile::from_manifold(m, None, None).to_toml();
    let cover = |c: &Cover| CoverFile::from_cover(c, None).to_toml();
    for n in 1..=3 {
        out.push((format!("sphere{n}.toml"), complex(&sphere(n))));
        out.push((format!("sphere{n}_identity.toml"), cover(&identity_cover(n))));
        out.push((format!("sphere{n}_constant.toml"), cover(&constant_cover(n))));
    }
    out.push(("sphere1_swapped.toml".into(), cover(&identity_cover(1).permute_labels(&[0, 2, 1]))));
    out.push(("sphere2_swapped.toml".into(), cover(&identity_cover(2).permute_labels(&[1, 0, 2, 3]))));
    out.push(("simplex2.toml".into(), complex(&simplex(2))));
    out.push(("hexagon_cone.toml".into(), complex(&hexagon_cone())));
    out.push(("hexagon_degree1.toml".into(), cover(&hexagon_boundary_cover([0, 0, 1, 1, 2, 2]))));
    out.push(("hexagon_degree0.toml".into(), cover(&hexagon_boundary_cover([0, 1, 0, 1, 0, 1]))));

    let (disc, carriers) = subdivided_simplex(2, 1);
    out.push((
        "sperner_disc.toml".into(),
        ComplexFile::from_manifold(&disc, None, Some(&carriers)).to_toml(),
    ));
    let labels = sperner_labels(2, &carriers);
    out.push(("sperner_disc_labels.toml".into(), cover(&labels)));
    let boundary = crate::cover::restrict_cover(&labels, disc.boundary_vertices()).expect("labelled");
    out.push(("sperner_disc_boundary.toml".into(), cover(&boundary)));

    let (disc2, carriers2) = subdivided_simplex(2, 2);
    out.push((
        "sperner_disc2.toml".into(),
        ComplexFile::from_manifold(&disc2, None, Some(&carriers2)).to_toml(),
    ));
    let labels2 = sperner_labels(2, &carriers2);
    out.push(("sperner_disc2_labels.toml".into(), cover(&labels2)));
    let boundary2 = crate::cover::restrict_cover(&labels2, disc2.boundary_vertices()).expect("labelled");
    out.push(("sperner_disc2_boundary.toml".into(), cover(&boundary2)));

    let h = hopf();
    out.push((
        "hopf.toml".into(),
        ComplexFile::from_manifold(&h.manifold, Some(&h.realization), None).to_toml(),
    ));
    out.push(("hopf_cover.toml".into(), cover(&h.cover)));

    out.push(("rp2.toml".into(), rp2_toml()));
    out
}

fn rp2_toml() -> String {
    let k = rp2();
    let mut s = String::from("schema_version = 1\ndimension = 2\nvertices = [1, 2, 3, 4, 5, 6]\nfacets = [\n");
    for f in k.facets() {
        s.push_str(&format!("    [{}, {}, {}],\n", f[0], f[1], f[2]));
    }
    s.push_str("]\n");
    s
}
