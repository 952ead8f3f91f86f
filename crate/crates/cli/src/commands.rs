use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use coverdeg::classify::{
    covers_cobordant, covers_homotopic, null_cobordance, ClassificationVerdict, ClassifyError, Evidence,
};
use coverdeg::cover::{covering_simplex, pl_map, subdivide_cover};
use coverdeg::invariants::{degree, hopf_invariant, RegularValue};
use coverdeg::io::{CertificateDoc, ComplexFile, CoverFile, KkmCertificateDoc, PrismCertificateDoc};
use coverdeg::search::{sperner_count, verify_kkm, ExtensionProblem, SearchError, Verdict};
use coverdeg::simplicial::{barycentric_subdivide, homology, OrientedPseudomanifold, Simplex, VertexId};
use toml::Value;

use crate::report::{count, ints, rationals, table, Report};
use crate::{CliError, Command, SearchArgs};

pub struct Outcome {
    pub report: String,
    pub code: u8,
}

impl From<Report> for Outcome {
    fn from(r: Report) -> Self {
        Outcome {
            report: r.finish(),
            code: 0,
        }
    }
}

pub fn dispatch(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Validate { complex, cover } => validate(&complex, cover.as_deref()),
        Command::Degree { complex, cover } => degree_cmd(&complex, &cover),
        Command::Hopf { complex, cover } => hopf_cmd(&complex, &cover),
        Command::KkmVerify(args) => kkm(args, false),
        Command::KkmExtend(args) => kkm(args, true),
        Command::Homotopic {
            complex,
            first,
            second,
            subdivide,
        } => homotopic(&complex, &first, &second, subdivide),
        Command::Cobordant {
            first_complex,
            first_cover,
            second_complex,
            second_cover,
        } => cobordant(&first_complex, &first_cover, &second_complex, &second_cover),
        Command::NullCobordant { complex, cover } => null_cmd(&complex, &cover),
        Command::Subdivide {
            complex,
            cover,
            subdivide,
            out_complex,
            out_cover,
        } => subdivide_cmd(&complex, cover.as_deref(), subdivide, &out_complex, out_cover.as_deref()),
        Command::Sperner { complex, labels } => sperner(&complex, &labels),
        Command::Recheck { certificate } => recheck(&certificate),
    }
}

fn name(p: &Path) -> String {
    p.display().to_string()
}

fn compute(e: impl std::fmt::Display) -> CliError {
    CliError::Compute(e.to_string())
}

fn invalid_at(file: &str, message: impl std::fmt::Display) -> CliError {
    CliError::Invalid {
        at: file.to_string(),
        message: message.to_string(),
    }
}

fn closed(path: &Path) -> Result<(ComplexFile, OrientedPseudomanifold), CliError> {
    let f = ComplexFile::load(path)?;
    let m = f.manifold(true)?;
    Ok((f, m))
}

/// Loads a cover defined exactly on the vertices of `m`.
fn cover_on(path: &Path, m: &OrientedPseudomanifold) -> Result<CoverFile, CliError> {
    let c = CoverFile::load(path)?;
    let vertices: BTreeSet<VertexId> = m.complex().vertices().iter().copied().collect();
    c.check_vertices(&vertices)?;
    Ok(c)
}

/// Fails, pointing at the cover file, if the cover has a covering simplex.
fn no_covering_simplex(c: &CoverFile, m: &OrientedPseudomanifold) -> Result<(), CliError> {
    if let Some(simplex) = covering_simplex(m.complex(), &c.cover).map_err(compute)? {
        let line = c.line_of_vertex(simplex[0], false);
        let at = match line {
            Some(l) => format!("{}:{l}", c.file()),
            None => c.file().to_string(),
        };
        return Err(CliError::Invalid {
            at,
            message: format!("cover has a covering simplex {simplex:?}"),
        });
    }
    Ok(())
}

fn expect_sets(c: &CoverFile, m: &OrientedPseudomanifold) -> Result<(), CliError> {
    if c.cover.num_sets() != m.dim() + 2 {
        return Err(invalid_at(
            c.file(),
            format!(
                "cover has {} sets; a map of a {}-manifold to a sphere of the same dimension needs {}",
                c.cover.num_sets(),
                m.dim(),
                m.dim() + 2
            ),
        ));
    }
    Ok(())
}

fn simplices(xs: &[Simplex]) -> Value {
    Value::Array(xs.iter().map(|s| ints(s)).collect())
}

fn regular_value(y: &RegularValue) -> Value {
    table(vec![
        ("facet", count(y.facet_index)),
        ("candidate", count(y.candidate)),
        ("point", rationals(&y.point)),
    ])
}

fn validate(path: &Path, cover: Option<&Path>) -> Result<Outcome, CliError> {
    let f = ComplexFile::load(path)?;
    let k = &f.complex;
    let h = homology(k, k.dim()).map_err(compute)?;
    let mut r = Report::new("validate");
    r.set("complex", name(path))
        .set("dimension", count(k.dim()))
        .set("vertices", count(k.vertices().len()))
        .set("facets", count(k.num_facets()))
        .set("euler_characteristic", k.euler_characteristic())
        .set("betti", Value::Array(h.betti.iter().map(|&b| count(b)).collect()))
        .set(
            "torsion",
            Value::Array(
                h.torsion
                    .iter()
                    .map(|t| Value::Array(t.iter().map(|x| Value::String(x.to_string())).collect()))
                    .collect(),
            ),
        );
    let m = match f.manifold(false) {
        Ok(m) => m,
        Err(e) => {
            r.set("valid", false).set("error", e.to_string());
            eprintln!("error: {e}");
            return Ok(Outcome {
                report: r.finish(),
                code: 4,
            });
        }
    };
    r.set("valid", true)
        .set("closed", m.is_closed())
        .set("boundary_faces", count(m.boundary_faces().len()))
        .set("homology_sphere", m.is_closed() && h.is_sphere(m.dim()))
        .set("coordinates", f.coordinates.is_some());
    if let Some(cp) = cover {
        let c = cover_on(cp, &m)?;
        r.set("cover", name(cp)).set("num_sets", count(c.cover.num_sets()));
        match covering_simplex(m.complex(), &c.cover).map_err(compute)? {
            None => r.set("maps_to_boundary", true),
            Some(s) => r.set("maps_to_boundary", false).set("covering_simplex", ints(&s)),
        };
    }
    Ok(r.into())
}

fn degree_cmd(complex: &Path, cover: &Path) -> Result<Outcome, CliError> {
    let (_, m) = closed(complex)?;
    let c = cover_on(cover, &m)?;
    expect_sets(&c, &m)?;
    no_covering_simplex(&c, &m)?;
    let f = pl_map(&m, &c.cover, &c.partition_or_default()).map_err(compute)?;
    let d = degree(&f).map_err(compute)?;
    let mut r = Report::new("degree");
    r.set("complex", name(complex))
        .set("cover", name(cover))
        .set("degree", d.degree)
        .set("rejected_candidates", count(d.rejected))
        .set("regular_value", regular_value(&d.regular_value))
        .set(
            "preimages",
            Value::Array(
                d.preimages
                    .iter()
                    .map(|p| {
                        table(vec![
                            ("facet", ints(&p.facet)),
                            ("sign", Value::Integer(p.sign.into())),
                            ("point", rationals(&p.point)),
                        ])
                    })
                    .collect(),
            ),
        );
    Ok(r.into())
}

fn hopf_cmd(complex: &Path, cover: &Path) -> Result<Outcome, CliError> {
    let (f, m) = closed(complex)?;
    let realization = f
        .realization()?
        .ok_or_else(|| invalid_at(f.file(), "the Hopf invariant needs vertex coordinates"))?;
    let c = cover_on(cover, &m)?;
    if m.dim() != 3 || c.cover.num_sets() != 4 {
        return Err(invalid_at(c.file(), "the Hopf invariant needs a 3-manifold and 4 sets"));
    }
    no_covering_simplex(&c, &m)?;
    let map = pl_map(&m, &c.cover, &c.partition_or_default()).map_err(compute)?;
    let h = hopf_invariant(&map, Some(&realization)).map_err(compute)?;
    let fibre = |curve: &coverdeg::invariants::PLCurve| {
        table(vec![
            ("regular_value", regular_value(&curve.regular_value)),
            ("loops", count(curve.loops().count())),
            (
                "segments",
                count(curve.components.iter().map(|c| c.cells.len()).sum()),
            ),
        ])
    };
    let mut r = Report::new("hopf");
    r.set("complex", name(complex))
        .set("cover", name(cover))
        .set("hopf_invariant", h.invariant)
        .set("pole", rationals(&h.pole))
        .set("first_fibre", fibre(&h.first))
        .set("second_fibre", fibre(&h.second))
        .set(
            "linking",
            Value::Array(
                h.linking
                    .iter()
                    .map(|l| {
                        table(vec![
                            ("linking_number", Value::Integer(l.linking_number)),
                            ("crossings", count(l.crossings.len())),
                            ("direction", rationals(&l.direction)),
                        ])
                    })
                    .collect(),
            ),
        );
    Ok(r.into())
}

fn search_error(c: &CoverFile, complex: &ComplexFile, e: SearchError) -> CliError {
    match e {
        SearchError::UnlabelledBoundaryVertex { vertex } | SearchError::NotBoundaryVertex { vertex } => {
            c.error_at_vertex(vertex, e).into()
        }
        SearchError::BoundaryCovered { ref simplex } => c.error_at_vertex(simplex[0], e.clone()).into(),
        SearchError::Topology(t) => complex.topology_error(t).into(),
        other => compute(other),
    }
}

fn kkm(args: SearchArgs, extend: bool) -> Result<Outcome, CliError> {
    let f = ComplexFile::load(&args.complex)?;
    let m = f.manifold(false)?;
    if m.is_closed() {
        return Err(invalid_at(f.file(), "the complex has no boundary to extend from"));
    }
    let c = CoverFile::load(&args.boundary)?;
    let p = ExtensionProblem::new(m, c.cover.clone(), args.mode.into()).map_err(|e| search_error(&c, &f, e))?;
    let cert = verify_kkm(&p, args.budget);
    let doc = CertificateDoc::Kkm(KkmCertificateDoc::new(&p, &cert));
    let mut r = Report::new(if extend { "kkm-extend" } else { "kkm-verify" });
    r.set("complex", name(&args.complex))
        .set("boundary", name(&args.boundary))
        .embed("verdict", &cert.verdict)
        .embed("mode", &cert.mode)
        .set("free_vertices", count(p.free_vertices().len()))
        .set("space_size", cert.space_size.to_string())
        .set("nodes", cert.nodes as i64)
        .set("budget", cert.budget as i64)
        .set("complete", cert.is_complete());
    if extend {
        r.set(
            "extension",
            match cert.verdict {
                Verdict::Extendable => "found",
                Verdict::Obstructed => "none",
                Verdict::Inconclusive => "inconclusive",
            },
        );
    } else {
        r.set("pruned_branches", count(cert.exhaustion.len()));
    }
    r.embed("certificate", &doc);
    Ok(r.into())
}

fn classify_error(e: ClassifyError, second: &str) -> CliError {
    match e {
        ClassifyError::DimensionMismatch { .. } | ClassifyError::SetCountMismatch { .. } => invalid_at(second, e),
        other => compute(other),
    }
}

fn verdict_fields(r: &mut Report, v: &ClassificationVerdict) {
    r.set("relation", v.relation.to_string());
    if let Some(b) = v.basis() {
        r.set("basis", b.to_string());
    }
    match &v.evidence {
        Evidence::Prism(w) => {
            r.set("subdivisions", count(w.subdivisions));
            r.embed("certificate", &CertificateDoc::PrismWitness(PrismCertificateDoc::new(w)));
        }
        Evidence::Degrees {
            first,
            second,
            spheres_certified,
        } => {
            r.set("degree", *first);
            if let Some(d) = second {
                r.set("second_degree", *d);
            }
            r.set("spheres_certified", *spheres_certified);
        }
        Evidence::Theorem(t) => {
            r.set("theorem", t.to_string());
        }
        Evidence::Undecided(u) => {
            r.set("reason", u.to_string());
        }
    }
}

fn homotopic(complex: &Path, first: &Path, second: &Path, subdivide: usize) -> Result<Outcome, CliError> {
    let (_, m) = closed(complex)?;
    let c1 = cover_on(first, &m)?;
    let c2 = cover_on(second, &m)?;
    no_covering_simplex(&c1, &m)?;
    no_covering_simplex(&c2, &m)?;
    let v = covers_homotopic(&m, &c1.cover, &c2.cover, subdivide).map_err(|e| classify_error(e, c2.file()))?;
    let mut r = Report::new("homotopic");
    r.set("complex", name(complex))
        .set("first", name(first))
        .set("second", name(second))
        .set("max_subdivisions", count(subdivide));
    verdict_fields(&mut r, &v);
    Ok(r.into())
}

fn cobordant(k1: &Path, s1: &Path, k2: &Path, s2: &Path) -> Result<Outcome, CliError> {
    let (_, m1) = closed(k1)?;
    let (_, m2) = closed(k2)?;
    let c1 = cover_on(s1, &m1)?;
    let c2 = cover_on(s2, &m2)?;
    no_covering_simplex(&c1, &m1)?;
    no_covering_simplex(&c2, &m2)?;
    let v = covers_cobordant(&m1, &c1.cover, &m2, &c2.cover).map_err(|e| classify_error(e, &name(k2)))?;
    let mut r = Report::new("cobordant");
    r.set("first_complex", name(k1))
        .set("first_cover", name(s1))
        .set("second_complex", name(k2))
        .set("second_cover", name(s2));
    verdict_fields(&mut r, &v);
    Ok(r.into())
}

fn null_cmd(complex: &Path, cover: &Path) -> Result<Outcome, CliError> {
    let (_, m) = closed(complex)?;
    let c = cover_on(cover, &m)?;
    no_covering_simplex(&c, &m)?;
    let v = null_cobordance(&m, &c.cover).map_err(|e| classify_error(e, c.file()))?;
    let mut r = Report::new("null-cobordant");
    r.set("complex", name(complex))
        .set("cover", name(cover))
        .set("source_dimension", count(m.dim()))
        .set("target_dimension", count(c.cover.num_sets().saturating_sub(2)));
    verdict_fields(&mut r, &v);
    Ok(r.into())
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Compute(format!("{}: {e}", path.display())))
}

fn subdivide_cmd(
    complex: &Path,
    cover: Option<&Path>,
    times: usize,
    out_complex: &Path,
    out_cover: Option<&Path>,
) -> Result<Outcome, CliError> {
    let f = ComplexFile::load(complex)?;
    let m = f.manifold(false)?;
    let (sm, sub) = barycentric_subdivide(&m, times).map_err(|e| f.topology_error(e))?;
    // Carriers compose: the new carrier spans the old carriers of the
    // vertices it sits between.
    let carriers: Option<BTreeMap<VertexId, Simplex>> = f.carriers.as_ref().map(|old| {
        sub.carriers()
            .into_iter()
            .map(|(v, face)| {
                let span: BTreeSet<VertexId> = face.iter().flat_map(|u| old[u].iter().copied()).collect();
                (v, span.into_iter().collect())
            })
            .collect()
    });
    write(out_complex, &ComplexFile::from_manifold(&sm, None, carriers.as_ref()).to_toml())?;
    let mut r = Report::new("subdivide");
    r.set("complex", name(complex))
        .set("subdivisions", count(times))
        .set("vertices", count(sm.complex().vertices().len()))
        .set("facets", count(sm.complex().num_facets()))
        .set("out_complex", name(out_complex));
    if let (Some(cp), Some(out)) = (cover, out_cover) {
        let c = cover_on(cp, &m)?;
        let (sc, phi) = subdivide_cover(&c.partition_or_default(), &sub).map_err(compute)?;
        write(out, &CoverFile::from_cover(&sc, Some(&phi)).to_toml())?;
        r.set("cover", name(cp)).set("out_cover", name(out));
    }
    Ok(r.into())
}

fn sperner(complex: &Path, labels: &Path) -> Result<Outcome, CliError> {
    let f = ComplexFile::load(complex)?;
    let m = f.manifold(false)?;
    let carriers = f
        .carriers
        .as_ref()
        .ok_or_else(|| invalid_at(f.file(), "the complex has no [carriers] table"))?;
    let c = cover_on(labels, &m)?;
    let count_result = sperner_count(&m, carriers, &c.cover).map_err(|e| match e {
        SearchError::NotSperner { vertex, .. }
        | SearchError::MissingCarrier { vertex }
        | SearchError::BadCarrier { vertex, .. }
        | SearchError::NotSingleton { vertex } => c.error_at_vertex(vertex, e).into(),
        other => compute(other),
    })?;
    let mut r = Report::new("sperner");
    r.set("complex", name(complex))
        .set("labels", name(labels))
        .set("unsigned", count(count_result.unsigned))
        .set("signed", count_result.signed)
        .set("fully_labelled", simplices(&count_result.fully_labelled));
    Ok(r.into())
}

fn recheck(path: &Path) -> Result<Outcome, CliError> {
    let doc = CertificateDoc::load(path)?;
    let summary = doc.recheck().map_err(|e| CliError::Rejected {
        at: name(path),
        message: e.to_string(),
    })?;
    let mut r = Report::new("recheck");
    r.set("certificate", name(path)).set("kind", summary.kind);
    if let Some(v) = summary.verdict {
        r.embed("verdict", &v);
    }
    r.set("status", "accepted");
    Ok(r.into())
}
