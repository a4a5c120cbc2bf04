//! Subcommand bodies. Each builds a [`Report`] holding the same content
//! twice: as indented text and as a JSON object.

use std::fmt::Write as _;
use std::fs;

use crepant::datum::{parse_datum, write_sets_text, CanonicalForm, SpecialDatum};
use crepant::ehrhart::{cohomology_dims, ehrhart_bruteforce, h_vector, Route};
use crepant::exact::{fmt_rational, RationalVector};
use crepant::fan::{build_fan_in_chart, check_crepant, check_smooth, triangulate_junior, GroupLattice, JuniorChart};
use crepant::fan::{CrepancyWitness, ResolutionFan, SmoothnessWitness};
use crepant::pipeline;
use crepant::triangulation::{write_off, CertifiedTriangulation};
use serde_json::{json, Map, Value};

use crate::{Common, Failure, Format};

/// Listings longer than this are summarised in text output.
const LIST_LIMIT: usize = 200;
/// Groups up to this order get an element table.
const GROUP_TABLE_LIMIT: u64 = 64;

#[derive(Default)]
pub struct Report {
    text: String,
    json: Map<String, Value>,
    seconds: Option<f64>,
    /// Text output is a file body (OFF), printed without a timing line.
    raw: bool,
    pub negative: bool,
}

impl Report {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn block(&mut self, title: &str, body: &str) {
        self.line(title);
        for l in body.lines() {
            self.line(format!("  {l}"));
        }
    }

    fn put(&mut self, key: &str, v: impl serde::Serialize) {
        self.json
            .insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }

    pub fn set_seconds(&mut self, s: f64) {
        self.seconds = Some(s);
    }

    pub fn render(mut self, format: Format) -> String {
        match format {
            Format::Text => {
                if let Some(s) = self.seconds.filter(|_| !self.raw) {
                    let _ = writeln!(self.text, "time: {s:.3} s");
                }
                self.text
            }
            Format::Structured => {
                if let Some(s) = self.seconds {
                    self.json.insert("seconds".into(), json!(s));
                }
                let mut out = serde_json::to_string_pretty(&Value::Object(self.json)).expect("json");
                out.push('\n');
                out
            }
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "true"
    } else {
        "false"
    }
}

fn tuple(v: &[i64]) -> String {
    let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", s.join(", "))
}

enum Source {
    Datum {
        original: SpecialDatum,
        canonical: CanonicalForm,
    },
    Lattice(GroupLattice),
}

fn read_datum(opts: &Common) -> Result<SpecialDatum, Failure> {
    let path = opts
        .input
        .as_ref()
        .ok_or_else(|| Failure::Usage("no input file".into()))?;
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_datum(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Reads the input and canonicalizes it. An invalid datum is a negative
/// verdict: the first violated clause goes to stderr.
fn load(opts: &Common) -> Result<Source, Failure> {
    if let Some(spec) = &opts.lattice {
        return Ok(Source::Lattice(
            GroupLattice::parse_inline(spec).map_err(|e| Failure::Usage(e.to_string()))?,
        ));
    }
    let original = read_datum(opts)?;
    let report = original.validate();
    if let Some(v) = report.first() {
        eprintln!("invalid datum: clause {} {}", v.clause.roman(), v.message);
        return Err(Failure::Negative);
    }
    let canonical = original.canonicalize()?;
    Ok(Source::Datum { original, canonical })
}

fn describe_datum(r: &mut Report, original: &SpecialDatum, canonical: &CanonicalForm) -> Result<(), Failure> {
    r.block("datum", &write_sets_text(&canonical.datum));
    r.put("datum", &canonical.datum);
    if canonical.datum != *original {
        let theta: Vec<String> = canonical.theta.iter().map(|t| t.to_string()).collect();
        r.line(format!("relabelling θ = [{}]", theta.join(", ")));
    }
    r.put("theta", &canonical.theta);
    let forest = canonical.datum.to_forest()?;
    r.block("forest", &forest.render());
    r.put("forest", forest.render());
    Ok(())
}

fn describe_lattice(r: &mut Report, g: &GroupLattice) {
    r.line(format!("group lattice d = {}, |G| = {}", g.d(), g.order));
    let gens: Vec<String> = g.generators.iter().map(|v| v.to_string()).collect();
    r.block("generators", &gens.join("\n"));
    r.put("lattice", g);
}

/// Stellar triangulations of direct lattice input need not be balanced,
/// so only basic and coherent count towards the verdict there.
fn describe_triangulation(r: &mut Report, t: &CertifiedTriangulation, trace: bool, require_balanced: bool) {
    r.line(format!(
        "triangulation: {} vertices, {} cells",
        t.num_vertices(),
        t.num_cells()
    ));
    if t.num_cells() <= LIST_LIMIT {
        let mut body = String::new();
        for (v, p) in t.points().enumerate() {
            let colour = t.colour(v).map_or(String::new(), |c| format!("  colour {c}"));
            let height = t
                .height(v)
                .map_or(String::new(), |h| format!("  height {}", fmt_rational(&h)));
            let _ = writeln!(body, "v{v} {}{colour}{height}", tuple(p));
        }
        for c in t.cells() {
            let idx: Vec<String> = c.iter().map(|i| format!("v{i}")).collect();
            let _ = writeln!(body, "[{}]", idx.join(" "));
        }
        r.block("vertices and cells", &body);
    }
    let c = t.certificate();
    let margin = c.coherent.min_margin.as_ref().map_or("none".into(), fmt_rational);
    r.block(
        "certificate",
        &format!(
            "basic {} (max determinant {}, {} non-basic cells)\ncoherent {} ({} walls, minimum margin {margin}, {} failing)\nbalanced {}\noverall {}",
            verdict(c.basic.ok),
            c.basic.max_determinant,
            c.basic.non_basic_cells,
            verdict(c.coherent.ok),
            c.coherent.tiling.walls,
            c.coherent.failing_walls,
            verdict(c.balanced.ok),
            verdict(c.overall)
        ),
    );
    if trace {
        let eps: Vec<String> = t.epsilons().iter().map(fmt_rational).collect();
        r.line("ε per refinement");
        if eps.is_empty() {
            r.line("  none");
        }
        for (i, e) in eps.iter().enumerate() {
            r.line(format!("  level {}: ε = {e}", i + 1));
        }
    }
    r.put("triangulation", t.to_view());
    r.negative |= !(c.basic.ok && c.coherent.ok && (c.balanced.ok || !require_balanced));
}

fn triangulation_of(source: &Source) -> Result<(CertifiedTriangulation, Option<pipeline::Resolution>), Failure> {
    match source {
        Source::Datum { canonical, .. } => {
            let res = pipeline::resolve(&canonical.datum)?;
            Ok((res.triangulation.clone(), Some(res)))
        }
        Source::Lattice(g) => Ok((triangulate_junior(&JuniorChart::new(g.clone())?)?, None)),
    }
}

fn write_export(r: &mut Report, opts: &Common, t: &CertifiedTriangulation) -> Result<(), Failure> {
    let Some(target) = &opts.export else { return Ok(()) };
    if t.dim() > 3 {
        return Err(Failure::Usage(format!(
            "OFF export needs dimension at most 3, not {}",
            t.dim()
        )));
    }
    let off = write_off(t)?;
    fs::write(&target.path, off).map_err(|e| Failure::Usage(format!("{}: {e}", target.path.display())))?;
    r.line(format!("wrote OFF to {}", target.path.display()));
    r.put("export", target.path.display().to_string());
    Ok(())
}

pub fn validate(opts: &Common) -> Result<Report, Failure> {
    if opts.lattice.is_some() {
        return Err(Failure::Usage("validate takes a datum file, not --lattice".into()));
    }
    let datum = read_datum(opts)?;
    let mut r = Report::default();
    let report = datum.validate();
    r.line(format!("valid: {}", verdict(report.is_valid())));
    r.put("valid", report.is_valid());
    r.put("violations", &report.violations);
    if report.is_valid() {
        let canonical = datum.canonicalize()?;
        describe_datum(&mut r, &datum, &canonical)?;
    } else {
        for v in &report.violations {
            r.line(format!("clause {}: {}", v.clause.roman(), v.message));
        }
        r.negative = true;
    }
    Ok(r)
}

pub fn build(opts: &Common) -> Result<Report, Failure> {
    let source = load(opts)?;
    let mut r = Report::default();
    let (t, res) = triangulation_of(&source)?;
    match (&source, &res) {
        (Source::Datum { original, canonical }, Some(res)) => {
            describe_datum(&mut r, original, canonical)?;
            r.line(format!("|G| = {}", res.geometry.lattice.order));
            let verts: Vec<String> = res.geometry.transformed.iter().map(|v| tuple(v)).collect();
            r.block("vertices of the transformed junior simplex", &verts.join("\n"));
            r.block("decomposition", &res.decomposition.render());
            r.put("order", res.geometry.lattice.order);
            r.put("vertices", &res.geometry.transformed);
            r.put("decomposition", &res.decomposition);
        }
        (Source::Lattice(g), _) => describe_lattice(&mut r, g),
        _ => unreachable!("datum input always carries a resolution"),
    }
    describe_triangulation(&mut r, &t, opts.lambda_trace, opts.lattice.is_none());
    write_export(&mut r, opts, &t)?;
    Ok(r)
}

fn describe_fan(r: &mut Report, fan: &ResolutionFan, crepant: &CrepancyWitness, smooth: &SmoothnessWitness) {
    r.line(format!("fan: {} rays, {} cones", fan.rays.len(), fan.num_cones()));
    if fan.num_cones() <= LIST_LIMIT {
        let rays: Vec<String> = fan.rays.iter().enumerate().map(|(i, v)| format!("r{i} {v}")).collect();
        r.block("rays", &rays.join("\n"));
        let cones: Vec<String> = fan
            .cones
            .iter()
            .map(|c| format!("[{}]", c.iter().map(|i| format!("r{i}")).collect::<Vec<_>>().join(" ")))
            .collect();
        r.block("cones", &cones.join("\n"));
    }
    let d = fan.lattice.dim();
    let exceptional: Vec<&RationalVector> = fan
        .rays
        .iter()
        .filter(|v| !(0..d).any(|i| **v == RationalVector::unit(d, i)))
        .collect();
    r.line(format!("exceptional divisors: {}", exceptional.len()));
    if exceptional.len() <= LIST_LIMIT {
        for v in &exceptional {
            r.line(format!("  {v}"));
        }
    }
    r.line(format!("crepant: {}", verdict(crepant.ok)));
    r.line(format!(
        "smooth: {} (max multiplicity {})",
        verdict(smooth.ok),
        smooth.max_multiplicity
    ));
    r.put("fan", fan);
    r.put("exceptional_divisors", &exceptional);
    r.put("crepant", crepant);
    r.put("smooth", smooth);
    r.negative |= !(crepant.ok && smooth.ok);
}

fn describe_group(r: &mut Report, g: &GroupLattice) -> Result<(), Failure> {
    if g.order > GROUP_TABLE_LIMIT {
        r.line(format!("group table omitted (|G| = {} > {GROUP_TABLE_LIMIT})", g.order));
        return Ok(());
    }
    let elements = g.enumerate()?;
    let rows: Vec<String> = elements.iter().map(|e| e.to_string()).collect();
    r.block(&format!("group elements (|G| = {})", g.order), &rows.join("\n"));
    r.put("group", &elements);
    Ok(())
}

pub fn resolve(opts: &Common) -> Result<Report, Failure> {
    let source = load(opts)?;
    let mut r = Report::default();
    match &source {
        Source::Datum { original, canonical } => {
            describe_datum(&mut r, original, canonical)?;
            let res = pipeline::resolve(&canonical.datum)?;
            describe_group(&mut r, &GroupLattice::from_datum(&canonical.datum)?)?;
            describe_fan(&mut r, &res.fan, &res.crepant, &res.smooth);
            r.line(format!(
                "certificate overall: {}",
                verdict(res.triangulation.certificate().overall)
            ));
            r.negative |= !res.triangulation.certificate().overall;
        }
        Source::Lattice(g) => {
            describe_lattice(&mut r, g);
            describe_group(&mut r, g)?;
            let chart = JuniorChart::new(g.clone())?;
            let t = triangulate_junior(&chart)?;
            let fan = build_fan_in_chart(&chart, &t)?;
            describe_fan(&mut r, &fan, &check_crepant(&fan), &check_smooth(&fan));
            let c = t.certificate();
            r.line(format!(
                "triangulation basic: {}, coherent: {}",
                verdict(c.basic.ok),
                verdict(c.coherent.ok)
            ));
            r.negative |= !(c.basic.ok && c.coherent.ok);
        }
    }
    Ok(r)
}

fn betti(r: &mut Report, delta: &[u64]) {
    let rows: Vec<String> = delta
        .iter()
        .enumerate()
        .map(|(i, x)| format!("dim H^{} = {x}", 2 * i))
        .collect();
    r.block("Betti numbers", &rows.join("\n"));
    r.line(format!("Euler characteristic: {}", delta.iter().sum::<u64>()));
}

pub fn cohomology(opts: &Common) -> Result<Report, Failure> {
    let source = load(opts)?;
    let mut r = Report::default();
    match &source {
        Source::Datum { original, canonical } => {
            describe_datum(&mut r, original, canonical)?;
            let c = cohomology_dims(&canonical.datum)?;
            let a: Vec<String> = c.a.iter().map(fmt_rational).collect();
            r.line(format!("a-vector: ({})", a.join(", ")));
            let routes: Vec<String> = c
                .routes
                .iter()
                .map(|x| format!("{:<12} {:?}", x.route.to_string(), x.delta))
                .collect();
            r.block("δ-vector routes", &routes.join("\n"));
            for (route, why) in &c.skipped {
                r.line(format!("  skipped {route}: {why}"));
            }
            betti(&mut r, &c.dims);
            r.put("cohomology", &c);
        }
        Source::Lattice(g) => {
            describe_lattice(&mut r, g);
            let d = g.d();
            let vertices: Vec<RationalVector> = (0..d).map(|i| RationalVector::unit(d, i)).collect();
            let ehr = ehrhart_bruteforce(&vertices, &g.basis)?;
            let chart = JuniorChart::new(g.clone())?;
            let t = triangulate_junior(&chart)?;
            let mut routes = vec![(Route::BruteForce, ehr.delta.clone())];
            if t.certificate().basic.ok {
                routes.push((Route::HVector, h_vector(&t)?));
            } else {
                r.line("  skipped h-vector: triangulation is not basic");
            }
            if routes.iter().any(|(_, v)| *v != ehr.delta) {
                return Err(Failure::Internal(format!("δ-vector routes disagree: {routes:?}")));
            }
            let rows: Vec<String> = routes
                .iter()
                .map(|(k, v)| format!("{:<12} {v:?}", k.to_string()))
                .collect();
            r.block("δ-vector routes", &rows.join("\n"));
            let mut dims = ehr.delta.clone();
            dims.truncate(d);
            betti(&mut r, &dims);
            r.put("ehrhart", &ehr);
            r.put(
                "routes",
                routes
                    .iter()
                    .map(|(k, v)| json!({"route": k, "delta": v}))
                    .collect::<Vec<_>>(),
            );
            r.put("dims", &dims);
        }
    }
    Ok(r)
}

pub fn export(opts: &Common) -> Result<Report, Failure> {
    let source = load(opts)?;
    let (t, _) = triangulation_of(&source)?;
    let mut r = Report::default();
    if opts.export.is_some() {
        write_export(&mut r, opts, &t)?;
        r.put("triangulation", t.to_view());
        return Ok(r);
    }
    match opts.format {
        Format::Text => {
            if t.dim() > 3 {
                return Err(Failure::Usage(format!(
                    "OFF export needs dimension at most 3, not {}",
                    t.dim()
                )));
            }
            r.text = write_off(&t)?;
            r.raw = true;
        }
        Format::Structured => r.put("triangulation", t.to_view()),
    }
    Ok(r)
}
