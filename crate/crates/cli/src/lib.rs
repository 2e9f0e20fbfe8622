//! Command-line harness for `quadsg`: instance files in, canonical JSON
//! reports out.
//!
//! Exit codes: 0 completed, 1 `--expect` mismatch, 2 bad input or violated
//! precondition, 3 a certificate failed its own re-verification.

pub mod fixtures;
pub mod instance;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use quadsg::configurations::{
    self, certify_ek_span, check_delta_ek, check_delta_sg, check_ek, check_quadratic_ek, check_quadratic_sg, EkOptions,
    PairOutcome, PointRef, PointSet, QuadSetReport, Regime,
};
use quadsg::membership::NonMemberEvidence;
use quadsg::quadratic::quad_resultant;
use quadsg::structure::{gen_case, Plant};
use quadsg::univariate::uni_resultant;
use quadsg::{
    classify, radical_member, Budget, Case3Search, CaseWitness, LinearForm, MembershipVerdict, MultiPoly, PencilSquare,
    QuadraticForm, Scalar, ScalarPoly,
};
use serde_json::{json, Map, Value};

use instance::{rational_value, render, scalar_value, Instance, InstanceError, PointSetDoc};

#[derive(Parser, Debug)]
#[command(name = "quadsg", version, about = "Exact radical membership, structure classification and SG/EK checks")]
pub struct Cli {
    /// Seed for every randomized step (default: the instance's seed, else 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Largest power tried by the membership prover.
    #[arg(long, global = true)]
    pub kmax: Option<u32>,
    /// Number of random planes tried by the membership falsifier.
    #[arg(long, global = true)]
    pub planes: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Include wall-clock time in the report (breaks byte-determinism).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Exit with status 1 unless the report's verdict matches.
    #[arg(long, global = true)]
    pub expect: Option<String>,
    /// List the shipped fixtures.
    #[arg(long)]
    pub fixtures: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether Q lies in the radical of (Q1, Q2).
    Member {
        /// Polynomial name, or a `*`-separated product of names.
        #[arg(long)]
        q: String,
        #[arg(long, value_delimiter = ',')]
        gens: Vec<String>,
        file: String,
    },
    /// Find structure witnesses for a triple of quadratics.
    Classify {
        #[arg(long)]
        q: String,
        #[arg(long, value_delimiter = ',')]
        gens: Vec<String>,
        file: String,
    },
    /// Robust Sylvester-Gallai check of one point set.
    CheckSg {
        #[arg(long, default_value_t = 0)]
        set: usize,
        file: String,
    },
    /// Edelstein-Kelly check of the first three point sets.
    CheckEk { file: String },
    /// Quadratic Sylvester-Gallai hypothesis over a list of forms.
    CheckQsg {
        /// Forms to use (default: every polynomial in the file).
        #[arg(long, value_delimiter = ',')]
        forms: Vec<String>,
        file: String,
    },
    /// Colored quadratic hypothesis over the file's colored sets.
    CheckQek { file: String },
    /// Certify the span dimension of a δ-EK configuration.
    CertifyEk {
        /// δ as `p/q` (default: the file's delta, else the exact EK fraction).
        #[arg(long)]
        delta: Option<String>,
        file: String,
    },
    /// Sylvester resultant of two polynomials in one variable.
    Resultant {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        /// Variable name or index.
        #[arg(long)]
        var: String,
        /// Treat both as formal quadratics in the variable.
        #[arg(long)]
        quad: bool,
        file: String,
    },
    /// Generate an instance file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenKind {
    /// Triple `Q, Q1, Q2` planted in case 1, 2 or 3 of the structure theorem.
    Case {
        #[arg(long)]
        case: u8,
        #[arg(long, default_value_t = 4)]
        nvars: usize,
    },
    /// Colored point sets on planes of a 4-dimensional subspace.
    PlantedEk {
        #[arg(long, value_delimiter = ',', default_values_t = [1000, 100, 100])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        planes: usize,
        #[arg(long, default_value_t = 20)]
        n: usize,
    },
    /// Points on three concurrent lines of the plane.
    ThreeLines {
        #[arg(long, default_value_t = 20)]
        per_line: usize,
    },
    /// Squares of the twelve lines x - ζy, y - ζz, z - ζx with ζ⁴ = 1.
    FermatSquares,
    /// Colored quadratic family closed under cross spans.
    Colored {
        #[arg(long, default_value_t = 4)]
        nvars: usize,
    },
    /// Pencil family F_i = Q1 + ℓ_i² = β_i Q2 + b_i².
    Pencil {
        #[arg(long, default_value_t = 4)]
        nvars: usize,
        #[arg(long, default_value_t = 3)]
        scalings: usize,
    },
}

#[derive(Debug)]
pub enum Failure {
    /// Malformed input or violated precondition.
    Input(String),
    /// A certificate did not survive re-verification.
    Soundness(String),
}

impl From<InstanceError> for Failure {
    fn from(e: InstanceError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<quadsg::Error> for Failure {
    fn from(e: quadsg::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Result<T> = std::result::Result<T, Failure>;

/// Result of one invocation: the report text (if any), diagnostics and the
/// exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: Option<String>,
    pub error: Option<String>,
    /// Destination for `output` (stdout when absent).
    pub out: Option<PathBuf>,
}

pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => Outcome { out: cli.out.clone(), ..run(&cli) },
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome { code, output: Some(text), error: None, out: None }
            } else {
                Outcome { code, output: None, error: Some(text), out: None }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    if cli.fixtures {
        let list: Vec<Value> = fixtures::FIXTURES
            .iter()
            .map(|f| json!({ "name": format!("fixture:{}", f.name), "description": f.description }))
            .collect();
        return Outcome { code: 0, output: Some(render(&json!({ "fixtures": list }))), error: None, out: None };
    }
    let Some(cmd) = &cli.command else {
        return Outcome { code: 2, output: None, error: Some("no command given; see --help".into()), out: None };
    };
    let start = Instant::now();
    match execute(cli, cmd) {
        Ok(Report { mut doc, verdict, labels }) => {
            if cli.timing {
                if let Value::Object(o) = &mut doc {
                    o.insert("timing_ms".into(), json!(start.elapsed().as_millis() as u64));
                }
            }
            let text = render(&doc);
            match &cli.expect {
                Some(want) if !expect_matches(want, &verdict, &labels) => Outcome {
                    code: 1,
                    output: Some(text),
                    error: Some(format!("expected `{want}`, got `{verdict}`")),
                    out: None,
                },
                _ => Outcome { code: 0, output: Some(text), error: None, out: None },
            }
        }
        Err(Failure::Input(m)) => Outcome { code: 2, output: None, error: Some(m), out: None },
        Err(Failure::Soundness(m)) => {
            Outcome { code: 3, output: None, error: Some(format!("soundness check failed: {m}")), out: None }
        }
    }
}

fn normalize(s: &str) -> String {
    s.chars().filter(|c| !matches!(c, '-' | '_' | ' ')).flat_map(char::to_lowercase).collect()
}

fn expect_matches(want: &str, verdict: &str, labels: &[String]) -> bool {
    let w = normalize(want);
    w == normalize(verdict) || labels.iter().any(|l| normalize(l) == w)
}

struct Report {
    doc: Value,
    verdict: String,
    labels: Vec<String>,
}

fn load(file: &str) -> Result<Instance> {
    let text = if let Some(name) = file.strip_prefix("fixture:") {
        fixtures::get(name).ok_or_else(|| Failure::Input(format!("unknown fixture `{name}`")))?.text.to_string()
    } else if file == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::Input(format!("stdin: {e}")))?
    } else {
        std::fs::read_to_string(file).map_err(|e| Failure::Input(format!("{file}: {e}")))?
    };
    Ok(instance::parse_str(&text)?)
}

struct Ctx<'a> {
    seed: u64,
    budget: Budget,
    input: &'a str,
}

fn context<'a>(cli: &Cli, inst: &Instance, input: &'a str) -> Ctx<'a> {
    let d = Budget::default();
    Ctx {
        seed: cli.seed.or(inst.seed).unwrap_or(0),
        budget: Budget {
            kmax: cli.kmax.or(inst.budget.kmax).unwrap_or(d.kmax),
            planes: cli.planes.or(inst.budget.planes).unwrap_or(d.planes),
        },
        input,
    }
}

fn envelope(cmd: &str, ctx: &Ctx, verdict: &str, result: Value) -> Value {
    json!({
        "command": cmd,
        "input": ctx.input,
        "seed": ctx.seed,
        "budget": { "kmax": ctx.budget.kmax, "planes": ctx.budget.planes },
        "verdict": verdict,
        "result": result,
    })
}

fn execute(cli: &Cli, cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Member { q, gens, file } => member(cli, q, gens, file),
        Command::Classify { q, gens, file } => classify_cmd(cli, q, gens, file),
        Command::CheckSg { set, file } => check_sg(cli, *set, file),
        Command::CheckEk { file } => check_ek_cmd(cli, file),
        Command::CheckQsg { forms, file } => check_qsg(cli, forms, file),
        Command::CheckQek { file } => check_qek(cli, file),
        Command::CertifyEk { delta, file } => certify(cli, delta.as_deref(), file),
        Command::Resultant { f, g, var, quad, file } => resultant(cli, f, g, var, *quad, file),
        Command::Gen { kind } => gen(cli, kind),
    }
}

fn poly_text(p: &MultiPoly, inst: &Instance) -> Value {
    Value::String(p.display_with(&inst.names()))
}

fn linear_text(l: &LinearForm, inst: &Instance) -> Value {
    poly_text(&l.to_poly(), inst)
}

fn upoly_value(p: &ScalarPoly) -> Value {
    Value::Array(p.coeffs().iter().map(scalar_value).collect())
}

fn vector_value(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar_value).collect())
}

fn generators(inst: &Instance, gens: &[String]) -> Result<(QuadraticForm, QuadraticForm)> {
    match gens {
        [a, b] => Ok((inst.quadratic(a)?, inst.quadratic(b)?)),
        _ => Err(Failure::Input(format!("--gens needs exactly two names, got {}", gens.len()))),
    }
}

fn member(cli: &Cli, q: &str, gens: &[String], file: &str) -> Result<Report> {
    let inst = load(file)?;
    let ctx = context(cli, &inst, file);
    let qp = inst.product(q)?;
    let (q1, q2) = generators(&inst, gens)?;
    let v = radical_member(&qp, &q1, &q2, ctx.budget, ctx.seed)?;
    if !v.verify(&qp, &q1, &q2) {
        return Err(Failure::Soundness(format!("{} certificate for `{q}` does not re-verify", v.label())));
    }
    let mut r = Map::new();
    r.insert("q".into(), json!(q));
    r.insert("gens".into(), json!(gens));
    match &v {
        MembershipVerdict::Member { k, cofactor_a, cofactor_b } => {
            r.insert("k".into(), json!(k));
            r.insert("cofactor_a".into(), poly_text(cofactor_a, &inst));
            r.insert("cofactor_b".into(), poly_text(cofactor_b, &inst));
        }
        MembershipVerdict::NonMember(NonMemberEvidence::CommonZero { point }) => {
            r.insert("evidence".into(), json!({ "kind": "common_zero", "point": vector_value(point) }));
        }
        MembershipVerdict::NonMember(NonMemberEvidence::Plane { plane, plane_index, factor, r12, r1q }) => {
            r.insert(
                "evidence".into(),
                json!({
                    "kind": "plane",
                    "plane_index": plane_index,
                    "p0": vector_value(&plane.p0),
                    "u": vector_value(&plane.u),
                    "v": vector_value(&plane.v),
                    "factor": upoly_value(factor),
                    "r12": upoly_value(r12),
                    "r1q": upoly_value(r1q),
                }),
            );
        }
        MembershipVerdict::Unknown { kmax, planes_tried } => {
            r.insert("kmax".into(), json!(kmax));
            r.insert("planes_tried".into(), json!(planes_tried));
        }
    }
    r.insert("certificate_verified".into(), json!(true));
    let verdict = v.label().to_string();
    Ok(Report { doc: envelope("member", &ctx, &verdict, Value::Object(r)), verdict, labels: Vec::new() })
}

fn witness_value(w: &CaseWitness, inst: &Instance) -> Value {
    match w {
        CaseWitness::Span { alpha, beta } => {
            json!({ "case": "Span", "alpha": scalar_value(alpha), "beta": scalar_value(beta) })
        }
        CaseWitness::PencilSquare(PencilSquare::Explicit { alpha, beta, c, l }) => json!({
            "case": "PencilSquare",
            "alpha": scalar_value(alpha),
            "beta": scalar_value(beta),
            "c": scalar_value(c),
            "l": linear_text(l, inst),
        }),
        CaseWitness::PencilSquare(PencilSquare::Algebraic { poly }) => {
            json!({ "case": "PencilSquare", "algebraic": upoly_value(poly) })
        }
        CaseWitness::Codim2 { l1, l2 } => {
            json!({ "case": "Codim2", "l1": linear_text(l1, inst), "l2": linear_text(l2, inst) })
        }
    }
}

fn classify_cmd(cli: &Cli, q: &str, gens: &[String], file: &str) -> Result<Report> {
    let inst = load(file)?;
    let ctx = context(cli, &inst, file);
    let qf = inst.quadratic(q)?;
    let (q1, q2) = generators(&inst, gens)?;
    let c = classify(&qf, &q1, &q2, ctx.budget, ctx.seed)?;
    if let Some(w) = c.witnesses.iter().find(|w| !w.verify(&qf, &q1, &q2)) {
        return Err(Failure::Soundness(format!("{} witness does not re-verify", w.label())));
    }
    let case3 = match &c.case3 {
        Case3Search::Found(..) => "Found".to_string(),
        Case3Search::NotFound => "NotFound".to_string(),
        Case3Search::Unknown(why) => format!("Unknown: {why}"),
    };
    let labels: Vec<String> = c.labels().iter().map(|s| s.to_string()).collect();
    let verdict = if labels.is_empty() { "None".to_string() } else { labels.join("+") };
    let result = json!({
        "q": q,
        "gens": gens,
        "witnesses": c.witnesses.iter().map(|w| witness_value(w, &inst)).collect::<Vec<_>>(),
        "case3_search": case3,
        "incomplete": c.incomplete,
    });
    Ok(Report { doc: envelope("classify", &ctx, &verdict, result), verdict, labels })
}

fn point_set(inst: &Instance, i: usize) -> Result<PointSet> {
    let doc: &PointSetDoc =
        inst.point_sets.get(i).ok_or_else(|| Failure::Input(format!("the instance has no point_sets[{i}]")))?;
    PointSet::new(doc.points.clone(), doc.color).map_err(|e| Failure::Input(format!("point_sets[{i}]: {e}")))
}

fn three_sets(inst: &Instance) -> Result<[PointSet; 3]> {
    Ok([point_set(inst, 0)?, point_set(inst, 1)?, point_set(inst, 2)?])
}

fn check_sg(cli: &Cli, set: usize, file: &str) -> Result<Report> {
    let inst = load(file)?;
    let ctx = context(cli, &inst, file);
    let ps = point_set(&inst, set)?;
    let r = check_delta_sg(&ps)?;
    let bound = r.delta_hat > BigRational::from_integer(0.into())
        && BigRational::from_integer(r.dim.into()) * &r.delta_hat <= BigRational::from_integer(12.into());
    let verdict = Scalar::format_rational(&r.delta_hat);
    let result = json!({
        "points": ps.len(),
        "delta_hat": rational_value(&r.delta_hat),
        "dim": r.dim,
        "dim_bound_12_over_delta": bound,
        "counts": r.counts,
        "witness_triples": r.witness_triples.iter().map(|&(i, j, k)| json!([i, j, k])).collect::<Vec<_>>(),
    });
    Ok(Report { doc: envelope("check-sg", &ctx, &verdict, result), verdict, labels: Vec::new() })
}

fn check_ek_cmd(cli: &Cli, file: &str) -> Result<Report> {
    let inst = load(file)?;
    let ctx = context(cli, &inst, file);
    let sets = three_sets(&inst)?;
    let t = [&sets[0], &sets[1], &sets[2]];
    let c = check_ek(t)?;
    let delta = check_delta_ek(t)?;
    let verdict = if c.holds { "holds" } else { "fails" }.to_string();
    let result = json!({
        "holds": c.holds,
        "dim": c.dim,
        "delta_hat": rational_value(&delta),
        "missing": c.missing.map(|(a, b)| json!([[a.0, a.1], [b.0, b.1]])),
    });
    Ok(Report { doc: envelope("check-ek", &ctx, &verdict, result), verdict, labels: Vec::new() })
}

fn quad_report(
    r: &QuadSetReport,
    name: impl Fn((usize, usize)) -> String,
    witness_name: impl Fn(&PairOutcome, usize) -> String,
) -> (String, Value) {
    let verdict = if r.hypothesis_holds {
        "holds"
    } else if r.missing_pairs.is_empty() {
        "undetermined"
    } else {
        "fails"
    };
    let pairs: Vec<Value> = r
        .pairs
        .iter()
        .map(|p| {
            json!({
                "a": name(p.a),
                "b": name(p.b),
                "witness": p.witness.map(|k| witness_name(p, k)),
                "power": p.power,
                "undetermined": p.undetermined.iter().map(|&k| witness_name(p, k)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let pair_names =
        |ps: &[(PointRef, PointRef)]| -> Vec<Value> { ps.iter().map(|&(a, b)| json!([name(a), name(b)])).collect() };
    let c = &r.case_census;
    let result = json!({
        "hypothesis_holds": r.hypothesis_holds,
        "span_dim": r.span_dim,
        "set_span_dims": r.set_span_dims,
        "missing_pairs": pair_names(&r.missing_pairs),
        "undetermined_pairs": pair_names(&r.undetermined_pairs),
        "case_census": { "span": c.span, "pencil_square": c.pencil_square, "codim2": c.codim2, "unknown": c.unknown },
        "pairs": pairs,
    });
    (verdict.to_string(), result)
}

fn check_qsg(cli: &Cli, forms: &[String], file: &str) -> Result<Report> {
    let inst = load(file)?;
    let ctx = context(cli, &inst, file);
    let names: Vec<String> =
        if forms.is_empty() { inst.polynomials.iter().map(|p| p.name.clone()).collect() } else { forms.to_vec() };
    let qs = names.iter().map(|n| inst.quadratic(n)).collect::<std::result::Result<Vec<_>, _>>()?;
    let r = check_quadratic_sg(&qs, ctx.budget, ctx.seed)?;
    let (verdict, result) = quad_report(&r, |(_, i)| names[i].clone(), |_, k| names[k].clone());
    Ok(Report { doc: envelope("check-qsg", &ctx, &verdict, result), verdict, labels: Vec::new() })
}

fn check_qek(cli: &Cli, file: &str) -> Result<Report> {
    let inst = load(file)?;
    let ctx = context(cli, &inst, file);
    let sets = inst.colored_sets.clone().ok_or_else(|| Failure::Input("the instance has no colored_sets".into()))?;
    let forms: Vec<Vec<QuadraticForm>> = sets
        .iter()
        .map(|s| s.iter().map(|n| inst.quadratic(n)).collect::<std::result::Result<Vec<_>, _>>())
        .collect::<std::result::Result<_, _>>()?;
    let r = check_quadratic_ek([&forms[0], &forms[1], &forms[2]], ctx.budget, ctx.seed)?;
    let (verdict, result) = quad_report(&r, |(s, i)| sets[s][i].clone(), |p, k| sets[3 - p.a.0 - p.b.0][k].clone());
    Ok(Report { doc: envelope("check-qek", &ctx, &verdict, result), verdict, labels: Vec::new() })
}

fn certify(cli: &Cli, delta: Option<&str>, file: &str) -> Result<Report> {
    let inst = load(file)?;
    let ctx = context(cli, &inst, file);
    let sets = three_sets(&inst)?;
    let t = [&sets[0], &sets[1], &sets[2]];
    let delta = match delta {
        Some(d) => Scalar::parse_rational(d).map_err(|e| Failure::Input(format!("--delta: {e}")))?,
        None => match &inst.delta {
            Some(d) => d.clone(),
            None => check_delta_ek(t)?,
        },
    };
    let cert = certify_ek_span(t, &delta, ctx.seed, None, &[], &EkOptions::default())?;
    if !cert.verified {
        return Err(Failure::Soundness("the EK certificate does not span the configuration".into()));
    }
    let result = json!({
        "delta": rational_value(&delta),
        "constant": configurations::EK_CONSTANT,
        "regime": match cert.regime { Regime::Balanced => "balanced", Regime::Unbalanced => "unbalanced" },
        "spanning_set": cert.spanning_set.iter().map(|&(s, i)| json!([s, i])).collect::<Vec<_>>(),
        "size": cert.spanning_set.len(),
        "size_bound_claimed": cert.size_bound_claimed,
        "within_bound": cert.spanning_set.len() as u64 <= cert.size_bound_claimed,
        "fallback_extensions": cert.fallback_extensions,
        "steps": cert.steps,
        "span_dim": cert.span_dim,
        "verification": "ok",
    });
    let verdict = "ok".to_string();
    Ok(Report { doc: envelope("certify-ek", &ctx, &verdict, result), verdict, labels: Vec::new() })
}

fn resultant(cli: &Cli, f: &str, g: &str, var: &str, quad: bool, file: &str) -> Result<Report> {
    let inst = load(file)?;
    let ctx = context(cli, &inst, file);
    let names = inst.names();
    let v = match names.iter().position(|n| n == var) {
        Some(i) => i,
        None => var.parse::<usize>().ok().filter(|&i| i < inst.nvars).ok_or_else(|| {
            Failure::Input(format!("--var `{var}` is neither a variable name nor an index below {}", inst.nvars))
        })?,
    };
    let (fp, gp) = (inst.product(f)?, inst.product(g)?);
    let r = if quad { quad_resultant(&fp, &gp, v)? } else { uni_resultant(&fp, &gp, v)? };
    let verdict = if r.is_zero() { "zero" } else { "nonzero" }.to_string();
    let result = json!({
        "f": f,
        "g": g,
        "var": names[v],
        "formal_quadratic": quad,
        "resultant": poly_text(&r, &inst),
        "terms": instance::poly_terms(&r),
    });
    Ok(Report { doc: envelope("resultant", &ctx, &verdict, result), verdict, labels: Vec::new() })
}

fn gen(cli: &Cli, kind: &GenKind) -> Result<Report> {
    let seed = cli.seed.unwrap_or(0);
    let quads = |n: usize, forms: Vec<(String, &QuadraticForm)>| {
        let mut inst = Instance::new(n);
        for (name, q) in forms {
            inst.push(name, q.to_poly());
        }
        inst
    };
    let (mut inst, verdict) = match kind {
        GenKind::Case { case, nvars } => {
            let c = gen_case(*case, *nvars, seed)?;
            let inst = quads(*nvars, vec![("Q".into(), &c.q), ("Q1".into(), &c.q1), ("Q2".into(), &c.q2)]);
            let label = match c.plant {
                Plant::Span { .. } => "Span",
                Plant::Pencil { .. } => "PencilSquare",
                Plant::Codim2 { .. } => "Codim2",
            };
            (inst, label.to_string())
        }
        GenKind::PlantedEk { sizes, planes, n } => {
            let sizes: [usize; 3] =
                sizes.clone().try_into().map_err(|_| Failure::Input("--sizes needs three values".into()))?;
            let p = configurations::planted_ek(sizes, *planes, *n, seed)?;
            let mut inst = Instance::new(*n);
            for s in &p.sets {
                inst.point_sets.push(PointSetDoc { color: s.color(), points: s.points().to_vec() });
            }
            inst.delta = Some(p.delta);
            (inst, "planted-ek".to_string())
        }
        GenKind::ThreeLines { per_line } => {
            let ps = configurations::three_line_family(*per_line);
            let mut inst = Instance::new(3);
            inst.point_sets.push(PointSetDoc { color: None, points: ps.points().to_vec() });
            (inst, "three-lines".to_string())
        }
        GenKind::FermatSquares => {
            let sq: Vec<QuadraticForm> = configurations::fermat_lines().iter().map(QuadraticForm::square).collect();
            let inst = quads(3, sq.iter().enumerate().map(|(i, q)| (format!("L{i}"), q)).collect());
            (inst, "fermat-squares".to_string())
        }
        GenKind::Colored { nvars } => {
            let sets = configurations::colored_quadratic_family(*nvars, seed)?;
            let mut forms = Vec::new();
            let mut names: Vec<Vec<String>> = Vec::new();
            for (s, set) in sets.iter().enumerate() {
                let ns: Vec<String> = (0..set.len()).map(|i| format!("T{}_{i}", s + 1)).collect();
                forms.extend(ns.iter().cloned().zip(set.iter()));
                names.push(ns);
            }
            let mut inst = quads(*nvars, forms);
            inst.colored_sets = Some(names.try_into().unwrap());
            (inst, "colored".to_string())
        }
        GenKind::Pencil { nvars, scalings } => {
            let f = configurations::gen_pencil_family(*nvars, *scalings, seed)?;
            let mut forms = vec![("Q1".to_string(), &f.q1), ("Q2".to_string(), &f.q2)];
            forms.extend(f.members.iter().enumerate().map(|(i, m)| (format!("F{i}"), m)));
            (quads(*nvars, forms), "pencil".to_string())
        }
    };
    inst.seed = Some(seed);
    let doc = instance::to_value(&inst);
    Ok(Report { doc, verdict, labels: Vec::new() })
}
