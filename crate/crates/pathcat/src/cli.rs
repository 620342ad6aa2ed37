//! Command-line entry point: parsers, analyses, and emitters wired together
//! with deterministic text and machine-readable outputs.
//!
//! Exit codes: 0 success, 1 property violation, 2 input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::amalgam::{amalgamate, bound_sensitive_pairs};
use crate::analysis;
use crate::boolring::{self, ExtendOutcome, FiniteRing};
use crate::boundary;
use crate::cat::{check_finitely_aligned, min_common_extensions, PathCategory};
use crate::degree;
use crate::error::CatError;
use crate::groupoid::{build_groupoid, GroupoidElement};
use crate::io::{self, LoadError};
use crate::repemit::{build_matrix_rep, emit_relations, verify_relations, Flavor};
use crate::zigzag::{domain, eval as zigzag_eval, reduce_to_shift_pairs, Zigzag};

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum FlavorArg {
    Toeplitz,
    Ck,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Flavor {
        match f {
            FlavorArg::Toeplitz => Flavor::Toeplitz,
            FlavorArg::Ck => Flavor::Ck,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "pathcat", about = "Combinatorics of categories of paths", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Re-run brute-force cross-checks and fail loudly on disagreement.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the axioms of a category of paths.
    Validate { input: PathBuf },
    /// Minimal common extensions for every pair (or one pair).
    Align {
        input: PathBuf,
        /// Restrict to one pair, as `alpha,beta`.
        #[arg(long)]
        pair: Option<String>,
    },
    /// Evaluate and reduce a zigzag, given as `a1,b1;a2,b2;...`.
    Zigzag {
        input: PathBuf,
        #[arg(long)]
        zz: String,
        /// Also apply the zigzag map to this path.
        #[arg(long)]
        eval: Option<String>,
    },
    /// Atoms and cardinality of the ring 𝒜_v per vertex.
    Ring {
        input: PathBuf,
        #[arg(long)]
        vertex: Option<String>,
    },
    /// Check a generator assignment against the extension theorem.
    HomCheck {
        input: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
    },
    /// Λ*, Λ**, and ∂Λ per vertex.
    Boundary { input: PathBuf },
    /// Minimal finite exhaustive sets per vertex.
    Fe {
        input: PathBuf,
        #[arg(long)]
        vertex: Option<String>,
    },
    /// Elements, orbits, isotropy, and the cocycle table of G(Λ).
    Groupoid {
        input: PathBuf,
        /// Restrict the unit space to ∂Λ.
        #[arg(long)]
        boundary: bool,
        /// Degree functor file for the cocycle table.
        #[arg(long)]
        psi: Option<PathBuf>,
    },
    /// H(Λ), the θ-table, and degree-functor check verdicts.
    Degree {
        input: PathBuf,
        #[arg(long)]
        psi: Option<PathBuf>,
    },
    /// The structural report with its groupoid cross-checks.
    Analyze { input: PathBuf },
    /// Build an amalgamation ball (and the exact category when finite).
    Amalgamate {
        input: PathBuf,
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Emit a Toeplitz or Cuntz-Krieger relation document.
    Emit {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "toeplitz")]
        flavor: FlavorArg,
    },
    /// Build the matrix representation and verify every relation.
    Verify {
        input: PathBuf,
        #[arg(long, value_enum)]
        flavor: Option<FlavorArg>,
    },
}

/// Outcome of one run: exit status plus the rendered report.
pub struct RunOutput {
    pub status: u8,
    pub report: String,
}

enum RunError {
    Input(String),
    Violation(String),
}

impl From<LoadError> for RunError {
    fn from(e: LoadError) -> Self {
        RunError::Input(e.to_string())
    }
}

impl From<CatError> for RunError {
    fn from(e: CatError) -> Self {
        RunError::Input(e.to_string())
    }
}

pub fn main() -> ExitCode {
    let config = RunConfig::parse();
    let out = run(&config);
    let (code, text) = (out.status, out.report);
    match &config.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}

pub fn run(config: &RunConfig) -> RunOutput {
    match dispatch(config) {
        Ok(report) => RunOutput { status: 0, report },
        Err(RunError::Violation(report)) => RunOutput { status: 1, report },
        Err(RunError::Input(message)) => {
            RunOutput { status: 2, report: format!("error: {message}\n") }
        }
    }
}

fn render(format: Format, machine: Value, text: String) -> String {
    match format {
        Format::Text => text,
        Format::Machine => format!("{machine}\n"),
    }
}

fn load(input: &PathBuf) -> Result<PathCategory, RunError> {
    let cat = io::load_category(input)?;
    let report = cat.validate();
    if report.has_kind("empty") {
        return Err(RunError::Input("degenerate input: category has no vertices".into()));
    }
    if !report.is_valid() {
        return Err(RunError::Violation(format!(
            "input is not a category of paths:\n{}",
            report.render(&cat)
        )));
    }
    Ok(cat)
}

fn by_name(cat: &PathCategory, name: &str) -> Result<crate::cat::PathId, RunError> {
    cat.by_name(name)
        .ok_or_else(|| RunError::Input(format!("unknown morphism {name}")))
}

fn dispatch(config: &RunConfig) -> Result<String, RunError> {
    match &config.command {
        Command::Validate { input } => {
            let cat = io::load_category(input)?;
            let report = cat.validate();
            if report.has_kind("empty") {
                return Err(RunError::Input("degenerate input: category has no vertices".into()));
            }
            if report.is_valid() {
                Ok(render(
                    config.format,
                    json!({"valid": true, "morphisms": cat.len(), "vertices": cat.vertex_count()}),
                    format!("valid category of paths: {cat}\n"),
                ))
            } else {
                Err(RunError::Violation(render(
                    config.format,
                    json!({
                        "valid": false,
                        "violations": report
                            .violations
                            .iter()
                            .map(|v| v.kind())
                            .collect::<Vec<_>>(),
                    }),
                    report.render(&cat),
                )))
            }
        }
        Command::Align { input, pair } => {
            let cat = load(input)?;
            let mut pairs = Vec::new();
            match pair {
                Some(p) => {
                    let (a, b) = p
                        .split_once(',')
                        .ok_or_else(|| RunError::Input("pair must be alpha,beta".into()))?;
                    pairs.push((by_name(&cat, a.trim())?, by_name(&cat, b.trim())?));
                }
                None => {
                    for a in cat.morphisms() {
                        for b in cat.morphisms() {
                            if a <= b && cat.rng(a) == cat.rng(b) {
                                pairs.push((a, b));
                            }
                        }
                    }
                }
            }
            let alignment = check_finitely_aligned(&cat);
            if config.oracle && !alignment.finitely_aligned {
                return Err(RunError::Violation("alignment identity failed\n".into()));
            }
            let mut text = String::new();
            let mut rows = Vec::new();
            for (a, b) in pairs {
                let vee = min_common_extensions(&cat, &[a, b]).map_err(RunError::from)?;
                let names: Vec<&str> = vee.iter().map(|&e| cat.name(e)).collect();
                text.push_str(&format!(
                    "{} v {} = {{{}}}\n",
                    cat.name(a),
                    cat.name(b),
                    names.join(", ")
                ));
                rows.push(json!({"alpha": cat.name(a), "beta": cat.name(b), "vee": names}));
            }
            text.push_str(&format!("finitely aligned: {}\n", alignment.finitely_aligned));
            Ok(render(
                config.format,
                json!({"finitely_aligned": alignment.finitely_aligned, "pairs": rows}),
                text,
            ))
        }
        Command::Zigzag { input, zz, eval } => {
            let cat = load(input)?;
            let mut pairs = Vec::new();
            for part in zz.split(';') {
                let (a, b) = part
                    .split_once(',')
                    .ok_or_else(|| RunError::Input("zigzag pairs are a,b;c,d;...".into()))?;
                pairs.push((by_name(&cat, a.trim())?, by_name(&cat, b.trim())?));
            }
            let z = Zigzag::new(&cat, pairs).map_err(RunError::from)?;
            let dom = domain(&cat, &z);
            let union = reduce_to_shift_pairs(&cat, &z);
            // The reduction must agree with direct evaluation everywhere.
            for &m in cat.paths_at(z.source(&cat)).members() {
                let direct = zigzag_eval(&cat, &z, m).map_err(RunError::from)?;
                if direct != union.eval(&cat, m) {
                    return Err(RunError::Violation(
                        "reduction disagrees with direct evaluation\n".into(),
                    ));
                }
            }
            let mut text = format!(
                "zigzag {} : {} -> {}\ndomain = {{{}}}\n",
                z.display(&cat),
                cat.name(z.source(&cat)),
                cat.name(z.range(&cat)),
                dom.members().iter().map(|&m| cat.name(m)).collect::<Vec<_>>().join(", ")
            );
            let terms: Vec<Value> = union
                .terms()
                .iter()
                .map(|&(g, d)| json!({"gamma": cat.name(g), "delta": cat.name(d)}))
                .collect();
            text.push_str(&format!(
                "reduction = {}\n",
                union
                    .terms()
                    .iter()
                    .map(|&(g, d)| format!("{}·σ^{}", cat.name(g), cat.name(d)))
                    .collect::<Vec<_>>()
                    .join(" ∪ ")
            ));
            let mut evaluated = Value::Null;
            if let Some(mu) = eval {
                let m = by_name(&cat, mu)?;
                let image = zigzag_eval(&cat, &z, m).map_err(RunError::from)?;
                text.push_str(&format!(
                    "eval({}) = {}\n",
                    mu,
                    image.map(|i| cat.name(i).to_string()).unwrap_or_else(|| "undefined".into())
                ));
                evaluated = image.map(|i| json!(cat.name(i))).unwrap_or(Value::Null);
            }
            Ok(render(
                config.format,
                json!({
                    "source": cat.name(z.source(&cat)),
                    "range": cat.name(z.range(&cat)),
                    "domain": dom.members().iter().map(|&m| cat.name(m)).collect::<Vec<_>>(),
                    "terms": terms,
                    "eval": evaluated,
                }),
                text,
            ))
        }
        Command::Ring { input, vertex } => {
            let cat = load(input)?;
            let vertices: Vec<_> = match vertex {
                Some(v) => vec![by_name(&cat, v)?],
                None => cat.vertices().collect(),
            };
            let mut text = String::new();
            let mut rows = Vec::new();
            for v in vertices {
                let ring = boolring::generate_ring(&cat, v).map_err(RunError::from)?;
                let atoms = boolring::atoms(&cat, v).map_err(RunError::from)?;
                if config.oracle {
                    let masks = boolring::ring_masks(&cat, v).map_err(RunError::from)?;
                    let oracle =
                        boolring::ring_closure_by_saturation(&cat, v).map_err(RunError::from)?;
                    if masks != oracle {
                        return Err(RunError::Violation(
                            "ring generation disagrees with the saturation closure\n".into(),
                        ));
                    }
                    let invariance =
                        boolring::check_shift_invariance(&cat).map_err(RunError::from)?;
                    if !invariance.is_empty() {
                        return Err(RunError::Violation("shift invariance failed\n".into()));
                    }
                }
                let atom_names: Vec<String> = atoms
                    .iter()
                    .map(|a| {
                        format!(
                            "{{{}}}",
                            a.members().iter().map(|&m| cat.name(m)).collect::<Vec<_>>().join(",")
                        )
                    })
                    .collect();
                text.push_str(&format!(
                    "A_{}: {} elements, atoms: {}\n",
                    cat.name(v),
                    ring.len(),
                    atom_names.join(" ")
                ));
                rows.push(json!({
                    "vertex": cat.name(v),
                    "cardinality": ring.len(),
                    "atoms": atom_names,
                }));
            }
            Ok(render(config.format, json!({"rings": rows}), text))
        }
        Command::HomCheck { input, assignment } => {
            let cat = load(input)?;
            let (vertex, target_size, assign) = io::load_assignment(assignment, &cat)?;
            let target = FiniteRing::power_set(target_size).map_err(RunError::from)?;
            let outcome = boolring::extend_homomorphism(&cat, vertex, target, assign.clone())
                .map_err(RunError::from)?;
            if config.oracle {
                let general = boolring::general_conditions_hold(&cat, vertex, &assign)
                    .map_err(RunError::from)?;
                let accepted = matches!(outcome, ExtendOutcome::Extended(_));
                if general != accepted {
                    return Err(RunError::Violation(
                        "general-form conditions disagree with condition (3)\n".into(),
                    ));
                }
            }
            match outcome {
                ExtendOutcome::Extended(_) => Ok(render(
                    config.format,
                    json!({"extends": true}),
                    "assignment extends to a Boolean ring homomorphism\n".into(),
                )),
                ExtendOutcome::Rejected { alpha, beta } => Err(RunError::Violation(render(
                    config.format,
                    json!({"extends": false, "witness": [cat.name(alpha), cat.name(beta)]}),
                    format!(
                        "rejected: condition (3) fails at ({}, {})\n",
                        cat.name(alpha),
                        cat.name(beta)
                    ),
                ))),
            }
        }
        Command::Boundary { input } => {
            let cat = load(input)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for v in cat.vertices() {
                let stars = boundary::lambda_star(&cat, v).map_err(RunError::from)?;
                let maxes = boundary::maximal_sets(&cat, v).map_err(RunError::from)?;
                let bdy: Vec<_> = boundary::boundary(&cat)
                    .map_err(RunError::from)?
                    .into_iter()
                    .filter(|c| c.vertex() == v)
                    .collect();
                if config.oracle {
                    // Ultrafilter classification at this vertex.
                    for c in &stars {
                        let (uc, _) = boundary::ultrafilter_of(&cat, c).map_err(RunError::from)?;
                        if !boundary::is_ultrafilter(&cat, v, &uc).map_err(RunError::from)? {
                            return Err(RunError::Violation(
                                "U_C is not an ultrafilter\n".into(),
                            ));
                        }
                    }
                }
                let show = |list: &[boundary::HereditaryDirectedSet]| -> Vec<String> {
                    list.iter().map(|c| c.display(&cat)).collect()
                };
                text.push_str(&format!(
                    "{}: Λ* = {} points, Λ** = {}, ∂Λ = {}\n",
                    cat.name(v),
                    stars.len(),
                    show(&maxes).join(" "),
                    show(&bdy).join(" ")
                ));
                rows.push(json!({
                    "vertex": cat.name(v),
                    "lambda_star": show(&stars),
                    "lambda_star_star": show(&maxes),
                    "boundary": show(&bdy),
                }));
            }
            Ok(render(config.format, json!({"vertices": rows}), text))
        }
        Command::Fe { input, vertex } => {
            let cat = load(input)?;
            let vertices: Vec<_> = match vertex {
                Some(v) => vec![by_name(&cat, v)?],
                None => cat.vertices().collect(),
            };
            let mut text = String::new();
            let mut rows = Vec::new();
            for v in vertices {
                let fe = boundary::finite_exhaustive_sets(&cat, v, true).map_err(RunError::from)?;
                let sets: Vec<String> = fe
                    .iter()
                    .map(|f| {
                        format!(
                            "{{{}}}",
                            f.members.iter().map(|&m| cat.name(m)).collect::<Vec<_>>().join(",")
                        )
                    })
                    .collect();
                if config.oracle {
                    for f in &fe {
                        if !boundary::exhaustive_coverage(&cat, v, &f.members)
                            .map_err(RunError::from)?
                        {
                            return Err(RunError::Violation("coverage lemma failed\n".into()));
                        }
                    }
                }
                text.push_str(&format!("FE({}) minimal: {}\n", cat.name(v), sets.join(" ")));
                rows.push(json!({"vertex": cat.name(v), "minimal_fe": sets}));
            }
            Ok(render(config.format, json!({"vertices": rows}), text))
        }
        Command::Groupoid { input, boundary: restrict, psi } => {
            let cat = load(input)?;
            let g = build_groupoid(&cat, *restrict).map_err(RunError::from)?;
            let functor = match psi {
                Some(path) => io::load_degree(path, &cat)?,
                None => degree::compute_h(&cat).map_err(RunError::from)?.theta,
            };
            if config.oracle {
                for a in &g.elements {
                    let inv = g.inverse(a);
                    if g.find(&inv).is_none() {
                        return Err(RunError::Violation("inverse escaped the groupoid\n".into()));
                    }
                    for b in &g.elements {
                        if let Some(ab) = g.compose(&cat, a, b).map_err(RunError::from)? {
                            if g.find(&ab).is_none() {
                                return Err(RunError::Violation(
                                    "product escaped the groupoid\n".into(),
                                ));
                            }
                        }
                    }
                }
            }
            let orbits = g.orbits(&cat);
            let mut text = format!(
                "groupoid over {} ({} elements, {} units, {} orbits)\n",
                if *restrict { "∂Λ" } else { "X" },
                g.len(),
                g.units.len(),
                orbits.len()
            );
            let mut isotropy_rows = Vec::new();
            for x in &g.units {
                let iso = g.isotropy(&cat, x);
                isotropy_rows.push(json!({
                    "unit": x.display(&cat),
                    "isotropy_order": iso.len(),
                }));
                if iso.len() != 1 {
                    text.push_str(&format!(
                        "nontrivial isotropy at {} (order {})\n",
                        x.display(&cat),
                        iso.len()
                    ));
                }
            }
            text.push_str("cocycle table:\n");
            let show = |g: &GroupoidElement| g.display(&cat);
            let mut cocycle_rows = Vec::new();
            for el in &g.elements {
                let c = g.cocycle(&functor, el).map_err(RunError::from)?;
                text.push_str(&format!("  c{} = {:?}\n", show(el), c));
                cocycle_rows.push(json!({"element": show(el), "value": c}));
            }
            Ok(render(
                config.format,
                json!({
                    "restricted": restrict,
                    "elements": g.elements.iter().map(show).collect::<Vec<_>>(),
                    "orbits": orbits
                        .iter()
                        .map(|o| o.iter().map(|x| x.display(&cat)).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                    "isotropy": isotropy_rows,
                    "cocycles": cocycle_rows,
                }),
                text,
            ))
        }
        Command::Degree { input, psi } => {
            let cat = load(input)?;
            let h = degree::compute_h(&cat).map_err(RunError::from)?;
            let mut text = format!(
                "H = Z^{}{}\n",
                h.rank,
                h.torsion
                    .iter()
                    .map(|d| format!(" + Z/{d}"))
                    .collect::<Vec<_>>()
                    .join("")
            );
            for m in cat.morphisms() {
                text.push_str(&format!("theta({}) = {:?}\n", cat.name(m), h.theta.value(m)));
            }
            let mut psi_report = Value::Null;
            if let Some(path) = psi {
                let functor = io::load_degree(path, &cat)?;
                let (nd, witness) = degree::is_nondegenerate(&cat, &functor);
                let iso = degree::is_non_isotropic(&cat, &functor);
                let hmap = degree::factor_through_theta(&cat, &h, &functor)
                    .map_err(RunError::from)?;
                text.push_str(&format!(
                    "psi: nondegenerate = {nd}{}, non-isotropic = {}\n",
                    witness.map(|w| format!(" (witness {})", cat.name(w))).unwrap_or_default(),
                    matches!(iso, degree::IsotropyVerdict::NonIsotropic),
                ));
                text.push_str("psi factors through theta\n");
                psi_report = json!({
                    "nondegenerate": nd,
                    "non_isotropic": matches!(iso, degree::IsotropyVerdict::NonIsotropic),
                    "factorization": hmap,
                });
            }
            Ok(render(
                config.format,
                json!({
                    "rank": h.rank,
                    "torsion": h.torsion,
                    "theta": cat
                        .morphisms()
                        .map(|m| json!({"morphism": cat.name(m), "value": h.theta.value(m)}))
                        .collect::<Vec<_>>(),
                    "psi": psi_report,
                }),
                text,
            ))
        }
        Command::Analyze { input } => {
            let cat = load(input)?;
            let report = analysis::structure_report(&cat).map_err(RunError::from)?;
            let cycles: Vec<Value> = report
                .generalized_cycles
                .iter()
                .map(|c| {
                    json!({
                        "mu": cat.name(c.mu),
                        "nu": cat.name(c.nu),
                        "has_entrance": c.has_entrance,
                        "entrance": c.entrance.map(|e| cat.name(e).to_string()),
                    })
                })
                .collect();
            let machine = json!({
                "aperiodic": report.aperiodic,
                "minimal": report.minimal,
                "generalized_cycles": cycles,
                "locally_contractive_hypothesis": report.locally_contractive_hypothesis,
                "cross_checks_ok": report.cross_checks_ok,
            });
            let text = format!(
                "aperiodic: {}\nminimal: {}{}\ngeneralized cycles: {}\nlocal contractivity \
                 hypothesis: {}\ncross-checks: {}\n",
                report.aperiodic,
                report.minimal,
                report
                    .minimality_witness
                    .map(|(u, v)| format!(" (witness {}, {})", cat.name(u), cat.name(v)))
                    .unwrap_or_default(),
                report.generalized_cycles.len(),
                report.locally_contractive_hypothesis,
                if report.cross_checks_ok { "ok" } else { "FAILED" }
            );
            if !report.cross_checks_ok {
                return Err(RunError::Violation(render(config.format, machine, text)));
            }
            Ok(render(config.format, machine, text))
        }
        Command::Amalgamate { input, bound } => {
            let loaded = io::load_presentation(input)?;
            let bound = bound.or(loaded.bound);
            let result = amalgamate(&loaded.presentation, bound).map_err(RunError::from)?;
            let ball = &result.ball;
            let elems: Vec<String> = (0..ball.len()).map(|i| ball.display(i)).collect();
            let sensitive = match bound {
                Some(b) if result.exact.is_none() => {
                    bound_sensitive_pairs(&loaded.presentation, b).map_err(RunError::from)?
                }
                _ => Vec::new(),
            };
            let mut text = match &result.exact {
                Some(cat) => format!("exact category: {cat}\n"),
                None => format!("ball at bound {}: {} elements\n", ball.bound, ball.len()),
            };
            text.push_str(&format!("elements: {}\n", elems.join(" ")));
            if !sensitive.is_empty() {
                text.push_str(&format!(
                    "bound-sensitive pairs: {}\n",
                    sensitive
                        .iter()
                        .map(|(a, b)| format!("({a}, {b})"))
                        .collect::<Vec<_>>()
                        .join(" ")
                ));
            }
            Ok(render(
                config.format,
                json!({
                    "bound": ball.bound,
                    "exact": result.exact.is_some(),
                    "elements": elems,
                    "bound_sensitive_pairs": sensitive,
                }),
                text,
            ))
        }
        Command::Emit { input, flavor } => {
            let cat = load(input)?;
            let flavor: Flavor = (*flavor).into();
            let doc = emit_relations(&cat, flavor).map_err(RunError::from)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for r in &doc.relations {
                text.push_str(&format!("({}) {}\n", r.tag(), r.display(&cat, flavor)));
                rows.push(json!({"tag": r.tag(), "relation": r.display(&cat, flavor)}));
            }
            Ok(render(
                config.format,
                json!({
                    "flavor": match flavor { Flavor::Toeplitz => "toeplitz", Flavor::Ck => "ck" },
                    "generators": doc.generators.iter().map(|&g| cat.name(g)).collect::<Vec<_>>(),
                    "relations": rows,
                }),
                text,
            ))
        }
        Command::Verify { input, flavor } => {
            let cat = load(input)?;
            let flavors: Vec<Flavor> = match flavor {
                Some(f) => vec![(*f).into()],
                None => vec![Flavor::Toeplitz, Flavor::Ck],
            };
            let mut text = String::new();
            let mut rows = Vec::new();
            let mut all_ok = true;
            for flavor in flavors {
                let doc = emit_relations(&cat, flavor).map_err(RunError::from)?;
                let rep = build_matrix_rep(&cat, flavor).map_err(RunError::from)?;
                let report = verify_relations(&cat, &rep, &doc).map_err(RunError::from)?;
                let ok = report.all_hold();
                all_ok &= ok;
                let failed: Vec<String> = report
                    .checks
                    .iter()
                    .filter(|c| !c.holds)
                    .map(|c| c.relation.display(&cat, flavor))
                    .collect();
                let ck_failures: Vec<String> = report
                    .ck_in_toeplitz
                    .iter()
                    .filter(|c| !c.holds)
                    .map(|c| c.relation.display(&cat, flavor))
                    .collect();
                let name = match flavor {
                    Flavor::Toeplitz => "toeplitz",
                    Flavor::Ck => "ck",
                };
                text.push_str(&format!(
                    "{name}: dim {}, relations {}, all hold: {ok}\n",
                    rep.dim(),
                    report.checks.len()
                ));
                if !ck_failures.is_empty() {
                    text.push_str(&format!(
                        "  CK relations failing in the Toeplitz representation: {}\n",
                        ck_failures.len()
                    ));
                }
                rows.push(json!({
                    "flavor": name,
                    "dimension": rep.dim(),
                    "all_hold": ok,
                    "failed": failed,
                    "wick": report.wick_ok,
                    "ck_failures_in_toeplitz": ck_failures,
                }));
            }
            let machine = json!({"reports": rows});
            if all_ok {
                Ok(render(config.format, machine, text))
            } else {
                Err(RunError::Violation(render(config.format, machine, text)))
            }
        }
    }
}
