//! Command-line front end. `run` parses arguments, executes one subcommand and
//! returns the exit status: 0 when the check passes, 1 when it fails (after
//! printing a JSON witness), 2 on usage or input errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mvpolarity::algebra::validate_algebra;
use mvpolarity::canonical::{build_surrogate, lemma_suite, truth_lemma, CanonicalOptions};
use mvpolarity::context::describe;
use mvpolarity::generate::{self, DEFAULT_SEED};
use mvpolarity::io::{self, AlgebraFile};
use mvpolarity::market::{self, Arena, Typicality};
use mvpolarity::semantics::{sequent_valid, soundness_suite};
use mvpolarity::{parse_sequent, EnrichedContext, EnumerationOptions, Error, Exec, TruthAlgebra, ValidityOptions};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "mvpolarity", version, about = "Many-valued polarity semantics for non-distributive modal logic")]
pub struct Cli {
    /// Run every computation on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the concept lattice of a context.
    Lattice {
        #[arg(long)]
        context: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        out: Format,
        #[arg(long, default_value_t = mvpolarity::context::DEFAULT_MAX_CONCEPTS)]
        max_concepts: usize,
    },
    /// Decide a sequent in a model.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        sequent: String,
        #[arg(long, value_enum, default_value = "text")]
        out: Format,
    },
    /// Decide validity of a sequent on a frame by trying every valuation.
    Valid {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        sequent: String,
        #[command(flatten)]
        budget: Budget,
        #[arg(long, value_enum, default_value = "text")]
        out: Format,
    },
    /// Check every axiom and modal rule on a frame or on seeded random frames.
    Axioms {
        #[arg(long, conflicts_with = "random")]
        frame: Option<PathBuf>,
        /// Number of random compatible frames.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value = "lukasiewicz:3")]
        algebra: String,
        #[arg(long, default_value_t = 3)]
        objects: usize,
        #[arg(long, default_value_t = 3)]
        attributes: usize,
        #[command(flatten)]
        budget: Budget,
        #[arg(long, value_enum, default_value = "text")]
        out: Format,
    },
    /// Build the canonical surrogate of a finite modal lattice and check the lemmas.
    Canonical {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long, default_value = "lukasiewicz:3")]
        algebra: String,
        /// Formula depth for the truth-lemma check.
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_candidates: u64,
        #[arg(long, value_enum, default_value = "text")]
        out: Format,
    },
    /// Run a competition analysis on an arena.
    Arena(ArenaArgs),
    /// Check the residuated-lattice laws of an algebra.
    Algebra {
        /// Inline spec (`lukasiewicz:5`) or algebra file.
        #[arg(long)]
        algebra: String,
        #[arg(long, value_enum, default_value = "text")]
        out: Format,
    },
}

#[derive(Debug, Args)]
pub struct Budget {
    #[arg(long, default_value_t = 10_000_000)]
    pub max_valuations: u64,
    #[arg(long, default_value_t = mvpolarity::context::DEFAULT_MAX_CONCEPTS)]
    pub max_concepts: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Analysis {
    Summary,
    Firm,
    Market,
    Basket,
    Rhd,
    Lhd,
    Box,
}

#[derive(Debug, Args)]
pub struct ArenaArgs {
    #[arg(long)]
    pub file: PathBuf,
    #[arg(long, value_enum, default_value = "summary")]
    pub analysis: Analysis,
    /// Firm for `firm` and `box`; seed concept `c_a` for `rhd` and `lhd`.
    #[arg(long)]
    pub firm: Option<String>,
    /// Market for `market`; seed concept `c_x` for `rhd` and `lhd`.
    #[arg(long)]
    pub market: Option<String>,
    /// Basket weights as `market=index,...`; absent markets weigh 0.
    #[arg(long)]
    pub basket: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    pub out: Format,
}

/// Outcome of a subcommand before rendering.
enum Outcome {
    Pass(String),
    Fail(String),
}

struct Ctx {
    exec: Exec,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialise") + "\n"
}

fn render(out: Format, pass: bool, text: String, report: Value) -> String {
    match out {
        Format::Json => pretty(&report),
        _ => {
            let mut s = text;
            if !s.ends_with('\n') {
                s.push('\n');
            }
            if !pass {
                s.push_str(&pretty(&report));
            }
            s
        }
    }
}

fn no_dot(out: Format) -> Result<Format, Error> {
    match out {
        Format::Dot => Err(usage("--out dot is only available for `lattice`")),
        f => Ok(f),
    }
}

fn validity_opts(c: &Ctx, b: &Budget) -> ValidityOptions {
    ValidityOptions {
        max_valuations: b.max_valuations,
        enumeration: EnumerationOptions { max_concepts: b.max_concepts, exec: c.exec },
        exec: c.exec,
    }
}

fn cmd_lattice(c: &Ctx, path: &Path, out: Format, max_concepts: usize) -> Result<Outcome, Error> {
    let ctx = io::load_context(path)?;
    let lattice = ctx.enumerate_concepts(&EnumerationOptions { max_concepts, exec: c.exec })?;
    let text = match out {
        Format::Dot => lattice.to_dot(&ctx),
        Format::Json => pretty(&io::lattice_to_json(&ctx, &lattice)),
        Format::Text => {
            let mut s = format!("{} concepts\n", lattice.len());
            for (i, concept) in lattice.concepts().iter().enumerate() {
                let (ext, int) = describe(&ctx, concept);
                let join = |v: Vec<(String, String)>| v.into_iter().map(|(n, d)| format!("{n}={d}")).collect::<Vec<_>>().join(" ");
                s.push_str(&format!("c{i}  ext: {}  int: {}\n", join(ext), join(int)));
            }
            s
        }
    };
    Ok(Outcome::Pass(text))
}

fn cmd_check(model: &Path, sequent: &str, out: Format) -> Result<Outcome, Error> {
    let out = no_dot(out)?;
    let model = io::load_model(model)?;
    let s = parse_sequent(sequent)?;
    let check = model.check_sequent(&s)?;
    let report = json!({ "sequent": s.to_string(), "holds": check.holds, "witness": check.witness });
    let text = if check.holds { "true".to_string() } else { "false".to_string() };
    let body = render(out, check.holds, text, report);
    Ok(if check.holds { Outcome::Pass(body) } else { Outcome::Fail(body) })
}

fn cmd_valid(c: &Ctx, frame: &Path, sequent: &str, budget: &Budget, out: Format) -> Result<Outcome, Error> {
    let out = no_dot(out)?;
    let frame = io::load_frame(frame)?.frame;
    let s = parse_sequent(sequent)?;
    let verdict = sequent_valid(&frame, &s, &validity_opts(c, budget))?;
    let report = serde_json::to_value(&verdict)?;
    let text = if verdict.valid() { "valid" } else { "invalid" }.to_string();
    let body = render(out, verdict.valid(), text, report);
    Ok(if verdict.valid() { Outcome::Pass(body) } else { Outcome::Fail(body) })
}

#[allow(clippy::too_many_arguments)]
fn cmd_axioms(
    c: &Ctx,
    frame: Option<&Path>,
    random: Option<usize>,
    seed: u64,
    algebra: &str,
    objects: usize,
    attributes: usize,
    budget: &Budget,
    out: Format,
) -> Result<Outcome, Error> {
    let out = no_dot(out)?;
    let frames: Vec<(String, EnrichedContext)> = match (frame, random) {
        (Some(p), None) => vec![(p.display().to_string(), io::load_frame(p)?.frame)],
        (None, Some(n)) => {
            let alg = Arc::new(io::algebra_arg(algebra)?);
            let mut rng = generate::rng(seed);
            (0..n)
                .map(|k| Ok((format!("random #{k}"), generate::random_compatible_frame(&mut rng, alg.clone(), objects, attributes)?)))
                .collect::<Result<_, Error>>()?
        }
        _ => return Err(usage("`axioms` needs exactly one of --frame or --random")),
    };
    let opts = validity_opts(c, budget);
    let mut reports = Vec::new();
    let mut text = String::new();
    let mut first_failure = None;
    for (name, frame) in &frames {
        let report = soundness_suite(frame, &opts)?;
        let ok = report.passed();
        text.push_str(&format!(
            "{name}: {} ({} concepts, {} axioms, {} rules)\n",
            if ok { "sound" } else { "UNSOUND" },
            report.concepts,
            report.axioms.len(),
            report.rules.len()
        ));
        if !ok && first_failure.is_none() {
            let axiom = report.axioms.iter().find(|v| !v.valid());
            let rule = report.rules.iter().find(|r| !r.passed);
            first_failure = Some(json!({ "frame": name, "definition": io::frame_to_json(frame), "axiom": axiom, "rule": rule }));
        }
        reports.push(json!({ "frame": name, "passed": ok, "report": report }));
    }
    let pass = first_failure.is_none();
    text.push_str(&format!("{} of {} frames sound\n", reports.iter().filter(|r| r["passed"] == true).count(), frames.len()));
    let report = json!({ "seed": random.map(|_| seed), "passed": pass, "frames": reports });
    Ok(match first_failure {
        None => Outcome::Pass(render(out, true, text, report)),
        Some(w) => Outcome::Fail(render(out, false, text, if out == Format::Json { report } else { w })),
    })
}

fn cmd_canonical(c: &Ctx, lattice: &Path, algebra: &str, depth: usize, max_candidates: u64, out: Format) -> Result<Outcome, Error> {
    let out = no_dot(out)?;
    let l = io::load_modal_lattice(lattice)?;
    let alg = Arc::new(io::algebra_arg(algebra)?);
    let opts = CanonicalOptions { max_candidates, exec: c.exec };
    let lemmas = lemma_suite(&alg, &l, &opts)?;
    let surrogate = build_surrogate(alg, &l, &opts)?;
    let compat = surrogate.compatibility().clone();
    let truth = if compat.passed() && !l.atoms().is_empty() { Some(truth_lemma(&surrogate, depth)?) } else { None };
    let pass = lemmas.passed() && surrogate.forms.passed() && compat.passed() && truth.as_ref().is_none_or(|t| t.passed());

    let mut text = format!(
        "surrogate: {} proper filters × {} proper ideals\n",
        surrogate.filters.len(),
        surrogate.ideals.len()
    );
    for item in &lemmas.items {
        let tag = match (item.passed, item.binding) {
            (true, _) => "ok  ",
            (false, true) => "FAIL",
            (false, false) => "note",
        };
        text.push_str(&format!("{tag}  {} ({} checked)\n", item.name, item.checked));
    }
    text.push_str(&format!(
        "{}  displayed forms of R_diamond and R_box agree ({} pairs)\n",
        if surrogate.forms.passed() { "ok  " } else { "FAIL" },
        surrogate.forms.pairs
    ));
    text.push_str(&format!("{}  surrogate frame is I-compatible\n", if compat.passed() { "ok  " } else { "FAIL" }));
    match &truth {
        Some(t) => text.push_str(&format!(
            "{}  truth lemma on {} formulas up to depth {depth}\n",
            if t.passed() { "ok  " } else { "FAIL" },
            t.formulas
        )),
        None => text.push_str("skip  truth lemma (no atoms or incompatible frame)\n"),
    }
    let report = json!({
        "passed": pass,
        "lemmas": lemmas,
        "forms": surrogate.forms,
        "compatibility": compat,
        "truth_lemma": truth,
        "frame": io::frame_to_json(&surrogate.frame),
    });
    Ok(if pass {
        Outcome::Pass(render(out, true, text, report))
    } else {
        let witness = json!({
            "lemmas": lemmas.items.iter().filter(|i| i.binding && !i.passed).collect::<Vec<_>>(),
            "forms": surrogate.forms,
            "compatibility": compat.failures,
            "truth_lemma": truth.map(|t| t.failures),
        });
        Outcome::Fail(render(out, false, text, if out == Format::Json { report } else { witness }))
    })
}

fn seed_concept(arena: &Arena, args: &ArenaArgs) -> Result<(mvpolarity::Concept, String), Error> {
    match (&args.firm, &args.market) {
        (Some(a), None) => Ok((market::firm_category(arena, a)?, format!("c_{a}"))),
        (None, Some(x)) => Ok((market::market_category(arena, x)?, format!("c_{x}"))),
        _ => Err(usage("rhd/lhd analyses need exactly one of --firm or --market as the seed concept")),
    }
}

fn cmd_arena(args: &ArenaArgs) -> Result<Outcome, Error> {
    let out = no_dot(args.out)?;
    let arena = market::load_arena(&args.file)?;
    let need = |v: &Option<String>, flag: &str| v.clone().ok_or_else(|| usage(format!("this analysis needs --{flag}")));
    let report = match args.analysis {
        Analysis::Summary => {
            let ctx = arena.frame.base();
            let lattice = ctx.enumerate_concepts(&EnumerationOptions::default())?;
            let relations: BTreeMap<&str, bool> = ["R_box", "R_diamond", "R_rhd", "R_lhd"]
                .into_iter()
                .zip([arena.frame.relations().r_box.is_some(), arena.frame.relations().r_diamond.is_some(), arena.frame.relations().r_rhd.is_some(), arena.frame.relations().r_lhd.is_some()])
                .collect();
            let summary = json!({
                "algebra": ctx.algebra().kind().to_string() + ":" + &ctx.algebra().size().to_string(),
                "firms": ctx.objects(),
                "markets": ctx.attributes(),
                "concepts": lattice.len(),
                "relations": relations,
                "labels": arena.labels,
                "compatibility": arena.frame.compatibility(),
                "quantization": arena.quantization,
                "warnings": arena.warnings,
            });
            let mut text = format!(
                "{} firms, {} markets, {} concepts over {}\n",
                ctx.objects().len(),
                ctx.attributes().len(),
                lattice.len(),
                summary["algebra"].as_str().unwrap_or_default()
            );
            for (slot, present) in &relations {
                let label = arena.labels.get(*slot).map(|l| format!(" ({l})")).unwrap_or_default();
                text.push_str(&format!("  {slot:<9}  {}{label}\n", if *present { "present" } else { "absent" }));
            }
            for w in &arena.warnings {
                text.push_str(&format!("warning: {w}\n"));
            }
            return Ok(Outcome::Pass(if out == Format::Json { pretty(&summary) } else { text }));
        }
        Analysis::Firm => market::firm_category_report(&arena, &need(&args.firm, "firm")?)?,
        Analysis::Market => market::market_category_report(&arena, &need(&args.market, "market")?)?,
        Analysis::Basket => {
            let weights = market::parse_weights(&arena, &need(&args.basket, "basket")?)?;
            market::basket_category_report(&arena, &weights)?
        }
        Analysis::Rhd | Analysis::Lhd => {
            let (seed, name) = seed_concept(&arena, args)?;
            let kind = if args.analysis == Analysis::Rhd { Typicality::RhdOverConcept } else { Typicality::LhdOverConcept };
            market::typicality_analysis(&arena, kind, &seed, &name)?
        }
        Analysis::Box => market::box_refinement_analysis(&arena, &need(&args.firm, "firm")?)?,
    };
    Ok(Outcome::Pass(match out {
        Format::Json => pretty(&report.to_json()),
        _ => report.to_string(),
    }))
}

fn cmd_algebra(spec: &str, out: Format) -> Result<Outcome, Error> {
    let out = no_dot(out)?;
    let tables = match TruthAlgebra::from_inline(spec) {
        Ok(alg) => alg.tables(),
        Err(_) => {
            let file: AlgebraFile = io::parse_algebra_file(&io::read_file(Path::new(spec))?)?;
            file.tables()?
        }
    };
    let report = validate_algebra(&tables)?;
    let mut text = String::new();
    for law in &report.laws {
        text.push_str(&format!("{}  {}\n", if law.passed { "ok  " } else { "FAIL" }, law.law));
    }
    text.push_str(if report.passed() { "residuated lattice\n" } else { "not a residuated lattice\n" });
    let value = serde_json::to_value(&report)?;
    Ok(if report.passed() {
        Outcome::Pass(render(out, true, text, value))
    } else {
        let witness = json!({ "failed": report.laws.iter().filter(|l| !l.passed).collect::<Vec<_>>() });
        Outcome::Fail(render(out, false, text, if out == Format::Json { value } else { witness }))
    })
}

fn dispatch(cli: &Cli) -> Result<Outcome, Error> {
    let c = Ctx { exec: if cli.sequential { Exec::Sequential } else { Exec::Parallel } };
    match &cli.command {
        Command::Lattice { context, out, max_concepts } => cmd_lattice(&c, context, *out, *max_concepts),
        Command::Check { model, sequent, out } => cmd_check(model, sequent, *out),
        Command::Valid { frame, sequent, budget, out } => cmd_valid(&c, frame, sequent, budget, *out),
        Command::Axioms { frame, random, seed, algebra, objects, attributes, budget, out } => {
            cmd_axioms(&c, frame.as_deref(), *random, *seed, algebra, *objects, *attributes, budget, *out)
        }
        Command::Canonical { lattice, algebra, depth, max_candidates, out } => {
            cmd_canonical(&c, lattice, algebra, *depth, *max_candidates, *out)
        }
        Command::Arena(args) => cmd_arena(args),
        Command::Algebra { algebra, out } => cmd_algebra(algebra, *out),
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(Outcome::Pass(text)) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Ok(Outcome::Fail(text)) => {
            let _ = out.write_all(text.as_bytes());
            1
        }
        Err(e) => {
            let _ = err.write_all(pretty(&json!({ "error": e.to_string() })).as_bytes());
            2
        }
    }
}
