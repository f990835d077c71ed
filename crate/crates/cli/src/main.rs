use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fca_core::assoc::{self, AssociationRule};
use fca_core::bmf::{self, BooleanMatrix};
use fca_core::clustering::{self, TriContext};
use fca_core::exploration::{Answer, ExplorationSession};
use fca_core::fraction::{parse_unit_fraction, to_f64};
use fca_core::implications::{duquenne_guigues_base, generator_cover, ImplicationBase};
use fca_core::io::{parse_context, serialize_context, ContextFormat};
use fca_core::ir;
use fca_core::jsm::{self, TrainingContext};
use fca_core::lattice::{self, close_by_one, next_closure_concepts, ConceptLattice, FormalConcept};
use fca_core::patterns::{self, PatternStructure};
use fca_core::{BitSet, FcaError, FormalContext, Fraction};
use serde_json::json;

#[derive(Parser)]
#[command(name = "fca", version, about = "Formal concept analysis toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, short, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Input context format; guessed from the extension when absent.
    #[arg(long, global = true)]
    input_format: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    NextClosure,
    Cbo,
}

#[derive(Subcommand)]
enum Command {
    /// List all formal concepts.
    Concepts {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Algorithm::NextClosure)]
        algorithm: Algorithm,
    },
    /// Concept lattice with cover relation and layout.
    Lattice {
        input: PathBuf,
        /// Mark the iceberg of concepts with at least this support.
        #[arg(long, value_parser = min_supp)]
        min_supp: Option<Fraction>,
    },
    /// Duquenne-Guigues (canonical) implication base.
    DgBase { input: PathBuf },
    /// Implications from minimal generators to their closures.
    Generators { input: PathBuf },
    /// Association rules mined with Apriori.
    Rules {
        input: PathBuf,
        #[arg(long, value_parser = min_supp, default_value = "0")]
        min_supp: Fraction,
        #[arg(long, value_parser = min_conf, default_value = "0")]
        min_conf: Fraction,
    },
    /// Frequent closed (or maximal) itemsets.
    Closed {
        input: PathBuf,
        #[arg(long, value_parser = min_supp, default_value = "0")]
        min_supp: Fraction,
        #[arg(long)]
        maximal: bool,
    },
    /// Luxenburger base of partial implications.
    Luxenburger {
        input: PathBuf,
        #[arg(long, value_parser = min_supp, default_value = "0")]
        min_supp: Fraction,
        #[arg(long, value_parser = min_conf, default_value = "0")]
        min_conf: Fraction,
    },
    /// Object-attribute biclusters.
    Biclusters {
        input: PathBuf,
        #[arg(long, value_parser = rho, default_value = "0")]
        rho: Fraction,
    },
    /// Prime OAC triclusters of an object,attribute,condition triple list.
    Triclusters {
        input: PathBuf,
        #[arg(long, value_parser = rho, default_value = "0")]
        rho: Fraction,
    },
    /// JSM hypotheses and classification of undetermined examples.
    Jsm {
        input: PathBuf,
        /// Scale every column nominally instead of reading crosses.
        #[arg(long)]
        nominal: bool,
    },
    /// Interval pattern concepts of a numeric table.
    Patterns {
        input: PathBuf,
        #[arg(long, default_value_t = patterns::DEFAULT_PATTERN_CAP)]
        cap: usize,
    },
    /// Greedy Boolean matrix factorization.
    Bmf {
        /// A context file, or a .txt matrix of 0/1 rows.
        input: PathBuf,
        #[arg(long, value_parser = coverage, default_value = "1")]
        coverage: Fraction,
    },
    /// Rank objects by lattice distance to a query concept.
    Rank {
        input: PathBuf,
        /// Query attributes.
        #[arg(long, short, num_args = 1.., required = true)]
        query: Vec<String>,
    },
    /// Stability index of every concept.
    Stability {
        input: PathBuf,
        #[arg(long, default_value_t = lattice::DEFAULT_STABILITY_CAP)]
        cap: usize,
        /// Show only the first K concepts.
        #[arg(long)]
        top: Option<usize>,
    },
    /// Interactive attribute exploration on the terminal.
    Explore {
        input: PathBuf,
        /// Session file; resumed when it exists, saved after every answer.
        #[arg(long)]
        session: Option<PathBuf>,
    },
}

fn unit(name: &'static str, s: &str) -> Result<Fraction, String> {
    parse_unit_fraction(name, s).map_err(|e| e.to_string())
}

fn min_supp(s: &str) -> Result<Fraction, String> {
    unit("min-supp", s)
}

fn min_conf(s: &str) -> Result<Fraction, String> {
    unit("min-conf", s)
}

fn rho(s: &str) -> Result<Fraction, String> {
    unit("rho", s)
}

fn coverage(s: &str) -> Result<Fraction, String> {
    unit("coverage", s)
}

enum CliError {
    Fca(FcaError),
    Input(String),
}

impl From<FcaError> for CliError {
    fn from(e: FcaError) -> Self {
        CliError::Fca(e)
    }
}

type Out = Result<String, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Fca(e)) => {
            eprintln!("fca: {e}");
            ExitCode::from(if e.is_size_guard() { 3 } else { 2 })
        }
        Err(CliError::Input(msg)) => {
            eprintln!("fca: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let text = match &cli.command {
        Command::Explore { input, session } => explore(cli, input, session.as_deref())?,
        cmd => dispatch(cli, cmd)?,
    };
    emit(cli, &text)
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::Input(e.to_string()))
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_context(cli: &Cli, path: &Path) -> Result<FormalContext, CliError> {
    let fmt = match &cli.input_format {
        Some(f) => f.parse()?,
        None => ContextFormat::from_path(&path.to_string_lossy()).ok_or_else(|| {
            CliError::Input(format!("{}: cannot tell the format, use --input-format", path.display()))
        })?,
    };
    Ok(parse_context(read(path)?.as_bytes(), fmt)?)
}

fn pretty(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("serializable") + "\n"
}

fn set(labels: Vec<String>) -> String {
    format!("{{{}}}", labels.join(", "))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', ';']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line(fields: &[String]) -> String {
    fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",") + "\n"
}

fn dispatch(cli: &Cli, cmd: &Command) -> Out {
    let f = cli.format;
    match cmd {
        Command::Concepts { input, algorithm } => {
            let ctx = load_context(cli, input)?;
            let cs = match algorithm {
                Algorithm::NextClosure => next_closure_concepts(&ctx),
                Algorithm::Cbo => close_by_one(&ctx),
            };
            Ok(concepts_out(f, &ctx, &cs))
        }
        Command::Lattice { input, min_supp } => {
            let ctx = load_context(cli, input)?;
            let lat = ConceptLattice::from_context(&ctx)?;
            let ice = min_supp.as_ref().map(|s| lattice::iceberg(&lat, &ctx, s)).transpose()?;
            Ok(lattice_out(f, &ctx, &lat, ice.as_deref()))
        }
        Command::DgBase { input } => {
            let ctx = load_context(cli, input)?;
            Ok(base_out(f, &ctx, &duquenne_guigues_base(&ctx)))
        }
        Command::Generators { input } => {
            let ctx = load_context(cli, input)?;
            Ok(base_out(f, &ctx, &generator_cover(&ctx)))
        }
        Command::Rules { input, min_supp, min_conf } => {
            let ctx = load_context(cli, input)?;
            let freq = assoc::apriori(&ctx, min_supp)?;
            Ok(rules_out(f, &ctx, &assoc::extract_rules(&freq, min_conf)?))
        }
        Command::Closed { input, min_supp, maximal } => {
            let ctx = load_context(cli, input)?;
            let sets = if *maximal {
                assoc::frequent_maximal(&ctx, min_supp)?
            } else {
                assoc::frequent_closed(&ctx, min_supp)?
            };
            Ok(itemsets_out(f, &ctx, &sets))
        }
        Command::Luxenburger { input, min_supp, min_conf } => {
            let ctx = load_context(cli, input)?;
            let lat = ConceptLattice::from_context(&ctx)?;
            Ok(rules_out(f, &ctx, &assoc::luxenburger_base(&ctx, &lat, min_supp, min_conf)?))
        }
        Command::Biclusters { input, rho } => {
            let ctx = load_context(cli, input)?;
            Ok(biclusters_out(f, &ctx, &clustering::oa_biclusters(&ctx, rho)?))
        }
        Command::Triclusters { input, rho } => {
            let t = TriContext::parse_csv(&read(input)?)?;
            Ok(triclusters_out(f, &t, &clustering::prime_oac_triclusters(&t, rho)?))
        }
        Command::Jsm { input, nominal } => {
            let tc = TrainingContext::parse_csv(&read(input)?, *nominal)?;
            jsm_out(f, &tc)
        }
        Command::Patterns { input, cap } => {
            let ps = PatternStructure::parse_csv(&read(input)?)?;
            let mut cs = patterns::pattern_concepts(&ps, *cap)?;
            patterns::sort_concepts(&mut cs);
            Ok(patterns_out(f, &ps, &cs))
        }
        Command::Bmf { input, coverage } => {
            let (i, ctx) = if input.extension().is_some_and(|e| e == "txt") {
                let m = BooleanMatrix::parse(&read(input)?)?;
                let ctx = m.to_context();
                (m, ctx)
            } else {
                let ctx = load_context(cli, input)?;
                (BooleanMatrix::from(&ctx), ctx)
            };
            Ok(bmf_out(f, &ctx, &bmf::factorize(&i, coverage)?))
        }
        Command::Rank { input, query } => {
            let ctx = load_context(cli, input)?;
            let lat = ConceptLattice::from_context(&ctx)?;
            let q = ir::query_concept(&ctx, query)?;
            Ok(rank_out(f, &ctx, &q, &ir::clr_rank(&lat, &q)?))
        }
        Command::Stability { input, cap, top } => {
            let ctx = load_context(cli, input)?;
            let lat = ConceptLattice::from_context(&ctx)?;
            let mut report = ir::rank_stability_annotate(&ctx, &lat, *cap);
            if let Some(k) = top {
                report.scores.truncate(*k);
            }
            Ok(stability_out(f, &ctx, &lat, &report))
        }
        Command::Explore { .. } => unreachable!("handled by run"),
    }
}

fn concepts_out(f: Format, ctx: &FormalContext, cs: &[FormalConcept]) -> String {
    match f {
        Format::Text => {
            let mut s = format!("{} concepts\n", cs.len());
            for c in cs {
                s += &format!("{} {}\n", set(ctx.object_labels(&c.extent)), set(ctx.attribute_labels(&c.intent)));
            }
            s
        }
        Format::Json => pretty(json!(cs
            .iter()
            .map(|c| json!({"extent": ctx.object_labels(&c.extent), "intent": ctx.attribute_labels(&c.intent)}))
            .collect::<Vec<_>>())),
        Format::Csv => {
            let mut s = String::from("extent,intent\n");
            for c in cs {
                s += &csv_line(&[ctx.object_labels(&c.extent).join(" "), ctx.attribute_labels(&c.intent).join(" ")]);
            }
            s
        }
    }
}

fn lattice_out(f: Format, ctx: &FormalContext, lat: &ConceptLattice, ice: Option<&[usize]>) -> String {
    let pts = lattice::layout(lat);
    let in_ice = |i: usize| ice.map(|v| v.contains(&i));
    match f {
        Format::Text => {
            let mut s = format!("{} concepts, {} covers\n", lat.len(), lat.covers().len());
            for (i, c) in lat.concepts().iter().enumerate() {
                s += &format!(
                    "#{i} {} {} at ({}, {}){}\n",
                    set(ctx.object_labels(&c.extent)),
                    set(ctx.attribute_labels(&c.intent)),
                    pts[i].x,
                    pts[i].y,
                    if in_ice(i) == Some(true) { " *" } else { "" }
                );
            }
            for &(lo, hi) in lat.covers() {
                s += &format!("#{lo} < #{hi}\n");
            }
            s
        }
        Format::Json => {
            let mut v = lat.to_json(ctx);
            if let Some(ice) = ice {
                v["iceberg"] = json!(ice);
            }
            pretty(v)
        }
        Format::Csv => {
            let mut s = String::from("id,extent,intent,x,y,iceberg\n");
            for (i, c) in lat.concepts().iter().enumerate() {
                s += &csv_line(&[
                    i.to_string(),
                    ctx.object_labels(&c.extent).join(" "),
                    ctx.attribute_labels(&c.intent).join(" "),
                    pts[i].x.to_string(),
                    pts[i].y.to_string(),
                    in_ice(i).map_or(String::new(), |b| b.to_string()),
                ]);
            }
            s
        }
    }
}

fn base_out(f: Format, ctx: &FormalContext, base: &ImplicationBase) -> String {
    match f {
        Format::Text => base.to_text(ctx),
        Format::Json => pretty(base.to_json(ctx)),
        Format::Csv => {
            let mut s = String::from("premise,conclusion\n");
            for r in &base.rules {
                s += &csv_line(&[ctx.attribute_labels(&r.premise).join(" "), ctx.attribute_labels(&r.conclusion).join(" ")]);
            }
            s
        }
    }
}

fn rules_out(f: Format, ctx: &FormalContext, rules: &[AssociationRule]) -> String {
    match f {
        Format::Text => rules.iter().map(|r| r.to_text(ctx) + "\n").collect(),
        Format::Json => pretty(assoc::rules_to_json(ctx, rules)),
        Format::Csv => assoc::rules_to_csv(ctx, rules),
    }
}

fn itemsets_out(f: Format, ctx: &FormalContext, sets: &[(BitSet, usize)]) -> String {
    let supp = |c: usize| Fraction::new(c as u64, ctx.n_objects().max(1) as u64);
    match f {
        Format::Text => sets
            .iter()
            .map(|(s, c)| format!("{} supp {} ({c})\n", set(ctx.attribute_labels(s)), supp(*c)))
            .collect(),
        Format::Json => pretty(assoc::itemsets_to_json(ctx, sets)),
        Format::Csv => {
            let mut out = String::from("items,count,support\n");
            for (s, c) in sets {
                out += &csv_line(&[ctx.attribute_labels(s).join(" "), c.to_string(), supp(*c).to_string()]);
            }
            out
        }
    }
}

fn biclusters_out(f: Format, ctx: &FormalContext, bs: &[clustering::OABicluster]) -> String {
    match f {
        Format::Text => bs
            .iter()
            .map(|b| {
                format!(
                    "{} {} from ({}, {}) density {}\n",
                    set(ctx.object_labels(&b.extent)),
                    set(ctx.attribute_labels(&b.intent)),
                    ctx.objects()[b.generator.0],
                    ctx.attributes()[b.generator.1],
                    b.density
                )
            })
            .collect(),
        Format::Json => pretty(clustering::biclusters_to_json(ctx, bs)),
        Format::Csv => {
            let mut s = String::from("extent,intent,object,attribute,density\n");
            for b in bs {
                s += &csv_line(&[
                    ctx.object_labels(&b.extent).join(" "),
                    ctx.attribute_labels(&b.intent).join(" "),
                    ctx.objects()[b.generator.0].clone(),
                    ctx.attributes()[b.generator.1].clone(),
                    b.density.to_string(),
                ]);
            }
            s
        }
    }
}

fn triclusters_out(f: Format, t: &TriContext, ts: &[clustering::Tricluster]) -> String {
    match f {
        Format::Text => ts
            .iter()
            .map(|c| {
                let [x, y, z] = clustering::tricluster_labels(t, c);
                format!("{} {} {} density {}\n", set(x), set(y), set(z), c.density)
            })
            .collect(),
        Format::Json => pretty(clustering::triclusters_to_json(t, ts)),
        Format::Csv => {
            let mut s = String::from("extent,intent,modus,density\n");
            for c in ts {
                let [x, y, z] = clustering::tricluster_labels(t, c);
                s += &csv_line(&[x.join(" "), y.join(" "), z.join(" "), c.density.to_string()]);
            }
            s
        }
    }
}

fn jsm_out(f: Format, tc: &TrainingContext) -> Out {
    let ctx = tc.base();
    let pos = jsm::minimal_hypotheses(&jsm::hypotheses(tc, jsm::Polarity::Positive)?);
    let neg = jsm::minimal_hypotheses(&jsm::hypotheses(tc, jsm::Polarity::Negative)?);
    let results = jsm::classify_undetermined(tc)?;
    Ok(match f {
        Format::Text => {
            let mut s = String::new();
            for (name, hs) in [("positive", &pos), ("negative", &neg)] {
                s += &format!("minimal {name} hypotheses:\n");
                for h in hs {
                    s += &format!("  {}\n", set(ctx.attribute_labels(&h.intent)));
                }
            }
            s + &jsm::report(tc, &results)
        }
        Format::Json => {
            let hs = |v: &[jsm::Hypothesis]| v.iter().map(|h| ctx.attribute_labels(&h.intent)).collect::<Vec<_>>();
            pretty(json!({
                "target": tc.target(),
                "positive": hs(&pos),
                "negative": hs(&neg),
                "classifications": jsm::report_json(tc, &results),
            }))
        }
        Format::Csv => {
            let mut s = String::from("object,verdict\n");
            for c in &results {
                s += &csv_line(&[ctx.objects()[c.object].clone(), c.verdict.to_string()]);
            }
            s
        }
    })
}

fn patterns_out(f: Format, ps: &PatternStructure, cs: &[patterns::PatternConcept]) -> String {
    let objs = |e: &BitSet| e.iter().map(|g| ps.objects()[g].clone()).collect::<Vec<_>>();
    match f {
        Format::Text => {
            let mut s = format!("{} pattern concepts\n", cs.len());
            for c in cs {
                s += &format!("{} {}\n", set(objs(&c.extent)), c.pattern);
            }
            s
        }
        Format::Json => pretty(json!(cs
            .iter()
            .map(|c| json!({
                "extent": objs(&c.extent),
                "pattern": c.pattern.components().iter().map(|i| i.to_string()).collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>())),
        Format::Csv => {
            let mut s = csv_line(&[vec!["extent".to_string()], ps.components().to_vec()].concat());
            for c in cs {
                let mut row = vec![objs(&c.extent).join(" ")];
                row.extend(c.pattern.components().iter().map(|i| i.to_string()));
                s += &csv_line(&row);
            }
            s
        }
    }
}

fn bmf_out(f: Format, ctx: &FormalContext, fz: &bmf::BooleanFactorization) -> String {
    match f {
        Format::Text => {
            let mut s = format!("{} factors\n", fz.k());
            for (l, c) in fz.factors.iter().enumerate() {
                s += &format!(
                    "F{} {} {}\n",
                    l + 1,
                    set(ctx.object_labels(&c.extent)),
                    set(ctx.attribute_labels(&c.intent))
                );
            }
            s + &format!("P\n{}Q\n{}", fz.p, fz.q)
        }
        Format::Json => pretty(fz.to_json()),
        Format::Csv => {
            let mut s = String::from("factor,extent,intent\n");
            for (l, c) in fz.factors.iter().enumerate() {
                s += &csv_line(&[
                    (l + 1).to_string(),
                    ctx.object_labels(&c.extent).join(" "),
                    ctx.attribute_labels(&c.intent).join(" "),
                ]);
            }
            s
        }
    }
}

fn rank_out(f: Format, ctx: &FormalContext, q: &ir::QueryConcept, ranked: &[ir::RankedResult]) -> String {
    match f {
        Format::Text => {
            let mut s = format!(
                "query concept {} {}\n",
                set(ctx.object_labels(&q.concept.extent)),
                set(ctx.attribute_labels(&q.concept.intent))
            );
            for r in ranked {
                s += &format!("{} {} (distance {})\n", r.rank, ctx.objects()[r.document], r.distance);
            }
            s
        }
        Format::Json => pretty(json!({
            "query": {
                "extent": ctx.object_labels(&q.concept.extent),
                "intent": ctx.attribute_labels(&q.concept.intent),
            },
            "results": ranked
                .iter()
                .map(|r| json!({"object": ctx.objects()[r.document], "distance": r.distance, "rank": r.rank}))
                .collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("rank,object,distance\n");
            for r in ranked {
                s += &csv_line(&[r.rank.to_string(), ctx.objects()[r.document].clone(), r.distance.to_string()]);
            }
            s
        }
    }
}

fn stability_out(f: Format, ctx: &FormalContext, lat: &ConceptLattice, rep: &ir::StabilityReport) -> String {
    let labels = |i: usize| {
        let c = lat.concept(i);
        (ctx.object_labels(&c.extent), ctx.attribute_labels(&c.intent))
    };
    match f {
        Format::Text => {
            let mut s = String::new();
            for sc in &rep.scores {
                let (e, i) = labels(sc.concept);
                s += &format!("{} {} {} sigma {}\n", sc.concept, set(e), set(i), sc.sigma);
            }
            for (i, e) in &rep.skipped {
                s += &format!("{i} skipped: {e}\n");
            }
            s
        }
        Format::Json => pretty(json!({
            "scores": rep.scores.iter().map(|sc| {
                let (e, i) = labels(sc.concept);
                json!({
                    "concept": sc.concept,
                    "extent": e,
                    "intent": i,
                    "sigma": sc.sigma.to_string(),
                    "sigmaValue": to_f64(&sc.sigma),
                })
            }).collect::<Vec<_>>(),
            "skipped": rep.skipped.iter().map(|(i, e)| json!({"concept": i, "reason": e.to_string()})).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("concept,extent,intent,sigma\n");
            for sc in &rep.scores {
                let (e, i) = labels(sc.concept);
                s += &csv_line(&[sc.concept.to_string(), e.join(" "), i.join(" "), sc.sigma.to_string()]);
            }
            s
        }
    }
}

const EXPLORE_HELP: &str = "answers: y (accept) | n LABEL [ATTR ...] (counterexample) | q (quit) | ? (help)";

/// Terminal question loop. Questions go to stderr, so stdout carries only the
/// final result.
fn explore(cli: &Cli, input: &Path, session_path: Option<&Path>) -> Out {
    let mut s = match session_path.filter(|p| p.exists()) {
        Some(p) => {
            let v: serde_json::Value =
                serde_json::from_str(&read(p)?).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            ExplorationSession::from_json(v)?
        }
        None => ExplorationSession::start(load_context(cli, input)?)?,
    };
    let save = |s: &ExplorationSession| -> Result<(), CliError> {
        match session_path {
            Some(p) => fs::write(p, pretty(s.to_json())).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
            None => Ok(()),
        }
    };
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    let mut err = io::stderr();
    let _ = writeln!(err, "{EXPLORE_HELP}");
    while let Some(q) = s.next_question() {
        let rule = s.rule_json(q);
        let _ = writeln!(
            err,
            "Is it true that objects with {} also have {}?",
            set(rule.premise),
            set(rule.conclusion)
        );
        let Some(line) = lines.next() else { break };
        let line = line.map_err(|e| CliError::Input(e.to_string()))?;
        let words: Vec<&str> = line.split_whitespace().collect();
        let answer = match words.as_slice() {
            [] => continue,
            ["y" | "yes"] => Answer::Accept,
            ["n" | "no", label, attrs @ ..] => Answer::Counterexample {
                label: label.to_string(),
                attributes: attrs.iter().map(|a| a.trim_end_matches(',').to_string()).collect(),
            },
            ["q" | "quit"] => break,
            _ => {
                let _ = writeln!(err, "{EXPLORE_HELP}");
                continue;
            }
        };
        match s.answer(answer) {
            Ok(()) => save(&s)?,
            Err(e) => {
                let _ = writeln!(err, "rejected: {e}");
            }
        }
    }
    save(&s)?;
    let ctx = s.context();
    Ok(match cli.format {
        Format::Json => pretty(s.to_json()),
        Format::Csv => String::from_utf8(serialize_context(ctx, ContextFormat::Csv)).expect("utf-8"),
        Format::Text => {
            let mut out = format!(
                "{} after {} answers, {} objects\naccepted implications:\n",
                if s.is_finished() { "finished" } else { "stopped" },
                s.transcript().len(),
                ctx.n_objects()
            );
            for r in s.accepted() {
                out += &format!("  {}\n", r.to_text(ctx));
            }
            out
        }
    })
}
