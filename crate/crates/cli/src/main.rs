mod workspace;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use triad_core::acceptance::{run_all, run_one, DEFAULT_SEED};
use triad_core::analyze::{
    degeneracy_factorization, entropy, genuineness_report, mi_min_cut, mutual_information,
    pendant_check_egview, pendant_theorem_sweep, positive_ternarity_bounds, search_with, Fragment,
    GenuinenessBudgets, SearchBudget, SearchOutcome, SearchVerdict, DEFAULT_MAX_DOMAIN,
};
use triad_core::demo::{demo_give, demo_sell, DemoReport};
use triad_core::exec;
use triad_core::explicate::{expand_pluridentities, explicate, is_subtrivalent, representation_ternarity};
use triad_core::formula::{eval, rectify, to_dot, to_egraph, EGView, Formula, VertexKind};
use triad_core::reduce::{
    delta_decomposition, hypostatic_encode, hypostatic_extend, hypostatic_split, normal_forms,
    pairing_reduction, pdf_to_pcf, place_vars, to_pdf, verify_reduction, Reduction,
};
use triad_core::relcore::{PlacePartition, Relation, RelationFile};

use workspace::Workspace;

const EXIT_USAGE: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "triad",
    version,
    about = "Reduce, explicate and measure finite relations"
)]
struct Cli {
    /// Domain: a JSON file or a comma-separated list (default: the first
    /// relation's domain, else a,b)
    #[arg(long, global = true)]
    domain: Option<String>,

    /// Relation JSON file; may be repeated
    #[arg(long = "rel", global = true)]
    rels: Vec<PathBuf>,

    /// Human-readable output instead of JSON
    #[arg(long, global = true)]
    pretty: bool,

    /// Worker threads for parallel work (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula to a relation
    Eval {
        #[arg(long)]
        formula: String,
        /// Column order, comma-separated (default: first occurrence)
        #[arg(long)]
        vars: Option<String>,
    },
    /// Insert the identities hidden in variable sharing and count triads
    Explicate {
        #[arg(long)]
        formula: String,
    },
    #[command(subcommand)]
    Reduce(ReduceCmd),
    #[command(subcommand)]
    Analyze(AnalyzeCmd),
    /// Graphviz DOT of a formula's existential graph
    Render {
        #[arg(long)]
        formula: String,
    },
    #[command(subcommand)]
    Demo(DemoCmd),
    /// Run the acceptance suite
    Verify {
        /// Only this criterion (1-10)
        #[arg(long)]
        criterion: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum ReduceCmd {
    /// Hypostatic abstraction over an extended domain
    Hypostatic {
        #[arg(long)]
        name: Option<String>,
        /// Split into two relations along these places (1-based, comma-separated)
        #[arg(long)]
        split: Option<String>,
    },
    /// Hypostatic abstraction reusing domain elements (small relations)
    Encode {
        #[arg(long)]
        name: Option<String>,
    },
    /// Pairing reduction of a triad around one junction
    Pairing {
        #[arg(long)]
        name: Option<String>,
    },
    /// Disjunction of delta-monad conjunctions, one per tuple
    Delta {
        #[arg(long)]
        name: Option<String>,
    },
    /// Partitioned disjunctive and conjunctive forms
    Pdf {
        /// Formula to normalize (default: delta decomposition of the relation)
        #[arg(long)]
        formula: Option<String>,
        #[arg(long)]
        name: Option<String>,
        /// Variable blocks, e.g. "x,y|z"
        #[arg(long)]
        blocks: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FragmentArg {
    Positive,
    Full,
}

impl From<FragmentArg> for Fragment {
    fn from(f: FragmentArg) -> Self {
        match f {
            FragmentArg::Positive => Fragment::Positive,
            FragmentArg::Full => Fragment::Full,
        }
    }
}

#[derive(Subcommand)]
enum AnalyzeCmd {
    /// Cartesian factorization
    Degeneracy {
        #[arg(long)]
        name: Option<String>,
    },
    /// Mutual information across every bipartition
    Mi {
        #[arg(long)]
        name: Option<String>,
    },
    /// Bounds on the positive ternarity
    Ternarity {
        #[arg(long)]
        name: Option<String>,
    },
    /// Pendant-vertex check on a formula's graph, or an exhaustive sweep
    Pendants {
        #[arg(long)]
        formula: Option<String>,
        /// Sweep all graphs up to this many vertices
        #[arg(long)]
        sweep: Option<usize>,
    },
    /// Bounded search for a definition without triads
    Search {
        /// Relation name; built-ins such as I3 are accepted
        #[arg(long)]
        name: Option<String>,
        #[arg(long, value_enum, default_value = "positive")]
        fragment: FragmentArg,
        #[arg(long, default_value_t = 5)]
        max_atoms: usize,
        #[arg(long, default_value_t = 6)]
        max_vars: usize,
        #[arg(long)]
        max_candidates: Option<u64>,
    },
    /// Genuineness report for a triad
    Genuine {
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Subcommand)]
enum DemoCmd {
    /// Selling tetrad split into two triads
    Sell,
    /// Giving triad reduced around a triple junction
    Give,
}

struct Out {
    json: Value,
    text: String,
    code: u8,
}

impl Out {
    fn ok(json: Value, text: String) -> Self {
        Out { json, text, code: 0 }
    }
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(|v| v.trim().to_string())
        .filter(|v| !v.is_empty())
        .collect()
}

fn one_based(places: &[usize]) -> Vec<usize> {
    places.iter().map(|p| p + 1).collect()
}

fn max_domain() -> Result<usize> {
    match std::env::var("TRIAD_MAX_DOMAIN") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| anyhow!("TRIAD_MAX_DOMAIN must be a number, got {v:?}")),
        Err(_) => Ok(DEFAULT_MAX_DOMAIN),
    }
}

/// A workspace relation or, failing that, a built-in such as `I3`.
fn resolve(ws: &Workspace, name: Option<&str>) -> Result<Relation> {
    match ws.target(name) {
        Ok(r) => Ok(r.clone()),
        Err(e) => match name {
            Some(n) => ws
                .env()?
                .resolve(n)
                .map(|r| r.into_owned().with_name(n))
                .map_err(|_| e),
            None => Err(e),
        },
    }
}

fn relation_json(r: &Relation) -> Value {
    serde_json::to_value(RelationFile::from_relation(r)).expect("plain data")
}

fn relation_text(r: &Relation) -> String {
    let rows: Vec<String> = r
        .named_tuples()
        .iter()
        .map(|t| format!("({})", t.join(",")))
        .collect();
    format!(
        "{}/{} on {{{}}}: {} tuple(s)\n  {}",
        r.name(),
        r.arity(),
        r.domain().elements().join(","),
        r.len(),
        rows.join(" ")
    )
}

fn reduction_out(red: &Reduction) -> Out {
    let report = verify_reduction(red);
    let ternarity = representation_ternarity(&red.formula);
    let predicates: Vec<Value> = red.env.bindings().values().map(relation_json).collect();
    let json = json!({
        "mode": red.mode,
        "source": red.source.name(),
        "formula": red.formula.to_string(),
        "vars": red.vars,
        "domain": red.env.domain().elements(),
        "predicates": predicates,
        "verify": report,
        "ternarity": ternarity,
        "subtrivalent": is_subtrivalent(&red.formula),
    });
    let mut text = format!(
        "{}({}) ≡ {}\nverified: {}\nternarity: {ternarity}",
        red.source.name(),
        red.vars.join(","),
        red.formula.pretty(),
        if report.equal { "yes" } else { "NO" }
    );
    if let Some(cx) = &report.counterexample {
        text.push_str(&format!(
            "\ncounterexample: ({}) {}",
            cx.tuple.join(","),
            if cx.in_source { "missed" } else { "spurious" }
        ));
    }
    for r in red.env.bindings().values() {
        text.push('\n');
        text.push_str(&relation_text(r));
    }
    Out {
        json,
        text,
        code: if report.equal { 0 } else { EXIT_VERIFY },
    }
}

fn parse_blocks(layout: &str) -> Vec<Vec<String>> {
    layout
        .split('|')
        .map(split_list)
        .filter(|b| !b.is_empty())
        .collect()
}

fn cmd_eval(ws: &Workspace, formula: &str, vars: Option<&str>) -> Result<Out> {
    let f = ws.parse(formula)?;
    let order = vars.map(split_list);
    let r = eval(&f, &ws.env()?, order.as_deref())?.with_name("result");
    Ok(Out::ok(relation_json(&r), relation_text(&r)))
}

fn cmd_explicate(ws: &Workspace, formula: &str) -> Result<Out> {
    let f = ws.parse(formula)?;
    let rect = rectify(&f);
    let report = explicate(&rect)?;
    let expanded = expand_pluridentities(&report.output);
    let inserted: Vec<Value> = report
        .inserted
        .iter()
        .map(|(v, n)| json!({"var": v, "adicity": n}))
        .collect();
    let json = json!({
        "input": f.to_string(),
        "rectified": rect.to_string(),
        "explicated": report.output.to_string(),
        "expanded": expanded.to_string(),
        "inserted": inserted,
        "triad_count": report.triad_count,
        "subtrivalent": is_subtrivalent(&f),
    });
    let text = format!(
        "explicated: {}\nexpanded:   {}\ntriads: {}",
        report.output.pretty(),
        expanded.pretty(),
        report.triad_count
    );
    Ok(Out::ok(json, text))
}

fn cmd_reduce(ws: &Workspace, cmd: &ReduceCmd) -> Result<Out> {
    let red = match cmd {
        ReduceCmd::Hypostatic { name, split } => {
            let r = resolve(ws, name.as_deref())?;
            match split {
                Some(s) => {
                    let first = split_list(s)
                        .iter()
                        .map(|p| match p.parse::<usize>() {
                            Ok(k) if k >= 1 => Ok(k - 1),
                            _ => Err(anyhow!("--split takes 1-based places, got {p:?}")),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    hypostatic_split(&r, &first)?
                }
                None => hypostatic_extend(&r)?,
            }
        }
        ReduceCmd::Encode { name } => hypostatic_encode(&resolve(ws, name.as_deref())?)?,
        ReduceCmd::Pairing { name } => pairing_reduction(&resolve(ws, name.as_deref())?)?,
        ReduceCmd::Delta { name } => delta_decomposition(&resolve(ws, name.as_deref())?)?,
        ReduceCmd::Pdf {
            formula,
            name,
            blocks,
        } => return cmd_pdf(ws, formula.as_deref(), name.as_deref(), blocks),
    };
    Ok(reduction_out(&red))
}

fn cmd_pdf(ws: &Workspace, formula: Option<&str>, name: Option<&str>, blocks: &str) -> Result<Out> {
    let blocks = parse_blocks(blocks);
    if let Some(text) = formula {
        let f = rectify(&ws.parse(text)?);
        let env = ws.env()?;
        let pdf = to_pdf(&f, &env, &blocks)?;
        let pcf = pdf_to_pcf(&pdf);
        let vars = f.free_vars();
        let want = eval(&f, &env, Some(&vars))?;
        let (p, c) = (pdf.to_formula(), pcf.to_formula());
        let equal = eval(&p, &env, Some(&vars)).map(|r| r == want).unwrap_or(false)
            && triad_core::formula::eval_over(&c, &env, &vars)
                .map(|r| r == want)
                .unwrap_or(false);
        let json = json!({"pdf": p.to_string(), "pcf": c.to_string(), "disjuncts": pdf.disjuncts.len(),
                          "clauses": pcf.clauses.len(), "equal": equal});
        let text = format!(
            "PDF: {}\nPCF: {}\nequivalent: {}",
            p.pretty(),
            c.pretty(),
            if equal { "yes" } else { "NO" }
        );
        return Ok(Out {
            json,
            text,
            code: if equal { 0 } else { EXIT_VERIFY },
        });
    }
    let r = resolve(ws, name)?;
    let red = delta_decomposition(&r)?;
    let expected = place_vars(r.arity());
    if blocks.iter().flatten().any(|v| !expected.contains(v)) {
        bail!("blocks must use the place variables {}", expected.join(","));
    }
    let (pdf, pcf) = normal_forms(&red, &blocks)?;
    let (a, b) = (reduction_out(&pdf), reduction_out(&pcf));
    Ok(Out {
        code: a.code.max(b.code),
        json: json!({"pdf": a.json, "pcf": b.json}),
        text: format!("{}\n\n{}", a.text, b.text),
    })
}

fn verdict_json(v: &SearchVerdict) -> Value {
    let (outcome, witness) = match &v.outcome {
        SearchOutcome::ReducedBy(w) => {
            let preds: Vec<Value> = w.reduction.env.bindings().values().map(relation_json).collect();
            (
                "reduced",
                json!({"formula": w.reduction.formula.to_string(), "vars": w.reduction.vars,
                       "atoms": w.atoms, "variables": w.vars, "predicates": preds}),
            )
        }
        SearchOutcome::ExhaustedNoWitness { complete: true } => ("exhausted", Value::Null),
        SearchOutcome::ExhaustedNoWitness { complete: false } => ("truncated", Value::Null),
    };
    json!({"fragment": v.fragment, "budget": v.budget, "outcome": outcome, "witness": witness, "stats": v.stats})
}

fn verdict_text(v: &SearchVerdict) -> String {
    let head = match &v.outcome {
        SearchOutcome::ReducedBy(w) => format!(
            "defined by {} ({} atoms, {} variables)",
            w.reduction.formula.pretty(),
            w.atoms,
            w.vars
        ),
        SearchOutcome::ExhaustedNoWitness { complete: true } => {
            "no definition within budget (exhausted)".to_string()
        }
        SearchOutcome::ExhaustedNoWitness { complete: false } => {
            "candidate cap reached before exhaustion".to_string()
        }
    };
    format!(
        "{} fragment, {} atoms / {} variables: {head}\ncandidates: {}, classes per level {:?}",
        v.fragment, v.budget.max_atoms, v.budget.max_vars, v.stats.candidates, v.stats.distinct_per_level
    )
}

fn vertex_label(g: &EGView, v: usize) -> String {
    match &g.vertices[v].kind {
        VertexKind::Predicate { pred, .. } => format!("{pred}#{v}"),
        VertexKind::Junction { var } => format!("junction {var}"),
        VertexKind::Pendant { var } => format!("pendant {var}"),
    }
}

fn cmd_analyze(ws: &Workspace, cmd: &AnalyzeCmd) -> Result<Out> {
    match cmd {
        AnalyzeCmd::Degeneracy { name } => {
            let r = resolve(ws, name.as_deref())?;
            let factors = degeneracy_factorization(&r)?;
            let json = json!({
                "relation": r.name(),
                "degenerate": factors.len() > 1,
                "factors": factors.iter().map(|f| json!({"places": one_based(&f.places), "relation": relation_json(&f.relation)})).collect::<Vec<_>>(),
            });
            let mut text = format!(
                "{}: {}",
                r.name(),
                if factors.len() > 1 {
                    "degenerate"
                } else {
                    "non-degenerate"
                }
            );
            for f in &factors {
                text.push_str(&format!(
                    "\nplaces {:?}: {}",
                    one_based(&f.places),
                    relation_text(&f.relation)
                ));
            }
            Ok(Out::ok(json, text))
        }
        AnalyzeCmd::Mi { name } => {
            let r = resolve(ws, name.as_deref())?;
            let all: Vec<usize> = (0..r.arity()).collect();
            let mut cuts = Vec::new();
            let mut text = format!("{}: H = {:.6} bits", r.name(), entropy(&r, &all)?);
            for cut in PlacePartition::all_bipartitions(r.arity()) {
                let mi = mutual_information(&r, &cut)?;
                let blocks: Vec<Vec<usize>> = cut.blocks().iter().map(|b| one_based(b)).collect();
                text.push_str(&format!("\n{blocks:?}: {mi:.6}"));
                cuts.push(json!({"blocks": blocks, "mi": mi}));
            }
            let (min, cut) = mi_min_cut(&r)?;
            let min_blocks: Vec<Vec<usize>> = cut.blocks().iter().map(|b| one_based(b)).collect();
            text.push_str(&format!("\nmin cut {min_blocks:?}: {min:.6}"));
            Ok(Out::ok(
                json!({"relation": r.name(), "cuts": cuts, "min_cut": {"blocks": min_blocks, "mi": min}}),
                text,
            ))
        }
        AnalyzeCmd::Ternarity { name } => {
            let r = resolve(ws, name.as_deref())?;
            let b = positive_ternarity_bounds(&r)?;
            let mut json = serde_json::to_value(&b)?;
            if let Some(blocks) = json.get_mut("blocks").and_then(Value::as_array_mut) {
                for (v, block) in blocks.iter_mut().zip(&b.blocks) {
                    v["places"] = json!(one_based(&block.places));
                }
            }
            let upper = b.upper.map_or("unknown".to_string(), |u| u.to_string());
            let mut text = format!(
                "{}: positive ternarity in [{}, {upper}]\n{}",
                r.name(),
                b.lower,
                b.lower_argument
            );
            if let Some(f) = &b.upper_formula {
                text.push_str(&format!("\nupper bound by {f}"));
            }
            Ok(Out::ok(json, text))
        }
        AnalyzeCmd::Pendants { formula, sweep } => match (formula, sweep) {
            (Some(text), None) => {
                let f = ws.parse(text)?;
                let g = to_egraph(&f);
                let pendants: Vec<String> = g.pendants().iter().map(|&v| vertex_label(&g, v)).collect();
                let check = pendant_check_egview(&g);
                let witness = check
                    .as_ref()
                    .ok()
                    .map(|&v| json!({"vertex": vertex_label(&g, v), "valency": g.degree(v)}));
                let text = match &check {
                    Ok(v) => format!(
                        "{} pendants; {} has valency {}",
                        pendants.len(),
                        vertex_label(&g, *v),
                        g.degree(*v)
                    ),
                    Err(e) => format!("{} pendants; {e}", pendants.len()),
                };
                Ok(Out::ok(
                    json!({"pendants": pendants, "witness": witness,
                                  "reason": check.err().map(|e| e.to_string())}),
                    text,
                ))
            }
            (None, Some(n)) => {
                let s = pendant_theorem_sweep(*n);
                let text = format!(
                    "{} graphs, {} connected, {} with three pendants, {} counterexamples, {} witness failures",
                    s.graphs, s.connected, s.with_three_pendants, s.counterexamples, s.witness_failures
                );
                let code = if s.holds() { 0 } else { EXIT_VERIFY };
                Ok(Out {
                    json: serde_json::to_value(&s)?,
                    text,
                    code,
                })
            }
            _ => bail!("give exactly one of --formula and --sweep"),
        },
        AnalyzeCmd::Search {
            name,
            fragment,
            max_atoms,
            max_vars,
            max_candidates,
        } => {
            let r = resolve(ws, name.as_deref())?;
            let budget = SearchBudget {
                max_atoms: *max_atoms,
                max_vars: *max_vars,
                max_candidates: *max_candidates,
            };
            let v = search_with(&r, (*fragment).into(), budget, max_domain()?)?;
            let code = if v.witness().is_some() { 0 } else { EXIT_BUDGET };
            Ok(Out {
                json: verdict_json(&v),
                text: verdict_text(&v),
                code,
            })
        }
        AnalyzeCmd::Genuine { name } => {
            let r = resolve(ws, name.as_deref())?;
            let budgets = GenuinenessBudgets {
                max_domain: max_domain()?,
                ..GenuinenessBudgets::default()
            };
            let g = genuineness_report(&r, &budgets)?;
            let (mi, cut) = &g.mi_min_cut;
            let cut_blocks: Vec<Vec<usize>> = cut.blocks().iter().map(|b| one_based(b)).collect();
            let json = json!({
                "relation": r.name(),
                "degenerate": g.degenerate,
                "factors": g.factors.iter().map(|f| json!({"places": one_based(&f.places), "tuples": f.relation.len()})).collect::<Vec<_>>(),
                "clusters": g.clusters,
                "mi_min_cut": {"blocks": cut_blocks, "mi": mi},
                "positive": verdict_json(&g.positive),
                "full": verdict_json(&g.full),
                "subset_chain": g.subset_chain,
                "general_ternarity": {"lower": g.general_lower, "upper": g.general_upper},
            });
            let text = format!(
                "{}: {}\nclusters {:?}, min-cut MI {mi:.6} at {cut_blocks:?}\n{}\n{}\nsubset chain: {:?}\ngeneral ternarity in [{}, {}]",
                r.name(),
                if g.degenerate { "degenerate" } else { "non-degenerate" },
                g.clusters,
                verdict_text(&g.positive),
                verdict_text(&g.full),
                g.subset_chain,
                g.general_lower,
                g.general_upper.map_or("unknown".to_string(), |u| u.to_string())
            );
            Ok(Out::ok(json, text))
        }
    }
}

fn demo_out(d: &DemoReport) -> Out {
    let text = format!(
        "{}({}) ≡ {}\nverified: {}\nexplicated: {}\nternarity: {} (expected {})",
        d.source,
        (1..=d.arity)
            .map(|k| format!("x{k}"))
            .collect::<Vec<_>>()
            .join(","),
        d.formula,
        if d.verify.equal { "yes" } else { "NO" },
        d.explicated,
        d.ternarity,
        d.expected_ternarity
    );
    Out {
        json: serde_json::to_value(d).expect("plain data"),
        text,
        code: if d.passed() { 0 } else { EXIT_VERIFY },
    }
}

fn cmd_verify(criterion: Option<usize>, seed: u64) -> Result<Out> {
    let results = match criterion {
        Some(id) => vec![run_one(id, seed).ok_or_else(|| anyhow!("no criterion {id}; use 1-10"))?],
        None => run_all(seed),
    };
    let failed = results.iter().filter(|r| !r.passed).count();
    let mut text: Vec<String> = results.iter().map(|r| r.to_string()).collect();
    text.push(format!("{} passed, {failed} failed", results.len() - failed));
    Ok(Out {
        json: json!({"seed": seed, "results": results, "failed": failed}),
        text: text.join("\n"),
        code: if failed == 0 { 0 } else { EXIT_VERIFY },
    })
}

fn run(cli: &Cli) -> Result<Out> {
    if let Command::Verify { criterion, seed } = &cli.command {
        return cmd_verify(*criterion, *seed);
    }
    if let Command::Demo(d) = &cli.command {
        return Ok(demo_out(&match d {
            DemoCmd::Sell => demo_sell()?,
            DemoCmd::Give => demo_give()?,
        }));
    }
    let ws = Workspace::load(cli.domain.as_deref(), &cli.rels)?;
    match &cli.command {
        Command::Eval { formula, vars } => cmd_eval(&ws, formula, vars.as_deref()),
        Command::Explicate { formula } => cmd_explicate(&ws, formula),
        Command::Reduce(cmd) => cmd_reduce(&ws, cmd),
        Command::Analyze(cmd) => cmd_analyze(&ws, cmd),
        Command::Render { formula } => {
            let f: Formula = ws.parse(formula)?;
            let dot = to_dot(&to_egraph(&f));
            Ok(Out::ok(Value::String(dot.clone()), dot))
        }
        Command::Verify { .. } | Command::Demo(_) => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let render = matches!(cli.command, Command::Render { .. });
    match exec::with_jobs(cli.jobs, || run(&cli)) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe (e.g. `| head`) is not an error
            let _ = if render {
                write!(stdout, "{}", out.text)
            } else if cli.pretty {
                writeln!(stdout, "{}", out.text)
            } else {
                writeln!(stdout, "{}", out.json)
            };
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
