//! `topkc` — committee elections under top-k-counting scoring rules.
//!
//! Results go to stdout (plain text or `--json`); diagnostics go to stderr.
//! Exit codes: 0 success, 2 parse error, 3 precondition violation,
//! 4 enumeration/voter cap exceeded.

use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::ToPrimitive;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use topkc::axioms::{
    shape_check, empirical_fm_check, fm_condition_check, witness_counting, witness_general,
    AxiomError, ShapeVerdict, EmpiricalFm, FmWitness,
};
use topkc::election::{parse_election, serialize_election, Committee, Election, ElectionFile};
use topkc::fpt::{fpt_voters_winners_capped, FptError, DEFAULT_VOTER_CAP};
use topkc::generators::{
    gen_fixed_majority_profile, gen_from_clique, gen_from_x3c, gen_impartial_culture, Graph,
    X3cInstance,
};
use topkc::scoring::{
    builtin, committee_score, counting_to_owa, format_rational, is_concave, is_convex,
    singularity, CountingFunction, Rule, Score, ScoringError, ScoringEvaluator, Singularity,
};
use topkc::winners::{
    brute_force_winners_capped, greedy_concave, near_perfectionist_winners,
    perfectionist_winners, separable_winners, WinnerError, WinnerResult,
    DEFAULT_ENUMERATION_CAP,
};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "topkc", version, about = "Multiwinner elections with top-k-counting rules")]
struct Cli {
    /// Emit results as JSON on stdout
    #[arg(long, global = true)]
    json: bool,
    /// Seed for commands that generate random instances
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for brute-force enumeration
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Committee-enumeration cap (number of committees)
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u128,
    /// Display scores as decimals (internal arithmetic stays exact)
    #[arg(long, global = true)]
    decimal: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RuleSpec {
    /// Built-in rule: sntv, bloc, k-borda, beta-cc, cc-alpha, perfectionist,
    /// nearly-bloc, pav
    #[arg(long, conflicts_with = "g")]
    rule: Option<String>,
    /// Truncation parameter t for pav (alpha_t-PAV)
    #[arg(long, requires = "rule")]
    t: Option<usize>,
    /// Custom counting function as comma-separated values, e.g. 0,1,1
    #[arg(long)]
    g: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgorithmArg {
    Brute,
    Separable,
    Perfectionist,
    NearPerf,
    Greedy,
    FptVoters,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the winning committees of an election
    Winners {
        /// Election file (first line "m n k", then labels, then one vote per line)
        file: String,
        #[command(flatten)]
        rule: RuleSpec,
        /// Committee size; defaults to the k stored in the file
        #[arg(long)]
        k: Option<usize>,
        /// Force a specific algorithm instead of auto-selection
        #[arg(long)]
        algorithm: Option<AlgorithmArg>,
        /// Slack for the near-perfectionist algorithm (requires k - sing(g) <= q)
        #[arg(long, default_value_t = 2)]
        q: usize,
    },
    /// Score one committee under a rule
    Score {
        file: String,
        #[command(flatten)]
        rule: RuleSpec,
        #[arg(long)]
        k: Option<usize>,
        /// Committee as comma-separated candidate labels, e.g. a,f
        #[arg(long)]
        committee: String,
    },
    /// Analyze a counting function: singularity, shape, fixed-majority verdict, OWA form
    AnalyzeG {
        /// Counting function values, e.g. 0,1,1
        g: String,
    },
    /// Check the fixed-majority property of a rule on a concrete election
    CheckFm {
        file: String,
        #[command(flatten)]
        rule: RuleSpec,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Construct a fixed-majority counterexample election for a failing rule
    Witness {
        #[command(flatten)]
        rule: RuleSpec,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// Output prefix; writes <prefix>.elect and <prefix>.json
        #[arg(long, default_value = "witness")]
        out: String,
    },
    /// Generate an election instance
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Benchmark an algorithm across instance sizes; prints CSV
    Bench {
        /// Suite: brute, greedy, fpt-voters, near-perf
        #[arg(long)]
        suite: String,
        /// Comma-separated sizes (m for brute/greedy/near-perf, n for fpt-voters)
        #[arg(long)]
        sizes: Option<String>,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Impartial culture: n independent uniform orders over m candidates
    Ic {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Profile where a strict majority ranks a planted committee on top
    Fm {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Election encoding an exact-cover-by-3-sets instance
    X3c {
        /// Universe size (multiple of 3); elements are 0-based
        #[arg(long)]
        universe: usize,
        /// Sets as semicolon-separated triples, e.g. "0,1,2;3,4,5"
        #[arg(long)]
        sets: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Election encoding an h-clique instance for a convex rule with finite singularity
    Clique {
        #[arg(long)]
        vertices: usize,
        /// Edges as semicolon-separated pairs, e.g. "0-1;1-2;0-2"
        #[arg(long)]
        edges: String,
        #[arg(long)]
        h: usize,
        /// Counting function values; its length fixes k = (c+2)h
        #[arg(long)]
        g: String,
        /// Clique-size offset c with k = (c+2)h
        #[arg(long)]
        c: usize,
        #[arg(long)]
        out: Option<String>,
    },
}

enum CliError {
    Parse(String),
    Precondition(String),
    Cap(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Cap(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Precondition(m) | CliError::Cap(m) => m,
        }
    }
}

impl From<WinnerError> for CliError {
    fn from(e: WinnerError) -> Self {
        match e {
            WinnerError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<FptError> for CliError {
    fn from(e: FptError) -> Self {
        match e {
            FptError::VoterCapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<ScoringError> for CliError {
    fn from(e: ScoringError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<AxiomError> for CliError {
    fn from(e: AxiomError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

/// Presentation settings shared by all commands.
struct Output {
    json: bool,
    decimal: bool,
}

impl Output {
    fn score(&self, s: Score) -> String {
        if self.decimal {
            format!("{:.6}", s.to_f64().unwrap_or(f64::NAN))
        } else {
            format_rational(s)
        }
    }

    /// Wrap a payload in the versioned run report and print it.
    fn emit(&self, command: &str, fingerprint: Option<&str>, started: Instant, payload: Value) {
        if self.json {
            let report = json!({
                "schema_version": SCHEMA_VERSION,
                "command": command,
                "input_sha256": fingerprint,
                "duration_ms": started.elapsed().as_secs_f64() * 1e3,
                "payload": payload,
            });
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let out = Output { json: cli.json, decimal: cli.decimal };
    match &cli.command {
        Command::Winners { file, rule, k, algorithm, q } => {
            cmd_winners(cli, &out, file, rule, *k, *algorithm, *q)
        }
        Command::Score { file, rule, k, committee } => cmd_score(&out, file, rule, *k, committee),
        Command::AnalyzeG { g } => cmd_analyze(&out, g),
        Command::CheckFm { file, rule, k } => cmd_check_fm(&out, file, rule, *k),
        Command::Witness { rule, m, k, out: prefix } => cmd_witness(&out, rule, *m, *k, prefix),
        Command::Gen { kind } => cmd_gen(cli, &out, kind),
        Command::Bench { suite, sizes } => cmd_bench(cli, suite, sizes.as_deref()),
    }
}

fn read_election(path: &str) -> Result<(ElectionFile, String), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {path}: {e}")))?;
    let file = parse_election(&text).map_err(|e| CliError::Parse(format!("{path}: {e}")))?;
    Ok((file, fingerprint(&text)))
}

fn fingerprint(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    format!("{:x}", h.finalize())
}

fn parse_g(spec: &str) -> Result<CountingFunction, CliError> {
    CountingFunction::parse(spec).map_err(|e| CliError::Parse(format!("counting function: {e}")))
}

/// Resolve `--rule`/`--g` into an evaluator for the given (m, k).
fn resolve_evaluator(spec: &RuleSpec, m: usize, k: usize) -> Result<ScoringEvaluator, CliError> {
    match (&spec.rule, &spec.g) {
        (Some(name), None) => {
            let rule = Rule::parse(name, spec.t)
                .map_err(|e| CliError::Parse(format!("rule: {e}")))?;
            Ok(builtin(rule, m, k)?)
        }
        (None, Some(gspec)) => {
            let g = parse_g(gspec)?;
            if g.k() != k {
                return Err(CliError::Precondition(format!(
                    "counting function has k = {}, election asks for k = {k}",
                    g.k()
                )));
            }
            Ok(ScoringEvaluator::TopKCounting { m, g })
        }
        (Some(_), Some(_)) => Err(CliError::Parse("pass either --rule or --g, not both".into())),
        (None, None) => Err(CliError::Parse("one of --rule or --g is required".into())),
    }
}

/// The auto-selection policy: separable structure first, then the special-case
/// algorithms in order of strength, then brute force.
fn select_algorithm(ev: &ScoringEvaluator, n: usize, k: usize) -> AlgorithmArg {
    if ev.separable_gamma().is_some() {
        return AlgorithmArg::Separable;
    }
    if let Some(g) = ev.counting_function() {
        if Rule::Perfectionist.counting_function(k).as_ref() == Some(g) {
            return AlgorithmArg::Perfectionist;
        }
        if let Ok(Singularity::Finite(s)) = singularity(g) {
            if k - s <= 2 {
                return AlgorithmArg::NearPerf;
            }
        }
        if is_concave(g) {
            return if n <= 14 { AlgorithmArg::FptVoters } else { AlgorithmArg::Greedy };
        }
    }
    AlgorithmArg::Brute
}

fn require_g(ev: &ScoringEvaluator) -> Result<&CountingFunction, CliError> {
    ev.counting_function().ok_or_else(|| {
        CliError::Precondition("this algorithm needs a top-k-counting rule".into())
    })
}

fn run_algorithm(
    cli: &Cli,
    ev: &ScoringEvaluator,
    election: &Election,
    k: usize,
    algorithm: AlgorithmArg,
    q: usize,
) -> Result<WinnerResult, CliError> {
    Ok(match algorithm {
        AlgorithmArg::Brute => {
            brute_force_winners_capped(ev, election, k, cli.cap, cli.threads.max(1))?
        }
        AlgorithmArg::Separable => {
            let gamma = ev.separable_gamma().ok_or_else(|| {
                CliError::Precondition("rule is not weakly separable".into())
            })?;
            separable_winners(gamma, election, k)?
        }
        AlgorithmArg::Perfectionist => {
            let g = require_g(ev)?;
            if Rule::Perfectionist.counting_function(k).as_ref() != Some(g) {
                return Err(CliError::Precondition(
                    "the perfectionist algorithm requires the perfectionist rule".into(),
                ));
            }
            perfectionist_winners(election, k)?
        }
        AlgorithmArg::NearPerf => near_perfectionist_winners(require_g(ev)?, election, k, q)?,
        AlgorithmArg::Greedy => greedy_concave(require_g(ev)?, election, k)?,
        AlgorithmArg::FptVoters => {
            fpt_voters_winners_capped(require_g(ev)?, election, k, DEFAULT_VOTER_CAP)?
        }
    })
}

fn winners_payload(out: &Output, e: &Election, r: &WinnerResult) -> Value {
    json!({
        "winners": r.winners.iter().map(|c| c.labels(e)).collect::<Vec<_>>(),
        "best_score": format_rational(r.best_score),
        "best_score_display": out.score(r.best_score),
        "tie_count": r.winners.len(),
        "algorithm": r.algorithm.to_string(),
        "exact": r.exact,
        "truncated": r.truncated,
    })
}

fn print_winners(out: &Output, e: &Election, r: &WinnerResult) {
    if out.json {
        return;
    }
    for c in &r.winners {
        println!("{{{}}}", c.labels(e).join(","));
    }
    println!("score: {}", out.score(r.best_score));
    println!(
        "ties: {}{}  algorithm: {}  exact: {}",
        r.winners.len(),
        if r.truncated { "+ (truncated)" } else { "" },
        r.algorithm,
        r.exact
    );
}

fn cmd_winners(
    cli: &Cli,
    out: &Output,
    path: &str,
    rule: &RuleSpec,
    k: Option<usize>,
    algorithm: Option<AlgorithmArg>,
    q: usize,
) -> Result<(), CliError> {
    let started = Instant::now();
    let (file, fp) = read_election(path)?;
    let k = k.unwrap_or(file.k);
    let e = file.election;
    let ev = resolve_evaluator(rule, e.num_candidates(), k)?;
    let algorithm = algorithm.unwrap_or_else(|| select_algorithm(&ev, e.num_voters(), k));
    let result = run_algorithm(cli, &ev, &e, k, algorithm, q)?;
    print_winners(out, &e, &result);
    out.emit("winners", Some(&fp), started, winners_payload(out, &e, &result));
    Ok(())
}

fn cmd_score(
    out: &Output,
    path: &str,
    rule: &RuleSpec,
    k: Option<usize>,
    committee: &str,
) -> Result<(), CliError> {
    let started = Instant::now();
    let (file, fp) = read_election(path)?;
    let k = k.unwrap_or(file.k);
    let e = file.election;
    let ev = resolve_evaluator(rule, e.num_candidates(), k)?;
    let members: Vec<usize> = committee
        .split(',')
        .map(|l| {
            e.candidate_by_label(l.trim())
                .ok_or_else(|| CliError::Parse(format!("unknown candidate {l:?}")))
        })
        .collect::<Result<_, _>>()?;
    let c = Committee::new(members)
        .map_err(|e| CliError::Parse(format!("committee: {e}")))?;
    if c.members().len() != k {
        return Err(CliError::Precondition(format!(
            "committee has {} members, k = {k}",
            c.members().len()
        )));
    }
    let s = committee_score(&ev, &e, &c)?;
    if !out.json {
        println!("{}", out.score(s));
    }
    out.emit(
        "score",
        Some(&fp),
        started,
        json!({
            "committee": c.labels(&e),
            "score": format_rational(s),
            "score_display": out.score(s),
        }),
    );
    Ok(())
}

fn cmd_analyze(out: &Output, spec: &str) -> Result<(), CliError> {
    let started = Instant::now();
    let g = parse_g(spec)?;
    let sing = singularity(&g)?;
    let convex = is_convex(&g);
    let concave = is_concave(&g);
    let fm = fm_condition_check(&g);
    let owa = counting_to_owa(&g);
    let verdict = shape_check(&g);
    let sing_str = match sing {
        Singularity::Finite(s) => s.to_string(),
        Singularity::Infinite => "infinite".to_string(),
    };
    let owa_str: Vec<String> = owa.lambdas().iter().map(|&l| out.score(l)).collect();
    if !out.json {
        println!("k: {}", g.k());
        println!("singularity: {sing_str}");
        println!("convex: {convex}  concave: {concave}");
        match &fm.violation {
            None if fm.satisfies => println!("fixed-majority: yes"),
            None => println!("fixed-majority: no (constant counting function)"),
            Some(v) => println!(
                "fixed-majority: no, violated at (k1,k2) = ({},{}) with {} < {}",
                v.k1,
                v.k2,
                out.score(v.lhs),
                out.score(v.rhs)
            ),
        }
        println!("owa: ({})", owa_str.join(","));
        let verdict_str = match verdict {
            ShapeVerdict::FmYes => "convex and nonconstant: fixed-majority holds",
            ShapeVerdict::FmNo => "concave and nonlinear: fixed-majority fails",
            ShapeVerdict::Deferred => "shape test inconclusive; see the full condition",
        };
        println!("shape verdict: {verdict_str}");
    }
    out.emit(
        "analyze-g",
        None,
        started,
        json!({
            "values": g.values().iter().map(|&v| format_rational(v)).collect::<Vec<_>>(),
            "k": g.k(),
            "singularity": sing_str,
            "convex": convex,
            "concave": concave,
            "fixed_majority": fm.satisfies,
            "violation": fm.violation.as_ref().map(|v| json!({
                "k1": v.k1, "k2": v.k2,
                "lhs": format_rational(v.lhs), "rhs": format_rational(v.rhs),
            })),
            "owa": owa_str,
        }),
    );
    Ok(())
}

fn cmd_check_fm(
    out: &Output,
    path: &str,
    rule: &RuleSpec,
    k: Option<usize>,
) -> Result<(), CliError> {
    let started = Instant::now();
    let (file, fp) = read_election(path)?;
    let k = k.unwrap_or(file.k);
    let e = file.election;
    let ev = resolve_evaluator(rule, e.num_candidates(), k)?;
    let outcome = empirical_fm_check(&ev, &e, k)?;
    let (verdict, detail) = match &outcome {
        EmpiricalFm::Pass => ("PASS".to_string(), Value::Null),
        EmpiricalFm::NotApplicable => ("NOT-APPLICABLE".to_string(), Value::Null),
        EmpiricalFm::Fail(r) => ("FAIL".to_string(), winners_payload(out, &e, r)),
    };
    if !out.json {
        match &outcome {
            EmpiricalFm::Pass => println!("PASS: the majority committee wins uniquely"),
            EmpiricalFm::NotApplicable => {
                println!("NOT-APPLICABLE: no strict majority ranks a single committee on top")
            }
            EmpiricalFm::Fail(r) => {
                println!("FAIL: actual winners differ from the majority committee");
                print_winners(out, &e, r);
            }
        }
    }
    out.emit(
        "check-fm",
        Some(&fp),
        started,
        json!({ "verdict": verdict, "winners": detail }),
    );
    Ok(())
}

fn witness_for(spec: &RuleSpec, m: usize, k: usize) -> Result<Option<FmWitness>, CliError> {
    if let Some(gspec) = &spec.g {
        let g = parse_g(gspec)?;
        if g.k() != k {
            return Err(CliError::Precondition(format!(
                "counting function has k = {}, asked for k = {k}",
                g.k()
            )));
        }
        return Ok(witness_counting(&g, m, k)?);
    }
    let ev = resolve_evaluator(spec, m, k)?;
    if let Some(g) = ev.counting_function() {
        Ok(witness_counting(g, m, k)?)
    } else {
        Ok(witness_general(&ev.tabulate()?, m, k)?)
    }
}

fn cmd_witness(
    out: &Output,
    spec: &RuleSpec,
    m: usize,
    k: usize,
    prefix: &str,
) -> Result<(), CliError> {
    let started = Instant::now();
    let Some(w) = witness_for(spec, m, k)? else {
        return Err(CliError::Precondition(
            "no counterexample construction available: no scoring violation found".into(),
        ));
    };
    let e = &w.election;
    let ev = resolve_evaluator(spec, m, k)?;
    let verified = matches!(empirical_fm_check(&ev, e, k)?, EmpiricalFm::Fail(_));

    let text = serialize_election(&ElectionFile { election: e.clone(), k });
    let elect_path = format!("{prefix}.elect");
    let json_path = format!("{prefix}.json");
    fs::write(&elect_path, &text)
        .map_err(|err| CliError::Precondition(format!("cannot write {elect_path}: {err}")))?;
    let sidecar = json!({
        "schema_version": SCHEMA_VERSION,
        "m": m,
        "k": k,
        "n": e.num_voters(),
        "n_used": w.n_used,
        "params": { "first": w.params.0, "second": w.params.1 },
        "majority_committee": w.majority_committee.labels(e),
        "beating_committee": w.beating_committee.labels(e),
        "verified": verified,
    });
    fs::write(&json_path, serde_json::to_string_pretty(&sidecar).unwrap())
        .map_err(|err| CliError::Precondition(format!("cannot write {json_path}: {err}")))?;
    if !out.json {
        println!("wrote {elect_path} and {json_path}");
        println!(
            "majority {{{}}} loses to {{{}}} (n_used = {})",
            w.majority_committee.labels(e).join(","),
            w.beating_committee.labels(e).join(","),
            w.n_used
        );
        println!("self-verification: {}", if verified { "PASS" } else { "FAIL" });
    }
    out.emit(
        "witness",
        Some(&fingerprint(&text)),
        started,
        json!({ "files": [elect_path, json_path], "sidecar": sidecar }),
    );
    if verified {
        Ok(())
    } else {
        Err(CliError::Precondition("witness failed self-verification".into()))
    }
}

fn parse_sets(spec: &str) -> Result<Vec<[usize; 3]>, CliError> {
    spec.split(';')
        .map(|triple| {
            let parts: Vec<usize> = triple
                .split(',')
                .map(|x| x.trim().parse().map_err(|e| CliError::Parse(format!("sets: {e}"))))
                .collect::<Result<_, _>>()?;
            <[usize; 3]>::try_from(parts)
                .map_err(|_| CliError::Parse(format!("set {triple:?} is not a triple")))
        })
        .collect()
}

fn parse_edges(spec: &str) -> Result<Vec<(usize, usize)>, CliError> {
    spec.split(';')
        .map(|pair| {
            let (a, b) = pair
                .split_once('-')
                .ok_or_else(|| CliError::Parse(format!("edge {pair:?}: expected u-v")))?;
            let a = a.trim().parse().map_err(|e| CliError::Parse(format!("edges: {e}")))?;
            let b = b.trim().parse().map_err(|e| CliError::Parse(format!("edges: {e}")))?;
            Ok((a, b))
        })
        .collect()
}

fn write_generated(
    out: &Output,
    started: Instant,
    dest: Option<&str>,
    file: &ElectionFile,
    info: Value,
) -> Result<(), CliError> {
    let text = serialize_election(file);
    match dest {
        Some(path) => {
            fs::write(path, &text)
                .map_err(|e| CliError::Precondition(format!("cannot write {path}: {e}")))?;
            if !out.json {
                println!("wrote {path}");
                println!("{}", compact_info(&info));
            }
        }
        None if !out.json => {
            print!("{text}");
            eprintln!("{}", compact_info(&info));
        }
        None => {}
    }
    let mut payload = info;
    payload["election"] = Value::String(text.clone());
    out.emit("gen", Some(&fingerprint(&text)), started, payload);
    Ok(())
}

fn compact_info(info: &Value) -> String {
    let mut s = String::new();
    if let Value::Object(map) = info {
        for (key, value) in map {
            let _ = write!(s, "{key}: {value}  ");
        }
    }
    s.trim_end().to_string()
}

fn cmd_gen(cli: &Cli, out: &Output, kind: &GenKind) -> Result<(), CliError> {
    let started = Instant::now();
    match kind {
        GenKind::Ic { m, n, k, out: dest } => {
            if *k > *m {
                return Err(CliError::Precondition(format!("k = {k} exceeds m = {m}")));
            }
            let e = gen_impartial_culture(*m, *n, cli.seed);
            let file = ElectionFile { election: e, k: *k };
            write_generated(out, started, dest.as_deref(), &file, json!({ "seed": cli.seed }))
        }
        GenKind::Fm { m, n, k, out: dest } => {
            if 2 * *k > *m {
                return Err(CliError::Precondition(format!("need m >= 2k, got m = {m}, k = {k}")));
            }
            let (e, planted) = gen_fixed_majority_profile(*m, *n, *k, cli.seed);
            let labels = planted.labels(&e);
            let file = ElectionFile { election: e, k: *k };
            write_generated(
                out,
                started,
                dest.as_deref(),
                &file,
                json!({ "seed": cli.seed, "majority_committee": labels }),
            )
        }
        GenKind::X3c { universe, sets, out: dest } => {
            let sets = parse_sets(sets)?;
            let instance = X3cInstance::new(*universe, sets)
                .map_err(|e| CliError::Precondition(e.to_string()))?;
            let gen = gen_from_x3c(&instance);
            let file = ElectionFile { election: gen.election, k: gen.k };
            write_generated(
                out,
                started,
                dest.as_deref(),
                &file,
                json!({
                    "k": gen.k,
                    "target_score": format_rational(gen.target_score),
                    "vacuous_no": gen.vacuous_no,
                }),
            )
        }
        GenKind::Clique { vertices, edges, h, g, c, out: dest } => {
            let graph = Graph::new(*vertices, parse_edges(edges)?)
                .map_err(|e| CliError::Precondition(e.to_string()))?;
            let g = parse_g(g)?;
            let gen = gen_from_clique(&graph, *h, &g, *c)
                .map_err(|e| CliError::Precondition(e.to_string()))?;
            let info = json!({
                "k": gen.k,
                "target": format_rational(gen.target),
                "fixed_no": gen.fixed_no,
                "normalized_g": gen
                    .normalized_g
                    .values()
                    .iter()
                    .map(|&v| format_rational(v))
                    .collect::<Vec<_>>(),
                "private_candidates": gen.is_private.iter().filter(|&&p| p).count(),
            });
            let file = ElectionFile { election: gen.election, k: gen.k };
            write_generated(out, started, dest.as_deref(), &file, info)
        }
    }
}

fn parse_sizes(spec: Option<&str>, default: &[usize]) -> Result<Vec<usize>, CliError> {
    match spec {
        None => Ok(default.to_vec()),
        Some(s) => s
            .split(',')
            .map(|x| x.trim().parse().map_err(|e| CliError::Parse(format!("sizes: {e}"))))
            .collect(),
    }
}

fn cmd_bench(cli: &Cli, suite: &str, sizes: Option<&str>) -> Result<(), CliError> {
    println!("suite,m,n,k,duration_ms,status");
    let row = |suite: &str, m: usize, n: usize, k: usize, r: Result<(), CliError>,
                   elapsed: f64| {
        let status = match r {
            Ok(()) => "ok".to_string(),
            Err(e) => format!("error({})", e.code()),
        };
        println!("{suite},{m},{n},{k},{elapsed:.3},{status}");
    };
    match suite {
        "brute" | "greedy" => {
            let sizes = parse_sizes(sizes, &[10, 12, 14, 16, 18, 20])?;
            for (i, &m) in sizes.iter().enumerate() {
                let (n, k) = (8, 3.min(m / 2));
                let e = gen_impartial_culture(m, n, cli.seed.wrapping_add(i as u64));
                let g = Rule::AlphaKCc.counting_function(k).unwrap();
                let started = Instant::now();
                let r: Result<(), CliError> = if suite == "brute" {
                    let ev = ScoringEvaluator::TopKCounting { m, g };
                    brute_force_winners_capped(&ev, &e, k, cli.cap, cli.threads.max(1))
                        .map(|_| ())
                        .map_err(Into::into)
                } else {
                    greedy_concave(&g, &e, k).map(|_| ()).map_err(Into::into)
                };
                row(suite, m, n, k, r, started.elapsed().as_secs_f64() * 1e3);
            }
        }
        "fpt-voters" => {
            let sizes = parse_sizes(sizes, &[4, 6, 8, 10, 12, 14])?;
            for (i, &n) in sizes.iter().enumerate() {
                let (m, k) = (12, 3);
                let e = gen_impartial_culture(m, n, cli.seed.wrapping_add(i as u64));
                let g = Rule::AlphaKCc.counting_function(k).unwrap();
                let started = Instant::now();
                let r = fpt_voters_winners_capped(&g, &e, k, DEFAULT_VOTER_CAP)
                    .map(|_| ())
                    .map_err(Into::into);
                row(suite, m, n, k, r, started.elapsed().as_secs_f64() * 1e3);
            }
        }
        "near-perf" => {
            let sizes = parse_sizes(sizes, &[10, 20, 30])?;
            for (i, &m) in sizes.iter().enumerate() {
                let (n, k) = (6, 3.min(m / 2));
                let e = gen_impartial_culture(m, n, cli.seed.wrapping_add(i as u64));
                let g = Rule::Perfectionist.counting_function(k).unwrap();
                let started = Instant::now();
                let r = near_perfectionist_winners(&g, &e, k, 1)
                    .map(|_| ())
                    .map_err(Into::into);
                row(suite, m, n, k, r, started.elapsed().as_secs_f64() * 1e3);
            }
        }
        other => {
            return Err(CliError::Parse(format!(
                "unknown suite {other:?}; expected brute, greedy, fpt-voters, near-perf"
            )));
        }
    }
    Ok(())
}
