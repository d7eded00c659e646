//! Command-line surface: stability checks, certified constructions,
//! corpus generation, and the property suite.
//!
//! Exit codes: 0 pass, 1 witness/failure, 2 inconclusive or degenerate,
//! 3 malformed input or missing corpus, 4 invalid parameters or
//! dimension mismatch.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use stabpoly::constructions::{
    det_pencil_poly, johnson_sum, random_pencil, recurrence_chain, JohnsonPencil, RecurrenceSpec,
};
use stabpoly::corpus::{build_corpus, is_multiaffine, read_corpus, write_corpus, CorpusEntry};
use stabpoly::operators::apply_neg_partial;
use stabpoly::stability::{
    bilinear_exact, coeff_necessary, hb_test, rayleigh_check, rayleigh_default_points,
    test_interlace, test_stable, BilinearVerdict, Verdict, DEFAULT_SEED,
};
use stabpoly::{MultiPoly, SampleConfig, VerdictTag};

#[derive(Parser)]
#[command(name = "stabpoly", about = "Stable polynomial toolkit", version)]
struct Cli {
    /// Number of sampled lines per stability test
    #[arg(long, global = true)]
    lines: Option<u32>,
    /// Base RNG seed (precedence: flag, then STABPOLY_SEED, then default)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Margin tolerance for verdicts
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a stability-related check on polynomial JSON input
    Check {
        #[command(subcommand)]
        kind: CheckKind,
    },
    /// Construct a certified-stable polynomial and write it as JSON
    Construct {
        #[command(subcommand)]
        family: ConstructFamily,
    },
    /// Generate the golden corpus directory
    Corpus {
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the property suite against a corpus directory
    Suite {
        /// Corpus directory (as produced by `corpus`)
        #[arg(long)]
        corpus: PathBuf,
        /// Only run suite items whose id contains this substring
        #[arg(long)]
        filter: Option<String>,
    },
}

#[derive(Subcommand)]
enum CheckKind {
    /// Sampled membership test for stability
    Stable(CheckInput),
    /// Sampled interlacing test f <- g (g from --with)
    Interlace(CheckWith),
    /// Hermite-Biehler split agreement test
    Hb(CheckInput),
    /// Exact criterion for real bilinear a + bx + cy + dxy
    Bilinear(CheckInput),
    /// Rayleigh difference sign on sampled non-negative points
    Rayleigh(CheckInput),
    /// Coefficient necessary conditions (slices, grid, top phase)
    Coeffs(CheckInput),
}

#[derive(Args)]
struct CheckInput {
    /// Input polynomial JSON file
    #[arg(long = "in")]
    input: PathBuf,
    /// Optional report destination ("-" for stdout, the default)
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct CheckWith {
    #[arg(long = "in")]
    input: PathBuf,
    /// Second polynomial JSON file
    #[arg(long = "with")]
    with: PathBuf,
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Subcommand)]
enum ConstructFamily {
    /// Determinantal pencil |S + iE + sum x_k D_k|
    Pencil {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Include a random PSD imaginary part E
        #[arg(long)]
        with_e: bool,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Mixed-determinant sum over m pencils
    Johnson {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Orthogonal-style recurrence chain; emits the last member
    Recurrence {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        steps: usize,
        /// Use unit constants (a = 1, b = 0, c = 1) instead of random ones
        #[arg(long)]
        unit: bool,
        #[arg(long, default_value = "-")]
        out: String,
    },
}

const EXIT_PASS: u8 = 0;
const EXIT_WITNESS: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_BAD_INPUT: u8 = 3;
const EXIT_BAD_PARAMS: u8 = 4;

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("STABPOLY_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(DEFAULT_SEED)
}

fn config_of(cli: &Cli) -> SampleConfig {
    let mut cfg = SampleConfig::default();
    if let Some(n) = cli.lines {
        cfg.num_lines = n;
    }
    cfg.seed = resolve_seed(cli.seed);
    if let Some(t) = cli.tol {
        cfg.tol = t;
    }
    cfg
}

fn config_echo(cfg: &SampleConfig) -> Value {
    json!({"seed": cfg.seed, "tol": cfg.tol, "num_lines": cfg.num_lines})
}

fn report(command: &str, cfg: &SampleConfig, body: Value) -> Value {
    json!({"command": command, "config": config_echo(cfg), "report": body})
}

fn emit(out: &str, report: &Value) -> Result<(), String> {
    let text = serde_json::to_string_pretty(report).expect("report JSON");
    if out == "-" {
        println!("{text}");
        Ok(())
    } else {
        fs::write(out, text + "\n").map_err(|e| format!("{out}: {e}"))
    }
}

fn load_poly(path: &Path) -> Result<MultiPoly, u8> {
    let raw = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_BAD_INPUT
    })?;
    MultiPoly::from_json(&raw).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_BAD_INPUT
    })
}

fn verdict_value(v: &Verdict) -> Value {
    serde_json::from_str(&v.to_json()).expect("verdict JSON")
}

fn verdict_exit(v: &Verdict) -> u8 {
    match v.tag {
        VerdictTag::StableLikely => EXIT_PASS,
        VerdictTag::UnstableWitness => EXIT_WITNESS,
        VerdictTag::ZeroPolynomial => EXIT_INCONCLUSIVE,
    }
}

fn run_check(kind: &CheckKind, cfg: &SampleConfig) -> Result<(Value, String, u8), u8> {
    match kind {
        CheckKind::Stable(io) => {
            let f = load_poly(&io.input)?;
            let v = test_stable(&f, cfg);
            // no line produced usable evidence: inconclusive
            let code = if v.tag == VerdictTag::StableLikely
                && v.lines_checked > 0
                && v.inconclusive_lines == v.lines_checked
            {
                EXIT_INCONCLUSIVE
            } else {
                verdict_exit(&v)
            };
            Ok((json!({"verdict": verdict_value(&v)}), io.out.clone(), code))
        }
        CheckKind::Interlace(io) => {
            let f = load_poly(&io.input)?;
            let g = load_poly(&io.with)?;
            let v = test_interlace(&f, &g, cfg).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_BAD_PARAMS
            })?;
            Ok((json!({"verdict": verdict_value(&v)}), io.out.clone(), verdict_exit(&v)))
        }
        CheckKind::Hb(io) => {
            let f = load_poly(&io.input)?;
            let rep = hb_test(&f, cfg).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_BAD_PARAMS
            })?;
            let code = if !rep.agree() || rep.direct.is_witness() {
                EXIT_WITNESS
            } else if rep.direct.tag == VerdictTag::ZeroPolynomial {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_PASS
            };
            let body = json!({
                "direct": verdict_value(&rep.direct),
                "split": verdict_value(&rep.split),
                "agree": rep.agree(),
            });
            Ok((body, io.out.clone(), code))
        }
        CheckKind::Bilinear(io) => {
            let f = load_poly(&io.input)?;
            let v = bilinear_exact(&f).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_BAD_PARAMS
            })?;
            let (tag, code) = match v {
                BilinearVerdict::Stable => ("Stable", EXIT_PASS),
                BilinearVerdict::Unstable => ("Unstable", EXIT_WITNESS),
                BilinearVerdict::DegenerateProduct => ("DegenerateProduct", EXIT_INCONCLUSIVE),
            };
            Ok((json!({"verdict": tag}), io.out.clone(), code))
        }
        CheckKind::Rayleigh(io) => {
            let f = load_poly(&io.input)?;
            let d = f.nvars();
            if d < 2 {
                eprintln!("error: rayleigh check needs at least 2 variables");
                return Err(EXIT_BAD_PARAMS);
            }
            let points = rayleigh_default_points(d, cfg.seed);
            let mut min = f64::INFINITY;
            let mut min_pair = (0, 1);
            for i in 0..d {
                for j in (i + 1)..d {
                    let (m, _) = rayleigh_check(&f, i, j, &points).map_err(|e| {
                        eprintln!("error: {e}");
                        EXIT_BAD_PARAMS
                    })?;
                    if m < min {
                        min = m;
                        min_pair = (i, j);
                    }
                }
            }
            let pass = min >= -cfg.tol;
            let body = json!({
                "min_delta": min,
                "min_pair": [min_pair.0, min_pair.1],
                "pass": pass,
            });
            Ok((body, io.out.clone(), if pass { EXIT_PASS } else { EXIT_WITNESS }))
        }
        CheckKind::Coeffs(io) => {
            let f = load_poly(&io.input)?;
            let rep = coeff_necessary(&f, cfg).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_BAD_PARAMS
            })?;
            let items = |v: &[stabpoly::stability::CheckItem]| -> Value {
                Value::Array(
                    v.iter()
                        .map(|c| json!({"id": c.id, "pass": c.pass, "value": c.value}))
                        .collect(),
                )
            };
            let body = json!({
                "pass": rep.pass(),
                "adjacent_interlace": items(&rep.adjacent_interlace),
                "grid_inequality": items(&rep.grid_inequality),
                "top_phase": {
                    "id": rep.top_phase.id,
                    "pass": rep.top_phase.pass,
                    "value": rep.top_phase.value,
                },
            });
            let code = if rep.pass() { EXIT_PASS } else { EXIT_WITNESS };
            Ok((body, io.out.clone(), code))
        }
    }
}

fn run_construct(family: &ConstructFamily, cfg: &SampleConfig) -> Result<(Value, String, u8), u8> {
    let bad = |e: String| {
        eprintln!("error: {e}");
        EXIT_BAD_PARAMS
    };
    match family {
        ConstructFamily::Pencil { n, d, with_e, out } => {
            if *n == 0 || *n > 8 || *d == 0 || *d > 6 {
                return Err(bad(format!("pencil size out of range: n={n}, d={d}")));
            }
            let pencil = random_pencil(*n, *d, cfg.seed, *with_e);
            let poly = det_pencil_poly(&pencil).map_err(|e| bad(e.to_string()))?;
            let body = json!({
                "family": "pencil",
                "params": {"n": n, "d": d, "with_e": with_e, "seed": cfg.seed},
                "poly": serde_json::from_str::<Value>(&poly.to_json()).unwrap(),
            });
            Ok((body, out.clone(), EXIT_PASS))
        }
        ConstructFamily::Johnson { n, m, d, out } => {
            if *n == 0 || *n > 8 || *m == 0 || *d == 0 || *d > 6 {
                return Err(bad(format!("johnson size out of range: n={n}, m={m}, d={d}")));
            }
            let ls: Vec<JohnsonPencil> = (0..*m as u64)
                .map(|k| {
                    let pen = random_pencil(*n, *d, cfg.seed.wrapping_add(k), false);
                    JohnsonPencil { a: pen.s, ds: pen.ds }
                })
                .collect();
            let poly = johnson_sum(&ls, *n).map_err(|e| bad(e.to_string()))?;
            let body = json!({
                "family": "johnson",
                "params": {"n": n, "m": m, "d": d, "seed": cfg.seed},
                "poly": serde_json::from_str::<Value>(&poly.to_json()).unwrap(),
            });
            Ok((body, out.clone(), EXIT_PASS))
        }
        ConstructFamily::Recurrence { d, steps, unit, out } => {
            if *d == 0 || *steps == 0 {
                return Err(bad(format!("recurrence needs d >= 1 and steps >= 1, got d={d}, steps={steps}")));
            }
            let spec = if *unit {
                RecurrenceSpec::unit(*d, *steps)
            } else {
                RecurrenceSpec::random(*d, *steps, cfg.seed)
            };
            let chain = recurrence_chain(&spec).map_err(|e| bad(e.to_string()))?;
            let poly = chain.last().expect("nonempty chain");
            let body = json!({
                "family": "recurrence",
                "params": {"d": d, "steps": steps, "unit": unit, "seed": cfg.seed},
                "poly": serde_json::from_str::<Value>(&poly.to_json()).unwrap(),
            });
            Ok((body, out.clone(), EXIT_PASS))
        }
    }
}

struct SuiteItem {
    id: &'static str,
    run: fn(&[CorpusEntry], &SampleConfig) -> (u32, u32),
}

fn stable_or_zero(v: &Verdict) -> bool {
    v.tag != VerdictTag::UnstableWitness
}

fn suite_members(corpus: &[CorpusEntry], cfg: &SampleConfig) -> (u32, u32) {
    let mut pass = 0;
    let mut fail = 0;
    for e in corpus {
        if stable_or_zero(&test_stable(&e.poly, cfg)) {
            pass += 1;
        } else {
            fail += 1;
        }
    }
    (pass, fail)
}

fn suite_closure_diff(corpus: &[CorpusEntry], cfg: &SampleConfig) -> (u32, u32) {
    let mut pass = 0;
    let mut fail = 0;
    for e in corpus {
        let df = e.poly.partial_derivative(0).expect("var 0 exists");
        if stable_or_zero(&test_stable(&df, cfg)) {
            pass += 1;
        } else {
            fail += 1;
        }
    }
    (pass, fail)
}

fn suite_closure_slice(corpus: &[CorpusEntry], cfg: &SampleConfig) -> (u32, u32) {
    let mut pass = 0;
    let mut fail = 0;
    for e in corpus {
        let deg = e.poly.degree_in(0);
        let slice = e.poly.coefficient_slice(0, deg).expect("valid slice");
        if slice.nvars() == 0 {
            pass += 1;
            continue;
        }
        if stable_or_zero(&test_stable(&slice, cfg)) {
            pass += 1;
        } else {
            fail += 1;
        }
    }
    (pass, fail)
}

fn suite_interlacing_diff(corpus: &[CorpusEntry], cfg: &SampleConfig) -> (u32, u32) {
    let mut pass = 0;
    let mut fail = 0;
    for e in corpus {
        let df = e.poly.partial_derivative(0).expect("var 0 exists");
        match test_interlace(&e.poly, &df, cfg) {
            Ok(v) if stable_or_zero(&v) => pass += 1,
            _ => fail += 1,
        }
    }
    (pass, fail)
}

fn suite_interlacing_recurrence(corpus: &[CorpusEntry], cfg: &SampleConfig) -> (u32, u32) {
    let mut pass = 0;
    let mut fail = 0;
    let chain: Vec<&CorpusEntry> = corpus.iter().filter(|e| e.family == "recurrence").collect();
    for pair in chain.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        // consecutive members of the same chain only
        if a.params["d"] != b.params["d"] {
            continue;
        }
        match test_interlace(&b.poly, &a.poly, cfg) {
            Ok(v) if stable_or_zero(&v) => pass += 1,
            _ => fail += 1,
        }
    }
    (pass, fail)
}

fn suite_rayleigh(corpus: &[CorpusEntry], cfg: &SampleConfig) -> (u32, u32) {
    let mut pass = 0;
    let mut fail = 0;
    for e in corpus {
        if !is_multiaffine(&e.poly) || !e.poly.is_real(1e-12) || e.poly.nvars() < 2 {
            continue;
        }
        let d = e.poly.nvars();
        let points = rayleigh_default_points(d, cfg.seed);
        let mut ok = true;
        for i in 0..d {
            for j in (i + 1)..d {
                match rayleigh_check(&e.poly, i, j, &points) {
                    Ok((min, _)) if min >= -cfg.tol => {}
                    _ => ok = false,
                }
            }
        }
        if ok {
            pass += 1;
        } else {
            fail += 1;
        }
    }
    (pass, fail)
}

fn suite_hb(corpus: &[CorpusEntry], cfg: &SampleConfig) -> (u32, u32) {
    let mut pass = 0;
    let mut fail = 0;
    for e in corpus {
        match hb_test(&e.poly, cfg) {
            Ok(rep) if rep.agree() => pass += 1,
            _ => fail += 1,
        }
    }
    (pass, fail)
}

fn suite_operators(corpus: &[CorpusEntry], cfg: &SampleConfig) -> (u32, u32) {
    let mut pass = 0;
    let mut fail = 0;
    // pair members of equal variable count, capped for runtime
    let mut count = 0;
    for (i, e) in corpus.iter().enumerate() {
        if count >= 50 {
            break;
        }
        let Some(g) = corpus[i + 1..]
            .iter()
            .find(|o| o.poly.nvars() == e.poly.nvars())
        else {
            continue;
        };
        count += 1;
        match apply_neg_partial(&e.poly, &g.poly) {
            Ok(img) if stable_or_zero(&test_stable(&img, cfg)) => pass += 1,
            _ => fail += 1,
        }
    }
    (pass, fail)
}

const SUITE: &[SuiteItem] = &[
    SuiteItem { id: "stability.members", run: suite_members },
    SuiteItem { id: "closure.diff", run: suite_closure_diff },
    SuiteItem { id: "closure.slice", run: suite_closure_slice },
    SuiteItem { id: "interlacing.diff", run: suite_interlacing_diff },
    SuiteItem { id: "interlacing.recurrence", run: suite_interlacing_recurrence },
    SuiteItem { id: "rayleigh.multiaffine", run: suite_rayleigh },
    SuiteItem { id: "hb.split", run: suite_hb },
    SuiteItem { id: "operators.neg_partial", run: suite_operators },
];

fn run_suite(
    dir: &Path,
    filter: Option<&str>,
    cfg: &SampleConfig,
) -> Result<(Value, u8), u8> {
    let corpus = read_corpus(dir).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_BAD_INPUT
    })?;
    let mut results = Vec::new();
    let mut total_fail = 0u32;
    for item in SUITE {
        if let Some(f) = filter {
            if !item.id.contains(f) {
                continue;
            }
        }
        let t0 = Instant::now();
        let (pass, fail) = (item.run)(&corpus, cfg);
        eprintln!("{}: {} pass, {} fail ({:.2?})", item.id, pass, fail, t0.elapsed());
        total_fail += fail;
        results.push(json!({"id": item.id, "pass": pass, "fail": fail}));
    }
    let body = json!({
        "corpus_size": corpus.len(),
        "results": results,
        "total_fail": total_fail,
    });
    Ok((body, if total_fail == 0 { EXIT_PASS } else { EXIT_WITNESS }))
}

fn run(cli: &Cli) -> u8 {
    let cfg = config_of(cli);
    let t0 = Instant::now();
    let outcome: Result<(Value, String, u8), u8> = match &cli.command {
        Command::Check { kind } => {
            let label = match kind {
                CheckKind::Stable(_) => "check stable",
                CheckKind::Interlace(_) => "check interlace",
                CheckKind::Hb(_) => "check hb",
                CheckKind::Bilinear(_) => "check bilinear",
                CheckKind::Rayleigh(_) => "check rayleigh",
                CheckKind::Coeffs(_) => "check coeffs",
            };
            run_check(kind, &cfg).map(|(body, out, code)| (report(label, &cfg, body), out, code))
        }
        Command::Construct { family } => {
            let label = match family {
                ConstructFamily::Pencil { .. } => "construct pencil",
                ConstructFamily::Johnson { .. } => "construct johnson",
                ConstructFamily::Recurrence { .. } => "construct recurrence",
            };
            run_construct(family, &cfg)
                .map(|(body, out, code)| (report(label, &cfg, body), out, code))
        }
        Command::Corpus { out } => {
            let entries = build_corpus(cfg.seed);
            match write_corpus(out, &entries) {
                Ok(()) => {
                    let body = json!({"written": entries.len(), "dir": out.display().to_string()});
                    Ok((report("corpus", &cfg, body), "-".to_string(), EXIT_PASS))
                }
                Err(e) => {
                    eprintln!("error: {}: {e}", out.display());
                    Err(EXIT_BAD_INPUT)
                }
            }
        }
        Command::Suite { corpus, filter } => run_suite(corpus, filter.as_deref(), &cfg)
            .map(|(body, code)| (report("suite", &cfg, body), "-".to_string(), code)),
    };
    let elapsed = t0.elapsed();
    match outcome {
        Ok((rep, out, code)) => {
            if let Err(e) = emit(&out, &rep) {
                eprintln!("error: {e}");
                return EXIT_BAD_INPUT;
            }
            eprintln!("elapsed: {elapsed:.2?}");
            code
        }
        Err(code) => code,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(&cli))
}
