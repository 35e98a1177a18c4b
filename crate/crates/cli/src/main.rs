use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use gptlab::advice::{decide_slice, LanguageSlice};
use gptlab::boxworld::{gbit_theory, is_no_signalling, make_f_box, parity, TruthTable, MAX_PARTIES};
use gptlab::commcc::{det_cc, one_way_cc, verify_van_dam_all, CommTask, MAX_DET_CC_INPUTS};
use gptlab::exact::{format_rational, inv_pow2, one};
use gptlab::theory::{
    check_bit_symmetry, check_causality, check_tomographic_locality, TheoryInstance, Verdict,
};
use gptlab::zoo::{classical_bit_theory, qubit_sampled_theory, rebit_theory};
use gptlab::Error;

#[derive(Parser)]
#[command(name = "gptlab", version, about = "Experiments with generalized probabilistic theories")]
struct Cli {
    /// Flatten the report to a CSV header and row instead of JSON.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check causality, tomographic locality and bit-symmetry of a theory.
    CheckTheory {
        /// boxworld, classical, rebit, qubit, or a path to a theory JSON file.
        theory: String,
        #[arg(long, env = "GPTLAB_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Build an f-box, verify it exactly and sample parities.
    Fbox {
        #[arg(long)]
        n: usize,
        /// Truth table file, a literal 0/1 string, or "random".
        #[arg(long, default_value = "random")]
        f: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, env = "GPTLAB_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Run the one-bit protocol or the classical cost oracles.
    Commcc {
        /// ip, eq, or a task file.
        #[arg(long)]
        task: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Mode::Vandam)]
        mode: Mode,
        #[arg(long, env = "GPTLAB_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Decide a language slice with f-box advice.
    Advice {
        #[arg(long)]
        n: usize,
        /// Truth table file, a literal 0/1 string, or "random".
        #[arg(long, default_value = "random")]
        f: String,
        #[arg(long, env = "GPTLAB_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Vandam,
    Oracle,
}

enum Failure {
    Schema(String),
    Invariant(String),
    SizeCap(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Schema(_) => 2,
            Failure::Invariant(_) => 3,
            Failure::SizeCap(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Schema(m) | Failure::Invariant(m) | Failure::SizeCap(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::LengthMismatch { .. } => Failure::Schema(e.to_string()),
            Error::SizeCap { .. } => Failure::SizeCap(e.to_string()),
            _ => Failure::Invariant(e.to_string()),
        }
    }
}

/// A report plus whether every assertion made while producing it held.
struct Outcome {
    report: Map<String, Value>,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::CheckTheory { theory, seed } => check_theory(&theory, seed),
        Command::Fbox { n, f, samples, seed } => fbox(n, &f, samples, seed),
        Command::Commcc { task, n, mode, seed } => commcc(&task, n, mode, seed),
        Command::Advice { n, f, seed } => advice(n, &f, seed),
    };
    match result {
        Ok(outcome) => {
            if cli.csv {
                print!("{}", to_csv(&outcome.report));
            } else {
                println!("{}", Value::Object(outcome.report));
            }
            ExitCode::from(if outcome.ok { 0 } else { 1 })
        }
        Err(failure) => {
            eprintln!("{}", json!({ "error": failure.message() }));
            ExitCode::from(failure.code())
        }
    }
}

fn named_theory(name: &str, seed: u64) -> Option<(TheoryInstance, [bool; 3])> {
    let entry = match name {
        "boxworld" => (gbit_theory(), [true, true, false]),
        "classical" => (classical_bit_theory(), [true, true, true]),
        "rebit" => (rebit_theory(8).ok()?, [true, false, true]),
        "qubit" => (qubit_sampled_theory(24, seed).ok()?, [true, true, true]),
        _ => return None,
    };
    Some(entry)
}

fn check_theory(name: &str, seed: u64) -> Result<Outcome, Failure> {
    let (theory, expected) = match named_theory(name, seed) {
        Some((t, e)) => (t, Some(e)),
        None => {
            let text = read_file(Path::new(name))?;
            (TheoryInstance::from_json(&text)?, None)
        }
    };

    let mut certificates = Vec::new();
    let record = |certificates: &mut Vec<Value>, v: Verdict| {
        if let Some(c) = v.certificate {
            certificates.push(Value::String(c.to_string()));
        }
        v.holds
    };

    let causality = record(&mut certificates, check_causality(&theory));
    let mut locality = true;
    let mut symmetry = true;
    let systems = theory.systems();
    for (i, a) in systems.iter().enumerate() {
        for b in &systems[i..] {
            if theory.composite_dim(&a.system, &b.system).is_none() {
                locality = false;
                certificates.push(Value::String(format!(
                    "{}: joint dimension not declared",
                    a.system.product(&b.system).label
                )));
                continue;
            }
            locality &= record(&mut certificates, check_tomographic_locality(&theory, &a.system, &b.system)?);
        }
    }
    for spec in systems {
        symmetry &= record(&mut certificates, check_bit_symmetry(&theory, &spec.system)?);
    }

    let got = [causality, locality, symmetry];
    let mut report = Map::new();
    report.insert("causality".into(), causality.into());
    report.insert("tomographic_locality".into(), locality.into());
    report.insert("bit_symmetry".into(), symmetry.into());
    report.insert("mode".into(), theory.mode().as_str().into());
    report.insert("certificates".into(), certificates.into());
    Ok(Outcome {
        report,
        ok: expected.is_none_or(|e| e == got),
    })
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Schema(format!("cannot read {}: {e}", path.display())))
}

/// Resolves `--f`: "random", an existing file, or a literal table.
fn truth_table(n: usize, spec: &str, rng: &mut ChaCha8Rng) -> Result<TruthTable, Failure> {
    if n == 0 || n > MAX_PARTIES {
        return Err(Failure::SizeCap(format!(
            "n = {n} is outside the supported range 1..={MAX_PARTIES}"
        )));
    }
    let table: TruthTable = if spec == "random" {
        TruthTable::random(n, rng)?
    } else if Path::new(spec).is_file() {
        read_file(Path::new(spec))?.trim().parse()?
    } else {
        spec.parse()?
    };
    if table.n() != n {
        return Err(Failure::Schema(format!(
            "truth table has {} entries, expected {}",
            table.len(),
            1usize << n
        )));
    }
    Ok(table)
}

fn fbox(n: usize, f: &str, samples: usize, seed: u64) -> Result<Outcome, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table = truth_table(n, f, &mut rng)?;
    let b = make_f_box(&table)?;

    let nonzero = 1u64 << (n - 1);
    let entries_exact = (0..b.settings())
        .all(|x| b.column(x).iter().all(|&w| w == 0 || w * nonzero == b.denominator()));
    let normalized = (0..b.settings())
        .all(|x| b.column(x).iter().sum::<u64>() == b.denominator());
    let no_signalling = is_no_signalling(&b).is_ok();

    let mut violations = 0usize;
    for _ in 0..samples {
        let x = rng.random_range(0..b.settings());
        let a = b.sample(x, &mut rng);
        if parity(a) != table.eval(x) {
            violations += 1;
        }
    }

    let mut report = Map::new();
    report.insert("n".into(), n.into());
    report.insert("entry".into(), format_rational(&inv_pow2(n - 1)).into());
    report.insert("entries_exact".into(), entries_exact.into());
    report.insert("normalized".into(), normalized.into());
    report.insert("no_signalling".into(), no_signalling.into());
    report.insert("samples".into(), samples.into());
    report.insert("parity_violations".into(), violations.into());
    report.insert("seed".into(), seed.into());
    Ok(Outcome {
        report,
        ok: entries_exact && normalized && no_signalling && violations == 0,
    })
}

fn commcc(task: &str, n: Option<usize>, mode: Mode, seed: u64) -> Result<Outcome, Failure> {
    let task = match task {
        "ip" | "eq" => {
            let n = n.ok_or_else(|| Failure::Schema("--n is required for ip and eq".into()))?;
            if n == 0 || 2 * n > MAX_PARTIES {
                return Err(Failure::SizeCap(format!(
                    "n = {n} is outside the supported range 1..={}",
                    MAX_PARTIES / 2
                )));
            }
            if task == "ip" {
                CommTask::inner_product(n)?
            } else {
                CommTask::equality(n)?
            }
        }
        path => {
            let t: CommTask = read_file(Path::new(path))?.parse()?;
            if let Some(n) = n.filter(|&n| n != t.n()) {
                return Err(Failure::Schema(format!(
                    "task file has n = {}, --n says {n}",
                    t.n()
                )));
            }
            t
        }
    };

    match mode {
        Mode::Vandam => {
            let r = verify_van_dam_all(&task, seed)?;
            let ok = r.correct == r.total && r.max_messages == 1;
            Ok(Outcome {
                report: object(&r),
                ok,
            })
        }
        Mode::Oracle => {
            let det = if task.n() <= MAX_DET_CC_INPUTS {
                Some(det_cc(&task)?)
            } else {
                None
            };
            let mut report = Map::new();
            report.insert("n".into(), task.n().into());
            report.insert("one_way_cc".into(), one_way_cc(&task).into());
            report.insert("det_cc".into(), det.into());
            Ok(Outcome { report, ok: true })
        }
    }
}

fn advice(n: usize, f: &str, seed: u64) -> Result<Outcome, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slice = LanguageSlice::new(truth_table(n, f, &mut rng)?);
    let r = decide_slice(&slice)?;
    let ok = r.agreement == r.total && r.gap == one();
    Ok(Outcome {
        report: object(&r),
        ok,
    })
}

fn object<T: serde::Serialize>(value: &T) -> Map<String, Value> {
    match serde_json::to_value(value) {
        Ok(Value::Object(map)) => map,
        _ => unreachable!("reports serialise to JSON objects"),
    }
}

fn to_csv(report: &Map<String, Value>) -> String {
    let cell = |v: &Value| -> String {
        let raw = match v {
            Value::String(s) => s.clone(),
            Value::Null => String::new(),
            Value::Array(items) => items
                .iter()
                .map(|i| match i {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect::<Vec<_>>()
                .join(";"),
            other => other.to_string(),
        };
        if raw.contains([',', '"', '\n']) {
            format!("\"{}\"", raw.replace('"', "\"\""))
        } else {
            raw
        }
    };
    let header: Vec<&str> = report.keys().map(String::as_str).collect();
    let row: Vec<String> = report.values().map(cell).collect();
    format!("{}\n{}\n", header.join(","), row.join(","))
}
