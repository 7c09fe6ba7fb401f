//! `l2morse`: command-line front end.
//!
//! Every JSON document carries `"schema": 1`. Exit status is 0 on success,
//! 1 when a verification fails and 2 on bad input or exceeded capacity.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use l2morse_core::betti::{graded_betti, pd_formula, Field};
use l2morse_core::complex::SimplicialComplex;
use l2morse_core::divrel::{all_relations, predicted_square_relations, relation_holds, DivRel};
use l2morse_core::extremal::power_generators;
use l2morse_core::monomial::MonomialIdeal;
use l2morse_core::morse::{matching_l2, morse_complex, MorseOptions};
use l2morse_core::suites::{self, SuiteReport};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(
    name = "l2morse",
    version,
    about = "Divisibility relations, Morse matchings and Betti numbers for squares of square-free monomial ideals"
)]
struct Cli {
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generators of E_{q,D} or a power of it, as an ideal file.
    Extremal {
        #[arg(long)]
        q: usize,
        /// Relation `b:i,j,...`, e.g. `1:2,3`. Repeat for several.
        #[arg(long = "rel")]
        rels: Vec<DivRel>,
        #[arg(long, default_value_t = 1)]
        power: usize,
    },
    /// Divisibility relations held by an ideal (or its square).
    Relations {
        #[arg(long)]
        ideal: PathBuf,
        /// Work with the square, generators in pair order m_1^2, m_1m_2, ...
        #[arg(long)]
        square: bool,
        /// Drop generators divisible by another generator first.
        #[arg(long)]
        minimalize: bool,
    },
    /// The Taylor simplex or L^2_q.
    Complex {
        #[arg(long = "type", value_enum)]
        kind: ComplexKind,
        #[arg(long)]
        q: usize,
        #[arg(long, conflicts_with = "faces")]
        fvector: bool,
        #[arg(long)]
        faces: bool,
    },
    /// Critical cells of M_{q,delta}, the matching, or the cell order.
    Morse {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, value_enum, default_value_t = Emit::Cells)]
        emit: Emit,
    },
    /// Betti numbers of an ideal read from a file.
    Betti {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long, default_value = "gf2")]
        field: Field,
        #[arg(long)]
        graded: bool,
        /// Drop generators divisible by another generator first; without
        /// this, a non-minimal generating set is an error.
        #[arg(long)]
        minimalize: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Projective dimension formulas for E_{q,D} and its square.
    Pd {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        s: usize,
    },
    /// Run one verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        qmax: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// CSV is available for `table1` only.
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Every suite in one document.
    Report {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ComplexKind {
    Taylor,
    L2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Cells,
    Matching,
    Order,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Table1,
    Examples,
    Pd,
    Characterization,
    Engine,
    Random,
    CellOrder,
    FirstPower,
}

/// Bad input or exceeded capacity.
struct Failure(String);

impl From<l2morse_core::Error> for Failure {
    fn from(e: l2morse_core::Error) -> Self {
        Failure(e.to_string())
    }
}

type Run = Result<Output, Failure>;

/// What a command produced, and whether it counts as a pass.
struct Output {
    text: String,
    passed: bool,
}

impl Output {
    fn json(v: Value) -> Self {
        Self::text(serde_json::to_string_pretty(&v).expect("json") + "\n")
    }

    fn text(text: String) -> Self {
        Output { text, passed: true }
    }
}

fn read_ideal(path: &PathBuf) -> Result<MonomialIdeal, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))?;
    Ok(MonomialIdeal::from_json(&text)?)
}

fn ideal_json(ideal: &MonomialIdeal) -> Value {
    let f = ideal.to_file();
    json!({"schema": SCHEMA, "variables": f.variables, "generators": f.generators})
}

fn extremal(q: usize, rels: &[DivRel], power: usize) -> Run {
    Ok(Output::json(ideal_json(&power_generators(q, rels, power)?)))
}

fn relations(path: &PathBuf, square: bool, minimalize: bool) -> Run {
    let base = read_ideal(path)?;
    let q = base.len();
    let mut ideal = if square { base.power(2)? } else { base.clone() };
    if minimalize {
        ideal = ideal.minimalize();
    }
    let report = all_relations(&ideal)?;
    let mut doc = json!({
        "schema": SCHEMA,
        "generators": ideal.to_file().generators,
        "all": report.all,
        "minimal": report.minimal,
        "trivial_count": report.trivial_count,
    });
    if square && !minimalize {
        // the smallest s with (1, {2..s}) on the base ideal, if any
        let s = (3..=q).find(|&s| {
            DivRel::new(1, 2..=s)
                .and_then(|r| relation_holds(&base, &r))
                .unwrap_or(false)
        });
        let predicted = predicted_square_relations(q, s)?;
        let mut bad = Vec::new();
        for p in &predicted {
            if !relation_holds(&ideal, &p.rel)? {
                bad.push(json!({"kind": p.kind, "relation": p.rel}));
            }
        }
        doc["delta_s"] = json!(s);
        doc["predicted_count"] = json!(predicted.len());
        doc["counterexamples"] = Value::Array(bad);
    }
    let passed = doc["counterexamples"].as_array().is_none_or(Vec::is_empty);
    Ok(Output {
        passed,
        ..Output::json(doc)
    })
}

fn complex(kind: ComplexKind, q: usize, faces: bool) -> Run {
    let (c, name) = match kind {
        ComplexKind::Taylor => (SimplicialComplex::taylor(q)?, "taylor"),
        ComplexKind::L2 => (SimplicialComplex::l2(q)?, "l2"),
    };
    let mut doc = json!({
        "schema": SCHEMA,
        "type": name,
        "q": q,
        "vertices": c.vertices(),
        "fvector": c.f_vector(),
    });
    if faces {
        let all: Vec<Vec<Vec<usize>>> = c
            .checked_faces(None, false)?
            .into_iter()
            .map(|f| c.face_to_json(f))
            .collect();
        doc["faces"] = json!(all);
    }
    Ok(Output::json(doc))
}

fn morse(q: usize, s: usize, emit: Emit) -> Run {
    if emit == Emit::Matching {
        let m = matching_l2(q, s)?;
        let edges: Vec<Value> = m
            .matching
            .edges()
            .into_iter()
            .map(|(hi, lo)| json!({"upper": m.complex.face_to_json(hi), "lower": m.complex.face_to_json(lo)}))
            .collect();
        return Ok(Output::json(json!({
            "schema": SCHEMA, "q": q, "s": s,
            "critical_counts": m.critical_counts(),
            "matching": edges,
        })));
    }
    let opts = MorseOptions {
        order: emit != Emit::Cells,
        cross_check: false,
    };
    let mc = morse_complex(q, s, opts)?;
    Ok(match emit {
        Emit::Dot => Output::text(mc.to_dot()),
        Emit::Order => {
            let pairs: Vec<Value> = mc
                .order
                .iter()
                .map(
                    |&(sigma, tau)| json!({"sigma": mc.face_json(sigma), "tau": mc.face_json(tau)}),
                )
                .collect();
            Output::json(
                json!({"schema": SCHEMA, "q": q, "s": s, "counts": mc.counts(), "order": pairs}),
            )
        }
        _ => {
            let cells: Vec<Vec<Vec<[usize; 2]>>> = mc
                .cells
                .iter()
                .map(|layer| layer.iter().map(|&f| mc.face_json(f)).collect())
                .collect();
            Output::json(
                json!({"schema": SCHEMA, "q": q, "s": s, "counts": mc.counts(), "cells": cells}),
            )
        }
    })
}

fn betti(path: &PathBuf, field: Field, graded: bool, minimalize: bool, format: Format) -> Run {
    let read = read_ideal(path)?;
    let ideal = if minimalize {
        read.minimalize()
    } else {
        read.clone()
    };
    let table = graded_betti(&ideal, field)?;
    let totals = table.totals();
    if format == Format::Csv {
        let mut out = String::new();
        if graded {
            out.push_str("i,degree,value\n");
            for e in &table.entries {
                let _ = writeln!(out, "{},{},{}", e.i, e.degree, e.value);
            }
        } else {
            out.push_str("i,beta\n");
            for (i, b) in totals.iter().enumerate() {
                let _ = writeln!(out, "{i},{b}");
            }
        }
        return Ok(Output::text(out));
    }
    let mut doc = json!({
        "schema": SCHEMA,
        "field": field,
        "generators": ideal.len(),
        "dropped_generators": read.len() - ideal.len(),
        "totals": totals,
        "projective_dimension": totals.len() - 1,
    });
    if graded {
        doc["graded"] = json!(table.entries);
    }
    Ok(Output::json(doc))
}

fn pd(q: usize, s: usize) -> Run {
    let (first, square) = pd_formula(q, s)?;
    Ok(Output::json(
        json!({"schema": SCHEMA, "q": q, "s": s, "pd_first_power": first, "pd_square": square}),
    ))
}

fn suite_output(reports: Vec<SuiteReport>) -> Output {
    let passed = reports.iter().all(|r| r.passed);
    for r in &reports {
        for c in &r.checks {
            eprintln!(
                "{} {}: {} (expected {})",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.got,
                c.expected
            );
        }
    }
    let doc = if let [one] = reports.as_slice() {
        let mut v = json!(one);
        v["schema"] = json!(SCHEMA);
        v
    } else {
        json!({"schema": SCHEMA, "passed": passed, "suites": reports})
    };
    Output {
        passed,
        ..Output::json(doc)
    }
}

fn verify(suite: Suite, qmax: Option<usize>, seed: u64, trials: usize, format: Format) -> Run {
    if format == Format::Csv {
        if !matches!(suite, Suite::Table1) {
            return Err(Failure(
                "CSV output exists for the table1 suite only".into(),
            ));
        }
        let report = suites::table1()?;
        let out = suite_output(vec![report]);
        return Ok(Output {
            passed: out.passed,
            ..Output::text(suites::table1_csv()?)
        });
    }
    let report = match suite {
        Suite::Table1 => suites::table1()?,
        Suite::Examples => suites::examples()?,
        Suite::Pd => suites::pd(qmax.unwrap_or(6))?,
        Suite::Characterization => suites::characterization(qmax.unwrap_or(5))?,
        Suite::Engine => suites::engine(qmax.unwrap_or(6))?,
        Suite::Random => suites::random_ideal_suite(seed, trials)?,
        Suite::CellOrder => suites::cell_order()?,
        Suite::FirstPower => suites::first_power()?,
    };
    Ok(suite_output(vec![report]))
}

fn run(cli: &Cli) -> Run {
    match &cli.command {
        Command::Extremal { q, rels, power } => extremal(*q, rels, *power),
        Command::Relations {
            ideal,
            square,
            minimalize,
        } => relations(ideal, *square, *minimalize),
        Command::Complex { kind, q, faces, .. } => complex(*kind, *q, *faces),
        Command::Morse { q, s, emit } => morse(*q, *s, *emit),
        Command::Betti {
            ideal,
            field,
            graded,
            minimalize,
            format,
        } => betti(ideal, *field, *graded, *minimalize, *format),
        Command::Pd { q, s } => pd(*q, *s),
        Command::Verify {
            suite,
            qmax,
            seed,
            trials,
            format,
        } => verify(*suite, *qmax, *seed, *trials, *format),
        Command::Report { seed, trials } => Ok(suite_output(suites::report(*seed, *trials)?)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &out.text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", out.text),
    }
    if out.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
