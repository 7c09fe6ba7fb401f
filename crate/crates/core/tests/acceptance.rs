//! The ten acceptance criteria, each with its runtime budget.
//!
//! One `PASS`/`FAIL` line per criterion goes straight to stderr so it shows
//! up even when the harness captures output.

use std::collections::HashSet;
use std::io::Write;
use std::time::{Duration, Instant};

use l2morse_core::betti::{pd_formula, projective_dimension, total_betti, Field};
use l2morse_core::complex::{pair_position, Face, LabeledComplex, SimplicialComplex};
use l2morse_core::divrel::{minimality_audit, verify_square_characterization, DivRel, Scope};
use l2morse_core::extremal::{extremal_ideal, j_family, power_generators, single_relation};
use l2morse_core::morse::{
    critical_closed_form_l2, is_acyclic, is_homogeneous, matching_l2, morse_complex,
    prune_taylor_first_power, MorseOptions,
};
use l2morse_core::random::{random_ideals, DEFAULT_VARIABLES};
use l2morse_core::suites::{i1, i2, max_critical_dim};

type Outcome = Result<(), String>;
/// Name, runtime budget in seconds, and the check itself.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, want: T, got: T) -> Outcome {
    if want == got {
        Ok(())
    } else {
        Err(format!("{what}: expected {want:?}, got {got:?}"))
    }
}

fn err(e: l2morse_core::Error) -> String {
    e.to_string()
}

fn pad(mut v: Vec<usize>, n: usize) -> Vec<usize> {
    v.resize(n.max(v.len()), 0);
    v
}

fn sq(q: usize, i: usize, j: usize) -> usize {
    pair_position(q, i, j) + 1
}

fn c1_table() -> Outcome {
    let f = SimplicialComplex::l2(4).map_err(err)?.f_vector();
    expect_eq("f(L2_4) tail", vec![10, 27, 32, 19, 6, 1], f[1..].to_vec())?;
    let c = matching_l2(4, 3).map_err(err)?.critical_counts();
    expect_eq("critical cells of M_4", vec![10, 21, 15, 3, 0, 0], c)
}

fn c2_engine() -> Outcome {
    for q in 3..=6 {
        for s in 3..=q {
            let engine = matching_l2(q, s).map_err(err)?.critical();
            let closed = critical_closed_form_l2(q, s).map_err(err)?;
            if engine != closed {
                return Err(format!(
                    "q={q} s={s}: engine has {} cells, closed form {}",
                    engine.len(),
                    closed.len()
                ));
            }
        }
    }
    Ok(())
}

fn c3_acyclic_homogeneous() -> Outcome {
    for q in 3..=6 {
        for s in 3..=q {
            let m = matching_l2(q, s).map_err(err)?;
            if !is_acyclic(&m.matching) {
                return Err(format!("cycle in M_{{{q},{s}}}"));
            }
            if q <= 5 {
                let ideal =
                    power_generators(q, &single_relation(s).map_err(err)?, 2).map_err(err)?;
                let labels = LabeledComplex::new(m.complex.clone(), ideal).map_err(err)?;
                if !is_homogeneous(&m.matching, &labels) {
                    return Err(format!("M_{{{q},{s}}} not homogeneous under E^2"));
                }
            }
        }
    }
    let m = matching_l2(4, 3).map_err(err)?;
    let ideals = random_ideals(4, 3, DEFAULT_VARIABLES, 100, 0).map_err(err)?;
    let bad = ideals
        .iter()
        .filter(|i| {
            let labels = LabeledComplex::new(m.complex.clone(), i.power(2).unwrap()).unwrap();
            !is_homogeneous(&m.matching, &labels)
        })
        .count();
    expect_eq("inhomogeneous random ideals", 0, bad)
}

fn c4_minimality() -> Outcome {
    let e4 = power_generators(4, &single_relation(3).map_err(err)?, 2).map_err(err)?;
    let b4 = total_betti(&e4, Field::Gf2).map_err(err)?;
    expect_eq("beta(E_4D^2)", vec![10, 21, 15, 3], b4.clone())?;
    let crit4 = matching_l2(4, 3).map_err(err)?.critical_counts();
    expect_eq(
        "beta(E_4D^2) vs critical cells",
        pad(b4, crit4.len()),
        crit4,
    )?;
    let e3 = power_generators(3, &single_relation(3).map_err(err)?, 2).map_err(err)?;
    let b3 = total_betti(&e3, Field::Gf2).map_err(err)?;
    expect_eq("beta(E_3D^2)", vec![6, 6, 1], b3.clone())?;
    let crit3 = matching_l2(3, 3).map_err(err)?.critical_counts();
    expect_eq(
        "beta(E_3D^2) vs critical cells",
        pad(b3, crit3.len()),
        crit3,
    )
}

fn c5_examples() -> Outcome {
    let a = i1().power(2).map_err(err)?.minimalize();
    expect_eq(
        "I1^2",
        vec![10, 17, 9, 1],
        pad(total_betti(&a, Field::Gf2).map_err(err)?, 4),
    )?;
    let b = i2().power(2).map_err(err)?.minimalize();
    expect_eq("I2^2 generators", 9, b.len())?;
    expect_eq(
        "I2^2",
        vec![9, 14, 6, 0],
        pad(total_betti(&b, Field::Gf2).map_err(err)?, 4),
    )?;
    let d = j_family(4, 3, &[4]).map_err(err)?;
    let e = power_generators(4, &d, 2).map_err(err)?;
    expect_eq(
        "E_4D'^2",
        vec![10, 21, 14, 2],
        pad(total_betti(&e, Field::Gf2).map_err(err)?, 4),
    )
}

fn c6_pd() -> Outcome {
    for q in 3..=4 {
        for s in 3..=q {
            let (pd1, pd2) = pd_formula(q, s).map_err(err)?;
            let d = single_relation(s).map_err(err)?;
            let e = extremal_ideal(q, &d).map_err(err)?;
            expect_eq(
                &format!("pd E_{q},D s={s}"),
                pd1,
                projective_dimension(&e, Field::Gf2).map_err(err)?,
            )?;
            let e2 = power_generators(q, &d, 2).map_err(err)?;
            expect_eq(
                &format!("pd E_{q},D^2 s={s}"),
                pd2,
                projective_dimension(&e2, Field::Gf2).map_err(err)?,
            )?;
        }
    }
    for q in 3..=6 {
        for s in 3..=q {
            let (_, pd2) = pd_formula(q, s).map_err(err)?;
            expect_eq(
                &format!("max critical dim q={q} s={s}"),
                pd2,
                max_critical_dim(q, s).map_err(err)?,
            )?;
        }
    }
    Ok(())
}

fn c7_characterization() -> Outcome {
    let mut sweeps: Vec<(usize, Option<usize>, Scope)> =
        (1..=3).map(|q| (q, None, Scope::Taylor)).collect();
    sweeps.push((4, Some(3), Scope::L2));
    sweeps.extend((3..=5).map(|s| (5, Some(s), Scope::L2)));
    for (q, s, scope) in sweeps {
        let r = verify_square_characterization(q, s, scope).map_err(err)?;
        expect_eq(
            &format!("counterexamples q={q} s={s:?} {scope:?}"),
            0,
            r.counterexample_count,
        )?;
    }
    for q in 1..=5 {
        let mut cases = vec![None];
        cases.extend((3..=q).map(Some));
        for s in cases {
            let a = minimality_audit(q, s).map_err(err)?;
            if !a.passed {
                return Err(format!(
                    "minimality q={q} s={s:?}: {} missing, {} extra",
                    a.missing.len(),
                    a.extra.len()
                ));
            }
        }
    }
    let quoted = [
        (
            5,
            DivRel::new(
                sq(5, 1, 2),
                [sq(5, 2, 3), sq(5, 3, 4), sq(5, 4, 5), sq(5, 2, 2)],
            ),
        ),
        (
            4,
            DivRel::new(
                sq(5, 1, 5),
                [sq(5, 2, 5), sq(5, 3, 3), sq(5, 4, 4), sq(5, 5, 5)],
            ),
        ),
    ];
    for (s, r) in quoted {
        let r = r.map_err(err)?;
        let a = minimality_audit(5, Some(s)).map_err(err)?;
        expect_eq(
            &format!("4b instance {r} (s={s}) filtered and not minimal"),
            (true, false),
            (a.filtered_4b.contains(&r), a.brute.contains(&r)),
        )?;
    }
    Ok(())
}

fn c8_cell_order() -> Outcome {
    let opts = MorseOptions {
        order: true,
        cross_check: true,
    };
    for (q, s) in [(3, 3), (4, 3), (4, 4), (5, 3)] {
        morse_complex(q, s, opts).map_err(|e| format!("q={q} s={s}: {e}"))?;
    }
    let mc = morse_complex(4, 3, opts).map_err(err)?;
    let f = |pairs: &[(usize, usize)]| {
        Face::from_positions(pairs.iter().map(|&(i, j)| pair_position(4, i, j)))
    };
    let got: HashSet<Face> = mc
        .subcells(f(&[(1, 2), (1, 3), (1, 4), (2, 3)]))
        .into_iter()
        .collect();
    let want: HashSet<Face> = [
        f(&[(1, 2), (1, 3), (2, 3)]),
        f(&[(1, 1), (1, 2), (1, 4)]),
        f(&[(1, 1), (1, 3), (1, 4)]),
        f(&[(1, 3), (1, 4), (2, 3)]),
        f(&[(1, 2), (1, 4), (2, 3)]),
    ]
    .into_iter()
    .collect();
    expect_eq("subcells of the pyramid {12,13,14,23}", want, got)?;
    // {12,13,23} is a square with corners 11, 12, 13, 23
    let got: HashSet<Face> = mc
        .subcells(f(&[(1, 2), (1, 3), (2, 3)]))
        .into_iter()
        .collect();
    let want: HashSet<Face> = [
        f(&[(1, 1), (1, 2)]),
        f(&[(1, 1), (1, 3)]),
        f(&[(1, 3), (2, 3)]),
        f(&[(1, 2), (2, 3)]),
    ]
    .into_iter()
    .collect();
    expect_eq("subcells of the square {12,13,23}", want, got)
}

fn c9_upper_bound() -> Outcome {
    let crit = matching_l2(4, 3).map_err(err)?.critical_counts();
    let mut violations = 0;
    for ideal in random_ideals(4, 3, DEFAULT_VARIABLES, 100, 0).map_err(err)? {
        let b = total_betti(&ideal.power(2).map_err(err)?.minimalize(), Field::Gf2).map_err(err)?;
        if b.iter()
            .enumerate()
            .any(|(i, &x)| x > crit.get(i).copied().unwrap_or(0))
        {
            violations += 1;
        }
    }
    expect_eq("upper-bound violations", 0, violations)
}

fn c10_first_power() -> Outcome {
    let g = prune_taylor_first_power(4, 3).map_err(err)?;
    expect_eq(
        "f(Gamma(4,3)) tail",
        vec![4, 5, 2],
        g.gamma.f_vector()[1..].to_vec(),
    )?;
    for (name, d) in [
        ("D", single_relation(3).map_err(err)?),
        ("J-family D", j_family(4, 3, &[4]).map_err(err)?),
    ] {
        let e = extremal_ideal(4, &d).map_err(err)?;
        expect_eq(
            &format!("beta(E_4 {name})"),
            vec![4, 5, 2],
            total_betti(&e, Field::Gf2).map_err(err)?,
        )?;
        if !g.certify(&e).map_err(err)? {
            return Err(format!("Gamma matching not homogeneous for E_4 {name}"));
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("1 f-vector of L2_4 and critical counts of M_4", 1, c1_table),
        ("2 engine equals closed form, q <= 6", 120, c2_engine),
        ("3 acyclicity and homogeneity", 120, c3_acyclic_homogeneous),
        (
            "4 oracle equals critical counts for extremal squares",
            60,
            c4_minimality,
        ),
        ("5 Betti vectors of the worked examples", 120, c5_examples),
        ("6 projective dimension formulas", 120, c6_pd),
        (
            "7 characterization sweeps and minimality audit",
            300,
            c7_characterization,
        ),
        (
            "8 cell order closed form vs gradient paths",
            180,
            c8_cell_order,
        ),
        ("9 upper bound on random ideals", 120, c9_upper_bound),
        ("10 first-power pruning", 60, c10_first_power),
    ];
    let mut failed = Vec::new();
    let mut stderr = std::io::stderr();
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let mut outcome = run();
        let took = start.elapsed();
        if outcome.is_ok() && took > Duration::from_secs(limit) {
            outcome = Err(format!("took {took:.2?}, budget {limit} s"));
        }
        let line = match &outcome {
            Ok(()) => format!("PASS criterion {name} ({took:.2?})"),
            Err(e) => format!("FAIL criterion {name} ({took:.2?}): {e}"),
        };
        let _ = writeln!(stderr, "{line}");
        if outcome.is_err() {
            failed.push(line);
        }
    }
    assert!(failed.is_empty(), "{}", failed.join("\n"));
}
