//! Verification suites shared by the command-line tool and the report:
//! each returns named checks with expected and observed values.

use std::fmt::Debug;

use serde::Serialize;

use crate::betti::{pd_formula, projective_dimension, total_betti, Field};
use crate::complex::{pair_position, Face, LabeledComplex, SimplicialComplex};
use crate::divrel::{minimality_audit, verify_square_characterization, DivRel, Scope};
use crate::error::{Error, Result};
use crate::extremal::{extremal_ideal, j_family, power_generators, single_relation};
use crate::monomial::MonomialIdeal;
use crate::morse::{
    critical_closed_form_l2, is_acyclic, is_homogeneous, matching_l2, morse_complex,
    prune_taylor_first_power, MorseOptions,
};
use crate::random::{random_ideals, DEFAULT_VARIABLES};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub expected: String,
    pub got: String,
}

impl Check {
    pub fn compare<T: PartialEq + Debug>(name: impl Into<String>, expected: T, got: T) -> Self {
        Check {
            name: name.into(),
            passed: expected == got,
            expected: format!("{expected:?}"),
            got: format!("{got:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: &str, checks: Vec<Check>) -> Self {
        SuiteReport {
            suite: suite.into(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }
}

fn pad(mut v: Vec<usize>, n: usize) -> Vec<usize> {
    v.resize(n.max(v.len()), 0);
    v
}

pub fn i1() -> MonomialIdeal {
    MonomialIdeal::parse(
        &["a", "b", "c", "d", "e", "f", "g"],
        &["ab", "bcd", "aef", "cg"],
    )
    .expect("fixed ideal")
}

pub fn i2() -> MonomialIdeal {
    MonomialIdeal::parse(&["a", "b", "c", "d", "e", "f"], &["ab", "bcd", "aef", "ce"])
        .expect("fixed ideal")
}

/// f-vector of `L^2_4` and critical counts of `M_{4,delta}`, `s = 3`.
pub fn table1_rows() -> Result<(Vec<usize>, Vec<usize>)> {
    let f = SimplicialComplex::l2(4)?.f_vector()[1..].to_vec();
    let c = matching_l2(4, 3)?.critical_counts();
    Ok((f, c))
}

pub fn table1() -> Result<SuiteReport> {
    let (f, c) = table1_rows()?;
    Ok(SuiteReport::new(
        "table1",
        vec![
            Check::compare("f-vector of L2_4", vec![10, 27, 32, 19, 6, 1], f),
            Check::compare("critical cells of M_4 (s=3)", vec![10, 21, 15, 3, 0, 0], c),
        ],
    ))
}

/// The f-vector and critical-count rows as CSV: one row per complex, one column per dimension.
pub fn table1_csv() -> Result<String> {
    let (f, c) = table1_rows()?;
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    let header: Vec<String> = (0..f.len()).map(|i| format!("dim{i}")).collect();
    Ok(format!(
        "complex,{}\nL2_4,{}\nL2_4D,{}\n",
        header.join(","),
        join(&f),
        join(&c)
    ))
}

pub fn examples() -> Result<SuiteReport> {
    let i1sq = i1().power(2)?.minimalize();
    let i2sq = i2().power(2)?.minimalize();
    let d2 = j_family(4, 3, &[4])?;
    let d = single_relation(3)?;
    Ok(SuiteReport::new(
        "examples",
        vec![
            Check::compare(
                "I1^2",
                vec![10, 17, 9, 1],
                pad(total_betti(&i1sq, Field::Gf2)?, 4),
            ),
            Check::compare("I2^2 minimal generators", 9, i2sq.len()),
            Check::compare(
                "I2^2",
                vec![9, 14, 6, 0],
                pad(total_betti(&i2sq, Field::Gf2)?, 4),
            ),
            Check::compare(
                "E_{4,D'}^2",
                vec![10, 21, 14, 2],
                pad(total_betti(&power_generators(4, &d2, 2)?, Field::Gf2)?, 4),
            ),
            Check::compare(
                "E_{4,D}^2",
                vec![10, 21, 15, 3],
                total_betti(&power_generators(4, &d, 2)?, Field::Gf2)?,
            ),
            Check::compare(
                "E_{3,D}^2",
                vec![6, 6, 1],
                total_betti(&power_generators(3, &single_relation(3)?, 2)?, Field::Gf2)?,
            ),
            Check::compare(
                "E_3^2",
                vec![6, 9, 4],
                total_betti(&power_generators(3, &[], 2)?, Field::Gf2)?,
            ),
        ],
    ))
}

/// Largest critical face dimension of `M_{q,delta}`.
pub fn max_critical_dim(q: usize, s: usize) -> Result<usize> {
    let cells = critical_closed_form_l2(q, s)?;
    Ok(cells.iter().map(|f| f.len()).max().unwrap_or(1) - 1)
}

pub fn pd(qmax: usize) -> Result<SuiteReport> {
    Error::check_capacity("qmax for the pd suite", 6, qmax)?;
    let mut checks = Vec::new();
    for q in 3..=qmax {
        for s in 3..=q {
            let (pd1, pd2) = pd_formula(q, s)?;
            checks.push(Check::compare(
                format!("max critical dimension q={q} s={s}"),
                pd2,
                max_critical_dim(q, s)?,
            ));
            if q <= 4 {
                let d = single_relation(s)?;
                checks.push(Check::compare(
                    format!("pd E_{{{q},D}} s={s}"),
                    pd1,
                    projective_dimension(&extremal_ideal(q, &d)?, Field::Gf2)?,
                ));
                checks.push(Check::compare(
                    format!("pd E_{{{q},D}}^2 s={s}"),
                    pd2,
                    projective_dimension(&power_generators(q, &d, 2)?, Field::Gf2)?,
                ));
            }
        }
    }
    Ok(SuiteReport::new("pd", checks))
}

fn sq(q: usize, i: usize, j: usize) -> usize {
    pair_position(q, i, j) + 1
}

pub fn characterization(qmax: usize) -> Result<SuiteReport> {
    Error::check_capacity("qmax for the characterization suite", 6, qmax)?;
    let mut checks = Vec::new();
    let mut sweep = |q: usize, s: Option<usize>, scope: Scope| -> Result<()> {
        let r = verify_square_characterization(q, s, scope)?;
        checks.push(Check::compare(
            format!(
                "counterexamples q={q} s={s:?} {scope:?} ({} pairs)",
                r.pairs_checked
            ),
            0,
            r.counterexample_count,
        ));
        Ok(())
    };
    for q in 1..=qmax.min(3) {
        sweep(q, None, Scope::Taylor)?;
    }
    for q in 3..=qmax.min(4) {
        for s in 3..=q {
            sweep(q, Some(s), Scope::Taylor)?;
        }
    }
    for q in 3..=qmax {
        sweep(q, None, Scope::L2)?;
        for s in 3..=q {
            sweep(q, Some(s), Scope::L2)?;
        }
    }
    for q in 1..=qmax.min(5) {
        let a = minimality_audit(q, None)?;
        checks.push(Check::compare(
            format!("minimal relations q={q} D=empty ({})", a.brute.len()),
            (0, 0),
            (a.missing.len(), a.extra.len()),
        ));
        for s in 3..=q {
            let a = minimality_audit(q, Some(s))?;
            checks.push(Check::compare(
                format!("minimal relations q={q} s={s} ({})", a.brute.len()),
                (0, 0),
                (a.missing.len(), a.extra.len()),
            ));
            if q == 5 && s == 5 {
                let r = DivRel::new(
                    sq(5, 1, 2),
                    [sq(5, 2, 3), sq(5, 3, 4), sq(5, 4, 5), sq(5, 2, 2)],
                )?;
                checks.push(Check::compare(
                    "4b instance j=u=2, t=(3,4,5,4) filtered",
                    (true, false),
                    (a.filtered_4b.contains(&r), a.brute.contains(&r)),
                ));
            }
            if q == 5 && s == 4 {
                let r = DivRel::new(
                    sq(5, 1, 5),
                    [sq(5, 2, 5), sq(5, 3, 3), sq(5, 4, 4), sq(5, 5, 5)],
                )?;
                checks.push(Check::compare(
                    "4b instance j=u=5, t=(5,3,4) filtered",
                    (true, false),
                    (a.filtered_4b.contains(&r), a.brute.contains(&r)),
                ));
            }
        }
    }
    Ok(SuiteReport::new("characterization", checks))
}

/// Engine against closed form, acyclicity and homogeneity under extremal labels.
pub fn engine(qmax: usize) -> Result<SuiteReport> {
    Error::check_capacity("qmax for the engine suite", 6, qmax)?;
    let mut checks = Vec::new();
    for q in 3..=qmax {
        for s in 3..=q {
            let m = matching_l2(q, s)?;
            let engine = m.critical();
            checks.push(Check::compare(
                format!("engine = closed form q={q} s={s} ({} cells)", engine.len()),
                true,
                engine == critical_closed_form_l2(q, s)?,
            ));
            checks.push(Check::compare(
                format!("acyclic q={q} s={s}"),
                true,
                is_acyclic(&m.matching),
            ));
            if q <= 5 {
                let labels = LabeledComplex::new(
                    m.complex.clone(),
                    power_generators(q, &single_relation(s)?, 2)?,
                )?;
                checks.push(Check::compare(
                    format!("homogeneous under E^2 q={q} s={s}"),
                    true,
                    is_homogeneous(&m.matching, &labels),
                ));
            }
        }
    }
    Ok(SuiteReport::new("engine", checks))
}

/// Homogeneity of `M_{4,delta}` and the bound `beta_i(I^2) <= #critical
/// i-cells` on seeded random ideals satisfying `(1, {2, 3})`.
pub fn random_ideal_suite(seed: u64, trials: usize) -> Result<SuiteReport> {
    let m = matching_l2(4, 3)?;
    let crit = m.critical_counts();
    let mut inhomogeneous = 0usize;
    let mut violations = 0usize;
    for ideal in random_ideals(4, 3, DEFAULT_VARIABLES, trials, seed)? {
        let sq = ideal.power(2)?;
        let labels = LabeledComplex::new(m.complex.clone(), sq.clone())?;
        if !is_homogeneous(&m.matching, &labels) {
            inhomogeneous += 1;
        }
        let b = total_betti(&sq.minimalize(), Field::Gf2)?;
        if b.iter()
            .enumerate()
            .any(|(i, &x)| x > crit.get(i).copied().unwrap_or(0))
        {
            violations += 1;
        }
    }
    Ok(SuiteReport::new(
        "random",
        vec![
            Check::compare(
                format!("inhomogeneous matchings ({trials} ideals, seed {seed})"),
                0,
                inhomogeneous,
            ),
            Check::compare(
                format!("upper-bound violations ({trials} ideals, seed {seed})"),
                0,
                violations,
            ),
        ],
    ))
}

pub fn first_power() -> Result<SuiteReport> {
    let g = prune_taylor_first_power(4, 3)?;
    let d = single_relation(3)?;
    let dj = j_family(4, 3, &[4])?;
    Ok(SuiteReport::new(
        "first-power",
        vec![
            Check::compare(
                "Gamma(4,3)",
                vec![4, 5, 2],
                g.gamma.f_vector()[1..].to_vec(),
            ),
            Check::compare(
                "E_{4,D}",
                vec![4, 5, 2],
                total_betti(&extremal_ideal(4, &d)?, Field::Gf2)?,
            ),
            Check::compare(
                "E_{4,D'}",
                vec![4, 5, 2],
                total_betti(&extremal_ideal(4, &dj)?, Field::Gf2)?,
            ),
        ],
    ))
}

pub fn cell_order() -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for (q, s) in [(3, 3), (4, 3), (4, 4), (5, 3)] {
        let ok = morse_complex(
            q,
            s,
            MorseOptions {
                order: true,
                cross_check: true,
            },
        )
        .map(|_| true);
        checks.push(Check::compare(
            format!("closed form = gradient paths q={q} s={s}"),
            Ok(true),
            ok.map_err(|e| e.to_string()),
        ));
    }
    let mc = morse_complex(4, 3, MorseOptions::default())?;
    let f = |pairs: &[(usize, usize)]| {
        Face::from_positions(pairs.iter().map(|&(i, j)| pair_position(4, i, j)))
    };
    let pyramid = f(&[(1, 2), (1, 3), (1, 4), (2, 3)]);
    let labels = |faces: Vec<Face>| {
        let mut v: Vec<String> = faces.into_iter().map(|g| mc.face_label(g)).collect();
        v.sort();
        v
    };
    let got = labels(mc.subcells(pyramid));
    let want = labels(vec![
        f(&[(1, 2), (1, 3), (2, 3)]),
        f(&[(1, 1), (1, 2), (1, 4)]),
        f(&[(1, 1), (1, 3), (1, 4)]),
        f(&[(1, 3), (1, 4), (2, 3)]),
        f(&[(1, 2), (1, 4), (2, 3)]),
    ]);
    checks.push(Check::compare("subcells of {12,13,14,23}", want, got));
    Ok(SuiteReport::new("cell-order", checks))
}

/// Every suite at its default size.
pub fn report(seed: u64, trials: usize) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        table1()?,
        examples()?,
        engine(6)?,
        random_ideal_suite(seed, trials)?,
        pd(6)?,
        characterization(5)?,
        cell_order()?,
        first_power()?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table1_passes_and_csv_shape() {
        assert!(table1().unwrap().passed);
        let csv = table1_csv().unwrap();
        assert_eq!(
            csv,
            "complex,dim0,dim1,dim2,dim3,dim4,dim5\nL2_4,10,27,32,19,6,1\nL2_4D,10,21,15,3,0,0\n"
        );
    }

    #[test]
    fn small_suites_pass() {
        assert!(pd(4).unwrap().passed);
        assert!(first_power().unwrap().passed);
        assert!(characterization(3).unwrap().passed);
        assert!(random_ideal_suite(0, 5).unwrap().passed);
    }

    #[test]
    fn check_records_mismatch() {
        let c = Check::compare("x", 1, 2);
        assert!(!c.passed);
        assert_eq!((c.expected.as_str(), c.got.as_str()), ("1", "2"));
    }
}
