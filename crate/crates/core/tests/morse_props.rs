use std::collections::HashSet;

use l2morse_core::complex::{pair_position, Face, LabeledComplex, SimplicialComplex};
use l2morse_core::extremal::{power_generators, single_relation};
use l2morse_core::morse::{
    build_matching, critical_cells, critical_closed_form_l2, is_acyclic, is_homogeneous,
    l2_spec_entries, matching_l2, prune_taylor_first_power, spec_from_entries, Matching, NType,
};
use l2morse_core::random::{random_ideals, DEFAULT_VARIABLES};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn euler(counts: &[usize]) -> i64 {
    counts
        .iter()
        .enumerate()
        .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

#[test]
fn matched_pairs_cancel_in_the_euler_characteristic() {
    for q in 3..=6 {
        let f = SimplicialComplex::l2(q).unwrap().f_vector();
        for s in 3..=q {
            let m = matching_l2(q, s).unwrap();
            let c = m.critical_counts();
            // f[0] is the empty face, which the matching leaves alone
            assert_eq!(euler(&c), euler(&f[1..]), "q={q} s={s}");
            assert_eq!(
                m.matching.len() * 2 + m.critical().len(),
                m.matching.faces().len(),
                "q={q} s={s}"
            );
        }
    }
}

#[test]
fn matched_faces_differ_by_omega() {
    for (q, s) in [(4, 3), (5, 4), (6, 3)] {
        let m = matching_l2(q, s).unwrap();
        let omegas: HashSet<usize> = m.spec.omega().iter().copied().collect();
        for (hi, lo) in m.matching.edges() {
            let diff: Vec<usize> = hi.minus(lo).positions().collect();
            assert_eq!(diff.len(), 1);
            assert!(omegas.contains(&diff[0]));
            assert!(lo.is_subset_of(hi));
        }
    }
}

#[test]
fn omega_is_always_a_first_row_edge() {
    for q in 3..=6 {
        for s in 3..=q {
            let first_row: HashSet<usize> = (1..=q).map(|j| pair_position(q, 1, j)).collect();
            for (_, sigma, w) in l2_spec_entries(q, s).unwrap() {
                assert!(first_row.contains(&w));
                assert!(!sigma.contains(w));
            }
        }
    }
}

#[test]
fn g1_faces_with_every_first_row_edge_up_to_s_are_matched() {
    // inside G_1, any face holding e_12..e_1s is cancelled by toggling e_11
    for q in 3..=5 {
        for s in 3..=q {
            let m = matching_l2(q, s).unwrap();
            let crit: HashSet<Face> = m.critical().into_iter().collect();
            let core = Face::from_positions((2..=s).map(|j| pair_position(q, 1, j)));
            let g1 = Face::from_positions((1..=q).map(|j| pair_position(q, 1, j)));
            for f in m.matching.faces() {
                if f.is_subset_of(g1) && core.is_subset_of(*f) {
                    assert!(!crit.contains(f), "q={q} s={s}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn critical_set_ignores_order_within_a_type(q in 3usize..=5, s_off in 0usize..3, seed in any::<u64>()) {
        let s = 3 + s_off % (q - 2);
        let mut entries = l2_spec_entries(q, s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for t in [NType::Column, NType::Mixed, NType::Tail] {
            let idx: Vec<usize> = (0..entries.len()).filter(|&i| entries[i].0 == t).collect();
            let mut block: Vec<_> = idx.iter().map(|&i| entries[i]).collect();
            block.shuffle(&mut rng);
            for (&i, e) in idx.iter().zip(block) {
                entries[i] = e;
            }
        }
        let spec = spec_from_entries(&entries).unwrap();
        let faces = SimplicialComplex::l2(q).unwrap().faces(None, false);
        let m = build_matching(&faces, &spec).unwrap();
        prop_assert!(is_acyclic(&m));
        prop_assert_eq!(critical_cells(&faces, &spec), critical_closed_form_l2(q, s).unwrap());
    }
}

#[test]
fn random_ideals_give_homogeneous_matchings() {
    for (q, s) in [(4, 4), (5, 3), (5, 5)] {
        let m = matching_l2(q, s).unwrap();
        for ideal in random_ideals(q, s, DEFAULT_VARIABLES, 20, 3).unwrap() {
            let labels = LabeledComplex::new(m.complex.clone(), ideal.power(2).unwrap()).unwrap();
            assert!(is_homogeneous(&m.matching, &labels), "q={q} s={s}");
        }
    }
}

#[test]
fn first_power_prune_for_larger_q() {
    for q in 3..=6 {
        for s in 3..=q {
            let g = prune_taylor_first_power(q, s).unwrap();
            // faces containing {2..s} pair up, so Gamma drops 2^{q-s+1} of them
            let total = (1usize << q) - 1;
            assert_eq!(g.critical.len(), total - (1 << (q - s + 1)), "q={q} s={s}");
            let e = power_generators(q, &single_relation(s).unwrap(), 1).unwrap();
            assert!(g.certify(&e).unwrap());
        }
    }
}

#[test]
fn a_gradient_cycle_is_rejected() {
    // triangle boundary: 1->12, 2->23, 3->13 closes a gradient cycle
    let f = |v: &[usize]| Face::from_positions(v.iter().copied());
    let faces = vec![
        f(&[0]),
        f(&[1]),
        f(&[2]),
        f(&[0, 1]),
        f(&[1, 2]),
        f(&[0, 2]),
    ];
    let m = Matching::from_edges(
        faces.clone(),
        &[
            (f(&[0, 1]), f(&[0])),
            (f(&[1, 2]), f(&[1])),
            (f(&[0, 2]), f(&[2])),
        ],
    )
    .unwrap();
    assert!(!is_acyclic(&m));
    let m = Matching::from_edges(faces, &[(f(&[0, 1]), f(&[0])), (f(&[1, 2]), f(&[1]))]).unwrap();
    assert!(is_acyclic(&m));
}
