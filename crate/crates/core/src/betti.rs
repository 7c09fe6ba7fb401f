//! Betti numbers of monomial ideals from the homology of lower Taylor
//! subcomplexes over the lcm lattice, projective dimension and the closed
//! formulas for `E_{q,D}` and its square.
//!
//! `beta_{i,m}(I) = dim H~_{i-1}(T_{<m})`, where `T_{<m}` is the set of
//! Taylor faces whose lcm strictly divides `m`.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg::{rank_gf2, rank_rational};
use crate::monomial::{Monomial, MonomialIdeal};
use crate::packed::{divides, PackedIdeal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    #[default]
    Gf2,
    #[serde(rename = "rat")]
    Rational,
}

impl std::str::FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gf2" => Ok(Field::Gf2),
            "rat" | "rational" | "q" => Ok(Field::Rational),
            _ => Err(Error::Parse(format!("unknown field `{s}` (gf2 or rat)"))),
        }
    }
}

/// Largest face count accepted by the homology engine.
pub const MAX_HOMOLOGY_FACES: usize = 1 << 16;

/// Largest generator count accepted by [`graded_betti`].
pub const MAX_BETTI_GENERATORS: usize = 15;

/// Reduced homology of the complex whose faces are `faces` (sorted vertex
/// lists). The list must be closed under taking subsets; it contains the
/// empty face unless the complex is void. Entry `k` of the result is
/// `dim H~_{k-1}`. The void complex gives an empty vector.
pub fn reduced_homology_of_faces(faces: &[Vec<u32>], field: Field) -> Result<Vec<usize>> {
    Error::check_capacity("faces for homology", MAX_HOMOLOGY_FACES, faces.len())?;
    if faces.is_empty() {
        return Ok(Vec::new());
    }
    let top = faces.iter().map(Vec::len).max().unwrap_or(0);
    // layer[k] holds faces with k vertices, i.e. dimension k - 1
    let mut layers: Vec<Vec<&Vec<u32>>> = vec![Vec::new(); top + 1];
    for f in faces {
        layers[f.len()].push(f);
    }
    if layers[0].len() != 1 {
        return Err(Error::input(
            "face list must contain the empty face exactly once",
        ));
    }
    let index: Vec<HashMap<&[u32], usize>> = layers
        .iter()
        .map(|l| {
            l.iter()
                .enumerate()
                .map(|(i, f)| (f.as_slice(), i))
                .collect()
        })
        .collect();
    // rank of the boundary from layer k to layer k - 1, k >= 1
    let mut ranks = vec![0usize; top + 2];
    for k in 1..=top {
        let rows = &layers[k];
        let ncols = layers[k - 1].len();
        if rows.is_empty() {
            continue;
        }
        let mut faces_of_rows: Vec<Vec<(usize, i64)>> = Vec::with_capacity(rows.len());
        for f in rows {
            let mut entries = Vec::with_capacity(k);
            let mut sub = Vec::with_capacity(k - 1);
            for p in 0..k {
                sub.clear();
                sub.extend(
                    f.iter()
                        .enumerate()
                        .filter(|&(x, _)| x != p)
                        .map(|(_, &v)| v),
                );
                let col = *index[k - 1]
                    .get(sub.as_slice())
                    .ok_or_else(|| Error::input("face list is not closed under taking subsets"))?;
                entries.push((col, if p % 2 == 0 { 1 } else { -1 }));
            }
            faces_of_rows.push(entries);
        }
        ranks[k] = match field {
            Field::Gf2 => {
                let words = ncols.div_ceil(64);
                let bits = faces_of_rows
                    .iter()
                    .map(|e| {
                        let mut r = vec![0u64; words];
                        for &(c, _) in e {
                            r[c / 64] ^= 1u64 << (c % 64);
                        }
                        r
                    })
                    .collect();
                rank_gf2(bits, words)
            }
            Field::Rational => {
                let dense: Vec<Vec<i64>> = faces_of_rows
                    .iter()
                    .map(|e| {
                        let mut r = vec![0i64; ncols];
                        for &(c, v) in e {
                            r[c] += v;
                        }
                        r
                    })
                    .collect();
                rank_rational(&dense)
            }
        };
    }
    Ok((0..=top)
        .map(|k| layers[k].len() - ranks[k] - ranks[k + 1])
        .collect())
}

/// Reduced homology of a simplicial complex; entry `k` is `dim H~_{k-1}`.
pub fn reduced_homology_dims(c: &SimplicialComplex, field: Field) -> Result<Vec<usize>> {
    let total: usize = c.f_vector().iter().sum();
    Error::check_capacity("faces for homology", MAX_HOMOLOGY_FACES, total)?;
    let faces: Vec<Vec<u32>> = c
        .faces(None, true)
        .into_iter()
        .map(|f| f.positions().map(|v| v as u32).collect())
        .collect();
    reduced_homology_of_faces(&faces, field)
}

/// Distinct lcms of non-empty subsets of the generators, closed under
/// pairwise lcm. Elements are packed monomials (see [`PackedIdeal`]).
#[derive(Debug, Clone)]
pub struct LcmLattice {
    packed: PackedIdeal,
    elements: Vec<Vec<u64>>,
}

impl LcmLattice {
    pub fn new(ideal: &MonomialIdeal) -> Self {
        let packed = PackedIdeal::new(ideal);
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut elements: Vec<Vec<u64>> = Vec::new();
        for g in 0..packed.len() {
            let mut fresh = Vec::new();
            let gen = packed.generator(g).to_vec();
            if seen.insert(gen.clone()) {
                fresh.push(gen.clone());
            }
            for e in &elements {
                let l: Vec<u64> = e.iter().zip(&gen).map(|(a, b)| a | b).collect();
                if seen.insert(l.clone()) {
                    fresh.push(l);
                }
            }
            elements.extend(fresh);
        }
        Self { packed, elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Vec<u64>] {
        &self.elements
    }

    pub fn packed(&self) -> &PackedIdeal {
        &self.packed
    }
}

/// Unpacks a lattice element into an exponent vector.
fn unpack(packed: &PackedIdeal, nvars: usize, bits: &[u64]) -> Vec<u16> {
    let words = nvars.div_ceil(64).max(1);
    let layers = packed.width() / words;
    (0..nvars)
        .map(|v| {
            (0..layers)
                .filter(|k| bits[k * words + v / 64] >> (v % 64) & 1 == 1)
                .count() as u16
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiEntry {
    pub i: usize,
    pub degree: String,
    pub value: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub field: Field,
    pub generators: usize,
    /// Non-zero `beta_{i,m}`, sorted by `i`, then total degree, then `m`.
    pub entries: Vec<BettiEntry>,
}

impl BettiTable {
    /// `(beta_0, beta_1, ...)` up to the last non-zero entry.
    pub fn totals(&self) -> Vec<usize> {
        let mut t = vec![0usize; self.generators.max(1)];
        for e in &self.entries {
            if e.i >= t.len() {
                t.resize(e.i + 1, 0);
            }
            t[e.i] += e.value;
        }
        while t.len() > 1 && t.last() == Some(&0) {
            t.pop();
        }
        t
    }
}

fn check_betti_input(ideal: &MonomialIdeal) -> Result<()> {
    if ideal.is_empty() {
        return Err(Error::input("the zero ideal has no Betti numbers here"));
    }
    Error::check_capacity(
        "generators for the Betti oracle",
        MAX_BETTI_GENERATORS,
        ideal.len(),
    )?;
    if !ideal.is_minimally_generated() {
        return Err(Error::input(
            "generators are not minimal (a generator is divisible by another); minimalize first",
        ));
    }
    Ok(())
}

/// Faces of `T_{<m}` as generator-index lists, including the empty face.
fn lower_taylor_faces(packed: &PackedIdeal, m: &[u64]) -> Vec<Vec<u32>> {
    let below: Vec<usize> = (0..packed.len())
        .filter(|&g| divides(packed.generator(g), m))
        .collect();
    let n = below.len();
    let w = packed.width();
    let mut table = vec![0u64; w << n];
    let mut out = Vec::new();
    for mask in 0usize..1 << n {
        if mask != 0 {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let g = packed.generator(below[low]);
            for k in 0..w {
                table[mask * w + k] = table[rest * w + k] | g[k];
            }
        }
        if table[mask * w..(mask + 1) * w] != *m {
            out.push(
                (0..n)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| below[b] as u32)
                    .collect(),
            );
        }
    }
    out
}

fn table_from(
    ideal: &MonomialIdeal,
    lattice: &LcmLattice,
    field: Field,
    per_element: impl Fn(&[u64]) -> Result<Vec<usize>> + Sync,
) -> Result<BettiTable> {
    let nvars = ideal.ring().len();
    let rows: Vec<Result<Vec<BettiEntry>>> = lattice
        .elements()
        .par_iter()
        .map(|m| {
            let h = per_element(m)?;
            let exps = unpack(lattice.packed(), nvars, m);
            let mono = Monomial::new(ideal.ring().clone(), exps)?;
            Ok(h.iter()
                .enumerate()
                .filter(|&(_, &v)| v > 0)
                .map(|(i, &v)| BettiEntry {
                    i,
                    degree: mono.to_string(),
                    value: v,
                })
                .collect())
        })
        .collect();
    let mut entries = Vec::new();
    for r in rows {
        entries.extend(r?);
    }
    let degree_of = |d: &str| {
        ideal
            .ring()
            .parse_monomial(d)
            .map(|m| m.degree())
            .unwrap_or(0)
    };
    entries.sort_by_cached_key(|e| (e.i, degree_of(&e.degree), e.degree.clone()));
    Ok(BettiTable {
        field,
        generators: ideal.len(),
        entries,
    })
}

/// Graded Betti numbers of a minimally generated ideal.
pub fn graded_betti(ideal: &MonomialIdeal, field: Field) -> Result<BettiTable> {
    check_betti_input(ideal)?;
    let lattice = LcmLattice::new(ideal);
    let packed = lattice.packed().clone();
    table_from(ideal, &lattice, field, |m| {
        // H~_{i-1} sits at index i of the homology vector
        reduced_homology_of_faces(&lower_taylor_faces(&packed, m), field)
    })
}

pub fn total_betti(ideal: &MonomialIdeal, field: Field) -> Result<Vec<usize>> {
    Ok(graded_betti(ideal, field)?.totals())
}

pub fn projective_dimension(ideal: &MonomialIdeal, field: Field) -> Result<usize> {
    Ok(total_betti(ideal, field)?.len() - 1)
}

/// Largest face count of an open-interval order complex.
pub const MAX_CHAINS: usize = 1 << 16;

/// Graded Betti numbers from the order complexes of the open intervals
/// `(1, m)` of the lcm lattice: `beta_{i,m} = dim H~_{i-1}`. Used to
/// cross-check [`graded_betti`]; chain counts grow fast, so this is meant
/// for small ideals.
pub fn graded_betti_order_complex(ideal: &MonomialIdeal, field: Field) -> Result<BettiTable> {
    check_betti_input(ideal)?;
    let lattice = LcmLattice::new(ideal);
    let elems = lattice.elements().to_vec();
    let n = elems.len();
    // strictly_below[x] lists y with y | x, y != x
    let strictly_below: Vec<Vec<u32>> = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| y != x && divides(&elems[y], &elems[x]))
                .map(|y| y as u32)
                .collect()
        })
        .collect();
    table_from(ideal, &lattice, field, |m| {
        let top = elems
            .iter()
            .position(|e| e.as_slice() == m)
            .expect("element of lattice");
        let interval: Vec<u32> = strictly_below[top].clone();
        // chains listed as sorted index lists; extend each chain by a larger
        // element inside the interval
        let mut faces: Vec<Vec<u32>> = vec![Vec::new()];
        let mut frontier: Vec<Vec<u32>> = interval.iter().map(|&x| vec![x]).collect();
        while !frontier.is_empty() {
            faces.extend(frontier.iter().cloned());
            Error::check_capacity("chains in an lcm interval", MAX_CHAINS, faces.len())?;
            let mut next = Vec::new();
            for chain in &frontier {
                let top_of_chain = *chain.last().unwrap();
                // chains are built from the bottom so the new element lies above
                for &y in &interval {
                    if strictly_below[y as usize].contains(&top_of_chain) {
                        let mut c = chain.clone();
                        c.push(y);
                        next.push(c);
                    }
                }
            }
            frontier = next;
        }
        for f in faces.iter_mut() {
            f.sort_unstable();
        }
        reduced_homology_of_faces(&faces, field)
    })
}

/// `(pd E_{q,D}, pd E_{q,D}^2)` for `D = {(1, {2..s})}`.
pub fn pd_formula(q: usize, s: usize) -> Result<(usize, usize)> {
    if s < 3 || s > q {
        return Err(Error::input(format!(
            "need 3 <= s <= q, got q = {q}, s = {s}"
        )));
    }
    let c = q * (q - 1) / 2;
    let second = if q > s { c - (q - s + 2) } else { c - 1 };
    Ok((q - 2, second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{Face, Vertex};
    use crate::extremal::{extremal_ideal, power_generators, single_relation};

    fn linear(q: usize) -> MonomialIdeal {
        let v: Vec<String> = (1..=q).map(|i| format!("x{i}")).collect();
        MonomialIdeal::parse(&v, &v).unwrap()
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn homology_conventions() {
        let tri = SimplicialComplex::new(
            (1..=3).map(Vertex::single).collect(),
            vec![
                Face::from_positions([0, 1]),
                Face::from_positions([1, 2]),
                Face::from_positions([0, 2]),
            ],
        )
        .unwrap();
        for field in [Field::Gf2, Field::Rational] {
            assert_eq!(reduced_homology_dims(&tri, field).unwrap(), [0, 0, 1]);
            let simplex = SimplicialComplex::taylor(4).unwrap();
            assert!(reduced_homology_dims(&simplex, field)
                .unwrap()
                .iter()
                .all(|&h| h == 0));
            assert_eq!(reduced_homology_of_faces(&[vec![]], field).unwrap(), [1]);
            assert!(reduced_homology_of_faces(&[], field).unwrap().is_empty());
        }
        assert!(reduced_homology_of_faces(&[vec![], vec![0, 1]], Field::Gf2).is_err());
    }

    #[test]
    fn projective_plane_detects_characteristic() {
        // six-vertex triangulation of RP^2: H~_1 = Z/2
        let tris = [
            [0, 1, 3],
            [1, 2, 3],
            [0, 2, 4],
            [2, 3, 4],
            [0, 3, 5],
            [3, 4, 5],
            [1, 4, 5],
            [0, 1, 4],
            [1, 2, 5],
            [0, 2, 5],
        ];
        let c = SimplicialComplex::new(
            (1..=6).map(Vertex::single).collect(),
            tris.iter()
                .map(|t| Face::from_positions(t.iter().copied()))
                .collect(),
        )
        .unwrap();
        assert_eq!(reduced_homology_dims(&c, Field::Gf2).unwrap(), [0, 0, 1, 1]);
        assert_eq!(
            reduced_homology_dims(&c, Field::Rational).unwrap(),
            [0, 0, 0, 0]
        );
    }

    #[test]
    fn linear_ideal_is_koszul() {
        for q in 1..=5 {
            let b = total_betti(&linear(q), Field::Gf2).unwrap();
            let want: Vec<usize> = (0..q).map(|i| binom(q, i + 1)).collect();
            assert_eq!(b, want);
        }
    }

    #[test]
    fn lattice_contains_generators_and_is_closed() {
        let e = power_generators(3, &single_relation(3).unwrap(), 2).unwrap();
        let l = LcmLattice::new(&e);
        let set: HashSet<&Vec<u64>> = l.elements().iter().collect();
        for g in 0..e.len() {
            assert!(set.contains(&l.packed().generator(g).to_vec()));
        }
        for a in l.elements() {
            for b in l.elements() {
                let c: Vec<u64> = a.iter().zip(b).map(|(x, y)| x | y).collect();
                assert!(set.contains(&c));
            }
        }
    }

    #[test]
    fn small_extremal_betti() {
        let e = extremal_ideal(4, &single_relation(3).unwrap()).unwrap();
        assert_eq!(total_betti(&e, Field::Gf2).unwrap(), [4, 5, 2]);
        assert_eq!(projective_dimension(&e, Field::Gf2).unwrap(), 2);
        let e33 = power_generators(3, &single_relation(3).unwrap(), 2).unwrap();
        assert_eq!(total_betti(&e33, Field::Gf2).unwrap(), [6, 6, 1]);
        assert_eq!(total_betti(&e33, Field::Rational).unwrap(), [6, 6, 1]);
    }

    #[test]
    fn order_complex_agrees_on_small_ideals() {
        let e33 = power_generators(3, &single_relation(3).unwrap(), 2).unwrap();
        let i1 = MonomialIdeal::parse(
            &["a", "b", "c", "d", "e", "f", "g"],
            &["ab", "bcd", "aef", "cg"],
        )
        .unwrap();
        for ideal in [e33, i1, linear(3)] {
            for field in [Field::Gf2, Field::Rational] {
                assert_eq!(
                    graded_betti(&ideal, field).unwrap(),
                    graded_betti_order_complex(&ideal, field).unwrap()
                );
            }
        }
    }

    #[test]
    fn rejects_non_minimal_and_zero() {
        let i = MonomialIdeal::parse(&["x", "y"], &["x", "xy"]).unwrap();
        assert!(matches!(total_betti(&i, Field::Gf2), Err(Error::Input(_))));
        let z = MonomialIdeal::parse::<&str>(&["x"], &[]).unwrap();
        assert!(projective_dimension(&z, Field::Gf2).is_err());
    }

    #[test]
    fn pd_formula_values() {
        assert_eq!(pd_formula(4, 3).unwrap(), (2, 3));
        assert_eq!(pd_formula(3, 3).unwrap(), (1, 2));
        assert_eq!(pd_formula(5, 3).unwrap(), (3, 6));
        assert!(pd_formula(3, 4).is_err());
        assert!(pd_formula(4, 2).is_err());
    }

    #[test]
    fn field_parsing() {
        assert_eq!("gf2".parse::<Field>().unwrap(), Field::Gf2);
        assert_eq!("rat".parse::<Field>().unwrap(), Field::Rational);
        assert!("r".parse::<Field>().is_err());
        assert_eq!(serde_json::to_string(&Field::Rational).unwrap(), "\"rat\"");
    }
}
