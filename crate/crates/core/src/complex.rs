//! Simplicial complexes given by facets: the Taylor simplex, `L^2_q`, face
//! enumeration, f-vectors and lcm labelling.
//!
//! Faces are bit sets over the complex's ordered vertex list, so a complex
//! has at most [`MAX_VERTICES`] vertices.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::{lcm_into, multisets, Monomial, MonomialIdeal};

pub const MAX_VERTICES: usize = 64;

/// Largest face count that [`SimplicialComplex::checked_faces`] will list.
pub const MAX_ENUMERATED_FACES: usize = 1 << 24;

/// A vertex `a_1 e_1 + ... + a_q e_q` of `N^r_q`, stored as the sorted
/// multiset of its 1-based indices: `e_i` is `[i]`, `e_ij` is `[i, j]`.
/// Ordering is lexicographic, which for pairs is the canonical order
/// `(i, j) < (i', j')` iff `i < i'` or `i = i'` and `j < j'`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vertex(Vec<usize>);

impl Vertex {
    pub fn single(i: usize) -> Self {
        Vertex(vec![i])
    }

    /// `e_ij`; the arguments may come in either order.
    pub fn pair(i: usize, j: usize) -> Self {
        Vertex(vec![i.min(j), i.max(j)])
    }

    pub fn from_multiset(mut idx: Vec<usize>) -> Self {
        idx.sort_unstable();
        Vertex(idx)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.0.contains(&i)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.0 {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// Position of `e_ij` (`1 <= i <= j <= q`) in the canonical order of `N^2_q`, 0-based.
pub fn pair_position(q: usize, i: usize, j: usize) -> usize {
    let (i, j) = (i.min(j), i.max(j));
    debug_assert!(i >= 1 && j <= q);
    // rows 1..i-1 hold q, q-1, ..., q-i+2 pairs
    (i - 1) * (q + 1) - (i - 1) * i / 2 + (j - i)
}

/// Set of vertex positions, bit `v` set iff vertex `v` belongs to the face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Face(u64);

impl Face {
    pub const EMPTY: Face = Face(0);

    pub fn from_bits(bits: u64) -> Self {
        Face(bits)
    }

    pub fn from_positions<I: IntoIterator<Item = usize>>(positions: I) -> Self {
        Face(positions.into_iter().fold(0u64, |acc, v| {
            debug_assert!(v < MAX_VERTICES);
            acc | (1u64 << v)
        }))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 & (1u64 << v) != 0
    }

    pub fn with(self, v: usize) -> Face {
        Face(self.0 | (1u64 << v))
    }

    pub fn without(self, v: usize) -> Face {
        Face(self.0 & !(1u64 << v))
    }

    pub fn union(self, other: Face) -> Face {
        Face(self.0 | other.0)
    }

    pub fn intersection(self, other: Face) -> Face {
        Face(self.0 & other.0)
    }

    pub fn minus(self, other: Face) -> Face {
        Face(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Face) -> bool {
        self.0 & !other.0 == 0
    }

    /// Vertex positions in increasing order.
    pub fn positions(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    /// Cardinality first, then lexicographic on the sorted position lists.
    pub fn canonical_cmp(&self, other: &Face) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 & (diff & diff.wrapping_neg()) != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }

    /// Every subset of this face, including the empty face and itself.
    pub fn subfaces(self) -> impl Iterator<Item = Face> {
        let full = self.0;
        let mut sub = full;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = Face(sub);
            if sub == 0 {
                done = true;
            } else {
                sub = (sub - 1) & full;
            }
            Some(out)
        })
    }
}

impl PartialOrd for Face {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Face {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_cmp(other)
    }
}

/// Keeps the inclusion-maximal faces, in canonical order, without repeats.
fn maximal_faces(mut faces: Vec<Face>) -> Vec<Face> {
    faces.sort();
    faces.dedup();
    let keep: Vec<Face> = faces
        .iter()
        .filter(|&&f| !faces.iter().any(|&g| g != f && f.is_subset_of(g)))
        .copied()
        .collect();
    keep
}

/// A simplicial complex described by its facets over an ordered vertex list.
/// No facets at all is the void complex; the single facet `∅` is `{∅}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<Vertex>,
    facets: Vec<Face>,
}

impl SimplicialComplex {
    /// Builds the complex generated by `faces`; non-maximal entries are dropped.
    pub fn new(vertices: Vec<Vertex>, faces: Vec<Face>) -> Result<Self> {
        Error::check_capacity("complex vertices", MAX_VERTICES, vertices.len())?;
        let all = if vertices.len() == 64 {
            u64::MAX
        } else {
            (1u64 << vertices.len()) - 1
        };
        if let Some(bad) = faces.iter().find(|f| f.bits() & !all != 0) {
            return Err(Error::input(format!(
                "face {:#x} uses vertices outside the vertex list",
                bad.bits()
            )));
        }
        Ok(Self {
            vertices,
            facets: maximal_faces(faces),
        })
    }

    /// The full simplex on `e_1, ..., e_q`.
    pub fn taylor(q: usize) -> Result<Self> {
        let vertices = (1..=q).map(Vertex::single).collect();
        Self::new(vertices, vec![Face::from_positions(0..q)])
    }

    /// `L^2_q`: vertex set `N^2_q` in canonical order, generated by
    /// `B = {e_ij : i < j}` and `G_i = {e_ij : j in [q]}`.
    pub fn l2(q: usize) -> Result<Self> {
        let vertices: Vec<Vertex> = multisets(q, 2).into_iter().map(Vertex).collect();
        Error::check_capacity("complex vertices", MAX_VERTICES, vertices.len())?;
        let mut faces = vec![l2_b_facet(q)];
        faces.extend((1..=q).map(|i| l2_g_facet(q, i)));
        Self::new(vertices, faces)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn vertex_position(&self, v: &Vertex) -> Option<usize> {
        self.vertices.binary_search(v).ok().or_else(|| {
            // vertex lists built by hand need not be sorted
            self.vertices.iter().position(|w| w == v)
        })
    }

    pub fn face_from_vertices(&self, vs: &[Vertex]) -> Result<Face> {
        vs.iter()
            .map(|v| {
                self.vertex_position(v)
                    .ok_or_else(|| Error::input(format!("vertex {v} not in the complex")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Face::from_positions)
    }

    pub fn face_vertices(&self, f: Face) -> Vec<Vertex> {
        f.positions().map(|v| self.vertices[v].clone()).collect()
    }

    pub fn is_face(&self, f: Face) -> bool {
        self.facets.iter().any(|&g| f.is_subset_of(g))
    }

    /// Faces of the given cardinality (or all), each once, in canonical order.
    pub fn faces(&self, cardinality: Option<usize>, include_empty: bool) -> Vec<Face> {
        let mut out: Vec<Face> = Vec::new();
        for &facet in &self.facets {
            if let Some(c) = cardinality {
                if facet.len() < c {
                    continue;
                }
            }
            out.extend(
                facet
                    .subfaces()
                    .filter(|f| cardinality.is_none_or(|c| f.len() == c))
                    .filter(|f| include_empty || !f.is_empty()),
            );
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Like [`faces`](Self::faces), but refuses complexes with more than
    /// [`MAX_ENUMERATED_FACES`] faces instead of exhausting memory.
    pub fn checked_faces(
        &self,
        cardinality: Option<usize>,
        include_empty: bool,
    ) -> Result<Vec<Face>> {
        let total: usize = self.f_vector().iter().sum();
        Error::check_capacity("faces to enumerate", MAX_ENUMERATED_FACES, total)?;
        Ok(self.faces(cardinality, include_empty))
    }

    /// `(f_0, f_1, ..., f_{d+1})` with `f_0 = 1` and `f_i` the number of faces
    /// of cardinality `i`. The void complex has the empty f-vector.
    ///
    /// Counted by inclusion-exclusion over the facets, so nothing is listed.
    pub fn f_vector(&self) -> Vec<usize> {
        if self.facets.is_empty() {
            return Vec::new();
        }
        let n = self.facets.len();
        if n > 20 {
            let mut f = vec![0usize; self.max_face_size() + 1];
            for face in self.faces(None, true) {
                f[face.len()] += 1;
            }
            return f;
        }
        let width = self.max_face_size() + 1;
        let mut f = vec![0i128; width];
        // meet[mask] is the intersection of the facets in mask
        let mut meet = vec![Face::EMPTY; 1 << n];
        for mask in 1usize..1 << n {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            meet[mask] = if rest == 0 {
                self.facets[low]
            } else {
                meet[rest].intersection(self.facets[low])
            };
            let sign = if mask.count_ones() % 2 == 1 { 1 } else { -1 };
            let m = meet[mask].len();
            let mut c: i128 = 1;
            for (k, slot) in f.iter_mut().enumerate().take(m + 1) {
                *slot += sign * c;
                c = c * (m - k) as i128 / (k + 1) as i128;
            }
        }
        f.into_iter().map(|x| x as usize).collect()
    }

    pub fn max_face_size(&self) -> usize {
        self.facets.iter().map(|f| f.len()).max().unwrap_or(0)
    }

    /// Dimension `max |F| - 1`; `None` for the void complex.
    pub fn dim(&self) -> Option<isize> {
        if self.facets.is_empty() {
            None
        } else {
            Some(self.max_face_size() as isize - 1)
        }
    }

    /// Faces as lists of vertex index lists, e.g. `[[1,2],[1,3]]`.
    pub fn face_to_json(&self, f: Face) -> Vec<Vec<usize>> {
        f.positions().map(|v| self.vertices[v].0.clone()).collect()
    }
}

pub(crate) fn l2_b_facet(q: usize) -> Face {
    let mut b = Face::EMPTY;
    for i in 1..=q {
        for j in i + 1..=q {
            b = b.with(pair_position(q, i, j));
        }
    }
    b
}

pub(crate) fn l2_g_facet(q: usize, i: usize) -> Face {
    Face::from_positions((1..=q).map(|j| pair_position(q, i, j)))
}

/// A complex whose vertex `v` carries generator `v` of an ideal; faces are
/// labelled by the lcm of their vertex labels (`1` for the empty face).
#[derive(Debug, Clone)]
pub struct LabeledComplex {
    complex: SimplicialComplex,
    ideal: MonomialIdeal,
}

impl LabeledComplex {
    pub fn new(complex: SimplicialComplex, ideal: MonomialIdeal) -> Result<Self> {
        if complex.vertices().len() != ideal.len() {
            return Err(Error::Structural(format!(
                "{} vertices but {} generators",
                complex.vertices().len(),
                ideal.len()
            )));
        }
        Ok(Self { complex, ideal })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }

    pub fn label(&self, f: Face) -> Monomial {
        let mut exps = vec![0u16; self.ideal.ring().len()];
        self.label_into(f, &mut exps);
        Monomial::new(self.ideal.ring().clone(), exps).expect("length matches ring")
    }

    /// Writes the lcm exponent vector of `f` into `buf` (cleared first).
    pub fn label_into(&self, f: Face, buf: &mut [u16]) {
        buf.iter_mut().for_each(|e| *e = 0);
        let gens = self.ideal.generators();
        for v in f.positions() {
            lcm_into(buf, gens[v].exponents());
        }
    }
}
