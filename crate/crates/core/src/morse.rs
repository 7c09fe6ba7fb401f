//! Acyclic matchings built from a totally ordered family `N` of faces and a
//! vertex choice `omega`, the matchings on `L^2_q` and on the Taylor simplex
//! for a single relation `(1, {2..s})`, gradient paths and the order on the
//! critical cells.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{pair_position, Face, LabeledComplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::monomial::MonomialIdeal;
use crate::packed::PackedIdeal;

/// `N` in ascending order together with `omega(sigma)` (a vertex position)
/// for each member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingSpec {
    order: Vec<Face>,
    omega: Vec<usize>,
}

impl MatchingSpec {
    pub fn new(order: Vec<Face>, omega: Vec<usize>) -> Result<Self> {
        if order.len() != omega.len() {
            return Err(Error::input("N and omega differ in length"));
        }
        for (k, (&sigma, &w)) in order.iter().zip(&omega).enumerate() {
            if sigma.contains(w) {
                return Err(Error::input(format!(
                    "omega of N[{k}] is vertex {w}, which lies in the face"
                )));
            }
            if order[..k].contains(&sigma) {
                return Err(Error::input(format!("N[{k}] repeats an earlier face")));
            }
        }
        Ok(Self { order, omega })
    }

    pub fn empty() -> Self {
        Self {
            order: Vec::new(),
            omega: Vec::new(),
        }
    }

    pub fn order(&self) -> &[Face] {
        &self.order
    }

    pub fn omega(&self) -> &[usize] {
        &self.omega
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Index of the largest member of `N` contained in `gamma`.
    pub fn group_of(&self, gamma: Face) -> Option<usize> {
        (0..self.order.len())
            .rev()
            .find(|&k| self.order[k].is_subset_of(gamma))
    }
}

/// A matching on a face set `Y`: edges `upper -> lower` with
/// `|upper| = |lower| + 1`, every face in at most one edge.
#[derive(Debug, Clone)]
pub struct Matching {
    faces: Vec<Face>,
    members: HashSet<Face>,
    down: HashMap<Face, Face>,
    up: HashMap<Face, Face>,
}

impl Matching {
    /// Validates the edges against `faces` and the matching property.
    pub fn from_edges(faces: Vec<Face>, edges: &[(Face, Face)]) -> Result<Self> {
        let members: HashSet<Face> = faces.iter().copied().collect();
        let mut down = HashMap::new();
        let mut up = HashMap::new();
        for &(upper, lower) in edges {
            if !members.contains(&upper) || !members.contains(&lower) {
                return Err(Error::input("matching edge leaves the face set"));
            }
            if !lower.is_subset_of(upper) || upper.len() != lower.len() + 1 {
                return Err(Error::input(
                    "matching edge is not a codimension-one inclusion",
                ));
            }
            let fresh = |f: &Face| !down.contains_key(f) && !up.contains_key(f);
            if !fresh(&upper) || !fresh(&lower) {
                return Err(Error::input("a face occurs in two matching edges"));
            }
            down.insert(upper, lower);
            up.insert(lower, upper);
        }
        Ok(Self {
            faces,
            members,
            down,
            up,
        })
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn contains_face(&self, f: Face) -> bool {
        self.members.contains(&f)
    }

    /// Edges `(upper, lower)` in canonical order of the upper face.
    pub fn edges(&self) -> Vec<(Face, Face)> {
        let mut e: Vec<(Face, Face)> = self.down.iter().map(|(&u, &l)| (u, l)).collect();
        e.sort();
        e
    }

    pub fn len(&self) -> usize {
        self.down.len()
    }

    pub fn is_empty(&self) -> bool {
        self.down.is_empty()
    }

    pub fn matched_down(&self, upper: Face) -> Option<Face> {
        self.down.get(&upper).copied()
    }

    pub fn matched_up(&self, lower: Face) -> Option<Face> {
        self.up.get(&lower).copied()
    }

    pub fn is_matched(&self, f: Face) -> bool {
        self.down.contains_key(&f) || self.up.contains_key(&f)
    }

    /// Faces in no edge, in canonical order.
    pub fn unmatched(&self) -> Vec<Face> {
        let mut c: Vec<Face> = self
            .faces
            .iter()
            .copied()
            .filter(|&f| !self.is_matched(f))
            .collect();
        c.sort();
        c
    }
}

/// Groups every face under the largest member of `N` it contains and, inside
/// each group, matches `tau' -> tau' \ omega(sigma)`.
pub fn build_matching(faces: &[Face], spec: &MatchingSpec) -> Result<Matching> {
    let members: HashSet<Face> = faces.iter().copied().collect();
    let group: HashMap<Face, usize> = faces
        .iter()
        .filter_map(|&g| spec.group_of(g).map(|k| (g, k)))
        .collect();
    let mut edges = Vec::new();
    for (&gamma, &k) in &group {
        let w = spec.omega[k];
        if gamma.contains(w) {
            let lower = gamma.without(w);
            if members.contains(&lower) && group.get(&lower) == Some(&k) {
                edges.push((gamma, lower));
            }
        }
    }
    Matching::from_edges(faces.to_vec(), &edges)
}

/// `(Y \ Y_N)` together with the faces `tau` of each `Y_sigma` for which
/// `tau ∪ omega(sigma)` leaves `Y_sigma`; canonical order.
pub fn critical_cells(faces: &[Face], spec: &MatchingSpec) -> Vec<Face> {
    let members: HashSet<Face> = faces.iter().copied().collect();
    let mut out: Vec<Face> = faces
        .iter()
        .copied()
        .filter(|&tau| match spec.group_of(tau) {
            None => true,
            Some(k) => {
                let up = tau.with(spec.omega[k]);
                !(members.contains(&up) && spec.group_of(up) == Some(k))
            }
        })
        .collect();
    out.sort();
    out
}

/// No directed cycle in the digraph with inclusion edges pointing down and
/// matched edges reversed. Such cycles stay between two adjacent layers and
/// alternate, so the search runs over matched upper faces only.
pub fn is_acyclic(m: &Matching) -> bool {
    let uppers: Vec<Face> = m.edges().into_iter().map(|(u, _)| u).collect();
    let index: HashMap<Face, usize> = uppers.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let succ: Vec<Vec<usize>> = uppers
        .par_iter()
        .map(|&u| {
            let partner = m.down[&u];
            u.positions()
                .map(|v| u.without(v))
                .filter(|&rho| rho != partner && m.contains_face(rho))
                .filter_map(|rho| m.matched_up(rho).map(|r| index[&r]))
                .collect()
        })
        .collect();
    // 0 = new, 1 = on stack, 2 = done
    let mut state = vec![0u8; uppers.len()];
    for root in 0..uppers.len() {
        if state[root] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        state[root] = 1;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < succ[node].len() {
                let child = succ[node][*next];
                *next += 1;
                match state[child] {
                    0 => {
                        state[child] = 1;
                        stack.push((child, 0));
                    }
                    1 => return false,
                    _ => {}
                }
            } else {
                state[node] = 2;
                stack.pop();
            }
        }
    }
    true
}

/// Every matched edge joins faces with equal lcm labels.
pub fn is_homogeneous(m: &Matching, labels: &LabeledComplex) -> bool {
    homogeneous_with(m, &PackedIdeal::new(labels.ideal()))
}

fn homogeneous_with(m: &Matching, p: &PackedIdeal) -> bool {
    let edges = m.edges();
    edges.par_iter().all(|&(u, l)| {
        let mut a = p.zero();
        let mut b = p.zero();
        p.lcm_mask(u.bits(), &mut a);
        p.lcm_mask(l.bits(), &mut b);
        a == b
    })
}

/// Which family of `N` a member of the `L^2_q` matching comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NType {
    /// `{e_2j, ..., e_sj}`, `j` in `[q]`.
    Column,
    /// `{e_{2 t_2}, ..., e_{s t_s}}` with `{t_k} = {1, j}`, `j > s`.
    Mixed,
    /// `{e_21, ..., e_s1, e_ju}`, `j > u > s`.
    Tail,
}

fn check_qs(q: usize, s: usize) -> Result<()> {
    if s < 3 || s > q {
        return Err(Error::input(format!(
            "need 3 <= s <= q, got q = {q}, s = {s}"
        )));
    }
    Ok(())
}

/// Members of `N` for `L^2_q` with their types, sorted by type and then
/// lexicographically on vertex positions; `omega` is `e_1j` throughout.
pub fn l2_spec_entries(q: usize, s: usize) -> Result<Vec<(NType, Face, usize)>> {
    check_qs(q, s)?;
    let pos = |i, j| pair_position(q, i, j);
    let mut entries: Vec<(NType, Face, usize)> = Vec::new();
    for j in 1..=q {
        let f = Face::from_positions((2..=s).map(|k| pos(k, j)));
        entries.push((NType::Column, f, pos(1, j)));
    }
    for j in s + 1..=q {
        for bits in 1u32..(1 << (s - 1)) - 1 {
            // bit p set: t_{p+2} = j, else 1
            let f = Face::from_positions(
                (2..=s).map(|k| pos(k, if bits >> (k - 2) & 1 == 1 { j } else { 1 })),
            );
            entries.push((NType::Mixed, f, pos(1, j)));
        }
    }
    for j in s + 1..=q {
        for u in s + 1..j {
            let f = Face::from_positions((2..=s).map(|k| pos(k, 1))).with(pos(j, u));
            entries.push((NType::Tail, f, pos(1, j)));
        }
    }
    entries.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| a.1.positions().cmp(b.1.positions()))
    });
    Ok(entries)
}

pub fn spec_from_entries(entries: &[(NType, Face, usize)]) -> Result<MatchingSpec> {
    MatchingSpec::new(
        entries.iter().map(|e| e.1).collect(),
        entries.iter().map(|e| e.2).collect(),
    )
}

/// The matching `M_{q,delta}` on the non-empty faces of `L^2_q` for
/// `delta = (1, {2..s})`, with everything needed to query its cells.
#[derive(Debug, Clone)]
pub struct L2Matching {
    pub q: usize,
    pub s: usize,
    pub complex: SimplicialComplex,
    pub spec: MatchingSpec,
    pub types: Vec<NType>,
    pub matching: Matching,
}

pub fn matching_l2(q: usize, s: usize) -> Result<L2Matching> {
    let entries = l2_spec_entries(q, s)?;
    let complex = SimplicialComplex::l2(q)?;
    let spec = spec_from_entries(&entries)?;
    let faces = complex.checked_faces(None, false)?;
    let matching = build_matching(&faces, &spec)?;
    Ok(L2Matching {
        q,
        s,
        complex,
        types: entries.iter().map(|e| e.0).collect(),
        spec,
        matching,
    })
}

impl L2Matching {
    pub fn critical(&self) -> Vec<Face> {
        critical_cells(self.matching.faces(), &self.spec)
    }

    /// Critical counts by dimension `0..C(q,2)`.
    pub fn critical_counts(&self) -> Vec<usize> {
        counts_by_dim(&self.critical(), self.complex.max_face_size())
    }
}

pub fn counts_by_dim(faces: &[Face], width: usize) -> Vec<usize> {
    let mut c = vec![0usize; width];
    for f in faces {
        if f.len() > c.len() {
            c.resize(f.len(), 0);
        }
        c[f.len() - 1] += 1;
    }
    c
}

/// Positions of `e_21, ..., e_s1`.
fn first_column(q: usize, s: usize) -> Face {
    Face::from_positions((2..=s).map(|k| pair_position(q, 1, k)))
}

/// Positions of `e_ik` with `1 < i < k <= s`.
fn inner_block(q: usize, s: usize) -> Face {
    let mut f = Face::EMPTY;
    for i in 2..=s {
        for k in i + 1..=s {
            f = f.with(pair_position(q, i, k));
        }
    }
    f
}

/// Positions of `e_1(s+1), ..., e_1q`.
fn first_row_tail(q: usize, s: usize) -> Face {
    Face::from_positions((s + 1..=q).map(|j| pair_position(q, 1, j)))
}

/// Critical faces of `M_{q,delta}` by their closed description: faces with
/// no `{e_{k t_k}}` for `{t_k} = {j}` or `{t_k} = {1, j}` (`j > s`), and
/// faces `{e_21..e_s1} ∪ gamma ∪ gamma'` with non-empty
/// `gamma ⊆ {e_ik : 1 < i < k <= s}` and `gamma' ⊆ {e_1j : j > s}`.
pub fn critical_closed_form_l2(q: usize, s: usize) -> Result<Vec<Face>> {
    check_qs(q, s)?;
    let forbidden: Vec<Face> = l2_spec_entries(q, s)?
        .into_iter()
        .filter(|e| e.0 != NType::Tail)
        .map(|e| e.1)
        .collect();
    let l2 = SimplicialComplex::l2(q)?;
    let mut out: Vec<Face> = l2
        .checked_faces(None, false)?
        .into_iter()
        .filter(|&f| !forbidden.iter().any(|&g| g.is_subset_of(f)))
        .collect();
    let col = first_column(q, s);
    let tail = first_row_tail(q, s);
    for gamma in inner_block(q, s).subfaces().filter(|g| !g.is_empty()) {
        for gamma2 in tail.subfaces() {
            out.push(col.union(gamma).union(gamma2));
        }
    }
    out.sort();
    Ok(out)
}

/// Critical face of type (b): returns `gamma` when `tau` has that shape.
fn type_b_gamma(q: usize, s: usize, tau: Face) -> Option<Face> {
    let col = first_column(q, s);
    let inner = inner_block(q, s);
    let allowed = col.union(inner).union(first_row_tail(q, s));
    let gamma = tau.intersection(inner);
    (col.is_subset_of(tau) && tau.is_subset_of(allowed) && !gamma.is_empty()).then_some(gamma)
}

/// `sigma_A <= tau_A` for critical faces of adjacent dimension, by the
/// closed description: inclusion, plus for type (b) faces with a single
/// inner vertex `gamma` the faces `((tau \ gamma) ∪ {e_11}) \ {e_1l}`,
/// `2 <= l <= s`.
pub fn cell_order_closed_form(
    m: &L2Matching,
    critical: &HashSet<Face>,
    sigma: Face,
    tau: Face,
) -> Result<bool> {
    check_pair(critical, sigma, tau)?;
    let (q, s) = (m.q, m.s);
    if sigma.is_subset_of(tau) {
        return Ok(true);
    }
    match type_b_gamma(q, s, tau) {
        Some(gamma) if gamma.len() == 1 => {
            let base = tau.minus(gamma).with(pair_position(q, 1, 1));
            Ok((2..=s).any(|l| base.without(pair_position(q, 1, l)) == sigma))
        }
        _ => Ok(false),
    }
}

fn check_pair(critical: &HashSet<Face>, sigma: Face, tau: Face) -> Result<()> {
    if !critical.contains(&sigma) || !critical.contains(&tau) {
        return Err(Error::input("cell order needs two critical faces"));
    }
    if sigma.len() + 1 != tau.len() {
        return Err(Error::input(
            "cell order compares faces of adjacent dimension",
        ));
    }
    Ok(())
}

/// Critical faces one dimension below `tau` reachable from `tau` by a
/// gradient path: a non-matching step down, then alternately a reversed
/// matching step up and a non-matching step down.
pub fn reachable_critical(m: &Matching, tau: Face) -> HashSet<Face> {
    let mut found = HashSet::new();
    let mut seen_upper: HashSet<Face> = HashSet::from([tau]);
    let mut queue: VecDeque<Face> = VecDeque::from([tau]);
    while let Some(upper) = queue.pop_front() {
        let partner = m.matched_down(upper);
        for v in upper.positions() {
            let rho = upper.without(v);
            if Some(rho) == partner || rho.is_empty() || !m.contains_face(rho) {
                continue;
            }
            match m.matched_up(rho) {
                Some(next) => {
                    if seen_upper.insert(next) {
                        queue.push_back(next);
                    }
                }
                None => {
                    if m.matched_down(rho).is_none() {
                        found.insert(rho);
                    }
                }
            }
        }
    }
    found
}

pub fn gradient_path_exists(
    m: &Matching,
    critical: &HashSet<Face>,
    tau: Face,
    sigma: Face,
) -> Result<bool> {
    check_pair(critical, sigma, tau)?;
    Ok(reachable_critical(m, tau).contains(&sigma))
}

/// Critical cells of `L^2_{q,D}` and the order between adjacent dimensions.
#[derive(Debug, Clone)]
pub struct MorseComplex {
    pub q: usize,
    pub s: usize,
    pub vertices: Vec<[usize; 2]>,
    /// `cells[d]` holds the critical faces of dimension `d`.
    pub cells: Vec<Vec<Face>>,
    /// `(sigma, tau)` with `dim sigma = dim tau - 1` and `sigma <= tau`.
    pub order: Vec<(Face, Face)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MorseOptions {
    pub order: bool,
    pub cross_check: bool,
}

impl Default for MorseOptions {
    fn default() -> Self {
        Self {
            order: true,
            cross_check: false,
        }
    }
}

/// Largest `q` for which the cell order is computed.
pub const MAX_ORDER_Q: usize = 5;

pub fn morse_complex(q: usize, s: usize, opts: MorseOptions) -> Result<MorseComplex> {
    check_qs(q, s)?;
    Error::check_capacity("q for the Morse complex", 6, q)?;
    if opts.order {
        Error::check_capacity("q for the cell order", MAX_ORDER_Q, q)?;
    }
    let cells_flat = critical_closed_form_l2(q, s)?;
    let width = SimplicialComplex::l2(q)?.max_face_size();
    let mut cells = vec![Vec::new(); width];
    for &f in &cells_flat {
        cells[f.len() - 1].push(f);
    }
    let l2 = SimplicialComplex::l2(q)?;
    let vertices = l2
        .vertices()
        .iter()
        .map(|v| [v.indices()[0], v.indices()[1]])
        .collect();
    let mut order = Vec::new();
    if opts.order || opts.cross_check {
        let m = matching_l2(q, s)?;
        let critical: HashSet<Face> = cells_flat.iter().copied().collect();
        let taus: Vec<Face> = cells_flat
            .iter()
            .copied()
            .filter(|f| f.len() >= 2)
            .collect();
        let per_tau: Vec<Result<Vec<(Face, Face)>>> = taus
            .par_iter()
            .map(|&tau| {
                let reach = if opts.cross_check {
                    Some(reachable_critical(&m.matching, tau))
                } else {
                    None
                };
                let mut rows = Vec::new();
                for &sigma in &cells[tau.len() - 2] {
                    let closed = cell_order_closed_form(&m, &critical, sigma, tau)?;
                    if let Some(r) = &reach {
                        if r.contains(&sigma) != closed {
                            return Err(Error::InvariantViolation(format!(
                                "cell order disagrees with gradient paths at sigma {:?}, tau {:?}",
                                l2.face_to_json(sigma),
                                l2.face_to_json(tau)
                            )));
                        }
                    }
                    if closed {
                        rows.push((sigma, tau));
                    }
                }
                Ok(rows)
            })
            .collect();
        for rows in per_tau {
            order.extend(rows?);
        }
        order.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    }
    Ok(MorseComplex {
        q,
        s,
        vertices,
        cells,
        order,
    })
}

impl MorseComplex {
    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn face_json(&self, f: Face) -> Vec<[usize; 2]> {
        f.positions().map(|v| self.vertices[v]).collect()
    }

    pub fn face_label(&self, f: Face) -> String {
        let parts: Vec<String> = self
            .face_json(f)
            .iter()
            .map(|[i, j]| format!("{i}{j}"))
            .collect();
        format!("{{{}}}", parts.join(","))
    }

    /// Cells below `tau` in the order.
    pub fn subcells(&self, tau: Face) -> Vec<Face> {
        self.order
            .iter()
            .filter(|p| p.1 == tau)
            .map(|p| p.0)
            .collect()
    }

    /// Graphviz digraph with one node per cell and an arc `tau -> sigma`
    /// for each order pair.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph cells_q{}_s{} {{", self.q, self.s);
        let _ = writeln!(out, "  rankdir=BT;");
        for (d, layer) in self.cells.iter().enumerate() {
            for &f in layer {
                let _ = writeln!(
                    out,
                    "  \"{}\" [label=\"{}\", dim={d}];",
                    self.face_label(f),
                    self.face_label(f)
                );
            }
        }
        for &(sigma, tau) in &self.order {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\";",
                self.face_label(tau),
                self.face_label(sigma)
            );
        }
        out.push_str("}\n");
        out
    }
}

/// The Taylor simplex pruned by `(1, {2..s})`: faces containing
/// `{e_2, ..., e_s}` are matched by toggling `e_1`; the rest form `Gamma`.
#[derive(Debug, Clone)]
pub struct FirstPowerPrune {
    pub q: usize,
    pub s: usize,
    pub gamma: SimplicialComplex,
    pub critical: Vec<Face>,
    pub spec: MatchingSpec,
    pub matching: Matching,
}

pub fn prune_taylor_first_power(q: usize, s: usize) -> Result<FirstPowerPrune> {
    check_qs(q, s)?;
    let taylor = SimplicialComplex::taylor(q)?;
    let faces = taylor.checked_faces(None, false)?;
    let spec = MatchingSpec::new(vec![Face::from_positions(1..s)], vec![0])?;
    let matching = build_matching(&faces, &spec)?;
    let critical = critical_cells(&faces, &spec);
    if critical != matching.unmatched() {
        return Err(Error::InvariantViolation(
            "critical faces differ from unmatched faces".into(),
        ));
    }
    let closed: HashSet<Face> = critical.iter().copied().collect();
    for &f in &critical {
        if f.subfaces().any(|g| !g.is_empty() && !closed.contains(&g)) {
            return Err(Error::InvariantViolation(
                "critical faces are not closed under inclusion".into(),
            ));
        }
    }
    let gamma = SimplicialComplex::new(taylor.vertices().to_vec(), critical.clone())?;
    Ok(FirstPowerPrune {
        q,
        s,
        gamma,
        critical,
        spec,
        matching,
    })
}

impl FirstPowerPrune {
    /// The matching is acyclic and homogeneous for the labels of `ideal`,
    /// whose generator count must be `q`.
    pub fn certify(&self, ideal: &MonomialIdeal) -> Result<bool> {
        let labels = LabeledComplex::new(SimplicialComplex::taylor(self.q)?, ideal.clone())?;
        Ok(is_acyclic(&self.matching) && is_homogeneous(&self.matching, &labels))
    }
}
