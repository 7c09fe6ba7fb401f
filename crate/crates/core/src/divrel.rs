//! Divisibility relations `(b, B)`: detection on an ideal, the relations
//! predicted on squares of ideals, and exhaustive checks of the face-level
//! characterization of when `eps_i eps_j | lcm(sigma)`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{pair_position, Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::extremal::{power_generators, single_relation};
use crate::monomial::MonomialIdeal;
use crate::packed::{divides, PackedIdeal};

/// Largest generator count handled by [`all_relations`].
pub const MAX_RELATION_GENERATORS: usize = 16;

/// `m_b | lcm(m_i : i in B)`, indices 1-based. Bit `i - 1` of the mask is
/// set iff `i` is in `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RelJson", into = "RelJson")]
pub struct DivRel {
    b: usize,
    mask: u64,
}

#[derive(Serialize, Deserialize)]
struct RelJson {
    b: usize,
    #[serde(rename = "B")]
    set: Vec<usize>,
}

impl TryFrom<RelJson> for DivRel {
    type Error = Error;
    fn try_from(r: RelJson) -> Result<Self> {
        DivRel::new(r.b, r.set)
    }
}

impl From<DivRel> for RelJson {
    fn from(r: DivRel) -> Self {
        RelJson {
            b: r.b,
            set: r.set(),
        }
    }
}

impl DivRel {
    pub fn new<I: IntoIterator<Item = usize>>(b: usize, set: I) -> Result<Self> {
        if b == 0 || b > 64 {
            return Err(Error::input(format!("relation index {b} outside 1..=64")));
        }
        let mut mask = 0u64;
        for i in set {
            if i == 0 || i > 64 {
                return Err(Error::input(format!("relation index {i} outside 1..=64")));
            }
            mask |= 1u64 << (i - 1);
        }
        if mask == 0 {
            return Err(Error::input("relation set B must be non-empty"));
        }
        Ok(Self { b, mask })
    }

    pub(crate) fn from_mask(b: usize, mask: u64) -> Self {
        debug_assert!(b >= 1 && mask != 0);
        Self { b, mask }
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Members of `B` in increasing order.
    pub fn set(&self) -> Vec<usize> {
        Face::from_bits(self.mask)
            .positions()
            .map(|p| p + 1)
            .collect()
    }

    pub fn set_len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_trivial(&self) -> bool {
        self.mask & (1u64 << (self.b - 1)) != 0
    }

    /// `self` extends `other`: same `b` and `other.B` contained in `self.B`.
    pub fn extends(&self, other: &DivRel) -> bool {
        self.b == other.b && other.mask & !self.mask == 0
    }

    pub fn properly_extends(&self, other: &DivRel) -> bool {
        self.extends(other) && self.mask != other.mask
    }

    pub fn max_index(&self) -> usize {
        self.b.max(64 - self.mask.leading_zeros() as usize)
    }

    pub fn check_range(&self, q: usize) -> Result<()> {
        if self.max_index() > q {
            return Err(Error::input(format!(
                "relation {self} uses an index larger than q = {q}"
            )));
        }
        Ok(())
    }
}

impl Ord for DivRel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.b
            .cmp(&other.b)
            .then_with(|| Face::from_bits(self.mask).canonical_cmp(&Face::from_bits(other.mask)))
    }
}

impl PartialOrd for DivRel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DivRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.set().iter().map(|i| i.to_string()).collect();
        write!(f, "({},{{{}}})", self.b, s.join(","))
    }
}

/// Parses the command-line form `b:i,j,...`, e.g. `1:2,3`.
impl FromStr for DivRel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (b, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected `b:i,j,...`, got `{s}`")))?;
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad index `{t}` in `{s}`")))
        };
        let set = rest.split(',').map(num).collect::<Result<Vec<_>>>()?;
        DivRel::new(num(b)?, set)
    }
}

pub fn relation_holds(ideal: &MonomialIdeal, rel: &DivRel) -> Result<bool> {
    rel.check_range(ideal.len())?;
    let p = PackedIdeal::new(ideal);
    let mut acc = p.zero();
    p.lcm_mask(rel.mask, &mut acc);
    Ok(divides(p.generator(rel.b - 1), &acc))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub all: Vec<DivRel>,
    pub minimal: Vec<DivRel>,
    pub trivial_count: usize,
}

/// Every held relation `(b, B)` with `B` non-empty, plus the minimal ones:
/// non-trivial relations that extend no other held non-trivial relation.
/// Duplicate generators are treated as distinct slots.
pub fn all_relations(ideal: &MonomialIdeal) -> Result<RelationReport> {
    let q = ideal.len();
    Error::check_capacity(
        "generators for relation enumeration",
        MAX_RELATION_GENERATORS,
        q,
    )?;
    let p = PackedIdeal::new(ideal);
    let table = p.subset_lcm_table(q);
    let w = p.width();
    let per_b: Vec<(Vec<DivRel>, Vec<DivRel>, usize)> = (1..=q)
        .into_par_iter()
        .map(|b| {
            let g = p.generator(b - 1);
            let holds: Vec<bool> = (0..1usize << q)
                .map(|m| m != 0 && divides(g, &table[m * w..(m + 1) * w]))
                .collect();
            let bbit = 1usize << (b - 1);
            let mut all = Vec::new();
            let mut minimal = Vec::new();
            let mut trivial = 0;
            for m in 1usize..1 << q {
                if !holds[m] {
                    continue;
                }
                let rel = DivRel::from_mask(b, m as u64);
                all.push(rel);
                if m & bbit != 0 {
                    trivial += 1;
                    continue;
                }
                let mut bits = m;
                let mut is_min = true;
                while bits != 0 {
                    let low = bits & bits.wrapping_neg();
                    bits &= bits - 1;
                    let smaller = m & !low;
                    if smaller != 0 && holds[smaller] {
                        is_min = false;
                        break;
                    }
                }
                if is_min {
                    minimal.push(rel);
                }
            }
            (all, minimal, trivial)
        })
        .collect();
    let mut report = RelationReport {
        all: Vec::new(),
        minimal: Vec::new(),
        trivial_count: 0,
    };
    for (a, m, t) in per_b {
        report.all.extend(a);
        report.minimal.extend(m);
        report.trivial_count += t;
    }
    report.all.sort();
    report.minimal.sort();
    Ok(report)
}

/// The families of relations on the square of an ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelationKind {
    /// `m_i m_j | lcm(m_j^2, m_i m_a)`, `i < j`, `a` not in `{i, j}`.
    Type1,
    /// `m_i m_j | lcm(m_i^2, m_j m_b)`, `i < j`, `b != i`.
    Type2,
    /// `m_1^2 | lcm(m_k m_{t_k})`, `t_k` in `{1, k}`.
    Type3a,
    /// `m_1 m_j | lcm(m_k m_{t_k})`, `j > s`, `t_k` in `{1, j, k}`, some `t_k = j`.
    Type3b,
    /// `m_1 m_j | lcm(m_k m_{t_k}, m_u m_j)`, `j, u > s`, `j != u`, `t_k` in `{1, k}`.
    Type4a,
    /// `m_1 m_j | lcm(m_k m_{t_k}, m_j^2)`, `j > 1`, all `t_k > 1`.
    Type4b,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PredictedRelation {
    pub kind: RelationKind,
    pub rel: DivRel,
}

/// Largest `q` for which squared-generator relations are predicted (the
/// `C(q+1, 2)` generators must fit in a 64-bit index mask).
pub const MAX_SQUARE_Q: usize = 10;

fn sq(q: usize, i: usize, j: usize) -> usize {
    pair_position(q, i, j) + 1
}

fn check_s(q: usize, s: Option<usize>) -> Result<()> {
    if let Some(s) = s {
        if s < 3 || s > q {
            return Err(Error::input(format!("s = {s} outside 3..={q}")));
        }
    }
    Ok(())
}

/// Calls `f` on every `t` in `choices(2) x ... x choices(s)`.
fn for_each_assignment(
    s: usize,
    choices: &dyn Fn(usize) -> Vec<usize>,
    f: &mut dyn FnMut(&[usize]),
) {
    let opts: Vec<Vec<usize>> = (2..=s).map(choices).collect();
    if opts.iter().any(|o| o.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; opts.len()];
    let mut t = vec![0usize; opts.len()];
    loop {
        for (p, o) in opts.iter().enumerate() {
            t[p] = o[idx[p]];
        }
        f(&t);
        let mut p = 0;
        loop {
            if p == idx.len() {
                return;
            }
            idx[p] += 1;
            if idx[p] < opts[p].len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

fn t_mask(q: usize, t: &[usize]) -> u64 {
    t.iter()
        .enumerate()
        .fold(0u64, |m, (p, &tk)| m | 1u64 << (sq(q, p + 2, tk) - 1))
}

/// Relations on the `C(q+1, 2)` generators `m_i m_j` of `I^2`, indexed in
/// the canonical pair order. Types 1 and 2 always; types 3 and 4 when `s`
/// is given, for `I` satisfying `m_1 | lcm(m_2, ..., m_s)`. Sorted, without
/// repeated `(kind, relation)` entries.
pub fn predicted_square_relations(q: usize, s: Option<usize>) -> Result<Vec<PredictedRelation>> {
    check_s(q, s)?;
    Error::check_capacity("q for squared relations", MAX_SQUARE_Q, q)?;
    let mut out: BTreeSet<PredictedRelation> = BTreeSet::new();
    let mut push = |kind, b: usize, mask: u64| {
        out.insert(PredictedRelation {
            kind,
            rel: DivRel::from_mask(b, mask),
        });
    };
    let bit = |i: usize, j: usize| 1u64 << (sq(q, i, j) - 1);
    for i in 1..=q {
        for j in i + 1..=q {
            for a in (1..=q).filter(|&a| a != i && a != j) {
                push(RelationKind::Type1, sq(q, i, j), bit(j, j) | bit(i, a));
            }
            for b in (1..=q).filter(|&b| b != i) {
                push(RelationKind::Type2, sq(q, i, j), bit(i, i) | bit(j, b));
            }
        }
    }
    let Some(s) = s else {
        return Ok(out.into_iter().collect());
    };
    for_each_assignment(s, &|k| vec![1, k], &mut |t| {
        push(RelationKind::Type3a, sq(q, 1, 1), t_mask(q, t));
    });
    for j in s + 1..=q {
        for_each_assignment(s, &|k| vec![1, j, k], &mut |t| {
            if t.contains(&j) {
                push(RelationKind::Type3b, sq(q, 1, j), t_mask(q, t));
            }
        });
        for u in (s + 1..=q).filter(|&u| u != j) {
            for_each_assignment(s, &|k| vec![1, k], &mut |t| {
                push(RelationKind::Type4a, sq(q, 1, j), t_mask(q, t) | bit(u, j));
            });
        }
    }
    for j in 2..=q {
        for_each_assignment(s, &|_| (2..=q).collect(), &mut |t| {
            push(RelationKind::Type4b, sq(q, 1, j), t_mask(q, t) | bit(j, j));
        });
    }
    Ok(out.into_iter().collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedMinimal {
    pub minimal: Vec<DivRel>,
    /// Type 4b relations dropped because they properly extend another
    /// type 4b or type 3b relation.
    pub filtered_4b: Vec<DivRel>,
}

/// Predicted minimal relations of `E_{q,D}^2`: types 1 and 2 for `D` empty;
/// for `D = {(1, {2..s})}` also 3a, 3b, 4a and the 4b relations that do not
/// properly extend a 4b or 3b relation.
pub fn predicted_minimal_square_relations(q: usize, s: Option<usize>) -> Result<PredictedMinimal> {
    let all = predicted_square_relations(q, s)?;
    let filters: Vec<DivRel> = all
        .iter()
        .filter(|p| matches!(p.kind, RelationKind::Type3b | RelationKind::Type4b))
        .map(|p| p.rel)
        .collect();
    let mut minimal = BTreeSet::new();
    let mut filtered = BTreeSet::new();
    for p in &all {
        if p.kind == RelationKind::Type4b && filters.iter().any(|f| p.rel.properly_extends(f)) {
            filtered.insert(p.rel);
        } else {
            minimal.insert(p.rel);
        }
    }
    // a 4b relation may also arise unfiltered from another family or choice of t
    let filtered_4b = filtered.difference(&minimal).copied().collect();
    Ok(PredictedMinimal {
        minimal: minimal.into_iter().collect(),
        filtered_4b,
    })
}

fn relations_for(s: Option<usize>) -> Result<Vec<DivRel>> {
    match s {
        None => Ok(Vec::new()),
        Some(s) => single_relation(s),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityAudit {
    pub q: usize,
    pub s: Option<usize>,
    pub brute: Vec<DivRel>,
    pub predicted: Vec<DivRel>,
    pub filtered_4b: Vec<DivRel>,
    pub missing: Vec<DivRel>,
    pub extra: Vec<DivRel>,
    pub passed: bool,
}

/// Compares the brute-force minimal relations of `E_{q,D}^2` with the
/// predicted minimal set.
pub fn minimality_audit(q: usize, s: Option<usize>) -> Result<MinimalityAudit> {
    check_s(q, s)?;
    if q == 0 {
        return Err(Error::input("q must be positive"));
    }
    Error::check_capacity("q for minimality audit", 5, q)?;
    let ideal = power_generators(q, &relations_for(s)?, 2)?;
    let brute = all_relations(&ideal)?.minimal;
    let pred = predicted_minimal_square_relations(q, s)?;
    let b: BTreeSet<DivRel> = brute.iter().copied().collect();
    let p: BTreeSet<DivRel> = pred.minimal.iter().copied().collect();
    let missing: Vec<DivRel> = p.difference(&b).copied().collect();
    let extra: Vec<DivRel> = b.difference(&p).copied().collect();
    Ok(MinimalityAudit {
        q,
        s,
        passed: missing.is_empty() && extra.is_empty(),
        brute,
        predicted: pred.minimal,
        filtered_4b: pred.filtered_4b,
        missing,
        extra,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    /// All subsets of the generators of `I^2`.
    Taylor,
    /// Pairs with `sigma ∪ {e_ij}` a face of `L^2_q`.
    L2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub i: usize,
    pub j: usize,
    pub sigma: Vec<[usize; 2]>,
    pub divides: bool,
    pub predicted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterizationReport {
    pub q: usize,
    pub s: Option<usize>,
    pub scope: Scope,
    pub pairs_checked: u64,
    pub divisible_pairs: u64,
    pub counterexample_count: u64,
    /// At most [`MAX_LISTED_COUNTEREXAMPLES`] entries.
    pub counterexamples: Vec<Counterexample>,
}

pub const MAX_LISTED_COUNTEREXAMPLES: usize = 20;

/// Face-level view of `sigma` as a subset of `N^2_q`.
struct PairSet {
    q: usize,
    bits: u64,
}

impl PairSet {
    fn has(&self, i: usize, j: usize) -> bool {
        self.bits >> pair_position(self.q, i, j) & 1 == 1
    }

    fn needed_div_empty(&self, i: usize, j: usize) -> bool {
        let q = self.q;
        i != j
            && ((self.has(j, j) && (1..=q).any(|a| a != i && a != j && self.has(i, a)))
                || (self.has(i, i) && (1..=q).any(|b| b != i && self.has(j, b))))
    }

    fn needed_div_single(&self, s: usize, i: usize, j: usize) -> bool {
        if self.needed_div_empty(i, j) {
            return true;
        }
        if i != 1 {
            return false;
        }
        let q = self.q;
        let ks = || 2..=s;
        let type3a = j == 1 && ks().all(|k| self.has(k, 1) || self.has(k, k));
        let type3b = j > s
            && ks().all(|k| self.has(k, 1) || self.has(k, j) || self.has(k, k))
            && ks().any(|k| self.has(k, j));
        let type4a = j > s
            && (s + 1..=q).any(|u| u != j && self.has(u, j))
            && ks().all(|k| self.has(k, 1) || self.has(k, k));
        let type4b = j > 1 && self.has(j, j) && ks().all(|k| (2..=q).any(|t| self.has(k, t)));
        type3a || type3b || type4a || type4b
    }

    fn needed_div_l2(&self, s: usize, i: usize, j: usize) -> bool {
        if i != 1 {
            return false;
        }
        let q = self.q;
        let ks = || 2..=s;
        if ks().all(|k| self.has(k, j)) {
            return true;
        }
        if j <= s {
            return false;
        }
        let mut mixed = false;
        for_each_assignment(s, &|_| vec![1, j], &mut |t| {
            if t.contains(&1)
                && t.contains(&j)
                && t.iter().enumerate().all(|(p, &tk)| self.has(p + 2, tk))
            {
                mixed = true;
            }
        });
        mixed || (ks().all(|k| self.has(k, 1)) && (s + 1..=q).any(|u| u != j && self.has(j, u)))
    }

    fn predicts(&self, s: Option<usize>, scope: Scope, i: usize, j: usize) -> bool {
        match (s, scope) {
            (None, _) => self.needed_div_empty(i, j),
            (Some(s), Scope::Taylor) => self.needed_div_single(s, i, j),
            (Some(s), Scope::L2) => self.needed_div_l2(s, i, j),
        }
    }
}

struct Tally {
    pairs: u64,
    divisible: u64,
    bad: u64,
    listed: Vec<Counterexample>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            pairs: 0,
            divisible: 0,
            bad: 0,
            listed: Vec::new(),
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.pairs += other.pairs;
        self.divisible += other.divisible;
        self.bad += other.bad;
        self.listed.extend(other.listed);
        self.listed.truncate(MAX_LISTED_COUNTEREXAMPLES);
        self
    }
}

/// Checks, for every pair `(e_ij, sigma)` in scope with `e_ij` not in
/// `sigma`, that `eps_i eps_j | lcm(sigma)` holds exactly when the
/// face-level characterization says so. `D` is empty when `s` is `None`,
/// else `{(1, {2..s})}`. Taylor scope needs `q <= 5`, `L^2_q` scope `q <= 6`.
pub fn verify_square_characterization(
    q: usize,
    s: Option<usize>,
    scope: Scope,
) -> Result<CharacterizationReport> {
    check_s(q, s)?;
    if q == 0 {
        return Err(Error::input("q must be positive"));
    }
    match scope {
        Scope::Taylor => Error::check_capacity("q for Taylor-scope characterization", 5, q)?,
        Scope::L2 => Error::check_capacity("q for L2-scope characterization", 6, q)?,
    }
    let ideal = power_generators(q, &relations_for(s)?, 2)?;
    let p = PackedIdeal::new(&ideal);
    let n = ideal.len();
    let pairs: Vec<(usize, usize)> = {
        let mut v = Vec::with_capacity(n);
        for i in 1..=q {
            for j in i..=q {
                v.push((i, j));
            }
        }
        v
    };
    let w = p.width();
    let check = |sigma: u64, v: usize, lcm: &[u64], t: &mut Tally| {
        let (i, j) = pairs[v];
        let holds = divides(p.generator(v), lcm);
        let predicted = PairSet { q, bits: sigma }.predicts(s, scope, i, j);
        t.pairs += 1;
        t.divisible += holds as u64;
        if holds != predicted {
            t.bad += 1;
            if t.listed.len() < MAX_LISTED_COUNTEREXAMPLES {
                t.listed.push(Counterexample {
                    i,
                    j,
                    sigma: Face::from_bits(sigma)
                        .positions()
                        .map(|x| [pairs[x].0, pairs[x].1])
                        .collect(),
                    divides: holds,
                    predicted,
                });
            }
        }
    };
    let tally = match scope {
        Scope::Taylor => {
            let table = p.subset_lcm_table(n);
            (0u64..1 << n)
                .into_par_iter()
                .fold(Tally::new, |mut t, sigma| {
                    let lcm = &table[sigma as usize * w..(sigma as usize + 1) * w];
                    for v in (0..n).filter(|v| sigma >> v & 1 == 0) {
                        check(sigma, v, lcm, &mut t);
                    }
                    t
                })
                .reduce(Tally::new, Tally::merge)
        }
        Scope::L2 => {
            let faces = SimplicialComplex::l2(q)?.faces(None, false);
            faces
                .par_iter()
                .fold(Tally::new, |mut t, face| {
                    let mut lcm = p.zero();
                    for v in face.positions() {
                        let sigma = face.without(v).bits();
                        p.lcm_mask(sigma, &mut lcm);
                        check(sigma, v, &lcm, &mut t);
                    }
                    t
                })
                .reduce(Tally::new, Tally::merge)
        }
    };
    Ok(CharacterizationReport {
        q,
        s,
        scope,
        pairs_checked: tally.pairs,
        divisible_pairs: tally.divisible,
        counterexample_count: tally.bad,
        counterexamples: tally.listed,
    })
}
