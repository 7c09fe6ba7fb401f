//! Exact monomial arithmetic over finite, named variable sets.
//!
//! A [`Monomial`] is an exponent vector tied to a shared [`VariableSet`].
//! Binary operations check that both operands use the same variable set and
//! fail with [`Error::Structural`] otherwise.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered list of distinct variable names. Position `i` in the list is
/// position `i` in every exponent vector over this set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableSet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl VariableSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::input("variable names must be non-empty"));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate variable name `{name}`")));
            }
        }
        Ok(Self { names, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Parses juxtaposed variable names with optional `^k` exponents, e.g.
    /// `"ab^2c"` or `"y_{12}y_{134}^2"`. Names are matched greedily (longest
    /// declared name first). `"1"` and the empty string denote the unit.
    pub fn parse_monomial(self: &Arc<Self>, text: &str) -> Result<Monomial> {
        let mut exps = vec![0u16; self.len()];
        let s = text.trim();
        if s.is_empty() || s == "1" {
            return Ok(Monomial::from_raw(self.clone(), exps));
        }
        let mut longest_first: Vec<(usize, &str)> = self
            .names
            .iter()
            .enumerate()
            .map(|(i, n)| (i, n.as_str()))
            .collect();
        longest_first.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(&b.0)));

        let mut rest = s;
        while !rest.is_empty() {
            let c = rest.chars().next().unwrap();
            if c.is_whitespace() || c == '*' || c == '·' {
                rest = &rest[c.len_utf8()..];
                continue;
            }
            let (var, name) = longest_first
                .iter()
                .find(|(_, n)| rest.starts_with(n))
                .copied()
                .ok_or_else(|| {
                    Error::Parse(format!("no declared variable matches `{rest}` in `{text}`"))
                })?;
            rest = &rest[name.len()..];
            let mut power: u32 = 1;
            if let Some(after) = rest.strip_prefix('^') {
                let digits: String = after.chars().take_while(|c| c.is_ascii_digit()).collect();
                if digits.is_empty() {
                    return Err(Error::Parse(format!(
                        "missing exponent after `^` in `{text}`"
                    )));
                }
                power = digits
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{text}`")))?;
                rest = &after[digits.len()..];
            }
            let e = exps[var] as u32 + power;
            exps[var] = u16::try_from(e)
                .map_err(|_| Error::Parse(format!("exponent overflow in `{text}`")))?;
        }
        Ok(Monomial::from_raw(self.clone(), exps))
    }
}

fn same_ring(a: &Arc<VariableSet>, b: &Arc<VariableSet>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn mismatch() -> Error {
    Error::Structural("monomials live over different variable sets".into())
}

/// Exponent vector over a [`VariableSet`]. The zero vector is the monomial 1.
#[derive(Clone)]
pub struct Monomial {
    ring: Arc<VariableSet>,
    exps: Vec<u16>,
}

impl Monomial {
    pub fn new(ring: Arc<VariableSet>, exps: Vec<u16>) -> Result<Self> {
        if exps.len() != ring.len() {
            return Err(Error::Structural(format!(
                "exponent vector has length {}, variable set has {}",
                exps.len(),
                ring.len()
            )));
        }
        Ok(Self { ring, exps })
    }

    pub(crate) fn from_raw(ring: Arc<VariableSet>, exps: Vec<u16>) -> Self {
        debug_assert_eq!(ring.len(), exps.len());
        Self { ring, exps }
    }

    pub fn one(ring: Arc<VariableSet>) -> Self {
        let n = ring.len();
        Self {
            ring,
            exps: vec![0; n],
        }
    }

    pub fn ring(&self) -> &Arc<VariableSet> {
        &self.ring
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn is_square_free(&self) -> bool {
        self.exps.iter().all(|&e| e <= 1)
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    /// Variable positions with non-zero exponent.
    pub fn support(&self) -> Vec<usize> {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// `true` iff every exponent of `self` is at most the matching exponent of `other`.
    pub fn divides(&self, other: &Monomial) -> Result<bool> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(mismatch());
        }
        Ok(exps_divide(&self.exps, &other.exps))
    }

    pub fn product(&self, other: &Monomial) -> Result<Monomial> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(mismatch());
        }
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(&a, &b)| {
                a.checked_add(b)
                    .ok_or_else(|| Error::InvariantViolation("exponent overflow".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial::from_raw(self.ring.clone(), exps))
    }

    pub fn lcm(&self, other: &Monomial) -> Result<Monomial> {
        lcm_of(&self.ring, [self, other])
    }
}

/// Componentwise maximum. The lcm of no monomials is 1.
pub fn lcm_of<'a, I>(ring: &Arc<VariableSet>, ms: I) -> Result<Monomial>
where
    I: IntoIterator<Item = &'a Monomial>,
{
    let mut exps = vec![0u16; ring.len()];
    for m in ms {
        if !same_ring(ring, &m.ring) {
            return Err(mismatch());
        }
        lcm_into(&mut exps, &m.exps);
    }
    Ok(Monomial::from_raw(ring.clone(), exps))
}

#[inline]
pub(crate) fn lcm_into(acc: &mut [u16], other: &[u16]) {
    for (a, &b) in acc.iter_mut().zip(other) {
        if b > *a {
            *a = b;
        }
    }
}

#[inline]
pub(crate) fn exps_divide(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl PartialEq for Monomial {
    fn eq(&self, other: &Self) -> bool {
        self.exps == other.exps && same_ring(&self.ring, &other.ring)
    }
}

impl Eq for Monomial {}

impl Hash for Monomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.exps.hash(state);
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => f.write_str(self.ring.name(i))?,
                _ => write!(f, "{}^{}", self.ring.name(i), e)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial({self})")
    }
}

/// Ordered generator list over one variable set. Generator order matters:
/// divisibility relations refer to generators by (1-based) index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIdeal {
    ring: Arc<VariableSet>,
    generators: Vec<Monomial>,
}

/// On-disk ideal format: `{"variables": [...], "generators": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealFile {
    pub variables: Vec<String>,
    pub generators: Vec<String>,
}

impl MonomialIdeal {
    pub fn new(ring: Arc<VariableSet>, generators: Vec<Monomial>) -> Result<Self> {
        if let Some(bad) = generators.iter().find(|g| !same_ring(&ring, &g.ring)) {
            return Err(Error::Structural(format!(
                "generator {bad} is not over the ideal's variable set"
            )));
        }
        Ok(Self { ring, generators })
    }

    /// Builds an ideal from variable names and generator strings.
    pub fn parse<S: AsRef<str>>(variables: &[S], generators: &[S]) -> Result<Self> {
        let ring = Arc::new(VariableSet::new(variables.iter().map(|v| v.as_ref()))?);
        let gens = generators
            .iter()
            .map(|g| ring.parse_monomial(g.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring, gens)
    }

    pub fn from_file(file: &IdealFile) -> Result<Self> {
        Self::parse(&file.variables, &file.generators)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: IdealFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_file(&self) -> IdealFile {
        IdealFile {
            variables: self.ring.names().to_vec(),
            generators: self.generators.iter().map(|g| g.to_string()).collect(),
        }
    }

    pub fn ring(&self) -> &Arc<VariableSet> {
        &self.ring
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// 1-based access, matching the indexing of divisibility relations.
    pub fn generator(&self, index: usize) -> Result<&Monomial> {
        if index == 0 || index > self.generators.len() {
            return Err(Error::input(format!(
                "generator index {index} outside 1..={}",
                self.generators.len()
            )));
        }
        Ok(&self.generators[index - 1])
    }

    pub fn is_square_free(&self) -> bool {
        self.generators.iter().all(Monomial::is_square_free)
    }

    /// No generator divides another one (in particular no duplicates).
    pub fn is_minimally_generated(&self) -> bool {
        let g = &self.generators;
        (0..g.len()).all(|i| (0..g.len()).all(|j| i == j || !exps_divide(&g[i].exps, &g[j].exps)))
    }

    /// Drops every generator divisible by another one. Of several equal
    /// generators the first is kept; the relative order of survivors is kept.
    pub fn minimalize(&self) -> MonomialIdeal {
        let g = &self.generators;
        let keep: Vec<Monomial> = (0..g.len())
            .filter(|&i| {
                !(0..g.len()).any(|j| {
                    j != i
                        && exps_divide(&g[j].exps, &g[i].exps)
                        && (g[j].exps != g[i].exps || j < i)
                })
            })
            .map(|i| g[i].clone())
            .collect();
        MonomialIdeal {
            ring: self.ring.clone(),
            generators: keep,
        }
    }

    /// The generators `m_{i_1} ... m_{i_r}` of the `r`-th power, one per
    /// multiset `i_1 <= ... <= i_r`, in lexicographic order. For `r = 2`
    /// this is the pair order (1,1), (1,2), ..., (1,q), (2,2), ...
    /// Equal products are kept as separate slots.
    pub fn power(&self, r: usize) -> Result<MonomialIdeal> {
        if r == 0 {
            return Err(Error::input("power must be at least 1"));
        }
        let gens = multisets(self.len(), r)
            .into_iter()
            .map(|ms| {
                let mut acc = Monomial::one(self.ring.clone());
                for &i in &ms {
                    acc = acc.product(&self.generators[i - 1])?;
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        MonomialIdeal::new(self.ring.clone(), gens)
    }
}

/// All multisets `1 <= i_1 <= ... <= i_r <= q`, lexicographically ordered.
pub fn multisets(q: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(q: usize, r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..=q {
            cur.push(i);
            rec(q, r, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if q > 0 {
        rec(q, r, 1, &mut Vec::with_capacity(r), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(names: &[&str]) -> Arc<VariableSet> {
        Arc::new(VariableSet::new(names.iter().copied()).unwrap())
    }

    #[test]
    fn lcm_examples() {
        let r = ring(&["a", "b", "c", "d", "e", "f", "g"]);
        assert!(lcm_of(&r, []).unwrap().is_one());
        let ab = r.parse_monomial("ab").unwrap();
        let bcd = r.parse_monomial("bcd").unwrap();
        assert_eq!(ab.lcm(&bcd).unwrap().to_string(), "abcd");

        let xy = ring(&["x", "y"]);
        let x2 = xy.parse_monomial("x^2").unwrap();
        let xy1 = xy.parse_monomial("xy").unwrap();
        assert_eq!(x2.lcm(&xy1).unwrap().to_string(), "x^2y");
    }

    #[test]
    fn divides_examples() {
        let r = ring(&["a", "b", "c", "d", "e", "f", "g"]);
        let one = Monomial::one(r.clone());
        let m = r.parse_monomial("a^3cg").unwrap();
        assert!(one.divides(&m).unwrap());
        let ab = r.parse_monomial("ab").unwrap();
        let l = lcm_of(
            &r,
            [
                &r.parse_monomial("bcd").unwrap(),
                &r.parse_monomial("aef").unwrap(),
            ],
        )
        .unwrap();
        assert!(ab.divides(&l).unwrap());

        let x = ring(&["x"]);
        assert!(!x
            .parse_monomial("x^2")
            .unwrap()
            .divides(&x.parse_monomial("x").unwrap())
            .unwrap());
    }

    #[test]
    fn product_examples() {
        let r = ring(&["a", "b"]);
        let ab = r.parse_monomial("ab").unwrap();
        assert_eq!(ab.product(&Monomial::one(r.clone())).unwrap(), ab);
        assert_eq!(ab.product(&ab).unwrap().to_string(), "a^2b^2");
    }

    #[test]
    fn mismatched_rings_are_structural_errors() {
        let a = ring(&["a"]).parse_monomial("a").unwrap();
        let b = ring(&["b"]).parse_monomial("b").unwrap();
        assert!(matches!(a.divides(&b), Err(Error::Structural(_))));
        assert!(matches!(a.product(&b), Err(Error::Structural(_))));
        assert!(matches!(a.lcm(&b), Err(Error::Structural(_))));
    }

    #[test]
    fn greedy_parsing_of_subscripted_names() {
        let r = ring(&["y_{1}", "y_{12}", "y_{123}"]);
        let m = r.parse_monomial("y_{12}y_{1}^2y_{123}").unwrap();
        assert_eq!(m.exponents(), &[2, 1, 1]);
        assert_eq!(m.to_string(), "y_{1}^2y_{12}y_{123}");
        assert!(r.parse_monomial("y_{4}").is_err());
        assert!(r.parse_monomial("y_{1}^").is_err());
    }

    #[test]
    fn duplicate_variables_rejected() {
        assert!(VariableSet::new(["a", "a"]).is_err());
    }

    #[test]
    fn minimalize_keeps_first_duplicate() {
        let i = MonomialIdeal::parse(&["a", "b", "c"], &["ab", "a", "bc", "a", "abc"]).unwrap();
        assert!(!i.is_minimally_generated());
        let m = i.minimalize();
        let s: Vec<String> = m.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(s, ["a", "bc"]);
        assert!(m.is_minimally_generated());
    }

    #[test]
    fn power_order_is_pair_lexicographic() {
        let i = MonomialIdeal::parse(&["a", "b", "c"], &["a", "b", "c"]).unwrap();
        let sq = i.power(2).unwrap();
        let s: Vec<String> = sq.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(s, ["a^2", "ab", "ac", "b^2", "bc", "c^2"]);
        assert_eq!(multisets(4, 2).len(), 10);
    }

    #[test]
    fn ideal_file_roundtrip() {
        let text = r#"{"variables": ["a","b","c","d","e","f","g"], "generators": ["ab","bcd","aef","cg"]}"#;
        let i = MonomialIdeal::from_json(text).unwrap();
        assert_eq!(i.len(), 4);
        assert_eq!(i.generator(3).unwrap().to_string(), "aef");
        assert!(i.generator(5).is_err());
        let back = MonomialIdeal::from_file(&i.to_file()).unwrap();
        assert_eq!(back, i);
    }
}
