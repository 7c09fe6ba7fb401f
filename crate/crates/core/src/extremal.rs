//! The index set `Q(D)` and the `D`-extremal ideal `E_{q,D}` with its powers.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::divrel::DivRel;
use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialIdeal, VariableSet};

/// Largest `q` for which subsets of `[q]` are enumerated.
pub const MAX_Q: usize = 16;

/// A non-empty subset of `[q]`, bit `i - 1` set iff `i` is a member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubsetIndex(u32);

impl SubsetIndex {
    pub fn new(bits: u32) -> Result<Self> {
        if bits == 0 {
            return Err(Error::input("subset index must be non-empty"));
        }
        Ok(Self(bits))
    }

    pub fn from_members(members: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &m in members {
            if m == 0 || m > MAX_Q {
                return Err(Error::input(format!(
                    "subset member {m} outside 1..={MAX_Q}"
                )));
            }
            bits |= 1 << (m - 1);
        }
        Self::new(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=32).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Members in increasing order, 1-based.
    pub fn members(self) -> Vec<usize> {
        (0..32)
            .filter(|b| self.0 & (1 << b) != 0)
            .map(|b| b + 1)
            .collect()
    }

    /// `y_{134}`; members are comma-separated once any index has two digits.
    pub fn variable_name(self) -> String {
        let m = self.members();
        let sep = if m.iter().any(|&x| x >= 10) { "," } else { "" };
        let body: Vec<String> = m.iter().map(|x| x.to_string()).collect();
        format!("y_{{{}}}", body.join(sep))
    }

    /// Cardinality first, then lexicographic on the sorted members.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.members().cmp(&other.members()))
    }
}

fn check_relations(q: usize, d: &[DivRel]) -> Result<()> {
    if q == 0 {
        return Err(Error::input("q must be positive"));
    }
    Error::check_capacity("q for subset enumeration", MAX_Q, q)?;
    for rel in d {
        rel.check_range(q)?;
    }
    Ok(())
}

/// Non-empty `A` in `[q]` such that every `(b, B)` in `d` has `b` outside
/// `A` or `A` meeting `B`. Returned in canonical subset order.
pub fn q_of_d(q: usize, d: &[DivRel]) -> Result<Vec<SubsetIndex>> {
    check_relations(q, d)?;
    let mut out: Vec<SubsetIndex> = (1u32..(1u32 << q))
        .filter(|&a| {
            d.iter()
                .all(|rel| a & (1 << (rel.b() - 1)) == 0 || a & rel.mask() as u32 != 0)
        })
        .map(SubsetIndex)
        .collect();
    out.sort_by(SubsetIndex::canonical_cmp);
    Ok(out)
}

/// `E_{q,D}`: generator `i` is the product of `y_A` over `A` in `Q(D)`
/// containing `i`. Variables `y_A` with `A` outside `Q(D)` are not part of
/// the ring.
pub fn extremal_ideal(q: usize, d: &[DivRel]) -> Result<MonomialIdeal> {
    let subsets = q_of_d(q, d)?;
    let ring = Arc::new(VariableSet::new(subsets.iter().map(|a| a.variable_name()))?);
    let gens = (1..=q)
        .map(|i| {
            let exps = subsets.iter().map(|a| u16::from(a.contains(i))).collect();
            Monomial::new(ring.clone(), exps)
        })
        .collect::<Result<Vec<_>>>()?;
    MonomialIdeal::new(ring, gens)
}

/// Generators `eps^a` of `E_{q,D}^r`, one per `a` in `N^r_q`, in the
/// multiset-lexicographic order (for `r = 2`: (1,1), (1,2), ..., (q,q)).
/// Fails if two generators coincide, which cannot happen when every `B`
/// in `d` has at least two elements.
pub fn power_generators(q: usize, d: &[DivRel], r: usize) -> Result<MonomialIdeal> {
    if r == 0 {
        return Err(Error::input("power r must be at least 1"));
    }
    if let Some(bad) = d.iter().find(|rel| rel.set_len() < 2) {
        return Err(Error::input(format!(
            "relation {bad} has |B| < 2; extremal powers need |B| >= 2"
        )));
    }
    let ideal = extremal_ideal(q, d)?.power(r)?;
    let gens = ideal.generators();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if gens[i] == gens[j] {
                return Err(Error::InvariantViolation(format!(
                    "generators {} and {} of E_{{q,D}}^{r} coincide",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(ideal)
}

/// `D = {(1, {2, ..., s})}`.
pub fn single_relation(s: usize) -> Result<Vec<DivRel>> {
    if s < 2 {
        return Err(Error::input("s must be at least 2"));
    }
    Ok(vec![DivRel::new(1, 2..=s)?])
}

/// `D = {(1, {2..s})} ∪ {(b, {2..s}) : b in J}` with `J` in `{s+1, ..., q}`.
pub fn j_family(q: usize, s: usize, j_set: &[usize]) -> Result<Vec<DivRel>> {
    let mut d = single_relation(s)?;
    for &b in j_set {
        if b <= s || b > q {
            return Err(Error::input(format!(
                "J member {b} outside {}..={q}",
                s + 1
            )));
        }
        d.push(DivRel::new(b, 2..=s)?);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divrel::relation_holds;

    fn rel(b: usize, set: &[usize]) -> DivRel {
        DivRel::new(b, set.iter().copied()).unwrap()
    }

    #[test]
    fn q_of_d_examples() {
        let d = vec![rel(1, &[2, 3])];
        let qd = q_of_d(4, &d).unwrap();
        assert_eq!(qd.len(), 13);
        assert!(!qd
            .iter()
            .any(|a| a.members() == [1] || a.members() == [1, 4]));

        assert_eq!(q_of_d(3, &[]).unwrap().len(), 7);

        let d2 = vec![rel(1, &[2, 3]), rel(4, &[2, 3])];
        let qd2 = q_of_d(4, &d2).unwrap();
        assert_eq!(qd2.len(), 12);
        for bad in [&[1][..], &[4], &[1, 4]] {
            assert!(!qd2.iter().any(|a| a.members() == bad));
        }
    }

    #[test]
    fn q_of_d_rejects_out_of_range() {
        assert!(q_of_d(3, &[rel(1, &[2, 5])]).is_err());
        assert!(matches!(q_of_d(17, &[]), Err(Error::Capacity { .. })));
    }

    #[test]
    fn canonical_subset_order() {
        let qd = q_of_d(3, &[]).unwrap();
        let names: Vec<String> = qd.iter().map(|a| a.variable_name()).collect();
        assert_eq!(
            names,
            ["y_{1}", "y_{2}", "y_{3}", "y_{12}", "y_{13}", "y_{23}", "y_{123}"]
        );
        assert_eq!(
            SubsetIndex::from_members(&[1, 12]).unwrap().variable_name(),
            "y_{1,12}"
        );
    }

    #[test]
    fn extremal_generators_match_worked_example() {
        let e = extremal_ideal(4, &[rel(1, &[2, 3])]).unwrap();
        let g: Vec<String> = e.generators().iter().map(|m| m.to_string()).collect();
        assert_eq!(g[0], "y_{12}y_{13}y_{123}y_{124}y_{134}y_{1234}");
        assert_eq!(g[1], "y_{2}y_{12}y_{23}y_{24}y_{123}y_{124}y_{234}y_{1234}");
        assert_eq!(g[2], "y_{3}y_{13}y_{23}y_{34}y_{123}y_{134}y_{234}y_{1234}");
        assert_eq!(g[3], "y_{4}y_{24}y_{34}y_{124}y_{134}y_{234}y_{1234}");
        assert!(relation_holds(&e, &rel(1, &[2, 3])).unwrap());

        let p = e.generators()[0].product(&e.generators()[1]).unwrap();
        assert_eq!(
            p.to_string(),
            "y_{2}y_{12}^2y_{13}y_{23}y_{24}y_{123}^2y_{124}^2y_{134}y_{234}y_{1234}^2"
        );
    }

    #[test]
    fn extremal_q2_empty() {
        let e = extremal_ideal(2, &[]).unwrap();
        let g: Vec<String> = e.generators().iter().map(|m| m.to_string()).collect();
        assert_eq!(g, ["y_{1}y_{12}", "y_{2}y_{12}"]);
    }

    #[test]
    fn power_generator_counts() {
        let d = vec![rel(1, &[2, 3])];
        assert_eq!(power_generators(4, &d, 2).unwrap().len(), 10);
        let first = power_generators(4, &d, 1).unwrap();
        assert_eq!(first, extremal_ideal(4, &d).unwrap());
        let sq = power_generators(3, &[], 2).unwrap();
        assert_eq!(sq.len(), 6);
        assert!(sq.is_minimally_generated());
    }

    #[test]
    fn power_generators_need_big_b() {
        assert!(power_generators(3, &[rel(1, &[2])], 2).is_err());
    }

    #[test]
    fn generators_are_square_free_and_distinct() {
        for q in 1..=6 {
            let e = extremal_ideal(q, &[]).unwrap();
            assert_eq!(e.ring().len(), (1 << q) - 1);
            assert!(e.is_square_free());
            assert!(e.is_minimally_generated());
        }
    }

    #[test]
    fn j_family_validation() {
        assert_eq!(j_family(4, 3, &[4]).unwrap().len(), 2);
        assert!(j_family(4, 3, &[3]).is_err());
    }
}
