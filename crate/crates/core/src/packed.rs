//! Threshold-bitset encoding of monomials for bulk lcm and divisibility.
//!
//! Layer `k` (1-based) of a monomial is the set of variables with exponent
//! at least `k`. The lcm is the layerwise union and `a | b` is layerwise
//! inclusion, so both reduce to word operations.

use crate::monomial::{Monomial, MonomialIdeal};

#[derive(Debug, Clone)]
pub struct PackedIdeal {
    width: usize,
    data: Vec<u64>,
    len: usize,
}

impl PackedIdeal {
    pub fn new(ideal: &MonomialIdeal) -> Self {
        Self::from_monomials(ideal.ring().len(), ideal.generators())
    }

    pub fn from_monomials(nvars: usize, gens: &[Monomial]) -> Self {
        let layers = gens
            .iter()
            .flat_map(|m| m.exponents().iter().copied())
            .max()
            .unwrap_or(0)
            .max(1) as usize;
        let words = nvars.div_ceil(64).max(1);
        let width = layers * words;
        let mut data = vec![0u64; width * gens.len()];
        for (g, m) in gens.iter().enumerate() {
            let row = &mut data[g * width..(g + 1) * width];
            for (v, &e) in m.exponents().iter().enumerate() {
                for k in 0..e as usize {
                    row[k * words + v / 64] |= 1u64 << (v % 64);
                }
            }
        }
        Self {
            width,
            data,
            len: gens.len(),
        }
    }

    /// Number of `u64` words per packed monomial.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn generator(&self, g: usize) -> &[u64] {
        &self.data[g * self.width..(g + 1) * self.width]
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0u64; self.width]
    }

    pub fn lcm_with(&self, acc: &mut [u64], g: usize) {
        for (a, b) in acc.iter_mut().zip(self.generator(g)) {
            *a |= b;
        }
    }

    /// lcm of the generators whose bits are set in `mask`.
    pub fn lcm_mask(&self, mask: u64, acc: &mut [u64]) {
        acc.iter_mut().for_each(|w| *w = 0);
        let mut m = mask;
        while m != 0 {
            let g = m.trailing_zeros() as usize;
            m &= m - 1;
            self.lcm_with(acc, g);
        }
    }

    /// Table of lcms of all `2^n` subsets of the first `n` generators,
    /// row `mask` holding the lcm of the generators in `mask`.
    pub fn subset_lcm_table(&self, n: usize) -> Vec<u64> {
        let w = self.width;
        let mut table = vec![0u64; w << n];
        for mask in 1usize..(1 << n) {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            for k in 0..w {
                table[mask * w + k] = table[rest * w + k] | self.data[low * w + k];
            }
        }
        table
    }
}

pub fn divides(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packed_agrees_with_exponents() {
        let i = MonomialIdeal::parse(&["x", "y", "z"], &["x^2y", "xy^3", "z", "y^2z"]).unwrap();
        let p = PackedIdeal::new(&i);
        let gens = i.generators();
        let table = p.subset_lcm_table(4);
        let w = p.width();
        for mask in 0u64..16 {
            let mut acc = p.zero();
            p.lcm_mask(mask, &mut acc);
            assert_eq!(&acc[..], &table[mask as usize * w..(mask as usize + 1) * w]);
            let members: Vec<&Monomial> = (0..4)
                .filter(|g| mask >> g & 1 == 1)
                .map(|g| &gens[g])
                .collect();
            let l = crate::monomial::lcm_of(i.ring(), members).unwrap();
            for (g, m) in gens.iter().enumerate() {
                assert_eq!(divides(p.generator(g), &acc), m.divides(&l).unwrap());
            }
        }
    }
}
