//! Seeded random square-free ideals satisfying `m_1 | lcm(m_2, ..., m_s)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::divrel::{relation_holds, DivRel};
use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialIdeal, VariableSet};

use std::sync::Arc;

pub const DEFAULT_VARIABLES: usize = 7;

fn random_subset(rng: &mut ChaCha8Rng, pool: &[usize]) -> Vec<usize> {
    loop {
        let pick: Vec<usize> = pool.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if !pick.is_empty() {
            return pick;
        }
    }
}

/// `count` minimally generated square-free ideals on `q` generators over
/// `nvars` variables `x1, x2, ...`, each satisfying `(1, {2..s})`.
/// The same arguments always give the same ideals.
pub fn random_ideals(
    q: usize,
    s: usize,
    nvars: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<MonomialIdeal>> {
    if s < 2 || s > q {
        return Err(Error::input(format!(
            "need 2 <= s <= q, got q = {q}, s = {s}"
        )));
    }
    if nvars < q {
        return Err(Error::input(
            "need at least q variables for minimal generation",
        ));
    }
    let ring = Arc::new(VariableSet::new((1..=nvars).map(|i| format!("x{i}")))?);
    let all: Vec<usize> = (0..nvars).collect();
    let rel = DivRel::new(1, 2..=s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        if attempts > 1000 * (count + 1) {
            return Err(Error::InvariantViolation(
                "random ideal generation keeps failing minimality".into(),
            ));
        }
        let mut supports: Vec<Vec<usize>> = vec![Vec::new(); q];
        for g in supports.iter_mut().skip(1) {
            *g = random_subset(&mut rng, &all);
        }
        let mut pool: Vec<usize> = supports[1..s].iter().flatten().copied().collect();
        pool.sort_unstable();
        pool.dedup();
        supports[0] = random_subset(&mut rng, &pool);
        let gens = supports
            .iter()
            .map(|sup| {
                let mut e = vec![0u16; nvars];
                sup.iter().for_each(|&v| e[v] = 1);
                Monomial::new(ring.clone(), e)
            })
            .collect::<Result<Vec<_>>>()?;
        let ideal = MonomialIdeal::new(ring.clone(), gens)?;
        if ideal.is_minimally_generated() && relation_holds(&ideal, &rel)? {
            out.push(ideal);
        }
    }
    Ok(out)
}
