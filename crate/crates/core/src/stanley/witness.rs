//! Explicit values for the generic coefficients `Y[i,j]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Assignment, MatrixFamily};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::poly::GenericVar;

/// Limits for [`extract_witness`].
#[derive(Clone, Debug)]
pub struct WitnessOptions {
    /// Candidates tried in the deterministic enumeration.
    pub enumeration_budget: usize,
    /// Random points tried after the enumeration.
    pub random_attempts: usize,
    pub seed: u64,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions {
            enumeration_budget: 20_000,
            random_attempts: 2_000,
            seed: 0,
        }
    }
}

/// The value with index `k`: `1, 2, 3, …` over ℚ and `1, …, q−1, 0` over `𝔽_q`.
fn value(field: Field, k: usize) -> Scalar {
    match field.cardinality() {
        Some(q) if k as u64 == q - 1 => field.zero(),
        _ => field.from_u64(k as u64 + 1),
    }
}

fn assignment(field: Field, vars: &[GenericVar], idx: &[usize]) -> Assignment {
    vars.iter()
        .zip(idx)
        .map(|(&v, &k)| (v, value(field, k)))
        .collect()
}

/// Searches for an assignment under which every `A_a` is invertible.
///
/// Candidates are enumerated by increasing largest value index and then
/// lexicographically (variables in `Y[i,j]` order). Over `𝔽_q` the enumeration is
/// exhaustive when it fits in the budget, so running out proves that no witness
/// exists. Otherwise seeded random points are tried before giving up.
pub fn extract_witness(fam: &MatrixFamily, opts: &WitnessOptions) -> Result<Assignment> {
    let field = fam.field();
    let vars = fam.variables();
    let k = vars.len();
    let max_index = field.cardinality().map(|q| q as usize - 1);
    let mut tried = 0usize;
    let mut exhausted = true;

    'levels: for level in 0.. {
        if max_index.is_some_and(|m| level > m) {
            break;
        }
        // odometer over [0, level]^k with the last variable fastest, skipping max < level
        let mut idx = vec![0usize; k];
        loop {
            if k == 0 || idx.iter().any(|&i| i == level) {
                if tried >= opts.enumeration_budget {
                    exhausted = false;
                    break 'levels;
                }
                tried += 1;
                let y = assignment(field, &vars, &idx);
                if fam.verify(&y)?.is_none() {
                    return Ok(y);
                }
                if k == 0 {
                    break 'levels;
                }
            }
            let mut pos = k;
            loop {
                if pos == 0 {
                    continue 'levels;
                }
                pos -= 1;
                if idx[pos] < level {
                    idx[pos] += 1;
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
    if exhausted && field.is_finite() {
        return Err(Error::NoWitness(format!(
            "all {tried} assignments over {field} leave some A_a singular"
        )));
    }
    if exhausted {
        return Err(Error::NoWitness(
            "no assignment makes every A_a invertible".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_attempts {
        let y = random_point(field, &vars, &mut rng);
        if fam.verify(&y)?.is_none() {
            return Ok(y);
        }
    }
    Err(Error::Resource(format!(
        "no witness among {tried} enumerated and {} random assignments",
        opts.random_attempts
    )))
}

/// A uniformly random point: entries in `[1, 2^31)` over ℚ, in `𝔽_q` otherwise.
pub fn random_point(field: Field, vars: &[GenericVar], rng: &mut impl Rng) -> Assignment {
    vars.iter()
        .map(|&v| {
            let x = match field.cardinality() {
                Some(q) => field.from_u64(rng.gen_range(0..q)),
                None => field.from_u64(rng.gen_range(1..1u64 << 31)),
            };
            (v, x)
        })
        .collect()
}
