//! Shared helpers for the integration suites: seeded instance generation and
//! the brute-force divisor-method oracle.

#![allow(dead_code)]

use apportion_core::stationary::rounding_set;
use apportion_core::{Instance, Rat};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_range(rng: &mut ChaCha8Rng, lo: u64, hi: u64) -> u64 {
    lo + rng.next_u64() % (hi - lo + 1)
}

/// Random instance with `n <= max_n`, `p_i <= max_p`, `H <= max_h`.
pub fn random_instance(rng: &mut ChaCha8Rng, max_n: u64, max_p: u64, max_h: u64) -> Instance {
    let n = rand_range(rng, 1, max_n);
    let populations = (0..n).map(|_| rand_range(rng, 1, max_p)).collect();
    let house = rand_range(rng, 1, max_h);
    Instance::new(populations, house).unwrap()
}

/// Random rational in `(0, 1)` with denominator at most `max_den`.
pub fn random_delta(rng: &mut ChaCha8Rng, max_den: u64) -> Rat {
    let den = rand_range(rng, 2, max_den);
    let num = rand_range(rng, 1, den - 1);
    Rat::from_big(num.into(), den.into()).unwrap()
}

/// Exhaustive oracle for `f(p, H; delta)`: a seat vector belongs to the set
/// iff some multiplier among the finitely many line values admits it under
/// the rounding rule. Every feasible multiplier interval contains its lower
/// endpoint `lambda_H(delta)`, which is a line value, so testing line values
/// only is complete.
pub fn brute_force_outcome_set(inst: &Instance, delta: &Rat) -> Vec<Vec<u64>> {
    let n = inst.n();
    let h = inst.house();
    let mut candidates = Vec::new();
    for i in 0..n {
        for t in 0..=h {
            candidates.push(
                (Rat::from_u64(t) + delta.clone()) / Rat::from_u64(inst.population(i)),
            );
        }
    }
    candidates.sort();
    candidates.dedup();
    // multiplier sets are closed intervals whose lower end can be an invalid
    // lambda = 0 (at delta = 0); cover interiors with midpoints and half the
    // smallest positive value
    let mids: Vec<Rat> = candidates
        .windows(2)
        .map(|w| (&w[0] + &w[1]) * Rat::new(1, 2))
        .collect();
    if let Some(minpos) = candidates.iter().find(|l| l.is_positive()) {
        candidates.push(minpos * &Rat::new(1, 2));
    }
    candidates.extend(mids);
    candidates.sort();
    candidates.dedup();
    candidates.retain(|l| l.is_positive());

    let mut found: Vec<Vec<u64>> = Vec::new();
    for lambda in &candidates {
        // per-state admissible seat counts under this multiplier
        let sets: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let r = lambda * &Rat::from_u64(inst.population(i));
                let (t, two) = rounding_set(&r, delta);
                if two {
                    vec![t, t + 1]
                } else {
                    vec![t]
                }
            })
            .collect();
        let mut x = vec![0u64; n];
        enumerate(&sets, 0, h, &mut x, &mut found);
    }
    found.sort();
    found.dedup();
    return found;

    fn enumerate(sets: &[Vec<u64>], i: usize, left: u64, x: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == sets.len() {
            if left == 0 {
                out.push(x.clone());
            }
            return;
        }
        for &v in &sets[i] {
            if v > left {
                continue;
            }
            x[i] = v;
            enumerate(sets, i + 1, left - v, x, out);
        }
        x[i] = 0;
    }
}

/// Sorted expansion of an outcome, for set comparisons in tests.
pub fn expansion_set(o: &apportion_core::Outcome) -> Vec<Vec<u64>> {
    let mut v = o.expand_all();
    v.sort();
    v
}
