//! Compact representation of a (possibly multi-valued) apportionment outcome.
//!
//! A stationary divisor method at one parameter value returns a *set* of seat
//! vectors. That set always has the shape "mandatory seats, plus `extra` seats
//! distributed among a tie set, one each": `{x : x_i = base_i + [i in S], S
//! subset of tied, |S| = extra}`. Tie sets can be exponentially large when
//! expanded, so the expansion is an explicit iterator and never materialized
//! eagerly.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Normal form: `0 < extra < tied.len()`, or `tied` empty and `extra == 0`.
/// Degenerate ties (`extra == 0` or `extra == tied.len()`) are folded into
/// `base` so that equal outcomes are syntactically equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Outcome {
    pub base: Vec<u64>,
    /// Strictly increasing state indices.
    pub tied: Vec<usize>,
    pub extra: u64,
}

impl Outcome {
    /// Builds the normal form from raw parts. `tied` need not be sorted.
    pub fn new(base: Vec<u64>, mut tied: Vec<usize>, extra: u64) -> Outcome {
        tied.sort_unstable();
        tied.dedup();
        assert!(
            (extra as usize) <= tied.len(),
            "extra seats exceed tie set size"
        );
        if extra == 0 {
            return Outcome {
                base,
                tied: Vec::new(),
                extra: 0,
            };
        }
        if extra as usize == tied.len() {
            let mut base = base;
            for &i in &tied {
                base[i] += 1;
            }
            return Outcome {
                base,
                tied: Vec::new(),
                extra: 0,
            };
        }
        Outcome { base, tied, extra }
    }

    pub fn single(seats: Vec<u64>) -> Outcome {
        Outcome {
            base: seats,
            tied: Vec::new(),
            extra: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.base.len()
    }

    /// Sum of every vector in the expansion.
    pub fn house(&self) -> u64 {
        self.base.iter().sum::<u64>() + self.extra
    }

    pub fn is_unique(&self) -> bool {
        self.tied.is_empty()
    }

    /// The one vector of a unique outcome.
    pub fn unique_vector(&self) -> Option<&Vec<u64>> {
        self.is_unique().then_some(&self.base)
    }

    /// Seats state `i` receives in every vector of the expansion.
    pub fn min_seats(&self, i: usize) -> u64 {
        self.base[i]
    }

    /// Seats state `i` receives in some vector of the expansion.
    pub fn max_seats(&self, i: usize) -> u64 {
        self.base[i] + u64::from(self.tied.binary_search(&i).is_ok())
    }

    /// `C(|tied|, extra)` vectors, without expanding.
    pub fn expansion_count(&self) -> BigUint {
        binomial(self.tied.len() as u64, self.extra)
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        if x.len() != self.base.len() {
            return false;
        }
        let mut extras = 0u64;
        for (i, (&xi, &bi)) in x.iter().zip(&self.base).enumerate() {
            if xi == bi {
                continue;
            }
            if xi == bi + 1 && self.tied.binary_search(&i).is_ok() {
                extras += 1;
            } else {
                return false;
            }
        }
        extras == self.extra
    }

    /// Lazily enumerates the expansion in lexicographic order of the chosen
    /// tie subsets.
    pub fn expand(&self) -> Expansion<'_> {
        Expansion {
            outcome: self,
            subset: (0..self.extra as usize).collect(),
            done: false,
        }
    }

    /// Collects the full expansion; intended for small tie sets in tests.
    pub fn expand_all(&self) -> Vec<Vec<u64>> {
        self.expand().collect()
    }
}

/// Iterator over all vectors of an outcome.
pub struct Expansion<'a> {
    outcome: &'a Outcome,
    subset: Vec<usize>,
    done: bool,
}

impl Iterator for Expansion<'_> {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let o = self.outcome;
        let mut x = o.base.clone();
        for &pos in &self.subset {
            x[o.tied[pos]] += 1;
        }
        // advance the combination
        let k = self.subset.len();
        let n = o.tied.len();
        if k == 0 {
            self.done = true;
            return Some(x);
        }
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.subset[i] != i + n - k {
                self.subset[i] += 1;
                for j in i + 1..k {
                    self.subset[j] = self.subset[j - 1] + 1;
                }
                break;
            }
        }
        Some(x)
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut r = BigUint::one();
    for j in 0..k {
        r = r * BigUint::from(n - j) / BigUint::from(j + 1);
    }
    r
}

/// `x` majorizes `y`: for every `k`, the `k` largest components of `x` sum to
/// at least the `k` largest components of `y`. Requires equal totals.
pub fn majorizes(x: &[u64], y: &[u64]) -> bool {
    debug_assert_eq!(
        x.iter().sum::<u64>(),
        y.iter().sum::<u64>(),
        "majorization compares equal-sum vectors"
    );
    let mut xs: Vec<u64> = x.to_vec();
    let mut ys: Vec<u64> = y.to_vec();
    xs.sort_unstable_by(|a, b| b.cmp(a));
    ys.sort_unstable_by(|a, b| b.cmp(a));
    let mut px = 0u64;
    let mut py = 0u64;
    for (a, b) in xs.iter().zip(&ys) {
        px += a;
        py += b;
        if px < py {
            return false;
        }
    }
    true
}
