//! The Hamilton (largest-remainder) method, with ties kept multi-valued.

use crate::error::Result;
use crate::instance::Instance;
use crate::outcome::Outcome;
use crate::rat::Rat;
use num_traits::ToPrimitive;

/// Every state gets `floor(q_i)`; the remaining seats go to the largest
/// remainders. Remainder ties at the cutoff make the output multi-valued,
/// in the same base/tied/extra shape as divisor-method outcomes.
pub fn apportion_hamilton(inst: &Instance) -> Result<Outcome> {
    let n = inst.n();
    let mut base = Vec::with_capacity(n);
    let mut rem: Vec<Rat> = Vec::with_capacity(n);
    for i in 0..n {
        let q = inst.quota(i);
        base.push(q.floor_int().to_u64().expect("quota fits house size"));
        rem.push(q.fract());
    }
    let extra = inst.house() - base.iter().sum::<u64>();
    if extra == 0 {
        return Ok(Outcome::new(base, Vec::new(), 0));
    }

    // cutoff = extra-th largest remainder
    let mut sorted = rem.clone();
    sorted.sort_by(|a, b| b.cmp(a));
    let cutoff = sorted[extra as usize - 1].clone();

    let mut mandatory = 0u64;
    let mut tied = Vec::new();
    for (i, r) in rem.iter().enumerate() {
        if *r > cutoff {
            base[i] += 1;
            mandatory += 1;
        } else if *r == cutoff {
            tied.push(i);
        }
    }
    Ok(Outcome::new(base, tied, extra - mandatory))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(p: &[u64], h: u64) -> Instance {
        Instance::new(p.to_vec(), h).unwrap()
    }

    #[test]
    fn distinct_remainders_single_output() {
        // remainders (1/2, 9/10, 3/5): two extra seats to states 2 and 3
        let o = apportion_hamilton(&inst(&[50, 30, 20], 13)).unwrap();
        assert_eq!(o, Outcome::single(vec![6, 4, 3]));
    }

    #[test]
    fn integral_quotas() {
        let o = apportion_hamilton(&inst(&[1, 1], 2)).unwrap();
        assert_eq!(o, Outcome::single(vec![1, 1]));
    }

    #[test]
    fn symmetric_tie() {
        let o = apportion_hamilton(&inst(&[1, 1], 3)).unwrap();
        let mut all = o.expand_all();
        all.sort();
        assert_eq!(all, vec![vec![1, 2], vec![2, 1]]);
    }
}
