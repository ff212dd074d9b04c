//! Adversarial instance generators certifying the worst-case deviation
//! bounds of divisor and fixed-divisor methods.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::rat::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

/// An instance on which every vector of `f(p,H;delta)` puts state 0 at least
/// `H-1-eps` (when `delta = 0`) or `H-eps` (when `delta > 0`) seats away
/// from its quota.
///
/// `delta = 0`: one giant state and `H-1` unit states; the Adams rule hands
/// every unit state a seat. `delta > 0`: one state of population `n-1`
/// against `n-1` states of population `M`; the method hands state 0 the whole
/// house although its quota is `H/(M+1)`.
pub fn adversary_stationary(house: u64, delta: &Rat, eps: &Rat) -> Result<Instance> {
    if house < 2 {
        return Err(Error::InvalidParameter("adversary needs H >= 2".into()));
    }
    if !eps.is_positive() {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    if delta.is_negative() || *delta > Rat::one() {
        return Err(Error::InvalidDelta(delta.to_string()));
    }
    let h = Rat::from_u64(house);
    if delta.is_zero() {
        // M = ceil((H-1)(H-eps)/eps), p = (M, 1, ..., 1) with H-1 ones
        let m = ((&h - &Rat::one()) * (&h - eps))
            .checked_div(eps)?
            .ceil_int()
            .max(BigInt::one());
        let m = m
            .to_u64()
            .ok_or_else(|| Error::InvalidParameter("adversary population overflows u64".into()))?;
        let mut p = vec![m];
        p.extend(std::iter::repeat(1).take(house as usize - 1));
        Instance::new(p, house)
    } else {
        // M = ceil(H/eps - 1); smallest n with (H-1) M / (n-1-M) < delta
        let m = (h.checked_div(eps)? - Rat::one())
            .ceil_int()
            .max(BigInt::one());
        // n > 1 + M + (H-1) M / delta
        let threshold = Rat::from_bigint(m.clone()) + Rat::one()
            + ((&h - &Rat::one()) * Rat::from_bigint(m.clone())).checked_div(delta)?;
        let n = (threshold.floor_int() + 1u32)
            .to_u64()
            .ok_or_else(|| Error::InvalidParameter("adversary size overflows u64".into()))?;
        let m = m.to_u64().unwrap();
        let mut p = vec![n - 1];
        p.extend(std::iter::repeat(m).take(n as usize - 1));
        Instance::new(p, house)
    }
}

/// Given the first signposts `delta_i = s_i(0)` of a quota-compliant
/// fixed-divisor method, builds an instance on which the realized house size
/// deviates from `H` by at least `n/2 - 1 - eps`.
///
/// All quotas are placed in `(0, 1]`, so only the first signposts matter.
/// The construction splits on `sum(delta_i) <= n/2`:
///
/// * small sum: quotas sit just above the signposts, so almost every state
///   rounds up and the realized size overshoots;
/// * large sum: quotas sit at (or just below) the signposts, so almost every
///   state rounds down and the realized size undershoots. States with
///   `delta_i = 0` cannot be starved (any positive quota rounds up), so they
///   get quota exactly 1, contributing zero deviation either way.
pub fn adversary_fixed_divisor(first_signposts: &[Rat], eps: &Rat) -> Result<Instance> {
    let n = first_signposts.len();
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one signpost".into()));
    }
    if !eps.is_positive() {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    for d in first_signposts {
        if d.is_negative() || *d > Rat::one() {
            return Err(Error::InvalidParameter(format!(
                "first signpost {d} outside [0,1]"
            )));
        }
    }
    if n == 1 {
        // bound n/2 - 1 - eps < 0 is vacuous
        return Instance::new(vec![1], 1);
    }

    let sum: Rat = first_signposts.iter().cloned().sum();
    let small_sum = sum <= Rat::new(n as i64, 2);

    // per-state quota targets r_i for i < n-1; shrink the perturbation until
    // their sum is non-integral so the last state's filler is positive
    let mut shrink = Rat::one();
    let quotas: Vec<Rat> = loop {
        let step = eps * &shrink / Rat::from_u64(2 * (n as u64 - 1));
        let mut r = Vec::with_capacity(n);
        for d in &first_signposts[..n - 1] {
            if small_sum {
                if *d == Rat::one() {
                    // cannot push the quota above 1: settle for ~0 deviation
                    r.push(step.clone());
                } else {
                    // strictly above the signpost, strictly below 1
                    let eps_i = step.clone().min((&Rat::one() - d) * Rat::new(1, 2));
                    r.push(d + &eps_i);
                }
            } else if d.is_zero() {
                // any positive quota < 1 rounds up; pin to exactly 1 instead
                r.push(Rat::one());
            } else {
                // strictly below the signpost, strictly above 0
                let eps_i = step.clone().min(d * &Rat::new(1, 2));
                r.push(d - &eps_i);
            }
        }
        let s: Rat = r.iter().cloned().sum();
        if !s.is_integer() {
            let filler = Rat::from_bigint(s.ceil_int()) - s;
            r.push(filler);
            break r;
        }
        shrink = shrink * Rat::new(1, 2);
    };

    // scale the rational quotas to integer populations: p_i = M r_i,
    // H = sum r_i; then q_i = r_i exactly
    let mut denom_lcm = BigInt::one();
    for r in &quotas {
        denom_lcm = denom_lcm.lcm(r.denom());
    }
    let scale = Rat::from_bigint(denom_lcm);
    let populations = quotas
        .iter()
        .map(|r| {
            (r * &scale).to_u64().ok_or_else(|| {
                Error::InvalidParameter("adversary population overflows u64".into())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let house = quotas
        .iter()
        .cloned()
        .sum::<Rat>()
        .to_u64()
        .expect("quota sum is a small integer");
    Instance::new(populations, house)
}

/// Smallest `|x_1 - q_1|` over the expansion of an outcome, for adversary
/// verification.
pub fn min_state_deviation(inst: &Instance, o: &crate::outcome::Outcome, state: usize) -> Rat {
    let q = inst.quota(state);
    let lo = (&Rat::from_u64(o.min_seats(state)) - &q).abs();
    let hi = (&Rat::from_u64(o.max_seats(state)) - &q).abs();
    lo.min(hi)
}

/// `|sum(x) - H|` of a fixed-divisor realization.
pub fn house_deviation(inst: &Instance, x: &[u64]) -> Rat {
    (Rat::from_u64(x.iter().sum::<u64>()) - Rat::from_u64(inst.house())).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randomized::{apportion_fixed_divisor, ShiftVector};
    use crate::stationary::apportion_stationary;

    #[test]
    fn stationary_adversary_adams() {
        // H=10, eps=1/2: every vector of f(p,10;0) has |x_1 - q_1| >= 17/2
        let eps = Rat::new(1, 2);
        let inst = adversary_stationary(10, &Rat::zero(), &eps).unwrap();
        let o = apportion_stationary(&inst, &Rat::zero()).unwrap();
        let bound = Rat::from_int(10) - Rat::one() - eps;
        assert!(min_state_deviation(&inst, &o, 0) >= bound);
    }

    #[test]
    fn stationary_adversary_positive_delta() {
        for (h, delta, eps) in [
            (2u64, Rat::one(), Rat::new(1, 2)),
            (10, Rat::new(1, 2), Rat::one()),
        ] {
            let inst = adversary_stationary(h, &delta, &eps).unwrap();
            let o = apportion_stationary(&inst, &delta).unwrap();
            let bound = Rat::from_u64(h) - eps.clone();
            assert!(
                min_state_deviation(&inst, &o, 0) >= bound,
                "H={h} delta={delta} eps={eps}"
            );
        }
    }

    #[test]
    fn fixed_divisor_adversary_half_signposts() {
        // delta = (1/2,...,1/2), n=6, eps=1/4: deviation >= 7/4
        let signposts = vec![Rat::new(1, 2); 6];
        let eps = Rat::new(1, 4);
        let inst = adversary_fixed_divisor(&signposts, &eps).unwrap();
        let x = apportion_fixed_divisor(&inst, &ShiftVector(signposts)).unwrap();
        assert!(house_deviation(&inst, &x) >= Rat::new(7, 4));
    }

    #[test]
    fn fixed_divisor_adversary_alternating_01() {
        let signposts: Vec<Rat> = (0..8)
            .map(|i| if i % 2 == 0 { Rat::zero() } else { Rat::one() })
            .collect();
        let eps = Rat::new(1, 8);
        let inst = adversary_fixed_divisor(&signposts, &eps).unwrap();
        let x = apportion_fixed_divisor(&inst, &ShiftVector(signposts)).unwrap();
        assert!(house_deviation(&inst, &x) >= Rat::new(23, 8));
    }

    #[test]
    fn fixed_divisor_adversary_small_n() {
        // n=2: bound 1 - eps is weak but the instance must still be valid
        let signposts = vec![Rat::new(1, 3), Rat::new(2, 3)];
        let inst = adversary_fixed_divisor(&signposts, &Rat::new(1, 4)).unwrap();
        assert_eq!(inst.n(), 2);
    }

    #[test]
    fn fixed_divisor_adversary_large_sum() {
        // sum of signposts > n/2 exercises the undershoot branch
        let signposts = vec![Rat::new(9, 10); 5];
        let eps = Rat::new(1, 4);
        let inst = adversary_fixed_divisor(&signposts, &eps).unwrap();
        let x = apportion_fixed_divisor(&inst, &ShiftVector(signposts)).unwrap();
        let bound = Rat::new(5, 2) - Rat::one() - eps;
        assert!(house_deviation(&inst, &x) >= bound);
    }
}
