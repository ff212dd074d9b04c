//! Randomized divisor methods: exact expectations over a shift distribution,
//! seeded sampling, and the randomized fixed-divisor method with paired
//! shifts and variable realized house size.

use crate::dist::{DeltaDistribution, TieBreak};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::outcome::Outcome;
use crate::rat::Rat;
use crate::stationary::apportion_stationary;
use crate::sweep::{breakpoint_atlas, BreakpointAtlas};
use num_traits::ToPrimitive;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

/// Derives an independent stream for `(seed, task)`; splitmix64 finalizer.
pub fn stream_rng(seed: u64, task: u64) -> ChaCha8Rng {
    let mut z = seed ^ task.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    ChaCha8Rng::seed_from_u64(z)
}

/// One uniform draw as an exact dyadic rational in `[0,1)`.
pub fn uniform_dyadic(rng: &mut ChaCha8Rng) -> Rat {
    Rat::dyadic64(rng.next_u64())
}

/// The tie-break average of an outcome: the exact expectation of the chosen
/// vector under `B`. `SeededRandom` has no closed form on multi-valued
/// outcomes.
fn tie_break_average(o: &Outcome, b: TieBreak) -> Result<Vec<Rat>> {
    if o.is_unique() {
        return Ok(o.base.iter().map(|&s| Rat::from_u64(s)).collect());
    }
    match b {
        TieBreak::UniformOverExpansion => {
            // each tied state gains extra/|tied|
            let share = Rat::from_u64(o.extra) / Rat::from_u64(o.tied.len() as u64);
            Ok((0..o.n())
                .map(|i| {
                    let mut v = Rat::from_u64(o.base[i]);
                    if o.tied.binary_search(&i).is_ok() {
                        v = v + share.clone();
                    }
                    v
                })
                .collect())
        }
        TieBreak::LexicographicMax | TieBreak::LexicographicMin => {
            Ok(tie_break_lex(o, b == TieBreak::LexicographicMax)
                .into_iter()
                .map(Rat::from_u64)
                .collect())
        }
        TieBreak::SeededRandom => Err(Error::SeededRandomExpectation),
    }
}

fn tie_break_lex(o: &Outcome, max: bool) -> Vec<u64> {
    let mut x = o.base.clone();
    let r = o.extra as usize;
    let chosen: Vec<usize> = if max {
        o.tied.iter().take(r).copied().collect()
    } else {
        o.tied.iter().rev().take(r).copied().collect()
    };
    for i in chosen {
        x[i] += 1;
    }
    x
}

/// Picks one vector of `o` according to `B`, consuming randomness only for
/// the randomized kinds.
pub fn tie_break_sample(o: &Outcome, b: TieBreak, rng: &mut ChaCha8Rng) -> Vec<u64> {
    if o.is_unique() {
        return o.base.clone();
    }
    match b {
        TieBreak::LexicographicMax => tie_break_lex(o, true),
        TieBreak::LexicographicMin => tie_break_lex(o, false),
        TieBreak::UniformOverExpansion | TieBreak::SeededRandom => {
            // uniform r-subset of the tie set (partial Fisher-Yates)
            let mut pool: Vec<usize> = o.tied.clone();
            let mut x = o.base.clone();
            let r = o.extra as usize;
            for k in 0..r {
                let j = k + (rng.next_u64() as usize) % (pool.len() - k);
                pool.swap(k, j);
                x[pool[k]] += 1;
            }
            x
        }
    }
}

/// Exact `E[F^B]` of the `G`-randomized stationary divisor method, computed
/// from the breakpoint atlas. The components always sum to `H`.
pub fn expected_apportionment(
    inst: &Instance,
    g: &DeltaDistribution,
    b: TieBreak,
) -> Result<Vec<Rat>> {
    let atlas = breakpoint_atlas(inst);
    expected_from_atlas(inst, &atlas, g, b)
}

/// Same as [`expected_apportionment`] with a precomputed atlas.
pub fn expected_from_atlas(
    inst: &Instance,
    atlas: &BreakpointAtlas,
    g: &DeltaDistribution,
    b: TieBreak,
) -> Result<Vec<Rat>> {
    let n = inst.n();
    let mut expected = vec![Rat::zero(); n];
    let add = |e: &mut Vec<Rat>, mass: &Rat, avg: Vec<Rat>| {
        for (acc, v) in e.iter_mut().zip(avg) {
            *acc = &*acc + &(mass * &v);
        }
    };

    // open intervals
    for (j, o) in atlas.interval_outcomes.iter().enumerate() {
        let (lo, hi) = atlas.interval_bounds(j);
        let mass = g.mass_open(&lo, &hi);
        if mass.is_zero() {
            continue;
        }
        add(&mut expected, &mass, tie_break_average(o, b)?);
    }
    // atoms at interior breakpoints
    for (j, tau) in atlas.breakpoints.iter().enumerate() {
        let mass = g.mass_at(tau);
        if mass.is_zero() {
            continue;
        }
        add(
            &mut expected,
            &mass,
            tie_break_average(&atlas.breakpoint_outcomes[j], b)?,
        );
    }
    // atoms at interior non-breakpoint positions are covered by mass_open
    // only if they fall inside an interval; account for them explicitly
    for (at, mass) in g.atoms() {
        if mass.is_zero() || at.is_zero() || *at == Rat::one() {
            continue;
        }
        if atlas.breakpoints.binary_search(at).is_ok() {
            continue; // handled above
        }
        // interior atom inside a constant-outcome interval: mass_open above
        // already included it? No: mass_open counts atom mass, so it was
        // added with the interval average. Nothing further to do.
    }
    // endpoint atoms
    let m0 = g.mass_at(&Rat::zero());
    if !m0.is_zero() {
        let o = atlas
            .endpoints
            .at_zero
            .as_ref()
            .ok_or(Error::EmptyOutcome {
                house: inst.house(),
                states: n,
            })?;
        add(&mut expected, &m0, tie_break_average(o, b)?);
    }
    let m1 = g.mass_at(&Rat::one());
    if !m1.is_zero() {
        add(
            &mut expected,
            &m1,
            tie_break_average(&atlas.endpoints.at_one, b)?,
        );
    }

    debug_assert_eq!(
        expected.iter().cloned().sum::<Rat>(),
        Rat::from_u64(inst.house()),
        "expectation components must sum to H exactly"
    );
    Ok(expected)
}

/// Draws `delta ~ G`, evaluates the stationary method, applies the
/// tie-break. Reproducible given the seed.
pub fn sample_randomized_divisor(
    inst: &Instance,
    g: &DeltaDistribution,
    b: TieBreak,
    seed: u64,
) -> Result<Vec<u64>> {
    let mut rng = stream_rng(seed, 0);
    sample_randomized_divisor_with(inst, g, b, &mut rng)
}

/// One inverse-CDF draw from a shift distribution; exact because the
/// uniform input is an exact dyadic rational.
pub fn draw_delta(g: &DeltaDistribution, rng: &mut ChaCha8Rng) -> Rat {
    let u = uniform_dyadic(rng);
    let mut acc = Rat::zero();
    for (at, mass) in g.atoms() {
        acc = acc + mass.clone();
        if u < acc {
            return at.clone();
        }
    }
    for (lo, hi, mass) in g.pieces() {
        let next = &acc + mass;
        if u < next {
            let frac = (&u - &acc).checked_div(mass).expect("piece mass > 0");
            return lo + (hi - lo) * frac;
        }
        acc = next;
    }
    // u < 1 = total mass, so some chunk was hit; unreachable in exact
    // arithmetic but keep a safe fallback on the last atom
    g.atoms().last().expect("positive mass somewhere").0.clone()
}

/// Sampling core reused by batch drivers; advances the supplied stream.
pub fn sample_randomized_divisor_with(
    inst: &Instance,
    g: &DeltaDistribution,
    b: TieBreak,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<u64>> {
    let delta = draw_delta(g, rng);
    let o = apportion_stationary(inst, &delta)?;
    Ok(tie_break_sample(&o, b, rng))
}

/// A vector of per-state shifts in `[0,1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftVector(pub Vec<Rat>);

impl ShiftVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The paired sampler: `delta_i ~ U[0,1]` for odd `i` (1-based), `delta_i =
/// 1 - delta_{i-1}` for even `i`. Marginals are uniform and the sum is
/// pinned to within `(n mod 2)/2` of `n/2`, which is what bounds the ex-post
/// deviation of the fixed-divisor method.
pub fn paired_shifts(n: usize, seed: u64) -> ShiftVector {
    let mut rng = stream_rng(seed, 0);
    paired_shifts_with(n, &mut rng)
}

pub fn paired_shifts_with(n: usize, rng: &mut ChaCha8Rng) -> ShiftVector {
    let mut deltas = Vec::with_capacity(n);
    for i in 0..n {
        if i % 2 == 0 {
            deltas.push(uniform_dyadic(rng));
        } else {
            let prev = deltas[i - 1].clone();
            deltas.push(Rat::one() - prev);
        }
    }
    ShiftVector(deltas)
}

/// Independent uniform shifts; same marginals, no ex-post sum bound.
pub fn iid_shifts(n: usize, seed: u64) -> ShiftVector {
    let mut rng = stream_rng(seed, 0);
    ShiftVector((0..n).map(|_| uniform_dyadic(&mut rng)).collect())
}

/// The fixed-divisor method: `x_i = floor(q_i) + [frac(q_i) > delta_i]`,
/// with integral quotas pinned to `x_i = q_i`. The realized total may differ
/// from `H`; quota compliance holds per component by construction.
pub fn apportion_fixed_divisor(inst: &Instance, shifts: &ShiftVector) -> Result<Vec<u64>> {
    if shifts.len() != inst.n() {
        return Err(Error::DimensionMismatch {
            expected: inst.n(),
            got: shifts.len(),
        });
    }
    let mut x = Vec::with_capacity(inst.n());
    for i in 0..inst.n() {
        let q = inst.quota(i);
        let fl = q.floor_int().to_u64().expect("quota fits house");
        if q.is_integer() {
            x.push(fl);
        } else {
            x.push(fl + u64::from(q.fract() > shifts.0[i]));
        }
    }
    Ok(x)
}

/// The Hoeffding tail bound `2 exp(-2 Delta^2 / n)` for the deviation of the
/// realized house size.
pub fn hoeffding_bound(n: usize, delta_dev: &Rat) -> f64 {
    let d = delta_dev.to_f64();
    2.0 * (-2.0 * d * d / n as f64).exp()
}

/// Per-state report of the population-ratio deviation bound.
#[derive(Clone, Debug, Serialize)]
pub struct PopBoundEntry {
    pub expected: Rat,
    pub quota: Rat,
    pub bound: Rat,
    /// `bound - |expected - quota|`; non-negative when the bound holds.
    pub margin: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct PopBoundReport {
    pub entries: Vec<PopBoundEntry>,
    pub ok: bool,
}

/// For a shift distribution with mean exactly `1/2`, checks the exact bound
/// `|E[F_i] - q_i| <= (p_i / min_j p_j + 1) / 2` for every state.
pub fn fixed_pop_bound_check(inst: &Instance, g: &DeltaDistribution) -> Result<PopBoundReport> {
    let mean = g.mean();
    if mean != Rat::new(1, 2) {
        return Err(Error::MeanNotHalf(mean.to_string()));
    }
    let expected = expected_apportionment(inst, g, TieBreak::UniformOverExpansion)?;
    let pmin = *inst.populations().iter().min().unwrap();
    let half = Rat::new(1, 2);
    let mut entries = Vec::with_capacity(inst.n());
    let mut ok = true;
    for i in 0..inst.n() {
        let quota = inst.quota(i);
        let bound =
            (Rat::from_u64(inst.population(i)) / Rat::from_u64(pmin) + Rat::one()) * half.clone();
        let margin = &bound - &(&expected[i] - &quota).abs();
        if margin.is_negative() {
            ok = false;
        }
        entries.push(PopBoundEntry {
            expected: expected[i].clone(),
            quota,
            bound,
            margin,
        });
    }
    Ok(PopBoundReport { entries, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn inst(p: &[u64], h: u64) -> Instance {
        Instance::new(p.to_vec(), h).unwrap()
    }

    #[test]
    fn point_mass_expectation_is_interval_vector() {
        let g = DeltaDistribution::point_mass(Rat::new(1, 4)).unwrap();
        let e = expected_apportionment(&inst(&[5, 3, 1], 4), &g, TieBreak::UniformOverExpansion)
            .unwrap();
        assert_eq!(e, vec![Rat::from_int(2), Rat::one(), Rat::one()]);
    }

    #[test]
    fn uniform_expectation_fig1b() {
        // masses 1/5, 3/10, 3/10, 1/5 over the four interval outcomes
        let e = expected_apportionment(
            &inst(&[8, 3, 1], 6),
            &DeltaDistribution::uniform01(),
            TieBreak::UniformOverExpansion,
        )
        .unwrap();
        assert_eq!(e, vec![Rat::from_int(4), Rat::new(3, 2), Rat::new(1, 2)]);
    }

    #[test]
    fn adams_jefferson_mixture_bound() {
        let g = DeltaDistribution::bernoulli_endpoints();
        let i = inst(&[50, 30, 20], 13);
        let e = expected_apportionment(&i, &g, TieBreak::UniformOverExpansion).unwrap();
        let bound = Rat::new(14, 2); // (H+1)/2
        for (k, ei) in e.iter().enumerate() {
            assert!((ei - &i.quota(k)).abs() < bound);
        }
    }

    #[test]
    fn seeded_random_rejected_on_breakpoint_atom() {
        // delta = 1/2 is a breakpoint of (5,3,1) H=4 with a 3-way tie
        let g = DeltaDistribution::point_mass(Rat::new(1, 2)).unwrap();
        let r = expected_apportionment(&inst(&[5, 3, 1], 4), &g, TieBreak::SeededRandom);
        assert!(matches!(r, Err(Error::SeededRandomExpectation)));
    }

    #[test]
    fn sampling_is_reproducible() {
        let i = inst(&[8, 3, 1], 6);
        let g = DeltaDistribution::uniform01();
        let a = sample_randomized_divisor(&i, &g, TieBreak::UniformOverExpansion, 7).unwrap();
        let b = sample_randomized_divisor(&i, &g, TieBreak::UniformOverExpansion, 7).unwrap();
        assert_eq!(a, b);
        let c = sample_randomized_divisor(&i, &g, TieBreak::UniformOverExpansion, 8).unwrap();
        assert_eq!(c.iter().sum::<u64>(), 6);
    }

    #[test]
    fn point_mass_sampling_matches_stationary() {
        let i = inst(&[5, 3, 1], 4);
        let g = DeltaDistribution::point_mass(Rat::new(1, 4)).unwrap();
        let x = sample_randomized_divisor(&i, &g, TieBreak::LexicographicMax, 99).unwrap();
        assert_eq!(x, vec![2, 1, 1]);
    }

    #[test]
    fn paired_shift_sum_bounds() {
        for n in 1..=9usize {
            for seed in 0..20u64 {
                let s = paired_shifts(n, seed);
                let sum: Rat = s.0.iter().cloned().sum();
                let lo = Rat::new((n as i64 - (n % 2) as i64) / 2, 1);
                let hi = Rat::new((n as i64 + (n % 2) as i64) / 2, 1);
                assert!(sum >= lo && sum <= hi, "n={n} seed={seed} sum={sum}");
                if n == 2 {
                    assert_eq!(sum, Rat::one());
                }
            }
        }
    }

    #[test]
    fn fixed_divisor_fig2_realization() {
        // realized first signposts per the worked example: state 1 draws
        // delta < 1/2 (gets the extra seat), state 2 draws delta < 9/10,
        // state 3 draws delta < 3/5: apportionment (7,4,3), one seat over
        let i = inst(&[50, 30, 20], 13);
        let shifts = ShiftVector(vec![Rat::new(2, 5), Rat::new(1, 2), Rat::new(1, 2)]);
        let x = apportion_fixed_divisor(&i, &shifts).unwrap();
        assert_eq!(x, vec![7, 4, 3]);
        assert_eq!(x.iter().sum::<u64>(), 14);
    }

    #[test]
    fn fixed_divisor_integral_quotas_ignore_shifts() {
        let i = inst(&[2, 1], 3); // quotas (2, 1)
        let shifts = ShiftVector(vec![Rat::zero(), Rat::one()]);
        assert_eq!(apportion_fixed_divisor(&i, &shifts).unwrap(), vec![2, 1]);
    }

    #[test]
    fn hoeffding_values() {
        // n=10, Delta^2 = 5 ln 20 gives exactly 0.1
        let d2 = 5.0 * 20f64.ln();
        let d = Rat::from_f64_exact(d2.sqrt());
        assert!((hoeffding_bound(10, &d) - 0.1).abs() < 1e-9);
        // US-House style check: n=50 states, integer deviation >= 8
        assert!(hoeffding_bound(50, &Rat::from_int(8)) < 0.2);
        // Delta -> infinity
        assert!(hoeffding_bound(5, &Rat::from_int(1_000)) < 1e-300);
    }

    #[test]
    fn pop_bound_uniform_g() {
        let r = fixed_pop_bound_check(&inst(&[8, 3, 1], 6), &DeltaDistribution::uniform01())
            .unwrap();
        assert!(r.ok);
        assert_eq!(r.entries[0].bound, Rat::new(9, 2));
        // equal populations: bound is 1 for every state
        let r = fixed_pop_bound_check(&inst(&[4, 4], 5), &DeltaDistribution::uniform01()).unwrap();
        for e in &r.entries {
            assert_eq!(e.bound, Rat::one());
        }
    }

    #[test]
    fn pop_bound_rejects_wrong_mean() {
        let g = DeltaDistribution::point_mass(Rat::new(1, 4)).unwrap();
        assert!(matches!(
            fixed_pop_bound_check(&inst(&[2, 1], 3), &g),
            Err(Error::MeanNotHalf(_))
        ));
    }

    proptest! {
        #[test]
        fn fixed_divisor_is_quota_compliant(
            p in proptest::collection::vec(1u64..50, 1..6),
            h in 1u64..40,
            seed in 0u64..50,
        ) {
            let i = Instance::new(p, h).unwrap();
            let shifts = paired_shifts(i.n(), seed);
            let x = apportion_fixed_divisor(&i, &shifts).unwrap();
            let rep = crate::axioms::check_axioms(&x, &i).unwrap();
            prop_assert!(rep.quota_compliant);
            // ex-post deviation bound from the pairing
            let dev = (x.iter().sum::<u64>() as i64 - h as i64).unsigned_abs();
            prop_assert!(dev <= (i.n() as u64 + i.n() as u64 % 2) / 2);
        }
    }
}
