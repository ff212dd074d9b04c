//! Pointwise evaluation of stationary divisor methods with exact tie
//! reporting.
//!
//! For an instance `(p, H)` and shift `delta`, the method is driven by the
//! line family `l_{i,t}(delta) = (t + delta) / p_i` for `t = 0..H-1`. The
//! outcome is read off the `H`-th smallest line value: states whose lines lie
//! strictly below it hold mandatory seats, states with a line exactly at it
//! form the tie set.
//!
//! The `H`-th smallest value is found by rank selection over the `n` sorted
//! arithmetic progressions, never materializing all `n*H` values. Arithmetic
//! runs on `i128` when the operands provably fit and falls back to big
//! integers otherwise; both paths are exact.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::outcome::Outcome;
use crate::rat::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// Scalar arithmetic used by the selection; implemented for `i128` (fast
/// path) and `BigInt` (always valid).
trait SelectInt: Clone + Ord {
    fn from_u64(x: u64) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn add(&self, other: &Self) -> Self;
    /// Floor division; `other > 0`.
    fn div_floor_by(&self, other: &Self) -> Self;
    fn divides(&self, numer: &Self) -> bool;
    fn clamp_to_u64(&self, max: u64) -> u64;
}

impl SelectInt for i128 {
    fn from_u64(x: u64) -> Self {
        x as i128
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn div_floor_by(&self, other: &Self) -> Self {
        self.div_euclid(*other)
    }
    fn divides(&self, numer: &Self) -> bool {
        numer.rem_euclid(*self) == 0
    }
    fn clamp_to_u64(&self, max: u64) -> u64 {
        if *self < 0 {
            0
        } else if *self > max as i128 {
            max
        } else {
            *self as u64
        }
    }
}

impl SelectInt for BigInt {
    fn from_u64(x: u64) -> Self {
        BigInt::from(x)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn div_floor_by(&self, other: &Self) -> Self {
        Integer::div_floor(self, other)
    }
    fn divides(&self, numer: &Self) -> bool {
        numer.mod_floor(self).is_zero()
    }
    fn clamp_to_u64(&self, max: u64) -> u64 {
        if self.is_negative() {
            0
        } else {
            self.to_u64().map_or(max, |v| v.min(max))
        }
    }
}

/// Per-state counts against the level value.
pub(crate) struct LevelProfile {
    #[allow(dead_code)]
    pub lambda: Rat,
    /// Lines of each state strictly below the level.
    pub below: Vec<u64>,
    /// Whether the state has a line exactly at the level.
    pub at: Vec<bool>,
}

struct Selector<'a, I> {
    populations: &'a [u64],
    /// Number of offsets per state (`t` ranges over `0..t_count`).
    t_count: u64,
    /// delta = a/b with b > 0.
    a: I,
    b: I,
}

impl<I: SelectInt> Selector<'_, I> {
    fn value(&self, state: usize, t: u64) -> (I, I) {
        // (t*b + a) / (b * p_i)
        let tb = I::from_u64(t).mul(&self.b);
        let num = tb.add(&self.a);
        let den = self.b.mul(&I::from_u64(self.populations[state]));
        (num, den)
    }

    /// `#{t : value(state,t) <= v}` and `#{t : value(state,t) < v}` where
    /// `v = vn/vd`. Counts clamp into `[0, t_count]`.
    fn counts(&self, state: usize, vn: &I, vd: &I) -> (u64, u64) {
        // w = v*p - delta = (vn*p*b - a*vd) / (vd*b)
        let p = I::from_u64(self.populations[state]);
        let num = vn.mul(&p).mul(&self.b).sub(&self.a.mul(vd));
        let den = vd.mul(&self.b);
        let fl = num.div_floor_by(&den);
        let le = fl.add(&I::from_u64(1)).clamp_to_u64(self.t_count);
        let lt = if den.divides(&num) {
            fl.clamp_to_u64(self.t_count)
        } else {
            le
        };
        (le, lt)
    }

    fn cmp_frac(n1: &I, d1: &I, n2: &I, d2: &I) -> std::cmp::Ordering {
        // d1, d2 > 0
        n1.mul(d2).cmp(&n2.mul(d1))
    }

    /// The `k`-th smallest line value, `1 <= k <= n * t_count`.
    fn select(&self, k: u64) -> (I, I) {
        let n = self.populations.len();
        let mut lo = vec![0u64; n];
        let mut hi = vec![self.t_count - 1; n];
        loop {
            // weighted median of window midpoints
            let mut mids: Vec<(I, I, u64)> = Vec::with_capacity(n);
            let mut total = 0u64;
            for i in 0..n {
                if lo[i] > hi[i] {
                    continue;
                }
                let w = hi[i] - lo[i] + 1;
                total += w;
                let (vn, vd) = self.value(i, lo[i] + (hi[i] - lo[i]) / 2);
                mids.push((vn, vd, w));
            }
            debug_assert!(total > 0, "selection windows exhausted");
            mids.sort_by(|x, y| Self::cmp_frac(&x.0, &x.1, &y.0, &y.1));
            let mut acc = 0u64;
            let mut pivot = None;
            for (vn, vd, w) in &mids {
                acc += w;
                if acc * 2 >= total {
                    pivot = Some((vn.clone(), vd.clone()));
                    break;
                }
            }
            let (vn, vd) = pivot.expect("nonempty windows");

            let mut c_le = 0u64;
            let mut c_lt = 0u64;
            let mut per_state = Vec::with_capacity(n);
            for i in 0..n {
                let (le, lt) = self.counts(i, &vn, &vd);
                c_le += le;
                c_lt += lt;
                per_state.push((le, lt));
            }
            if c_lt >= k {
                // answer is strictly below the pivot
                for i in 0..n {
                    let lt = per_state[i].1;
                    hi[i] = if lt == 0 { 0 } else { hi[i].min(lt - 1) };
                    if lt == 0 {
                        // whole window is >= pivot; drop the state
                        lo[i] = 1;
                        hi[i] = 0;
                    }
                }
            } else if c_le < k {
                for i in 0..n {
                    lo[i] = lo[i].max(per_state[i].0);
                }
            } else {
                return (vn, vd);
            }
        }
    }
}

fn delta_parts(delta: &Rat) -> (&BigInt, &BigInt) {
    (delta.numer(), delta.denom())
}

/// Whether the i128 path provably cannot overflow for these operands.
fn fast_path_ok(inst: &Instance, delta: &Rat, t_count: u64) -> bool {
    let (a, b) = delta_parts(delta);
    let bit_ok = |x: &BigInt, bits: u64| x.bits() <= bits;
    let pmax = *inst.populations().iter().max().unwrap();
    bit_ok(a, 38) && bit_ok(b, 38) && pmax < (1 << 21) && t_count < (1 << 15)
}

/// `k`-th smallest of the `n * t_count` line values at `delta`, exact.
fn kth_line_value(inst: &Instance, delta: &Rat, k: u64, t_count: u64) -> Rat {
    debug_assert!(k >= 1 && k <= inst.n() as u64 * t_count);
    if fast_path_ok(inst, delta, t_count) {
        let (a, b) = delta_parts(delta);
        let sel = Selector::<i128> {
            populations: inst.populations(),
            t_count,
            a: a.to_i128().unwrap(),
            b: b.to_i128().unwrap(),
        };
        let (vn, vd) = sel.select(k);
        Rat::from_big(BigInt::from(vn), BigInt::from(vd)).unwrap()
    } else {
        let (a, b) = delta_parts(delta);
        let sel = Selector::<BigInt> {
            populations: inst.populations(),
            t_count,
            a: a.clone(),
            b: b.clone(),
        };
        let (vn, vd) = sel.select(k);
        Rat::from_big(vn, vd).unwrap()
    }
}

/// Per-state strictly-below / exactly-at counts against a level value.
pub(crate) fn profile_at(inst: &Instance, delta: &Rat, lambda: &Rat, t_count: u64) -> (Vec<u64>, Vec<bool>) {
    let n = inst.n();
    let mut below = Vec::with_capacity(n);
    let mut at = Vec::with_capacity(n);
    if fast_path_ok(inst, delta, t_count) && lambda.numer().bits() <= 60 && lambda.denom().bits() <= 60 {
        let (a, b) = delta_parts(delta);
        let sel = Selector::<i128> {
            populations: inst.populations(),
            t_count,
            a: a.to_i128().unwrap(),
            b: b.to_i128().unwrap(),
        };
        let vn = lambda.numer().to_i128().unwrap();
        let vd = lambda.denom().to_i128().unwrap();
        for i in 0..n {
            let (le, lt) = sel.counts(i, &vn, &vd);
            below.push(lt);
            at.push(le > lt);
        }
    } else {
        let (a, b) = delta_parts(delta);
        let sel = Selector::<BigInt> {
            populations: inst.populations(),
            t_count,
            a: a.clone(),
            b: b.clone(),
        };
        for i in 0..n {
            let (le, lt) = sel.counts(i, lambda.numer(), lambda.denom());
            below.push(lt);
            at.push(le > lt);
        }
    }
    (below, at)
}

pub(crate) fn level_profile(inst: &Instance, delta: &Rat, rank: u64) -> LevelProfile {
    let lambda = kth_line_value(inst, delta, rank, inst.house());
    let (below, at) = profile_at(inst, delta, &lambda, inst.house());
    LevelProfile { lambda, below, at }
}

fn check_delta(delta: &Rat) -> Result<()> {
    if delta.is_negative() || *delta > Rat::one() {
        return Err(Error::InvalidDelta(delta.to_string()));
    }
    Ok(())
}

/// `lambda_k(delta)`: the `k`-th smallest value among `(t + delta)/p_i`,
/// `t = 0..H-1`. This is the minimum multiplier placing at least `k` lines
/// weakly below it.
pub fn lambda_level(inst: &Instance, delta: &Rat, k: u64) -> Result<Rat> {
    check_delta(delta)?;
    let max = inst.n() as u64 * inst.house();
    if k == 0 || k > max {
        return Err(Error::RankOutOfRange { k, max });
    }
    Ok(kth_line_value(inst, delta, k, inst.house()))
}

/// The full set `f(p, H; delta)` of the stationary divisor method, encoded
/// compactly. `delta = 0` with `H < n` has an empty outcome and is an error.
pub fn apportion_stationary(inst: &Instance, delta: &Rat) -> Result<Outcome> {
    check_delta(delta)?;
    if delta.is_zero() && inst.house() < inst.n() as u64 {
        return Err(Error::EmptyOutcome {
            house: inst.house(),
            states: inst.n(),
        });
    }
    let prof = level_profile(inst, delta, inst.house());
    let mandatory: u64 = prof.below.iter().sum();
    let extra = inst.house() - mandatory;
    let tied: Vec<usize> = (0..inst.n()).filter(|&i| prof.at[i]).collect();
    Ok(Outcome::new(prof.below, tied, extra))
}

/// `Lambda(x; delta) = [lambda_H(delta), lambda_{H+1}(delta)]`, the exact
/// multiplier set realizing the outcome; it does not depend on the vector.
/// With a single state the family has only `H` lines, so the upper endpoint
/// is padded with `l_{1,H}`.
pub fn multiplier_interval(inst: &Instance, delta: &Rat) -> Result<(Rat, Rat)> {
    check_delta(delta)?;
    if delta.is_zero() && inst.house() < inst.n() as u64 {
        return Err(Error::EmptyOutcome {
            house: inst.house(),
            states: inst.n(),
        });
    }
    let h = inst.house();
    let low = kth_line_value(inst, delta, h, h);
    let high = if inst.n() as u64 * h >= h + 1 {
        kth_line_value(inst, delta, h + 1, h)
    } else {
        // n = 1: (H + delta) / p_1
        (Rat::from_u64(h) + delta) / Rat::from_u64(inst.population(0))
    };
    Ok((low, high))
}

/// The rounding rule: returns `(t, two)` meaning `{t}` if `!two`, else
/// `{t, t+1}`.
pub fn rounding_set(r: &Rat, delta: &Rat) -> (u64, bool) {
    debug_assert!(!r.is_negative());
    let d = r - delta;
    if d.is_negative() {
        return (0, false);
    }
    if d.is_integer() {
        let t = d.floor_int().to_u64().expect("small seat count");
        (t, true)
    } else {
        let t = d.ceil_int().to_u64().expect("small seat count");
        (t, false)
    }
}

/// Whether `x` is an admissible rounding of `lambda * p_i` for every state.
pub fn compatible_with_multiplier(inst: &Instance, x: &[u64], lambda: &Rat, delta: &Rat) -> bool {
    x.iter().enumerate().all(|(i, &xi)| {
        let r = lambda * &Rat::from_u64(inst.population(i));
        let (t, two) = rounding_set(&r, delta);
        xi == t || (two && xi == t + 1)
    })
}
