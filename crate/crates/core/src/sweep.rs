//! The breakpoint atlas: the complete outcome space of all stationary
//! divisor methods for one instance.
//!
//! The `H`-th-smallest level of the full `n*H` line family only ever touches
//! a small set of lines as `delta` sweeps `(0,1)`. [`active_lines`] computes
//! a superset of those lines of size at most `2n-1` from the outcomes just
//! right of `0` and at `1`. The atlas is then built by an event sweep over
//! the pairwise intersections of active lines: the outcome is evaluated at
//! every event and every gap midpoint, and adjacent cells with equal
//! outcomes merge. Breakpoints are exactly the parameters where the outcome
//! changes.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::outcome::Outcome;
use crate::rat::Rat;
use crate::stationary::{apportion_stationary, level_profile};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

/// One member of the line family: `l_{state,offset}(delta) = (offset + delta)
/// / p_state`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Line {
    pub state: usize,
    pub offset: u64,
}

impl Line {
    pub fn slope(&self, inst: &Instance) -> Rat {
        Rat::from_u64(1) / Rat::from_u64(inst.population(self.state))
    }

    pub fn intercept(&self, inst: &Instance) -> Rat {
        Rat::from_u64(self.offset) / Rat::from_u64(inst.population(self.state))
    }

    pub fn eval(&self, inst: &Instance, delta: &Rat) -> Rat {
        (Rat::from_u64(self.offset) + delta) / Rat::from_u64(inst.population(self.state))
    }
}

/// Per-state offset windows of the active lines.
struct ActiveWindows {
    lo: Vec<u64>,
    hi: Vec<u64>,
}

/// A rational strictly between 0 and the first vertex of the arrangement:
/// positive intersection abscissas have denominator at most `max p`, so any
/// positive rational below `1/max_p` works.
fn before_first_vertex(inst: &Instance) -> Rat {
    let pmax = *inst.populations().iter().max().unwrap();
    Rat::from_u64(1) / (Rat::from_u64(2) * Rat::from_u64(pmax))
}

fn windows(inst: &Instance) -> ActiveWindows {
    let h = inst.house();
    let d0 = before_first_vertex(inst);
    let at0 = level_profile(inst, &d0, h);
    let at1 = level_profile(inst, &Rat::one(), h);
    let n = inst.n();
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for i in 0..n {
        // lowest offset that can still touch the level on (0,1): one below
        // the top line weakly below the level just right of 0
        let top0 = at0.below[i] + u64::from(at0.at[i]);
        lo.push(top0.saturating_sub(1));
        // highest offset that can touch: anything above the strictly-below
        // count at delta=1 would contradict monotone fixing
        hi.push(at1.below[i].min(h - 1));
    }
    ActiveWindows { lo, hi }
}

/// A superset of every line that attains the level `lambda_H` anywhere on
/// `(0,1)`; never more than `2n - 1` lines.
pub fn active_lines(inst: &Instance) -> Vec<Line> {
    let w = windows(inst);
    let mut out = Vec::new();
    for i in 0..inst.n() {
        for t in w.lo[i]..=w.hi[i] {
            out.push(Line { state: i, offset: t });
        }
    }
    out
}

/// Outcomes at the closed endpoints. `delta = 0` is empty when `H < n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndpointOutcomes {
    /// `None` marks the empty Adams outcome (`H < n`).
    pub at_zero: Option<Outcome>,
    pub at_one: Outcome,
}

/// Sorted breakpoints in `(0,1)` with the outcome on every maximal open
/// interval and at every breakpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BreakpointAtlas {
    pub breakpoints: Vec<Rat>,
    /// `breakpoints.len() + 1` outcomes, one per open interval.
    pub interval_outcomes: Vec<Outcome>,
    /// One outcome per breakpoint.
    pub breakpoint_outcomes: Vec<Outcome>,
    pub endpoints: EndpointOutcomes,
}

impl BreakpointAtlas {
    /// Bounds of the `j`-th open interval.
    pub fn interval_bounds(&self, j: usize) -> (Rat, Rat) {
        let lo = if j == 0 {
            Rat::zero()
        } else {
            self.breakpoints[j - 1].clone()
        };
        let hi = if j == self.breakpoints.len() {
            Rat::one()
        } else {
            self.breakpoints[j].clone()
        };
        (lo, hi)
    }

    /// Outcome at an arbitrary `delta` in `[0,1]`, read from the atlas.
    pub fn outcome_at(&self, delta: &Rat) -> Result<Outcome> {
        if delta.is_zero() {
            return self.endpoints.at_zero.clone().ok_or(Error::EmptyOutcome {
                house: self.interval_outcomes[0].house(),
                states: self.interval_outcomes[0].n(),
            });
        }
        if *delta == Rat::one() {
            return Ok(self.endpoints.at_one.clone());
        }
        match self.breakpoints.binary_search(delta) {
            Ok(j) => Ok(self.breakpoint_outcomes[j].clone()),
            Err(j) => Ok(self.interval_outcomes[j].clone()),
        }
    }
}

/// Evaluator over the active lines only: off-window lines stay strictly on
/// one side of the level throughout `(0,1)`, so the level is the
/// `(H - fixed_below)`-th smallest active value.
struct ActiveEval<'a> {
    inst: &'a Instance,
    lines: Vec<Line>,
    lo: Vec<u64>,
    rank: u64,
}

impl<'a> ActiveEval<'a> {
    fn new(inst: &'a Instance) -> Self {
        let w = windows(inst);
        let mut lines = Vec::new();
        for i in 0..inst.n() {
            for t in w.lo[i]..=w.hi[i] {
                lines.push(Line { state: i, offset: t });
            }
        }
        let fixed_below: u64 = w.lo.iter().sum();
        let rank = inst.house() - fixed_below;
        debug_assert!(rank >= 1 && rank <= lines.len() as u64);
        ActiveEval {
            inst,
            lines,
            lo: w.lo,
            rank,
        }
    }

    fn outcome(&self, delta: &Rat) -> Outcome {
        let n = self.inst.n();
        let mut below = self.lo.clone();
        let mut at = vec![false; n];
        if !self.outcome_i128(delta, &mut below, &mut at) {
            self.outcome_exact(delta, &mut below, &mut at);
        }
        let extra = self.inst.house() - below.iter().sum::<u64>();
        let tied: Vec<usize> = (0..n).filter(|&i| at[i]).collect();
        Outcome::new(below, tied, extra)
    }

    /// Fast evaluation on i128 fractions; returns false when the operand
    /// sizes cannot rule out overflow.
    fn outcome_i128(&self, delta: &Rat, below: &mut [u64], at: &mut [bool]) -> bool {
        use num_traits::ToPrimitive;
        let (da, db) = (delta.numer(), delta.denom());
        let pmax = *self.inst.populations().iter().max().unwrap();
        if da.bits() > 45 || db.bits() > 45 || pmax >= (1 << 21) || self.inst.house() >= (1 << 15)
        {
            return false;
        }
        let da = da.to_i128().unwrap();
        let db = db.to_i128().unwrap();
        // value of line j: (t*db + da) / (db * p)
        let mut vals: Vec<(i128, i128, usize)> = self
            .lines
            .iter()
            .map(|l| {
                (
                    l.offset as i128 * db + da,
                    db * self.inst.population(l.state) as i128,
                    l.state,
                )
            })
            .collect();
        vals.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
        let (ln, ld, _) = vals[self.rank as usize - 1];
        for &(vn, vd, state) in &vals {
            match (vn * ld).cmp(&(ln * vd)) {
                std::cmp::Ordering::Less => below[state] += 1,
                std::cmp::Ordering::Equal => at[state] = true,
                std::cmp::Ordering::Greater => break,
            }
        }
        true
    }

    fn outcome_exact(&self, delta: &Rat, below: &mut [u64], at: &mut [bool]) {
        let mut vals: Vec<(Rat, usize)> = self
            .lines
            .iter()
            .map(|l| (l.eval(self.inst, delta), l.state))
            .collect();
        vals.sort_by(|a, b| a.0.cmp(&b.0));
        let level = vals[self.rank as usize - 1].0.clone();
        for (v, state) in &vals {
            match v.cmp(&level) {
                std::cmp::Ordering::Less => below[*state] += 1,
                std::cmp::Ordering::Equal => at[*state] = true,
                std::cmp::Ordering::Greater => break,
            }
        }
    }
}

fn intersection(inst: &Instance, a: Line, b: Line) -> Option<Rat> {
    let pa = inst.population(a.state);
    let pb = inst.population(b.state);
    if pa == pb {
        return None; // parallel (or coincident)
    }
    // (t + d)/pa = (u + d)/pb  =>  d = (t*pb - u*pa) / (pa - pb)
    let num = BigInt::from(a.offset) * BigInt::from(pb) - BigInt::from(b.offset) * BigInt::from(pa);
    let den = BigInt::from(pa) - BigInt::from(pb);
    let d = Rat::from_big(num, den).unwrap();
    (d.is_positive() && d < Rat::one()).then_some(d)
}

/// Builds the full atlas of an instance.
pub fn breakpoint_atlas(inst: &Instance) -> BreakpointAtlas {
    let eval = ActiveEval::new(inst);

    let mut events: Vec<Rat> = Vec::new();
    for (j, &a) in eval.lines.iter().enumerate() {
        for &b in &eval.lines[j + 1..] {
            if let Some(d) = intersection(inst, a, b) {
                events.push(d);
            }
        }
    }
    events.sort();
    events.dedup();

    // outcomes at events and at midpoints of the gaps between them
    let mut cell_outcomes = Vec::with_capacity(events.len() + 1);
    let mut event_outcomes = Vec::with_capacity(events.len());
    let half = Rat::new(1, 2);
    for j in 0..=events.len() {
        let lo = if j == 0 { Rat::zero() } else { events[j - 1].clone() };
        let hi = if j == events.len() {
            Rat::one()
        } else {
            events[j].clone()
        };
        let mid = (&lo + &hi) * &half;
        cell_outcomes.push(eval.outcome(&mid));
        if j < events.len() {
            event_outcomes.push(eval.outcome(&events[j]));
        }
    }

    // an event is a breakpoint iff the outcome is not constant across it
    let mut breakpoints = Vec::new();
    let mut interval_outcomes = vec![cell_outcomes[0].clone()];
    let mut breakpoint_outcomes = Vec::new();
    for j in 0..events.len() {
        let left = interval_outcomes.last().unwrap();
        let here = &event_outcomes[j];
        let right = &cell_outcomes[j + 1];
        if here == left && right == left {
            continue;
        }
        breakpoints.push(events[j].clone());
        breakpoint_outcomes.push(here.clone());
        interval_outcomes.push(right.clone());
    }

    let at_zero = apportion_stationary(inst, &Rat::zero()).ok();
    let at_one = apportion_stationary(inst, &Rat::one()).expect("delta=1 is never empty");

    BreakpointAtlas {
        breakpoints,
        interval_outcomes,
        breakpoint_outcomes,
        endpoints: EndpointOutcomes { at_zero, at_one },
    }
}

/// The quota partition `[0, tau_high]` / `[tau_low, 1]`: upper quota holds on
/// the former, lower quota on the latter, and the two overlap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotaPartition {
    pub tau_low: Rat,
    pub tau_high: Rat,
}

/// Solves `lambda_H(delta) = v` for `delta`, clamped to `[0,1]`. `lambda_H`
/// is strictly increasing and piecewise linear, so the solution is unique
/// and lies on a line: `delta = v * p_i - t` for the attaining line.
fn invert_level(inst: &Instance, v: &Rat) -> Rat {
    let h = inst.house();
    let at0 = crate::stationary::lambda_level(inst, &Rat::zero(), h).unwrap();
    if *v <= at0 {
        return Rat::zero();
    }
    let at1 = crate::stationary::lambda_level(inst, &Rat::one(), h).unwrap();
    if *v >= at1 {
        return Rat::one();
    }
    for i in 0..inst.n() {
        let vp = v * &Rat::from_u64(inst.population(i));
        let fl = vp.floor_int().to_i64().expect("level value is moderate");
        for t in [fl - 1, fl, fl + 1] {
            if t < 0 || t as u64 > inst.house() - 1 {
                continue;
            }
            let d = &vp - &Rat::from_int(t);
            if d.is_negative() || d > Rat::one() {
                continue;
            }
            if crate::stationary::lambda_level(inst, &d, h).unwrap() == *v {
                return d;
            }
        }
    }
    unreachable!("level is continuous: some line attains v");
}

/// Computes `tau_low = lambda_H^{-1}(max_i floor(q_i)/p_i)` and `tau_high =
/// lambda_H^{-1}(min_i ceil(q_i)/p_i)`, clamped to `[0,1]`.
pub fn quota_partition(inst: &Instance) -> QuotaPartition {
    let mut lambda1: Option<Rat> = None;
    let mut lambda2: Option<Rat> = None;
    for i in 0..inst.n() {
        let q = inst.quota(i);
        let p = Rat::from_u64(inst.population(i));
        let lo = Rat::from_bigint(q.floor_int()) / p.clone();
        let hi = Rat::from_bigint(q.ceil_int()) / p;
        lambda1 = Some(match lambda1 {
            None => lo,
            Some(cur) => cur.max(lo),
        });
        lambda2 = Some(match lambda2 {
            None => hi,
            Some(cur) => cur.min(hi),
        });
    }
    QuotaPartition {
        tau_low: invert_level(inst, &lambda1.unwrap()),
        tau_high: invert_level(inst, &lambda2.unwrap()),
    }
}

/// Quota flags of a whole outcome: true iff every vector in the expansion
/// satisfies the axiom.
pub fn outcome_quota_flags(inst: &Instance, o: &Outcome) -> (bool, bool) {
    let mut lower = true;
    let mut upper = true;
    for i in 0..inst.n() {
        let q = inst.quota(i);
        if Rat::from_u64(o.min_seats(i)) < Rat::from_bigint(q.floor_int()) {
            lower = false;
        }
        if Rat::from_u64(o.max_seats(i)) > Rat::from_bigint(q.ceil_int()) {
            upper = false;
        }
    }
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(p: &[u64], h: u64) -> Instance {
        Instance::new(p.to_vec(), h).unwrap()
    }

    #[test]
    fn active_lines_fig3() {
        let lines = active_lines(&inst(&[8, 3, 1], 6));
        assert!(lines.len() <= 5);
        let has = |s, t| lines.contains(&Line { state: s, offset: t });
        assert!(has(0, 3));
        assert!(has(0, 4));
        assert!(has(1, 1));
        assert!(has(2, 0));
        assert!(!has(0, 0));
    }

    #[test]
    fn active_lines_single_state() {
        let lines = active_lines(&inst(&[1], 5));
        assert!(lines.contains(&Line { state: 0, offset: 4 }));
        assert!(lines.len() <= 1);
    }

    #[test]
    fn active_lines_bound() {
        let lines = active_lines(&inst(&[5, 3, 1], 4));
        assert!(lines.len() <= 5);
    }

    #[test]
    fn atlas_fig1a() {
        let atlas = breakpoint_atlas(&inst(&[5, 3, 1], 4));
        assert_eq!(atlas.breakpoints, vec![Rat::new(1, 2)]);
        assert_eq!(atlas.interval_outcomes[0], Outcome::single(vec![2, 1, 1]));
        assert_eq!(atlas.interval_outcomes[1], Outcome::single(vec![3, 1, 0]));
        let mut exp = atlas.breakpoint_outcomes[0].expand_all();
        exp.sort();
        assert_eq!(exp, vec![vec![2, 1, 1], vec![2, 2, 0], vec![3, 1, 0]]);
    }

    #[test]
    fn atlas_fig1b() {
        let atlas = breakpoint_atlas(&inst(&[8, 3, 1], 6));
        assert_eq!(
            atlas.breakpoints,
            vec![Rat::new(1, 5), Rat::new(1, 2), Rat::new(4, 5)]
        );
        let seq: Vec<_> = atlas
            .interval_outcomes
            .iter()
            .map(|o| o.unique_vector().unwrap().clone())
            .collect();
        assert_eq!(
            seq,
            vec![vec![3, 2, 1], vec![4, 1, 1], vec![4, 2, 0], vec![5, 1, 0]]
        );
    }

    #[test]
    fn atlas_equal_populations() {
        // coincident lines: permanent two-state tie on every interval
        let atlas = breakpoint_atlas(&inst(&[2, 2], 3));
        for o in &atlas.interval_outcomes {
            assert_eq!(o.house(), 3);
        }
        let o = atlas.outcome_at(&Rat::new(1, 3)).unwrap();
        assert_eq!(o.tied, vec![0, 1]);
    }

    #[test]
    fn quota_partition_bounds() {
        let qp = quota_partition(&inst(&[8, 3, 1], 6));
        assert!(qp.tau_low <= qp.tau_high);
        let atlas = breakpoint_atlas(&inst(&[8, 3, 1], 6));
        // all four interval outcomes satisfy lower or upper quota
        for (j, o) in atlas.interval_outcomes.iter().enumerate() {
            let (lower, upper) = outcome_quota_flags(&inst(&[8, 3, 1], 6), o);
            assert!(lower || upper, "interval {j} violates both quota sides");
        }
    }

    #[test]
    fn single_state_has_no_breakpoints() {
        let atlas = breakpoint_atlas(&inst(&[7], 5));
        assert!(atlas.breakpoints.is_empty());
        assert_eq!(atlas.interval_outcomes[0], Outcome::single(vec![5]));
    }
}
