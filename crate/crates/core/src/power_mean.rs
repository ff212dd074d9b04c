//! Power-mean divisor methods.
//!
//! The signpost sequence of the `q`-power-mean method is `s_q(t) = ((t^q +
//! (t+1)^q)/2)^(1/q)`, with the limits `sqrt(t(t+1))` at `q = 0`, `t` at
//! `q = -inf`, and `t+1` at `q = +inf`; for `q < 0` the first signpost is
//! pinned to `s_q(0) = 0`. The five classical methods are exact:
//!
//! * `q = -inf` Adams, `q = +inf` Jefferson, `q = 1` Webster: stationary
//!   methods with `delta = 0, 1, 1/2`;
//! * `q = -1` Dean: rational signposts `2t(t+1)/(2t+1)`;
//! * `q = 0` Huntington-Hill: comparisons of squared signposts are integer
//!   comparisons.
//!
//! Any other rational `q` compares sums of `b`-th roots of big integers by
//! refining integer-root enclosures; a comparison that cannot be separated
//! within the precision cap is reported as a tie.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::outcome::Outcome;
use crate::rat::Rat;
use crate::stationary::apportion_stationary;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use std::cmp::Ordering;
use std::str::FromStr;

/// Parameter of a power-mean method: a rational `q` or one of the two
/// infinite sentinels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PowerMean {
    NegInf,
    Finite(Rat),
    PosInf,
}

impl PowerMean {
    pub fn parse(s: &str) -> Result<PowerMean> {
        match s.trim() {
            "-inf" | "-infinity" | "neg-inf" => Ok(PowerMean::NegInf),
            "+inf" | "inf" | "infinity" | "pos-inf" => Ok(PowerMean::PosInf),
            other => Ok(PowerMean::Finite(Rat::from_str(other)?)),
        }
    }
}

impl std::fmt::Display for PowerMean {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PowerMean::NegInf => write!(f, "-inf"),
            PowerMean::Finite(q) => write!(f, "{q}"),
            PowerMean::PosInf => write!(f, "+inf"),
        }
    }
}

/// Comparison context for one finite `q = a/b` (in lowest terms, `b > 0`).
struct RootSumCtx {
    /// |a|
    exp: u32,
    /// b (the root index)
    root: u32,
    negative: bool,
    cap_bits: u64,
    /// set when some comparison hit the precision cap and was declared a tie
    uncertified: std::cell::Cell<bool>,
}

/// Compares `sum of a^(1/root)` vs `sum of b^(1/root)` by integer-root
/// enclosures at increasing precision.
fn cmp_root_sums(a_terms: &[BigUint], b_terms: &[BigUint], ctx: &RootSumCtx) -> Ordering {
    let mut a: Vec<&BigUint> = a_terms.iter().filter(|x| !x.is_zero()).collect();
    let mut b: Vec<&BigUint> = b_terms.iter().filter(|x| !x.is_zero()).collect();
    a.sort();
    b.sort();
    if a == b {
        return Ordering::Equal;
    }
    if a.is_empty() {
        return Ordering::Less;
    }
    if b.is_empty() {
        return Ordering::Greater;
    }
    let root = ctx.root;
    let mut k = 16u64;
    loop {
        let shift = k * root as u64;
        let fa: BigUint = a.iter().map(|x| (*x << shift).nth_root(root)).sum();
        let fb: BigUint = b.iter().map(|x| (*x << shift).nth_root(root)).sum();
        // each side's true value * 2^k lies in [f, f + #terms)
        if &fa + BigUint::from(a.len()) <= fb {
            return Ordering::Less;
        }
        if &fb + BigUint::from(b.len()) <= fa {
            return Ordering::Greater;
        }
        if k >= ctx.cap_bits {
            ctx.uncertified.set(true);
            return Ordering::Equal;
        }
        k *= 2;
    }
}

fn pow_big(base: u128, exp: u32) -> BigUint {
    BigUint::from(base).pow(exp)
}

impl RootSumCtx {
    /// Open rational bracket around `s_q(t)`, strict on both sides for the
    /// `q` values routed here (|q| != 1, q != 0).
    ///
    /// Beyond the basic `(t, t+1)` window: for `q > 1`, `s_q(t) >
    /// (t+1) q/(q+1)` since `2^(1/q) < 1 + 1/q`; for `q < -1` with `w = -q`,
    /// `s_q(t) < t (1 + 1/w)` for `t >= 1` by the same estimate. These make
    /// comparisons at large |q| cheap.
    fn signpost_bracket(&self, t: u64) -> (Rat, Rat) {
        let w = Rat::from_big(
            num_bigint::BigInt::from(self.exp),
            num_bigint::BigInt::from(self.root),
        )
        .unwrap();
        if !self.negative {
            let lo = if w > Rat::one() {
                Rat::from_u64(t).max(Rat::from_u64(t + 1) * &w / (&w + Rat::one()))
            } else {
                Rat::from_u64(t)
            };
            (lo, Rat::from_u64(t + 1))
        } else {
            let hi = if t >= 1 && w > Rat::one() {
                Rat::from_u64(t + 1).min(Rat::from_u64(t) * (Rat::one() + w.recip().unwrap()))
            } else {
                Rat::from_u64(t + 1)
            };
            (Rat::from_u64(t), hi)
        }
    }

    /// Orders the signpost values `s_q(t)/p_i` vs `s_q(u)/p_j`.
    fn cmp_values(&self, pi: u64, t: u64, pj: u64, u: u64) -> Ordering {
        // disjoint rational brackets settle the comparison without roots
        if self.negative && (t == 0 || u == 0) {
            return match (t == 0, u == 0) {
                (true, true) => Ordering::Equal,
                (true, false) => Ordering::Less,
                (false, true) => Ordering::Greater,
                _ => unreachable!(),
            };
        }
        let (lo_t, hi_t) = self.signpost_bracket(t);
        let (lo_u, hi_u) = self.signpost_bracket(u);
        let pi_r = Rat::from_u64(pi);
        let pj_r = Rat::from_u64(pj);
        // values are strictly inside their brackets, except the shared lower
        // endpoint 0 at t = 0 (handled above for q < 0; strict for q > 0)
        if &hi_t * &pj_r <= &lo_u * &pi_r {
            return Ordering::Less;
        }
        if &hi_u * &pi_r <= &lo_t * &pj_r {
            return Ordering::Greater;
        }
        let bases: [u128; 4] = if !self.negative {
            // (t*pj)^q + ((t+1)*pj)^q  vs  (u*pi)^q + ((u+1)*pi)^q
            [
                t as u128 * pj as u128,
                (t as u128 + 1) * pj as u128,
                u as u128 * pi as u128,
                (u as u128 + 1) * pi as u128,
            ]
        } else {
            let tt = t as u128 * (t as u128 + 1);
            let uu = u as u128 * (u as u128 + 1);
            [
                tt * pj as u128 * u as u128,
                tt * pj as u128 * (u as u128 + 1),
                uu * pi as u128 * t as u128,
                uu * pi as u128 * (t as u128 + 1),
            ]
        };
        // give up on astronomically large powers: the bracket test above
        // already separated everything except genuinely converging pairs
        let base_bits = bases.iter().map(|b| 128 - b.leading_zeros() as u64).max().unwrap();
        if self.exp as u64 * base_bits > (1 << 21) {
            self.uncertified.set(true);
            return Ordering::Equal;
        }
        let lhs = [pow_big(bases[0], self.exp), pow_big(bases[1], self.exp)];
        let rhs = [pow_big(bases[2], self.exp), pow_big(bases[3], self.exp)];
        cmp_root_sums(&lhs, &rhs, self)
    }
}

enum SignpostCmp<'a> {
    /// q = 0: compare t(t+1) p_j^2 vs u(u+1) p_i^2
    Hill,
    /// rational signposts, e.g. q = -1
    Exact(Vec<Rat>),
    RootSum(&'a RootSumCtx),
}

fn cmp_handles(inst: &Instance, cmp: &SignpostCmp, x: (usize, u64), y: (usize, u64)) -> Ordering {
    let (i, t) = x;
    let (j, u) = y;
    let pi = inst.population(i);
    let pj = inst.population(j);
    match cmp {
        SignpostCmp::Hill => {
            let lhs = BigUint::from(t) * BigUint::from(t + 1) * pow_big(pj as u128, 2);
            let rhs = BigUint::from(u) * BigUint::from(u + 1) * pow_big(pi as u128, 2);
            lhs.cmp(&rhs)
        }
        SignpostCmp::Exact(signposts) => {
            let lhs = &signposts[t as usize] * &Rat::from_u64(pj);
            let rhs = &signposts[u as usize] * &Rat::from_u64(pi);
            lhs.cmp(&rhs)
        }
        SignpostCmp::RootSum(ctx) => ctx.cmp_values(pi, t, pj, u),
    }
}

/// Highest-averages selection with arbitrary comparable signposts.
fn apportion_by_signposts(inst: &Instance, cmp: &SignpostCmp) -> Result<Outcome> {
    let n = inst.n();
    let h = inst.house();
    let total = n as u64 * h;
    if total > 200_000 {
        return Err(Error::ResourceCap(format!(
            "power-mean selection over {total} signpost values"
        )));
    }
    let mut handles: Vec<(usize, u64)> = Vec::with_capacity(total as usize);
    for i in 0..n {
        for t in 0..h {
            handles.push((i, t));
        }
    }
    handles.sort_by(|&x, &y| cmp_handles(inst, cmp, x, y));
    let level = handles[h as usize - 1];
    let mut below = vec![0u64; n];
    let mut at = vec![false; n];
    for &e in &handles {
        match cmp_handles(inst, cmp, e, level) {
            Ordering::Less => below[e.0] += 1,
            Ordering::Equal => at[e.0] = true,
            Ordering::Greater => break,
        }
    }
    let extra = h - below.iter().sum::<u64>();
    let tied: Vec<usize> = (0..n).filter(|&i| at[i]).collect();
    Ok(Outcome::new(below, tied, extra))
}

/// The full outcome set of the `q`-power-mean divisor method.
pub fn apportion_power_mean(inst: &Instance, q: &PowerMean) -> Result<Outcome> {
    let half = Rat::new(1, 2);
    match q {
        PowerMean::NegInf => apportion_stationary(inst, &Rat::zero()),
        PowerMean::PosInf => apportion_stationary(inst, &Rat::one()),
        PowerMean::Finite(q) => {
            if (q.is_zero() || q.is_negative()) && inst.house() < inst.n() as u64 {
                return Err(Error::EmptyOutcome {
                    house: inst.house(),
                    states: inst.n(),
                });
            }
            if *q == Rat::one() {
                return apportion_stationary(inst, &half);
            }
            if q.is_zero() {
                return apportion_by_signposts(inst, &SignpostCmp::Hill);
            }
            if *q == Rat::from_int(-1) {
                // Dean: harmonic-mean signposts 2t(t+1)/(2t+1)
                let signposts: Vec<Rat> = (0..inst.house())
                    .map(|t| {
                        let t = Rat::from_u64(t);
                        let two = Rat::from_int(2);
                        (&two * &t * (&t + &Rat::one()))
                            / (&two * &t + Rat::one())
                    })
                    .collect();
                return apportion_by_signposts(inst, &SignpostCmp::Exact(signposts));
            }
            let exp = q
                .numer()
                .magnitude()
                .to_u32()
                .ok_or_else(|| Error::InvalidParameter(format!("power-mean exponent {q} too large")))?;
            let root = q
                .denom()
                .to_u32()
                .ok_or_else(|| Error::InvalidParameter(format!("power-mean root {q} too large")))?;
            let ctx = RootSumCtx {
                exp,
                root,
                negative: q.is_negative(),
                cap_bits: 4096,
                uncertified: std::cell::Cell::new(false),
            };
            apportion_by_signposts(inst, &SignpostCmp::RootSum(&ctx))
        }
    }
}

/// One maximal constant-outcome piece of the `q` axis. Boundaries between
/// adjacent pieces are certified only to the requested tolerance;
/// `resolved = false` flags a boundary the iteration cap left wider.
#[derive(Clone, Debug, Serialize)]
pub struct QPiece {
    pub lo: PowerMean,
    pub hi: PowerMean,
    pub outcome: Outcome,
    pub resolved: bool,
}

fn midpoint(a: &Rat, b: &Rat) -> Rat {
    (a + b) * Rat::new(1, 2)
}

/// Partitions `[q_lo, q_hi]` into maximal constant-outcome intervals.
///
/// Equal outcomes at two probes certify constancy in between: outcomes move
/// monotonically in the majorization order as `q` grows, so an outcome that
/// recurs cannot have changed in the middle. Boundaries are narrowed to
/// width `tol` by bisection.
pub fn power_mean_breakpoints(
    inst: &Instance,
    q_lo: &PowerMean,
    q_hi: &PowerMean,
    tol: &Rat,
) -> Result<Vec<QPiece>> {
    if !tol.is_positive() {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let budget = 20_000usize;
    let mut probes = 0usize;
    let eval = |q: &PowerMean, probes: &mut usize| -> Result<Outcome> {
        *probes += 1;
        if *probes > budget {
            return Err(Error::ResourceCap("power-mean probe budget".into()));
        }
        apportion_power_mean(inst, q)
    };

    // pin finite bisection endpoints for infinite sentinels
    let (lo_finite, lo_out, lo_resolved) = match q_lo {
        PowerMean::Finite(q) => (q.clone(), eval(q_lo, &mut probes)?, true),
        PowerMean::NegInf => {
            let target = eval(&PowerMean::NegInf, &mut probes)?;
            let mut l = Rat::from_int(-2);
            let mut resolved = false;
            for _ in 0..24 {
                if eval(&PowerMean::Finite(l.clone()), &mut probes)? == target {
                    resolved = true;
                    break;
                }
                l = l * Rat::from_int(2);
            }
            (l, target, resolved)
        }
        PowerMean::PosInf => return Err(Error::InvalidParameter("q_lo may not be +inf".into())),
    };
    let (hi_finite, hi_out, hi_resolved) = match q_hi {
        PowerMean::Finite(q) => (q.clone(), eval(q_hi, &mut probes)?, true),
        PowerMean::PosInf => {
            let target = eval(&PowerMean::PosInf, &mut probes)?;
            let mut r = Rat::from_int(2);
            let mut resolved = false;
            for _ in 0..24 {
                if eval(&PowerMean::Finite(r.clone()), &mut probes)? == target {
                    resolved = true;
                    break;
                }
                r = r * Rat::from_int(2);
            }
            (r, target, resolved)
        }
        PowerMean::NegInf => return Err(Error::InvalidParameter("q_hi may not be -inf".into())),
    };
    if lo_finite >= hi_finite {
        return Err(Error::InvalidParameter("q_lo must be below q_hi".into()));
    }

    // (position, outcome) cut list built by recursive bisection
    let mut pieces: Vec<(Rat, Outcome, bool)> = vec![(lo_finite.clone(), lo_out, true)];
    let mut stack: Vec<(Rat, Outcome, Rat, Outcome)> = vec![(
        lo_finite.clone(),
        pieces[0].1.clone(),
        hi_finite.clone(),
        hi_out.clone(),
    )];
    let mut segments: Vec<(Rat, Outcome, bool)> = Vec::new();
    // depth-first left-to-right refinement
    fn refine(
        inst: &Instance,
        a: Rat,
        oa: Outcome,
        b: Rat,
        ob: Outcome,
        tol: &Rat,
        out: &mut Vec<(Rat, Outcome, bool)>,
        probes: &mut usize,
        budget: usize,
    ) -> Result<()> {
        if oa == ob {
            return Ok(());
        }
        if &(&b - &a) <= tol {
            // boundary located within tol; cut at the midpoint
            out.push((midpoint(&a, &b), ob, true));
            return Ok(());
        }
        if *probes >= budget {
            // cap hit: record a widened, unresolved boundary
            out.push((midpoint(&a, &b), ob, false));
            return Ok(());
        }
        *probes += 1;
        let m = midpoint(&a, &b);
        let om = apportion_power_mean(inst, &PowerMean::Finite(m.clone()))?;
        refine(inst, a, oa, m.clone(), om.clone(), tol, out, probes, budget)?;
        refine(inst, m, om, b, ob, tol, out, probes, budget)
    }
    while let Some((a, oa, b, ob)) = stack.pop() {
        refine(inst, a, oa, b, ob, tol, &mut segments, &mut probes, budget)?;
    }

    // assemble pieces: cuts are sorted by construction
    let mut result: Vec<QPiece> = Vec::new();
    let mut cur_lo: PowerMean = if matches!(q_lo, PowerMean::NegInf) {
        PowerMean::NegInf
    } else {
        PowerMean::Finite(lo_finite.clone())
    };
    let mut cur_out = pieces.remove(0).1;
    let mut cur_resolved = lo_resolved;
    for (cut, out_right, resolved) in segments {
        if out_right == cur_out {
            continue;
        }
        result.push(QPiece {
            lo: cur_lo.clone(),
            hi: PowerMean::Finite(cut.clone()),
            outcome: cur_out.clone(),
            resolved: cur_resolved && resolved,
        });
        cur_lo = PowerMean::Finite(cut);
        cur_out = out_right;
        cur_resolved = resolved;
    }
    let final_hi = if matches!(q_hi, PowerMean::PosInf) {
        PowerMean::PosInf
    } else {
        PowerMean::Finite(hi_finite)
    };
    // the last probe outcome equals hi_out by construction of the cuts
    debug_assert_eq!(cur_out, hi_out);
    result.push(QPiece {
        lo: cur_lo,
        hi: final_hi,
        outcome: cur_out,
        resolved: cur_resolved && hi_resolved,
    });
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::outcome::majorizes;

    fn inst(p: &[u64], h: u64) -> Instance {
        Instance::new(p.to_vec(), h).unwrap()
    }

    #[test]
    fn webster_is_q1() {
        let i = inst(&[8, 3, 1], 6);
        let pm = apportion_power_mean(&i, &PowerMean::Finite(Rat::one())).unwrap();
        let st = apportion_stationary(&i, &Rat::new(1, 2)).unwrap();
        assert_eq!(pm, st);
    }

    #[test]
    fn jefferson_is_pos_inf() {
        let i = inst(&[5, 3, 1], 4);
        let pm = apportion_power_mean(&i, &PowerMean::PosInf).unwrap();
        let st = apportion_stationary(&i, &Rat::one()).unwrap();
        assert_eq!(pm, st);
    }

    /// Brute-force oracle for Huntington-Hill: search all seat vectors and
    /// all candidate multipliers with squared-signpost comparisons.
    fn hill_brute(inst: &Instance) -> Vec<Vec<u64>> {
        let n = inst.n();
        let h = inst.house();
        // candidate multipliers^2: s(t)^2 / p_i^2 = t(t+1)/p_i^2
        let mut cands: Vec<Rat> = Vec::new();
        for i in 0..n {
            for t in 0..=h {
                cands.push(
                    Rat::from_u64(t) * Rat::from_u64(t + 1)
                        / (Rat::from_u64(inst.population(i)) * Rat::from_u64(inst.population(i))),
                );
            }
        }
        let mut found = Vec::new();
        let mut x = vec![0u64; n];
        enumerate(inst, 0, h, &mut x, &cands, &mut found);
        found.sort();
        found.dedup();
        return found;

        fn enumerate(
            inst: &Instance,
            i: usize,
            left: u64,
            x: &mut Vec<u64>,
            cands: &[Rat],
            out: &mut Vec<Vec<u64>>,
        ) {
            if i == inst.n() {
                if left == 0 && cands.iter().any(|l2| feasible(inst, x, l2)) {
                    out.push(x.clone());
                }
                return;
            }
            for xi in 0..=left {
                x[i] = xi;
                enumerate(inst, i + 1, left - xi, x, cands, out);
            }
            x[i] = 0;

            // x_i in [[lambda p_i]]_q at q=0: s(x_i-1)^2 <= (lambda p_i)^2 <= s(x_i)^2
            fn feasible(inst: &Instance, x: &[u64], lambda2: &Rat) -> bool {
                x.iter().enumerate().all(|(i, &xi)| {
                    let p2 = Rat::from_u64(inst.population(i)) * Rat::from_u64(inst.population(i));
                    let v = lambda2 * &p2;
                    let lo = Rat::from_u64(xi.saturating_sub(1)) * Rat::from_u64(xi);
                    let hi = Rat::from_u64(xi) * Rat::from_u64(xi + 1);
                    (xi == 0 || lo <= v) && v <= hi
                })
            }
        }
    }

    #[test]
    fn hill_matches_brute_force() {
        let i = inst(&[50, 30, 20], 13);
        let o = apportion_power_mean(&i, &PowerMean::Finite(Rat::zero())).unwrap();
        let mut got = o.expand_all();
        got.sort();
        assert_eq!(got, hill_brute(&i));
        for (p, h) in [(vec![5u64, 3, 1], 4), (vec![7, 6, 2], 9), (vec![9, 9, 4], 5)] {
            let i = Instance::new(p, h).unwrap();
            let o = apportion_power_mean(&i, &PowerMean::Finite(Rat::zero())).unwrap();
            let mut got = o.expand_all();
            got.sort();
            assert_eq!(got, hill_brute(&i), "instance {i:?}");
        }
    }

    #[test]
    fn dean_between_hill_and_adams() {
        // majorization: Adams <= Dean <= Hill <= Webster <= Jefferson
        let i = inst(&[50, 30, 20], 13);
        let qs = [
            PowerMean::NegInf,
            PowerMean::Finite(Rat::from_int(-1)),
            PowerMean::Finite(Rat::zero()),
            PowerMean::Finite(Rat::one()),
            PowerMean::PosInf,
        ];
        let outs: Vec<Outcome> = qs
            .iter()
            .map(|q| apportion_power_mean(&i, q).unwrap())
            .collect();
        for w in outs.windows(2) {
            for a in w[0].expand() {
                for b in w[1].expand() {
                    assert!(majorizes(&b, &a));
                }
            }
        }
    }

    #[test]
    fn general_q_agrees_with_exact_routes() {
        // q = 2 via root-sum machinery vs a tiny brute force on multipliers:
        // spot-check against q slightly off 2 staying consistent, and q=1
        // computed both ways.
        let i = inst(&[8, 3, 1], 6);
        let via_roots = |q: i64, d: i64| {
            apportion_power_mean(&i, &PowerMean::Finite(Rat::new(q, d))).unwrap()
        };
        // q = 1 through the root-sum path (1/1 delegates; use 2/2 reduced is
        // still 1 -- so probe 3/3 is also 1; instead compare q=1 vs q=100/99
        // and q=99/100 bracketing it)
        let exact = apportion_power_mean(&i, &PowerMean::Finite(Rat::one())).unwrap();
        let lo = via_roots(99, 100);
        let hi = via_roots(100, 99);
        for a in lo.expand() {
            for b in exact.expand() {
                assert!(majorizes(&b, &a));
            }
        }
        for a in exact.expand() {
            for b in hi.expand() {
                assert!(majorizes(&b, &a));
            }
        }
    }

    #[test]
    fn empty_outcome_for_nonpositive_q_small_house() {
        let i = inst(&[5, 3, 1], 2);
        assert!(matches!(
            apportion_power_mean(&i, &PowerMean::Finite(Rat::zero())),
            Err(Error::EmptyOutcome { .. })
        ));
        assert!(matches!(
            apportion_power_mean(&i, &PowerMean::NegInf),
            Err(Error::EmptyOutcome { .. })
        ));
    }

    #[test]
    fn breakpoints_single_state() {
        let i = inst(&[4], 6);
        let pieces = power_mean_breakpoints(
            &i,
            &PowerMean::NegInf,
            &PowerMean::PosInf,
            &Rat::new(1, 16),
        )
        .unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].outcome, Outcome::single(vec![6]));
    }

    #[test]
    fn breakpoints_fig1b_endpoints() {
        let i = inst(&[8, 3, 1], 6);
        let pieces = power_mean_breakpoints(
            &i,
            &PowerMean::NegInf,
            &PowerMean::PosInf,
            &Rat::new(1, 64),
        )
        .unwrap();
        assert_eq!(
            pieces.first().unwrap().outcome,
            Outcome::single(vec![3, 2, 1]),
            "first piece is the Adams outcome"
        );
        assert_eq!(
            pieces.last().unwrap().outcome,
            Outcome::single(vec![5, 1, 0]),
            "last piece is the Jefferson outcome"
        );
        // outcome at q_hi majorizes outcome at q_lo, piece by piece
        for w in pieces.windows(2) {
            for a in w[0].outcome.expand() {
                for b in w[1].outcome.expand() {
                    assert!(majorizes(&b, &a));
                }
            }
        }
    }
}
