//! House-monotone, quota-compliant apportionment via the seat-assignment
//! flow system.
//!
//! A seat sequence of horizon `T` assigns seats `1..T` to states one at a
//! time subject to prefix quota boxes: after `t` seats, state `i` holds
//! between `floor(t p_i / P)` and `ceil(t p_i / P)` of them. These 0/1
//! sequences are exactly the integral extreme points of the flow LP. The
//! module computes the lookahead function `Phi`, enumerates all reachable
//! apportionments two independent ways, decomposes the proportional point
//! `Q(i,t) = p_i/P` into an exact convex combination of sequences, and
//! samples the induced randomized method.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::randomized::stream_rng;
use crate::rat::Rat;
use rand_core::RngCore;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap, HashSet};

/// Resource caps for the combinatorial machinery.
#[derive(Clone, Copy, Debug)]
pub struct FlowLimits {
    pub max_horizon: u64,
    pub max_nodes: usize,
}

impl Default for FlowLimits {
    fn default() -> Self {
        FlowLimits {
            max_horizon: 4096,
            max_nodes: 1 << 22,
        }
    }
}

/// A 0/1 extreme point of the flow system, stored as the seat order:
/// `assign[t-1]` is the state receiving seat `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SeatSequence {
    pub assign: Vec<usize>,
}

impl SeatSequence {
    pub fn horizon(&self) -> u64 {
        self.assign.len() as u64
    }

    /// `A(x, t)`: per-state seat counts after the first `t` seats.
    pub fn prefix_counts(&self, n: usize, t: u64) -> Vec<u64> {
        let mut a = vec![0u64; n];
        for &i in self.assign.iter().take(t as usize) {
            a[i] += 1;
        }
        a
    }

    /// Constraints (seat-per-step, prefix quota boxes, 0/1 entries) at every
    /// prefix.
    pub fn is_feasible(&self, inst: &Instance) -> bool {
        let mut a = vec![0u64; inst.n()];
        for (t0, &i) in self.assign.iter().enumerate() {
            if i >= inst.n() {
                return false;
            }
            a[i] += 1;
            let t = t0 as u64 + 1;
            for (j, &aj) in a.iter().enumerate() {
                if aj < floor_quota(inst, j, t) || aj > ceil_quota(inst, j, t) {
                    return false;
                }
            }
        }
        true
    }
}

/// `floor(t p_i / P)`.
pub fn floor_quota(inst: &Instance, i: usize, t: u64) -> u64 {
    (t as u128 * inst.population(i) as u128 / inst.total()) as u64
}

/// `ceil(t p_i / P)`.
pub fn ceil_quota(inst: &Instance, i: usize, t: u64) -> u64 {
    ((t as u128 * inst.population(i) as u128 + inst.total() - 1) / inst.total()) as u64
}

/// The deduplicated allocation vectors `A(x,t)` over sequences feasible up to
/// each layer `t`.
#[derive(Clone, Debug)]
pub struct ReachLayer {
    pub t: u64,
    pub vectors: BTreeSet<Vec<u64>>,
}

/// Forward reachability: `layers[t]` holds every vector reachable by some
/// prefix-feasible sequence of length `t`.
fn forward_layers(inst: &Instance, horizon: u64, limits: &FlowLimits) -> Result<Vec<ReachLayer>> {
    if horizon > limits.max_horizon {
        return Err(Error::ResourceCap(format!(
            "horizon {horizon} exceeds cap {}",
            limits.max_horizon
        )));
    }
    let n = inst.n();
    let mut layers = Vec::with_capacity(horizon as usize + 1);
    layers.push(ReachLayer {
        t: 0,
        vectors: BTreeSet::from([vec![0u64; n]]),
    });
    let mut nodes = 1usize;
    for t in 1..=horizon {
        let floors: Vec<u64> = (0..n).map(|i| floor_quota(inst, i, t)).collect();
        let ceils: Vec<u64> = (0..n).map(|i| ceil_quota(inst, i, t)).collect();
        let mut vectors = BTreeSet::new();
        for y in &layers[t as usize - 1].vectors {
            for i in 0..n {
                if y[i] + 1 > ceils[i] {
                    continue;
                }
                if (0..n).any(|j| y[j] + u64::from(j == i) < floors[j]) {
                    continue;
                }
                let mut z = y.clone();
                z[i] += 1;
                vectors.insert(z);
            }
        }
        nodes += vectors.len();
        if nodes > limits.max_nodes {
            return Err(Error::ResourceCap(format!(
                "reach layers exceed {} nodes",
                limits.max_nodes
            )));
        }
        debug_assert!(!vectors.is_empty(), "feasible layers never die out");
        layers.push(ReachLayer { t, vectors });
    }
    Ok(layers)
}

/// Keeps only vectors extendable to the final layer: afterwards `layers[t]`
/// is exactly `{A(x,t) : x in E(p, horizon)}`.
fn retain_coreachable(inst: &Instance, layers: &mut [ReachLayer]) {
    let n = inst.n();
    for t in (0..layers.len() - 1).rev() {
        let (head, tail) = layers.split_at_mut(t + 1);
        let next = &tail[0].vectors;
        head[t].vectors.retain(|y| {
            (0..n).any(|i| {
                let mut z = y.clone();
                z[i] += 1;
                next.contains(&z)
            })
        });
    }
}

/// `S_k(p, H, y)`: states whose lower quota at house `H + k` exceeds `y`.
fn demand_set(inst: &Instance, house: u64, y: &[u64], k: u64) -> (Vec<usize>, u64) {
    let mut set = Vec::new();
    let mut total = 0u64;
    for i in 0..inst.n() {
        let fl = floor_quota(inst, i, house + k);
        if fl > y[i] {
            set.push(i);
            total += fl - y[i];
        }
    }
    (set, total)
}

/// `k*(p, H, y)`: minimum `k >= 1` whose demand set already requires `k`
/// extra seats. Always at most `cP - H` for the smallest `c` with `cP > H`.
pub fn k_star(inst: &Instance, house: u64, y: &[u64]) -> Result<u64> {
    if y.len() != inst.n() {
        return Err(Error::DimensionMismatch {
            expected: inst.n(),
            got: y.len(),
        });
    }
    let p = inst.total() as u64;
    let c = house / p + 1;
    let bound = c * p - house;
    for k in 1..=bound {
        let (_, demanded) = demand_set(inst, house, y, k);
        if demanded >= k {
            return Ok(k);
        }
    }
    // k = bound always satisfies the demand identity
    unreachable!("k* exists by the full-round identity");
}

/// `tau(p, H, y)`: `k*` when its demand set is proper, else 1.
pub fn tau(inst: &Instance, house: u64, y: &[u64]) -> Result<u64> {
    let ks = k_star(inst, house, y)?;
    let (set, _) = demand_set(inst, house, y, ks);
    Ok(if set.len() == inst.n() { 1 } else { ks })
}

/// `Phi(p, 0..=H)` as a table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiTable {
    pub values: Vec<u64>,
}

/// The lookahead recursion: `Phi(p,0) = 0`, `Phi(p,1)` is the first full
/// prefix (`min k` with `sum floor(p_i k / P) >= k`), and `Phi(p,H+1)`
/// maximizes `T + tau(p,T,A(x,T))` over `T <= H` and extreme points `x` at
/// horizon `Phi(p,H)`. The inner maximum runs over the deduplicated reach
/// layers: `tau` only depends on `A(x,T)`.
pub fn phi(inst: &Instance, house: u64, limits: &FlowLimits) -> Result<PhiTable> {
    let mut values = vec![0u64];
    if house == 0 {
        return Ok(PhiTable { values });
    }
    let p = inst.total() as u64;
    let phi1 = (1..=p)
        .find(|&k| {
            (0..inst.n())
                .map(|i| floor_quota(inst, i, k))
                .sum::<u64>()
                >= k
        })
        .expect("k = P closes the round");
    values.push(phi1);

    let mut tau_memo: HashMap<(u64, Vec<u64>), u64> = HashMap::new();
    for h in 1..house {
        let horizon = values[h as usize];
        let mut layers = forward_layers(inst, horizon, limits)?;
        retain_coreachable(inst, &mut layers);
        let mut best = 0u64;
        for t in 1..=h.min(horizon) {
            for y in &layers[t as usize].vectors {
                let key = (t, y.clone());
                let tv = match tau_memo.get(&key) {
                    Some(&v) => v,
                    None => {
                        let v = tau(inst, t, y)?;
                        tau_memo.insert(key, v);
                        v
                    }
                };
                best = best.max(t + tv);
            }
        }
        values.push(best);
    }
    Ok(PhiTable { values })
}

/// Cheap upper bound `H + max_i ceil(P / p_i)` on `Phi(p, H)`, valid for
/// `H >= 2`.
pub fn phi_upper_bound(inst: &Instance, house: u64) -> Result<u64> {
    if house < 2 {
        return Err(Error::InvalidParameter("phi upper bound needs H >= 2".into()));
    }
    let p = inst.total() as u64;
    let worst = inst
        .populations()
        .iter()
        .map(|&pi| (p + pi - 1) / pi)
        .max()
        .unwrap();
    Ok(house + worst)
}

/// All apportionments at house `H` reachable by house-monotone,
/// quota-compliant solutions: the layer-`H` projection of the extreme
/// points at horizon `Phi(p, H)`.
pub fn enumerate_hm_quota(
    inst: &Instance,
    house: u64,
    limits: &FlowLimits,
) -> Result<Vec<Vec<u64>>> {
    if house == 0 {
        return Ok(vec![vec![0; inst.n()]]);
    }
    let table = phi(inst, house, limits)?;
    let horizon = table.values[house as usize];
    let mut layers = forward_layers(inst, horizon, limits)?;
    retain_coreachable(inst, &mut layers);
    Ok(layers[house as usize].vectors.iter().cloned().collect())
}

/// Independent oracle for [`enumerate_hm_quota`]: the recursive
/// lower/upper-set construction, expanded breadth-first seat by seat. From
/// allocation `y` at house `h`, the next seat may go to any state in
/// `L(p,h,y) = S_{k*}(p,h,y)` that can still take a seat under upper quota
/// at `h+1`.
pub fn enumerate_hm_quota_by_recursion(
    inst: &Instance,
    house: u64,
    limits: &FlowLimits,
) -> Result<Vec<Vec<u64>>> {
    let n = inst.n();
    let mut layer: BTreeSet<Vec<u64>> = BTreeSet::from([vec![0u64; n]]);
    let mut nodes = 1usize;
    for h in 0..house {
        let mut next = BTreeSet::new();
        for y in &layer {
            let ks = k_star(inst, h, y)?;
            let (lower_set, _) = demand_set(inst, h, y, ks);
            for &i in &lower_set {
                // upper-quota admission for seat h+1: p_i (h+1) / P > y_i
                let lhs = inst.population(i) as u128 * (h as u128 + 1);
                if lhs > y[i] as u128 * inst.total() {
                    let mut z = y.clone();
                    z[i] += 1;
                    next.insert(z);
                }
            }
        }
        nodes += next.len();
        if nodes > limits.max_nodes {
            return Err(Error::ResourceCap(format!(
                "recursion layers exceed {} nodes",
                limits.max_nodes
            )));
        }
        layer = next;
    }
    Ok(layer.into_iter().collect())
}

/// An exact convex decomposition of the proportional point: sequences of
/// horizon `P` and strictly positive weights with `sum(theta) = 1` and
/// `sum(theta_x x(i,t)) = p_i / P` for every seat and state.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub points: Vec<SeatSequence>,
    pub weights: Vec<Rat>,
}

impl Decomposition {
    /// Exact identities: weights sum to one and reproduce `Q`.
    pub fn verify(&self, inst: &Instance) -> bool {
        let n = inst.n();
        let p_total = self.points[0].horizon();
        let total: Rat = self.weights.iter().cloned().sum();
        if total != Rat::one() {
            return false;
        }
        for t in 1..=p_total {
            for i in 0..n {
                let mut acc = Rat::zero();
                for (x, w) in self.points.iter().zip(&self.weights) {
                    if x.assign[t as usize - 1] == i {
                        acc = acc + w.clone();
                    }
                }
                let q = Rat::from_u64(inst.population(i))
                    / Rat::from_bigint(inst.total_big());
                if acc != q {
                    return false;
                }
            }
        }
        true
    }
}

/// Residual state of the peeling.
struct Residual<'a> {
    inst: &'a Instance,
    horizon: u64,
    /// remaining mass per (state, seat)
    r: Vec<Vec<Rat>>,
    /// remaining total weight
    w: Rat,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Pin {
    Free,
    AtFloor,
    AtCeil,
}

impl Residual<'_> {
    fn cumsum(&self, i: usize, t: u64) -> Rat {
        (1..=t).map(|l| self.r[i][l as usize - 1].clone()).sum()
    }

    /// Which cumulative constraints are binding for the current residual;
    /// an extreme point subtracted from it must keep them binding.
    fn pins(&self) -> Vec<Vec<Pin>> {
        let n = self.inst.n();
        let mut pins = vec![vec![Pin::Free; self.horizon as usize]; n];
        for i in 0..n {
            let mut cs = Rat::zero();
            for t in 1..=self.horizon {
                cs = cs + self.r[i][t as usize - 1].clone();
                let fl = floor_quota(self.inst, i, t);
                let ce = ceil_quota(self.inst, i, t);
                if fl == ce {
                    continue; // forced either way
                }
                if cs == &self.w * &Rat::from_u64(fl) {
                    pins[i][t as usize - 1] = Pin::AtFloor;
                } else if cs == &self.w * &Rat::from_u64(ce) {
                    pins[i][t as usize - 1] = Pin::AtCeil;
                }
            }
        }
        pins
    }

    /// Finds a feasible sequence supported on the residual and respecting
    /// every binding constraint. Exists whenever `r / w` lies in the convex
    /// hull of the extreme points, which the peeling preserves.
    fn find_supported_sequence(&self, pins: &[Vec<Pin>]) -> Option<SeatSequence> {
        let n = self.inst.n();
        let mut assign = Vec::with_capacity(self.horizon as usize);
        let mut counts = vec![0u64; n];
        let mut dead: HashSet<(u64, Vec<u64>)> = HashSet::new();
        if self.dfs(0, &mut counts, &mut assign, pins, &mut dead) {
            Some(SeatSequence { assign })
        } else {
            None
        }
    }

    fn dfs(
        &self,
        t: u64,
        counts: &mut Vec<u64>,
        assign: &mut Vec<usize>,
        pins: &[Vec<Pin>],
        dead: &mut HashSet<(u64, Vec<u64>)>,
    ) -> bool {
        if t == self.horizon {
            return true;
        }
        if dead.contains(&(t, counts.clone())) {
            return false;
        }
        let n = self.inst.n();
        let seat = t + 1;
        'candidates: for i in 0..n {
            if self.r[i][seat as usize - 1].is_zero() {
                continue;
            }
            counts[i] += 1;
            for j in 0..n {
                let a = counts[j];
                let (fl, ce) = (floor_quota(self.inst, j, seat), ceil_quota(self.inst, j, seat));
                let ok = match pins[j][seat as usize - 1] {
                    Pin::Free => a >= fl && a <= ce,
                    Pin::AtFloor => a == fl,
                    Pin::AtCeil => a == ce,
                };
                if !ok {
                    counts[i] -= 1;
                    continue 'candidates;
                }
            }
            assign.push(i);
            if self.dfs(t + 1, counts, assign, pins, dead) {
                return true;
            }
            assign.pop();
            counts[i] -= 1;
        }
        dead.insert((t, counts.clone()));
        false
    }
}

/// Peels the proportional point `Q(i,t) = p_i / P` into an exact convex
/// combination of extreme points at horizon `P`. Each step removes as much
/// of one supported extreme point as the residual allows; every step zeroes
/// a support entry or makes a cumulative constraint binding, so at most
/// `3nP` iterations run.
pub fn decompose_quota(inst: &Instance, limits: &FlowLimits) -> Result<Decomposition> {
    let horizon = inst.total() as u64;
    if horizon > limits.max_horizon {
        return Err(Error::ResourceCap(format!(
            "decomposition horizon {horizon} exceeds cap {}",
            limits.max_horizon
        )));
    }
    let n = inst.n();
    let q: Vec<Rat> = (0..n)
        .map(|i| Rat::from_u64(inst.population(i)) / Rat::from_bigint(inst.total_big()))
        .collect();
    let mut res = Residual {
        inst,
        horizon,
        r: (0..n)
            .map(|i| vec![q[i].clone(); horizon as usize])
            .collect(),
        w: Rat::one(),
    };

    let mut points = Vec::new();
    let mut weights = Vec::new();
    let max_iters = 3 * n * horizon as usize + 2;
    for _ in 0..max_iters {
        if res.w.is_zero() {
            break;
        }
        let pins = res.pins();
        let x = res
            .find_supported_sequence(&pins)
            .expect("Q lies in the convex hull, a supported extreme point exists");

        // largest step keeping the residual feasible
        let mut lambda = res.w.clone();
        for t in 1..=horizon {
            let i = x.assign[t as usize - 1];
            lambda = lambda.min(res.r[i][t as usize - 1].clone());
        }
        let mut counts = vec![0u64; n];
        for t in 1..=horizon {
            counts[x.assign[t as usize - 1]] += 1;
            for i in 0..n {
                let fl = floor_quota(inst, i, t);
                let ce = ceil_quota(inst, i, t);
                if fl == ce {
                    continue;
                }
                let cs = res.cumsum(i, t);
                let a = counts[i];
                if a == fl + 1 {
                    // lower constraint tightens as mass leaves
                    lambda = lambda.min(&cs - &(&res.w * &Rat::from_u64(fl)));
                } else if a + 1 == ce {
                    lambda = lambda.min(&(&res.w * &Rat::from_u64(ce)) - &cs);
                }
            }
        }
        assert!(lambda.is_positive(), "peeling must make strict progress");

        for t in 1..=horizon {
            let i = x.assign[t as usize - 1];
            let cell = &mut res.r[i][t as usize - 1];
            *cell = &*cell - &lambda;
        }
        res.w = &res.w - &lambda;
        points.push(x);
        weights.push(lambda);
    }
    assert!(
        res.w.is_zero() && res.r.iter().all(|row| row.iter().all(Rat::is_zero)),
        "peeling terminated with residual mass"
    );

    let d = Decomposition { points, weights };
    assert!(d.verify(inst), "decomposition identities must hold exactly");
    Ok(d)
}

/// A cached decomposition usable for repeated draws.
pub struct HmSampler {
    decomposition: Decomposition,
    n: usize,
    total: u64,
}

impl HmSampler {
    pub fn new(inst: &Instance, limits: &FlowLimits) -> Result<HmSampler> {
        Ok(HmSampler {
            decomposition: decompose_quota(inst, limits)?,
            n: inst.n(),
            total: inst.total() as u64,
        })
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    /// One draw: a sequence with probability `theta_x`, truncated at `H`.
    pub fn sample(&self, house: u64, rng: &mut impl RngCore) -> Result<Vec<u64>> {
        if house > self.total {
            return Err(Error::InvalidParameter(format!(
                "house {house} exceeds total population {}",
                self.total
            )));
        }
        let u = Rat::dyadic64(rng.next_u64());
        let mut acc = Rat::zero();
        let mut chosen = self.decomposition.points.len() - 1;
        for (j, w) in self.decomposition.weights.iter().enumerate() {
            acc = acc + w.clone();
            if u < acc {
                chosen = j;
                break;
            }
        }
        Ok(self.decomposition.points[chosen].prefix_counts(self.n, house))
    }
}

/// Draws one apportionment of the randomized house-monotone quota-compliant
/// method induced by the canonical decomposition. `H <= P` required.
pub fn sample_hm_method(
    inst: &Instance,
    house: u64,
    seed: u64,
    limits: &FlowLimits,
) -> Result<Vec<u64>> {
    let sampler = HmSampler::new(inst, limits)?;
    let mut rng = stream_rng(seed, 0);
    sampler.sample(house, &mut rng)
}
