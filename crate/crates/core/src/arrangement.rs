//! From line arrangements to apportionment instances.
//!
//! Any arrangement of lines in general position with rational slopes can be
//! brought to a normal form with slopes in `(1,2)` and `intercept/slope` a
//! non-negative integer, without changing the above/below relations between
//! intersection points and lines (and hence any k-level's vertex count).
//! From the normal form, the instance with populations `1/slope_i` and house
//! `sum(intercept_i/slope_i) + k + 1` has its level equal to the k-level of
//! the arrangement over the parameter window `[0,1]`.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::rat::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

/// A line `delta -> m*delta + c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrLine {
    pub m: Rat,
    pub c: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementSpec {
    pub lines: Vec<ArrLine>,
}

impl ArrangementSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::DegenerateArrangement(e.to_string()))
    }
}

/// Result of the reduction: the normalized arrangement, the rational
/// populations `1/m_i`, the integer scaling that clears their denominators,
/// and the scaled instance.
#[derive(Clone, Debug, Serialize)]
pub struct ArrangementInstance {
    pub normalized: ArrangementSpec,
    pub populations: Vec<Rat>,
    pub scale: Rat,
    pub instance: Instance,
    pub k: usize,
}

fn check_general_position(spec: &ArrangementSpec) -> Result<()> {
    for (i, a) in spec.lines.iter().enumerate() {
        for b in &spec.lines[i + 1..] {
            if a.m == b.m {
                return Err(Error::DegenerateArrangement(format!(
                    "equal slopes {}",
                    a.m
                )));
            }
        }
    }
    Ok(())
}

fn ratio_is_nonneg_integer(l: &ArrLine) -> bool {
    let r = l.c.checked_div(&l.m);
    matches!(r, Ok(r) if r.is_integer() && !r.is_negative())
}

/// Slopes into `(1,2)` via two affine slope maps, then intercepts made
/// positive and scaled so every `c_i/m_i` is an integer. Slope maps and
/// positive intercept scalings both preserve, for every triple, whether the
/// intersection of two lines lies above the third.
fn normalize(spec: &ArrangementSpec) -> ArrangementSpec {
    let mut lines = spec.lines.clone();
    // slopes positive
    let min_m = lines.iter().map(|l| l.m.clone()).min().unwrap();
    if !min_m.is_positive() {
        let beta = Rat::new(1, 100) - min_m;
        for l in &mut lines {
            l.m = &l.m + &beta;
        }
    }
    // slopes into (1, 2)
    let max_m = lines.iter().map(|l| l.m.clone()).max().unwrap();
    for l in &mut lines {
        l.m = &l.m * &Rat::new(99, 100) / &max_m + Rat::one();
    }
    // intercepts positive
    let min_c = lines.iter().map(|l| l.c.clone()).min().unwrap();
    if !min_c.is_positive() {
        let beta = Rat::new(1, 100) - min_c;
        for l in &mut lines {
            l.c = &l.c + &beta;
        }
    }
    // smallest positive rational alpha with alpha * c_i / m_i integral
    let ratios: Vec<Rat> = lines
        .iter()
        .map(|l| l.c.checked_div(&l.m).expect("slopes are positive"))
        .collect();
    let mut den_lcm = BigInt::one();
    let mut num_gcd = BigInt::from(0);
    for r in &ratios {
        den_lcm = den_lcm.lcm(r.denom());
        num_gcd = num_gcd.gcd(r.numer());
    }
    let alpha = Rat::from_big(den_lcm, num_gcd).expect("ratios are positive");
    for l in &mut lines {
        l.c = &l.c * &alpha;
    }
    ArrangementSpec { lines }
}

/// Builds the instance whose `(H-1)`-level over `[0,1]` is the `k`-level of
/// the (normalized) arrangement. A spec already satisfying the normal-form
/// integrality condition is used as-is.
pub fn instance_from_arrangement(spec: &ArrangementSpec, k: usize) -> Result<ArrangementInstance> {
    if spec.lines.is_empty() {
        return Err(Error::DegenerateArrangement("no lines".into()));
    }
    if k >= spec.lines.len() {
        return Err(Error::InvalidParameter(format!(
            "k = {k} out of range for {} lines",
            spec.lines.len()
        )));
    }
    check_general_position(spec)?;
    let already_normal = spec
        .lines
        .iter()
        .all(|l| l.m.is_positive() && ratio_is_nonneg_integer(l));
    let normalized = if already_normal {
        spec.clone()
    } else {
        normalize(spec)
    };

    let populations: Vec<Rat> = normalized
        .lines
        .iter()
        .map(|l| l.m.recip().expect("positive slope"))
        .collect();
    // scale: lcm of the population denominators (= slope numerators)
    let mut scale = BigInt::one();
    for p in &populations {
        scale = scale.lcm(p.denom());
    }
    let scale = Rat::from_bigint(scale);
    let scaled: Vec<u64> = populations
        .iter()
        .map(|p| {
            (p * &scale).to_u64().ok_or_else(|| {
                Error::DegenerateArrangement("scaled population does not fit u64".into())
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let offsets: Vec<u64> = normalized
        .lines
        .iter()
        .map(|l| {
            l.c.checked_div(&l.m)
                .expect("positive slope")
                .to_u64()
                .ok_or_else(|| Error::DegenerateArrangement("offset does not fit u64".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let house = offsets.iter().sum::<u64>() + k as u64 + 1;

    Ok(ArrangementInstance {
        normalized,
        populations,
        scale,
        instance: Instance::new(scaled, house)?,
        k,
    })
}

/// Brute-force count of k-level vertices of an arrangement with abscissa in
/// the open window `(0,1)`. A vertex (intersection of two lines) lies on the
/// k-level iff the number `m` of other lines strictly below it satisfies
/// `k = m` or `k = m+1`.
pub fn klevel_vertices_in_unit_window(spec: &ArrangementSpec, k: usize) -> Result<usize> {
    check_general_position(spec)?;
    let lines = &spec.lines;
    let mut count = 0usize;
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            let x = (&b.c - &a.c).checked_div(&(&a.m - &b.m)).unwrap();
            if !x.is_positive() || x >= Rat::one() {
                continue;
            }
            let y = &a.m * &x + &a.c;
            let m = lines
                .iter()
                .enumerate()
                .filter(|(j, l)| {
                    *j != i && l != &b && (&l.m * &x + &l.c) < y
                })
                .count();
            if k == m || k == m + 1 {
                count += 1;
            }
        }
    }
    Ok(count)
}
