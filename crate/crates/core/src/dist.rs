//! Shift distributions over `[0,1]` and tie-breaking rules.

use crate::error::{Error, Result};
use crate::rat::Rat;
use serde::{Deserialize, Serialize};

/// A probability distribution for the shift `delta`: point masses plus
/// uniform pieces. Masses are exact rationals summing to one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDist", into = "RawDist")]
pub struct DeltaDistribution {
    /// `(position, mass)`, positions in `[0,1]`.
    atoms: Vec<(Rat, Rat)>,
    /// `(lo, hi, mass)` with `lo < hi`, both in `[0,1]`; mass spread
    /// uniformly over `[lo, hi]`.
    pieces: Vec<(Rat, Rat, Rat)>,
}

#[derive(Serialize, Deserialize)]
struct RawAtom {
    at: Rat,
    mass: Rat,
}

#[derive(Serialize, Deserialize)]
struct RawPiece {
    lo: Rat,
    hi: Rat,
    mass: Rat,
}

#[derive(Serialize, Deserialize)]
struct RawDist {
    #[serde(default)]
    atoms: Vec<RawAtom>,
    #[serde(default)]
    uniform: Vec<RawPiece>,
}

impl TryFrom<RawDist> for DeltaDistribution {
    type Error = Error;
    fn try_from(raw: RawDist) -> Result<Self> {
        DeltaDistribution::new(
            raw.atoms.into_iter().map(|a| (a.at, a.mass)).collect(),
            raw.uniform
                .into_iter()
                .map(|p| (p.lo, p.hi, p.mass))
                .collect(),
        )
    }
}

impl From<DeltaDistribution> for RawDist {
    fn from(d: DeltaDistribution) -> Self {
        RawDist {
            atoms: d
                .atoms
                .into_iter()
                .map(|(at, mass)| RawAtom { at, mass })
                .collect(),
            uniform: d
                .pieces
                .into_iter()
                .map(|(lo, hi, mass)| RawPiece { lo, hi, mass })
                .collect(),
        }
    }
}

impl DeltaDistribution {
    pub fn new(atoms: Vec<(Rat, Rat)>, pieces: Vec<(Rat, Rat, Rat)>) -> Result<Self> {
        let unit = |x: &Rat| !x.is_negative() && *x <= Rat::one();
        let mut total = Rat::zero();
        for (at, mass) in &atoms {
            if !unit(at) {
                return Err(Error::InvalidDistribution(format!("atom at {at} outside [0,1]")));
            }
            if mass.is_negative() {
                return Err(Error::InvalidDistribution("negative atom mass".into()));
            }
            total = total + mass.clone();
        }
        for (lo, hi, mass) in &pieces {
            if !unit(lo) || !unit(hi) || lo >= hi {
                return Err(Error::InvalidDistribution(format!(
                    "uniform piece [{lo}, {hi}] invalid"
                )));
            }
            if mass.is_negative() {
                return Err(Error::InvalidDistribution("negative piece mass".into()));
            }
            total = total + mass.clone();
        }
        if total != Rat::one() {
            return Err(Error::InvalidDistribution(format!(
                "total mass {total} != 1"
            )));
        }
        let mut atoms = atoms;
        atoms.retain(|(_, m)| !m.is_zero());
        atoms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut pieces = pieces;
        pieces.retain(|(_, _, m)| !m.is_zero());
        pieces.sort_by(|a, b| (a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
        Ok(DeltaDistribution { atoms, pieces })
    }

    pub fn point_mass(at: Rat) -> Result<Self> {
        Self::new(vec![(at, Rat::one())], vec![])
    }

    pub fn uniform01() -> Self {
        Self::new(vec![], vec![(Rat::zero(), Rat::one(), Rat::one())]).unwrap()
    }

    /// Bernoulli(1/2) over the endpoints: the Adams/Jefferson mixture.
    pub fn bernoulli_endpoints() -> Self {
        Self::new(
            vec![
                (Rat::zero(), Rat::new(1, 2)),
                (Rat::one(), Rat::new(1, 2)),
            ],
            vec![],
        )
        .unwrap()
    }

    pub fn atoms(&self) -> &[(Rat, Rat)] {
        &self.atoms
    }

    pub fn pieces(&self) -> &[(Rat, Rat, Rat)] {
        &self.pieces
    }

    /// Exact mean.
    pub fn mean(&self) -> Rat {
        let half = Rat::new(1, 2);
        let mut m = Rat::zero();
        for (at, mass) in &self.atoms {
            m = m + at * mass;
        }
        for (lo, hi, mass) in &self.pieces {
            m = m + (lo + hi) * &half * mass;
        }
        m
    }

    /// Mass of the open interval `(a, b)`.
    pub fn mass_open(&self, a: &Rat, b: &Rat) -> Rat {
        let mut m = Rat::zero();
        for (at, mass) in &self.atoms {
            if at > a && at < b {
                m = m + mass.clone();
            }
        }
        for (lo, hi, mass) in &self.pieces {
            let l = lo.clone().max(a.clone());
            let h = hi.clone().min(b.clone());
            if l < h {
                m = m + (&h - &l) * mass / (hi - lo);
            }
        }
        m
    }

    /// Mass of the single point `x` (atoms only).
    pub fn mass_at(&self, x: &Rat) -> Rat {
        self.atoms
            .iter()
            .filter(|(at, _)| at == x)
            .map(|(_, m)| m.clone())
            .sum()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidDistribution(e.to_string()))
    }
}

/// Deterministic rule turning a multi-valued outcome into one vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// Uniform over the expansion.
    UniformOverExpansion,
    /// The lexicographically largest vector (extras to lowest indices).
    LexicographicMax,
    /// The lexicographically smallest vector (extras to highest indices).
    LexicographicMin,
    /// An arbitrary seed-determined choice; no closed-form expectation.
    SeededRandom,
}

impl TieBreak {
    pub fn parse(s: &str) -> Result<TieBreak> {
        match s {
            "uniform" | "uniform-over-expansion" => Ok(TieBreak::UniformOverExpansion),
            "lexmax" | "lexicographic-max" => Ok(TieBreak::LexicographicMax),
            "lexmin" | "lexicographic-min" => Ok(TieBreak::LexicographicMin),
            "random" | "seeded-random" => Ok(TieBreak::SeededRandom),
            other => Err(Error::InvalidParameter(format!("unknown tie-break {other:?}"))),
        }
    }
}
