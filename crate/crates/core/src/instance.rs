//! Apportionment instances and exact quotas.

use crate::error::{Error, Result};
use crate::rat::Rat;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// An apportionment instance: positive populations and a positive house size.
///
/// The total population is cached at construction; all derived quantities
/// (quotas, line values) are exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct Instance {
    populations: Vec<u64>,
    house: u64,
    total: u128,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    populations: Vec<u64>,
    house: u64,
}

impl TryFrom<RawInstance> for Instance {
    type Error = Error;
    fn try_from(raw: RawInstance) -> Result<Self> {
        Instance::new(raw.populations, raw.house)
    }
}

impl From<Instance> for RawInstance {
    fn from(inst: Instance) -> Self {
        RawInstance {
            populations: inst.populations,
            house: inst.house,
        }
    }
}

impl Instance {
    pub fn new(populations: Vec<u64>, house: u64) -> Result<Self> {
        if populations.is_empty() {
            return Err(Error::InvalidInstance("no states".into()));
        }
        if populations.iter().any(|&p| p == 0) {
            return Err(Error::InvalidInstance("population must be >= 1".into()));
        }
        if house == 0 {
            return Err(Error::InvalidInstance("house size must be >= 1".into()));
        }
        let total = populations.iter().map(|&p| p as u128).sum();
        Ok(Instance {
            populations,
            house,
            total,
        })
    }

    pub fn n(&self) -> usize {
        self.populations.len()
    }

    pub fn house(&self) -> u64 {
        self.house
    }

    pub fn populations(&self) -> &[u64] {
        &self.populations
    }

    pub fn population(&self, state: usize) -> u64 {
        self.populations[state]
    }

    /// Total population `P`.
    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn total_big(&self) -> BigInt {
        BigInt::from(self.total)
    }

    /// Same populations, different house size.
    pub fn with_house(&self, house: u64) -> Result<Instance> {
        Instance::new(self.populations.clone(), house)
    }

    /// All populations multiplied by a positive constant. Outcomes of every
    /// divisor method are invariant under this.
    pub fn scaled(&self, c: u64) -> Result<Instance> {
        if c == 0 {
            return Err(Error::InvalidInstance("scale must be >= 1".into()));
        }
        let populations = self
            .populations
            .iter()
            .map(|&p| {
                p.checked_mul(c)
                    .ok_or_else(|| Error::InvalidInstance("population overflow".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Instance::new(populations, self.house)
    }

    /// Quota of one state, `q_i = p_i * H / P`.
    pub fn quota(&self, state: usize) -> Rat {
        let num = BigInt::from(self.populations[state]) * BigInt::from(self.house);
        Rat::from_big(num, self.total_big()).expect("total is positive")
    }

    pub fn from_json(s: &str) -> Result<Instance> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInstance(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serializes")
    }
}

/// Exact quota vector; components always sum to the house size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotaVector(pub Vec<Rat>);

impl QuotaVector {
    pub fn get(&self, i: usize) -> &Rat {
        &self.0[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rat> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `q_i = p_i * H / P` for every state, exactly.
pub fn quotas(inst: &Instance) -> QuotaVector {
    QuotaVector((0..inst.n()).map(|i| inst.quota(i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotas_fig2() {
        // populations (50,30,20), H=13: quotas 13/2, 39/10, 13/5
        let inst = Instance::new(vec![50, 30, 20], 13).unwrap();
        let q = quotas(&inst);
        assert_eq!(q.0[0], Rat::new(13, 2));
        assert_eq!(q.0[1], Rat::new(39, 10));
        assert_eq!(q.0[2], Rat::new(13, 5));
        let sum: Rat = q.0.iter().cloned().sum();
        assert_eq!(sum, Rat::from_u64(13));
    }

    #[test]
    fn quotas_single_state() {
        let inst = Instance::new(vec![1], 7).unwrap();
        assert_eq!(quotas(&inst).0, vec![Rat::from_int(7)]);
    }

    #[test]
    fn quotas_direct_fractions() {
        let inst = Instance::new(vec![5, 3, 1], 4).unwrap();
        let q = quotas(&inst);
        assert_eq!(q.0[0], Rat::new(20, 9));
        assert_eq!(q.0[1], Rat::new(12, 9));
        assert_eq!(q.0[2], Rat::new(4, 9));
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(Instance::new(vec![], 5).is_err());
        assert!(Instance::new(vec![0, 1], 5).is_err());
        assert!(Instance::new(vec![1], 0).is_err());
    }

    #[test]
    fn json_round_trip() {
        let inst = Instance::new(vec![8, 3, 1], 6).unwrap();
        let s = inst.to_json();
        assert_eq!(s, r#"{"populations":[8,3,1],"house":6}"#);
        assert_eq!(Instance::from_json(&s).unwrap(), inst);
    }
}
