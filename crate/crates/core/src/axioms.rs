//! Runtime checkers for the quota and house-monotonicity axioms.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::rat::Rat;
use serde::Serialize;

/// Quota flags for one seat vector against one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub lower_quota: bool,
    pub upper_quota: bool,
    pub quota_compliant: bool,
    /// States with `x_i < floor(q_i)`.
    pub lower_violations: Vec<usize>,
    /// States with `x_i > ceil(q_i)`.
    pub upper_violations: Vec<usize>,
}

/// Checks lower/upper quota for a full seat vector.
pub fn check_axioms(x: &[u64], inst: &Instance) -> Result<AxiomReport> {
    if x.len() != inst.n() {
        return Err(Error::DimensionMismatch {
            expected: inst.n(),
            got: x.len(),
        });
    }
    let mut lower_violations = Vec::new();
    let mut upper_violations = Vec::new();
    for (i, &xi) in x.iter().enumerate() {
        let q = inst.quota(i);
        let xi = Rat::from_u64(xi);
        if xi < Rat::from_bigint(q.floor_int()) {
            lower_violations.push(i);
        }
        if xi > Rat::from_bigint(q.ceil_int()) {
            upper_violations.push(i);
        }
    }
    Ok(AxiomReport {
        lower_quota: lower_violations.is_empty(),
        upper_quota: upper_violations.is_empty(),
        quota_compliant: lower_violations.is_empty() && upper_violations.is_empty(),
        lower_violations,
        upper_violations,
    })
}

/// House monotonicity for a supplied pair: `x` at `H` and `y` at `H+1` must
/// satisfy `x <= y` componentwise.
pub fn check_house_monotone_pair(x: &[u64], y: &[u64]) -> Result<bool> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    Ok(x.iter().zip(y).all(|(a, b)| a <= b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quota_compliant_vector() {
        // q = (20/9, 12/9, 4/9): floors (2,1,0), ceilings (3,2,1)
        let inst = Instance::new(vec![5, 3, 1], 4).unwrap();
        let r = check_axioms(&[2, 1, 1], &inst).unwrap();
        assert!(r.quota_compliant);
    }

    #[test]
    fn lower_quota_violation_reported() {
        let inst = Instance::new(vec![5, 3, 1], 4).unwrap();
        let r = check_axioms(&[4, 0, 0], &inst).unwrap();
        assert!(!r.lower_quota);
        assert_eq!(r.lower_violations, vec![1]);
        assert!(!r.upper_quota); // state 1 got 4 > ceil(20/9) = 3
    }

    #[test]
    fn house_monotone_pair() {
        assert!(check_house_monotone_pair(&[2, 1, 1], &[3, 1, 1]).unwrap());
        assert!(!check_house_monotone_pair(&[2, 1, 1], &[3, 0, 2]).unwrap());
        assert!(check_house_monotone_pair(&[1], &[1, 2]).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let inst = Instance::new(vec![5, 3, 1], 4).unwrap();
        assert!(check_axioms(&[1, 1], &inst).is_err());
    }
}
