//! Exact-arithmetic apportionment methods and their outcome spaces.
//!
//! Everything is computed over arbitrary-precision rationals: stationary and
//! power-mean divisor methods with complete tie reporting, the breakpoint
//! atlas of all stationary methods of an instance, randomized and
//! fixed-divisor methods with exact expectations, and the network-flow
//! machinery for house-monotone quota-compliant apportionment.

pub mod adversary;
pub mod arrangement;
pub mod axioms;
pub mod dist;
pub mod error;
pub mod flow;
pub mod hamilton;
pub mod instance;
pub mod power_mean;
pub mod outcome;
pub mod randomized;
pub mod rat;
pub mod stationary;
pub mod sweep;

pub use axioms::{check_axioms, check_house_monotone_pair, AxiomReport};
pub use error::{Error, Result};
pub use hamilton::apportion_hamilton;
pub use instance::{quotas, Instance, QuotaVector};
pub use outcome::{majorizes, Outcome};
pub use rat::Rat;
pub use stationary::{apportion_stationary, lambda_level, multiplier_interval};
pub use sweep::{active_lines, breakpoint_atlas, quota_partition, BreakpointAtlas, QuotaPartition};
