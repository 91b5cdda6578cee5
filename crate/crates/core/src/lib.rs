//! Multiple-antenna placement delivery arrays (MAPDA).
//!
//! The crate builds coded-caching arrays, checks them against the PDA and
//! MAPDA conditions, turns them into placement and delivery plans, and
//! verifies that every delivery decodes over a zero-forced `L`-antenna
//! broadcast channel.
//!
//! * [`array`]: the star/integer array type and its text format.
//! * [`validate`]: PDA/MAPDA validation and `P^(s)` subarrays.
//! * [`audit`]: sum-DoF arithmetic and the star-counting bound audit.
//! * [`construct`]: MN PDA, Latin-square MAPDA and the regular-PDA lift.
//! * [`scheme`]: cache placement and per-block delivery plans.
//! * [`miso`]: channel generation, zero-forcing precoders and decoding.
//! * [`compare`]: closed-form subpacketization of competing schemes.
//! * [`cli`]: the `mapda` command line.

pub mod array;
pub mod audit;
pub mod cli;
pub mod compare;
pub mod construct;
pub mod fixtures;
pub mod miso;
pub mod scheme;
pub mod validate;

pub use array::{Cell, CodedArray, Entry};
pub use audit::{star_audit, sum_dof, StarAudit};
pub use construct::{
    audit_lift, block_shift, latin_mapda, latin_square, lift_regular_pda, mn_mapda, mn_pda,
    right_shift_row, LiftParams, LiftTrace,
};
pub use validate::{subarray_of, validate_mapda, validate_pda, MapdaParams, PdaParams};
