//! Scheduling tests or searches on `m` parallel units within `T` time slots.
//!
//! Two objectives are supported. In the testing variant every test passes
//! independently with probability `p_j` and all work stops at the first
//! failure. In the search variant exactly one location hides the target,
//! location `j` with probability `w_j / w(N)`, and all work stops once it is
//! found. Both minimise the expected cost of the tests actually performed.
//!
//! Everything here is `no_std` with `alloc`; file formats, timing and the
//! command line live in the `tctp` crate.
//!
//! ```
//! use tctp_core::{evaluate, ratio, Instance, Schedule};
//!
//! let inst = Instance::testing(1, 2, vec![1, 2], vec![ratio(1, 2), ratio(1, 1)]).unwrap();
//! let z = evaluate(&inst, &Schedule::new(vec![vec![0], vec![1]])).unwrap();
//! assert_eq!(z, ratio(2, 1));
//! ```
#![no_std]

extern crate alloc;

pub mod enumerate;
pub mod exact;
pub mod heuristics;
pub mod instance;
pub mod instgen;
pub mod mip;
pub mod objective;
pub mod radical;
pub mod report;
pub mod scalar;
pub mod schedule;

pub use instance::{Instance, InstanceError, Likelihoods, Padded, Variant};
pub use objective::{evaluate, evaluate_f64, global_bounds, set_ratio, sort_by_ratio, Bounds};
pub use radical::{Radical, RadicalField};
pub use report::{Method, SolveReport, Status};
pub use scalar::{ratio, Rational, Scalar, SetRatio};
pub use schedule::{validate, InvalidSchedule, Schedule, Violation};
