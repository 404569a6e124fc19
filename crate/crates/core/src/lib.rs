//! Frequency estimation under pure local differential privacy.
//!
//! Each user perturbs their value locally with one of seven protocols:
//! direct encoding (DE), summation or thresholding with histogram encoding
//! (SHE, THE), symmetric or optimized unary encoding (SUE, OUE), and binary
//! or optimized local hashing (BLH, OLH). The aggregator estimates the count
//! of every domain value without ever seeing a raw input.
//!
//! ```
//! use pureldp::protocols::{ProtocolKind, ProtocolSpec};
//! use rand::SeedableRng;
//!
//! let spec = ProtocolSpec::new(ProtocolKind::Olh, 2.0, 64).unwrap();
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
//! let reports: Vec<_> = (0..1000)
//!     .map(|u| spec.perturb(u % 4, &mut rng).unwrap())
//!     .collect();
//! let est = spec.aggregate(&reports).unwrap();
//! assert_eq!(est.len(), 64);
//! ```

pub mod analytics;
pub mod error;
pub mod exec;
pub mod framework;
pub mod protocols;
pub mod sim;

pub use error::{Error, Result};
pub use exec::Execution;
pub use framework::{Domain, EstimateVector, PrivacyBudget, PureParams, Report};
pub use protocols::{ProtocolKind, ProtocolSpec};
