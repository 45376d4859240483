//! Double groupoids built from admissible pairs of subgroups.
//!
//! Bottom-up:
//!
//! * [`exact`]: exact rationals, matrices, finite rings and the
//!   [`AmbientGroup`](exact::AmbientGroup) interface.
//! * [`pair`]: admissible pairs, KH-factorization and the local actions
//!   `h ▷ k`, `h ◁ k` with their compatibility identities.
//! * [`groupoid`]: the two groupoid structures on Ω, the automorphism γ,
//!   invariance, isotropy and partial maps.
//! * [`algebra`]: the convolution *-algebra on étale fragments (norms,
//!   representations, measures, restriction to `H`).
//! * [`models`]: the worked example families wired up end to end.

pub mod algebra;
pub mod error;
pub mod exact;
pub mod groupoid;
pub mod models;
pub mod pair;
pub mod report;

pub use error::{Error, Result};
pub use report::{Check, Finding, VerificationReport};
