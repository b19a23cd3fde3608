//! Exact Hodge integrals `∫_{M̄_{g,1}} ψ_1^{3g-2-i} λ_i`.
//!
//! Three independent routes to the same numbers:
//!
//! - [`engine`]: W-numbers `W^i_g(∏ η_{a_j})` by a memoized cut-and-join
//!   recursion, assembled into integrals by [`hodge`] through a binomial
//!   decomposition.
//! - [`trees`]: sums of weights over decorated trees, which reproduce the
//!   `λ_g` W-numbers `W_g(η_1^n)`.
//! - [`oracle`]: coefficients of `((t/2)/sin(t/2))^{k+1}`.
//!
//! [`verify`] compares them exactly; [`cli`] exposes everything to the
//! `hodge` binary. All arithmetic is exact ([`arith::ExactRational`]).
//!
//! ```
//! use hodge_trees::{engine::WEngine, hodge::{hodge_integral, HodgeQuery}};
//!
//! let mut engine = WEngine::new();
//! let v = hodge_integral(&mut engine, &HodgeQuery::new(2, 1).unwrap()).unwrap();
//! assert_eq!(v.to_string(), "1/480");
//! ```

pub mod arith;
pub mod cli;
pub mod engine;
pub mod error;
pub mod hodge;
pub mod oracle;
pub mod trees;
pub mod verify;

pub use arith::ExactRational;
pub use error::{Error, Result};
