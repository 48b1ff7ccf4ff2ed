//! Gauss–Jacobi quadrature for the weight `(1 − x)^α (1 + x)^β` on `[−1, 1]`
//! without iteration: nodes and weights come from large-degree asymptotic
//! expansions of the Jacobi polynomials. An elementary (trigonometric)
//! expansion covers the interior and a Bessel-type expansion covers the
//! endpoints. Small degrees use Newton's method on the three-term recurrence.
//!
//! ```
//! let rule = gauss_jacobi::gauss_jacobi(100, 0.1, -0.3).unwrap();
//! let integral = rule.integrate(|x| x * x);
//! assert!(integral > 0.0);
//! ```
//!
//! [`extensions`] builds Lobatto and Radau rules and barycentric weights
//! on top of the Gauss rule.

pub mod bessel;
pub mod bessel_expansion;
pub mod coeffs;
pub mod elementary;
pub mod error;
pub mod extensions;
pub mod gamma;
pub mod node;
pub mod params;
pub mod quadrature;
pub mod selftest;

pub use error::{Error, Result};
pub use extensions::{
    barycentric_weights, lobatto_rule, radau_rule, BarycentricWeights, LobattoRule, RadauEnd,
    RadauRule,
};
pub use node::{Branch, Orders, ThetaNode};
pub use params::JacobiParams;
pub use quadrature::{
    compute_nodes, compute_rule, compute_rule_seq, compute_weights, gauss_jacobi, newton_refine,
    BranchPolicy, Method, QuadratureRule, RefineOutcome,
};
