//! Exact construction, solution, and certification of the invariant Einstein
//! equations on the generalized flag manifolds SO(2n)/U(p) x U(n-p).
//!
//! The crate is organized bottom-up:
//!
//! * [`exactpoly`] — arbitrary-precision polynomial arithmetic over the
//!   integers and rationals (dense univariate, sparse bivariate and
//!   multivariate), exact division, and Sylvester resultants computed by
//!   fraction-free Bareiss elimination.
//! * [`realroots`] — Sturm sequences, root isolation and refinement with
//!   exact rational endpoints, and shifted-basis positivity certificates.
//! * [`flagspace`] — isotropy data of the flag manifold, Ricci curvature of
//!   invariant metrics, scalar curvature, and the normalized scale invariant,
//!   all through interval arithmetic with exact rational endpoints.
//! * [`einstein`] — the invariant Einstein equations themselves: reduction to
//!   one quartic per symmetry case, certified solution counts, resultant
//!   factorization certificates, and the classification of all positive
//!   solutions for a given pair (n, p).

pub mod einstein;
pub mod exactpoly;
pub mod flagspace;
pub mod realroots;
