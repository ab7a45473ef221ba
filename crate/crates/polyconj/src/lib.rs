//! Exact arithmetic for deciding conjugacy of 2x2 matrices over F_q[x].
//!
//! The central question: given A, B in GL_2(F_q[x]), is there U in GL_2(F_q[x])
//! with U A U^-1 = B? This crate answers it constructively. A yes comes with a
//! conjugating matrix U (verified before it is returned); a no is backed by an
//! exhaustive search over the finitely many candidate solution classes of an
//! associated norm-form equation.
//!
//! The route from matrices to norm forms: eliminating two entries of U from
//! U A = B U leaves a binary quadratic equation a u^2 + b uv + c v^2 = d over
//! F_q[x] together with divisibility side conditions. Solving that equation
//! exactly requires, in turn: arithmetic in quadratic extensions of F_q(x)
//! ([`quadring`]), Laurent series expansions at infinity ([`laurent`]),
//! continued fractions of quadratic surds ([`cfrac`]), and fundamental units of
//! quadratic orders ([`units`]). Each layer is exact; floating point never
//! appears.
//!
//! Module map:
//!
//! * [`gf`]: the coefficient fields F_q, q = p^k up to 2^16.
//! * [`poly`]: dense univariate polynomials over F_q.
//! * [`laurent`]: Laurent series in x^-1 with explicit precision tracking.
//! * [`quadring`]: quadratic contexts s^2 = b*s - c, norms, conjugation, and
//!   the rational/real/imaginary trichotomy.
//! * [`cfrac`]: continued fractions of quadratic surds, convergents, period
//!   detection.
//! * [`units`]: fundamental units of F_q[x][t]/(t^2+bt+c) and the polynomial
//!   Pell equation.
//! * [`normsolver`]: complete solution sets of a u^2 + buv + cv^2 = d.
//! * [`conjugacy`]: the decision procedure, witnesses, centralizers, degree
//!   bounds.
//! * [`oracle`]: brute-force reference implementations used by the test suite.
//! * [`cli`]: the command-line front end.

pub mod cfrac;
pub mod cli;
pub mod conjugacy;
pub mod error;
pub mod gf;
pub mod laurent;
pub mod normsolver;
pub mod oracle;
pub mod poly;
pub mod quadring;
pub mod units;

pub use error::{Error, Result};
