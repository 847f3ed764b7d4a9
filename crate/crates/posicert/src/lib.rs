//! Exact rational sums-of-squares certificates for polynomials
//! non-negative on compact unions of intervals, on strips `U x R`, and on
//! half-strips in the plane.
//!
//! The crate builds, transforms, and verifies quadratic-module and
//! preordering representations `f = sum_e sigma_e s^e`, where every
//! `sigma_e` is an explicit positive combination of squared polynomials and
//! the `s` are the defining generators of the region. Verification is
//! syntactic: a certificate is accepted iff its expansion equals the target
//! polynomial coefficient by coefficient, which makes the representation an
//! immediate witness of non-negativity. All arithmetic is exact rational;
//! there is no floating point anywhere.

pub mod cert;
pub mod cli;
pub mod diagnostics;
pub mod interval;
pub mod poly;
pub mod roots;
pub mod saturate;
pub mod text;
pub mod transforms;

pub use cert::{CertKind, Certificate, CertificateAny, GeneratorSet, Sos, Verdict};

pub use interval::IntervalUnion;
pub use poly::{BiPoly, Poly, Rat, TriPoly, UniPoly};
pub use roots::{FactorList, IsolatingInterval, NonnegDecision};
