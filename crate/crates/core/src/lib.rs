//! Exact evaluation of `I_n^(p) = ∫₀^{π/4} x^p tanⁿx dx` and related
//! integrals.
//!
//! - [`symvalue`]: exact values over a fixed basis of constants
//! - [`engine`]: the step recurrence with a write-once memo table
//! - [`oracle`]: high-precision constants and Gauss–Legendre quadrature
//! - [`series`]: `J_n` enclosures and `L_n` reduction
//! - [`sequences`]: coefficient streams and OEIS lookup
//!
//! ```
//! use tanint::engine::Engine;
//! use tanint::symvalue::ConstAtom;
//!
//! let engine = Engine::new();
//! let v = engine.compute(14, 1);
//! assert_eq!(v.extract_coefficient(ConstAtom::Ln2).to_string(), "-88069/90090");
//! ```

pub mod engine;
pub mod error;
pub mod oracle;
pub mod par;
pub mod real;
pub mod sequences;
pub mod series;
pub mod symvalue;

pub use engine::{Engine, IntegralId, Recurrence};
pub use error::{OracleError, ParseError, SequenceError, SeriesError};
pub use oracle::{NumericContext, VerifyReport};
pub use real::Real;
pub use series::Enclosure;
pub use symvalue::{ConstAtom, Rational, SymValue};
