//! Quasi-Trefftz bases for second-order operators with variable coefficients in 3D.
//!
//! Three families of local basis functions are built around a point `x_C` so that
//! `L b(x) = O(|x - x_C|^q)`:
//!
//! * amplitude-based generalized plane waves `Q(x - x_C) exp(Λ·(x - x_C))`,
//! * phase-based generalized plane waves `exp(P(x - x_C))`,
//! * polynomials `R(x - x_C)`.
//!
//! Everything works on truncated Taylor tables. The operator is given by the
//! Taylor coefficients of its ten coefficient functions ([`pde::PdeCoefficients`]),
//! the constructions are explicit layer-by-layer substitutions ([`construct`]), and
//! [`operator::residual_magnitude`] re-applies the operator to check the result.
//!
//! ```
//! use qtrefftz::construct::{build_basis, Family};
//! use qtrefftz::exact::{CaseId, TestCase};
//! use qtrefftz::operator::residual_magnitude;
//!
//! let tc = TestCase::new(CaseId::Tc2);
//! let coeffs = tc.operator([0.3, -0.1, 0.5], 4);
//! let basis = build_basis(&coeffs, 3, Family::Phase, None).unwrap();
//! assert_eq!(basis.len(), 16);
//! for b in &basis {
//!     assert!(residual_magnitude(&coeffs, b, b.q()).unwrap() < 1e-10);
//! }
//! ```

pub mod airy;
pub mod approximation;
pub mod construct;
pub mod error;
pub mod eval;
pub mod exact;
pub mod experiment;
pub mod linalg;
pub mod multiindex;
pub mod operator;
pub mod pde;
pub mod taylor;

pub use error::{Error, Result};
pub use multiindex::MultiIndex;
pub use num_complex::Complex64;
pub use taylor::TaylorTable;
