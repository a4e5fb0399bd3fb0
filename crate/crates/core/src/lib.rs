//! Exact computation in the graded q-differential algebra with `d^3 = 0`
//! built over a free algebra `A = Q(q)<x1, ..., xn>` and a homomorphism
//! `xi: A -> Mat_n(A)`, where `q` is a primitive cube root of unity.
//!
//! Forms are elements of the tensor algebra of first and second order
//! differentials kept in canonical form (all algebra coefficients on the
//! right). The quotient by the ideal `I_q` is handled through a bounded
//! membership oracle and, for linear `xi`, a rewriting reducer.
//!
//! ```
//! use qdiff_core::{diff, parse_expression, render, CalculusContext, XiHomomorphism};
//!
//! let ctx = CalculusContext::new(XiHomomorphism::commutative(2));
//! let u = parse_expression("x1 x2", &ctx).unwrap();
//! assert_eq!(render::text(&diff(&ctx, &u)), "dx1 * x2 + dx2 * x1");
//! ```

pub mod calculus;
pub mod config;
pub mod differential;
pub mod error;
pub mod freealg;
pub mod ideal;
pub mod linsolve;
pub mod parse;
pub mod render;
pub mod scalar;
pub mod tensoralg;
pub mod verify;
pub mod xi;

pub use calculus::CalculusContext;
pub use config::{OutputFormat, Preset, SessionConfig};
pub use differential::{diff, diff_n};
pub use error::{Error, Result};
pub use freealg::{AlgebraElement, Word};
pub use ideal::{Bounds, IdealContext, MembershipStatus, MembershipVerdict};
pub use parse::{parse_algebra, parse_expression, parse_scalar};
pub use scalar::{q_integer, q_power, CycScalar};
pub use tensoralg::{tensor_mul, DLetter, DWord, TensorElement};
pub use xi::{XiHomomorphism, XiMatrix};
