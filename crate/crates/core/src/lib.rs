//! Exact-arithmetic library for SL2 over totally ramified extensions of Q2:
//! congruence filtration subgroups, the projective line over finite
//! quotients of the ring of integers, trace pairings on lattices of
//! trace-zero matrices, and additive-character parametrizations of finite
//! abelian quotients — together with exhaustive verification routines for
//! each of the structural claims the library is built around.

pub mod abelian;
pub mod characters;
pub mod error;
pub mod field;
pub mod groups;
pub mod matrix;
pub mod projline;
pub mod report;

pub use error::{Error, Result};
pub use field::{FieldSpec, FracElem, TruncElem, Valuation};

/// Default working precision for a verification run at parameters
/// `(n, m, l)`: deep enough that every congruence, pairing value, and
/// determinant correction in the checks is determined modulo the relevant
/// ideal.  May be overridden upward, never downward.
pub fn min_precision(field: &FieldSpec, n: u32, m: i32, l: i32) -> u32 {
    let e = field.ramification_index() as i32;
    let extra = m.max(l).max(e).max(0) as u32;
    2 * n + e as u32 + extra + 1
}
