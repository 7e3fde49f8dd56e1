//! Exact symbolic plus numeric engine for the open Toda chain.
//!
//! The crate is organised around a small computer-algebra kernel
//! ([`expr`]) for the ring of polynomials in the phase-space variables
//! `x1..x{2n}`, time `t`, and the nearest-neighbour interaction atoms
//! `E1..E{n-1}` (where `Ej` stands for `exp(xj - x{j+1})`). On top of it:
//!
//! * [`lattice`] — the Toda flow field, base Hamiltonian and the
//!   first/second-order Lagrangian correspondence;
//! * [`symmetry`] — the five symmetry vector fields, the Master-equation
//!   residual, Lie-derivative calculus and the commutator algebra;
//! * [`hierarchy`] — Lagrangian one-form hierarchies, Lagrange brackets,
//!   strong-symmetry (recursion) matrices and Hamiltonian recovery;
//! * [`dynamics`] — adaptive integration of the flow and trajectory-level
//!   verification (conservation drift, symmetry transport, isospectrality).
//!
//! Everything symbolic is exact: coefficients are arbitrary-precision
//! rationals and equality of expressions is decidable on canonical forms.
//! The crate is `no_std` (with `alloc`); float math goes through `libm`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dynamics;
pub mod expr;
pub mod hierarchy;
pub mod lattice;
pub mod matrix;
pub mod symmetry;

pub use expr::{Expr, ExprError, Monomial, RationalExpr, Scalar, Var};

pub use matrix::Matrix;


/// Float helpers that work under `no_std`.
pub(crate) mod fp {
    #[inline]
    pub fn abs(x: f64) -> f64 {
        libm::fabs(x)
    }

    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }

    #[inline]
    pub fn exp(x: f64) -> f64 {
        libm::exp(x)
    }

    #[inline]
    pub fn powf(x: f64, y: f64) -> f64 {
        libm::pow(x, y)
    }

    #[inline]
    pub fn hypot(x: f64, y: f64) -> f64 {
        libm::hypot(x, y)
    }

    /// Integer power by repeated multiplication; exponents here are small.
    pub fn powi(x: f64, k: u32) -> f64 {
        let mut acc = 1.0;
        let mut base = x;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc *= base;
            }
            base *= base;
            k >>= 1;
        }
        acc
    }

    #[inline]
    pub fn max(a: f64, b: f64) -> f64 {
        if a > b {
            a
        } else {
            b
        }
    }

    #[inline]
    pub fn min(a: f64, b: f64) -> f64 {
        if a < b {
            a
        } else {
            b
        }
    }
}
