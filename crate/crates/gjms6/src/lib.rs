//! Exact-arithmetic and numerical toolkit for the order-six GJMS operator.
//!
//! The exact layer (rationals, homogeneous polynomials, the radial shift
//! calculus, Weyl-tensor algebra, and the Green's-function expansion) never
//! touches floating point; the numeric layer (sphere Galerkin solver and
//! bubble quadrature) is confined to `sphere_spectral` and
//! `bubble_quadrature`. The `cli` module wires everything into the `gjms6`
//! binary.

pub mod bubble_quadrature;
pub mod cli;
pub mod exact_arith;
pub mod green_expansion;
pub mod polyspace;
pub mod radial_ops;
pub mod sphere_spectral;
pub mod tensor_weyl;
