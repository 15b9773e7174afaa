//! Generic numerical kernel: special functions, root finding, contour integrals.

pub mod roots;
pub mod special;

pub use roots::{
    central_derivative, contour_residue, count_zeros, count_zeros_with, dedup_roots, derivative_step, find_root,
    ComplexRect, ContourOptions, RootResult,
};
pub use special::{
    riccati_bessel_j, riccati_bessel_j_deriv, riccati_hankel, riccati_hankel_deriv, riccati_hankel_pair, HankelSign,
    L_MAX,
};
