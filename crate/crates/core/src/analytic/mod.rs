//! Special functions, Euler products and the main terms.

pub mod euler_product;
pub mod main_term;
pub mod special;

pub use euler_product::{constant_c, constant_c_accelerated, constant_c_naive, EulerProductValue};
pub use main_term::{
    main_term_coeffs, main_term_full, main_term_u, residue_principal, FullMainTerm,
    MainTermModel,
};
pub use special::{digamma, euler_gamma, hurwitz_zeta, zeta, zeta_prime_2, zeta_real};
