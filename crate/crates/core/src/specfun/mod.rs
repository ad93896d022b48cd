//! Scaled modified Bessel functions, theta functions of discrete and real
//! tori, and the constants that appear in the asymptotic formulas.
//!
//! Only the scaled combination `e^{−t} I_x(t)` is exposed. The unscaled
//! function overflows long before the arguments of interest, and every
//! formula downstream consumes the scaled form anyway.

mod bessel;
mod constants;
mod theta;

pub use bessel::{
    bessel_i_scaled, bessel_i_scaled_table, bessel_multi_scaled, HANKEL_SWITCH, SERIES_SWITCH,
};
pub use constants::{catalan_constant, dedekind_eta, riemann_zeta_real};
pub use theta::{
    bessel_tail_bound, required_truncation, theta_circle, theta_circle_gaussian,
    theta_circle_spectral, theta_discrete_bessel, theta_discrete_bessel_auto,
    theta_discrete_spectral, theta_real_torus, theta_real_torus_minus_heat,
    theta_real_torus_minus_one, translated_bessel_dual, translated_bessel_sum, ThetaValue,
    THETA_TAIL_TOLERANCE,
};
