//! Lead-term integrals, Epstein zeta values, regularized determinants of
//! real tori and the asymptotic predictions of `log det* Δ`.
//!
//! Lead terms are computed by two independent routes wherever two exist;
//! the routes are required to agree before a value is returned.

mod epstein;
mod lead;
mod predict;

pub use epstein::{
    epstein_zeta_prime_zero, epstein_zeta_prime_zero_split, epstein_zeta_sum,
    epstein_zeta_sum_with, EpsteinValue, EPSTEIN_POINT_BUDGET, EPSTEIN_TOLERANCE,
};
pub use lead::{
    arccosh_lead, bessel_power_mellin, c_d, c_d_with, lead_term_circulant,
    lead_term_circulant_with, lead_term_log_sin, lead_term_mellin, LeadMethod, LeadTerm,
    RouteValue, LEAD_TOLERANCE,
};
pub use predict::{
    predict_circulant, predict_circulant_with_lead, predict_torus_constant,
    predict_torus_sublinear, sublinear_second_order_constant, AsymptoticReport, Component,
    SublinearRule,
};
