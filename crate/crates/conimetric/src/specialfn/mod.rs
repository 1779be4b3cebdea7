//! Special functions: real Gamma and the Gauss hypergeometric function.

mod gamma;
mod hyp;

pub use gamma::{cos_pi, gamma_real, log_gamma_real, sin_pi, GAMMA_POLE_TOLERANCE};
pub use hyp::{
    hyp2f1, hyp2f1_boundary, hyp2f1_series, PARAM_RANGE, SERIES_MAX_TERMS, SERIES_TOLERANCE,
};

pub(crate) use hyp::{eval_2f1_clean, CutZ};
