//! The profile ODE `i∂ₛV = λ|V|^{p-1}V`, `V(0) = e^{-iπ/4}φ̂`, its closed-form
//! solution and mollified variant, the blow-up constant `A`, the time change
//! `s(t)`, and an independent RK4 integrator used as an oracle.

mod initial;
mod model;
mod oracle;
mod params;

pub use initial::InitialProfile;
pub use model::{
    blowup_constant, horizon_time, EnvelopeJet, refined_sup, s_of_t, t_of_s, PointJet, ProfileEval, ProfileModel,
    ProfileResidual, DEFAULT_XI_STEP, W_FLOOR,
};
pub(crate) use model::inverse_w_integral;
pub use oracle::{rk4_oracle, rk4_point};
pub use params::{ModelParams, P_MAX};
