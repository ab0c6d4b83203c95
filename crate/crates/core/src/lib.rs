//! Hypergeometric ₂F₁/₃F₂ series at real parameters, the Thomae, Kummer and
//! Euler transformations as parameter maps, and independent numerical oracles
//! (quadrature, exact rationals) that certify them.

pub mod arith;
pub mod error;
pub mod oracle;
pub mod sampling;
pub mod series;
pub mod transforms;
pub mod verify;

pub use arith::{
    beta_closed_form, gamma, gamma_ratio_eval, log_gamma_signed, pochhammer, pochhammer_rational,
    GammaRatio, Rational, Sign, SignedLogValue,
};
pub use error::{Error, Result};
pub use series::{
    excess_2f1, excess_3f2, sum_2f1, sum_3f2_terminating_exact, sum_3f2_unit, Params2F1,
    Params3F2, RationalParams3F2, SeriesResult, Tolerance,
};
pub use transforms::{
    choose_representation, euler_second_map, gauss_sum, kummer_map, saalschutz_params,
    saalschutz_sum, thomae_map, TransformKind, Transformed2F1, Transformed3F2, TransformedValue,
};
pub use oracle::{
    beta_integral, euler_integral_3f2, prove_chain, prove_chain_with, IntegralResult,
    ProofChainReport, QuadratureConfig, QuadratureResult, StageValue,
};
pub use sampling::ParamSampler;
pub use verify::{
    verify_euler2, verify_gauss, verify_kummer, verify_saalschutz, verify_thomae, ExactCheck,
    Identity, IdentityCheck,
};
