//! The Jacobian positivity witness `e`, its transcribed decomposition, and
//! certificates of non-negativity on the strip.

mod appendix;
mod cert;
mod independent;
mod jacobian;

pub use appendix::{
    build_ec, build_er, ec_terms, er_table, identity_trial, verify_identity_randomized,
    verify_identity_symbolic, IdentityError, RandomizedReport, SymbolicReport, TranscriptionError,
    TrialOutcome, SAMPLE_BOUND,
};
pub use cert::{
    certify_polynomial, parse_certificate, Certificate, CertificateTerm, CertificationFailure,
    ElevationCap, Provenance,
};
pub use independent::{
    certify_independent, independent_target, IndependentCertificate, IndependentError,
};
pub use jacobian::{
    compute_e, compute_e_symbolic, compute_jgf, compute_jgf_symbolic, e_closed_form, e_from_system,
    jgf_from_system, JacobianError,
};
