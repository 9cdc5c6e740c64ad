//! A certificate for `e - e_c` built without the appendix table.

use crate::algebra::{Monomial, Var};
use crate::{QPoly, Rational};

use super::appendix::{build_ec, TranscriptionError};
use super::cert::{
    certify_polynomial, Certificate, CertificationFailure, ElevationCap, Provenance,
};
use super::jacobian::compute_e_symbolic;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum IndependentError {
    #[error(transparent)]
    Transcription(#[from] TranscriptionError),
    #[error(transparent)]
    Certification(#[from] CertificationFailure<Rational>),
    #[error("certificate does not reproduce its target")]
    RoundTrip,
}

impl IndependentError {
    /// A definitive failure would refute positivity of `e`.
    pub fn is_refutation(&self) -> bool {
        matches!(self, IndependentError::Certification(f) if f.is_definitive())
    }
}

#[derive(Clone, Debug)]
pub struct IndependentCertificate {
    /// `d = e - e_c(x, z, 1 - z)`.
    pub target: QPoly,
    pub certificate: Certificate<Rational>,
}

impl IndependentCertificate {
    /// Coefficient of `z^i s^j` in the `(params, x^k)` slice.
    pub fn coefficient(
        &self,
        params: &Monomial,
        x_exp: u32,
        z_exp: u32,
        s_exp: u32,
    ) -> Option<&Rational> {
        self.certificate
            .slice(params, x_exp)
            .into_iter()
            .find(|t| t.z_exp == z_exp && t.s_exp == s_exp)
            .map(|t| &t.coeff)
    }

    /// The `a^4 z s^2 x^9` coefficient.
    pub fn a4_x9_marker(&self) -> Option<&Rational> {
        self.coefficient(&Monomial::var_pow(Var::A, 4), 9, 1, 2)
    }
}

/// `e - e_c(x, z, 1 - z)` over the symbolic family.
pub fn independent_target() -> Result<QPoly, TranscriptionError> {
    let ec = build_ec()?.substitute(Var::S, &(&QPoly::one() - &QPoly::var(Var::Z)));
    Ok(compute_e_symbolic() - &ec)
}

/// Certifies `e - e_c` slice by slice and checks the round trip.
pub fn certify_independent(cap: ElevationCap) -> Result<IndependentCertificate, IndependentError> {
    let target = independent_target()?;
    let certificate = certify_polynomial(&target, cap, Provenance::Independent)?;
    if certificate.expand() != target || !certificate.all_nonneg() {
        return Err(IndependentError::RoundTrip);
    }
    Ok(IndependentCertificate {
        target,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn independent_certificate() {
        let c = certify_independent(ElevationCap::Default).unwrap();
        assert_eq!(c.a4_x9_marker(), Some(&Rational::from_integer(648.into())));
        let xs = c.certificate.x_support();
        assert!(
            *xs.first().unwrap() >= 7 && *xs.last().unwrap() <= 30,
            "{xs:?}"
        );
        assert_eq!(
            c.certificate.serialize(),
            certify_independent(ElevationCap::Default)
                .unwrap()
                .certificate
                .serialize()
        );
    }
}
