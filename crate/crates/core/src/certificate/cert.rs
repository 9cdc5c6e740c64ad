//! Positivity certificates: polynomials in `Q>=0[params, x, z, s]` that
//! reproduce a target polynomial under `s = 1 - z`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::algebra::{
    default_max_elevation, rewrite_nonneg_zs, Coefficient, Monomial, RewriteFailure, SparsePoly,
    Var,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// `e_c + e_r` as transcribed, checked against `e`.
    AppendixCrosscheck,
    /// Built here by slice-wise basis rewriting.
    Independent,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::AppendixCrosscheck => "appendix-crosscheck",
            Provenance::Independent => "independent",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateTerm<C> {
    /// Product of parameter variables only.
    pub params: Monomial,
    pub x_exp: u32,
    pub z_exp: u32,
    pub s_exp: u32,
    pub coeff: C,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate<C> {
    pub terms: Vec<CertificateTerm<C>>,
    pub provenance: Provenance,
    /// Largest Bernstein degree any slice needed.
    pub max_elevation_used: u32,
    /// Number of `(parameter monomial, x power)` slices.
    pub slices: usize,
}

/// How far a slice may be elevated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElevationCap {
    /// The slice's z-degree plus the default margin.
    Default,
    /// An absolute cap on the Bernstein degree.
    Fixed(u32),
}

impl ElevationCap {
    fn for_slice<C: Coefficient>(&self, p: &SparsePoly<C>) -> u32 {
        match *self {
            ElevationCap::Default => default_max_elevation(p),
            ElevationCap::Fixed(n) => n,
        }
    }
}

/// The slice that could not be rewritten.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("slice {params} * x^{x_exp}: {reason}")]
pub struct CertificationFailure<C: Coefficient> {
    pub params: Monomial,
    pub x_exp: u32,
    pub slice: SparsePoly<C>,
    pub reason: RewriteFailure<C>,
}

impl<C: Coefficient> CertificationFailure<C> {
    pub fn is_definitive(&self) -> bool {
        self.reason.is_definitive()
    }
}

const KEY_VARS: [Var; 13] = [
    Var::X,
    Var::A,
    Var::B,
    Var::F5,
    Var::F6,
    Var::G5,
    Var::H3,
    Var::H4,
    Var::N3,
    Var::A24,
    Var::A05,
    Var::A15,
    Var::A06,
];

/// Certifies `p` (a polynomial in parameters, `x` and `z`) slice by slice.
///
/// Slices are processed in parallel; the result is ordered by slice key.
/// A definitive failure anywhere takes precedence over an inconclusive one.
pub fn certify_polynomial<C: Coefficient>(
    p: &SparsePoly<C>,
    cap: ElevationCap,
    provenance: Provenance,
) -> Result<Certificate<C>, CertificationFailure<C>> {
    let slices: Vec<(Monomial, SparsePoly<C>)> = p.decompose_by(&KEY_VARS).into_iter().collect();
    let results: Vec<_> = slices
        .par_iter()
        .map(|(key, slice)| (key, slice, rewrite_nonneg_zs(slice, cap.for_slice(slice))))
        .collect();

    let mut first_inconclusive = None;
    let mut terms = Vec::new();
    let mut max_elevation_used = 0;
    for (key, slice, res) in results {
        match res {
            Ok(rep) => {
                max_elevation_used = max_elevation_used.max(rep.elevation);
                let params = key.with_exp(Var::X, 0);
                for t in rep.terms {
                    terms.push(CertificateTerm {
                        params,
                        x_exp: key.exp(Var::X),
                        z_exp: t.z_exp,
                        s_exp: t.s_exp,
                        coeff: t.coeff,
                    });
                }
            }
            Err(reason) => {
                let failure = CertificationFailure {
                    params: key.with_exp(Var::X, 0),
                    x_exp: key.exp(Var::X),
                    slice: slice.clone(),
                    reason,
                };
                if failure.is_definitive() {
                    return Err(failure);
                }
                first_inconclusive.get_or_insert(failure);
            }
        }
    }
    if let Some(f) = first_inconclusive {
        return Err(f);
    }
    Ok(Certificate {
        terms,
        provenance,
        max_elevation_used,
        slices: slices.len(),
    })
}

impl<C: Coefficient> Certificate<C> {
    /// Builds a certificate from an explicit polynomial in `(params, x, z, s)`;
    /// negative coefficients are kept so [`Certificate::all_nonneg`] can
    /// report them.
    pub fn from_zs_poly(p: &SparsePoly<C>, provenance: Provenance) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| CertificateTerm {
                params: m.drop_vars(&[Var::X, Var::Y, Var::Z, Var::S]),
                x_exp: m.exp(Var::X),
                z_exp: m.exp(Var::Z),
                s_exp: m.exp(Var::S),
                coeff: c.clone(),
            })
            .collect();
        let slices = p.decompose_by(&KEY_VARS).len();
        Certificate {
            terms,
            provenance,
            max_elevation_used: 0,
            slices,
        }
    }

    /// The certificate as a polynomial in parameters, `x`, `z` and `s`.
    pub fn to_zs_poly(&self) -> SparsePoly<C> {
        SparsePoly::from_terms(self.terms.iter().map(|t| {
            let m = t.params.mul(&Monomial::from_pairs(&[
                (Var::X, t.x_exp),
                (Var::Z, t.z_exp),
                (Var::S, t.s_exp),
            ]));
            (m, t.coeff.clone())
        }))
    }

    /// Substitutes `s = 1 - z`.
    pub fn expand(&self) -> SparsePoly<C> {
        let one_minus_z = &SparsePoly::one() - &SparsePoly::var(Var::Z);
        self.to_zs_poly().substitute(Var::S, &one_minus_z)
    }

    pub fn all_nonneg(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.is_nonneg())
    }

    pub fn negative_terms(&self) -> impl Iterator<Item = &CertificateTerm<C>> {
        self.terms.iter().filter(|t| !t.coeff.is_nonneg())
    }

    /// Terms of one `(parameter monomial, x power)` slice.
    pub fn slice(&self, params: &Monomial, x_exp: u32) -> Vec<&CertificateTerm<C>> {
        self.terms
            .iter()
            .filter(|t| t.params == *params && t.x_exp == x_exp)
            .collect()
    }

    /// Distinct x-powers appearing.
    pub fn x_support(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms.iter().map(|t| t.x_exp).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Deterministic text form: one line per term,
    /// `param-monomial | x-exp | z-exp | s-exp | coefficient`, lines sorted
    /// as byte strings, each ending in a newline.
    pub fn serialize(&self) -> String {
        let mut lines: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                format!(
                    "{} | {} | {} | {} | {}",
                    t.params,
                    t.x_exp,
                    t.z_exp,
                    t.s_exp,
                    t.coeff.to_exact()
                )
            })
            .collect();
        lines.sort();
        let mut out = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum());
        for l in lines {
            out.push_str(&l);
            out.push('\n');
        }
        out
    }

    /// Coefficient totals per slice, keyed like [`Certificate::slice`].
    pub fn slice_keys(&self) -> BTreeMap<(Monomial, u32), usize> {
        let mut out = BTreeMap::new();
        for t in &self.terms {
            *out.entry((t.params, t.x_exp)).or_insert(0) += 1;
        }
        out
    }
}

/// Parses the text form produced by [`Certificate::serialize`].
pub fn parse_certificate(
    text: &str,
    provenance: Provenance,
) -> Result<Certificate<crate::ExactScalar>, crate::algebra::ParseError> {
    use crate::algebra::ParseError;
    let mut terms = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let err = |what: &str| ParseError::new(format!("line {}: {what}", lineno + 1));
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(err("expected 5 fields"));
        }
        let params = if fields[0] == "1" {
            Monomial::ONE
        } else {
            let mut m = Monomial::ONE;
            for factor in fields[0].split('*') {
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (n, e.parse::<u32>().map_err(|_| err("bad exponent"))?),
                    None => (factor, 1),
                };
                let v: Var = name.parse().map_err(|_| err("unknown parameter"))?;
                m = m.mul(&Monomial::var_pow(v, e));
            }
            m
        };
        let num = |s: &str| s.parse::<u32>().map_err(|_| err("bad exponent field"));
        terms.push(CertificateTerm {
            params,
            x_exp: num(fields[1])?,
            z_exp: num(fields[2])?,
            s_exp: num(fields[3])?,
            coeff: fields[4]
                .parse()
                .map_err(|e: ParseError| err(e.message()))?,
        });
    }
    let slices = terms
        .iter()
        .map(|t| (t.params, t.x_exp))
        .collect::<std::collections::BTreeSet<_>>()
        .len();
    Ok(Certificate {
        terms,
        provenance,
        max_elevation_used: 0,
        slices,
    })
}
