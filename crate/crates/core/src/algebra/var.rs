use std::fmt;
use std::str::FromStr;

use super::ParseError;

/// Number of variables in the shared namespace.
pub const NVARS: usize = 16;

/// The fixed variable namespace: the four coordinates and the twelve
/// free coefficients of the restricted model.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
#[repr(u8)]
pub enum Var {
    X = 0,
    Y,
    Z,
    S,
    A,
    B,
    F5,
    F6,
    G5,
    H3,
    H4,
    N3,
    A24,
    A05,
    A15,
    A06,
}

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::X,
        Var::Y,
        Var::Z,
        Var::S,
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

    /// The twelve model parameters, in declaration order.
    pub const PARAMS: [Var; 12] = [
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

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Var {
        Var::ALL[i]
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
            Var::S => "s",
            Var::A => "a",
            Var::B => "b",
            Var::F5 => "f5",
            Var::F6 => "f6",
            Var::G5 => "g5",
            Var::H3 => "h3",
            Var::H4 => "h4",
            Var::N3 => "n3",
            Var::A24 => "a24",
            Var::A05 => "a05",
            Var::A15 => "a15",
            Var::A06 => "a06",
        }
    }

    pub fn is_param(self) -> bool {
        self.index() >= Var::A.index()
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Var {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Var::ALL
            .iter()
            .copied()
            .find(|v| v.name() == s)
            .ok_or_else(|| ParseError::new(format!("unknown variable `{s}`")))
    }
}

/// Exponent vector over [`Var::ALL`]. The derived `Ord` is lexicographic
/// with `x` most significant, which is a monomial order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub [u8; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, k: u32) -> Self {
        let mut e = [0u8; NVARS];
        e[v.index()] = u8::try_from(k).expect("exponent overflow");
        Monomial(e)
    }

    pub fn from_pairs(pairs: &[(Var, u32)]) -> Self {
        let mut m = Monomial::ONE;
        for &(v, k) in pairs {
            m = m.mul(&Monomial::var_pow(v, k));
        }
        m
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()] as u32
    }

    pub fn with_exp(mut self, v: Var, k: u32) -> Self {
        self.0[v.index()] = u8::try_from(k).expect("exponent overflow");
        self
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        Monomial(e)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a = a.checked_sub(*b)?;
        }
        Some(Monomial(e))
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Keep only the exponents of `vars`.
    pub fn project(&self, vars: &[Var]) -> Monomial {
        let mut m = Monomial::ONE;
        for &v in vars {
            m.0[v.index()] = self.0[v.index()];
        }
        m
    }

    /// Zero out the exponents of `vars`.
    pub fn drop_vars(&self, vars: &[Var]) -> Monomial {
        let mut m = *self;
        for &v in vars {
            m.0[v.index()] = 0;
        }
        m
    }

    pub fn vars(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (Var::from_index(i), e as u32))
    }
}

impl fmt::Display for Monomial {
    /// `1`, `x`, `a^4*x^9`, variables in namespace order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (v, e) in self.vars() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
