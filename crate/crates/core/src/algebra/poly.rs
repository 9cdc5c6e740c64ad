//! Canonical sparse multivariate polynomials over an exact coefficient field.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Float, One, Zero};

use super::coeff::Coefficient;
use super::var::{Monomial, Var, NVARS};
use super::AlgebraError;

/// A polynomial stored as a map from exponent vector to nonzero coefficient.
///
/// Zero coefficients are never stored, so two polynomials are equal exactly
/// when their term maps are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> Default for SparsePoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> SparsePoly<C> {
    pub fn zero() -> Self {
        SparsePoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(C::from_integer(n))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), C::one())
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SparsePoly { terms }
    }

    /// Builds from possibly repeated or zero terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in iter {
            p.add_term(m, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, C> {
        self.terms
    }

    /// Coefficient of an exact monomial (zero when absent).
    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: &C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparsePoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v.mul_ref(c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Converts every coefficient into another field.
    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> SparsePoly<D> {
        SparsePoly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn partial_derivative(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let k = m.exp(v);
            if k == 0 {
                continue;
            }
            out.add_term(m.with_exp(v, k - 1), &c.mul_ref(&C::from_integer(k as i64)));
        }
        out
    }

    /// Replaces `v` by `replacement` and expands.
    pub fn substitute(&self, v: Var, replacement: &SparsePoly<C>) -> Self {
        // group by the power of v so each power of the replacement is built once
        let mut by_power: BTreeMap<u32, SparsePoly<C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.exp(v);
            by_power.entry(k).or_default().add_term(m.with_exp(v, 0), c);
        }
        let mut out = Self::zero();
        let mut power = Self::one();
        let mut current = 0u32;
        for (k, rest) in by_power {
            while current < k {
                power = &power * replacement;
                current += 1;
            }
            out = &out + &(&rest * &power);
        }
        out
    }

    /// Substitutes several variables at once (simultaneously).
    pub fn substitute_all(&self, subs: &[(Var, SparsePoly<C>)]) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut t = SparsePoly::term(
                m.drop_vars(&subs.iter().map(|s| s.0).collect::<Vec<_>>()),
                c.clone(),
            );
            for (v, rep) in subs {
                let k = m.exp(*v);
                if k > 0 {
                    t = &t * &rep.pow(k);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Smallest exponent of `v` over stored terms.
    pub fn min_degree_in(&self, v: Var) -> Result<u32, AlgebraError> {
        self.terms
            .keys()
            .map(|m| m.exp(v))
            .min()
            .ok_or(AlgebraError::ZeroPolynomial("min_degree_in"))
    }

    /// Largest exponent of `v`; `None` for the zero polynomial.
    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// The coefficient of `v^k`, a polynomial in the remaining variables.
    pub fn coefficient_of(&self, v: Var, k: u32) -> Self {
        SparsePoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(v) == k)
                .map(|(m, c)| (m.with_exp(v, 0), c.clone()))
                .collect(),
        }
    }

    /// Splits into slices keyed by the exponents of `key_vars`; each slice
    /// keeps only the other variables.
    pub fn decompose_by(&self, key_vars: &[Var]) -> BTreeMap<Monomial, SparsePoly<C>> {
        let mut out: BTreeMap<Monomial, SparsePoly<C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.project(key_vars))
                .or_default()
                .terms
                .insert(m.drop_vars(key_vars), c.clone());
        }
        out
    }

    /// Variables that occur with a positive exponent.
    pub fn variables(&self) -> Vec<Var> {
        let mut seen = [false; NVARS];
        for m in self.terms.keys() {
            for (v, _) in m.vars() {
                seen[v.index()] = true;
            }
        }
        Var::ALL
            .iter()
            .copied()
            .filter(|v| seen[v.index()])
            .collect()
    }

    pub fn only_uses(&self, vars: &[Var]) -> bool {
        self.variables().iter().all(|v| vars.contains(v))
    }

    /// Exact evaluation with every occurring variable assigned.
    pub fn eval_exact(&self, assignment: &[(Var, C)]) -> Result<C, AlgebraError> {
        let mut values: [Option<&C>; NVARS] = [None; NVARS];
        for (v, c) in assignment {
            values[v.index()] = Some(c);
        }
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.vars() {
                let val = values[v.index()].ok_or(AlgebraError::Unassigned(v))?;
                for _ in 0..e {
                    t = t.mul_ref(val);
                }
            }
            acc.add_assign_ref(&t);
        }
        Ok(acc)
    }

    /// Exact partial evaluation: assigned variables are replaced by constants.
    pub fn specialize(&self, assignment: &[(Var, C)]) -> Self {
        let vars: Vec<Var> = assignment.iter().map(|(v, _)| *v).collect();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, val) in assignment {
                for _ in 0..m.exp(*v) {
                    t = t.mul_ref(val);
                }
            }
            out.add_term(m.drop_vars(&vars), &t);
        }
        out
    }

    /// Floating-point evaluation by Horner's rule, one variable at a time
    /// (`x` outermost). `point` is indexed by [`Var::index`]; coefficients are
    /// rounded to the nearest `T` first.
    pub fn eval_float<T: Float>(&self, point: &[T; NVARS]) -> T {
        let terms: Vec<(Monomial, T)> = self
            .terms
            .iter()
            .map(|(m, c)| (*m, T::from(c.to_f64()).unwrap_or_else(T::nan)))
            .collect();
        horner(&terms, 0, point)
    }

    /// Exact division; fails unless `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &SparsePoly<C>) -> Result<Self, AlgebraError> {
        let (lead_m, lead_c) = divisor.leading().ok_or(AlgebraError::DivisionByZero)?;
        let (lead_m, lead_c) = (*lead_m, lead_c.clone());
        let mut rem = self.clone();
        let mut quotient = Self::zero();
        while let Some((m, c)) = rem.leading() {
            let qm = m
                .div(&lead_m)
                .ok_or_else(|| AlgebraError::InexactDivision(format!("{m}")))?;
            let qc = c.div_ref(&lead_c);
            for (dm, dc) in divisor.terms() {
                rem.add_term(dm.mul(&qm), &dc.mul_ref(&qc).neg_ref());
            }
            quotient.add_term(qm, &qc);
        }
        Ok(quotient)
    }

    /// Number of terms with positive and negative coefficient.
    pub fn sign_counts(&self) -> (usize, usize) {
        let pos = self.terms.values().filter(|c| c.is_positive()).count();
        (pos, self.terms.len() - pos)
    }
}

fn horner<T: Float>(terms: &[(Monomial, T)], var: usize, point: &[T; NVARS]) -> T {
    if terms.is_empty() {
        return T::zero();
    }
    if var == NVARS {
        return terms.iter().fold(T::zero(), |acc, (_, c)| acc + *c);
    }
    // terms are sorted lex, so equal exponents of `var` are contiguous and increasing
    let mut groups: Vec<(u8, &[(Monomial, T)])> = Vec::new();
    let mut start = 0;
    for i in 1..=terms.len() {
        if i == terms.len() || terms[i].0 .0[var] != terms[start].0 .0[var] {
            groups.push((terms[start].0 .0[var], &terms[start..i]));
            start = i;
        }
    }
    let x = point[var];
    let mut acc = T::zero();
    let mut prev_exp: Option<u8> = None;
    for &(e, slice) in groups.iter().rev() {
        if let Some(p) = prev_exp {
            acc = acc * x.powi((p - e) as i32);
        }
        acc = acc + horner(slice, var + 1, point);
        prev_exp = Some(e);
    }
    if let Some(p) = prev_exp {
        acc = acc * x.powi(p as i32);
    }
    acc
}

impl<'a, C: Coefficient> Add<&'a SparsePoly<C>> for &'a SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn add(self, rhs: &SparsePoly<C>) -> SparsePoly<C> {
        let (big, small) = if self.len() >= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl<'a, C: Coefficient> Sub<&'a SparsePoly<C>> for &'a SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn sub(self, rhs: &SparsePoly<C>) -> SparsePoly<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &c.neg_ref());
        }
        out
    }
}

impl<'a, C: Coefficient> Mul<&'a SparsePoly<C>> for &'a SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn mul(self, rhs: &SparsePoly<C>) -> SparsePoly<C> {
        let mut acc: std::collections::HashMap<Monomial, C> =
            std::collections::HashMap::with_capacity(self.len() * rhs.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let prod = ca.mul_ref(cb);
                acc.entry(ma.mul(mb))
                    .and_modify(|c| c.add_assign_ref(&prod))
                    .or_insert(prod);
            }
        }
        SparsePoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl<'a, C: Coefficient> Neg for &'a SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn neg(self) -> SparsePoly<C> {
        SparsePoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg_ref())).collect(),
        }
    }
}

macro_rules! owned_binop {
    ($($tr:ident $m:ident),*) => {$(
        impl<C: Coefficient> $tr for SparsePoly<C> {
            type Output = SparsePoly<C>;
            fn $m(self, rhs: SparsePoly<C>) -> SparsePoly<C> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_binop!(Add add, Sub sub, Mul mul);

impl<C: Coefficient> Neg for SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn neg(self) -> SparsePoly<C> {
        -&self
    }
}

impl<C: Coefficient> Zero for SparsePoly<C> {
    fn zero() -> Self {
        SparsePoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coefficient> One for SparsePoly<C> {
    fn one() -> Self {
        SparsePoly::one()
    }
}

impl<C: Coefficient> fmt::Display for SparsePoly<C> {
    /// Terms in descending monomial order as `coef*monomial`, joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{m}")?;
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for SparsePoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
