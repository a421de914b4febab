use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::monomial::Monomial;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sparse multivariate polynomial in a fixed number of variables.
///
/// Terms are kept in a `BTreeMap` keyed by [`Monomial`], so iteration is in
/// ascending graded-lex order and the representation is canonical: no zero
/// coefficients are ever stored.
#[derive(Clone, PartialEq)]
pub struct Poly<T> {
    nvars: usize,
    terms: BTreeMap<Monomial, T>,
}

impl<T: Scalar> Poly<T> {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        Poly::term(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, T::one())
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable {index} out of range for {nvars}");
        Poly::term(Monomial::var(nvars, index), T::one())
    }

    pub fn term(m: Monomial, c: T) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { nvars, terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated monomials.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, T)>,
    {
        let mut p = Poly::zero(nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::ArityMismatch {
                    expected: nvars,
                    got: exps.len(),
                });
            }
            p.add_term(Monomial::new(exps), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
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

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> T {
        self.terms.get(m).cloned().unwrap_or_else(T::zero)
    }

    pub fn constant_term(&self) -> T {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.constant_term().is_zero()
    }

    /// Coefficient of the linear monomial `x_var`.
    pub fn linear_coeff(&self, var: usize) -> T {
        self.coeff(&Monomial::var(self.nvars, var))
    }

    /// Highest total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Lowest total degree of a term (the order at the origin); `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &T)> {
        self.terms.iter().next_back()
    }

    /// Whether variable `var` occurs in some term.
    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exp(var) > 0)
    }

    pub fn add_term(&mut self, m: Monomial, c: T) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &T) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (k, v) in &self.terms {
            out.add_term(k.mul(m), v.clone() * c.clone());
        }
        out
    }

    /// Drops every term of degree greater than `deg`.
    pub fn truncate(&self, deg: u32) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= deg)
                .map(|(m, v)| (m.clone(), v.clone()))
                .collect(),
        }
    }

    /// Product with every term above `deg` discarded.
    pub fn mul_trunc(&self, other: &Poly<T>, deg: u32) -> Self {
        assert_eq!(self.nvars, other.nvars, "nvars mismatch in product");
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > deg {
                break;
            }
            for (mb, cb) in &other.terms {
                if da + mb.degree() > deg {
                    break;
                }
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn pow_trunc(&self, e: u32, deg: u32) -> Self {
        let mut acc = Poly::one(self.nvars).truncate(deg);
        for _ in 0..e {
            acc = acc.mul_trunc(self, deg);
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[var] -= 1;
            out.add_term(Monomial::new(exps), c.clone() * T::from_int(e as i64));
        }
        out
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|v| self.derivative(v)).collect()
    }

    /// Composes `self` with `assignment[i]` substituted for variable `i`.
    ///
    /// All substituted polynomials must share one ambient variable count,
    /// which becomes the variable count of the result.
    pub fn substitute(&self, assignment: &[Poly<T>]) -> Result<Self> {
        self.substitute_inner(assignment, None)
    }

    /// As [`Poly::substitute`], discarding terms above `deg` throughout.
    pub fn substitute_trunc(&self, assignment: &[Poly<T>], deg: u32) -> Result<Self> {
        self.substitute_inner(assignment, Some(deg))
    }

    fn substitute_inner(&self, assignment: &[Poly<T>], cap: Option<u32>) -> Result<Self> {
        if assignment.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: assignment.len(),
            });
        }
        let target = match assignment.first() {
            Some(p) => p.nvars,
            None => 0,
        };
        if let Some(bad) = assignment.iter().find(|p| p.nvars != target) {
            return Err(Error::ArityMismatch {
                expected: target,
                got: bad.nvars,
            });
        }
        let mul = |a: &Poly<T>, b: &Poly<T>| match cap {
            Some(d) => a.mul_trunc(b, d),
            None => a * b,
        };
        // cache powers per variable
        let mut powers: Vec<Vec<Poly<T>>> = vec![Vec::new(); self.nvars];
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(target, c.clone());
            for (v, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[v];
                if cache.is_empty() {
                    cache.push(Poly::one(target));
                }
                while cache.len() <= e as usize {
                    let next = mul(cache.last().expect("nonempty"), &assignment[v]);
                    cache.push(next);
                }
                acc = mul(&acc, &cache[e as usize]);
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// Moves variable `i` to `map[i]` in a ring with `new_nvars` variables.
    pub fn remap(&self, map: &[usize], new_nvars: usize) -> Self {
        assert_eq!(map.len(), self.nvars, "remap needs one slot per variable");
        let mut out = Poly::zero(new_nvars);
        for (m, c) in &self.terms {
            out.add_term(m.remap(map, new_nvars), c.clone());
        }
        out
    }

    /// Embeds into a larger ring, keeping variable indices.
    pub fn extend_vars(&self, new_nvars: usize) -> Self {
        let map: Vec<usize> = (0..self.nvars).collect();
        self.remap(&map, new_nvars)
    }

    pub fn map_coeffs<U: Scalar>(&self, mut f: impl FnMut(&T) -> U) -> Poly<U> {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn eval(&self, point: &[T]) -> T {
        assert_eq!(point.len(), self.nvars);
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t = t * point[v].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Renders using the supplied variable names, highest terms first.
    ///
    /// Unit coefficients are omitted (`-x`, not `-1*x`).
    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative_display();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let mut factors = Vec::new();
            for (v, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[v].clone()),
                    _ => factors.push(format!("{}^{}", names[v], e)),
                }
            }
            if factors.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

/// Default variable names: `x, y, z` for up to three variables, `x1..xn`
/// beyond that.
pub fn default_var_names(nvars: usize) -> Vec<String> {
    if nvars <= 3 {
        ["x", "y", "z"][..nvars].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

impl<T: Scalar> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&default_var_names(self.nvars)))
    }
}

impl<T: Scalar> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.nvars, self)
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch in sum");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch in difference");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch in product");
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<T: Scalar> Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Poly<T>) -> Poly<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Poly<T>) -> Poly<T> {
        &self - &rhs
    }
}

impl<T: Scalar> Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Poly<T>) -> Poly<T> {
        &self * &rhs
    }
}

impl<T: Scalar> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        -&self
    }
}
