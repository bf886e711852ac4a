//! Sparse multivariate polynomials over exact rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Variable index; a larger index is higher in the elimination order.
pub type Var = usize;

/// Exponent vector, sparse: `(variable, exponent)` pairs, highest variable
/// first, exponents positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Self(vec![(v, e)])
        }
    }

    pub fn degree(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(&(a, ea)), Some(&(b, eb))) if a == b => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
                (Some(&(a, ea)), Some(&(b, _))) if a > b => {
                    out.push((a, ea));
                    i += 1;
                }
                (Some(&t), None) => {
                    out.push(t);
                    i += 1;
                }
                (_, Some(&t)) => {
                    out.push(t);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial(out)
    }

    fn without(&self, v: Var) -> Monomial {
        Monomial(self.0.iter().copied().filter(|(w, _)| *w != v).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("divisor does not contain variable {0}")]
    InvalidDivisor(Var),
    #[error("polynomial grew past {0} terms")]
    TooLarge(usize),
}

/// Pseudo-division result: `lc(g)^k · f = q·g + r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoDivision {
    pub remainder: Polynomial,
    pub quotient: Polynomial,
    pub power: u32,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: Var) -> Self {
        Self::term(BigRational::one(), Monomial::var(v, 1))
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero constant.
    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms.contains_key(&Monomial::one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn degree(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.degree(v)).max().unwrap_or(0)
    }

    /// Highest variable present, `None` for constants.
    pub fn main_var(&self) -> Option<Var> {
        self.terms.keys().filter_map(|m| m.0.first().map(|(v, _)| *v)).max()
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| *v)).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Coefficient of `v^d`, as a polynomial in the other variables.
    pub fn coeff(&self, v: Var, d: u32) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if m.degree(v) == d {
                out.terms.insert(m.without(v), c.clone());
            }
        }
        out
    }

    /// Leading coefficient with respect to `v`.
    pub fn initial(&self, v: Var) -> Polynomial {
        self.coeff(v, self.degree(v))
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::int(1);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Exact value at `point` (indexed by variable; missing variables are an error
    /// of the caller and panic).
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut sum = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in &m.0 {
                t *= num_traits::pow(point[v].clone(), e as usize);
            }
            sum += t;
        }
        sum
    }

    /// `Some(c)` when `self = c · other` for a rational `c`.
    pub fn ratio_to(&self, other: &Polynomial) -> Option<BigRational> {
        if self.terms.len() != other.terms.len() || self.is_zero() {
            return None;
        }
        let mut ratio: Option<BigRational> = None;
        for ((m1, c1), (m2, c2)) in self.terms.iter().zip(other.terms.iter()) {
            if m1 != m2 {
                return None;
            }
            let r = c1 / c2;
            match &ratio {
                None => ratio = Some(r),
                Some(q) if *q == r => {}
                Some(_) => return None,
            }
        }
        ratio
    }

    /// Pseudo-remainder of `self` by `g` in `v`, with quotient and power
    /// of `initial(g)`. Fails once any intermediate exceeds `cap` terms.
    pub fn prem(&self, g: &Polynomial, v: Var, cap: usize) -> Result<PseudoDivision, PolyError> {
        let d = g.degree(v);
        if d == 0 {
            return Err(PolyError::InvalidDivisor(v));
        }
        let lc = g.coeff(v, d);
        let mut r = self.clone();
        let mut q = Polynomial::zero();
        let mut k = 0;
        while !r.is_zero() && r.degree(v) >= d {
            let e = r.degree(v);
            let lr = r.coeff(v, e);
            let shift = &lr * &Polynomial::term(BigRational::one(), Monomial::var(v, e - d));
            r = &(&lc * &r) - &(&shift * g);
            q = &(&lc * &q) + &shift;
            k += 1;
            if r.len() > cap || q.len() > cap {
                return Err(PolyError::TooLarge(cap));
            }
        }
        Ok(PseudoDivision {
            remainder: r,
            quotient: q,
            power: k,
        })
    }

    /// Renders with the given variable names, highest terms first.
    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { p: self, names }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

pub struct PolyDisplay<'a> {
    p: &'a Polynomial,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.p.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .rev()
                .map(|&(v, e)| {
                    let name = self.names.get(v).cloned().unwrap_or_else(|| format!("v{v}"));
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            let coeff = if abs.is_integer() {
                abs.numer().to_string()
            } else {
                format!("({}/{})", abs.numer(), abs.denom())
            };
            if factors.is_empty() {
                f.write_str(&coeff)?;
            } else if abs.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{coeff}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Polynomial {
        Polynomial::var(1)
    }
    fn y() -> Polynomial {
        Polynomial::var(0)
    }
    fn k(c: i64) -> Polynomial {
        Polynomial::int(c)
    }

    #[test]
    fn tabulated_prems() {
        let cap = 1000;
        let r = (&x() * &x() - k(1)).prem(&(x() - k(1)), 1, cap).unwrap();
        assert!(r.remainder.is_zero());
        let r = (&x() * &x() + k(1)).prem(&(x() - k(1)), 1, cap).unwrap();
        assert_eq!(r.remainder, k(2));
        let f = &(&y() * &x()) * &x() + k(1);
        let g = &(k(2) * x()) - &y();
        let r = f.prem(&g, 1, cap).unwrap();
        assert_eq!(r.remainder, &(&y() * &y()) * &y() + k(4));
        assert_eq!(r.power, 2);
        assert_eq!(r.quotient, &(&k(2) * &y()) * &x() + &y() * &y());
        assert_eq!(
            f.prem(&y(), 1, cap),
            Err(PolyError::InvalidDivisor(1))
        );
    }

    #[test]
    fn display_and_structure() {
        let names = vec!["y".to_string(), "x".to_string()];
        let p = &(k(2) * x()) - &y() - k(3);
        assert_eq!(p.display(&names).to_string(), "2*x - y - 3");
        assert_eq!(p.main_var(), Some(1));
        assert_eq!(p.initial(1), k(2));
        assert_eq!((k(4) * x()).ratio_to(&(k(2) * x())), Some(BigRational::from_integer(2.into())));
        assert!(k(5).is_constant());
        assert_eq!(Polynomial::zero().display(&names).to_string(), "0");
    }
}
