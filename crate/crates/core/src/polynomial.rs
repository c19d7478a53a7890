//! Sparse homogeneous multivariate polynomials.
//!
//! A [`Polynomial`] stores its terms in a `BTreeMap` keyed by exponent vector
//! under graded-lexicographic order, so iteration (and serialization) is
//! deterministic. The zero polynomial is an empty map that still carries its
//! declared degree.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::subspace::Subspace;
use crate::univariate::UnivariatePoly;

/// Exponent vector of a monomial, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(powers: Vec<u32>) -> Self {
        Exponent(powers)
    }

    pub fn powers(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn plus(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Homogeneous polynomial in `num_vars` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<S> {
    num_vars: usize,
    degree: u32,
    terms: BTreeMap<Exponent, S>,
}

impl<S: Scalar> Polynomial<S> {
    /// Builds a polynomial from `(exponent, coefficient)` pairs, merging
    /// duplicates and dropping zero coefficients.
    pub fn new<I>(num_vars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, S)>,
    {
        let mut map: BTreeMap<Exponent, S> = BTreeMap::new();
        for (powers, coef) in terms {
            if powers.len() != num_vars {
                return Err(Error::DimensionMismatch {
                    expected: num_vars,
                    actual: powers.len(),
                });
            }
            let exp = Exponent(powers);
            let total = exp.total_degree();
            if total != degree {
                return Err(Error::NotHomogeneous {
                    exponent: exp.0,
                    expected: degree,
                    actual: total,
                });
            }
            accumulate(&mut map, exp, coef);
        }
        Ok(Polynomial {
            num_vars,
            degree,
            terms: map,
        })
    }

    pub fn zero(num_vars: usize, degree: u32) -> Self {
        Polynomial {
            num_vars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Degree-zero polynomial with value `value`.
    pub fn constant(num_vars: usize, value: S) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Exponent(vec![0; num_vars]), value);
        }
        Polynomial {
            num_vars,
            degree: 0,
            terms,
        }
    }

    /// The coordinate function `x_index`.
    pub fn variable(num_vars: usize, index: usize) -> Self {
        let mut powers = vec![0; num_vars];
        powers[index] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(Exponent(powers), S::one());
        Polynomial {
            num_vars,
            degree: 1,
            terms,
        }
    }

    /// The linear form `sum_i coeffs[i] x_i`.
    pub fn linear(coeffs: &[S]) -> Self {
        let n = coeffs.len();
        let terms = coeffs.iter().enumerate().map(|(i, c)| {
            let mut powers = vec![0; n];
            powers[i] = 1;
            (powers, c.clone())
        });
        Self::new(n, 1, terms).expect("linear terms are homogeneous")
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
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

    /// Terms in descending graded-lex order (leading term first).
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &S)> {
        self.terms.iter().rev().map(|(e, c)| (e.powers(), c))
    }

    pub fn coefficient(&self, powers: &[u32]) -> S {
        self.terms
            .get(&Exponent(powers.to_vec()))
            .cloned()
            .unwrap_or_else(S::zero)
    }

    /// Sum of absolute coefficient values, as `f64`.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms.values().map(|c| c.to_f64().abs()).sum()
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                actual: len,
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &[S]) -> Result<S> {
        self.check_dim(x.len())?;
        let degree = self.degree as usize;
        let powers: Vec<Vec<S>> = x
            .iter()
            .map(|xi| {
                let mut row = Vec::with_capacity(degree + 1);
                row.push(S::one());
                for k in 0..degree {
                    let next = row[k].clone() * xi.clone();
                    row.push(next);
                }
                row
            })
            .collect();
        let mut total = S::zero();
        for (exp, coef) in &self.terms {
            let mut term = coef.clone();
            for (i, &a) in exp.powers().iter().enumerate() {
                if a > 0 {
                    term = term * powers[i][a as usize].clone();
                }
            }
            total = total + term;
        }
        Ok(total)
    }

    pub fn scale(&self, factor: &S) -> Self {
        if factor.is_zero() {
            return Self::zero(self.num_vars, self.degree);
        }
        Polynomial {
            num_vars: self.num_vars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.clone() * factor.clone()))
                .collect(),
        }
    }

    /// Sum of two polynomials of equal degree.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.num_vars)?;
        if self.degree != other.degree {
            return Err(Error::InvalidArgument(alloc::format!(
                "cannot add degree {} and degree {} polynomials",
                self.degree,
                other.degree
            )));
        }
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            accumulate(&mut terms, e.clone(), c.clone());
        }
        Ok(Polynomial {
            num_vars: self.num_vars,
            degree: self.degree,
            terms,
        })
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.num_vars)?;
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                accumulate(&mut terms, ea.plus(eb), ca.clone() * cb.clone());
            }
        }
        Ok(Polynomial {
            num_vars: self.num_vars,
            degree: self.degree + other.degree,
            terms,
        })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.num_vars, S::one());
        for _ in 0..k {
            out = out.multiply(self).expect("same dimension");
        }
        out
    }

    /// Partial derivative with respect to `x_index`.
    pub fn partial(&self, index: usize) -> Self {
        let degree = self.degree.saturating_sub(1);
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let a = e.0[index];
            if a == 0 {
                continue;
            }
            let mut powers = e.0.clone();
            powers[index] -= 1;
            accumulate(
                &mut terms,
                Exponent(powers),
                c.clone() * S::from_i64(a as i64),
            );
        }
        Polynomial {
            num_vars: self.num_vars,
            degree,
            terms,
        }
    }

    /// First directional derivative `D_e p = sum_i e_i dp/dx_i`.
    fn derivative_once(&self, e: &[S]) -> Self {
        let degree = self.degree.saturating_sub(1);
        let mut terms = BTreeMap::new();
        for (exp, c) in &self.terms {
            for (i, ei) in e.iter().enumerate() {
                let a = exp.0[i];
                if a == 0 || ei.is_zero() {
                    continue;
                }
                let mut powers = exp.0.clone();
                powers[i] -= 1;
                accumulate(
                    &mut terms,
                    Exponent(powers),
                    c.clone() * ei.clone() * S::from_i64(a as i64),
                );
            }
        }
        Polynomial {
            num_vars: self.num_vars,
            degree,
            terms,
        }
    }

    /// `D_e^k p`, homogeneous of degree `deg - k`. Orders above the degree
    /// are rejected.
    pub fn directional_derivative(&self, e: &[S], k: usize) -> Result<Self> {
        self.check_dim(e.len())?;
        if k > self.degree() {
            return Err(Error::OrderTooLarge {
                order: k,
                degree: self.degree(),
            });
        }
        let mut out = self.clone();
        for _ in 0..k {
            out = out.derivative_once(e);
        }
        Ok(out)
    }

    /// All of `D_e^0 p, ..., D_e^d p`.
    pub fn derivative_tower(&self, e: &[S]) -> Result<Vec<Self>> {
        self.check_dim(e.len())?;
        let mut tower = Vec::with_capacity(self.degree() + 1);
        tower.push(self.clone());
        for k in 0..self.degree() {
            let next = tower[k].derivative_once(e);
            tower.push(next);
        }
        Ok(tower)
    }

    pub fn gradient(&self, x: &[S]) -> Result<Vec<S>> {
        self.check_dim(x.len())?;
        (0..self.num_vars)
            .map(|i| self.partial(i).evaluate(x))
            .collect()
    }

    pub fn hessian(&self, x: &[S]) -> Result<Vec<Vec<S>>> {
        self.check_dim(x.len())?;
        let partials: Vec<Self> = (0..self.num_vars).map(|i| self.partial(i)).collect();
        let mut h = vec![vec![S::zero(); self.num_vars]; self.num_vars];
        for i in 0..self.num_vars {
            for j in i..self.num_vars {
                let v = partials[i].partial(j).evaluate(x)?;
                h[i][j] = v.clone();
                h[j][i] = v;
            }
        }
        Ok(h)
    }

    /// Coefficients `a_0..a_d` of `t -> p(x + t e)`, with
    /// `a_k = D_e^k p(x) / k!`.
    pub fn line_restriction(&self, x: &[S], e: &[S]) -> Result<UnivariatePoly<S>> {
        self.check_dim(x.len())?;
        let tower = self.derivative_tower(e)?;
        let coeffs = tower
            .iter()
            .enumerate()
            .map(|(k, dk)| Ok(dk.evaluate(x)? / S::factorial(k)))
            .collect::<Result<Vec<S>>>()?;
        Ok(UnivariatePoly::new(coeffs))
    }

    /// Substitutes `x = sum_j u_j columns[j]`, giving a polynomial in
    /// `columns.len()` variables of the same degree.
    pub fn compose_linear(&self, columns: &[Vec<S>]) -> Result<Self> {
        for c in columns {
            self.check_dim(c.len())?;
        }
        let k = columns.len();
        let forms: Vec<Self> = (0..self.num_vars)
            .map(|i| {
                let coeffs: Vec<S> = columns.iter().map(|c| c[i].clone()).collect();
                Self::linear(&coeffs)
            })
            .collect();
        let mut cache: Vec<Vec<Self>> = forms
            .into_iter()
            .map(|f| vec![Self::constant(k, S::one()), f])
            .collect();
        let mut out = Self::zero(k, self.degree);
        for (exp, coef) in &self.terms {
            let mut term = Self::constant(k, coef.clone());
            for (i, &a) in exp.powers().iter().enumerate() {
                if a == 0 {
                    continue;
                }
                while cache[i].len() <= a as usize {
                    let next = cache[i].last().unwrap().multiply(&cache[i][1])?;
                    cache[i].push(next);
                }
                term = term.multiply(&cache[i][a as usize])?;
            }
            for (e, c) in term.terms {
                accumulate(&mut out.terms, e, c);
            }
        }
        Ok(out)
    }

    /// `q(u) = p(B u)` for the basis `B` of a subspace.
    pub fn subspace_restriction(&self, subspace: &Subspace<S>) -> Result<Self> {
        self.check_dim(subspace.ambient_dim())?;
        self.compose_linear(subspace.basis())
    }

    pub fn map_coefficients<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            accumulate(&mut terms, e.clone(), f(c));
        }
        Polynomial {
            num_vars: self.num_vars,
            degree: self.degree,
            terms,
        }
    }

    pub fn to_float(&self) -> Polynomial<f64> {
        self.map_coefficients(|c| c.to_f64())
    }
}

fn accumulate<S: Scalar>(map: &mut BTreeMap<Exponent, S>, exp: Exponent, coef: S) {
    if coef.is_zero() {
        return;
    }
    match map.remove(&exp) {
        Some(existing) => {
            let sum = existing + coef;
            if !sum.is_zero() {
                map.insert(exp, sum);
            }
        }
        None => {
            map.insert(exp, coef);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn rv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| r(x)).collect()
    }

    fn product3() -> Polynomial<Rational> {
        Polynomial::new(3, 3, [(vec![1, 1, 1], r(1))]).unwrap()
    }

    fn lorentz3() -> Polynomial<Rational> {
        Polynomial::new(
            3,
            2,
            [
                (vec![2, 0, 0], r(1)),
                (vec![0, 2, 0], r(-1)),
                (vec![0, 0, 2], r(-1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(product3().evaluate(&rv(&[1, 2, 3])).unwrap(), r(6));
        assert_eq!(product3().evaluate(&rv(&[0, 0, 0])).unwrap(), r(0));
        assert_eq!(lorentz3().evaluate(&rv(&[2, 1, 1])).unwrap(), r(2));
        assert!(matches!(
            product3().evaluate(&rv(&[1, 2])),
            Err(Error::DimensionMismatch {
                expected: 3,
                actual: 2
            })
        ));
    }

    #[test]
    fn rejects_non_homogeneous_terms() {
        let err = Polynomial::new(2, 2, [(vec![2, 0], r(1)), (vec![1, 0], r(1))]).unwrap_err();
        assert!(matches!(err, Error::NotHomogeneous { actual: 1, .. }));
    }

    #[test]
    fn cancellation_drops_terms() {
        let p = Polynomial::new(2, 2, [(vec![2, 0], r(1)), (vec![2, 0], r(-1))]).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn multiply_examples() {
        let x1 = Polynomial::<Rational>::variable(2, 0);
        let x2 = Polynomial::<Rational>::variable(2, 1);
        let prod = x1.multiply(&x2).unwrap();
        assert_eq!(prod, Polynomial::new(2, 2, [(vec![1, 1], r(1))]).unwrap());

        let one = Polynomial::constant(2, r(1));
        assert_eq!(prod.multiply(&one).unwrap(), prod);

        let sum = Polynomial::linear(&rv(&[1, 1]));
        let diff = Polynomial::linear(&rv(&[1, -1]));
        let expected = Polynomial::new(2, 2, [(vec![2, 0], r(1)), (vec![0, 2], r(-1))]).unwrap();
        assert_eq!(sum.multiply(&diff).unwrap(), expected);
    }

    #[test]
    fn directional_derivative_examples() {
        let e = rv(&[1, 1, 1]);
        let d1 = product3().directional_derivative(&e, 1).unwrap();
        let e2 = Polynomial::new(
            3,
            2,
            [
                (vec![1, 1, 0], r(1)),
                (vec![1, 0, 1], r(1)),
                (vec![0, 1, 1], r(1)),
            ],
        )
        .unwrap();
        assert_eq!(d1, e2);
        let d3 = product3().directional_derivative(&e, 3).unwrap();
        assert_eq!(d3, Polynomial::constant(3, r(6)));
        assert_eq!(
            product3().directional_derivative(&e, 0).unwrap(),
            product3()
        );
        let dl = lorentz3()
            .directional_derivative(&rv(&[1, 0, 0]), 1)
            .unwrap();
        assert_eq!(dl, Polynomial::linear(&rv(&[2, 0, 0])));
        assert!(matches!(
            product3().directional_derivative(&e, 4),
            Err(Error::OrderTooLarge {
                order: 4,
                degree: 3
            })
        ));
    }

    #[test]
    fn line_restriction_examples() {
        let e = rv(&[1, 1, 1]);
        let at_zero = product3().line_restriction(&rv(&[0, 0, 0]), &e).unwrap();
        assert_eq!(at_zero.coeffs(), &rv(&[0, 0, 0, 1])[..]);
        let at_ones = product3().line_restriction(&rv(&[1, 1, 1]), &e).unwrap();
        assert_eq!(at_ones.coeffs(), &rv(&[1, 3, 3, 1])[..]);
        let lorentz = lorentz3()
            .line_restriction(&rv(&[0, 1, 0]), &rv(&[1, 0, 0]))
            .unwrap();
        assert_eq!(lorentz.coeffs(), &rv(&[-1, 0, 1])[..]);
    }

    #[test]
    fn subspace_restriction_examples() {
        let plane = Subspace::new(3, vec![rv(&[1, 1, 0]), rv(&[0, 0, 1])]).unwrap();
        let q = product3().subspace_restriction(&plane).unwrap();
        assert_eq!(q, Polynomial::new(2, 3, [(vec![2, 1], r(1))]).unwrap());

        let identity = Subspace::<Rational>::identity(3);
        assert_eq!(
            product3().subspace_restriction(&identity).unwrap(),
            product3()
        );

        let line = Subspace::new(3, vec![rv(&[1, 1, 0])]).unwrap();
        let zero = lorentz3().subspace_restriction(&line).unwrap();
        assert!(zero.is_zero());
        assert_eq!(zero.num_vars(), 1);
        assert_eq!(zero.degree(), 2);
    }

    #[test]
    fn terms_iterate_leading_first() {
        let p = lorentz3();
        let exps: Vec<&[u32]> = p.terms().map(|(e, _)| e).collect();
        assert_eq!(
            exps,
            vec![&[2u32, 0, 0][..], &[0, 2, 0][..], &[0, 0, 2][..]]
        );
    }

    #[test]
    fn gradient_and_hessian() {
        let g = lorentz3().gradient(&rv(&[1, 1, 0])).unwrap();
        assert_eq!(g, rv(&[2, -2, 0]));
        let h = lorentz3().hessian(&rv(&[0, 0, 0])).unwrap();
        assert_eq!(h[0][0], r(2));
        assert_eq!(h[1][1], r(-2));
        assert_eq!(h[0][1], r(0));
    }
}
