//! Exact algebra on sums of `c * y^p * exp(a * y^q)` terms.
//!
//! The class is closed under `d/dy`, under the conformable derivative
//! `y^(1-alpha) d/dy`, and under multiplication within one exponential
//! family, which is all the eigenfunction machinery needs.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;

use crate::conformable::FractionalOrder;
use crate::error::{Error, Result};

/// Relative tolerance below which a merged coefficient counts as zero.
pub const COEFF_TOLERANCE: f64 = 1e-14;
/// Tolerance for treating two exponents as equal.
pub const POWER_TOLERANCE: f64 = 1e-12;

/// One term `coeff * y^power * exp(exp_coeff * y^exp_power)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyExpTerm {
    pub coeff: Complex64,
    pub power: f64,
    pub exp_coeff: f64,
    pub exp_power: f64,
}

impl PolyExpTerm {
    pub fn new(coeff: Complex64, power: f64, exp_coeff: f64, exp_power: f64) -> Result<Self> {
        if !(exp_power > 0.0) || !exp_power.is_finite() {
            return Err(Error::Domain(format!("exponent power q must be > 0, got {exp_power}")));
        }
        if !(coeff.re.is_finite() && coeff.im.is_finite() && power.is_finite() && exp_coeff.is_finite()) {
            return Err(Error::Domain("term parameters must be finite".into()));
        }
        Ok(Self::canonical(coeff, power, exp_coeff, exp_power))
    }

    // a = 0 makes q irrelevant; pin it so such terms merge.
    fn canonical(coeff: Complex64, power: f64, exp_coeff: f64, exp_power: f64) -> Self {
        let exp_power = if exp_coeff == 0.0 { 1.0 } else { exp_power };
        Self {
            coeff,
            power,
            exp_coeff,
            exp_power,
        }
    }

    /// `y^power * exp(exp_coeff * y^exp_power)` without the coefficient.
    fn basis(&self, y: f64) -> f64 {
        let e = if self.exp_coeff == 0.0 {
            1.0
        } else {
            (self.exp_coeff * y.powf(self.exp_power)).exp()
        };
        pow(y, self.power) * e
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        self.exp_coeff
            .total_cmp(&other.exp_coeff)
            .then(self.exp_power.total_cmp(&other.exp_power))
            .then(self.power.total_cmp(&other.power))
    }

    fn same_key(&self, other: &Self) -> bool {
        close(self.exp_coeff, other.exp_coeff)
            && close(self.exp_power, other.exp_power)
            && close(self.power, other.power)
    }
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= POWER_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

fn is_integer(x: f64) -> bool {
    x.fract() == 0.0
}

// Integer powers go through powi so that y^0 = 1 and 0^n behave classically.
fn pow(y: f64, p: f64) -> f64 {
    if is_integer(p) && p.abs() < i32::MAX as f64 {
        y.powi(p as i32)
    } else {
        y.powf(p)
    }
}

/// A finite sum of [`PolyExpTerm`]s, kept merged and sorted.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PolyExpSum {
    terms: Vec<PolyExpTerm>,
}

impl PolyExpSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::from_terms(vec![PolyExpTerm::canonical(Complex64::new(c, 0.0), 0.0, 0.0, 1.0)])
    }

    /// Single real-coefficient term `c * y^p * exp(a * y^q)`.
    pub fn term(c: f64, p: f64, a: f64, q: f64) -> Result<Self> {
        Self::complex_term(Complex64::new(c, 0.0), p, a, q)
    }

    pub fn complex_term(c: Complex64, p: f64, a: f64, q: f64) -> Result<Self> {
        Ok(Self::from_terms(vec![PolyExpTerm::new(c, p, a, q)?]))
    }

    /// Builds a canonical sum: like terms merged, zeros dropped, sorted.
    pub fn from_terms(mut terms: Vec<PolyExpTerm>) -> Self {
        terms.retain(|t| t.coeff != Complex64::new(0.0, 0.0));
        terms.sort_by(PolyExpTerm::key_cmp);
        let mut merged: Vec<PolyExpTerm> = Vec::with_capacity(terms.len());
        let mut scales: Vec<f64> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.iter().rposition(|m| m.same_key(&t)) {
                Some(i) => {
                    scales[i] = scales[i].max(t.coeff.norm());
                    merged[i].coeff += t.coeff;
                }
                None => {
                    scales.push(t.coeff.norm());
                    merged.push(t);
                }
            }
        }
        let merged = merged
            .into_iter()
            .zip(scales)
            .filter(|(t, s)| t.coeff.norm() > COEFF_TOLERANCE * s)
            .map(|(t, _)| t)
            .collect();
        Self { terms: merged }
    }

    #[inline]
    pub fn terms(&self) -> &[PolyExpTerm] {
        &self.terms
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Numerical value at `y`.
    pub fn evaluate(&self, y: f64) -> Result<Complex64> {
        if !y.is_finite() {
            return Err(Error::Domain(format!("cannot evaluate at y = {y}")));
        }
        if y <= 0.0 {
            let bad_power = self.terms.iter().any(|t| t.power < 0.0 || !is_integer(t.power));
            let bad_exp = y < 0.0
                && self
                    .terms
                    .iter()
                    .any(|t| t.exp_coeff != 0.0 && !is_integer(t.exp_power));
            if bad_power || bad_exp {
                return Err(Error::Domain(format!("y = {y} requires non-negative integer powers")));
            }
        }
        Ok(self.terms.iter().map(|t| t.coeff * t.basis(y)).sum())
    }

    /// Real part of [`evaluate`](Self::evaluate).
    pub fn evaluate_re(&self, y: f64) -> Result<f64> {
        self.evaluate(y).map(|v| v.re)
    }

    /// Exact `d/dy`.
    pub fn differentiate(&self) -> Self {
        let mut out = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            if t.power != 0.0 {
                out.push(PolyExpTerm::canonical(
                    t.coeff * t.power,
                    t.power - 1.0,
                    t.exp_coeff,
                    t.exp_power,
                ));
            }
            if t.exp_coeff != 0.0 {
                out.push(PolyExpTerm::canonical(
                    t.coeff * (t.exp_coeff * t.exp_power),
                    t.power + t.exp_power - 1.0,
                    t.exp_coeff,
                    t.exp_power,
                ));
            }
        }
        Self::from_terms(out)
    }

    /// `n`-fold derivative; `n = 0` returns a copy.
    pub fn differentiate_n(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |acc, _| acc.differentiate())
    }

    /// Exact conformable derivative `y^(1-alpha) d/dy`.
    pub fn conformable_diff(&self, order: FractionalOrder) -> Self {
        let a = order.value();
        let mut out = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            if t.power != 0.0 {
                out.push(PolyExpTerm::canonical(
                    t.coeff * t.power,
                    t.power - a,
                    t.exp_coeff,
                    t.exp_power,
                ));
            }
            if t.exp_coeff != 0.0 {
                out.push(PolyExpTerm::canonical(
                    t.coeff * (t.exp_coeff * t.exp_power),
                    t.power + t.exp_power - a,
                    t.exp_coeff,
                    t.exp_power,
                ));
            }
        }
        Self::from_terms(out)
    }

    /// Termwise product. Exponentials combine only within one `q` family.
    pub fn multiply(&self, rhs: &PolyExpSum) -> Result<Self> {
        let mut out = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for l in &self.terms {
            for r in &rhs.terms {
                let q = if l.exp_coeff == 0.0 {
                    r.exp_power
                } else if r.exp_coeff == 0.0 || close(l.exp_power, r.exp_power) {
                    l.exp_power
                } else {
                    return Err(Error::IncompatibleExponentials {
                        lhs: l.exp_power,
                        rhs: r.exp_power,
                    });
                };
                out.push(PolyExpTerm::canonical(
                    l.coeff * r.coeff,
                    l.power + r.power,
                    l.exp_coeff + r.exp_coeff,
                    q,
                ));
            }
        }
        Ok(Self::from_terms(out))
    }

    pub fn add(&self, rhs: &PolyExpSum) -> Self {
        Self::from_terms(self.terms.iter().chain(&rhs.terms).copied().collect())
    }

    pub fn sub(&self, rhs: &PolyExpSum) -> Self {
        self.add(&rhs.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| PolyExpTerm {
                    coeff: t.coeff * c,
                    ..*t
                })
                .collect(),
        )
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Complex conjugate (exponents are real).
    pub fn conj(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| PolyExpTerm {
                    coeff: t.coeff.conj(),
                    ..*t
                })
                .collect(),
        }
    }

    /// Termwise real part of the coefficients; equals `Re` pointwise for `y > 0`.
    pub fn re(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| PolyExpTerm {
                    coeff: Complex64::new(t.coeff.re, 0.0),
                    ..*t
                })
                .collect(),
        )
    }

    /// Termwise imaginary part, returned as real coefficients.
    pub fn im(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| PolyExpTerm {
                    coeff: Complex64::new(t.coeff.im, 0.0),
                    ..*t
                })
                .collect(),
        )
    }

    /// Coefficient of the term with exactly this `(p, a, q)` key, if any.
    pub fn coefficient(&self, power: f64, exp_coeff: f64, exp_power: f64) -> Complex64 {
        let probe = PolyExpTerm::canonical(Complex64::new(1.0, 0.0), power, exp_coeff, exp_power);
        self.terms.iter().filter(|t| t.same_key(&probe)).map(|t| t.coeff).sum()
    }

    /// Exponential coefficients present in the sum (sorted, deduplicated).
    pub fn exp_coeffs(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.terms.iter().map(|t| t.exp_coeff).collect();
        v.dedup_by(|a, b| close(*a, *b));
        v
    }
}

impl fmt::Display for PolyExpSum {
    /// Plain-text `c * y^p * exp(a*y^q)` clauses joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if t.coeff.im == 0.0 {
                write!(f, "{}", t.coeff.re)?;
            } else {
                write!(f, "({}{:+}i)", t.coeff.re, t.coeff.im)?;
            }
            write!(f, " * y^{} * exp({}*y^{})", t.power, t.exp_coeff, t.exp_power)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn t(cf: f64, p: f64, a: f64, q: f64) -> PolyExpSum {
        PolyExpSum::term(cf, p, a, q).unwrap()
    }

    fn assert_same(a: &PolyExpSum, b: &PolyExpSum) {
        assert_eq!(a.len(), b.len(), "{a}  vs  {b}");
        for (x, y) in a.terms().iter().zip(b.terms()) {
            assert!(
                (x.coeff - y.coeff).norm() <= 1e-12 * x.coeff.norm().max(1.0),
                "{a}  vs  {b}"
            );
            assert!(close(x.power, y.power) && close(x.exp_coeff, y.exp_coeff) && close(x.exp_power, y.exp_power));
        }
    }

    #[test]
    fn evaluate_examples() {
        let v = t(1.0, 2.0, -1.0, 2.0).evaluate(1.0).unwrap();
        assert!((v.re - (-1f64).exp()).abs() < 1e-15);
        assert!((v.re - 0.367879).abs() < 1e-6);
        assert_eq!(t(1.0, 0.0, 0.0, 1.0).evaluate(17.3).unwrap(), c(1.0));
        let v = t(2.0, 0.5, -2.0, 1.0).evaluate(4.0).unwrap();
        assert!((v.re - 4.0 * (-8f64).exp()).abs() < 1e-16);
        assert!((v.re - 0.0013418).abs() < 1e-7);
    }

    #[test]
    fn evaluate_domain() {
        assert!(t(1.0, 0.5, -1.0, 1.0).evaluate(0.0).is_err());
        assert!(t(1.0, -1.0, 0.0, 1.0).evaluate(-1.0).is_err());
        assert_eq!(t(1.0, 2.0, -1.0, 2.0).evaluate(0.0).unwrap(), c(0.0));
        assert_eq!(PolyExpSum::constant(3.0).evaluate(0.0).unwrap(), c(3.0));
        let v = t(1.0, 1.0, -1.0, 2.0).evaluate(-1.0).unwrap();
        assert!((v.re + (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn differentiate_examples() {
        assert_same(&t(1.0, 0.0, -1.0, 2.0).differentiate(), &t(-2.0, 1.0, -1.0, 2.0));
        let expect = t(0.5, -0.5, -2.0, 1.0).add(&t(-2.0, 0.5, -2.0, 1.0));
        assert_same(&t(1.0, 0.5, -2.0, 1.0).differentiate(), &expect);
        assert!(PolyExpSum::constant(1.0).differentiate().is_zero());
    }

    #[test]
    fn differentiate_n_examples() {
        let e = t(1.3, 0.4, -0.7, 1.5).add(&t(2.0, 3.0, 0.0, 1.0));
        assert_eq!(e.differentiate_n(0), e);
        // d/dy [y^(1-a) e^{-(F/a) y^{2a}}] = (1-a) y^{-a} e^{..} - 2F y^{a} e^{..}
        let (a, f) = (0.8, 1.3);
        let inner = t(1.0, 1.0 - a, -f / a, 2.0 * a);
        let expect = t(1.0 - a, -a, -f / a, 2.0 * a).add(&t(-2.0 * f, a, -f / a, 2.0 * a));
        assert_same(&inner.differentiate_n(1), &expect);
        let expect = t(4.0, 2.0, -1.0, 2.0).add(&t(-2.0, 0.0, -1.0, 2.0));
        assert_same(&t(1.0, 0.0, -1.0, 2.0).differentiate_n(2), &expect);
    }

    #[test]
    fn conformable_diff_examples() {
        let a = 0.6;
        let o = FractionalOrder::new(a).unwrap();
        assert_same(&t(1.0, a, 0.0, 1.0).conformable_diff(o), &PolyExpSum::constant(a));
        let f = 1.7;
        let e = t(1.0, 0.0, f / a, a);
        assert_same(&e.conformable_diff(o), &e.scale_re(f));
        assert!(PolyExpSum::constant(4.0).conformable_diff(o).is_zero());
    }

    #[test]
    fn multiply_examples() {
        let (a, f) = (0.9, 1.2);
        let g = t(1.0, a, f / (2.0 * a), 2.0 * a);
        let h = t(1.0, 0.0, -f / (2.0 * a), 2.0 * a);
        assert_same(&g.multiply(&h).unwrap(), &t(1.0, a, 0.0, 1.0));
        assert!(g.multiply(&PolyExpSum::zero()).unwrap().is_zero());
        let ye = t(1.0, 1.0, -1.0, 2.0);
        assert_same(&ye.multiply(&ye).unwrap(), &t(1.0, 2.0, -2.0, 2.0));
        assert!(matches!(
            t(1.0, 0.0, -1.0, 2.0).multiply(&t(1.0, 0.0, -1.0, 1.0)),
            Err(Error::IncompatibleExponentials { .. })
        ));
        // a = 0 on one side adapts to the other family
        assert!(t(2.0, 1.0, 0.0, 5.0).multiply(&t(1.0, 0.0, -1.0, 1.0)).is_ok());
    }

    #[test]
    fn cancellation_removes_terms() {
        let e = t(1.0, 2.0, -1.0, 2.0);
        assert!(e.sub(&e).is_zero());
        let nearly = t(1.0 + 1e-16, 2.0, -1.0, 2.0);
        assert!(nearly.sub(&e).is_zero());
    }

    #[test]
    fn display_format() {
        let e = t(2.0, 0.5, -2.0, 1.0);
        assert_eq!(e.to_string(), "2 * y^0.5 * exp(-2*y^1)");
        assert_eq!(PolyExpSum::zero().to_string(), "0");
        let z = PolyExpSum::complex_term(Complex64::new(1.0, -0.5), 1.0, 0.0, 1.0).unwrap();
        assert_eq!(z.to_string(), "(1-0.5i) * y^1 * exp(0*y^1)");
    }

    #[test]
    fn term_validation() {
        assert!(PolyExpSum::term(1.0, 1.0, -1.0, 0.0).is_err());
        assert!(PolyExpSum::term(f64::INFINITY, 1.0, -1.0, 1.0).is_err());
    }

    fn arb_sum() -> impl Strategy<Value = PolyExpSum> {
        let q = prop_oneof![Just(1.0), Just(1.6), Just(2.0)];
        (
            q,
            prop::collection::vec((-2.0..2.0f64, 0.0..3.0f64, -1.5..0.0f64), 1..4),
        )
            .prop_map(|(q, parts)| {
                PolyExpSum::from_terms(
                    parts
                        .into_iter()
                        .map(|(c, p, a)| PolyExpTerm::new(Complex64::new(c, 0.5 * c), p, a, q).unwrap())
                        .collect(),
                )
            })
    }

    proptest! {
        #[test]
        fn derivative_matches_finite_difference(e in arb_sum(), y in 0.5..3.0f64) {
            let h = 1e-5;
            let fd = (e.evaluate(y + h).unwrap() - e.evaluate(y - h).unwrap()) / (2.0 * h);
            let exact = e.differentiate().evaluate(y).unwrap();
            let scale = exact.norm().max(e.evaluate(y).unwrap().norm()).max(1e-3);
            prop_assert!((fd - exact).norm() / scale < 1e-6);
        }

        #[test]
        fn product_evaluates_pointwise(a in arb_sum(), b in arb_sum(), y in 0.5..3.0f64) {
            if let Ok(ab) = a.multiply(&b) {
                let lhs = ab.evaluate(y).unwrap();
                let rhs = a.evaluate(y).unwrap() * b.evaluate(y).unwrap();
                let scale = a.terms().iter().map(|t| t.coeff.norm() * t.basis(y)).sum::<f64>()
                    * b.terms().iter().map(|t| t.coeff.norm() * t.basis(y)).sum::<f64>();
                prop_assert!((lhs - rhs).norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE));
            }
        }

        #[test]
        fn repeated_derivatives_compose(e in arb_sum(), m in 0usize..3, k in 0usize..3) {
            prop_assert_eq!(e.differentiate_n(m + k), e.differentiate_n(m).differentiate_n(k));
        }

        #[test]
        fn differentiate_at_most_doubles(e in arb_sum()) {
            prop_assert!(e.differentiate().len() <= 2 * e.len());
            let o = FractionalOrder::new(0.7).unwrap();
            prop_assert!(e.conformable_diff(o).len() <= 2 * e.len());
        }
    }
}
