//! Truncated power series in one variable u whose coefficients are sparse
//! polynomials over exact big rationals in finitely many marker variables.
//!
//! All arithmetic is exact; truncation order is fixed at construction and
//! mixing orders is an error rather than an implicit min.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, One, Zero};
use serde_json::json;

use crate::{Error, Result};

/// A monomial in the marker variables x_d: sparse map from marker id to a
/// positive exponent. The empty monomial is the constant.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct MarkerMonomial {
    exponents: Vec<(u32, u32)>, // sorted by marker id, exponents > 0
}

impl MarkerMonomial {
    pub fn constant() -> MarkerMonomial {
        MarkerMonomial::default()
    }

    pub fn marker(d: u32) -> MarkerMonomial {
        MarkerMonomial {
            exponents: vec![(d, 1)],
        }
    }

    pub fn from_exponents(mut exps: Vec<(u32, u32)>) -> MarkerMonomial {
        exps.retain(|&(_, e)| e > 0);
        exps.sort_unstable();
        MarkerMonomial { exponents: exps }
    }

    pub fn is_constant(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponent(&self, d: u32) -> u32 {
        self.exponents
            .iter()
            .find(|&&(id, _)| id == d)
            .map_or(0, |&(_, e)| e)
    }

    pub fn exponents(&self) -> &[(u32, u32)] {
        &self.exponents
    }

    pub fn mul(&self, other: &MarkerMonomial) -> MarkerMonomial {
        let mut out: BTreeMap<u32, u32> = self.exponents.iter().copied().collect();
        for &(id, e) in &other.exponents {
            *out.entry(id).or_insert(0) += e;
        }
        MarkerMonomial {
            exponents: out.into_iter().collect(),
        }
    }
}

impl fmt::Display for MarkerMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        let terms: Vec<String> = self
            .exponents
            .iter()
            .map(|&(d, e)| {
                if e == 1 {
                    format!("x{d}")
                } else {
                    format!("x{d}^{e}")
                }
            })
            .collect();
        write!(f, "{}", terms.join("*"))
    }
}

/// Sparse polynomial over big rationals in the marker variables.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MultiPoly {
    terms: BTreeMap<MarkerMonomial, BigRational>,
}

impl MultiPoly {
    pub fn zero() -> MultiPoly {
        MultiPoly::default()
    }

    pub fn constant(c: BigRational) -> MultiPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(MarkerMonomial::constant(), c);
        }
        MultiPoly { terms }
    }

    pub fn one() -> MultiPoly {
        MultiPoly::constant(BigRational::one())
    }

    pub fn term(m: MarkerMonomial, c: BigRational) -> MultiPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff no marker variables occur.
    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|m| m.is_constant())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MarkerMonomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &MarkerMonomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = out.entry(m.clone()).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                out.remove(m);
            }
        }
        MultiPoly { terms: out }
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out: BTreeMap<MarkerMonomial, BigRational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let entry = out.entry(m.clone()).or_insert_with(BigRational::zero);
                *entry += c1 * c2;
                if entry.is_zero() {
                    out.remove(&m);
                }
            }
        }
        MultiPoly { terms: out }
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Sum of all coefficients, i.e. the evaluation at every marker = 1.
    pub fn eval_all_ones(&self) -> BigRational {
        self.terms.values().sum()
    }
}

/// Truncated power series in u: coefficients of u^0 ... u^order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries {
    order: usize,
    coeffs: Vec<MultiPoly>,
}

impl TruncSeries {
    pub fn zero(order: usize) -> TruncSeries {
        TruncSeries {
            order,
            coeffs: vec![MultiPoly::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> TruncSeries {
        let mut s = TruncSeries::zero(order);
        s.coeffs[0] = MultiPoly::one();
        s
    }

    pub fn from_coeffs(order: usize, mut coeffs: Vec<MultiPoly>) -> TruncSeries {
        coeffs.resize(order + 1, MultiPoly::zero());
        coeffs.truncate(order + 1);
        TruncSeries { order, coeffs }
    }

    /// Rational-coefficient series from plain numbers.
    pub fn from_rationals(order: usize, values: &[BigRational]) -> TruncSeries {
        let coeffs = values
            .iter()
            .map(|v| MultiPoly::constant(v.clone()))
            .collect();
        TruncSeries::from_coeffs(order, coeffs)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, n: usize) -> &MultiPoly {
        &self.coeffs[n]
    }

    pub fn set_coeff(&mut self, n: usize, p: MultiPoly) {
        self.coeffs[n] = p;
    }

    fn check_order(&self, other: &TruncSeries) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(TruncSeries {
            order: self.order,
            coeffs,
        })
    }

    pub fn mul(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_order(other)?;
        let mut coeffs = vec![MultiPoly::zero(); self.order + 1];
        for i in 0..=self.order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=self.order - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&self.coeffs[i].mul(&other.coeffs[j]));
            }
        }
        Ok(TruncSeries {
            order: self.order,
            coeffs,
        })
    }

    /// self^m by binary exponentiation; m may be huge (e.g. counts of
    /// irreducible polynomials).
    pub fn pow(&self, m: &BigUint) -> TruncSeries {
        let mut acc = TruncSeries::one(self.order);
        let mut base = self.clone();
        let bits = m.bits();
        for i in 0..bits {
            if m.bit(i) {
                acc = acc.mul(&base).expect("orders agree");
            }
            if i + 1 < bits {
                base = base.mul(&base).expect("orders agree");
            }
        }
        acc
    }

    /// exp(self), requiring a zero constant term. Uses the recurrence
    /// g_0 = 1, n g_n = sum_{k=1..n} k a_k g_{n-k}.
    pub fn exp(&self) -> Result<TruncSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut out = vec![MultiPoly::zero(); self.order + 1];
        out[0] = MultiPoly::one();
        for n in 1..=self.order {
            let mut acc = MultiPoly::zero();
            for k in 1..=n {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                let scaled = self.coeffs[k].scale(&BigRational::from(BigInt::from(k)));
                acc = acc.add(&scaled.mul(&out[n - k]));
            }
            out[n] = acc.scale(&(BigRational::one() / BigRational::from(BigInt::from(n))));
        }
        Ok(TruncSeries {
            order: self.order,
            coeffs: out,
        })
    }

    /// Multiplicative inverse, requiring constant term exactly 1.
    pub fn geometric_inverse(&self) -> Result<TruncSeries> {
        if self.coeffs[0] != MultiPoly::one() {
            return Err(Error::ConstantTermNotOne);
        }
        let mut out = vec![MultiPoly::zero(); self.order + 1];
        out[0] = MultiPoly::one();
        for n in 1..=self.order {
            let mut acc = MultiPoly::zero();
            for k in 1..=n {
                acc = acc.add(&self.coeffs[k].mul(&out[n - k]));
            }
            out[n] = acc.neg();
        }
        Ok(TruncSeries {
            order: self.order,
            coeffs: out,
        })
    }

    /// Exact coefficient of u^n * m.
    pub fn coefficient(&self, n: usize, m: &MarkerMonomial) -> Result<BigRational> {
        if n > self.order {
            return Err(Error::IndexOutOfRange {
                index: n,
                order: self.order,
            });
        }
        Ok(self.coeffs[n].coefficient(m))
    }

    /// Partial sum c_0 + ... + c_n of a marker-free series, i.e. the u^n
    /// coefficient of self / (1 - u).
    pub fn partial_sum_limit(&self, n: usize) -> Result<BigRational> {
        if n > self.order {
            return Err(Error::IndexOutOfRange {
                index: n,
                order: self.order,
            });
        }
        let mut sum = BigRational::zero();
        for c in &self.coeffs[..=n] {
            if !c.is_rational() {
                return Err(Error::MarkerCoefficients);
            }
            sum += c.coefficient(&MarkerMonomial::constant());
        }
        Ok(sum)
    }

    /// JSON dump for golden-file tests:
    /// {"order": N, "coeffs": [[["monomial", "num/den"], ...], ...]}.
    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|poly| {
                let terms: Vec<serde_json::Value> = poly
                    .terms()
                    .map(|(m, c)| json!([m.to_string(), format!("{}/{}", c.numer(), c.denom())]))
                    .collect();
                json!(terms)
            })
            .collect();
        json!({"order": self.order, "coeffs": coeffs})
    }
}

/// 1 - u at the given order; handy building block.
pub fn one_minus_u(order: usize) -> TruncSeries {
    let mut s = TruncSeries::one(order);
    if order >= 1 {
        s.set_coeff(1, MultiPoly::constant(-BigRational::one()));
    }
    s
}

/// u^k with rational coefficient c.
pub fn monomial_u(order: usize, k: usize, c: BigRational) -> TruncSeries {
    let mut s = TruncSeries::zero(order);
    if k <= order {
        s.set_coeff(k, MultiPoly::constant(c));
    }
    s
}
