use std::collections::BTreeMap;
use std::fmt;

use crate::fq::{FieldSpec, FqElem};
use crate::{Error, Result};

/// Dense polynomial over F_q, constant term first, no trailing zeros.
/// Crate-internal workhorse behind [`MonicPoly`].
#[derive(Clone, PartialEq, Eq)]
pub(crate) struct Poly {
    pub field: FieldSpec,
    pub coeffs: Vec<FqElem>,
}

impl Poly {
    pub fn zero(field: &FieldSpec) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: vec![],
        }
    }

    pub fn constant(field: &FieldSpec, c: FqElem) -> Poly {
        let coeffs = if c.is_zero() { vec![] } else { vec![c] };
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_coeffs(field: &FieldSpec, mut coeffs: Vec<FqElem>) -> Poly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports None.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> FqElem {
        *self.coeffs.last().expect("lead of zero polynomial")
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).copied().unwrap_or(FqElem::ZERO);
            let b = other.coeffs.get(i).copied().unwrap_or(FqElem::ZERO);
            out.push(f.add(a, b));
        }
        Poly::from_coeffs(f, out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).copied().unwrap_or(FqElem::ZERO);
            let b = other.coeffs.get(i).copied().unwrap_or(FqElem::ZERO);
            out.push(f.sub(a, b));
        }
        Poly::from_coeffs(f, out)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![FqElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(f, out)
    }

    pub fn scale(&self, c: FqElem) -> Poly {
        let f = &self.field;
        Poly::from_coeffs(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divrem(&self, div: &Poly) -> (Poly, Poly) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let f = &self.field;
        let dd = div.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Poly::zero(f), self.clone());
        }
        let lead_inv = f.inv(div.lead());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![FqElem::ZERO; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = f.mul(rem[k], lead_inv);
            quot[k - dd] = c;
            if c.is_zero() {
                continue;
            }
            for (i, &dc) in div.coeffs.iter().enumerate() {
                rem[k - dd + i] = f.sub(rem[k - dd + i], f.mul(c, dc));
            }
        }
        rem.truncate(dd);
        (Poly::from_coeffs(f, quot), Poly::from_coeffs(f, rem))
    }

    pub fn rem(&self, div: &Poly) -> Poly {
        self.divrem(div).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let li = self.field.inv(a.lead());
            a.scale(li)
        }
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let mut out = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().skip(1) {
            let mut acc = FqElem::ZERO;
            // i * c computed by repeated addition mod p; i < q^d stays tiny here
            let mult = (i as u64) % f.p();
            let scalar = f.from_residue(mult);
            acc = f.add(acc, f.mul(scalar, c));
            out.push(acc);
        }
        Poly::from_coeffs(f, out)
    }

    pub fn eval(&self, x: FqElem) -> FqElem {
        let f = &self.field;
        let mut acc = FqElem::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    /// self^n modulo `m`.
    pub fn powmod(&self, mut n: u64, m: &Poly) -> Poly {
        let f = &self.field;
        let mut base = self.rem(m);
        let mut acc = Poly::constant(f, FqElem::ONE);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            n >>= 1;
        }
        acc
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{}", c.index()),
                1 => format!("{}*t", c.index()),
                _ => format!("{}*t^{}", c.index(), i),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// A monic polynomial over F_q: leading coefficient 1, degree >= 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonicPoly {
    pub(crate) inner: Poly,
}

impl MonicPoly {
    /// Builds from coefficients, constant term first, leading coefficient 1.
    pub fn new(field: &FieldSpec, coeffs: Vec<FqElem>) -> Result<MonicPoly> {
        if coeffs.is_empty() || *coeffs.last().unwrap() != FqElem::ONE {
            return Err(Error::InvalidInput(
                "monic polynomial requires leading coefficient 1".into(),
            ));
        }
        Ok(MonicPoly {
            inner: Poly {
                field: field.clone(),
                coeffs,
            },
        })
    }

    /// Builds from integer element indices, constant term first.
    pub fn from_indices(field: &FieldSpec, idx: &[u64]) -> Result<MonicPoly> {
        let coeffs = idx.iter().map(|&i| field.elem(i)).collect();
        MonicPoly::new(field, coeffs)
    }

    /// The polynomial t.
    pub fn t(field: &FieldSpec) -> MonicPoly {
        MonicPoly::new(field, vec![FqElem::ZERO, FqElem::ONE]).unwrap()
    }

    pub fn field(&self) -> &FieldSpec {
        &self.inner.field
    }

    pub fn degree(&self) -> usize {
        self.inner.coeffs.len() - 1
    }

    /// Coefficients, constant term first, leading 1 included.
    pub fn coeffs(&self) -> &[FqElem] {
        &self.inner.coeffs
    }

    /// Element-index encoding of the coefficients (the JSON wire form).
    pub fn indices(&self) -> Vec<u64> {
        self.inner.coeffs.iter().map(|c| c.index() as u64).collect()
    }

    pub fn eval(&self, x: FqElem) -> FqElem {
        self.inner.eval(x)
    }

    pub fn mul(&self, other: &MonicPoly) -> MonicPoly {
        MonicPoly {
            inner: self.inner.mul(&other.inner),
        }
    }

    /// True iff gcd(f, f') is constant and f is not a p-th power.
    pub fn is_squarefree(&self) -> bool {
        if self.degree() == 0 {
            return true;
        }
        let d = self.inner.derivative();
        if d.is_zero() {
            return false; // a p-th power
        }
        self.inner.gcd(&d).degree() == Some(0)
    }

    /// Degree profile of the irreducible factorization, with multiplicity.
    ///
    /// Square-free decomposition by repeated gcd with the derivative (taking
    /// p-th roots when the derivative vanishes), then distinct-degree
    /// splitting of each square-free piece.
    pub fn factor_degree_profile(&self) -> FactorProfile {
        let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
        accumulate_profile(&self.inner, 1, &mut counts);
        FactorProfile {
            counts,
            total_degree: self.degree() as u64,
        }
    }

    /// True iff self is irreducible over F_q.
    pub fn is_irreducible(&self) -> bool {
        let n = self.degree();
        if n == 0 {
            return false;
        }
        let profile = self.factor_degree_profile();
        profile.counts.len() == 1 && profile.counts.get(&(n as u32)) == Some(&1)
    }
}

/// f is assumed monic. Adds `mult` copies of each irreducible factor's degree.
fn accumulate_profile(f: &Poly, mult: u64, counts: &mut BTreeMap<u32, u64>) {
    if f.degree() == Some(0) || f.is_zero() {
        return;
    }
    let deriv = f.derivative();
    if deriv.is_zero() {
        // f = h(t^p) = (pth_root)^p in characteristic p
        let root = pth_root(f);
        accumulate_profile(&root, mult * f.field.p(), counts);
        return;
    }
    let g = f.gcd(&deriv);
    if g.degree() == Some(0) {
        distinct_degree_profile(f, mult, counts);
        return;
    }
    let (sq, r) = f.divrem(&g);
    debug_assert!(r.is_zero());
    distinct_degree_profile(&sq, mult, counts);
    accumulate_profile(&g, mult, counts);
}

/// p-th root of a polynomial with zero derivative: coefficients at indices
/// divisible by p, each mapped through the inverse Frobenius c -> c^(q/p).
fn pth_root(f: &Poly) -> Poly {
    let field = &f.field;
    let p = field.p();
    let inv_frob_exp = field.q() / p; // c^(q/p) is the p-th root of c in F_q
    let mut out = Vec::new();
    for (i, &c) in f.coeffs.iter().enumerate() {
        if (i as u64) % p == 0 {
            out.push(field.pow(c, inv_frob_exp));
        } else {
            debug_assert!(c.is_zero());
        }
    }
    Poly::from_coeffs(field, out)
}

/// Distinct-degree splitting of a square-free monic polynomial: strip out the
/// product of all degree-d irreducible factors as gcd(f, t^(q^d) - t).
fn distinct_degree_profile(f: &Poly, mult: u64, counts: &mut BTreeMap<u32, u64>) {
    let field = &f.field;
    let q = field.q();
    let mut f = {
        let li = field.inv(f.lead());
        f.scale(li)
    };
    let t = Poly::from_coeffs(field, vec![FqElem::ZERO, FqElem::ONE]);
    let mut frob = t.clone(); // t^(q^d) mod f, starting at d = 0
    let mut d = 1u32;
    while f.degree().unwrap_or(0) >= 1 {
        if 2 * (d as usize) > f.degree().unwrap() {
            // what remains is a single irreducible
            let deg = f.degree().unwrap() as u32;
            *counts.entry(deg).or_insert(0) += mult;
            break;
        }
        // advance Frobenius one step: frob <- frob^q mod f
        frob = frob.rem(&f).powmod(q, &f);
        let g = f.gcd(&frob.sub(&t));
        if g.degree().unwrap_or(0) > 0 {
            let k = g.degree().unwrap() as u32 / d;
            *counts.entry(d).or_insert(0) += mult * k as u64;
            let (next, r) = f.divrem(&g);
            debug_assert!(r.is_zero());
            f = next;
        }
        d += 1;
    }
}

/// Map d -> number of degree-d monic irreducible factors, with multiplicity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactorProfile {
    counts: BTreeMap<u32, u64>,
    total_degree: u64,
}

impl FactorProfile {
    pub fn count(&self, d: u32) -> u64 {
        self.counts.get(&d).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<u32, u64> {
        &self.counts
    }

    /// Sum of d * m_d, which equals the degree of the profiled polynomial.
    pub fn weighted_degree(&self) -> u64 {
        self.counts.iter().map(|(&d, &m)| d as u64 * m).sum()
    }

    /// Restriction to a set of tracked degrees, zero-filled.
    pub fn restrict(&self, tracked: &[u32]) -> Vec<(u32, u64)> {
        let mut t: Vec<u32> = tracked.to_vec();
        t.sort_unstable();
        t.dedup();
        t.into_iter().map(|d| (d, self.count(d))).collect()
    }
}
