use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest field order for which arithmetic tables are built.
const TABLE_CAP: u64 = 1024;

/// An element of F_q, stored as an index into the field's element list.
///
/// The index encodes the coefficient vector of the element over F_p with the
/// constant term as the least significant base-p digit.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FqElem(pub(crate) u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct FieldInner {
    p: u64,
    e: u32,
    q: u64,
    /// Modulus of F_p[x]/(g), constant term first, length e+1, leading 1.
    modulus: Vec<u64>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// The field F_q = F_{p^e}, with q = p^e and arithmetic by lookup tables.
///
/// For e > 1 the field is realized as F_p[x]/(g) where g is the monic
/// irreducible of degree e whose coefficient vector, read as a base-p integer
/// with the constant term least significant, is minimal. This makes the
/// representation deterministic across runs.
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldInner>);

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec(p={}, e={})", self.0.p, self.0.e)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.e == other.0.e
    }
}
impl Eq for FieldSpec {}

/// Serialized form of a field: `{"p": int, "e": int}`.
#[derive(Serialize, Deserialize)]
pub struct FieldSpecRepr {
    pub p: u64,
    pub e: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// Dense polynomial helpers over Z/p, constant term first, used only while
// constructing the field (modulus search and multiplication tables).
mod zp {
    pub fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo monic `m`.
    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        while r.len() > dm {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dm;
            for (i, &c) in m.iter().enumerate() {
                let idx = i + shift;
                r[idx] = (r[idx] + p - (lead * c) % p) % p;
            }
            trim(&mut r);
            if r.is_empty() {
                break;
            }
        }
        r
    }
}

/// Finds the minimal monic irreducible of degree e over F_p (see
/// [`FieldSpec`] for the ordering). Trial division by all lower-degree monic
/// polynomials; fine at the field sizes this crate supports.
fn least_irreducible(p: u64, e: u32) -> Vec<u64> {
    let e = e as usize;
    if e == 1 {
        return vec![0, 1]; // x itself
    }
    let total = p.pow(e as u32);
    'cand: for enc in 0..total {
        // candidate x^e + c_{e-1}x^{e-1} + ... + c_0
        let mut cand = Vec::with_capacity(e + 1);
        let mut n = enc;
        for _ in 0..e {
            cand.push(n % p);
            n /= p;
        }
        cand.push(1);
        if cand[0] == 0 {
            continue; // divisible by x
        }
        // trial division by every monic polynomial of degree 1..=e/2
        for d in 1..=e / 2 {
            let count = p.pow(d as u32);
            for denc in 0..count {
                let mut div = Vec::with_capacity(d + 1);
                let mut m = denc;
                for _ in 0..d {
                    div.push(m % p);
                    m /= p;
                }
                div.push(1);
                if zp::rem(&cand, &div, p).is_empty() {
                    continue 'cand;
                }
            }
        }
        return cand;
    }
    unreachable!("an irreducible of every degree exists over F_p")
}

impl FieldSpec {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<FieldSpec> {
        FieldSpec::new(p, 1)
    }

    /// F_q for a prime power q, factored as p^e.
    pub fn new_from_q(q: u64) -> Result<FieldSpec> {
        if q < 2 {
            return Err(Error::InvalidInput(format!("{q} is not a prime power")));
        }
        let mut p = 2;
        while p * p <= q {
            if q % p == 0 {
                break;
            }
            p += 1;
        }
        if p * p > q {
            p = q; // q itself is prime
        }
        let mut e = 0;
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::InvalidInput(format!("{q} is not a prime power")));
        }
        FieldSpec::new(p, e)
    }

    /// F_{p^e}. Checks p prime by trial division.
    pub fn new(p: u64, e: u32) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidInput("extension degree must be >= 1".into()));
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= TABLE_CAP)
            .ok_or(Error::FieldTooLarge(p.saturating_pow(e)))?;
        let modulus = least_irreducible(p, e);

        let qs = q as usize;
        let decode = |idx: u64| -> Vec<u64> {
            let mut v = Vec::with_capacity(e as usize);
            let mut n = idx;
            for _ in 0..e {
                v.push(n % p);
                n /= p;
            }
            v
        };
        let encode = |v: &[u64]| -> u32 {
            let mut n = 0u64;
            for &c in v.iter().rev() {
                n = n * p + c;
            }
            n as u32
        };

        let mut add = vec![0u32; qs * qs];
        let mut mul = vec![0u32; qs * qs];
        let mut neg = vec![0u32; qs];
        for a in 0..q {
            let va = decode(a);
            let vneg: Vec<u64> = va.iter().map(|&c| (p - c) % p).collect();
            neg[a as usize] = encode(&vneg);
            for b in 0..q {
                let vb = decode(b);
                let vsum: Vec<u64> = va.iter().zip(&vb).map(|(&x, &y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = encode(&vsum);
                let prod = zp::mul(&va, &vb, p);
                let mut r = zp::rem(&prod, &modulus, p);
                r.resize(e as usize, 0);
                mul[(a * q + b) as usize] = encode(&r);
            }
        }
        let mut inv = vec![0u32; qs];
        for a in 1..q {
            for b in 1..q {
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b as u32;
                    break;
                }
            }
        }

        Ok(FieldSpec(Arc::new(FieldInner {
            p,
            e,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn e(&self) -> u32 {
        self.0.e
    }

    pub fn q(&self) -> u64 {
        self.0.q
    }

    /// Coefficients of the defining modulus, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn repr(&self) -> FieldSpecRepr {
        FieldSpecRepr {
            p: self.0.p,
            e: self.0.e,
        }
    }

    pub fn elem(&self, index: u64) -> FqElem {
        assert!(index < self.0.q, "element index out of range");
        FqElem(index as u32)
    }

    /// Element from an integer residue mod p, embedded in the prime subfield.
    pub fn from_residue(&self, n: u64) -> FqElem {
        FqElem((n % self.0.p) as u32)
    }

    /// Coefficient vector of an element over F_p, constant term first.
    pub fn rep(&self, a: FqElem) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.0.e as usize);
        let mut n = a.0 as u64;
        for _ in 0..self.0.e {
            v.push(n % self.0.p);
            n /= self.0.p;
        }
        v
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.0.q as u32).map(FqElem)
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(self.0.add[(a.0 as u64 * self.0.q + b.0 as u64) as usize])
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(self.0.mul[(a.0 as u64 * self.0.q + b.0 as u64) as usize])
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        FqElem(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn inv(&self, a: FqElem) -> FqElem {
        assert!(!a.is_zero(), "inverse of zero");
        FqElem(self.0.inv[a.0 as usize])
    }

    pub fn pow(&self, a: FqElem, mut n: u64) -> FqElem {
        let mut base = a;
        let mut acc = FqElem::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }
}
