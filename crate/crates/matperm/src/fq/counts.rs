use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::fq::{FieldSpec, FqElem, MonicPoly};
use crate::{Error, Result};

/// Default cap on q^d for [`enumerate_irreducibles`].
pub const IRRED_ENUM_CAP: u128 = 10_000_000;

fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut mu = 1i64;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Number of monic irreducible polynomials of degree d over F_q, by the
/// necklace formula M(q, d) = (1/d) sum_{e | d} mu(e) q^(d/e).
pub fn irreducible_count(q: u64, d: u32) -> BigInt {
    assert!(d >= 1, "degree must be >= 1");
    let q = BigInt::from(q);
    let mut sum = BigInt::zero();
    for e in 1..=d as u64 {
        if d as u64 % e != 0 {
            continue;
        }
        let term = q.pow(d / e as u32);
        match mobius(e) {
            1 => sum += term,
            -1 => sum -= term,
            _ => {}
        }
    }
    let (quot, rem) = num::Integer::div_rem(&sum, &BigInt::from(d));
    debug_assert!(rem.is_zero(), "necklace sum divisible by d");
    quot
}

/// All monic irreducibles of degree d over F_q, sorted lexicographically on
/// the constant-first coefficient vector. Errors when q^d exceeds `cap`.
pub fn enumerate_irreducibles(field: &FieldSpec, d: u32, cap: u128) -> Result<Vec<MonicPoly>> {
    assert!(d >= 1);
    let q = field.q();
    let states = (q as u128).pow(d);
    if states > cap {
        return Err(Error::BudgetExceeded {
            needed: states,
            cap,
        });
    }
    let mut out = Vec::new();
    for enc in 0..states {
        let mut coeffs = Vec::with_capacity(d as usize + 1);
        let mut m = enc;
        for _ in 0..d {
            coeffs.push(field.elem((m % q as u128) as u64));
            m /= q as u128;
        }
        coeffs.push(FqElem::ONE);
        let f = MonicPoly::new(field, coeffs)?;
        if f.is_irreducible() {
            out.push(f);
        }
    }
    // odometer encoding is most-significant-last; re-sort on the
    // constant-first coefficient vector to pin the documented order
    out.sort_by(|a, b| a.indices().cmp(&b.indices()));
    Ok(out)
}

/// Number of square-free monic polynomials of degree n over F_q:
/// q^n - q^(n-1) for n >= 2, q^n for n in {0, 1}.
pub fn squarefree_count(q: u64, n: u32) -> BigInt {
    let q = BigInt::from(q);
    if n < 2 {
        return q.pow(n);
    }
    q.pow(n) - q.pow(n - 1)
}

/// Number of square-free monic f of degree n with f(0) != 0:
/// q^n - 2q^(n-1) + 2q^(n-2) - ... + (-1)^(n-1) 2q + (-1)^n for n >= 1.
pub fn squarefree_nonzero_constant_count(q: u64, n: u32) -> BigInt {
    assert!(n >= 1);
    let q = BigInt::from(q);
    let mut sum = q.pow(n);
    for i in 1..n {
        let term = BigInt::from(2) * q.pow(n - i);
        if i % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
    }
    if n % 2 == 1 {
        sum -= BigInt::one();
    } else {
        sum += BigInt::one();
    }
    sum
}

/// Number of n x n matrices over F_q whose characteristic polynomial is the
/// square-free product of the given distinct irreducibles:
/// q^(n^2-n) * prod_{i=1..n} (1 - q^-i) / prod_j (1 - q^-deg(P_j)).
pub fn reiner_count(q: u64, factors: &[MonicPoly], n: u32) -> Result<BigInt> {
    let total: usize = factors.iter().map(|f| f.degree()).sum();
    if total != n as usize {
        return Err(Error::InvalidInput(format!(
            "factor degrees sum to {total}, expected {n}"
        )));
    }
    for (i, f) in factors.iter().enumerate() {
        if !f.is_irreducible() {
            return Err(Error::InvalidInput(format!("factor {i} is not irreducible")));
        }
        for g in &factors[..i] {
            if f == g {
                return Err(Error::InvalidInput("factors must be distinct".into()));
            }
        }
    }
    let qr = BigRational::from(BigInt::from(q));
    let one = BigRational::one();
    let mut value = BigRational::from(BigInt::from(q).pow(n * n - n));
    for i in 1..=n {
        value *= &one - qr.pow(-(i as i32));
    }
    for f in factors {
        value /= &one - qr.pow(-(f.degree() as i32));
    }
    if !value.is_integer() || value.is_negative() {
        return Err(Error::InvalidInput(
            "matrix count formula did not produce a nonnegative integer".into(),
        ));
    }
    Ok(value.to_integer())
}

/// |GL_n(F_q)| = q^(n^2) * prod_{i=1..n} (1 - q^-i), as an exact integer.
pub fn gl_order(q: u64, n: u32) -> BigInt {
    let q = BigInt::from(q);
    let mut acc = BigInt::one();
    let qn = q.pow(n);
    let mut qi = BigInt::one();
    for _ in 0..n {
        acc *= &qn - &qi;
        qi *= &q;
    }
    acc
}
