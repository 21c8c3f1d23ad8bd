//! Independent brute-force oracles: exhaustive enumeration of Mat_n(F_q) and
//! S_n, the nilpotent-matrix count, and high-precision cycle-count
//! probabilities for large n. Nothing here shares code with the
//! generating-function pipeline it is used to check.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::cycleindex::{DistContext, JointDistribution, ProfileKey};
use crate::fq::{FieldSpec, MatrixFq};
use crate::{Error, Result};

/// Cap on the number of states visited by an exhaustive enumeration.
#[derive(Clone, Copy, Debug)]
pub struct EnumerationBudget(pub u128);

impl Default for EnumerationBudget {
    fn default() -> EnumerationBudget {
        EnumerationBudget(1 << 22)
    }
}

fn merge_counts(
    mut a: BTreeMap<ProfileKey, u64>,
    b: BTreeMap<ProfileKey, u64>,
) -> BTreeMap<ProfileKey, u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

fn matrix_profile_key(field: &FieldSpec, n: u32, enc: u128, tracked: &[u32]) -> ProfileKey {
    let profile = MatrixFq::from_odometer(field, n as usize, enc)
        .char_poly()
        .factor_degree_profile();
    tracked.iter().map(|&d| (d, profile.count(d))).collect()
}

#[cfg(feature = "parallel")]
fn matrix_counts(
    field: &FieldSpec,
    n: u32,
    total: u128,
    tracked: &[u32],
) -> BTreeMap<ProfileKey, u64> {
    use rayon::prelude::*;
    // u128 ranges aren't rayon-indexable; total <= budget fits in u64 anyway
    (0..total as u64)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc, enc| {
            *acc.entry(matrix_profile_key(field, n, enc as u128, tracked))
                .or_insert(0) += 1;
            acc
        })
        .reduce(BTreeMap::new, merge_counts)
}

#[cfg(not(feature = "parallel"))]
fn matrix_counts(
    field: &FieldSpec,
    n: u32,
    total: u128,
    tracked: &[u32],
) -> BTreeMap<ProfileKey, u64> {
    let mut acc = BTreeMap::new();
    for enc in 0..total {
        *acc.entry(matrix_profile_key(field, n, enc, tracked)).or_insert(0) += 1;
    }
    acc
}

/// Joint distribution of tracked irreducible-factor-degree counts of the
/// characteristic polynomial, by enumerating all q^(n^2) matrices.
pub fn enumerate_matrix_distribution(
    field: &FieldSpec,
    n: u32,
    tracked: &[u32],
    budget: EnumerationBudget,
) -> Result<JointDistribution> {
    let mut tracked: Vec<u32> = tracked.to_vec();
    tracked.sort_unstable();
    tracked.dedup();
    let total = (field.q() as u128)
        .checked_pow(n * n)
        .filter(|&t| t <= budget.0)
        .ok_or(Error::BudgetExceeded {
            needed: (field.q() as u128).saturating_pow(n * n),
            cap: budget.0,
        })?;
    let counts = matrix_counts(field, n, total, &tracked);
    let denom = BigInt::from(total);
    let entries = counts
        .into_iter()
        .map(|(k, c)| (k, BigRational::new(BigInt::from(c), denom.clone())))
        .collect();
    Ok(JointDistribution::new(
        n,
        DistContext::Matrix { q: field.q() },
        tracked,
        entries,
    ))
}

fn cycle_lengths(perm: &[usize]) -> Vec<u32> {
    let mut seen = vec![false; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u32;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        lengths.push(len);
    }
    lengths
}

/// Joint distribution of tracked cycle-length counts over all n!
/// permutations, enumerated with Heap's algorithm.
pub fn enumerate_perm_distribution(
    n: u32,
    tracked: &[u32],
    budget: EnumerationBudget,
) -> Result<JointDistribution> {
    let mut tracked: Vec<u32> = tracked.to_vec();
    tracked.sort_unstable();
    tracked.dedup();
    let mut factorial: u128 = 1;
    for i in 1..=n as u128 {
        factorial = factorial.saturating_mul(i);
    }
    if factorial > budget.0 {
        return Err(Error::BudgetExceeded {
            needed: factorial,
            cap: budget.0,
        });
    }

    let mut counts: BTreeMap<ProfileKey, u64> = BTreeMap::new();
    let mut tally = |perm: &[usize]| {
        let lengths = cycle_lengths(perm);
        let key: ProfileKey = tracked
            .iter()
            .map(|&d| (d, lengths.iter().filter(|&&l| l == d).count() as u64))
            .collect();
        *counts.entry(key).or_insert(0) += 1;
    };

    let mut perm: Vec<usize> = (0..n as usize).collect();
    tally(&perm);
    let mut c = vec![0usize; n as usize];
    let mut i = 1;
    while i < n as usize {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            tally(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }

    let denom = BigInt::from(factorial);
    let entries = counts
        .into_iter()
        .map(|(k, c)| (k, BigRational::new(BigInt::from(c), denom.clone())))
        .collect();
    Ok(JointDistribution::new(
        n,
        DistContext::Permutation,
        tracked,
        entries,
    ))
}

/// Number of nilpotent matrices in Mat_n(F_q): q^(n^2 - n).
pub fn nilpotent_count(q: u64, n: u32) -> BigInt {
    BigInt::from(q).pow(n * n - n)
}

/// Nilpotent count by exhaustive enumeration.
pub fn nilpotent_count_brute(
    field: &FieldSpec,
    n: u32,
    budget: EnumerationBudget,
) -> Result<BigInt> {
    let total = (field.q() as u128)
        .checked_pow(n * n)
        .filter(|&t| t <= budget.0)
        .ok_or(Error::BudgetExceeded {
            needed: (field.q() as u128).saturating_pow(n * n),
            cap: budget.0,
        })?;
    let count = nilpotent_tally(field, n, total);
    Ok(BigInt::from(count))
}

#[cfg(feature = "parallel")]
fn nilpotent_tally(field: &FieldSpec, n: u32, total: u128) -> u64 {
    use rayon::prelude::*;
    (0..total as u64)
        .into_par_iter()
        .filter(|&enc| MatrixFq::from_odometer(field, n as usize, enc as u128).is_nilpotent())
        .count() as u64
}

#[cfg(not(feature = "parallel"))]
fn nilpotent_tally(field: &FieldSpec, n: u32, total: u128) -> u64 {
    (0..total)
        .filter(|&enc| MatrixFq::from_odometer(field, n as usize, enc).is_nilpotent())
        .count() as u64
}

// ---------------------------------------------------------------------------
// Double-double arithmetic: an unevaluated sum hi + lo of two f64 giving
// roughly 106 bits of precision, enough to hold 1e-12 relative accuracy
// through ~1e7 floating operations.

/// A double-double value.
#[derive(Clone, Copy, Debug, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    // requires |a| >= |b|
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd {
        hi: p,
        lo: a.mul_add(b, -p),
    }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, other: Dd) -> Dd {
        let s = two_sum(self.hi, other.hi);
        let lo = s.lo + self.lo + other.lo;
        quick_two_sum(s.hi, lo)
    }

    pub fn sub(self, other: Dd) -> Dd {
        self.add(Dd {
            hi: -other.hi,
            lo: -other.lo,
        })
    }

    pub fn mul_f64(self, c: f64) -> Dd {
        let p = two_prod(self.hi, c);
        quick_two_sum(p.hi, p.lo + self.lo * c)
    }

    pub fn div_f64(self, c: f64) -> Dd {
        let q1 = self.hi / c;
        let p = two_prod(q1, c);
        let e = ((self.hi - p.hi) - p.lo + self.lo) / c;
        quick_two_sum(q1, e)
    }
}

/// Probabilities P(perm of n has exactly k cycles) for k = 0..=kmax, computed
/// by the normalized triangle recurrence
/// p(n, k) = p(n-1, k-1)/n + p(n-1, k)(n-1)/n in double-double arithmetic.
#[derive(Clone, Debug)]
pub struct CycleProbTable {
    pub n: u64,
    probs: Vec<Dd>,
}

impl CycleProbTable {
    pub fn compute(n: u64, kmax: usize) -> CycleProbTable {
        assert!(n >= 1);
        let mut probs = vec![Dd::ZERO; kmax + 1];
        if kmax >= 1 {
            probs[1] = Dd::from_f64(1.0); // n = 1
        }
        for m in 2..=n {
            let mf = m as f64;
            for k in (1..=kmax).rev() {
                let stay = probs[k].mul_f64(mf - 1.0).div_f64(mf);
                let grow = probs[k - 1].div_f64(mf);
                probs[k] = stay.add(grow);
            }
            probs[0] = Dd::ZERO;
        }
        CycleProbTable { n, probs }
    }

    pub fn prob(&self, k: usize) -> Dd {
        self.probs.get(k).copied().unwrap_or(Dd::ZERO)
    }
}

/// P(perm of n has exactly k cycles), double-double.
pub fn stirling_cycle_prob(n: u64, k: usize) -> Dd {
    CycleProbTable::compute(n, k).prob(k)
}

/// Exact P(perm of n has exactly k cycles) for modest n, by the same
/// recurrence over rationals.
pub fn stirling_cycle_prob_exact(n: u64, kmax: usize) -> Vec<BigRational> {
    assert!(n >= 1);
    let mut probs = vec![BigRational::zero(); kmax + 1];
    if kmax >= 1 {
        probs[1] = BigRational::one();
    }
    for m in 2..=n {
        let mr = BigRational::from(BigInt::from(m));
        let prev = BigRational::from(BigInt::from(m - 1));
        for k in (1..=kmax).rev() {
            probs[k] = &probs[k] * &prev / &mr + &probs[k - 1] / &mr;
        }
        probs[0] = BigRational::zero();
    }
    probs
}

/// Harmonic number H_n = sum_{i=1..n} 1/i in double-double.
pub fn harmonic(n: u64) -> Dd {
    let mut acc = Dd::ZERO;
    // summing ascending i keeps like magnitudes together late in the sum
    for i in 1..=n {
        acc = acc.add(Dd::from_f64(1.0).div_f64(i as f64));
    }
    acc
}

/// Ratio P(k cycles) * (k-1)! * n / (ln n)^(k-1); tends to 1 as n grows for
/// fixed k, and equals 1 exactly at k = 1.
pub fn jl_ratio(n: u64, k: usize) -> f64 {
    assert!(k >= 1, "cycle count must be >= 1");
    let p = stirling_cycle_prob(n, k);
    let mut fact = 1.0f64;
    for i in 1..k {
        fact *= i as f64;
    }
    let scaled = p.mul_f64(fact).mul_f64(n as f64);
    if k == 1 {
        scaled.to_f64()
    } else {
        scaled.to_f64() / (n as f64).ln().powi(k as i32 - 1)
    }
}
