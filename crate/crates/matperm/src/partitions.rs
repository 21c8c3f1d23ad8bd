//! Integer partitions, Young-diagram conjugation, and automorphism counts of
//! finite modules over a discrete valuation ring with residue field F_q.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::{Error, Result};

/// A partition: weakly decreasing positive parts. The empty partition is
/// allowed and represents the zero module / the empty cycle type.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Partition> {
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidInput(
                "partition parts must be weakly decreasing and positive".into(),
            ));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Partition {
        Partition { parts: vec![] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// |lambda|, the sum of the parts.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    /// m_d(lambda): the multiplicity of d among the parts.
    pub fn multiplicity(&self, d: u32) -> u32 {
        self.parts.iter().filter(|&&p| p == d).count() as u32
    }

    /// n(lambda) = sum_i (i - 1) * lambda_i.
    pub fn weighted_stat(&self) -> u64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| i as u64 * p as u64)
            .sum()
    }

    /// Column lengths of the Young diagram; an involution.
    pub fn conjugate(&self) -> Partition {
        let Some(&first) = self.parts.first() else {
            return Partition::empty();
        };
        let parts = (1..=first)
            .map(|col| self.parts.iter().filter(|&&p| p >= col).count() as u32)
            .collect();
        Partition { parts }
    }

    /// Distinct part sizes with multiplicities, largest first.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((d, m)) if *d == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

/// All partitions of n, each exactly once, in reverse-lexicographic order:
/// (n), (n-1, 1), ..., (1^n).
pub fn enumerate_partitions(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current: Vec<u32> = Vec::new();
    descend(n, n, &mut current, &mut out);
    out
}

fn descend(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    let hi = remaining.min(max_part);
    for part in (1..=hi).rev() {
        current.push(part);
        descend(remaining - part, part, current, out);
        current.pop();
    }
}

/// |Aut(H_lambda)| over a DVR with residue field of order q, by Macdonald's
/// formula q^(|lambda| + 2 n(lambda)) * prod_d prod_{i=1..m_d} (1 - q^-i).
/// Exact; integrality of the result is asserted.
pub fn macdonald_aut(q: u64, lambda: &Partition) -> BigInt {
    assert!(q >= 2);
    let qb = BigInt::from(q);
    let size = lambda.size() as u64 + 2 * lambda.weighted_stat();
    // work over rationals, clear denominators at the end
    let mut num = pow_u64(&qb, size);
    let mut den = BigInt::one();
    for (_, m) in lambda.multiplicities() {
        for i in 1..=m {
            // multiply by (1 - q^-i) = (q^i - 1) / q^i
            num *= pow_u64(&qb, i as u64) - BigInt::one();
            den *= pow_u64(&qb, i as u64);
        }
    }
    let (quot, rem) = num::Integer::div_rem(&num, &den);
    assert!(rem.is_zero(), "automorphism count must be an integer");
    assert!(quot > BigInt::zero());
    quot
}

fn pow_u64(base: &BigInt, mut exp: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut b = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        exp >>= 1;
    }
    acc
}

/// Exact automorphism count of M = (+)_i F_q[t]/(t^lambda_i) by enumerating
/// every t-equivariant endomorphism and counting the invertible ones.
/// Independent of [`macdonald_aut`]; q must be prime.
///
/// The endomorphism space has q^(sum_{i,j} min(lambda_i, lambda_j)) elements;
/// `endo_cap` bounds that enumeration.
pub fn aut_brute_force(q: u64, lambda: &Partition, endo_cap: u128) -> Result<BigInt> {
    let parts = lambda.parts();
    let l = parts.len();
    if l == 0 {
        return Ok(BigInt::one());
    }
    let hom_dims: Vec<u32> = (0..l)
        .flat_map(|i| (0..l).map(move |j| parts[i].min(parts[j])))
        .collect();
    let total_dim: u64 = hom_dims.iter().map(|&d| d as u64).sum();
    let endos = (q as u128).checked_pow(total_dim as u32).filter(|&e| e <= endo_cap);
    let Some(endos) = endos else {
        return Err(Error::BudgetExceeded {
            needed: u128::MAX,
            cap: endo_cap,
        });
    };

    // M as an F_q-vector space with basis (summand i, power of t within it).
    let n: usize = parts.iter().map(|&p| p as usize).sum();
    let offsets: Vec<usize> = parts
        .iter()
        .scan(0usize, |acc, &p| {
            let o = *acc;
            *acc += p as usize;
            Some(o)
        })
        .collect();

    let mut count = BigInt::zero();
    let mut digits = vec![0u64; total_dim as usize];
    for step in 0..endos {
        if step > 0 {
            // odometer increment
            let mut i = 0;
            loop {
                digits[i] += 1;
                if digits[i] < q {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
        // Hom(R/t^b, R/t^a) = t^(max(0, a-b)) R / t^a: a map is multiplication
        // by t^(max(0,a-b)) * (c_0 + c_1 t + ... + c_(min(a,b)-1) t^(min-1)).
        // Build the induced F_q-linear matrix on M and test invertibility.
        let mut mat = vec![0u64; n * n];
        let mut digit_idx = 0;
        for i in 0..l {
            for j in 0..l {
                let a = parts[i] as usize;
                let b = parts[j] as usize;
                let shift = a.saturating_sub(b);
                let m = a.min(b);
                for c in 0..m {
                    let coeff = digits[digit_idx + c];
                    if coeff == 0 {
                        continue;
                    }
                    // generator e_j * t^s maps into summand i at t^(shift+c+s)
                    for s in 0..b {
                        let target = shift + c + s;
                        if target < a {
                            let row = offsets[i] + target;
                            let col = offsets[j] + s;
                            mat[row * n + col] = (mat[row * n + col] + coeff) % q;
                        }
                    }
                }
                digit_idx += m;
            }
        }
        if rank_mod_p(&mut mat, n, q) == n {
            count += 1;
        }
    }
    Ok(count)
}

fn rank_mod_p(mat: &mut [u64], n: usize, p: u64) -> usize {
    let inv = |a: u64| -> u64 {
        // p is tiny; linear scan
        (1..p).find(|&b| (a * b) % p == 1).unwrap()
    };
    let mut rank = 0;
    for col in 0..n {
        let Some(pr) = (rank..n).find(|&r| mat[r * n + col] % p != 0) else {
            continue;
        };
        for jj in 0..n {
            mat.swap(rank * n + jj, pr * n + jj);
        }
        let iv = inv(mat[rank * n + col] % p);
        for jj in 0..n {
            mat[rank * n + jj] = (mat[rank * n + jj] * iv) % p;
        }
        for r in 0..n {
            if r != rank && mat[r * n + col] % p != 0 {
                let c = mat[r * n + col] % p;
                for jj in 0..n {
                    let sub = (c * mat[rank * n + jj]) % p;
                    mat[r * n + jj] = (mat[r * n + jj] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Checks sum_{lambda, <= n parts} X^|lambda| = sum_{lambda, parts <= n}
/// X^|lambda| as truncated formal series up to degree `trunc`, coefficient by
/// coefficient (the conjugation bijection between the two partition families).
pub fn bounded_partition_identity_check(n: u32, trunc: u32) -> bool {
    let mut rows_le_n = vec![0u64; trunc as usize + 1];
    let mut parts_le_n = vec![0u64; trunc as usize + 1];
    for size in 0..=trunc {
        for lambda in enumerate_partitions(size) {
            if lambda.num_parts() <= n as usize {
                rows_le_n[size as usize] += 1;
            }
            if lambda.parts().first().copied().unwrap_or(0) <= n {
                parts_le_n[size as usize] += 1;
            }
        }
    }
    rows_le_n == parts_le_n
}

/// Closed form q^-n / prod_{j=1..n} (1 - q^-j), the value of
/// sum_{lambda of n} 1 / |Aut(H_lambda)|.
pub fn aut_sum_closed_form(q: u64, n: u32) -> BigRational {
    let qr = BigRational::from(BigInt::from(q));
    let one = BigRational::one();
    let mut value = one.clone() / pow_rat(&qr, n);
    for j in 1..=n {
        value /= &one - &(one.clone() / pow_rat(&qr, j));
    }
    value
}

fn pow_rat(base: &BigRational, exp: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        assert_eq!(enumerate_partitions(0).len(), 1);
        assert_eq!(enumerate_partitions(4).len(), 5);
        assert_eq!(enumerate_partitions(10).len(), 42);
    }

    #[test]
    fn reverse_lex_order() {
        let parts: Vec<Vec<u32>> = enumerate_partitions(4)
            .into_iter()
            .map(|p| p.parts().to_vec())
            .collect();
        assert_eq!(
            parts,
            vec![
                vec![4],
                vec![3, 1],
                vec![2, 2],
                vec![2, 1, 1],
                vec![1, 1, 1, 1]
            ]
        );
    }

    #[test]
    fn conjugate_examples() {
        let p = Partition::new(vec![3, 1]).unwrap();
        assert_eq!(p.conjugate().parts(), &[2, 1, 1]);
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        let sq = Partition::new(vec![2, 2]).unwrap();
        assert_eq!(sq.conjugate(), sq);
    }

    #[test]
    fn conjugate_is_involution_and_swaps_stats() {
        for n in 0..=20u32 {
            for p in enumerate_partitions(n) {
                let c = p.conjugate();
                assert_eq!(c.conjugate(), p);
                if n <= 15 && !p.parts().is_empty() {
                    assert_eq!(p.num_parts() as u32, c.parts()[0]);
                }
            }
        }
    }

    #[test]
    fn macdonald_examples() {
        let one_part = Partition::new(vec![1]).unwrap();
        assert_eq!(macdonald_aut(2, &one_part), BigInt::from(1));
        let two_ones = Partition::new(vec![1, 1]).unwrap();
        assert_eq!(macdonald_aut(2, &two_ones), BigInt::from(6)); // |GL_2(F_2)|
        let two = Partition::new(vec![2]).unwrap();
        assert_eq!(macdonald_aut(3, &two), BigInt::from(6));
        assert_eq!(macdonald_aut(2, &Partition::empty()), BigInt::from(1));
    }

    #[test]
    fn brute_force_examples() {
        let cap = 1 << 22;
        let one = Partition::new(vec![1]).unwrap();
        assert_eq!(aut_brute_force(2, &one, cap).unwrap(), BigInt::from(1));
        let two = Partition::new(vec![2]).unwrap();
        assert_eq!(aut_brute_force(2, &two, cap).unwrap(), BigInt::from(2));
        let two_ones = Partition::new(vec![1, 1]).unwrap();
        assert_eq!(aut_brute_force(2, &two_ones, cap).unwrap(), BigInt::from(6));
    }

    #[test]
    fn macdonald_matches_brute_force() {
        for q in [2u64, 3] {
            for n in 0..=6u32 {
                for lambda in enumerate_partitions(n) {
                    let Ok(brute) = aut_brute_force(q, &lambda, 1 << 20) else {
                        continue;
                    };
                    assert_eq!(
                        macdonald_aut(q, &lambda),
                        brute,
                        "q={q} lambda={:?}",
                        lambda.parts()
                    );
                }
            }
        }
    }

    #[test]
    fn bounded_identity_examples() {
        assert!(bounded_partition_identity_check(0, 5));
        assert!(bounded_partition_identity_check(2, 6));
        assert!(bounded_partition_identity_check(3, 8));
    }

    #[test]
    fn aut_sum_identity() {
        // sum over lambda of n of 1/|Aut| = q^-n / prod (1 - q^-j)
        for q in [2u64, 3, 4] {
            for n in 0..=8u32 {
                let mut sum = BigRational::zero();
                for lambda in enumerate_partitions(n) {
                    sum += BigRational::one()
                        / BigRational::from(macdonald_aut(q, &lambda));
                }
                assert_eq!(sum, aut_sum_closed_form(q, n), "q={q} n={n}");
            }
        }
        // spot anchor: n=2, q=2 both sides 2/3
        let spot = aut_sum_closed_form(2, 2);
        assert_eq!(spot, BigRational::new(BigInt::from(2), BigInt::from(3)));
    }
}
