use crate::fq::poly::Poly;
use crate::fq::{FieldSpec, FqElem, MonicPoly};
use crate::{Error, Result};

/// Square matrix over F_q, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatrixFq {
    field: FieldSpec,
    n: usize,
    entries: Vec<FqElem>,
}

impl MatrixFq {
    pub fn new(field: &FieldSpec, n: usize, entries: Vec<FqElem>) -> Result<MatrixFq> {
        if entries.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for an {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(MatrixFq {
            field: field.clone(),
            n,
            entries,
        })
    }

    pub fn zero(field: &FieldSpec, n: usize) -> MatrixFq {
        MatrixFq {
            field: field.clone(),
            n,
            entries: vec![FqElem::ZERO; n * n],
        }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> MatrixFq {
        let mut m = MatrixFq::zero(field, n);
        for i in 0..n {
            m.entries[i * n + i] = FqElem::ONE;
        }
        m
    }

    /// The k-th matrix in odometer order over the q^(n^2) entry assignments.
    pub fn from_odometer(field: &FieldSpec, n: usize, mut k: u128) -> MatrixFq {
        let q = field.q() as u128;
        let mut entries = Vec::with_capacity(n * n);
        for _ in 0..n * n {
            entries.push(field.elem((k % q) as u64));
            k /= q;
        }
        MatrixFq {
            field: field.clone(),
            n,
            entries,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> FqElem {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FqElem) {
        self.entries[i * self.n + j] = v;
    }

    /// det(tI - A) by division-free minor expansion over column subsets.
    /// O(2^n n) polynomial operations; fine at the dimensions this crate
    /// enumerates.
    pub fn char_poly(&self) -> MonicPoly {
        let f = &self.field;
        let n = self.n;
        if n == 0 {
            return MonicPoly::new(f, vec![FqElem::ONE]).unwrap();
        }
        // entry (i, j) of tI - A as a degree <= 1 polynomial
        let entry = |i: usize, j: usize| -> Poly {
            let a = self.get(i, j);
            let c0 = f.neg(a);
            let c1 = if i == j { FqElem::ONE } else { FqElem::ZERO };
            Poly::from_coeffs(f, vec![c0, c1])
        };
        // minors[S] = det of the submatrix on rows 0..|S| and columns S
        let mut minors: Vec<Option<Poly>> = vec![None; 1 << n];
        minors[0] = Some(Poly::constant(f, FqElem::ONE));
        for mask in 1u32..(1 << n) {
            let k = mask.count_ones() as usize; // expand along row k-1
            let mut det = Poly::zero(f);
            let mut idx = 0;
            for j in 0..n {
                if mask & (1 << j) == 0 {
                    continue;
                }
                let sub = minors[(mask & !(1 << j)) as usize]
                    .as_ref()
                    .expect("minor computed in mask order")
                    .clone();
                let term = entry(k - 1, j).mul(&sub);
                if (k - 1 + idx) % 2 == 0 {
                    det = det.add(&term);
                } else {
                    det = det.sub(&term);
                }
                idx += 1;
            }
            minors[mask as usize] = Some(det);
        }
        let full = minors[(1usize << n) - 1].take().unwrap();
        MonicPoly::new(f, full.coeffs).expect("det(tI - A) is monic")
    }

    /// True iff A^n = 0.
    pub fn is_nilpotent(&self) -> bool {
        let mut pow = self.clone();
        for _ in 1..self.n {
            if pow.entries.iter().all(|c| c.is_zero()) {
                return true;
            }
            pow = pow.mul(self);
        }
        pow.entries.iter().all(|c| c.is_zero())
    }

    pub fn mul(&self, other: &MatrixFq) -> MatrixFq {
        assert_eq!(self.n, other.n);
        let f = &self.field;
        let n = self.n;
        let mut out = MatrixFq::zero(f, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Rank by Gaussian elimination; invertible iff rank == n.
    pub fn rank(&self) -> usize {
        let f = &self.field;
        let n = self.n;
        let mut m = self.entries.clone();
        let mut rank = 0;
        for col in 0..n {
            let pivot = (rank..n).find(|&r| !m[r * n + col].is_zero());
            let Some(pr) = pivot else { continue };
            for j in 0..n {
                m.swap(rank * n + j, pr * n + j);
            }
            let inv = f.inv(m[rank * n + col]);
            for j in 0..n {
                m[rank * n + j] = f.mul(m[rank * n + j], inv);
            }
            for r in 0..n {
                if r != rank && !m[r * n + col].is_zero() {
                    let c = m[r * n + col];
                    for j in 0..n {
                        let v = f.sub(m[r * n + j], f.mul(c, m[rank * n + j]));
                        m[r * n + j] = v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_poly_zero_matrix() {
        let f = FieldSpec::prime(2).unwrap();
        let a = MatrixFq::zero(&f, 2);
        assert_eq!(a.char_poly().indices(), vec![0, 0, 1]); // t^2
    }

    #[test]
    fn char_poly_identity_over_f3() {
        // (t - 1)^2 = t^2 + t + 1 over F_3 (since -2 = 1)
        let f = FieldSpec::prime(3).unwrap();
        let a = MatrixFq::identity(&f, 2);
        assert_eq!(a.char_poly().indices(), vec![1, 1, 1]);
    }

    #[test]
    fn char_poly_swap_over_f2() {
        // [[0,1],[1,0]] has char poly t^2 - 1 = t^2 + 1 over F_2
        let f = FieldSpec::prime(2).unwrap();
        let mut a = MatrixFq::zero(&f, 2);
        a.set(0, 1, FqElem::ONE);
        a.set(1, 0, FqElem::ONE);
        assert_eq!(a.char_poly().indices(), vec![1, 0, 1]);
    }

    /// Independent oracle: det(tI - A) by evaluation at every field point is
    /// not enough points at small q, so check against permutation-expansion
    /// determinant instead.
    fn charpoly_perm_expansion(a: &MatrixFq) -> Vec<u64> {
        use crate::fq::poly::Poly;
        let f = a.field().clone();
        let n = a.dim();
        let mut result = Poly::zero(&f);
        let mut perm: Vec<usize> = (0..n).collect();
        // Heap's algorithm with explicit sign tracking
        fn heaps(
            k: usize,
            perm: &mut Vec<usize>,
            sign: &mut i32,
            visit: &mut dyn FnMut(&[usize], i32),
        ) {
            if k == 1 {
                visit(perm, *sign);
                return;
            }
            for i in 0..k {
                heaps(k - 1, perm, sign, visit);
                if i < k - 1 {
                    if k % 2 == 0 {
                        perm.swap(i, k - 1);
                    } else {
                        perm.swap(0, k - 1);
                    }
                    *sign = -*sign;
                }
            }
        }
        let mut sign = 1;
        heaps(n, &mut perm, &mut sign, &mut |perm, sign| {
            let mut term = Poly::constant(&f, FqElem::ONE);
            for (i, &j) in perm.iter().enumerate() {
                let c0 = f.neg(a.get(i, j));
                let c1 = if i == j { FqElem::ONE } else { FqElem::ZERO };
                term = term.mul(&Poly::from_coeffs(&f, vec![c0, c1]));
            }
            if sign < 0 {
                term = term.scale(f.neg(FqElem::ONE));
            }
            result = result.add(&term);
        });
        let mut v: Vec<u64> = result.coeffs.iter().map(|c| c.index() as u64).collect();
        v.resize(n + 1, 0);
        v
    }

    #[test]
    fn char_poly_matches_permutation_expansion() {
        for (p, e) in [(2u64, 1u32), (3, 1), (2, 2)] {
            let f = FieldSpec::new(p, e).unwrap();
            let q = f.q();
            let n = 3;
            let total = (q as u128).pow((n * n) as u32);
            // subsample deterministically to keep this quick
            let step = (total / 500).max(1);
            let mut k = 0u128;
            while k < total {
                let a = MatrixFq::from_odometer(&f, n, k);
                assert_eq!(a.char_poly().indices(), charpoly_perm_expansion(&a));
                k += step;
            }
        }
    }
}
