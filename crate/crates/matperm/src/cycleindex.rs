//! Cycle indices of S_n and of the conjugation action on Mat_n(F_q), exact
//! joint distributions of factor/cycle counts, their large-q convergence, and
//! the partial-sum generating functions behind the Poisson limit.
//!
//! The matrix-side generating function is assembled from the closed-form
//! per-degree factors F_d(u) = sum_lambda x_d^|lambda| u^(d |lambda|) /
//! |Aut(H_lambda over F_{q^d})|, raised to the number of degree-d monic
//! irreducibles; every coefficient is a finite exact computation. The
//! refinement with per-count markers x_{d,m} is never materialized: every
//! query against it is an indicator query on a factor profile, which
//! [`JointDistribution`] answers directly.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};
use serde_json::json;

use crate::fq::{gl_order, irreducible_count};
use crate::partitions::{enumerate_partitions, macdonald_aut, Partition};
use crate::series::{one_minus_u, MarkerMonomial, MultiPoly, TruncSeries};
use crate::{Error, Result};

/// One joint-event constraint: require exactly `count` factors/cycles of
/// degree/length `degree`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Constraint {
    pub degree: u32,
    pub count: u64,
}

impl Constraint {
    pub fn new(degree: u32, count: u64) -> Constraint {
        Constraint { degree, count }
    }
}

pub(crate) fn check_distinct_degrees(constraints: &[Constraint]) -> Result<()> {
    for (i, c) in constraints.iter().enumerate() {
        if constraints[..i].iter().any(|o| o.degree == c.degree) {
            return Err(Error::DegreeCollision(c.degree));
        }
    }
    Ok(())
}

/// A tracked-profile key: (degree, count) pairs over the tracked degrees,
/// zero counts included, sorted by degree.
pub type ProfileKey = Vec<(u32, u64)>;

/// Where a distribution was computed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DistContext {
    Permutation,
    Matrix { q: u64 },
}

/// Exact joint distribution of tracked factor/cycle counts.
#[derive(Clone, PartialEq, Debug)]
pub struct JointDistribution {
    pub n: u32,
    pub context: DistContext,
    pub tracked: Vec<u32>,
    entries: BTreeMap<ProfileKey, BigRational>,
}

impl JointDistribution {
    pub fn new(
        n: u32,
        context: DistContext,
        tracked: Vec<u32>,
        entries: BTreeMap<ProfileKey, BigRational>,
    ) -> JointDistribution {
        JointDistribution {
            n,
            context,
            tracked,
            entries,
        }
    }

    pub fn entries(&self) -> &BTreeMap<ProfileKey, BigRational> {
        &self.entries
    }

    pub fn prob(&self, profile: &ProfileKey) -> BigRational {
        self.entries
            .get(profile)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Probability of the event {count(d_j) = k_j for every constraint};
    /// tracked degrees not constrained are marginalized.
    pub fn prob_constraints(&self, constraints: &[Constraint]) -> Result<BigRational> {
        check_distinct_degrees(constraints)?;
        let mut total = BigRational::zero();
        'entry: for (profile, p) in &self.entries {
            for c in constraints {
                let count = profile
                    .iter()
                    .find(|&&(d, _)| d == c.degree)
                    .map(|&(_, k)| k)
                    .unwrap_or(0);
                if count != c.count {
                    continue 'entry;
                }
            }
            total += p;
        }
        Ok(total)
    }

    pub fn total(&self) -> BigRational {
        self.entries.values().sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let context = match self.context {
            DistContext::Permutation => json!({"kind": "permutation"}),
            DistContext::Matrix { q } => json!({"kind": "matrix", "q": q}),
        };
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|(profile, p)| {
                json!({
                    "profile": profile.iter().map(|&(d, k)| json!([d, k])).collect::<Vec<_>>(),
                    "exact": format!("{}/{}", p.numer(), p.denom()),
                    "float": p.to_f64(),
                })
            })
            .collect();
        json!({
            "n": self.n,
            "context": context,
            "tracked": self.tracked,
            "entries": entries,
        })
    }
}

fn normalized_tracked(tracked: &[u32]) -> Vec<u32> {
    let mut t = tracked.to_vec();
    t.sort_unstable();
    t.dedup();
    t
}

/// Weight 1 / prod_i (m_i! i^m_i) of the conjugacy class of cycle type
/// lambda in S_n.
fn class_weight(lambda: &Partition) -> BigRational {
    let mut den = BigInt::one();
    for (d, m) in lambda.multiplicities() {
        let mut fact = BigInt::one();
        for i in 1..=m as u64 {
            fact *= BigInt::from(i);
        }
        den *= fact * BigInt::from(d as u64).pow(m);
    }
    BigRational::new(BigInt::one(), den)
}

/// Cycle index Z(S_n, x) in the tracked markers, with every untracked x_d
/// evaluated to 1; computed by direct partition enumeration.
pub fn sym_cycle_index(n: u32, tracked: &[u32]) -> MultiPoly {
    let tracked = normalized_tracked(tracked);
    let mut out = MultiPoly::zero();
    for lambda in enumerate_partitions(n) {
        let weight = class_weight(&lambda);
        let exps: Vec<(u32, u32)> = tracked
            .iter()
            .map(|&d| (d, lambda.multiplicity(d)))
            .collect();
        let monomial = MarkerMonomial::from_exponents(exps);
        out = out.add(&MultiPoly::term(monomial, weight));
    }
    out
}

/// Exact Prob_{sigma in S_n}(m_{d_j}(sigma) = k_j for all j).
pub fn sym_joint_prob(n: u32, constraints: &[Constraint]) -> Result<BigRational> {
    check_distinct_degrees(constraints)?;
    let mut total = BigRational::zero();
    'outer: for lambda in enumerate_partitions(n) {
        for c in constraints {
            if lambda.multiplicity(c.degree) as u64 != c.count {
                continue 'outer;
            }
        }
        total += class_weight(&lambda);
    }
    Ok(total)
}

/// Full tracked distribution on the permutation side.
pub fn sym_distribution(n: u32, tracked: &[u32]) -> JointDistribution {
    let tracked = normalized_tracked(tracked);
    let mut entries: BTreeMap<ProfileKey, BigRational> = BTreeMap::new();
    for lambda in enumerate_partitions(n) {
        let profile: ProfileKey = tracked
            .iter()
            .map(|&d| (d, lambda.multiplicity(d) as u64))
            .collect();
        *entries.entry(profile).or_insert_with(BigRational::zero) += class_weight(&lambda);
    }
    JointDistribution::new(n, DistContext::Permutation, tracked, entries)
}

/// Generating function sum_n Z([Mat_n/GL_n](F_q), x) u^n truncated at the
/// given order, with markers kept only for tracked degrees.
///
/// Assembled as prod_{d <= order} F_d(u)^M(q,d) with
/// F_d(u) = sum_{lambda : d|lambda| <= order} x_d^|lambda| u^(d |lambda|)
///          / |Aut(H_lambda)| over the residue field F_{q^d}.
pub fn mat_cycle_index_series(q: u64, order: usize, tracked: &[u32]) -> Result<TruncSeries> {
    let tracked = normalized_tracked(tracked);
    let mut series = TruncSeries::one(order);
    for d in 1..=order as u32 {
        let qd = q
            .checked_pow(d)
            .ok_or_else(|| Error::InvalidInput(format!("q^{d} overflows for q = {q}")))?;
        let mut factor = TruncSeries::zero(order);
        for m in 0..=(order as u32 / d) {
            let mut inv_aut_sum = BigRational::zero();
            for lambda in enumerate_partitions(m) {
                inv_aut_sum +=
                    BigRational::new(BigInt::one(), macdonald_aut(qd, &lambda));
            }
            let monomial = if tracked.contains(&d) {
                MarkerMonomial::from_exponents(vec![(d, m)])
            } else {
                MarkerMonomial::constant()
            };
            let idx = (d * m) as usize;
            let prev = factor.coeff(idx).clone();
            factor.set_coeff(idx, prev.add(&MultiPoly::term(monomial, inv_aut_sum)));
        }
        let count = irreducible_count(q, d)
            .to_biguint()
            .expect("irreducible count is nonnegative");
        series = series.mul(&factor.pow(&count))?;
    }
    Ok(series)
}

fn mat_norm(q: u64, n: u32) -> BigRational {
    BigRational::new(gl_order(q, n), BigInt::from(q).pow(n * n))
}

/// Exact Prob_{A in Mat_n(F_q)}(m_{d_j}(A) = k_j for all j), where m_d(A)
/// counts degree-d irreducible factors of the characteristic polynomial with
/// multiplicity.
pub fn mat_joint_prob(n: u32, q: u64, constraints: &[Constraint]) -> Result<BigRational> {
    check_distinct_degrees(constraints)?;
    // degrees beyond n can never be hit by a degree-n characteristic polynomial
    let mut effective = Vec::new();
    for c in constraints {
        if c.degree > n {
            if c.count > 0 {
                return Ok(BigRational::zero());
            }
        } else {
            effective.push(*c);
        }
    }
    let tracked: Vec<u32> = effective.iter().map(|c| c.degree).collect();
    let series = mat_cycle_index_series(q, n as usize, &tracked)?;
    let coeff = series.coeff(n as usize);
    let mut matched = BigRational::zero();
    'term: for (monomial, c) in coeff.terms() {
        for cons in &effective {
            if monomial.exponent(cons.degree) as u64 != cons.count {
                continue 'term;
            }
        }
        matched += c;
    }
    Ok(matched * mat_norm(q, n))
}

/// Full tracked distribution on the matrix side, from the cycle-index series.
pub fn mat_distribution(n: u32, q: u64, tracked: &[u32]) -> Result<JointDistribution> {
    let tracked = normalized_tracked(tracked);
    let series_tracked: Vec<u32> = tracked.iter().copied().filter(|&d| d <= n).collect();
    let series = mat_cycle_index_series(q, n as usize, &series_tracked)?;
    let norm = mat_norm(q, n);
    let mut entries: BTreeMap<ProfileKey, BigRational> = BTreeMap::new();
    for (monomial, c) in series.coeff(n as usize).terms() {
        let profile: ProfileKey = tracked
            .iter()
            .map(|&d| (d, monomial.exponent(d) as u64))
            .collect();
        *entries.entry(profile).or_insert_with(BigRational::zero) += c * &norm;
    }
    Ok(JointDistribution::new(
        n,
        DistContext::Matrix { q },
        tracked,
        entries,
    ))
}

/// One row of a large-q convergence table.
#[derive(Clone, Debug)]
pub struct LimitQRow {
    pub q: u64,
    pub exact: BigRational,
    pub gap: BigRational,
}

/// Convergence of the matrix-side probability toward the S_n value as q grows.
#[derive(Clone, Debug)]
pub struct LimitQReport {
    pub n: u32,
    pub constraints: Vec<Constraint>,
    pub target: BigRational,
    pub rows: Vec<LimitQRow>,
    /// true iff |P_q - P_inf| is weakly decreasing along the q list
    pub weakly_decreasing: bool,
    /// adjacent q pairs where the gap increased
    pub violations: Vec<(u64, u64)>,
}

impl LimitQReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("q,exact,float,gap\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{}/{},{},{}\n",
                row.q,
                row.exact.numer(),
                row.exact.denom(),
                row.exact.to_f64().unwrap_or(f64::NAN),
                row.gap.to_f64().unwrap_or(f64::NAN),
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "constraints": self.constraints.iter()
                .map(|c| json!({"d": c.degree, "k": c.count})).collect::<Vec<_>>(),
            "target": format!("{}/{}", self.target.numer(), self.target.denom()),
            "target_float": self.target.to_f64(),
            "rows": self.rows.iter().map(|r| json!({
                "q": r.q,
                "exact": format!("{}/{}", r.exact.numer(), r.exact.denom()),
                "float": r.exact.to_f64(),
                "gap": r.gap.to_f64(),
            })).collect::<Vec<_>>(),
            "weakly_decreasing": self.weakly_decreasing,
            "violations": self.violations,
        })
    }
}

/// Exact mat_joint_prob at each q, the exact S_n target, and the gaps.
/// Monotonicity of the gaps is reported, not asserted: only the limit is
/// guaranteed.
pub fn limit_q_report(n: u32, constraints: &[Constraint], qs: &[u64]) -> Result<LimitQReport> {
    if qs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("q values must be strictly increasing".into()));
    }
    let target = sym_joint_prob(n, constraints)?;
    let exacts = compute_per_q(n, constraints, qs)?;
    let mut rows = Vec::with_capacity(qs.len());
    for (&q, exact) in qs.iter().zip(exacts) {
        let gap = if exact >= target {
            &exact - &target
        } else {
            &target - &exact
        };
        rows.push(LimitQRow { q, exact, gap });
    }
    let mut violations = Vec::new();
    for w in rows.windows(2) {
        if w[1].gap > w[0].gap {
            violations.push((w[0].q, w[1].q));
        }
    }
    Ok(LimitQReport {
        n,
        constraints: constraints.to_vec(),
        target,
        weakly_decreasing: violations.is_empty(),
        violations,
        rows,
    })
}

#[cfg(feature = "parallel")]
fn compute_per_q(n: u32, constraints: &[Constraint], qs: &[u64]) -> Result<Vec<BigRational>> {
    use rayon::prelude::*;
    qs.par_iter()
        .map(|&q| mat_joint_prob(n, q, constraints))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn compute_per_q(n: u32, constraints: &[Constraint], qs: &[u64]) -> Result<Vec<BigRational>> {
    qs.iter()
        .map(|&q| mat_joint_prob(n, q, constraints))
        .collect()
}

/// Generating function whose u^n coefficient is
/// Prob_{sigma in S_n}(m_d = 0 for d in `zero`, and m_d in {0, k} for each
/// (d, k) in `hits`): exp(-sum u^d/d over all listed degrees) / (1 - u)
/// times prod_hits (1 + (u^d/d)^k / k!).
pub fn shepp_lloyd_series(zero: &[u32], hits: &[(u32, u64)], order: usize) -> Result<TruncSeries> {
    let mut seen = Vec::new();
    for &d in zero.iter().chain(hits.iter().map(|(d, _)| d)) {
        if d == 0 {
            return Err(Error::InvalidInput("degrees must be >= 1".into()));
        }
        if seen.contains(&d) {
            return Err(Error::DegreeCollision(d));
        }
        seen.push(d);
    }
    if hits.iter().any(|&(_, k)| k == 0) {
        return Err(Error::InvalidInput(
            "hit constraints require count >= 1; use `zero` for k = 0".into(),
        ));
    }

    // exp(-sum_d u^d / d) over every listed degree
    let mut arg = TruncSeries::zero(order);
    for &d in &seen {
        if (d as usize) <= order {
            let prev = arg.coeff(d as usize).clone();
            arg.set_coeff(
                d as usize,
                prev.add(&MultiPoly::constant(BigRational::new(
                    BigInt::from(-1),
                    BigInt::from(d as i64),
                ))),
            );
        }
    }
    let mut series = arg.exp()?.mul(&one_minus_u(order).geometric_inverse()?)?;

    for &(d, k) in hits {
        // 1 + (u^d/d)^k / k!
        let mut factor = TruncSeries::one(order);
        let deg = d as u64 * k;
        if deg <= order as u64 {
            let mut denom = BigInt::one();
            for i in 1..=k {
                denom *= BigInt::from(i);
            }
            denom *= BigInt::from(d as u64).pow(k as u32);
            factor.set_coeff(
                deg as usize,
                MultiPoly::constant(BigRational::new(BigInt::one(), denom)),
            );
        }
        series = series.mul(&factor)?;
    }
    Ok(series)
}

/// The symbolic value prod_j e^(-1/d_j) (1/d_j)^(k_j) / k_j!, the n -> inf
/// limit of the joint cycle-count probability.
#[derive(Clone, Debug)]
pub struct PoissonLimit {
    /// rational prefactor prod (1/d_j)^(k_j) / k_j!
    pub coeff: BigRational,
    /// the degrees whose e^(-1/d) factors appear
    pub degrees: Vec<u32>,
}

impl PoissonLimit {
    /// Exact exponent sum_j 1/d_j of the e^-x factor.
    pub fn exponent(&self) -> BigRational {
        self.degrees
            .iter()
            .map(|&d| BigRational::new(BigInt::one(), BigInt::from(d as u64)))
            .sum()
    }

    pub fn to_f64(&self) -> f64 {
        let e = self.exponent().to_f64().unwrap_or(f64::NAN);
        self.coeff.to_f64().unwrap_or(f64::NAN) * (-e).exp()
    }

    pub fn to_string_symbolic(&self) -> String {
        let exp = self.exponent();
        if self.coeff.is_one() {
            format!("e^(-{}/{})", exp.numer(), exp.denom())
        } else {
            format!(
                "({}/{}) * e^(-{}/{})",
                self.coeff.numer(),
                self.coeff.denom(),
                exp.numer(),
                exp.denom()
            )
        }
    }
}

/// Limit value of the joint probability as independent Poisson variables
/// with means 1/d_j.
pub fn poisson_limit(constraints: &[Constraint]) -> Result<PoissonLimit> {
    check_distinct_degrees(constraints)?;
    let mut coeff = BigRational::one();
    let mut degrees = Vec::new();
    for c in constraints {
        degrees.push(c.degree);
        let mut denom = BigInt::from(c.degree as u64).pow(c.count as u32);
        for i in 1..=c.count {
            denom *= BigInt::from(i);
        }
        coeff *= BigRational::new(BigInt::one(), denom);
    }
    degrees.sort_unstable();
    Ok(PoissonLimit { coeff, degrees })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sym_cycle_index_s3() {
        // (x1^3 + 3 x1 x2 + 2 x3) / 6
        let z = sym_cycle_index(3, &[1, 2, 3]);
        let x1cubed = MarkerMonomial::from_exponents(vec![(1, 3)]);
        let x1x2 = MarkerMonomial::from_exponents(vec![(1, 1), (2, 1)]);
        let x3 = MarkerMonomial::marker(3);
        assert_eq!(z.coefficient(&x1cubed), rat(1, 6));
        assert_eq!(z.coefficient(&x1x2), rat(1, 2));
        assert_eq!(z.coefficient(&x3), rat(1, 3));
        assert_eq!(z.eval_all_ones(), rat(1, 1));
    }

    #[test]
    fn sym_cycle_index_edge_cases() {
        let z0 = sym_cycle_index(0, &[1]);
        assert_eq!(z0.coefficient(&MarkerMonomial::constant()), rat(1, 1));

        // n = 2, tracked {2}: (1 + x2) / 2
        let z2 = sym_cycle_index(2, &[2]);
        assert_eq!(z2.coefficient(&MarkerMonomial::constant()), rat(1, 2));
        assert_eq!(z2.coefficient(&MarkerMonomial::marker(2)), rat(1, 2));
    }

    #[test]
    fn sym_joint_prob_examples() {
        assert_eq!(
            sym_joint_prob(3, &[Constraint::new(1, 0)]).unwrap(),
            rat(1, 3)
        );
        assert_eq!(
            sym_joint_prob(3, &[Constraint::new(3, 1)]).unwrap(),
            rat(1, 3)
        );
        assert_eq!(
            sym_joint_prob(5, &[Constraint::new(7, 0)]).unwrap(),
            rat(1, 1)
        );
        assert_eq!(
            sym_joint_prob(2, &[Constraint::new(2, 1)]).unwrap(),
            rat(1, 2)
        );
    }

    #[test]
    fn sym_matches_series_product() {
        // Z(S_n) coefficients match the u^n coefficient of
        // prod_{d<=n} exp(x_d u^d / d), exactly, for n <= 8
        use crate::series::monomial_u;
        let nmax = 8usize;
        let tracked: Vec<u32> = (1..=nmax as u32).collect();
        let mut product = TruncSeries::one(nmax);
        for d in 1..=nmax {
            let mut arg = TruncSeries::zero(nmax);
            arg.set_coeff(
                d,
                MultiPoly::term(
                    MarkerMonomial::marker(d as u32),
                    rat(1, d as i64),
                ),
            );
            product = product.mul(&arg.exp().unwrap()).unwrap();
            let _ = monomial_u(nmax, d, rat(1, d as i64)); // keep import honest
        }
        for n in 0..=nmax {
            let direct = sym_cycle_index(n as u32, &tracked);
            assert_eq!(product.coeff(n), &direct, "n = {n}");
        }
    }

    #[test]
    fn mat_series_all_markers_one() {
        // u^n coefficient with all markers 1 is prod_{i<=n} (1 - q^-i)^-1
        for q in [2u64, 3] {
            let series = mat_cycle_index_series(q, 4, &[]).unwrap();
            for n in 0..=4u32 {
                let mut expect = BigRational::one();
                for i in 1..=n {
                    let qi = BigRational::new(BigInt::one(), BigInt::from(q).pow(i));
                    expect /= BigRational::one() - qi;
                }
                assert_eq!(
                    series.coeff(n as usize).eval_all_ones(),
                    expect,
                    "q={q} n={n}"
                );
            }
        }
        // brute-force anchor 16/6 = 8/3 at n = 2, q = 2
        let series = mat_cycle_index_series(2, 2, &[]).unwrap();
        assert_eq!(series.coeff(2).eval_all_ones(), rat(8, 3));
        assert_eq!(series.coeff(0).eval_all_ones(), rat(1, 1));
    }

    #[test]
    fn mat_series_tracked_linear_factor() {
        // q=2, N=1, tracked {1}: coefficient of u is 2 x1
        let series = mat_cycle_index_series(2, 1, &[1]).unwrap();
        assert_eq!(
            series.coeff(1).coefficient(&MarkerMonomial::marker(1)),
            rat(2, 1)
        );
    }

    #[test]
    fn mat_joint_prob_examples() {
        assert_eq!(
            mat_joint_prob(1, 5, &[Constraint::new(1, 1)]).unwrap(),
            rat(1, 1)
        );
        assert_eq!(
            mat_joint_prob(2, 2, &[Constraint::new(2, 1)]).unwrap(),
            rat(1, 8)
        );
        assert_eq!(
            mat_joint_prob(2, 2, &[Constraint::new(1, 2)]).unwrap(),
            rat(7, 8)
        );
        // degree beyond n
        assert_eq!(
            mat_joint_prob(2, 2, &[Constraint::new(5, 0)]).unwrap(),
            rat(1, 1)
        );
        assert_eq!(
            mat_joint_prob(2, 2, &[Constraint::new(5, 2)]).unwrap(),
            rat(0, 1)
        );
    }

    #[test]
    fn mat_distribution_normalizes() {
        for (n, q) in [(1u32, 2u64), (2, 2), (2, 3), (3, 2)] {
            let tracked: Vec<u32> = (1..=n).collect();
            let dist = mat_distribution(n, q, &tracked).unwrap();
            assert_eq!(dist.total(), rat(1, 1), "n={n} q={q}");
        }
    }

    #[test]
    fn limit_q_examples() {
        let report = limit_q_report(1, &[Constraint::new(1, 1)], &[2, 3, 5]).unwrap();
        assert!(report.rows.iter().all(|r| r.gap.is_zero()));

        let report =
            limit_q_report(3, &[Constraint::new(1, 0)], &[2, 3, 4, 5]).unwrap();
        assert_eq!(report.target, rat(1, 3));
        assert!(report.weakly_decreasing, "violations: {:?}", report.violations);

        let report =
            limit_q_report(2, &[Constraint::new(2, 1)], &[2, 3, 4, 5, 7, 8, 9]).unwrap();
        assert_eq!(report.target, rat(1, 2));
        let last = report.rows.last().unwrap();
        let first = &report.rows[0];
        assert!(last.gap < first.gap);
    }

    #[test]
    fn limit_q_requires_increasing() {
        assert!(limit_q_report(2, &[], &[3, 2]).is_err());
    }

    #[test]
    fn shepp_lloyd_derangements() {
        // forced-zero {1}: u^n coefficient is D_n / n!
        let s = shepp_lloyd_series(&[1], &[], 6).unwrap();
        let c = |n: usize| s.coefficient(n, &MarkerMonomial::constant()).unwrap();
        assert_eq!(c(0), rat(1, 1));
        assert_eq!(c(1), rat(0, 1));
        assert_eq!(c(2), rat(1, 2));
        assert_eq!(c(3), rat(1, 3));
        assert_eq!(c(4), rat(3, 8));
    }

    #[test]
    fn shepp_lloyd_no_constraints_is_geometric() {
        let s = shepp_lloyd_series(&[], &[], 4).unwrap();
        for n in 0..=4 {
            assert_eq!(
                s.coefficient(n, &MarkerMonomial::constant()).unwrap(),
                rat(1, 1)
            );
        }
    }

    #[test]
    fn shepp_lloyd_matches_direct_enumeration() {
        // u^n coefficient = Prob(m_d = 0 for zeros, m_d in {0,k} for hits)
        let cases: &[(&[u32], &[(u32, u64)])] = &[
            (&[1], &[]),
            (&[2], &[]),
            (&[], &[(2, 1)]),
            (&[1], &[(2, 2)]),
            (&[3], &[(1, 2)]),
        ];
        for &(zero, hits) in cases {
            let s = shepp_lloyd_series(zero, hits, 9).unwrap();
            for n in 0..=9u32 {
                let mut expect = BigRational::zero();
                'lambda: for lambda in enumerate_partitions(n) {
                    for &d in zero {
                        if lambda.multiplicity(d) != 0 {
                            continue 'lambda;
                        }
                    }
                    for &(d, k) in hits {
                        let m = lambda.multiplicity(d) as u64;
                        if m != 0 && m != k {
                            continue 'lambda;
                        }
                    }
                    expect += class_weight(&lambda);
                }
                assert_eq!(
                    s.coefficient(n as usize, &MarkerMonomial::constant()).unwrap(),
                    expect,
                    "zero={zero:?} hits={hits:?} n={n}"
                );
            }
        }
    }

    #[test]
    fn shepp_lloyd_rejects_collisions() {
        assert!(matches!(
            shepp_lloyd_series(&[2], &[(2, 1)], 4),
            Err(Error::DegreeCollision(2))
        ));
    }

    #[test]
    fn poisson_limit_examples() {
        let p = poisson_limit(&[Constraint::new(1, 0)]).unwrap();
        assert_eq!(p.coeff, rat(1, 1));
        assert_eq!(p.exponent(), rat(1, 1));
        assert!((p.to_f64() - (-1.0f64).exp()).abs() < 1e-15);

        let p = poisson_limit(&[Constraint::new(1, 0), Constraint::new(2, 0)]).unwrap();
        assert_eq!(p.exponent(), rat(3, 2));

        let p = poisson_limit(&[Constraint::new(2, 1)]).unwrap();
        assert_eq!(p.coeff, rat(1, 2));
        assert_eq!(p.exponent(), rat(1, 2));
        assert_eq!(p.to_string_symbolic(), "(1/2) * e^(-1/2)");
    }
}
