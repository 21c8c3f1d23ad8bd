//! Named self-check suite: every closed-form formula in the crate compared
//! against an independent brute-force computation, plus a fault-injection
//! switch that perturbs one formula side to prove the checks can fail.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::cycleindex::{
    mat_distribution, shepp_lloyd_series, sym_cycle_index, sym_distribution, sym_joint_prob,
    Constraint,
};
use crate::fq::{
    squarefree_count, squarefree_nonzero_constant_count, FieldSpec, FqElem, MonicPoly,
};
use crate::oracle::{
    enumerate_matrix_distribution, enumerate_perm_distribution, nilpotent_count,
    nilpotent_count_brute, EnumerationBudget,
};
use crate::padic::coker_zero_prob_exact;
use crate::partitions::{
    aut_brute_force, aut_sum_closed_form, bounded_partition_identity_check, enumerate_partitions,
    macdonald_aut,
};
use crate::series::{MarkerMonomial, MultiPoly, TruncSeries};
use crate::Error;

/// Deliberate off-by-one perturbations of one formula side, used to confirm
/// that the corresponding check actually discriminates.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum FaultInjection {
    #[default]
    None,
    /// add 1 to the automorphism-count formula
    MacdonaldAut,
    /// add 1 to the nilpotent-count formula
    NilpotentCount,
    /// add 1 to the square-free-count formula
    SquarefreeCount,
}

impl FaultInjection {
    pub fn parse(s: &str) -> Result<FaultInjection, Error> {
        match s {
            "none" => Ok(FaultInjection::None),
            "macdonald-aut" => Ok(FaultInjection::MacdonaldAut),
            "nilpotent-count" => Ok(FaultInjection::NilpotentCount),
            "squarefree-count" => Ok(FaultInjection::SquarefreeCount),
            other => Err(Error::InvalidInput(format!(
                "unknown fault '{other}' (expected none, macdonald-aut, nilpotent-count, squarefree-count)"
            ))),
        }
    }
}

/// Grid sizes and budget for the check suite.
#[derive(Clone, Debug)]
pub struct CheckOptions {
    /// q values for the automorphism-sum identity grid
    pub qs: Vec<u64>,
    /// largest n for the automorphism-sum identity grid
    pub nmax: u32,
    pub budget: EnumerationBudget,
}

impl Default for CheckOptions {
    fn default() -> CheckOptions {
        CheckOptions {
            qs: vec![2, 3, 4],
            nmax: 7,
            budget: EnumerationBudget::default(),
        }
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// first failing case, or a one-line summary of what was covered
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &'static str, detail: String) -> CheckResult {
        CheckResult {
            name,
            passed: true,
            detail,
        }
    }

    fn fail(name: &'static str, detail: String) -> CheckResult {
        CheckResult {
            name,
            passed: false,
            detail,
        }
    }

    pub fn render(&self) -> String {
        format!(
            "{} {} — {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

pub const CHECK_NAMES: [&str; 11] = [
    "macdonald-aut",
    "nilpotent-count",
    "squarefree-count",
    "squarefree-nonzero-constant",
    "partition-bound-identity",
    "aut-sum-identity",
    "cycle-index-product",
    "partial-sum-series",
    "matrix-oracle",
    "perm-oracle",
    "cokernel-mod-p",
];

fn injected(value: BigInt, hit: bool) -> BigInt {
    if hit {
        value + BigInt::one()
    } else {
        value
    }
}

fn check_macdonald_aut(fault: FaultInjection, budget: EnumerationBudget) -> CheckResult {
    let name = "macdonald-aut";
    let mut covered = 0;
    for q in [2u64, 3] {
        for n in 0..=4u32 {
            for lambda in enumerate_partitions(n) {
                let formula = injected(
                    macdonald_aut(q, &lambda),
                    fault == FaultInjection::MacdonaldAut,
                );
                match aut_brute_force(q, &lambda, budget.0) {
                    Ok(brute) => {
                        if formula != brute {
                            return CheckResult::fail(
                                name,
                                format!(
                                    "q={q} lambda={:?}: formula {formula} != brute {brute}",
                                    lambda.parts()
                                ),
                            );
                        }
                        covered += 1;
                    }
                    Err(_) => continue, // over budget
                }
            }
        }
    }
    CheckResult::pass(name, format!("{covered} partitions vs endomorphism enumeration"))
}

fn check_nilpotent(fault: FaultInjection, budget: EnumerationBudget) -> CheckResult {
    let name = "nilpotent-count";
    for (q, n) in [(2u64, 1u32), (2, 2), (3, 2), (2, 3)] {
        let field = FieldSpec::prime(q).expect("prime");
        let formula = injected(nilpotent_count(q, n), fault == FaultInjection::NilpotentCount);
        let brute = match nilpotent_count_brute(&field, n, budget) {
            Ok(b) => b,
            Err(_) => continue,
        };
        if formula != brute {
            return CheckResult::fail(
                name,
                format!("q={q} n={n}: formula {formula} != brute {brute}"),
            );
        }
    }
    CheckResult::pass(name, "q^(n^2-n) vs exhaustive nilpotency test".into())
}

fn for_each_monic(field: &FieldSpec, n: u32, mut f: impl FnMut(&MonicPoly)) {
    let q = field.q();
    for enc in 0..q.pow(n) {
        let mut coeffs = Vec::with_capacity(n as usize + 1);
        let mut m = enc;
        for _ in 0..n {
            coeffs.push(field.elem(m % q));
            m /= q;
        }
        coeffs.push(FqElem::ONE);
        f(&MonicPoly::new(field, coeffs).expect("monic"));
    }
}

fn check_squarefree(fault: FaultInjection) -> CheckResult {
    let name = "squarefree-count";
    for q in [2u64, 3] {
        let field = FieldSpec::prime(q).expect("prime");
        for n in 1..=4u32 {
            let mut brute = 0u64;
            for_each_monic(&field, n, |f| {
                if f.is_squarefree() {
                    brute += 1;
                }
            });
            let formula = injected(
                squarefree_count(q, n),
                fault == FaultInjection::SquarefreeCount,
            );
            if formula != BigInt::from(brute) {
                return CheckResult::fail(
                    name,
                    format!("q={q} n={n}: formula {formula} != brute {brute}"),
                );
            }
        }
    }
    CheckResult::pass(name, "q^n - q^(n-1) vs gcd(f, f') enumeration".into())
}

fn check_squarefree_nonzero_constant() -> CheckResult {
    let name = "squarefree-nonzero-constant";
    for q in [2u64, 3] {
        let field = FieldSpec::prime(q).expect("prime");
        for n in 1..=4u32 {
            let mut brute = 0u64;
            for_each_monic(&field, n, |f| {
                if f.is_squarefree() && !f.coeffs()[0].is_zero() {
                    brute += 1;
                }
            });
            let formula = squarefree_nonzero_constant_count(q, n);
            if formula != BigInt::from(brute) {
                return CheckResult::fail(
                    name,
                    format!("q={q} n={n}: formula {formula} != brute {brute}"),
                );
            }
        }
    }
    CheckResult::pass(name, "alternating closed form vs enumeration".into())
}

fn check_partition_bound() -> CheckResult {
    let name = "partition-bound-identity";
    for n in 1..=6u32 {
        if !bounded_partition_identity_check(n, 18) {
            return CheckResult::fail(name, format!("bound n={n}, truncation 18"));
        }
    }
    CheckResult::pass(
        name,
        "parts <= n vs rows <= n generating functions to order 18".into(),
    )
}

fn check_aut_sum(options: &CheckOptions) -> CheckResult {
    let name = "aut-sum-identity";
    for &q in &options.qs {
        for n in 1..=options.nmax {
            let mut sum = BigRational::zero();
            for lambda in enumerate_partitions(n) {
                sum += BigRational::new(BigInt::one(), macdonald_aut(q, &lambda));
            }
            let closed = aut_sum_closed_form(q, n);
            if sum != closed {
                return CheckResult::fail(name, format!("q={q} n={n}: {sum} != {closed}"));
            }
        }
    }
    CheckResult::pass(
        name,
        "sum of 1/|Aut| over partitions vs q^-n / prod (1 - q^-j)".into(),
    )
}

fn check_cycle_index_product() -> CheckResult {
    let name = "cycle-index-product";
    let nmax = 7usize;
    let tracked: Vec<u32> = (1..=nmax as u32).collect();
    let mut product = TruncSeries::one(nmax);
    for d in 1..=nmax {
        let mut arg = TruncSeries::zero(nmax);
        arg.set_coeff(
            d,
            MultiPoly::term(
                MarkerMonomial::marker(d as u32),
                BigRational::new(BigInt::one(), BigInt::from(d as u64)),
            ),
        );
        product = product
            .mul(&arg.exp().expect("zero constant term"))
            .expect("orders match");
    }
    for n in 0..=nmax {
        let direct = sym_cycle_index(n as u32, &tracked);
        if product.coeff(n) != &direct {
            return CheckResult::fail(name, format!("u^{n} coefficient differs"));
        }
    }
    CheckResult::pass(name, "partition sum vs prod exp(x_d u^d / d) to order 7".into())
}

fn check_partial_sum_series() -> CheckResult {
    let name = "partial-sum-series";
    let order = 10usize;
    let series = shepp_lloyd_series(&[1], &[], order).expect("valid constraints");
    for n in 0..=order {
        let coeff = series
            .coefficient(n, &MarkerMonomial::constant())
            .expect("in range");
        let direct = sym_joint_prob(n as u32, &[Constraint::new(1, 0)]).expect("distinct");
        if coeff != direct {
            return CheckResult::fail(name, format!("u^{n}: {coeff} != {direct}"));
        }
    }
    CheckResult::pass(
        name,
        "closed-form generating function vs direct class sums to order 10".into(),
    )
}

fn check_matrix_oracle(budget: EnumerationBudget) -> CheckResult {
    let name = "matrix-oracle";
    for (n, q) in [(1u32, 2u64), (1, 3), (2, 2), (2, 3), (3, 2)] {
        let field = FieldSpec::prime(q).expect("prime");
        let tracked: Vec<u32> = (1..=n).collect();
        let brute = match enumerate_matrix_distribution(&field, n, &tracked, budget) {
            Ok(d) => d,
            Err(_) => continue,
        };
        let formula = mat_distribution(n, q, &tracked).expect("valid");
        if brute.entries() != formula.entries() {
            return CheckResult::fail(name, format!("n={n} q={q}: distributions differ"));
        }
    }
    CheckResult::pass(
        name,
        "generating-function distribution vs exhaustive Mat_n(F_q)".into(),
    )
}

fn check_perm_oracle(budget: EnumerationBudget) -> CheckResult {
    let name = "perm-oracle";
    for n in 0..=6u32 {
        let tracked: Vec<u32> = (1..=n.max(1)).collect();
        let brute = match enumerate_perm_distribution(n, &tracked, budget) {
            Ok(d) => d,
            Err(_) => continue,
        };
        let formula = sym_distribution(n, &tracked);
        if brute.entries() != formula.entries() {
            return CheckResult::fail(name, format!("n={n}: distributions differ"));
        }
    }
    CheckResult::pass(name, "class-sum distribution vs all n! permutations".into())
}

fn check_cokernel_mod_p(budget: EnumerationBudget) -> CheckResult {
    let name = "cokernel-mod-p";
    for (p, n) in [(2u64, 2u32), (3, 2), (2, 3)] {
        let exact = coker_zero_prob_exact(p, n, &[1]).expect("valid");
        let field = FieldSpec::prime(p).expect("prime");
        let brute = match enumerate_matrix_distribution(&field, n, &[1], budget) {
            Ok(d) => d,
            Err(_) => continue,
        };
        let reference = brute
            .prob_constraints(&[Constraint::new(1, 0)])
            .expect("distinct");
        if exact != reference {
            return CheckResult::fail(name, format!("p={p} n={n}: {exact} != {reference}"));
        }
    }
    CheckResult::pass(
        name,
        "coker-zero probability vs no-linear-factor matrix enumeration".into(),
    )
}

/// Run every named check. Returns one result per entry of [`CHECK_NAMES`],
/// in that order.
pub fn run_checks(fault: FaultInjection, options: &CheckOptions) -> Vec<CheckResult> {
    let budget = options.budget;
    vec![
        check_macdonald_aut(fault, budget),
        check_nilpotent(fault, budget),
        check_squarefree(fault),
        check_squarefree_nonzero_constant(),
        check_partition_bound(),
        check_aut_sum(options),
        check_cycle_index_product(),
        check_partial_sum_series(),
        check_matrix_oracle(budget),
        check_perm_oracle(budget),
        check_cokernel_mod_p(budget),
    ]
}
