//! Evaluation of configuration inequalities `P(a) <= prod_j p(a_j)^{s_j}`.
//!
//! Exponent conventions: `0^0 = 1` (so facet weights with `s_j = 0` ignore
//! the marginal entirely) and `0^s = 0` for `s > 0`. An outcome whose
//! right-hand side vanishes that way can never carry probability, because
//! the marginal dominates the joint; this is asserted rather than assumed.
//!
//! Every outcome in the support is evaluated. Reports carry the absolute
//! margin `lhs - rhs` and the ratio `lhs/rhs` for scan stability, and the
//! maximum is tie-broken toward the lexicographically smallest outcome.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dist::{OutcomeDistribution, RationalDistribution};
use crate::error::{Error, Result};
use crate::fis::FractionalWeights;

/// Default margin above which a violation is declared; the noise floor of
/// float exponentiation.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct ReportEntry {
    pub outcome: Vec<usize>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub ratio: f64,
}

/// Per-outcome evaluation plus the maximal violation.
#[derive(Debug, Clone)]
pub struct ViolationReport {
    pub entries: Vec<ReportEntry>,
    pub max_margin: f64,
    pub argmax: Option<Vec<usize>>,
    pub violated: bool,
    pub tolerance: f64,
}

impl ViolationReport {
    fn from_entries(entries: Vec<ReportEntry>, tolerance: f64) -> Self {
        let mut max_margin = f64::NEG_INFINITY;
        let mut argmax = None;
        for e in &entries {
            if e.margin > max_margin {
                max_margin = e.margin;
                argmax = Some(e.outcome.clone());
            }
        }
        if entries.is_empty() {
            max_margin = 0.0;
        }
        ViolationReport {
            violated: max_margin > tolerance,
            entries,
            max_margin,
            argmax,
            tolerance,
        }
    }

    pub fn margin_at(&self, outcome: &[usize]) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.outcome == outcome)
            .map(|e| e.margin)
    }

    /// One line per evaluated outcome plus the summary line.
    pub fn render(&self) -> String {
        let mut out = String::from("outcome lhs rhs margin\n");
        for e in &self.entries {
            let outcome = e
                .outcome
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!(
                "({outcome}) {:.9e} {:.9e} {:+.9e}\n",
                e.lhs, e.rhs, e.margin
            ));
        }
        out.push_str(&self.summary());
        out
    }

    pub fn summary(&self) -> String {
        if self.violated {
            let at = self
                .argmax
                .as_ref()
                .map(|o| {
                    o.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .unwrap_or_default();
            format!("VIOLATED margin={:.9e} at ({at})", self.max_margin)
        } else {
            "SATISFIED".to_string()
        }
    }
}

fn validate_weights(d: &OutcomeDistribution, w: &FractionalWeights) -> Result<Vec<f64>> {
    if w.len() != d.n_parties() {
        return Err(Error::WeightLength {
            got: w.len(),
            want: d.n_parties(),
        });
    }
    let exps = w.to_f64();
    if exps.iter().any(|&s| !(0.0..=1.0).contains(&s)) {
        return Err(Error::Bounds("weights must lie in [0,1]".into()));
    }
    Ok(exps)
}

fn rhs_product(marginals: &[Vec<f64>], outcome: &[usize], exponents: &[f64]) -> f64 {
    let mut rhs = 1.0;
    for ((m, &a), &s) in marginals.iter().zip(outcome).zip(exponents) {
        if s == 0.0 {
            continue; // 0^0 = 1 convention
        }
        let p = m[a];
        rhs *= if s == 1.0 { p } else { p.powf(s) };
    }
    rhs
}

/// Evaluate `P(a) <= prod_j p(a_j)^{s_j}` on every support outcome.
pub fn check_config(
    d: &OutcomeDistribution,
    w: &FractionalWeights,
    tolerance: f64,
) -> Result<ViolationReport> {
    let exps = validate_weights(d, w)?;
    let marginals = d.marginals();
    let mut entries = Vec::new();
    for (outcome, lhs) in d.iter() {
        if lhs <= 0.0 {
            continue;
        }
        for (j, &a) in outcome.iter().enumerate() {
            if exps[j] > 0.0 && marginals[j][a] == 0.0 {
                return Err(Error::Internal(format!(
                    "outcome {outcome:?} has probability {lhs} but party {} marginal is 0",
                    j + 1
                )));
            }
        }
        let rhs = rhs_product(&marginals, &outcome, &exps);
        entries.push(ReportEntry {
            outcome,
            lhs,
            rhs,
            margin: lhs - rhs,
            ratio: lhs / rhs,
        });
    }
    Ok(ViolationReport::from_entries(entries, tolerance))
}

/// The two-sided chain form: for each outcome the bound is the smaller of
/// the two alternating exponent assignments `(k/m, (m-k)/m, k/m, ...)` and
/// `((m-k)/m, k/m, (m-k)/m, ...)` over the 1-based party order.
pub fn chain_min_check(
    d: &OutcomeDistribution,
    m: u64,
    k: u64,
    tolerance: f64,
) -> Result<ViolationReport> {
    if d.n_parties() < 2 {
        return Err(Error::Bounds(
            "the chain form needs at least 2 parties".into(),
        ));
    }
    if m < 2 || k == 0 || k > m - 1 {
        return Err(Error::Bounds(format!(
            "chain form needs m >= 2, 1 <= k <= m-1 (got m={m}, k={k})"
        )));
    }
    let n = d.n_parties();
    let lo = k as f64 / m as f64;
    let hi = (m - k) as f64 / m as f64;
    let assign_a: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { lo } else { hi }).collect();
    let assign_b: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { hi } else { lo }).collect();
    let marginals = d.marginals();
    let mut entries = Vec::new();
    for (outcome, lhs) in d.iter() {
        if lhs <= 0.0 {
            continue;
        }
        let ra = rhs_product(&marginals, &outcome, &assign_a);
        let rb = rhs_product(&marginals, &outcome, &assign_b);
        let rhs = ra.min(rb);
        entries.push(ReportEntry {
            outcome,
            lhs,
            rhs,
            margin: lhs - rhs,
            ratio: lhs / rhs,
        });
    }
    Ok(ViolationReport::from_entries(entries, tolerance))
}

/// Maximum of `lhs - rhs` over all outcomes, with its argmax (lexicographic
/// tie-break).
pub fn max_violation(d: &OutcomeDistribution, w: &FractionalWeights) -> Result<(f64, Vec<usize>)> {
    let report = check_config(d, w, DEFAULT_TOL)?;
    let outcome = report
        .argmax
        .clone()
        .unwrap_or_else(|| vec![0; d.n_parties()]);
    Ok((report.max_margin, outcome))
}

/// The expectation form: `E[prod f_j] <= prod_j ||f_j||_{1/s_j}` with
/// `||f||_{1/s} = E[f^{1/s}]^s` and the `s = 0` factor read as the
/// supremum of `f_j` over the party's support.
pub fn expectation_finner(
    d: &OutcomeDistribution,
    post_functions: &[Vec<f64>],
    w: &FractionalWeights,
    tolerance: f64,
) -> Result<(f64, f64, bool)> {
    let exps = validate_weights(d, w)?;
    if post_functions.len() != d.n_parties() {
        return Err(Error::Bounds(format!(
            "{} post-processing functions for {} parties",
            post_functions.len(),
            d.n_parties()
        )));
    }
    for (j, (f, &k)) in post_functions.iter().zip(d.alphabets()).enumerate() {
        if f.len() != k {
            return Err(Error::Bounds(format!(
                "party {} post-processing has {} values for alphabet {k}",
                j + 1,
                f.len()
            )));
        }
        if f.iter().any(|&x| x < 0.0) {
            return Err(Error::Bounds(
                "post-processing values must be nonnegative".into(),
            ));
        }
    }
    let mut lhs = 0.0;
    for (outcome, p) in d.iter() {
        if p == 0.0 {
            continue;
        }
        let prod: f64 = outcome
            .iter()
            .zip(post_functions)
            .map(|(&a, f)| f[a])
            .product();
        lhs += p * prod;
    }
    let marginals = d.marginals();
    let mut rhs = 1.0;
    for ((f, m), &s) in post_functions.iter().zip(&marginals).zip(&exps) {
        if s == 0.0 {
            let sup = f
                .iter()
                .zip(m)
                .filter(|(_, &p)| p > 0.0)
                .map(|(&x, _)| x)
                .fold(0.0f64, f64::max);
            rhs *= sup;
        } else {
            let mean: f64 = f
                .iter()
                .zip(m)
                .map(|(&x, &p)| if p > 0.0 { p * x.powf(1.0 / s) } else { 0.0 })
                .sum();
            rhs *= mean.powf(s);
        }
    }
    Ok((lhs, rhs, lhs <= rhs + tolerance))
}

fn pow_u64(base: &BigRational, exp: u64) -> BigRational {
    let mut result = BigRational::one();
    let mut base = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= &base;
        }
        e >>= 1;
        if e > 0 {
            let sq = &base * &base;
            base = sq;
        }
    }
    result
}

/// Exact check of `P(a) <= prod p(a_j)^{s_j}` for a rational table and
/// rational weights, by clearing exponents: with `s_j = n_j / M` over the
/// common denominator `M`, compare `lhs^M` against `prod p_j^{n_j}`.
/// Returns the first violating outcome, if any.
pub fn check_config_exact(
    d: &RationalDistribution,
    w: &FractionalWeights,
) -> Result<Option<Vec<usize>>> {
    if w.len() != d.alphabets.len() {
        return Err(Error::WeightLength {
            got: w.len(),
            want: d.alphabets.len(),
        });
    }
    for s in w.weights() {
        if s.is_negative() || s > &BigRational::one() {
            return Err(Error::Bounds("weights must lie in [0,1]".into()));
        }
    }
    let mut m_common = BigInt::one();
    for s in w.weights() {
        m_common = m_common.lcm(s.denom());
    }
    let m_u64 = m_common
        .to_u64()
        .ok_or_else(|| Error::Bounds("weight denominators too large for exact check".into()))?;
    let numerators: Vec<u64> = w
        .weights()
        .iter()
        .map(|s| {
            let scaled = s * BigRational::from_integer(m_common.clone());
            scaled.to_integer().to_u64().unwrap()
        })
        .collect();
    let marginals = d.marginals();
    let mut outcome = vec![0usize; d.alphabets.len()];
    loop {
        let lhs = d.prob(&outcome);
        if lhs > &BigRational::zero() {
            let lhs_pow = pow_u64(lhs, m_u64);
            let mut rhs_pow = BigRational::one();
            for ((m, &a), &e) in marginals.iter().zip(&outcome).zip(&numerators) {
                if e > 0 {
                    rhs_pow *= pow_u64(&m[a], e);
                }
            }
            if lhs_pow > rhs_pow {
                return Ok(Some(outcome));
            }
        }
        if !crate::dist::increment(&mut outcome, &d.alphabets) {
            return Ok(None);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::big;
    use crate::fis::FractionalWeights;

    fn ratio(n: i64, d: i64) -> BigRational {
        big(n) / big(d)
    }

    fn half_weights(n: usize) -> FractionalWeights {
        FractionalWeights::user(vec![ratio(1, 2); n])
    }

    fn w_type(p: f64) -> OutcomeDistribution {
        // p[001] + (1-p)/2 ([010] + [100])
        let mut probs = vec![0.0; 8];
        probs[0b001] = p;
        probs[0b010] = (1.0 - p) / 2.0;
        probs[0b100] = (1.0 - p) / 2.0;
        OutcomeDistribution::new(vec![2, 2, 2], probs).unwrap()
    }

    fn ew(theta1: f64, theta2: f64) -> OutcomeDistribution {
        let (c1, s1) = (theta1.cos().powi(2), theta1.sin().powi(2));
        let (c2, s2) = (theta2.cos().powi(2), theta2.sin().powi(2));
        let mut probs = vec![0.0; 16];
        probs[0] = c1 * c2;
        probs[3] = c1 * s2; // (0,1,1)
        probs[12] = s1 * c2; // (1,2,0)
        probs[15] = s1 * s2; // (1,3,1)
        OutcomeDistribution::new(vec![2, 4, 2], probs).unwrap()
    }

    #[test]
    fn w_distribution_violates_the_chain_facet() {
        let d = w_type(0.5);
        let facet = FractionalWeights::user(vec![big(1), big(0), big(1)]);
        let r = check_config(&d, &facet, DEFAULT_TOL).unwrap();
        // margin at (0,0,1): 1/2 - p_a(0) p_c(1) = 1/2 - (3/4)(1/2) = 1/8
        assert!((r.margin_at(&[0, 0, 1]).unwrap() - 0.125).abs() < 1e-12);
        assert!(r.violated);
    }

    #[test]
    fn swapping_distribution_saturates_the_finner_bound() {
        let d = ew(0.8, 0.3);
        let r = check_config(&d, &half_weights(3), DEFAULT_TOL).unwrap();
        assert!(!r.violated);
        assert!(r.max_margin.abs() < 1e-12);
    }

    #[test]
    fn point_mass_with_unit_weight_is_tight() {
        let mut probs = vec![0.0; 4];
        probs[3] = 1.0;
        let d = OutcomeDistribution::new(vec![2, 2], probs).unwrap();
        let w = FractionalWeights::user(vec![big(1), big(0)]);
        let r = check_config(&d, &w, DEFAULT_TOL).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert!((r.entries[0].lhs - 1.0).abs() < 1e-15);
        assert!((r.entries[0].rhs - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ghz_against_triangle_weights() {
        // P(000) = cos^2, marginals cos^2 each: margin cos^2 - cos^3
        let theta: f64 = 0.7;
        let (c2, s2) = (theta.cos().powi(2), theta.sin().powi(2));
        let mut probs = vec![0.0; 8];
        probs[0] = c2;
        probs[7] = s2;
        let d = OutcomeDistribution::new(vec![2, 2, 2], probs).unwrap();
        let r = check_config(&d, &half_weights(3), DEFAULT_TOL).unwrap();
        assert!((r.margin_at(&[0, 0, 0]).unwrap() - (c2 - c2.powf(1.5))).abs() < 1e-12);
        assert!(r.violated);
    }

    #[test]
    fn all_zero_weights_bound_by_one() {
        let d = w_type(0.3);
        let w = FractionalWeights::user(vec![big(0); 3]);
        let r = check_config(&d, &w, DEFAULT_TOL).unwrap();
        for e in &r.entries {
            assert_eq!(e.rhs, 1.0);
        }
        assert!(!r.violated);
    }

    #[test]
    fn chain_min_reduces_to_finner_at_m2() {
        let d = ew(0.6, 1.0);
        let two_sided = chain_min_check(&d, 2, 1, DEFAULT_TOL).unwrap();
        let finner = check_config(&d, &half_weights(3), DEFAULT_TOL).unwrap();
        for (a, b) in two_sided.entries.iter().zip(&finner.entries) {
            assert_eq!(a.outcome, b.outcome);
            assert!((a.margin - b.margin).abs() < 1e-12);
        }
    }

    #[test]
    fn chain_min_on_swapping_is_not_violated() {
        let d = ew(0.5, 0.9);
        let r = chain_min_check(&d, 2, 1, DEFAULT_TOL).unwrap();
        assert!(!r.violated);
    }

    #[test]
    fn chain_min_parameter_bounds() {
        let d = ew(0.5, 0.9);
        assert!(chain_min_check(&d, 1, 1, DEFAULT_TOL).is_err());
        assert!(chain_min_check(&d, 5, 0, DEFAULT_TOL).is_err());
        assert!(chain_min_check(&d, 5, 5, DEFAULT_TOL).is_err());
    }

    #[test]
    fn max_violation_ghz_large_m() {
        // GHZ computational against the chain form with large m: the
        // all-zero outcome gives cos^2 vs cos^2^((2m-1)/m)
        let theta: f64 = 0.9;
        let c2 = theta.cos().powi(2);
        let mut probs = vec![0.0; 8];
        probs[0] = c2;
        probs[7] = 1.0 - c2;
        let d = OutcomeDistribution::new(vec![2, 2, 2], probs).unwrap();
        let r = chain_min_check(&d, 1000, 1, DEFAULT_TOL).unwrap();
        assert!(r.violated);
        let expected = c2 - c2.powf((2.0 * 1000.0 - 1.0) / 1000.0);
        assert!((r.margin_at(&[0, 0, 0]).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn uniform_product_satisfies_single_source_weights() {
        // product distribution, weights summing to <= 1 never violate
        let probs = vec![0.25; 4];
        let d = OutcomeDistribution::new(vec![2, 2], probs).unwrap();
        let w = FractionalWeights::user(vec![ratio(1, 3), ratio(1, 3)]);
        let (margin, _) = max_violation(&d, &w).unwrap();
        assert!(margin <= 1e-12);
    }

    #[test]
    fn indicator_post_processing_reduces_to_check_config() {
        let d = w_type(0.4);
        let w = half_weights(3);
        let outcome = [0usize, 0, 1];
        let fs: Vec<Vec<f64>> = (0..3)
            .map(|j| {
                let mut f = vec![0.0; 2];
                f[outcome[j]] = 1.0;
                f
            })
            .collect();
        let (lhs, rhs, _) = expectation_finner(&d, &fs, &w, DEFAULT_TOL).unwrap();
        let report = check_config(&d, &w, DEFAULT_TOL).unwrap();
        let entry = report
            .entries
            .iter()
            .find(|e| e.outcome == outcome)
            .unwrap();
        assert!((lhs - entry.lhs).abs() < 1e-12);
        assert!((rhs - entry.rhs).abs() < 1e-12);
    }

    #[test]
    fn constant_one_post_processing_is_tight() {
        let d = w_type(0.7);
        let fs = vec![vec![1.0; 2]; 3];
        let (lhs, rhs, sat) = expectation_finner(&d, &fs, &half_weights(3), DEFAULT_TOL).unwrap();
        assert!((lhs - 1.0).abs() < 1e-12);
        assert!((rhs - 1.0).abs() < 1e-12);
        assert!(sat);
    }

    #[test]
    fn negative_post_processing_rejected() {
        let d = w_type(0.7);
        let fs = vec![vec![1.0, -0.1], vec![1.0, 1.0], vec![1.0, 1.0]];
        assert!(expectation_finner(&d, &fs, &half_weights(3), DEFAULT_TOL).is_err());
    }

    #[test]
    fn exact_check_agrees_with_float_check() {
        // perfect correlation violates the pair facet, exactly
        let d = RationalDistribution {
            alphabets: vec![2, 2],
            probs: vec![ratio(1, 2), big(0), big(0), ratio(1, 2)],
        };
        let half = FractionalWeights::user(vec![ratio(1, 2), ratio(1, 2)]);
        // perfect correlation saturates the square-root bound exactly
        assert_eq!(check_config_exact(&d, &half).unwrap(), None);
        let w = FractionalWeights::user(vec![big(1), big(1)]);
        let worst = check_config_exact(&d, &w).unwrap();
        assert_eq!(worst, Some(vec![0, 0]));
        // and the product table does not
        let q = ratio(1, 4);
        let d = RationalDistribution {
            alphabets: vec![2, 2],
            probs: vec![q.clone(); 4],
        };
        assert_eq!(check_config_exact(&d, &w).unwrap(), None);
        assert_eq!(check_config_exact(&d, &half).unwrap(), None);
    }

    #[test]
    fn report_renders_summary() {
        let d = w_type(0.5);
        let facet = FractionalWeights::user(vec![big(1), big(0), big(1)]);
        let r = check_config(&d, &facet, DEFAULT_TOL).unwrap();
        assert!(r.render().contains("VIOLATED"));
        let sat = check_config(&ew(0.4, 0.4), &half_weights(3), DEFAULT_TOL).unwrap();
        assert_eq!(sat.summary(), "SATISFIED");
    }
}
