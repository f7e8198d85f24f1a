//! Entanglement witnessing through adjacent-pair independence and one-sided
//! topology compatibility checks.
//!
//! A pure `n`-party state that is separable somewhere along the party order
//! has some adjacent pair whose reduced distribution factorizes, so finding
//! every pair dependent witnesses genuine `n`-party entanglement with `n-1`
//! two-party tests. The converse fails on a measure-zero set, which is why
//! the negative verdict is `Inconclusive`, never "separable": all pair
//! deviations `P(a,b) - p(a)p(b)` sum to zero, so equality across one basis
//! proves nothing.

use crate::dist::OutcomeDistribution;
use crate::error::{Error, Result};
use crate::fis::{
    facet_weights, fis_family, fis_greedy, fis_optimal, FacetVariant, FamilyVariant,
    FractionalWeights,
};
use crate::inequality::{check_config, ViolationReport};
use crate::quantum::{born_distribution, MeasurementBasis, NetworkQuantumState};
use crate::topology::{BuiltinKind, NetworkTopology};

/// Purity floor for accepting a state as pure.
pub const PURITY_TOL: f64 = 1e-9;

/// Result of one adjacent-pair test.
#[derive(Debug, Clone, PartialEq)]
pub enum PairVerdict {
    /// Some outcome deviates from the product of marginals beyond the
    /// tolerance; the strongest deviation is reported (its sign can be
    /// negative, which certifies dependence just as well).
    Dependent {
        outcome: (usize, usize),
        margin: f64,
    },
    IndependentWithinTol,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Overall {
    Entangled,
    Inconclusive,
}

/// One tested pair: which parties, and what came out.
#[derive(Debug, Clone, PartialEq)]
pub struct PairTest {
    /// 0-based party indices.
    pub parties: (usize, usize),
    pub verdict: PairVerdict,
}

#[derive(Debug, Clone)]
pub struct WitnessVerdict {
    pub pairs: Vec<PairTest>,
    pub overall: Overall,
    pub tolerance: f64,
}

impl WitnessVerdict {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for test in &self.pairs {
            let (i, j) = (test.parties.0 + 1, test.parties.1 + 1);
            match &test.verdict {
                PairVerdict::Dependent { outcome, margin } => out.push_str(&format!(
                    "pair ({i},{j}): DEPENDENT margin={:+.9e} at ({},{})\n",
                    margin, outcome.0, outcome.1
                )),
                PairVerdict::IndependentWithinTol => {
                    out.push_str(&format!("pair ({i},{j}): INDEPENDENT\n"))
                }
            }
        }
        out.push_str(match self.overall {
            Overall::Entangled => "ENTANGLED",
            Overall::Inconclusive => "INCONCLUSIVE",
        });
        out
    }
}

/// Scan a two-party distribution for any deviation from marginal
/// independence. Both directions count: the deviations sum to zero, so a
/// negative one implies a positive one elsewhere.
pub fn pair_independence(d2: &OutcomeDistribution, tolerance: f64) -> Result<PairVerdict> {
    if d2.n_parties() != 2 {
        return Err(Error::Distribution(format!(
            "pair test needs exactly 2 parties, got {}",
            d2.n_parties()
        )));
    }
    let marginals = d2.marginals();
    let mut best: Option<((usize, usize), f64)> = None;
    for (outcome, p) in d2.iter() {
        let dev = p - marginals[0][outcome[0]] * marginals[1][outcome[1]];
        let stronger = match &best {
            None => true,
            Some((_, b)) => dev.abs() > b.abs(),
        };
        if stronger {
            best = Some(((outcome[0], outcome[1]), dev));
        }
    }
    match best {
        Some((outcome, margin)) if margin.abs() > tolerance => {
            Ok(PairVerdict::Dependent { outcome, margin })
        }
        _ => Ok(PairVerdict::IndependentWithinTol),
    }
}

/// Test the `n-1` adjacent pairs of a pure state under the given bases
/// (computational by default). `Entangled` iff every pair is dependent.
pub fn witness_entanglement(
    state: &NetworkQuantumState,
    bases: Option<&[MeasurementBasis]>,
    tolerance: f64,
) -> Result<WitnessVerdict> {
    let n = state.n_parties();
    if n < 2 {
        return Err(Error::Bounds("witnessing needs at least 2 parties".into()));
    }
    let adjacent: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    witness_entanglement_over(state, &adjacent, bases, tolerance)
}

/// Same test over a caller-chosen pairing (0-based party indices). Any
/// spanning tree of the parties is sound: a state separable across some
/// bipartition has a tree edge crossing it, and that pair factorizes.
pub fn witness_entanglement_over(
    state: &NetworkQuantumState,
    pair_list: &[(usize, usize)],
    bases: Option<&[MeasurementBasis]>,
    tolerance: f64,
) -> Result<WitnessVerdict> {
    let n = state.n_parties();
    if pair_list.is_empty() {
        return Err(Error::Bounds("witnessing needs at least one pair".into()));
    }
    for &(i, j) in pair_list {
        if i >= n || j >= n || i == j {
            return Err(Error::Bounds(format!("bad pair ({}, {})", i + 1, j + 1)));
        }
    }
    let purity = state.purity();
    if purity < 1.0 - PURITY_TOL {
        return Err(Error::State(format!(
            "witnessing needs a pure state; purity is {purity}"
        )));
    }
    let default_bases;
    let bases = match bases {
        Some(b) => b,
        None => {
            default_bases = state.computational_bases()?;
            &default_bases
        }
    };
    let joint = born_distribution(state, bases)?;
    let mut pairs = Vec::with_capacity(pair_list.len());
    for &(i, j) in pair_list {
        let reduced = joint.marginal(&[i, j])?;
        pairs.push(PairTest {
            parties: (i, j),
            verdict: pair_independence(&reduced, tolerance)?,
        });
    }
    let overall = if pairs
        .iter()
        .all(|p| matches!(p.verdict, PairVerdict::Dependent { .. }))
    {
        Overall::Entangled
    } else {
        Overall::Inconclusive
    };
    Ok(WitnessVerdict {
        pairs,
        overall,
        tolerance,
    })
}

/// Star-form test over a coarse-grained block distribution:
/// `P(S_1..S_k) <= prod_i P(s_i)^{(m-1)/m}`. A violation refutes
/// separability across the partition that produced the blocks.
pub fn k_separability_test(
    d_blocks: &OutcomeDistribution,
    m: u64,
    tolerance: f64,
) -> Result<ViolationReport> {
    let k = d_blocks.n_parties();
    if k < 2 {
        return Err(Error::Bounds(
            "k-separability needs at least 2 blocks".into(),
        ));
    }
    if m < 2 {
        return Err(Error::Bounds("k-separability needs m >= 2".into()));
    }
    let w = crate::dist::big((m - 1) as i64) / crate::dist::big(m as i64);
    let weights = FractionalWeights::user(vec![w; k]);
    check_config(d_blocks, &weights, tolerance)
}

/// Weight-synthesis strategies for [`compatibility_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Greedy,
    Optimal,
    Family { m: u64, k: u64 },
    Facet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Compatibility {
    Incompatible,
    NotRefuted,
}

#[derive(Debug, Clone)]
pub struct CompatibilityVerdict {
    pub candidate: String,
    pub weights: FractionalWeights,
    pub report: ViolationReport,
    pub conclusion: Compatibility,
}

impl CompatibilityVerdict {
    pub fn render(&self) -> String {
        match self.conclusion {
            Compatibility::Incompatible => {
                format!(
                    "INCOMPATIBLE with {} ({})",
                    self.candidate,
                    self.report.summary()
                )
            }
            Compatibility::NotRefuted => format!("NOT REFUTED ({})", self.candidate),
        }
    }
}

fn describe(t: &NetworkTopology) -> String {
    match t.classify() {
        Some((BuiltinKind::Chain, n, _)) => format!("chain-{n}"),
        Some((BuiltinKind::Star, n, _)) => format!("star-{n}"),
        Some((BuiltinKind::Cycle, n, _)) => format!("cycle-{n}"),
        Some((BuiltinKind::Complete, n, a)) => format!("complete-{n} (arity {a})"),
        Some((BuiltinKind::SingleSource, n, _)) => format!("single-source-{n}"),
        None => format!(
            "network with {} parties, {} sources",
            t.n_parties(),
            t.n_sources()
        ),
    }
}

/// Synthesize weights for a candidate topology per the strategy.
pub fn strategy_weights(
    candidate: &NetworkTopology,
    strategy: Strategy,
) -> Result<FractionalWeights> {
    match strategy {
        Strategy::Greedy => Ok(fis_greedy(candidate)),
        Strategy::Optimal => fis_optimal(candidate, None),
        Strategy::Family { m, k } => {
            let n = candidate.n_parties();
            match candidate.classify() {
                Some((BuiltinKind::Complete, _, arity)) => {
                    fis_family(BuiltinKind::Complete, n, arity as u64, 1, FamilyVariant::A)
                }
                Some((BuiltinKind::SingleSource, _, _)) => {
                    let w = crate::dist::big(1) / crate::dist::big(n as i64);
                    Ok(FractionalWeights::user(vec![w; n]))
                }
                Some((kind, _, _)) => fis_family(kind, n, m, k, FamilyVariant::A)
                    .or_else(|_| fis_family(kind, n, m, k, FamilyVariant::B)),
                None => Err(Error::Bounds(
                    "family strategy needs a chain/star/cycle/complete/single-source candidate"
                        .into(),
                )),
            }
        }
        Strategy::Facet => {
            let n = candidate.n_parties();
            match candidate.classify() {
                Some((kind @ (BuiltinKind::Chain | BuiltinKind::Cycle), _, _)) => {
                    facet_weights(kind, n, FacetVariant::OddParties)
                        .or_else(|_| facet_weights(kind, n, FacetVariant::EvenParties))
                }
                Some((BuiltinKind::Star, _, _)) => {
                    facet_weights(BuiltinKind::Star, n, FacetVariant::Hub)
                }
                _ => Err(Error::Bounds(
                    "facet strategy needs a chain/star/cycle candidate".into(),
                )),
            }
        }
    }
}

/// One-sided refutation: a violated configuration inequality proves the
/// distribution cannot come from the candidate; `NotRefuted` proves nothing.
pub fn compatibility_check(
    d: &OutcomeDistribution,
    candidate: &NetworkTopology,
    strategy: Strategy,
    tolerance: f64,
) -> Result<CompatibilityVerdict> {
    if candidate.n_parties() != d.n_parties() {
        return Err(Error::Distribution(format!(
            "distribution has {} parties, candidate has {}",
            d.n_parties(),
            candidate.n_parties()
        )));
    }
    let weights = strategy_weights(candidate, strategy)?;
    let report = check_config(d, &weights, tolerance)?;
    let conclusion = if report.violated {
        Compatibility::Incompatible
    } else {
        Compatibility::NotRefuted
    };
    Ok(CompatibilityVerdict {
        candidate: describe(candidate),
        weights,
        report,
        conclusion,
    })
}
