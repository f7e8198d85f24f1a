//! Joint outcome distributions over per-party finite alphabets.
//!
//! Stored dense in row-major order (party 1 slowest). Document form lists
//! only nonzero entries; omitted outcomes are zero.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How far the total probability may drift from 1.
pub const SUM_TOL: f64 = 1e-9;
/// Entries more negative than this are an internal-consistency error.
pub const NEG_TOL: f64 = 1e-12;

/// A joint probability table over `n` parties with alphabet sizes `k_j + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    alphabets: Vec<usize>,
    probs: Vec<f64>,
    party_names: Option<Vec<String>>,
}

impl OutcomeDistribution {
    /// Wrap a dense table. Clamps entries in `[-1e-12, 0)` to zero; anything
    /// more negative, a wrong length, or a total off by more than `1e-9` is
    /// rejected.
    pub fn new(alphabets: Vec<usize>, mut probs: Vec<f64>) -> Result<Self> {
        if alphabets.is_empty() || alphabets.contains(&0) {
            return Err(Error::Distribution(
                "alphabets must be non-empty and positive".into(),
            ));
        }
        let size: usize = alphabets.iter().product();
        if probs.len() != size {
            return Err(Error::Distribution(format!(
                "table has {} entries, expected {}",
                probs.len(),
                size
            )));
        }
        for p in probs.iter_mut() {
            if *p < 0.0 {
                if *p < -NEG_TOL {
                    return Err(Error::Internal(format!("probability {p} below -1e-12")));
                }
                *p = 0.0;
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::Distribution(format!(
                "total probability {total} is not 1"
            )));
        }
        Ok(OutcomeDistribution {
            alphabets,
            probs,
            party_names: None,
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        self.party_names = Some(names);
        self
    }

    pub fn n_parties(&self) -> usize {
        self.alphabets.len()
    }

    pub fn alphabets(&self) -> &[usize] {
        &self.alphabets
    }

    pub fn party_names(&self) -> Option<&[String]> {
        self.party_names.as_deref()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    fn index_of(&self, outcome: &[usize]) -> usize {
        debug_assert_eq!(outcome.len(), self.alphabets.len());
        let mut idx = 0;
        for (a, k) in outcome.iter().zip(&self.alphabets) {
            debug_assert!(a < k);
            idx = idx * k + a;
        }
        idx
    }

    pub fn prob(&self, outcome: &[usize]) -> f64 {
        self.probs[self.index_of(outcome)]
    }

    /// Outcomes in lexicographic order with their probabilities.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        OutcomeIter {
            alphabets: &self.alphabets,
            next: Some(vec![0; self.alphabets.len()]),
        }
        .map(move |o| {
            let p = self.prob(&o);
            (o, p)
        })
    }

    /// Single-party marginals, indexed `[party][symbol]`.
    pub fn marginals(&self) -> Vec<Vec<f64>> {
        let n = self.alphabets.len();
        let mut out: Vec<Vec<f64>> = self.alphabets.iter().map(|&k| vec![0.0; k]).collect();
        for (o, p) in self.iter() {
            for j in 0..n {
                out[j][o[j]] += p;
            }
        }
        out
    }

    /// Exact summation over the complementary parties. `subset` holds
    /// distinct 0-based party indices; the result keeps their order.
    pub fn marginal(&self, subset: &[usize]) -> Result<OutcomeDistribution> {
        if subset.is_empty() {
            return Err(Error::Distribution("marginal subset is empty".into()));
        }
        let n = self.alphabets.len();
        for &j in subset {
            if j >= n {
                return Err(Error::Distribution(format!("party {} out of range", j + 1)));
            }
        }
        let mut seen = vec![false; n];
        for &j in subset {
            if seen[j] {
                return Err(Error::Distribution(
                    "marginal subset repeats a party".into(),
                ));
            }
            seen[j] = true;
        }
        let alphabets: Vec<usize> = subset.iter().map(|&j| self.alphabets[j]).collect();
        let size: usize = alphabets.iter().product();
        let mut probs = vec![0.0; size];
        for (o, p) in self.iter() {
            if p == 0.0 {
                continue;
            }
            let mut idx = 0;
            for (&j, k) in subset.iter().zip(&alphabets) {
                idx = idx * k + o[j];
            }
            probs[idx] += p;
        }
        let d = OutcomeDistribution {
            alphabets,
            probs,
            party_names: None,
        };
        Ok(d)
    }

    /// Merge parties into blocks, producing one coarse party per block with a
    /// mixed-radix alphabet. Blocks must partition `0..n`.
    pub fn coarse_grain(&self, blocks: &[Vec<usize>]) -> Result<OutcomeDistribution> {
        let n = self.alphabets.len();
        let mut seen = vec![false; n];
        for block in blocks {
            if block.is_empty() {
                return Err(Error::Distribution("empty block in partition".into()));
            }
            for &j in block {
                if j >= n || seen[j] {
                    return Err(Error::Distribution(
                        "blocks do not partition the parties".into(),
                    ));
                }
                seen[j] = true;
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::Distribution(
                "blocks do not partition the parties".into(),
            ));
        }
        let alphabets: Vec<usize> = blocks
            .iter()
            .map(|b| b.iter().map(|&j| self.alphabets[j]).product())
            .collect();
        let size: usize = alphabets.iter().product();
        let mut probs = vec![0.0; size];
        for (o, p) in self.iter() {
            if p == 0.0 {
                continue;
            }
            let mut idx = 0;
            for (block, k) in blocks.iter().zip(&alphabets) {
                let mut sym = 0;
                for &j in block {
                    sym = sym * self.alphabets[j] + o[j];
                }
                idx = idx * k + sym;
                debug_assert!(sym < *k);
            }
            probs[idx] += p;
        }
        Ok(OutcomeDistribution {
            alphabets,
            probs,
            party_names: None,
        })
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

struct OutcomeIter<'a> {
    alphabets: &'a [usize],
    next: Option<Vec<usize>>,
}

impl Iterator for OutcomeIter<'_> {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut j = succ.len();
        loop {
            if j == 0 {
                self.next = None;
                break;
            }
            j -= 1;
            succ[j] += 1;
            if succ[j] < self.alphabets[j] {
                self.next = Some(succ);
                break;
            }
            succ[j] = 0;
        }
        Some(cur)
    }
}

/// Exact-rational joint table produced by the classical oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalDistribution {
    pub alphabets: Vec<usize>,
    pub probs: Vec<BigRational>,
}

impl RationalDistribution {
    pub fn zero(alphabets: Vec<usize>) -> Self {
        let size = alphabets.iter().product();
        RationalDistribution {
            alphabets,
            probs: vec![BigRational::zero(); size],
        }
    }

    pub fn index_of(&self, outcome: &[usize]) -> usize {
        let mut idx = 0;
        for (a, k) in outcome.iter().zip(&self.alphabets) {
            idx = idx * k + a;
        }
        idx
    }

    pub fn prob(&self, outcome: &[usize]) -> &BigRational {
        &self.probs[self.index_of(outcome)]
    }

    pub fn total(&self) -> BigRational {
        self.probs
            .iter()
            .fold(BigRational::zero(), |acc, p| acc + p)
    }

    pub fn marginals(&self) -> Vec<Vec<BigRational>> {
        let n = self.alphabets.len();
        let mut out: Vec<Vec<BigRational>> = self
            .alphabets
            .iter()
            .map(|&k| vec![BigRational::zero(); k])
            .collect();
        let mut outcome = vec![0usize; n];
        for p in &self.probs {
            for j in 0..n {
                out[j][outcome[j]] += p;
            }
            increment(&mut outcome, &self.alphabets);
        }
        out
    }

    pub fn to_f64(&self) -> Result<OutcomeDistribution> {
        let probs = self
            .probs
            .iter()
            .map(|p| {
                p.to_f64()
                    .ok_or_else(|| Error::Internal("rational out of f64 range".into()))
            })
            .collect::<Result<Vec<f64>>>()?;
        OutcomeDistribution::new(self.alphabets.clone(), probs)
    }

    /// Check that the table is a distribution: entries in `[0,1]`, total 1.
    pub fn is_normalized(&self) -> bool {
        self.probs
            .iter()
            .all(|p| !p.is_negative() && p <= &BigRational::one())
            && self.total().is_one()
    }
}

pub(crate) fn increment(outcome: &mut [usize], alphabets: &[usize]) -> bool {
    let mut j = outcome.len();
    loop {
        if j == 0 {
            return false;
        }
        j -= 1;
        outcome[j] += 1;
        if outcome[j] < alphabets[j] {
            return true;
        }
        outcome[j] = 0;
    }
}

pub(crate) fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Serialize, Deserialize)]
struct PartyDoc {
    name: String,
    alphabet: usize,
}

#[derive(Serialize, Deserialize)]
struct ProbDoc {
    outcome: Vec<usize>,
    p: f64,
}

#[derive(Serialize, Deserialize)]
struct DistributionDoc {
    parties: Vec<PartyDoc>,
    probs: Vec<ProbDoc>,
}

/// Parse the distribution document (JSON); omitted outcomes are zero.
pub fn parse_distribution(document: &str) -> Result<OutcomeDistribution> {
    let doc: DistributionDoc =
        serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    let alphabets: Vec<usize> = doc.parties.iter().map(|p| p.alphabet).collect();
    if alphabets.contains(&0) {
        return Err(Error::Distribution(
            "party alphabet must be positive".into(),
        ));
    }
    let size: usize = alphabets.iter().product();
    let mut probs = vec![0.0; size];
    for entry in &doc.probs {
        if entry.outcome.len() != alphabets.len() {
            return Err(Error::Distribution(format!(
                "outcome {:?} has wrong arity",
                entry.outcome
            )));
        }
        let mut idx = 0;
        for (a, k) in entry.outcome.iter().zip(&alphabets) {
            if a >= k {
                return Err(Error::Distribution(format!(
                    "symbol {} outside alphabet of size {}",
                    a, k
                )));
            }
            idx = idx * k + a;
        }
        probs[idx] += entry.p;
    }
    let names = doc.parties.into_iter().map(|p| p.name).collect();
    Ok(OutcomeDistribution::new(alphabets, probs)?.with_names(names))
}

/// Serialize to the distribution document; entries in lexicographic order,
/// zeros omitted.
pub fn serialize_distribution(d: &OutcomeDistribution) -> String {
    let names: Vec<String> = match d.party_names() {
        Some(names) => names.to_vec(),
        None => (1..=d.n_parties()).map(|i| format!("A{i}")).collect(),
    };
    let doc = DistributionDoc {
        parties: names
            .into_iter()
            .zip(d.alphabets())
            .map(|(name, &alphabet)| PartyDoc { name, alphabet })
            .collect(),
        probs: d
            .iter()
            .filter(|(_, p)| *p > 0.0)
            .map(|(outcome, p)| ProbDoc { outcome, p })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("distribution document serialization")
}
