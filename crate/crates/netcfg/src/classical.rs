//! Exact brute-force oracle for the locally causal model with finite
//! sources.
//!
//! Every source is a finite-alphabet random variable; every party applies a
//! deterministic response (an indicator function) to the values of its
//! incident sources. The joint table is the exact rational sum over all
//! source-value tuples, enumerated in sorted order so results are bitwise
//! reproducible. Stochastic responses are expressible by enlarging a local
//! source, so determinism loses no generality.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dist::{big, increment, OutcomeDistribution, RationalDistribution};
use crate::error::{Error, Result};
use crate::fis::parse_rational;
use crate::topology::NetworkTopology;

/// Hard limit on the number of hidden-variable tuples enumerated.
pub const ENUMERATION_CAP: u128 = 10_000_000;

/// A finite-alphabet source with an exact probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalSource {
    probs: Vec<BigRational>,
}

impl ClassicalSource {
    pub fn new(probs: Vec<BigRational>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Distribution(
                "source alphabet must be non-empty".into(),
            ));
        }
        if probs.iter().any(|p| p.is_negative()) {
            return Err(Error::Distribution(
                "source probabilities must be nonnegative".into(),
            ));
        }
        let total: BigRational = probs.iter().fold(BigRational::zero(), |a, p| a + p);
        if !total.is_one() {
            return Err(Error::Distribution(
                "source probabilities must sum to 1".into(),
            ));
        }
        Ok(ClassicalSource { probs })
    }

    /// A source that always emits `0`.
    pub fn constant() -> Self {
        ClassicalSource {
            probs: vec![BigRational::one()],
        }
    }

    pub fn fair_bit() -> Self {
        let half = big(1) / big(2);
        ClassicalSource {
            probs: vec![half.clone(), half],
        }
    }

    /// A bit that is `0` with probability `p`.
    pub fn bit(p: BigRational) -> Result<Self> {
        let q = BigRational::one() - &p;
        Self::new(vec![p, q])
    }

    pub fn alphabet(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }
}

/// A deterministic map from the values of a party's incident sources to an
/// outcome symbol. Incident sources are ordered by ascending source index;
/// the table is total over their value tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseTable {
    incident_alphabets: Vec<usize>,
    outcomes: Vec<usize>,
    alphabet: usize,
}

impl ResponseTable {
    pub fn new(
        incident_alphabets: Vec<usize>,
        outcomes: Vec<usize>,
        alphabet: usize,
    ) -> Result<Self> {
        let domain: usize = incident_alphabets.iter().product();
        if outcomes.len() != domain {
            return Err(Error::Distribution(format!(
                "response table has {} rows, domain needs {}",
                outcomes.len(),
                domain
            )));
        }
        if alphabet == 0 || outcomes.iter().any(|&o| o >= alphabet) {
            return Err(Error::Distribution(
                "response outcome outside the party alphabet".into(),
            ));
        }
        Ok(ResponseTable {
            incident_alphabets,
            outcomes,
            alphabet,
        })
    }

    /// Build from an explicit closure over value tuples.
    pub fn from_fn(
        incident_alphabets: Vec<usize>,
        alphabet: usize,
        f: impl Fn(&[usize]) -> usize,
    ) -> Result<Self> {
        let domain: usize = incident_alphabets.iter().product();
        let mut outcomes = Vec::with_capacity(domain);
        let mut tuple = vec![0usize; incident_alphabets.len()];
        for _ in 0..domain {
            outcomes.push(f(&tuple));
            increment(&mut tuple, &incident_alphabets);
        }
        Self::new(incident_alphabets, outcomes, alphabet)
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn outcome(&self, values: &[usize]) -> usize {
        let mut idx = 0;
        for (v, k) in values.iter().zip(&self.incident_alphabets) {
            idx = idx * k + v;
        }
        self.outcomes[idx]
    }
}

/// The locally causal joint table, enumerated exactly: for every tuple of
/// source values, each party's outcome is read off its response table and
/// the tuple's probability (the product of per-source probabilities) is
/// accumulated.
pub fn classical_joint(
    t: &NetworkTopology,
    sources: &[ClassicalSource],
    responses: &[ResponseTable],
) -> Result<RationalDistribution> {
    if sources.len() != t.n_sources() {
        return Err(Error::Distribution(format!(
            "{} sources supplied for {} hyperedges",
            sources.len(),
            t.n_sources()
        )));
    }
    if responses.len() != t.n_parties() {
        return Err(Error::Distribution(format!(
            "{} response tables for {} parties",
            responses.len(),
            t.n_parties()
        )));
    }
    let mut tuples: u128 = 1;
    for s in sources {
        tuples = tuples.saturating_mul(s.alphabet() as u128);
        if tuples > ENUMERATION_CAP {
            return Err(Error::EnumerationCap(tuples));
        }
    }
    let incident: Vec<Vec<usize>> = (0..t.n_parties()).map(|p| t.incident_sources(p)).collect();
    for (p, inc) in incident.iter().enumerate() {
        let expected: Vec<usize> = inc.iter().map(|&s| sources[s].alphabet()).collect();
        if responses[p].incident_alphabets != expected {
            return Err(Error::Distribution(format!(
                "party {} response table domain {:?} does not match incident alphabets {:?}",
                p + 1,
                responses[p].incident_alphabets,
                expected
            )));
        }
    }

    let alphabets: Vec<usize> = responses.iter().map(|r| r.alphabet()).collect();
    let mut joint = RationalDistribution::zero(alphabets);
    let source_alphabets: Vec<usize> = sources.iter().map(|s| s.alphabet()).collect();
    let mut values = vec![0usize; sources.len()];
    let mut outcome = vec![0usize; t.n_parties()];
    let mut scratch: Vec<usize> = Vec::new();
    loop {
        let mut weight = BigRational::one();
        for (s, &v) in sources.iter().zip(&values) {
            weight *= &s.probs()[v];
        }
        if !weight.is_zero() {
            for (p, inc) in incident.iter().enumerate() {
                scratch.clear();
                scratch.extend(inc.iter().map(|&s| values[s]));
                outcome[p] = responses[p].outcome(&scratch);
            }
            let idx = joint.index_of(&outcome);
            joint.probs[idx] += weight;
        }
        if !increment(&mut values, &source_alphabets) {
            break;
        }
    }
    debug_assert!(joint.total().is_one());
    Ok(joint)
}

/// [`classical_joint`] converted to floats.
pub fn classical_joint_f64(
    t: &NetworkTopology,
    sources: &[ClassicalSource],
    responses: &[ResponseTable],
) -> Result<OutcomeDistribution> {
    classical_joint(t, sources, responses)?.to_f64()
}

/// The triangle of three correlated bit-pair sources: source `i` emits `00`
/// with probability `p_i` and `11` otherwise, each party samples its two
/// incident sources independently, and the two bits are read as one symbol
/// in `{0..3}` (previous source first, own source second, cyclic order).
pub fn triangle_bits_exact(p: [BigRational; 3]) -> Result<RationalDistribution> {
    for pi in &p {
        if pi.is_negative() || pi > &BigRational::one() {
            return Err(Error::Bounds(
                "triangle bit probabilities must lie in [0,1]".into(),
            ));
        }
    }
    let q: Vec<BigRational> = p.iter().map(|pi| BigRational::one() - pi).collect();
    let mut joint = RationalDistribution::zero(vec![4, 4, 4]);
    for b1 in 0..2usize {
        for b2 in 0..2usize {
            for b3 in 0..2usize {
                let w = [b1, b2, b3]
                    .iter()
                    .zip(p.iter().zip(&q))
                    .fold(BigRational::one(), |acc, (&b, (pi, qi))| {
                        acc * if b == 0 { pi } else { qi }
                    });
                let a = 2 * b3 + b1;
                let b = 2 * b1 + b2;
                let c = 2 * b2 + b3;
                let idx = joint.index_of(&[a, b, c]);
                joint.probs[idx] += w;
            }
        }
    }
    Ok(joint)
}

pub fn triangle_bits(p1: f64, p2: f64, p3: f64) -> Result<OutcomeDistribution> {
    for p in [p1, p2, p3] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Bounds(format!(
                "triangle bit probability {p} outside [0,1]"
            )));
        }
    }
    let q = [1.0 - p1, 1.0 - p2, 1.0 - p3];
    let p = [p1, p2, p3];
    let mut probs = vec![0.0; 64];
    for b1 in 0..2usize {
        for b2 in 0..2usize {
            for b3 in 0..2usize {
                let w: f64 = [b1, b2, b3]
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| if b == 0 { p[i] } else { q[i] })
                    .product();
                let a = 2 * b3 + b1;
                let b = 2 * b1 + b2;
                let c = 2 * b2 + b3;
                probs[(a * 4 + b) * 4 + c] += w;
            }
        }
    }
    OutcomeDistribution::new(vec![4, 4, 4], probs)
}

/// The explicit triangle wiring as topology + sources + responses, suitable
/// for [`classical_joint`]. Each source is a perfectly correlated bit pair;
/// each party concatenates (previous source, own source).
pub fn triangle_bits_wiring(
    p: [BigRational; 3],
) -> Result<(NetworkTopology, Vec<ClassicalSource>, Vec<ResponseTable>)> {
    let t = NetworkTopology::new(
        vec!["A1".into(), "A2".into(), "A3".into()],
        vec![vec![1, 2], vec![2, 3], vec![1, 3]],
    )?;
    let sources: Vec<ClassicalSource> = p
        .into_iter()
        .map(ClassicalSource::bit)
        .collect::<Result<_>>()?;
    // incident sources (ascending): A1 -> {0, 2}, A2 -> {0, 1}, A3 -> {1, 2}
    let responses = vec![
        ResponseTable::from_fn(vec![2, 2], 4, |v| 2 * v[1] + v[0])?, // (y3, x1)
        ResponseTable::from_fn(vec![2, 2], 4, |v| 2 * v[0] + v[1])?, // (y1, x2)
        ResponseTable::from_fn(vec![2, 2], 4, |v| 2 * v[0] + v[1])?, // (y2, x3)
    ];
    Ok((t, sources, responses))
}

/// A seeded random classical network for property tests: topology, exact
/// sources, and total response tables. Deterministic in the seed.
pub fn random_classical_network(
    seed: u64,
    n: usize,
    source_count: usize,
    max_arity: usize,
    max_alphabet: usize,
) -> Result<(NetworkTopology, Vec<ClassicalSource>, Vec<ResponseTable>)> {
    if n == 0 || max_arity == 0 || max_alphabet == 0 {
        return Err(Error::Bounds("bounds must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sources_parties = Vec::with_capacity(source_count);
    for _ in 0..source_count {
        let arity = rng.gen_range(1..=max_arity.min(n));
        let mut pool: Vec<usize> = (0..n).collect();
        let mut chosen = Vec::with_capacity(arity);
        for _ in 0..arity {
            let i = rng.gen_range(0..pool.len());
            chosen.push(pool.swap_remove(i) + 1);
        }
        chosen.sort_unstable();
        sources_parties.push(chosen);
    }
    let t = NetworkTopology::new((1..=n).map(|i| format!("A{i}")).collect(), sources_parties)?;

    let mut tuples: u128 = 1;
    let mut sources = Vec::with_capacity(source_count);
    for _ in 0..source_count {
        let alphabet = rng.gen_range(1..=max_alphabet);
        tuples = tuples.saturating_mul(alphabet as u128);
        if tuples > ENUMERATION_CAP {
            return Err(Error::EnumerationCap(tuples));
        }
        let weights: Vec<i64> = (0..alphabet).map(|_| rng.gen_range(1..=6)).collect();
        let total: i64 = weights.iter().sum();
        let probs = weights.into_iter().map(|w| big(w) / big(total)).collect();
        sources.push(ClassicalSource::new(probs)?);
    }

    let mut responses = Vec::with_capacity(n);
    for p in 0..n {
        let incident: Vec<usize> = t.incident_sources(p);
        let incident_alphabets: Vec<usize> =
            incident.iter().map(|&s| sources[s].alphabet()).collect();
        let alphabet = if max_alphabet >= 2 {
            rng.gen_range(2..=max_alphabet)
        } else {
            1
        };
        let domain: usize = incident_alphabets.iter().product();
        let outcomes: Vec<usize> = (0..domain).map(|_| rng.gen_range(0..alphabet)).collect();
        responses.push(ResponseTable::new(incident_alphabets, outcomes, alphabet)?);
    }
    Ok((t, sources, responses))
}

#[derive(Serialize, Deserialize)]
struct SourceEntry {
    probs: Vec<serde_json::Value>,
}

#[derive(Serialize, Deserialize)]
struct SourcesDoc {
    sources: Vec<SourceEntry>,
}

/// Parse the sources document. Probabilities may be strings ("1/2") or
/// numbers; numbers are converted to rationals (denominator <= 10^6) and the
/// vector is renormalized exactly when the stated total is within 1e-12 of 1.
pub fn parse_sources(document: &str) -> Result<Vec<ClassicalSource>> {
    use num_traits::ToPrimitive;
    let doc: SourcesDoc =
        serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    let mut out = Vec::with_capacity(doc.sources.len());
    for entry in doc.sources {
        let mut probs = Vec::with_capacity(entry.probs.len());
        for v in entry.probs {
            let r = match v {
                serde_json::Value::String(s) => parse_rational(&s)?,
                serde_json::Value::Number(x) => parse_rational(&format!(
                    "{:.12}",
                    x.as_f64()
                        .ok_or_else(|| Error::Parse("bad probability".into()))?
                ))?,
                other => return Err(Error::Parse(format!("bad probability value {other}"))),
            };
            probs.push(r);
        }
        let total: BigRational = probs.iter().fold(BigRational::zero(), |a, p| a + p);
        if !total.is_one() {
            let drift = (total.to_f64().unwrap_or(f64::NAN) - 1.0).abs();
            if drift > 1e-12 || total.is_zero() {
                return Err(Error::Distribution(
                    "source probabilities must sum to 1".into(),
                ));
            }
            for p in probs.iter_mut() {
                *p /= &total;
            }
        }
        out.push(ClassicalSource::new(probs)?);
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct ResponseRow {
    given: Vec<usize>,
    outcome: usize,
}

#[derive(Serialize, Deserialize)]
struct ResponseEntry {
    alphabet: usize,
    rows: Vec<ResponseRow>,
}

#[derive(Serialize, Deserialize)]
struct ResponsesDoc {
    responses: Vec<ResponseEntry>,
}

/// Parse the response-table document against a topology and its sources.
/// Every value tuple of each party's incident sources must appear once.
pub fn parse_responses(
    t: &NetworkTopology,
    sources: &[ClassicalSource],
    document: &str,
) -> Result<Vec<ResponseTable>> {
    let doc: ResponsesDoc =
        serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.responses.len() != t.n_parties() {
        return Err(Error::Parse(format!(
            "{} response tables for {} parties",
            doc.responses.len(),
            t.n_parties()
        )));
    }
    let mut out = Vec::with_capacity(doc.responses.len());
    for (p, entry) in doc.responses.iter().enumerate() {
        let incident = t.incident_sources(p);
        let incident_alphabets: Vec<usize> =
            incident.iter().map(|&s| sources[s].alphabet()).collect();
        let domain: usize = incident_alphabets.iter().product();
        let mut outcomes = vec![usize::MAX; domain];
        for row in &entry.rows {
            if row.given.len() != incident_alphabets.len()
                || row
                    .given
                    .iter()
                    .zip(&incident_alphabets)
                    .any(|(v, k)| v >= k)
            {
                return Err(Error::Parse(format!(
                    "party {} row {:?} does not match its incident sources",
                    p + 1,
                    row.given
                )));
            }
            let mut idx = 0;
            for (v, k) in row.given.iter().zip(&incident_alphabets) {
                idx = idx * k + v;
            }
            outcomes[idx] = row.outcome;
        }
        if let Some(missing) = outcomes.iter().position(|&o| o == usize::MAX) {
            let mut values = vec![0usize; incident_alphabets.len()];
            let mut idx = missing;
            for j in (0..incident_alphabets.len()).rev() {
                values[j] = idx % incident_alphabets[j];
                idx /= incident_alphabets[j];
            }
            return Err(Error::ResponseIncomplete {
                party: p + 1,
                values,
            });
        }
        out.push(ResponseTable::new(
            incident_alphabets,
            outcomes,
            entry.alphabet,
        )?);
    }
    Ok(out)
}

pub fn serialize_responses(t: &NetworkTopology, responses: &[ResponseTable]) -> String {
    let entries: Vec<ResponseEntry> = responses
        .iter()
        .map(|r| {
            let mut rows = Vec::with_capacity(r.outcomes.len());
            let mut tuple = vec![0usize; r.incident_alphabets.len()];
            for &o in &r.outcomes {
                rows.push(ResponseRow {
                    given: tuple.clone(),
                    outcome: o,
                });
                increment(&mut tuple, &r.incident_alphabets);
            }
            ResponseEntry {
                alphabet: r.alphabet,
                rows,
            }
        })
        .collect();
    let _ = t;
    serde_json::to_string_pretty(&ResponsesDoc { responses: entries })
        .expect("responses document serialization")
}

pub fn serialize_sources(sources: &[ClassicalSource]) -> String {
    use crate::fis::format_rational;
    let doc = SourcesDoc {
        sources: sources
            .iter()
            .map(|s| SourceEntry {
                probs: s
                    .probs()
                    .iter()
                    .map(|p| format_rational(p).into())
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("sources document serialization")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::BuiltinKind;
    use num_traits::ToPrimitive;

    fn ratio(n: i64, d: i64) -> BigRational {
        big(n) / big(d)
    }

    #[test]
    fn shared_bit_echo() {
        let t = NetworkTopology::new(vec!["A".into(), "B".into()], vec![vec![1, 2]]).unwrap();
        let sources = vec![ClassicalSource::fair_bit()];
        let responses = vec![
            ResponseTable::from_fn(vec![2], 2, |v| v[0]).unwrap(),
            ResponseTable::from_fn(vec![2], 2, |v| v[0]).unwrap(),
        ];
        let joint = classical_joint(&t, &sources, &responses).unwrap();
        assert_eq!(joint.prob(&[0, 0]), &ratio(1, 2));
        assert_eq!(joint.prob(&[1, 1]), &ratio(1, 2));
        assert_eq!(joint.prob(&[0, 1]), &BigRational::zero());
    }

    #[test]
    fn constant_sources_give_point_mass() {
        let t = NetworkTopology::builtin(BuiltinKind::Chain, 3, 2).unwrap();
        let sources = vec![ClassicalSource::constant(), ClassicalSource::constant()];
        let responses = vec![
            ResponseTable::from_fn(vec![1], 2, |_| 1).unwrap(),
            ResponseTable::from_fn(vec![1, 1], 3, |_| 2).unwrap(),
            ResponseTable::from_fn(vec![1], 2, |_| 0).unwrap(),
        ];
        let joint = classical_joint(&t, &sources, &responses).unwrap();
        assert!(joint.prob(&[1, 2, 0]).is_one());
    }

    #[test]
    fn triangle_bits_matches_closed_forms() {
        let d = triangle_bits(0.5, 0.5, 0.5).unwrap();
        assert!((d.prob(&[0, 0, 0]) - 0.125).abs() < 1e-15);
        let m = d.marginals();
        for marginal in &m {
            assert!((marginal[0] - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn triangle_bits_point_mass_at_one() {
        let d = triangle_bits(1.0, 1.0, 1.0).unwrap();
        assert_eq!(d.prob(&[0, 0, 0]), 1.0);
    }

    #[test]
    fn triangle_bits_rejects_out_of_range() {
        assert!(triangle_bits(1.2, 0.5, 0.5).is_err());
    }

    #[test]
    fn triangle_bits_equals_explicit_wiring() {
        let p = [ratio(3, 10), ratio(1, 2), ratio(4, 5)];
        let direct = triangle_bits_exact(p.clone()).unwrap();
        let (t, sources, responses) = triangle_bits_wiring(p).unwrap();
        let wired = classical_joint(&t, &sources, &responses).unwrap();
        assert_eq!(direct, wired);
    }

    #[test]
    fn triangle_bits_marginals_match_c3() {
        let p = [ratio(3, 10), ratio(1, 2), ratio(4, 5)];
        let d = triangle_bits_exact(p.clone()).unwrap();
        let m = d.marginals();
        let q: Vec<BigRational> = p.iter().map(|x| BigRational::one() - x).collect();
        // p_a = (p1 p3, q1 p3, p1 q3, q1 q3)
        assert_eq!(m[0][0], &p[0] * &p[2]);
        assert_eq!(m[0][1], &q[0] * &p[2]);
        assert_eq!(m[0][2], &p[0] * &q[2]);
        assert_eq!(m[0][3], &q[0] * &q[2]);
        // p_b = (p1 p2, p1 q2, q1 p2, q1 q2)
        assert_eq!(m[1][0], &p[0] * &p[1]);
        assert_eq!(m[1][1], &p[0] * &q[1]);
        // p_c = (p2 p3, p2 q3, q2 p3, q2 q3)
        assert_eq!(m[2][0], &p[1] * &p[2]);
        assert_eq!(m[2][3], &q[1] * &q[2]);
    }

    #[test]
    fn triangle_bits_chain_margin_closed_form() {
        // the chain-form margin at the all-zero outcome is
        // p1 p2 p3 - p1 p2 p3^((2m-2)/m)
        let (p1, p2, p3) = (0.35, 0.6, 0.8);
        for m in [3u64, 10, 1000] {
            let d = triangle_bits(p1, p2, p3).unwrap();
            let report = crate::inequality::chain_min_check(&d, m, 1, 1e-9).unwrap();
            let margin = report.margin_at(&[0, 0, 0]).unwrap();
            let closed = p1 * p2 * p3 - p1 * p2 * p3.powf((2.0 * m as f64 - 2.0) / m as f64);
            assert!(
                (margin - closed).abs() < 1e-12,
                "m={m}: {margin} vs {closed}"
            );
            assert!(report.violated);
        }
    }

    #[test]
    fn random_network_is_deterministic_and_normalized() {
        let (t1, s1, r1) = random_classical_network(1, 4, 4, 3, 3).unwrap();
        let (t2, s2, r2) = random_classical_network(1, 4, 4, 3, 3).unwrap();
        assert_eq!(t1, t2);
        assert_eq!(s1, s2);
        assert_eq!(r1, r2);
        let joint = classical_joint(&t1, &s1, &r1).unwrap();
        assert!(joint.is_normalized());
        let f = joint.to_f64().unwrap();
        assert!((f.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_network_single_party() {
        let (t, s, r) = random_classical_network(7, 1, 2, 1, 3).unwrap();
        let joint = classical_joint(&t, &s, &r).unwrap();
        assert_eq!(joint.alphabets.len(), 1);
        assert!(joint.is_normalized());
    }

    #[test]
    fn enumeration_cap_enforced() {
        let t = NetworkTopology::new(vec!["A".into()], vec![vec![1]; 9]).unwrap();
        let sources: Vec<ClassicalSource> = (0..9)
            .map(|_| ClassicalSource::new(vec![ratio(1, 8); 8]).unwrap())
            .collect();
        let responses = vec![ResponseTable::from_fn(vec![8; 9], 2, |_| 0).unwrap()];
        assert!(matches!(
            classical_joint(&t, &sources, &responses),
            Err(Error::EnumerationCap(_))
        ));
    }

    /// Anything producible on a sub-network is reproduced on the full
    /// network by making the extra sources constant — checked for every
    /// proper subset of sources of small random networks.
    #[test]
    fn sub_network_distributions_are_reproducible() {
        for seed in 0..12u64 {
            let (t2, s2, _) = random_classical_network(seed, 4, 3, 3, 2).unwrap();
            let m = t2.n_sources();
            for mask in 0..(1u32 << m) - 1 {
                let keep = |s: usize| mask & (1 << s) != 0;
                let kept: Vec<Vec<usize>> = t2
                    .sources()
                    .iter()
                    .enumerate()
                    .filter(|(s, _)| keep(*s))
                    .map(|(_, src)| src.iter().map(|&p| p + 1).collect())
                    .collect();
                let t1 = NetworkTopology::new(t2.party_names().to_vec(), kept).unwrap();
                let s1: Vec<ClassicalSource> = s2
                    .iter()
                    .enumerate()
                    .filter(|(s, _)| keep(*s))
                    .map(|(_, src)| src.clone())
                    .collect();
                // random responses for T1
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ u64::from(mask) ^ 0xabcd);
                let r1: Vec<ResponseTable> = (0..t1.n_parties())
                    .map(|p| {
                        let inc = t1.incident_sources(p);
                        let alphas: Vec<usize> = inc.iter().map(|&s| s1[s].alphabet()).collect();
                        let domain: usize = alphas.iter().product();
                        let outs: Vec<usize> = (0..domain).map(|_| rng.gen_range(0..2)).collect();
                        ResponseTable::new(alphas, outs, 2).unwrap()
                    })
                    .collect();
                let d1 = classical_joint(&t1, &s1, &r1).unwrap();

                // T2 setup: the dropped sources become constants and the
                // responses ignore their values.
                let s2c: Vec<ClassicalSource> = s2
                    .iter()
                    .enumerate()
                    .map(|(s, src)| if keep(s) { src.clone() } else { ClassicalSource::constant() })
                    .collect();
                // position of each kept T2 source inside T1's numbering
                let r2: Vec<ResponseTable> = (0..t2.n_parties())
                    .map(|p| {
                        let inc2 = t2.incident_sources(p);
                        let alphas2: Vec<usize> =
                            inc2.iter().map(|&s| s2c[s].alphabet()).collect();
                        let r1p = &r1[p];
                        ResponseTable::from_fn(alphas2.clone(), 2, |vals| {
                            let reduced: Vec<usize> = inc2
                                .iter()
                                .zip(vals)
                                .filter(|(&s, _)| keep(s))
                                .map(|(_, &v)| v)
                                .collect();
                            r1p.outcome(&reduced)
                        })
                        .unwrap()
                    })
                    .collect();
                let d2 = classical_joint(&t2, &s2c, &r2).unwrap();
                assert_eq!(d1, d2, "seed {seed} mask {mask:b}");
            }
        }
    }

    #[test]
    fn golden_seed_one_digest() {
        let (t, s, r) = random_classical_network(1, 3, 3, 2, 3).unwrap();
        let joint = classical_joint(&t, &s, &r).unwrap();
        let digest = format!(
            "{:?}|{:?}|{}",
            t.sources(),
            joint.alphabets,
            joint
                .probs
                .iter()
                .map(|p| p.to_f64().unwrap())
                .map(|x| format!("{x:.6}"))
                .collect::<Vec<_>>()
                .join(",")
        );
        assert_eq!(digest, GOLDEN_SEED_1);
    }

    // frozen from the first run of seed 1 under these bounds
    const GOLDEN_SEED_1: &str = "[[0], [0, 1], [1, 2]]|[2, 3, 3]|1.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000";

    #[test]
    fn documents_round_trip() {
        let (t, s, r) = random_classical_network(3, 3, 3, 2, 3).unwrap();
        let s_back = parse_sources(&serialize_sources(&s)).unwrap();
        assert_eq!(s, s_back);
        let r_back = parse_responses(&t, &s, &serialize_responses(&t, &r)).unwrap();
        assert_eq!(r, r_back);
    }

    #[test]
    fn responses_must_be_total() {
        let t = NetworkTopology::new(vec!["A".into()], vec![vec![1]]).unwrap();
        let s = vec![ClassicalSource::fair_bit()];
        let doc = r#"{"responses":[{"alphabet":2,"rows":[{"given":[0],"outcome":0}]}]}"#;
        assert!(matches!(
            parse_responses(&t, &s, doc),
            Err(Error::ResponseIncomplete { party: 1, .. })
        ));
    }
}
