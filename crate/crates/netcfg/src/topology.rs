//! Networks of independent sources as hypergraphs.
//!
//! Parties are vertices and every independent source is a hyperedge over the
//! parties it reaches. Duplicate hyperedges are meaningful: two sources
//! connecting the same parties are still independent resources and count
//! separately in every per-source constraint.
//!
//! Party indices are 1-based in documents and reports (`A_1 .. A_n`);
//! internally everything is 0-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Named family of network layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinKind {
    Chain,
    Star,
    Cycle,
    Complete,
    SingleSource,
}

impl std::str::FromStr for BuiltinKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chain" => Ok(BuiltinKind::Chain),
            "star" => Ok(BuiltinKind::Star),
            "cycle" => Ok(BuiltinKind::Cycle),
            "complete" => Ok(BuiltinKind::Complete),
            "single_source" => Ok(BuiltinKind::SingleSource),
            other => Err(Error::Bounds(format!("unknown builtin kind `{other}`"))),
        }
    }
}

/// A network of independent sources: parties plus hyperedges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkTopology {
    parties: Vec<String>,
    /// Each source as a sorted list of distinct 0-based party indices.
    sources: Vec<Vec<usize>>,
    /// Advisory local dimension hints, one per party.
    dim_hints: Vec<Option<usize>>,
}

/// A structural problem reported by [`NetworkTopology::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finding {
    EmptySource { source: usize },
    PartyOutOfRange { source: usize, party: usize },
    RepeatedParty { source: usize, party: usize },
}

impl std::fmt::Display for Finding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Finding::EmptySource { source } => write!(f, "empty source at index {source}"),
            Finding::PartyOutOfRange { source, party } => {
                write!(f, "source {source} references party {party} out of range")
            }
            Finding::RepeatedParty { source, party } => {
                write!(f, "source {source} lists party {party} more than once")
            }
        }
    }
}

impl NetworkTopology {
    /// Build a validated topology. `sources` hold 1-based party indices as in
    /// documents.
    pub fn new(parties: Vec<String>, sources: Vec<Vec<usize>>) -> Result<Self> {
        Self::with_hints(parties, sources, None)
    }

    pub fn with_hints(
        parties: Vec<String>,
        sources: Vec<Vec<usize>>,
        dim_hints: Option<Vec<usize>>,
    ) -> Result<Self> {
        if parties.is_empty() {
            return Err(Error::Topology("a network needs at least one party".into()));
        }
        let n = parties.len();
        let mut converted = Vec::with_capacity(sources.len());
        for (si, src) in sources.iter().enumerate() {
            if src.is_empty() {
                return Err(Error::EmptySource(si));
            }
            let mut zero_based: Vec<usize> = Vec::with_capacity(src.len());
            for &p in src {
                if p == 0 || p > n {
                    return Err(Error::PartyOutOfRange {
                        source_index: si,
                        party: p,
                        n,
                    });
                }
                zero_based.push(p - 1);
            }
            zero_based.sort_unstable();
            if zero_based.windows(2).any(|w| w[0] == w[1]) {
                let dup = zero_based
                    .windows(2)
                    .find(|w| w[0] == w[1])
                    .map(|w| w[0] + 1)
                    .unwrap_or(0);
                return Err(Error::RepeatedParty {
                    source_index: si,
                    party: dup,
                });
            }
            converted.push(zero_based);
        }
        let hints = match dim_hints {
            Some(h) => {
                if h.len() != n {
                    return Err(Error::Topology(format!(
                        "dimension hints have length {}, expected {n}",
                        h.len()
                    )));
                }
                if h.contains(&0) {
                    return Err(Error::Topology("dimension hints must be positive".into()));
                }
                h.into_iter().map(Some).collect()
            }
            None => vec![None; n],
        };
        Ok(NetworkTopology {
            parties,
            sources: converted,
            dim_hints: hints,
        })
    }

    /// Construct without checking. For internal use where invariants are
    /// upheld by construction; `validate` still reports honestly.
    pub(crate) fn from_zero_based(parties: Vec<String>, sources: Vec<Vec<usize>>) -> Self {
        let n = parties.len();
        NetworkTopology {
            parties,
            sources,
            dim_hints: vec![None; n],
        }
    }

    pub fn n_parties(&self) -> usize {
        self.parties.len()
    }

    pub fn party_names(&self) -> &[String] {
        &self.parties
    }

    pub fn n_sources(&self) -> usize {
        self.sources.len()
    }

    /// Sources as sorted 0-based party index lists, in input order.
    pub fn sources(&self) -> &[Vec<usize>] {
        &self.sources
    }

    pub fn dim_hints(&self) -> &[Option<usize>] {
        &self.dim_hints
    }

    /// 0-based indices of the sources incident to party `p` (0-based).
    pub fn incident_sources(&self, p: usize) -> Vec<usize> {
        self.sources
            .iter()
            .enumerate()
            .filter(|(_, src)| src.contains(&p))
            .map(|(i, _)| i)
            .collect()
    }

    /// Structural findings; empty iff the invariants hold.
    pub fn validate(&self) -> Vec<Finding> {
        let mut findings = Vec::new();
        let n = self.parties.len();
        for (si, src) in self.sources.iter().enumerate() {
            if src.is_empty() {
                findings.push(Finding::EmptySource { source: si });
            }
            for &p in src {
                if p >= n {
                    findings.push(Finding::PartyOutOfRange {
                        source: si,
                        party: p + 1,
                    });
                }
            }
            let mut sorted = src.clone();
            sorted.sort_unstable();
            for w in sorted.windows(2) {
                if w[0] == w[1] {
                    findings.push(Finding::RepeatedParty {
                        source: si,
                        party: w[0] + 1,
                    });
                }
            }
        }
        findings
    }

    /// The named families from the examples: chain, star, cycle, complete,
    /// and the single-source network. `arity` only matters for `Complete`.
    pub fn builtin(kind: BuiltinKind, n: usize, arity: usize) -> Result<Self> {
        let names = |n: usize| (1..=n).map(|i| format!("A{i}")).collect::<Vec<_>>();
        match kind {
            BuiltinKind::SingleSource => {
                if n < 1 {
                    return Err(Error::Bounds("single_source needs n >= 1".into()));
                }
                let all: Vec<usize> = (0..n).collect();
                Ok(Self::from_zero_based(names(n), vec![all]))
            }
            BuiltinKind::Chain => {
                if n < 2 {
                    return Err(Error::Bounds("chain needs n >= 2".into()));
                }
                let sources = (0..n - 1).map(|j| vec![j, j + 1]).collect();
                Ok(Self::from_zero_based(names(n), sources))
            }
            BuiltinKind::Star => {
                if n < 2 {
                    return Err(Error::Bounds("star needs n >= 2".into()));
                }
                let sources = (0..n - 1).map(|j| vec![j, n - 1]).collect();
                Ok(Self::from_zero_based(names(n), sources))
            }
            BuiltinKind::Cycle => {
                if n < 2 {
                    return Err(Error::Bounds("cycle needs n >= 2".into()));
                }
                let mut sources: Vec<Vec<usize>> = (0..n - 1).map(|j| vec![j, j + 1]).collect();
                sources.push(vec![0, n - 1]);
                Ok(Self::from_zero_based(names(n), sources))
            }
            BuiltinKind::Complete => {
                if n < 2 || arity < 2 || arity > n {
                    return Err(Error::Bounds(format!(
                        "complete needs n >= 2 and 2 <= arity <= n (got n={n}, arity={arity})"
                    )));
                }
                let mut sources = Vec::new();
                let mut subset: Vec<usize> = (0..arity).collect();
                loop {
                    sources.push(subset.clone());
                    // next lexicographic arity-subset of 0..n
                    let mut i = arity;
                    loop {
                        if i == 0 {
                            return Ok(Self::from_zero_based(names(n), sources));
                        }
                        i -= 1;
                        if subset[i] < n - (arity - i) {
                            subset[i] += 1;
                            for j in i + 1..arity {
                                subset[j] = subset[j - 1] + 1;
                            }
                            break;
                        }
                    }
                }
            }
        }
    }

    /// Recognize the builtin family this topology is (in canonical labeling).
    /// Duplicate-free comparison is not attempted: the source multiset must
    /// match the builtin exactly, up to source order.
    pub fn classify(&self) -> Option<(BuiltinKind, usize, usize)> {
        let n = self.n_parties();
        let mut mine: Vec<Vec<usize>> = self.sources.clone();
        mine.sort();
        let matches = |kind: BuiltinKind, arity: usize| -> bool {
            match NetworkTopology::builtin(kind, n, arity) {
                Ok(t) => {
                    let mut theirs = t.sources;
                    theirs.sort();
                    theirs == mine
                }
                Err(_) => false,
            }
        };
        for kind in [BuiltinKind::Chain, BuiltinKind::Star, BuiltinKind::Cycle] {
            if matches(kind, 2) {
                return Some((kind, n, 2));
            }
        }
        if matches(BuiltinKind::SingleSource, 0) {
            return Some((BuiltinKind::SingleSource, n, n));
        }
        for arity in 2..=n {
            if matches(BuiltinKind::Complete, arity) {
                return Some((BuiltinKind::Complete, n, arity));
            }
        }
        None
    }
}

#[derive(Serialize, Deserialize)]
struct SourceDoc {
    parties: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct NetworkDoc {
    parties: Vec<String>,
    sources: Vec<SourceDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dims: Option<Vec<usize>>,
}

/// Parse the canonical network document (JSON).
pub fn parse_network(document: &str) -> Result<NetworkTopology> {
    let doc: NetworkDoc =
        serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    NetworkTopology::with_hints(
        doc.parties,
        doc.sources.into_iter().map(|s| s.parties).collect(),
        doc.dims,
    )
}

/// Serialize back to the canonical document; sources keep input order.
pub fn serialize_network(t: &NetworkTopology) -> String {
    let doc = NetworkDoc {
        parties: t.parties.clone(),
        sources: t
            .sources
            .iter()
            .map(|src| SourceDoc {
                parties: src.iter().map(|&p| p + 1).collect(),
            })
            .collect(),
        dims: if t.dim_hints.iter().all(Option::is_none) {
            None
        } else {
            Some(t.dim_hints.iter().map(|d| d.unwrap_or(2)).collect())
        },
    };
    serde_json::to_string_pretty(&doc).expect("network document serialization")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> NetworkTopology {
        NetworkTopology::new(
            vec!["A".into(), "B".into(), "C".into()],
            vec![vec![1, 2], vec![2, 3], vec![1, 3]],
        )
        .unwrap()
    }

    #[test]
    fn parse_triangle_document() {
        let doc = r#"{"parties":["A","B","C"],
                      "sources":[{"parties":[1,2]},{"parties":[2,3]},{"parties":[1,3]}]}"#;
        let t = parse_network(doc).unwrap();
        assert_eq!(t.n_parties(), 3);
        assert_eq!(t.sources(), &[vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert!(t.validate().is_empty());
    }

    #[test]
    fn single_isolated_party_is_valid() {
        let t = NetworkTopology::new(vec!["A".into()], vec![]).unwrap();
        assert_eq!(t.n_parties(), 1);
        assert_eq!(t.n_sources(), 0);
    }

    #[test]
    fn out_of_range_party_rejected() {
        let err = NetworkTopology::new(vec!["A".into(), "B".into()], vec![vec![1, 3]]);
        assert!(matches!(
            err,
            Err(Error::PartyOutOfRange {
                source_index: 0,
                party: 3,
                ..
            })
        ));
    }

    #[test]
    fn empty_source_rejected() {
        let err = NetworkTopology::new(vec!["A".into()], vec![vec![]]);
        assert!(matches!(err, Err(Error::EmptySource(0))));
    }

    #[test]
    fn self_loop_rejected() {
        let err = NetworkTopology::new(vec!["A".into(), "B".into()], vec![vec![1, 1]]);
        assert!(matches!(
            err,
            Err(Error::RepeatedParty {
                source_index: 0,
                party: 1
            })
        ));
    }

    #[test]
    fn duplicate_sources_allowed_and_counted() {
        let t = NetworkTopology::new(vec!["A".into(), "B".into()], vec![vec![1, 2], vec![1, 2]])
            .unwrap();
        assert_eq!(t.n_sources(), 2);
        assert!(t.validate().is_empty());
    }

    #[test]
    fn builtin_counts() {
        for n in 2..=6 {
            assert_eq!(
                NetworkTopology::builtin(BuiltinKind::Chain, n, 2)
                    .unwrap()
                    .n_sources(),
                n - 1
            );
            assert_eq!(
                NetworkTopology::builtin(BuiltinKind::Star, n, 2)
                    .unwrap()
                    .n_sources(),
                n - 1
            );
            assert_eq!(
                NetworkTopology::builtin(BuiltinKind::Cycle, n, 2)
                    .unwrap()
                    .n_sources(),
                n
            );
            assert_eq!(
                NetworkTopology::builtin(BuiltinKind::Complete, n, 2)
                    .unwrap()
                    .n_sources(),
                n * (n - 1) / 2
            );
        }
    }

    #[test]
    fn builtin_chain_3_sources() {
        let t = NetworkTopology::builtin(BuiltinKind::Chain, 3, 2).unwrap();
        assert_eq!(t.sources(), &[vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn builtin_single_source_4() {
        let t = NetworkTopology::builtin(BuiltinKind::SingleSource, 4, 0).unwrap();
        assert_eq!(t.sources(), &[vec![0, 1, 2, 3]]);
    }

    #[test]
    fn complete_3_2_is_triangle() {
        let t = NetworkTopology::builtin(BuiltinKind::Complete, 3, 2).unwrap();
        let mut srcs = t.sources().to_vec();
        srcs.sort();
        let mut tri = triangle().sources().to_vec();
        tri.sort();
        assert_eq!(srcs, tri);
    }

    #[test]
    fn serialize_round_trip_is_identity() {
        for t in [
            triangle(),
            NetworkTopology::builtin(BuiltinKind::Star, 5, 2).unwrap(),
            NetworkTopology::builtin(BuiltinKind::Complete, 4, 3).unwrap(),
            NetworkTopology::new(vec!["X".into()], vec![vec![1]]).unwrap(),
        ] {
            let back = parse_network(&serialize_network(&t)).unwrap();
            assert_eq!(back, t);
        }
    }

    #[test]
    fn classify_builtins() {
        let tri = triangle();
        // A triangle is both cycle-3 and complete(3,2); chain is tried first
        // and fails, cycle matches.
        assert_eq!(tri.classify(), Some((BuiltinKind::Cycle, 3, 2)));
        let chain = NetworkTopology::builtin(BuiltinKind::Chain, 4, 2).unwrap();
        assert_eq!(chain.classify(), Some((BuiltinKind::Chain, 4, 2)));
        let star = NetworkTopology::builtin(BuiltinKind::Star, 4, 2).unwrap();
        assert_eq!(star.classify(), Some((BuiltinKind::Star, 4, 2)));
        let single = NetworkTopology::builtin(BuiltinKind::SingleSource, 3, 0).unwrap();
        assert_eq!(single.classify(), Some((BuiltinKind::SingleSource, 3, 3)));
    }

    #[test]
    fn validate_reports_offenders() {
        let raw = NetworkTopology::from_zero_based(
            vec!["A".into(), "B".into()],
            vec![vec![], vec![0, 5]],
        );
        let findings = raw.validate();
        assert_eq!(findings.len(), 2);
        assert_eq!(findings[0], Finding::EmptySource { source: 0 });
        assert_eq!(
            findings[1],
            Finding::PartyOutOfRange {
                source: 1,
                party: 6
            }
        );
    }
}
