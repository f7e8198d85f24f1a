//! Fractional independent sets: the exponent vectors of configuration
//! inequalities.
//!
//! A weight vector `s = (s_1 .. s_n)` is a fractional independent set of a
//! topology when `0 <= s_j <= 1` and, for every source `e`, the weights of
//! the parties touching `e` sum to at most 1. Everything here is exact
//! rational arithmetic; floats appear only when weights are later consumed
//! as exponents.
//!
//! Generators:
//! - [`fis_greedy`] gives every source of arity `m` the value `1/m` and every
//!   party the minimum over its incident sources;
//! - [`fis_decomposed`] takes one caller-chosen assignment per source and
//!   again folds with min;
//! - [`fis_family`] produces the parametric `(m, k)` patterns for the named
//!   chain/star/cycle/complete layouts;
//! - [`fis_optimal`] maximizes a linear objective exactly, with lexicographic
//!   tie-breaking by party index;
//! - [`facet_weights`] gives the 0/1 limits of the parametric families as
//!   `m` grows with `k` fixed.

mod simplex;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::dist::big;
use crate::error::{Error, Result};
use crate::topology::{BuiltinKind, NetworkTopology};
use simplex::LexProgram;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyVariant {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FacetVariant {
    EvenParties,
    OddParties,
    Hub,
    Leaves,
}

/// Where a weight vector came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Greedy,
    Decomposed,
    Family {
        kind: BuiltinKind,
        m: u64,
        k: u64,
        variant: FamilyVariant,
    },
    Optimal,
    Facet {
        kind: BuiltinKind,
        variant: FacetVariant,
    },
    User,
}

/// An exponent vector with exact rational entries, one per party.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalWeights {
    weights: Vec<BigRational>,
    provenance: Provenance,
}

impl FractionalWeights {
    pub fn new(weights: Vec<BigRational>, provenance: Provenance) -> Self {
        FractionalWeights {
            weights,
            provenance,
        }
    }

    pub fn user(weights: Vec<BigRational>) -> Self {
        Self::new(weights, Provenance::User)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.weights
            .iter()
            .map(|w| w.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Render as space-separated exact rationals, party order.
    pub fn render(&self) -> String {
        self.weights
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse "p/q", an integer, or a decimal. Decimals are converted to the best
/// rational with denominator at most 10^6.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.trim().parse().map_err(|_| bad_rational(s))?;
        let d: i64 = den.trim().parse().map_err(|_| bad_rational(s))?;
        if d == 0 {
            return Err(bad_rational(s));
        }
        return Ok(big(n) / big(d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches('-');
        if !int_digits.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
            || frac_part.is_empty() && int_digits.is_empty()
        {
            return Err(bad_rational(s));
        }
        let int_val: i128 = if int_digits.is_empty() {
            0
        } else {
            int_digits.parse().map_err(|_| bad_rational(s))?
        };
        let mut numer = BigRational::from_integer(int_val.into());
        let mut scale = BigRational::one();
        for c in frac_part.chars() {
            scale /= big(10);
            numer += big((c as u8 - b'0') as i64) * &scale;
        }
        if negative {
            numer = -numer;
        }
        return Ok(bounded_denominator(&numer, 1_000_000));
    }
    let n: i64 = s.parse().map_err(|_| bad_rational(s))?;
    Ok(big(n))
}

fn bad_rational(s: &str) -> Error {
    Error::Parse(format!("`{s}` is not a rational number"))
}

/// Best rational approximation with denominator <= `max_den`, by walking the
/// continued-fraction convergents.
fn bounded_denominator(x: &BigRational, max_den: u64) -> BigRational {
    use num_bigint::BigInt;
    if x.denom() <= &BigInt::from(max_den) {
        return x.clone();
    }
    let limit = BigInt::from(max_den);
    let mut a = x.clone();
    let (mut p0, mut q0) = (BigInt::from(1), BigInt::from(0));
    let (mut p1, mut q1) = (a.floor().to_integer(), BigInt::from(1));
    let mut frac = &a - a.floor();
    while !frac.is_zero() {
        a = frac.recip();
        let ai = a.floor().to_integer();
        let p2 = &ai * &p1 + &p0;
        let q2 = &ai * &q1 + &q0;
        if q2 > limit {
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        frac = &a - a.floor();
    }
    BigRational::new(p1, q1)
}

/// Exact Definition-1 check: `0 <= s_j <= 1` and every per-source sum <= 1.
pub fn is_valid_fis(t: &NetworkTopology, w: &FractionalWeights) -> Result<bool> {
    if w.len() != t.n_parties() {
        return Err(Error::WeightLength {
            got: w.len(),
            want: t.n_parties(),
        });
    }
    let one = BigRational::one();
    for s in w.weights() {
        if s < &BigRational::zero() || s > &one {
            return Ok(false);
        }
    }
    for src in t.sources() {
        let sum: BigRational = src
            .iter()
            .fold(BigRational::zero(), |acc, &p| acc + &w.weights()[p]);
        if sum > one {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every source of arity `m` contributes `1/m`; each party takes the minimum
/// over its incident sources. Isolated parties get 1, the strongest
/// admissible exponent.
pub fn fis_greedy(t: &NetworkTopology) -> FractionalWeights {
    let n = t.n_parties();
    let mut weights = vec![BigRational::one(); n];
    let mut touched = vec![false; n];
    for src in t.sources() {
        let x = big(1) / big(src.len() as i64);
        for &p in src {
            if !touched[p] || x < weights[p] {
                weights[p] = x.clone();
            }
            touched[p] = true;
        }
    }
    FractionalWeights::new(weights, Provenance::Greedy)
}

/// Fold caller-chosen per-source assignments with min. `per_source[i]` lists
/// one weight per party of source `i`, aligned with the source's sorted
/// party order; each assignment must be nonnegative and sum to at most 1.
pub fn fis_decomposed(
    t: &NetworkTopology,
    per_source: &[Vec<BigRational>],
) -> Result<FractionalWeights> {
    if per_source.len() != t.n_sources() {
        return Err(Error::Bounds(format!(
            "{} per-source assignments for {} sources",
            per_source.len(),
            t.n_sources()
        )));
    }
    let n = t.n_parties();
    let mut weights = vec![BigRational::one(); n];
    let mut touched = vec![false; n];
    for (si, (src, assignment)) in t.sources().iter().zip(per_source).enumerate() {
        if assignment.len() != src.len() {
            return Err(Error::Assignment {
                source_index: si,
                reason: format!("{} weights for {} parties", assignment.len(), src.len()),
            });
        }
        let mut sum = BigRational::zero();
        for a in assignment {
            if a < &BigRational::zero() {
                return Err(Error::Assignment {
                    source_index: si,
                    reason: "negative weight".into(),
                });
            }
            sum += a;
        }
        if sum > BigRational::one() {
            return Err(Error::Assignment {
                source_index: si,
                reason: format!("weights sum to {} > 1", format_rational(&sum)),
            });
        }
        for (&p, a) in src.iter().zip(assignment) {
            if !touched[p] || *a < weights[p] {
                weights[p] = a.clone();
            }
            touched[p] = true;
        }
    }
    Ok(FractionalWeights::new(weights, Provenance::Decomposed))
}

/// Parametric weight families for the named layouts.
///
/// Chain and cycle alternate `k/m` and `(m-k)/m` along the party order.
/// Variant `A` follows the even-count pattern `(k/m, (m-k)/m, ...)`; for an
/// odd party count it starts from `(m-k)/m` instead so that the alternation
/// closes. Variant `B` swaps the two roles; for an odd party count its last
/// two parties both carry `k/m`, which needs `2k <= m`. Stars put `k/m` on
/// the leaves and `(m-k)/m` on the hub (variant `A`) or the reverse
/// (variant `B`). Complete layouts of arity `m` take the uniform `1/m` and
/// ignore `k`.
pub fn fis_family(
    kind: BuiltinKind,
    n: usize,
    m: u64,
    k: u64,
    variant: FamilyVariant,
) -> Result<FractionalWeights> {
    if n < 2 {
        return Err(Error::Bounds("family weights need n >= 2".into()));
    }
    let provenance = Provenance::Family {
        kind,
        m,
        k,
        variant,
    };
    if kind == BuiltinKind::Complete {
        if m < 2 || m as usize > n {
            return Err(Error::Bounds(format!(
                "complete family needs 2 <= m <= n (got m={m}, n={n})"
            )));
        }
        let w = big(1) / big(m as i64);
        return Ok(FractionalWeights::new(vec![w; n], provenance));
    }
    if m < 2 || k == 0 || k > m - 1 {
        return Err(Error::Bounds(format!(
            "family weights need m >= 2, 1 <= k <= m-1 (got m={m}, k={k})"
        )));
    }
    let lo = big(k as i64) / big(m as i64);
    let hi = big((m - k) as i64) / big(m as i64);
    let weights: Vec<BigRational> = match kind {
        BuiltinKind::Chain | BuiltinKind::Cycle => {
            let odd_n = n % 2 == 1;
            match (variant, odd_n) {
                // (k/m, (m-k)/m, ..., (m-k)/m) for even n
                (FamilyVariant::A, false) => alternate(n, &lo, &hi),
                // ((m-k)/m, k/m, ..., (m-k)/m) for odd n
                (FamilyVariant::A, true) => {
                    if kind == BuiltinKind::Cycle && 2 * k < m {
                        return Err(Error::Bounds(format!(
                            "odd-n cycle variant a needs 2k >= m (got m={m}, k={k})"
                        )));
                    }
                    alternate(n, &hi, &lo)
                }
                // ((m-k)/m, k/m, ..., k/m) for even n
                (FamilyVariant::B, false) => alternate(n, &hi, &lo),
                // ((m-k)/m, k/m, ..., k/m, k/m) for odd n; the trailing pair
                // of k/m entries shares an edge, hence 2k <= m.
                (FamilyVariant::B, true) => {
                    if 2 * k > m {
                        return Err(Error::Bounds(format!(
                            "odd-n {} variant b needs 2k <= m (got m={m}, k={k})",
                            if kind == BuiltinKind::Chain {
                                "chain"
                            } else {
                                "cycle"
                            }
                        )));
                    }
                    let mut w = alternate(n - 1, &hi, &lo);
                    w.push(lo.clone());
                    w
                }
            }
        }
        BuiltinKind::Star => {
            let (leaf, hub) = match variant {
                FamilyVariant::A => (lo.clone(), hi.clone()),
                FamilyVariant::B => (hi.clone(), lo.clone()),
            };
            let mut w = vec![leaf; n - 1];
            w.push(hub);
            w
        }
        BuiltinKind::Complete | BuiltinKind::SingleSource => unreachable!("handled above"),
    };
    let fw = FractionalWeights::new(weights, provenance);
    let topo = NetworkTopology::builtin(kind, n, m as usize)?;
    if !is_valid_fis(&topo, &fw)? {
        return Err(Error::Internal(
            "family pattern violates its own constraints".into(),
        ));
    }
    Ok(fw)
}

fn alternate(n: usize, first: &BigRational, second: &BigRational) -> Vec<BigRational> {
    (0..n)
        .map(|i| {
            if i % 2 == 0 {
                first.clone()
            } else {
                second.clone()
            }
        })
        .collect()
}

/// Exact LP: maximize `objective . s` over Definition-1 constraints and
/// `s_j <= 1`, ties broken lexicographically (larger `s_1`, then `s_2`, ...).
/// `None` means the all-ones objective. The solver is exact; sizes beyond
/// n = 12 parties are refused rather than solved approximately.
pub fn fis_optimal(
    t: &NetworkTopology,
    objective: Option<&[BigRational]>,
) -> Result<FractionalWeights> {
    let n = t.n_parties();
    if n > 12 {
        return Err(Error::Bounds(format!(
            "exact optimizer is capped at 12 parties (got {n})"
        )));
    }
    let default_obj;
    let obj: &[BigRational] = match objective {
        Some(o) => {
            if o.len() != n {
                return Err(Error::WeightLength {
                    got: o.len(),
                    want: n,
                });
            }
            if o.iter().any(|c| c < &BigRational::zero()) {
                return Err(Error::Bounds(
                    "objective entries must be nonnegative".into(),
                ));
            }
            o
        }
        None => {
            default_obj = vec![BigRational::one(); n];
            &default_obj
        }
    };

    let mut objectives = Vec::with_capacity(n + 1);
    objectives.push(obj.to_vec());
    for j in 0..n {
        let mut row = vec![BigRational::zero(); n];
        row[j] = BigRational::one();
        objectives.push(row);
    }

    let mut constraints = Vec::new();
    for src in t.sources() {
        let mut row = vec![BigRational::zero(); n];
        for &p in src {
            row[p] = BigRational::one();
        }
        constraints.push((row, BigRational::one()));
    }
    for j in 0..n {
        let mut row = vec![BigRational::zero(); n];
        row[j] = BigRational::one();
        constraints.push((row, BigRational::one()));
    }

    let program = LexProgram {
        objectives,
        constraints,
        n_vars: n,
    };
    let weights = program.solve()?;
    let fw = FractionalWeights::new(weights, Provenance::Optimal);
    debug_assert!(is_valid_fis(t, &fw).unwrap_or(false));
    Ok(fw)
}

/// The `m -> infinity` limits of [`fis_family`] with `k` fixed: 0/1 vectors.
/// Chains and cycles keep 1 on the chosen parity class; stars keep the hub
/// or the leaves.
pub fn facet_weights(
    kind: BuiltinKind,
    n: usize,
    variant: FacetVariant,
) -> Result<FractionalWeights> {
    if n < 2 {
        return Err(Error::Bounds("facet weights need n >= 2".into()));
    }
    let weights: Vec<BigRational> = match (kind, variant) {
        (BuiltinKind::Chain | BuiltinKind::Cycle, FacetVariant::OddParties) => {
            if kind == BuiltinKind::Cycle && n % 2 == 1 {
                return Err(Error::Bounds(
                    "odd-n cycle has no odd-parties facet: the wrap-around edge would sum to 2"
                        .into(),
                ));
            }
            (0..n)
                .map(|i| if i % 2 == 0 { big(1) } else { big(0) })
                .collect()
        }
        (BuiltinKind::Chain | BuiltinKind::Cycle, FacetVariant::EvenParties) => (0..n)
            .map(|i| if i % 2 == 1 { big(1) } else { big(0) })
            .collect(),
        (BuiltinKind::Star, FacetVariant::Hub) => {
            let mut w = vec![big(0); n - 1];
            w.push(big(1));
            w
        }
        (BuiltinKind::Star, FacetVariant::Leaves) => {
            let mut w = vec![big(1); n - 1];
            w.push(big(0));
            w
        }
        _ => {
            return Err(Error::Bounds(format!(
                "facet variant {variant:?} is incompatible with {kind:?}"
            )));
        }
    };
    let fw = FractionalWeights::new(weights, Provenance::Facet { kind, variant });
    let topo = NetworkTopology::builtin(kind, n, 2)?;
    if !is_valid_fis(&topo, &fw)? {
        return Err(Error::Internal(
            "facet pattern violates its own constraints".into(),
        ));
    }
    Ok(fw)
}
