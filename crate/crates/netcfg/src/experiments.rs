//! Noisy-state visibility studies: the closed-form threshold for noisy GHZ
//! states and `(theta, v)` region scans for the named noisy networks.
//!
//! Region scans sample open intervals at cell centers: `theta` over
//! `(0, pi/2)` and the visibility `v` over `(0, 1)`. Thresholds are
//! extracted by bisection in `v` at fixed `theta` rather than grid lookup.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::path::Path;

use crate::dist::big;
use crate::error::{Error, Result};
use crate::fis::FractionalWeights;
use crate::inequality::{chain_min_check, check_config, ViolationReport};
use crate::quantum::{
    add_noise, assemble, born_distribution, make_state, NetworkQuantumState, StateSpec,
};

/// Margin floor treated as a genuine violation during bisection.
const BISECT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    NoisyGhz,
    NoisyW,
    NoisyTriangle,
    NoisyStar { n: usize },
}

impl Experiment {
    pub fn id(&self) -> String {
        match self {
            Experiment::NoisyGhz => "noisy_ghz".into(),
            Experiment::NoisyW => "noisy_w".into(),
            Experiment::NoisyTriangle => "noisy_triangle".into(),
            Experiment::NoisyStar { n } => format!("noisy_star_{n}"),
        }
    }
}

/// Which inequality the scan records: the symmetric square-root form with
/// every weight `1/2`, or the two-sided chain form at `(m, k = 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InequalityId {
    Fin1,
    Fin3,
}

impl InequalityId {
    pub fn id(&self) -> &'static str {
        match self {
            InequalityId::Fin1 => "fin1",
            InequalityId::Fin3 => "fin3",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RegionRow {
    pub theta: f64,
    pub v: f64,
    pub margin: f64,
    pub violated: bool,
}

/// Grid of maximal margins; rows cover the grid once, theta outer, v inner.
#[derive(Debug, Clone)]
pub struct RegionTable {
    pub experiment: Experiment,
    pub inequality: InequalityId,
    pub m: u64,
    pub theta_points: usize,
    pub v_points: usize,
    pub tolerance: f64,
    pub rows: Vec<RegionRow>,
}

/// Large-`m` visibility threshold for the noisy GHZ state at angle `theta`,
/// from the all-zeros outcome of the chain form:
/// `v* = (3 - sqrt(9 - 8 cos^2(2 theta))) / (4 cos^2(2 theta))`, extended by
/// its limit `1/3` at the removable singularity `cos(2 theta) = 0`.
///
/// ```
/// use netcfg::experiments::visibility_threshold_ghz;
/// use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};
///
/// let symmetric = visibility_threshold_ghz(FRAC_PI_4)?;
/// assert!((symmetric - 1.0 / 3.0).abs() < 1e-9);
/// let skew = visibility_threshold_ghz(FRAC_PI_6)?;
/// assert!((skew - (3.0 - 7f64.sqrt())).abs() < 1e-12);
/// # Ok::<(), netcfg::Error>(())
/// ```
pub fn visibility_threshold_ghz(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::Bounds(format!("theta {theta} outside (0, pi/2)")));
    }
    let u2 = (2.0 * theta).cos().powi(2);
    if u2 < 1e-9 {
        // second-order expansion around the singularity
        return Ok(1.0 / 3.0 + 2.0 * u2 / 27.0);
    }
    Ok((3.0 - (9.0 - 8.0 * u2).sqrt()) / (4.0 * u2))
}

/// The noisy network behind each experiment at one `(theta, v)` point.
/// The w-state experiment ties `gamma = theta`.
pub fn experiment_state(e: Experiment, theta: f64, v: f64) -> Result<NetworkQuantumState> {
    match e {
        Experiment::NoisyGhz => {
            let c = add_noise(&make_state(&StateSpec::Ghz { theta, qubits: 3 })?, v)?;
            assemble(vec![c], vec![vec![1, 2, 3]], 3)
        }
        Experiment::NoisyW => noisy_w_state(theta, theta, v),
        Experiment::NoisyTriangle => {
            let comps = (0..3)
                .map(|_| add_noise(&make_state(&StateSpec::Epr { theta })?, v))
                .collect::<Result<Vec<_>>>()?;
            assemble(comps, vec![vec![1, 2], vec![2, 3], vec![3, 1]], 3)
        }
        Experiment::NoisyStar { n } => {
            if n < 3 {
                return Err(Error::Bounds("star experiment needs n >= 3".into()));
            }
            let comps = (0..n - 1)
                .map(|_| add_noise(&make_state(&StateSpec::Epr { theta })?, v))
                .collect::<Result<Vec<_>>>()?;
            let assignment = (1..n).map(|i| vec![i, n]).collect();
            assemble(comps, assignment, n)
        }
    }
}

/// The noisy w state as its own network (one three-qubit component).
pub fn noisy_w_state(theta: f64, gamma: f64, v: f64) -> Result<NetworkQuantumState> {
    let c = add_noise(&make_state(&StateSpec::W3 { theta, gamma })?, v)?;
    assemble(vec![c], vec![vec![1, 2, 3]], 3)
}

fn scan_report(
    e: Experiment,
    theta: f64,
    v: f64,
    m: u64,
    inequality: InequalityId,
    tolerance: f64,
) -> Result<ViolationReport> {
    let state = experiment_state(e, theta, v)?;
    let d = born_distribution(&state, &state.computational_bases()?)?;
    match inequality {
        InequalityId::Fin1 => {
            let half = big(1) / big(2);
            let w = FractionalWeights::user(vec![half; d.n_parties()]);
            check_config(&d, &w, tolerance)
        }
        InequalityId::Fin3 => chain_min_check(&d, m, 1, tolerance),
    }
}

/// Maximal margin of the chosen inequality at one grid point.
pub fn scan_margin(
    e: Experiment,
    theta: f64,
    v: f64,
    m: u64,
    inequality: InequalityId,
) -> Result<f64> {
    Ok(scan_report(e, theta, v, m, inequality, BISECT_TOL)?.max_margin)
}

/// Scan the full `(theta, v)` grid. Caps at 10^6 points.
pub fn region_scan(
    e: Experiment,
    grid: (usize, usize),
    m: u64,
    inequality: InequalityId,
    tolerance: f64,
) -> Result<RegionTable> {
    let (tn, vn) = grid;
    if tn < 2 || vn < 2 {
        return Err(Error::Bounds(
            "grid needs at least 2 points per axis".into(),
        ));
    }
    if tn.saturating_mul(vn) > 1_000_000 {
        return Err(Error::Bounds("grid exceeds 10^6 points".into()));
    }
    let mut rows = Vec::with_capacity(tn * vn);
    for i in 0..tn {
        let theta = (i as f64 + 0.5) / tn as f64 * FRAC_PI_2;
        for j in 0..vn {
            let v = (j as f64 + 0.5) / vn as f64;
            let margin = scan_margin(e, theta, v, m, inequality)?;
            rows.push(RegionRow {
                theta,
                v,
                margin,
                violated: margin > tolerance,
            });
        }
    }
    Ok(RegionTable {
        experiment: e,
        inequality,
        m,
        theta_points: tn,
        v_points: vn,
        tolerance,
        rows,
    })
}

/// Smallest `v` whose margin is positive at fixed `theta`, by bisection to
/// `1e-4`; `None` when even `v = 1` does not violate.
pub fn threshold_bisect(
    e: Experiment,
    theta: f64,
    m: u64,
    inequality: InequalityId,
) -> Result<Option<f64>> {
    let margin_at = |v: f64| scan_margin(e, theta, v, m, inequality);
    if margin_at(1.0)? <= BISECT_TOL {
        return Ok(None);
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if margin_at(mid)? > BISECT_TOL {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Worst (largest) threshold over a theta grid of cell centers.
pub fn sup_threshold(
    e: Experiment,
    theta_points: usize,
    m: u64,
    inequality: InequalityId,
) -> Result<f64> {
    let mut sup: f64 = 0.0;
    for i in 0..theta_points {
        let theta = (i as f64 + 0.5) / theta_points as f64 * FRAC_PI_2;
        match threshold_bisect(e, theta, m, inequality)? {
            Some(t) => sup = sup.max(t),
            None => sup = 1.0f64.max(sup),
        }
    }
    Ok(sup)
}

fn sig9(x: f64) -> String {
    format!("{x:.8e}")
}

/// Render the region table as CSV: scan parameters as `#` comments, header
/// `theta,v,margin,violated`, rows in row-major order, floats with nine
/// significant digits. Deterministic bytes for fixed inputs.
pub fn render_csv(table: &RegionTable) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# experiment={} inequality={} m={} theta_points={} v_points={} tol={}",
        table.experiment.id(),
        table.inequality.id(),
        table.m,
        table.theta_points,
        table.v_points,
        sig9(table.tolerance),
    );
    out.push_str("theta,v,margin,violated\n");
    for row in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            sig9(row.theta),
            sig9(row.v),
            sig9(row.margin),
            row.violated
        );
    }
    out
}

pub fn emit_csv(table: &RegionTable, path: &Path) -> Result<()> {
    std::fs::write(path, render_csv(table))?;
    Ok(())
}

/// Parse back what [`render_csv`] produced (comments skipped).
pub fn parse_csv(text: &str) -> Result<Vec<RegionRow>> {
    let mut rows = Vec::new();
    for line in text.lines() {
        if line.starts_with('#') || line.starts_with("theta") || line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("bad csv row `{line}`")));
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad float `{s}`")))
        };
        rows.push(RegionRow {
            theta: parse(parts[0])?,
            v: parse(parts[1])?,
            margin: parse(parts[2])?,
            violated: parts[3] == "true",
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    #[test]
    fn threshold_formula_values() {
        // limit at the symmetric point
        assert!((visibility_threshold_ghz(FRAC_PI_4).unwrap() - 1.0 / 3.0).abs() < 1e-9);
        // cos^2(pi/3) = 1/4: v* = 3 - sqrt(7)
        let expected = 3.0 - 7f64.sqrt();
        assert!((visibility_threshold_ghz(FRAC_PI_6).unwrap() - expected).abs() < 1e-12);
        // theta -> 0: v* -> 1/2
        assert!((visibility_threshold_ghz(1e-6).unwrap() - 0.5).abs() < 1e-9);
        assert!(visibility_threshold_ghz(0.0).is_err());
        assert!(visibility_threshold_ghz(FRAC_PI_2).is_err());
    }

    #[test]
    fn threshold_formula_range() {
        for i in 1..40 {
            let theta = i as f64 / 40.0 * FRAC_PI_2;
            let v = visibility_threshold_ghz(theta).unwrap();
            assert!(v > 0.0 && v <= 0.5 + 1e-12, "theta={theta} v={v}");
        }
    }

    #[test]
    fn ghz_bisection_matches_formula_at_pi_3() {
        let t = threshold_bisect(Experiment::NoisyGhz, FRAC_PI_3, 1000, InequalityId::Fin3)
            .unwrap()
            .unwrap();
        let v = visibility_threshold_ghz(FRAC_PI_3).unwrap();
        assert!((t - v).abs() < 0.01, "bisect {t} vs formula {v}");
    }

    #[test]
    fn noisy_w_margin_sign_flips_near_half() {
        // the (0,0,1) outcome of the noisy w state crosses zero near v = 1/2
        let state_lo = noisy_w_state(FRAC_PI_4, FRAC_PI_4, 0.3).unwrap();
        let d_lo = born_distribution(&state_lo, &state_lo.computational_bases().unwrap()).unwrap();
        let r_lo = chain_min_check(&d_lo, 1000, 1, BISECT_TOL).unwrap();
        assert!(r_lo.margin_at(&[0, 0, 1]).unwrap() < 0.0);
        let state_hi = noisy_w_state(FRAC_PI_4, FRAC_PI_4, 0.8).unwrap();
        let d_hi = born_distribution(&state_hi, &state_hi.computational_bases().unwrap()).unwrap();
        let r_hi = chain_min_check(&d_hi, 1000, 1, BISECT_TOL).unwrap();
        assert!(r_hi.margin_at(&[0, 0, 1]).unwrap() > 0.0);
    }

    #[test]
    fn margins_monotone_in_v() {
        for e in [Experiment::NoisyGhz, Experiment::NoisyTriangle] {
            let table = region_scan(e, (4, 6), 1000, InequalityId::Fin3, 1e-9).unwrap();
            for row_block in table.rows.chunks(6) {
                for w in row_block.windows(2) {
                    assert!(
                        w[1].margin >= w[0].margin - 1e-12,
                        "margin not monotone at theta={}",
                        w[0].theta
                    );
                }
            }
        }
    }

    #[test]
    fn region_rows_cover_grid_once() {
        let table =
            region_scan(Experiment::NoisyGhz, (3, 4), 1000, InequalityId::Fin1, 1e-9).unwrap();
        assert_eq!(table.rows.len(), 12);
        let csv = render_csv(&table);
        assert_eq!(csv.lines().count(), 1 + 1 + 12);
    }

    #[test]
    fn csv_bytes_are_deterministic_and_parse_back() {
        let table =
            region_scan(Experiment::NoisyGhz, (2, 2), 1000, InequalityId::Fin3, 1e-9).unwrap();
        let a = render_csv(&table);
        let b = render_csv(&table);
        assert_eq!(a, b);
        assert!(a.starts_with("# experiment=noisy_ghz inequality=fin3 m=1000"));
        let rows = parse_csv(&a).unwrap();
        assert_eq!(rows.len(), 4);
        for (parsed, orig) in rows.iter().zip(&table.rows) {
            assert!((parsed.margin - orig.margin).abs() < 1e-9);
            assert_eq!(parsed.violated, orig.violated);
        }
    }

    #[test]
    fn star_experiment_dimensions() {
        let s = experiment_state(Experiment::NoisyStar { n: 4 }, 0.7, 0.9).unwrap();
        assert_eq!(s.party_dims(), vec![2, 2, 2, 8]);
        assert!(experiment_state(Experiment::NoisyStar { n: 2 }, 0.7, 0.9).is_err());
    }

    #[test]
    fn grid_bounds_checked() {
        assert!(region_scan(Experiment::NoisyGhz, (1, 5), 1000, InequalityId::Fin3, 1e-9).is_err());
        assert!(region_scan(
            Experiment::NoisyGhz,
            (2000, 2000),
            1000,
            InequalityId::Fin3,
            1e-9
        )
        .is_err());
    }
}
