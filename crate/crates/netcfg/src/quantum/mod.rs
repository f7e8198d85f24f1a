//! Small multipartite quantum networks and exact Born-rule distributions.
//!
//! A network state is a list of density-matrix components plus an assignment
//! of every component subsystem to an owning party. A party holding several
//! subsystems measures on their flattened product space (component-major
//! order), which is how joint measurements such as a Bell measurement on two
//! qubits from different sources are expressed.
//!
//! Measurements are projective rank-1 bases only. All distributions are
//! exact expectation values, never sampled.

mod basis;
mod docs;
mod state;

pub use basis::{make_basis, BasisSpec, MeasurementBasis};
pub use docs::{parse_bases, parse_state, serialize_state};
pub use state::{add_noise, make_state, StateSpec};

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::dist::OutcomeDistribution;
use crate::error::{Error, Result};
use crate::topology::NetworkTopology;

pub type Cx = nalgebra::Complex<f64>;

/// Hermiticity and unit-trace tolerance for density matrices.
pub const HERM_TOL: f64 = 1e-12;
/// Most negative admissible eigenvalue.
pub const PSD_TOL: f64 = -1e-10;
/// Gram-matrix tolerance for bases.
pub const GRAM_TOL: f64 = 1e-9;
/// Normalization tolerance for pure-state amplitudes.
pub const NORM_TOL: f64 = 1e-9;
/// Largest representable total dimension.
pub const DIM_CAP: usize = 1 << 14;

/// A density matrix over a tensor product of subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumComponent {
    rho: DMatrix<Cx>,
    dims: Vec<usize>,
}

impl QuantumComponent {
    /// Validate and wrap: Hermitian within 1e-12, trace 1 within 1e-12,
    /// eigenvalues above -1e-10.
    pub fn from_density(rho: DMatrix<Cx>, dims: Vec<usize>) -> Result<Self> {
        let d: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::State("subsystem dimensions must be positive".into()));
        }
        if rho.nrows() != d || rho.ncols() != d {
            return Err(Error::Dimension(format!(
                "matrix is {}x{}, subsystem dims give {d}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        for i in 0..d {
            for j in 0..d {
                let delta = rho[(i, j)] - rho[(j, i)].conj();
                if delta.norm() > HERM_TOL {
                    return Err(Error::State(format!(
                        "matrix is not Hermitian at ({i},{j}): deviation {delta}"
                    )));
                }
            }
        }
        let trace: Cx = (0..d).map(|i| rho[(i, i)]).sum();
        if (trace.re - 1.0).abs() > HERM_TOL || trace.im.abs() > HERM_TOL {
            return Err(Error::State(format!("trace is {trace}, expected 1")));
        }
        let component = QuantumComponent { rho, dims };
        let eigen = component.eigenpairs()?;
        if let Some((min, _)) = eigen.iter().min_by(|a, b| a.0.partial_cmp(&b.0).unwrap()) {
            if *min < PSD_TOL {
                return Err(Error::State(format!(
                    "matrix has eigenvalue {min} below -1e-10"
                )));
            }
        }
        Ok(component)
    }

    /// Wrap a normalized pure state as its projector.
    pub fn from_pure(v: DVector<Cx>, dims: Vec<usize>) -> Result<Self> {
        let d: usize = dims.iter().product();
        if v.len() != d {
            return Err(Error::Dimension(format!(
                "vector has length {}, subsystem dims give {d}",
                v.len()
            )));
        }
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::State(format!(
                "state has squared norm {norm}, expected 1"
            )));
        }
        let scale = norm.sqrt();
        let v = v / Cx::new(scale, 0.0);
        let mut rho = DMatrix::from_element(d, d, Cx::new(0.0, 0.0));
        for i in 0..d {
            for j in 0..d {
                rho[(i, j)] = v[i] * v[j].conj();
            }
        }
        Ok(QuantumComponent { rho, dims })
    }

    pub fn rho(&self) -> &DMatrix<Cx> {
        &self.rho
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn purity(&self) -> f64 {
        let sq = &self.rho * &self.rho;
        (0..self.dim()).map(|i| sq[(i, i)].re).sum()
    }

    /// Spectral decomposition (exactly Hermitized first). Eigenvalues may be
    /// slightly negative within the PSD tolerance.
    pub fn eigenpairs(&self) -> Result<Vec<(f64, DVector<Cx>)>> {
        let d = self.dim();
        let mut herm = self.rho.clone();
        for i in 0..d {
            for j in 0..d {
                herm[(i, j)] = (self.rho[(i, j)] + self.rho[(j, i)].conj()) * Cx::new(0.5, 0.0);
            }
        }
        let eigen = SymmetricEigen::new(herm);
        let mut out = Vec::with_capacity(d);
        for k in 0..d {
            out.push((
                eigen.eigenvalues[k],
                eigen.eigenvectors.column(k).into_owned(),
            ));
        }
        Ok(out)
    }

    /// Conjugate by per-subsystem operators: `(U1 x U2 x ..)^† rho (..)`.
    /// `None` leaves a subsystem untouched.
    pub fn conjugated(&self, ops: &[Option<DMatrix<Cx>>]) -> Result<QuantumComponent> {
        if ops.len() != self.dims.len() {
            return Err(Error::Dimension(
                "one operator per subsystem required".into(),
            ));
        }
        let d = self.dim();
        let mut u = DMatrix::from_element(1, 1, Cx::new(1.0, 0.0));
        for (op, &dim) in ops.iter().zip(&self.dims) {
            let factor = match op {
                Some(m) => {
                    if m.nrows() != dim || m.ncols() != dim {
                        return Err(Error::Dimension(format!(
                            "operator is {}x{} on a dim-{dim} subsystem",
                            m.nrows(),
                            m.ncols()
                        )));
                    }
                    m.clone()
                }
                None => DMatrix::identity(dim, dim),
            };
            u = u.kronecker(&factor);
        }
        let rho = u.adjoint() * &self.rho * &u;
        debug_assert_eq!(rho.nrows(), d);
        QuantumComponent::from_density(rho, self.dims.clone())
    }
}

/// Components plus a subsystem -> party assignment.
#[derive(Debug, Clone)]
pub struct NetworkQuantumState {
    components: Vec<QuantumComponent>,
    /// `assignment[c][s]` is the 0-based party owning subsystem `s` of
    /// component `c`.
    assignment: Vec<Vec<usize>>,
    n_parties: usize,
}

/// Attach components to parties. `assignment[c]` lists one 1-based party per
/// subsystem of component `c`.
pub fn assemble(
    components: Vec<QuantumComponent>,
    assignment: Vec<Vec<usize>>,
    n_parties: usize,
) -> Result<NetworkQuantumState> {
    if components.is_empty() || n_parties == 0 {
        return Err(Error::State(
            "a network needs at least one component and one party".into(),
        ));
    }
    if assignment.len() != components.len() {
        return Err(Error::State(format!(
            "{} assignments for {} components",
            assignment.len(),
            components.len()
        )));
    }
    let mut zero_based = Vec::with_capacity(assignment.len());
    for (c, (comp, owners)) in components.iter().zip(&assignment).enumerate() {
        if owners.len() != comp.dims().len() {
            return Err(Error::State(format!(
                "component {c} has {} subsystems but {} owners",
                comp.dims().len(),
                owners.len()
            )));
        }
        let mut zb = Vec::with_capacity(owners.len());
        for &p in owners {
            if p == 0 || p > n_parties {
                return Err(Error::State(format!(
                    "component {c} assigned to party {p}, network has {n_parties}"
                )));
            }
            zb.push(p - 1);
        }
        zero_based.push(zb);
    }
    let state = NetworkQuantumState {
        components,
        assignment: zero_based,
        n_parties,
    };
    if state.total_dim() > DIM_CAP {
        return Err(Error::DimensionCap(state.total_dim()));
    }
    Ok(state)
}

impl NetworkQuantumState {
    pub fn components(&self) -> &[QuantumComponent] {
        &self.components
    }

    pub fn assignment(&self) -> &[Vec<usize>] {
        &self.assignment
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn total_dim(&self) -> usize {
        self.components.iter().map(|c| c.dim()).product()
    }

    /// Per-party subsystems in component-major order; this order defines the
    /// flattening of the party's local space.
    pub fn party_subsystems(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.n_parties];
        for (c, owners) in self.assignment.iter().enumerate() {
            for (s, &p) in owners.iter().enumerate() {
                out[p].push((c, s));
            }
        }
        out
    }

    /// True local dimensions derived from the assignment (1 for a party
    /// holding nothing).
    pub fn party_dims(&self) -> Vec<usize> {
        self.party_subsystems()
            .iter()
            .map(|subs| {
                subs.iter()
                    .map(|&(c, s)| self.components[c].dims()[s])
                    .product()
            })
            .collect()
    }

    /// One hyperedge per component, over the distinct owning parties.
    pub fn induced_topology(&self) -> NetworkTopology {
        let sources = self
            .assignment
            .iter()
            .map(|owners| {
                let mut parties: Vec<usize> = owners.clone();
                parties.sort_unstable();
                parties.dedup();
                parties
            })
            .collect();
        NetworkTopology::from_zero_based(
            (1..=self.n_parties).map(|i| format!("A{i}")).collect(),
            sources,
        )
    }

    /// Product of component purities; 1 for a globally pure state.
    pub fn purity(&self) -> f64 {
        self.components.iter().map(|c| c.purity()).product()
    }

    /// Computational bases on every party's flattened local space.
    pub fn computational_bases(&self) -> Result<Vec<MeasurementBasis>> {
        self.party_dims()
            .iter()
            .map(|&d| make_basis(&BasisSpec::Computational, d))
            .collect()
    }
}

/// Exact Born distribution `P(a) = tr[(M_a1 x .. x M_an) rho]` for rank-1
/// projective bases, one basis per party on its flattened local space.
pub fn born_distribution(
    state: &NetworkQuantumState,
    bases: &[MeasurementBasis],
) -> Result<OutcomeDistribution> {
    let party_dims = state.party_dims();
    if bases.len() != state.n_parties() {
        return Err(Error::Dimension(format!(
            "{} bases for {} parties",
            bases.len(),
            state.n_parties()
        )));
    }
    for (j, (b, &d)) in bases.iter().zip(&party_dims).enumerate() {
        if b.dim() != d {
            return Err(Error::Dimension(format!(
                "party {} has local dimension {d}, basis has {}",
                j + 1,
                b.dim()
            )));
        }
    }
    let total = state.total_dim();
    if total > DIM_CAP {
        return Err(Error::DimensionCap(total));
    }

    // Global subsystem order is component-major (the kron order of the
    // eigenvector products). The measurement wants party-major order with
    // each party's subsystems contiguous. Precompute source -> target index.
    let party_subs = state.party_subsystems();
    let mut source_order: Vec<(usize, usize, usize)> = Vec::new(); // (c, s, dim)
    for (c, comp) in state.components().iter().enumerate() {
        for (s, &d) in comp.dims().iter().enumerate() {
            source_order.push((c, s, d));
        }
    }
    let mut target_order: Vec<(usize, usize, usize)> = Vec::new();
    for subs in &party_subs {
        for &(c, s) in subs {
            target_order.push((c, s, state.components()[c].dims()[s]));
        }
    }
    // stride of each target slot, and for each source slot its target stride
    let mut target_stride = vec![1usize; target_order.len()];
    for i in (0..target_order.len().saturating_sub(1)).rev() {
        target_stride[i] = target_stride[i + 1] * target_order[i + 1].2;
    }
    let stride_for_source: Vec<usize> = source_order
        .iter()
        .map(|&(c, s, _)| {
            let pos = target_order
                .iter()
                .position(|&(tc, ts, _)| tc == c && ts == s)
                .unwrap();
            target_stride[pos]
        })
        .collect();
    let mut perm = vec![0usize; total];
    {
        let src_dims: Vec<usize> = source_order.iter().map(|&(_, _, d)| d).collect();
        let mut digits = vec![0usize; src_dims.len()];
        for slot in perm.iter_mut() {
            *slot = digits
                .iter()
                .zip(&stride_for_source)
                .map(|(d, s)| d * s)
                .sum();
            crate::dist::increment(&mut digits, &src_dims);
        }
    }

    // Spectral ensembles per component; negligible weights dropped so the
    // accumulated probabilities stay nonnegative.
    let mut ensembles: Vec<Vec<(f64, DVector<Cx>)>> = Vec::with_capacity(state.components().len());
    for comp in state.components() {
        let pairs = comp.eigenpairs()?;
        let kept: Vec<(f64, DVector<Cx>)> = pairs.into_iter().filter(|(l, _)| *l > 1e-14).collect();
        if kept.is_empty() {
            return Err(Error::Internal("component with empty spectrum".into()));
        }
        ensembles.push(kept);
    }

    let mut probs = vec![0.0f64; total];
    let mut choice = vec![0usize; ensembles.len()];
    let ranks: Vec<usize> = ensembles.iter().map(|e| e.len()).collect();
    let mut source_vec = vec![Cx::new(0.0, 0.0); total];
    let mut work = vec![Cx::new(0.0, 0.0); total];
    let mut scratch: Vec<Cx> = Vec::new();
    loop {
        let mut weight = 1.0f64;
        for (e, &k) in ensembles.iter().zip(&choice) {
            weight *= e[k].0;
        }
        // product vector in component-major order
        source_vec[0] = Cx::new(1.0, 0.0);
        let mut filled = 1usize;
        for (e, &k) in ensembles.iter().zip(&choice) {
            let v = &e[k].1;
            let dc = v.len();
            for block in (0..filled).rev() {
                let a = source_vec[block];
                for x in 0..dc {
                    source_vec[block * dc + x] = a * v[x];
                }
            }
            filled *= dc;
        }
        debug_assert_eq!(filled, total);
        // permute into party-major order
        for (i, &t) in perm.iter().enumerate() {
            work[t] = source_vec[i];
        }
        // contract each party's basis: amp[a] = <phi_a | X>
        let mut right: usize = total;
        let mut left: usize = 1;
        for (j, basis) in bases.iter().enumerate() {
            let d = party_dims[j];
            right /= d;
            scratch.resize(d, Cx::new(0.0, 0.0));
            for l in 0..left {
                for r in 0..right {
                    for (a, slot) in scratch.iter_mut().enumerate() {
                        let mut acc = Cx::new(0.0, 0.0);
                        let bv = basis.vector(a);
                        for x in 0..d {
                            acc += bv[x].conj() * work[(l * d + x) * right + r];
                        }
                        *slot = acc;
                    }
                    for (a, slot) in scratch.iter().enumerate() {
                        work[(l * d + a) * right + r] = *slot;
                    }
                }
            }
            left *= d;
        }
        for (p, amp) in probs.iter_mut().zip(&work) {
            *p += weight * amp.norm_sqr();
        }
        if !crate::dist::increment(&mut choice, &ranks) {
            break;
        }
    }

    let alphabets: Vec<usize> = bases.iter().map(|b| b.n_outcomes()).collect();
    OutcomeDistribution::new(alphabets, probs)
}
