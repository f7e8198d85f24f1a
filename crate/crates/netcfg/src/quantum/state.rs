//! Construction of the named state families and depolarizing noise.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

use super::{Cx, QuantumComponent, NORM_TOL};

/// Recipes accepted by [`make_state`].
#[derive(Debug, Clone)]
pub enum StateSpec {
    /// `cos(theta)|0..0> + sin(theta)|1..1>` on `qubits` qubits.
    Ghz { theta: f64, qubits: usize },
    /// Two-qubit `cos(theta)|00> + sin(theta)|11>`.
    Epr { theta: f64 },
    /// `cos(theta)cos(gamma)|001> + sin(theta)cos(gamma)|010> + sin(gamma)|100>`.
    W3 { theta: f64, gamma: f64 },
    /// Single-excitation state `sum_i alpha_i |1 at party i>`.
    Wn { alphas: Vec<f64> },
    /// Three-qubit normal form
    /// `a0|000> + a1 e^{i phi}|100> + a2|101> + a3|110> + a4|111>`.
    Acin { alphas: [f64; 5], phi: f64 },
    /// Tensor product of single-system vectors.
    Product { vectors: Vec<Vec<Cx>> },
    /// Explicit pure state over the given subsystem dimensions.
    CustomVector { vector: Vec<Cx>, dims: Vec<usize> },
    /// Explicit density matrix over the given subsystem dimensions.
    CustomDensity {
        matrix: DMatrix<Cx>,
        dims: Vec<usize>,
    },
}

pub fn make_state(spec: &StateSpec) -> Result<QuantumComponent> {
    match spec {
        StateSpec::Ghz { theta, qubits } => {
            if *qubits < 2 {
                return Err(Error::State("ghz needs at least 2 qubits".into()));
            }
            let dim = 1usize << qubits;
            let mut v = DVector::from_element(dim, Cx::new(0.0, 0.0));
            v[0] = Cx::new(theta.cos(), 0.0);
            v[dim - 1] = Cx::new(theta.sin(), 0.0);
            QuantumComponent::from_pure(v, vec![2; *qubits])
        }
        StateSpec::Epr { theta } => make_state(&StateSpec::Ghz {
            theta: *theta,
            qubits: 2,
        }),
        StateSpec::W3 { theta, gamma } => {
            let mut v = DVector::from_element(8, Cx::new(0.0, 0.0));
            v[0b001] = Cx::new(theta.cos() * gamma.cos(), 0.0);
            v[0b010] = Cx::new(theta.sin() * gamma.cos(), 0.0);
            v[0b100] = Cx::new(gamma.sin(), 0.0);
            QuantumComponent::from_pure(v, vec![2, 2, 2])
        }
        StateSpec::Wn { alphas } => {
            let n = alphas.len();
            if n < 2 {
                return Err(Error::State("w state needs at least 2 parties".into()));
            }
            let norm: f64 = alphas.iter().map(|a| a * a).sum();
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::State(format!(
                    "w amplitudes have squared norm {norm}, expected 1"
                )));
            }
            let dim = 1usize << n;
            let mut v = DVector::from_element(dim, Cx::new(0.0, 0.0));
            for (i, a) in alphas.iter().enumerate() {
                // party i+1 holds the excitation; party 1 is the leading bit
                v[1 << (n - 1 - i)] = Cx::new(*a, 0.0);
            }
            QuantumComponent::from_pure(v, vec![2; n])
        }
        StateSpec::Acin { alphas, phi } => {
            let norm: f64 = alphas.iter().map(|a| a * a).sum();
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::State(format!(
                    "amplitudes have squared norm {norm}, expected 1"
                )));
            }
            let mut v = DVector::from_element(8, Cx::new(0.0, 0.0));
            v[0b000] = Cx::new(alphas[0], 0.0);
            v[0b100] = Cx::new(alphas[1] * phi.cos(), alphas[1] * phi.sin());
            v[0b101] = Cx::new(alphas[2], 0.0);
            v[0b110] = Cx::new(alphas[3], 0.0);
            v[0b111] = Cx::new(alphas[4], 0.0);
            QuantumComponent::from_pure(v, vec![2, 2, 2])
        }
        StateSpec::Product { vectors } => {
            if vectors.is_empty() {
                return Err(Error::State(
                    "product state needs at least one factor".into(),
                ));
            }
            let mut dims = Vec::with_capacity(vectors.len());
            let mut acc: Vec<Cx> = vec![Cx::new(1.0, 0.0)];
            for factor in vectors {
                if factor.is_empty() {
                    return Err(Error::State("empty product factor".into()));
                }
                let norm: f64 = factor.iter().map(|c| c.norm_sqr()).sum();
                if (norm - 1.0).abs() > NORM_TOL {
                    return Err(Error::State(format!(
                        "product factor has squared norm {norm}, expected 1"
                    )));
                }
                dims.push(factor.len());
                let mut next = Vec::with_capacity(acc.len() * factor.len());
                for a in &acc {
                    for f in factor {
                        next.push(a * f);
                    }
                }
                acc = next;
            }
            QuantumComponent::from_pure(DVector::from_vec(acc), dims)
        }
        StateSpec::CustomVector { vector, dims } => {
            QuantumComponent::from_pure(DVector::from_vec(vector.clone()), dims.clone())
        }
        StateSpec::CustomDensity { matrix, dims } => {
            QuantumComponent::from_density(matrix.clone(), dims.clone())
        }
    }
}

/// Depolarize: `v rho + (1 - v)/d * I`. `v = 1` returns the input unchanged,
/// `v = 0` the maximally mixed state.
pub fn add_noise(c: &QuantumComponent, v: f64) -> Result<QuantumComponent> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::Bounds(format!("visibility {v} outside [0,1]")));
    }
    if v == 1.0 {
        return Ok(c.clone());
    }
    let d = c.dim();
    let mixed = (1.0 - v) / d as f64;
    let mut rho = c.rho().clone() * Complex::new(v, 0.0);
    for i in 0..d {
        rho[(i, i)] += Cx::new(mixed, 0.0);
    }
    QuantumComponent::from_density(rho, c.dims().to_vec())
}
