//! Projective rank-1 measurement bases.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

use super::{Cx, GRAM_TOL};

/// An ordered, complete, orthonormal basis of a party's local space; the
/// outcome label is the vector index.
#[derive(Debug, Clone)]
pub struct MeasurementBasis {
    dim: usize,
    vectors: Vec<DVector<Cx>>,
}

impl MeasurementBasis {
    pub fn new(vectors: Vec<DVector<Cx>>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::Basis("a basis needs at least one vector".into()));
        }
        let dim = vectors[0].len();
        if vectors.len() != dim {
            return Err(Error::Basis(format!(
                "{} vectors cannot be complete in dimension {dim}",
                vectors.len()
            )));
        }
        for (i, a) in vectors.iter().enumerate() {
            if a.len() != dim {
                return Err(Error::Basis("basis vectors have mixed dimensions".into()));
            }
            for (j, b) in vectors.iter().enumerate() {
                let inner: Cx = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                if (inner.re - target).abs() > GRAM_TOL || inner.im.abs() > GRAM_TOL {
                    return Err(Error::Basis(format!(
                        "Gram deviation at ({i},{j}): <{i}|{j}> = {inner}"
                    )));
                }
            }
        }
        Ok(MeasurementBasis { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_outcomes(&self) -> usize {
        self.vectors.len()
    }

    pub fn vector(&self, outcome: usize) -> &DVector<Cx> {
        &self.vectors[outcome]
    }
}

/// Recipes accepted by [`make_basis`].
#[derive(Debug, Clone)]
pub enum BasisSpec {
    Computational,
    /// The two-qubit Bell basis, ordered
    /// `(|00>+|11>, |01>+|10>, |01>-|10>, |00>-|11>)/sqrt 2`.
    Bell2,
    /// `{|00>, cos g|01>+sin g|10>, sin g|01>-cos g|10>, |11>}`.
    Gamma {
        gamma: f64,
    },
    /// GHZ-type basis on `qubits` qubits: `(|i> +- |2^q-1-i>)/sqrt 2`,
    /// the `+` branch labelled `i` and the `-` branch `2^(q-1)+i`.
    StarGhz {
        qubits: usize,
    },
    /// Columns of a unitary: `{U|a>}`.
    Rotated {
        matrix: DMatrix<Cx>,
    },
    Custom {
        vectors: Vec<DVector<Cx>>,
    },
}

pub fn make_basis(spec: &BasisSpec, dim: usize) -> Result<MeasurementBasis> {
    let re = |x: f64| Cx::new(x, 0.0);
    match spec {
        BasisSpec::Computational => {
            let vectors = (0..dim)
                .map(|i| {
                    let mut v = DVector::from_element(dim, re(0.0));
                    v[i] = re(1.0);
                    v
                })
                .collect();
            MeasurementBasis::new(vectors)
        }
        BasisSpec::Bell2 => {
            if dim != 4 {
                return Err(Error::Dimension(format!(
                    "bell2 needs dimension 4, got {dim}"
                )));
            }
            let r = std::f64::consts::FRAC_1_SQRT_2;
            let rows: [[f64; 4]; 4] = [
                [r, 0.0, 0.0, r],
                [0.0, r, r, 0.0],
                [0.0, r, -r, 0.0],
                [r, 0.0, 0.0, -r],
            ];
            MeasurementBasis::new(
                rows.iter()
                    .map(|row| DVector::from_iterator(4, row.iter().map(|&x| re(x))))
                    .collect(),
            )
        }
        BasisSpec::Gamma { gamma } => {
            if dim != 4 {
                return Err(Error::Dimension(format!(
                    "gamma basis needs dimension 4, got {dim}"
                )));
            }
            let (c, s) = (gamma.cos(), gamma.sin());
            let rows: [[f64; 4]; 4] = [
                [1.0, 0.0, 0.0, 0.0],
                [0.0, c, s, 0.0],
                [0.0, s, -c, 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ];
            MeasurementBasis::new(
                rows.iter()
                    .map(|row| DVector::from_iterator(4, row.iter().map(|&x| re(x))))
                    .collect(),
            )
        }
        BasisSpec::StarGhz { qubits } => {
            let q = *qubits;
            if q < 1 || dim != (1usize << q) {
                return Err(Error::Dimension(format!(
                    "star basis on {q} qubits needs dimension {}, got {dim}",
                    1usize << q
                )));
            }
            let half = dim / 2;
            let r = std::f64::consts::FRAC_1_SQRT_2;
            let mut vectors = vec![DVector::from_element(dim, re(0.0)); dim];
            for i in 0..half {
                let j = dim - 1 - i;
                vectors[i][i] = re(r);
                vectors[i][j] = re(r);
                vectors[half + i][i] = re(r);
                vectors[half + i][j] = re(-r);
            }
            MeasurementBasis::new(vectors)
        }
        BasisSpec::Rotated { matrix } => {
            if matrix.nrows() != dim || matrix.ncols() != dim {
                return Err(Error::Dimension(format!(
                    "rotation is {}x{}, party dimension is {dim}",
                    matrix.nrows(),
                    matrix.ncols()
                )));
            }
            let vectors = (0..dim).map(|a| matrix.column(a).into_owned()).collect();
            MeasurementBasis::new(vectors)
        }
        BasisSpec::Custom { vectors } => {
            if vectors.len() != dim {
                return Err(Error::Dimension(format!(
                    "{} vectors for dimension {dim}",
                    vectors.len()
                )));
            }
            MeasurementBasis::new(vectors.clone())
        }
    }
}
