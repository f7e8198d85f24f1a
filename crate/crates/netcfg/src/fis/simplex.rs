//! Dense exact simplex over `BigRational` with a lexicographic objective.
//!
//! Maximizes the objective rows in order: the first row is the primary
//! objective, later rows break ties. Constraints are `Ax <= b`, `x >= 0`
//! with `b >= 0`, so the slack basis is feasible and no phase-1 is needed.
//! Bland's rule (smallest index, applied to the lex-ordered reduced costs)
//! guarantees termination.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

pub struct LexProgram {
    /// Objective rows, each of length `n_vars`.
    pub objectives: Vec<Vec<BigRational>>,
    /// Constraint rows `(coefficients, rhs)` with `rhs >= 0`.
    pub constraints: Vec<(Vec<BigRational>, BigRational)>,
    pub n_vars: usize,
}

impl LexProgram {
    pub fn solve(&self) -> Result<Vec<BigRational>> {
        let n = self.n_vars;
        let m = self.constraints.len();
        let width = n + m;

        // rows[i] = constraint row extended with slack columns, rhs[i] >= 0
        let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m);
        let mut rhs: Vec<BigRational> = Vec::with_capacity(m);
        for (i, (coeffs, b)) in self.constraints.iter().enumerate() {
            if coeffs.len() != n {
                return Err(Error::Internal("constraint width mismatch".into()));
            }
            if b < &BigRational::zero() {
                return Err(Error::Internal("simplex needs nonnegative rhs".into()));
            }
            let mut row = vec![BigRational::zero(); width];
            row[..n].clone_from_slice(coeffs);
            row[n + i] = BigRational::from_integer(1.into());
            rows.push(row);
            rhs.push(b.clone());
        }

        // Reduced-cost rows start as -c (slack basis has zero cost).
        let mut zrows: Vec<Vec<BigRational>> = self
            .objectives
            .iter()
            .map(|c| {
                let mut row = vec![BigRational::zero(); width];
                for (j, cj) in c.iter().enumerate() {
                    row[j] = -cj.clone();
                }
                row
            })
            .collect();

        let mut basis: Vec<usize> = (n..n + m).collect();

        loop {
            // Entering column: smallest index whose reduced-cost vector is
            // lex-negative (strictly improving).
            let entering = (0..width).find(|&j| {
                for z in &zrows {
                    if z[j] < BigRational::zero() {
                        return true;
                    }
                    if z[j] > BigRational::zero() {
                        return false;
                    }
                }
                false
            });
            let Some(col) = entering else {
                break;
            };

            // Ratio test with Bland tie-break on the basis variable index.
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..m {
                if rows[i][col] > BigRational::zero() {
                    let ratio = &rhs[i] / &rows[i][col];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((pivot_row, _)) = leave else {
                return Err(Error::Internal("unbounded linear program".into()));
            };

            // Pivot.
            let pivot = rows[pivot_row][col].clone();
            for v in rows[pivot_row].iter_mut() {
                *v /= &pivot;
            }
            rhs[pivot_row] /= &pivot;
            let pivot_vals = rows[pivot_row].clone();
            for i in 0..m {
                if i == pivot_row || rows[i][col].is_zero() {
                    continue;
                }
                let factor = rows[i][col].clone();
                for (dst, src) in rows[i].iter_mut().zip(&pivot_vals) {
                    *dst -= &factor * src;
                }
                let delta = &factor * &rhs[pivot_row];
                rhs[i] -= delta;
            }
            for z in zrows.iter_mut() {
                if z[col].is_zero() {
                    continue;
                }
                let factor = z[col].clone();
                for (dst, src) in z.iter_mut().zip(&pivot_vals) {
                    *dst -= &factor * src;
                }
            }
            basis[pivot_row] = col;
        }

        let mut x = vec![BigRational::zero(); n];
        for i in 0..m {
            if basis[i] < n {
                x[basis[i]] = rhs[i].clone();
            }
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::big;

    fn ratio(n: i64, d: i64) -> BigRational {
        big(n) / big(d)
    }

    #[test]
    fn maximizes_simple_program() {
        // max x + y s.t. x + y <= 1, x <= 1, y <= 1; lex prefers bigger x
        let p = LexProgram {
            objectives: vec![
                vec![big(1), big(1)],
                vec![big(1), big(0)],
                vec![big(0), big(1)],
            ],
            constraints: vec![
                (vec![big(1), big(1)], big(1)),
                (vec![big(1), big(0)], big(1)),
                (vec![big(0), big(1)], big(1)),
            ],
            n_vars: 2,
        };
        let x = p.solve().unwrap();
        assert_eq!(x, vec![big(1), big(0)]);
    }

    #[test]
    fn tie_break_is_lexicographic() {
        // Primary objective indifferent; tie-break rows pick x1 = 1 first.
        let p = LexProgram {
            objectives: vec![
                vec![big(0), big(0)],
                vec![big(1), big(0)],
                vec![big(0), big(1)],
            ],
            constraints: vec![
                (vec![big(1), big(1)], ratio(3, 2)),
                (vec![big(1), big(0)], big(1)),
                (vec![big(0), big(1)], big(1)),
            ],
            n_vars: 2,
        };
        let x = p.solve().unwrap();
        assert_eq!(x, vec![big(1), ratio(1, 2)]);
    }
}
