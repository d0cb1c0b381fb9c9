//! Exact solver for two-player zero-sum matrix games.
//!
//! The row player maximizes, the column player minimizes. The solver runs
//! the standard value LP (entries shifted positive, reciprocal-value form)
//! with Bland's rule, then certifies the result by computing both players'
//! best responses on the original matrix. The contract is the certificate:
//! returned `exploitability <= tol`, independent of the method.

use crate::error::{CoreError, Result};

/// Which player an operation acts for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Max,
    Min,
}

/// A certified solution of a zero-sum matrix game.
#[derive(Debug, Clone)]
pub struct MatrixGameSolution {
    /// Minimax value of the game.
    pub value: f64,
    /// Mixed strategy of the row (max) player.
    pub row_strategy: Vec<f64>,
    /// Mixed strategy of the column (min) player.
    pub col_strategy: Vec<f64>,
    /// Largest best-response gain of either player over `value`.
    pub exploitability: f64,
}

const PIVOT_EPS: f64 = 1e-12;
const COST_EPS: f64 = 1e-11;
const MAX_PIVOTS: usize = 100_000;

/// Solves the game given by the row-major `rows x cols` payoff matrix `g`
/// (payoff to the row player). Deterministic for identical inputs.
pub fn solve_matrix_game(rows: usize, cols: usize, g: &[f64], tol: f64) -> Result<MatrixGameSolution> {
    if rows == 0 || cols == 0 || g.len() != rows * cols {
        return Err(CoreError::InvalidInput(format!(
            "payoff matrix {rows}x{cols} with {} entries",
            g.len()
        )));
    }
    if !(tol > 0.0) {
        return Err(CoreError::InvalidInput("tolerance must be positive".into()));
    }
    if g.iter().any(|x| !x.is_finite()) {
        return Err(CoreError::InvalidInput("payoff matrix has non-finite entries".into()));
    }

    // Shift entries to >= 1 so the game value is strictly positive.
    let min_entry = g.iter().cloned().fold(f64::INFINITY, f64::min);
    let shift = 1.0 - min_entry;

    // LP (column player's reciprocal form): maximize sum(y) subject to
    // (G + shift) y <= 1, y >= 0. At the optimum sum(y) = 1 / v_hat and the
    // duals of the rows recover the row player's strategy.
    let n_struct = cols;
    let width = n_struct + rows + 1; // structural + slack + rhs
    let mut tab = vec![0.0_f64; rows * width];
    for i in 0..rows {
        for j in 0..cols {
            tab[i * width + j] = g[i * cols + j] + shift;
        }
        tab[i * width + n_struct + i] = 1.0;
        tab[i * width + width - 1] = 1.0;
    }
    let mut obj = vec![0.0_f64; width];
    for j in 0..n_struct {
        obj[j] = -1.0;
    }
    let mut basis: Vec<usize> = (n_struct..n_struct + rows).collect();

    for _ in 0..MAX_PIVOTS {
        // Bland: smallest-index column with negative reduced cost.
        let Some(enter) = (0..width - 1).find(|&j| obj[j] < -COST_EPS) else {
            break;
        };
        // Ratio test; ties broken by smallest basic-variable index.
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for i in 0..rows {
            let a = tab[i * width + enter];
            if a > PIVOT_EPS {
                let ratio = tab[i * width + width - 1] / a;
                if ratio < best_ratio - PIVOT_EPS
                    || (ratio < best_ratio + PIVOT_EPS
                        && leave.map_or(true, |l| basis[i] < basis[l]))
                {
                    best_ratio = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            // Unbounded cannot occur: every column of the shifted matrix has
            // positive entries. Bail out defensively.
            return Err(CoreError::SolveFailed {
                exploitability: f64::INFINITY,
                tolerance: tol,
            });
        };
        // Pivot on (leave, enter).
        let pivot = tab[leave * width + enter];
        for j in 0..width {
            tab[leave * width + j] /= pivot;
        }
        for i in 0..rows {
            if i != leave {
                let factor = tab[i * width + enter];
                if factor != 0.0 {
                    for j in 0..width {
                        tab[i * width + j] -= factor * tab[leave * width + j];
                    }
                }
            }
        }
        let factor = obj[enter];
        if factor != 0.0 {
            for j in 0..width {
                obj[j] -= factor * tab[leave * width + j];
            }
        }
        basis[leave] = enter;
    }

    // Recover strategies: y from the basis, duals from slack reduced costs.
    let mut y = vec![0.0_f64; cols];
    for (i, &b) in basis.iter().enumerate() {
        if b < cols {
            y[b] = tab[i * width + width - 1].max(0.0);
        }
    }
    let mut x = vec![0.0_f64; rows];
    for i in 0..rows {
        x[i] = obj[n_struct + i].max(0.0);
    }
    let sum_y: f64 = y.iter().sum();
    let sum_x: f64 = x.iter().sum();
    if sum_y <= 0.0 || sum_x <= 0.0 {
        return Err(CoreError::SolveFailed {
            exploitability: f64::INFINITY,
            tolerance: tol,
        });
    }
    let col_strategy: Vec<f64> = y.iter().map(|v| v / sum_y).collect();
    let row_strategy: Vec<f64> = x.iter().map(|v| v / sum_x).collect();

    // Certificate on the original matrix.
    let (upper, _) = best_response_value(rows, cols, g, &col_strategy, Side::Max)?;
    let (lower, _) = best_response_value(rows, cols, g, &row_strategy, Side::Min)?;
    let value = 0.5 * (upper + lower);
    let exploitability = (0.5 * (upper - lower)).max(0.0);
    if exploitability > tol {
        return Err(CoreError::SolveFailed {
            exploitability,
            tolerance: tol,
        });
    }
    Ok(MatrixGameSolution {
        value,
        row_strategy,
        col_strategy,
        exploitability,
    })
}

/// Value and pure best response against a fixed opponent mixture.
///
/// `side` names the responding player: `Max` responds to a column mixture,
/// `Min` to a row mixture. Ties break toward the lowest index.
pub fn best_response_value(
    rows: usize,
    cols: usize,
    g: &[f64],
    opponent_strategy: &[f64],
    side: Side,
) -> Result<(f64, usize)> {
    if g.len() != rows * cols {
        return Err(CoreError::DimensionMismatch(format!(
            "payoff matrix {rows}x{cols} with {} entries",
            g.len()
        )));
    }
    match side {
        Side::Max => {
            if opponent_strategy.len() != cols {
                return Err(CoreError::DimensionMismatch(format!(
                    "column strategy has {} entries, expected {cols}",
                    opponent_strategy.len()
                )));
            }
            let mut best = f64::NEG_INFINITY;
            let mut idx = 0;
            for i in 0..rows {
                let v: f64 = (0..cols).map(|j| g[i * cols + j] * opponent_strategy[j]).sum();
                if v > best {
                    best = v;
                    idx = i;
                }
            }
            Ok((best, idx))
        }
        Side::Min => {
            if opponent_strategy.len() != rows {
                return Err(CoreError::DimensionMismatch(format!(
                    "row strategy has {} entries, expected {rows}",
                    opponent_strategy.len()
                )));
            }
            let mut best = f64::INFINITY;
            let mut idx = 0;
            for j in 0..cols {
                let v: f64 = (0..rows).map(|i| g[i * cols + j] * opponent_strategy[i]).sum();
                if v < best {
                    best = v;
                    idx = j;
                }
            }
            Ok((best, idx))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::STAGE_GAME_TOL;

    fn solve(g: &[f64], rows: usize, cols: usize) -> MatrixGameSolution {
        solve_matrix_game(rows, cols, g, STAGE_GAME_TOL).unwrap()
    }

    #[test]
    fn one_by_one_game() {
        let s = solve(&[0.0], 1, 1);
        assert_eq!(s.value, 0.0);
        assert_eq!(s.row_strategy, vec![1.0]);
        assert_eq!(s.col_strategy, vec![1.0]);
        assert_eq!(s.exploitability, 0.0);
    }

    #[test]
    fn matching_pennies_is_uniform() {
        let s = solve(&[1.0, -1.0, -1.0, 1.0], 2, 2);
        assert!(s.value.abs() <= 1e-12);
        for p in s.row_strategy.iter().chain(&s.col_strategy) {
            assert!((p - 0.5).abs() <= 1e-12);
        }
        assert!(s.exploitability <= 1e-12);
    }

    #[test]
    fn hand_solved_two_by_two() {
        // Indifference: row (1/3, 2/3), col (1/3, 2/3), value 5/3.
        let s = solve(&[3.0, 1.0, 1.0, 2.0], 2, 2);
        assert!((s.value - 5.0 / 3.0).abs() <= 1e-9);
        assert!((s.row_strategy[0] - 1.0 / 3.0).abs() <= 1e-9);
        assert!((s.row_strategy[1] - 2.0 / 3.0).abs() <= 1e-9);
        assert!((s.col_strategy[0] - 1.0 / 3.0).abs() <= 1e-9);
        assert!((s.col_strategy[1] - 2.0 / 3.0).abs() <= 1e-9);
    }

    #[test]
    fn best_response_examples() {
        let pennies = [1.0, -1.0, -1.0, 1.0];
        let (v, i) = best_response_value(2, 2, &pennies, &[0.5, 0.5], Side::Max).unwrap();
        assert_eq!((v, i), (0.0, 0));

        let g = [3.0, 1.0, 1.0, 2.0];
        let (v, i) = best_response_value(2, 2, &g, &[1.0, 0.0], Side::Max).unwrap();
        assert_eq!((v, i), (3.0, 0));
        let (v, j) = best_response_value(2, 2, &g, &[1.0, 0.0], Side::Min).unwrap();
        assert_eq!((v, j), (1.0, 1));
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        assert!(solve_matrix_game(1, 2, &[f64::NAN, 0.0], 1e-9).is_err());
        assert!(solve_matrix_game(1, 2, &[f64::INFINITY, 0.0], 1e-9).is_err());
    }

    #[test]
    fn rectangular_games_solve() {
        // Dominant column: min player always plays column 0.
        let s = solve(&[2.0, 5.0, 1.0, 4.0, 0.0, 3.0], 3, 2);
        assert!((s.value - 2.0).abs() <= 1e-9);
        assert!((s.col_strategy[0] - 1.0).abs() <= 1e-9);
    }
}
