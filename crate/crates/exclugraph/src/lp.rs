//! Revised simplex for small dense linear programs
//!
//! ```text
//!   maximise   c^T x
//!   subject to A x <= b   (row-wise),
//!              x >= 0     (optional).
//! ```
//!
//! Bland's smallest-index rule on both the entering and leaving choice, so
//! the method cannot cycle; the iteration cap is a backstop only. Rows with
//! a negative bound get an artificial variable and a phase-1 feasibility
//! solve. The basis inverse is recomputed from scratch at every pivot,
//! which is cheap at clique-constraint scale and keeps the arithmetic to
//! field operations only.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solution of an inequality-form linear program.
#[derive(Debug, Clone)]
pub struct LpSolution<R> {
    /// Optimal point in the original variables (empty unless optimal).
    pub point: Vec<R>,
    /// Objective value at `point` (zero unless optimal).
    pub value: R,
    pub status: LpStatus,
}

const EPS_REDUCED: f64 = 1e-9;
const EPS_PIVOT: f64 = 1e-11;
const EPS_FEAS: f64 = 1e-9;
const EPS_SLACKNESS: f64 = 1e-8;

/// Maximises `objective . x` subject to `coeffs . x <= bound` for every
/// constraint row and optionally `x >= 0`. Free variables are handled by
/// the usual positive/negative split.
pub fn solve_lp<R: Real>(
    objective: &[R],
    constraints: &[(Vec<R>, R)],
    nonneg: bool,
) -> Result<LpSolution<R>> {
    let nv = objective.len();
    for (row, _) in constraints {
        if row.len() != nv {
            return Err(Error::Parameter(format!(
                "constraint row has {} coefficients, expected {nv}",
                row.len()
            )));
        }
    }
    let m = constraints.len();

    // structural columns (split when variables are free)
    let ns = if nonneg { nv } else { 2 * nv };
    let col_coeff = |j: usize, row: &[R]| -> R {
        if j < nv {
            row[j]
        } else {
            -row[j - nv]
        }
    };
    let col_obj = |j: usize| -> R {
        if j < nv {
            objective[j]
        } else {
            -objective[j - nv]
        }
    };

    // rows with negative bounds are negated and get an artificial variable
    let needs_artificial: Vec<bool> =
        constraints.iter().map(|(_, b)| *b < R::zero()).collect();
    let na = needs_artificial.iter().filter(|&&f| f).count();
    let ncols = ns + m + na;

    // dense column-major tableau data
    let mut cols: Vec<Vec<R>> = Vec::with_capacity(ncols);
    for j in 0..ns {
        let mut col = Vec::with_capacity(m);
        for (i, (row, _)) in constraints.iter().enumerate() {
            let v = col_coeff(j, row);
            col.push(if needs_artificial[i] { -v } else { v });
        }
        cols.push(col);
    }
    for i in 0..m {
        let mut col = vec![R::zero(); m];
        col[i] = if needs_artificial[i] { -R::one() } else { R::one() };
        cols.push(col);
    }
    let mut art_cols = Vec::new();
    for (i, &flag) in needs_artificial.iter().enumerate() {
        if flag {
            let mut col = vec![R::zero(); m];
            col[i] = R::one();
            art_cols.push(ns + m + art_cols.len());
            cols.push(col);
        }
    }
    let rhs: Vec<R> = constraints
        .iter()
        .map(|(_, b)| if *b < R::zero() { -*b } else { *b })
        .collect();

    // start basis: slack for clean rows, artificial for negated rows
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut next_art = 0;
    for (i, &flag) in needs_artificial.iter().enumerate() {
        if flag {
            basis.push(art_cols[next_art]);
            next_art += 1;
        } else {
            basis.push(ns + i);
        }
    }

    let is_artificial = |j: usize| j >= ns + m;
    let cap = 10 * (ncols + m);

    if na > 0 {
        // phase 1: maximise -(sum of artificials)
        let phase1_obj: Vec<R> =
            (0..ncols).map(|j| if is_artificial(j) { -R::one() } else { R::zero() }).collect();
        let outcome = simplex(&cols, &rhs, &phase1_obj, &mut basis, |_| true, cap, m)?;
        match outcome {
            SimplexOutcome::Optimal { value, .. } => {
                if value < -R::real(EPS_FEAS) {
                    return Ok(LpSolution {
                        point: vec![],
                        value: R::zero(),
                        status: LpStatus::Infeasible,
                    });
                }
            }
            SimplexOutcome::Unbounded => {
                return Err(Error::Numerical(
                    "phase-1 objective unbounded; inconsistent tableau".into(),
                ))
            }
        }
        drive_out_artificials(&cols, &rhs, &mut basis, &is_artificial, m)?;
    }

    // phase 2 on the real objective; artificial columns may not enter
    let full_obj: Vec<R> =
        (0..ncols).map(|j| if j < ns { col_obj(j) } else { R::zero() }).collect();
    let outcome = simplex(&cols, &rhs, &full_obj, &mut basis, |j| !is_artificial(j), cap, m)?;

    match outcome {
        SimplexOutcome::Unbounded => {
            Ok(LpSolution { point: vec![], value: R::zero(), status: LpStatus::Unbounded })
        }
        SimplexOutcome::Optimal { basic_values, duals, value } => {
            // assemble the original variables
            let mut x = vec![R::zero(); nv];
            for (pos, &j) in basis.iter().enumerate() {
                if j < nv {
                    x[j] += basic_values[pos];
                } else if j < ns {
                    x[j - nv] -= basic_values[pos];
                }
            }
            verify_optimal(objective, constraints, &x, &duals, value)?;
            Ok(LpSolution { point: x, value, status: LpStatus::Optimal })
        }
    }
}

enum SimplexOutcome<R> {
    Optimal { basic_values: Vec<R>, duals: Vec<R>, value: R },
    Unbounded,
}

/// One simplex run with Bland's rule. `may_enter` filters candidate
/// entering columns.
fn simplex<R: Real>(
    cols: &[Vec<R>],
    rhs: &[R],
    obj: &[R],
    basis: &mut [usize],
    may_enter: impl Fn(usize) -> bool,
    cap: usize,
    m: usize,
) -> Result<SimplexOutcome<R>> {
    let ncols = cols.len();
    for _ in 0..cap {
        let binv = basis_inverse(cols, basis, m)?;
        let xb = mat_vec(&binv, rhs, m);
        // duals y = c_B^T B^-1
        let mut y = vec![R::zero(); m];
        for i in 0..m {
            for (pos, &j) in basis.iter().enumerate() {
                y[i] += obj[j] * binv[pos * m + i];
            }
        }
        // Bland entering: smallest index with positive reduced cost
        let mut entering = None;
        for j in 0..ncols {
            if basis.contains(&j) || !may_enter(j) {
                continue;
            }
            let mut reduced = obj[j];
            for i in 0..m {
                reduced -= y[i] * cols[j][i];
            }
            if reduced > R::real(EPS_REDUCED) {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else {
            let value = basis.iter().enumerate().map(|(pos, &k)| obj[k] * xb[pos]).sum();
            return Ok(SimplexOutcome::Optimal { basic_values: xb, duals: y, value });
        };
        // direction through the basis
        let d = mat_vec(&binv, &cols[j], m);
        // Bland leaving: min ratio, ties by smallest basic variable index
        let mut leave: Option<(usize, R)> = None;
        for i in 0..m {
            if d[i] > R::real(EPS_PIVOT) {
                let ratio = xb[i].max(R::zero()) / d[i];
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((best_i, best_r)) => {
                        if ratio < best_r - R::real(EPS_PIVOT)
                            || ((ratio - best_r).abs() <= R::real(EPS_PIVOT)
                                && basis[i] < basis[best_i])
                        {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((row, _)) = leave else {
            return Ok(SimplexOutcome::Unbounded);
        };
        basis[row] = j;
    }
    Err(Error::Numerical(format!("simplex hit the {cap}-pivot cap (cycling guard)")))
}

/// Pivots basic artificials out where a non-artificial column can replace
/// them; rows that stay artificial are redundant and remain inert.
fn drive_out_artificials<R: Real>(
    cols: &[Vec<R>],
    rhs: &[R],
    basis: &mut [usize],
    is_artificial: &impl Fn(usize) -> bool,
    m: usize,
) -> Result<()> {
    for pos in 0..m {
        if !is_artificial(basis[pos]) {
            continue;
        }
        let binv = basis_inverse(cols, basis, m)?;
        let xb = mat_vec(&binv, rhs, m);
        if xb[pos].abs() > R::real(EPS_FEAS) {
            return Err(Error::Numerical("artificial variable stuck at a nonzero level".into()));
        }
        for (j, col) in cols.iter().enumerate() {
            if is_artificial(j) || basis.contains(&j) {
                continue;
            }
            let d = mat_vec(&binv, col, m);
            if d[pos].abs() > R::real(1e-7) {
                basis[pos] = j;
                break;
            }
        }
    }
    Ok(())
}

/// Gauss-Jordan inverse of the basis matrix, row-major.
fn basis_inverse<R: Real>(cols: &[Vec<R>], basis: &[usize], m: usize) -> Result<Vec<R>> {
    let mut a = vec![R::zero(); m * 2 * m];
    let width = 2 * m;
    for (pos, &j) in basis.iter().enumerate() {
        for i in 0..m {
            a[i * width + pos] = cols[j][i];
        }
    }
    for i in 0..m {
        a[i * width + m + i] = R::one();
    }
    for col in 0..m {
        // partial pivot
        let mut piv = col;
        for r in (col + 1)..m {
            if a[r * width + col].abs() > a[piv * width + col].abs() {
                piv = r;
            }
        }
        if a[piv * width + col].abs() <= R::real(1e-12) {
            return Err(Error::Numerical("singular basis matrix".into()));
        }
        if piv != col {
            for k in 0..width {
                a.swap(col * width + k, piv * width + k);
            }
        }
        let inv = a[col * width + col].recip();
        for k in 0..width {
            a[col * width + k] *= inv;
        }
        for r in 0..m {
            if r == col {
                continue;
            }
            let factor = a[r * width + col];
            if factor != R::zero() {
                for k in 0..width {
                    let v = a[col * width + k] * factor;
                    a[r * width + k] -= v;
                }
            }
        }
    }
    let mut inv = vec![R::zero(); m * m];
    for i in 0..m {
        inv[i * m..(i + 1) * m].copy_from_slice(&a[i * width + m..i * width + 2 * m]);
    }
    Ok(inv)
}

fn mat_vec<R: Real>(a: &[R], v: &[R], m: usize) -> Vec<R> {
    (0..m).map(|i| (0..m).map(|k| a[i * m + k] * v[k]).sum()).collect()
}

/// Feasibility and complementary-slackness audit of a claimed optimum.
fn verify_optimal<R: Real>(
    objective: &[R],
    constraints: &[(Vec<R>, R)],
    x: &[R],
    duals: &[R],
    value: R,
) -> Result<()> {
    let feas = R::real(EPS_FEAS);
    for (row, bound) in constraints {
        let lhs: R = row.iter().zip(x).map(|(&a, &xi)| a * xi).sum();
        if lhs > *bound + feas {
            return Err(Error::Numerical(format!(
                "claimed optimum violates a constraint by {:e}",
                (lhs - *bound).to_f64_lossy()
            )));
        }
    }
    let recomputed: R = objective.iter().zip(x).map(|(&c, &xi)| c * xi).sum();
    if (recomputed - value).abs() > R::real(1e-7) * (R::one() + value.abs()) {
        return Err(Error::Numerical("objective mismatch at the claimed optimum".into()));
    }
    // complementary slackness: dual price times slack vanishes row-wise
    let mut residual = R::zero();
    for (i, (row, bound)) in constraints.iter().enumerate() {
        let slack = *bound - row.iter().zip(x).map(|(&a, &xi)| a * xi).sum::<R>();
        residual = residual.max((duals[i] * slack).abs());
    }
    if residual > R::real(EPS_SLACKNESS) {
        return Err(Error::Numerical(format!(
            "complementary slackness residual {:e}",
            residual.to_f64_lossy()
        )));
    }
    Ok(())
}
