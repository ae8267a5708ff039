//! Interior-point solver for the weighted Lovász theta program
//!
//! ```text
//!   maximise   sum_ij sqrt(w_i w_j) B_ij
//!   subject to trace B = 1,
//!              B_ij = 0 for every edge ij,
//!              B positive semidefinite.
//! ```
//!
//! A feasible-start primal-dual path follower with Nesterov-Todd scaling.
//! The primal starts at `B = I/n` (diagonal, trace one, positive definite,
//! zero on every off-diagonal entry, hence feasible); the dual starts at
//! `y_trace = 1 + sum(w)`, which makes `Z = y_trace I - C` diagonally
//! dominant. Both iterates stay feasible, so weak duality
//! `dual >= primal` holds at every iterate and the duality gap equals the
//! complementarity `<B, Z>`.
//!
//! The edge-zero equalities are kept as explicit constraints; the Schur
//! complement over `1 + |E|` multipliers stays small at the 40-vertex cap.

use crate::bounds::WeightVector;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{cholesky, cholesky_solve, mat_mul, symmetric_eigen, Spectrum, SymmetricMatrix};
use crate::scalar::Real;

/// Practical dimension cap for the dense SDP.
pub const SDP_VERTEX_CAP: usize = 40;
/// Iteration cap: fail loudly instead of hanging.
pub const SDP_MAX_ITERATIONS: usize = 200;
/// Default duality-gap tolerance.
pub const SDP_DEFAULT_TOL: f64 = 1e-8;

/// Certified solution of the theta program.
#[derive(Debug, Clone)]
pub struct ThetaSolution<R> {
    /// Optimal primal matrix `B`: PSD, unit trace, zero on edges.
    pub primal_matrix: SymmetricMatrix<R>,
    /// Primal objective at `B` (the theta value, certified from below).
    pub value: R,
    /// Dual objective (certifies the value from above).
    pub dual_value: R,
    /// `|dual_value - value|`.
    pub gap: R,
    pub iterations: usize,
}

struct ThetaProgram<R> {
    n: usize,
    edges: Vec<(usize, usize)>,
    /// dense `n x n` objective matrix `C_ij = sqrt(w_i w_j)`
    c: Vec<R>,
}

impl<R: Real> ThetaProgram<R> {
    fn new(graph: &Graph, weights: &[R]) -> Self {
        let n = graph.vertex_count();
        let roots: Vec<R> = weights.iter().map(|w| w.sqrt()).collect();
        let mut c = vec![R::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                c[i * n + j] = roots[i] * roots[j];
            }
        }
        ThetaProgram { n, edges: graph.edges(), c }
    }

    fn num_constraints(&self) -> usize {
        1 + self.edges.len()
    }

    /// `[trace(X), X_e1, X_e2, ...]`
    fn apply(&self, x: &[R]) -> Vec<R> {
        let n = self.n;
        let mut out = Vec::with_capacity(self.num_constraints());
        out.push((0..n).map(|i| x[i * n + i]).sum());
        for &(i, j) in &self.edges {
            out.push((x[i * n + j] + x[j * n + i]) * R::real(0.5));
        }
        out
    }

    /// `y_0 I + sum_e y_e sym(e)` as a dense buffer.
    fn adjoint(&self, y: &[R]) -> Vec<R> {
        let n = self.n;
        let mut out = vec![R::zero(); n * n];
        for i in 0..n {
            out[i * n + i] = y[0];
        }
        let half = R::real(0.5);
        for (k, &(i, j)) in self.edges.iter().enumerate() {
            out[i * n + j] = y[k + 1] * half;
            out[j * n + i] = y[k + 1] * half;
        }
        out
    }

    /// Schur complement `M_kl = trace(A_k W A_l W)`.
    fn schur(&self, w: &[R]) -> Vec<R> {
        let n = self.n;
        let m = self.num_constraints();
        let w2 = mat_mul(n, w, w);
        let mut schur = vec![R::zero(); m * m];
        schur[0] = (0..n * n).map(|k| w[k] * w[k]).sum();
        for (e, &(i, j)) in self.edges.iter().enumerate() {
            let v = w2[i * n + j];
            schur[e + 1] = v;
            schur[(e + 1) * m] = v;
        }
        let half = R::real(0.5);
        for (e, &(i, j)) in self.edges.iter().enumerate() {
            for (f, &(k, l)) in self.edges.iter().enumerate().skip(e) {
                let v = (w[i * n + k] * w[j * n + l] + w[i * n + l] * w[j * n + k]) * half;
                schur[(e + 1) * m + (f + 1)] = v;
                schur[(f + 1) * m + (e + 1)] = v;
            }
        }
        schur
    }
}

fn frob_dot<R: Real>(a: &[R], b: &[R]) -> R {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn symmetrize<R: Real>(n: usize, a: &mut [R]) {
    let half = R::real(0.5);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = (a[i * n + j] + a[j * n + i]) * half;
            a[i * n + j] = v;
            a[j * n + i] = v;
        }
    }
}

fn eigen_full<R: Real>(n: usize, a: &[R]) -> Result<Spectrum<R>> {
    symmetric_eigen(&SymmetricMatrix::from_full(n, a))
}

/// Largest step `alpha` keeping `S + alpha D` positive semidefinite, from
/// the smallest eigenvalue of `S^-1/2 D S^-1/2`. `isqrt` is `S^-1/2`.
fn max_step<R: Real>(n: usize, isqrt: &[R], delta: &[R]) -> Result<R> {
    let tmp = mat_mul(n, isqrt, delta);
    let mut scaled = mat_mul(n, &tmp, isqrt);
    symmetrize(n, &mut scaled);
    let lambda = eigen_full(n, &scaled)?.eigenvalues[0];
    if lambda >= -R::real(1e-14) {
        Ok(R::real(1e30))
    } else {
        Ok(-lambda.recip())
    }
}

/// Solves the theta program for `graph` with the given vertex weights to
/// the requested duality-gap tolerance.
pub fn solve_theta_sdp<R: Real>(
    graph: &Graph,
    weights: &WeightVector<R>,
    tol: R,
) -> Result<ThetaSolution<R>> {
    let n = graph.vertex_count();
    if n > SDP_VERTEX_CAP {
        return Err(Error::Capacity(format!(
            "{n} vertices exceeds the {SDP_VERTEX_CAP}-vertex SDP cap"
        )));
    }
    if weights.len() != n {
        return Err(Error::Parameter(format!(
            "weight vector has {} entries for a {n}-vertex graph",
            weights.len()
        )));
    }
    let total: R = weights.iter().copied().sum();
    if total <= R::zero() {
        return Err(Error::Parameter("all weights are zero".into()));
    }
    if tol.is_nan() || tol <= R::zero() {
        return Err(Error::Parameter("tolerance must be positive".into()));
    }

    let prog = ThetaProgram::new(graph, weights.as_slice());
    let m = prog.num_constraints();
    let b: Vec<R> = std::iter::once(R::one()).chain(prog.edges.iter().map(|_| R::zero())).collect();

    // strictly feasible start
    let mut x = vec![R::zero(); n * n];
    for i in 0..n {
        x[i * n + i] = R::one() / R::real(n as f64);
    }
    let mut y = vec![R::zero(); m];
    y[0] = total + R::one();
    let mut z = sub(&prog.adjoint(&y), &prog.c);

    let tau = R::real(0.98);
    let mut iterations = 0;
    // Bracket tracked across iterations: every feasibility-projected primal
    // is a valid lower bound forever, every eigenvalue-corrected dual a
    // valid upper bound forever, so the tightest pair may combine distinct
    // iterates.
    let mut best_primal: Option<(Vec<R>, R)> = None;
    let mut best_dual: Option<R> = None;
    let mut done = false;

    for iter in 0..SDP_MAX_ITERATIONS {
        iterations = iter;
        let gap = frob_dot(&x, &z);
        let rp: Vec<R> = prog
            .apply(&x)
            .iter()
            .zip(&b)
            .map(|(&ax, &bk)| bk - ax)
            .collect();
        // Termination tests the quantities that will be reported, with raw
        // complementarity as the cheap pre-filter.
        if gap <= tol * R::real(4.0) {
            let projected = project_feasible(n, &prog.edges, &x)?;
            let value = frob_dot(&prog.c, &projected);
            if best_primal.as_ref().is_none_or(|(_, best)| value > *best) {
                best_primal = Some((projected, value));
            }
            let z_min = eigen_full(n, &z)?.eigenvalues[0];
            let dual = y[0] + z_min.min(R::zero()).abs();
            if best_dual.is_none_or(|best| dual < best) {
                best_dual = Some(dual);
            }
            let width = best_dual.expect("just set")
                - best_primal.as_ref().expect("just set").1;
            if width.abs() <= tol {
                done = true;
                break;
            }
        }
        let mu = gap / R::real(n as f64);

        // Nesterov-Todd scaling point W with W Z W = X
        let mut spec_x = eigen_full(n, &x)?;
        if spec_x.eigenvalues[0] <= R::zero() {
            // Rank-deficient optima drive the small eigenvalues of X to the
            // rounding floor, where they can cross zero. Lift them back by a
            // spectral clamp; the feasibility drift this causes is tracked
            // by the residual term of the Newton system.
            let violation = spec_x.eigenvalues[0].abs();
            if violation > R::real(1e-7) {
                return Err(Error::Numerical(format!(
                    "primal iterate lost definiteness (min eigenvalue {:e})",
                    spec_x.eigenvalues[0].to_f64_lossy()
                )));
            }
            let floor = violation * R::real(50.0) + R::real(1e-13);
            x = spec_x.apply(|l| l.max(floor)).to_full();
            spec_x = eigen_full(n, &x)?;
            if spec_x.eigenvalues[0] <= R::zero() {
                return Err(Error::Numerical(format!(
                    "primal iterate not recoverable (min eigenvalue {:e})",
                    spec_x.eigenvalues[0].to_f64_lossy()
                )));
            }
        }
        let sqrt_x = spec_x.apply(|l| l.sqrt()).to_full();
        let isqrt_x = spec_x.apply(|l| l.sqrt().recip()).to_full();
        let spec_z = eigen_full(n, &z)?;
        if spec_z.eigenvalues[0] < -R::real(1e-7) {
            return Err(Error::Numerical(format!(
                "dual iterate lost definiteness (min eigenvalue {:e})",
                spec_z.eigenvalues[0].to_f64_lossy()
            )));
        }
        // Z stays exactly A^T(y) - C for dual feasibility; eigenvalues at
        // the rounding floor are only lifted inside these evaluations.
        let z_floor = spec_z.eigenvalues[n - 1].max(R::one()) * R::epsilon();
        let z_inv = spec_z.apply(|l| l.max(z_floor).recip()).to_full();
        let isqrt_z = spec_z.apply(|l| l.max(z_floor).sqrt().recip()).to_full();

        let t = mat_mul(n, &sqrt_x, &mat_mul(n, &z, &sqrt_x));
        let spec_t = eigen_full(n, &t)?;
        let t_floor = spec_t.eigenvalues[n - 1].max(R::one()) * R::epsilon();
        let t_isqrt = spec_t.apply(|l| l.max(t_floor).sqrt().recip()).to_full();
        let mut w = mat_mul(n, &sqrt_x, &mat_mul(n, &t_isqrt, &sqrt_x));
        symmetrize(n, &mut w);

        let schur = prog.schur(&w);
        let chol = factor_schur(m, &schur)?;

        let solve_direction = |rc: &[R]| -> (Vec<R>, Vec<R>, Vec<R>) {
            let mut rhs = prog.apply(rc);
            for k in 0..m {
                rhs[k] -= rp[k];
            }
            let dy = solve_refined(m, &schur, &chol, &rhs);
            let dz = prog.adjoint(&dy);
            // dx = rc - W dz W
            let wdw = mat_mul(n, &w, &mat_mul(n, &dz, &w));
            let mut dx: Vec<R> = rc.iter().zip(&wdw).map(|(&a, &b)| a - b).collect();
            symmetrize(n, &mut dx);
            (dx, dy, dz)
        };

        // predictor (affine scaling)
        let rc_aff: Vec<R> = x.iter().map(|&v| -v).collect();
        let (dx_aff, _, dz_aff) = solve_direction(&rc_aff);
        let ap_aff = max_step(n, &isqrt_x, &dx_aff)?.min(R::one());
        let ad_aff = max_step(n, &isqrt_z, &dz_aff)?.min(R::one());
        let x_aff = add_scaled(&x, &dx_aff, ap_aff);
        let z_aff = add_scaled(&z, &dz_aff, ad_aff);
        let mu_aff = frob_dot(&x_aff, &z_aff) / R::real(n as f64);
        let ratio = (mu_aff / mu).max(R::zero());
        let sigma = (ratio * ratio * ratio).min(R::real(0.999)).max(R::real(1e-9));

        // corrector with centering; the floor keeps the barrier parameter
        // from collapsing past what the tolerance needs, which would only
        // degrade the Schur conditioning and with it primal feasibility
        let target = (sigma * mu).max(tol / R::real((10 * n) as f64));
        let mut rc = vec![R::zero(); n * n];
        for k in 0..n * n {
            rc[k] = target * z_inv[k] - x[k];
        }
        let (dx, dy, dz) = solve_direction(&rc);
        let alpha = (tau * max_step(n, &isqrt_x, &dx)?).min(R::one());
        let beta = (tau * max_step(n, &isqrt_z, &dz)?).min(R::one());
        if alpha < R::real(1e-10) && beta < R::real(1e-10) {
            return Err(Error::Numerical(format!(
                "interior-point stalled at iteration {iter}; best bracket \
                 [dual {:.12e}, primal {:.12e}]",
                y[0].to_f64_lossy(),
                frob_dot(&prog.c, &x).to_f64_lossy()
            )));
        }
        x = add_scaled(&x, &dx, alpha);
        symmetrize(n, &mut x);
        for k in 0..m {
            y[k] += beta * dy[k];
        }
        z = sub(&prog.adjoint(&y), &prog.c);
    }

    if !done {
        let bracket_low = best_primal.as_ref().map_or(f64::NAN, |(_, v)| v.to_f64_lossy());
        let bracket_high = best_dual.map_or(f64::NAN, |d| d.to_f64_lossy());
        return Err(Error::Numerical(format!(
            "no convergence in {SDP_MAX_ITERATIONS} iterations; best bracket \
             [primal {bracket_low:.12e}, dual {bracket_high:.12e}]"
        )));
    }
    let (projected, value) = best_primal.expect("set on acceptance");
    let dual_value = best_dual.expect("set on acceptance");

    let gap = (dual_value - value).abs();
    let primal_matrix = SymmetricMatrix::from_full(n, &projected);

    let solution =
        ThetaSolution { primal_matrix, value, dual_value, gap, iterations: iterations + 1 };
    validate(&solution, &prog.edges, tol)?;
    Ok(solution)
}

/// Exact cleanup of a near-feasible primal iterate: zero the edge entries,
/// renormalise the trace, and clamp residual negative eigenvalues away.
/// The fixed point is exactly feasible and positive semidefinite, so its
/// objective is a genuine lower bound on the optimum.
fn project_feasible<R: Real>(n: usize, edges: &[(usize, usize)], x: &[R]) -> Result<Vec<R>> {
    let mut out = x.to_vec();
    for _ in 0..5 {
        for &(i, j) in edges {
            out[i * n + j] = R::zero();
            out[j * n + i] = R::zero();
        }
        let trace: R = (0..n).map(|i| out[i * n + i]).sum();
        for v in out.iter_mut() {
            *v /= trace;
        }
        let spec = eigen_full(n, &out)?;
        let floor = -spec.eigenvalues[n - 1].max(R::one()) * R::epsilon() * R::real(50.0);
        if spec.eigenvalues[0] >= floor {
            break;
        }
        out = spec.apply(|l| l.max(R::zero())).to_full();
    }
    Ok(out)
}

/// Cholesky solve with two rounds of iterative refinement; the Schur
/// system turns ill-conditioned near the central path's end.
fn solve_refined<R: Real>(m: usize, a: &[R], chol: &[R], rhs: &[R]) -> Vec<R> {
    let mut sol = rhs.to_vec();
    cholesky_solve(m, chol, &mut sol);
    for _ in 0..2 {
        let mut residual = vec![R::zero(); m];
        for i in 0..m {
            let mut acc = rhs[i];
            for k in 0..m {
                acc -= a[i * m + k] * sol[k];
            }
            residual[i] = acc;
        }
        cholesky_solve(m, chol, &mut residual);
        for i in 0..m {
            sol[i] += residual[i];
        }
    }
    sol
}

fn factor_schur<R: Real>(m: usize, schur: &[R]) -> Result<Vec<R>> {
    match cholesky(m, schur) {
        Ok(l) => Ok(l),
        Err(_) => {
            // one jitter retry before giving up
            let mut trace = R::zero();
            for k in 0..m {
                trace += schur[k * m + k];
            }
            let jitter = trace / R::real(m as f64) * R::real(1e-12);
            let mut bumped = schur.to_vec();
            for k in 0..m {
                bumped[k * m + k] += jitter;
            }
            cholesky(m, &bumped)
        }
    }
}

fn add_scaled<R: Real>(a: &[R], d: &[R], s: R) -> Vec<R> {
    a.iter().zip(d).map(|(&x, &y)| x + s * y).collect()
}

fn sub<R: Real>(a: &[R], b: &[R]) -> Vec<R> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

/// Solution invariants: PSD primal, unit trace, exact zeros on edges,
/// certified gap. These back the solver-health acceptance criterion.
fn validate<R: Real>(sol: &ThetaSolution<R>, edges: &[(usize, usize)], tol: R) -> Result<()> {
    let slack = R::real(1e-9).max(R::epsilon() * R::real(100.0));
    let min_eig = sol.primal_matrix.min_eigenvalue()?;
    if min_eig < -slack {
        return Err(Error::Numerical(format!(
            "primal matrix not PSD: min eigenvalue {:e}",
            min_eig.to_f64_lossy()
        )));
    }
    if (sol.primal_matrix.trace() - R::one()).abs() > slack {
        return Err(Error::Numerical("primal trace deviates from one".into()));
    }
    for &(i, j) in edges {
        if sol.primal_matrix.get(i, j).abs() > slack {
            return Err(Error::Numerical(format!("edge entry ({i},{j}) not zero")));
        }
    }
    if sol.gap > tol.max(slack) {
        return Err(Error::Numerical(format!(
            "duality gap {:e} above tolerance {:e}",
            sol.gap.to_f64_lossy(),
            tol.to_f64_lossy()
        )));
    }
    // weak duality between the projected primal and the certified dual
    if sol.dual_value < sol.value - R::real(1e-12).max(R::epsilon() * R::real(100.0)) {
        return Err(Error::Numerical(format!(
            "weak duality violated: dual {:e} below primal {:e}",
            sol.dual_value.to_f64_lossy(),
            sol.value.to_f64_lossy()
        )));
    }
    Ok(())
}
