//! The quantum set of an exclusivity graph and the exclusivity-principle
//! machinery built on it.
//!
//! A per-vertex probability assignment `P` is quantum-achievable for graph
//! `G` exactly when `P >= 0` and the weighted Lovász number of the
//! complement, `theta(complement(G), P)`, is at most one (the theta-body
//! characterisation). Membership testing, witness extraction for
//! supra-quantum points, automorphism symmetrisation, and the executable
//! verifiers for the three duality results all reduce to theta solves on
//! the graph and its complement.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::WeightVector;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexPermutation};
use crate::scalar::Real;
use crate::sdp::{solve_theta_sdp, ThetaSolution};

/// Boundary band around `theta(complement, P) = 1` for classification.
pub const MEMBERSHIP_BAND: f64 = 1e-6;
/// A witness product may undershoot the attained maximum by this much.
pub const WITNESS_PRODUCT_SLACK: f64 = 1e-5;
/// Slack accepted when checking the exclusivity-principle product sum.
pub const E_PRODUCT_TOL: f64 = 1e-9;
/// Tolerance on `theta(G) * theta(complement) = n` for vertex-transitive graphs.
pub const QUANTUM_MAX_PRODUCT_TOL: f64 = 1e-5;

/// Per-vertex event probabilities. Entries live in `[0, 1]`; there is no
/// normalisation across vertices because distinct events need not be
/// outcomes of one measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<R> {
    values: Vec<R>,
}

impl<R: Real> Distribution<R> {
    pub fn new(values: Vec<R>) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() || *v < R::zero() || *v > R::one() {
                return Err(Error::Parameter(format!(
                    "probability {i} is {v}, must lie in [0, 1]"
                )));
            }
        }
        Ok(Distribution { values })
    }

    pub fn constant(n: usize, p: R) -> Result<Self> {
        Self::new(vec![p; n])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[R] {
        &self.values
    }

    pub fn get(&self, i: usize) -> R {
        self.values[i]
    }

    pub fn sum(&self) -> R {
        self.values.iter().copied().sum()
    }

    /// Relabels the entries: the output assigns `self[i]` to vertex
    /// `perm(i)`.
    pub fn pushforward(&self, perm: &VertexPermutation) -> Result<Distribution<R>> {
        if perm.len() != self.len() {
            return Err(Error::Parameter(format!(
                "permutation on {} points applied to {}-entry distribution",
                perm.len(),
                self.len()
            )));
        }
        let mut out = vec![R::zero(); self.len()];
        for (i, &v) in self.values.iter().enumerate() {
            out[perm.apply(i)] = v;
        }
        Ok(Distribution { values: out })
    }

    fn weights(&self) -> WeightVector<R> {
        WeightVector::new(self.values.clone()).expect("probabilities are valid weights")
    }
}

/// Sum of joint-event probabilities under the independence assumption.
/// The joint events are pairwise exclusive, so the exclusivity principle
/// caps the sum at one.
pub fn e_product<R: Real>(p: &Distribution<R>, q: &Distribution<R>) -> Result<(R, bool)> {
    if p.len() != q.len() {
        return Err(Error::Parameter(format!(
            "distributions of lengths {} and {} cannot be paired",
            p.len(),
            q.len()
        )));
    }
    let value: R = p.as_slice().iter().zip(q.as_slice()).map(|(&a, &b)| a * b).sum();
    Ok((value, value <= R::one() + R::real(E_PRODUCT_TOL)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Inside,
    Boundary,
    Outside,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::Inside => write!(f, "inside"),
            Classification::Boundary => write!(f, "boundary"),
            Classification::Outside => write!(f, "outside"),
        }
    }
}

/// Outcome of a quantum-set membership test.
#[derive(Debug, Clone)]
pub struct MembershipVerdict<R> {
    /// `theta(complement(G), P)`; at most one exactly for quantum points.
    pub theta_complement: R,
    pub classification: Classification,
    /// Present iff the point is outside; always self-verified.
    pub witness: Option<Witness<R>>,
}

/// A member of the complementary quantum set whose event-wise product with
/// the tested point exceeds one.
#[derive(Debug, Clone)]
pub struct Witness<R> {
    pub distribution: Distribution<R>,
    /// Recomputed `sum_i P_i Pbar_i`.
    pub product: R,
    /// `theta(G, Pbar)`: certifies membership of the witness in the
    /// complementary quantum set.
    pub membership_check: R,
}

fn classify<R: Real>(g: &Graph, p: &Distribution<R>, tol: R) -> Result<(R, Classification)> {
    if p.len() != g.vertex_count() {
        return Err(Error::Parameter(format!(
            "distribution has {} entries for a {}-vertex graph",
            p.len(),
            g.vertex_count()
        )));
    }
    if p.sum() == R::zero() {
        // the zero assignment is trivially quantum
        return Ok((R::zero(), Classification::Inside));
    }
    let sol = solve_theta_sdp(&g.complement(), &p.weights(), tol)?;
    let band = R::real(MEMBERSHIP_BAND);
    let t = sol.value;
    let class = if (t - R::one()).abs() <= band {
        Classification::Boundary
    } else if t < R::one() {
        Classification::Inside
    } else {
        Classification::Outside
    };
    Ok((t, class))
}

/// Classifies `p` against the quantum set of `g`, attaching a verified
/// witness when the point is outside.
pub fn membership<R: Real>(g: &Graph, p: &Distribution<R>, tol: R) -> Result<MembershipVerdict<R>> {
    let (theta_complement, classification) = classify(g, p, tol)?;
    let witness = if classification == Classification::Outside {
        Some(extract_witness(g, p, tol)?)
    } else {
        None
    };
    Ok(MembershipVerdict { theta_complement, classification, witness })
}

/// Builds a witness for a supra-quantum point: a member of the
/// complementary quantum set whose product with `p` reaches
/// `theta(complement(G), p) > 1`.
///
/// The primary candidate reads the optimal primal diagonal,
/// `Pbar_i = theta * B_ii / p_i`; with unit trace its product with `p` is
/// exactly the attained theta value. If its self-verification fails, the
/// constant candidate `theta(complement)/n` is tried on vertex-transitive
/// graphs. Nothing unverified is ever returned.
pub fn extract_witness<R: Real>(g: &Graph, p: &Distribution<R>, tol: R) -> Result<Witness<R>> {
    if p.len() != g.vertex_count() {
        return Err(Error::Parameter(format!(
            "distribution has {} entries for a {}-vertex graph",
            p.len(),
            g.vertex_count()
        )));
    }
    if p.sum() == R::zero() {
        return Err(Error::Precondition(
            "witness extraction needs a point outside the quantum set; the zero point is inside"
                .into(),
        ));
    }
    let complement = g.complement();
    let sol = solve_theta_sdp(&complement, &p.weights(), tol)?;
    let t = sol.value;
    if t <= R::one() + R::real(MEMBERSHIP_BAND) {
        return Err(Error::Precondition(format!(
            "witness extraction needs a point outside the quantum set; \
             theta(complement, P) = {:.9} is not above 1",
            t.to_f64_lossy()
        )));
    }

    let diagonal_candidate = |sol: &ThetaSolution<R>| -> Distribution<R> {
        let mut q = Vec::with_capacity(p.len());
        for i in 0..p.len() {
            let pi = p.get(i);
            let v = if pi > R::zero() {
                (sol.value * sol.primal_matrix.get(i, i) / pi).max(R::zero()).min(R::one())
            } else {
                R::zero()
            };
            q.push(v);
        }
        Distribution::new(q).expect("clamped into [0, 1]")
    };

    // When the maximiser is a deterministic assignment, the diagonal
    // entries converge to exact zeros and ones; snapping recovers them.
    let rounded = |q: &Distribution<R>| -> Option<Distribution<R>> {
        let snapped: Vec<R> = q
            .as_slice()
            .iter()
            .map(|&v| {
                if v >= R::one() - R::real(1e-3) {
                    R::one()
                } else if v <= R::real(1e-6) {
                    R::zero()
                } else {
                    v
                }
            })
            .collect();
        if snapped == q.as_slice() {
            None
        } else {
            Some(Distribution::new(snapped).expect("snapping stays in [0, 1]"))
        }
    };

    let mut solutions = vec![sol];
    // At degenerate optima the primal diagonal approaches its limit only
    // like sqrt(gap); one tighter solve recovers the lost digits.
    if let Ok(tight_sol) = solve_theta_sdp(&complement, &p.weights(), tol * R::real(1e-3)) {
        solutions.push(tight_sol);
    }
    for s in &solutions {
        let candidate = diagonal_candidate(s);
        if let Ok(witness) = verify_witness(g, p, &candidate, s.value, tol) {
            return Ok(witness);
        }
        if let Some(snapped) = rounded(&candidate) {
            if let Ok(witness) = verify_witness(g, p, &snapped, s.value, tol) {
                return Ok(witness);
            }
        }
    }

    if g.is_vertex_transitive()? {
        let n = g.vertex_count();
        let theta_bar = solve_theta_sdp(&complement, &WeightVector::unit(n), tol)?.value;
        let constant = Distribution::constant(n, (theta_bar / R::real(n as f64)).min(R::one()))?;
        if let Ok(witness) = verify_witness(g, p, &constant, t, tol) {
            return Ok(witness);
        }
    }

    Err(Error::Numerical(format!(
        "no witness candidate passed self-verification (theta(complement, P) = {:.9})",
        t.to_f64_lossy()
    )))
}

/// Recomputes both witness conditions before accepting a candidate.
fn verify_witness<R: Real>(
    g: &Graph,
    p: &Distribution<R>,
    candidate: &Distribution<R>,
    theta_complement: R,
    tol: R,
) -> Result<Witness<R>> {
    let membership_check = solve_theta_sdp(g, &candidate.weights(), tol)?.value;
    if membership_check > R::one() + R::real(MEMBERSHIP_BAND) {
        return Err(Error::Numerical(format!(
            "witness candidate fails the complementary membership check ({:.9} > 1)",
            membership_check.to_f64_lossy()
        )));
    }
    let (product, _) = e_product(p, candidate)?;
    if product <= R::one() || product < theta_complement - R::real(WITNESS_PRODUCT_SLACK) {
        return Err(Error::Numerical(format!(
            "witness candidate product {:.9} does not certify the violation (theta = {:.9})",
            product.to_f64_lossy(),
            theta_complement.to_f64_lossy()
        )));
    }
    Ok(Witness { distribution: candidate.clone(), product, membership_check })
}

/// Averages `p` over the automorphism group:
/// `q(i) = (1/|Aut|) * sum_phi p(phi(i))`.
///
/// The output is invariant under the group, preserves the entry sum, and
/// is constant on vertex-transitive graphs.
pub fn symmetrize<R: Real>(g: &Graph, p: &Distribution<R>) -> Result<Distribution<R>> {
    if p.len() != g.vertex_count() {
        return Err(Error::Parameter(format!(
            "distribution has {} entries for a {}-vertex graph",
            p.len(),
            g.vertex_count()
        )));
    }
    let group = g.automorphism_group()?;
    let n = g.vertex_count();
    let mut sums = vec![R::zero(); n];
    for phi in group.elements() {
        for (i, s) in sums.iter_mut().enumerate() {
            *s += p.get(phi.apply(i));
        }
    }
    let order = R::real(group.order() as f64);
    let values: Vec<R> = sums.into_iter().map(|s| (s / order).min(R::one())).collect();
    Distribution::new(values)
}

/// Quantum maxima of the probability sum for a graph and its complement.
#[derive(Debug, Clone)]
pub struct QuantumMaxReport<R> {
    pub n: usize,
    /// `theta(G)`: the quantum maximum of the sum.
    pub m_q: R,
    /// `theta(complement(G))`.
    pub complement_m_q: R,
    /// `m_q * complement_m_q`; equals `n` for vertex-transitive graphs.
    pub product: R,
    /// Per-vertex optimum `theta(G)/n`; present iff vertex-transitive,
    /// where the maximum is attained at the constant distribution.
    pub p_max: Option<R>,
    pub vertex_transitive: bool,
}

pub fn quantum_max<R: Real>(g: &Graph, tol: R) -> Result<QuantumMaxReport<R>> {
    let n = g.vertex_count();
    let unit = WeightVector::unit(n);
    let m_q = solve_theta_sdp(g, &unit, tol)?.value;
    let complement_m_q = solve_theta_sdp(&g.complement(), &unit, tol)?.value;
    let product = m_q * complement_m_q;
    let vertex_transitive = g.is_vertex_transitive()?;
    if vertex_transitive && (product - R::real(n as f64)).abs() > R::real(QUANTUM_MAX_PRODUCT_TOL) {
        return Err(Error::Numerical(format!(
            "vertex-transitive duality violated: theta * theta_complement = {:.9} for n = {n}",
            product.to_f64_lossy()
        )));
    }
    let p_max = vertex_transitive.then(|| m_q / R::real(n as f64));
    Ok(QuantumMaxReport { n, m_q, complement_m_q, product, p_max, vertex_transitive })
}

/// Counters from a [`verify_result1`] run.
#[derive(Debug, Clone, Default)]
pub struct Result1Report {
    pub trials: usize,
    pub inside: usize,
    pub boundary: usize,
    pub outside: usize,
    /// Exclusivity products checked for inside points (10 per point).
    pub product_checks: usize,
    pub product_violations: usize,
    pub witnesses_verified: usize,
    pub witness_failures: usize,
}

impl Result1Report {
    pub fn passed(&self) -> bool {
        self.product_violations == 0 && self.witness_failures == 0
    }
}

/// Samples `trials` random assignments for `g`. Inside points must keep
/// every exclusivity product with sampled members of the complementary
/// quantum set at most one; outside points must yield verified witnesses.
pub fn verify_result1<R: Real>(
    g: &Graph,
    trials: usize,
    seed: u64,
    tol: R,
) -> Result<Result1Report> {
    let n = g.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Result1Report { trials, ..Default::default() };
    let product_bound = R::one() + R::real(MEMBERSHIP_BAND);
    for _ in 0..trials {
        let p = random_distribution::<R>(&mut rng, n);
        let (_, class) = classify(g, &p, tol)?;
        match class {
            Classification::Inside => {
                report.inside += 1;
                for _ in 0..10 {
                    let member = sample_complement_member(g, &mut rng, tol)?;
                    let (value, _) = e_product(&p, &member)?;
                    report.product_checks += 1;
                    if value > product_bound {
                        report.product_violations += 1;
                    }
                }
            }
            Classification::Boundary => report.boundary += 1,
            Classification::Outside => {
                report.outside += 1;
                match extract_witness(g, &p, tol) {
                    Ok(_) => report.witnesses_verified += 1,
                    Err(Error::Numerical(_)) => report.witness_failures += 1,
                    Err(other) => return Err(other),
                }
            }
        }
    }
    Ok(report)
}

fn random_distribution<R: Real>(rng: &mut ChaCha8Rng, n: usize) -> Distribution<R> {
    let values: Vec<R> = (0..n).map(|_| R::real(rng.gen::<f64>())).collect();
    Distribution::new(values).expect("uniform samples lie in [0, 1]")
}

/// Boundary member of the complementary quantum set: scale a random
/// nonnegative vector `v` by `theta(G, v)`, using that the weighted theta
/// is homogeneous in its weights.
fn sample_complement_member<R: Real>(
    g: &Graph,
    rng: &mut ChaCha8Rng,
    tol: R,
) -> Result<Distribution<R>> {
    let n = g.vertex_count();
    loop {
        let v: Vec<R> = (0..n).map(|_| R::real(rng.gen::<f64>())).collect();
        let total: R = v.iter().copied().sum();
        if total <= R::zero() {
            continue;
        }
        let t = solve_theta_sdp(g, &WeightVector::new(v.clone())?, tol)?.value;
        let values: Vec<R> = v.into_iter().map(|x| (x / t).min(R::one())).collect();
        return Distribution::new(values);
    }
}

/// One tested supra-quantum scale in a [`verify_result2`] run.
#[derive(Debug, Clone)]
pub struct Result2Entry<R> {
    pub epsilon: R,
    /// `sum_i P_i Pbar_i`, necessarily above one.
    pub product: R,
    /// `theta(G, Pbar)` for the extracted witness.
    pub witness_membership: R,
    /// `theta(complement(G), sigma(Pbar))`: the witness re-checked as a
    /// member of the quantum set of `G` after the self-complementarity
    /// permutation.
    pub permuted_membership: R,
}

/// Report of a [`verify_result2`] run on a self-complementary graph.
#[derive(Debug, Clone)]
pub struct Result2Report<R> {
    pub theta: R,
    pub sigma: VertexPermutation,
    pub entries: Vec<Result2Entry<R>>,
    pub all_products_exceed_one: bool,
    pub products_increasing: bool,
}

impl<R> Result2Report<R> {
    pub fn passed(&self) -> bool {
        self.all_products_exceed_one && self.products_increasing
    }
}

/// Scales the constant boundary distribution by `1 + epsilon` for each
/// grid value, extracts a witness, and re-exhibits the witness inside the
/// quantum set of `g` itself through the self-complementarity isomorphism.
pub fn verify_result2<R: Real>(
    g: &Graph,
    epsilon_grid: &[R],
    tol: R,
) -> Result<Result2Report<R>> {
    let sigma = g.is_self_complementary().ok_or_else(|| {
        Error::Structural(
            "this verification requires a self-complementary graph (its hypothesis)".into(),
        )
    })?;
    if epsilon_grid.is_empty() {
        return Err(Error::Parameter("epsilon grid is empty".into()));
    }
    let mut grid = epsilon_grid.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite epsilon"));
    for &eps in &grid {
        if eps.is_nan() || eps <= R::real(MEMBERSHIP_BAND) {
            return Err(Error::Parameter(format!(
                "epsilon {} must exceed the boundary band {MEMBERSHIP_BAND:e}",
                eps.to_f64_lossy()
            )));
        }
    }

    let n = g.vertex_count();
    let complement = g.complement();
    let theta = solve_theta_sdp(g, &WeightVector::unit(n), tol)?.value;
    let base = theta / R::real(n as f64);

    let mut entries = Vec::with_capacity(grid.len());
    for &eps in &grid {
        let p = Distribution::constant(n, base * (R::one() + eps))?;
        let witness = extract_witness(g, &p, tol)?;
        let permuted = witness.distribution.pushforward(&sigma)?;
        let permuted_membership =
            solve_theta_sdp(&complement, &permuted.weights(), tol)?.value;
        if permuted_membership > R::one() + R::real(MEMBERSHIP_BAND) {
            return Err(Error::Numerical(format!(
                "permuted witness fails the quantum-set recheck ({:.9} > 1)",
                permuted_membership.to_f64_lossy()
            )));
        }
        entries.push(Result2Entry {
            epsilon: eps,
            product: witness.product,
            witness_membership: witness.membership_check,
            permuted_membership,
        });
    }
    let all_products_exceed_one = entries.iter().all(|e| e.product > R::one());
    let products_increasing =
        entries.windows(2).all(|pair| pair[1].product > pair[0].product);
    Ok(Result2Report { theta, sigma, entries, all_products_exceed_one, products_increasing })
}

/// Report of a [`verify_result3`] run on a vertex-transitive graph.
#[derive(Debug, Clone)]
pub struct Result3Report<R> {
    pub n: usize,
    pub theta: R,
    pub theta_complement: R,
    /// `theta * theta_complement`; pinned to `n` from both sides.
    pub product: R,
    /// `n * p_max * pbar_max = product / n`: the exclusivity product of the
    /// two constant extremal distributions, at most one.
    pub e_product_at_maxima: R,
    /// `n + tol - product`, nonnegative when the upper bound holds.
    pub upper_margin: R,
    /// `product - (n - tol)`, nonnegative when the lower bound holds.
    pub lower_margin: R,
}

impl<R: Real> Result3Report<R> {
    pub fn passed(&self) -> bool {
        self.upper_margin >= R::zero() && self.lower_margin >= R::zero()
    }
}

/// Checks `theta(G) * theta(complement(G)) = n` from both sides on a
/// vertex-transitive graph.
pub fn verify_result3<R: Real>(g: &Graph, tol: R) -> Result<Result3Report<R>> {
    if !g.is_vertex_transitive()? {
        return Err(Error::Structural(
            "this verification requires a vertex-transitive graph (its hypothesis)".into(),
        ));
    }
    let n = g.vertex_count();
    let unit = WeightVector::unit(n);
    let theta = solve_theta_sdp(g, &unit, tol)?.value;
    let theta_complement = solve_theta_sdp(&g.complement(), &unit, tol)?.value;
    let product = theta * theta_complement;
    let nr = R::real(n as f64);
    let bound = R::real(QUANTUM_MAX_PRODUCT_TOL);
    let report = Result3Report {
        n,
        theta,
        theta_complement,
        product,
        e_product_at_maxima: product / nr,
        upper_margin: nr + bound - product,
        lower_margin: product - (nr - bound),
    };
    if !report.passed() {
        return Err(Error::Numerical(format!(
            "product {:.9} deviates from n = {n} by more than {:e}",
            product.to_f64_lossy(),
            QUANTUM_MAX_PRODUCT_TOL
        )));
    }
    Ok(report)
}

/// Convenience access to the primal matrix behind a membership test;
/// useful for diagnostics.
pub fn membership_solution<R: Real>(
    g: &Graph,
    p: &Distribution<R>,
    tol: R,
) -> Result<ThetaSolution<R>> {
    solve_theta_sdp(&g.complement(), &p.weights(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FamilySpec;
    use approx::assert_abs_diff_eq;

    const TOL: f64 = 1e-8;

    fn pentagon() -> Graph {
        FamilySpec::cycle(5).generate().unwrap()
    }

    fn path(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|u| (u, u + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn e_product_examples() {
        let inv = 1.0 / 5f64.sqrt();
        let p = Distribution::constant(5, inv).unwrap();
        let (value, ok) = e_product(&p, &p).unwrap();
        assert_abs_diff_eq!(value, 1.0, epsilon = 1e-12);
        assert!(ok);

        let half = Distribution::constant(5, 0.5).unwrap();
        let (value, ok) = e_product(&half, &half).unwrap();
        assert_abs_diff_eq!(value, 1.25, epsilon = 1e-12);
        assert!(!ok);

        let zero = Distribution::constant(5, 0.0).unwrap();
        let (value, ok) = e_product(&half, &zero).unwrap();
        assert_eq!(value, 0.0);
        assert!(ok);

        let short = Distribution::constant(3, 0.1).unwrap();
        assert!(matches!(e_product(&half, &short), Err(Error::Parameter(_))));
    }

    #[test]
    fn distribution_validation() {
        assert!(Distribution::new(vec![0.0, 0.5, 1.0]).is_ok());
        assert!(Distribution::new(vec![-0.1]).is_err());
        assert!(Distribution::new(vec![1.1]).is_err());
        assert!(Distribution::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn pentagon_membership_boundary() {
        let g = pentagon();
        let p = Distribution::constant(5, 1.0 / 5f64.sqrt()).unwrap();
        let verdict = membership(&g, &p, TOL).unwrap();
        assert_eq!(verdict.classification, Classification::Boundary);
        assert_abs_diff_eq!(verdict.theta_complement, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn pentagon_membership_inside() {
        let g = pentagon();
        let p = Distribution::constant(5, 0.4).unwrap();
        let verdict = membership(&g, &p, TOL).unwrap();
        assert_eq!(verdict.classification, Classification::Inside);
        assert_abs_diff_eq!(verdict.theta_complement, 0.4 * 5f64.sqrt(), epsilon = 1e-6);
        assert!(verdict.witness.is_none());
    }

    #[test]
    fn pentagon_membership_outside_with_witness() {
        let g = pentagon();
        let p = Distribution::constant(5, 0.5).unwrap();
        let verdict = membership(&g, &p, TOL).unwrap();
        assert_eq!(verdict.classification, Classification::Outside);
        assert_abs_diff_eq!(verdict.theta_complement, 0.5 * 5f64.sqrt(), epsilon = 1e-6);
        let witness = verdict.witness.expect("outside points carry witnesses");
        assert_abs_diff_eq!(witness.product, 1.1180339887, epsilon = 1e-5);
        // the symmetric optimum: constant 1/sqrt(5)
        for i in 0..5 {
            assert_abs_diff_eq!(witness.distribution.get(i), 1.0 / 5f64.sqrt(), epsilon = 1e-4);
        }
        assert!(witness.membership_check <= 1.0 + MEMBERSHIP_BAND);
    }

    #[test]
    fn deterministic_point_is_boundary() {
        let g = pentagon();
        let p = Distribution::new(vec![1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let verdict = membership(&g, &p, TOL).unwrap();
        assert_eq!(verdict.classification, Classification::Boundary);
        assert_abs_diff_eq!(verdict.theta_complement, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn zero_distribution_is_inside() {
        let g = pentagon();
        let p = Distribution::constant(5, 0.0).unwrap();
        let verdict = membership(&g, &p, TOL).unwrap();
        assert_eq!(verdict.classification, Classification::Inside);
        assert_eq!(verdict.theta_complement, 0.0);
    }

    #[test]
    fn witness_precondition() {
        let g = pentagon();
        let inside = Distribution::constant(5, 0.4).unwrap();
        assert!(matches!(
            extract_witness(&g, &inside, TOL),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn chsh_witness_product() {
        let g = FamilySpec::circulant(8, &[1, 4]).generate().unwrap();
        let p = Distribution::constant(8, 0.5).unwrap();
        let witness = extract_witness(&g, &p, TOL).unwrap();
        // 0.5 * theta(complement) = 0.5 * 8/(2 + sqrt 2)
        assert_abs_diff_eq!(witness.product, 4.0 / (2.0 + 2f64.sqrt()), epsilon = 1e-5);
    }

    #[test]
    fn symmetrize_examples() {
        let g = pentagon();
        let p = Distribution::new(vec![1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let q = symmetrize(&g, &p).unwrap();
        for i in 0..5 {
            assert_abs_diff_eq!(q.get(i), 0.2, epsilon = 1e-12);
        }

        let p3 = path(3);
        let p = Distribution::new(vec![0.6, 0.1, 0.2]).unwrap();
        let q = symmetrize(&p3, &p).unwrap();
        assert_abs_diff_eq!(q.get(0), 0.4, epsilon = 1e-12);
        assert_abs_diff_eq!(q.get(1), 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(q.get(2), 0.4, epsilon = 1e-12);

        // fixed point: already invariant
        let inv = Distribution::constant(5, 0.3).unwrap();
        let q = symmetrize(&g, &inv).unwrap();
        for i in 0..5 {
            assert_abs_diff_eq!(q.get(i), 0.3, epsilon = 1e-15);
        }
    }

    #[test]
    fn symmetrize_idempotent_and_sum_preserving() {
        let g = path(4);
        let p = Distribution::new(vec![0.9, 0.2, 0.4, 0.1]).unwrap();
        let q = symmetrize(&g, &p).unwrap();
        assert_abs_diff_eq!(q.sum(), p.sum(), epsilon = 1e-12);
        let qq = symmetrize(&g, &q).unwrap();
        for i in 0..4 {
            assert_abs_diff_eq!(qq.get(i), q.get(i), epsilon = 1e-12);
        }
    }

    #[test]
    fn quantum_max_pentagon() {
        let report = quantum_max(&pentagon(), TOL).unwrap();
        assert_abs_diff_eq!(report.m_q, 5f64.sqrt(), epsilon = 1e-6);
        assert_abs_diff_eq!(report.p_max.unwrap(), 5f64.sqrt() / 5.0, epsilon = 1e-6);
        assert_abs_diff_eq!(report.product, 5.0, epsilon = 1e-5);
    }

    #[test]
    fn quantum_max_complete4() {
        let report = quantum_max(&Graph::complete(4).unwrap(), TOL).unwrap();
        assert_abs_diff_eq!(report.m_q, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(report.p_max.unwrap(), 0.25, epsilon = 1e-6);
    }

    #[test]
    fn quantum_max_non_transitive_has_no_p_max() {
        let report = quantum_max(&path(3), TOL).unwrap();
        assert!(report.p_max.is_none());
        assert!(!report.vertex_transitive);
    }

    #[test]
    fn result1_on_two_exclusive_events() {
        let g = Graph::complete(2).unwrap();
        let report = verify_result1(&g, 40, 7, TOL).unwrap();
        assert_eq!(report.trials, 40);
        assert!(report.passed());
        // inside iff P0 + P1 <= 1: both classes occur under uniform sampling
        assert!(report.inside > 0);
        assert!(report.outside > 0);
        assert_eq!(report.witnesses_verified, report.outside);
    }

    #[test]
    fn result1_on_the_pentagon_is_deterministic() {
        let report = verify_result1(&pentagon(), 40, 7, TOL).unwrap();
        assert!(report.passed());
        assert_eq!(report.witnesses_verified, report.outside);
        // same seed, same counts
        let again = verify_result1(&pentagon(), 40, 7, TOL).unwrap();
        assert_eq!(report.inside, again.inside);
        assert_eq!(report.outside, again.outside);
        assert_eq!(report.product_checks, again.product_checks);
    }

    #[test]
    fn result1_on_single_vertex() {
        let g = Graph::complete(1).unwrap();
        let report = verify_result1(&g, 20, 3, TOL).unwrap();
        // every P0 <= 1 is quantum for the one-event experiment
        assert_eq!(report.outside, 0);
        assert!(report.passed());
    }

    #[test]
    fn result2_pentagon_products() {
        let report =
            verify_result2(&pentagon(), &[0.05, 0.1, 0.2], TOL).unwrap();
        assert!(report.passed());
        let expected = [1.05, 1.10, 1.20];
        for (entry, want) in report.entries.iter().zip(expected) {
            assert_abs_diff_eq!(entry.product, want, epsilon = 1e-4);
            assert!(entry.product > 1.0);
            assert!(entry.permuted_membership <= 1.0 + MEMBERSHIP_BAND);
        }
    }

    #[test]
    fn result2_rejects_square() {
        let c4 = FamilySpec::cycle(4).generate().unwrap();
        assert!(matches!(
            verify_result2(&c4, &[0.1], TOL),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn result2_on_self_complementary_path() {
        let p4 = path(4);
        let report = verify_result2(&p4, &[0.1], TOL).unwrap();
        assert!(report.entries[0].product > 1.0);
    }

    #[test]
    fn result3_pentagon() {
        let report = verify_result3(&pentagon(), TOL).unwrap();
        assert_abs_diff_eq!(report.product, 5.0, epsilon = 1e-5);
        assert!(report.e_product_at_maxima <= 1.0 + 1e-5);
        assert!(report.passed());
    }

    #[test]
    fn result3_rejects_path() {
        assert!(matches!(
            verify_result3(&path(3), TOL),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn membership_down_closedness_sample() {
        let g = pentagon();
        // quantum points dominated entrywise stay quantum
        let p = Distribution::constant(5, 0.43).unwrap();
        let verdict = membership(&g, &p, TOL).unwrap();
        assert_eq!(verdict.classification, Classification::Inside);
        let smaller = Distribution::new(vec![0.43, 0.2, 0.0, 0.4, 0.1]).unwrap();
        let verdict = membership(&g, &smaller, TOL).unwrap();
        assert_eq!(verdict.classification, Classification::Inside);
    }
}
