//! The three bounds of a correlation experiment's exclusivity graph: the
//! classical bound (weighted independence number), the quantum bound
//! (weighted Lovász number), and the single-copy exclusivity-principle
//! bound (weighted fractional packing), plus the consolidated report.

use crate::error::{Error, Result};
use crate::graph::{low_mask, Graph};
use crate::lp::{solve_lp, LpStatus};
use crate::scalar::Real;
use crate::sdp::{solve_theta_sdp, ThetaSolution};

/// Per-vertex nonnegative weights of a noncontextuality inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector<R> {
    values: Vec<R>,
}

impl<R: Real> WeightVector<R> {
    pub fn new(values: Vec<R>) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() || *v < R::zero() {
                return Err(Error::Parameter(format!(
                    "weight {i} is {v}, weights must be finite and nonnegative"
                )));
            }
        }
        Ok(WeightVector { values })
    }

    /// All-ones weights: the plain event-probability sum.
    pub fn unit(n: usize) -> Self {
        WeightVector { values: vec![R::one(); n] }
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

    pub fn iter(&self) -> std::slice::Iter<'_, R> {
        self.values.iter()
    }

    pub fn get(&self, i: usize) -> R {
        self.values[i]
    }

    pub fn total(&self) -> R {
        self.values.iter().copied().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.values.iter().all(|&v| v == R::one())
    }
}

/// Exact weighted independence number with the optimal set.
///
/// Branch and bound in lexicographic include-first order, pruned by a
/// greedy clique-cover bound; ties therefore resolve to the first optimum
/// visited, which is the lexicographically smallest one.
pub fn independence_number<R: Real>(g: &Graph, w: &WeightVector<R>) -> Result<(R, Vec<usize>)> {
    if w.len() != g.vertex_count() {
        return Err(Error::Parameter(format!(
            "weight vector has {} entries for a {}-vertex graph",
            w.len(),
            g.vertex_count()
        )));
    }
    let mut best_value = R::zero();
    let mut best_set: Vec<usize> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    branch(g, w.as_slice(), low_mask(g.vertex_count()), R::zero(), &mut current, &mut best_value, &mut best_set);
    Ok((best_value, best_set))
}

fn branch<R: Real>(
    g: &Graph,
    w: &[R],
    cand: u64,
    weight: R,
    current: &mut Vec<usize>,
    best_value: &mut R,
    best_set: &mut Vec<usize>,
) {
    if cand == 0 {
        if weight > *best_value {
            *best_value = weight;
            *best_set = current.clone();
        }
        return;
    }
    if weight + clique_cover_bound(g, w, cand) <= *best_value {
        return;
    }
    let v = cand.trailing_zeros() as usize;
    // include v first: keeps leaf visitation in lexicographic order
    current.push(v);
    branch(g, w, cand & !g.neighbors(v) & !(1 << v), weight + w[v], current, best_value, best_set);
    current.pop();
    branch(g, w, cand & !(1 << v), weight, current, best_value, best_set);
}

/// Upper bound: partition the candidates into cliques greedily; an
/// independent set takes at most the heaviest vertex of each clique.
fn clique_cover_bound<R: Real>(g: &Graph, w: &[R], cand: u64) -> R {
    let mut cliques: Vec<(u64, R)> = Vec::new();
    let mut rest = cand;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let nv = g.neighbors(v);
        match cliques.iter_mut().find(|(mask, _)| mask & !nv == 0) {
            Some((mask, max_w)) => {
                *mask |= 1 << v;
                *max_w = (*max_w).max(w[v]);
            }
            None => cliques.push((1 << v, w[v])),
        }
    }
    cliques.into_iter().map(|(_, max_w)| max_w).sum()
}

/// All maximal cliques, each sorted ascending, listed lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueList {
    cliques: Vec<Vec<usize>>,
}

impl CliqueList {
    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vec<usize>> {
        self.cliques.iter()
    }

    pub fn as_slice(&self) -> &[Vec<usize>] {
        &self.cliques
    }
}

/// Bron-Kerbosch with pivoting. Isolated vertices come out as singleton
/// cliques, so the cliques always cover the vertex set.
pub fn maximal_cliques(g: &Graph) -> CliqueList {
    let mut masks = Vec::new();
    bron_kerbosch(g, 0, low_mask(g.vertex_count()), 0, &mut masks);
    let mut cliques: Vec<Vec<usize>> = masks
        .into_iter()
        .map(|mut m| {
            let mut c = Vec::with_capacity(m.count_ones() as usize);
            while m != 0 {
                c.push(m.trailing_zeros() as usize);
                m &= m - 1;
            }
            c
        })
        .collect();
    cliques.sort();
    CliqueList { cliques }
}

fn bron_kerbosch(g: &Graph, r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 && x == 0 {
        out.push(r);
        return;
    }
    // pivot: vertex of p | x with the most candidates among its neighbours
    let mut pivot = usize::MAX;
    let mut best = usize::MAX;
    let mut scan = p | x;
    while scan != 0 {
        let u = scan.trailing_zeros() as usize;
        scan &= scan - 1;
        let missing = (p & !g.neighbors(u)).count_ones() as usize;
        if pivot == usize::MAX || missing < best {
            pivot = u;
            best = missing;
        }
    }
    let mut ext = p & !g.neighbors(pivot);
    while ext != 0 {
        let v = ext.trailing_zeros() as usize;
        ext &= ext - 1;
        let nv = g.neighbors(v);
        bron_kerbosch(g, r | (1 << v), p & nv, x & nv, out);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

/// Weighted fractional packing: maximise `sum w_i x_i` over `x >= 0` with
/// `sum_{i in C} x_i <= 1` for every maximal clique `C`.
pub fn fractional_packing<R: Real>(g: &Graph, w: &WeightVector<R>) -> Result<(R, Vec<R>)> {
    if w.len() != g.vertex_count() {
        return Err(Error::Parameter(format!(
            "weight vector has {} entries for a {}-vertex graph",
            w.len(),
            g.vertex_count()
        )));
    }
    let n = g.vertex_count();
    let cliques = maximal_cliques(g);
    let constraints: Vec<(Vec<R>, R)> = cliques
        .iter()
        .map(|clique| {
            let mut row = vec![R::zero(); n];
            for &v in clique {
                row[v] = R::one();
            }
            (row, R::one())
        })
        .collect();
    let sol = solve_lp(w.as_slice(), &constraints, true)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Numerical(format!(
            "packing program ended {:?}; it is always feasible and bounded",
            sol.status
        )));
    }
    let mut point = sol.point;
    for (i, xi) in point.iter_mut().enumerate() {
        if *xi < -R::real(1e-9) || *xi > R::one() + R::real(1e-9) {
            return Err(Error::Numerical(format!(
                "packing point coordinate {i} = {xi} escapes [0, 1]"
            )));
        }
        *xi = xi.max(R::zero()).min(R::one());
    }
    Ok((sol.value, point))
}

/// The full sandwich `alpha <= theta <= alpha*` with structural flags and
/// optimiser witnesses.
#[derive(Debug, Clone)]
pub struct BoundsReport<R> {
    /// Classical bound: weighted independence number.
    pub alpha: R,
    /// Quantum bound: weighted Lovász number.
    pub theta: R,
    /// Exclusivity-principle bound: weighted fractional packing.
    pub alpha_star: R,
    /// Unit-weight aliases: the maxima of the plain probability sum `S`
    /// under each theory. Equal to the three bounds above.
    pub s_max_classical: R,
    pub s_max_quantum: R,
    pub s_max_exclusivity: R,
    pub vertex_transitive: bool,
    pub self_complementary: bool,
    /// Lexicographically smallest optimal independent set.
    pub independent_set: Vec<usize>,
    /// Optimal SDP solution (matrix, gap, iterations).
    pub theta_solution: ThetaSolution<R>,
    /// Optimal packing LP point.
    pub packing_point: Vec<R>,
}

/// Sandwich slack: above the SDP gap, below the acceptance tolerances.
pub const SANDWICH_SLACK: f64 = 1e-6;

/// Computes all three bounds plus structural flags, enforcing the sandwich.
pub fn bounds_report<R: Real>(g: &Graph, w: &WeightVector<R>, tol: R) -> Result<BoundsReport<R>> {
    let (alpha, independent_set) = independence_number(g, w)?;
    let theta_solution = solve_theta_sdp(g, w, tol)?;
    let theta = theta_solution.value;
    let (alpha_star, packing_point) = fractional_packing(g, w)?;

    let slack = R::real(SANDWICH_SLACK);
    if alpha > theta + slack || theta > alpha_star + slack {
        return Err(Error::Numerical(format!(
            "sandwich violated: alpha {:e}, theta {:e}, alpha* {:e}",
            alpha.to_f64_lossy(),
            theta.to_f64_lossy(),
            alpha_star.to_f64_lossy()
        )));
    }

    let vertex_transitive = g.is_vertex_transitive()?;
    let self_complementary = g.is_self_complementary().is_some();

    Ok(BoundsReport {
        alpha,
        theta,
        alpha_star,
        s_max_classical: alpha,
        s_max_quantum: theta,
        s_max_exclusivity: alpha_star,
        vertex_transitive,
        self_complementary,
        independent_set,
        theta_solution,
        packing_point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FamilySpec;
    use approx::assert_abs_diff_eq;

    /// Oracle: maximum-weight independent set by scanning all 2^n subsets.
    fn brute_force_mis(g: &Graph, w: &[f64]) -> f64 {
        let n = g.vertex_count();
        let mut best = 0.0f64;
        for mask in 0u64..(1 << n) {
            let mut ok = true;
            'outer: for u in 0..n {
                if mask & (1 << u) == 0 {
                    continue;
                }
                for v in (u + 1)..n {
                    if mask & (1 << v) != 0 && g.has_edge(u, v) {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            if ok {
                let weight: f64 = (0..n).filter(|&u| mask & (1 << u) != 0).map(|u| w[u]).sum();
                best = best.max(weight);
            }
        }
        best
    }

    #[test]
    fn pentagon_independence() {
        let c5 = FamilySpec::cycle(5).generate().unwrap();
        let w = WeightVector::<f64>::unit(5);
        let (value, set) = independence_number(&c5, &w).unwrap();
        assert_eq!(value, 2.0);
        assert_eq!(set, vec![0, 2]);
        assert_eq!(brute_force_mis(&c5, w.as_slice()), 2.0);
    }

    #[test]
    fn complete_independence_is_one() {
        for n in 1..=6 {
            let g = Graph::complete(n).unwrap();
            let (value, set) = independence_number(&g, &WeightVector::<f64>::unit(n)).unwrap();
            assert_eq!(value, 1.0);
            assert_eq!(set, vec![0]);
        }
    }

    #[test]
    fn weighted_pentagon_tie_break() {
        let c5 = FamilySpec::cycle(5).generate().unwrap();
        let w = WeightVector::new(vec![2.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        let (value, set) = independence_number(&c5, &w).unwrap();
        assert_eq!(value, 3.0);
        assert_eq!(set, vec![0, 2]);
        assert_eq!(brute_force_mis(&c5, w.as_slice()), 3.0);
    }

    #[test]
    fn branch_and_bound_matches_brute_force() {
        // deterministic pseudo-random small graphs and weights
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..60 {
            let n = 3 + (next() % 8) as usize;
            let mut g = Graph::empty(n).unwrap();
            for u in 0..n {
                for v in (u + 1)..n {
                    if next() % 3 == 0 {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let w: Vec<f64> = (0..n).map(|_| (next() % 100) as f64 / 25.0).collect();
            let wv = WeightVector::new(w.clone()).unwrap();
            let (value, set) = independence_number(&g, &wv).unwrap();
            // returned set is independent and achieves the claimed value
            for (i, &u) in set.iter().enumerate() {
                for &v in &set[i + 1..] {
                    assert!(!g.has_edge(u, v));
                }
            }
            let set_weight: f64 = set.iter().map(|&u| w[u]).sum();
            assert_abs_diff_eq!(set_weight, value, epsilon = 1e-12);
            assert_abs_diff_eq!(value, brute_force_mis(&g, &w), epsilon = 1e-12);
        }
    }

    #[test]
    fn chsh_circulant_independence_is_three() {
        let g = FamilySpec::circulant(8, &[1, 4]).generate().unwrap();
        let w = WeightVector::<f64>::unit(8);
        let (value, set) = independence_number(&g, &w).unwrap();
        assert_eq!(value, 3.0);
        assert_eq!(brute_force_mis(&g, w.as_slice()), 3.0);
        assert_eq!(set.len(), 3);
    }

    #[test]
    fn or_product_pentagon_independence_is_four() {
        let c5 = FamilySpec::cycle(5).generate().unwrap();
        let p = c5.or_product(&c5).unwrap();
        let (value, _) = independence_number(&p, &WeightVector::<f64>::unit(25)).unwrap();
        assert_eq!(value, 4.0);
    }

    #[test]
    fn cliques_of_complete_graph() {
        let k4 = Graph::complete(4).unwrap();
        let cliques = maximal_cliques(&k4);
        assert_eq!(cliques.as_slice(), &[vec![0, 1, 2, 3]]);
    }

    #[test]
    fn cliques_of_pentagon_are_edges() {
        let c5 = FamilySpec::cycle(5).generate().unwrap();
        let cliques = maximal_cliques(&c5);
        assert_eq!(
            cliques.as_slice(),
            &[vec![0, 1], vec![0, 4], vec![1, 2], vec![2, 3], vec![3, 4]]
        );
        // the complement is again a pentagon: five 2-cliques
        let cc = maximal_cliques(&c5.complement());
        assert_eq!(cc.len(), 5);
        assert!(cc.iter().all(|c| c.len() == 2));
    }

    #[test]
    fn clique_invariants_on_mixed_graph() {
        // triangle 0-1-2, pendant 3 on 2, isolated 4
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let cliques = maximal_cliques(&g);
        assert_eq!(cliques.as_slice(), &[vec![0, 1, 2], vec![2, 3], vec![4]]);
        // every clique is pairwise adjacent, none contains another, cover holds
        let mut covered = [false; 5];
        for c in cliques.iter() {
            for (i, &u) in c.iter().enumerate() {
                covered[u] = true;
                for &v in &c[i + 1..] {
                    assert!(g.has_edge(u, v));
                }
            }
        }
        assert!(covered.iter().all(|&b| b));
        for a in cliques.iter() {
            for b in cliques.iter() {
                if a != b {
                    assert!(!a.iter().all(|u| b.contains(u)));
                }
            }
        }
    }

    /// Oracle: all maximal cliques by filtering every vertex subset.
    fn brute_force_maximal_cliques(g: &Graph) -> Vec<Vec<usize>> {
        let n = g.vertex_count();
        let is_clique = |mask: u64| -> bool {
            let mut rest = mask;
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if mask & !(1 << u) & !g.neighbors(u) != 0 {
                    return false;
                }
            }
            true
        };
        let mut cliques: Vec<u64> = (1u64..(1 << n)).filter(|&m| is_clique(m)).collect();
        cliques.retain(|&m| {
            (0..n).all(|v| m & (1 << v) != 0 || !is_clique(m | (1 << v)))
        });
        let mut out: Vec<Vec<usize>> = cliques
            .into_iter()
            .map(|mut m| {
                let mut c = Vec::new();
                while m != 0 {
                    c.push(m.trailing_zeros() as usize);
                    m &= m - 1;
                }
                c
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn bron_kerbosch_matches_subset_enumeration() {
        let mut state = 0xa076_1d64_78bd_642fu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..40 {
            let n = 2 + (next() % 9) as usize;
            let mut g = Graph::empty(n).unwrap();
            for u in 0..n {
                for v in (u + 1)..n {
                    if next() % 2 == 0 {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            assert_eq!(
                maximal_cliques(&g).as_slice(),
                brute_force_maximal_cliques(&g),
                "graph {g:?}"
            );
        }
    }

    #[test]
    fn pentagon_packing() {
        let c5 = FamilySpec::cycle(5).generate().unwrap();
        let (value, point) = fractional_packing(&c5, &WeightVector::<f64>::unit(5)).unwrap();
        assert_abs_diff_eq!(value, 2.5, epsilon = 1e-9);
        // the half point is feasible; the LP found something at least as good
        for (u, v) in c5.edges() {
            assert!(point[u] + point[v] <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn complete_packing_is_one() {
        for n in 2..=5 {
            let g = Graph::complete(n).unwrap();
            let (value, _) = fractional_packing(&g, &WeightVector::<f64>::unit(n)).unwrap();
            assert_abs_diff_eq!(value, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn square_packing_is_two() {
        let c4 = FamilySpec::cycle(4).generate().unwrap();
        let (value, point) = fractional_packing(&c4, &WeightVector::<f64>::unit(4)).unwrap();
        assert_abs_diff_eq!(value, 2.0, epsilon = 1e-9);
        for (u, v) in c4.edges() {
            assert!(point[u] + point[v] <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn empty_graph_report_saturates() {
        let g = Graph::empty(3).unwrap();
        let report = bounds_report(&g, &WeightVector::<f64>::unit(3), 1e-8).unwrap();
        assert_eq!(report.alpha, 3.0);
        assert_abs_diff_eq!(report.theta, 3.0, epsilon = 1e-6);
        assert_abs_diff_eq!(report.alpha_star, 3.0, epsilon = 1e-9);
    }

    #[test]
    fn pentagon_report() {
        let c5 = FamilySpec::cycle(5).generate().unwrap();
        let report = bounds_report(&c5, &WeightVector::<f64>::unit(5), 1e-8).unwrap();
        assert_eq!(report.alpha, 2.0);
        assert_abs_diff_eq!(report.theta, 5f64.sqrt(), epsilon = 1e-6);
        assert_abs_diff_eq!(report.alpha_star, 2.5, epsilon = 1e-9);
        assert!(report.vertex_transitive);
        assert!(report.self_complementary);
        assert_eq!(report.s_max_quantum, report.theta);
    }

    #[test]
    fn chsh_report() {
        let g = FamilySpec::circulant(8, &[1, 4]).generate().unwrap();
        let report = bounds_report(&g, &WeightVector::<f64>::unit(8), 1e-8).unwrap();
        assert_eq!(report.alpha, 3.0);
        assert_abs_diff_eq!(report.alpha_star, 4.0, epsilon = 1e-9);
        assert!(report.vertex_transitive);
    }

    #[test]
    fn weight_validation() {
        assert!(WeightVector::new(vec![1.0, -0.5]).is_err());
        assert!(WeightVector::new(vec![f64::NAN]).is_err());
        let c5 = FamilySpec::cycle(5).generate().unwrap();
        let short = WeightVector::new(vec![1.0; 3]).unwrap();
        assert!(independence_number(&c5, &short).is_err());
        assert!(fractional_packing(&c5, &short).is_err());
    }
}
