//! Named graph families used throughout the correlation-experiment corpus.

use super::{Graph, MAX_VERTICES};
use crate::error::{Error, Result};

/// Which family to generate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyKind {
    /// Cycle `C_n`, `n >= 3`.
    Cycle,
    /// Complement of a cycle, `n >= 4`.
    Antihole,
    /// Circulant on `Z_n` with the given connection distances.
    Circulant,
    /// Complete graph `K_n`.
    Complete,
    /// Edgeless graph.
    Empty,
    /// Paley graph on a prime `q = 1 (mod 4)`.
    Paley,
    /// The Petersen graph (10 vertices).
    Petersen,
}

/// A fully-parameterised family member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub n: usize,
    /// Connection distances; only meaningful for circulants.
    pub distances: Vec<usize>,
}

impl FamilySpec {
    pub fn cycle(n: usize) -> Self {
        FamilySpec { kind: FamilyKind::Cycle, n, distances: vec![] }
    }

    pub fn antihole(n: usize) -> Self {
        FamilySpec { kind: FamilyKind::Antihole, n, distances: vec![] }
    }

    pub fn circulant(n: usize, distances: &[usize]) -> Self {
        FamilySpec { kind: FamilyKind::Circulant, n, distances: distances.to_vec() }
    }

    pub fn complete(n: usize) -> Self {
        FamilySpec { kind: FamilyKind::Complete, n, distances: vec![] }
    }

    pub fn empty(n: usize) -> Self {
        FamilySpec { kind: FamilyKind::Empty, n, distances: vec![] }
    }

    pub fn paley(q: usize) -> Self {
        FamilySpec { kind: FamilyKind::Paley, n: q, distances: vec![] }
    }

    pub fn petersen() -> Self {
        FamilySpec { kind: FamilyKind::Petersen, n: 10, distances: vec![] }
    }

    /// Parses the CLI syntax: `cycle:5`, `antihole:7`, `circulant:8:1,4`,
    /// `complete:4`, `empty:3`, `paley:13`, `petersen`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut parts = text.split(':');
        let kind = parts.next().unwrap_or("");
        let param = |p: Option<&str>| -> Result<usize> {
            p.ok_or_else(|| Error::Parameter(format!("family '{kind}' needs a size, e.g. {kind}:5")))?
                .parse::<usize>()
                .map_err(|_| Error::Parameter(format!("bad size in family spec '{text}'")))
        };
        let spec = match kind {
            "cycle" => FamilySpec::cycle(param(parts.next())?),
            "antihole" => FamilySpec::antihole(param(parts.next())?),
            "complete" => FamilySpec::complete(param(parts.next())?),
            "empty" => FamilySpec::empty(param(parts.next())?),
            "paley" => FamilySpec::paley(param(parts.next())?),
            "petersen" => FamilySpec::petersen(),
            "circulant" => {
                let n = param(parts.next())?;
                let dists = parts.next().ok_or_else(|| {
                    Error::Parameter("circulant needs distances, e.g. circulant:8:1,4".into())
                })?;
                let distances = dists
                    .split(',')
                    .map(|d| {
                        d.trim().parse::<usize>().map_err(|_| {
                            Error::Parameter(format!("bad circulant distance '{d}'"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                FamilySpec::circulant(n, &distances)
            }
            other => {
                return Err(Error::Parameter(format!(
                    "unknown family '{other}' (expected cycle, antihole, circulant, complete, empty, paley, petersen)"
                )))
            }
        };
        if parts.next().is_some() {
            return Err(Error::Parameter(format!("trailing parameters in family spec '{text}'")));
        }
        Ok(spec)
    }

    /// Builds the canonical member of the family.
    pub fn generate(&self) -> Result<Graph> {
        match self.kind {
            FamilyKind::Cycle => cycle(self.n),
            FamilyKind::Antihole => Ok(cycle_at_least(self.n, 4)?.complement()),
            FamilyKind::Circulant => circulant(self.n, &self.distances),
            FamilyKind::Complete => Graph::complete(self.n),
            FamilyKind::Empty => Graph::empty(self.n),
            FamilyKind::Paley => paley(self.n),
            FamilyKind::Petersen => petersen(),
        }
    }
}

fn cycle(n: usize) -> Result<Graph> {
    cycle_at_least(n, 3)
}

fn cycle_at_least(n: usize, min: usize) -> Result<Graph> {
    if n < min {
        return Err(Error::Parameter(format!("cycle-based family needs n >= {min}, got {n}")));
    }
    let mut g = Graph::empty(n)?;
    for u in 0..n {
        g.add_edge(u, (u + 1) % n)?;
    }
    Ok(g)
}

fn circulant(n: usize, distances: &[usize]) -> Result<Graph> {
    if n < 2 {
        return Err(Error::Parameter(format!("circulant needs n >= 2, got {n}")));
    }
    if distances.is_empty() {
        return Err(Error::Parameter("circulant needs at least one distance".into()));
    }
    let mut g = Graph::empty(n)?;
    for &d in distances {
        if d == 0 || d > n / 2 {
            return Err(Error::Parameter(format!(
                "circulant distance {d} outside 1..={} for n = {n}",
                n / 2
            )));
        }
        for u in 0..n {
            g.add_edge(u, (u + d) % n)?;
        }
    }
    Ok(g)
}

/// Quadratic-residue construction over the prime field `Z_q` only; prime
/// powers are not supported.
fn paley(q: usize) -> Result<Graph> {
    if q > MAX_VERTICES {
        return Err(Error::Capacity(format!("paley({q}) exceeds the {MAX_VERTICES}-vertex cap")));
    }
    if !is_prime(q) {
        return Err(Error::Parameter(format!(
            "paley requires a prime q = 1 (mod 4); {q} is not prime"
        )));
    }
    if q % 4 != 1 {
        return Err(Error::Parameter(format!(
            "paley requires q = 1 (mod 4); got {q} = {} (mod 4)",
            q % 4
        )));
    }
    let mut residues = vec![false; q];
    for x in 1..q {
        residues[x * x % q] = true;
    }
    let mut g = Graph::empty(q)?;
    for u in 0..q {
        for v in (u + 1)..q {
            if residues[(v - u) % q] {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Outer 5-cycle, inner pentagram, spokes between them.
fn petersen() -> Result<Graph> {
    let mut g = Graph::empty(10)?;
    for u in 0..5 {
        g.add_edge(u, (u + 1) % 5)?;
        g.add_edge(5 + u, 5 + (u + 2) % 5)?;
        g.add_edge(u, 5 + u)?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_edges() {
        let c5 = FamilySpec::cycle(5).generate().unwrap();
        assert_eq!(c5.edges(), vec![(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]);
        assert!(FamilySpec::cycle(2).generate().is_err());
    }

    #[test]
    fn complete_edge_count() {
        let k4 = FamilySpec::complete(4).generate().unwrap();
        assert_eq!(k4.edge_count(), 6);
    }

    #[test]
    fn chsh_circulant_is_cubic() {
        let g = FamilySpec::circulant(8, &[1, 4]).generate().unwrap();
        assert_eq!(g.vertex_count(), 8);
        // each vertex gains distances -1, +1 and the diameter 4
        for u in 0..8 {
            assert_eq!(g.degree(u), 3);
        }
    }

    #[test]
    fn circulant_rejects_bad_distance() {
        assert!(FamilySpec::circulant(8, &[0]).generate().is_err());
        assert!(FamilySpec::circulant(8, &[5]).generate().is_err());
    }

    #[test]
    fn paley_admissibility() {
        assert!(matches!(
            FamilySpec::paley(9).generate(),
            Err(Error::Parameter(msg)) if msg.contains("prime")
        ));
        assert!(FamilySpec::paley(7).generate().is_err()); // 7 = 3 (mod 4)
        let p13 = FamilySpec::paley(13).generate().unwrap();
        for u in 0..13 {
            assert_eq!(p13.degree(u), 6); // (q-1)/2 residues
        }
        // Paley graphs are self-complementary by the non-residue multiplier map.
        assert_eq!(p13.edge_count(), 13 * 12 / 4);
    }

    #[test]
    fn paley_5_is_pentagon() {
        let p5 = FamilySpec::paley(5).generate().unwrap();
        // residues mod 5 are {1, 4}: distance-1 circulant, i.e. C5
        let c5 = FamilySpec::cycle(5).generate().unwrap();
        assert_eq!(p5, c5);
    }

    #[test]
    fn petersen_shape() {
        let g = FamilySpec::petersen().generate().unwrap();
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.edge_count(), 15);
        for u in 0..10 {
            assert_eq!(g.degree(u), 3);
        }
        assert!(g.is_connected());
    }

    #[test]
    fn parse_round_trips() {
        assert_eq!(FamilySpec::parse("cycle:5").unwrap(), FamilySpec::cycle(5));
        assert_eq!(
            FamilySpec::parse("circulant:8:1,4").unwrap(),
            FamilySpec::circulant(8, &[1, 4])
        );
        assert_eq!(FamilySpec::parse("petersen").unwrap(), FamilySpec::petersen());
        assert!(FamilySpec::parse("moebius:8").is_err());
        assert!(FamilySpec::parse("cycle").is_err());
        assert!(FamilySpec::parse("cycle:x").is_err());
    }

    #[test]
    fn antihole_is_cycle_complement() {
        let a7 = FamilySpec::antihole(7).generate().unwrap();
        let c7 = FamilySpec::cycle(7).generate().unwrap();
        assert_eq!(a7, c7.complement());
        assert!(FamilySpec::antihole(3).generate().is_err());
    }
}
