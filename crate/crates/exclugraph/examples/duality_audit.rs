//! Stress harness beyond the test suite: solver brackets at the dimension
//! cap under mixed densities and weight scales, a known hard degenerate
//! instance at several tolerances, and witness extraction on random
//! supra-quantum points. Prints only failures plus summary lines.

use exclugraph::bounds::WeightVector;
use exclugraph::graph::{parse_graph6, Graph};
use exclugraph::quantum::{membership, Classification, Distribution};
use exclugraph::sdp::solve_theta_sdp;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    // the formerly stalled dense 21-vertex instance, at several tolerances
    let hard = parse_graph6("TnyIVet{al{cFQwuU^pQ|A`VOV?w{Vtmzs`M").unwrap();
    for tol in [1e-8f64, 1e-9, 1e-10, 1e-11] {
        match solve_theta_sdp(&hard, &WeightVector::unit(21), tol) {
            Ok(s) => println!(
                "hard@{tol:.0e}: value={:.12} dual={:.12} gap={:.2e} iters={}",
                s.value, s.dual_value, s.gap, s.iterations
            ),
            Err(e) => println!("hard@{tol:.0e}: {e}"),
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(777);
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    let mut count = 0;
    for trial in 0..120 {
        let n = rng.gen_range(20..=40);
        let density = [0.1, 0.3, 0.5, 0.8][trial % 4];
        let mut g = Graph::empty(n).unwrap();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen::<f64>() < density {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        let w = match trial % 3 {
            0 => WeightVector::unit(n),
            1 => WeightVector::new((0..n).map(|_| rng.gen::<f64>() * 5.0).collect()).unwrap(),
            _ => WeightVector::new(
                (0..n).map(|_| 10f64.powf(rng.gen::<f64>() * 4.0 - 2.0)).collect(),
            )
            .unwrap(),
        };
        match solve_theta_sdp(&g, &w, 1e-8) {
            Ok(sol) => {
                worst = worst.min(sol.dual_value - sol.value);
                count += 1;
            }
            Err(e) => {
                failures += 1;
                println!("FAIL n={n} density={density}: {e}");
            }
        }
    }
    println!("large solves: {count} ok, {failures} failed, worst margin {worst:e}");

    let mut rng2 = ChaCha8Rng::seed_from_u64(31337);
    let mut outside = 0;
    let mut witness_fail = 0;
    for _ in 0..150 {
        let n = rng2.gen_range(4..=12);
        let mut g = Graph::empty(n).unwrap();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng2.gen::<f64>() < 0.45 {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        let p = Distribution::new((0..n).map(|_| rng2.gen::<f64>()).collect()).unwrap();
        match membership(&g, &p, 1e-8) {
            Ok(v) => {
                if v.classification == Classification::Outside {
                    outside += 1;
                }
            }
            Err(e) => {
                witness_fail += 1;
                println!("WITNESS FAIL n={n}: {e}");
            }
        }
    }
    println!("random-graph membership: {outside} outside witnessed, {witness_fail} failures");
}
