//! Which links a jammer should cut: exact enumeration against the greedy
//! Fiedler-score heuristic.

use rescon::adversary::*;
use rescon::graph::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A ring of six with two chords.
    let g = WeightedGraph::unweighted(
        6,
        &[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 0),
            (0, 3),
            (1, 4),
        ],
    )?;
    println!("intact lambda2 = {:.4}", lambda2(&g)?);
    for m in 1..=3 {
        let exact = worst_case_removal(&g, RemovalBudget(m), SearchMode::Exhaustive)?;
        let greedy = worst_case_removal(&g, RemovalBudget(m), SearchMode::Greedy)?;
        let pairs = |r: &WorstCaseResult| -> Vec<(usize, usize)> {
            r.removal
                .iter()
                .map(|&k| (g.edges()[k].i, g.edges()[k].j))
                .collect()
        };
        println!(
            "m = {m}: exhaustive cuts {:?} -> {:.4}; greedy cuts {:?} -> {:.4}",
            pairs(&exact),
            exact.lambda2_after,
            pairs(&greedy),
            greedy.lambda2_after
        );
    }
    Ok(())
}
