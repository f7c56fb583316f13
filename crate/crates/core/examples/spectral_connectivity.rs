//! Algebraic connectivity of a small proximity network and the direction
//! each agent should move to raise it.

use rescon::graph::*;

fn main() -> Result<(), GraphError> {
    let positions: Vec<Position> = [[0.0, 0.0], [60.0, 0.0], [120.0, 10.0], [60.0, 70.0]]
        .iter()
        .map(|p| Position::new(p.to_vec()))
        .collect();
    let profile = WeightProfile::smooth(100.0);
    let g = build_proximity_graph(&positions, &profile)?;
    println!("{} agents, {} links", g.n(), g.edge_count());
    for e in g.edges() {
        println!("  link {}-{}  weight {:.4}", e.i, e.j, e.w);
    }

    let s = algebraic_connectivity(&g)?;
    println!("lambda2 = {:.6} (simple: {})", s.lambda2, s.is_simple);
    println!("Fiedler vector = {:.4?}", s.fiedler);

    let grad = connectivity_gradient(&positions, &profile, &s, &g)?;
    for (i, d) in grad.per_agent.iter().enumerate() {
        let c: Vec<String> = d.coords().iter().map(|v| format!("{v:.3e}")).collect();
        println!("  d lambda2 / d x_{i} = [{}] per meter", c.join(", "));
    }
    Ok(())
}
