//! Air and ground layers under a GPS-spoofing attack: connectivity dips
//! while two agents report false positions, then the planner restores it.
//! Prints the per-step trace and the resilience report.

use std::path::PathBuf;

use rescon::scenario::parse_scenario;
use rescon::simulator::{run_scenario, trace_resilience};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "scenarios",
        "two_layer_spoof.toml",
    ]
    .iter()
    .collect();
    let cfg = parse_scenario(&path).map_err(|e| e.messages().join("\n"))?;
    let trace = run_scenario(&cfg)?;
    for s in &trace {
        let events: Vec<&str> = s.active_events.iter().map(|e| e.kind.as_str()).collect();
        println!(
            "step {:2}: realized lambda2 {:7.4}  planned {:7.4}  {}",
            s.step,
            s.lambda2_realized,
            s.lambda2_planned,
            events.join(",")
        );
    }
    let onset = cfg.onset().expect("scenario has an event");
    let r = trace_resilience(&trace, cfg.baseline_policy, onset, cfg.recovery_fraction)?;
    println!(
        "baseline {:.4}, max degradation {:.4}, recovery level {:.4} reached at step {} (recovered: {}), total loss {:.4}",
        r.baseline, r.max_degradation, r.recovery_level, r.recovery_step, r.recovered, r.total_loss
    );
    Ok(())
}
