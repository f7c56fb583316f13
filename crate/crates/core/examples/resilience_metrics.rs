//! Resilience figures of a performance trace: how far it fell, when it came
//! back, and how much was lost in between.

use rescon::simulator::{compute_resilience_metrics, BaselinePolicy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trace = [4.0, 4.0, 1.0, 2.0, 3.0, 4.0, 4.0];
    let r = compute_resilience_metrics(&trace, BaselinePolicy::PreEvent, 2, 0.9)?;
    println!("trace {trace:?}, event at step 2");
    println!("baseline          {}", r.baseline);
    println!("max degradation   {}", r.max_degradation);
    println!("recovery level    {}", r.recovery_level);
    println!(
        "recovery step     {} (recovered: {})",
        r.recovery_step, r.recovered
    );
    println!("total loss        {}", r.total_loss);
    Ok(())
}
