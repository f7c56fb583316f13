//! Coupled cloud/device defense: the takeover game sets the probability
//! that the cloud is compromised, the trust game sets what control is worth.
//! Reads a parameter file (default: the bundled cloud scenario) and prints
//! the fixed-point iteration.

use std::path::PathBuf;

use rescon::games::gne_solve;
use rescon::scenario::parse_gne_params;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            [env!("CARGO_MANIFEST_DIR"), "scenarios", "gne_cloud.toml"]
                .iter()
                .collect()
        });
    let params = parse_gne_params(&path).map_err(|e| e.messages().join("\n"))?;
    let st = gne_solve(&params)?;
    for it in &st.trajectory {
        println!(
            "iter {:3}: p {:.6}  values ({:.3}, {:.3})  control fraction {:.6}  residual {:.2e}",
            it.iteration,
            it.prior,
            it.value_attacker,
            it.value_defender,
            it.control_fraction,
            it.residual
        );
    }
    println!(
        "converged: {}, p* = {:.6}, rates ({:.4}, {:.4}), trust game {:?}",
        st.converged,
        st.prior,
        st.flipit.alpha_attacker,
        st.flipit.alpha_defender,
        st.signaling.class
    );
    Ok(())
}
