//! A device deciding whether to trust a command from the cloud, when the
//! cloud may have been taken over. Receiver payoffs come from a scalar
//! plant; the equilibrium changes as the takeover probability grows.

use rescon::games::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let plant = PlantSpec {
        a: 1.0,
        b: 1.0,
        q: 1.0,
        r: 1.0,
        horizon: 1,
        attack_input: 1.0,
    };
    let u = physical_utilities(&plant)?;
    println!(
        "plant payoffs: trust attacker {}, trust defender {}, reject {}",
        u.trust_attacker, u.trust_defender, u.reject
    );
    // The defender finds m2 cheap; the attacker pays 0.3 to imitate it.
    let sender = PayoffTable {
        attacker: MessagePayoffs {
            m1: ActionPayoffs {
                trust: 1.0,
                reject: 0.0,
            },
            m2: ActionPayoffs {
                trust: 0.7,
                reject: -0.3,
            },
        },
        defender: MessagePayoffs {
            m1: ActionPayoffs {
                trust: 0.8,
                reject: -0.2,
            },
            m2: ActionPayoffs {
                trust: 1.0,
                reject: 0.0,
            },
        },
    };
    for prior in [0.0, 0.05, 0.1, 0.3, 0.6] {
        let params = SignalingParams {
            prior,
            sender,
            receiver: u.receiver_table(),
        };
        let o = signaling_equilibrium(&params)?;
        println!(
            "takeover prob {prior:4}: {:?}, send m1 {:.3?}, trust {:.3?}, beliefs {:.3?}, receiver {:.4}",
            o.class, o.send_m1, o.trust, o.beliefs, o.utilities.receiver
        );
    }
    Ok(())
}
