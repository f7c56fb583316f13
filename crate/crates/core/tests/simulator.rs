use std::path::PathBuf;

use proptest::prelude::*;
use rescon::adversary::{RemovalBudget, SpoofSpec};
use rescon::controller::ControlOptions;
use rescon::graph::{Position, WeightProfile};
use rescon::scenario::parse_scenario;
use rescon::simulator::*;

fn scenario(name: &str) -> ScenarioConfig {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "scenarios", name]
        .iter()
        .collect();
    parse_scenario(&path).unwrap()
}

fn line_config(n: usize, spacing: f64, steps: usize) -> ScenarioConfig {
    ScenarioConfig {
        dimension: 2,
        agents: (0..n)
            .map(|k| Agent {
                id: format!("a{k}"),
                layer: "uav".into(),
                position: Position::new(vec![k as f64 * spacing, 0.0]),
            })
            .collect(),
        link: LinkModelConfig::Uniform(WeightProfile::smooth(100.0)),
        opts: ControlOptions {
            anticipated_budget: RemovalBudget(1),
            motion_bound: 30.0,
            min_separation: 10.0,
            step_size: 30.0,
            outer_iters: 30,
            ..Default::default()
        },
        steps,
        events: vec![],
        rng_seed: 0,
        baseline_policy: BaselinePolicy::PreEvent,
        recovery_fraction: metrics::DEFAULT_RECOVERY_FRACTION,
        budget_schedule: vec![],
        metrics_onset: None,
    }
}

#[test]
fn anticipated_jamming_is_absorbed() {
    let cfg = scenario("five_uav.toml");
    let trace = run_scenario(&cfg).unwrap();
    let secured = trace
        .iter()
        .position(|s| s.lambda2_planned > 0.0)
        .expect("planner reaches a positive worst case");
    for s in &trace[secured..] {
        assert!(
            s.lambda2_realized > 0.0,
            "step {}: {}",
            s.step,
            s.lambda2_realized
        );
        assert!(s.lambda2_realized >= s.lambda2_worst_anticipated - 1e-12);
    }
    let jammed: Vec<_> = trace
        .iter()
        .filter(|s| !s.jammed_links.is_empty())
        .map(|s| s.step)
        .collect();
    assert_eq!(jammed, vec![1, 2]);
    assert!(trace[1].active_events.iter().all(|e| e.anticipated));
}

#[test]
fn over_budget_jam_is_flagged_unanticipated() {
    let mut cfg = line_config(4, 60.0, 3);
    cfg.events.push(AttackEvent::Jam {
        budget: RemovalBudget(2),
        start: 1,
        end: 2,
        realization: JamRealization::WorstCase,
    });
    let trace = run_scenario(&cfg).unwrap();
    assert_eq!(trace[1].jammed_links.len(), 2);
    assert!(!trace[1].active_events[0].anticipated);
    assert!(trace[2].active_events.is_empty());
}

#[test]
fn spoofed_reports_are_offset_only_inside_the_window() {
    let mut cfg = line_config(4, 60.0, 6);
    let offset = Position::new(vec![0.0, 25.0]);
    cfg.events.push(AttackEvent::Spoof(
        SpoofSpec::new(vec![2], offset.clone(), 2, 2).unwrap(),
    ));
    let trace = run_scenario(&cfg).unwrap();
    let start = cfg.initial_positions();
    for s in &trace {
        let before = if s.step == 0 {
            &start
        } else {
            &trace[s.step - 1].true_positions
        };
        for (k, (r, t)) in s.reported_positions.iter().zip(before).enumerate() {
            let expect = if k == 2 && (2..4).contains(&s.step) {
                t + &offset
            } else {
                t.clone()
            };
            assert_eq!(r, &expect, "step {} agent {k}", s.step);
        }
    }
}

#[test]
fn true_motion_respects_the_motion_bound() {
    let mut cfg = line_config(4, 60.0, 5);
    cfg.events.push(AttackEvent::Spoof(
        SpoofSpec::new(vec![0, 3], Position::new(vec![40.0, -40.0]), 1, 3).unwrap(),
    ));
    let trace = run_scenario(&cfg).unwrap();
    let mut prev = cfg.initial_positions();
    for s in &trace {
        for (a, b) in prev.iter().zip(&s.true_positions) {
            assert!(a.distance(b) <= cfg.opts.motion_bound + 1e-9);
        }
        prev = s.true_positions.clone();
    }
}

#[test]
fn replay_is_bit_identical() {
    let cfg = scenario("five_uav.toml");
    let a = rescon::scenario::io::to_exact_json(&run_scenario(&cfg).unwrap());
    let b = rescon::scenario::io::to_exact_json(&run_scenario(&cfg).unwrap());
    assert_eq!(a, b);
}

#[test]
fn invalid_config_reports_every_problem() {
    let mut cfg = line_config(3, 50.0, 0);
    cfg.agents[1].id = "a0".into();
    cfg.recovery_fraction = 1.5;
    let Err(SimError::InvalidConfig(errs)) = run_scenario(&cfg) else {
        panic!("expected a validation error");
    };
    assert!(errs.len() >= 3, "{errs:?}");
}

#[test]
fn hand_computed_metrics() {
    let p = [4.0, 4.0, 1.0, 2.0, 3.0, 4.0, 4.0];
    let r = compute_resilience_metrics(&p, BaselinePolicy::PreEvent, 2, 0.9).unwrap();
    assert_eq!(r.baseline, 4.0);
    assert_eq!(r.max_degradation, 3.0);
    assert_eq!(r.recovery_step, 5);
    assert!(r.recovered);
    assert_eq!(r.total_loss, 6.0);
}

#[test]
fn constant_trace_has_no_loss() {
    let r = compute_resilience_metrics(&[2.5; 8], BaselinePolicy::PreEvent, 3, 0.9).unwrap();
    assert_eq!(
        (r.max_degradation, r.total_loss, r.recovery_step),
        (0.0, 0.0, 3)
    );
    assert!(r.recovered);
}

#[test]
fn unrecovered_trace_sums_to_the_end() {
    let r = compute_resilience_metrics(
        &[4.0, 4.0, 1.0, 1.0, 2.0],
        BaselinePolicy::Fixed(4.0),
        2,
        0.9,
    )
    .unwrap();
    assert!(!r.recovered);
    assert_eq!(r.recovery_step, 4);
    assert_eq!(r.total_loss, 3.0 + 3.0 + 2.0);
}

proptest! {
    #[test]
    fn loss_ignores_the_trace_after_recovery(
        head in prop::collection::vec(0.0f64..10.0, 3..12),
        tail in prop::collection::vec(0.0f64..10.0, 0..8),
        onset_frac in 0.0f64..1.0,
    ) {
        let onset = 1 + ((head.len() - 1) as f64 * onset_frac) as usize % (head.len() - 1);
        let base = compute_resilience_metrics(&head, BaselinePolicy::Fixed(5.0), onset, 0.9).unwrap();
        prop_assume!(base.recovered);
        let mut longer = head[..=base.recovery_step].to_vec();
        longer.extend(&tail);
        let r = compute_resilience_metrics(&longer, BaselinePolicy::Fixed(5.0), onset, 0.9).unwrap();
        prop_assert_eq!(r.total_loss, base.total_loss);
        prop_assert_eq!(r.recovery_step, base.recovery_step);
        prop_assert!(r.max_degradation >= 0.0 && r.total_loss >= 0.0);
    }
}
