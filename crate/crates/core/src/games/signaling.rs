//! Binary trust game: a sender of private type (attacker or defender) sends
//! one of two messages; the receiver trusts or rejects.
//!
//! Equilibria are perfect Bayesian: beliefs follow Bayes' rule on messages
//! that are sent, stay at the prior on messages that are not, and the
//! receiver trusts when indifferent. Pure sender profiles are tried first,
//! then every support combination. Some games have no equilibrium with
//! prior off-path beliefs; only for those is an unsent message allowed the
//! belief nearest the prior (extreme or receiver-indifferent) that works.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance of every equilibrium condition.
pub const PBE_TOL: f64 = 1e-9;
const ON_PATH_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SignalingError {
    #[error("invalid trust-game parameters: {0}")]
    InvalidParams(String),

    #[error("no equilibrium found by support enumeration")]
    NoEquilibrium,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SenderType {
    Attacker,
    Defender,
}

impl SenderType {
    pub const ALL: [SenderType; 2] = [SenderType::Attacker, SenderType::Defender];

    fn index(self) -> usize {
        self as usize
    }
}

/// Payoff of each receiver action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ActionPayoffs {
    pub trust: f64,
    pub reject: f64,
}

impl ActionPayoffs {
    /// Expected payoff when trusting with probability `r`.
    pub fn mix(&self, r: f64) -> f64 {
        r * self.trust + (1.0 - r) * self.reject
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct MessagePayoffs {
    pub m1: ActionPayoffs,
    pub m2: ActionPayoffs,
}

impl MessagePayoffs {
    pub fn get(&self, m: usize) -> &ActionPayoffs {
        if m == 0 {
            &self.m1
        } else {
            &self.m2
        }
    }
}

/// Payoffs indexed by sender type, then message, then receiver action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct PayoffTable {
    pub attacker: MessagePayoffs,
    pub defender: MessagePayoffs,
}

impl PayoffTable {
    pub fn get(&self, t: SenderType, m: usize) -> &ActionPayoffs {
        match t {
            SenderType::Attacker => self.attacker.get(m),
            SenderType::Defender => self.defender.get(m),
        }
    }

    fn values(&self) -> [f64; 8] {
        let [a, d] = [self.attacker, self.defender];
        [
            a.m1.trust,
            a.m1.reject,
            a.m2.trust,
            a.m2.reject,
            d.m1.trust,
            d.m1.reject,
            d.m2.trust,
            d.m2.reject,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalingParams {
    /// Probability that the sender is the attacker.
    pub prior: f64,
    pub sender: PayoffTable,
    pub receiver: PayoffTable,
}

impl SignalingParams {
    pub fn validate(&self) -> Result<(), SignalingError> {
        if !(0.0..=1.0).contains(&self.prior) {
            return Err(SignalingError::InvalidParams(format!(
                "prior must lie in [0, 1], got {}",
                self.prior
            )));
        }
        if self
            .sender
            .values()
            .iter()
            .chain(&self.receiver.values())
            .any(|v| !v.is_finite())
        {
            return Err(SignalingError::InvalidParams("non-finite payoff".into()));
        }
        Ok(())
    }

    fn type_weight(&self, t: SenderType) -> f64 {
        match t {
            SenderType::Attacker => self.prior,
            SenderType::Defender => 1.0 - self.prior,
        }
    }

    /// Receiver's expected gain from trusting over rejecting at message `m`
    /// under belief `mu` that the sender is the attacker.
    pub fn trust_advantage(&self, m: usize, mu: f64) -> f64 {
        let a = self.receiver.get(SenderType::Attacker, m);
        let d = self.receiver.get(SenderType::Defender, m);
        mu * (a.trust - a.reject) + (1.0 - mu) * (d.trust - d.reject)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumClass {
    Pooling,
    Hybrid,
    Separating,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectedUtilities {
    pub attacker: f64,
    pub defender: f64,
    pub receiver: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalingOutcome {
    /// Probability that each type (attacker, defender) sends `m1`.
    pub send_m1: [f64; 2],
    /// Probability that the receiver trusts after `m1` and after `m2`.
    pub trust: [f64; 2],
    /// Belief that the sender is the attacker after `m1` and after `m2`.
    pub beliefs: [f64; 2],
    pub utilities: ExpectedUtilities,
    pub class: EquilibriumClass,
}

fn message_prob(send_m1: f64, m: usize) -> f64 {
    if m == 0 {
        send_m1
    } else {
        1.0 - send_m1
    }
}

/// Bayes beliefs on sent messages, prior on unsent ones.
pub fn consistent_beliefs(params: &SignalingParams, send_m1: [f64; 2]) -> [f64; 2] {
    let p = params.prior;
    [0, 1].map(|m| {
        let from_a = p * message_prob(send_m1[0], m);
        let total = from_a + (1.0 - p) * message_prob(send_m1[1], m);
        if total > ON_PATH_TOL {
            from_a / total
        } else {
            p
        }
    })
}

/// Payoff of type `t` for sending `m` against receiver trust probabilities.
pub fn sender_message_payoff(
    params: &SignalingParams,
    t: SenderType,
    m: usize,
    trust: [f64; 2],
) -> f64 {
    params.sender.get(t, m).mix(trust[m])
}

pub fn expected_utilities(
    params: &SignalingParams,
    send_m1: [f64; 2],
    trust: [f64; 2],
) -> ExpectedUtilities {
    let sender = |t: SenderType| {
        (0..2)
            .map(|m| {
                message_prob(send_m1[t.index()], m) * sender_message_payoff(params, t, m, trust)
            })
            .sum::<f64>()
    };
    let receiver = SenderType::ALL
        .iter()
        .map(|&t| {
            params.type_weight(t)
                * (0..2)
                    .map(|m| {
                        message_prob(send_m1[t.index()], m)
                            * params.receiver.get(t, m).mix(trust[m])
                    })
                    .sum::<f64>()
        })
        .sum();
    ExpectedUtilities {
        attacker: sender(SenderType::Attacker),
        defender: sender(SenderType::Defender),
        receiver,
    }
}

fn classify(send_m1: [f64; 2]) -> EquilibriumClass {
    let pure = |x: f64| x == 0.0 || x == 1.0;
    if !(pure(send_m1[0]) && pure(send_m1[1])) {
        EquilibriumClass::Hybrid
    } else if send_m1[0] == send_m1[1] {
        EquilibriumClass::Pooling
    } else {
        EquilibriumClass::Separating
    }
}

fn build(params: &SignalingParams, send_m1: [f64; 2], trust: [f64; 2]) -> SignalingOutcome {
    build_with_beliefs(params, send_m1, trust, consistent_beliefs(params, send_m1))
}

fn build_with_beliefs(
    params: &SignalingParams,
    send_m1: [f64; 2],
    trust: [f64; 2],
    beliefs: [f64; 2],
) -> SignalingOutcome {
    SignalingOutcome {
        send_m1,
        trust,
        beliefs,
        utilities: expected_utilities(params, send_m1, trust),
        class: classify(send_m1),
    }
}

/// Checks every equilibrium condition at [`PBE_TOL`]; the error names the
/// first violated one.
pub fn verify_pbe(params: &SignalingParams, o: &SignalingOutcome) -> Result<(), String> {
    let probs = o.send_m1.iter().chain(&o.trust);
    if probs.clone().any(|x| !(0.0..=1.0).contains(x)) {
        return Err("strategy outside [0, 1]".into());
    }
    let p = params.prior;
    for m in 0..2 {
        let from_a = p * message_prob(o.send_m1[0], m);
        let total = from_a + (1.0 - p) * message_prob(o.send_m1[1], m);
        if total > ON_PATH_TOL && (o.beliefs[m] * total - from_a).abs() > PBE_TOL {
            return Err(format!("belief after m{} is not Bayes-consistent", m + 1));
        }
        if !(0.0..=1.0).contains(&o.beliefs[m]) {
            return Err(format!("belief after m{} outside [0, 1]", m + 1));
        }
        let adv = params.trust_advantage(m, o.beliefs[m]);
        if o.trust[m] > 0.0 && adv < -PBE_TOL {
            return Err(format!(
                "receiver trusts after m{} but rejecting pays more",
                m + 1
            ));
        }
        if o.trust[m] < 1.0 && adv > PBE_TOL {
            return Err(format!(
                "receiver rejects after m{} but trusting pays more",
                m + 1
            ));
        }
    }
    for t in SenderType::ALL {
        let u = [0, 1].map(|m| sender_message_payoff(params, t, m, o.trust));
        let best = u[0].max(u[1]);
        for m in 0..2 {
            if message_prob(o.send_m1[t.index()], m) > 0.0 && u[m] < best - PBE_TOL {
                return Err(format!("{t:?} sender gains by not sending m{}", m + 1));
            }
        }
    }
    Ok(())
}

/// One player's strategy component in a support profile.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Support {
    First,
    Second,
    Mixed,
}

impl Support {
    const ALL: [Support; 3] = [Support::First, Support::Second, Support::Mixed];
}

/// Trial values for mixing probabilities that no equation pins down.
const FREE_SAMPLES: [f64; 7] = [0.5, 0.25, 0.75, 0.1, 0.9, 0.01, 0.99];

fn in_unit(v: f64) -> bool {
    (-1e-12..=1.0 + 1e-12).contains(&v)
}

/// Candidate solutions of `rows` (each `[c0, c1, rhs]`) for the unknowns
/// flagged in `free`, others held at `x`. A one-dimensional solution set is
/// sampled across its feasible segment; unconstrained unknowns take
/// [`FREE_SAMPLES`].
fn solve_linear(rows: &[[f64; 3]], free: [bool; 2], x: [f64; 2]) -> Vec<[f64; 2]> {
    let reduced: Vec<[f64; 3]> = rows
        .iter()
        .map(|r| {
            let fixed: f64 = (0..2).filter(|&k| !free[k]).map(|k| r[k] * x[k]).sum();
            let c = [0, 1].map(|k| if free[k] { r[k] } else { 0.0 });
            [c[0], c[1], r[2] - fixed]
        })
        .filter(|r| r[0].abs() > 1e-14 || r[1].abs() > 1e-14)
        .collect();
    let mut out = Vec::new();
    let mut push = |v: [f64; 2]| {
        if v.iter().all(|&c| in_unit(c)) {
            // Snap round-off at the ends so pure strategies classify as pure.
            out.push(v.map(|c| {
                if c < 1e-12 {
                    0.0
                } else if c > 1.0 - 1e-12 {
                    1.0
                } else {
                    c
                }
            }));
        }
    };
    match (free, reduced.as_slice()) {
        ([false, false], _) => push(x),
        ([true, true], _) => {
            let pair = reduced.iter().enumerate().find_map(|(i, a)| {
                reduced[i + 1..].iter().find_map(|b| {
                    let det = a[0] * b[1] - a[1] * b[0];
                    (det.abs() > 1e-14).then(|| {
                        [
                            (a[2] * b[1] - a[1] * b[2]) / det,
                            (a[0] * b[2] - a[2] * b[0]) / det,
                        ]
                    })
                })
            });
            match (pair, reduced.first()) {
                (Some(v), _) => push(v),
                (None, Some(r)) => {
                    // Segment of c0 x0 + c1 x1 = rhs inside the unit square,
                    // parametrized by the unknown with the smaller coefficient.
                    let (dep, ind) = if r[1].abs() >= r[0].abs() {
                        (1, 0)
                    } else {
                        (0, 1)
                    };
                    let (a, c, rhs) = (r[ind], r[dep], r[2]);
                    // x_dep = (rhs - a t) / c must lie in [0, 1].
                    let (t0, t1) = (rhs / a, (rhs - c) / a);
                    let (mut lo, mut hi) = if a.abs() > 1e-14 {
                        (t0.min(t1), t0.max(t1))
                    } else {
                        (0.0, 1.0)
                    };
                    lo = lo.max(0.0);
                    hi = hi.min(1.0);
                    if lo <= hi {
                        for f in FREE_SAMPLES {
                            let t = lo + f * (hi - lo);
                            let mut v = [0.0; 2];
                            v[ind] = t;
                            v[dep] = (rhs - a * t) / c;
                            push(v);
                        }
                    }
                }
                (None, None) => {
                    for a in FREE_SAMPLES {
                        for b in FREE_SAMPLES {
                            push([a, b]);
                        }
                    }
                }
            }
        }
        _ => {
            let k = if free[0] { 0 } else { 1 };
            match reduced.first() {
                Some(r) => {
                    let mut v = x;
                    v[k] = r[2] / r[k];
                    push(v);
                }
                None => {
                    for s in FREE_SAMPLES {
                        let mut v = x;
                        v[k] = s;
                        push(v);
                    }
                }
            }
        }
    }
    out
}

/// Belief at which the receiver is indifferent after `m`, if any.
fn indifference_belief(params: &SignalingParams, m: usize) -> Option<f64> {
    let a = params.receiver.get(SenderType::Attacker, m);
    let d = params.receiver.get(SenderType::Defender, m);
    let (da, dd) = (a.trust - a.reject, d.trust - d.reject);
    ((dd - da).abs() >= 1e-14).then(|| dd / (dd - da))
}

/// Belief vectors to try: Bayes on sent messages; on an unsent message the
/// prior only, or with `free_off_path` also the extreme and indifference
/// beliefs, nearest the prior first.
fn belief_options(
    params: &SignalingParams,
    send_m1: [f64; 2],
    free_off_path: bool,
) -> Vec<[f64; 2]> {
    let base = consistent_beliefs(params, send_m1);
    let p = params.prior;
    let mut out = vec![base];
    if !free_off_path {
        return out;
    }
    for m in 0..2 {
        let reach = p * message_prob(send_m1[0], m) + (1.0 - p) * message_prob(send_m1[1], m);
        if reach > ON_PATH_TOL {
            continue;
        }
        let mut mus: Vec<f64> = [Some(0.0), Some(1.0), indifference_belief(params, m)]
            .into_iter()
            .flatten()
            .filter(|mu| (0.0..=1.0).contains(mu) && *mu != p)
            .collect();
        mus.sort_by(|a, b| (a - p).abs().total_cmp(&(b - p).abs()));
        for mu in mus {
            let mut b = base;
            b[m] = mu;
            out.push(b);
        }
    }
    out
}

/// Equilibrium with the given supports, if one exists.
fn solve_support(
    params: &SignalingParams,
    sender: [Support; 2],
    receiver: [Support; 2],
    free_off_path: bool,
) -> Option<SignalingOutcome> {
    let p = params.prior;
    let pure_prob = |s: Support| if s == Support::First { 1.0 } else { 0.0 };

    // Receiver mixing at m pins the belief there: the sender mix solves
    // p (1 - mu) P(m | A) - mu (1 - p) P(m | D) = 0.
    let send_free = sender.map(|s| s == Support::Mixed);
    let mut rows = Vec::new();
    for m in 0..2 {
        if receiver[m] != Support::Mixed {
            continue;
        }
        let mu = indifference_belief(params, m)?;
        let (ca, cd) = (p * (1.0 - mu), -mu * (1.0 - p));
        // P(m1 | t) = x_t, P(m2 | t) = 1 - x_t.
        rows.push(if m == 0 {
            [ca, cd, 0.0]
        } else {
            [-ca, -cd, -ca - cd]
        });
    }
    let send_options = solve_linear(&rows, send_free, sender.map(pure_prob));

    // A mixing sender type is indifferent between messages.
    let trust_free = receiver.map(|s| s == Support::Mixed);
    let mut rows = Vec::new();
    for t in SenderType::ALL {
        if sender[t.index()] != Support::Mixed {
            continue;
        }
        let (u1, u2) = (params.sender.get(t, 0), params.sender.get(t, 1));
        rows.push([
            u1.trust - u1.reject,
            -(u2.trust - u2.reject),
            u2.reject - u1.reject,
        ]);
    }
    let trust_options = solve_linear(&rows, trust_free, receiver.map(pure_prob));

    send_options.iter().find_map(|&send_m1| {
        belief_options(params, send_m1, free_off_path)
            .into_iter()
            .find_map(|beliefs| {
                trust_options.iter().find_map(|&trust| {
                    let o = build_with_beliefs(params, send_m1, trust, beliefs);
                    verify_pbe(params, &o).is_ok().then_some(o)
                })
            })
    })
}

fn pure_candidates(params: &SignalingParams) -> Vec<SignalingOutcome> {
    let mut out = Vec::new();
    for sa in [1.0, 0.0] {
        for sd in [1.0, 0.0] {
            let send_m1 = [sa, sd];
            let beliefs = consistent_beliefs(params, send_m1);
            let trust = [0, 1].map(|m| {
                if params.trust_advantage(m, beliefs[m]) >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            });
            let o = build(params, send_m1, trust);
            if verify_pbe(params, &o).is_ok() {
                out.push(o);
            }
        }
    }
    out
}

fn mixed_candidates(params: &SignalingParams, free_off_path: bool) -> Vec<SignalingOutcome> {
    let mut out = Vec::new();
    for s0 in Support::ALL {
        for s1 in Support::ALL {
            for r0 in Support::ALL {
                for r1 in Support::ALL {
                    if let Some(o) = solve_support(params, [s0, s1], [r0, r1], free_off_path) {
                        out.push(o);
                    }
                }
            }
        }
    }
    out
}

/// Separating over hybrid over pooling, then higher receiver utility, then
/// the lexicographically smallest strategy vector.
fn select(mut cands: Vec<SignalingOutcome>) -> Option<SignalingOutcome> {
    let key = |o: &SignalingOutcome| [o.send_m1[0], o.send_m1[1], o.trust[0], o.trust[1]];
    cands.sort_by(|a, b| {
        b.class
            .cmp(&a.class)
            .then(b.utilities.receiver.total_cmp(&a.utilities.receiver))
            .then_with(|| {
                key(a)
                    .iter()
                    .zip(key(b).iter())
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
    });
    cands.into_iter().next()
}

/// All pure-sender equilibria (receiver best-responding, ties to trust).
pub fn pure_equilibria(params: &SignalingParams) -> Result<Vec<SignalingOutcome>, SignalingError> {
    params.validate()?;
    Ok(pure_candidates(params))
}

pub fn signaling_equilibrium(params: &SignalingParams) -> Result<SignalingOutcome, SignalingError> {
    params.validate()?;
    let pure = pure_candidates(params);
    if !pure.is_empty() {
        return select(pure).ok_or(SignalingError::NoEquilibrium);
    }
    // Prior beliefs off the path can rule out every equilibrium; only then
    // are other off-path beliefs admitted.
    select(mixed_candidates(params, false))
        .or_else(|| select(mixed_candidates(params, true)))
        .ok_or(SignalingError::NoEquilibrium)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ap(trust: f64, reject: f64) -> ActionPayoffs {
        ActionPayoffs { trust, reject }
    }

    fn same(p: ActionPayoffs) -> MessagePayoffs {
        MessagePayoffs { m1: p, m2: p }
    }

    /// Receiver gains 1 trusting a defender, loses 2 trusting an attacker;
    /// both senders want trust, `m2` costs the attacker `cost`.
    fn trust_game(prior: f64, cost: f64) -> SignalingParams {
        trust_game_with_defender_cost(prior, cost, 0.0)
    }

    /// As [`trust_game`], with `m1` costing the defender `d_cost`.
    fn trust_game_with_defender_cost(prior: f64, cost: f64, d_cost: f64) -> SignalingParams {
        SignalingParams {
            prior,
            sender: PayoffTable {
                attacker: MessagePayoffs {
                    m1: ap(1.0, 0.0),
                    m2: ap(1.0 - cost, -cost),
                },
                defender: MessagePayoffs {
                    m1: ap(1.0 - d_cost, -d_cost),
                    m2: ap(1.0, 0.0),
                },
            },
            receiver: PayoffTable {
                attacker: same(ap(-2.0, 0.0)),
                defender: same(ap(1.0, 0.0)),
            },
        }
    }

    #[test]
    fn no_attacker_means_trust_everything() {
        let o = signaling_equilibrium(&trust_game(0.0, 0.0)).unwrap();
        assert_eq!(o.trust, [1.0, 1.0]);
        assert!(verify_pbe(&trust_game(0.0, 0.0), &o).is_ok());
    }

    #[test]
    fn certain_attacker_means_reject_everything() {
        let o = signaling_equilibrium(&trust_game(1.0, 0.0)).unwrap();
        assert_eq!(o.trust, [0.0, 0.0]);
    }

    #[test]
    fn costly_message_separates() {
        // m2 is a credential the attacker cannot afford: defender sends m2,
        // attacker m1, receiver trusts only m2.
        let g = trust_game(0.5, 2.0);
        let o = signaling_equilibrium(&g).unwrap();
        assert_eq!(o.class, EquilibriumClass::Separating);
        assert_eq!(o.send_m1, [1.0, 0.0]);
        assert_eq!(o.trust, [0.0, 1.0]);
        assert_eq!(o.beliefs, [1.0, 0.0]);
    }

    #[test]
    fn cheap_imitation_needs_mixing() {
        // Each type prefers a different message and imitation is cheap, so
        // neither pooling nor separation survives.
        let g = trust_game_with_defender_cost(0.5, 0.5, 0.5);
        assert!(pure_equilibria(&g).unwrap().is_empty());
        let o = signaling_equilibrium(&g).unwrap();
        assert_eq!(o.class, EquilibriumClass::Hybrid);
        verify_pbe(&g, &o).unwrap();
        // Defender sends m2; the attacker joins half the time, pushing the
        // belief to the receiver's indifference point 1/3.
        assert!((o.send_m1[0] - 0.5).abs() < 1e-12);
        assert_eq!(o.send_m1[1], 0.0);
        assert!((o.beliefs[1] - 1.0 / 3.0).abs() < 1e-12);
        assert!((o.trust[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn verify_catches_bad_beliefs() {
        let g = trust_game(0.5, 2.0);
        let mut o = signaling_equilibrium(&g).unwrap();
        o.beliefs[0] = 0.5;
        assert!(verify_pbe(&g, &o).is_err());
    }

    #[test]
    fn prior_out_of_range() {
        assert!(signaling_equilibrium(&trust_game(1.5, 0.0)).is_err());
    }

    #[test]
    fn prior_off_path_can_rule_out_every_equilibrium() {
        // m1 is trusted regardless. After m2 the receiver trusts iff the
        // attacker belief is at most 1/3. The attacker wants m2 only if it is
        // trusted at least 3/4 of the time, the defender only if it is
        // trusted at most half the time. With the prior (0.1) as off-path
        // belief nothing survives; pooling on m1 needs the belief 1/3.
        let g = SignalingParams {
            prior: 0.1,
            sender: PayoffTable {
                attacker: MessagePayoffs {
                    m1: ap(0.5, 0.5),
                    m2: ap(1.0, -1.0),
                },
                defender: MessagePayoffs {
                    m1: ap(0.0, 0.0),
                    m2: ap(-1.0, 1.0),
                },
            },
            receiver: PayoffTable {
                attacker: MessagePayoffs {
                    m1: ap(1.0, 0.0),
                    m2: ap(-1.0, 1.0),
                },
                defender: MessagePayoffs {
                    m1: ap(1.0, 0.0),
                    m2: ap(1.0, 0.0),
                },
            },
        };
        assert!(pure_equilibria(&g).unwrap().is_empty());
        let o = signaling_equilibrium(&g).unwrap();
        assert_eq!(o.send_m1, [1.0, 1.0]);
        assert!((o.beliefs[1] - 1.0 / 3.0).abs() < 1e-12);
        assert!((0.5..=0.75).contains(&o.trust[1]));
        assert!(verify_pbe(&g, &o).is_ok());
    }
}
