//! Independent reference implementations used as test oracles.
//!
//! Nothing here calls into the crate's numerical paths: eigenvalues come
//! from a cyclic Jacobi sweep, connectivity from union-find, worst cases from
//! bitmask enumeration.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rescon::graph::{Edge, Position, WeightedGraph};

/// Eigenvalues (ascending) and matching eigenvectors (columns) of a dense
/// symmetric matrix via cyclic Jacobi rotations.
pub fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x][x].total_cmp(&a[y][y]));
    let vals = order.iter().map(|&k| a[k][k]).collect();
    let vecs = order
        .iter()
        .map(|&k| (0..n).map(|r| v[r][k]).collect())
        .collect();
    (vals, vecs)
}

pub fn dense_laplacian(n: usize, edges: &[(usize, usize, f64)]) -> Vec<Vec<f64>> {
    let mut l = vec![vec![0.0; n]; n];
    for &(i, j, w) in edges {
        l[i][j] -= w;
        l[j][i] -= w;
        l[i][i] += w;
        l[j][j] += w;
    }
    l
}

pub fn triples(g: &WeightedGraph) -> Vec<(usize, usize, f64)> {
    g.edges().iter().map(|e| (e.i, e.j, e.w)).collect()
}

/// Full Laplacian spectrum by Jacobi, ascending.
pub fn oracle_spectrum(g: &WeightedGraph) -> (Vec<f64>, Vec<Vec<f64>>) {
    jacobi_eigen(dense_laplacian(g.n(), &triples(g)))
}

pub fn oracle_lambda2(n: usize, edges: &[(usize, usize, f64)]) -> f64 {
    jacobi_eigen(dense_laplacian(n, edges)).0[1]
}

pub fn union_find_connected(n: usize, edges: &[(usize, usize, f64)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    let mut comps = n;
    for &(i, j, _) in edges {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a] = b;
            comps -= 1;
        }
    }
    comps <= 1
}

/// Random graph on `n` nodes: each pair present with probability `p`,
/// weights uniform in (0, 1].
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64, weighted: bool) -> WeightedGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p {
                let w = if weighted {
                    1.0 - rng.random::<f64>() * 0.999
                } else {
                    1.0
                };
                edges.push(Edge { i, j, w });
            }
        }
    }
    WeightedGraph::new(n, edges).unwrap()
}

pub fn random_positions(rng: &mut ChaCha8Rng, n: usize, dim: usize, half: f64) -> Vec<Position> {
    (0..n)
        .map(|_| Position::new((0..dim).map(|_| rng.random_range(-half..half)).collect()))
        .collect()
}

/// Minimum attacked lambda2 over every removal of at most `m` edges,
/// enumerated by bitmask. Returns (value, smallest-size lexicographically
/// first minimizer found within `tie`).
pub fn brute_force_worst(g: &WeightedGraph, m: usize, tie: f64) -> (f64, Vec<usize>) {
    let all = triples(g);
    let e = all.len();
    assert!(e < 31);
    let mut results: Vec<(Vec<usize>, f64)> = Vec::new();
    for mask in 0u32..(1u32 << e) {
        if mask.count_ones() as usize > m {
            continue;
        }
        let kept: Vec<_> = (0..e)
            .filter(|k| mask & (1 << k) == 0)
            .map(|k| all[k])
            .collect();
        let removed: Vec<usize> = (0..e).filter(|k| mask & (1 << k) != 0).collect();
        let l2 = if union_find_connected(g.n(), &kept) {
            oracle_lambda2(g.n(), &kept)
        } else {
            0.0
        };
        results.push((removed, l2));
    }
    let min = results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    results.retain(|r| r.1 <= min + tie);
    results.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then(a.0.cmp(&b.0)));
    (min, results[0].0.clone())
}

/// Smooth-profile lambda2 at `positions` computed entirely in test code.
pub fn oracle_smooth_lambda2(positions: &[Position], range: f64, decay: f64) -> f64 {
    let n = positions.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let d: f64 = positions[i]
                .coords()
                .iter()
                .zip(positions[j].coords())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if d <= range {
                edges.push((i, j, (-decay * d * d).exp()));
            }
        }
    }
    oracle_lambda2(n, &edges)
}

/// Central finite-difference gradient of the smooth lambda2.
pub fn fd_gradient(positions: &[Position], range: f64, decay: f64, h: f64) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for i in 0..positions.len() {
        let mut gi = Vec::new();
        for k in 0..positions[i].dim() {
            let mut plus = positions.to_vec();
            let mut minus = positions.to_vec();
            plus[i].0[k] += h;
            minus[i].0[k] -= h;
            let f = oracle_smooth_lambda2(&plus, range, decay);
            let b = oracle_smooth_lambda2(&minus, range, decay);
            gi.push((f - b) / (2.0 * h));
        }
        out.push(gi);
    }
    out
}

/// FlipIt periodic play with uniformly random phases: fraction of trials in
/// which the attacker holds the resource at a uniformly random instant.
pub fn monte_carlo_control_fraction(
    rng: &mut ChaCha8Rng,
    alpha_a: f64,
    alpha_d: f64,
    trials: usize,
) -> f64 {
    if alpha_a == 0.0 {
        return 0.0;
    }
    if alpha_d == 0.0 {
        return 1.0;
    }
    let (pa, pd) = (1.0 / alpha_a, 1.0 / alpha_d);
    let horizon = 1000.0 * pa.max(pd);
    let mut wins = 0usize;
    for _ in 0..trials {
        let phase_a = rng.random::<f64>() * pa;
        let phase_d = rng.random::<f64>() * pd;
        let t = horizon + rng.random::<f64>() * horizon;
        let last_a = phase_a + ((t - phase_a) / pa).floor() * pa;
        let last_d = phase_d + ((t - phase_d) / pd).floor() * pd;
        if last_a > last_d {
            wins += 1;
        }
    }
    wins as f64 / trials as f64
}

/// Trust-game payoffs as plain arrays: `[type][message][action]` with type
/// 0 = attacker, action 0 = trust.
pub type Table = [[[f64; 2]; 2]; 2];

#[derive(Debug, Clone, Copy)]
pub struct GridEquilibrium {
    pub send_m1: [f64; 2],
    pub trust: [f64; 2],
    /// Attacker type, defender type, receiver.
    pub utilities: [f64; 3],
}

/// Brute-force equilibria of the trust game over a 101 x 101 grid of sender
/// mixes.
///
/// At each grid point the receiver may mix after a sent message only if its
/// trust advantage changes sign somewhere in the surrounding grid cell, and
/// after an unsent message only if some belief makes it indifferent.
/// Receiver mixes come from the 101-point grid or, when a sender type mixes,
/// from solving that type's indifference. Sender conditions hold within
/// `tol`.
pub fn signaling_grid_equilibria(
    prior: f64,
    sender: &Table,
    receiver: &Table,
    tol: f64,
) -> Vec<GridEquilibrium> {
    let grid: Vec<f64> = (0..=100).map(|k| k as f64 / 100.0).collect();
    let gain = |t: usize, m: usize| receiver[t][m][0] - receiver[t][m][1];
    let adv = |m: usize, mu: f64| mu * gain(0, m) + (1.0 - mu) * gain(1, m);
    let msg = |x: [f64; 2], t: usize, m: usize| if m == 0 { x[t] } else { 1.0 - x[t] };
    let belief = |x: [f64; 2], m: usize| {
        let pa = prior * msg(x, 0, m);
        let total = pa + (1.0 - prior) * msg(x, 1, m);
        (total > 1e-12).then(|| pa / total)
    };
    // Sender payoff of type t for message m at trust probability r.
    let spay = |t: usize, m: usize, r: f64| r * sender[t][m][0] + (1.0 - r) * sender[t][m][1];
    let mut out = Vec::new();
    for &xa in &grid {
        for &xd in &grid {
            let x = [xa, xd];
            // None: receiver may mix; Some(r): pure response.
            let fixed: Vec<Option<f64>> = (0..2)
                .map(|m| {
                    let advs: Vec<f64> = match belief(x, m) {
                        Some(_) => {
                            let mut v = Vec::new();
                            for da in [-0.005, 0.0, 0.005] {
                                for dd in [-0.005, 0.0, 0.005] {
                                    let y = [(xa + da).clamp(0.0, 1.0), (xd + dd).clamp(0.0, 1.0)];
                                    if let Some(mu) = belief(y, m) {
                                        v.push(adv(m, mu));
                                    }
                                }
                            }
                            v
                        }
                        None => vec![adv(m, 0.0), adv(m, 1.0)],
                    };
                    let pos = advs.iter().any(|&a| a >= 0.0);
                    let neg = advs.iter().any(|&a| a <= 0.0);
                    match (pos, neg) {
                        (true, false) => Some(1.0),
                        (false, true) => Some(0.0),
                        _ => None,
                    }
                })
                .collect();
            let mixing: Vec<usize> = (0..2).filter(|&t| x[t] > 0.0 && x[t] < 1.0).collect();
            let mut cands: Vec<[f64; 2]> = Vec::new();
            let other_values =
                |m: usize| -> Vec<f64> { fixed[m].map_or(grid.clone(), |r| vec![r]) };
            // Trust after m making type t indifferent given trust r_other after the other message.
            let solve = |t: usize, m: usize, r_other: f64| {
                let o = 1 - m;
                let g = sender[t][m][0] - sender[t][m][1];
                (g.abs() > 1e-14).then(|| (spay(t, o, r_other) - sender[t][m][1]) / g)
            };
            for r0 in other_values(0) {
                for r1 in other_values(1) {
                    cands.push([r0, r1]);
                }
            }
            for &t in &mixing {
                for m in 0..2 {
                    if fixed[m].is_some() {
                        continue;
                    }
                    for ro in other_values(1 - m) {
                        if let Some(r) = solve(t, m, ro) {
                            let mut c = [0.0; 2];
                            c[m] = r;
                            c[1 - m] = ro;
                            cands.push(c);
                        }
                    }
                }
            }
            for r in cands {
                if r.iter().any(|v| !(-1e-12..=1.0 + 1e-12).contains(v)) {
                    continue;
                }
                let ok = (0..2).all(|t| {
                    let u = [spay(t, 0, r[0]), spay(t, 1, r[1])];
                    let best = u[0].max(u[1]);
                    (0..2).all(|m| msg(x, t, m) == 0.0 || u[m] >= best - tol)
                });
                if !ok {
                    continue;
                }
                let u = |t: usize| (0..2).map(|m| msg(x, t, m) * spay(t, m, r[m])).sum::<f64>();
                let ur: f64 = (0..2)
                    .map(|t| {
                        let w = if t == 0 { prior } else { 1.0 - prior };
                        let rp =
                            |m: usize| r[m] * receiver[t][m][0] + (1.0 - r[m]) * receiver[t][m][1];
                        w * (0..2).map(|m| msg(x, t, m) * rp(m)).sum::<f64>()
                    })
                    .sum();
                out.push(GridEquilibrium {
                    send_m1: x,
                    trust: r,
                    utilities: [u(0), u(1), ur],
                });
            }
        }
    }
    out
}

pub fn random_table(rng: &mut ChaCha8Rng) -> Table {
    let mut t = [[[0.0; 2]; 2]; 2];
    for a in t.iter_mut().flatten().flatten() {
        *a = rng.random_range(-1.0..1.0);
    }
    t
}
