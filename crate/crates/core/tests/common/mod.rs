//! Brute-force oracles and generators shared by the integration tests.
//! Nothing here goes through the library's closure, path or dominance code.
#![allow(dead_code)]

use linkrank::{OptionId, Orientation, StrategicGame, Tournament};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn id(name: &str) -> OptionId {
    OptionId::new(name).unwrap()
}

pub fn labels(n: usize) -> Vec<OptionId> {
    (0..n).map(|k| id(&format!("o{k}"))).collect()
}

/// Number of unordered pairs, i.e. bits needed to describe an n-tournament.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Adjacency matrix for tournament number `code` on n vertices: bit k set
/// means the k-th pair (i < j, lexicographic) is won by i.
pub fn adjacency(n: usize, code: u64) -> Vec<Vec<bool>> {
    assert!(pair_count(n) <= 64);
    let bits: Vec<bool> = (0..pair_count(n)).map(|k| code >> k & 1 == 1).collect();
    adjacency_from_bits(n, &bits)
}

/// Same as [`adjacency`] with one flag per pair.
pub fn adjacency_from_bits(n: usize, bits: &[bool]) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; n]; n];
    let mut bit = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if bits[bit] {
                adj[i][j] = true;
            } else {
                adj[j][i] = true;
            }
            bit += 1;
        }
    }
    adj
}

pub fn tournament_of(adj: &[Vec<bool>]) -> Tournament {
    Tournament::from_fn(labels(adj.len()), |i, j| adj[i][j]).unwrap()
}

/// Every labelled tournament on n vertices, in code order.
pub fn all_tournaments(n: usize) -> impl Iterator<Item = Vec<Vec<bool>>> {
    (0..1u64 << pair_count(n)).map(move |code| adjacency(n, code))
}

pub fn random_adjacency<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<bool>> {
    let bits: Vec<bool> = (0..pair_count(n)).map(|_| rng.gen()).collect();
    adjacency_from_bits(n, &bits)
}

/// Depth-first search over simple paths from `from`, looking for `to`.
pub fn path_exists(adj: &[Vec<bool>], from: usize, to: usize) -> bool {
    fn walk(adj: &[Vec<bool>], at: usize, to: usize, visited: &mut Vec<bool>) -> bool {
        if at == to {
            return true;
        }
        visited[at] = true;
        for next in 0..adj.len() {
            if adj[at][next] && !visited[next] && walk(adj, next, to, visited) {
                return true;
            }
        }
        visited[at] = false;
        false
    }
    walk(adj, from, to, &mut vec![false; adj.len()])
}

pub fn reach_table(adj: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = adj.len();
    (0..n)
        .map(|i| (0..n).map(|j| path_exists(adj, i, j)).collect())
        .collect()
}

/// All permutations of 0..n in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                extend(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Orders in which every earlier option has a path to every later one.
pub fn natural_orders(reach: &[Vec<bool>], perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    perms
        .iter()
        .filter(|p| {
            (0..p.len()).all(|a| ((a + 1)..p.len()).all(|b| reach[p[a]][p[b]]))
        })
        .cloned()
        .collect()
}

/// Orders in which each option directly beats the next.
pub fn hamilton_orders(adj: &[Vec<bool>], perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    perms
        .iter()
        .filter(|p| p.windows(2).all(|w| adj[w[0]][w[1]]))
        .cloned()
        .collect()
}

pub fn winner(adj: &[Vec<bool>]) -> Option<usize> {
    (0..adj.len()).find(|&i| (0..adj.len()).all(|j| i == j || adj[i][j]))
}

pub fn loser(adj: &[Vec<bool>]) -> Option<usize> {
    (0..adj.len()).find(|&i| (0..adj.len()).all(|j| i == j || adj[j][i]))
}

/// A random two-player game with distinct outcomes per player and at most
/// `max_solutions` cells.
pub fn random_game<R: Rng>(rng: &mut R, max_solutions: usize) -> StrategicGame {
    let (rows, cols) = loop {
        let r = rng.gen_range(1..=max_solutions);
        let c = rng.gen_range(1..=max_solutions);
        if r * c <= max_solutions {
            break (r, c);
        }
    };
    let mut table = || {
        let mut values: Vec<f64> = (0..rows * cols).map(|v| v as f64).collect();
        values.shuffle(rng);
        values.chunks(cols).map(|c| c.to_vec()).collect::<Vec<_>>()
    };
    let a = table();
    let b = table();
    let orientation = if rng.gen() { Orientation::Cost } else { Orientation::Utility };
    StrategicGame::new(
        ["P".into(), "Q".into()],
        [
            (0..rows).map(|k| format!("r{k}")).collect(),
            (0..cols).map(|k| format!("c{k}")).collect(),
        ],
        orientation,
        [a, b],
    )
    .unwrap()
}

/// Solutions not strictly improved for both players by any other, via a
/// direct double loop over outcome values.
pub fn pareto_scan(g: &StrategicGame) -> Vec<OptionId> {
    let better = |x: f64, y: f64| match g.orientation() {
        Orientation::Cost => x < y,
        Orientation::Utility => x > y,
    };
    let sols = g.solutions();
    sols.iter()
        .filter(|s| {
            !sols.iter().any(|t| {
                better(g.outcome(0, t), g.outcome(0, s)) && better(g.outcome(1, t), g.outcome(1, s))
            })
        })
        .map(|s| s.label.clone())
        .collect()
}

/// Log-uniform ratios in [1/9, 9], rejecting draws too close to 1.
pub fn random_reciprocal<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<f64>> {
    let mut rows = vec![vec![1.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let a = loop {
                let a = (rng.gen_range(-1.0..1.0) * 9f64.ln()).exp();
                if (a - 1.0).abs() > 1e-3 {
                    break a;
                }
            };
            rows[i][j] = a;
            rows[j][i] = 1.0 / a;
        }
    }
    rows
}

/// Total-order tournament listing options in `order` with earlier beating later,
/// presented over `options` (for fixed loop order in diagrams).
pub fn total_over(order: &[usize], options: &[OptionId]) -> Tournament {
    let mut rank = vec![0; order.len()];
    for (pos, &k) in order.iter().enumerate() {
        rank[k] = pos;
    }
    Tournament::from_fn(options.to_vec(), |i, j| rank[i] < rank[j]).unwrap()
}
