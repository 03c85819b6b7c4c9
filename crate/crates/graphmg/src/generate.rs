//! Seeded graph generators for benchmarks and tests.
//!
//! Every generator is deterministic in its arguments: the same call always
//! yields the same edge list, so solver baselines recorded against these
//! graphs stay meaningful. All graphs are connected by construction and
//! carry unit edge weights.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::laplacian::Graph;
use crate::rng::SplitMix64;

pub fn path(n: usize) -> Result<Graph> {
    require_vertices(n, 2, "path")?;
    let edges = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
    Graph::new(n, edges)
}

pub fn cycle(n: usize) -> Result<Graph> {
    require_vertices(n, 3, "cycle")?;
    let edges = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
    Graph::new(n, edges)
}

/// Star with center 0 and `n - 1` leaves.
pub fn star(n: usize) -> Result<Graph> {
    require_vertices(n, 2, "star")?;
    let edges = (1..n).map(|i| (0, i, 1.0)).collect();
    Graph::new(n, edges)
}

pub fn complete(n: usize) -> Result<Graph> {
    require_vertices(n, 2, "complete")?;
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v, 1.0));
        }
    }
    Graph::new(n, edges)
}

/// 5-point stencil grid, row-major vertex order.
pub fn grid2d(rows: usize, cols: usize) -> Result<Graph> {
    require_vertices(rows.saturating_mul(cols), 2, "grid2d")?;
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParameter("grid2d needs positive sides".into()));
    }
    let idx = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((idx(r, c), idx(r, c + 1), 1.0));
            }
            if r + 1 < rows {
                edges.push((idx(r, c), idx(r + 1, c), 1.0));
            }
        }
    }
    Graph::new(rows * cols, edges)
}

/// 7-point stencil grid, x fastest.
pub fn grid3d(nx: usize, ny: usize, nz: usize) -> Result<Graph> {
    let n = nx.saturating_mul(ny).saturating_mul(nz);
    require_vertices(n, 2, "grid3d")?;
    if nx == 0 || ny == 0 || nz == 0 {
        return Err(Error::InvalidParameter("grid3d needs positive sides".into()));
    }
    let idx = |x: usize, y: usize, z: usize| (z * ny + y) * nx + x;
    let mut edges = Vec::new();
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                if x + 1 < nx {
                    edges.push((idx(x, y, z), idx(x + 1, y, z), 1.0));
                }
                if y + 1 < ny {
                    edges.push((idx(x, y, z), idx(x, y + 1, z), 1.0));
                }
                if z + 1 < nz {
                    edges.push((idx(x, y, z), idx(x, y, z + 1), 1.0));
                }
            }
        }
    }
    Graph::new(n, edges)
}

/// Preferential attachment: a complete seed graph on `m + 1` vertices, then
/// each new vertex attaches to `m` distinct existing vertices sampled
/// proportionally to degree (one slot per incident edge in the target
/// list). Average degree approaches `2 m`.
pub fn preferential_attachment(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "preferential attachment needs m >= 1".into(),
        ));
    }
    require_vertices(n, m + 2, "preferential attachment")?;
    let mut rng = SplitMix64::new(seed);
    let mut edges: Vec<(usize, usize, f64)> = Vec::with_capacity(m * n);
    // one entry per edge endpoint; sampling from it is degree-proportional
    let mut targets: Vec<usize> = Vec::with_capacity(2 * m * n);
    for u in 0..=m {
        for v in u + 1..=m {
            edges.push((u, v, 1.0));
            targets.push(u);
            targets.push(v);
        }
    }
    let mut picked: Vec<usize> = Vec::with_capacity(m);
    for v in m + 1..n {
        picked.clear();
        while picked.len() < m {
            let t = targets[rng.next_below(targets.len())];
            if !picked.contains(&t) {
                picked.push(t);
            }
        }
        for &t in &picked {
            edges.push((t, v, 1.0));
            targets.push(t);
            targets.push(v);
        }
    }
    Graph::new(n, edges)
}

/// Ring lattice with `k` neighbours on each side, then each chord (ring
/// distance at least 2) is rewired with probability `p` to a uniformly
/// random non-duplicate endpoint. The distance-1 ring is never rewired, so
/// the graph stays connected.
pub fn small_world(n: usize, k: usize, p: f64, seed: u64) -> Result<Graph> {
    if k == 0 || 2 * k >= n {
        return Err(Error::InvalidParameter(
            "small world needs 1 <= k < n/2".into(),
        ));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(
            "small world rewire probability must lie in [0, 1]".into(),
        ));
    }
    require_vertices(n, 4, "small world")?;
    let mut rng = SplitMix64::new(seed);
    let mut present: HashSet<(usize, usize)> = HashSet::new();
    let mut edges: Vec<(usize, usize, f64)> = Vec::with_capacity(n * k);
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    for d in 1..=k {
        for u in 0..n {
            let v = (u + d) % n;
            present.insert(key(u, v));
        }
    }
    for d in 1..=k {
        for u in 0..n {
            let v = (u + d) % n;
            if d == 1 || !(rng.next_f64() < p) {
                edges.push((u, v, 1.0));
                continue;
            }
            // draw a fresh endpoint; fall back to the original chord if the
            // neighbourhood is saturated
            present.remove(&key(u, v));
            let mut chosen = v;
            for _ in 0..32 {
                let w = rng.next_below(n);
                if w != u && !present.contains(&key(u, w)) {
                    chosen = w;
                    break;
                }
            }
            present.insert(key(u, chosen));
            edges.push((u, chosen, 1.0));
        }
    }
    Graph::new(n, edges)
}

/// Random spanning tree (each vertex picks a uniform earlier parent) plus
/// `extra` distinct random chords.
pub fn random_connected(n: usize, extra: usize, seed: u64) -> Result<Graph> {
    require_vertices(n, 2, "random connected")?;
    let mut rng = SplitMix64::new(seed);
    let mut present: HashSet<(usize, usize)> = HashSet::new();
    let mut edges: Vec<(usize, usize, f64)> = Vec::with_capacity(n - 1 + extra);
    for v in 1..n {
        let u = rng.next_below(v);
        present.insert((u, v));
        edges.push((u, v, 1.0));
    }
    let max_extra = n * (n - 1) / 2 - (n - 1);
    let wanted = extra.min(max_extra);
    let mut added = 0;
    while added < wanted {
        let a = rng.next_below(n);
        let b = rng.next_below(n);
        if a == b {
            continue;
        }
        let e = (a.min(b), a.max(b));
        if present.insert(e) {
            edges.push((e.0, e.1, 1.0));
            added += 1;
        }
    }
    Graph::new(n, edges)
}

fn require_vertices(n: usize, least: usize, what: &str) -> Result<()> {
    if n < least {
        return Err(Error::InvalidParameter(format!(
            "{what} needs at least {least} vertices, got {n}"
        )));
    }
    Ok(())
}
