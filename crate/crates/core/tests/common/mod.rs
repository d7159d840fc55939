//! Slow, independent oracles: plain backtracking with no refinement and no
//! stabiliser chains.

#![allow(dead_code)]

use std::collections::VecDeque;

use haar_core::{Graph, Poset};
use num_bigint::BigUint;

/// All-pairs distances by breadth-first search; `usize::MAX` when apart.
fn distances(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.order();
    (0..n)
        .map(|s| {
            let mut d = vec![usize::MAX; n];
            d[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in g.neighbors(u) {
                    let w = w as usize;
                    if d[w] == usize::MAX {
                        d[w] = d[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            d
        })
        .collect()
}

/// Visiting order starting with `prefix`, then breadth-first; each later
/// vertex carries an earlier neighbour when it has one.
fn visit_order(g: &Graph, prefix: &[usize]) -> Vec<(usize, Option<usize>)> {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for &p in prefix {
        if !seen[p] {
            seen[p] = true;
            order.push((p, None));
        }
    }
    let mut head = 0;
    loop {
        while head < order.len() {
            let u = order[head].0;
            head += 1;
            for &w in g.neighbors(u) {
                let w = w as usize;
                if !seen[w] {
                    seen[w] = true;
                    order.push((w, Some(u)));
                }
            }
        }
        match (0..n).find(|&v| !seen[v]) {
            Some(v) => {
                seen[v] = true;
                order.push((v, None));
            }
            None => return order,
        }
    }
}

struct Extension<'a> {
    g: &'a Graph,
    colors: &'a [usize],
    dist: &'a [Vec<usize>],
    order: Vec<(usize, Option<usize>)>,
    image: Vec<usize>,
    used: Vec<bool>,
}

impl Extension<'_> {
    /// Automorphisms preserve colours and distances; those are the only
    /// tests, applied against every vertex mapped so far.
    fn fits(&self, k: usize, v: usize, w: usize) -> bool {
        !self.used[w]
            && self.colors[w] == self.colors[v]
            && self.g.degree(w) == self.g.degree(v)
            && self.order[..k]
                .iter()
                .all(|&(u, _)| self.dist[u][v] == self.dist[self.image[u]][w])
    }

    fn go(&mut self, k: usize) -> bool {
        if k == self.order.len() {
            return true;
        }
        let (v, parent) = self.order[k];
        let candidates: Vec<usize> = match parent {
            Some(p) => self
                .g
                .neighbors(self.image[p])
                .iter()
                .map(|&x| x as usize)
                .collect(),
            None => (0..self.g.order()).collect(),
        };
        for w in candidates {
            if self.fits(k, v, w) {
                self.image[v] = w;
                self.used[w] = true;
                if self.go(k + 1) {
                    return true;
                }
                self.image[v] = usize::MAX;
                self.used[w] = false;
            }
        }
        false
    }
}

/// Whether a colour-preserving automorphism fixes `fixed` pointwise and
/// sends `v` to `w`.
fn extends(
    g: &Graph,
    colors: &[usize],
    dist: &[Vec<usize>],
    fixed: &[usize],
    v: usize,
    w: usize,
) -> bool {
    if fixed.contains(&v) || fixed.contains(&w) {
        return v == w;
    }
    let n = g.order();
    let mut prefix = fixed.to_vec();
    prefix.push(v);
    let mut ext = Extension {
        g,
        colors,
        dist,
        order: visit_order(g, &prefix),
        image: vec![usize::MAX; n],
        used: vec![false; n],
    };
    for &f in fixed {
        ext.image[f] = f;
        ext.used[f] = true;
    }
    let k = fixed.len();
    if !ext.fits(k, v, w) {
        return false;
    }
    ext.image[v] = w;
    ext.used[w] = true;
    ext.go(k + 1)
}

/// Orbit of `v` under the colour-preserving automorphisms fixing `fixed`.
pub fn orbit(g: &Graph, colors: &[usize], fixed: &[usize], v: usize) -> Vec<usize> {
    let dist = distances(g);
    (0..g.order())
        .filter(|&w| extends(g, colors, &dist, fixed, v, w))
        .collect()
}

/// Order of the colour-preserving automorphism group as a product of
/// orbit lengths along a stabiliser sequence.
pub fn aut_order(g: &Graph, colors: &[usize]) -> BigUint {
    let dist = distances(g);
    let mut fixed = Vec::new();
    let mut total = BigUint::from(1u8);
    for v in 0..g.order() {
        total *= (0..g.order())
            .filter(|&w| extends(g, colors, &dist, &fixed, v, w))
            .count();
        fixed.push(v);
    }
    total
}

/// Colours for the two parts of a Haar graph on `2n` vertices.
pub fn part_colors(n: usize) -> Vec<usize> {
    (0..2 * n).map(|v| v / n).collect()
}

/// Ideals by testing every subset.
pub fn brute_force_ideals(p: &Poset) -> u64 {
    let m = p.size();
    assert!(m <= 24, "brute force over 2^{m} subsets");
    (0..1u64 << m)
        .filter(|&mask| {
            (0..m)
                .filter(|&b| mask >> b & 1 == 1)
                .all(|b| (0..m).all(|a| !p.le(a, b) || mask >> a & 1 == 1))
        })
        .count() as u64
}
