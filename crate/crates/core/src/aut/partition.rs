use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Ordered partition of `0..n`. Cells are contiguous ranges of `elems` and
/// are identified by their start position.
#[derive(Clone, PartialEq, Eq)]
pub struct OrderedPartition {
    elems: Vec<u32>,
    pos: Vec<u32>,
    /// Start of the cell containing each vertex.
    start_of: Vec<u32>,
    /// End (exclusive) of the cell beginning at each position; only
    /// meaningful at cell starts.
    end_at: Vec<u32>,
    ncells: usize,
}

impl std::fmt::Debug for OrderedPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.cells()).finish()
    }
}

impl OrderedPartition {
    pub fn unit(n: usize) -> Self {
        Self::from_cells_unchecked(n, vec![(0..n).collect()])
    }

    /// Cells must be disjoint, nonempty and cover `0..n`.
    pub fn from_cells(n: usize, cells: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for c in &cells {
            if c.is_empty() {
                return Err(Error::InvalidParams {
                    family: "partition".into(),
                    reason: "empty cell".into(),
                });
            }
            for &v in c {
                if v >= n || std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidParams {
                        family: "partition".into(),
                        reason: format!("vertex {v} out of range or repeated"),
                    });
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::InvalidParams {
                family: "partition".into(),
                reason: "cells do not cover every vertex".into(),
            });
        }
        Ok(Self::from_cells_unchecked(n, cells))
    }

    fn from_cells_unchecked(n: usize, cells: Vec<Vec<usize>>) -> Self {
        let mut elems = Vec::with_capacity(n);
        let mut pos = vec![0u32; n];
        let mut start_of = vec![0u32; n];
        let mut end_at = vec![0u32; n];
        let ncells = cells.iter().filter(|c| !c.is_empty()).count();
        for c in cells {
            let s = elems.len() as u32;
            for v in c {
                pos[v] = elems.len() as u32;
                start_of[v] = s;
                elems.push(v as u32);
            }
            if (s as usize) < elems.len() {
                end_at[s as usize] = elems.len() as u32;
            }
        }
        OrderedPartition {
            elems,
            pos,
            start_of,
            end_at,
            ncells,
        }
    }

    /// Two cells: vertices `0..n` then `n..2n`.
    pub fn bipartition(n: usize) -> Self {
        Self::from_cells_unchecked(2 * n, vec![(0..n).collect(), (n..2 * n).collect()])
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn num_cells(&self) -> usize {
        self.ncells
    }

    pub fn is_discrete(&self) -> bool {
        self.ncells == self.elems.len()
    }

    pub fn cells(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.ncells);
        let mut s = 0;
        while s < self.elems.len() {
            let e = self.end_at[s] as usize;
            out.push(self.elems[s..e].iter().map(|&v| v as usize).collect());
            s = e;
        }
        out
    }

    pub fn elems(&self) -> &[u32] {
        &self.elems
    }

    pub fn cell_start(&self, v: usize) -> usize {
        self.start_of[v] as usize
    }

    pub fn cell_range(&self, start: usize) -> std::ops::Range<usize> {
        start..self.end_at[start] as usize
    }

    /// Index of the cell containing `v`, counting cells in order.
    pub fn cell_index(&self, v: usize) -> usize {
        let target = self.start_of[v] as usize;
        let mut s = 0;
        let mut i = 0;
        while s < target {
            s = self.end_at[s] as usize;
            i += 1;
        }
        i
    }

    /// First smallest non-singleton cell, as a start position.
    pub fn target_cell(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        let mut s = 0;
        while s < self.elems.len() {
            let e = self.end_at[s] as usize;
            let size = e - s;
            if size > 1 && best.is_none_or(|(_, b)| size < b) {
                best = Some((s, size));
                if size == 2 {
                    break;
                }
            }
            s = e;
        }
        best.map(|(s, _)| s)
    }

    /// Splits `v` off the front of its cell. Returns the start of the new
    /// singleton cell.
    pub fn individualize(&mut self, v: usize) -> usize {
        let s = self.start_of[v] as usize;
        let e = self.end_at[s] as usize;
        debug_assert!(e - s > 1, "individualizing a singleton");
        let p = self.pos[v] as usize;
        let other = self.elems[s];
        self.elems.swap(s, p);
        self.pos[other as usize] = p as u32;
        self.pos[v] = s as u32;
        self.end_at[s] = s as u32 + 1;
        self.end_at[s + 1] = e as u32;
        for i in s + 1..e {
            self.start_of[self.elems[i] as usize] = s as u32 + 1;
        }
        self.ncells += 1;
        s
    }
}

/// How refinement treats its trace.
pub(crate) enum Trace<'a> {
    Ignore,
    Record(&'a mut Vec<u64>),
    /// Abort as soon as the trace departs from the recorded one.
    Compare(&'a [u64]),
}

fn mix(h: u64, x: u64) -> u64 {
    (h ^ x).wrapping_mul(0x100_0000_01b3).rotate_left(17) ^ (x.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Scratch space for equitable refinement.
pub(crate) struct Refiner {
    count: Vec<u32>,
    touched_vertices: Vec<u32>,
    touched_cells: Vec<u32>,
    cell_touched: Vec<bool>,
    in_queue: Vec<bool>,
    queue: VecDeque<u32>,
    scratch: Vec<(u32, u32)>,
}

impl Refiner {
    pub(crate) fn new(n: usize) -> Self {
        Refiner {
            count: vec![0; n],
            touched_vertices: Vec::new(),
            touched_cells: Vec::new(),
            cell_touched: vec![false; n],
            in_queue: vec![false; n],
            queue: VecDeque::new(),
            scratch: Vec::new(),
        }
    }

    /// Refines to the coarsest equitable partition finer than `p`, using the
    /// given cell starts as the initial splitters. Returns `false` when a
    /// comparison trace diverges; `p` is then left partially refined.
    pub(crate) fn refine(
        &mut self,
        g: &Graph,
        p: &mut OrderedPartition,
        splitters: &[usize],
        mut trace: Trace<'_>,
    ) -> bool {
        let mut step = 0usize;
        fn emit(step: &mut usize, event: u64, trace: &mut Trace<'_>) -> bool {
            let ok = match trace {
                Trace::Ignore => true,
                Trace::Record(t) => {
                    t.push(event);
                    true
                }
                Trace::Compare(t) => t.get(*step) == Some(&event),
            };
            *step += 1;
            ok
        }
        self.queue.clear();
        for &s in splitters {
            if !self.in_queue[s] {
                self.in_queue[s] = true;
                self.queue.push_back(s as u32);
            }
        }
        let mut ok = true;
        while let Some(ws) = self.queue.pop_front() {
            let ws = ws as usize;
            self.in_queue[ws] = false;
            if p.ncells == p.elems.len() {
                continue;
            }
            let we = p.end_at[ws] as usize;
            for i in ws..we {
                let w = p.elems[i] as usize;
                for &u in g.neighbors(w) {
                    let u = u as usize;
                    if self.count[u] == 0 {
                        self.touched_vertices.push(u as u32);
                    }
                    self.count[u] += 1;
                    let cs = p.start_of[u] as usize;
                    if !self.cell_touched[cs] {
                        self.cell_touched[cs] = true;
                        self.touched_cells.push(cs as u32);
                    }
                }
            }
            self.touched_cells.sort_unstable();
            let touched = std::mem::take(&mut self.touched_cells);
            for &cs in &touched {
                let cs = cs as usize;
                self.cell_touched[cs] = false;
                if ok {
                    let (changed, event) = self.split_cell(p, cs);
                    if changed && !emit(&mut step, event, &mut trace) {
                        ok = false;
                    }
                }
            }
            self.touched_cells = touched;
            self.touched_cells.clear();
            for &u in &self.touched_vertices {
                self.count[u as usize] = 0;
            }
            self.touched_vertices.clear();
            if !ok {
                break;
            }
        }
        for &s in &self.queue {
            self.in_queue[s as usize] = false;
        }
        self.queue.clear();
        if ok {
            ok = emit(&mut step, p.ncells as u64, &mut trace);
            if let Trace::Compare(t) = trace {
                ok &= t.len() == step;
            }
        }
        ok
    }

    /// Splits the cell at `cs` by neighbour counts. Returns whether it split
    /// and a trace event describing the split.
    fn split_cell(&mut self, p: &mut OrderedPartition, cs: usize) -> (bool, u64) {
        let ce = p.end_at[cs] as usize;
        if ce - cs == 1 {
            return (false, 0);
        }
        let first = self.count[p.elems[cs] as usize];
        if p.elems[cs..ce]
            .iter()
            .all(|&v| self.count[v as usize] == first)
        {
            return (false, 0);
        }
        self.scratch.clear();
        self.scratch
            .extend(p.elems[cs..ce].iter().map(|&v| (self.count[v as usize], v)));
        self.scratch.sort_unstable();
        let was_queued = self.in_queue[cs];
        let mut event = mix(cs as u64, (ce - cs) as u64);
        // Fragment boundaries.
        let mut frags: Vec<(usize, usize)> = Vec::new();
        let mut i = 0;
        while i < self.scratch.len() {
            let c = self.scratch[i].0;
            let mut j = i;
            while j < self.scratch.len() && self.scratch[j].0 == c {
                j += 1;
            }
            frags.push((cs + i, cs + j));
            event = mix(event, ((c as u64) << 32) | (j - i) as u64);
            i = j;
        }
        for (k, &(_, v)) in self.scratch.iter().enumerate() {
            p.elems[cs + k] = v;
            p.pos[v as usize] = (cs + k) as u32;
        }
        for &(a, b) in &frags {
            p.end_at[a] = b as u32;
            for k in a..b {
                p.start_of[p.elems[k] as usize] = a as u32;
            }
        }
        p.ncells += frags.len() - 1;
        let largest = if was_queued {
            None
        } else {
            let mut best = 0;
            for (k, &(a, b)) in frags.iter().enumerate() {
                if b - a > frags[best].1 - frags[best].0 {
                    best = k;
                }
            }
            Some(best)
        };
        for (k, &(a, _)) in frags.iter().enumerate() {
            if Some(k) != largest && !self.in_queue[a] {
                self.in_queue[a] = true;
                self.queue.push_back(a as u32);
            }
        }
        (true, event)
    }
}

/// Coarsest equitable partition finer than `p`.
pub fn refine(g: &Graph, p: &OrderedPartition) -> OrderedPartition {
    let mut out = p.clone();
    let mut r = Refiner::new(g.order());
    let starts: Vec<usize> = cell_starts(&out);
    r.refine(g, &mut out, &starts, Trace::Ignore);
    out
}

pub(crate) fn cell_starts(p: &OrderedPartition) -> Vec<usize> {
    let mut out = Vec::with_capacity(p.ncells);
    let mut s = 0;
    while s < p.elems.len() {
        out.push(s);
        s = p.end_at[s] as usize;
    }
    out
}

/// Whether every vertex of each cell has the same number of neighbours in
/// every cell.
pub fn is_equitable(g: &Graph, p: &OrderedPartition) -> bool {
    let cells = p.cells();
    let mut cell_of = vec![0; g.order()];
    for (i, c) in cells.iter().enumerate() {
        for &v in c {
            cell_of[v] = i;
        }
    }
    cells.iter().all(|c| {
        let profile = |v: usize| {
            let mut counts = vec![0usize; cells.len()];
            for &u in g.neighbors(v) {
                counts[cell_of[u as usize]] += 1;
            }
            counts
        };
        let first = profile(c[0]);
        c.iter().all(|&v| profile(v) == first)
    })
}
