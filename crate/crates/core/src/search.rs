//! Backtracking over point bijections between two configurations.
//!
//! Points of the source are assigned in breadth-first order so that each new
//! point is collinear with an earlier one. After every assignment the pair
//! condition is checked against all earlier points: collinearity must be
//! preserved in both directions and the line through a pair must map to a
//! single line, consistently and injectively. With equal parameters and
//! `t >= 2` this makes every leaf an isomorphism.

use crate::incidence::Configuration;

pub(crate) enum SearchOutcome {
    Done(Vec<Vec<usize>>),
    Budget(u64),
}

type Filter<'a> = dyn Fn(usize, usize) -> bool + 'a;

pub(crate) struct IsoSearch<'a> {
    src: &'a Configuration,
    dst: &'a Configuration,
    order: Vec<usize>,
    pub(crate) limit: Option<usize>,
    pub(crate) allowed: Option<&'a Filter<'a>>,
    budget: u64,
    nodes: u64,
    map: Vec<usize>,
    used: Vec<bool>,
    line_map: Vec<usize>,
    line_used: Vec<bool>,
    found: Vec<Vec<usize>>,
}

const UNSET: usize = usize::MAX;

impl<'a> IsoSearch<'a> {
    pub(crate) fn new(src: &'a Configuration, dst: &'a Configuration, budget: u64) -> Self {
        let n = src.point_count();
        Self {
            src,
            dst,
            order: bfs_order(src),
            limit: None,
            allowed: None,
            budget,
            nodes: 0,
            map: vec![UNSET; n],
            used: vec![false; dst.point_count()],
            line_map: vec![UNSET; src.line_count()],
            line_used: vec![false; dst.line_count()],
            found: Vec::new(),
        }
    }

    pub(crate) fn run(mut self) -> SearchOutcome {
        if self.src.params() != self.dst.params() {
            return SearchOutcome::Done(Vec::new());
        }
        match self.extend(0) {
            Ok(()) => SearchOutcome::Done(self.found),
            Err(()) => SearchOutcome::Budget(self.nodes),
        }
    }

    fn full(&self) -> bool {
        self.limit.is_some_and(|l| self.found.len() >= l)
    }

    fn extend(&mut self, depth: usize) -> Result<(), ()> {
        if depth == self.order.len() {
            self.found.push(self.map.clone());
            return Ok(());
        }
        let p = self.order[depth];
        for q in 0..self.dst.point_count() {
            if self.used[q] {
                continue;
            }
            if let Some(allowed) = self.allowed {
                if !allowed(p, q) {
                    continue;
                }
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(());
            }
            let mut newly_mapped = Vec::new();
            if self.consistent(depth, p, q, &mut newly_mapped) {
                self.map[p] = q;
                self.used[q] = true;
                self.extend(depth + 1)?;
                self.map[p] = UNSET;
                self.used[q] = false;
            }
            for l in newly_mapped {
                self.line_used[self.line_map[l]] = false;
                self.line_map[l] = UNSET;
            }
            if self.full() {
                return Ok(());
            }
        }
        Ok(())
    }

    fn consistent(&mut self, depth: usize, p: usize, q: usize, newly: &mut Vec<usize>) -> bool {
        for &u in &self.order[..depth] {
            let fu = self.map[u];
            let src_line = self.src.line_through(p, u);
            let dst_line = self.dst.line_through(q, fu);
            match (src_line, dst_line) {
                (None, None) => {}
                (Some(l), Some(l2)) => {
                    let current = self.line_map[l];
                    if current == UNSET {
                        if self.line_used[l2] {
                            return false;
                        }
                        self.line_map[l] = l2;
                        self.line_used[l2] = true;
                        newly.push(l);
                    } else if current != l2 {
                        return false;
                    }
                }
                _ => return false,
            }
        }
        true
    }
}

/// Points in breadth-first order over collinearity, component by component.
pub(crate) fn bfs_order(c: &Configuration) -> Vec<usize> {
    let n = c.point_count();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        order.push(start);
        let mut head = order.len() - 1;
        while head < order.len() {
            let p = order[head];
            head += 1;
            for &l in c.lines_through(p) {
                for &q in c.line(l) {
                    if !seen[q] {
                        seen[q] = true;
                        order.push(q);
                    }
                }
            }
        }
    }
    order
}
