//! Exhaustive enumeration of small orbiconfigurations and the bounded
//! search for two structures with the same annotated Levi graph.
//!
//! Enumeration fixes the line size `t`, caps every weight, multiplicity and
//! incidence multiplicity, and keeps one representative per isomorphism
//! class. Points are listed with non-decreasing weights, which loses no
//! classes.

use std::collections::BTreeMap;

use crate::orbi::{orbi_isomorphic, OrbiIncidenceStructure, OrbiLine};
use crate::rational::{int, Rational};

/// Largest point count the conjecture scan will enumerate.
pub const MAX_SCAN_POINTS: usize = 4;

/// Limits for [`enumerate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub points: usize,
    /// Cap on `a`, `b`, `d` and `c`.
    pub max_weight: u64,
    pub t: u64,
    /// Every `s(i)` must be at most this.
    pub s_max: Rational,
    /// When set, every `s(i)` must equal it.
    pub s_exact: Option<Rational>,
}

#[derive(Debug, Clone)]
struct LineType {
    incidences: Vec<(usize, u64)>,
    b: u64,
    d: u64,
    /// `c·d/b` per incidence scaled by `scale`, in the same order.
    load: Vec<i64>,
}

fn patterns(points: usize, t: u64, max_c: u64) -> Vec<Vec<(usize, u64)>> {
    // all maps point -> c with sum t, support sorted
    fn rec(
        p: usize,
        points: usize,
        left: u64,
        max_c: u64,
        cur: &mut Vec<(usize, u64)>,
        out: &mut Vec<Vec<(usize, u64)>>,
    ) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        if p == points {
            return;
        }
        rec(p + 1, points, left, max_c, cur, out);
        for c in 1..=max_c.min(left) {
            cur.push((p, c));
            rec(p + 1, points, left - c, max_c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, points, t, max_c, &mut Vec::new(), &mut out);
    out
}

fn weight_choices(max_weight: u64) -> Vec<(u64, u64)> {
    let mut out = vec![(1, 1)];
    for w in 2..=max_weight {
        out.push((1, w));
        out.push((w, 1));
    }
    out
}

/// Every connected orbiconfiguration within `bounds` with all lines of size
/// `t` and exactly `bounds.points` points, one per isomorphism class, in a
/// deterministic order.
pub fn enumerate(bounds: &Bounds) -> Vec<OrbiIncidenceStructure> {
    let n = bounds.points;
    if n == 0 || bounds.t < 2 {
        return Vec::new();
    }
    // every b divides this, so loads stay integral
    let scale = (1..=bounds.max_weight as i64).fold(1, num_integer::lcm);
    let scaled = |r: Rational| -> Option<i64> {
        let x = r * int(scale);
        x.is_integer().then(|| x.to_integer())
    };
    let Some(s_max) = scaled(bounds.s_max) else {
        return Vec::new();
    };
    let s_exact = match bounds.s_exact {
        None => None,
        Some(s) => match scaled(s) {
            Some(v) => Some(v),
            None => return Vec::new(),
        },
    };
    let mut types: Vec<LineType> = Vec::new();
    for pattern in patterns(n, bounds.t, bounds.max_weight) {
        for &(b, d) in &weight_choices(bounds.max_weight) {
            types.push(LineType {
                load: pattern.iter().map(|&(_, c)| (c * d) as i64 * scale / b as i64).collect(),
                incidences: pattern.clone(),
                b,
                d,
            });
        }
    }
    types.sort_by_key(|ty| ty.incidences[0].0);
    // index of the first type whose lowest point exceeds i
    let block_end: Vec<usize> = (0..n)
        .map(|i| types.iter().take_while(|ty| ty.incidences[0].0 <= i).count())
        .collect();

    // invariant -> representatives found so far
    let mut seen: BTreeMap<Invariant, Vec<OrbiIncidenceStructure>> = BTreeMap::new();
    for a in weight_vectors(n, bounds.max_weight) {
        let mut state = EnumState {
            s_max,
            s_exact,
            types: &types,
            block_end: &block_end,
            a: &a,
            load: vec![0; n],
            pair_used: vec![false; n * n],
            chosen: Vec::new(),
            found: Vec::new(),
        };
        state.extend(0);
        for lines in state.found {
            let Ok(s) = OrbiIncidenceStructure::new(a.clone(), lines) else {
                continue;
            };
            if !s.is_connected() {
                continue;
            }
            let reps = seen.entry(invariant(&s)).or_default();
            if reps.iter().all(|r| orbi_isomorphic(r, &s).is_none()) {
                reps.push(s);
            }
        }
    }
    seen.into_values().flatten().collect()
}

type Invariant = (Vec<u64>, Vec<PointSignature>);
type PointSignature = (u64, Vec<(u64, u64, u64, Vec<(u64, u64)>)>);

/// Isomorphism invariant: per point, its weight and for each line through
/// it `(b, d, c)` plus the weights and multiplicities of the other points.
fn invariant(o: &OrbiIncidenceStructure) -> Invariant {
    let a = o.point_weights();
    let mut sigs: Vec<PointSignature> = a.iter().map(|&w| (w, Vec::new())).collect();
    for line in o.lines() {
        for &(p, c) in line.incidences() {
            let mut others: Vec<(u64, u64)> = line
                .incidences()
                .iter()
                .filter(|&&(q, _)| q != p)
                .map(|&(q, c2)| (a[q], c2))
                .collect();
            others.sort_unstable();
            sigs[p].1.push((line.b(), line.d(), c, others));
        }
    }
    for s in &mut sigs {
        s.1.sort_unstable();
    }
    sigs.sort_unstable();
    let mut weights = a.to_vec();
    weights.sort_unstable();
    (weights, sigs)
}

/// Non-decreasing weight vectors in `1..=max` with gcd 1.
fn weight_vectors(n: usize, max: u64) -> Vec<Vec<u64>> {
    fn rec(n: usize, lo: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == n {
            if crate::rational::gcd_all(cur.iter().copied()) == 1 {
                out.push(cur.clone());
            }
            return;
        }
        for w in lo..=max {
            cur.push(w);
            rec(n, w, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 1, max, &mut Vec::new(), &mut out);
    out
}

struct EnumState<'a> {
    s_max: i64,
    s_exact: Option<i64>,
    types: &'a [LineType],
    block_end: &'a [usize],
    a: &'a [u64],
    load: Vec<i64>,
    pair_used: Vec<bool>,
    chosen: Vec<usize>,
    found: Vec<Vec<OrbiLine>>,
}

impl EnumState<'_> {
    fn s_of(&self, p: usize) -> i64 {
        self.load[p] * self.a[p] as i64
    }

    /// Points whose every possible line has been decided must be complete.
    fn finished_points_ok(&self, k: usize) -> bool {
        let n = self.a.len();
        let reference = self.s_exact.or_else(|| (self.block_end[0] <= k).then(|| self.s_of(0)));
        (0..n).filter(|&i| self.block_end[i] <= k).all(|i| {
            let s = self.s_of(i);
            s > 0 && reference.is_none_or(|r| s == r)
        })
    }

    fn extend(&mut self, k: usize) {
        if !self.finished_points_ok(k) {
            return;
        }
        if k == self.types.len() {
            if !self.chosen.is_empty() {
                let lines = self
                    .chosen
                    .iter()
                    .map(|&i| {
                        let ty = &self.types[i];
                        OrbiLine::new(ty.b, ty.d, ty.incidences.clone())
                    })
                    .collect();
                self.found.push(lines);
            }
            return;
        }
        self.extend(k + 1);
        let ty = &self.types[k];
        let n = self.a.len();
        let pairs: Vec<usize> = ty
            .incidences
            .iter()
            .enumerate()
            .flat_map(|(x, &(p, _))| ty.incidences[x + 1..].iter().map(move |&(q, _)| p * n + q))
            .collect();
        if pairs.iter().any(|&i| self.pair_used[i]) {
            return;
        }
        let fits = ty.incidences.iter().zip(&ty.load).all(|(&(p, _), l)| {
            (self.load[p] + l) * self.a[p] as i64 <= self.s_max
        });
        if !fits {
            return;
        }
        for (&(p, _), l) in ty.incidences.iter().zip(&ty.load) {
            self.load[p] += l;
        }
        for &i in &pairs {
            self.pair_used[i] = true;
        }
        self.chosen.push(k);
        self.extend(k + 1);
        self.chosen.pop();
        for &i in &pairs {
            self.pair_used[i] = false;
        }
        for (&(p, _), l) in ty.incidences.iter().zip(&ty.load) {
            self.load[p] -= l;
        }
    }
}

/// Calls `f` with every permutation of `0..n`.
fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    f(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn encode(a: &[u64], lines: &[(u64, u64, Vec<(usize, u64)>)]) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend(a.iter().map(|&w| w as u8));
    out.push(255);
    for (b, d, inc) in lines {
        out.push(*b as u8);
        out.push(*d as u8);
        for &(p, c) in inc {
            out.push(p as u8);
            out.push(c as u8);
        }
        out.push(254);
    }
    out
}

/// Minimum encoding over relabellings that sort the point weights. Equal
/// keys mean isomorphic structures. Meant for small structures: the cost is
/// factorial in the number of points.
pub fn canonical_key(o: &OrbiIncidenceStructure) -> Vec<u8> {
    relabel_min(o, |o, map| {
        o.lines()
            .iter()
            .map(|l| (l.b(), l.d(), relabel(l.incidences(), map)))
            .collect()
    })
}

/// Like [`canonical_key`] but for the annotated Levi graph: each line
/// appears `d` times with its `b`, and `d` itself is not recorded.
pub fn levi_key(o: &OrbiIncidenceStructure) -> Vec<u8> {
    relabel_min(o, |o, map| {
        o.lines()
            .iter()
            .flat_map(|l| {
                let inc = relabel(l.incidences(), map);
                std::iter::repeat_n((l.b(), 0, inc), l.d() as usize)
            })
            .collect()
    })
}

fn relabel(inc: &[(usize, u64)], map: &[usize]) -> Vec<(usize, u64)> {
    let mut v: Vec<(usize, u64)> = inc.iter().map(|&(p, c)| (map[p], c)).collect();
    v.sort_unstable();
    v
}

fn relabel_min(
    o: &OrbiIncidenceStructure,
    lines_under: impl Fn(&OrbiIncidenceStructure, &[usize]) -> Vec<(u64, u64, Vec<(usize, u64)>)>,
) -> Vec<u8> {
    let a = o.point_weights();
    let mut sorted_a = a.to_vec();
    sorted_a.sort_unstable();
    let mut best: Option<Vec<u8>> = None;
    for_each_permutation(a.len(), |perm| {
        // perm[p] is the new label of p
        if a.iter().enumerate().any(|(p, &w)| sorted_a[perm[p]] != w) {
            return;
        }
        let mut lines = lines_under(o, perm);
        lines.sort();
        let key = encode(&sorted_a, &lines);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    });
    best.expect("at least one permutation")
}

/// Outcome of [`levi_conjecture_scan`].
#[derive(Debug, Clone)]
pub struct ScanReport {
    pub requested_points: usize,
    /// Point counts actually covered: `1..=scanned_points`.
    pub scanned_points: usize,
    pub max_weight: u64,
    pub line_sizes: Vec<u64>,
    pub s_max: u64,
    pub structures: usize,
    pub levi_classes: usize,
    /// Two structures with the same Levi graph that are not isomorphic.
    pub counterexample: Option<(OrbiIncidenceStructure, OrbiIncidenceStructure)>,
    /// False when the request exceeded [`MAX_SCAN_POINTS`].
    pub complete: bool,
}

/// Looks for two orbiconfigurations with up to `max_points` points,
/// weights at most 3, `t` in `{2, 3}` and `s <= 3` whose annotated Levi
/// graphs agree although the structures are not isomorphic.
pub fn levi_conjecture_scan(max_points: usize) -> ScanReport {
    let scanned = max_points.min(MAX_SCAN_POINTS);
    let max_weight = 3;
    let line_sizes = vec![2, 3];
    let mut classes: BTreeMap<Vec<u8>, OrbiIncidenceStructure> = BTreeMap::new();
    let mut structures = 0;
    let mut counterexample = None;
    'outer: for points in 1..=scanned {
        for &t in &line_sizes {
            let bounds = Bounds {
                points,
                max_weight,
                t,
                s_max: int(3),
                s_exact: None,
            };
            for o in enumerate(&bounds) {
                structures += 1;
                let key = levi_key(&o);
                match classes.get(&key) {
                    Some(prev) if orbi_isomorphic(prev, &o).is_none() => {
                        counterexample = Some((prev.clone(), o));
                        break 'outer;
                    }
                    Some(_) => {}
                    None => {
                        classes.insert(key, o);
                    }
                }
            }
        }
    }
    ScanReport {
        requested_points: max_points,
        scanned_points: scanned,
        max_weight,
        line_sizes,
        s_max: 3,
        structures,
        levi_classes: classes.len(),
        counterexample,
        complete: max_points <= MAX_SCAN_POINTS,
    }
}

/// Every connected orbiconfiguration with `s = t = 2`, at most `max_points`
/// points and weights at most `max_weight`.
pub fn n2_structures(max_points: usize, max_weight: u64) -> Vec<OrbiIncidenceStructure> {
    (1..=max_points)
        .flat_map(|points| {
            enumerate(&Bounds {
                points,
                max_weight,
                t: 2,
                s_max: int(2),
                s_exact: Some(int(2)),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;
    use crate::orbi::classify;
    use crate::orbi::Level;

    #[test]
    fn permutations_are_all_visited() {
        let mut count = 0;
        let mut seen = std::collections::HashSet::new();
        for_each_permutation(4, |p| {
            count += 1;
            seen.insert(p.to_vec());
        });
        assert_eq!(count, 24);
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn canonical_key_ignores_labels() {
        let x = library::half_weight_chain();
        let y = OrbiIncidenceStructure::new(
            vec![1, 2],
            vec![
                OrbiLine::new(2, 1, vec![(0, 2)]),
                OrbiLine::new(1, 1, vec![(0, 1), (1, 1)]),
            ],
        )
        .unwrap();
        assert_eq!(canonical_key(&x), canonical_key(&y));
        assert_ne!(canonical_key(&x), canonical_key(&library::bigon()));
    }

    #[test]
    fn small_n2_list_contains_the_known_forms() {
        let all = n2_structures(3, 2);
        for o in &all {
            assert_eq!(classify(o), Level::Orbiconfiguration);
            let p = o.params();
            assert!(p.s.iter().all(|&s| s == int(2)));
            assert!(p.t.iter().all(|&t| t == int(2)));
        }
        let keys: Vec<Vec<u8>> = all.iter().map(canonical_key).collect();
        for known in [
            library::loop_line(),
            library::bigon(),
            library::half_weight_chain(),
            OrbiIncidenceStructure::from_configuration(&library::polygon(3)),
        ] {
            assert!(keys.contains(&canonical_key(&known)), "{known}");
        }
        // one representative per class
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), keys.len());
    }

    #[test]
    fn scan_at_small_bound_finds_nothing() {
        let r = levi_conjecture_scan(2);
        assert!(r.complete);
        assert!(r.counterexample.is_none());
        assert!(r.structures > 0);
        assert_eq!(r.structures, r.levi_classes);
    }

    #[test]
    fn oversized_request_is_partial() {
        let r = levi_conjecture_scan(MAX_SCAN_POINTS + 3);
        assert!(!r.complete);
        assert_eq!(r.scanned_points, MAX_SCAN_POINTS);
    }
}
