//! Permutations of configurations and materialised permutation groups.
//!
//! A [`Permutation`] is stored by its point images; the induced line images
//! are derived when it is built against a configuration and carried along so
//! that compositions stay consistent. Groups keep every element, sorted by
//! point images, which keeps all iteration deterministic. Desk-scale groups
//! (a few thousand elements) are the intended size.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::incidence::Configuration;
use crate::search::{IsoSearch, SearchOutcome};
use crate::BudgetExceeded;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("expected {expected} point images, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("point images are not a bijection")]
    NotBijective,
    #[error("the point map does not send every line onto a line")]
    NotAnAutomorphism,
    #[error("bad cycle notation: {0}")]
    Syntax(String),
    #[error("point {point} is outside 1..={n}")]
    OutOfRange { point: usize, n: usize },
    #[error("point {0} appears twice")]
    Repeated(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    points: Vec<usize>,
    lines: Vec<usize>,
}

impl Permutation {
    pub fn identity(point_count: usize, line_count: usize) -> Self {
        Self {
            points: (0..point_count).collect(),
            lines: (0..line_count).collect(),
        }
    }

    /// Builds an automorphism of `config` from 0-based point images.
    pub fn automorphism(config: &Configuration, images: Vec<usize>) -> Result<Self, PermError> {
        if images.len() != config.point_count() {
            return Err(PermError::WrongLength {
                expected: config.point_count(),
                got: images.len(),
            });
        }
        let mut seen = vec![false; images.len()];
        for &q in &images {
            if q >= images.len() || std::mem::replace(&mut seen[q], true) {
                return Err(PermError::NotBijective);
            }
        }
        let lines = config
            .induced_line_map(&images)
            .ok_or(PermError::NotAnAutomorphism)?;
        Ok(Self {
            points: images,
            lines,
        })
    }

    /// Parses 1-based cycle notation such as `(1 4)(3 5)` into an automorphism.
    pub fn parse(config: &Configuration, text: &str) -> Result<Self, PermError> {
        Self::automorphism(config, parse_cycles(text, config.point_count())?)
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn lines(&self) -> &[usize] {
        &self.lines
    }

    pub fn point(&self, p: usize) -> usize {
        self.points[p]
    }

    pub fn line(&self, l: usize) -> usize {
        self.lines[l]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            points: other.points.iter().map(|&p| self.points[p]).collect(),
            lines: other.lines.iter().map(|&l| self.lines[l]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            points: invert(&self.points),
            lines: invert(&self.lines),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.points.iter().enumerate().all(|(i, &p)| i == p)
            && self.lines.iter().enumerate().all(|(i, &l)| i == l)
    }

    pub fn order(&self) -> usize {
        cycles(&self.points)
            .iter()
            .chain(cycles(&self.lines).iter())
            .fold(1, |acc, c| acc.lcm(&c.len()))
    }

    /// Disjoint cycles on points, fixed points included as 1-cycles.
    pub fn point_cycles(&self) -> Vec<Vec<usize>> {
        cycles(&self.points)
    }

    pub fn line_cycles(&self) -> Vec<Vec<usize>> {
        cycles(&self.lines)
    }

    pub fn fixed_point(&self) -> Option<usize> {
        self.points.iter().enumerate().position(|(i, &p)| i == p)
    }

    pub fn fixed_line(&self) -> Option<usize> {
        self.lines.iter().enumerate().position(|(i, &l)| i == l)
    }

    /// 1-based cycle notation of the point action, `()` for the identity.
    pub fn cycle_notation(&self) -> String {
        let mut out = String::new();
        for c in cycles(&self.points).into_iter().filter(|c| c.len() > 1) {
            out.push('(');
            let parts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            out.push_str(&parts.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_notation())
    }
}

fn invert(images: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; images.len()];
    for (i, &p) in images.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

fn cycles(images: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; images.len()];
    let mut out = Vec::new();
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut c = vec![start];
        seen[start] = true;
        let mut x = images[start];
        while x != start {
            seen[x] = true;
            c.push(x);
            x = images[x];
        }
        out.push(c);
    }
    out
}

/// Parses 1-based cycle notation on `n` points into 0-based images.
pub fn parse_cycles(text: &str, n: usize) -> Result<Vec<usize>, PermError> {
    let mut images: Vec<usize> = (0..n).collect();
    let mut touched = vec![false; n];
    let mut rest = text.trim();
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| PermError::Syntax(format!("expected '(' at {rest:?}")))?;
        let close = open
            .find(')')
            .ok_or_else(|| PermError::Syntax("unclosed cycle".into()))?;
        let body = &open[..close];
        let mut cycle = Vec::new();
        for tok in body.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let p: usize = tok
                .parse()
                .map_err(|_| PermError::Syntax(format!("not a point: {tok:?}")))?;
            if p == 0 || p > n {
                return Err(PermError::OutOfRange { point: p, n });
            }
            if std::mem::replace(&mut touched[p - 1], true) {
                return Err(PermError::Repeated(p));
            }
            cycle.push(p - 1);
        }
        for (k, &p) in cycle.iter().enumerate() {
            images[p] = cycle[(k + 1) % cycle.len()];
        }
        rest = open[close + 1..].trim_start();
    }
    Ok(images)
}

/// A finite group of permutations with every element materialised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationGroup {
    point_count: usize,
    line_count: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermutationGroup {
    pub fn trivial(point_count: usize, line_count: usize) -> Self {
        Self {
            point_count,
            line_count,
            generators: Vec::new(),
            elements: vec![Permutation::identity(point_count, line_count)],
        }
    }

    pub fn trivial_on(config: &Configuration) -> Self {
        Self::trivial(config.point_count(), config.line_count())
    }

    /// The group generated by `generators`, failing above `max_elements`.
    pub fn generate(
        point_count: usize,
        line_count: usize,
        generators: Vec<Permutation>,
        max_elements: usize,
    ) -> Result<Self, BudgetExceeded> {
        let identity = Permutation::identity(point_count, line_count);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(e) = queue.pop_front() {
            for g in &generators {
                let next = g.compose(&e);
                if !seen.contains(&next) {
                    if seen.len() >= max_elements {
                        return Err(BudgetExceeded {
                            explored: seen.len() as u64,
                        });
                    }
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort();
        let generators = generators.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(Self {
            point_count,
            line_count,
            generators,
            elements,
        })
    }

    /// Group generated by automorphisms of `config` given in cycle notation.
    pub fn from_cycle_notation(config: &Configuration, gens: &[&str]) -> Result<Self, PermError> {
        let generators = gens
            .iter()
            .map(|g| Permutation::parse(config, g))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::generate(
            config.point_count(),
            config.line_count(),
            generators,
            crate::DEFAULT_GROUP_BUDGET,
        )
        .expect("automorphism group of a configuration fits the default budget"))
    }

    fn from_sorted_elements(
        point_count: usize,
        line_count: usize,
        mut elements: Vec<Permutation>,
    ) -> Self {
        elements.sort();
        let generators = small_generating_set(&elements);
        Self {
            point_count,
            line_count,
            generators,
            elements,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    pub fn line_count(&self) -> usize {
        self.line_count
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }

    /// An element generating the whole group, if the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<&Permutation> {
        self.elements.iter().find(|e| e.order() == self.order())
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic_generator().is_some()
    }

    /// Whether every element is an automorphism of `config`.
    pub fn acts_on(&self, config: &Configuration) -> bool {
        self.point_count == config.point_count()
            && self.line_count == config.line_count()
            && self
                .elements
                .iter()
                .all(|e| config.induced_line_map(e.points()).as_deref() == Some(e.lines()))
    }

    /// Generators (cycle notation) plus order.
    pub fn summary(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| g.cycle_notation()).collect();
        format!("order {} generated by [{}]", self.order(), gens.join(", "))
    }
}

/// Greedy generating set: walk elements in order, keep those not yet generated.
fn small_generating_set(elements: &[Permutation]) -> Vec<Permutation> {
    let Some(first) = elements.first() else {
        return Vec::new();
    };
    let mut gens: Vec<Permutation> = Vec::new();
    let mut span: HashSet<Permutation> = HashSet::from([Permutation::identity(
        first.points.len(),
        first.lines.len(),
    )]);
    // prefer high-order elements so cyclic groups get a single generator
    let mut candidates: Vec<&Permutation> = elements.iter().collect();
    candidates.sort_by_key(|e| std::cmp::Reverse(e.order()));
    for e in candidates {
        if span.len() == elements.len() {
            break;
        }
        if span.contains(e) {
            continue;
        }
        gens.push(e.clone());
        let mut queue: VecDeque<Permutation> = span.iter().cloned().collect();
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = g.compose(&x);
                if span.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
    }
    gens
}

/// The full automorphism group of `config`.
pub fn automorphism_group(config: &Configuration) -> Result<PermutationGroup, BudgetExceeded> {
    automorphism_group_within(config, crate::DEFAULT_NODE_BUDGET)
}

pub fn automorphism_group_within(
    config: &Configuration,
    node_budget: u64,
) -> Result<PermutationGroup, BudgetExceeded> {
    let images = automorphisms_matching(config, None, node_budget)?;
    Ok(group_from_images(config, images))
}

pub(crate) fn automorphisms_matching(
    config: &Configuration,
    allowed: Option<&dyn Fn(usize, usize) -> bool>,
    node_budget: u64,
) -> Result<Vec<Vec<usize>>, BudgetExceeded> {
    let mut search = IsoSearch::new(config, config, node_budget);
    search.allowed = allowed;
    match search.run() {
        SearchOutcome::Done(found) => Ok(found),
        SearchOutcome::Budget(explored) => Err(BudgetExceeded { explored }),
    }
}

pub(crate) fn group_from_images(config: &Configuration, images: Vec<Vec<usize>>) -> PermutationGroup {
    let elements = images
        .into_iter()
        .map(|img| Permutation::automorphism(config, img).expect("search yields automorphisms"))
        .collect();
    PermutationGroup::from_sorted_elements(config.point_count(), config.line_count(), elements)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Points,
    Lines,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    pub domain: Domain,
    /// Blocks sorted by smallest member; members ascending.
    pub blocks: Vec<Vec<usize>>,
}

impl OrbitPartition {
    pub fn is_transitive(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// `block_of[x]` is the index of the block containing `x`.
    pub fn block_index(&self) -> Vec<usize> {
        let size = self.blocks.iter().map(Vec::len).sum();
        let mut idx = vec![0; size];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                idx[x] = b;
            }
        }
        idx
    }
}

pub fn orbits(group: &PermutationGroup, domain: Domain) -> OrbitPartition {
    let size = match domain {
        Domain::Points => group.point_count,
        Domain::Lines => group.line_count,
    };
    let mut uf = crate::incidence::UnionFind::new(size);
    let movers = if group.generators.is_empty() {
        &group.elements
    } else {
        &group.generators
    };
    for g in movers {
        let images = match domain {
            Domain::Points => g.points(),
            Domain::Lines => g.lines(),
        };
        for (x, &y) in images.iter().enumerate() {
            uf.union(x, y);
        }
    }
    let mut by_root: HashMap<usize, Vec<usize>> = HashMap::new();
    for x in 0..size {
        by_root.entry(uf.find(x)).or_default().push(x);
    }
    let mut blocks: Vec<Vec<usize>> = by_root.into_values().collect();
    blocks.sort();
    OrbitPartition { domain, blocks }
}

/// Subgroups found by [`subgroups`]; `complete` is false when the budget ran
/// out before the closure search finished.
#[derive(Debug, Clone)]
pub struct SubgroupList {
    pub groups: Vec<PermutationGroup>,
    pub complete: bool,
}

/// Every subgroup of order at most `max_order`.
///
/// Starts from the cyclic subgroups and repeatedly joins a found subgroup
/// with one more element, deduplicating by element set. Any subgroup `K` is
/// reached through a chain of subgroups of `K`, so capping the order while
/// joining loses nothing. `closure_budget` caps the number of joins tried.
pub fn subgroups(group: &PermutationGroup, max_order: Option<usize>, closure_budget: usize) -> SubgroupList {
    let elems = &group.elements;
    let size = elems.len();
    let cap = max_order.unwrap_or(size);
    let index: HashMap<&[usize], usize> = elems
        .iter()
        .enumerate()
        .map(|(i, e)| (e.points(), i))
        .collect();
    let mut table = vec![0u32; size * size];
    for (i, a) in elems.iter().enumerate() {
        for (j, b) in elems.iter().enumerate() {
            table[i * size + j] = index[a.compose(b).points()] as u32;
        }
    }
    let identity = elems.iter().position(|e| e.is_identity()).expect("group has identity");
    let words = size.div_ceil(64);
    let closure = |gens: &[u32]| -> Vec<u64> {
        let mut bits = vec![0u64; words];
        bits[identity / 64] |= 1 << (identity % 64);
        let mut queue = vec![identity as u32];
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = table[g as usize * size + x as usize];
                let (w, b) = (y as usize / 64, y % 64);
                if bits[w] & (1 << b) == 0 {
                    bits[w] |= 1 << b;
                    queue.push(y);
                }
            }
        }
        bits
    };
    let count = |bits: &[u64]| bits.iter().map(|w| w.count_ones() as usize).sum::<usize>();
    let has = |bits: &[u64], x: usize| bits[x / 64] & (1 << (x % 64)) != 0;

    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut found: Vec<(Vec<u64>, Vec<u32>)> = Vec::new();
    let trivial = closure(&[]);
    seen.insert(trivial.clone());
    found.push((trivial, Vec::new()));
    let mut closures = 0usize;
    let mut complete = true;
    for g in 0..size as u32 {
        let bits = closure(&[g]);
        if count(&bits) <= cap && seen.insert(bits.clone()) {
            found.push((bits, vec![g]));
        }
    }
    let mut head = 1;
    'outer: while head < found.len() {
        let (bits, gens) = found[head].clone();
        head += 1;
        for g in 0..size {
            if has(&bits, g) {
                continue;
            }
            closures += 1;
            if closures > closure_budget {
                complete = false;
                break 'outer;
            }
            let mut next_gens = gens.clone();
            next_gens.push(g as u32);
            let next = closure(&next_gens);
            if count(&next) <= cap && seen.insert(next.clone()) {
                found.push((next, next_gens));
            }
        }
    }
    let mut groups: Vec<(Vec<usize>, PermutationGroup)> = found
        .into_iter()
        .map(|(bits, gens)| {
            let members: Vec<usize> = (0..size).filter(|&x| has(&bits, x)).collect();
            let g = PermutationGroup {
                point_count: group.point_count,
                line_count: group.line_count,
                generators: gens.iter().map(|&i| elems[i as usize].clone()).collect(),
                elements: members.iter().map(|&i| elems[i].clone()).collect(),
            };
            (members, g)
        })
        .collect();
    groups.sort_by(|a, b| a.1.order().cmp(&b.1.order()).then_with(|| a.0.cmp(&b.0)));
    SubgroupList {
        groups: groups.into_iter().map(|(_, g)| g).collect(),
        complete,
    }
}

/// What a non-identity element fixes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fixed {
    Point(usize),
    Line(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotSemiregular {
    pub element: Permutation,
    pub fixed: Fixed,
}

/// `Ok` iff every non-identity element fixes no point and no line.
pub fn is_semiregular(group: &PermutationGroup) -> Result<(), NotSemiregular> {
    for e in group.elements.iter().filter(|e| !e.is_identity()) {
        if let Some(p) = e.fixed_point() {
            return Err(NotSemiregular {
                element: e.clone(),
                fixed: Fixed::Point(p),
            });
        }
        if let Some(l) = e.fixed_line() {
            return Err(NotSemiregular {
                element: e.clone(),
                fixed: Fixed::Line(l),
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleViolation {
    pub element: Permutation,
    pub domain: Domain,
    /// Sorted cycle lengths found.
    pub cycle_lengths: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleReport {
    /// Non-identity elements examined.
    pub checked: usize,
    pub violations: Vec<CycleViolation>,
}

impl CycleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that each non-identity element of order `k` is a product of `n/k`
/// disjoint `k`-cycles on points and `m/k` on lines. A violation means the
/// group is not semiregular.
pub fn cycle_structure_check(group: &PermutationGroup) -> CycleReport {
    let mut violations = Vec::new();
    let mut checked = 0;
    for e in group.elements.iter().filter(|e| !e.is_identity()) {
        checked += 1;
        let k = e.order();
        for (domain, cs) in [(Domain::Points, e.point_cycles()), (Domain::Lines, e.line_cycles())] {
            if cs.iter().any(|c| c.len() != k) {
                let mut cycle_lengths: Vec<usize> = cs.iter().map(Vec::len).collect();
                cycle_lengths.sort_unstable();
                violations.push(CycleViolation {
                    element: e.clone(),
                    domain,
                    cycle_lengths,
                });
            }
        }
    }
    CycleReport { checked, violations }
}

/// Passes unless some orbit size has no divisor `d > 1` of `candidate_order`
/// dividing it; returns that orbit size on failure. A group of that order
/// would have to fix something in the orbit, so it cannot act semiregularly.
pub fn orbit_divisibility_filter(orbit_sizes: &[usize], candidate_order: usize) -> Result<(), usize> {
    for &k in orbit_sizes {
        let ok = (2..=candidate_order).any(|d| candidate_order % d == 0 && k % d == 0);
        if !ok {
            return Err(k);
        }
    }
    Ok(())
}
