//! Incidence structures and the configuration axioms.
//!
//! An [`IncidenceStructure`] is a point count plus a list of lines, each line a
//! set of points. A [`Configuration`] is a validated structure in which every
//! pair of points lies on at most one line, every point is on `s` lines, every
//! line has `t >= 2` points, and the Levi graph is connected.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::search::{IsoSearch, SearchOutcome};
use crate::BudgetExceeded;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IncidenceError {
    #[error("a structure needs at least one point")]
    NoPoints,
    #[error("line {line} is empty")]
    EmptyLine { line: usize },
    #[error("line {line} mentions point {point}, outside 1..={point_count}")]
    PointOutOfRange {
        line: usize,
        point: usize,
        point_count: usize,
    },
    #[error("line {line} repeats point {point}")]
    RepeatedPoint { line: usize, point: usize },
    #[error("lines {first} and {second} are the same set of points")]
    DuplicateLine { first: usize, second: usize },
    #[error("mod notation needs a modulus of at least 3, got {0}")]
    ModulusTooSmall(usize),
    #[error("mod notation needs a non-empty base line")]
    EmptyBaseLine,
    #[error("residue {residue} is outside 1..={modulus}")]
    ResidueOutOfRange { residue: usize, modulus: usize },
    #[error("residue {0} is repeated in the base line")]
    RepeatedResidue(usize),
}

/// Points `0..point_count` and lines as sorted point lists.
///
/// Lines are kept in the order given; each line's points are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IncidenceStructure {
    point_count: usize,
    lines: Vec<Vec<usize>>,
}

impl IncidenceStructure {
    /// Builds a structure from 0-based point indices.
    pub fn new(point_count: usize, lines: Vec<Vec<usize>>) -> Result<Self, IncidenceError> {
        if point_count == 0 {
            return Err(IncidenceError::NoPoints);
        }
        let mut sorted = Vec::with_capacity(lines.len());
        for (j, mut line) in lines.into_iter().enumerate() {
            if line.is_empty() {
                return Err(IncidenceError::EmptyLine { line: j + 1 });
            }
            line.sort_unstable();
            for w in line.windows(2) {
                if w[0] == w[1] {
                    return Err(IncidenceError::RepeatedPoint {
                        line: j + 1,
                        point: w[0] + 1,
                    });
                }
            }
            if let Some(&p) = line.iter().find(|&&p| p >= point_count) {
                return Err(IncidenceError::PointOutOfRange {
                    line: j + 1,
                    point: p + 1,
                    point_count,
                });
            }
            sorted.push(line);
        }
        let mut seen = std::collections::HashMap::new();
        for (j, line) in sorted.iter().enumerate() {
            if let Some(first) = seen.insert(line.clone(), j) {
                return Err(IncidenceError::DuplicateLine {
                    first: first + 1,
                    second: j + 1,
                });
            }
        }
        Ok(Self {
            point_count,
            lines: sorted,
        })
    }

    /// Builds a structure from 1-based point labels.
    pub fn from_one_based(point_count: usize, lines: &[&[usize]]) -> Result<Self, IncidenceError> {
        let mut zero = Vec::with_capacity(lines.len());
        for (j, line) in lines.iter().enumerate() {
            let mut l = Vec::with_capacity(line.len());
            for &p in line.iter() {
                if p == 0 || p > point_count {
                    return Err(IncidenceError::PointOutOfRange {
                        line: j + 1,
                        point: p,
                        point_count,
                    });
                }
                l.push(p - 1);
            }
            zero.push(l);
        }
        Self::new(point_count, zero)
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    pub fn line(&self, j: usize) -> &[usize] {
        &self.lines[j]
    }

    /// For every point, the indices of the lines through it (ascending).
    pub fn point_lines(&self) -> Vec<Vec<usize>> {
        let mut through = vec![Vec::new(); self.point_count];
        for (j, line) in self.lines.iter().enumerate() {
            for &p in line {
                through[p].push(j);
            }
        }
        through
    }

    /// Index of the line equal to `points` as a set, if any.
    pub fn find_line(&self, points: &[usize]) -> Option<usize> {
        let mut key = points.to_vec();
        key.sort_unstable();
        self.lines.iter().position(|l| *l == key)
    }

    /// Same structure with lines in lexicographic order.
    pub fn canonical(&self) -> Self {
        let mut lines = self.lines.clone();
        lines.sort();
        Self {
            point_count: self.point_count,
            lines,
        }
    }

    /// Number of connected components of the Levi graph.
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.point_count);
        for line in &self.lines {
            for w in line.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        (0..self.point_count).filter(|&p| uf.find(p) == p).count()
    }

    /// Structure with points and lines exchanged: dual point `j` is line `j`,
    /// dual line `i` holds the lines through point `i`.
    pub fn dual(&self) -> Result<Self, IncidenceError> {
        Self::new(self.lines.len().max(1), self.point_lines())
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// The four numbers `(n_s, m_t)` of a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConfigurationParams {
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub t: usize,
}

/// Printed alongside parameter reports. Both identities are stated in the
/// double-counting orientation.
pub const PARAMS_NOTE: &str =
    "note: incidences double count as n*s = m*t; bounds are n >= s(t-1)+1 and m >= t(s-1)+1";

impl ConfigurationParams {
    /// `n*s == m*t`.
    pub fn incidence_identity_holds(&self) -> bool {
        self.n * self.s == self.m * self.t
    }

    /// `n >= s(t-1)+1` and `m >= t(s-1)+1`.
    pub fn bounds_hold(&self) -> bool {
        self.t >= 1
            && self.s >= 1
            && self.n > self.s * (self.t - 1)
            && self.m > self.t * (self.s - 1)
    }

    /// Smallest possible point count for a configuration with these `s,t`.
    pub fn min_points(&self) -> usize {
        self.s * (self.t - 1) + 1
    }

    /// Smallest possible line count for a configuration with these `s,t`.
    pub fn min_lines(&self) -> usize {
        self.t * (self.s - 1) + 1
    }

    pub fn dual(&self) -> Self {
        Self {
            n: self.m,
            m: self.n,
            s: self.t,
            t: self.s,
        }
    }
}

impl fmt::Display for ConfigurationParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}_{}, {}_{})", self.n, self.s, self.m, self.t)
    }
}

/// Two points on two different lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairViolation {
    pub points: (usize, usize),
    pub lines: (usize, usize),
}

/// Two objects whose degree differs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeMismatch {
    pub first: (usize, usize),
    pub second: (usize, usize),
}

/// Each configuration axiom checked independently.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub pair_violation: Option<PairViolation>,
    pub component_count: usize,
    /// `(point, lines-through-it)` for two points that disagree.
    pub point_degree_mismatch: Option<DegreeMismatch>,
    /// `(line, points-on-it)` for two lines that disagree.
    pub line_size_mismatch: Option<DegreeMismatch>,
    /// Some line has fewer than two points.
    pub short_line: Option<usize>,
    pub configuration: Option<Configuration>,
}

impl ValidationReport {
    pub fn pair_axiom(&self) -> bool {
        self.pair_violation.is_none()
    }

    pub fn connected(&self) -> bool {
        self.component_count == 1
    }

    pub fn s_constant(&self) -> bool {
        self.point_degree_mismatch.is_none()
    }

    pub fn t_constant(&self) -> bool {
        self.line_size_mismatch.is_none()
    }

    pub fn is_configuration(&self) -> bool {
        self.configuration.is_some()
    }

    /// One human readable line per violated axiom (1-based).
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(v) = self.pair_violation {
            out.push(format!(
                "pair axiom: points {} and {} are on lines {} and {}",
                v.points.0 + 1,
                v.points.1 + 1,
                v.lines.0 + 1,
                v.lines.1 + 1
            ));
        }
        if self.component_count != 1 {
            out.push(format!(
                "connectivity: {} components",
                self.component_count
            ));
        }
        if let Some(d) = self.point_degree_mismatch {
            out.push(format!(
                "s not constant: point {} is on {} lines, point {} is on {}",
                d.first.0 + 1,
                d.first.1,
                d.second.0 + 1,
                d.second.1
            ));
        }
        if let Some(d) = self.line_size_mismatch {
            out.push(format!(
                "t not constant: line {} has {} points, line {} has {}",
                d.first.0 + 1,
                d.first.1,
                d.second.0 + 1,
                d.second.1
            ));
        }
        if let Some(j) = self.short_line {
            out.push(format!("line {} has fewer than 2 points", j + 1));
        }
        out
    }
}

#[derive(Debug, Clone, Error)]
#[error("not a configuration: {}", .0.violations().join("; "))]
pub struct NotAConfiguration(pub Box<ValidationReport>);

#[derive(Debug, Clone, Error)]
pub enum DualError {
    #[error("dual is not an incidence structure: {0}")]
    Structure(#[from] IncidenceError),
    #[error(transparent)]
    NotAConfiguration(#[from] NotAConfiguration),
}

/// Checks every configuration axiom on `structure`.
pub fn validate(structure: &IncidenceStructure) -> ValidationReport {
    let n = structure.point_count;
    let mut owner: Vec<Option<usize>> = vec![None; n * n];
    let mut pair_violation = None;
    'outer: for (j, line) in structure.lines.iter().enumerate() {
        for (a, &p) in line.iter().enumerate() {
            for &q in &line[a + 1..] {
                match owner[p * n + q] {
                    Some(other) => {
                        pair_violation = Some(PairViolation {
                            points: (p, q),
                            lines: (other, j),
                        });
                        break 'outer;
                    }
                    None => owner[p * n + q] = Some(j),
                }
            }
        }
    }
    let through = structure.point_lines();
    let point_degree_mismatch = first_mismatch(through.iter().map(Vec::len));
    let line_size_mismatch = first_mismatch(structure.lines.iter().map(Vec::len));
    let short_line = structure.lines.iter().position(|l| l.len() < 2);
    let component_count = structure.component_count();

    let ok = pair_violation.is_none()
        && point_degree_mismatch.is_none()
        && line_size_mismatch.is_none()
        && short_line.is_none()
        && component_count == 1
        && !structure.lines.is_empty();
    let configuration = ok.then(|| Configuration::assemble(structure.clone(), through));
    ValidationReport {
        pair_violation,
        component_count,
        point_degree_mismatch,
        line_size_mismatch,
        short_line,
        configuration,
    }
}

fn first_mismatch(mut degrees: impl Iterator<Item = usize>) -> Option<DegreeMismatch> {
    let first = degrees.next()?;
    degrees
        .enumerate()
        .find(|&(_, d)| d != first)
        .map(|(i, d)| DegreeMismatch {
            first: (0, first),
            second: (i + 1, d),
        })
}

/// A validated `(n_s, m_t)` configuration.
#[derive(Debug, Clone)]
pub struct Configuration {
    structure: IncidenceStructure,
    params: ConfigurationParams,
    point_lines: Vec<Vec<usize>>,
    /// `pair_line[p * n + q]` is the line through `p != q`, or `NO_LINE`.
    pair_line: Vec<u32>,
}

pub(crate) const NO_LINE: u32 = u32::MAX;

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        self.structure == other.structure
    }
}

impl Eq for Configuration {}

impl Configuration {
    pub fn new(structure: IncidenceStructure) -> Result<Self, NotAConfiguration> {
        let report = validate(&structure);
        match report.configuration {
            Some(c) => Ok(c),
            None => Err(NotAConfiguration(Box::new(report))),
        }
    }

    fn assemble(structure: IncidenceStructure, point_lines: Vec<Vec<usize>>) -> Self {
        let n = structure.point_count;
        let mut pair_line = vec![NO_LINE; n * n];
        for (j, line) in structure.lines.iter().enumerate() {
            for &p in line {
                for &q in line {
                    if p != q {
                        pair_line[p * n + q] = j as u32;
                    }
                }
            }
        }
        let params = ConfigurationParams {
            n,
            m: structure.lines.len(),
            s: point_lines[0].len(),
            t: structure.lines[0].len(),
        };
        debug_assert!(params.incidence_identity_holds());
        Self {
            structure,
            params,
            point_lines,
            pair_line,
        }
    }

    pub fn structure(&self) -> &IncidenceStructure {
        &self.structure
    }

    pub fn params(&self) -> ConfigurationParams {
        self.params
    }

    pub fn point_count(&self) -> usize {
        self.params.n
    }

    pub fn line_count(&self) -> usize {
        self.params.m
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.structure.lines
    }

    pub fn line(&self, j: usize) -> &[usize] {
        &self.structure.lines[j]
    }

    pub fn lines_through(&self, p: usize) -> &[usize] {
        &self.point_lines[p]
    }

    /// The line through two distinct points, if they are collinear.
    pub fn line_through(&self, p: usize, q: usize) -> Option<usize> {
        let l = self.pair_line[p * self.params.n + q];
        (l != NO_LINE).then_some(l as usize)
    }

    pub fn find_line(&self, points: &[usize]) -> Option<usize> {
        match points {
            [] => None,
            [p] => self
                .point_lines[*p]
                .iter()
                .copied()
                .find(|&j| self.structure.lines[j].len() == 1),
            [p, q, ..] => {
                let j = self.line_through(*p, *q)?;
                let mut key = points.to_vec();
                key.sort_unstable();
                (self.structure.lines[j] == key).then_some(j)
            }
        }
    }

    /// The dual configuration. Fails only when `s = 1` (a single line),
    /// whose dual repeats a one-point line.
    pub fn dual(&self) -> Result<Self, DualError> {
        Ok(Self::new(self.structure.dual()?)?)
    }

    /// Some point bijection carrying the lines of `self` onto those of `other`.
    pub fn find_isomorphism(&self, other: &Self) -> Option<Vec<usize>> {
        self.find_isomorphism_within(other, crate::DEFAULT_NODE_BUDGET)
            .ok()
            .flatten()
    }

    pub fn find_isomorphism_within(
        &self,
        other: &Self,
        budget: u64,
    ) -> Result<Option<Vec<usize>>, BudgetExceeded> {
        if self.params != other.params {
            return Ok(None);
        }
        let mut search = IsoSearch::new(self, other, budget);
        search.limit = Some(1);
        match search.run() {
            SearchOutcome::Done(mut found) => Ok(found.pop()),
            SearchOutcome::Budget(explored) => Err(BudgetExceeded { explored }),
        }
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.find_isomorphism(other).is_some()
    }

    /// Whether `images` (a point map) sends every line onto a line.
    pub fn is_automorphism(&self, images: &[usize]) -> bool {
        self.induced_line_map(images).is_some()
    }

    /// The line permutation induced by a point bijection, if it exists.
    pub fn induced_line_map(&self, images: &[usize]) -> Option<Vec<usize>> {
        if images.len() != self.params.n {
            return None;
        }
        let mut seen = vec![false; self.params.n];
        for &q in images {
            if q >= self.params.n || std::mem::replace(&mut seen[q], true) {
                return None;
            }
        }
        let mut used = vec![false; self.params.m];
        let mut out = Vec::with_capacity(self.params.m);
        for line in &self.structure.lines {
            let image: Vec<usize> = line.iter().map(|&p| images[p]).collect();
            let j = self.find_line(&image)?;
            if std::mem::replace(&mut used[j], true) {
                return None;
            }
            out.push(j);
        }
        Some(out)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} configuration", self.params)
    }
}

/// Result of expanding a base line modulo `modulus`.
#[derive(Debug, Clone)]
pub struct ModExpansion {
    pub structure: IncidenceStructure,
    /// Number of translates before coinciding lines were merged.
    pub raw_line_count: usize,
}

/// Lines `{r + k mod modulus}` for `k = 0..modulus`, on the points
/// `1..=modulus`. `base_line` holds 1-based residues.
pub fn from_mod_notation(base_line: &[usize], modulus: usize) -> Result<ModExpansion, IncidenceError> {
    if base_line.is_empty() {
        return Err(IncidenceError::EmptyBaseLine);
    }
    if modulus < 3 {
        return Err(IncidenceError::ModulusTooSmall(modulus));
    }
    let mut residues = BTreeSet::new();
    for &r in base_line {
        if r == 0 || r > modulus {
            return Err(IncidenceError::ResidueOutOfRange { residue: r, modulus });
        }
        if !residues.insert(r - 1) {
            return Err(IncidenceError::RepeatedResidue(r));
        }
    }
    let mut lines: Vec<Vec<usize>> = Vec::with_capacity(modulus);
    let mut seen = std::collections::HashSet::new();
    for k in 0..modulus {
        let mut line: Vec<usize> = residues.iter().map(|&r| (r + k) % modulus).collect();
        line.sort_unstable();
        if seen.insert(line.clone()) {
            lines.push(line);
        }
    }
    Ok(ModExpansion {
        structure: IncidenceStructure::new(modulus, lines)?,
        raw_line_count: modulus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fano() -> Configuration {
        Configuration::new(from_mod_notation(&[1, 2, 4], 7).unwrap().structure).unwrap()
    }

    #[test]
    fn fano_is_a_7_3_configuration() {
        let c = fano();
        let p = c.params();
        assert_eq!((p.n, p.m, p.s, p.t), (7, 7, 3, 3));
        assert!(p.incidence_identity_holds() && p.bounds_hold());
        assert_eq!(c.line(1), &[1, 2, 4]);
    }

    #[test]
    fn pair_axiom_witness() {
        let s = IncidenceStructure::from_one_based(3, &[&[1, 2], &[1, 2, 3]]).unwrap();
        let r = validate(&s);
        let v = r.pair_violation.unwrap();
        assert_eq!(v.points, (0, 1));
        assert_eq!(v.lines, (0, 1));
        assert!(r.configuration.is_none());
    }

    #[test]
    fn disjoint_triangles_are_disconnected() {
        let s = IncidenceStructure::from_one_based(
            6,
            &[&[1, 2], &[2, 3], &[1, 3], &[4, 5], &[5, 6], &[4, 6]],
        )
        .unwrap();
        let r = validate(&s);
        assert!(r.pair_axiom());
        assert!(!r.connected());
        assert_eq!(r.component_count, 2);
        assert!(r.s_constant() && r.t_constant());
        assert!(!r.is_configuration());
    }

    #[test]
    fn k33_edges_give_6_9_3_2_and_its_dual() {
        // edges of K_{3,3}
        let mut lines = Vec::new();
        for a in 0..3 {
            for b in 3..6 {
                lines.push(vec![a, b]);
            }
        }
        let c = Configuration::new(IncidenceStructure::new(6, lines).unwrap()).unwrap();
        let p = c.params();
        assert_eq!((p.n, p.m, p.s, p.t), (6, 9, 3, 2));
        assert_eq!(p.n * p.s, 18);
        assert_eq!(p.m * p.t, 18);
        let d = c.dual().unwrap().params();
        assert_eq!((d.n, d.m, d.s, d.t), (9, 6, 2, 3));
    }

    #[test]
    fn complete_graph_k6_breaks_the_uncorrected_bound() {
        let mut lines = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                lines.push(vec![a, b]);
            }
        }
        let p = Configuration::new(IncidenceStructure::new(6, lines).unwrap())
            .unwrap()
            .params();
        assert_eq!((p.n, p.s, p.t), (6, 5, 2));
        assert!(p.bounds_hold());
        // t(s-1)+1 = 9 > 6 = n: the other orientation fails here
        assert!(p.t * (p.s - 1) + 1 > p.n);
    }

    #[test]
    fn mod_notation_dedups_symmetric_bases() {
        let e = from_mod_notation(&[1, 4], 6).unwrap();
        assert_eq!(e.raw_line_count, 6);
        assert_eq!(e.structure.line_count(), 3);
        assert!(from_mod_notation(&[], 7).is_err());
        assert!(from_mod_notation(&[1, 8], 7).is_err());
        assert!(from_mod_notation(&[1, 2], 2).is_err());
    }

    #[test]
    fn mod_14_is_a_14_3_configuration() {
        let c = Configuration::new(from_mod_notation(&[1, 2, 4], 14).unwrap().structure).unwrap();
        let p = c.params();
        assert_eq!((p.n, p.m, p.s, p.t), (14, 14, 3, 3));
    }

    #[test]
    fn duplicate_lines_rejected() {
        let err = IncidenceStructure::from_one_based(3, &[&[1, 2], &[2, 1]]).unwrap_err();
        assert_eq!(err, IncidenceError::DuplicateLine { first: 1, second: 2 });
    }

    #[test]
    fn single_line_has_no_dual_configuration() {
        let c = Configuration::new(IncidenceStructure::from_one_based(3, &[&[1, 2, 3]]).unwrap())
            .unwrap();
        assert!(c.dual().is_err());
    }

    #[test]
    fn isomorphism_checks() {
        let f = fano();
        let dual = f.dual().unwrap();
        let iso = dual.find_isomorphism(&f).unwrap();
        assert!(f.is_automorphism(&(0..7).collect::<Vec<_>>()));
        let lines: Vec<Vec<usize>> = dual.lines().iter().map(|l| l.iter().map(|&p| iso[p]).collect()).collect();
        for l in lines {
            assert!(f.find_line(&l).is_some());
        }
        let heptagon =
            Configuration::new(from_mod_notation(&[1, 2], 7).unwrap().structure).unwrap();
        assert!(f.find_isomorphism(&heptagon).is_none());
    }
}
