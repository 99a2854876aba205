//! Orbi-incidence structures: weighted points and lines.
//!
//! Point `i` carries a weight `a(i)`, line `j` a weight `b(j)` and a
//! multiplicity `d(j)` (at most one of the two above 1), and point `i` meets
//! line `j` with multiplicity `c(i,j)`. The aggregate parameters are
//!
//! ```text
//! n    = Σ_i 1/a(i)
//! m    = Σ_j d(j)/b(j)
//! t(j) = Σ_i c(i,j)
//! s(i) = a(i) · Σ_j c(i,j)·d(j)/b(j)
//! ```
//!
//! all computed exactly. `t(j)` has no `d(j)` factor: with that factor the
//! quotient of a square by its half turn would get `t = 4` while the square
//! has `t = 2`, and the identity `n·s = m·t` would fail.
//!
//! Quotients of a configuration by a group of automorphisms land here: a
//! point orbit of size `k` gets `a = |G|/k`, line orbits with the same
//! incidence pattern merge into one line with `d/b = (total size)/|G|`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::graph::LeviGraph;
use crate::incidence::Configuration;
use crate::perm::{orbits, Domain, OrbitPartition, PermutationGroup};
use crate::rational::{self, frac, gcd_all, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbiError {
    #[error("an orbi-incidence structure needs at least one point")]
    NoPoints,
    #[error("point {0} has weight 0")]
    ZeroPointWeight(usize),
    #[error("line {0} has weight or multiplicity 0")]
    ZeroLineWeight(usize),
    #[error("line {line} has b={b} and d={d}; one of them must be 1")]
    WeightAndMultiplicity { line: usize, b: u64, d: u64 },
    #[error("line {line} has no points")]
    EmptyLine { line: usize },
    #[error("line {line} mentions point {point}, outside 1..={point_count}")]
    PointOutOfRange {
        line: usize,
        point: usize,
        point_count: usize,
    },
    #[error("line {line} lists point {point} twice")]
    RepeatedPoint { line: usize, point: usize },
    #[error("line {line} gives point {point} multiplicity 0")]
    ZeroIncidence { line: usize, point: usize },
    #[error("lines {first} and {second} are identical; merge them with d")]
    DuplicateLine { first: usize, second: usize },
    #[error("point weights share the factor {0}")]
    WeightGcd(u64),
}

/// A line with its weight `b`, multiplicity `d` and incidences `(point, c)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbiLine {
    incidences: Vec<(usize, u64)>,
    b: u64,
    d: u64,
}

impl OrbiLine {
    /// `incidences` are `(0-based point, c)` pairs in any order.
    pub fn new(b: u64, d: u64, mut incidences: Vec<(usize, u64)>) -> Self {
        incidences.sort_unstable();
        Self { incidences, b, d }
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn incidences(&self) -> &[(usize, u64)] {
        &self.incidences
    }

    /// `c(i, j)` for this line, 0 if the point is not on it.
    pub fn c(&self, point: usize) -> u64 {
        self.incidences
            .iter()
            .find(|(p, _)| *p == point)
            .map_or(0, |&(_, c)| c)
    }

    /// `d/b` as a rational.
    pub fn weight(&self) -> Rational {
        frac(self.d as i64, self.b as i64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrbiIncidenceStructure {
    a: Vec<u64>,
    lines: Vec<OrbiLine>,
}

impl OrbiIncidenceStructure {
    /// Checks every invariant, including `gcd(a) = 1`.
    pub fn new(a: Vec<u64>, lines: Vec<OrbiLine>) -> Result<Self, OrbiError> {
        let s = Self::unnormalized(a, lines)?;
        match s.weight_gcd() {
            1 => Ok(s),
            g => Err(OrbiError::WeightGcd(g)),
        }
    }

    /// Like [`new`](Self::new) but allows the point weights to share a
    /// factor. Quotients can produce such structures.
    pub fn unnormalized(a: Vec<u64>, lines: Vec<OrbiLine>) -> Result<Self, OrbiError> {
        if a.is_empty() {
            return Err(OrbiError::NoPoints);
        }
        if let Some(i) = a.iter().position(|&w| w == 0) {
            return Err(OrbiError::ZeroPointWeight(i + 1));
        }
        let mut seen: HashMap<&OrbiLine, usize> = HashMap::new();
        for (j, line) in lines.iter().enumerate() {
            if line.b == 0 || line.d == 0 {
                return Err(OrbiError::ZeroLineWeight(j + 1));
            }
            if line.b != 1 && line.d != 1 {
                return Err(OrbiError::WeightAndMultiplicity {
                    line: j + 1,
                    b: line.b,
                    d: line.d,
                });
            }
            if line.incidences.is_empty() {
                return Err(OrbiError::EmptyLine { line: j + 1 });
            }
            for w in line.incidences.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(OrbiError::RepeatedPoint {
                        line: j + 1,
                        point: w[0].0 + 1,
                    });
                }
            }
            for &(p, c) in &line.incidences {
                if p >= a.len() {
                    return Err(OrbiError::PointOutOfRange {
                        line: j + 1,
                        point: p + 1,
                        point_count: a.len(),
                    });
                }
                if c == 0 {
                    return Err(OrbiError::ZeroIncidence {
                        line: j + 1,
                        point: p + 1,
                    });
                }
            }
            if let Some(first) = seen.insert(line, j) {
                return Err(OrbiError::DuplicateLine {
                    first: first + 1,
                    second: j + 1,
                });
            }
        }
        Ok(Self { a, lines })
    }

    /// A plain configuration with every weight and multiplicity 1.
    pub fn from_configuration(config: &Configuration) -> Self {
        let lines = config
            .lines()
            .iter()
            .map(|l| OrbiLine::new(1, 1, l.iter().map(|&p| (p, 1)).collect()))
            .collect();
        Self {
            a: vec![1; config.point_count()],
            lines,
        }
    }

    pub fn point_count(&self) -> usize {
        self.a.len()
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    pub fn a(&self, point: usize) -> u64 {
        self.a[point]
    }

    pub fn point_weights(&self) -> &[u64] {
        &self.a
    }

    pub fn lines(&self) -> &[OrbiLine] {
        &self.lines
    }

    pub fn weight_gcd(&self) -> u64 {
        gcd_all(self.a.iter().copied())
    }

    /// Divides every point weight by their common factor.
    pub fn normalized(&self) -> Self {
        let g = self.weight_gcd();
        Self {
            a: self.a.iter().map(|w| w / g).collect(),
            lines: self.lines.clone(),
        }
    }

    /// Same structure with lines sorted.
    pub fn canonical(&self) -> Self {
        let mut lines = self.lines.clone();
        lines.sort();
        Self {
            a: self.a.clone(),
            lines,
        }
    }

    /// Whether every weight, multiplicity and `c` is 1.
    pub fn is_plain(&self) -> bool {
        self.a.iter().all(|&w| w == 1)
            && self
                .lines
                .iter()
                .all(|l| l.b == 1 && l.d == 1 && l.incidences.iter().all(|&(_, c)| c == 1))
    }

    /// The underlying configuration when the structure is plain and valid.
    pub fn as_configuration(&self) -> Option<Configuration> {
        if !self.is_plain() {
            return None;
        }
        let lines = self
            .lines
            .iter()
            .map(|l| l.incidences.iter().map(|&(p, _)| p).collect())
            .collect();
        let s = crate::IncidenceStructure::new(self.a.len(), lines).ok()?;
        Configuration::new(s).ok()
    }

    pub fn params(&self) -> OrbiParams {
        orbi_params(self)
    }

    /// Two distinct points on two different lines.
    pub fn pair_violation(&self) -> Option<((usize, usize), (usize, usize))> {
        let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
        for (j, line) in self.lines.iter().enumerate() {
            for (k, &(p, _)) in line.incidences.iter().enumerate() {
                for &(q, _) in &line.incidences[k + 1..] {
                    if let Some(prev) = owner.insert((p, q), j) {
                        return Some(((p, q), (prev, j)));
                    }
                }
            }
        }
        None
    }

    pub fn classify(&self) -> Level {
        classify(self)
    }

    pub fn is_connected(&self) -> bool {
        self.levi().is_connected()
    }

    /// Annotated Levi graph: weights as labels, `d` copies of each line,
    /// `c` parallel edges per incidence.
    pub fn levi(&self) -> LeviGraph {
        let mut line_labels = Vec::new();
        let mut line_origin = Vec::new();
        let mut edges = Vec::new();
        for (j, line) in self.lines.iter().enumerate() {
            for _ in 0..line.d {
                let node = line_labels.len();
                line_labels.push(line.b);
                line_origin.push(j);
                for &(p, c) in &line.incidences {
                    edges.push((p, node, c));
                }
            }
        }
        LeviGraph {
            point_labels: self.a.clone(),
            line_labels,
            line_origin,
            edges,
        }
    }
}

impl fmt::Display for OrbiIncidenceStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.a.iter().map(u64::to_string).collect();
        write!(f, "a=({})", a.join(","))?;
        for line in &self.lines {
            let inc: Vec<String> = line
                .incidences
                .iter()
                .map(|&(p, c)| if c == 1 { format!("{}", p + 1) } else { format!("{}*{}", p + 1, c) })
                .collect();
            write!(f, " [b={} d={}: {}]", line.b, line.d, inc.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbiParams {
    pub n: Rational,
    pub m: Rational,
    /// Per point.
    pub s: Vec<Rational>,
    /// Per line.
    pub t: Vec<Rational>,
}

impl OrbiParams {
    pub fn constant_s(&self) -> Option<Rational> {
        constant(&self.s)
    }

    pub fn constant_t(&self) -> Option<Rational> {
        constant(&self.t)
    }
}

fn constant(values: &[Rational]) -> Option<Rational> {
    let first = *values.first()?;
    values.iter().all(|v| *v == first).then_some(first)
}

pub fn orbi_params(structure: &OrbiIncidenceStructure) -> OrbiParams {
    let n = structure.a.iter().map(|&w| frac(1, w as i64)).sum();
    let m = structure.lines.iter().map(OrbiLine::weight).sum();
    let t = structure
        .lines
        .iter()
        .map(|l| int(l.incidences.iter().map(|&(_, c)| c as i64).sum()))
        .collect();
    let mut s = vec![int(0); structure.a.len()];
    for line in &structure.lines {
        for &(p, c) in &line.incidences {
            s[p] += line.weight() * int(c as i64);
        }
    }
    for (p, v) in s.iter_mut().enumerate() {
        *v *= int(structure.a[p] as i64);
    }
    OrbiParams { n, m, s, t }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    /// Pair axiom fails.
    Structure,
    /// Pair axiom holds, `s` or `t` is not constant.
    Geometry,
    Orbiconfiguration,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Structure => "orbi-incidence structure",
            Level::Geometry => "orbi-incidence geometry",
            Level::Orbiconfiguration => "orbiconfiguration",
        })
    }
}

pub fn classify(structure: &OrbiIncidenceStructure) -> Level {
    if structure.pair_violation().is_some() {
        return Level::Structure;
    }
    let p = orbi_params(structure);
    if p.constant_s().is_some() && p.constant_t().is_some() && !structure.lines.is_empty() {
        Level::Orbiconfiguration
    } else {
        Level::Geometry
    }
}

/// An orbi-incidence structure with the pair axiom and constant `s`, `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbiconfiguration {
    structure: OrbiIncidenceStructure,
    pub n: Rational,
    pub m: Rational,
    pub s: Rational,
    pub t: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("structure is only an {0}")]
pub struct NotAnOrbiconfiguration(pub Level);

impl Orbiconfiguration {
    pub fn new(structure: OrbiIncidenceStructure) -> Result<Self, NotAnOrbiconfiguration> {
        match classify(&structure) {
            Level::Orbiconfiguration => {
                let p = orbi_params(&structure);
                Ok(Self {
                    n: p.n,
                    m: p.m,
                    s: p.constant_s().expect("constant"),
                    t: p.constant_t().expect("constant"),
                    structure,
                })
            }
            level => Err(NotAnOrbiconfiguration(level)),
        }
    }

    pub fn structure(&self) -> &OrbiIncidenceStructure {
        &self.structure
    }

    pub fn into_structure(self) -> OrbiIncidenceStructure {
        self.structure
    }
}

/// Orbit space of a configuration under a group, with provenance.
#[derive(Debug, Clone)]
pub struct QuotientResult {
    pub structure: OrbiIncidenceStructure,
    pub group_order: usize,
    /// Quotient point `i` is point orbit `i`.
    pub point_orbits: OrbitPartition,
    pub line_orbits: OrbitPartition,
    /// For each line orbit, the quotient line it went into.
    pub line_of_orbit: Vec<usize>,
    /// Common factor of the point weights (1 when the structure is normalised).
    pub weight_gcd: u64,
    /// Groups of line orbits with equal incidence patterns and at least one
    /// fractional member. Merging these loses which orbits were stabilised.
    pub ambiguous_merges: Vec<Vec<usize>>,
}

impl QuotientResult {
    /// Quotient point of each configuration point.
    pub fn point_map(&self) -> Vec<usize> {
        self.point_orbits.block_index()
    }
}

/// The orbit space of `config` under `group`.
pub fn quotient(config: &Configuration, group: &PermutationGroup) -> QuotientResult {
    let order = group.order() as i64;
    let point_orbits = orbits(group, Domain::Points);
    let line_orbits = orbits(group, Domain::Lines);
    let point_block = point_orbits.block_index();
    let a: Vec<u64> = point_orbits
        .blocks
        .iter()
        .map(|b| (order / b.len() as i64) as u64)
        .collect();

    // orbit pattern -> line orbits sharing it, patterns in first-seen order
    let mut patterns: Vec<Vec<(usize, u64)>> = Vec::new();
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut pattern_index: HashMap<Vec<(usize, u64)>, usize> = HashMap::new();
    for (k, block) in line_orbits.blocks.iter().enumerate() {
        let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
        for &p in config.line(block[0]) {
            *counts.entry(point_block[p]).or_default() += 1;
        }
        let pattern: Vec<(usize, u64)> = counts.into_iter().collect();
        let idx = *pattern_index.entry(pattern.clone()).or_insert_with(|| {
            patterns.push(pattern);
            patterns.len() - 1
        });
        members.entry(idx).or_default().push(k);
    }

    let mut lines = Vec::new();
    let mut line_of_orbit = vec![0; line_orbits.blocks.len()];
    let mut ambiguous_merges = Vec::new();
    for (idx, pattern) in patterns.iter().enumerate() {
        let group_members = &members[&idx];
        let ratios: Vec<Rational> = group_members
            .iter()
            .map(|&k| frac(line_orbits.blocks[k].len() as i64, order))
            .collect();
        if group_members.len() > 1 && ratios.iter().any(|r| !r.is_integer()) {
            ambiguous_merges.push(group_members.clone());
        }
        let total: Rational = ratios.iter().sum();
        let first_line = lines.len();
        for (b, d) in split_weight(total) {
            lines.push(OrbiLine::new(b, d, pattern.clone()));
        }
        for &k in group_members {
            line_of_orbit[k] = first_line;
        }
    }
    let structure = OrbiIncidenceStructure { a, lines };
    QuotientResult {
        weight_gcd: structure.weight_gcd(),
        structure,
        group_order: group.order(),
        point_orbits,
        line_orbits,
        line_of_orbit,
        ambiguous_merges,
    }
}

/// Writes `d/b` as a sum of representable line weights: an integer part
/// (`b = 1`) followed by unit fractions with distinct denominators.
fn split_weight(total: Rational) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let whole = total.to_integer();
    if whole > 0 {
        out.push((1, whole as u64));
    }
    let mut rest = total - int(whole);
    while rest > int(0) {
        // greedy unit fraction: smallest b with 1/b <= rest
        let b = (rest.denom() + rest.numer() - 1) / rest.numer();
        out.push((b as u64, 1));
        rest -= frac(1, b);
    }
    out
}

/// The four exact claims about a quotient by a group of order `|G|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientClaims {
    pub group_order: usize,
    pub cover_s: usize,
    pub cover_t: usize,
    pub s_values: Vec<Rational>,
    pub t_values: Vec<Rational>,
    pub n_times_order: Rational,
    pub m_times_order: Rational,
    pub s_ok: bool,
    pub t_ok: bool,
    pub n_ok: bool,
    pub m_ok: bool,
}

impl QuotientClaims {
    pub fn all_hold(&self) -> bool {
        self.s_ok && self.t_ok && self.n_ok && self.m_ok
    }

    /// One line per failed claim.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.s_ok {
            out.push(format!("s: quotient has {:?}, cover has {}", self.s_values, self.cover_s));
        }
        if !self.t_ok {
            out.push(format!("t: quotient has {:?}, cover has {}", self.t_values, self.cover_t));
        }
        if !self.n_ok {
            out.push(format!("n: |G|*n = {}", rational::display(&self.n_times_order)));
        }
        if !self.m_ok {
            out.push(format!("m: |G|*m = {}", rational::display(&self.m_times_order)));
        }
        out
    }
}

/// Checks `s = s~`, `t = t~`, `|G|·n = n~` and `|G|·m = m~` exactly.
pub fn verify_quotient_claims(config: &Configuration, q: &QuotientResult) -> QuotientClaims {
    let cp = config.params();
    let p = orbi_params(&q.structure);
    let g = int(q.group_order as i64);
    let n_times_order = p.n * g;
    let m_times_order = p.m * g;
    QuotientClaims {
        group_order: q.group_order,
        cover_s: cp.s,
        cover_t: cp.t,
        s_ok: p.s.iter().all(|&v| v == int(cp.s as i64)),
        t_ok: p.t.iter().all(|&v| v == int(cp.t as i64)),
        n_ok: n_times_order == int(cp.n as i64),
        m_ok: m_times_order == int(cp.m as i64),
        s_values: p.s,
        t_values: p.t,
        n_times_order,
        m_times_order,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DualError {
    #[error("point {point} on line {line}: c*a/b = {c}*{a}/{b} is not an integer")]
    NonIntegralIncidence {
        point: usize,
        line: usize,
        c: u64,
        a: u64,
        b: u64,
    },
    #[error("dual has an invalid structure: {0}")]
    Invalid(#[from] OrbiError),
}

/// Exchanges points and lines, carrying weights along.
///
/// A line of multiplicity `d` becomes `d` points of weight `b`; a point of
/// weight `a` becomes a line of weight `a`. The incidence multiplicity
/// becomes `c·a(i)/b(j)`: in a quotient, `c(i,j)` counts points of a fiber on
/// one lifted line and the dual count is lines of a fiber through one lifted
/// point. Identical dual lines merge through `d`.
pub fn orbi_dual(oc: &OrbiIncidenceStructure) -> Result<OrbiIncidenceStructure, DualError> {
    let mut first_copy = Vec::with_capacity(oc.lines.len());
    let mut a_dual = Vec::new();
    for line in &oc.lines {
        first_copy.push(a_dual.len());
        for _ in 0..line.d {
            a_dual.push(line.b);
        }
    }
    let mut dual_lines: Vec<(u64, Vec<(usize, u64)>)> = Vec::with_capacity(oc.a.len());
    for (i, &a) in oc.a.iter().enumerate() {
        let mut incidences = Vec::new();
        for (j, line) in oc.lines.iter().enumerate() {
            let c = line.c(i);
            if c == 0 {
                continue;
            }
            if (c * a) % line.b != 0 {
                return Err(DualError::NonIntegralIncidence {
                    point: i + 1,
                    line: j + 1,
                    c,
                    a,
                    b: line.b,
                });
            }
            for copy in 0..line.d as usize {
                incidences.push((first_copy[j] + copy, c * a / line.b));
            }
        }
        dual_lines.push((a, incidences));
    }
    let mut merged: Vec<(u64, Vec<(usize, u64)>, u64)> = Vec::new();
    for (b, inc) in dual_lines {
        match merged.iter_mut().find(|(b2, inc2, _)| *b2 == b && *inc2 == inc) {
            Some(entry) => entry.2 += 1,
            None => merged.push((b, inc, 1)),
        }
    }
    let lines = merged
        .into_iter()
        .map(|(b, inc, d)| OrbiLine::new(b, d, inc))
        .collect();
    Ok(OrbiIncidenceStructure::new(a_dual, lines)?)
}

/// Weight-preserving point and line bijections between two structures, with
/// `b`, `d` and every `c` preserved.
pub fn orbi_isomorphic(
    o1: &OrbiIncidenceStructure,
    o2: &OrbiIncidenceStructure,
) -> Option<(Vec<usize>, Vec<usize>)> {
    if o1.a.len() != o2.a.len() || o1.lines.len() != o2.lines.len() {
        return None;
    }
    let sig1 = point_signatures(o1);
    let sig2 = point_signatures(o2);
    let mut sorted1 = sig1.clone();
    let mut sorted2 = sig2.clone();
    sorted1.sort();
    sorted2.sort();
    if sorted1 != sorted2 {
        return None;
    }
    let target: HashMap<&OrbiLine, usize> = o2.lines.iter().enumerate().map(|(j, l)| (l, j)).collect();
    let n = o1.a.len();
    // check each line once its last point is placed
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, line) in o1.lines.iter().enumerate() {
        let last = line.incidences.iter().map(|&(p, _)| p).max().expect("non-empty line");
        due[last].push(j);
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if !iso_extend(0, o1, &sig1, &sig2, &target, &due, &mut map, &mut used) {
        return None;
    }
    let line_map = o1
        .lines
        .iter()
        .map(|l| target[&image_line(l, &map)])
        .collect();
    Some((map, line_map))
}

type Signature = (u64, Vec<(u64, u64, u64)>);

fn point_signatures(o: &OrbiIncidenceStructure) -> Vec<Signature> {
    let mut sig: Vec<Signature> = o.a.iter().map(|&a| (a, Vec::new())).collect();
    for line in &o.lines {
        for &(p, c) in &line.incidences {
            sig[p].1.push((line.b, line.d, c));
        }
    }
    for s in &mut sig {
        s.1.sort_unstable();
    }
    sig
}

fn image_line(line: &OrbiLine, map: &[usize]) -> OrbiLine {
    OrbiLine::new(
        line.b,
        line.d,
        line.incidences.iter().map(|&(p, c)| (map[p], c)).collect(),
    )
}

#[allow(clippy::too_many_arguments)]
fn iso_extend(
    p: usize,
    o1: &OrbiIncidenceStructure,
    sig1: &[Signature],
    sig2: &[Signature],
    target: &HashMap<&OrbiLine, usize>,
    due: &[Vec<usize>],
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if p == map.len() {
        return true;
    }
    for q in 0..map.len() {
        if used[q] || sig1[p] != sig2[q] {
            continue;
        }
        map[p] = q;
        used[q] = true;
        let ok = due[p]
            .iter()
            .all(|&j| target.contains_key(&image_line(&o1.lines[j], map)));
        if ok && iso_extend(p + 1, o1, sig1, sig2, target, due, map, used) {
            return true;
        }
        used[q] = false;
        map[p] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;
    use crate::perm::automorphism_group;

    #[test]
    fn half_weight_chain_parameters() {
        let p = orbi_params(&library::half_weight_chain());
        assert_eq!(p.n, frac(3, 2));
        assert_eq!(p.m, frac(3, 2));
        assert_eq!(p.t, vec![int(2), int(2)]);
        assert_eq!(p.s, vec![int(2), int(2)]);
        assert_eq!(library::half_weight_chain().classify(), Level::Orbiconfiguration);
    }

    #[test]
    fn bigon_parameters() {
        let p = orbi_params(&library::bigon());
        assert_eq!((p.n, p.m), (int(2), int(2)));
        assert_eq!(p.t, vec![int(2)]);
        assert_eq!(p.s, vec![int(2), int(2)]);
    }

    #[test]
    fn plain_configuration_reproduces_params() {
        let f = library::fano();
        let o = OrbiIncidenceStructure::from_configuration(&f);
        let p = orbi_params(&o);
        assert_eq!((p.n, p.m), (int(7), int(7)));
        assert!(p.s.iter().chain(&p.t).all(|&v| v == int(3)));
        assert_eq!(o.as_configuration().unwrap(), f);
    }

    #[test]
    fn classification_levels() {
        let broken = OrbiIncidenceStructure::new(
            vec![1, 1],
            vec![OrbiLine::new(1, 1, vec![(0, 1), (1, 1)]), OrbiLine::new(2, 1, vec![(0, 1), (1, 1)])],
        )
        .unwrap();
        assert_eq!(broken.classify(), Level::Structure);
        let uneven = OrbiIncidenceStructure::new(
            vec![1, 1],
            vec![OrbiLine::new(1, 1, vec![(0, 1), (1, 1)]), OrbiLine::new(1, 1, vec![(1, 1)])],
        )
        .unwrap();
        assert_eq!(orbi_params(&uneven).s, vec![int(1), int(2)]);
        assert_eq!(uneven.classify(), Level::Geometry);
    }

    #[test]
    fn invariants_enforced() {
        assert_eq!(
            OrbiIncidenceStructure::new(vec![2, 4], vec![OrbiLine::new(1, 1, vec![(0, 1), (1, 1)])]),
            Err(OrbiError::WeightGcd(2))
        );
        assert!(matches!(
            OrbiIncidenceStructure::new(vec![1], vec![OrbiLine::new(2, 2, vec![(0, 2)])]),
            Err(OrbiError::WeightAndMultiplicity { .. })
        ));
        assert!(matches!(
            OrbiIncidenceStructure::new(
                vec![1, 1],
                vec![OrbiLine::new(1, 1, vec![(0, 1), (1, 1)]), OrbiLine::new(1, 1, vec![(1, 1), (0, 1)])]
            ),
            Err(OrbiError::DuplicateLine { first: 1, second: 2 })
        ));
    }

    #[test]
    fn triangle_by_rotation_is_a_loop() {
        let tri = library::polygon(3);
        let g = PermutationGroup::from_cycle_notation(&tri, &["(1 2 3)"]).unwrap();
        let q = quotient(&tri, &g);
        assert_eq!(q.structure, library::loop_line());
        let p = orbi_params(&q.structure);
        assert_eq!((p.n, p.m, p.s[0], p.t[0]), (int(1), int(1), int(2), int(2)));
        assert!(verify_quotient_claims(&tri, &q).all_hold());
    }

    #[test]
    fn square_by_half_turn_is_the_bigon() {
        let sq = library::polygon(4);
        let g = PermutationGroup::from_cycle_notation(&sq, &["(1 3)(2 4)"]).unwrap();
        let q = quotient(&sq, &g);
        assert!(orbi_isomorphic(&q.structure, &library::bigon()).is_some());
        assert!(q.ambiguous_merges.is_empty());
        let claims = verify_quotient_claims(&sq, &q);
        assert!(claims.all_hold());
        assert_eq!(claims.n_times_order, int(4));
    }

    #[test]
    fn hexagon_by_c3_is_a_bigon() {
        let hex = library::polygon(6);
        let g = PermutationGroup::from_cycle_notation(&hex, &["(1 3 5)(2 4 6)"]).unwrap();
        let q = quotient(&hex, &g);
        assert!(orbi_isomorphic(&q.structure, &library::bigon()).is_some());
        let p = orbi_params(&q.structure);
        assert_eq!((p.n, p.m), (int(2), int(2)));
    }

    #[test]
    fn trivial_quotient_is_the_configuration() {
        let f = library::mod14();
        let q = quotient(&f, &PermutationGroup::trivial_on(&f));
        assert!(orbi_isomorphic(&q.structure, &OrbiIncidenceStructure::from_configuration(&f)).is_some());
    }

    #[test]
    fn merged_half_lines_are_flagged() {
        // square under the edge-midpoint Klein group: both line orbits are
        // stabilised and share the pattern {P: 2}
        let sq = library::polygon(4);
        let g = PermutationGroup::from_cycle_notation(&sq, &["(1 2)(3 4)", "(1 4)(2 3)"]).unwrap();
        let q = quotient(&sq, &g);
        assert_eq!(q.ambiguous_merges.len(), 1);
        assert_eq!(q.structure, library::loop_line());
        assert!(verify_quotient_claims(&sq, &q).all_hold());
    }

    #[test]
    fn full_dihedral_quotient_needs_normalisation() {
        let tri = library::polygon(3);
        let g = automorphism_group(&tri).unwrap();
        let q = quotient(&tri, &g);
        assert_eq!(q.weight_gcd, 2);
        assert_eq!(q.structure.point_weights(), &[2]);
        assert_eq!(q.structure.lines()[0].b(), 2);
        assert!(verify_quotient_claims(&tri, &q).all_hold());
        assert_eq!(q.structure.normalized().point_weights(), &[1]);
    }

    #[test]
    fn split_weight_cases() {
        assert_eq!(split_weight(int(2)), vec![(1, 2)]);
        assert_eq!(split_weight(frac(1, 3)), vec![(3, 1)]);
        assert_eq!(split_weight(frac(3, 2)), vec![(1, 1), (2, 1)]);
        assert_eq!(split_weight(frac(5, 6)), vec![(2, 1), (3, 1)]);
    }

    #[test]
    fn dual_of_half_weight_chain_is_itself() {
        let oc = library::half_weight_chain();
        let d = orbi_dual(&oc).unwrap();
        assert!(orbi_isomorphic(&oc, &d).is_some());
        assert_eq!(orbi_dual(&d).unwrap(), oc);
        let (p, q) = (orbi_params(&oc), orbi_params(&d));
        assert_eq!((p.n, p.m), (q.m, q.n));
    }

    #[test]
    fn dual_of_plain_matches_core_dual() {
        let f = library::fano();
        let d = orbi_dual(&OrbiIncidenceStructure::from_configuration(&f)).unwrap();
        let core = OrbiIncidenceStructure::from_configuration(&f.dual().unwrap());
        assert_eq!(d.canonical(), core.canonical());
        assert_eq!(orbi_dual(&library::bigon()).unwrap(), library::bigon());
    }

    #[test]
    fn isomorphism_needs_equal_sizes() {
        assert!(orbi_isomorphic(&library::bigon(), &library::loop_line()).is_none());
        let oc = library::half_weight_chain();
        let (pm, lm) = orbi_isomorphic(&oc, &oc).unwrap();
        assert_eq!((pm, lm), (vec![0, 1], vec![0, 1]));
    }

    #[test]
    fn levi_annotations() {
        let g = library::half_weight_chain().levi();
        assert_eq!(g.point_labels, vec![2, 1]);
        assert_eq!(g.line_labels, vec![1, 2]);
        assert!(g.edges.contains(&(1, 1, 2)));
        let bigon = library::bigon().levi();
        assert_eq!(bigon.line_labels.len(), 2);
        assert_eq!(bigon.edge_count(), 4);
    }
}
