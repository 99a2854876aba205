//! Good and bad orbiconfigurations.
//!
//! A configuration `C` covers an orbiconfiguration `X` when some group of
//! automorphisms of `C` has a quotient isomorphic to `X`; `X` is good when
//! such a `C` exists and bad otherwise.
//!
//! For `s = t = 2` the answer is complete. Covers are then polygons and
//! their groups are dihedral. A rotation subgroup gives a smaller polygon,
//! or the bigon (two points on a doubled line), or the loop (one point
//! meeting one line twice). A reflection folds a `q`-gon into a chain of
//! points joined by ordinary lines, and each end of the chain is either a
//! point of weight 2 (the axis passes through a vertex) or a line of weight
//! 2 met twice by the last point (the axis crosses an edge). Chains of one
//! point, and the `q = 2` cases, come out with a common weight factor or as
//! the loop again. Nothing else arises.

use std::fmt;

use crate::incidence::Configuration;
use crate::library;
use crate::orbi::{orbi_isomorphic, quotient, OrbiIncidenceStructure, OrbiLine, Orbiconfiguration};
use crate::perm::{automorphism_group_within, subgroups, Permutation, PermutationGroup};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoodBadStatus {
    Good,
    Bad,
    Inconclusive,
}

impl fmt::Display for GoodBadStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GoodBadStatus::Good => "good",
            GoodBadStatus::Bad => "bad",
            GoodBadStatus::Inconclusive => "inconclusive",
        })
    }
}

/// Why an orbiconfiguration is not covered by any configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BadReason {
    /// Some `s(i)` or `t(j)` is not an integer or is below 2.
    Integrality(IntegralityFailure),
    /// `s = t = 2` and the structure is none of the polygon quotients.
    N2Classification,
}

impl fmt::Display for BadReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BadReason::Integrality(_) => f.write_str("integrality"),
            BadReason::N2Classification => f.write_str("n2_classification"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntegralityFailure {
    /// 0-based point index and its `s`.
    S { point: usize, value: Rational },
    /// 0-based line index and its `t`.
    T { line: usize, value: Rational },
}

impl fmt::Display for IntegralityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntegralityFailure::S { point, value } => {
                write!(f, "point {} has s = {}", point + 1, crate::rational::display(value))
            }
            IntegralityFailure::T { line, value } => {
                write!(f, "line {} has t = {}", line + 1, crate::rational::display(value))
            }
        }
    }
}

/// A configuration, a group of its automorphisms, and the isomorphism from
/// the quotient onto the target structure.
#[derive(Debug, Clone)]
pub struct GoodWitness {
    pub cover: Configuration,
    pub group: PermutationGroup,
    pub point_map: Vec<usize>,
    pub line_map: Vec<usize>,
}

impl GoodWitness {
    /// Recomputes the quotient and checks it against `target`.
    pub fn verify(&self, target: &OrbiIncidenceStructure) -> bool {
        let q = quotient(&self.cover, &self.group);
        orbi_isomorphic(&q.structure, target).is_some()
    }
}

#[derive(Debug, Clone)]
pub struct GoodBadVerdict {
    pub status: GoodBadStatus,
    pub reason: Option<BadReason>,
    pub witness: Option<GoodWitness>,
    /// For inconclusive verdicts: the largest degree searched.
    pub bound: Option<usize>,
}

impl GoodBadVerdict {
    fn good(witness: GoodWitness) -> Self {
        Self {
            status: GoodBadStatus::Good,
            reason: None,
            witness: Some(witness),
            bound: None,
        }
    }

    fn bad(reason: BadReason) -> Self {
        Self {
            status: GoodBadStatus::Bad,
            reason: Some(reason),
            witness: None,
            bound: None,
        }
    }
}

/// The first point or line whose `s` or `t` is not an integer at least 2.
pub fn integrality_check(o: &OrbiIncidenceStructure) -> Option<IntegralityFailure> {
    let p = o.params();
    let ok = |v: &Rational| v.is_integer() && *v >= int(2);
    if let Some((point, &value)) = p.s.iter().enumerate().find(|(_, v)| !ok(v)) {
        return Some(IntegralityFailure::S { point, value });
    }
    p.t.iter()
        .enumerate()
        .find(|(_, v)| !ok(v))
        .map(|(line, &value)| IntegralityFailure::T { line, value })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("classify_n2 needs s = t = 2; got s = {s}, t = {t}")]
pub struct NotN2 {
    pub s: String,
    pub t: String,
}

/// Shapes of the good `s = t = 2` orbiconfigurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum N2Form {
    /// Plain `k`-gon, `k >= 3`.
    Cycle(usize),
    Loop,
    Bigon,
    /// Chain of `k` points, both end points of weight 2.
    PointPointChain(usize),
    /// Chain of `k` points, weight 2 at the first, a half-weight line at the last.
    PointLineChain(usize),
    /// Chain of `k` points, half-weight lines at both ends.
    LineLineChain(usize),
}

impl N2Form {
    /// Every good form with `points` points.
    pub fn with_points(points: usize) -> Vec<N2Form> {
        match points {
            0 => vec![],
            1 => vec![N2Form::Loop],
            2 => vec![N2Form::Bigon, N2Form::PointLineChain(2), N2Form::LineLineChain(2)],
            k => vec![
                N2Form::Cycle(k),
                N2Form::PointPointChain(k),
                N2Form::PointLineChain(k),
                N2Form::LineLineChain(k),
            ],
        }
    }

    /// The structure itself, points numbered along the chain.
    pub fn structure(self) -> OrbiIncidenceStructure {
        let path = |k: usize| -> Vec<OrbiLine> {
            (0..k - 1).map(|i| OrbiLine::new(1, 1, vec![(i, 1), (i + 1, 1)])).collect()
        };
        let half = |p: usize| OrbiLine::new(2, 1, vec![(p, 2)]);
        let (a, lines) = match self {
            N2Form::Cycle(k) => {
                let mut lines = path(k);
                lines.push(OrbiLine::new(1, 1, vec![(0, 1), (k - 1, 1)]));
                (vec![1; k], lines)
            }
            N2Form::Loop => return library::loop_line(),
            N2Form::Bigon => return library::bigon(),
            N2Form::PointPointChain(k) => {
                let mut a = vec![1; k];
                a[0] = 2;
                a[k - 1] = 2;
                (a, path(k))
            }
            N2Form::PointLineChain(k) => {
                let mut a = vec![1; k];
                a[0] = 2;
                let mut lines = path(k);
                lines.push(half(k - 1));
                (a, lines)
            }
            N2Form::LineLineChain(k) => {
                let mut lines = path(k);
                lines.push(half(0));
                lines.push(half(k - 1));
                (vec![1; k], lines)
            }
        };
        OrbiIncidenceStructure::new(a, lines).expect("good form is valid")
    }

    /// A polygon and a subgroup of its dihedral group whose quotient is
    /// this form.
    pub fn witness(self) -> (Configuration, PermutationGroup) {
        // polygon points 0..q, lines {i, i+1}
        let (q, gens): (usize, Vec<fn(usize, usize) -> usize>) = match self {
            N2Form::Cycle(k) => (k, vec![]),
            N2Form::Loop => (3, vec![|i, q| (i + 1) % q]),
            N2Form::Bigon => (4, vec![|i, q| (i + 2) % q]),
            N2Form::PointPointChain(k) => (2 * k - 2, vec![|i, q| (q - i) % q]),
            N2Form::PointLineChain(k) => (2 * k - 1, vec![|i, q| (q - i) % q]),
            N2Form::LineLineChain(k) => (2 * k, vec![|i, q| (q + 1 - i) % q]),
        };
        let polygon = library::polygon(q);
        let gens = gens
            .into_iter()
            .map(|g| {
                Permutation::automorphism(&polygon, (0..q).map(|i| g(i, q)).collect())
                    .expect("polygon symmetry")
            })
            .collect();
        let group = PermutationGroup::generate(q, q, gens, 2 * q).expect("dihedral subgroup");
        (polygon, group)
    }
}

impl fmt::Display for N2Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            N2Form::Cycle(k) => write!(f, "{k}-cycle"),
            N2Form::Loop => f.write_str("loop"),
            N2Form::Bigon => f.write_str("bigon"),
            N2Form::PointPointChain(k) => write!(f, "{k}-point chain, weight-2 points at both ends"),
            N2Form::PointLineChain(k) => {
                write!(f, "{k}-point chain, weight-2 point at one end, half line at the other")
            }
            N2Form::LineLineChain(k) => write!(f, "{k}-point chain, half lines at both ends"),
        }
    }
}

/// The good form `o` is isomorphic to, if any.
pub fn n2_form(o: &OrbiIncidenceStructure) -> Option<N2Form> {
    N2Form::with_points(o.point_count())
        .into_iter()
        .find(|f| orbi_isomorphic(&f.structure(), o).is_some())
}

/// Complete decision for orbiconfigurations with `s = t = 2`.
pub fn classify_n2(oc: &Orbiconfiguration) -> Result<GoodBadVerdict, NotN2> {
    if oc.s != int(2) || oc.t != int(2) {
        return Err(NotN2 {
            s: crate::rational::display(&oc.s),
            t: crate::rational::display(&oc.t),
        });
    }
    let target = oc.structure();
    let Some(form) = n2_form(target) else {
        return Ok(GoodBadVerdict::bad(BadReason::N2Classification));
    };
    let (cover, group) = form.witness();
    let q = quotient(&cover, &group);
    let (point_map, line_map) =
        orbi_isomorphic(&q.structure, target).expect("polygon witness reproduces its form");
    Ok(GoodBadVerdict::good(GoodWitness {
        cover,
        group,
        point_map,
        line_map,
    }))
}

/// Limits for [`good_search`].
#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub max_degree: usize,
    /// Backtracking nodes per automorphism search.
    pub node_budget: u64,
    /// Extra candidate covers, e.g. from a catalog file.
    pub catalog: Vec<Configuration>,
    /// Try polygons and `mod` families as covers.
    pub generated: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            max_degree: 6,
            node_budget: crate::DEFAULT_NODE_BUDGET,
            catalog: Vec::new(),
            generated: true,
        }
    }
}

/// Candidate covers with `points` points for an orbiconfiguration with the
/// given `s` and `t`.
fn candidates(points: usize, s: usize, t: usize, opts: &SearchOptions) -> Vec<Configuration> {
    let mut out = Vec::new();
    if opts.generated {
        if s == 2 && t == 2 && points >= 3 {
            out.push(library::polygon(points));
        } else if s == t && s > 2 {
            out.extend(crate::covering::cyclic_family(points, t));
        }
    }
    out.extend(opts.catalog.iter().filter(|c| c.point_count() == points).cloned());
    out.retain(|c| c.params().s == s && c.params().t == t);
    out
}

/// Looks for a configuration covering `oc` with degree up to
/// `opts.max_degree`. Bad only through a complete criterion: integrality, or
/// the `s = t = 2` classification.
pub fn good_search(oc: &Orbiconfiguration, opts: &SearchOptions) -> GoodBadVerdict {
    let target = oc.structure();
    if let Some(failure) = integrality_check(target) {
        return GoodBadVerdict::bad(BadReason::Integrality(failure));
    }
    if let Some(config) = target.as_configuration() {
        let group = PermutationGroup::trivial_on(&config);
        return GoodBadVerdict::good(GoodWitness {
            point_map: (0..config.point_count()).collect(),
            line_map: (0..config.line_count()).collect(),
            cover: config,
            group,
        });
    }
    let s = oc.s.to_integer() as usize;
    let t = oc.t.to_integer() as usize;
    let mut budget_hit = false;
    for k in 1..=opts.max_degree {
        let points = oc.n * int(k as i64);
        if !points.is_integer() || target.point_weights().iter().any(|&a| k as u64 % a != 0) {
            continue;
        }
        for cover in candidates(points.to_integer() as usize, s, t, opts) {
            if int(cover.line_count() as i64) != oc.m * int(k as i64) {
                continue;
            }
            let Ok(aut) = automorphism_group_within(&cover, opts.node_budget) else {
                budget_hit = true;
                continue;
            };
            if aut.order() % k != 0 {
                continue;
            }
            let list = subgroups(&aut, Some(k), 5_000_000);
            budget_hit |= !list.complete;
            for group in list.groups.into_iter().filter(|g| g.order() == k) {
                let q = quotient(&cover, &group);
                if let Some((point_map, line_map)) = orbi_isomorphic(&q.structure, target) {
                    return GoodBadVerdict::good(GoodWitness {
                        cover,
                        group,
                        point_map,
                        line_map,
                    });
                }
            }
        }
    }
    if s == 2 && t == 2 && !budget_hit {
        return classify_n2(oc).expect("s = t = 2");
    }
    GoodBadVerdict {
        status: GoodBadStatus::Inconclusive,
        reason: None,
        witness: None,
        bound: Some(opts.max_degree),
    }
}
