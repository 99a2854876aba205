//! Does a configuration cover a smaller configuration?
//!
//! Two procedures are offered. [`is_prime_regular`] only looks at regular
//! covers: quotients by semiregular subgroups of the automorphism group.
//! [`is_prime_general`] searches every partition of the points into equal
//! fibers and so decides primality outright, at a higher cost. Both share
//! the arithmetic fast path: if `n` or `m` is prime no fiber size works.

use std::fmt;

use crate::covering::{verify_covering, CoveringMap};
use crate::incidence::{Configuration, IncidenceStructure};
use crate::orbi::quotient;
use crate::perm::{
    automorphism_group_within, is_semiregular, orbit_divisibility_filter, orbits, subgroups, Domain,
    PermutationGroup,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeStatus {
    Prime,
    NotPrime,
    /// A budget ran out; nothing is claimed.
    Inconclusive,
}

impl fmt::Display for PrimeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrimeStatus::Prime => "prime",
            PrimeStatus::NotPrime => "not_prime",
            PrimeStatus::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeReason {
    /// `n` or `m` is a prime number.
    OrderFastPath,
    /// No group order survives the arithmetic and orbit filters.
    FilterExhaustion,
    /// No semiregular subgroup of an admissible order has a configuration
    /// as its quotient. Says nothing about non-regular covers.
    RegularSearchExhaustion,
    /// Every equal-fiber partition was examined.
    FullSearchExhaustion,
    CoveringFound,
    BudgetExceeded,
}

impl fmt::Display for PrimeReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrimeReason::OrderFastPath => "order_fast_path",
            PrimeReason::FilterExhaustion => "filter_exhaustion",
            PrimeReason::RegularSearchExhaustion => "regular_search_exhaustion",
            PrimeReason::FullSearchExhaustion => "full_search_exhaustion",
            PrimeReason::CoveringFound => "covering_found",
            PrimeReason::BudgetExceeded => "budget_exceeded",
        })
    }
}

#[derive(Debug, Clone)]
pub struct PrimalityVerdict {
    pub status: PrimeStatus,
    pub reason: PrimeReason,
    /// For `NotPrime`: a covering onto a smaller configuration.
    pub witness: Option<CoveringMap>,
    /// For regular witnesses: the group whose quotient is the base.
    pub witness_group: Option<PermutationGroup>,
    /// What was examined, one entry per step.
    pub audit: Vec<String>,
    /// Search nodes (general) or subgroups (regular) examined.
    pub explored: u64,
}

impl PrimalityVerdict {
    fn decided(status: PrimeStatus, reason: PrimeReason, audit: Vec<String>, explored: u64) -> Self {
        Self {
            status,
            reason,
            witness: None,
            witness_group: None,
            audit,
            explored,
        }
    }
}

fn is_prime_number(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// `n` or `m` prime: no covering of degree above 1 onto a configuration.
pub fn fast_path(config: &Configuration) -> bool {
    let p = config.params();
    is_prime_number(p.n) || is_prime_number(p.m)
}

/// A candidate group order with the filters it passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderCandidate {
    pub order: usize,
    pub divides_n_and_m: bool,
    /// `order <= n/3`.
    pub leaves_three_points: bool,
    /// `n/order >= s(t-1)+1`.
    pub point_bound: bool,
    /// `m/order >= t(s-1)+1`.
    pub line_bound: bool,
    /// `Err(k)`: an automorphism orbit of size `k` shares no factor with `order`.
    pub orbit_filter: Result<(), usize>,
}

impl OrderCandidate {
    pub fn admissible(&self) -> bool {
        self.divides_n_and_m
            && self.leaves_three_points
            && self.point_bound
            && self.line_bound
            && self.orbit_filter.is_ok()
    }
}

/// Annotates every order `2..=n` that divides `n` with the filters it passes.
/// `orbit_sizes` are the automorphism orbit sizes on points and lines.
pub fn admissible_orders(config: &Configuration, orbit_sizes: &[usize]) -> Vec<OrderCandidate> {
    let p = config.params();
    (2..=p.n)
        .filter(|g| p.n % g == 0)
        .map(|g| {
            let divides = p.m % g == 0;
            OrderCandidate {
                order: g,
                divides_n_and_m: divides,
                leaves_three_points: 3 * g <= p.n,
                point_bound: p.n / g >= p.min_points(),
                line_bound: divides && p.m / g >= p.min_lines(),
                orbit_filter: orbit_divisibility_filter(orbit_sizes, g),
            }
        })
        .collect()
}

/// Budgets for the primality searches.
#[derive(Debug, Clone, Copy)]
pub struct PrimalityBudget {
    /// Backtracking nodes (automorphism or partition search).
    pub nodes: u64,
    /// Joins tried during subgroup enumeration.
    pub subgroup_closures: usize,
}

impl Default for PrimalityBudget {
    fn default() -> Self {
        Self {
            nodes: crate::DEFAULT_NODE_BUDGET,
            subgroup_closures: 5_000_000,
        }
    }
}

/// Primality with respect to regular covers.
pub fn is_prime_regular(config: &Configuration, budget: PrimalityBudget) -> PrimalityVerdict {
    let mut audit = Vec::new();
    let p = config.params();
    if fast_path(config) {
        audit.push(format!("n={} m={}: one of them is prime", p.n, p.m));
        return PrimalityVerdict::decided(PrimeStatus::Prime, PrimeReason::OrderFastPath, audit, 0);
    }
    let aut = match automorphism_group_within(config, budget.nodes) {
        Ok(g) => g,
        Err(e) => {
            audit.push(format!("automorphism search stopped after {} nodes", e.explored));
            return PrimalityVerdict::decided(
                PrimeStatus::Inconclusive,
                PrimeReason::BudgetExceeded,
                audit,
                e.explored,
            );
        }
    };
    audit.push(format!("|Aut| = {}", aut.order()));
    let mut sizes = orbits(&aut, Domain::Points).sizes();
    sizes.extend(orbits(&aut, Domain::Lines).sizes());
    let orders: Vec<usize> = admissible_orders(config, &sizes)
        .into_iter()
        .filter(|c| c.admissible() && aut.order() % c.order == 0)
        .map(|c| c.order)
        .collect();
    audit.push(format!("admissible orders {orders:?}"));
    let Some(&max_order) = orders.iter().max() else {
        return PrimalityVerdict::decided(PrimeStatus::Prime, PrimeReason::FilterExhaustion, audit, 0);
    };
    let list = subgroups(&aut, Some(max_order), budget.subgroup_closures);
    let mut explored = 0;
    for g in list.groups.iter().filter(|g| orders.contains(&g.order())) {
        explored += 1;
        if is_semiregular(g).is_err() {
            continue;
        }
        let q = quotient(config, g);
        let Some(base) = q.structure.as_configuration() else {
            continue;
        };
        if base.point_count() < 3 {
            continue;
        }
        let cm = verify_covering(config, &base, q.point_map())
            .expect("semiregular quotient map is a covering");
        audit.push(format!("semiregular subgroup {} has quotient {}", g.summary(), base));
        return PrimalityVerdict {
            status: PrimeStatus::NotPrime,
            reason: PrimeReason::CoveringFound,
            witness: Some(cm),
            witness_group: Some(g.clone()),
            audit,
            explored,
        };
    }
    if !list.complete {
        audit.push("subgroup enumeration hit its budget".into());
        return PrimalityVerdict::decided(
            PrimeStatus::Inconclusive,
            PrimeReason::BudgetExceeded,
            audit,
            explored,
        );
    }
    audit.push(format!("{explored} subgroups of admissible order examined"));
    PrimalityVerdict::decided(PrimeStatus::Prime, PrimeReason::RegularSearchExhaustion, audit, explored)
}

/// Fiber sizes worth trying for a general covering.
pub fn fiber_sizes(config: &Configuration) -> Vec<usize> {
    let p = config.params();
    (2..=p.n)
        .filter(|&k| {
            p.n % k == 0
                && p.m % k == 0
                && p.n / k >= 3
                && p.n / k >= p.min_points()
                && p.m / k >= p.min_lines()
        })
        .collect()
}

/// Complete primality decision by partition search.
pub fn is_prime_general(config: &Configuration, node_budget: u64) -> PrimalityVerdict {
    let mut audit = Vec::new();
    let p = config.params();
    if fast_path(config) {
        audit.push(format!("n={} m={}: one of them is prime", p.n, p.m));
        return PrimalityVerdict::decided(PrimeStatus::Prime, PrimeReason::OrderFastPath, audit, 0);
    }
    let sizes = fiber_sizes(config);
    audit.push(format!("fiber sizes {sizes:?}"));
    let mut explored = 0;
    for k in sizes {
        let mut search = PartitionSearch::new(config, k, node_budget.saturating_sub(explored));
        let outcome = search.run();
        explored += search.nodes;
        match outcome {
            Ok(Some(cm)) => {
                audit.push(format!("fiber size {k}: covering of {}", cm.base()));
                return PrimalityVerdict {
                    status: PrimeStatus::NotPrime,
                    reason: PrimeReason::CoveringFound,
                    witness: Some(cm),
                    witness_group: None,
                    audit,
                    explored,
                };
            }
            Ok(None) => audit.push(format!("fiber size {k}: exhausted after {} nodes", search.nodes)),
            Err(()) => {
                audit.push(format!("fiber size {k}: budget exceeded after {explored} nodes in total"));
                return PrimalityVerdict::decided(
                    PrimeStatus::Inconclusive,
                    PrimeReason::BudgetExceeded,
                    audit,
                    explored,
                );
            }
        }
    }
    let reason = if audit.len() == 1 && explored == 0 {
        PrimeReason::FilterExhaustion
    } else {
        PrimeReason::FullSearchExhaustion
    };
    PrimalityVerdict::decided(PrimeStatus::Prime, reason, audit, explored)
}

const UNSET: usize = usize::MAX;

/// Assigns points `0..n` to fibers in order; a point joins an open fiber or
/// opens the next one, so each partition is visited once. Collinear points
/// never share a fiber, and the image of a line must not meet a completed
/// line image in two fibers unless it lies inside it.
struct PartitionSearch<'a> {
    config: &'a Configuration,
    size: usize,
    fibers: usize,
    fiber_of: Vec<usize>,
    members: Vec<Vec<usize>>,
    complete_images: Vec<Vec<usize>>,
    budget: u64,
    nodes: u64,
}

impl<'a> PartitionSearch<'a> {
    fn new(config: &'a Configuration, size: usize, budget: u64) -> Self {
        let fibers = config.point_count() / size;
        Self {
            config,
            size,
            fibers,
            fiber_of: vec![UNSET; config.point_count()],
            members: vec![Vec::new(); fibers],
            complete_images: Vec::new(),
            budget,
            nodes: 0,
        }
    }

    fn run(&mut self) -> Result<Option<CoveringMap>, ()> {
        self.extend(0)
    }

    fn extend(&mut self, p: usize) -> Result<Option<CoveringMap>, ()> {
        if p == self.fiber_of.len() {
            return Ok(self.leaf());
        }
        let open = self.members.iter().take_while(|m| !m.is_empty()).count();
        let choices = if open < self.fibers { open + 1 } else { open };
        for f in 0..choices {
            if self.members[f].len() == self.size {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(());
            }
            if self.members[f]
                .iter()
                .any(|&q| self.config.line_through(p, q).is_some())
            {
                continue;
            }
            self.fiber_of[p] = f;
            self.members[f].push(p);
            let pushed = self.check_lines(p);
            if let Some(pushed) = pushed {
                let found = self.extend(p + 1)?;
                self.complete_images.truncate(self.complete_images.len() - pushed);
                if found.is_some() {
                    return Ok(found);
                }
            }
            self.members[f].pop();
            self.fiber_of[p] = UNSET;
        }
        Ok(None)
    }

    /// Returns how many completed images were recorded, or `None` on conflict.
    fn check_lines(&mut self, p: usize) -> Option<usize> {
        let mut pushed = 0;
        for &l in self.config.lines_through(p) {
            let mut image: Vec<usize> = self
                .config
                .line(l)
                .iter()
                .map(|&u| self.fiber_of[u])
                .filter(|&f| f != UNSET)
                .collect();
            image.sort_unstable();
            let complete = image.len() == self.config.line(l).len();
            for other in &self.complete_images {
                let shared = image.iter().filter(|f| other.binary_search(f).is_ok()).count();
                let inside = shared == image.len();
                if shared >= 2 && !(inside && (!complete || image == *other)) {
                    self.complete_images.truncate(self.complete_images.len() - pushed);
                    return None;
                }
            }
            if complete {
                self.complete_images.push(image);
                pushed += 1;
            }
        }
        Some(pushed)
    }

    fn leaf(&self) -> Option<CoveringMap> {
        let mut lines: Vec<Vec<usize>> = self.complete_images.clone();
        lines.sort();
        lines.dedup();
        let base = Configuration::new(IncidenceStructure::new(self.fibers, lines).ok()?).ok()?;
        let (bp, cp) = (base.params(), self.config.params());
        if bp.s != cp.s || bp.t != cp.t {
            return None;
        }
        verify_covering(self.config, &base, self.fiber_of.clone()).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    #[test]
    fn fano_takes_the_fast_path() {
        let f = library::fano();
        for v in [is_prime_regular(&f, PrimalityBudget::default()), is_prime_general(&f, 1000)] {
            assert_eq!(v.status, PrimeStatus::Prime);
            assert_eq!(v.reason, PrimeReason::OrderFastPath);
            assert_eq!(v.explored, 0);
        }
    }

    #[test]
    fn mod14_admits_only_order_two() {
        let c = library::mod14();
        let orders: Vec<usize> = admissible_orders(&c, &[14, 14])
            .into_iter()
            .filter(OrderCandidate::admissible)
            .map(|c| c.order)
            .collect();
        assert_eq!(orders, vec![2]);
    }

    #[test]
    fn orbit_filter_rejects_three_for_14_and_7() {
        // a (21_3) shape with line orbits 14 and 7
        let c = library::mod21();
        let cands = admissible_orders(&c, &[21, 14, 7]);
        let three = cands.iter().find(|c| c.order == 3).unwrap();
        assert_eq!(three.orbit_filter, Err(14));
        assert!(!three.admissible());
        assert!(three.point_bound && three.line_bound);
    }

    #[test]
    fn mod14_is_not_prime_both_ways() {
        let c = library::mod14();
        let r = is_prime_regular(&c, PrimalityBudget::default());
        assert_eq!(r.status, PrimeStatus::NotPrime);
        assert!(r.witness.as_ref().unwrap().base().is_isomorphic(&library::fano()));
        let g = is_prime_general(&c, 10_000_000);
        assert_eq!(g.status, PrimeStatus::NotPrime);
        assert!(g.witness.unwrap().base().is_isomorphic(&library::fano()));
    }

    #[test]
    fn hexagon_covers_a_triangle() {
        let r = is_prime_regular(&library::polygon(6), PrimalityBudget::default());
        assert_eq!(r.status, PrimeStatus::NotPrime);
        assert_eq!(r.witness.unwrap().base().point_count(), 3);
        assert_eq!(r.witness_group.unwrap().order(), 2);
    }

    #[test]
    fn small_polygons_are_prime() {
        for n in [3, 4, 5, 7] {
            let c = library::polygon(n);
            assert_eq!(is_prime_general(&c, 1_000_000).status, PrimeStatus::Prime, "{n}");
            assert_eq!(is_prime_regular(&c, PrimalityBudget::default()).status, PrimeStatus::Prime, "{n}");
        }
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let v = is_prime_general(&library::polygon(12), 3);
        assert_eq!(v.status, PrimeStatus::Inconclusive);
        assert_eq!(v.reason, PrimeReason::BudgetExceeded);
    }
}
