//! Covering maps between configurations.
//!
//! A covering `q: C~ -> C` is a point surjection whose fibers all have the
//! same size (the degree) and which sends every line of `C~` onto a line of
//! `C`. With equal `t` on both sides the second condition forces `q` to be
//! injective on each line. Line fibers are not required to be uniform.

use num_integer::Integer;
use thiserror::Error;

use crate::incidence::Configuration;
use crate::perm::{automorphisms_matching, group_from_images, Permutation, PermutationGroup};
use crate::search::bfs_order;
use crate::BudgetExceeded;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoveringError {
    #[error("point map has {got} entries, the cover has {expected} points")]
    WrongLength { expected: usize, got: usize },
    #[error("cover point {point} maps to {image}, outside the base")]
    OutOfRange { point: usize, image: usize },
    #[error("{cover_points} cover points do not split evenly over {base_points} base points")]
    NonIntegerDegree { cover_points: usize, base_points: usize },
    #[error("base point {base_point} has {size} preimages, expected {expected}")]
    UnequalFibers {
        base_point: usize,
        size: usize,
        expected: usize,
    },
    #[error("cover line {line} has points {points:?} with the same image")]
    NotInjectiveOnLine { line: usize, points: (usize, usize) },
    #[error("cover line {line} maps to {image:?}, which is not a base line")]
    LineNotMapped { line: usize, image: Vec<usize> },
    #[error("the two coverings do not share the middle configuration")]
    NotComposable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringMap {
    cover: Configuration,
    base: Configuration,
    point_map: Vec<usize>,
    line_map: Vec<usize>,
    degree: usize,
}

impl CoveringMap {
    pub fn cover(&self) -> &Configuration {
        &self.cover
    }

    pub fn base(&self) -> &Configuration {
        &self.base
    }

    pub fn point_map(&self) -> &[usize] {
        &self.point_map
    }

    pub fn line_map(&self) -> &[usize] {
        &self.line_map
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Cover points over base point `p`.
    pub fn fiber(&self, p: usize) -> Vec<usize> {
        (0..self.point_map.len()).filter(|&x| self.point_map[x] == p).collect()
    }

    /// Whether every base line has the same number of cover lines over it.
    pub fn line_fibers_uniform(&self) -> bool {
        let mut counts = vec![0usize; self.base.line_count()];
        for &l in &self.line_map {
            counts[l] += 1;
        }
        counts.windows(2).all(|w| w[0] == w[1])
    }

    /// `other ∘ self` where `other` starts at this covering's base.
    pub fn then(&self, other: &CoveringMap) -> Result<CoveringMap, CoveringError> {
        if self.base != other.cover {
            return Err(CoveringError::NotComposable);
        }
        let composed = self.point_map.iter().map(|&p| other.point_map[p]).collect();
        verify_covering(&self.cover, &other.base, composed)
    }
}

/// Validates `point_map` (0-based) as a covering and derives its line map.
pub fn verify_covering(
    cover: &Configuration,
    base: &Configuration,
    point_map: Vec<usize>,
) -> Result<CoveringMap, CoveringError> {
    let (nc, nb) = (cover.point_count(), base.point_count());
    if point_map.len() != nc {
        return Err(CoveringError::WrongLength {
            expected: nc,
            got: point_map.len(),
        });
    }
    if let Some((point, &image)) = point_map.iter().enumerate().find(|(_, &b)| b >= nb) {
        return Err(CoveringError::OutOfRange { point, image });
    }
    if nc % nb != 0 {
        return Err(CoveringError::NonIntegerDegree {
            cover_points: nc,
            base_points: nb,
        });
    }
    let degree = nc / nb;
    let mut sizes = vec![0usize; nb];
    for &b in &point_map {
        sizes[b] += 1;
    }
    if let Some((base_point, &size)) = sizes.iter().enumerate().find(|(_, &s)| s != degree) {
        return Err(CoveringError::UnequalFibers {
            base_point,
            size,
            expected: degree,
        });
    }
    let mut line_map = Vec::with_capacity(cover.line_count());
    for (j, line) in cover.lines().iter().enumerate() {
        let mut image: Vec<usize> = line.iter().map(|&p| point_map[p]).collect();
        for (a, &p) in line.iter().enumerate() {
            if let Some(&q) = line[a + 1..].iter().find(|&&q| point_map[q] == point_map[p]) {
                return Err(CoveringError::NotInjectiveOnLine {
                    line: j,
                    points: (p, q),
                });
            }
        }
        image.sort_unstable();
        match base.find_line(&image) {
            Some(l) => line_map.push(l),
            None => return Err(CoveringError::LineNotMapped { line: j, image }),
        }
    }
    Ok(CoveringMap {
        cover: cover.clone(),
        base: base.clone(),
        point_map,
        line_map,
        degree,
    })
}

/// All coverings `cover -> base`, up to `limit`, in search order.
///
/// Empty when the point counts do not divide or `(s, t)` differ.
pub fn find_coverings(
    cover: &Configuration,
    base: &Configuration,
    limit: Option<usize>,
    node_budget: u64,
) -> Result<Vec<CoveringMap>, BudgetExceeded> {
    let (pc, pb) = (cover.params(), base.params());
    if pc.n % pb.n != 0 || pc.s != pb.s || pc.t != pb.t {
        return Ok(Vec::new());
    }
    let mut search = CoverSearch {
        cover,
        base,
        degree: pc.n / pb.n,
        order: bfs_order(cover),
        map: vec![UNSET; pc.n],
        fiber: vec![0; pb.n],
        limit,
        budget: node_budget,
        nodes: 0,
        found: Vec::new(),
    };
    search.extend(0)?;
    Ok(search.found)
}

const UNSET: usize = usize::MAX;

struct CoverSearch<'a> {
    cover: &'a Configuration,
    base: &'a Configuration,
    degree: usize,
    order: Vec<usize>,
    map: Vec<usize>,
    fiber: Vec<usize>,
    limit: Option<usize>,
    budget: u64,
    nodes: u64,
    found: Vec<CoveringMap>,
}

impl CoverSearch<'_> {
    fn full(&self) -> bool {
        self.limit.is_some_and(|l| self.found.len() >= l)
    }

    fn extend(&mut self, depth: usize) -> Result<(), BudgetExceeded> {
        if depth == self.order.len() {
            if let Ok(cm) = verify_covering(self.cover, self.base, self.map.clone()) {
                self.found.push(cm);
            }
            return Ok(());
        }
        let p = self.order[depth];
        for q in 0..self.base.point_count() {
            if self.fiber[q] == self.degree {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(BudgetExceeded {
                    explored: self.nodes,
                });
            }
            if !self.fits(p, q) {
                continue;
            }
            self.map[p] = q;
            self.fiber[q] += 1;
            self.extend(depth + 1)?;
            self.map[p] = UNSET;
            self.fiber[q] -= 1;
            if self.full() {
                break;
            }
        }
        Ok(())
    }

    /// Images of each line through `p` stay distinct and inside one base line.
    fn fits(&self, p: usize, q: usize) -> bool {
        for &l in self.cover.lines_through(p) {
            let mut base_line = None;
            for &u in self.cover.line(l) {
                let img = self.map[u];
                if u == p || img == UNSET {
                    continue;
                }
                if img == q {
                    return false;
                }
                match base_line {
                    None => match self.base.line_through(q, img) {
                        Some(bl) => base_line = Some(bl),
                        None => return false,
                    },
                    Some(bl) => {
                        if !self.base.lines_through(img).contains(&bl) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Automorphisms `g` of the cover with `q ∘ g = q`.
pub fn covering_translations(cm: &CoveringMap) -> PermutationGroup {
    let pm = &cm.point_map;
    let allowed = |p: usize, x: usize| pm[p] == pm[x];
    let images = automorphisms_matching(&cm.cover, Some(&allowed), crate::DEFAULT_NODE_BUDGET)
        .expect("translation search stays inside each fiber");
    group_from_images(&cm.cover, images)
}

/// Whether `f` commutes with every element of `translations`.
pub fn commutes_with(f: &Permutation, translations: &PermutationGroup) -> bool {
    translations
        .elements()
        .iter()
        .all(|g| f.compose(g) == g.compose(f))
}

/// The base automorphism `q ∘ f ∘ q⁻¹`, when it is well defined.
///
/// It always is when `f` commutes with the covering translations and those
/// act transitively on fibers; otherwise the map is checked fiber by fiber.
pub fn project_automorphism(cm: &CoveringMap, f: &Permutation) -> Option<Permutation> {
    let pm = &cm.point_map;
    let nb = cm.base.point_count();
    let mut images = vec![UNSET; nb];
    for x in 0..pm.len() {
        let img = pm[f.point(x)];
        match images[pm[x]] {
            UNSET => images[pm[x]] = img,
            prev if prev != img => return None,
            _ => {}
        }
    }
    Permutation::automorphism(&cm.base, images).ok()
}

/// Every cover automorphism `f` with `q ∘ f = g ∘ q`.
pub fn lift_automorphism(cm: &CoveringMap, g: &Permutation) -> Vec<Permutation> {
    let pm = &cm.point_map;
    let allowed = |p: usize, x: usize| pm[x] == g.point(pm[p]);
    let images = automorphisms_matching(&cm.cover, Some(&allowed), crate::DEFAULT_NODE_BUDGET)
        .expect("lift search stays inside fibers");
    let mut lifts: Vec<Permutation> = images
        .into_iter()
        .map(|img| Permutation::automorphism(&cm.cover, img).expect("search yields automorphisms"))
        .collect();
    lifts.sort();
    lifts
}

/// Outcome of a common-cover search.
#[derive(Debug, Clone)]
pub enum CommonCover {
    Found {
        cover: Configuration,
        first: CoveringMap,
        second: CoveringMap,
    },
    /// No common cover with at most `max_points` points. `proven` is true
    /// when the absence is a theorem (polygons, or mismatched `s,t`) rather
    /// than the end of the candidate list.
    NoneWithinBound { max_points: usize, proven: bool },
}

/// Looks for a configuration covering both `c1` and `c2`.
///
/// Polygons use the closed form: the `lcm(n1, n2)`-gon wound around both.
/// Otherwise see [`common_cover_search_candidates`].
pub fn common_cover_search(
    c1: &Configuration,
    c2: &Configuration,
    max_points: usize,
    node_budget: u64,
) -> Result<CommonCover, BudgetExceeded> {
    let (p1, p2) = (c1.params(), c2.params());
    if p1.s != p2.s || p1.t != p2.t {
        return Ok(CommonCover::NoneWithinBound {
            max_points,
            proven: true,
        });
    }
    if p1.s == 2 && p1.t == 2 {
        return Ok(polygon_common_cover(c1, c2, max_points));
    }
    common_cover_search_candidates(c1, c2, max_points, node_budget)
}

/// Closed form for two polygons.
pub fn polygon_common_cover(c1: &Configuration, c2: &Configuration, max_points: usize) -> CommonCover {
    let (n1, n2) = (c1.point_count(), c2.point_count());
    let size = n1.lcm(&n2);
    if size > max_points {
        return CommonCover::NoneWithinBound {
            max_points,
            proven: true,
        };
    }
    let cover = crate::library::polygon(size);
    let wind = |c: &Configuration| {
        let walk = polygon_walk(c);
        let map = (0..size).map(|k| walk[k % walk.len()]).collect();
        verify_covering(&cover, c, map).expect("winding map covers the polygon")
    };
    let first = wind(c1);
    let second = wind(c2);
    CommonCover::Found {
        cover,
        first,
        second,
    }
}

/// Points of a polygon in cyclic order starting at point 0.
fn polygon_walk(c: &Configuration) -> Vec<usize> {
    let n = c.point_count();
    let mut walk = vec![0];
    let mut prev_line = usize::MAX;
    let mut at = 0;
    while walk.len() < n {
        let &l = c
            .lines_through(at)
            .iter()
            .find(|&&l| l != prev_line)
            .expect("polygon points are on two lines");
        let next = *c.line(l).iter().find(|&&q| q != at).expect("2-point line");
        walk.push(next);
        prev_line = l;
        at = next;
    }
    walk
}

/// Candidate search: for point counts that are multiples of `lcm(n1, n2)`,
/// try the two inputs themselves and every cyclic (`mod` notation) family of
/// the right shape, returning the first candidate that covers both.
///
/// Only symmetric families are generated, so for `s != t` only the inputs
/// themselves are tried. Absence is never `proven` here.
pub fn common_cover_search_candidates(
    c1: &Configuration,
    c2: &Configuration,
    max_points: usize,
    node_budget: u64,
) -> Result<CommonCover, BudgetExceeded> {
    let (p1, p2) = (c1.params(), c2.params());
    let step = p1.n.lcm(&p2.n);
    let mut size = step;
    while size <= max_points {
        let mut candidates: Vec<Configuration> = Vec::new();
        if size == p1.n {
            candidates.push(c1.clone());
        }
        if size == p2.n {
            candidates.push(c2.clone());
        }
        if p1.s == p1.t {
            candidates.extend(cyclic_family(size, p1.t));
        }
        for cand in candidates {
            let params = cand.params();
            if params.s != p1.s || params.t != p1.t {
                continue;
            }
            let Some(first) = find_coverings(&cand, c1, Some(1), node_budget)?.pop() else {
                continue;
            };
            let Some(second) = find_coverings(&cand, c2, Some(1), node_budget)?.pop() else {
                continue;
            };
            return Ok(CommonCover::Found {
                cover: cand,
                first,
                second,
            });
        }
        size += step;
    }
    Ok(CommonCover::NoneWithinBound {
        max_points,
        proven: false,
    })
}

/// Every valid configuration `{1, r2, .., rt} mod size`, bases in
/// lexicographic order.
pub fn cyclic_family(size: usize, t: usize) -> Vec<Configuration> {
    let mut out = Vec::new();
    if t < 2 || t > size {
        return out;
    }
    let mut rest: Vec<usize> = (2..=t).collect();
    loop {
        let mut base = vec![1];
        base.extend_from_slice(&rest);
        if let Ok(e) = crate::incidence::from_mod_notation(&base, size) {
            if let Ok(c) = Configuration::new(e.structure) {
                out.push(c);
            }
        }
        // next (t-1)-combination of 2..=size
        let k = rest.len();
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if rest[i] < size - (k - 1 - i) {
                break;
            }
        }
        rest[i] += 1;
        for j in i + 1..k {
            rest[j] = rest[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;
    use crate::perm::automorphism_group;

    fn residue_map(n: usize, modulus: usize) -> Vec<usize> {
        (0..n).map(|x| x % modulus).collect()
    }

    #[test]
    fn mod14_covers_fano_twice() {
        let cm = verify_covering(&library::mod14(), &library::fano(), residue_map(14, 7)).unwrap();
        assert_eq!(cm.degree(), 2);
        assert!(cm.line_fibers_uniform());
        assert_eq!(covering_translations(&cm).order(), 2);
    }

    #[test]
    fn identity_is_degree_one() {
        let f = library::fano();
        let cm = verify_covering(&f, &f, (0..7).collect()).unwrap();
        assert_eq!(cm.degree(), 1);
        assert_eq!(covering_translations(&cm).order(), 1);
    }

    #[test]
    fn hexagon_over_triangle() {
        let cm = verify_covering(&library::polygon(6), &library::polygon(3), residue_map(6, 3)).unwrap();
        assert_eq!(cm.degree(), 2);
    }

    #[test]
    fn rejections_carry_witnesses() {
        let hex = library::polygon(6);
        let tri = library::polygon(3);
        assert!(matches!(
            verify_covering(&hex, &tri, vec![0, 0, 1, 1, 2, 2]),
            Err(CoveringError::NotInjectiveOnLine { line: 0, points: (0, 1) })
        ));
        assert!(matches!(
            verify_covering(&hex, &tri, vec![0, 1, 2, 0, 1, 1]),
            Err(CoveringError::UnequalFibers { .. })
        ));
        assert!(matches!(
            verify_covering(&library::polygon(5), &tri, vec![0, 1, 2, 0, 1]),
            Err(CoveringError::NonIntegerDegree { .. })
        ));
        assert!(matches!(
            verify_covering(&library::mod14(), &library::fano(), vec![0, 1, 2, 3, 4, 5, 6, 0, 1, 2, 3, 4, 6, 5]),
            Err(CoveringError::LineNotMapped { .. })
        ));
    }

    #[test]
    fn search_finds_the_residue_map() {
        let found = find_coverings(&library::mod14(), &library::fano(), None, 10_000_000).unwrap();
        assert!(found.iter().any(|cm| cm.point_map() == residue_map(14, 7)));
        assert!(find_coverings(&library::fano(), &library::polygon(3), None, 1000).unwrap().is_empty());
        let twelve = find_coverings(&library::polygon(12), &library::polygon(4), Some(5), 1_000_000).unwrap();
        assert_eq!(twelve.len(), 5);
    }

    #[test]
    fn twelve_gon_over_square_has_three_translations() {
        let cm = verify_covering(&library::polygon(12), &library::polygon(4), residue_map(12, 4)).unwrap();
        assert_eq!(covering_translations(&cm).order(), 3);
    }

    #[test]
    fn rotation_projects_and_translations_project_to_identity() {
        let cover = library::mod14();
        let cm = verify_covering(&cover, &library::fano(), residue_map(14, 7)).unwrap();
        let rot = Permutation::automorphism(&cover, (0..14).map(|x| (x + 2) % 14).collect()).unwrap();
        assert_eq!(rot.order(), 7);
        let down = project_automorphism(&cm, &rot).unwrap();
        assert_eq!(down.points(), (0..7).map(|x| (x + 2) % 7).collect::<Vec<_>>());
        for t in covering_translations(&cm).elements() {
            assert!(project_automorphism(&cm, t).unwrap().is_identity());
            assert!(commutes_with(&rot, &covering_translations(&cm)));
        }
    }

    #[test]
    fn fano_reflection_does_not_lift() {
        let fano = library::fano();
        let cm = verify_covering(&library::mod14(), &fano, residue_map(14, 7)).unwrap();
        let reflection = Permutation::parse(&fano, "(1 4)(3 5)").unwrap();
        assert!(lift_automorphism(&cm, &reflection).is_empty());
        let id = Permutation::identity(7, 7);
        let lifts = lift_automorphism(&cm, &id);
        assert_eq!(lifts, covering_translations(&cm).elements().to_vec());
    }

    #[test]
    fn composition_multiplies_degrees() {
        let a = verify_covering(&library::polygon(12), &library::polygon(6), residue_map(12, 6)).unwrap();
        let b = verify_covering(&library::polygon(6), &library::polygon(3), residue_map(6, 3)).unwrap();
        let c = a.then(&b).unwrap();
        assert_eq!(c.degree(), 4);
        assert!(b.then(&a).is_err());
    }

    #[test]
    fn polygon_common_covers() {
        let sq = library::polygon(4);
        let hex = library::polygon(6);
        match common_cover_search(&sq, &hex, 24, 1_000_000).unwrap() {
            CommonCover::Found { cover, first, second } => {
                assert_eq!(cover.point_count(), 12);
                assert_eq!(first.degree(), 3);
                assert_eq!(second.degree(), 2);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            common_cover_search(&sq, &hex, 11, 1_000_000).unwrap(),
            CommonCover::NoneWithinBound { proven: true, .. }
        ));
        // relabelled square
        let twisted = Configuration::new(
            crate::IncidenceStructure::from_one_based(4, &[&[1, 3], &[3, 2], &[2, 4], &[4, 1]]).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            polygon_common_cover(&twisted, &library::polygon(3), 12),
            CommonCover::Found { .. }
        ));
    }

    #[test]
    fn candidate_search_on_fano_with_itself() {
        let f = library::fano();
        match common_cover_search(&f, &f, 7, 1_000_000).unwrap() {
            CommonCover::Found { first, second, .. } => {
                assert_eq!(first.degree(), 1);
                assert_eq!(second.degree(), 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lifting_base_automorphisms_forms_a_group() {
        let fano = library::fano();
        let cm = verify_covering(&library::mod14(), &fano, residue_map(14, 7)).unwrap();
        let aut = automorphism_group(&fano).unwrap();
        let lifting: Vec<&Permutation> = aut
            .elements()
            .iter()
            .filter(|g| !lift_automorphism(&cm, g).is_empty())
            .collect();
        for a in &lifting {
            for b in &lifting {
                assert!(lifting.contains(&&a.compose(b)));
            }
        }
    }
}
