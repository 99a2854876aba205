//! Bundled structures: cyclic families, polygons and small worked
//! orbiconfigurations.

use crate::incidence::{from_mod_notation, Configuration};
use crate::orbi::{OrbiIncidenceStructure, OrbiLine};

/// The configuration with lines `base mod modulus` (1-based residues).
///
/// Panics when the expansion is not a configuration; use
/// [`from_mod_notation`] and [`Configuration::new`] for fallible input.
pub fn cyclic(base: &[usize], modulus: usize) -> Configuration {
    let e = from_mod_notation(base, modulus).expect("valid mod notation");
    Configuration::new(e.structure).expect("cyclic family is a configuration")
}

/// `{1,2,4} mod 7`.
pub fn fano() -> Configuration {
    cyclic(&[1, 2, 4], 7)
}

/// `{1,2,4} mod 14`, a double cover of the Fano plane.
pub fn mod14() -> Configuration {
    cyclic(&[1, 2, 4], 14)
}

/// `{1,2,4} mod 21`.
pub fn mod21() -> Configuration {
    cyclic(&[1, 2, 4], 21)
}

/// The `n`-gon `{1,2} mod n`, `n >= 3`.
pub fn polygon(n: usize) -> Configuration {
    cyclic(&[1, 2], n)
}

/// All bundled configurations with short names, in a fixed order.
pub fn bundled() -> Vec<(String, Configuration)> {
    let mut out: Vec<(String, Configuration)> =
        (3..=12).map(|n| (format!("polygon{n}"), polygon(n))).collect();
    out.push(("fano".into(), fano()));
    out.push(("mod14".into(), mod14()));
    out.push(("mod21".into(), mod21()));
    out
}

/// Two points: `p1` with weight 2, `p2` with weight 1; a full line through
/// both and a half-weight line meeting `p2` twice. `n = m = 3/2`, `s = t = 2`.
pub fn half_weight_chain() -> OrbiIncidenceStructure {
    OrbiIncidenceStructure::new(
        vec![2, 1],
        vec![
            OrbiLine::new(1, 1, vec![(0, 1), (1, 1)]),
            OrbiLine::new(2, 1, vec![(1, 2)]),
        ],
    )
    .expect("valid structure")
}

/// Two points on one line of multiplicity 2.
pub fn bigon() -> OrbiIncidenceStructure {
    OrbiIncidenceStructure::new(vec![1, 1], vec![OrbiLine::new(1, 2, vec![(0, 1), (1, 1)])])
        .expect("valid structure")
}

/// One point meeting one line twice.
pub fn loop_line() -> OrbiIncidenceStructure {
    OrbiIncidenceStructure::new(vec![1], vec![OrbiLine::new(1, 1, vec![(0, 2)])])
        .expect("valid structure")
}
