use orbiconf::covering::verify_covering;
use orbiconf::io::{parse_configuration, parse_orbiconfiguration, write_configuration, write_orbiconfiguration};
use orbiconf::library;
use orbiconf::orbi::{orbi_dual, orbi_isomorphic, quotient};
use orbiconf::perm::{automorphism_group, subgroups};
use orbiconf::rational::int;
use orbiconf::scan;
use proptest::prelude::*;

proptest! {
    #[test]
    fn swapped_fiber_entries_are_rejected(i in 0usize..14, j in 0usize..14) {
        prop_assume!(i % 7 != j % 7);
        let mut map: Vec<usize> = (0..14).map(|x| x % 7).collect();
        map.swap(i, j);
        prop_assert!(verify_covering(&library::mod14(), &library::fano(), map).is_err());
    }

    #[test]
    fn out_of_range_images_are_rejected(i in 0usize..14, v in 7usize..20) {
        let mut map: Vec<usize> = (0..14).map(|x| x % 7).collect();
        map[i] = v;
        prop_assert!(verify_covering(&library::mod14(), &library::fano(), map).is_err());
    }

    #[test]
    fn polygon_quotients_balance(k in 3usize..13, pick in any::<prop::sample::Index>()) {
        let c = library::polygon(k);
        let aut = automorphism_group(&c).unwrap();
        let groups = subgroups(&aut, None, 1_000_000).groups;
        let g = &groups[pick.index(groups.len())];
        let p = quotient(&c, g).structure.params();
        prop_assert_eq!(p.n * int(2), p.m * int(2));
        prop_assert_eq!(p.n * int(g.order() as i64), int(k as i64));
    }

    #[test]
    fn polygon_text_round_trips(k in 3usize..30) {
        let c = library::polygon(k);
        let text = write_configuration("p", c.structure());
        let back = parse_configuration(&text).unwrap();
        prop_assert_eq!(write_configuration("p", &back.structure), text);
    }
}

#[test]
fn dual_is_an_involution_on_small_structures() {
    let mut dualisable = 0;
    for o in scan::n2_structures(4, 2) {
        let Ok(d) = orbi_dual(&o) else { continue };
        dualisable += 1;
        let dd = orbi_dual(&d).unwrap();
        assert!(orbi_isomorphic(&dd, &o).is_some(), "{o}");
    }
    assert!(dualisable > 10);
}

#[test]
fn bundled_files_round_trip() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        match path.extension().and_then(|e| e.to_str()) {
            Some("cfg") => {
                let f = parse_configuration(&text).unwrap();
                let again = write_configuration(&f.name, &f.structure);
                let g = parse_configuration(&again).unwrap();
                assert_eq!(g.structure.canonical(), f.structure.canonical(), "{path:?}");
            }
            Some("orbi") => {
                let f = parse_orbiconfiguration(&text).unwrap();
                let again = write_orbiconfiguration(&f.name, &f.structure);
                assert_eq!(parse_orbiconfiguration(&again).unwrap().structure, f.structure, "{path:?}");
            }
            _ => {}
        }
    }
}
