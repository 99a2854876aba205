use std::ffi::{CStr, CString};
use std::ptr;

use orbiconf_ffi::*;

fn parse(text: &str) -> *mut OrbiconfConfiguration {
    let t = CString::new(text).unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { orbiconf_configuration_parse(t.as_ptr(), &mut c) }, OrbiconfStatus::Ok);
    c
}

fn from_mod(base: &[usize], modulus: usize) -> *mut OrbiconfConfiguration {
    let mut c = ptr::null_mut();
    let st = unsafe { orbiconf_configuration_from_mod(base.as_ptr(), base.len(), modulus, &mut c) };
    assert_eq!(st, OrbiconfStatus::Ok);
    c
}

#[test]
fn fano_group_and_primality() {
    let c = parse("configuration fano\nmod 7 : 1 2 4\n");
    let (mut n, mut m, mut s, mut t) = (0, 0, 0, 0);
    unsafe {
        assert_eq!(orbiconf_configuration_params(c, &mut n, &mut m, &mut s, &mut t), OrbiconfStatus::Ok);
        assert_eq!((n, m, s, t), (7, 7, 3, 3));
        let mut g = ptr::null_mut();
        assert_eq!(orbiconf_automorphism_group(c, 1_000_000, &mut g), OrbiconfStatus::Ok);
        assert_eq!(orbiconf_group_order(g), 168);
        assert!(!orbiconf_group_is_cyclic(g));
        let mut v = OrbiconfVerdict::Unknown;
        assert_eq!(orbiconf_is_prime(c, OrbiconfPrimeMethod::General, 1_000_000, &mut v), OrbiconfStatus::Ok);
        assert_eq!(v, OrbiconfVerdict::Yes);
        orbiconf_group_free(g);
        orbiconf_configuration_free(c);
    }
}

#[test]
fn mod14_covers_fano() {
    let cover = from_mod(&[1, 2, 4], 14);
    let base = from_mod(&[1, 2, 4], 7);
    let map: Vec<usize> = (0..14).map(|i| i % 7).collect();
    let mut degree = 0;
    unsafe {
        let st = orbiconf_verify_covering(cover, base, map.as_ptr(), map.len(), &mut degree);
        assert_eq!(st, OrbiconfStatus::Ok);
        assert_eq!(degree, 2);
        for method in [OrbiconfPrimeMethod::Regular, OrbiconfPrimeMethod::General] {
            let mut v = OrbiconfVerdict::Unknown;
            assert_eq!(orbiconf_is_prime(cover, method, 1_000_000, &mut v), OrbiconfStatus::Ok);
            assert_eq!(v, OrbiconfVerdict::No);
        }
        let mut g = ptr::null_mut();
        assert_eq!(orbiconf_automorphism_group(cover, 1_000_000, &mut g), OrbiconfStatus::Ok);
        assert_eq!(orbiconf_group_order(g), 14);
        assert!(orbiconf_group_is_cyclic(g));
        orbiconf_group_free(g);
        orbiconf_configuration_free(cover);
        orbiconf_configuration_free(base);
    }
}

#[test]
fn bad_map_is_rejected_with_message() {
    let cover = from_mod(&[1, 2, 4], 14);
    let base = from_mod(&[1, 2, 4], 7);
    let mut map: Vec<usize> = (0..14).map(|i| i % 7).collect();
    map.swap(0, 1);
    let mut degree = 0;
    unsafe {
        let st = orbiconf_verify_covering(cover, base, map.as_ptr(), map.len(), &mut degree);
        assert_eq!(st, OrbiconfStatus::InvalidInput);
        assert!(!orbiconf_last_error().is_null());
        orbiconf_configuration_free(cover);
        orbiconf_configuration_free(base);
    }
}

#[test]
fn quotient_of_square_is_bigon() {
    let c = from_mod(&[1, 2], 4);
    unsafe {
        let mut aut = ptr::null_mut();
        assert_eq!(orbiconf_automorphism_group(c, 1_000_000, &mut aut), OrbiconfStatus::Ok);
        assert_eq!(orbiconf_group_order(aut), 8);
        let mut o = ptr::null_mut();
        assert_eq!(orbiconf_quotient(c, aut, &mut o), OrbiconfStatus::Ok);
        let (mut nn, mut nd, mut mn, mut md) = (0, 0, 0, 0);
        assert_eq!(orbiconf_orbi_counts(o, &mut nn, &mut nd, &mut mn, &mut md), OrbiconfStatus::Ok);
        assert_eq!((nn, nd, mn, md), (1, 2, 1, 2));
        orbiconf_orbi_free(o);
        orbiconf_group_free(aut);
        orbiconf_configuration_free(c);
    }
}

#[test]
fn orbi_round_trip_and_goodbad() {
    let text = "orbiconfiguration chain\npoint 1 a=2\npoint 2 a=1\nline b=1 d=1 : 1 2\nline b=2 d=1 : 2*2\n";
    let t = CString::new(text).unwrap();
    let name = CString::new("chain").unwrap();
    unsafe {
        let mut o = ptr::null_mut();
        assert_eq!(orbiconf_orbi_parse(t.as_ptr(), &mut o), OrbiconfStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(orbiconf_orbi_to_string(o, name.as_ptr(), &mut s), OrbiconfStatus::Ok);
        assert_eq!(CStr::from_ptr(s).to_str().unwrap(), text);
        orbiconf_string_free(s);
        let mut v = OrbiconfVerdict::Unknown;
        assert_eq!(orbiconf_goodbad(o, 6, &mut v), OrbiconfStatus::Ok);
        assert_eq!(v, OrbiconfVerdict::Yes);
        orbiconf_orbi_free(o);
    }
}

#[test]
fn errors_and_nulls() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(orbiconf_configuration_parse(ptr::null(), &mut c), OrbiconfStatus::NullPointer);
        let bad = CString::new("configuration x\nline 1 2\nline 1 2\n").unwrap();
        assert_eq!(orbiconf_configuration_parse(bad.as_ptr(), &mut c), OrbiconfStatus::InvalidInput);
        assert!(c.is_null());
        let msg = CStr::from_ptr(orbiconf_last_error()).to_str().unwrap();
        assert!(!msg.is_empty());
        assert_eq!(orbiconf_group_order(ptr::null()), 0);
        orbiconf_configuration_free(ptr::null_mut());
        orbiconf_string_free(ptr::null_mut());
    }
}

#[test]
fn tiny_budget_is_inconclusive() {
    let c = from_mod(&[1, 2, 4], 14);
    unsafe {
        let mut v = OrbiconfVerdict::Yes;
        let st = orbiconf_is_prime(c, OrbiconfPrimeMethod::General, 3, &mut v);
        assert_eq!(st, OrbiconfStatus::Inconclusive);
        assert_eq!(v, OrbiconfVerdict::Unknown);
        orbiconf_configuration_free(c);
    }
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/orbiconf.h")).unwrap();
    for sym in ["orbiconf_configuration_parse", "orbiconf_is_prime", "ORBICONF_STATUS_INCONCLUSIVE", "typedef struct OrbiconfGroup"] {
        assert!(h.contains(sym), "{sym}");
    }
}
