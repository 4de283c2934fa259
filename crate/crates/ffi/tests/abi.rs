use std::ffi::{CStr, CString};
use std::ptr;

use glassnet_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { glassnet_string_free(s) };
    text
}

fn last_error() -> String {
    let p = glassnet_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn first_example() -> *mut GlassnetNetwork {
    let w = [1.0, 4.0, 2.0, 3.0];
    let mut net = ptr::null_mut();
    assert_eq!(unsafe { glassnet_network_new(2, w.as_ptr(), false, &mut net) }, GlassnetStatus::Ok);
    net
}

#[test]
fn stable_sets_of_the_first_example() {
    let net = first_example();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { glassnet_stable_sets_json(net, &mut out) }, GlassnetStatus::Ok);
    assert_eq!(take(out), r#"[{"set":[1,2],"verdict":"Stable","attractor":[5.0,5.0],"margin":5.0}]"#);
    let (mut stable, mut margin) = (false, 0.0);
    let idx = [1u32, 2];
    assert_eq!(unsafe { glassnet_is_stable_set(net, idx.as_ptr(), 2, &mut stable, &mut margin) }, GlassnetStatus::Ok);
    assert!(stable);
    assert_eq!(margin, 5.0);
    assert_eq!(
        unsafe { glassnet_is_stable_set(net, idx.as_ptr(), 1, &mut stable, ptr::null_mut()) },
        GlassnetStatus::Ok
    );
    assert!(!stable);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { glassnet_factorize_json(net, idx.as_ptr(), 1, 0.5, &mut out) }, GlassnetStatus::NotStable);
    assert!(out.is_null());
    unsafe { glassnet_network_free(net) };
}

#[test]
fn embedded_input_and_factorization() {
    let w = [2.0, 0.0, 0.0, 2.0];
    let mu = [-1.0, -1.0];
    let mut net = ptr::null_mut();
    assert_eq!(unsafe { glassnet_network_with_input(2, w.as_ptr(), mu.as_ptr(), false, &mut net) }, GlassnetStatus::Ok);
    let mut dim = 0;
    assert_eq!(unsafe { glassnet_network_dim(net, &mut dim) }, GlassnetStatus::Ok);
    assert_eq!(dim, 3);
    let idx = [1u32, 2, 3];
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { glassnet_factorize_json(net, idx.as_ptr(), 3, 0.5, &mut out) }, GlassnetStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["x"], serde_json::json!([[1.5, 1.0, 1.0], [1.0, 1.5, 1.0], [1.0, 1.0, 1.5]]));
    // {1} lacks the clamped input, so it is not a part of the embedded network
    assert_eq!(unsafe { glassnet_factorize_json(net, idx.as_ptr(), 1, 0.5, &mut out) }, GlassnetStatus::Validation);
    unsafe { glassnet_network_free(net) };
}

#[test]
fn json_constructor_reports_errors() {
    let mut net = ptr::null_mut();
    let bad = CString::new(r#"{"n":2,"weights":[[1,-1],[-1,1]]}"#).unwrap();
    assert_eq!(unsafe { glassnet_network_from_json(bad.as_ptr(), false, &mut net) }, GlassnetStatus::Validation);
    assert!(last_error().contains("{1,2}"));
    assert_eq!(unsafe { glassnet_network_from_json(bad.as_ptr(), true, &mut net) }, GlassnetStatus::Ok);
    unsafe { glassnet_network_free(net) };
    let broken = CString::new("{\"n\":2,").unwrap();
    assert_eq!(unsafe { glassnet_network_from_json(broken.as_ptr(), false, &mut net) }, GlassnetStatus::Parse);
    assert!(last_error().contains("line 1"));
}

#[test]
fn null_arguments_are_rejected() {
    let mut net = ptr::null_mut();
    assert_eq!(unsafe { glassnet_network_new(2, ptr::null(), false, &mut net) }, GlassnetStatus::NullPointer);
    assert_eq!(unsafe { glassnet_network_dim(ptr::null(), ptr::null_mut()) }, GlassnetStatus::NullPointer);
    unsafe { glassnet_network_free(ptr::null_mut()) };
    unsafe { glassnet_string_free(ptr::null_mut()) };
}

#[test]
fn simulation_converges() {
    let net = first_example();
    let x0 = [0.5, -1.0];
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { glassnet_simulate_json(net, x0.as_ptr(), 2, 50.0, 100, &mut out) }, GlassnetStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["final_state"], serde_json::json!([5.0, 5.0]));
    assert_eq!(unsafe { glassnet_simulate_json(net, x0.as_ptr(), 1, 50.0, 100, &mut out) }, GlassnetStatus::Validation);
    unsafe { glassnet_network_free(net) };
}

#[test]
fn counts_come_back_as_decimal_strings() {
    let mode = CString::new("unconstrained").unwrap();
    let mut out = ptr::null_mut();
    for (fam, row, expected) in [("single:1,2", 1, "5"), ("nested:1;1,2", 1, "3"), ("nested:1;1,2", 2, "1")] {
        let fam = CString::new(fam).unwrap();
        assert_eq!(
            unsafe { glassnet_count_signatures(fam.as_ptr(), 2, row, mode.as_ptr(), &mut out) },
            GlassnetStatus::Ok
        );
        assert_eq!(take(out), expected);
    }
    // 3^100 − 2^100 does not fit in 64 bits
    let fam =
        CString::new(format!("single:{}", (1..=100).map(|i| i.to_string()).collect::<Vec<_>>().join(","))).unwrap();
    assert_eq!(unsafe { glassnet_count_signatures(fam.as_ptr(), 100, 1, mode.as_ptr(), &mut out) }, GlassnetStatus::Ok);
    assert!(take(out).len() > 40);
    let bad = CString::new("sideways").unwrap();
    assert_eq!(
        unsafe { glassnet_count_signatures(fam.as_ptr(), 100, 1, bad.as_ptr(), &mut out) },
        GlassnetStatus::Parse
    );
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(glassnet_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
