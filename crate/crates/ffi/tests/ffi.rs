use std::ffi::{CStr, CString};
use std::ptr;

use twoband_ffi::*;

fn last_error() -> String {
    let p = tb_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

unsafe fn ones_example() -> *mut TbBandMatrix {
    let lower = [1.0; 3];
    let upper = [1.0; 2];
    let mut m = ptr::null_mut();
    let st = tb_band_matrix_new(
        4,
        1,
        2,
        TbMode::Positive as i32,
        lower.as_ptr(),
        ptr::null(),
        3,
        upper.as_ptr(),
        ptr::null(),
        2,
        &mut m,
    );
    assert_eq!(st, TbStatus::Ok);
    m
}

#[test]
fn analyze_round_trip() {
    unsafe {
        let m = ones_example();
        let mut n = 0;
        assert_eq!(tb_band_matrix_order(m, &mut n), TbStatus::Ok);
        assert_eq!(n, 4);

        let mut s = ptr::null_mut();
        assert_eq!(tb_analyze(m, &mut s), TbStatus::Ok);
        let (mut p, mut g, mut z) = (0, 0, 0);
        assert_eq!(tb_spectrum_counts(s, &mut p, &mut g, &mut z), TbStatus::Ok);
        assert_eq!((p, g, z), (3, 1, 1));

        let mut len = 0;
        let mut radii = [0.0; 4];
        assert_eq!(tb_spectrum_radii(s, 2, radii.as_mut_ptr(), 4, &mut len), TbStatus::Ok);
        assert_eq!(len, 1);
        assert!((radii[0] - 2f64.powf(1.0 / 3.0)).abs() < 1e-14);
        assert_eq!(tb_spectrum_radii(s, 3, radii.as_mut_ptr(), 4, &mut len), TbStatus::InvalidInput);

        let (mut re, mut im) = ([0.0; 2], [0.0; 2]);
        assert_eq!(
            tb_spectrum_eigenvalues(s, re.as_mut_ptr(), im.as_mut_ptr(), 2, &mut len),
            TbStatus::BufferTooSmall
        );
        assert_eq!(len, 4);
        let (mut re, mut im) = ([0.0; 4], [0.0; 4]);
        assert_eq!(
            tb_spectrum_eigenvalues(s, re.as_mut_ptr(), im.as_mut_ptr(), 4, &mut len),
            TbStatus::Ok
        );
        let prod_re: f64 = re.iter().zip(&im).filter(|(r, i)| r.hypot(**i) > 0.5).map(|(r, _)| r).sum();
        assert!(prod_re.abs() < 1e-12);

        let mut json = ptr::null_mut();
        assert_eq!(tb_spectrum_to_json(s, &mut json), TbStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        tb_string_free(json);
        assert!(text.contains("\"zero_multiplicity\":1"));

        tb_spectrum_free(s);
        tb_band_matrix_free(m);
    }
}

#[test]
fn verify_through_the_abi() {
    unsafe {
        let m = ones_example();
        let mut passed = -1;
        let mut json = ptr::null_mut();
        assert_eq!(tb_verify(m, 1e-8, 1e-5, &mut passed, &mut json), TbStatus::Ok);
        assert_eq!(passed, 1);
        assert!(CStr::from_ptr(json).to_str().unwrap().contains("\"passed\":true"));
        tb_string_free(json);
        assert_eq!(tb_verify(m, -1.0, 1e-5, &mut passed, ptr::null_mut()), TbStatus::InvalidInput);
        tb_band_matrix_free(m);
    }
}

#[test]
fn json_constructor_and_errors() {
    unsafe {
        let good = CString::new(r#"{"n":9,"b":2,"k":3,"mode":"complex","seed":4}"#).unwrap();
        let mut m = ptr::null_mut();
        assert_eq!(tb_band_matrix_from_json(good.as_ptr(), &mut m), TbStatus::Ok);
        assert!(tb_last_error_message().is_null());
        let mut passed = 0;
        assert_eq!(tb_verify(m, 1e-6, 1e-5, &mut passed, ptr::null_mut()), TbStatus::Ok);
        assert_eq!(passed, 1);
        tb_band_matrix_free(m);

        let bad = CString::new(r#"{"n":4,"b":1,"k":2,"mode":"positive","lower":[1,-1,1],"upper":[1,1]}"#).unwrap();
        let mut m = ptr::null_mut();
        assert_eq!(tb_band_matrix_from_json(bad.as_ptr(), &mut m), TbStatus::InvalidInput);
        assert!(m.is_null());
        assert!(last_error().contains("lower"));

        assert_eq!(tb_band_matrix_from_json(ptr::null(), &mut m), TbStatus::NullPointer);
    }
}

#[test]
fn constructor_validation() {
    unsafe {
        let mut m = ptr::null_mut();
        let one = [1.0];
        let st = tb_band_matrix_new(2, 1, 1, 9, one.as_ptr(), ptr::null(), 1, one.as_ptr(), ptr::null(), 1, &mut m);
        assert_eq!(st, TbStatus::InvalidInput);
        assert!(last_error().contains("mode"));
        let st = tb_band_matrix_new(3, 1, 1, 0, one.as_ptr(), ptr::null(), 1, one.as_ptr(), ptr::null(), 1, &mut m);
        assert_eq!(st, TbStatus::InvalidInput);
        let st = tb_band_matrix_new(2, 1, 1, 0, ptr::null(), ptr::null(), 1, one.as_ptr(), ptr::null(), 1, &mut m);
        assert_eq!(st, TbStatus::NullPointer);
        let im = [0.5];
        let st = tb_band_matrix_new(2, 1, 1, TbMode::Complex as i32, one.as_ptr(), im.as_ptr(), 1, one.as_ptr(), ptr::null(), 1, &mut m);
        assert_eq!(st, TbStatus::Ok);
        tb_band_matrix_free(m);
        tb_band_matrix_free(ptr::null_mut());
        tb_spectrum_free(ptr::null_mut());
        tb_string_free(ptr::null_mut());
    }
}

#[test]
fn predicted_zero_multiplicity() {
    let mut z = 0;
    unsafe {
        assert_eq!(tb_predicted_zero_multiplicity(7, 2, 4, &mut z), TbStatus::Ok);
        assert_eq!(z, 1);
        assert_eq!(tb_predicted_zero_multiplicity(0, 2, 4, &mut z), TbStatus::InvalidInput);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(tb_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
