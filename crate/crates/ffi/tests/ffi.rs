use std::ffi::CStr;
use std::ptr;

use frame_lab_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(fl_last_error_message()) }.to_string_lossy().into_owned()
}

fn build(dim: usize, count: usize, norm2: f64) -> *mut FlSystem {
    let mut handle = ptr::null_mut();
    assert_eq!(unsafe { fl_build_untf(dim, count, norm2, 0, &mut handle) }, FlStatus::Ok);
    assert!(!handle.is_null());
    handle
}

#[test]
fn system_round_trip() {
    let coords = [1.0, 0.0, 0.0, 1.0, 0.6, 0.8];
    let mut handle = ptr::null_mut();
    unsafe {
        assert_eq!(fl_system_new(2, 3, coords.as_ptr(), &mut handle), FlStatus::Ok);
        assert_eq!((fl_system_dim(handle), fl_system_count(handle)), (2, 3));
        let mut out = [0.0; 6];
        assert_eq!(fl_system_copy_coords(handle, out.as_mut_ptr(), out.len()), FlStatus::Ok);
        assert_eq!(out, coords);
        let mut small = [0.0; 5];
        assert_eq!(fl_system_copy_coords(handle, small.as_mut_ptr(), small.len()), FlStatus::BufferTooSmall);
        assert!(last_error().contains("6 needed"));
        fl_system_free(handle);
    }
}

#[test]
fn rejects_bad_input() {
    let mut handle = ptr::null_mut();
    let bad = [1.0, f64::NAN];
    unsafe {
        assert_eq!(fl_system_new(2, 1, bad.as_ptr(), &mut handle), FlStatus::InvalidArgument);
        assert!(handle.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(fl_system_new(2, 1, ptr::null(), &mut handle), FlStatus::NullPointer);
        let mut value = 0.0;
        assert_eq!(fl_frame_potential(ptr::null(), &mut value), FlStatus::NullPointer);
        assert_eq!(fl_build_untf(3, 2, 1.0, 0, &mut handle), FlStatus::Domain);
        assert_eq!(fl_random_system(2, 3, 2.0, 1.0, 0, &mut handle), FlStatus::Domain);
        fl_system_free(ptr::null_mut());
        assert_eq!(fl_system_dim(ptr::null()), 0);
    }
}

#[test]
fn zero_over_zero_is_reported() {
    let coords = [0.0, 0.0, 1.0, 0.0];
    let mut handle = ptr::null_mut();
    unsafe {
        assert_eq!(fl_system_new(2, 2, coords.as_ptr(), &mut handle), FlStatus::Ok);
        let mut value = 0.0;
        assert_eq!(fl_evaluate(handle, 0.0, &mut value), FlStatus::Indeterminate);
        assert_eq!(fl_tightness_defect(handle, &mut value), FlStatus::Ok);
        fl_system_free(handle);
    }
}

#[test]
fn untf_quantities() {
    let handle = build(2, 4, 1.0);
    unsafe {
        let (mut value, mut fp, mut defect) = (0.0, 0.0, 0.0);
        assert_eq!(fl_evaluate(handle, 0.0, &mut value), FlStatus::Ok);
        assert!((value - 1.0).abs() < 1e-9);
        assert_eq!(fl_frame_potential(handle, &mut fp), FlStatus::Ok);
        assert!((fp - 8.0).abs() < 1e-9);
        assert_eq!(fl_tightness_defect(handle, &mut defect), FlStatus::Ok);
        assert!(defect <= 1e-8);
        let mut ratios = [0.0; 4];
        assert_eq!(fl_ratios(handle, 0.0, ratios.as_mut_ptr(), 4), FlStatus::Ok);
        assert!(ratios.iter().all(|r| (r - 1.0).abs() < 1e-9));
        fl_system_free(handle);
    }
}

#[test]
fn orthogonal_system_has_infinite_ratio() {
    let coords = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0];
    let (mut handle, mut value) = (ptr::null_mut(), 0.0);
    unsafe {
        assert_eq!(fl_system_new(3, 2, coords.as_ptr(), &mut handle), FlStatus::Ok);
        assert_eq!(fl_evaluate(handle, 0.0, &mut value), FlStatus::Ok);
    }
    assert_eq!(value, f64::INFINITY);
    unsafe { fl_system_free(handle) };
}

#[test]
fn bounds_struct() {
    let mut b = FlBounds::default();
    assert_eq!(unsafe { fl_bounds(2, 10, 1.0, 1.21, 0.1, &mut b) }, FlStatus::Ok);
    assert!((b.sigma0_value - 0.25).abs() < 1e-15);
    assert!((b.uniform_value - 1.0 / (0.01 + 4.0)).abs() < 1e-15);
    assert!(b.count_bound_valid && b.has_max_nonminimal_count);
    assert_eq!(b.max_nonminimal_count, 2);
    assert!(b.has_mu_upper && b.mu_condition_holds);
    assert!(b.mu_upper >= b.uniform_value);

    assert_eq!(unsafe { fl_bounds(2, 10, 1.0, 1.21, 0.8, &mut b) }, FlStatus::Ok);
    assert!(!b.count_bound_valid && !b.has_mu_upper);
    assert_eq!(unsafe { fl_bounds(2, 2, 1.0, 1.21, 0.1, &mut b) }, FlStatus::Domain);
}

#[test]
fn optimize_is_thread_count_independent() {
    let run = |threads| {
        let (mut handle, mut value) = (ptr::null_mut(), 0.0);
        let status = unsafe { fl_optimize(2, 5, 1.0, 2.0, 0.0, 3, 3, 20_000, threads, &mut handle, &mut value) };
        assert_eq!(status, FlStatus::Ok, "{}", last_error());
        let mut coords = vec![0.0; 10];
        unsafe {
            assert_eq!(fl_system_copy_coords(handle, coords.as_mut_ptr(), 10), FlStatus::Ok);
            fl_system_free(handle);
        }
        (value, coords)
    };
    let (value, coords) = run(1);
    assert!((value - 2.0 / 3.0).abs() < 1e-6, "{value}");
    assert_eq!(run(3), (value, coords));
}

#[test]
fn status_messages() {
    for code in 0..=8 {
        let text = unsafe { CStr::from_ptr(fl_status_message(code)) }.to_str().unwrap();
        assert!(!text.is_empty());
    }
    let text = unsafe { CStr::from_ptr(fl_status_message(99)) }.to_str().unwrap();
    assert_eq!(text, "unknown status");
    assert_eq!(FlStatus::Panic as i32, 8);
}
