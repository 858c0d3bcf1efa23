use std::ffi::{CStr, CString};
use std::ptr;

use takagi_ffi::*;

fn last_error() -> String {
    let p = takagi_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn interleave(z: &[(f64, f64)]) -> Vec<f64> {
    z.iter().flat_map(|&(re, im)| [re, im]).collect()
}

fn zero_one_problem() -> *mut TakagiProblem {
    let nodes = interleave(&[(0.0, 0.0), (0.5, 0.0), (-0.5, 0.0), (0.0, 0.5)]);
    let values = interleave(&[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (1.0, 0.0)]);
    let mut problem = ptr::null_mut();
    let status = unsafe { takagi_problem_new(nodes.as_ptr(), values.as_ptr(), 4, &mut problem) };
    assert_eq!(status, TakagiStatus::Ok);
    problem
}

#[test]
fn solve_zero_one_problem() {
    let problem = zero_one_problem();
    unsafe {
        assert_eq!(takagi_problem_len(problem), 4);
        let mut inertia = TakagiInertia::default();
        assert_eq!(takagi_problem_inertia(problem, &mut inertia), TakagiStatus::Ok);
        assert_eq!(inertia, TakagiInertia { positive: 1, negative: 1, zero: 2 });

        let mut solution = ptr::null_mut();
        assert_eq!(takagi_solve(problem, takagi_default_seed(), &mut solution), TakagiStatus::Ok);
        assert!(takagi_solution_passed(solution));
        assert!(takagi_last_error_message().is_null());

        let (mut zeros, mut poles) = (0, 0);
        assert_eq!(takagi_solution_degrees(solution, &mut zeros, &mut poles), TakagiStatus::Ok);
        assert_eq!(zeros + poles, 6);
        assert!(poles >= 1);

        for (x, y, w) in [(0.0, 0.0, 0.0), (0.5, 0.0, 1.0), (-0.5, 0.0, 1.0), (0.0, 0.5, 1.0)] {
            let (mut re, mut im) = (f64::NAN, f64::NAN);
            assert_eq!(takagi_solution_eval(solution, x, y, &mut re, &mut im), TakagiStatus::Ok);
            assert!((re - w).abs() < 1e-8 && im.abs() < 1e-8, "({x},{y}) -> {re}+{im}i");
        }
        takagi_solution_free(solution);
        takagi_problem_free(problem);
    }
}

#[test]
fn coefficient_buffers_report_required_length() {
    let problem = zero_one_problem();
    unsafe {
        let mut solution = ptr::null_mut();
        assert_eq!(takagi_solve(problem, 3, &mut solution), TakagiStatus::Ok);
        let mut len = 0;
        let status = takagi_solution_denominator(solution, ptr::null_mut(), 0, &mut len);
        assert_eq!(status, TakagiStatus::BufferTooSmall);
        assert!(len >= 2);
        assert!(last_error().contains("needed"));

        let mut den = vec![0.0; 2 * len];
        assert_eq!(takagi_solution_denominator(solution, den.as_mut_ptr(), len, &mut len), TakagiStatus::Ok);
        let mut num_len = 0;
        let _ = takagi_solution_numerator(solution, ptr::null_mut(), 0, &mut num_len);
        let mut num = vec![0.0; 2 * num_len];
        assert_eq!(takagi_solution_numerator(solution, num.as_mut_ptr(), num_len, &mut num_len), TakagiStatus::Ok);

        // evaluating the copied coefficients reproduces the handle's value
        let z = num_complex::Complex64::new(0.2, -0.1);
        let horner = |c: &[f64]| c.chunks(2).rev().fold(num_complex::Complex64::new(0.0, 0.0), |acc, k| acc * z + num_complex::Complex64::new(k[0], k[1]));
        let direct = horner(&num) / horner(&den);
        let (mut re, mut im) = (0.0, 0.0);
        takagi_solution_eval(solution, z.re, z.im, &mut re, &mut im);
        assert!((direct.re - re).abs() < 1e-10 && (direct.im - im).abs() < 1e-10);

        takagi_solution_free(solution);
        takagi_problem_free(problem);
    }
}

#[test]
fn invalid_problem_reports_input_error() {
    let nodes = interleave(&[(0.1, 0.0), (1.5, 0.0)]);
    let values = interleave(&[(0.0, 0.0), (0.0, 0.0)]);
    let mut problem = ptr::null_mut();
    let status = unsafe { takagi_problem_new(nodes.as_ptr(), values.as_ptr(), 2, &mut problem) };
    assert_eq!(status, TakagiStatus::InvalidInput);
    assert!(problem.is_null());
    assert!(last_error().contains("disk"));
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        let mut problem = ptr::null_mut();
        assert_eq!(takagi_problem_new(ptr::null(), ptr::null(), 2, &mut problem), TakagiStatus::NullPointer);
        assert!(last_error().contains("nodes"));
        let mut solution = ptr::null_mut();
        assert_eq!(takagi_solve(ptr::null(), 0, &mut solution), TakagiStatus::NullPointer);
        assert!(!takagi_solution_passed(ptr::null()));
        assert_eq!(takagi_problem_len(ptr::null()), 0);
        takagi_problem_free(ptr::null_mut());
        takagi_solution_free(ptr::null_mut());
        takagi_string_free(ptr::null_mut());
    }
}

#[test]
fn json_round_trip() {
    let text = CString::new(
        r#"{"schema_version":1,"kind":"disk","nodes":[[0,0],[0.5,0],[-0.5,0],[0,0.5]],"values":[[0,0],[1,0],[1,0],[1,0]]}"#,
    )
    .unwrap();
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(takagi_solve_json(text.as_ptr(), 9, &mut out), TakagiStatus::Ok);
        let json = CStr::from_ptr(out).to_str().unwrap().to_owned();
        takagi_string_free(out);
        let result = takagi::io::parse_result(&json).unwrap();
        assert!(result.passed());
    }
}

#[test]
fn malformed_json_reports_location() {
    let text = CString::new("{\"schema_version\": 1, \"kind\": \"disk\", \"nodes\": 3}").unwrap();
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(takagi_solve_json(text.as_ptr(), 0, &mut out), TakagiStatus::InvalidInput);
        assert!(out.is_null());
        assert!(last_error().contains("nodes"));
    }
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/takagi.h")).unwrap();
    for name in [
        "takagi_last_error_message",
        "takagi_problem_new",
        "takagi_problem_inertia",
        "takagi_solve",
        "takagi_solution_eval",
        "takagi_solution_numerator",
        "takagi_solution_denominator",
        "takagi_solve_json",
        "takagi_string_free",
        "typedef struct TakagiProblem TakagiProblem",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
