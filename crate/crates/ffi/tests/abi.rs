use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use cpbs_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(cpbs_last_error()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn spectrum_handle_exposes_pair_covariances() {
    let p = cpbs_params_benchmark();
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(cpbs_spectrum_new(&p, &mut s), CpbsStatus::Ok);
        assert_eq!(cpbs_spectrum_len(s), 16);
        let mut e = [0.0; 16];
        assert_eq!(cpbs_spectrum_energies(s, e.as_mut_ptr(), e.len()), CpbsStatus::Ok);
        assert!(e.windows(2).all(|w| w[0] <= w[1]));

        let mut short = [0.0; 15];
        assert_eq!(
            cpbs_spectrum_energies(s, short.as_mut_ptr(), short.len()),
            CpbsStatus::BufferTooSmall
        );
        assert!(last_error().contains("16 needed"));

        let mut proj = [0.0; 16];
        assert_eq!(cpbs_spectrum_projections(s, 6, proj.as_mut_ptr(), 16), CpbsStatus::Ok);
        assert!((proj.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((proj[6] + proj[9] - 1.0).abs() < 0.02);

        let mut cov = [0.0; 4];
        assert_eq!(cpbs_spectrum_covariances(s, 6, cov.as_mut_ptr()), CpbsStatus::Ok);
        assert!((cov[0] - 1.0).abs() < 0.02);

        let mut svne = 0.0;
        assert_eq!(cpbs_spectrum_svne(s, 16, &mut svne), CpbsStatus::OutOfRange);
        cpbs_spectrum_free(s);
    }
}

#[test]
fn dephasing_trajectory_round_trip() {
    let p = cpbs_params_benchmark();
    let mut o = cpbs_dephasing_options_default();
    o.grid.count = 101;
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(
            cpbs_evolve_dephasing(&p, &o, &mut t),
            CpbsStatus::Ok,
            "{}",
            last_error()
        );
        assert_eq!(cpbs_trajectory_len(t), 101);
        assert_eq!(cpbs_trajectory_dim(t), 4);

        let mut th = vec![0.0; 101];
        assert_eq!(cpbs_trajectory_thetas(t, th.as_mut_ptr(), th.len()), CpbsStatus::Ok);
        assert!((th[100] - std::f64::consts::PI).abs() < 1e-12);

        // peak near θ = π/4
        let mut c = 0.0;
        assert_eq!(cpbs_trajectory_concurrence(t, 25, &mut c), CpbsStatus::Ok);
        assert!(c > 0.8 && c <= 1.0, "{c}");

        let (mut re, mut im) = ([0.0; 16], [0.0; 16]);
        assert_eq!(
            cpbs_trajectory_density(t, 25, re.as_mut_ptr(), im.as_mut_ptr(), 16),
            CpbsStatus::Ok
        );
        assert!((re[5] + re[10] - 1.0).abs() < 1e-8);
        assert!((im[6] + im[9]).abs() < 1e-12);

        let mut pops = [0.0; 4];
        assert_eq!(cpbs_trajectory_populations(t, 0, pops.as_mut_ptr(), 4), CpbsStatus::Ok);
        assert_eq!(pops, [0.0, 1.0, 0.0, 0.0]);
        cpbs_trajectory_free(t);
    }
}

#[test]
fn full_model_trajectory_indicators() {
    let p = cpbs_params_benchmark();
    let mut o = cpbs_evolve_options_default();
    o.grid.count = 41;
    o.grid.stop = 0.5;
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(cpbs_evolve(&p, &o, &mut t), CpbsStatus::Ok, "{}", last_error());
        assert_eq!(cpbs_trajectory_dim(t), 16);
        let mut ind = CpbsIndicators::default();
        assert_eq!(cpbs_trajectory_indicators(t, 20, &mut ind), CpbsStatus::Ok);
        assert!(ind.svne > 0.9 && ind.covariances[0] > 0.9, "{ind:?}");
        assert_eq!(cpbs_trajectory_indicators(t, 41, &mut ind), CpbsStatus::OutOfRange);
        cpbs_trajectory_free(t);
    }
}

#[test]
fn invalid_options_leave_out_null() {
    let p = cpbs_params_benchmark();
    let mut o = cpbs_evolve_options_default();
    o.gamma1 = -1.0;
    let mut t = ptr::dangling_mut::<CpbsTrajectory>();
    unsafe {
        assert_eq!(cpbs_evolve(&p, &o, &mut t), CpbsStatus::InvalidArgument);
        assert!(t.is_null());
        o = cpbs_evolve_options_default();
        o.grid.count = 1;
        assert_eq!(cpbs_evolve(&p, &o, &mut t), CpbsStatus::InvalidArgument);
        o = cpbs_evolve_options_default();
        o.rtol = 0.0;
        assert_eq!(cpbs_evolve(&p, &o, &mut t), CpbsStatus::InvalidArgument);
        assert!(!last_error().is_empty());
        assert_eq!(cpbs_evolve(&p, ptr::null(), &mut t), CpbsStatus::NullPointer);
    }
}

#[test]
fn errors_are_thread_local() {
    let mut p = cpbs_params_benchmark();
    p.coulomb_inter = 0.0;
    let mut x = 0.0;
    assert_eq!(
        unsafe { cpbs_effective_onsite(&p, &mut x) },
        CpbsStatus::DegenerateParameters
    );
    let other = std::thread::spawn(last_error).join().unwrap();
    assert!(other.is_empty());
    assert!(!last_error().is_empty());
}

fn header() -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/cpbs.h")).unwrap()
}

#[test]
fn header_declares_every_export() {
    let src = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let h = header();
    let mut n = 0;
    for line in src.lines() {
        if let Some(rest) = line.split("extern \"C\" fn ").nth(1) {
            let name = rest.split('(').next().unwrap();
            assert!(h.contains(&format!("{name}(")), "{name} missing from header");
            n += 1;
        }
    }
    assert!(n >= 20);
    for ty in [
        "CpbsStatus",
        "CpbsParams",
        "CpbsIndicators",
        "CpbsSpectrum",
        "CpbsTrajectory",
    ] {
        assert!(h.contains(&format!("typedef struct {ty}")) || h.contains(&format!("typedef enum {ty}")));
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-std=c99", "-Wall", "-Werror", "-x", "c", "-"])
        .arg("-I")
        .arg(&dir)
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .and_then(|mut child| {
            use std::io::Write;
            child
                .stdin
                .take()
                .unwrap()
                .write_all(b"#include \"cpbs.h\"\nint main(void) { CpbsParams p = cpbs_params_benchmark(); double o; return (int)cpbs_effective_coupling(&p, &o); }\n")?;
            child.wait_with_output()
        })
    else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
