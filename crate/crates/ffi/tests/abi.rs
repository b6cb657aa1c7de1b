use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use dqsense_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(dq_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn params(gain: f64, alpha_sq: f64, eta: f64, g: f64, m: usize, n: f64) -> DqParams {
    DqParams {
        gain,
        alpha_sq,
        eta,
        g,
        m,
        n,
    }
}

#[test]
fn state_lifecycle() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(dq_state_vacuum(2, &mut s), DqStatus::Ok);
        assert_eq!(dq_state_displace(s, 0, 10.0, 0.0), DqStatus::Ok);
        assert_eq!(dq_state_two_mode_squeeze(s, 0, 1, 5.0), DqStatus::Ok);
        let mut n0 = 0.0;
        let mut n1 = 0.0;
        assert_eq!(dq_state_mean_photons(s, 0, &mut n0), DqStatus::Ok);
        assert_eq!(dq_state_mean_photons(s, 1, &mut n1), DqStatus::Ok);
        assert!((n0 - 504.0).abs() < 1e-9);
        assert!((n1 - 404.0).abs() < 1e-9);

        let mut c = ptr::null_mut();
        assert_eq!(dq_state_clone(s, &mut c), DqStatus::Ok);
        assert_eq!(dq_state_loss(c, 0, 0.8), DqStatus::Ok);
        assert_eq!(dq_state_mean_photons(c, 0, &mut n0), DqStatus::Ok);
        assert!((n0 - 403.2).abs() < 1e-9);
        assert_eq!(dq_state_mean_photons(s, 0, &mut n0), DqStatus::Ok);
        assert!((n0 - 504.0).abs() < 1e-9, "clone must not alias");

        assert_eq!(dq_state_phase_shift(s, 0, 0.3), DqStatus::Ok);
        assert_eq!(dq_state_beam_splitter(s, 0, 1, 0.5, 0.0), DqStatus::Ok);
        assert_eq!(dq_state_single_mode_squeeze(s, 1, 0.2), DqStatus::Ok);
        dq_state_free(c);
        dq_state_free(s);
        dq_state_free(ptr::null_mut());
    }
}

#[test]
fn balanced_split_reports_modes() {
    unsafe {
        let mut s = ptr::null_mut();
        dq_state_vacuum(1, &mut s);
        dq_state_displace(s, 0, 10.0, 0.0);
        let mut modes = [usize::MAX; 4];
        assert_eq!(
            dq_state_balanced_split(s, 0, 4, modes.as_mut_ptr(), 3),
            DqStatus::InvalidArgument
        );
        assert_eq!(
            dq_state_balanced_split(s, 0, 4, modes.as_mut_ptr(), 4),
            DqStatus::Ok
        );
        assert_eq!(modes, [0, 1, 2, 3]);
        let mut n = 0;
        dq_state_n_modes(s, &mut n);
        assert_eq!(n, 4);
        for &m in &modes {
            let mut p = 0.0;
            dq_state_mean_photons(s, m, &mut p);
            assert!((p - 25.0).abs() < 1e-9);
        }
        let mut total = 0.0;
        dq_state_total_photons(s, &mut total);
        assert!((total - 100.0).abs() < 1e-9);
        dq_state_free(s);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(dq_state_vacuum(0, &mut s), DqStatus::InvalidArgument);
        assert!(!last_error().is_empty());
        assert_eq!(dq_state_vacuum(1, ptr::null_mut()), DqStatus::NullPointer);
        assert_eq!(
            dq_state_loss(ptr::null_mut(), 0, 0.5),
            DqStatus::NullPointer
        );

        dq_state_vacuum(1, &mut s);
        assert_eq!(dq_state_loss(s, 0, 1.5), DqStatus::InvalidArgument);
        assert!(last_error().contains("eta"), "{}", last_error());
        assert_eq!(dq_state_phase_shift(s, 3, 0.1), DqStatus::InvalidArgument);
        dq_state_free(s);

        let mut out = 0.0;
        assert_eq!(
            dq_snr_correct(-63.0, -63.0, &mut out),
            DqStatus::InvalidArgument
        );
        let p = params(1.0, 100.0, 1.0, 1.0, 2, 100.0);
        let mut opt = DqOptimum::default();
        assert_eq!(
            dq_optimize_entangled(3, 100.0, &mut opt),
            DqStatus::InvalidArgument
        );
        assert_eq!(
            dq_lod(DqScheme::MultiEntangled, &p, ptr::null_mut()),
            DqStatus::NullPointer
        );
    }
}

#[test]
fn closed_forms() {
    unsafe {
        let mut lod = 0.0;
        let p = params(5.0, 100.0, 1.0, 1.0, 2, 100.0);
        assert_eq!(dq_lod(DqScheme::TsuDistributed, &p, &mut lod), DqStatus::Ok);
        assert!((lod * 100.0 - 1.5528e-3).abs() < 1e-7);
        assert_eq!(dq_lod(DqScheme::MultiEntangled, &p, &mut lod), DqStatus::Ok);
        assert!((lod - 1.0 / (2.0 * 200.0 * 202.0)).abs() / lod < 1e-9);

        let mut opt = DqOptimum::default();
        assert_eq!(dq_optimize_entangled(2, 100.0, &mut opt), DqStatus::Ok);
        assert!((opt.lod - lod).abs() / lod < 1e-6);

        let (mut lo, mut hi, mut has) = (0.0, 0.0, -1);
        assert_eq!(
            dq_advantage_window(5.0, 1.0, &mut lo, &mut hi, &mut has),
            DqStatus::Ok
        );
        assert_eq!(has, 1);
        assert!((lo - 0.618034).abs() < 1e-5 && (hi - 1.618034).abs() < 1e-5);
        assert_eq!(
            dq_advantage_window(1.0, 1.0, &mut lo, &mut hi, &mut has),
            DqStatus::Ok
        );
        assert_eq!(has, 0);

        let mut snr = 0.0;
        assert_eq!(dq_snr_correct(-60.0, -63.0, &mut snr), DqStatus::Ok);
        assert!((snr + 0.0205).abs() < 1e-3);
    }
}

#[test]
fn monte_carlo_entry_point() {
    unsafe {
        let p = params(5.0, 100.0, 1.0, 1.0, 2, 100.0);
        let mut r = DqMcResult::default();
        assert_eq!(
            dq_mc_lod(DqScheme::TsuDistributed, &p, 20_000, 7, &mut r),
            DqStatus::Ok
        );
        assert_eq!(r.samples, 20_000);
        assert_eq!(r.seed, 7);
        assert!(r.z_score.abs() < 5.0);
        assert_eq!(
            dq_mc_lod(DqScheme::TsuDistributed, &p, 10, 7, &mut r),
            DqStatus::InvalidArgument
        );
    }
}

#[test]
fn header_declares_the_api() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/dqsense.h")).unwrap();
    for name in [
        "typedef struct DqState DqState",
        "DQ_STATUS_NUMERICAL = 3",
        "dq_last_error",
        "dq_state_vacuum",
        "dq_state_balanced_split",
        "dq_lod",
        "dq_optimize_entangled",
        "dq_advantage_window",
        "dq_snr_correct",
        "dq_mc_lod",
        "dq_state_free",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

#[test]
fn c_program_links_against_static_library() {
    // target/<profile>/deps/abi-* -> target/<profile>/libdqsense_ffi.a
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap();
    let lib = profile_dir.join("libdqsense_ffi.a");
    assert!(
        lib.exists(),
        "static library not built at {}",
        lib.display()
    );
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let bin = tempfile::tempdir().unwrap();
    let out = bin.path().join("smoke");
    let status = Command::new("cc")
        .arg("-I")
        .arg(dir.join("include"))
        .arg(dir.join("examples/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success());
    let text = String::from_utf8(run.stdout).unwrap();
    assert!(text.contains("total_photons=908.000000"), "{text}");
    assert!(text.contains("lod=1.552810008e-05"), "{text}");
}
