//! Acceptance criteria, one line per criterion.
//!
//! Exits nonzero if a criterion fails that is not listed in
//! `KNOWN_UNATTAINABLE`; those are still evaluated and reported.

use std::process::Command;
use std::time::Instant;

use droplet_core::families::q_limit_check;
use droplet_core::geometry::{convexity_threshold, curvature_numeric, droplet_width, univalency_threshold};
use droplet_core::qdiff::{ksv_qd, twopole_qd};
use droplet_core::sampling::disc_points;
use droplet_core::verification::{
    boundary_residual, closed_form_crosscheck, physicality, qd_match, residue_cancellation, Physicality,
    PhysicalityOptions,
};
use droplet_core::annulus::identity_report;
use droplet_core::{AnnulusConfig, Complex64, DropletFamily, DropletModel, FamilyKind, Tolerances};
use rayon::prelude::*;

/// The two-pole convexity target 0.26526920 disagrees with √(6√13 - 21)/3 =
/// 0.2652687637 by 4e-7, far outside its own 1e-8 window.
const KNOWN_UNATTAINABLE: &[u32] = &[3];

type Outcome = (bool, String);

fn model(f: DropletFamily) -> DropletModel {
    DropletModel::new(f).expect("family constants")
}

fn ksv_cs() -> Vec<f64> {
    vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]
}

fn twopole_cs() -> Vec<f64> {
    vec![0.05, 0.1, 0.15, 0.2, 0.25, 0.3]
}

fn mpole_mid(m: u32) -> DropletFamily {
    let c = match m {
        2 => 0.2,
        3 => 0.3,
        4 => 0.35,
        _ => 0.35,
    };
    DropletFamily::MPole { m, c }
}

fn criterion_families() -> Vec<DropletFamily> {
    let mut v = vec![DropletFamily::Circle, DropletFamily::McLeod];
    v.extend(ksv_cs().into_iter().map(|c| DropletFamily::Ksv { c }));
    v.extend(twopole_cs().into_iter().map(|c| DropletFamily::TwoPole { c }));
    v.extend((2..=5).map(mpole_mid));
    v
}

fn c1_boundary_residual() -> Outcome {
    let worst = criterion_families()
        .par_iter()
        .map(|f| (f.label(), boundary_residual(&model(*f), 4096).map(|r| r.max_residual).unwrap_or(f64::INFINITY)))
        .reduce(|| (String::new(), 0.0), |a, b| if b.1 > a.1 { b } else { a });
    (worst.1 < 1e-10, format!("max residual {:.2e} ({})", worst.1, worst.0))
}

fn c2_residues() -> Outcome {
    let fams: Vec<_> = criterion_families().into_iter().filter(|f| !f.interior_poles().is_empty()).collect();
    let results: Vec<(f64, f64)> = fams
        .par_iter()
        .map(|f| {
            let m = model(*f);
            let max = |m: &DropletModel| {
                residue_cancellation(m).map(|r| r.iter().map(|e| e.magnitude).fold(0.0, f64::max)).unwrap_or(f64::NAN)
            };
            let bad = DropletModel::with_constants(*f, m.p, m.tau + 0.1).unwrap();
            let min_bad = residue_cancellation(&bad)
                .map(|r| r.iter().map(|e| e.magnitude).fold(f64::INFINITY, f64::min))
                .unwrap_or(f64::NAN);
            (max(&m), min_bad)
        })
        .collect();
    let worst = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let weakest = results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let ok = results.iter().all(|r| r.0 < 1e-12 && r.1 > 1e-3);
    (ok, format!("{} families, max |residue| {worst:.2e}, min perturbed {weakest:.2e}", fams.len()))
}

fn c3_thresholds() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    let mut check = |name: &str, value: f64, target: f64, tol: f64| {
        let pass = (value - target).abs() <= tol;
        ok &= pass;
        parts.push(format!("{name}={value:.10} [{}]", if pass { "ok" } else { "off" }));
    };
    let ksv_c = convexity_threshold(FamilyKind::Ksv).map(|e| e.value).unwrap_or(f64::NAN);
    let ksv_u = univalency_threshold(FamilyKind::Ksv).map(|e| e.value).unwrap_or(f64::NAN);
    let tp_c = convexity_threshold(FamilyKind::TwoPole).map(|e| e.value).unwrap_or(f64::NAN);
    let tp_u = univalency_threshold(FamilyKind::TwoPole).map(|e| e.value).unwrap_or(f64::NAN);
    let m3 = univalency_threshold(FamilyKind::MPole { m: 3 }).map(|e| e.value).unwrap_or(f64::NAN);
    let m4 = univalency_threshold(FamilyKind::MPole { m: 4 }).map(|e| e.value).unwrap_or(f64::NAN);
    check("ksv_convexity", ksv_c, 0.38196601, 1e-8);
    check("ksv_univalency", ksv_u, 0.6180340, 1e-5);
    check("twopole_convexity", tp_c, 0.26526920, 1e-8);
    check("twopole_univalency", tp_u, 0.3333333, 1e-5);
    check("mpole3_univalency", m3, 0.46959, 1e-4);
    check("mpole4_univalency", m4, 0.54259, 1e-4);
    (ok, parts.join(", "))
}

fn c4_physicality() -> Outcome {
    let mut cases: Vec<(DropletFamily, Physicality)> = vec![
        (DropletFamily::Circle, Physicality::Physical),
        (DropletFamily::McLeod, Physicality::Physical),
    ];
    cases.extend(ksv_cs().into_iter().map(|c| (DropletFamily::Ksv { c }, Physicality::Mathematical)));
    cases.extend(twopole_cs().into_iter().map(|c| (DropletFamily::TwoPole { c }, Physicality::Physical)));
    cases.extend((2..=6).map(|m| (mpole_mid(m), Physicality::Physical)));
    let variants = [
        PhysicalityOptions::default(),
        PhysicalityOptions { outer_radius: 0.995, ..Default::default() },
        PhysicalityOptions { jitter: 2, ..Default::default() },
    ];
    let jobs: Vec<_> = cases.iter().flat_map(|c| variants.iter().map(move |v| (*c, *v))).collect();
    let wrong: Vec<String> = jobs
        .par_iter()
        .filter_map(|((f, want), opts)| match physicality(&model(*f), opts) {
            Ok(r) if r.verdict == *want => None,
            Ok(r) => Some(format!("{}: {:?}", f.label(), r.verdict)),
            Err(e) => Some(format!("{}: {e}", f.label())),
        })
        .collect();
    (wrong.is_empty(), format!("{} runs over {} cases; mismatches: {:?}", jobs.len(), cases.len(), wrong))
}

fn c5_closed_forms() -> Outcome {
    let fams = [
        DropletFamily::Ksv { c: 0.35 },
        DropletFamily::Ksv { c: 0.55 },
        DropletFamily::TwoPole { c: 0.2 },
        DropletFamily::TwoPole { c: 0.3 },
        DropletFamily::MPole { m: 3, c: 0.3 },
        DropletFamily::MPole { m: 4, c: 0.35 },
        DropletFamily::McLeod,
    ];
    let mut worst = (String::new(), 0.0f64);
    for f in fams {
        let map = closed_form_crosscheck(&model(f), 256).expect("crosscheck");
        for (name, v) in map.iter().filter(|(_, v)| v.gated) {
            if v.deviation > worst.1 {
                worst = (format!("{} {name}", f.label()), v.deviation);
            }
        }
    }
    let mut curv: f64 = 0.0;
    for f in [DropletFamily::Ksv { c: 0.3 }, DropletFamily::TwoPole { c: 0.25 }, DropletFamily::MPole { m: 3, c: 0.3 }] {
        let tr = f.boundary_trace(8192).expect("trace");
        let num = curvature_numeric(&tr).expect("curvature");
        curv = curv.max(num.iter().zip(&tr.curvature).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    }
    (
        worst.1 < 1e-11 && curv < 1e-5,
        format!("max closed-form deviation {:.2e} ({}), lemma vs polyline {curv:.2e}", worst.1, worst.0),
    )
}

fn c6_qd() -> Outcome {
    let mut dev: f64 = 0.0;
    let mut positive = true;
    let mut refl: f64 = 0.0;
    let pts = disc_points(64, 0.05, 0.95, &[], 0.0);
    for c in [0.1, 0.3, 0.5] {
        dev = dev.max(qd_match(&model(DropletFamily::Ksv { c }), 256).unwrap_or(f64::INFINITY));
        let q = ksv_qd(c).unwrap();
        positive &= q.positivity_on_circle(4096, 1e-10).unwrap_or(false);
        let hz: Vec<Complex64> = pts.iter().copied().filter(|w| (w - c).norm() > 0.05).collect();
        refl = refl.max(q.reflection_symmetry(&hz).unwrap_or(f64::INFINITY));
    }
    for c in [0.1, 0.2, 0.3] {
        dev = dev.max(qd_match(&model(DropletFamily::TwoPole { c }), 256).unwrap_or(f64::INFINITY));
        let q = twopole_qd(c).unwrap();
        positive &= q.positivity_on_circle(4096, 1e-10).unwrap_or(false);
        let hz: Vec<Complex64> = pts.iter().copied().filter(|w| (w - c).norm() > 0.05 && (w + c).norm() > 0.05).collect();
        refl = refl.max(q.reflection_symmetry(&hz).unwrap_or(f64::INFINITY));
    }
    (
        dev < 1e-11 && positive && refl < 1e-12,
        format!("match {dev:.2e}, positivity {positive}, reflection {refl:.2e}"),
    )
}

fn c7_m2() -> Outcome {
    let mut dev: f64 = 0.0;
    let mut same = true;
    for c in [0.1, 0.2, 0.3] {
        let (a, b) = (DropletFamily::MPole { m: 2, c }, DropletFamily::TwoPole { c });
        let hz = [Complex64::new(c, 0.0), Complex64::new(-c, 0.0)];
        for w in disc_points(1000, 0.02, 0.999, &hz, 1e-3) {
            let (x, y) = (a.phi(w).unwrap(), b.phi(w).unwrap());
            dev = dev.max((x + y).norm() / x.norm().max(1.0));
        }
        same &= a.constants() == b.constants();
    }
    (dev < 1e-13 && same, format!("max |φ_m2 + φ_twopole| {dev:.2e}, constants equal {same}"))
}

fn c8_q_limit() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for c in [0.2, 0.3, 0.5] {
        let ratio = q_limit_check(c, 1e-3).unwrap() / q_limit_check(c, 1e-4).unwrap();
        ok &= ratio >= 10.0 / 1.5 && ratio <= 15.0;
        parts.push(format!("c={c}: {ratio:.4}"));
    }
    (ok, format!("sup-norm ratios {}", parts.join(", ")))
}

fn c9_annulus() -> Outcome {
    let tol = Tolerances::default();
    let mut failed = Vec::new();
    let mut prime: f64 = 0.0;
    let mut forms: f64 = 0.0;
    for (r, x) in [(0.1, 0.5), (0.3, 0.5), (0.3, 0.8), (0.45, 0.7), (0.6, 0.8)] {
        let rep = identity_report(&AnnulusConfig::new(r, x).unwrap(), &tol).unwrap();
        prime = prime.max(rep.prime_identity);
        forms = forms.max(rep.phi_prime_forms[0]);
        failed.extend(rep.checks.iter().filter(|(_, v)| !**v).map(|(k, _)| format!("r={r},x={x}:{k}")));
    }
    (failed.is_empty(), format!("prime identity {prime:.2e}, φ' forms spread {forms:.2e}, failures {failed:?}"))
}

fn c10_width() -> Outcome {
    let mut dev: f64 = 0.0;
    for c in [0.28, 0.30, 0.32] {
        match droplet_width(c, 1e-8) {
            Ok(w) => dev = dev.max((w.formula.unwrap_or(f64::NAN) - w.trace).abs()),
            Err(_) => dev = f64::INFINITY,
        }
    }
    let f = DropletFamily::TwoPole { c: 1.0 / 3.0 };
    let pinch = f.phi(Complex64::new(1.0, 0.0)).unwrap().norm().max(f.phi(Complex64::new(-1.0, 0.0)).unwrap().norm());
    (dev < 1e-8 && pinch < 1e-10, format!("width deviation {dev:.2e}, |φ(±1)| at c=1/3 {pinch:.2e}"))
}

fn c11_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_droplets");
    let runs: [&[&str]; 5] = [
        &["boundary", "--family", "ksv", "--c", "0.1,0.3,0.5", "--n", "1024", "--csv"],
        &["boundary", "--family", "twopole", "--c", "0.05:0.33:0.04", "--n", "1024", "--svg"],
        &["verify", "--family", "mpole", "--m", "3", "--c", "0.3"],
        &["annulus", "--r", "0.3", "--x", "0.5", "--probe", "identities"],
        &["annulus", "--r", "0.3", "--x", "0.35:0.95:0.05", "--probe", "periods"],
    ];
    let mut differing = Vec::new();
    for args in runs {
        let out = |_: u32| Command::new(bin).args(args).output().expect("running the cli");
        let (a, b) = (out(0), out(1));
        if a.stdout != b.stdout || a.stdout.is_empty() || !a.status.success() {
            differing.push(args.join(" "));
        }
    }
    (differing.is_empty(), format!("{} commands run twice; differing or failing: {differing:?}", runs.len()))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "boundary-equation residual", c1_boundary_residual),
        (2, "residue cancellation", c2_residues),
        (3, "thresholds", c3_thresholds),
        (4, "physicality verdicts", c4_physicality),
        (5, "closed-form cross-checks", c5_closed_forms),
        (6, "quadratic-differential identities", c6_qd),
        (7, "m=2 coincidence", c7_m2),
        (8, "q -> 0 limit", c8_q_limit),
        (9, "annulus identities", c9_annulus),
        (10, "width and pinch", c10_width),
        (11, "determinism", c11_determinism),
    ];
    let mut unexpected = 0;
    let mut passed = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let (ok, detail) = run();
        let secs = start.elapsed().as_secs_f64();
        let tag = if ok { "PASS" } else { "FAIL" };
        let note = if !ok && KNOWN_UNATTAINABLE.contains(&id) { " (known unattainable)" } else { "" };
        println!("criterion {id:>2} {tag} {name}{note} [{secs:.1}s]: {detail}");
        if ok {
            passed += 1;
        } else if note.is_empty() {
            unexpected += 1;
        }
    }
    println!("acceptance: {passed}/{} passed, {unexpected} unexpected failures", criteria.len());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
