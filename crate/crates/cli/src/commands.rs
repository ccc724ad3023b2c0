use anyhow::{bail, Context};
use droplet_core::annulus::{annulus_boundary_trace, identity_report, period_brackets, period_scan};
use droplet_core::geometry::geometry_report;
use droplet_core::verification::{verify, VerifyOptions};
use droplet_core::{AnnulusConfig, DropletFamily, DropletModel, FamilyKind};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::args::{
    parse_values, AnnulusArgs, BoundaryArgs, FamilyArgs, FamilyName, Format, Probe, ThresholdArgs, ThresholdFamily,
    VerifyArgs,
};
use crate::config::RunConfig;
use crate::output::{csv, emit, json, sig15, svg, SvgCurve};

/// Whether every selected check passed.
pub type Outcome = anyhow::Result<bool>;

/// The families selected by the arguments, in parameter order.
pub fn families(args: &FamilyArgs) -> anyhow::Result<Vec<DropletFamily>> {
    let cs = || -> anyhow::Result<Vec<f64>> { parse_values(args.c.as_deref().context("--c is required for this family")?) };
    let out = match args.family {
        FamilyName::Circle => vec![DropletFamily::Circle],
        FamilyName::Mcleod => vec![DropletFamily::McLeod],
        FamilyName::Ksv => cs()?.into_iter().map(|c| DropletFamily::Ksv { c }).collect(),
        FamilyName::Twopole => cs()?.into_iter().map(|c| DropletFamily::TwoPole { c }).collect(),
        FamilyName::Mpole => {
            let m = args.m.context("--m is required for the m-pole family")?;
            cs()?.into_iter().map(|c| DropletFamily::MPole { m, c }).collect()
        }
        FamilyName::TwopoleGeneral => {
            let q = args.q.context("--q is required for the general two-pole family")?;
            cs()?.into_iter().map(|c| DropletFamily::TwoPoleGeneral { c, q }).collect()
        }
    };
    for f in &out {
        for w in f.validate()? {
            eprintln!("warning: {}: {w}", f.label());
        }
    }
    Ok(out)
}

fn check_nodes(n: usize, min: usize) -> anyhow::Result<()> {
    if n < min || !n.is_power_of_two() {
        bail!("sample count must be a power of two >= {min}, got {n}");
    }
    Ok(())
}

/// Half-width of the SVG view box; fixed per family so sweeps overlay.
fn view_half_width(name: FamilyName) -> f64 {
    match name {
        FamilyName::Circle | FamilyName::Mcleod => 2.0,
        FamilyName::Ksv | FamilyName::Twopole => 2.5,
        FamilyName::Mpole | FamilyName::TwopoleGeneral => 3.0,
    }
}

fn param(f: &DropletFamily) -> Option<f64> {
    match *f {
        DropletFamily::Circle | DropletFamily::McLeod => None,
        DropletFamily::Ksv { c }
        | DropletFamily::TwoPole { c }
        | DropletFamily::MPole { c, .. }
        | DropletFamily::TwoPoleGeneral { c, .. } => Some(c),
    }
}

fn meta(parts: &[(&str, String)]) -> String {
    let mut s = format!("droplets {}", env!("CARGO_PKG_VERSION"));
    for (k, v) in parts {
        s.push_str(&format!(" {k}={v}"));
    }
    s
}

pub fn boundary(args: &BoundaryArgs, cfg: &RunConfig) -> Outcome {
    check_nodes(args.n, 64)?;
    let fams = families(&args.family)?;
    let traces: Vec<_> = fams.par_iter().map(|f| f.boundary_trace(args.n)).collect::<Result<_, _>>()?;
    for t in &traces {
        if !t.degenerate_nodes.is_empty() {
            eprintln!("warning: {}: degenerate boundary at {} nodes", t.family.label(), t.degenerate_nodes.len());
        }
    }
    let sweep = fams.len() > 1;
    let text = match args.format() {
        Format::Csv => {
            let mut header = vec!["theta", "x", "y", "curvature"];
            if sweep {
                header.insert(0, "c");
            }
            let rows = traces.iter().flat_map(|t| {
                let c = param(&t.family);
                (0..t.len()).map(move |k| {
                    let mut row = vec![
                        sig15(t.thetas[k]),
                        sig15(t.points[k].re),
                        sig15(t.points[k].im),
                        sig15(t.curvature[k]),
                    ];
                    if sweep {
                        row.insert(0, sig15(c.unwrap_or(0.0)));
                    }
                    row
                })
            });
            csv(&header, rows)
        }
        Format::Svg => {
            let curves: Vec<SvgCurve> = traces
                .iter()
                .map(|t| SvgCurve { points: t.points.clone(), closed: true, label: t.family.label() })
                .collect();
            let degenerate: usize = traces.iter().map(|t| t.degenerate_nodes.len()).sum();
            let info = meta(&[
                ("family", fams[0].name().to_string()),
                ("params", fams.iter().map(|f| f.label()).collect::<Vec<_>>().join(";")),
                ("n", args.n.to_string()),
                ("degenerate_nodes", degenerate.to_string()),
            ]);
            svg(&curves, view_half_width(args.family.family), &info)
        }
    };
    emit(&text, args.out.as_deref(), cfg.out_dir.as_deref())?;
    Ok(true)
}

pub fn verify_cmd(args: &VerifyArgs, cfg: &RunConfig) -> Outcome {
    check_nodes(args.n, 256)?;
    let fams = families(&args.family)?;
    let opts = VerifyOptions { boundary_nodes: args.n, samples: args.samples, ..Default::default() };
    let reports: Vec<_> = fams
        .par_iter()
        .map(|f| {
            let base = DropletModel::new(*f)?;
            let model = if args.perturb_tau != 0.0 {
                DropletModel::with_constants(*f, base.p, base.tau + args.perturb_tau)?
            } else {
                base
            };
            verify(&model, &cfg.tolerances, &opts)
        })
        .collect::<Result<_, _>>()?;
    let passed = reports.iter().all(|r| r.passed);
    let text = if reports.len() == 1 { json(&reports[0])? } else { json(&reports)? };
    emit(&text, args.out.as_deref(), cfg.out_dir.as_deref())?;
    Ok(passed)
}

pub fn thresholds(args: &ThresholdArgs, cfg: &RunConfig) -> Outcome {
    let kind = match args.family {
        ThresholdFamily::Ksv => FamilyKind::Ksv,
        ThresholdFamily::Twopole => FamilyKind::TwoPole,
        ThresholdFamily::Mpole => {
            let m = args.m.context("--m is required for the m-pole family")?;
            if m < 2 {
                bail!("m must be at least 2");
            }
            FamilyKind::MPole { m }
        }
    };
    let report = geometry_report(kind, args.at, cfg.tolerances.width)?;
    emit(&json(&report)?, args.out.as_deref(), cfg.out_dir.as_deref())?;
    Ok(true)
}

pub fn annulus(args: &AnnulusArgs, cfg: &RunConfig) -> Outcome {
    let xs = parse_values(&args.x)?;
    let single = |what: &str| -> anyhow::Result<AnnulusConfig> {
        if xs.len() != 1 {
            bail!("--probe {what} takes a single --x value");
        }
        Ok(AnnulusConfig::new(args.r, xs[0])?)
    };
    match args.probe {
        Probe::Identities => {
            let rep = identity_report(&single("identities")?, &cfg.tolerances)?;
            emit(&json(&rep)?, args.out.as_deref(), cfg.out_dir.as_deref())?;
            Ok(rep.passed)
        }
        Probe::Periods => {
            let mut scan: Vec<(f64, Complex64)> =
                xs.par_iter().map(|&x| period_scan(args.r, &[x]).map(|v| v[0])).collect::<Result<_, _>>()?;
            scan.sort_by(|a, b| a.0.total_cmp(&b.0));
            for (lo, hi) in period_brackets(&scan) {
                eprintln!("period changes sign between x = {lo} and x = {hi}");
            }
            let rows = scan.iter().map(|(x, p)| vec![sig15(*x), sig15(p.re), sig15(p.im)]);
            emit(&csv(&["x", "re_period", "im_period"], rows), args.out.as_deref(), cfg.out_dir.as_deref())?;
            Ok(true)
        }
        Probe::Trace => {
            let acfg = single("trace")?;
            check_nodes(args.n, 16)?;
            let t = annulus_boundary_trace(&acfg, args.n, args.closure_tol)?;
            if t.open {
                eprintln!(
                    "warning: traces do not close (defects {:.3e}, {:.3e}); emitting open curves",
                    t.closure_defects[0], t.closure_defects[1]
                );
            }
            let text = if args.svg {
                let curves = vec![
                    SvgCurve { points: t.outer.clone(), closed: !t.open, label: "outer".into() },
                    SvgCurve { points: t.inner.clone(), closed: !t.open, label: "inner".into() },
                ];
                let extent = t.outer.iter().chain(&t.inner).map(|z| z.re.abs().max(z.im.abs())).fold(0.0, f64::max);
                let half = (1.1 * extent).max(1.0).ceil();
                let info = meta(&[
                    ("family", "annulus".into()),
                    ("r", sig15(args.r)),
                    ("x", sig15(xs[0])),
                    ("n", args.n.to_string()),
                    ("open", t.open.to_string()),
                ]);
                svg(&curves, half, &info)
            } else {
                let rows = [("outer", &t.outer, &t.outer_curvature), ("inner", &t.inner, &t.inner_curvature)]
                    .into_iter()
                    .flat_map(|(name, pts, curv)| {
                        let thetas = &t.thetas;
                        (0..pts.len()).map(move |k| {
                            vec![name.to_string(), sig15(thetas[k]), sig15(pts[k].re), sig15(pts[k].im), sig15(curv[k])]
                        })
                    });
                csv(&["component", "theta", "x", "y", "curvature"], rows)
            };
            emit(&text, args.out.as_deref(), cfg.out_dir.as_deref())?;
            Ok(true)
        }
    }
}
