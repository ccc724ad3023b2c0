use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "droplets", version, about = "Electrified droplet boundaries, identity checks and threshold reports")]
pub struct Cli {
    /// TOML file with tolerance overrides.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Directory for relative `--out` paths.
    #[arg(long, global = true, env = "DROPLETS_OUT_DIR")]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the boundary curve(s) as CSV or SVG.
    Boundary(BoundaryArgs),
    /// Run the identity checks and print a JSON report.
    Verify(VerifyArgs),
    /// Convexity and univalency thresholds of a family.
    Thresholds(ThresholdArgs),
    /// Probes of the two-component annulus construction.
    Annulus(AnnulusArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Circle,
    Mcleod,
    Ksv,
    Twopole,
    Mpole,
    TwopoleGeneral,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    /// Parameter c: a value, a comma list, or lo:hi:step.
    #[arg(long)]
    pub c: Option<String>,
    /// Pole count for the m-pole family.
    #[arg(long)]
    pub m: Option<u32>,
    /// Second pole for the general two-pole map.
    #[arg(long)]
    pub q: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Boundary nodes (power of two).
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    #[arg(long, conflicts_with = "svg")]
    pub csv: bool,
    #[arg(long)]
    pub svg: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl BoundaryArgs {
    pub fn format(&self) -> Format {
        if self.svg {
            Format::Svg
        } else {
            Format::Csv
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Add this amount to τ before checking.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub perturb_tau: f64,
    /// Boundary nodes for the residual (power of two).
    #[arg(long, default_value_t = 4096)]
    pub n: usize,
    /// Interior sample points for the closed-form checks.
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ThresholdFamily {
    Ksv,
    Twopole,
    Mpole,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long, value_enum)]
    pub family: ThresholdFamily,
    #[arg(long)]
    pub m: Option<u32>,
    /// Parameter at which to report the width (two-pole) or stage (KSV).
    #[arg(long)]
    pub at: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Probe {
    Identities,
    Periods,
    Trace,
}

#[derive(Debug, Args)]
pub struct AnnulusArgs {
    #[arg(long)]
    pub r: f64,
    /// Pole parameter: a value, a comma list, or lo:hi:step.
    #[arg(long)]
    pub x: String,
    #[arg(long, value_enum)]
    pub probe: Probe,
    /// Trace nodes per circle (power of two).
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    /// Closure tolerance below which a trace counts as closed.
    #[arg(long, default_value_t = 1e-8)]
    pub closure_tol: f64,
    #[arg(long)]
    pub svg: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `0.1`, `0.1,0.3,0.5` or `0.05:0.33:0.04` (items may be mixed).
pub fn parse_values(text: &str) -> anyhow::Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(v.parse()?),
            [lo, hi, step] => {
                let (lo, hi, step): (f64, f64, f64) = (lo.parse()?, hi.parse()?, step.parse()?);
                anyhow::ensure!(step > 0.0 && hi >= lo, "bad range {item}");
                let count = ((hi - lo) / step + 1e-9).floor() as usize;
                anyhow::ensure!(count < 100_000, "range {item} has too many values");
                // round away accumulated binary noise so labels stay clean
                out.extend((0..=count).map(|k| ((lo + k as f64 * step) * 1e12).round() / 1e12));
            }
            _ => anyhow::bail!("cannot parse parameter list item {item:?}"),
        }
    }
    anyhow::ensure!(!out.is_empty(), "empty parameter list");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists() {
        assert_eq!(parse_values("0.3").unwrap(), vec![0.3]);
        assert_eq!(parse_values("0.1,0.3,0.5").unwrap(), vec![0.1, 0.3, 0.5]);
        let r = parse_values("0.05:0.33:0.04").unwrap();
        assert_eq!(r.len(), 8);
        assert_eq!(r[7], 0.33);
        assert_eq!(parse_values("0.35:0.95:0.01").unwrap().len(), 61);
        assert!(parse_values("1:0:0.1").is_err());
        assert!(parse_values("a").is_err());
        assert!(parse_values("").is_err());
    }
}
