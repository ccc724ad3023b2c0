//! Fixtures shared by the benchmarks.

use droplet_core::sampling::disc_points;
use droplet_core::{Complex64, DropletFamily, DropletModel};

/// Representative member of each family.
pub fn models() -> Vec<(&'static str, DropletModel)> {
    [
        ("mcleod", DropletFamily::McLeod),
        ("ksv", DropletFamily::Ksv { c: 0.3 }),
        ("twopole", DropletFamily::TwoPole { c: 0.2 }),
        ("mpole4", DropletFamily::MPole { m: 4, c: 0.35 }),
    ]
    .into_iter()
    .map(|(name, f)| (name, DropletModel::new(f).expect("valid constants")))
    .collect()
}

/// Points in the disc kept clear of the interior poles of the given family.
pub fn points(family: &DropletFamily, n: usize) -> Vec<Complex64> {
    disc_points(n, 0.05, 0.95, &family.interior_poles(), 0.02)
}
