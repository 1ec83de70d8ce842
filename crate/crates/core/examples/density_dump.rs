//! Tabulate the sphere's curvature density on a coarse grid as CSV.

use gaussmap::cli::{density_dump, load_manifest};
use gaussmap::geometry::DEFAULT_IMMERSION_EPS;
use std::path::Path;

fn main() -> gaussmap::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sphere.man");
    let m = load_manifest(&path)?;
    let dump = density_dump(&m.source()?, &m.default_density(), DEFAULT_IMMERSION_EPS, 6)?;
    print!("{}", dump.csv);
    println!("# {} rows, rule value {}", dump.rows, dump.rule_value);
    Ok(())
}
