//! The three-sphere in R^4 integrates to its volume 2π², not 8π.

use gaussmap::cli::load_manifest;
use gaussmap::integrate::Normalization;
use gaussmap::smooth::{gauss_degree, Settings};
use std::f64::consts::PI;
use std::path::Path;

fn main() -> gaussmap::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sphere3.man");
    let chart = load_manifest(&path)?.immersion()?;
    for norm in [Normalization::Sphere, Normalization::PowerOfTwoPi] {
        let settings = Settings { normalization: norm, ..Settings::default() };
        let r = gauss_degree(&chart, &settings)?;
        println!(
            "{norm:?}: constant {:.12}  normalized {:.12}  k {:?}",
            r.result.norm_constant, r.result.normalized, r.result.k
        );
    }
    println!("2π² = {:.12}, 8π = {:.12}", 2.0 * PI * PI, 8.0 * PI);
    Ok(())
}
