//! Gauss map degree and Euler characteristic of closed surfaces, with the
//! fundamental-form cross-check.

use gaussmap::cli::load_manifest;
use gaussmap::smooth::{euler_characteristic, gauss_degree, Settings};
use std::path::Path;

fn main() -> gaussmap::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for name in ["sphere.man", "torus.man"] {
        let surface = load_manifest(&data.join(name))?.immersion()?;
        let r = gauss_degree(&surface, &Settings::default())?;
        println!(
            "{name:11} raw {:+.12}  degree {:?}  dual-path difference {:.1e}",
            r.result.raw,
            r.result.k,
            r.cross_check("dual_path_difference").unwrap_or(f64::NAN)
        );
        let (chi, _) = euler_characteristic(&surface, &Settings::default())?;
        println!("{:11} euler characteristic {chi}", "");
    }
    Ok(())
}
