//! Winding numbers of plane curves read from manifests.

use gaussmap::cli::load_manifest;
use gaussmap::smooth::{winding_number, Settings};
use std::path::Path;

fn main() -> gaussmap::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for name in ["circle.man", "double_circle.man", "limacon.man"] {
        let curve = load_manifest(&data.join(name))?.immersion()?;
        let r = winding_number(&curve, &Settings::default())?;
        println!(
            "{name:18} raw {:+.12}  k {:?}  turning {:?}  residual {:.1e}",
            r.result.raw,
            r.result.k,
            r.alias("turning"),
            r.result.residual
        );
    }
    Ok(())
}
