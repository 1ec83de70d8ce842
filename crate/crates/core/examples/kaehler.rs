//! Kähler-form integral of a product torus in C², in both evaluation modes.

use gaussmap::cli::load_manifest;
use gaussmap::smooth::{kaehler_invariant, KaehlerMode, Settings};
use std::path::Path;

fn main() -> gaussmap::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/product_torus.man");
    let surface = load_manifest(&path)?.immersion()?;
    for mode in [KaehlerMode::Direct, KaehlerMode::Pluecker] {
        let r = kaehler_invariant(&surface, mode, true, &Settings::default())?;
        println!("{mode:?}: raw {:+.3e}  k {:?}", r.result.raw, r.result.k);
    }
    Ok(())
}
