//! Integrate a user-written Plücker form over the unit sphere.

use gaussmap::cli::load_manifest;
use gaussmap::forms::PlueckerFormSpec;
use gaussmap::smooth::{form_invariant, Settings};
use std::path::Path;

fn main() -> gaussmap::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let source = load_manifest(&data.join("sphere.man"))?.source()?;
    let text = std::fs::read_to_string(data.join("canonical2.form"))?;
    let spec = PlueckerFormSpec::parse(&text, source.pluecker_len())?;
    spec.check_homogeneity()?;
    let r = form_invariant(&source, &spec, &Settings::default())?;
    println!("{}: raw {:.12}  k {:?}", r.density, r.result.raw, r.result.k);
    Ok(())
}
