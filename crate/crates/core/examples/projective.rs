//! Projective forms on an affine circle and ellipse in the chart x0 = 1.

use gaussmap::cli::load_manifest;
use gaussmap::forms::ProjectiveWeights;
use gaussmap::smooth::{projective_invariants, Settings};
use std::path::Path;

fn main() -> gaussmap::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let weights = ProjectiveWeights { alpha: [1.0, 0.5, 0.25] };
    for name in ["affine_circle.man", "affine_ellipse.man"] {
        let cone = load_manifest(&data.join(name))?.cone()?;
        let r = projective_invariants(&cone, weights, &Settings::default())?;
        for (i, f) in r.forms.iter().enumerate() {
            println!("{name:19} form {i}: raw {:+.12}  k {:?}", f.result.raw, f.result.k);
        }
        println!("{name:19} weighted total {:+.12}", r.weighted_total);
    }
    Ok(())
}
