//! Angle defects of triangulated spheres and per-vertex link curvatures.

use gaussmap::polyhedral::{exterior_angle_2_detail, parse_off, total_invariant_2};
use std::path::Path;

fn main() -> gaussmap::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for name in ["tetrahedron.off", "cube.off", "icosahedron.off"] {
        let mesh = parse_off(&std::fs::read_to_string(data.join(name))?)?;
        let r = total_invariant_2(&mesh)?;
        println!("{name:16} total {:.12}  kappa {:?}  chi {:?}", r.total, r.kappa, r.chi);
    }
    let cube = parse_off(&std::fs::read_to_string(data.join("cube.off"))?)?;
    let e = exterior_angle_2_detail(&cube, 0)?;
    println!("cube vertex 0: defect {:.12}, via link {:.12}", e.value, e.via_link);
    for (mu, k) in &e.link_curvatures {
        println!("  link vertex {mu}: K1 = {k:.6}");
    }
    Ok(())
}
