//! Exterior 3-angles on the boundary of the regular 4-simplex.
//!
//! This path is experimental: the total is reported against both 2π² and
//! 8π, and neither ratio is an integer.

use gaussmap::polyhedral::{exterior_angle_3_detail, parse_json_mesh, total_invariant_3};
use std::path::Path;

fn main() -> gaussmap::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/simplex4.json");
    let mesh = parse_json_mesh(&std::fs::read_to_string(path)?)?;
    let e = exterior_angle_3_detail(&mesh, 0)?;
    println!("vertex 0: E3 {:.12}", e.value);
    for (mu, k) in &e.link_curvatures {
        println!("  link vertex {mu}: K2 = {k:.6}");
    }
    let r = total_invariant_3(&mesh)?;
    println!("total {:.12}", r.total);
    for c in &r.certifications {
        println!(
            "  vs {:5}: normalized {:+.6}  residual {:.6}  k {:?}",
            c.constant_name, c.result.normalized, c.result.residual, c.result.k
        );
    }
    Ok(())
}
