//! Turning of closed polygons, including a star polygon.

use gaussmap::polyhedral::{parse_json_mesh, polygon_exterior_angles, total_invariant_1};
use std::path::Path;

fn main() -> gaussmap::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for name in ["square.json", "pentagram.json"] {
        let mesh = parse_json_mesh(&std::fs::read_to_string(data.join(name))?)?;
        let mut pts = mesh.polygon()?;
        let angles = polygon_exterior_angles(&pts)?;
        let r = total_invariant_1(&pts)?;
        println!("{name:15} angles {angles:.4?}  total {:.12}  kappa {:?}", r.total, r.kappa);
        pts.reverse();
        println!("{:15} reversed kappa {:?}", "", total_invariant_1(&pts)?.kappa);
    }
    Ok(())
}
