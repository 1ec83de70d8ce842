//! Jacobian frame and Plücker coordinates of a torus chart.

use gaussmap::geometry::{jacobian_frame, pluecker_derivatives, singular_values, ImmersionChart};
use gaussmap::integrate::{DomainSpec, VarDomain};
use std::f64::consts::PI;

fn main() -> gaussmap::Result<()> {
    let dom = DomainSpec::new(vec![VarDomain::periodic(0.0, 2.0 * PI); 2])?;
    let torus = ImmersionChart::parse(
        2,
        &["(2 + cos(t2))*cos(t1)", "(2 + cos(t2))*sin(t1)", "sin(t2)"],
        dom,
    )?;
    let frame = jacobian_frame(&torus, &[0.4, 1.1])?;
    println!("point            {:?}", frame.x());
    println!("singular values  {:?}", singular_values(&frame));
    let pv = pluecker_derivatives(&frame)?;
    for ((cols, p), dp) in pv.indices.iter().zip(&pv.p).zip(&pv.dp) {
        println!("minor {cols:?}: {p:+.6}  d/dt = {dp:+.6?}");
    }
    println!("|p| = {:.6}", pv.norm);
    Ok(())
}
