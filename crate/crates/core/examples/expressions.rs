//! Parse a coordinate expression and evaluate it with second-order jets.

use gaussmap::expr::parse;

fn main() -> gaussmap::Result<()> {
    let e = parse("(1 + 2*cos(t1))*sin(t1)^2 + t2/exp(t1)", 2)?;
    println!("expression: {e}");
    let jet = e.eval_jet2(&[0.3, 1.5])?;
    println!("value    {}", jet.value);
    println!("gradient {:?}", jet.gradient());
    println!("d2/dt1dt2 {}", jet.hess[0][1]);

    match parse("sin(t1", 1) {
        Err(err) => println!("syntax error: {err}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
