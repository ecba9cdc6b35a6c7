//! Parse an expression, evaluate it and take symbolic partial derivatives.
//!
//!     cargo run --example parse_and_differentiate -- "r^2*sin(theta)"

use relmech::expr::{Environment, Expr};

fn main() {
    let src = std::env::args().nth(1).unwrap_or_else(|| "r^2*sin(theta) + ln(r)".to_string());
    let e = match Expr::parse(&src) {
        Ok(e) => e,
        Err(err) => {
            eprintln!("{err}");
            std::process::exit(2);
        }
    };
    println!("parsed:     {e}");
    println!("simplified: {}", e.simplify());

    let vars = e.variables();
    let point: Vec<(String, f64)> = vars.iter().enumerate().map(|(i, v)| (v.clone(), 1.0 + 0.5 * i as f64)).collect();
    let env: Environment = point.iter().cloned().collect();
    let at: Vec<String> = point.iter().map(|(v, x)| format!("{v} = {x}")).collect();
    match e.evaluate(&env) {
        Ok(v) => println!("value at {}: {v}", at.join(", ")),
        Err(err) => println!("not defined at the sample point: {err}"),
    }
    for v in &vars {
        match e.differentiate(v) {
            Ok(d) => println!("d/d{v} = {d}"),
            Err(err) => println!("d/d{v}: {err}"),
        }
    }
}
