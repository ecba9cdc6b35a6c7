//! Connection coefficients of the flat plane in polar coordinates, computed
//! from the symbolic metric `diag(1, r^2)`.

use relmech::geometry::MetricField;

fn main() {
    let metric = MetricField::polar();
    let names = ["r", "theta"];
    for r in [0.5, 1.0, 2.0] {
        let me = metric.eval(&[r, 0.3]).expect("regular away from r = 0");
        let gamma = me.christoffel();
        println!("r = {r}: det g = {}", me.det);
        for l in 0..2 {
            for i in 0..2 {
                for j in i..2 {
                    let v = gamma.get(l, i, j);
                    if v != 0.0 {
                        println!("  Gamma^{}_{{{} {}}} = {v}", names[l], names[i], names[j]);
                    }
                }
            }
        }
    }
    match metric.eval(&[0.0, 0.0]) {
        Err(e) => println!("at the origin: {e}"),
        Ok(_) => unreachable!("polar chart degenerates at r = 0"),
    }
}
