use lsbound_core::*;
use lsbound_core::localnorm::{k_upper, Interval};
fn main() {
    let w = Weight::power(1.0, 1.0, 0.0, 1.0).unwrap();
    let p = derived_params(2.0, 2.0, 1.0).unwrap();
    let c = 0.4499996417648783f64;
    for b in [0.9, 0.7, 0.55, 0.46, 0.451, 0.45001] {
        let v = k_upper(Interval::new(c, b).unwrap(), &p, &w).unwrap();
        println!("k_upper(({c:.3}, {b})) = {v}");
    }
}
