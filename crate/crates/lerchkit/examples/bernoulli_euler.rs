// Exact Bernoulli and Euler polynomials, and rational values of Φ at
// non-positive integer s.

use lerchkit::lerch::{bernoulli_poly, euler_poly, phi_closed_rational};
use lerchkit::Result;
use rug::Rational;

pub fn run_example() -> Result<()> {
    for m in 0..=6 {
        println!("B_{m}(x) = {}", bernoulli_poly(m));
    }
    for m in 0..=6 {
        println!("E_{m}(x) = {}", euler_poly(m));
    }
    // Φ(z, -m, u) is rational in z and u
    for (z, m, u) in [((1, 2), 0, (7, 1)), ((-1, 1), 2, (1, 1)), ((1, 3), 3, (1, 2))] {
        let z = Rational::from(z);
        let u = Rational::from(u);
        println!("Phi({z}, {}, {u}) = {}", -(m as i32), phi_closed_rational(&z, m, &u)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
