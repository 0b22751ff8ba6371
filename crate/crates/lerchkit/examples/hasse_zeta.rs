// Hurwitz zeta values from the globally convergent binomial double series,
// including points left of the pole at s = 1.

use lerchkit::lerch::phi_hasse;
use lerchkit::special::functions::zeta;
use lerchkit::{Ctx, Cx, Result};
use rug::Float;

pub fn run_example() -> Result<()> {
    let ctx = Ctx::new(128);
    let one = Float::with_val(128, 1);
    for s in [2.0, 0.5, 0.0, -1.0, -2.5] {
        let v = phi_hasse(&Cx::real(128, s), &one, &ctx)?;
        println!("zeta({s:>4}) = {:.30}  ({} terms)", v.re(), v.terms_used);
    }
    let s = Cx::from_f64(128, 0.5, 14.134725141734693);
    let v = zeta(&s, &ctx)?;
    println!("|zeta(1/2 + 14.1347i)| = {:.3e}", v.value.abs_f64());
    let v = phi_hasse(&Cx::real(128, 3.0), &Float::with_val(128, 0.25), &ctx)?;
    println!("zeta(3, 1/4) = {:.30}", v.re());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
