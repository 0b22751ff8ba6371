// Unit-square integrals through the one-dimensional reduction in
// t = -ln(xy), and directly as nested quadrature.

use lerchkit::quad::reduce::{eval_double, thm31_form};
use lerchkit::{Ctx, Cx, Result, Tol};

pub fn run_example() -> Result<()> {
    let ctx = Ctx::new(128).with_tol(Tol::new(1e-20));
    // ∫∫ (-ln xy)^s / (1 - z xy) with (xy)^(u-1)
    for (z, s, u) in [(1.0, 0.0, 1.0), (1.0, 1.0, 1.0), (-1.0, -1.0, 1.0), (-1.0, -1.5, 2.0)] {
        let form = thm31_form(&Cx::real(128, z), s, u, None, 128)?;
        let v = form.eval(&ctx)?;
        println!("z={z:>4} s={s:>4} u={u}: {:.25}  err {:.1e}", v.re(), v.err_f64());
    }
    let form = thm31_form(&Cx::real(128, 1.0), 0.0, 1.0, None, 128)?;
    let direct = eval_double(&*form.double(), &Ctx::new(128).with_tol(Tol::new(1e-10)))?;
    println!("1/(1-xy) on the square directly: {:.15}", direct.re());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
