// Evaluate Φ(z, s, u) with the dispatcher and with each route that covers
// the same point.

use lerchkit::lerch::{phi_auto, phi_integral, phi_series_direct, phi_series_negz, phi_split};
use lerchkit::{Ctx, Cx, LerchPoint, Result};

pub fn run_example() -> Result<()> {
    let ctx = Ctx::new(128);
    for (z, s, u) in [(-1.0, 2.0, 1.0), (0.5, 1.0, 1.0), (0.0, 2.0, 3.0), (-40.0, 1.5, 0.5), (0.9, 3.0, 2.0)] {
        let pt = LerchPoint::new(Cx::real(128, z), Cx::real(128, s), u)?;
        let v = phi_auto(&pt, &ctx)?;
        println!("Phi({z}, {s}, {u}) = {:.30}  err {:.1e}  via {}", v.re(), v.err_f64(), v.method.tag());
    }

    let pt = LerchPoint::new(Cx::from_f64(128, 0.3, 0.2), Cx::from_f64(128, 2.5, 1.0), 1.7)?;
    println!("at {pt}:");
    for v in [
        phi_series_direct(&pt, &ctx)?,
        phi_series_negz(&pt, &ctx)?,
        phi_integral(&pt, &ctx)?,
        phi_split(&pt, &ctx)?,
    ] {
        println!("  {:<16} {}", v.method.tag(), v.value);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
