// s-derivatives of Φ from the differentiated series, checked against their
// closed forms.

use lerchkit::deriv::{digamma_limit, dphi_ds_fd, dphi_ds_negz, dphi_ds_registry, DsKey};
use lerchkit::{Ctx, Cx, LerchPoint, Result};
use rug::Float;

pub fn run_example() -> Result<()> {
    let ctx = Ctx::new(128);
    for key in ["glaisher_alt", "apery_alt", "catalan_half", "somos", "gamma_ratio:3"] {
        let key = DsKey::parse(key)?;
        let (z, s, u) = key.point();
        let z = z.with_prec(128);
        let u = Float::with_val(128, u);
        // the differentiated series needs Re z < 1/2; a central difference elsewhere
        let series = if z.re < 0.5 {
            dphi_ds_negz((-s) as u32, &z, &u, &ctx)?
        } else {
            dphi_ds_fd(&LerchPoint::from_parts(z, Cx::real(128, s), u)?, &ctx)?
        };
        let closed = dphi_ds_registry(key, 128)?;
        println!(
            "{key:<14} series {:.25}  closed form {:.25}  gap {:.1e}",
            series.re(),
            closed.re(),
            series.dist(&closed.value)
        );
    }
    let neg_psi = digamma_limit(&Float::with_val(128, 1), &ctx)?;
    println!("-psi(1) = {:.30} (Euler's constant)", neg_psi.re());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
