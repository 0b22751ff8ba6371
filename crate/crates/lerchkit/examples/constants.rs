// Every oracle constant, plus a few recomputed from zeta-type series.

use lerchkit::special::functions::{beta_dirichlet, zeta, zeta_star};
use lerchkit::special::oracle::{oracle, CONSTANT_KEYS};
use lerchkit::{Ctx, Cx, Result};

pub fn run_example() -> Result<()> {
    for key in CONSTANT_KEYS {
        println!("{key:<13} {:.40}", oracle(key, 160)?);
    }
    let ctx = Ctx::new(160);
    let re = |x: f64| Cx::real(160, x);
    for (name, v) in [
        ("apery", zeta(&re(3.0), &ctx)?),
        ("catalan", beta_dirichlet(&re(2.0), &ctx)?),
        ("ln2", zeta_star(&re(1.0), &ctx)?),
    ] {
        let gap = v.dist(&Cx::from_real(oracle(name, 160)?));
        println!("{name:<13} from series, gap {gap:.1e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
