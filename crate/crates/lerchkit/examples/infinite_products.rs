// Partial products for pi and Somos's constant, against the oracle values.

use lerchkit::special::oracle::oracle;
use lerchkit::special::products::{product_spec, product_trajectory};
use lerchkit::{Ctx, Result};
use rug::Float;

pub fn run_example() -> Result<()> {
    let ctx = Ctx::new(256);
    for (id, name) in [("ex5.1", "pi"), ("eq58", "somos_sigma"), ("eq59", "somos_sigma"), ("ex5.12", "e")] {
        let spec = product_spec(id)?;
        let target = oracle(name, 256)?;
        let to_constant = spec.to_constant.as_ref().expect("product yields a constant");
        println!("{id}: {} -> {name}", spec.target);
        for pp in product_trajectory(&spec, &[8, 16, 32, 64], &ctx)? {
            let c = to_constant(pp.value.re());
            let miss = Float::with_val(256, &c - &target).abs();
            println!("  N={:<3} {:.20}  miss {:.2e}", pp.n, c, miss.to_f64());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
