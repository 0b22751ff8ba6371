// Check a slice of the identity registry: quadrature of each left-hand side
// against its closed form.

use lerchkit::quad::registry::{filter_cases, identity_registry, verify_all};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cases = filter_cases(identity_registry(), "ex3.[5-9]*")?;
    let records = verify_all(&cases, 128, 1);
    for r in &records {
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        println!("{verdict} {:<10} {:<10} |lhs - rhs| = {:.1e}", r.id, r.route, r.abs_err.unwrap_or(f64::NAN));
    }
    let failed = records.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        return Err(format!("{failed} identities failed").into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
