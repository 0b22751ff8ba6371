//! Acceptance checks for `lerchkit` live in `tests/acceptance.rs`. They sit in
//! their own package so that `cargo test --workspace` runs them after every
//! `lerchkit` target.
