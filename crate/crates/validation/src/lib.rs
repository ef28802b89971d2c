//! Holds the `acceptance` test target, which checks each acceptance criterion
//! against independent oracles and prints one PASS/FAIL line per criterion.
//!
//! Run it with `cargo test -p orbitint-validation --test acceptance`.
