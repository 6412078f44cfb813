//! Property and exhaustive checks shared by the per-area test targets and
//! the acceptance run.
#![allow(dead_code)]

pub mod action;
pub mod classgroup;
pub mod curves;
pub mod lemmas;
pub mod volcano;

use tgii_core::arith::int::is_prime_u64;

pub fn primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&p| is_prime_u64(p)).collect()
}

pub fn runner(cases: u32) -> proptest::test_runner::TestRunner {
    let config = proptest::test_runner::Config {
        failure_persistence: None,
        ..proptest::test_runner::Config::with_cases(cases)
    };
    proptest::test_runner::TestRunner::new(config)
}
