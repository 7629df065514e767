//! Fixtures shared by the benchmarks.

use geomiracles_core::field::FieldSpec;
use geomiracles_core::genealogy::run_schedule;
use geomiracles_core::{Field, Ledger, MatingPolicy, RunConfig, SeedConfig, SeedMode};

pub fn run_config(adams: usize, field: FieldSpec, generations: u32) -> RunConfig {
    let mut config = RunConfig::new(
        SeedConfig::new(adams, SeedMode::GenericPlane, field),
        MatingPolicy::AllPairs,
        generations,
    );
    config.verify_runs = 1;
    config
}

/// A single-instance ledger of `adams` generic seeds, grown through `generations`.
pub fn ledger<F: Field>(adams: usize, field: FieldSpec, generations: u32) -> Ledger<F> {
    let mut out = run_schedule::<F>(&run_config(adams, field, generations)).expect("generic seeds");
    out.ledgers.remove(0)
}
