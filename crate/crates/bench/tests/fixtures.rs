use geomiracles_bench::{ledger, run_config};
use geomiracles_core::field::FieldSpec;
use geomiracles_core::{PrimeField, Rationals};

#[test]
fn bench_ledgers_are_single_instance_runs() {
    assert_eq!(run_config(4, FieldSpec::prime(1), 6).verify_runs, 1);
    assert_eq!(ledger::<PrimeField>(4, FieldSpec::prime(1), 6).new_counts(), vec![4, 6, 3, 3, 6, 16, 84]);
    assert_eq!(ledger::<Rationals>(5, FieldSpec::rational(1), 3).new_counts(), vec![5, 10, 15, 90]);
}
