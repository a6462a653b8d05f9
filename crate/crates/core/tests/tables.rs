mod common;

use common::{example_tables, fixture, standard_tables, synthetic_tables};
use hec_core::coder_low::select_code_index;
use hec_core::codetables::{parse_tableset, write_tableset, StepResult};
use rand::{Rng, SeedableRng};

#[test]
fn example_fixture_compiles_to_known_rom() {
    let set = example_tables();
    assert!(set.warnings().is_empty());
    assert_eq!(
        set.table(0).rom.dump(),
        "0 (1'h0, 4'hA)\n1 (1'h0, ptr = 3)\n2 (1'h0, 5'hB)\n3 (2'h1, 4'hC)\n4 (2'h1, 8'hD)\n5 (2'h1, 6'hE)\n"
    );
}

#[test]
fn synthetic_fixture_is_a_full_ordered_set() {
    let set = synthetic_tables();
    assert!(set.is_full());
    assert!(set.warnings().is_empty(), "{:?}", set.warnings());
    let t: Vec<u64> = set.thresholds().collect();
    assert!(t.windows(2).all(|w| w[0] > w[1]));
}

#[test]
fn fixture_round_trips_through_writer() {
    let set = synthetic_tables();
    let specs: Vec<_> = set.tables().iter().map(|t| t.spec.clone()).collect();
    let again = parse_tableset(&write_tableset(&specs)).unwrap();
    assert_eq!(again.checksum(), set.checksum());
    assert_eq!(again.dump_roms(), set.dump_roms());
}

#[test]
fn checksum_is_stable_across_loads() {
    let a = hec_core::load_tableset(&fixture("synthetic16.tbl")).unwrap();
    let b = hec_core::load_tableset(&fixture("synthetic16.tbl")).unwrap();
    assert_eq!(a.checksum(), b.checksum());
    assert_ne!(a.checksum(), example_tables().checksum());
}

#[test]
fn every_synthetic_entry_replays() {
    let set = synthetic_tables();
    for table in set.tables() {
        for entry in &table.spec.entries {
            let mut addr = table.rom.root();
            for (n, &s) in entry.symbols.iter().enumerate() {
                match table.rom.lookup_step(addr, s) {
                    StepResult::Continue(next) => {
                        assert!(n + 1 < entry.symbols.len());
                        addr = next;
                    }
                    StepResult::Match { codeword, next } => {
                        assert_eq!(n + 1, entry.symbols.len());
                        assert_eq!(codeword, entry.codeword);
                        assert_eq!(next, table.rom.root());
                    }
                }
            }
        }
    }
}

#[test]
fn standard_set_index_selection_matches_linear_scan() {
    let Some(set) = standard_tables() else {
        eprintln!("tables/ccsds123b2.tbl not present; skipping");
        return;
    };
    assert!(set.is_full());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    for _ in 0..100_000 {
        let sigma = rng.gen_range(0..1u64 << 30);
        let gamma = rng.gen_range(1..2048u32);
        let oracle = (0..16)
            .rev()
            .find(|&i| (sigma as u128) << 14 <= set.table(i).threshold() as u128 * gamma as u128);
        assert_eq!(
            select_code_index(sigma, gamma, &set).ok().map(|r| r.0),
            oracle
        );
    }
}
