use bosonrace::race::{round_display, RowKind};
use bosonrace::*;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = RateParams> {
    (
        1e6f64..1e9,
        0.05f64..0.95,
        0.05f64..0.95,
        0.05f64..0.95,
        0.05f64..0.95,
        1usize..12,
    )
        .prop_map(|(r_pump, eta_qd, eta_de, eta_c, eta_det, n)| RateParams {
            r_pump,
            eta_qd,
            eta_de,
            eta_c,
            eta_det,
            m: 4 * n,
            n,
        })
}

proptest! {
    #[test]
    fn count_rate_is_monotone(p in params(), bump in 1.01f64..1.05) {
        let base = expected_count_rate(&p).unwrap();
        let variants = [
            RateParams { r_pump: p.r_pump * bump, ..p },
            RateParams { eta_qd: p.eta_qd * bump, ..p },
            RateParams { eta_de: p.eta_de * bump, ..p },
            RateParams { eta_c: p.eta_c * bump, ..p },
            RateParams { eta_det: p.eta_det * bump, ..p },
        ];
        for v in variants {
            prop_assert!(expected_count_rate(&v).unwrap() > base);
        }
    }

    #[test]
    fn collision_free_ratio_in_unit_interval_and_decreasing(m in 1usize..60) {
        let mut prev = f64::INFINITY;
        for n in 1..=m {
            let s = no_collision_ratio(m, n).unwrap();
            prop_assert!(s > 0.0 && s <= 1.0);
            prop_assert!(s < prev || n == 1);
            prev = s;
        }
    }
}

#[test]
fn default_table_matches_reference_grid() {
    let reference = [
        ("ENIAC (Ryser)", [44.0, 140.0, 383.3]),
        ("ENIAC (Gurvits)", [3773.4, 3409.3, 11306.1]),
        ("TRADIC (Ryser)", [4.6, 14.6, 40.1]),
        ("TRADIC (Gurvits)", [386.1, 344.6, 1130.4]),
        ("Quantum sampler", [0.2, 6.6, 248.8]),
    ];
    let table = race_table(&RaceInputs::default()).unwrap();
    assert_eq!(table.rows.len(), 5);
    for (label, cells) in reference {
        let row = table.row(label).unwrap();
        for (v, cell) in row.values_ms.iter().zip(cells) {
            assert!((v - cell).abs() <= 0.5, "{label}: {v} vs {cell}");
        }
    }
}

#[test]
fn ryser_rows_scale_with_machine_rates() {
    let fast = MachineSpec::new("fast", 5000.0 * 10.0, 357.0 * 10.0).unwrap();
    for n in 2..8 {
        let slow = ryser_time_ms(&MachineSpec::eniac(), n).unwrap();
        assert!((ryser_time_ms(&fast, n).unwrap() * 10.0 - slow).abs() < 1e-9 * slow);
    }
}

#[test]
fn quantum_beats_early_machines_at_three_photons() {
    let table = race_table(&RaceInputs::default()).unwrap();
    let quantum = table
        .rows
        .iter()
        .find(|r| r.kind == RowKind::Quantum)
        .unwrap();
    for row in table.rows.iter().filter(|r| r.kind != RowKind::Quantum) {
        assert!(row.values_ms[0] > quantum.values_ms[0], "{}", row.label);
    }
    assert_eq!(round_display(quantum.values_ms[0]), 0.2);
}
