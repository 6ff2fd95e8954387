use std::path::Path;

use qca_core::designs::{self, NAMES};
use qca_core::metrics;
use qca_core::model::validate;
use qca_core::oracle::truth_table;
use qca_core::qlf::{parse_layout, serialize_layout};
use qca_core::sim::{extract_truth_table, run_simulation, SimParams};

fn designs_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../designs"))
}

#[test]
fn every_design_is_valid_single_layer() {
    for name in NAMES {
        let d = designs::build(name).unwrap();
        assert!(
            validate(&d.layout).is_empty(),
            "{name}: {:?}",
            validate(&d.layout)
        );
        assert_eq!(metrics::layer_count(&d.layout), 1, "{name}");
        assert_eq!(metrics::rotated_count(&d.layout), 0, "{name}");
        assert_eq!(d.layout.name, name);
    }
}

#[test]
fn latencies_match_expectations() {
    for name in NAMES {
        let d = designs::build(name).unwrap();
        assert_eq!(
            metrics::latency(&d.layout).unwrap(),
            d.expected_latency,
            "{name}"
        );
    }
}

#[test]
fn simulated_tables_equal_oracles() {
    let params = SimParams::default();
    for name in NAMES {
        let d = designs::build(name).unwrap();
        let expected = truth_table(&d.oracle).unwrap();
        let trace = run_simulation(&d.layout, &params).unwrap();
        assert!(
            trace.stats.unconverged_fraction() <= 0.01,
            "{name}: {:?}",
            trace.stats
        );
        let actual = extract_truth_table(&trace, d.expected_latency, &params)
            .unwrap()
            .reordered(expected.input_labels(), expected.output_labels())
            .unwrap();
        let diffs = expected.diff(&actual).unwrap();
        assert!(diffs.is_empty(), "{name}: {diffs:?}");
    }
}

#[test]
fn adder_subtractor_hits_its_count_target() {
    let d = designs::build_adder_subtractor();
    let target = d.cell_count_target.unwrap();
    assert!(target.contains(metrics::cell_count(&d.layout)));
    let area = metrics::area(&d.layout).unwrap();
    assert!((area - 0.28).abs() <= 0.28 * 0.25, "area {area}");
}

#[test]
fn qlf_round_trip() {
    for name in NAMES {
        let d = designs::build(name).unwrap();
        let text = serialize_layout(&d.layout);
        assert_eq!(parse_layout(&text).unwrap(), d.layout, "{name}");
    }
}

#[test]
fn shipped_files_match_builders() {
    for name in NAMES {
        let path = designs_dir().join(format!("{name}.qlf"));
        let shipped =
            std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let built = serialize_layout(&designs::build(name).unwrap().layout);
        assert_eq!(shipped, built, "{name}.qlf is stale");
    }
}

#[test]
fn unknown_name_is_an_error() {
    assert!(designs::build("nand").is_err());
    assert!(designs::build_primitive("rqg").is_err());
}
