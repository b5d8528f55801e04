use fibercap::snapshot::{decode, encode, read_binary, write_binary, write_csv_file};
use fibercap::validate::ToyLink;
use fibercap_core::grid::{ComplexField, Domain};
use num_complex::Complex64;
use proptest::prelude::*;

fn scratch(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("fibercap-{}-{name}", std::process::id()))
}

#[test]
fn binary_file_round_trip() {
    let link = ToyLink::new(16, 4, 1.0, 0.0).unwrap();
    let x = link.input(3).unwrap();
    let path = scratch("x.cfld");
    write_binary(&path, &x).unwrap();
    let back = read_binary(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(back, x);
}

#[test]
fn csv_has_one_row_per_sample() {
    let link = ToyLink::new(4, 2, 1.0, 0.0).unwrap();
    let x = link.input(3).unwrap();
    let path = scratch("x.csv");
    write_csv_file(&path, &x).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let rows = text.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, x.grid.m_total + 1);
}

#[test]
fn truncated_snapshot_is_rejected() {
    let link = ToyLink::new(4, 2, 1.0, 0.0).unwrap();
    let bytes = encode(&link.input(1).unwrap());
    assert!(decode(&bytes[..bytes.len() - 1]).is_err());
    assert!(decode(&bytes[..10]).is_err());
}

proptest! {
    #[test]
    fn encode_decode_round_trip(
        m in 2usize..12,
        r in 1usize..4,
        values in proptest::collection::vec((-1e3..1e3f64, -1e3..1e3f64), 48),
        time in any::<bool>(),
    ) {
        let link = ToyLink::new(m, r, 1.0, 0.0).unwrap();
        let n = link.grid.m_total;
        let samples: Vec<Complex64> = (0..n).map(|i| {
            let (a, b) = values[i % values.len()];
            Complex64::new(a, b)
        }).collect();
        let domain = if time { Domain::Time } else { Domain::Frequency };
        let f = ComplexField::new(samples, domain, link.grid).unwrap();
        prop_assert_eq!(decode(&encode(&f)).unwrap(), f);
    }

    #[test]
    fn transform_round_trip(
        values in proptest::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 32),
    ) {
        let link = ToyLink::new(8, 4, 1.0, 0.0).unwrap();
        let samples: Vec<Complex64> = values.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let x = ComplexField::new(samples, Domain::Frequency, link.grid).unwrap();
        let t = fibercap::transform::to_time(&x);
        prop_assert!((t.average_power() - x.average_power()).abs() <= 1e-12 * (1.0 + x.average_power()));
        let back = fibercap::transform::to_frequency(&t);
        prop_assert!(back.distance(&x).unwrap() <= 1e-12 * (1.0 + x.norm()));
    }
}
