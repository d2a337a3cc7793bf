mod common;

use gecsynth::rng::{derive_record_rng, RngStream};

fn hex(s: &str) -> u64 {
    u64::from_str_radix(s, 16).unwrap()
}

#[test]
fn streams_match_reference_values() {
    let text = std::fs::read_to_string(common::fixture("rng_golden.txt")).unwrap();
    let mut checked = 0;
    for line in text.lines().filter(|l| !l.starts_with('#')) {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f[0] == "raw" {
            let mut rng = RngStream::from_state(f[1].parse().unwrap());
            for d in &f[3..6] {
                assert_eq!(rng.draw(), hex(d));
            }
        } else {
            let (seed, id, tag): (u64, u64, u64) = (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap());
            let mut a = derive_record_rng(seed, id, tag);
            let first = a.draw();
            assert_eq!(first, hex(f[3]), "{line}");
            assert_eq!(a.draw(), hex(f[4]), "{line}");
            assert_eq!(a.draw(), hex(f[5]), "{line}");

            let mut b = derive_record_rng(seed, id, tag);
            assert_eq!(b.unit(), f[6].parse::<f64>().unwrap(), "{line}");
            assert_eq!(b.below(10), f[7].parse::<usize>().unwrap(), "{line}");
        }
        checked += 1;
    }
    assert_eq!(checked, 11);
}

#[test]
fn unit_stays_below_one() {
    assert!(gecsynth::rng::to_unit(u64::MAX) < 1.0);
    assert_eq!(gecsynth::rng::to_unit(0), 0.0);
}
