//! Parabolic cylinder values against a 40-digit reference table.

use abscat::numerics::pcf::{parabolic_cylinder_d, PcfConfig};
use abscat::Error;
use num_complex::Complex64 as C64;

struct Row {
    a: C64,
    z: C64,
    d: C64,
}

fn table() -> Vec<Row> {
    include_str!("data/pcf_reference.csv")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|s| s.trim().parse().unwrap()).collect();
            Row { a: C64::new(v[0], v[1]), z: C64::new(v[2], v[3]), d: C64::new(v[4], v[5]) }
        })
        .collect()
}

#[test]
fn reference_table() {
    let cfg = PcfConfig::default();
    let rows = table();
    assert_eq!(rows.len(), 1440);
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for r in &rows {
        let in_window = r.a.norm() <= cfg.max_order && r.z.norm() <= cfg.max_arg;
        match parabolic_cylinder_d(r.a, r.z) {
            Ok(v) => {
                assert!(in_window, "a = {}, z = {} evaluated outside the window", r.a, r.z);
                let e = (v - r.d).norm() / r.d.norm().max(1.0);
                assert!(e <= cfg.tol, "a = {}, z = {}: relative error {e:e}", r.a, r.z);
                worst = worst.max(e);
                checked += 1;
            }
            Err(Error::RangeError(_)) => assert!(!in_window, "a = {}, z = {} rejected inside the window", r.a, r.z),
            Err(e) => panic!("a = {}, z = {}: {e}", r.a, r.z),
        }
    }
    assert!(checked > 1200, "only {checked} rows evaluated");
    println!("{checked} rows, worst relative error {worst:e}");
}
