use emlens::observables::uncertainty_product;
use emlens::units::build_config;

#[test]
#[ignore]
fn probe_c6() {
    for e in [2.0, 4.0, 8.0, 16.0, 32.0, 60.8, 100.0, 120.0] {
        let cfg = build_config(e, 116.0, 1e-3).unwrap();
        match uncertainty_product(&cfg, 4) {
            Ok(r) => println!("E={e}: p/h={:.3} c/h={:.3}", r.product / 1.054571817e-34, r.classical_product / 1.054571817e-34),
            Err(err) => println!("E={e}: ERR {err}"),
        }
    }
}
