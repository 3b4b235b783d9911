use jetlie_core::catalog::Catalog;
use jetlie_core::{verify_table, DEFAULT_SEED};

#[test]
fn catalog_loads() {
    let cat = Catalog::get().unwrap();
    assert!(cat.algebras.contains_key("ecga"));
}

#[test]
fn realized_tables_hold() {
    let cat = Catalog::get().unwrap();
    for key in ["cga2", "gal0_2", "gal0_2_dil", "cga3", "ecga", "ea1", "ea2", "ea3", "fluid_ecga", "shallow_water_mai", "ecga_wave", "xinf"] {
        let alg = cat.algebra(key).unwrap();
        let rep = verify_table(&alg.fields, &alg.table, DEFAULT_SEED).unwrap();
        let bad: Vec<_> = rep.failures().map(|p| format!("[{}, {}]", p.a, p.b)).collect();
        assert!(bad.is_empty(), "{}: {:?}", key, bad);
    }
}
