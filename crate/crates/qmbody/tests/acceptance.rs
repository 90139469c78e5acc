use qmbody::acceptance::{run, select, Faults};

fn criterion(id: u8) {
    let c = select(Some(&id.to_string())).into_iter().find(|c| c.id == id).expect("criterion exists");
    let v = run(&c, &Faults::default());
    println!("{v}");
    for f in v.failures.iter().skip(1).take(9) {
        println!("     also: {f}");
    }
    assert!(v.pass(), "{v}");
}

#[test]
fn criterion_01_cluster_golden() {
    criterion(1);
}

#[test]
fn criterion_02_bs_identities() {
    criterion(2);
}

#[test]
fn criterion_03_newton_golden() {
    criterion(3);
}

#[test]
fn criterion_04_valuation_axioms() {
    criterion(4);
}

#[test]
fn criterion_05_flag_transfer() {
    criterion(5);
}

#[test]
fn criterion_06_body_golden() {
    criterion(6);
}

#[test]
fn criterion_07_route_equivalence() {
    criterion(7);
}

#[test]
fn criterion_08_area_law() {
    criterion(8);
}

#[test]
fn criterion_09_muhat_table() {
    criterion(9);
}

#[test]
fn criterion_10_mutations() {
    criterion(10);
}

#[test]
fn criterion_11_half_plane() {
    criterion(11);
}

#[test]
fn criterion_12_inner_hull() {
    criterion(12);
}

#[test]
fn weight_fault_is_caught() {
    let faults = Faults { perturb_weight: true };
    for id in [1, 2] {
        let c = select(Some(&id.to_string())).into_iter().find(|c| c.id == id).unwrap();
        assert!(!run(&c, &faults).pass());
    }
    let c = select(Some("3")).into_iter().find(|c| c.id == 3).unwrap();
    assert!(run(&c, &faults).pass());
}
