use clifford_reality::oracle::{
    class_report, enumerate, enumerate_spin, feit_zuckerman_check, kernel_and_spinor_check,
    real_in_group, Caps, GroupKind,
};
use clifford_reality::{CliffordCtx, Field, QSpace};

fn ctx(p: u64, form: &str) -> CliffordCtx {
    let f = Field::prime(p).unwrap();
    CliffordCtx::new(QSpace::from_shorthand(f, form).unwrap()).unwrap()
}

#[test]
fn spin4_f3_semisimple_classes_are_real() {
    let c = ctx(3, "hyperbolic:2");
    let table = enumerate_spin(&c, Caps::default()).unwrap();
    assert_eq!(table.order(), 576);
    let (report, _) = class_report(&c, &table).unwrap();
    assert_eq!(report.sizes_sum(), 576);
    assert!(report.semisimple_all_real());
}

#[test]
fn spin5_f3_semisimple_classes_are_real() {
    let c = ctx(3, "hyperbolic:2+diag:[1]");
    let table = enumerate_spin(&c, Caps::default()).unwrap();
    assert_eq!(table.order(), 51840);
    let (report, _) = class_report(&c, &table).unwrap();
    assert_eq!(report.sizes_sum(), 51840);
    assert!(report.semisimple_all_real());
}

#[test]
fn spin3_f3_report_is_consistent() {
    let c = ctx(3, "hyperbolic:1+diag:[1]");
    let table = enumerate_spin(&c, Caps::default()).unwrap();
    let (report, conj) = class_report(&c, &table).unwrap();
    assert_eq!(report.sizes_sum(), 24);
    // SL₂(F₃) has 7 classes
    assert_eq!(report.class_count, 7);
    for (i, t) in table.elements().iter().enumerate() {
        let exhaustive = real_in_group(&c, t, &table);
        assert_eq!(exhaustive.is_some(), conj.witness(&c, &table, i).is_some());
    }
    assert_eq!(real_in_group(&c, &c.one(), &table), Some(c.one()));
    assert_eq!(real_in_group(&c, &c.one().neg(), &table), Some(c.one()));
}

#[test]
fn spin_elements_are_real_in_gamma() {
    for form in ["hyperbolic:1+diag:[1]", "hyperbolic:2"] {
        let c = ctx(3, form);
        let spin = enumerate_spin(&c, Caps::default()).unwrap();
        let gamma = enumerate(&c, GroupKind::Gamma, Caps::default(), None).unwrap();
        let check = feit_zuckerman_check(&c, &spin, &gamma).unwrap();
        assert!(check.passed(), "{form}: {check:?}");
    }
}

#[test]
fn exact_sequence_over_f3() {
    for form in ["hyperbolic:1+diag:[1]", "hyperbolic:2"] {
        let c = ctx(3, form);
        let table = enumerate(&c, GroupKind::GammaPlus, Caps::default(), None).unwrap();
        assert_eq!(table.order() as u64, table.predicted_order);
        let check = kernel_and_spinor_check(&c, &table).unwrap();
        assert_eq!(check.kernel_size, 2);
        assert!(check.passed(), "{form}: {check:?}");
    }
}
