mod suites;

use suites::classgroup::*;
use tgii_core::arith::Integer;
use tgii_core::classgroup::{class_number, class_number_formula, Discriminant};

#[test]
fn group_laws_on_random_triples() {
    group_laws();
}

#[test]
fn reduction_is_canonical() {
    reduction_lands_on_one_representative();
}

#[test]
fn discrete_log_roundtrip() {
    discrete_log_recomposes();
}

#[test]
fn translation_permutes_reduced_forms() {
    reduced_forms_are_distinct_classes();
}

#[test]
fn class_numbers_with_conductor() {
    class_number_formula_matches_enumeration();
}

#[test]
fn inverse_by_order() {
    inverse_is_power_order_minus_one();
}

#[test]
fn pinned_class_numbers() {
    assert_eq!(class_number(&Discriminant::fundamental(-251).unwrap()).unwrap(), 7);
    let d = Discriminant::new(Integer::from(-251), vec![3]).unwrap();
    assert_eq!(class_number(&d).unwrap(), 14);
    assert_eq!(class_number_formula(&d).unwrap(), 14);
}
