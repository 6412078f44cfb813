mod suites;

#[test]
fn kohel_structure() {
    suites::volcano::kohel_structure();
}

#[test]
fn crater_cycle_is_prime_form_orbit() {
    suites::volcano::crater_cycle_is_prime_form_orbit();
}

#[test]
fn ell_set_size_is_class_number() {
    suites::volcano::ell_set_size_is_class_number();
}
