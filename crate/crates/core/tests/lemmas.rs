mod suites;

#[test]
fn coprime_degrees_meet_in_one_root() {
    suites::lemmas::coprime_degrees_meet_in_one_root();
}

#[test]
fn square_degree_gcd_is_the_other_neighbors() {
    suites::lemmas::square_degree_gcd_is_the_other_neighbors();
}

#[test]
fn square_degree_gcd_mod_n() {
    suites::lemmas::square_degree_gcd_mod_n();
}

#[test]
fn gauss_samples_stay_in_coset() {
    suites::lemmas::gauss_samples_stay_in_coset();
}
