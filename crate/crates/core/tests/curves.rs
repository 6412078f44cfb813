mod suites;

#[test]
fn point_group_law() {
    suites::curves::point_group_law();
}

#[test]
fn velu_targets_are_modular_roots() {
    suites::curves::velu_targets_are_modular_roots();
}

#[test]
fn kernel_mod_n_is_crt_of_kernels() {
    suites::curves::kernel_mod_n_is_crt_of_kernels();
}
