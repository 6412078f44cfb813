//! Imaginary quadratic class groups via reduced binary quadratic forms.

pub mod forms;
pub mod group;

pub use forms::{
    class_number, class_number_formula, compose, identity, inverse, pow, pow_i64, prime_form, reduce,
    reduced_forms, Discriminant, IdealClass, QuadForm,
};
pub use group::{
    discrete_log, evaluate, relation_lattice, sample_short_exponents, ClassGroup, GenerationSet,
    RelationLattice,
};
