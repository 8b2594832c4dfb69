mod common;

use common::suites;

const CASES: usize = 100;

#[test]
fn adjoint_is_an_involution() {
    suites::adjoint_involution(11, CASES).unwrap();
}

#[test]
fn mul_part_identity() {
    suites::mul_part_identity(12, CASES).unwrap();
}

#[test]
fn direct_sum_self_adjoint_iff_parts_are() {
    suites::direct_sum_iff(13, CASES).unwrap();
}

#[test]
fn component_relation_clauses() {
    suites::component_clauses(14, CASES).unwrap();
}

#[test]
fn reconstruction_iff_compressed_part_self_adjoint() {
    suites::reduction_iff(15, CASES).unwrap();
}
