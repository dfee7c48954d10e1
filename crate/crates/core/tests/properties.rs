mod common;

use common::props;

#[test]
fn jet_leibniz() {
    props::jet_leibniz().unwrap();
}

#[test]
fn jet_ring_laws() {
    props::jet_ring_laws().unwrap();
}

#[test]
fn mhat_commutes() {
    props::mhat_commutes().unwrap();
}

#[test]
fn symbols_vanish_at_origin() {
    props::symbols_vanish_at_origin().unwrap();
}

#[test]
fn contour_invariance() {
    props::contour_invariance().unwrap();
}

#[test]
fn greeks_match_finite_differences() {
    props::greeks_match_finite_differences().unwrap();
}

#[test]
fn hermite_gram_is_identity() {
    props::hermite_gram_is_identity().unwrap();
}

#[test]
fn polynomial_reconstruction() {
    props::polynomial_reconstruction().unwrap();
}

#[test]
fn conjugate_symmetry() {
    props::conjugate_symmetry().unwrap();
}
