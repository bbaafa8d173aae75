mod common;

#[test]
fn weyl_associativity() {
    common::weyl_associativity(1000, false).unwrap();
}

#[test]
fn sharp_order_additivity() {
    common::sharp_additivity(500, false).unwrap();
}

#[test]
fn groebner_shuffle_and_certificates() {
    common::gb_determinism_and_certificates(64, false).unwrap();
}

#[test]
fn parser_round_trip() {
    common::parser_round_trip(500, false).unwrap();
}

#[test]
fn rational_arithmetic() {
    common::rational_fuzz(1000, false).unwrap();
}

#[test]
fn planted_roots() {
    common::planted_roots(256, false).unwrap();
}

#[test]
fn action_compatibility() {
    common::action_compatibility(128, false).unwrap();
}
