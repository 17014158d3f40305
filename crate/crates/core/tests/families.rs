use additive_basis::analytics::{block_family, h_n, primorial_family};
use additive_basis::dessentialize::{
    construct_prescribed, construct_prescribed_chain, dessentialize_elementary, dessentialize_general,
    primitive_set, DEFAULT_PRESCRIBED_CAP,
};
use additive_basis::essentials::essential_elements;
use additive_basis::order::order;
use additive_basis::progression::{essential_subsets, raison_profile};
use additive_basis::{parse_set_expr, Error};

const CAP: u64 = 1_000_000;

#[test]
fn primorial_orders_match_h_n() {
    for n in 1..=5 {
        let a = primorial_family(n, CAP).unwrap();
        assert_eq!(order(&a).unwrap().order as u64, h_n(n).unwrap());
        assert_eq!(essential_elements(&a).unwrap().count(), n);
    }
    assert!(matches!(primorial_family(8, CAP), Err(Error::ModulusCap { .. })));
}

#[test]
fn primorial_dessentializes_in_one_step() {
    let a = primorial_family(3, CAP).unwrap();
    assert_eq!(primitive_set(&a).unwrap(), parse_set_expr("1N").unwrap());
    let trace = dessentialize_elementary(&a).unwrap();
    assert_eq!((trace.delta, trace.counts()), (1, vec![3, 0]));
}

#[test]
fn block_family_has_no_essential_elements() {
    let x = block_family(2, CAP).unwrap();
    assert_eq!(essential_elements(&x).unwrap().count(), 0);
    let parts = essential_subsets(&x).unwrap();
    assert_eq!(parts.len(), 2);
    let p = raison_profile(&x).unwrap();
    assert_eq!((p.ratio, p.radical_length), (6, 2));
}

#[test]
fn prescribed_chain_steps_back_through_primitive_sets() {
    let chain = construct_prescribed_chain(&[2, 1, 3], DEFAULT_PRESCRIBED_CAP).unwrap();
    for w in chain.windows(2) {
        assert_eq!(primitive_set(&w[1]).unwrap(), w[0]);
    }
    let a = construct_prescribed(&[2, 1, 3], DEFAULT_PRESCRIBED_CAP).unwrap();
    assert_eq!(dessentialize_elementary(&a).unwrap().counts(), vec![2, 1, 3, 0]);
    assert!(construct_prescribed(&[3, 3, 3, 3, 3], DEFAULT_PRESCRIBED_CAP).is_err());
}

#[test]
fn general_dessentialization_reaches_ratio_one() {
    let x = block_family(3, CAP).unwrap();
    let trace = dessentialize_general(&x).unwrap();
    let last = trace.steps.last().unwrap();
    assert_eq!(last.essential_count, 0);
    assert_eq!(last.ratio, 1);
}
