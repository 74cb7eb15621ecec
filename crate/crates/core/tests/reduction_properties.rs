use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hornred::annihilator::derived;
use hornred::catalog::{catalog, HornDefinition};
use hornred::reduction::reduce_def;
use hornred::{RationalExpr, ThetaOperator};

fn syms(def: &HornDefinition) -> Vec<RationalExpr> {
    def.params.iter().map(|p| RationalExpr::var(*p)).collect()
}

fn unit(def: &HornDefinition, i: usize, sign: i64) -> Vec<i64> {
    let mut s = vec![0; def.params.len()];
    s[i] = sign;
    s
}

#[test]
fn zero_shift_is_the_identity_everywhere() {
    for def in catalog() {
        let r = reduce_def(def, &vec![0; def.params.len()], &syms(def)).unwrap();
        assert!(r.operator.is_identity(), "{}", def.name);
        assert_eq!(r.new_params, syms(def));
    }
}

#[test]
fn unit_steps_round_trip() {
    for def in catalog() {
        let rules = &derived(def).unwrap().rules;
        for i in 0..def.params.len() {
            for sign in [1, -1] {
                let there = reduce_def(def, &unit(def, i, sign), &syms(def)).unwrap();
                let back = reduce_def(def, &unit(def, i, -sign), &there.new_params).unwrap();
                assert_eq!(back.new_params, syms(def));
                let product = rules.compose(&there.operator, &back.operator);
                assert!(
                    product.is_identity(),
                    "{} param {} sign {sign}: {product}",
                    def.name,
                    def.params[i]
                );
            }
        }
    }
}

/// Reduces by `first` and then by `second` from the intermediate context.
fn chained(def: &HornDefinition, first: &[i64], second: &[i64]) -> ThetaOperator {
    let a = reduce_def(def, first, &syms(def)).unwrap();
    let b = reduce_def(def, second, &a.new_params).unwrap();
    let end: Vec<RationalExpr> = b.new_params.clone();
    let bindings = def.params.iter().cloned().zip(end).collect();
    let rules = derived(def).unwrap().rules.substitute(&bindings).unwrap();
    rules.compose(&a.operator, &b.operator)
}

#[test]
fn two_parameter_shifts_are_path_independent() {
    for def in catalog() {
        let n = def.params.len();
        for i in 0..n {
            for j in i + 1..n {
                for (si, sj) in [(1, 1), (1, -1), (-1, 1)] {
                    let mut joint = vec![0; n];
                    joint[i] = si;
                    joint[j] = sj;
                    let direct = reduce_def(def, &joint, &syms(def)).unwrap().operator;
                    let reversed = chained(def, &unit(def, j, sj), &unit(def, i, si));
                    assert_eq!(
                        direct, reversed,
                        "{}: shift {joint:?} in the two orders",
                        def.name
                    );
                }
            }
        }
    }
}

#[test]
fn rank_three_functions_never_need_the_mixed_derivative() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for def in catalog().iter().filter(|d| d.rank == 3) {
        for _ in 0..10 {
            let shift: Vec<i64> = (0..def.params.len()).map(|_| rng.gen_range(-2..=2)).collect();
            let r = reduce_def(def, &shift, &syms(def)).unwrap();
            assert!(r.q12().is_zero(), "{} {shift:?}", def.name);
        }
    }
}
