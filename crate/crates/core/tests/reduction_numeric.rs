use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hornred::catalog::catalog;
use hornred::reduction::{reduce_def, verify_reduction, VerifyStatus};
use hornred::series::{sample_points, EvalPoint, DEFAULT_ORDER};
use hornred::RationalExpr;

#[test]
fn random_shifts_hold_on_the_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut conclusive, mut total) = (0, 0);
    for def in catalog() {
        let points = sample_points(def, 3, 17).unwrap();
        for _ in 0..10 {
            let shift: Vec<i64> = (0..def.params.len()).map(|_| rng.gen_range(-2..=2)).collect();
            for point in &points {
                let params: Vec<RationalExpr> =
                    def.params.iter().map(|p| RationalExpr::from_rational(&point.params[p])).collect();
                let result = reduce_def(def, &shift, &params).unwrap();
                let z_only = EvalPoint { params: HashMap::new(), z: point.z.clone() };
                let v = verify_reduction(&result, &z_only, DEFAULT_ORDER, 1e-8).unwrap();
                total += 1;
                match v.status {
                    VerifyStatus::Pass => conclusive += 1,
                    VerifyStatus::Inconclusive => {}
                    VerifyStatus::Fail => {
                        panic!("{} {shift:?}: relative error {:e}", def.name, v.relative_error)
                    }
                }
            }
        }
    }
    assert!(conclusive * 100 >= 95 * total, "{conclusive}/{total} conclusive");
}
