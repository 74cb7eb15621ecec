use hornred::annihilator::extra_pde_polynomial;
use hornred::catalog::catalog;
use hornred::series::{relative_residual, sample_points, series_moments, DEFAULT_ORDER};

#[test]
fn additional_equations_annihilate_the_series() {
    let mut checked = 0;
    for def in catalog().iter().filter(|d| d.rank == 3) {
        let pde = extra_pde_polynomial(def).unwrap();
        for point in sample_points(def, 3, 41).unwrap() {
            let moments = series_moments(def, &point, DEFAULT_ORDER, 2).unwrap();
            assert!(moments.converged());
            let res = relative_residual(&pde, &point, &moments).unwrap();
            assert!(res < 1e-10, "{}: residual {res:e}", def.name);
        }
        checked += 1;
    }
    assert_eq!(checked, 12);
}

#[test]
fn rank_four_functions_have_no_additional_equation() {
    for def in catalog().iter().filter(|d| d.rank == 4) {
        assert!(extra_pde_polynomial(def).is_none(), "{}", def.name);
    }
}
