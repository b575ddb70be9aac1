use num_traits::Zero;
use phasedef::grassmann::{plucker, plucker_residuals, Normalization, OrientedPlane};
use phasedef::lie::build_deformed;
use phasedef::poly::{lie_poisson, Polynomial};
use phasedef::rational::rat;
use phasedef::{DeformationParams, Rational};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

fn params(n: usize) -> impl Strategy<Value = DeformationParams> {
    (rational(), rational(), rational()).prop_map(move |(a, b, c)| DeformationParams::new(n, a, b, c).unwrap())
}

fn small_poly(d: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((0..d as u16, 0..d as u16, -5i64..=5), 1..4).prop_map(move |terms| {
        let mut p = Polynomial::zero(d);
        for (a, b, c) in terms {
            let mut m = vec![a, b];
            m.sort_unstable();
            p.add_term(m, rat(c, 1));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jacobi_holds(p in params(3)) {
        prop_assert!(build_deformed(&p).jacobi_residual().is_zero());
    }

    #[test]
    fn bracket_antisymmetry_and_leibniz(p in params(3), f in small_poly(10), g in small_poly(10), h in small_poly(10)) {
        let alg = build_deformed(&p);
        let fg = lie_poisson(&alg, &f, &g);
        prop_assert_eq!(fg.add(&lie_poisson(&alg, &g, &f)), Polynomial::zero(10));
        prop_assert!(lie_poisson(&alg, &f, &f).is_zero());
        let lhs = lie_poisson(&alg, &f, &g.mul(&h));
        let rhs = lie_poisson(&alg, &f, &g).mul(&h).add(&g.mul(&lie_poisson(&alg, &f, &h)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn plucker_outputs_are_decomposable(u in prop::collection::vec(-3.0f64..3.0, 6), v in prop::collection::vec(-3.0f64..3.0, 6)) {
        if let Ok(pl) = OrientedPlane::new(u, v) {
            let b = plucker(&pl, Normalization::None).unwrap();
            prop_assert!(plucker_residuals(&b) <= 1e-12);
            prop_assert_eq!(plucker(&pl.flipped(), Normalization::None).unwrap(), b.negated());
        }
    }

    #[test]
    fn unimodular_change_fixes_normalized_coordinates(
        u in prop::collection::vec(-2.0f64..2.0, 5),
        v in prop::collection::vec(-2.0f64..2.0, 5),
        a in -2.0f64..2.0,
    ) {
        let Ok(pl) = OrientedPlane::new(u.clone(), v.clone()) else { return Ok(()) };
        let Ok(b) = plucker(&pl, Normalization::ChartU) else { return Ok(()) };
        // (u, v) -> (u + a v, v) has determinant 1
        let u2: Vec<f64> = u.iter().zip(&v).map(|(x, y)| x + a * y).collect();
        let b2 = plucker(&OrientedPlane::new(u2, v).unwrap(), Normalization::ChartU).unwrap();
        let scale = b.coords.iter().fold(1.0f64, |m, c| m.max(c.abs()));
        for (x, y) in b.coords.iter().zip(&b2.coords) {
            prop_assert!((x - y).abs() <= 1e-12 * scale);
        }
    }
}
