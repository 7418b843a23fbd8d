use proptest::prelude::*;

use pentalab::conjugacy::conj_min;
use pentalab::coxeter::{inverse, isometry_of, multiply, normal_form, Word};
use pentalab::davis::cube_dist_words;
use pentalab::geometry::{dist, dist_to_line, dot, reflection, Geodesic};
use pentalab::pieces::near_interval;
use pentalab::tiling::{lengths, pentagon};

fn word(max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..5, 0..max)
}

fn close(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3], tol: f64) -> bool {
    (0..3).all(|i| (0..3).all(|j| (a[i][j] - b[i][j]).abs() <= tol * (1.0 + a[i][j].abs())))
}

fn frame() -> impl Strategy<Value = Geodesic> {
    (0.0..2.5f64, 0.0..std::f64::consts::TAU, 0.0..std::f64::consts::TAU).prop_map(|(rho, phi, psi)| {
        let base = [rho.sinh() * phi.cos(), rho.sinh() * phi.sin(), rho.cosh()];
        let h = [psi.cos(), psi.sin(), 0.0];
        let lam = dot(&h, &base);
        let d = [h[0] + lam * base[0], h[1] + lam * base[1], lam * base[2]];
        let n = dot(&d, &d).sqrt();
        Geodesic::from_frame(base, [d[0] / n, d[1] / n, d[2] / n])
    })
}

proptest! {
    #[test]
    fn normal_form_is_idempotent(w in word(14)) {
        let n = normal_form(&w);
        prop_assert_eq!(normal_form(&n), n.clone());
        prop_assert!(n.len() <= w.len());
        prop_assert_eq!(n.len() % 2, w.len() % 2);
    }

    #[test]
    fn isometries_form_a_homomorphism(u in word(8), v in word(8)) {
        let lhs = isometry_of(&multiply(&normal_form(&u), &normal_form(&v)));
        let rhs = isometry_of(&u).compose(&isometry_of(&v));
        prop_assert!(close(&lhs.m, &rhs.m, 1e-8));
    }

    #[test]
    fn inverse_cancels(w in word(12)) {
        let n = normal_form(&w);
        prop_assert!(multiply(&n, &inverse(&n)).is_empty());
    }

    #[test]
    fn conjugacy_invariants_are_conjugation_invariant(w in word(8), u in word(5)) {
        let n = normal_form(&w);
        prop_assume!(!n.is_empty());
        let u = normal_form(&u);
        let x = multiply(&multiply(&u, &n), &inverse(&u));
        let a = conj_min(&Word::from_raw(n)).unwrap();
        let b = conj_min(&Word::from_raw(x)).unwrap();
        prop_assert_eq!(&a.rep, &b.rep);
        prop_assert_eq!(a.len_cube, b.len_cube);
        prop_assert!((a.len_hyp - b.len_hyp).abs() < 1e-9 * (1.0 + a.len_hyp));
    }

    #[test]
    fn cube_distance_is_a_metric(x in word(8), y in word(8), z in word(8)) {
        let (x, y, z) = (normal_form(&x), normal_form(&y), normal_form(&z));
        let (xy, yz, xz) = (cube_dist_words(&x, &y), cube_dist_words(&y, &z), cube_dist_words(&x, &z));
        prop_assert!(xz <= xy + yz);
        prop_assert_eq!(xy, cube_dist_words(&y, &x));
        prop_assert_eq!(cube_dist_words(&x, &x), 0);
    }

    #[test]
    fn hyperbolic_distance_is_below_the_cubical_bound(x in word(8), y in word(8)) {
        let l = lengths();
        let (x, y) = (normal_form(&x), normal_form(&y));
        let dh = dist(&isometry_of(&x).center(), &isometry_of(&y).center());
        let dx = cube_dist_words(&x, &y) as f64;
        prop_assert!(dh <= l.d * dx + 2.0 * l.b + 1e-9);
        prop_assert!(l.c * dx - 4.0 * l.c <= dh + 1e-9);
    }

    #[test]
    fn reflections_are_involutions(i in 0usize..5) {
        let r = reflection(&pentagon().polars[i]);
        let id = r.compose(&r);
        let e = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        prop_assert!(close(&id.m, &e, 1e-12));
        prop_assert!((r.det() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn near_interval_endpoints_sit_at_distance_j(a in frame(), b in frame(), j in 0.2..3.0f64) {
        if let Ok(Some((t0, t1, _))) = near_interval(&a, &b.polar, j, 1e-12) {
            prop_assert!(t0 <= t1);
            for t in [t0, t1] {
                prop_assert!((dist_to_line(&a.point(t), &b.polar) - j).abs() < 1e-6);
            }
            let mid = 0.5 * (t0 + t1);
            prop_assert!(dist_to_line(&a.point(mid), &b.polar) <= j + 1e-9);
        }
    }
}
