//! Brute-force and sampling oracles for the fast paths.

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use pentalab::conjugacy::{canonical, conj_min, power, ClassCensus, Metric};
use pentalab::coxeter::{self, multiply, normal_form, Word};
use pentalab::davis::{hull_window, Ball, Budget};
use pentalab::geometry::{dist_to_line, Geodesic};
use pentalab::growth::wall_stabilizer;
use pentalab::pieces::{
    combinatorial_axis, cone_piece, cubical_piece_window, j_cubical, max_cone_piece, max_piece_census, sample_pairs,
    AxisData, PieceConfig, HULL_THICKNESS,
};
use pentalab::qi::random_line;
use pentalab::quotient::draw;
use pentalab::tiling::{lengths, pentagon};

fn conjugate(u: &[u8], w: &[u8]) -> Vec<u8> {
    multiply(&multiply(u, w), &coxeter::inverse(u))
}

#[test]
fn conj_min_matches_brute_force_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let small = coxeter::ball(3);
    let search = coxeter::ball(5);
    for _ in 0..60 {
        let len = rng.gen_range(1..=4);
        let w = normal_form(&(0..len).map(|_| rng.gen_range(0..5u8)).collect::<Vec<_>>());
        if w.is_empty() {
            continue;
        }
        let u = &small[rng.gen_range(0..small.len())];
        let x = conjugate(u, &w);
        let class = conj_min(&Word::from_raw(x.clone())).unwrap();
        let brute = search.iter().map(|v| conjugate(v, &x).len()).min().unwrap();
        assert_eq!(class.min_len as usize, brute, "word {x:?}");
        assert_eq!(class.rep, conj_min(&Word::from_raw(w.clone())).unwrap().rep);
    }
}

#[test]
fn cube_length_is_stable_word_length() {
    let census = ClassCensus::build(Metric::Cube, 8.0).unwrap();
    for c in &census.classes {
        let big = conj_min(&Word::from_raw(power(c.rep.letters(), 32))).unwrap();
        let excess = big.min_len as i64 - 32 * c.len_cube as i64;
        assert!((0..=2 * c.min_len as i64).contains(&excess), "{} excess {excess}", c.rep);
    }
}

#[test]
fn median_matches_interval_intersection() {
    let ball = Ball::new(6, &Budget::default()).unwrap();
    let small = coxeter::ball(2);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..150 {
        let pick: Vec<Word> = (0..3).map(|_| Word::from_raw(small[rng.gen_range(0..small.len())].clone())).collect();
        let idx: Vec<u32> = pick.iter().map(|w| ball.index_of(w.letters()).unwrap()).collect();
        let between = |z: u32, x: u32, y: u32| ball.cube_dist(x, z) + ball.cube_dist(z, y) == ball.cube_dist(x, y);
        let brute: Vec<u32> = (0..ball.len() as u32)
            .filter(|&z| between(z, idx[0], idx[1]) && between(z, idx[1], idx[2]) && between(z, idx[0], idx[2]))
            .collect();
        assert_eq!(brute.len(), 1);
        let m = ball.median(&pick[0], &pick[1], &pick[2]).unwrap();
        assert_eq!(ball.word(brute[0]), m);
    }
}

#[test]
fn hull_is_the_interval_between_gallery_ends() {
    let ball = Ball::new(6, &Budget::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let w = normal_form(&(0..6).map(|_| rng.gen_range(0..5u8)).collect::<Vec<_>>());
        let gallery: Vec<Word> = (0..=w.len()).map(|k| Word::from_raw(w[..k].to_vec())).collect();
        let hull = hull_window(&gallery).unwrap();
        let (s, t) = (ball.index_of(&[]).unwrap(), ball.index_of(&w).unwrap());
        let gal: Vec<u32> = gallery.iter().map(|g| ball.index_of(g.letters()).unwrap()).collect();
        let mut brute = Vec::new();
        let mut thickness = 0;
        for z in 0..ball.len() as u32 {
            if ball.cube_dist(s, z) + ball.cube_dist(z, t) == ball.cube_dist(s, t) {
                brute.push(ball.word(z));
                thickness = thickness.max(gal.iter().map(|&g| ball.cube_dist(g, z)).min().unwrap());
            }
        }
        brute.sort();
        assert_eq!(hull.chambers, brute, "word {w:?}");
        assert_eq!(hull.thickness as usize, thickness);
    }
}

#[test]
fn primitive_flags_match_powers_of_short_classes() {
    let census = ClassCensus::build(Metric::Cube, 10.0).unwrap();
    let mut powers = HashSet::new();
    for c in census.classes.iter().filter(|c| c.len_cube <= 5) {
        for k in 2..=(10 / c.len_cube) {
            powers.insert(canonical(&power(c.rep.letters(), k)));
        }
    }
    for c in &census.classes {
        let expect = !powers.contains(c.rep.letters());
        assert_eq!(c.primitive, Some(expect), "{}", c.rep);
    }
}

#[test]
fn wall_stabilizer_matches_isometries_fixing_the_wall() {
    let e0 = pentagon().polars[0];
    let mut brute = BTreeSet::new();
    coxeter::walk_tree(6, |w, m| {
        let img = m.apply(&e0);
        let same = (0..3).all(|i| (img[i] - e0[i]).abs() < 1e-8) || (0..3).all(|i| (img[i] + e0[i]).abs() < 1e-8);
        if same {
            brute.insert(w.to_vec());
        }
        true
    });
    let listed: BTreeSet<Vec<u8>> = wall_stabilizer(6).into_iter().collect();
    assert_eq!(listed, brute);
}

fn dist(g: &Geodesic, other: &Geodesic, t: f64) -> f64 {
    dist_to_line(&g.point(t), &other.polar)
}

// Edge of the near set found by scanning from `inside` towards `outside`.
fn scan_edge(g: &Geodesic, other: &Geodesic, j: f64, inside: f64, outside: f64, step: f64) -> f64 {
    let n = ((outside - inside).abs() / step).ceil() as usize;
    let dir = (outside - inside).signum();
    let mut last = inside;
    for k in 0..=n {
        let t = inside + dir * step * k as f64;
        if dist(g, other, t) > j {
            return last;
        }
        last = t;
    }
    last
}

#[test]
fn near_interval_agrees_with_dense_sampling() {
    let j = 2.0 * lengths().delta;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut found = 0;
    for _ in 0..1000 {
        let a = random_line(&mut rng, 3.0);
        let b = random_line(&mut rng, 3.0);
        // coarse scan locates the near set
        let coarse: Vec<f64> =
            (0..=3000).map(|k| -15.0 + 0.01 * k as f64).filter(|&t| dist(&a, &b, t) <= j).collect();
        let piece = cone_piece(&a, &b, j, 1e-12).unwrap();
        match piece {
            None => assert!(coarse.is_empty(), "missed a piece"),
            Some(p) => {
                if coarse.is_empty() {
                    assert!(p.diameter() < 0.02);
                    continue;
                }
                found += 1;
                let lo = scan_edge(&a, &b, j, coarse[0], coarse[0] - 0.02, 1e-4);
                let hi = scan_edge(&a, &b, j, *coarse.last().unwrap(), coarse.last().unwrap() + 0.02, 1e-4);
                assert!((lo - p.t0).abs() < 1e-3 && (hi - p.t1).abs() < 1e-3, "{lo} {hi} vs {p:?}");
                // maximality: endpoints sit at distance j
                assert!((dist(&a, &b, p.t0) - j).abs() < 1e-3 && (dist(&a, &b, p.t1) - j).abs() < 1e-3);
                // symmetry and companion bounds
                let q = cone_piece(&b, &a, j, 1e-12).unwrap().unwrap();
                assert!((p.diameter() - q.diameter()).abs() <= 2.0 * j + 1e-9);
                let comp = (p.companion.1 - p.companion.0).abs();
                assert!((comp - p.diameter()).abs() <= 2.0 * j + 1e-9);
            }
        }
    }
    assert!(found > 100, "only {found} pieces sampled");
}

#[test]
fn cubical_and_hyperbolic_pieces_are_comparable() {
    let l = lengths();
    let census = ClassCensus::build(Metric::Cube, 5.0).unwrap();
    let cfg = PieceConfig::default();
    let reach = cfg.j + l.circumradius + 1e-9;
    let data: Vec<AxisData> = census.classes.iter().map(|c| AxisData::new(c, reach).unwrap()).collect();
    let j_transfer = l.d * j_cubical() as f64 + 2.0 * l.b;
    let mut checked = 0;
    for (i, g) in census.classes.iter().enumerate() {
        for (k, g2) in census.classes.iter().enumerate().skip(i) {
            let cube = cubical_piece_window(g, g2, j_cubical(), 2, 2).unwrap() as f64;
            let hyp = max_cone_piece(&data[i], &data[k], &cfg).unwrap().map_or(0.0, |r| r.diameter);
            if !hyp.is_finite() {
                continue;
            }
            assert!(hyp <= l.d * cube + 8.0 * l.c + 1e-9, "{} {}: {hyp} vs {cube}", g.rep, g2.rep);
            if g.rep == g2.rep {
                continue;
            }
            let loose = max_piece_census(g, g2, j_transfer, 2).unwrap().map_or(0.0, |r| r.diameter);
            assert!(l.c * cube - 8.0 * l.c <= loose + 1e-9, "{} {}: {loose} vs {cube}", g.rep, g2.rep);
            checked += 1;
        }
    }
    assert!(checked > 1000);
}

#[test]
fn axis_hulls_have_thickness_two() {
    let census = ClassCensus::build(Metric::Cube, 8.0).unwrap();
    let worst = census
        .classes
        .iter()
        .map(|c| hull_window(&combinatorial_axis(&c.rep, 2)).unwrap().thickness)
        .max()
        .unwrap();
    assert_eq!(worst, HULL_THICKNESS);
}

#[test]
fn draws_are_uniform() {
    let n = 12;
    let mut counts = vec![0u64; n];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..6000 {
        for i in draw(n, 5, &mut rng) {
            counts[i] += 1;
        }
    }
    let total: u64 = counts.iter().sum();
    let expect = total as f64 / n as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expect).powi(2) / expect).sum();
    let p = 1.0 - ChiSquared::new((n - 1) as f64).unwrap().cdf(chi2);
    assert!(p > 1e-3, "chi-square {chi2}, p {p}");
}

#[test]
fn piece_sampling_ignores_worker_count() {
    let census = ClassCensus::build(Metric::Hyp, 8.0).unwrap();
    let cfg = PieceConfig::default();
    let run = |workers| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().unwrap();
        pool.install(|| sample_pairs(&census, 300, 9, &cfg).unwrap())
    };
    let one: Vec<(usize, usize, f64)> = run(1).iter().map(|p| (p.pair.0, p.pair.1, p.diameter())).collect();
    let four: Vec<(usize, usize, f64)> = run(4).iter().map(|p| (p.pair.0, p.pair.1, p.diameter())).collect();
    assert_eq!(one.len(), 300);
    assert!(one.iter().zip(&four).all(|(x, y)| x.0 == y.0 && x.1 == y.1 && x.2.to_bits() == y.2.to_bits()));
}
