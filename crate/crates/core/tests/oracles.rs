mod common;

use common::{
    box_simplex_vertices, conjunction_bounds_brute, expected_utility, lp_by_grid, lp_by_vertices,
    random_feasible_cells, random_feasible_point, Cell,
};
use credal::acceptance::{accept_threshold, apply_claims, Claim, RefEntry, Statement};
use credal::belief::{dempster_combine, discount, MassFunction};
use credal::eu::eu_bounds;
use credal::sequence::{Assignment, ParameterizedCredal, ThetaBinding, WeightedMember};
use credal::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn pi(lo: f64, hi: f64) -> ProbInterval {
    ProbInterval::new(lo, hi).unwrap()
}

fn to_act(name: &str, cells: &[Cell]) -> Act {
    let outcomes = cells
        .iter()
        .enumerate()
        .map(|(i, c)| Outcome::new(format!("e{i}"), c.utility, pi(c.lo, c.hi.min(1.0))))
        .collect();
    Act::new(name, outcomes).unwrap()
}

fn cell(utility: f64, lo: f64, hi: f64) -> Cell {
    Cell { utility, lo, hi }
}

#[test]
fn frechet_matches_brute_force() {
    let cases = [((90, 100), (95, 100)), ((100, 100), (30, 70)), ((20, 40), (30, 50)), ((55, 80), (60, 65))];
    for (a, b) in cases {
        let (lo, hi) = conjunction_bounds_brute(a, b);
        let p = pi(a.0 as f64 / 100.0, a.1 as f64 / 100.0);
        let q = pi(b.0 as f64 / 100.0, b.1 as f64 / 100.0);
        let r = frechet_and(p, q);
        assert!((r.lo() - lo as f64 / 100.0).abs() < 1e-12, "{a:?} {b:?}: {r:?} vs {lo}");
        assert!((r.hi() - hi as f64 / 100.0).abs() < 1e-12, "{a:?} {b:?}: {r:?} vs {hi}");
    }
    // the frozen values
    assert_eq!(conjunction_bounds_brute((90, 100), (95, 100)), (85, 100));
    assert_eq!(conjunction_bounds_brute((20, 40), (30, 50)), (0, 40));
}

#[test]
fn three_outcome_lp_matches_enumeration_and_grid() {
    let cells = [cell(0.0, 0.1, 0.5), cell(5.0, 0.2, 0.6), cell(10.0, 0.1, 0.4)];
    let v = lp_by_vertices(&cells);
    let g = lp_by_grid(&cells, 200);
    assert!((v.0 - 3.0).abs() < 1e-12 && (v.1 - 6.5).abs() < 1e-12);
    assert!((g.0 - 3.0).abs() < 1e-9 && (g.1 - 6.5).abs() < 1e-9);
    let i = eu_interval(&to_act("a", &cells)).unwrap();
    assert!((i.lo() - 3.0).abs() < TOL && (i.hi() - 6.5).abs() < TOL);
}

#[test]
fn soft_berry_box_matches_grid() {
    let cells = [cell(10.0, 0.84, 0.88), cell(-30.0, 0.12, 0.16)];
    let g = lp_by_grid(&cells, 1000);
    assert!((g.0 - 3.6).abs() < 1e-9 && (g.1 - 5.2).abs() < 1e-9);
    let i = eu_interval(&to_act("a1", &cells)).unwrap();
    assert!((i.lo() - 3.6).abs() < TOL && (i.hi() - 5.2).abs() < TOL);
}

#[test]
fn regret_matches_corner_enumeration() {
    let a1 = [cell(10.0, 0.33, 1.0), cell(-30.0, 0.0, 0.67)];
    let a2 = [cell(-10.0, 0.0, 0.55), cell(0.0, 0.45, 1.0)];
    let v1 = box_simplex_vertices(&a1);
    let v2 = box_simplex_vertices(&a2);
    let mut r1: f64 = 0.0;
    let mut r2: f64 = 0.0;
    for p in &v1 {
        for q in &v2 {
            let (u1, u2) = (expected_utility(&a1, p), expected_utility(&a2, q));
            r1 = r1.max(u2 - u1);
            r2 = r2.max(u1 - u2);
        }
    }
    assert!((r1 - 16.8).abs() < 1e-9 && (r2 - 15.5).abs() < 1e-9);

    let problem = DecisionProblem::new("p", vec![to_act("a1", &a1), to_act("a2", &a2)]).unwrap();
    let eu = eu_all(&problem).unwrap();
    let lib = ordering::regrets(&eu);
    assert!((lib[0].1 - r1).abs() < 1e-9 && (lib[1].1 - r2).abs() < 1e-9);
    assert_eq!(min_regret(&eu).unwrap(), "a2");
}

#[test]
fn clopper_pearson_closed_forms() {
    for n in [1u64, 4, 10, 37, 200] {
        for conf in [0.75, 0.9, 0.95, 0.99] {
            let half = (1.0 - conf) / 2.0;
            let zero = clopper_pearson(SampleCount::new(0, n).unwrap(), conf).unwrap();
            assert_eq!(zero.lo(), 0.0);
            assert!((zero.hi() - common::cp_all_failures_upper(n, half)).abs() < 1e-8);
            let all = clopper_pearson(SampleCount::new(n, n).unwrap(), conf).unwrap();
            assert_eq!(all.hi(), 1.0);
            assert!((all.lo() - common::cp_all_successes_lower(n, half)).abs() < 1e-8);
        }
    }
}

fn arb_cells() -> impl Strategy<Value = Vec<Cell>> {
    (2usize..=5, any::<u64>()).prop_map(|(n, seed)| random_feasible_cells(&mut ChaCha8Rng::seed_from_u64(seed), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn greedy_equals_vertex_lp(cells in arb_cells(), seed in any::<u64>()) {
        let act = to_act("a", &cells);
        let i = eu_interval(&act).unwrap();
        let (lo, hi) = lp_by_vertices(&cells);
        prop_assert!((i.lo() - lo).abs() < TOL && (i.hi() - hi).abs() < TOL);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let p = random_feasible_point(&mut rng, &cells);
            let v = expected_utility(&cells, &p);
            prop_assert!(i.lo() - TOL <= v && v <= i.hi() + TOL);
        }
        let b = eu_bounds(&act).unwrap();
        prop_assert!((b.argmin.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!((b.argmax.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn widening_never_shrinks(cells in arb_cells(), k in 0usize..5, grow in 0.0f64..0.5) {
        let narrow = eu_interval(&to_act("a", &cells)).unwrap();
        let mut wide = cells.clone();
        let k = k % wide.len();
        wide[k].lo = (wide[k].lo - grow).max(0.0);
        wide[k].hi = (wide[k].hi + grow).min(1.0);
        let w = eu_interval(&to_act("a", &wide)).unwrap();
        prop_assert!(w.lo() <= narrow.lo() + TOL && narrow.hi() <= w.hi() + TOL);
    }

    #[test]
    fn translation_equivariance(cells in arb_cells(), c in -100.0f64..100.0) {
        let base = eu_interval(&to_act("a", &cells)).unwrap();
        let shifted: Vec<Cell> = cells.iter().map(|x| Cell { utility: x.utility + c, ..*x }).collect();
        let s = eu_interval(&to_act("a", &shifted)).unwrap();
        prop_assert!((s.lo() - base.lo() - c).abs() < 1e-9 && (s.hi() - base.hi() - c).abs() < 1e-9);
    }

    #[test]
    fn point_boxes_collapse(cells in arb_cells(), seed in any::<u64>()) {
        let p = random_feasible_point(&mut ChaCha8Rng::seed_from_u64(seed), &cells);
        let point: Vec<Cell> = cells.iter().zip(&p).map(|(c, &x)| Cell { lo: x, hi: x, ..*c }).collect();
        let i = eu_interval(&to_act("a", &point)).unwrap();
        let dot = expected_utility(&cells, &p);
        prop_assert!(i.width() < 1e-9);
        prop_assert!((i.lo() - dot).abs() < 1e-9);
    }

    #[test]
    fn direct_inference_ignores_listing_order(perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let refs = acceptance::ReferenceClassTable::new(
            vec![
                RefEntry { class: "berries".into(), event: "G".into(), prob: pi(0.3, 0.8) },
                RefEntry { class: "soft berries".into(), event: "G".into(), prob: pi(0.84, 0.88) },
                RefEntry { class: "plants".into(), event: "G".into(), prob: pi(0.0, 0.9) },
            ],
            vec![("soft berries".into(), "berries".into()), ("berries".into(), "plants".into())],
        ).unwrap();
        let names = ["berries", "soft berries", "plants"];
        let classes: Vec<String> = perm.iter().map(|&i| names[i].to_string()).collect();
        prop_assert_eq!(direct_inference("b", "G", &classes, &refs).unwrap(), pi(0.84, 0.88));
    }

    #[test]
    fn threshold_bodies_are_nested(probs in prop::collection::vec(0.0f64..=1.0, 0..12), mut levels in prop::collection::btree_set(1u32..1000, 1..6)) {
        let statements: Vec<Statement> = probs
            .iter()
            .enumerate()
            .map(|(i, &p)| Statement::new(format!("s{i}"), Claim::condition(format!("c{i}")), p).unwrap())
            .collect();
        let levels: Vec<f64> = std::mem::take(&mut levels).into_iter().map(|x| x as f64 / 1000.0).collect();
        let bodies = accept_threshold(&statements, &levels).unwrap();
        for w in bodies.windows(2) {
            prop_assert!(w[0].statements.iter().all(|s| w[1].contains(&s.id)));
        }
    }

    #[test]
    fn tightening_claims_shrink_boxes(a in 0.0f64..0.5, b in 0.5f64..1.0, s in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let v = ProbInterval::VACUOUS;
        let problem = DecisionProblem::new("p", vec![
            Act::new("x", vec![Outcome::new("G", 1.0, v), Outcome::new("~G", -1.0, v)]).unwrap(),
        ]).unwrap();
        let refs = acceptance::ReferenceClassTable::default();
        let outer = vec![Claim::event("G", pi(a, b))];
        let mut inner = outer.clone();
        let x = a + s * (b - a);
        inner.push(Claim::event("G", pi(x, x + t * (b - x))));
        let p0 = apply_claims(&outer, &problem, &refs).unwrap();
        let p1 = apply_claims(&inner, &problem, &refs).unwrap();
        for (o0, o1) in p0.acts()[0].outcomes().iter().zip(p1.acts()[0].outcomes()) {
            prop_assert!(o0.prob.contains_interval(&o1.prob));
        }
    }

    #[test]
    fn dempster_commutes_on_larger_frames(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let frame: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let m1 = random_mass(&mut rng, frame.clone());
        let m2 = random_mass(&mut rng, frame.clone());
        if let (Ok(ab), Ok(ba)) = (dempster_combine(&m1, &m2), dempster_combine(&m2, &m1)) {
            for s in 1..(1u32 << n) {
                prop_assert!((ab.mass(s) - ba.mass(s)).abs() < 1e-9);
            }
        }
        let d = discount(&m1, 0.3).unwrap();
        prop_assert!((d.focal_sets().map(|(_, m)| m).sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert_eq!(discount(&m1, 0.0).unwrap(), m1);
    }
}

fn random_mass(rng: &mut impl rand::Rng, frame: Vec<String>) -> MassFunction {
    let full = (1u32 << frame.len()) - 1;
    let k = rng.gen_range(1..=4);
    let sets: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=full)).collect();
    let w: Vec<f64> = sets.iter().map(|_| rng.gen::<f64>() + 0.01).collect();
    let total: f64 = w.iter().sum();
    let focal: Vec<(u32, f64)> = sets.into_iter().zip(w.iter().map(|x| x / total)).collect();
    MassFunction::from_masks(frame, &focal).unwrap()
}

fn berries_not_hungry() -> DecisionProblem {
    let v = ProbInterval::VACUOUS;
    DecisionProblem::new(
        "berries",
        vec![
            Act::new("a1", vec![Outcome::new("G", 10.0, v), Outcome::new("~G", -30.0, v)]).unwrap(),
            Act::new(
                "a2",
                vec![Outcome::new("H", -10.0, ProbInterval::IMPOSSIBLE), Outcome::new("~H", 0.0, ProbInterval::CERTAIN)],
            )
            .unwrap(),
        ],
    )
    .unwrap()
}

#[test]
fn starr_measures_sum_to_one() {
    for (lo, hi, res) in [(0.3, 0.8, 1000), (0.0, 1.0, 137), (0.74, 0.76, 100)] {
        let p = ParameterizedCredal {
            theta_lo: lo,
            theta_hi: hi,
            resolution: res,
            bindings: vec![
                ThetaBinding { act: "a1".into(), outcome: "G".into(), intercept: 0.0, slope: 1.0 },
                ThetaBinding { act: "a1".into(), outcome: "~G".into(), intercept: 1.0, slope: -1.0 },
            ],
        };
        let r = starr(&berries_not_hungry(), &p).unwrap();
        let total: f64 = r.measures.values().sum();
        assert!((total - 1.0).abs() <= 1.0 / res as f64);
        // closed form: a1 optimal iff theta > .75
        let exact = ((hi - 0.75f64).max(0.0).min(hi - lo)) / (hi - lo);
        assert!((r.measures["a1"] - exact).abs() <= 1.0 / res as f64 + 1e-12);
    }
}

#[test]
fn higher_order_point_mass_matches_degenerate_interval() {
    for g in [0.0, 0.25, 0.6, 0.75, 1.0] {
        let mut assignment = Assignment::new();
        assignment.insert("a1".into(), [("G".to_string(), g), ("~G".to_string(), 1.0 - g)].into_iter().collect());
        assignment.insert("a2".into(), [("H".to_string(), 0.0), ("~H".to_string(), 1.0)].into_iter().collect());
        let w = WeightedCredal::new(vec![WeightedMember { assignment, weight: 1.0 }]).unwrap();
        let ho = higher_order_eu(&berries_not_hungry(), &w).unwrap();

        let claims = vec![Claim::event("G", pi(g, g))];
        let resolved = apply_claims(&claims, &berries_not_hungry(), &Default::default()).unwrap();
        let eu = eu_all(&resolved).unwrap();
        assert!(eu["a1"].width() < 1e-12);
        assert!((eu["a1"].lo() - ho["a1"]).abs() < 1e-12);
        assert_eq!(eu["a2"].lo(), ho["a2"]);
    }
}
