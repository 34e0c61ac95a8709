//! Property tests for the exact substrate and the walk algebra.

use hmcdist::exact::lp::{solve_lp, LpOutcome, LpProblem, Relation};
use hmcdist::exact::{determinant, format_rat, parse_rat, rat, Basis, Rat};
use hmcdist::model::parse_model;
use hmcdist::monitors::walk_delta;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn prob_rat() -> impl Strategy<Value = Rat> {
    (0i64..=24, 1i64..=24).prop_map(|(n, d)| if n > d { rat(d, d) } else { rat(n, d) })
}

proptest! {
    #[test]
    fn rational_round_trip(r in small_rat()) {
        prop_assert_eq!(parse_rat(&format_rat(&r)).unwrap(), r);
    }

    #[test]
    fn basis_extension_agrees_with_determinant(
        rows in prop::collection::vec(prop::collection::vec(small_rat(), 4), 4)
    ) {
        // try_extend accepts all four rows exactly when the matrix is
        // nonsingular.
        let mut basis = Basis::new(4);
        let mut all_new = true;
        for row in &rows {
            all_new &= basis.try_extend(row).unwrap();
        }
        prop_assert_eq!(all_new, !determinant(&rows).is_zero());
    }

    #[test]
    fn basis_contains_linear_combinations(
        rows in prop::collection::vec(prop::collection::vec(small_rat(), 3), 2),
        c1 in small_rat(),
        c2 in small_rat(),
    ) {
        let mut basis = Basis::new(3);
        for row in &rows {
            basis.try_extend(row).unwrap();
        }
        let combo: Vec<Rat> = (0..3)
            .map(|i| &c1 * &rows[0][i] + &c2 * &rows[1][i])
            .collect();
        prop_assert!(basis.contains(&combo).unwrap());
    }

    #[test]
    fn lp_optimum_is_never_beaten(
        c0 in prob_rat(), c1 in prob_rat(),
        b0 in 1i64..=8, b1 in 1i64..=8,
        samples in prop::collection::vec((prob_rat(), prob_rat()), 20),
    ) {
        // minimize c·x over x ≥ 0, x0 + x1 ≥ b0/8, x0 + 2·x1 ≥ b1/8 —
        // random feasible points never undercut the reported optimum.
        let mut lp = LpProblem::new(2);
        lp.set_objective(vec![c0, c1]);
        lp.add_constraint(vec![rat(1, 1), rat(1, 1)], Relation::Ge, rat(b0, 8));
        lp.add_constraint(vec![rat(1, 1), rat(2, 1)], Relation::Ge, rat(b1, 8));
        let value = match solve_lp(&lp) {
            LpOutcome::Optimal { value, point } => {
                prop_assert!(lp.is_feasible(&point));
                prop_assert_eq!(lp.objective_at(&point), value.clone());
                value
            }
            other => return Err(TestCaseError::fail(format!("unexpected outcome {other:?}"))),
        };
        for (x0, x1) in samples {
            // Shift the sample until it is feasible, then compare.
            let p = vec![&x0 + rat(b0, 8) + rat(b1, 8), x1];
            if lp.is_feasible(&p) {
                prop_assert!(lp.objective_at(&p) >= value);
            }
        }
    }

    #[test]
    fn walk_steps_are_bounded_by_one(p1 in prob_rat(), p2 in prob_rat(), member in any::<bool>()) {
        let d = walk_delta(&p1, &p2, member);
        prop_assert!(d.abs() <= Rat::one());
    }

    #[test]
    fn walk_drift_is_negative_for_separated_probabilities(
        p2 in prob_rat(),
        gap in (1i64..=24).prop_map(|n| rat(n, 24)),
    ) {
        // E[Δx] = p1·Δ(in) + (1−p1)·Δ(out) ≤ −(p1−p2)/2 whenever p1 > p2.
        let p1 = if &p2 + &gap > Rat::one() { Rat::one() } else { &p2 + &gap };
        let drift = &p1 * walk_delta(&p1, &p2, true)
            + (Rat::one() - &p1) * walk_delta(&p1, &p2, false);
        prop_assert!(drift <= -(&p1 - &p2) / rat(2, 1), "p1={p1} p2={p2} drift={drift}");
    }

    #[test]
    fn model_text_round_trip(
        a in 1i64..=7, b in 1i64..=7, c in 1i64..=7,
    ) {
        let total = a + b + c;
        let text = format!(
            "hmc\nalphabet: x y\n\
             state s0 obs=x init\nstate s1 obs=y\nstate s2 obs=x\n\
             edge s0 -> s0 {a}/{total}\nedge s0 -> s1 {b}/{total}\nedge s0 -> s2 {c}/{total}\n\
             edge s1 -> s0 1\nedge s2 -> s1 1\n"
        );
        let model = parse_model(&text).unwrap();
        let h = model.as_hmc().unwrap();
        prop_assert_eq!(h.trans_prob(0, 1), Some(&rat(b, total)));
        let reparsed = parse_model(&h.to_text()).unwrap();
        prop_assert_eq!(reparsed.as_hmc().unwrap(), h);
    }
}
