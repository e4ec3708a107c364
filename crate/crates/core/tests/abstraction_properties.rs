use aupo_core::aupo::TapeIntervals;
use aupo_core::mcts::RootStat;
use aupo_core::{build_abstraction, AupoParams, RewardTape};
use proptest::prelude::*;

const DEPTH: usize = 3;

/// rows[a] holds the trajectories logged for action a
fn tape_of(rows: &[Vec<Vec<f64>>], scale: f64) -> (RewardTape, Vec<RootStat>) {
    let mut tape = RewardTape::new(rows.len(), DEPTH);
    let mut root = vec![RootStat::default(); rows.len()];
    for (a, trajs) in rows.iter().enumerate() {
        for t in trajs {
            let scaled: Vec<f64> = t.iter().map(|r| r * scale).collect();
            tape.record(a, &scaled, 1.0);
            root[a].visits += 1;
            root[a].return_sum += scaled.iter().sum::<f64>();
        }
    }
    (tape, root)
}

fn trajectories() -> impl Strategy<Value = Vec<Vec<Vec<f64>>>> {
    let traj = prop::collection::vec(-5.0f64..5.0, DEPTH..DEPTH + 3);
    prop::collection::vec(prop::collection::vec(traj, 2..12), 2..6)
}

fn params() -> impl Strategy<Value = AupoParams> {
    (
        0.05f64..0.999,
        1usize..=DEPTH,
        any::<bool>(),
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(|(q, d, rf, sf, full)| {
            let mut p = AupoParams::new(q, d).with_filters(rf, sf);
            p.rf_full_return = full;
            p
        })
}

proptest! {
    #[test]
    fn grouping_is_reflexive_and_symmetric(rows in trajectories(), p in params()) {
        let (tape, root) = tape_of(&rows, 1.0);
        let g = build_abstraction(&tape, &root, &p).unwrap().groups;
        for i in 0..rows.len() {
            prop_assert!(g[i].contains(&i));
            for &j in &g[i] {
                prop_assert!(g[j].contains(&i));
            }
        }
    }

    #[test]
    fn grouping_ignores_power_of_two_reward_scaling(rows in trajectories(), p in params(), k in -6i32..6) {
        let (a, ra) = tape_of(&rows, 1.0);
        let (b, rb) = tape_of(&rows, 2f64.powi(k));
        prop_assert_eq!(build_abstraction(&a, &ra, &p).unwrap().groups, build_abstraction(&b, &rb, &p).unwrap().groups);
    }

    #[test]
    fn full_confidence_groups_everything(rows in trajectories(), d in 1usize..=DEPTH, rf: bool, sf: bool) {
        let (tape, root) = tape_of(&rows, 1.0);
        let p = AupoParams::new(1.0, d).with_filters(rf, sf);
        let g = build_abstraction(&tape, &root, &p).unwrap().groups;
        let all: Vec<usize> = (0..rows.len()).collect();
        prop_assert!(g.iter().all(|x| *x == all));
    }

    #[test]
    fn zero_confidence_groups_only_itself(rows in trajectories(), d in 1usize..=DEPTH) {
        // continuous rewards: distinct actions never share a sample mean
        let (tape, _) = tape_of(&rows, 1.0);
        let iv = TapeIntervals::new(&tape, &AupoParams::new(0.0, d)).unwrap();
        for j in 0..rows.len() {
            for k in 0..rows.len() {
                prop_assert_eq!(iv.grouped(j, k), j == k);
            }
        }
    }

    #[test]
    fn more_confidence_never_splits_groups(rows in trajectories(), p in params(), bump in 0.0f64..0.5) {
        let (tape, root) = tape_of(&rows, 1.0);
        let mut wider = p;
        wider.q = (p.q + bump).min(1.0);
        let narrow = build_abstraction(&tape, &root, &p).unwrap().groups;
        let wide = build_abstraction(&tape, &root, &wider).unwrap().groups;
        for (n, w) in narrow.iter().zip(&wide) {
            prop_assert!(n.iter().all(|j| w.contains(j)));
        }
    }
}
