mod common;

use circle_gather::analysis::{take_snapshot, Snapshot, VisiblePoint};
use circle_gather::angle::Angle;
use circle_gather::config::Configuration;
use circle_gather::protocol::{decide, Branch, Direction, Protocol, RobotMemory};
use common::{q, Tag, Q};
use proptest::prelude::*;

const MEMORIES: [RobotMemory; 4] = [
    RobotMemory::Off,
    RobotMemory::MoveHalf,
    RobotMemory::MoveMore,
    RobotMemory::Terminate,
];

fn snapshot_strategy() -> impl Strategy<Value = Snapshot> {
    (24i64..=96)
        .prop_flat_map(|den| {
            let slots: Vec<i64> = (1..den).filter(|&k| 2 * k != den).collect();
            (
                Just(den),
                proptest::sample::subsequence(slots, 1..7),
                any::<u8>(),
                any::<bool>(),
            )
        })
        .prop_map(|(den, nums, mult_mask, self_mult)| {
            let visible = nums
                .iter()
                .enumerate()
                .map(|(i, &k)| VisiblePoint {
                    offset: Angle::new(k, den),
                    is_multiplicity: mult_mask & (1 << i) != 0,
                })
                .collect();
            Snapshot::new(visible, self_mult).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn decisions_follow_the_state_machine(snap in snapshot_strategy(), m in 0usize..4) {
        let memory = MEMORIES[m];
        if let Ok(d) = Protocol::default().decide(&snap, memory) {
            if d.memory == memory && matches!(memory, RobotMemory::MoveHalf | RobotMemory::MoveMore) {
                prop_assert!(d.branch.is_multiplicity_phase(), "{memory:?} kept by {:?}", d.branch);
            } else {
                prop_assert!(memory.is_legal_transition(d.memory), "{memory:?} -> {:?}", d.memory);
            }
            if memory == RobotMemory::Terminate {
                prop_assert_eq!(d.memory, RobotMemory::Terminate);
            }
            // moves stop at or before the first visible robot in their direction
            if d.branch != Branch::JoinOtherMultiplicity {
                match d.command.direction {
                    Direction::Clockwise => prop_assert!(d.command.amount <= snap.first_cw().unwrap().offset),
                    Direction::Counterclockwise => {
                        prop_assert!(d.command.amount <= -&snap.first_ccw().unwrap().offset)
                    }
                    Direction::None => {}
                }
            }
        }
    }

    #[test]
    fn off_followers_stay(nums in proptest::sample::subsequence((0..48i64).collect::<Vec<_>>(), 3..8)) {
        let points: Vec<Q> = nums.iter().map(|&k| q(k, 48)).collect();
        prop_assume!(!common::is_symmetric(&points));
        let config = Configuration::from_fractions(48, &nums).unwrap();
        for r in config.robots() {
            let naive = common::classify(&points, r.pos.as_rational());
            let (next, cmd) = decide(&take_snapshot(&config, &r.id).unwrap(), RobotMemory::Off).unwrap();
            if naive.tag == Tag::Follower {
                prop_assert_eq!(next, RobotMemory::Off);
                prop_assert!(!cmd.is_move());
            }
            if naive.tag == Tag::Sure {
                // a sure leader walks onto its first clockwise neighbour
                let s = common::first_cw(&points, r.pos.as_rational()).unwrap();
                prop_assert_eq!(cmd.direction, Direction::Clockwise);
                prop_assert_eq!(cmd.destination(&r.pos).into_rational(), s);
            }
        }
    }
}
