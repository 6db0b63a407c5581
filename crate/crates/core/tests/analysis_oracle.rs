mod common;

use circle_gather::analysis::{analyze, true_leader, ConfigClass, LeaderTag};
use circle_gather::angle::Angle;
use circle_gather::config::Configuration;
use circle_gather::oracle::brute_force_leader;
use common::{q, Class, Tag, Q};
use proptest::prelude::*;

fn config_of(points: &[Q]) -> Configuration {
    Configuration::from_positions(points.iter().map(|p| Angle::from_rational(p.clone()))).unwrap()
}

fn lib_class(c: ConfigClass) -> Class {
    match c {
        ConfigClass::A => Class::A,
        ConfigClass::BI => Class::BI,
        ConfigClass::BII => Class::BII,
        ConfigClass::C => Class::C,
    }
}

fn lib_tag(t: LeaderTag) -> Tag {
    match t {
        LeaderTag::SureLeader => Tag::Sure,
        LeaderTag::ConfusedLeader => Tag::Confused,
        LeaderTag::Follower => Tag::Follower,
    }
}

/// Library and naive oracle agree on leader, every robot's tag and safe
/// neighbour, and the class.
fn assert_agrees(points: &[Q]) {
    let config = config_of(points);
    let report = analyze(&config).unwrap();
    assert_eq!(
        report.leader.as_rational(),
        &common::leader(points).unwrap()
    );
    for v in &report.robots {
        let naive = common::classify(points, v.pos.as_rational());
        assert_eq!(lib_tag(v.tag), naive.tag, "tag of {} in {points:?}", v.pos);
        assert_eq!(
            v.safe_neighbor, naive.safe,
            "safe neighbour of {} in {points:?}",
            v.pos
        );
    }
    assert_eq!(
        lib_class(report.class),
        common::class(points),
        "class of {points:?}"
    );
}

#[test]
fn worked_example_matches_naive_oracle() {
    let points: Vec<Q> = [0, 2, 9, 14].iter().map(|&n| q(n, 20)).collect();
    assert_agrees(&points);

    let r0 = common::classify(&points, &q(0, 20));
    assert!(r0.leads_c0 && !r0.leads_c1);
    assert_eq!(r0.c1_leader, Some(q(9, 20)));
    assert_eq!(r0.tag, Tag::Confused);
    assert_eq!(r0.safe, Some(true));
    assert_eq!(common::classify(&points, &q(9, 20)).tag, Tag::Follower);
    assert_eq!(common::class(&points), Class::A);
}

#[test]
fn fixtures_have_their_classes() {
    for (file, class) in [
        ("class_a.json", Class::A),
        ("class_bi.json", Class::BI),
        ("class_bii.json", Class::BII),
        ("class_c.json", Class::C),
    ] {
        let points = common::fixture_points(file);
        assert_eq!(common::class(&points), class, "{file}");
        assert_agrees(&points);
    }
}

#[test]
fn confused_fixture_robots() {
    // BII: r4 at 11/12 is the unsafe confused leader
    let bii = common::fixture_points("class_bii.json");
    let v = common::classify(&bii, &q(11, 12));
    assert_eq!((v.tag, v.safe), (Tag::Confused, Some(false)));
    // C: the true leader 3/4 is confused and unsafe
    let c = common::fixture_points("class_c.json");
    assert_eq!(common::leader(&c), Some(q(3, 4)));
    let v = common::classify(&c, &q(3, 4));
    assert_eq!((v.tag, v.safe), (Tag::Confused, Some(false)));
}

fn points_strategy() -> impl Strategy<Value = Vec<Q>> {
    (3usize..=9, 12i64..=120).prop_flat_map(|(n, den)| {
        proptest::sample::subsequence((0..den).collect::<Vec<_>>(), n.min(den as usize))
            .prop_map(move |nums| nums.into_iter().map(|k| q(k, den)).collect::<Vec<Q>>())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn analysis_matches_naive_oracle(points in points_strategy()) {
        prop_assume!(!common::is_symmetric(&points));
        assert_agrees(&points);
    }

    #[test]
    fn leaders_agree_on_every_rotation(points in points_strategy(), shift in 0i64..240) {
        prop_assume!(!common::is_symmetric(&points));
        let config = config_of(&points).rotated(&Angle::new(shift, 240));
        let lead = true_leader(&config).unwrap();
        prop_assert_eq!(&lead, &brute_force_leader(&config).unwrap());
        let rotated: Vec<Q> = config.positions().iter().map(|a| a.as_rational().clone()).collect();
        prop_assert_eq!(lead.as_rational(), &common::leader(&rotated).unwrap());
    }
}
