//! Naive reference implementations, written straight from the definitions
//! and sharing no code with the library. Positions are plain rationals in
//! turns.

#![allow(dead_code)]

use std::path::PathBuf;

use num_rational::BigRational;

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(num.into(), den.into())
}

pub fn half() -> Q {
    q(1, 2)
}

/// Reduce into [0, 1).
pub fn wrap(x: Q) -> Q {
    let f = x.floor();
    x - f
}

pub fn cw(from: &Q, to: &Q) -> Q {
    wrap(to - from)
}

/// Gaps walking clockwise from `r` through every other point and back.
pub fn sequence(points: &[Q], r: &Q) -> Vec<Q> {
    let mut others: Vec<Q> = points.iter().filter(|p| *p != r).cloned().collect();
    others.sort_by_key(|p| cw(r, p));
    let mut gaps = Vec::with_capacity(points.len());
    let mut prev = r.clone();
    for p in others {
        gaps.push(cw(&prev, &p));
        prev = p;
    }
    gaps.push(cw(&prev, r));
    gaps
}

/// `None` when the minimum sequence is shared, i.e. the set is symmetric.
pub fn leader(points: &[Q]) -> Option<Q> {
    let mut seqs: Vec<(Vec<Q>, Q)> = points
        .iter()
        .map(|p| (sequence(points, p), p.clone()))
        .collect();
    seqs.sort();
    match seqs.as_slice() {
        [(a, p), (b, _), ..] if a != b => Some(p.clone()),
        [(_, p)] => Some(p.clone()),
        _ => None,
    }
}

pub fn is_symmetric(points: &[Q]) -> bool {
    leader(points).is_none()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tag {
    Sure,
    Confused,
    Follower,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub pos: Q,
    pub tag: Tag,
    pub leads_c0: bool,
    pub leads_c1: bool,
    pub c0_possible: bool,
    pub c1_possible: bool,
    /// Leader of `C1` in absolute coordinates.
    pub c1_leader: Option<Q>,
    pub safe: Option<bool>,
}

/// Everything `r` can see: all other points except its antipode.
pub fn visible(points: &[Q], r: &Q) -> Vec<Q> {
    let anti = wrap(r + half());
    points
        .iter()
        .filter(|p| *p != r && **p != anti)
        .cloned()
        .collect()
}

/// Classify `r` from its own view, both hypotheses built by hand.
pub fn classify(points: &[Q], r: &Q) -> Verdict {
    let mut c0 = visible(points, r);
    c0.push(r.clone());
    let mut c1 = c0.clone();
    c1.push(wrap(r + half()));
    let l0 = leader(&c0);
    let l1 = leader(&c1);
    let leads_c0 = l0.as_ref() == Some(r);
    let leads_c1 = l1.as_ref() == Some(r);
    let (p0, p1) = (l0.is_some(), l1.is_some());
    let tag = match (p0, p1) {
        (true, true) if leads_c0 && leads_c1 => Tag::Sure,
        (true, true) if leads_c0 != leads_c1 => Tag::Confused,
        (true, false) if leads_c0 => Tag::Sure,
        (false, true) if leads_c1 => Tag::Sure,
        _ => Tag::Follower,
    };
    let safe = (tag == Tag::Confused).then(|| {
        let s = first_cw(&c0, r).expect("confused leader sees a neighbour");
        let lp = l1.clone().expect("C1 has a leader");
        let lp_next = first_cw(&c1, &lp).expect("C1 has at least two points");
        wrap(&s + half()) != lp_next
    });
    Verdict {
        pos: r.clone(),
        tag,
        leads_c0,
        leads_c1,
        c0_possible: p0,
        c1_possible: p1,
        c1_leader: l1,
        safe,
    }
}

pub fn first_cw(points: &[Q], r: &Q) -> Option<Q> {
    points
        .iter()
        .filter(|p| *p != r)
        .min_by_key(|p| cw(r, p))
        .cloned()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[allow(clippy::upper_case_acronyms)]
pub enum Class {
    A,
    BI,
    BII,
    C,
}

pub fn class(points: &[Q]) -> Class {
    let truth = leader(points).expect("asymmetric");
    let expected: Vec<Verdict> = points
        .iter()
        .map(|p| classify(points, p))
        .filter(|v| v.tag != Tag::Follower)
        .collect();
    let tl = expected
        .iter()
        .find(|v| v.pos == truth)
        .expect("true leader is expected");
    match expected.len() {
        1 if tl.tag == Tag::Sure || tl.safe == Some(true) => Class::A,
        1 => Class::C,
        2 => {
            let other = expected.iter().find(|v| v.pos != truth).unwrap();
            if other.safe == Some(true) {
                Class::BI
            } else {
                Class::BII
            }
        }
        k => panic!("{k} expected leaders"),
    }
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn fixture_points(name: &str) -> Vec<Q> {
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap();
    v["robots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| parse_q(r["pos"].as_str().unwrap()))
        .collect()
}

pub fn parse_q(s: &str) -> Q {
    match s.split_once('/') {
        Some((a, b)) => q(a.trim().parse().unwrap(), b.trim().parse().unwrap()),
        None => q(s.trim().parse().unwrap(), 1),
    }
}

/// `p/q` text in lowest terms.
pub fn show(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}
