//! Static SVG rendering of a finished trace: a grid of frames, one circle
//! per sampled event time.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::analysis::true_leader;
use crate::angle::Angle;
use crate::config::{Configuration, Robot, RobotId};
use crate::protocol::RobotMemory;
use crate::sim::{Event, SimTime, Trace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderSpec {
    /// Draw every `stride`-th distinct event time; the first and last are
    /// always drawn.
    pub stride: usize,
    /// Width of the whole image in pixels.
    pub size: u32,
    pub show_labels: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            stride: 1,
            size: 960,
            show_labels: true,
        }
    }
}

impl RenderSpec {
    /// A stride that keeps the frame count near `frames`.
    pub fn auto_stride(trace: &Trace, frames: usize) -> usize {
        let times = trace.event_times().len();
        times.div_ceil(frames.max(1)).max(1)
    }
}

fn state_color(m: RobotMemory) -> &'static str {
    match m {
        RobotMemory::Off => "#4a6fa5",
        RobotMemory::MoveHalf => "#e08a1e",
        RobotMemory::MoveMore => "#c0392b",
        RobotMemory::Terminate => "#333333",
    }
}

struct Frame {
    t: SimTime,
    positions: Vec<(RobotId, Angle)>,
    memory: BTreeMap<RobotId, RobotMemory>,
    moving: BTreeMap<RobotId, bool>,
}

fn frames(trace: &Trace, stride: usize) -> Vec<Frame> {
    let mut times = vec![SimTime::zero()];
    let all = trace.event_times();
    times.extend(all.iter().step_by(stride.max(1)).cloned());
    if let Some(last) = all.last() {
        times.push(last.clone());
    }
    times.dedup();

    let mut out = Vec::with_capacity(times.len());
    let mut memory: BTreeMap<RobotId, RobotMemory> = trace
        .robot_ids()
        .into_iter()
        .map(|id| (id, RobotMemory::Off))
        .collect();
    let mut moving: BTreeMap<RobotId, bool> = memory.keys().map(|id| (id.clone(), false)).collect();
    let mut cursor = trace.records.iter().peekable();
    for t in times {
        while let Some(r) = cursor.next_if(|r| r.t <= t) {
            match &r.event {
                Event::Decide { decision, .. } => {
                    memory.insert(r.robot.clone(), decision.memory);
                }
                Event::MoveStart { .. } => {
                    moving.insert(r.robot.clone(), true);
                }
                Event::MoveEnd { .. } => {
                    moving.insert(r.robot.clone(), false);
                }
                _ => {}
            }
        }
        let positions = trace.positions_at(&t);
        out.push(Frame {
            t,
            positions,
            memory: memory.clone(),
            moving: moving.clone(),
        });
    }
    out
}

fn point(cx: f64, cy: f64, r: f64, a: &Angle) -> (f64, f64) {
    let th = a.to_f64() * TAU;
    (cx + r * th.sin(), cy - r * th.cos())
}

/// Render `trace` as an SVG document. Pure: the same trace and spec always
/// give the same bytes.
pub fn render_svg(trace: &Trace, spec: &RenderSpec) -> String {
    let frames = frames(trace, spec.stride);
    let cols = (frames.len() as f64).sqrt().ceil().max(1.0) as usize;
    let rows = frames.len().div_ceil(cols);
    let cell = f64::from(spec.size.max(64)) / cols as f64;
    let width = cell * cols as f64;
    let height = cell * rows as f64 + 28.0;
    let radius = cell * 0.36;
    let dot = (cell * 0.035).max(2.0);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="monospace">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let s = &trace.summary;
    let _ = writeln!(
        svg,
        r#"<text x="8" y="18" font-size="13">{} robots, policy {}, outcome {:?}, {} events, max multiplicities {}</text>"#,
        s.initial.len(),
        s.policy,
        s.outcome,
        s.event_count,
        s.max_simultaneous_multiplicities
    );
    for (i, f) in frames.iter().enumerate() {
        let cx = cell * (i % cols) as f64 + cell / 2.0;
        let cy = 28.0 + cell * (i / cols) as f64 + cell / 2.0;
        let _ = writeln!(svg, r##"<g id="frame-{i}">"##);
        let _ = writeln!(
            svg,
            r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="{radius:.2}" fill="none" stroke="#bbbbbb"/>"##
        );
        let mut groups: BTreeMap<&Angle, Vec<&RobotId>> = BTreeMap::new();
        for (id, pos) in &f.positions {
            groups.entry(pos).or_default().push(id);
        }
        let leader = leader_position(&f.positions);
        for (pos, ids) in &groups {
            let (x, y) = point(cx, cy, radius, pos);
            if ids.len() >= 2 {
                let _ = writeln!(
                    svg,
                    r##"<circle cx="{x:.2}" cy="{y:.2}" r="{:.2}" fill="none" stroke="#27ae60" stroke-width="2"/>"##,
                    dot * 2.2
                );
            }
            if leader.as_ref() == Some(*pos) {
                let _ = writeln!(
                    svg,
                    r##"<circle cx="{x:.2}" cy="{y:.2}" r="{:.2}" fill="none" stroke="#8e44ad" stroke-width="1.5"/>"##,
                    dot * 1.7
                );
            }
            let id = ids[0];
            let color = state_color(f.memory[id]);
            let fill = if f.moving[id] { "white" } else { color };
            let _ = writeln!(
                svg,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="{dot:.2}" fill="{fill}" stroke="{color}" stroke-width="1.5"/>"#
            );
            if spec.show_labels {
                let (lx, ly) = point(cx, cy, radius + dot * 3.5, pos);
                let names: Vec<&str> = ids.iter().map(|i| i.as_str()).collect();
                let _ = writeln!(
                    svg,
                    r#"<text x="{lx:.2}" y="{ly:.2}" font-size="{:.1}" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
                    (cell * 0.05).max(7.0),
                    escape(&names.join(","))
                );
            }
        }
        let _ = writeln!(
            svg,
            r#"<text x="{cx:.2}" y="{:.2}" font-size="{:.1}" text-anchor="middle">t={}</text>"#,
            cy + radius + cell * 0.1,
            (cell * 0.055).max(8.0),
            f.t
        );
        let _ = writeln!(svg, "</g>");
    }
    svg.push_str("</svg>\n");
    svg
}

fn leader_position(positions: &[(RobotId, Angle)]) -> Option<Angle> {
    let robots = positions
        .iter()
        .map(|(id, pos)| Robot {
            id: id.clone(),
            pos: pos.clone(),
        })
        .collect();
    let config = Configuration::new(robots).ok()?;
    if config.has_multiplicity() {
        return None;
    }
    true_leader(&config).ok()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
