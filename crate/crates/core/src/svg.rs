//! SVG rendering of planar tilings.
//!
//! All coordinates are scaled by the least common denominator of every
//! extent and offset, so the viewBox uses exact integers. The y axis is
//! flipped to put the origin at the bottom-left corner.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::geometry::Tiling;
use crate::rational::{common_denominator, Rational};

const PALETTE: [&str; 8] = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#9c755f"];
const LONG_SIDE_PX: f64 = 480.0;

pub fn render_svg(t: &Tiling) -> Result<String> {
    if t.ndim() != 2 {
        return Err(Error::InvalidInstance(format!("can only render planar tilings, got dimension {}", t.ndim())));
    }
    let all = t
        .box_spec()
        .dims()
        .iter()
        .chain(t.bricks().iter().flat_map(|b| b.dims()))
        .chain(t.placements().iter().flat_map(|p| &p.offset));
    let scale = Rational::from(common_denominator(all));
    let s = |x: &Rational| (x * &scale).numer().clone();

    let (w, h) = (s(t.box_spec().dim(0)), s(t.box_spec().dim(1)));
    let (wf, hf) = (t.box_spec().dim(0).to_f64(), t.box_spec().dim(1).to_f64());
    let px = LONG_SIDE_PX / wf.max(hf);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {w} {h}">"#,
        wf * px,
        hf * px
    )
    .unwrap();
    writeln!(out, r#"  <rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#).unwrap();
    for (i, p) in t.placements().iter().enumerate() {
        let brick = &t.bricks()[p.brick];
        let x = s(&p.offset[0]);
        let bw = s(brick.dim(0));
        let bh = s(brick.dim(1));
        let y = &h - s(&p.offset[1]) - &bh;
        writeln!(
            out,
            r#"  <rect id="p{i}" data-brick="{}" x="{x}" y="{y}" width="{bw}" height="{bh}" fill="{}" stroke="black" stroke-width="1" vector-effect="non-scaling-stroke"/>"#,
            p.brick,
            PALETTE[p.brick % PALETTE.len()]
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}
