//! Two-block link diagrams.
//!
//! Every pair of loops crosses once in the left block and once in the right
//! block. At each crossing the loop that wins in that block's tournament is
//! drawn over the other. Two loops whose crossings share the same over strand
//! can be pulled apart (they are *splittable*).

use std::fmt::{self, Write as _};
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::order::{OptionId, OrderError, Tournament};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagramError {
    #[error("left and right blocks are over different option sets")]
    OptionSetMismatch,
    #[error("a loop is always splittable from itself: `{0}`")]
    SameLoop(OptionId),
    #[error("unknown loop `{0}`")]
    UnknownOption(OptionId),
    #[error("invalid render style: {0}")]
    InvalidStyle(String),
    #[error("malformed crossing metadata: {0}")]
    MalformedSvg(String),
}

impl From<OrderError> for DiagramError {
    fn from(e: OrderError) -> Self {
        match e {
            OrderError::UnknownOption(id) => DiagramError::UnknownOption(id),
            other => DiagramError::MalformedSvg(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Block {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

impl Block {
    pub fn tag(self) -> &'static str {
        match self {
            Block::Left => "L",
            Block::Right => "R",
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    loops: Vec<OptionId>,
    left: Tournament,
    right: Tournament,
    // right.options()[right_index[k]] == loops[k]
    right_index: Vec<usize>,
}

impl LinkDiagram {
    /// Loops take the left tournament's option order.
    pub fn new(left: Tournament, right: Tournament) -> Result<Self, DiagramError> {
        if !left.same_options(&right) {
            return Err(DiagramError::OptionSetMismatch);
        }
        let right_index = left
            .options()
            .iter()
            .map(|o| right.index(o))
            .collect::<Result<_, _>>()?;
        Ok(LinkDiagram {
            loops: left.options().to_vec(),
            left,
            right,
            right_index,
        })
    }

    pub fn loops(&self) -> &[OptionId] {
        &self.loops
    }

    pub fn left(&self) -> &Tournament {
        &self.left
    }

    pub fn right(&self) -> &Tournament {
        &self.right
    }

    pub fn len(&self) -> usize {
        self.loops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }

    fn loop_index(&self, id: &OptionId) -> Result<usize, DiagramError> {
        Ok(self.left.index(id)?)
    }

    /// Whether loop `i` is over loop `j` in the given block.
    pub fn over_idx(&self, block: Block, i: usize, j: usize) -> bool {
        match block {
            Block::Left => self.left.beats_idx(i, j),
            Block::Right => self
                .right
                .beats_idx(self.right_index[i], self.right_index[j]),
        }
    }

    pub fn splittable_idx(&self, i: usize, j: usize) -> bool {
        self.over_idx(Block::Left, i, j) == self.over_idx(Block::Right, i, j)
    }

    pub fn splittable(&self, i: &OptionId, j: &OptionId) -> Result<bool, DiagramError> {
        let (a, b) = (self.loop_index(i)?, self.loop_index(j)?);
        if a == b {
            return Err(DiagramError::SameLoop(i.clone()));
        }
        Ok(self.splittable_idx(a, b))
    }

    pub fn splittable_from_all(&self, i: &OptionId) -> Result<bool, DiagramError> {
        let a = self.loop_index(i)?;
        Ok((0..self.len()).all(|b| a == b || self.splittable_idx(a, b)))
    }

    /// True when no loop lies above `s` in the left block while being
    /// splittable from it.
    pub fn pareto_by_diagram(&self, s: &OptionId) -> Result<bool, DiagramError> {
        let b = self.loop_index(s)?;
        Ok((0..self.len())
            .all(|t| t == b || !(self.left.beats_idx(t, b) && self.splittable_idx(t, b))))
    }

    /// Standalone SVG drawing of the diagram as a closed braid.
    pub fn render_svg(&self, style: &RenderStyle) -> String {
        Layout::new(self, style).svg()
    }
}

/// Drawing dimensions in SVG user units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderStyle {
    strand_gap: f64,
    column_width: f64,
    row_height: f64,
    stroke_width: f64,
    margin: f64,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            strand_gap: 8.0,
            column_width: 40.0,
            row_height: 40.0,
            stroke_width: 2.0,
            margin: 20.0,
        }
    }
}

impl RenderStyle {
    pub fn new(
        strand_gap: f64,
        column_width: f64,
        row_height: f64,
        stroke_width: f64,
        margin: f64,
    ) -> Result<Self, DiagramError> {
        let fields = [
            ("strand_gap", strand_gap),
            ("column_width", column_width),
            ("row_height", row_height),
            ("stroke_width", stroke_width),
            ("margin", margin),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(DiagramError::InvalidStyle(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        if strand_gap <= stroke_width {
            return Err(DiagramError::InvalidStyle(format!(
                "strand_gap ({strand_gap}) must exceed stroke_width ({stroke_width})"
            )));
        }
        Ok(RenderStyle {
            strand_gap,
            column_width,
            row_height,
            stroke_width,
            margin,
        })
    }

    pub fn strand_gap(&self) -> f64 {
        self.strand_gap
    }

    pub fn column_width(&self) -> f64 {
        self.column_width
    }

    pub fn row_height(&self) -> f64 {
        self.row_height
    }

    pub fn stroke_width(&self) -> f64 {
        self.stroke_width
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
    "#7f7f7f", "#bcbd22",
];
const FONT_SIZE: f64 = 12.0;

type Point = (f64, f64);

struct CrossingMark {
    block: Block,
    over: usize,
    under: usize,
    at: Point,
}

/// Braid geometry. Each block reverses the lane order with an odd-even
/// transposition network (n rounds, one column per round), so every pair
/// swaps exactly once per block and the right block restores the original
/// lanes. Strand ends are then joined by nested arcs over the top.
struct Layout<'a> {
    d: &'a LinkDiagram,
    style: &'a RenderStyle,
    braid_left: f64,
    braid_right: f64,
    first_lane: f64,
    closure_step: f64,
    width: f64,
    height: f64,
}

impl<'a> Layout<'a> {
    fn new(d: &'a LinkDiagram, style: &'a RenderStyle) -> Self {
        let n = d.len() as f64;
        let closure_step = style.row_height / 2.0;
        let longest = d.loops.iter().map(|l| l.as_str().chars().count()).max().unwrap_or(0);
        let label_width = longest as f64 * FONT_SIZE * 0.6 + FONT_SIZE;
        let braid_left = style.margin + label_width + n * closure_step;
        let braid_right = braid_left + (2.0 * n + 1.0) * style.column_width;
        let first_lane = style.margin + n * closure_step;
        Layout {
            d,
            style,
            braid_left,
            braid_right,
            first_lane,
            closure_step,
            width: braid_right + n * closure_step + style.margin,
            height: first_lane + (n - 1.0) * style.row_height + style.margin,
        }
    }

    fn lane_y(&self, lane: usize) -> f64 {
        self.first_lane + lane as f64 * self.style.row_height
    }

    fn column_x(&self, column: usize) -> f64 {
        self.braid_left + column as f64 * self.style.column_width
    }

    /// Strand polylines (split at under-crossings) and crossing marks.
    fn trace(&self) -> (Vec<Vec<Vec<Point>>>, Vec<CrossingMark>) {
        let n = self.d.len();
        let mut lane_of: Vec<usize> = (0..n).collect();
        let mut loop_at: Vec<usize> = (0..n).collect();
        let mut paths: Vec<Vec<Vec<Point>>> = (0..n)
            .map(|k| vec![vec![(self.braid_left, self.lane_y(k))]])
            .collect();
        let mut marks = Vec::with_capacity(n * n.saturating_sub(1));
        let half_gap = self.style.strand_gap / 2.0;

        // left block: columns 0..n; spacer column n; right block: columns n+1..=2n
        let mut column = 0;
        for block in [Block::Left, Block::Right] {
            for round in 0..n {
                let (x0, x1) = (self.column_x(column), self.column_x(column + 1));
                let mut moved = vec![false; n];
                let mut lane = round % 2;
                while lane + 1 < n {
                    let (a, b) = (loop_at[lane], loop_at[lane + 1]);
                    let (ya, yb) = (self.lane_y(lane), self.lane_y(lane + 1));
                    let at = ((x0 + x1) / 2.0, (ya + yb) / 2.0);
                    let (over, under) = if self.d.over_idx(block, a, b) { (a, b) } else { (b, a) };
                    marks.push(CrossingMark { block, over, under, at });
                    // a moves down from ya to yb, b moves up
                    for (k, from, to) in [(a, ya, yb), (b, yb, ya)] {
                        let path = &mut paths[k];
                        if k == under {
                            let (dx, dy) = (x1 - x0, to - from);
                            let len = dx.hypot(dy);
                            let (ux, uy) = (dx / len * half_gap, dy / len * half_gap);
                            push_point(path, (at.0 - ux, at.1 - uy));
                            path.push(vec![(at.0 + ux, at.1 + uy)]);
                        }
                        push_point(path, (x1, to));
                        moved[k] = true;
                    }
                    loop_at.swap(lane, lane + 1);
                    lane_of[a] = lane + 1;
                    lane_of[b] = lane;
                    lane += 2;
                }
                for k in (0..n).filter(|&k| !moved[k]) {
                    push_point(&mut paths[k], (x1, self.lane_y(lane_of[k])));
                }
                column += 1;
            }
            if block == Block::Left {
                let x1 = self.column_x(column + 1);
                for k in 0..n {
                    push_point(&mut paths[k], (x1, self.lane_y(lane_of[k])));
                }
                column += 1;
            }
        }
        debug_assert!((0..n).all(|k| lane_of[k] == k));

        for (k, path) in paths.iter_mut().enumerate() {
            let y = self.lane_y(k);
            let offset = (k + 1) as f64 * self.closure_step;
            let top = self.first_lane - offset;
            push_point(path, (self.braid_right, y));
            push_point(path, (self.braid_right + offset, y));
            push_point(path, (self.braid_right + offset, top));
            push_point(path, (self.braid_left - offset, top));
            push_point(path, (self.braid_left - offset, y));
            push_point(path, (self.braid_left, y));
            // the trace started at (braid_left, y); merge the closing run into it
            if path.len() > 1 {
                let tail = path.pop().expect("non-empty");
                let head = std::mem::take(&mut path[0]);
                path[0] = tail.into_iter().chain(head.into_iter().skip(1)).collect();
            }
        }
        (paths, marks)
    }

    fn svg(&self) -> String {
        let (paths, marks) = self.trace();
        let mut out = String::new();
        let (w, h) = (num(self.width), num(self.height));
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="yes"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
        );
        let _ = writeln!(out, "<title>link diagram</title>");
        let _ = writeln!(
            out,
            r#"<g class="loops" fill="none" stroke-width="{}" stroke-linecap="butt" stroke-linejoin="round">"#,
            num(self.style.stroke_width)
        );
        for (k, subpaths) in paths.iter().enumerate() {
            let mut d = String::new();
            for sub in subpaths {
                for (p, (x, y)) in sub.iter().enumerate() {
                    if !d.is_empty() {
                        d.push(' ');
                    }
                    let _ = write!(d, "{}{},{}", if p == 0 { 'M' } else { 'L' }, num(*x), num(*y));
                }
            }
            let _ = writeln!(
                out,
                r#"<path class="loop" data-loop="{}" stroke="{}" d="{d}"/>"#,
                escape(self.d.loops[k].as_str()),
                PALETTE[k % PALETTE.len()]
            );
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(out, r#"<g class="crossings">"#);
        for m in &marks {
            let _ = writeln!(
                out,
                r#"<circle class="crossing" data-block="{}" data-over="{}" data-under="{}" cx="{}" cy="{}" r="{}" fill="none" stroke="none"/>"#,
                m.block,
                escape(self.d.loops[m.over].as_str()),
                escape(self.d.loops[m.under].as_str()),
                num(m.at.0),
                num(m.at.1),
                num(self.style.strand_gap / 2.0)
            );
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(
            out,
            r#"<g class="labels" font-family="sans-serif" font-size="{}" dominant-baseline="middle">"#,
            num(FONT_SIZE)
        );
        for (k, id) in self.d.loops.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" fill="{}">{}</text>"#,
                num(self.style.margin),
                num(self.lane_y(k)),
                PALETTE[k % PALETTE.len()],
                escape(id.as_str())
            );
        }
        let _ = writeln!(out, "</g>");
        out.push_str("</svg>\n");
        out
    }
}

/// Appends to the current subpath, folding runs of collinear horizontal points.
fn push_point(path: &mut [Vec<Point>], p: Point) {
    let sub = path.last_mut().expect("at least one subpath");
    if let [.., a, b] = sub.as_slice() {
        if a.1 == b.1 && b.1 == p.1 && a.0 <= b.0 && b.0 <= p.0 {
            *sub.last_mut().expect("non-empty") = p;
            return;
        }
    }
    if sub.last() != Some(&p) {
        sub.push(p);
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> String {
    s.replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&apos;", "'")
        .replace("&amp;", "&")
}

/// One crossing as recorded in the SVG metadata.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub block: Block,
    pub over: OptionId,
    pub under: OptionId,
}

/// Reads back the `data-block`/`data-over`/`data-under` attributes of every
/// crossing element, in document order.
pub fn parse_crossings(svg: &str) -> Result<Vec<Crossing>, DiagramError> {
    static ELEMENT: OnceLock<Regex> = OnceLock::new();
    static ATTR: OnceLock<Regex> = OnceLock::new();
    let element = ELEMENT.get_or_init(|| Regex::new(r#"<[^>]*\bclass="crossing"[^>]*>"#).unwrap());
    let attr = ATTR.get_or_init(|| Regex::new(r#"\bdata-(block|over|under)="([^"]*)""#).unwrap());

    element
        .find_iter(svg)
        .map(|m| {
            let (mut block, mut over, mut under) = (None, None, None);
            for cap in attr.captures_iter(m.as_str()) {
                let value = unescape(&cap[2]);
                match &cap[1] {
                    "block" => block = Some(value),
                    "over" => over = Some(value),
                    _ => under = Some(value),
                }
            }
            let missing = |what| DiagramError::MalformedSvg(format!("crossing without data-{what}"));
            let block = match block.ok_or_else(|| missing("block"))?.as_str() {
                "L" => Block::Left,
                "R" => Block::Right,
                other => return Err(DiagramError::MalformedSvg(format!("unknown block `{other}`"))),
            };
            Ok(Crossing {
                block,
                over: OptionId::new(over.ok_or_else(|| missing("over"))?)?,
                under: OptionId::new(under.ok_or_else(|| missing("under"))?)?,
            })
        })
        .collect()
}
