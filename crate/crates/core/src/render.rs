//! SVG 1.1 output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::geometry::{is_concave, Polygon, Pt, Rect};
use crate::layout::Placement;
use crate::model::{LayoutNode, LayoutTree, Style, WrapId};

pub const DEFAULT_PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Selector {
    Any,
    Name(String),
    Class(String),
}

/// Rules of the form `sel, sel { prop: value; ... }` where a selector is `*`,
/// a wrap name, or `.class` (matched against a wrap's `class` style entry).
/// Later rules win; `/* */` comments are allowed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StyleSheet {
    rules: Vec<(Vec<Selector>, Style)>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("style sheet line {line}: {message}")]
pub struct StyleError {
    pub line: usize,
    pub message: String,
}

impl StyleSheet {
    pub fn parse(src: &str) -> Result<StyleSheet, StyleError> {
        let mut text = String::with_capacity(src.len());
        let mut rest = src;
        while let Some(i) = rest.find("/*") {
            text.push_str(&rest[..i]);
            let Some(j) = rest[i..].find("*/") else {
                return Err(err(src, src.len() - rest.len() + i, "unterminated comment"));
            };
            // keep newlines so line numbers stay right
            text.extend(
                rest[i..i + j + 2]
                    .chars()
                    .map(|c| if c == '\n' { '\n' } else { ' ' }),
            );
            rest = &rest[i + j + 2..];
        }
        text.push_str(rest);
        let mut sheet = StyleSheet::default();
        let mut pos = 0;
        while let Some(open) = text[pos..].find('{') {
            let head = &text[pos..pos + open];
            let Some(close) = text[pos + open..].find('}') else {
                return Err(err(&text, pos + open, "missing '}'"));
            };
            let body = &text[pos + open + 1..pos + open + close];
            let mut sels = Vec::new();
            for s in head.split(',').map(str::trim) {
                sels.push(match s {
                    "" => return Err(err(&text, pos, "empty selector")),
                    "*" => Selector::Any,
                    _ if s.starts_with('.') => Selector::Class(s[1..].to_string()),
                    _ => Selector::Name(s.to_string()),
                });
            }
            let mut decls = Style::new();
            for d in body.split(';').map(str::trim).filter(|d| !d.is_empty()) {
                let Some((k, v)) = d.split_once(':') else {
                    return Err(err(
                        &text,
                        pos + open,
                        &format!("expected 'property: value', got {d:?}"),
                    ));
                };
                decls.insert(k.trim().to_string(), v.trim().to_string());
            }
            sheet.rules.push((sels, decls));
            pos += open + close + 1;
        }
        if !text[pos..].trim().is_empty() {
            return Err(err(&text, pos, "trailing text outside a rule"));
        }
        Ok(sheet)
    }

    /// Properties for a wrap, with `*` rules applied before named ones.
    pub fn resolve(&self, name: &str, own: &Style) -> Style {
        let class = own.get("class").map(String::as_str);
        let mut out = Style::new();
        for pass in [true, false] {
            for (sels, decls) in &self.rules {
                let hit = sels.iter().any(|s| match s {
                    Selector::Any => pass,
                    Selector::Name(n) => !pass && n == name,
                    Selector::Class(c) => !pass && class == Some(c.as_str()),
                });
                if hit {
                    out.extend(decls.iter().map(|(k, v)| (k.clone(), v.clone())));
                }
            }
        }
        out
    }
}

fn err(text: &str, at: usize, message: &str) -> StyleError {
    StyleError {
        line: text[..at.min(text.len())].matches('\n').count() + 1,
        message: message.to_string(),
    }
}

#[derive(Debug, Clone)]
pub struct RenderOptions {
    /// Corner radius for outlines; paint only.
    pub corner_radius: f64,
    pub font_size: f64,
    /// Baseline as a fraction of fragment height.
    pub baseline: f64,
    /// Also draw each fragment's rectangle.
    pub fragment_boxes: bool,
    pub palette: Vec<String>,
    pub sheet: StyleSheet,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            corner_radius: 0.0,
            font_size: 13.0,
            baseline: 0.8,
            fragment_boxes: false,
            palette: DEFAULT_PALETTE.iter().map(|s| s.to_string()).collect(),
            sheet: StyleSheet::default(),
        }
    }
}

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf29ce484222325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x100000001b3)
    })
}

/// Number with at most two decimals and no trailing zeros.
pub fn num(v: f64) -> String {
    let s = format!("{:.2}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    match s {
        "-0" | "" => "0".to_string(),
        _ => s.to_string(),
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

fn loop_path(l: &[Pt], radius: f64, out: &mut String) {
    let n = l.len();
    if radius <= 0.0 {
        for (k, p) in l.iter().enumerate() {
            let _ = write!(
                out,
                "{}{} {}",
                if k == 0 { "M" } else { " L" },
                num(p.x),
                num(p.y)
            );
        }
        out.push_str(" Z");
        return;
    }
    let len = |a: Pt, b: Pt| (a.x - b.x).abs() + (a.y - b.y).abs();
    let toward = |v: Pt, to: Pt, d: f64| {
        let l = len(v, to);
        Pt::new(v.x + (to.x - v.x) / l * d, v.y + (to.y - v.y) / l * d)
    };
    for k in 0..n {
        let (p, v, q) = (l[(k + n - 1) % n], l[k], l[(k + 1) % n]);
        let r = radius.min(len(p, v) / 2.0).min(len(v, q) / 2.0);
        let (a, b) = (toward(v, p, r), toward(v, q, r));
        let sweep = u8::from(!is_concave(p, v, q));
        let _ = write!(
            out,
            "{}{} {} A{} {} 0 0 {} {} {}",
            if k == 0 { "M" } else { " L" },
            num(a.x),
            num(a.y),
            num(r),
            num(r),
            sweep,
            num(b.x),
            num(b.y)
        );
    }
    out.push_str(" Z");
}

/// Outer loops, each followed by the holes it encloses.
fn path_groups(p: &Polygon) -> Vec<Vec<&[Pt]>> {
    p.components()
        .iter()
        .map(|c| {
            // components are traced afresh, so match loops back by value
            c.loops
                .iter()
                .filter_map(|l| p.loops.iter().find(|m| *m == l).map(Vec::as_slice))
                .collect()
        })
        .collect()
}

/// Renders fragments and outlines. Outlines are painted outermost first so
/// children sit on top; fragments come last.
pub fn render_svg(
    tree: &LayoutTree,
    placement: &Placement,
    outlines: &[(WrapId, Polygon)],
    opts: &RenderOptions,
) -> String {
    let frags = tree.fragments();
    let mut extent: Option<Rect> = None;
    let mut grow = |r: Rect| extent = Some(extent.map_or(r, |e| e.union(&r)));
    for (r, f) in placement.rects.iter().zip(frags) {
        if !f.is_spacer {
            grow(*r);
        }
    }
    for (_, p) in outlines {
        if let Some(b) = p.bbox() {
            grow(b);
        }
    }
    let e = extent.unwrap_or_default();
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\" width=\"{}\" height=\"{}\">",
        num(e.x),
        num(e.y),
        num(e.w),
        num(e.h),
        num(e.w),
        num(e.h)
    );

    let depth = tree.wrap_depths();
    let mut first_col = vec![usize::MAX; tree.wraps().len()];
    let ranges = tree.column_ranges();
    for (i, node) in tree.nodes().iter().enumerate() {
        if let LayoutNode::Wrap { wrap, .. } = node {
            first_col[wrap.index()] = ranges[i].start;
        }
    }
    let mut order: Vec<usize> = (0..outlines.len()).collect();
    order.sort_by_key(|&k| {
        let w = outlines[k].0.index();
        (depth[w], first_col[w], w)
    });
    if !order.is_empty() {
        s.push_str("<g class=\"outlines\">\n");
    }
    for k in order {
        let (w, poly) = &outlines[k];
        if poly.is_empty() {
            continue;
        }
        let info = tree.wrap(*w);
        let color =
            &opts.palette[(fnv1a(info.name.as_bytes()) % opts.palette.len() as u64) as usize];
        let mut style: BTreeMap<String, String> = BTreeMap::new();
        style.insert("fill".into(), color.clone());
        style.insert("fill-opacity".into(), "0.15".into());
        style.insert("stroke".into(), color.clone());
        style.insert("stroke-width".into(), "1".into());
        style.extend(opts.sheet.resolve(&info.name, &info.style));
        style.extend(info.style.iter().map(|(k, v)| (k.clone(), v.clone())));
        let radius = style
            .remove("rx")
            .and_then(|v| v.trim_end_matches("px").parse().ok())
            .unwrap_or(opts.corner_radius);
        style.remove("class");
        for group in path_groups(poly) {
            let mut d = String::new();
            for (i, l) in group.iter().enumerate() {
                if i > 0 {
                    d.push(' ');
                }
                loop_path(l, radius, &mut d);
            }
            let _ = write!(
                s,
                "<path data-wrap=\"{}\" d=\"{}\" fill-rule=\"evenodd\"",
                escape(&info.name),
                d
            );
            for (k, v) in &style {
                let _ = write!(s, " {}=\"{}\"", escape(k), escape(v));
            }
            s.push_str("/>\n");
        }
    }
    if !outlines.is_empty() {
        s.push_str("</g>\n");
    }

    let _ = writeln!(
        s,
        "<g class=\"fragments\" font-family=\"monospace\" font-size=\"{}\" xml:space=\"preserve\">",
        num(opts.font_size)
    );
    for (r, f) in placement.rects.iter().zip(frags) {
        if f.is_spacer {
            continue;
        }
        if opts.fragment_boxes {
            let _ = writeln!(
                s,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999\" stroke-width=\"0.5\"/>",
                num(r.x),
                num(r.y),
                num(r.w),
                num(r.h)
            );
        }
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\">{}</text>",
            num(r.x),
            num(r.y + opts.baseline * r.h),
            escape(&f.text)
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::boundary_of_rect_union;
    use crate::model::LayoutTreeBuilder;

    #[test]
    fn empty_layout() {
        let mut b = LayoutTreeBuilder::new();
        let e = b.empty();
        let t = b.build(e).unwrap();
        let p = Placement {
            rects: vec![],
            lines: vec![],
        };
        let svg = render_svg(&t, &p, &[], &RenderOptions::default());
        assert!(svg.contains("viewBox=\"0 0 0 0\""));
        assert!(!svg.contains("<text"));
    }

    #[test]
    fn one_fragment() {
        let mut b = LayoutTreeBuilder::new();
        let a = b.text("x<1", 24.0, 16.0);
        let t = b.build(a).unwrap();
        let p = Placement {
            rects: vec![Rect::new(3.0, 4.0, 24.0, 16.0)],
            lines: vec![0..1],
        };
        let svg = render_svg(&t, &p, &[], &RenderOptions::default());
        assert_eq!(svg.matches("<text").count(), 1);
        assert!(svg.contains("<text x=\"3\" y=\"16.8\">x&lt;1</text>"));
    }

    #[test]
    fn numbers() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(-0.001), "0");
        assert_eq!(num(2.456), "2.46");
        assert_eq!(num(2.5), "2.5");
    }

    fn wrapped() -> LayoutTree {
        let mut b = LayoutTreeBuilder::new();
        let a = b.text("a", 8.0, 16.0);
        let mut style = Style::new();
        style.insert("class".into(), "expr".into());
        let inner = b.wrap_styled("inner", a, 2.0, style);
        let c = b.text("c", 8.0, 16.0);
        let h = b.join_h(inner, c);
        let w = b.wrap("outer", h, 2.0);
        b.build(w).unwrap()
    }

    #[test]
    fn outlines_and_styles() {
        let t = wrapped();
        let p = Placement {
            rects: vec![
                Rect::new(4.0, 4.0, 8.0, 16.0),
                Rect::new(14.0, 4.0, 8.0, 16.0),
            ],
            lines: vec![0..2],
        };
        let ell = boundary_of_rect_union(&[Rect::new(0.0, 0.0, 26.0, 24.0)]);
        let sq = Polygon::from_rect(Rect::new(2.0, 2.0, 12.0, 20.0));
        let outlines = vec![(WrapId(0), sq), (WrapId(1), ell)];
        let sheet =
            StyleSheet::parse("/* c */ * { stroke: black }\n.expr { fill: red; rx: 3 }").unwrap();
        let opts = RenderOptions {
            sheet,
            ..RenderOptions::default()
        };
        let svg = render_svg(&t, &p, &outlines, &opts);
        let outer = svg.find("data-wrap=\"outer\"").unwrap();
        let inner = svg.find("data-wrap=\"inner\"").unwrap();
        assert!(outer < inner);
        assert_eq!(svg.matches("<path").count(), 2);
        assert!(svg.contains("fill=\"red\""));
        assert!(svg.contains(" A3 3 0 0 1 "));
        assert_eq!(svg, render_svg(&t, &p, &outlines, &opts));
    }

    #[test]
    fn sheet_errors() {
        assert_eq!(StyleSheet::parse("a { fill red }").unwrap_err().line, 1);
        assert_eq!(StyleSheet::parse("\n\na { fill: red").unwrap_err().line, 3);
        let s = StyleSheet::parse("a, b { fill: red } * { fill: blue; stroke: x }").unwrap();
        let r = s.resolve("b", &Style::new());
        assert_eq!(r.get("fill").unwrap(), "red");
        assert_eq!(r.get("stroke").unwrap(), "x");
    }
}
