//! Chart emitters: TSV (round-trippable), JSON and SVG with Part A/B panels.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext_classical::BigradedChart;
use crate::ext_equivariant::{Class, Coef, Op, Part, TriChart};
use crate::f2core::F2Matrix;
use crate::grading::{Cone, ExtDegree, Window};

const TRI_HEADER: &str = "kind\ts\tf\tw\tcone\tpart\tname\tgen\trho\ttau\tv0\tv1";
const BI_HEADER: &str = "kind\ts\tf\tindex\tname";

fn class_key(c: &Class) -> (ExtDegree, Cone, &str, Coef) {
    (c.degree, c.coef.cone, c.gen.as_str(), c.coef)
}

/// The same chart with classes in canonical order (by degree, cone, generator, coefficient).
pub fn canonical(c: &TriChart) -> TriChart {
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by(|&a, &b| class_key(&c.classes[a]).cmp(&class_key(&c.classes[b])));
    let mut out = TriChart::new(c.window);
    let mut map = vec![0; c.len()];
    for &i in &order {
        let k = &c.classes[i];
        map[i] = out
            .add_named(k.name.clone(), &k.gen, k.coef, k.degree)
            .expect("class lies in its own window");
    }
    for (op, t) in &c.actions {
        for (s, ts) in t {
            out.set_action(*op, map[*s], ts.iter().map(|x| map[*x]).collect());
        }
    }
    out
}

fn window_line(w: &Window) -> String {
    format!(
        "# window\t{}\t{}\t{}\t{}\t{}",
        w.stem_min, w.stem_max, w.filtration_max, w.weight_min, w.weight_max
    )
}

/// One row per class, then one row per action edge, in canonical order.
pub fn emit_tsv(c: &TriChart) -> String {
    let c = canonical(c);
    let mut out = String::new();
    writeln!(out, "# trichart").unwrap();
    writeln!(out, "{}", window_line(&c.window)).unwrap();
    writeln!(out, "{TRI_HEADER}").unwrap();
    for k in &c.classes {
        let d = k.degree;
        let g = k.coef;
        writeln!(
            out,
            "class\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            d.stem,
            d.filtration,
            d.weight,
            g.cone,
            k.part(),
            k.name,
            k.gen,
            g.rho,
            g.tau,
            g.v0,
            g.v1
        )
        .unwrap();
    }
    for (op, s, t) in c.edges() {
        writeln!(out, "edge\t{op}\t{}\t{}", c.classes[s].name, c.classes[t].name).unwrap();
    }
    out
}

fn perr(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {}: {msg}", line + 1))
}

fn num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse().map_err(|_| perr(line, format!("bad number {s:?}")))
}

fn parse_window(line: usize, fields: &[&str]) -> Result<Window> {
    if fields.len() != 6 {
        return Err(perr(line, "window needs five bounds"));
    }
    let w = Window {
        stem_min: num(line, fields[1])?,
        stem_max: num(line, fields[2])?,
        filtration_max: num(line, fields[3])?,
        weight_min: num(line, fields[4])?,
        weight_max: num(line, fields[5])?,
    };
    if !w.is_nonempty() {
        return Err(perr(line, "empty window"));
    }
    Ok(w)
}

/// Inverse of `emit_tsv`: `parse_tsv(&emit_tsv(c)) == canonical(c)`.
pub fn parse_tsv(text: &str) -> Result<TriChart> {
    let mut chart: Option<TriChart> = None;
    let mut names: HashMap<String, usize> = HashMap::new();
    for (ln, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split('\t').collect();
        match fields[0] {
            "# trichart" | "kind" | "" => {}
            "# window" => chart = Some(TriChart::new(parse_window(ln, &fields)?)),
            "class" => {
                let c = chart.as_mut().ok_or_else(|| perr(ln, "class before window"))?;
                if fields.len() != 12 {
                    return Err(perr(ln, "class row needs 12 fields"));
                }
                let cone = match fields[4] {
                    "pos" => Cone::Positive,
                    "neg" => Cone::Negative,
                    x => return Err(perr(ln, format!("bad cone {x:?}"))),
                };
                let coef = Coef {
                    cone,
                    rho: num(ln, fields[8])?,
                    tau: num(ln, fields[9])?,
                    v0: num(ln, fields[10])?,
                    v1: num(ln, fields[11])?,
                };
                let d = ExtDegree::new(num(ln, fields[1])?, num(ln, fields[2])?, num(ln, fields[3])?);
                if c.find(fields[7], &coef).is_some() || names.contains_key(fields[6]) {
                    return Err(perr(ln, format!("duplicate class {}", fields[6])));
                }
                let i = c
                    .add_named(fields[6].to_string(), fields[7], coef, d)
                    .ok_or_else(|| perr(ln, "class outside the window"))?;
                names.insert(fields[6].to_string(), i);
            }
            "edge" => {
                let c = chart.as_mut().ok_or_else(|| perr(ln, "edge before window"))?;
                if fields.len() != 4 {
                    return Err(perr(ln, "edge row needs 4 fields"));
                }
                let op = Op::parse(fields[1]).ok_or_else(|| perr(ln, format!("bad operator {:?}", fields[1])))?;
                let look = |n: &str| names.get(n).copied().ok_or_else(|| perr(ln, format!("unknown class {n:?}")));
                let (s, t) = (look(fields[2])?, look(fields[3])?);
                let mut v = c.act(op, s).to_vec();
                v.push(t);
                c.set_action(op, s, v);
            }
            x => return Err(perr(ln, format!("unknown row kind {x:?}"))),
        }
    }
    chart.ok_or_else(|| Error::Parse("missing window line".into()))
}

/// Canonical JSON form of a chart.
pub fn emit_json(c: &TriChart) -> String {
    serde_json::to_string_pretty(&canonical(c)).expect("chart serializes")
}

/// Inverse of `emit_json`.
pub fn parse_json(text: &str) -> Result<TriChart> {
    let mut c: TriChart = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    c.reindex();
    Ok(c)
}

/// One row per class (with its index within the bidegree), then one row per nonzero
/// matrix entry of `v0` and `v1`.
pub fn emit_bigraded_tsv(c: &BigradedChart) -> String {
    let mut out = String::new();
    writeln!(out, "# bigraded").unwrap();
    writeln!(out, "{BI_HEADER}").unwrap();
    for (&(s, f), &n) in &c.dims {
        let names = c.names.get(&(s, f));
        for i in 0..n {
            let name = names.and_then(|v| v.get(i)).map(String::as_str).unwrap_or("");
            writeln!(out, "class\t{s}\t{f}\t{i}\t{name}").unwrap();
        }
    }
    for (op, table) in [("v0", &c.v0), ("v1", &c.v1)] {
        for (&(s, f), m) in table {
            for j in 0..m.cols() {
                for r in 0..m.rows() {
                    if m.get(r, j) {
                        writeln!(out, "edge\t{op}\t{s}\t{f}\t{j}\t{r}").unwrap();
                    }
                }
            }
        }
    }
    out
}

/// Inverse of `emit_bigraded_tsv`.
pub fn parse_bigraded_tsv(text: &str) -> Result<BigradedChart> {
    let mut c = BigradedChart::default();
    let mut edges = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split('\t').collect();
        match fields[0] {
            "# bigraded" | "kind" | "" => {}
            "class" if fields.len() == 5 => {
                let key = (num(ln, fields[1])?, num(ln, fields[2])?);
                let i: usize = num(ln, fields[3])?;
                let d = c.dims.entry(key).or_insert(0);
                if i != *d {
                    return Err(perr(ln, "class indices must be consecutive"));
                }
                *d += 1;
                c.names.entry(key).or_default().push(fields[4].to_string());
            }
            "edge" if fields.len() == 6 => {
                let op = fields[1];
                if op != "v0" && op != "v1" {
                    return Err(perr(ln, format!("bad operator {op:?}")));
                }
                let (s, f): (i32, i32) = (num(ln, fields[2])?, num(ln, fields[3])?);
                edges.push((ln, op == "v1", s, f, num::<usize>(ln, fields[4])?, num::<usize>(ln, fields[5])?));
            }
            x => return Err(perr(ln, format!("malformed row {x:?}"))),
        }
    }
    for (ln, v1, s, f, j, r) in edges {
        let t = if v1 { (s + 2, f + 1) } else { (s, f + 1) };
        let (rows, cols) = (c.dim(t.0, t.1), c.dim(s, f));
        if j >= cols || r >= rows {
            return Err(perr(ln, "edge index out of range"));
        }
        let table = if v1 { &mut c.v1 } else { &mut c.v0 };
        table.entry((s, f)).or_insert_with(|| F2Matrix::zero(rows, cols)).set(r, j, true);
    }
    let names_empty = c.names.values().all(|v| v.iter().all(String::is_empty));
    if names_empty {
        c.names.clear();
    }
    Ok(c)
}

/// Drawing style.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Style {
    pub dot_radius: f64,
    pub tower_arrow: bool,
    pub divisibility_arrow: bool,
}

impl Default for Style {
    fn default() -> Self {
        Style {
            dot_radius: 3.0,
            tower_arrow: true,
            divisibility_arrow: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderSpec {
    pub window: Window,
    pub split_parts: bool,
    pub show_weights: bool,
    pub style: Style,
}

impl RenderSpec {
    pub fn new(window: Window) -> Self {
        RenderSpec {
            window,
            split_parts: true,
            show_weights: false,
            style: Style::default(),
        }
    }
}

const UNIT: f64 = 36.0;
const MARGIN: f64 = 40.0;

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn panel_of(c: &Class, split: bool) -> &'static str {
    match (split, c.part()) {
        (false, _) => "all",
        (true, Part::A) => "A",
        (true, Part::B) => "B",
    }
}

/// Maximal `ρ`-chains: `(classes from start to end, open at the start, open at the end)`.
fn rho_chains(c: &TriChart) -> Vec<(Vec<usize>, bool, bool)> {
    let mut has_pre = vec![false; c.len()];
    for (op, _, t) in c.edges() {
        if op == Op::Rho {
            has_pre[t] = true;
        }
    }
    let mut out = Vec::new();
    for i in 0..c.len() {
        if has_pre[i] {
            continue;
        }
        let open_start = !c.window.contains(c.classes[i].degree - Op::Rho.degree());
        let mut chain = vec![i];
        let mut cur = i;
        while let [next] = c.act(Op::Rho, cur) {
            cur = *next;
            chain.push(cur);
        }
        let open_end = c.act(Op::Rho, cur).is_empty() && !c.window.contains(c.classes[cur].degree + Op::Rho.degree());
        out.push((chain, open_start, open_end));
    }
    out
}

/// Renders the classes of `c` inside `spec.window`.
///
/// Stem runs left to right and filtration bottom to top. Classes sharing a bidegree are
/// spread horizontally in order of weight then name. `v0` edges are vertical, `ρ` edges
/// horizontal, `v1` edges diagonal; `τ⁴` and `τ²v0` are not drawn. A `ρ`-tower leaving the
/// window ends in a left arrow; a `ρ`-divisible family is drawn from its base with a right
/// arrow and a label naming the base.
pub fn emit_svg(c: &TriChart, spec: &RenderSpec) -> String {
    let c = canonical(&c.restrict(&spec.window));
    let w = spec.window;
    let panels: Vec<&str> = if spec.split_parts { vec!["A", "B"] } else { vec!["all"] };
    let cols = (w.stem_max - w.stem_min + 1) as f64;
    let rows = (w.filtration_max + 1) as f64;
    let pw = cols * UNIT;
    let ph = rows * UNIT;
    let width = panels.len() as f64 * (pw + MARGIN) + MARGIN;
    let height = ph + 2.0 * MARGIN;
    let r = spec.style.dot_radius;

    let mut slots: BTreeMap<(&str, i32, i32), Vec<usize>> = BTreeMap::new();
    for (i, k) in c.classes.iter().enumerate() {
        slots
            .entry((panel_of(k, spec.split_parts), k.degree.stem, k.degree.filtration))
            .or_default()
            .push(i);
    }
    let mut pos = vec![(0.0, 0.0); c.len()];
    for ((panel, s, f), v) in slots.iter_mut() {
        v.sort_by(|&a, &b| {
            let (x, y) = (&c.classes[a], &c.classes[b]);
            (x.degree.weight, &x.name).cmp(&(y.degree.weight, &y.name))
        });
        let px = panels.iter().position(|p| p == panel).unwrap() as f64 * (pw + MARGIN) + MARGIN;
        let cx = px + (s - w.stem_min) as f64 * UNIT + UNIT / 2.0;
        let cy = MARGIN + ph - (*f as f64) * UNIT - UNIT / 2.0;
        let step = (2.5 * r).min(UNIT * 0.8 / v.len() as f64);
        let n = v.len() as f64;
        for (j, &i) in v.iter().enumerate() {
            pos[i] = (cx + (j as f64 - (n - 1.0) / 2.0) * step, cy);
        }
    }

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.1}\" height=\"{height:.1}\" viewBox=\"0 0 {width:.1} {height:.1}\">"
    )
    .unwrap();
    out.push_str(concat!(
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\">",
        "<path d=\"M0,0 L10,5 L0,10 z\"/></marker></defs>\n"
    ));
    let chains = rho_chains(&c);
    for (pi, panel) in panels.iter().enumerate() {
        let px = pi as f64 * (pw + MARGIN) + MARGIN;
        writeln!(out, "<g id=\"part-{panel}\" class=\"panel\">").unwrap();
        let title = if *panel == "all" { "Ext".to_string() } else { format!("Part {panel}") };
        writeln!(out, "<text class=\"title\" x=\"{px:.1}\" y=\"{:.1}\">{title}</text>", MARGIN / 2.0).unwrap();
        writeln!(
            out,
            "<rect class=\"frame\" x=\"{px:.1}\" y=\"{MARGIN:.1}\" width=\"{pw:.1}\" height=\"{ph:.1}\" fill=\"none\" stroke=\"#ccc\"/>"
        )
        .unwrap();
        for s in w.stem_min..=w.stem_max {
            if s % 2 == 0 {
                let x = px + (s - w.stem_min) as f64 * UNIT + UNIT / 2.0;
                writeln!(out, "<text class=\"axis\" x=\"{x:.1}\" y=\"{:.1}\">{s}</text>", MARGIN + ph + 14.0).unwrap();
            }
        }
        let in_panel = |i: usize| panel_of(&c.classes[i], spec.split_parts) == *panel;
        for (op, s, t) in c.edges() {
            if !matches!(op, Op::Rho | Op::V0 | Op::V1) || !in_panel(s) || !in_panel(t) {
                continue;
            }
            let ((x1, y1), (x2, y2)) = (pos[s], pos[t]);
            writeln!(
                out,
                "<line class=\"{op}\" x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" stroke=\"black\"/>"
            )
            .unwrap();
        }
        for (chain, open_start, open_end) in &chains {
            let (first, last) = (chain[0], *chain.last().unwrap());
            if !in_panel(last) || chain.len() < 2 {
                continue;
            }
            let (x, y) = pos[last];
            if *open_end && spec.style.tower_arrow {
                writeln!(
                    out,
                    "<line class=\"rho-tower\" data-name=\"{}\" x1=\"{x:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"black\" marker-end=\"url(#arrow)\"/>",
                    esc(&c.classes[first].name),
                    x - UNIT * 0.6
                )
                .unwrap();
            } else if *open_start && spec.style.divisibility_arrow {
                let (bx, by) = pos[last];
                writeln!(
                    out,
                    "<line class=\"rho-divisible\" data-name=\"{}\" x1=\"{bx:.1}\" y1=\"{by:.1}\" x2=\"{:.1}\" y2=\"{by:.1}\" stroke=\"black\" marker-end=\"url(#arrow)\"/>",
                    esc(&c.classes[last].name),
                    bx + UNIT * 0.6
                )
                .unwrap();
                writeln!(
                    out,
                    "<text class=\"family\" x=\"{bx:.1}\" y=\"{:.1}\">{}/rho^j</text>",
                    by + 2.0 * r + 8.0,
                    esc(&c.classes[last].name)
                )
                .unwrap();
            }
        }
        for (i, k) in c.classes.iter().enumerate() {
            if !in_panel(i) {
                continue;
            }
            let (x, y) = pos[i];
            let fill = if k.cone() == Cone::Positive { "black" } else { "white" };
            writeln!(
                out,
                "<circle class=\"class\" cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"{r:.1}\" fill=\"{fill}\" stroke=\"black\" data-s=\"{}\" data-f=\"{}\" data-w=\"{}\" data-cone=\"{}\" data-name=\"{}\"/>",
                k.degree.stem,
                k.degree.filtration,
                k.degree.weight,
                k.cone(),
                esc(&k.name)
            )
            .unwrap();
            if spec.show_weights {
                writeln!(
                    out,
                    "<text class=\"weight\" x=\"{:.1}\" y=\"{:.1}\">{}</text>",
                    x + r,
                    y - r,
                    k.degree.weight
                )
                .unwrap();
            }
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

/// Structural content of a rendered chart, read back from the SVG.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SvgSummary {
    pub panels: Vec<String>,
    /// Class counts per `(panel, s, f)`.
    pub dots: BTreeMap<(String, i32, i32), usize>,
    /// Line counts per `(panel, class attribute)`.
    pub lines: BTreeMap<(String, String), usize>,
    /// Named classes per panel, with `(s, f, w)`.
    pub classes: BTreeMap<String, Vec<(String, i32, i32, i32)>>,
}

fn attrs(tag: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    let mut rest = tag;
    loop {
        rest = rest.trim_start();
        if rest.is_empty() {
            return Ok(out);
        }
        let eq = rest.find('=').ok_or_else(|| Error::Parse(format!("attribute without value in {tag:?}")))?;
        let key = rest[..eq].trim().to_string();
        let after = &rest[eq + 1..];
        if !after.starts_with('"') {
            return Err(Error::Parse(format!("unquoted attribute {key}")));
        }
        let end = after[1..].find('"').ok_or_else(|| Error::Parse("unterminated attribute".into()))?;
        let val = after[1..1 + end]
            .replace("&quot;", "\"")
            .replace("&lt;", "<")
            .replace("&gt;", ">")
            .replace("&amp;", "&");
        if out.insert(key.clone(), val).is_some() {
            return Err(Error::Parse(format!("duplicate attribute {key}")));
        }
        rest = &after[end + 2..];
    }
}

/// A minimal well-formedness check: one `svg` root with the SVG namespace, balanced
/// tags, quoted unique attributes. Returns the structural summary.
pub fn check_svg(svg: &str) -> Result<SvgSummary> {
    let mut stack: Vec<(String, Option<String>)> = Vec::new();
    let mut summary = SvgSummary::default();
    let mut roots = 0;
    let mut rest = svg;
    while let Some(open) = rest.find('<') {
        if stack.is_empty() && !rest[..open].trim().is_empty() {
            return Err(Error::Parse("text outside the root element".into()));
        }
        let close = rest[open..].find('>').ok_or_else(|| Error::Parse("unterminated tag".into()))? + open;
        let tag = &rest[open + 1..close];
        rest = &rest[close + 1..];
        if let Some(name) = tag.strip_prefix('/') {
            match stack.pop() {
                Some((n, _)) if n == name.trim() => continue,
                other => return Err(Error::Parse(format!("closing {name} does not match {other:?}"))),
            }
        }
        let self_closing = tag.ends_with('/');
        let body = tag.trim_end_matches('/');
        let (name, attr_text) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        if name.is_empty() || !name.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '-' || ch == ':') {
            return Err(Error::Parse(format!("bad tag name {name:?}")));
        }
        let a = attrs(attr_text)?;
        if stack.is_empty() {
            roots += 1;
            if name != "svg" || a.get("xmlns").map(String::as_str) != Some("http://www.w3.org/2000/svg") {
                return Err(Error::Parse("root must be an svg element with the SVG namespace".into()));
            }
        }
        let panel = match (name, a.get("id").and_then(|id| id.strip_prefix("part-"))) {
            ("g", Some(p)) => {
                summary.panels.push(p.to_string());
                Some(p.to_string())
            }
            _ => stack.iter().rev().find_map(|(_, p)| p.clone()),
        };
        if let Some(p) = &panel {
            let num = |k: &str| -> Result<i32> {
                a.get(k)
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("missing {k}")))
            };
            match name {
                "circle" => {
                    let (s, f, w) = (num("data-s")?, num("data-f")?, num("data-w")?);
                    *summary.dots.entry((p.clone(), s, f)).or_insert(0) += 1;
                    let n = a.get("data-name").cloned().unwrap_or_default();
                    summary.classes.entry(p.clone()).or_default().push((n, s, f, w));
                }
                "line" => {
                    let class = a.get("class").cloned().unwrap_or_default();
                    *summary.lines.entry((p.clone(), class)).or_insert(0) += 1;
                }
                _ => {}
            }
        }
        if !self_closing {
            stack.push((name.to_string(), panel.filter(|_| name == "g")));
        }
    }
    if !rest.trim().is_empty() || !stack.is_empty() || roots != 1 {
        return Err(Error::Parse("unbalanced document".into()));
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext_equivariant::{closed_form_equivariant, ext_m2_m2};

    #[test]
    fn empty_chart_is_header_only() {
        let c = TriChart::new(Window::new(0, 4, 4, 0, 4));
        let t = emit_tsv(&c);
        assert_eq!(t.lines().count(), 3);
        assert_eq!(parse_tsv(&t).unwrap(), c);
        let s = check_svg(&emit_svg(&c, &RenderSpec::new(c.window))).unwrap();
        assert_eq!(s.panels, vec!["A", "B"]);
        assert!(s.dots.is_empty());
    }

    #[test]
    fn tsv_round_trip() {
        let w = Window::new(-8, 8, 6, -8, 8);
        for (k, m) in [(0, 0), (1, 2), (2, 0), (3, 1)] {
            let c = closed_form_equivariant(k, m, &w);
            let t = emit_tsv(&c);
            let back = parse_tsv(&t).unwrap();
            assert_eq!(back, canonical(&c));
            assert_eq!(emit_tsv(&back), t);
            assert_eq!(parse_json(&emit_json(&c)).unwrap(), canonical(&c));
        }
    }

    #[test]
    fn svg_is_deterministic() {
        let w = Window::new(-6, 6, 4, -6, 6);
        let c = ext_m2_m2(1, &w).unwrap();
        let spec = RenderSpec::new(w);
        assert_eq!(emit_svg(&c, &spec), emit_svg(&c.clone(), &spec));
        let s = check_svg(&emit_svg(&c, &spec)).unwrap();
        assert_eq!(s.dots.values().sum::<usize>(), c.len());
    }

    #[test]
    fn checker_rejects_broken_documents() {
        assert!(check_svg("<svg xmlns=\"http://www.w3.org/2000/svg\"><g></svg>").is_err());
        assert!(check_svg("<g/>").is_err());
        assert!(check_svg("<svg xmlns=\"http://www.w3.org/2000/svg\" a=1/>").is_err());
    }
}
