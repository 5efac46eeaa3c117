//! Ext charts: bigraded dimensions with class labels and registered maps,
//! exported as TSV and SVG.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::amodule::AModule;
use crate::brown_gitler::h0_sequence;
use crate::error::Result;
use crate::ext::{connecting_map, resolution, BgExt, ExtMap, Resolution};
use crate::f2::BitMatrix;
use crate::steenrod::AlgebraSpec;

/// Position of a group: family index (0 for a fixed source), `s` and `t`.
pub type Node = (u32, usize, i32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartGroup {
    pub node: Node,
    pub dim: usize,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartMap {
    pub kind: String,
    pub from: Node,
    pub to: Node,
    pub matrix: BitMatrix,
}

/// A chart of `Ext^{s,t}(N, M)` for a fixed `N`, or of `Ext^{s,s}(G(n), M)` for a range of `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtChart {
    pub source: String,
    pub target: String,
    pub spec: AlgebraSpec,
    pub family: bool,
    pub groups: BTreeMap<Node, ChartGroup>,
    pub maps: Vec<ChartMap>,
}

fn labels_for(res: &Resolution, m: &AModule, s: usize, t: i32, reps: &[crate::f2::BitVec]) -> Vec<String> {
    reps.iter().map(|f| res.describe_cochain(s, m, t, f)).collect()
}

impl ExtChart {
    pub fn dim(&self, node: Node) -> usize {
        self.groups.get(&node).map_or(0, |g| g.dim)
    }

    fn register(&mut self, kind: String, from: Node, to: Node, map: ExtMap) {
        if self.dim(from) > 0 && self.dim(to) > 0 {
            self.maps.push(ChartMap {
                kind,
                from,
                to,
                matrix: map.matrix,
            });
        }
    }

    /// Tab-separated `s, t, dim, labels`, preceded by `n` for family charts.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        if self.family {
            out.push_str("n\t");
        }
        out.push_str("s\tt\tdim\tlabels\n");
        for g in self.groups.values() {
            let (n, s, t) = g.node;
            if self.family {
                let _ = write!(out, "{n}\t");
            }
            let _ = writeln!(out, "{s}\t{t}\t{}\t{}", g.dim, g.labels.join("; "));
        }
        out
    }

    /// Registered maps as `kind, from, to, matrix rows`.
    pub fn maps_tsv(&self) -> String {
        let mut out = String::from("map\tfrom\tto\tmatrix\n");
        for m in &self.maps {
            let rows: Vec<String> = m
                .matrix
                .row_vecs()
                .iter()
                .map(|r| r.to_bools().iter().map(|&b| if b { '1' } else { '0' }).collect())
                .collect();
            let _ = writeln!(
                out,
                "{}\t{:?}\t{:?}\t{}",
                m.kind,
                m.from,
                m.to,
                rows.join(",")
            );
        }
        out
    }

    /// Dots at `(n + t - s, s)`; `h_0` as vertical segments, other maps as labelled arrows.
    pub fn to_svg(&self) -> String {
        render_svg(self)
    }
}

/// `Ext^{s,t}(N, M)` for `s <= smax`, `t` in `tmin..=tmax`, with `h_0` registered.
pub fn ext_chart(
    n: &AModule,
    m: &AModule,
    spec: AlgebraSpec,
    smax: usize,
    tmin: i32,
    tmax: i32,
    floor: Option<i32>,
) -> Result<ExtChart> {
    let m = if m.algebra() == spec { m.clone() } else { m.restrict(spec)? };
    let floor = floor.or(match spec {
        AlgebraSpec::Full => Some(m.min_degree() - tmax - 2),
        _ => None,
    });
    let res = resolution(n, spec, smax + 2, floor)?;
    let mut chart = ExtChart {
        source: n.name().to_string(),
        target: m.name().to_string(),
        spec,
        family: false,
        groups: BTreeMap::new(),
        maps: Vec::new(),
    };
    for s in 0..=smax {
        for t in tmin..=tmax {
            let g = res.ext(&m, s, t)?;
            if g.dim() > 0 {
                chart.groups.insert(
                    (0, s, t),
                    ChartGroup {
                        node: (0, s, t),
                        dim: g.dim(),
                        labels: labels_for(&res, &m, s, t, g.representatives()),
                    },
                );
            }
        }
    }
    let nn = Arc::new(res.module().as_ref().clone());
    let e = h0_sequence().restrict(spec)?.tensor_right(&nn)?;
    let (rk, rn) = (res.suspend(1), res.suspend(2));
    let nodes: Vec<Node> = chart.groups.keys().copied().collect();
    for (_, s, t) in nodes {
        if s < smax && t < tmax {
            let map = connecting_map(&e, &m, &rk, &rn, s, t - 1)?;
            chart.register("h0".into(), (0, s, t), (0, s + 1, t + 1), map);
        }
    }
    Ok(chart)
}

/// `Ext^{s,s}(G(n), M)` for `n <= nmax`, `s <= smax`, optionally with every
/// `Q^r`, `Sq^k` and `h_0` in range registered.
pub fn family_chart(m: Arc<AModule>, spec: AlgebraSpec, smax: usize, nmax: u32, with_maps: bool) -> Result<ExtChart> {
    let name = m.name().to_string();
    let ctx = BgExt::new(m, spec, smax)?;
    let mut chart = ExtChart {
        source: "G(⋆)".into(),
        target: name,
        spec,
        family: true,
        groups: BTreeMap::new(),
        maps: Vec::new(),
    };
    for n in 0..=nmax {
        let res = ctx.res_g(n)?;
        for s in 0..=smax {
            let g = ctx.ext(n, s)?;
            if g.dim() > 0 {
                chart.groups.insert(
                    (n, s, s as i32),
                    ChartGroup {
                        node: (n, s, s as i32),
                        dim: g.dim(),
                        labels: labels_for(&res, ctx.module(), s, s as i32, g.representatives()),
                    },
                );
            }
        }
    }
    if with_maps {
        let nodes: Vec<Node> = chart.groups.keys().copied().collect();
        for (n, s, t) in nodes {
            if s < smax {
                chart.register("h0".into(), (n, s, t), (n, s + 1, t + 1), ctx.h0(n, s)?);
                for r in n.saturating_sub(1)..=nmax - n {
                    if chart.dim((n + r, s + 1, t + 1)) > 0 {
                        let q = ctx.dl(n, r, s)?;
                        chart.register(format!("Q^{r}"), (n, s, t), (n + r, s + 1, t + 1), q);
                    }
                }
            }
            for k in 1..=n {
                if chart.dim((n - k, s, t)) > 0 {
                    chart.register(format!("Sq^{k}"), (n, s, t), (n - k, s, t), ctx.sq(k, n, s)?);
                }
            }
        }
        chart.maps.retain(|m| !m.matrix.is_zero());
    }
    Ok(chart)
}

const CELL: f64 = 48.0;
const MARGIN: f64 = 40.0;

fn render_svg(chart: &ExtChart) -> String {
    let x_of = |(n, s, t): Node| n as i32 + t - s as i32;
    let xs: Vec<i32> = chart.groups.keys().map(|&k| x_of(k)).collect();
    let ys: Vec<usize> = chart.groups.keys().map(|k| k.1).collect();
    let xmin = xs.iter().copied().min().unwrap_or(0).min(0);
    let xmax = xs.iter().copied().max().unwrap_or(0).max(xmin + 1);
    let ymax = ys.iter().copied().max().unwrap_or(0).max(1);
    let width = MARGIN * 2.0 + CELL * (xmax - xmin) as f64;
    let height = MARGIN * 2.0 + CELL * ymax as f64;
    let px = |x: i32| MARGIN + CELL * (x - xmin) as f64;
    let py = |y: usize| height - MARGIN - CELL * y as f64;
    let dot = |node: Node, i: usize| {
        let dim = chart.dim(node);
        let dx = if dim > 1 { (i as f64 - (dim - 1) as f64 / 2.0) * 8.0 } else { 0.0 };
        (px(x_of(node)) + dx, py(node.1))
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(out, r#"<title>Ext({}, {}) over {}</title>"#, escape(&chart.source), escape(&chart.target), chart.spec);
    let _ = writeln!(
        out,
        r#"<g stroke="black" stroke-width="1"><line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}"/><line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}"/></g>"#,
        px(xmin), py(0), px(xmax), py(0), px(xmin), py(0), px(xmin), py(ymax)
    );
    out.push_str(r#"<g font-family="monospace" font-size="10" fill="gray">"#);
    for x in xmin..=xmax {
        let _ = write!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{x}</text>"#, px(x), py(0) + 16.0);
    }
    for y in 0..=ymax {
        let _ = write!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{y}</text>"#, px(xmin) - 8.0, py(y) + 3.0);
    }
    out.push_str("</g>\n");
    for m in &chart.maps {
        let h0 = m.kind == "h0";
        let color = if h0 {
            "black"
        } else if m.kind.starts_with('Q') {
            "steelblue"
        } else {
            "darkorange"
        };
        for (i, row) in m.matrix.row_vecs().iter().enumerate() {
            for j in row.iter_ones() {
                let (x1, y1) = dot(m.from, i);
                let (x2, y2) = dot(m.to, j);
                let marker = if h0 { "" } else { r#" marker-end="url(#arrow)""# };
                let _ = writeln!(
                    out,
                    r#"<line x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}" stroke="{color}" stroke-width="1.2"{marker}><title>{}</title></line>"#,
                    escape(&m.kind)
                );
                if !h0 {
                    let _ = writeln!(
                        out,
                        r#"<text x="{:.1}" y="{:.1}" font-family="monospace" font-size="9" fill="{color}">{}</text>"#,
                        (x1 + x2) / 2.0 + 3.0,
                        (y1 + y2) / 2.0 - 3.0,
                        escape(&m.kind)
                    );
                }
            }
        }
    }
    if chart.maps.iter().any(|m| m.kind != "h0") {
        out.push_str(r#"<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z"/></marker></defs>"#);
        out.push('\n');
    }
    for g in chart.groups.values() {
        for i in 0..g.dim {
            let (x, y) = dot(g.node, i);
            let _ = writeln!(
                out,
                r#"<circle cx="{x:.1}" cy="{y:.1}" r="3"><title>{}</title></circle>"#,
                escape(g.labels.get(i).map_or("", |s| s.as_str()))
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e1_chart_of_f2() {
        let f = AModule::f2_at(AlgebraSpec::Exterior(1), 0);
        let c = ext_chart(&f, &f, AlgebraSpec::Exterior(1), 4, 0, 12, None).unwrap();
        for (&(_, s, t), g) in &c.groups {
            assert_eq!(g.dim, 1);
            assert!((0..=s as i32).any(|b| s as i32 - b + 3 * b == t));
        }
        let h0s = c.maps.iter().filter(|m| m.kind == "h0" && !m.matrix.is_zero()).count();
        assert!(h0s > 0);
        for m in &c.maps {
            assert_eq!(m.from.2 - m.from.1 as i32, m.to.2 - m.to.1 as i32);
            assert!(!m.matrix.is_zero(), "h0 is injective on F2[v0, v1]");
        }
        let svg = c.to_svg();
        assert!(svg.starts_with("<svg") && svg.contains("<circle"));
    }

    #[test]
    fn empty_chart_svg() {
        let c = ExtChart {
            source: "0".into(),
            target: "0".into(),
            spec: AlgebraSpec::A1,
            family: false,
            groups: BTreeMap::new(),
            maps: Vec::new(),
        };
        let svg = c.to_svg();
        assert!(svg.contains("<line") && !svg.contains("<circle"));
    }
}
