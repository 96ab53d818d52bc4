//! Exporters: strategic-diagram SVG, JSON report, Graphviz DOT, and CSV.
//!
//! Every exporter is a pure function of its inputs and options and emits
//! identical bytes for identical inputs. Decimal commas never appear;
//! numbers use decimal points regardless of locale.

use serde_json::{json, Value};

use crate::cluster::Theme;
use crate::net::CoWordNetwork;
use crate::strategic::{predict_trajectory, MapError, Quadrant, StrategicMap};

/// Options for the SVG strategic diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderOptions {
    pub width_px: u32,
    pub height_px: u32,
    pub min_radius_px: u32,
    pub max_radius_px: u32,
    pub show_labels: bool,
    /// Decimal places for metric values displayed in the diagram.
    pub decimal_places: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            width_px: 900,
            height_px: 700,
            min_radius_px: 10,
            max_radius_px: 60,
            show_labels: true,
            decimal_places: 2,
        }
    }
}

fn escape_xml(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn quadrant_color(quadrant: Quadrant) -> &'static str {
    match quadrant {
        Quadrant::Q1 => "#d62728",
        Quadrant::Q2 => "#1f77b4",
        Quadrant::Q3 => "#2ca02c",
        Quadrant::Q4 => "#ff7f0e",
    }
}

/// Circle radius for a document count: circle AREA is affine in the count,
/// mapped so the smallest count gets `min_radius_px` and the largest
/// `max_radius_px`. A flat distribution gets the midpoint radius.
fn theme_radius(doc_count: u64, min_count: u64, max_count: u64, opts: &RenderOptions) -> f64 {
    let r_min = f64::from(opts.min_radius_px);
    let r_max = f64::from(opts.max_radius_px);
    if max_count == min_count {
        return (r_min + r_max) / 2.0;
    }
    let t = (doc_count - min_count) as f64 / (max_count - min_count) as f64;
    let area = r_min * r_min + t * (r_max * r_max - r_min * r_min);
    area.sqrt()
}

/// Renders the strategic diagram: centrality on x, density on y (upward),
/// dashed axis lines through the origin, one circle per theme sized by
/// document count, and the four quadrant captions.
pub fn render_map_svg(map: &StrategicMap, opts: &RenderOptions) -> Result<String, MapError> {
    if map.themes.is_empty() {
        return Err(MapError::EmptyMap);
    }
    debug_assert!(
        opts.min_radius_px < opts.max_radius_px && opts.width_px > 0 && opts.height_px > 0
    );

    let width = f64::from(opts.width_px);
    let height = f64::from(opts.height_px);
    let (left, right, top, bottom) = (70.0, 24.0, 40.0, 56.0);
    let plot_w = width - left - right;
    let plot_h = height - top - bottom;

    // Data extents over the themes and the origin, padded 10% so nothing
    // sits on the border. A degenerate axis centers its points.
    let mut c_min = map.origin.0;
    let mut c_max = map.origin.0;
    let mut d_min = map.origin.1;
    let mut d_max = map.origin.1;
    for (_, metrics) in &map.themes {
        c_min = c_min.min(metrics.centrality);
        c_max = c_max.max(metrics.centrality);
        d_min = d_min.min(metrics.density);
        d_max = d_max.max(metrics.density);
    }
    let pad = |lo: f64, hi: f64| -> (f64, f64) {
        let span = hi - lo;
        if span == 0.0 {
            (lo - 1.0, hi + 1.0)
        } else {
            (lo - 0.1 * span, hi + 0.1 * span)
        }
    };
    let (c_lo, c_hi) = pad(c_min, c_max);
    let (d_lo, d_hi) = pad(d_min, d_max);

    let x = |c: f64| left + (c - c_lo) / (c_hi - c_lo) * plot_w;
    let y = |d: f64| top + plot_h - (d - d_lo) / (d_hi - d_lo) * plot_h;

    let counts: Vec<u64> = map.themes.iter().map(|(t, _)| t.doc_count).collect();
    let min_count = *counts.iter().min().expect("nonempty");
    let max_count = *counts.iter().max().expect("nonempty");

    let dp = opts.decimal_places;
    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
        w = opts.width_px,
        h = opts.height_px
    ));
    svg.push_str(&format!(
        "  <rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"white\" stroke=\"#333333\"/>\n",
        left, top, plot_w, plot_h
    ));

    // Dashed origin axes.
    let ox = x(map.origin.0);
    let oy = y(map.origin.1);
    svg.push_str(&format!(
        "  <line x1=\"{ox:.2}\" y1=\"{:.2}\" x2=\"{ox:.2}\" y2=\"{:.2}\" stroke=\"#888888\" stroke-dasharray=\"6 4\"/>\n",
        top,
        top + plot_h
    ));
    svg.push_str(&format!(
        "  <line x1=\"{:.2}\" y1=\"{oy:.2}\" x2=\"{:.2}\" y2=\"{oy:.2}\" stroke=\"#888888\" stroke-dasharray=\"6 4\"/>\n",
        left,
        left + plot_w
    ));

    // Quadrant captions in the plot corners.
    let caption = |text: &str, cx: f64, cy: f64, anchor: &str| {
        format!(
            "  <text x=\"{cx:.2}\" y=\"{cy:.2}\" text-anchor=\"{anchor}\" font-family=\"sans-serif\" font-size=\"14\" fill=\"#555555\">{text}</text>\n"
        )
    };
    svg.push_str(&caption("Motor", left + plot_w - 8.0, top + 18.0, "end"));
    svg.push_str(&caption("Niche", left + 8.0, top + 18.0, "start"));
    svg.push_str(&caption(
        "Basic",
        left + plot_w - 8.0,
        top + plot_h - 10.0,
        "end",
    ));
    svg.push_str(&caption(
        "Emerging",
        left + 8.0,
        top + plot_h - 10.0,
        "start",
    ));

    // Axis titles.
    svg.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">Centrality</text>\n",
        left + plot_w / 2.0,
        height - 16.0
    ));
    svg.push_str(&format!(
        "  <text x=\"20\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\" transform=\"rotate(-90 20 {:.2})\">Density</text>\n",
        top + plot_h / 2.0,
        top + plot_h / 2.0
    ));

    // Theme spheres, in map order.
    for (theme, metrics) in &map.themes {
        let cx = x(metrics.centrality);
        let cy = y(metrics.density);
        let r = theme_radius(theme.doc_count, min_count, max_count, opts);
        let color = quadrant_color(metrics.quadrant);
        let tooltip = format!(
            "{} — centrality {:.dp$}, density {:.dp$}, documents {}",
            theme.label, metrics.centrality, metrics.density, theme.doc_count
        );
        svg.push_str(&format!(
            "  <circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{r:.2}\" fill=\"{color}\" fill-opacity=\"0.35\" stroke=\"{color}\"><title>{}</title></circle>\n",
            escape_xml(&tooltip)
        ));
        if opts.show_labels {
            svg.push_str(&format!(
                "  <text x=\"{cx:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{}</text>\n",
                cy - r - 5.0,
                escape_xml(&theme.label)
            ));
        }
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// The JSON report: origin, origin mode, category, and one entry per theme
/// in map order. Keys are sorted; numbers keep full precision.
pub fn export_report_json(map: &StrategicMap) -> String {
    let themes: Vec<Value> = map
        .themes
        .iter()
        .map(|(theme, metrics)| {
            json!({
                "label": theme.label,
                "members": theme.members.keys().collect::<Vec<_>>(),
                "doc_count": theme.doc_count,
                "freq_sum": theme.freq_sum,
                "centrality": metrics.centrality,
                "density": metrics.density,
                "quadrant": metrics.quadrant.to_string(),
                "trajectory_next": predict_trajectory(metrics.quadrant).map(|q| q.to_string()),
            })
        })
        .collect();
    let report = json!({
        "origin": { "centrality": map.origin.0, "density": map.origin.1 },
        "origin_mode": map.origin_mode.name(),
        "category": map.category.to_string(),
        "themes": themes,
    });
    let mut out = serde_json::to_string_pretty(&report).expect("report is valid JSON");
    out.push('\n');
    out
}

fn escape_dot(term: &str) -> String {
    term.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz DOT export of the network: undirected, node `freq` attributes,
/// edge `cooc` and `weight` attributes. With themes, nodes carry a `theme`
/// attribute and cross-theme edges are dashed. Layout is left to the DOT
/// consumer.
pub fn export_network_dot(network: &CoWordNetwork, themes: Option<&[Theme]>) -> String {
    let theme_of =
        |term: &str| -> Option<usize> { themes?.iter().find(|t| t.contains(term)).map(|t| t.id) };

    let mut dot = String::from("graph coword {\n");
    for (term, freq) in &network.nodes {
        match theme_of(term) {
            Some(id) => dot.push_str(&format!(
                "  \"{}\" [freq={freq}, theme={id}];\n",
                escape_dot(term)
            )),
            None => dot.push_str(&format!("  \"{}\" [freq={freq}];\n", escape_dot(term))),
        }
    }
    for (pair, weight) in &network.edges {
        let dashed = match (theme_of(pair.first()), theme_of(pair.second())) {
            (Some(a), Some(b)) => a != b,
            _ => false,
        };
        let style = if dashed { ", style=dashed" } else { "" };
        dot.push_str(&format!(
            "  \"{}\" -- \"{}\" [cooc={}, weight={}{style}];\n",
            escape_dot(pair.first()),
            escape_dot(pair.second()),
            weight.cooccurrence,
            weight.equivalence
        ));
    }
    dot.push_str("}\n");
    dot
}

fn csv_into_string(writer: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(writer.into_inner().expect("in-memory writer")).expect("csv is UTF-8")
}

/// CSV of the strategic map, one row per theme in map order.
pub fn export_map_csv(map: &StrategicMap) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([
            "label",
            "members",
            "doc_count",
            "freq_sum",
            "centrality",
            "density",
            "quadrant",
            "trajectory_next",
        ])
        .expect("header");
    for (theme, metrics) in &map.themes {
        let members = theme.members.keys().cloned().collect::<Vec<_>>().join("; ");
        let next = predict_trajectory(metrics.quadrant)
            .map(|q| q.to_string())
            .unwrap_or_default();
        writer
            .write_record([
                theme.label.clone(),
                members,
                theme.doc_count.to_string(),
                theme.freq_sum.to_string(),
                metrics.centrality.to_string(),
                metrics.density.to_string(),
                metrics.quadrant.to_string(),
                next,
            ])
            .expect("row");
    }
    csv_into_string(writer)
}

/// CSV of a keyword ranking.
pub fn export_ranking_csv(ranking: &[(String, u64)]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["term", "frequency"]).expect("header");
    for (term, frequency) in ranking {
        writer
            .write_record([term.clone(), frequency.to_string()])
            .expect("row");
    }
    csv_into_string(writer)
}

/// CSV edge list of the network, in lexicographic pair order.
pub fn export_network_csv(network: &CoWordNetwork) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["term_a", "term_b", "cooccurrence", "equivalence"])
        .expect("header");
    for (pair, weight) in &network.edges {
        writer
            .write_record([
                pair.first().to_owned(),
                pair.second().to_owned(),
                weight.cooccurrence.to_string(),
                weight.equivalence.to_string(),
            ])
            .expect("row");
    }
    csv_into_string(writer)
}
