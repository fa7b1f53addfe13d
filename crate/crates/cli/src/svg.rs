//! Minimal self-contained SVG charts.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 56.0;
const BOTTOM: f64 = 64.0;
const Y_TICKS: usize = 5;
const MAX_BAR_LABELS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Line,
    Bars,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub style: Style,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Category labels for bar charts; numeric x values are used otherwise.
    pub categories: Option<Vec<String>>,
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn number(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

pub fn render(chart: &Chart) -> String {
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let y_max = chart.ys.iter().cloned().fold(0.0, f64::max);
    let y_top = if y_max > 0.0 { y_max * 1.1 } else { 1.0 };
    let py = |y: f64| TOP + plot_h * (1.0 - y / y_top);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="28" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(&chart.title)
    );

    for i in 0..=Y_TICKS {
        let v = y_top * i as f64 / Y_TICKS as f64;
        let y = py(v);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#e0e0e0"/>"##,
            WIDTH - RIGHT
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            y + 4.0,
            format_tick(v, y_top)
        );
    }

    let n = chart.ys.len();
    match chart.style {
        Style::Line => {
            let (x0, x1) = (chart.xs[0], chart.xs[n - 1]);
            let span = if x1 > x0 { x1 - x0 } else { 1.0 };
            let px = |x: f64| LEFT + plot_w * (x - x0) / span;
            let points: Vec<String> =
                chart.xs.iter().zip(&chart.ys).map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
            let _ = writeln!(
                s,
                r##"<polyline fill="none" stroke="#1f4e9c" stroke-width="1.5" points="{}"/>"##,
                points.join(" ")
            );
            for i in 0..=4 {
                let x = x0 + span * i as f64 / 4.0;
                let _ = writeln!(
                    s,
                    r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
                    px(x),
                    HEIGHT - BOTTOM + 18.0,
                    number(x)
                );
            }
        }
        Style::Bars => {
            let slot = plot_w / n as f64;
            let stride = n.div_ceil(MAX_BAR_LABELS);
            for (i, &y) in chart.ys.iter().enumerate() {
                let x = LEFT + slot * i as f64;
                let _ = writeln!(
                    s,
                    r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#1f4e9c"/>"##,
                    x + slot * 0.15,
                    py(y),
                    slot * 0.7,
                    TOP + plot_h - py(y)
                );
                if i % stride == 0 {
                    let label = match &chart.categories {
                        Some(c) => c[i].clone(),
                        None => number(chart.xs[i]),
                    };
                    let _ = writeln!(
                        s,
                        r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
                        x + slot / 2.0,
                        HEIGHT - BOTTOM + 18.0,
                        escape(&label)
                    );
                }
            }
        }
    }

    let _ = writeln!(
        s,
        r#"<line x1="{LEFT}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        TOP + plot_h,
        WIDTH - RIGHT,
        TOP + plot_h
    );
    let _ = writeln!(s, r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{}" stroke="black"/>"#, TOP + plot_h);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 16.0,
        escape(&chart.x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{0}" text-anchor="middle" transform="rotate(-90 20 {0})">{1}</text>"#,
        TOP + plot_h / 2.0,
        escape(&chart.y_label)
    );
    s.push_str("</svg>\n");
    s
}

fn format_tick(v: f64, top: f64) -> String {
    if top < 1e-2 {
        format!("{v:.2e}")
    } else {
        number(v)
    }
}
