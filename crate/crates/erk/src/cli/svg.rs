//! Minimal self-contained SVG line charts.

use std::fmt::Write as _;

use super::output::{fmt_sig, ColumnStyle, Table};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 220.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 110.0;

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#393b79", "#ad494a",
];

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Round tick spacing giving roughly `target` intervals over `span`.
fn tick_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm <= 1.0 {
        1.0
    } else if norm <= 2.0 {
        2.0
    } else if norm <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = tick_step(hi - lo, 5.0);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

struct Axis {
    lo: f64,
    hi: f64,
    from: f64,
    to: f64,
}

impl Axis {
    fn new(lo: f64, hi: f64, from: f64, to: f64) -> Self {
        let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
        Self { lo, hi, from, to }
    }

    fn map(&self, v: f64) -> f64 {
        self.from + (v - self.lo) / (self.hi - self.lo) * (self.to - self.from)
    }
}

/// Renders lines for [`ColumnStyle::Line`] columns and markers with ±1 standard
/// error bars for [`ColumnStyle::Points`] columns.
pub fn render(table: &Table, title: &str, x_label: &str, y_label: &str) -> String {
    let visible: Vec<usize> = (0..table.columns.len())
        .filter(|&i| table.columns[i].style != ColumnStyle::Hidden)
        .collect();

    let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &ci in &visible {
        let col = &table.columns[ci];
        for (i, v) in col.values.iter().enumerate() {
            let Some(v) = *v else { continue };
            let err = match col.style {
                ColumnStyle::Points { stderr } => table.columns[stderr].values[i].unwrap_or(0.0),
                _ => 0.0,
            };
            y_lo = y_lo.min(v - err);
            y_hi = y_hi.max(v + err);
        }
    }
    if !y_lo.is_finite() {
        (y_lo, y_hi) = (0.0, 1.0);
    }
    y_lo = y_lo.min(0.0);
    let pad = 0.05 * (y_hi - y_lo).max(1e-12);
    y_hi += pad;

    let x_lo = table.x.iter().copied().fold(f64::INFINITY, f64::min);
    let x_hi = table.x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let xa = Axis::new(x_lo, x_hi, LEFT, WIDTH - RIGHT);
    let ya = Axis::new(y_lo, y_hi, HEIGHT - BOTTOM, TOP);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="28" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    // Frame, grid and ticks.
    let (px0, px1, py0, py1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        s,
        r#"<rect x="{px0}" y="{py1}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        px1 - px0,
        py0 - py1
    );
    for t in ticks(xa.lo, xa.hi) {
        let x = xa.map(t);
        let _ = writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{py1}" x2="{x:.2}" y2="{py0}" stroke="#e0e0e0"/>"##
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#,
            py0 + 16.0,
            fmt_sig(round_tick(t))
        );
    }
    for t in ticks(ya.lo, ya.hi) {
        let y = ya.map(t);
        let _ = writeln!(
            s,
            r##"<line x1="{px0}" y1="{y:.2}" x2="{px1}" y2="{y:.2}" stroke="#e0e0e0"/>"##
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            px0 - 6.0,
            y + 4.0,
            fmt_sig(round_tick(t))
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (px0 + px1) / 2.0,
        py0 + 36.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{y}" text-anchor="middle" transform="rotate(-90 20 {y})">{}</text>"#,
        escape(y_label),
        y = (py0 + py1) / 2.0
    );

    // Series.
    for (k, &ci) in visible.iter().enumerate() {
        let col = &table.columns[ci];
        let color = PALETTE[k % PALETTE.len()];
        match col.style {
            ColumnStyle::Line => {
                let mut d = String::new();
                let mut pen_down = false;
                for (i, v) in col.values.iter().enumerate() {
                    match v {
                        Some(v) if v.is_finite() => {
                            let _ = write!(
                                d,
                                "{}{:.2},{:.2} ",
                                if pen_down { "L" } else { "M" },
                                xa.map(table.x[i]),
                                ya.map(*v)
                            );
                            pen_down = true;
                        }
                        _ => pen_down = false,
                    }
                }
                let _ = writeln!(
                    s,
                    r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                    d.trim_end()
                );
            }
            ColumnStyle::Points { stderr } => {
                for (i, v) in col.values.iter().enumerate() {
                    let Some(v) = *v else { continue };
                    let (x, y) = (xa.map(table.x[i]), ya.map(v));
                    let e = table.columns[stderr].values[i].unwrap_or(0.0);
                    if e > 0.0 {
                        let _ = writeln!(
                            s,
                            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="{color}"/>"#,
                            ya.map(v - e),
                            ya.map(v + e)
                        );
                    }
                    let _ = writeln!(
                        s,
                        r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="none" stroke="{color}"/>"#
                    );
                }
            }
            ColumnStyle::Hidden => {}
        }
    }

    // Legend.
    let lx = px1 + 15.0;
    for (k, &ci) in visible.iter().enumerate() {
        let col = &table.columns[ci];
        let color = PALETTE[k % PALETTE.len()];
        let y = TOP + 10.0 + 18.0 * k as f64;
        match col.style {
            ColumnStyle::Points { .. } => {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{}" cy="{y}" r="3" fill="none" stroke="{color}"/>"#,
                    lx + 10.0
                );
            }
            _ => {
                let _ = writeln!(
                    s,
                    r#"<line x1="{lx}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2"/>"#,
                    lx + 20.0
                );
            }
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}">{}</text>"#,
            lx + 26.0,
            y + 4.0,
            escape(&col.name)
        );
    }

    // Parameter stamp.
    for (k, line) in table.stamp.iter().enumerate() {
        let y = HEIGHT - BOTTOM + 56.0 + 14.0 * k as f64;
        let _ = writeln!(
            s,
            r##"<text x="{LEFT}" y="{y}" font-size="10" fill="#555555">{}</text>"##,
            escape(line)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn round_tick(t: f64) -> f64 {
    (t * 1e9).round() / 1e9
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_markup() {
        assert_eq!(escape(r#"a<b & "c">'"#), "a&lt;b &amp; &quot;c&quot;&gt;&apos;");
    }

    #[test]
    fn nice_ticks() {
        assert_eq!(ticks(0.0, 1.0).len(), 6);
        assert_eq!(ticks(0.0, 30.0), vec![0.0, 10.0, 20.0, 30.0]);
    }

    #[test]
    fn chart_contains_series_legend_and_stamp() {
        let mut t = Table::new("q", vec![0.0, 0.5, 1.0]);
        t.push_line("R<1>", vec![1.0, 0.5, 0.0]);
        t.push_points("mc", vec![Some((1.0, 0.1)), None, Some((0.0, 0.0))]);
        t.stamp.push("seed=7".into());
        let svg = render(&t, "title", "x", "y");
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains(r#"width="800" height="600""#));
        assert!(svg.contains("R&lt;1&gt;"));
        assert!(!svg.contains("mc_stderr"));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains("seed=7"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
