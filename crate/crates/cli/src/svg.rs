//! Minimal SVG plots: line charts with an optional log-x axis, and
//! heatmaps with a colour bar.

use std::fmt::Write;

const W: f64 = 720.0;
const H: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        W / 2.0,
        escape(title)
    );
}

/// Round tick spacing giving roughly `target` ticks over `[lo, hi]`.
fn nice_step(lo: f64, hi: f64, target: usize) -> f64 {
    let raw = (hi - lo) / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let frac = raw / mag;
    let nice = if frac < 1.5 {
        1.0
    } else if frac < 3.5 {
        2.0
    } else if frac < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series], log_x: bool) -> String {
    let fx = |x: f64| if log_x { x.log10() } else { x };
    let all = || series.iter().flat_map(|s| s.points.iter()).filter(|(x, y)| x.is_finite() && y.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64, f64::NEG_INFINITY);
    for &(x, y) in all() {
        x0 = x0.min(fx(x));
        x1 = x1.max(fx(x));
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x1 > x0) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if !(y1 > y0) {
        y1 = y0 + 1.0;
    }
    let ystep = nice_step(y0, y1, 6);
    y1 = (y1 / ystep).ceil() * ystep;

    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let px = |x: f64| LEFT + (fx(x) - x0) / (x1 - x0) * pw;
    let py = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    let mut out = String::new();
    header(&mut out, title);
    let _ = writeln!(
        out,
        r##"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>"##
    );

    let mut y = y0;
    while y <= y1 + 1e-9 * ystep {
        let v = py(y);
        let _ = writeln!(
            out,
            r##"<line x1="{LEFT}" x2="{}" y1="{v:.2}" y2="{v:.2}" stroke="#ddd"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"##,
            LEFT + pw,
            LEFT - 6.0,
            v + 4.0,
            tick_label(y)
        );
        y += ystep;
    }
    let xticks: Vec<f64> = if log_x {
        (x0.floor() as i32..=x1.ceil() as i32)
            .map(|e| 10f64.powi(e))
            .filter(|v| (x0 - 1e-9..=x1 + 1e-9).contains(&v.log10()))
            .collect()
    } else {
        let step = nice_step(x0, x1, 6);
        let mut v = (x0 / step).ceil() * step;
        let mut ticks = Vec::new();
        while v <= x1 + 1e-9 * step {
            ticks.push(v);
            v += step;
        }
        ticks
    };
    for t in xticks {
        let v = px(t);
        let _ = writeln!(
            out,
            r##"<line x1="{v:.2}" x2="{v:.2}" y1="{TOP}" y2="{}" stroke="#ddd"/><text x="{v:.2}" y="{}" text-anchor="middle">{}</text>"##,
            TOP + ph,
            TOP + ph + 18.0,
            tick_label(t)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        H - 15.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text transform="translate(18 {}) rotate(-90)" text-anchor="middle">{}</text>"#,
        TOP + ph / 2.0,
        escape(y_label)
    );

    for (k, s) in series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let path: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="2"/>"#,
            path.join(" ")
        );
        for p in &path {
            let (cx, cy) = p.split_once(',').unwrap_or(("0", "0"));
            let _ = writeln!(out, r#"<circle cx="{cx}" cy="{cy}" r="3" fill="{colour}"/>"#);
        }
        let ly = TOP + 10.0 + 20.0 * k as f64;
        let lx = LEFT + pw + 15.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" x2="{}" y1="{ly}" y2="{ly}" stroke="{colour}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 25.0,
            lx + 32.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Perceptually ordered ramp (dark blue to yellow), `t ∈ [0, 1]`.
pub fn ramp(t: f64) -> (u8, u8, u8) {
    const STOPS: [(f64, f64, f64); 5] = [
        (68.0, 1.0, 84.0),
        (59.0, 82.0, 139.0),
        (33.0, 145.0, 140.0),
        (94.0, 201.0, 98.0),
        (253.0, 231.0, 37.0),
    ];
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let pos = t * (STOPS.len() - 1) as f64;
    let i = (pos.floor() as usize).min(STOPS.len() - 2);
    let f = pos - i as f64;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let mix = |p: f64, q: f64| (p + f * (q - p)).round() as u8;
    (mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

/// Heatmap of a row-major, x-fastest `res × res` grid over `[0, side]²`
/// with `y` increasing upwards.
pub fn heatmap(title: &str, side: f64, res: usize, values: &[f64], unit: &str) -> String {
    let lo = values.iter().copied().filter(|v| v.is_finite()).fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let size = (H - TOP - BOTTOM).min(W - LEFT - RIGHT);
    let cell = size / res as f64;

    let mut out = String::new();
    header(&mut out, title);
    for j in 0..res {
        for i in 0..res {
            let v = values[j * res + i];
            let (r, g, b) = ramp((v - lo) / span);
            let _ = writeln!(
                out,
                r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="rgb({r},{g},{b})"/>"#,
                LEFT + i as f64 * cell,
                TOP + (res - 1 - j) as f64 * cell,
                cell + 0.05,
                cell + 0.05
            );
        }
    }
    let _ = writeln!(
        out,
        r##"<rect x="{LEFT}" y="{TOP}" width="{size}" height="{size}" fill="none" stroke="#333"/>"##
    );
    for (frac, anchor) in [(0.0, "start"), (1.0, "end")] {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{}" text-anchor="{anchor}">{}</text>"#,
            LEFT + frac * size,
            TOP + size + 18.0,
            tick_label(frac * side)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">x (m)</text>"#,
        LEFT + size / 2.0,
        TOP + size + 18.0
    );

    let bx = LEFT + size + 30.0;
    let steps = 50;
    for k in 0..steps {
        let t = k as f64 / (steps - 1) as f64;
        let (r, g, b) = ramp(t);
        let _ = writeln!(
            out,
            r#"<rect x="{bx}" y="{:.3}" width="20" height="{:.3}" fill="rgb({r},{g},{b})"/>"#,
            TOP + size * (1.0 - (k + 1) as f64 / steps as f64),
            size / steps as f64 + 0.05
        );
    }
    for (t, v) in [(0.0, lo), (1.0, hi)] {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.2}">{} {}</text>"#,
            bx + 26.0,
            TOP + size * (1.0 - t) + 4.0,
            tick_label(v),
            escape(unit)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charts_are_well_formed() {
        let s = Series {
            label: "a<b".into(),
            points: vec![(0.1, 1.0), (1.0, 2.0), (10.0, 3.0)],
        };
        let svg = line_chart("t", "x", "y", &[s], true);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("a&lt;b"));
        assert_eq!(svg.matches("<circle").count(), 3);

        let hm = heatmap("h", 640.0, 3, &[1.0; 9], "dB");
        assert_eq!(hm.matches("<rect").count(), 1 + 9 + 1 + 50);
    }

    #[test]
    fn ramp_endpoints() {
        assert_eq!(ramp(0.0), (68, 1, 84));
        assert_eq!(ramp(1.0), (253, 231, 37));
        assert_eq!(ramp(f64::NAN), ramp(0.0));
    }
}
