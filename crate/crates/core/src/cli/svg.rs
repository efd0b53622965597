//! Minimal static line plots.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 6] = [
    "#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d68910", "#555555",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_scale: Scale,
    pub y_scale: Scale,
    pub series: Vec<Series>,
}

struct Axis {
    scale: Scale,
    lo: f64,
    hi: f64,
}

impl Axis {
    fn fit(scale: Scale, values: impl Iterator<Item = f64>) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            let v = match scale {
                Scale::Linear => v,
                Scale::Log => v.log10(),
            };
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() || !hi.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi - lo < 1e-12 {
            let pad = if lo == 0.0 { 1.0 } else { 0.05 * lo.abs() };
            lo -= pad;
            hi += pad;
        }
        Self { scale, lo, hi }
    }

    fn unit(&self, v: f64) -> f64 {
        let v = match self.scale {
            Scale::Linear => v,
            Scale::Log => v.log10(),
        };
        (v - self.lo) / (self.hi - self.lo)
    }

    fn ticks(&self) -> Vec<f64> {
        match self.scale {
            Scale::Linear => nice_ticks(self.lo, self.hi),
            Scale::Log => {
                let (lo, hi) = (self.lo.floor() as i32, self.hi.ceil() as i32);
                let decades: Vec<f64> = (lo..=hi)
                    .map(|e| 10f64.powi(e))
                    .filter(|t| (self.unit(*t) - 0.5).abs() <= 0.5 + 1e-9)
                    .collect();
                if decades.len() >= 2 {
                    return decades;
                }
                let mut ticks = Vec::new();
                for e in lo - 1..=hi {
                    for m in [1.0, 2.0, 5.0] {
                        let t = m * 10f64.powi(e);
                        if (self.unit(t) - 0.5).abs() <= 0.5 + 1e-9 {
                            ticks.push(t);
                        }
                    }
                }
                if ticks.len() >= 2 {
                    ticks
                } else {
                    nice_ticks(self.lo, self.hi)
                        .into_iter()
                        .map(|e| 10f64.powf(e))
                        .collect()
                }
            }
        }
    }
}

fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if !(1e-3..1e5).contains(&a) {
        return format!("{v:.0e}");
    }
    let s = format!("{:.6}", v);
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

impl Plot {
    /// Renders the plot. Points that cannot be shown on a log axis are
    /// dropped, and a series is broken wherever a point is dropped.
    pub fn render(&self) -> String {
        let keep = |&(x, y): &(f64, f64)| {
            x.is_finite()
                && y.is_finite()
                && (self.x_scale == Scale::Linear || x > 0.0)
                && (self.y_scale == Scale::Linear || y > 0.0)
        };
        let visible = || {
            self.series
                .iter()
                .flat_map(|s| s.points.iter().copied().filter(keep))
        };
        let xa = Axis::fit(self.x_scale, visible().map(|p| p.0));
        let ya = Axis::fit(self.y_scale, visible().map(|p| p.1));
        let pw = WIDTH - LEFT - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let px = |x: f64| LEFT + xa.unit(x) * pw;
        let py = |y: f64| TOP + (1.0 - ya.unit(y)) * ph;

        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(
            w,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            LEFT + pw / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            w,
            r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );
        for t in xa.ticks() {
            let x = px(t);
            let _ = writeln!(
                w,
                r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                TOP + ph,
                TOP + ph + 5.0,
                TOP + ph + 18.0,
                tick_label(t)
            );
        }
        for t in ya.ticks() {
            let y = py(t);
            let _ = writeln!(
                w,
                r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                LEFT - 5.0,
                LEFT - 8.0,
                y + 4.0,
                tick_label(t)
            );
        }
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 18.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            w,
            r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );

        for (i, s) in self.series.iter().enumerate() {
            let color = COLORS[i % COLORS.len()];
            let mut segments: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
            for p in &s.points {
                if keep(p) {
                    segments
                        .last_mut()
                        .expect("non-empty")
                        .push((px(p.0), py(p.1)));
                } else if !segments.last().expect("non-empty").is_empty() {
                    segments.push(Vec::new());
                }
            }
            for seg in segments.iter().filter(|s| !s.is_empty()) {
                let pts: Vec<String> = seg.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                let _ = writeln!(
                    w,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                    pts.join(" ")
                );
            }
            let ly = TOP + 14.0 + 20.0 * i as f64;
            let lx = WIDTH - RIGHT + 12.0;
            let _ = writeln!(
                w,
                r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
                lx + 24.0,
                lx + 30.0,
                ly + 4.0,
                escape(&s.label)
            );
        }
        let _ = writeln!(w, "</svg>");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plot(x_scale: Scale, y_scale: Scale) -> Plot {
        Plot {
            title: "t".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            x_scale,
            y_scale,
            series: vec![
                Series {
                    label: "a<b".into(),
                    points: vec![(1.0, 10.0), (2.0, 100.0), (3.0, 1000.0)],
                },
                Series {
                    label: "b".into(),
                    points: vec![(1.0, 5.0), (2.0, -1.0), (3.0, 50.0)],
                },
            ],
        }
    }

    #[test]
    fn renders_deterministically() {
        let p = plot(Scale::Linear, Scale::Log);
        let a = p.render();
        assert_eq!(a, p.render());
        assert!(a.starts_with("<svg"));
        assert!(a.contains("a&lt;b"));
        assert!(a.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn log_axis_breaks_series_at_invalid_points() {
        let s = plot(Scale::Linear, Scale::Log).render();
        // two segments for the second series, one for the first
        assert_eq!(s.matches("<polyline").count(), 3);
        let s = plot(Scale::Linear, Scale::Linear).render();
        assert_eq!(s.matches("<polyline").count(), 2);
    }

    #[test]
    fn tick_helpers() {
        let t = nice_ticks(0.0, 1.0);
        assert_eq!(t.len(), 6);
        assert_eq!(tick_label(t[3]), "0.6");
        assert_eq!(tick_label(0.25), "0.25");
        assert_eq!(tick_label(1e-5), "1e-5");
        assert_eq!(tick_label(100.0), "100");
    }
}
