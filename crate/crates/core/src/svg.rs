//! Fixed-layout SVG charts for the report command and the web demo.
//!
//! Output depends only on the input data: coordinates are printed with two
//! decimals and element order follows input order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use chrono::NaiveDate;

use crate::cascade::RiskCurve;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 230.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 52.0;

pub const PALETTE: [&str; 6] = ["#c0392b", "#2471a3", "#7d3c98", "#7f8c8d", "#d68910", "#229954"];

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn tick_label(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let a = x.abs();
    if (1e-3..1e6).contains(&a) {
        let s = format!("{x:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{x:.0e}")
    }
}

#[derive(Debug, Clone, Copy)]
struct Scale {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Scale {
    fn linear(lo: f64, hi: f64) -> Self {
        let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
        Self { lo, hi, log: false }
    }

    fn log(lo: f64, hi: f64) -> Self {
        let lo = 10f64.powf(lo.max(f64::MIN_POSITIVE).log10().floor());
        let hi = 10f64.powf(hi.max(lo).log10().ceil()).max(lo * 10.0);
        Self { lo, hi, log: true }
    }

    fn frac(&self, v: f64) -> f64 {
        if self.log {
            (v.log10() - self.lo.log10()) / (self.hi.log10() - self.lo.log10())
        } else {
            (v - self.lo) / (self.hi - self.lo)
        }
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let mut t = Vec::new();
            let mut v = self.lo;
            while v <= self.hi * 1.000001 {
                t.push(v);
                v *= 10.0;
            }
            return t;
        }
        let span = self.hi - self.lo;
        let raw = span / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .into_iter()
            .map(|m| m * mag)
            .find(|s| span / s <= 6.0)
            .unwrap_or(10.0 * mag);
        let mut t = Vec::new();
        let mut v = (self.lo / step).ceil() * step;
        while v <= self.hi + step * 1e-9 {
            t.push(if v.abs() < step * 1e-9 { 0.0 } else { v });
            v += step;
        }
        t
    }
}

/// Padded linear range over the values, always including zero when `zero`.
fn linear_range(values: impl Iterator<Item = f64>, zero: bool) -> Scale {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return Scale::linear(0.0, 1.0);
    }
    if zero {
        lo = lo.min(0.0);
        hi = hi.max(0.0);
    }
    let pad = if hi > lo { (hi - lo) * 0.05 } else { 0.5 };
    Scale::linear(if zero && lo == 0.0 { 0.0 } else { lo - pad }, hi + pad)
}

struct Canvas {
    out: String,
    x: Scale,
    y: Scale,
}

impl Canvas {
    fn new(title: &str, x: Scale, y: Scale) -> Self {
        let mut out = String::new();
        let _ = write!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
            w = WIDTH,
            h = HEIGHT
        );
        out.push('\n');
        let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            num(LEFT + (WIDTH - LEFT - RIGHT) / 2.0),
            escape(title)
        );
        Self { out, x, y }
    }

    fn px(&self, v: f64) -> f64 {
        LEFT + self.x.frac(v) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, v: f64) -> f64 {
        HEIGHT - BOTTOM - self.y.frac(v) * (HEIGHT - TOP - BOTTOM)
    }

    fn axes(&mut self, x_label: &str, y_label: &str, x_ticks: &[(f64, String)]) {
        let (x0, x1) = (LEFT, WIDTH - RIGHT);
        let (y0, y1) = (HEIGHT - BOTTOM, TOP);
        let mut s = String::new();
        for t in self.y.ticks() {
            let y = self.py(t);
            let _ = writeln!(
                s,
                r##"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#e5e5e5"/><text x="{}" y="{}" text-anchor="end">{}</text>"##,
                num(x0),
                num(x1),
                num(x0 - 6.0),
                num(y + 4.0),
                escape(&tick_label(t)),
                y = num(y)
            );
        }
        for (t, label) in x_ticks {
            let x = self.px(*t);
            let _ = writeln!(
                s,
                r##"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="#999"/><text x="{x}" y="{}" text-anchor="middle">{}</text>"##,
                num(y0),
                num(y0 + 5.0),
                num(y0 + 18.0),
                escape(label),
                x = num(x)
            );
        }
        let _ = writeln!(
            s,
            r##"<path d="M{} {} V{} H{}" fill="none" stroke="#333"/>"##,
            num(x0),
            num(y1),
            num(y0),
            num(x1)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            num((x0 + x1) / 2.0),
            num(HEIGHT - 12.0),
            escape(x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
            num((y0 + y1) / 2.0),
            num((y0 + y1) / 2.0),
            escape(y_label)
        );
        self.out.push_str(&s);
    }

    fn polyline(&mut self, pts: &[(f64, f64)], color: &str, dashed: bool) {
        if pts.is_empty() {
            return;
        }
        let coords: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{},{}", num(self.px(x)), num(self.py(y))))
            .collect();
        let dash = if dashed { r#" stroke-dasharray="5 4""# } else { "" };
        let _ = writeln!(
            self.out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"{dash}/>"#,
            coords.join(" ")
        );
    }

    fn dots(&mut self, pts: &[(f64, f64)], color: &str) {
        for &(x, y) in pts {
            let _ = writeln!(
                self.out,
                r#"<circle cx="{}" cy="{}" r="3" fill="{color}"/>"#,
                num(self.px(x)),
                num(self.py(y))
            );
        }
    }

    fn band(&mut self, pts: &[(f64, f64, f64)], color: &str) {
        if pts.len() < 2 {
            for &(x, lo, hi) in pts {
                let _ = writeln!(
                    self.out,
                    r#"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="{color}" stroke-opacity="0.4" stroke-width="6"/>"#,
                    num(self.py(lo)),
                    num(self.py(hi)),
                    x = num(self.px(x))
                );
            }
            return;
        }
        let mut d = String::new();
        for (i, &(x, _, hi)) in pts.iter().enumerate() {
            let _ = write!(
                d,
                "{}{} {} ",
                if i == 0 { "M" } else { "L" },
                num(self.px(x)),
                num(self.py(hi))
            );
        }
        for &(x, lo, _) in pts.iter().rev() {
            let _ = write!(d, "L{} {} ", num(self.px(x)), num(self.py(lo)));
        }
        d.push('Z');
        let _ = writeln!(
            self.out,
            r#"<path d="{d}" fill="{color}" fill-opacity="0.18" stroke="none"/>"#
        );
    }

    fn legend(&mut self, entries: &[(String, &str)]) {
        for (i, (name, color)) in entries.iter().enumerate() {
            let y = TOP + 8.0 + 18.0 * i as f64;
            let x = WIDTH - RIGHT + 14.0;
            let _ = writeln!(
                self.out,
                r#"<rect x="{}" y="{}" width="12" height="12" fill="{color}"/><text x="{}" y="{}">{}</text>"#,
                num(x),
                num(y - 10.0),
                num(x + 18.0),
                num(y),
                escape(name)
            );
        }
    }

    fn note(&mut self, text: &str) {
        let _ = writeln!(
            self.out,
            r##"<text x="{}" y="{}" text-anchor="middle" fill="#666">{}</text>"##,
            num(LEFT + (WIDTH - LEFT - RIGHT) / 2.0),
            num(HEIGHT / 2.0),
            escape(text)
        );
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

/// Daily hate / counterspeech / neutral counts as line series.
pub fn daily_series_chart(days: &[NaiveDate], counts: &[[u64; 3]]) -> String {
    let n = days.len().min(counts.len());
    let x = Scale::linear(0.0, n.saturating_sub(1) as f64);
    let y = linear_range(counts[..n].iter().flat_map(|c| c.iter().map(|&v| v as f64)), true);
    let mut c = Canvas::new("Daily tweets by label", x, y);
    let ticks: Vec<(f64, String)> = if n == 0 {
        Vec::new()
    } else {
        let step = (n / 5).max(1);
        (0..n)
            .step_by(step)
            .map(|i| (i as f64, days[i].format("%Y-%m-%d").to_string()))
            .collect()
    };
    c.axes("day", "tweets", &ticks);
    if n == 0 {
        c.note("no data");
    }
    let names = ["hate", "counterspeech", "neutral"];
    for k in 0..3 {
        let pts: Vec<(f64, f64)> = (0..n).map(|i| (i as f64, counts[i][k] as f64)).collect();
        c.polyline(&pts, PALETTE[k], false);
    }
    c.legend(
        &names
            .iter()
            .enumerate()
            .map(|(k, n)| (n.to_string(), PALETTE[k]))
            .collect::<Vec<_>>(),
    );
    c.finish()
}

/// Log-log scatter of per-user tweet-count histograms.
pub fn tail_chart(hists: &[(&str, &BTreeMap<u64, u64>)]) -> String {
    let xs = hists
        .iter()
        .flat_map(|(_, h)| h.keys().map(|&k| k as f64))
        .filter(|&v| v > 0.0);
    let ys = hists
        .iter()
        .flat_map(|(_, h)| h.values().map(|&v| v as f64))
        .filter(|&v| v > 0.0);
    let (xmin, xmax) = xs.fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(v), b.max(v)));
    let (ymin, ymax) = ys.fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(v), b.max(v)));
    let empty = !xmin.is_finite();
    let x = if empty {
        Scale::log(1.0, 10.0)
    } else {
        Scale::log(xmin, xmax)
    };
    let y = if empty {
        Scale::log(1.0, 10.0)
    } else {
        Scale::log(ymin, ymax)
    };
    let mut c = Canvas::new("Per-user activity distribution", x, y);
    let ticks: Vec<(f64, String)> = x.ticks().into_iter().map(|t| (t, tick_label(t))).collect();
    c.axes("tweets per user", "users", &ticks);
    if empty {
        c.note("no data");
    }
    let mut legend = Vec::new();
    for (i, (name, h)) in hists.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<(f64, f64)> = h
            .iter()
            .filter(|(&k, &v)| k > 0 && v > 0)
            .map(|(&k, &v)| (k as f64, v as f64))
            .collect();
        c.dots(&pts, color);
        legend.push((name.to_string(), color));
    }
    c.legend(&legend);
    c.finish()
}

/// Bars of observed/baseline ratios with a dashed reference at 1.
pub fn ratio_bars(title: &str, bars: &[(String, f64)]) -> String {
    let n = bars.len();
    let x = Scale::linear(0.0, n.max(1) as f64);
    let y = linear_range(bars.iter().map(|b| b.1).chain([1.0]), true);
    let mut c = Canvas::new(title, x, y);
    c.axes("category pair", "observed / baseline", &[]);
    if n == 0 {
        c.note("no defined ratios");
    }
    let slot = (WIDTH - LEFT - RIGHT) / n.max(1) as f64;
    for (i, (label, v)) in bars.iter().enumerate() {
        let x0 = LEFT + slot * i as f64 + slot * 0.15;
        let (ytop, ybase) = (c.py(*v), c.py(0.0));
        let _ = writeln!(
            c.out,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
            num(x0),
            num(ytop.min(ybase)),
            num(slot * 0.7),
            num((ybase - ytop).abs()),
            PALETTE[i % 2]
        );
        let cx = x0 + slot * 0.35;
        let _ = writeln!(
            c.out,
            r#"<text x="{cx}" y="{}" text-anchor="middle" font-size="10">{}</text><text x="{cx}" y="{}" text-anchor="middle" font-size="10">{}</text>"#,
            num(ytop.min(ybase) - 4.0),
            num(*v),
            num(HEIGHT - BOTTOM + 16.0),
            escape(label),
            cx = num(cx)
        );
    }
    let y1 = c.py(1.0);
    let _ = writeln!(
        c.out,
        r##"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#333" stroke-dasharray="6 4"/>"##,
        num(LEFT),
        num(WIDTH - RIGHT),
        y = num(y1)
    );
    c.finish()
}

pub type RiskPoint = (u32, Option<f64>, Option<f64>, Option<f64>);

/// One risk curve as plotted: per-level empirical risk and baseline
/// mean/std, any of which may be missing.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskSeries {
    pub name: String,
    /// `(n, risk, baseline mean, baseline std)`.
    pub points: Vec<RiskPoint>,
}

impl RiskSeries {
    pub fn from_curve(curve: &RiskCurve) -> Self {
        Self {
            name: curve.pair.to_string(),
            points: curve
                .levels
                .iter()
                .map(|l| (l.n, l.risk, l.baseline_mean, l.baseline_std))
                .collect(),
        }
    }
}

/// Empirical risk lines with dashed baseline means and mean ± std bands.
pub fn risk_chart(series: &[RiskSeries]) -> String {
    let n_max = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .max()
        .unwrap_or(1);
    let x = Scale::linear(1.0, f64::from(n_max.max(2)));
    let values = series.iter().flat_map(|s| {
        s.points.iter().flat_map(|&(_, r, m, sd)| {
            let sd = sd.unwrap_or(0.0);
            [r, m.map(|m| m + sd), m.map(|m| (m - sd).max(0.0))]
                .into_iter()
                .flatten()
        })
    });
    let y = linear_range(values, true);
    let mut c = Canvas::new("Infection risk by exposure", x, y);
    let step = (n_max as usize / 8).max(1);
    let ticks: Vec<(f64, String)> = (1..=n_max.max(1))
        .step_by(step)
        .map(|n| (f64::from(n), n.to_string()))
        .collect();
    c.axes("exposures n", "risk", &ticks);
    if series.is_empty() {
        c.note("no curves");
    }
    let mut legend = Vec::new();
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let band: Vec<(f64, f64, f64)> = s
            .points
            .iter()
            .filter_map(|&(n, _, m, sd)| {
                let (m, sd) = (m?, sd.unwrap_or(0.0));
                Some((f64::from(n), (m - sd).max(0.0), m + sd))
            })
            .collect();
        c.band(&band, color);
        let mean: Vec<(f64, f64)> = s
            .points
            .iter()
            .filter_map(|&(n, _, m, _)| Some((f64::from(n), m?)))
            .collect();
        c.polyline(&mean, color, true);
        let emp: Vec<(f64, f64)> = s
            .points
            .iter()
            .filter_map(|&(n, r, _, _)| Some((f64::from(n), r?)))
            .collect();
        c.polyline(&emp, color, false);
        c.dots(&emp, color);
        legend.push((s.name.clone(), color));
        legend.push((format!("{} baseline", s.name), color));
    }
    c.legend(&legend);
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn well_formed(svg: &str) {
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }

    #[test]
    fn daily_chart_has_three_series() {
        let days: Vec<NaiveDate> = NaiveDate::from_ymd_opt(2020, 3, 1)
            .unwrap()
            .iter_days()
            .take(10)
            .collect();
        let counts: Vec<[u64; 3]> = (0..10).map(|i| [i, 2 * i, 3]).collect();
        let svg = daily_series_chart(&days, &counts);
        well_formed(&svg);
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(svg.contains("2020-03-01"));
    }

    #[test]
    fn empty_inputs_render() {
        well_formed(&daily_series_chart(&[], &[]));
        well_formed(&tail_chart(&[]));
        well_formed(&ratio_bars("r", &[]));
        well_formed(&risk_chart(&[]));
    }

    #[test]
    fn labels_are_escaped() {
        let svg = ratio_bars("ratios", &[("hate->hate".into(), 2.5)]);
        assert!(svg.contains("hate-&gt;hate"));
        assert!(!svg.contains("hate->hate"));
    }

    #[test]
    fn risk_chart_draws_band_and_lines() {
        let s = RiskSeries {
            name: "hate->hate".into(),
            points: vec![
                (1, Some(0.3), Some(0.2), Some(0.05)),
                (2, Some(0.4), Some(0.2), Some(0.05)),
                (3, None, None, None),
            ],
        };
        let svg = risk_chart(&[s]);
        well_formed(&svg);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("fill-opacity").count(), 1);
    }

    #[test]
    fn output_is_deterministic() {
        let mut h = BTreeMap::new();
        h.insert(1, 40);
        h.insert(3, 7);
        h.insert(20, 1);
        assert_eq!(tail_chart(&[("hate", &h)]), tail_chart(&[("hate", &h)]));
        well_formed(&tail_chart(&[("hate", &h)]));
    }

    #[test]
    fn linear_ticks_are_round() {
        let s = Scale::linear(0.0, 97.0);
        assert_eq!(s.ticks(), vec![0.0, 20.0, 40.0, 60.0, 80.0]);
        let l = Scale::log(1.0, 250.0);
        assert_eq!(l.ticks(), vec![1.0, 10.0, 100.0, 1000.0]);
    }
}
