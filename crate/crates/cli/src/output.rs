//! CSV, JSON and SVG writers. Every float is printed with 17 significant
//! digits so that values survive a text round trip unchanged.

use std::fmt::Write as _;
use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

use crate::dataset::{Dataset, Kind, Point};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub const CSV_HEADER: &str = "model,kind,m,n,z_re,z_im,flags";

pub fn to_csv(data: &Dataset) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in &data.points {
        let flags: Vec<&str> = p.flags.iter().map(|f| f.as_str()).collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            data.meta.model,
            p.kind.as_str(),
            p.m,
            p.n,
            fmt_f64(p.z.re),
            fmt_f64(p.z.im),
            flags.join(";")
        );
    }
    out
}

struct SigFormatter;

impl Formatter for SigFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON with fixed-width floats and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, SigFormatter);
    value
        .serialize(&mut ser)
        .expect("serialising plain data cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 640.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 700.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 580.0;

#[derive(Debug, Clone, Copy)]
struct Range {
    lo: f64,
    hi: f64,
}

impl Range {
    fn padded(lo: f64, hi: f64) -> Range {
        let span = hi - lo;
        let pad = if span > 0.0 {
            0.05 * span
        } else {
            lo.abs().max(1.0)
        };
        Range {
            lo: lo - pad,
            hi: hi + pad,
        }
    }

    fn map(&self, v: f64, a: f64, b: f64) -> f64 {
        a + (v - self.lo) / (self.hi - self.lo) * (b - a)
    }

    /// Round tick positions with a 1-2-5 spacing.
    fn ticks(&self) -> (Vec<f64>, usize) {
        let raw = (self.hi - self.lo) / 8.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|f| f * mag)
            .find(|s| *s >= raw)
            .unwrap_or(10.0 * mag);
        let decimals = if step >= 1.0 {
            0
        } else {
            (-step.log10().floor()) as usize
        };
        let first = (self.lo / step).ceil() as i64;
        let last = (self.hi / step).floor() as i64;
        ((first..=last).map(|j| j as f64 * step).collect(), decimals)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn fmt_complex(re: f64, im: f64) -> String {
    let sign = if im.is_sign_negative() { '-' } else { '+' };
    format!("{re}{sign}{}i", im.abs())
}

fn stamp(data: &Dataset) -> String {
    let p = &data.meta.parameters;
    let mut s = format!(
        "{} omega2={}",
        data.meta.model,
        fmt_complex(p.omega2.re, p.omega2.im)
    );
    if let Some(a) = p.alpha {
        let _ = write!(s, " alpha={}", fmt_complex(a.re, a.im));
    }
    if let Some(l) = p.ell {
        let _ = write!(s, " l={l}");
    }
    match (&p.modes, p.m_max) {
        (Some(modes), _) => {
            let list: Vec<String> = modes.iter().map(|m| m.to_string()).collect();
            let _ = write!(s, " modes={}", list.join(","));
        }
        (None, Some(m)) => {
            let _ = write!(s, " m_max={m}");
        }
        (None, None) => {}
    }
    let _ = write!(s, " n_max={}", p.n_max);
    s
}

fn axis_ranges(data: &Dataset) -> (Range, Range) {
    if let Some(w) = data.meta.parameters.window {
        return (
            Range {
                lo: w.re_min,
                hi: w.re_max,
            },
            Range {
                lo: w.im_min,
                hi: w.im_max,
            },
        );
    }
    if data.points.is_empty() {
        return (Range { lo: -1.0, hi: 1.0 }, Range { lo: -1.0, hi: 1.0 });
    }
    let fold = |f: fn(&Point) -> f64| {
        data.points
            .iter()
            .map(f)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            })
    };
    let (x0, x1) = fold(|p| p.z.re);
    let (y0, y1) = fold(|p| p.z.im);
    (Range::padded(x0, x1), Range::padded(y0, y1))
}

fn style(p: &Point) -> (&'static str, &'static str, f64) {
    if p.is_reference() {
        ("reference", "blue", 2.5)
    } else if p.kind == Kind::Eigenvalue {
        ("eigenvalue", "red", 3.5)
    } else {
        ("resonance", "black", 2.5)
    }
}

/// Deterministic scatter plot of `Re z` against `Im z`. Every marker carries
/// its record (`data-kind`, `data-m`, `data-n`, `data-z`).
pub fn to_svg(data: &Dataset) -> String {
    let (xr, yr) = axis_ranges(data);
    let px = |x: f64| xr.map(x, LEFT, RIGHT);
    let py = |y: f64| yr.map(y, BOTTOM, TOP);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<clipPath id="plot-area"><rect x="{LEFT}" y="{TOP}" width="{}" height="{}"/></clipPath>"#,
        RIGHT - LEFT,
        BOTTOM - TOP
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="28" text-anchor="middle" font-size="15">Spectrum of the Higgs oscillator ({})</text>"#,
        0.5 * (LEFT + RIGHT),
        escape(&data.meta.model)
    );

    // frame, ticks and grid
    let _ = writeln!(s, r##"<g stroke="#cccccc" stroke-width="0.5">"##);
    let (xt, xd) = xr.ticks();
    let (yt, yd) = yr.ticks();
    for &t in &xt {
        let x = px(t);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{BOTTOM}"/>"#
        );
    }
    for &t in &yt {
        let y = py(t);
        let _ = writeln!(
            s,
            r#"<line x1="{LEFT}" y1="{y:.2}" x2="{RIGHT}" y2="{y:.2}"/>"#
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        RIGHT - LEFT,
        BOTTOM - TOP
    );
    for &t in &xt {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{:.*}</text>"#,
            px(t),
            BOTTOM + 18.0,
            xd,
            t
        );
    }
    for &t in &yt {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.2}" text-anchor="end" dominant-baseline="middle">{:.*}</text>"#,
            LEFT - 6.0,
            py(t),
            yd,
            t
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">Re z</text>"#,
        0.5 * (LEFT + RIGHT),
        BOTTOM + 42.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{0}" text-anchor="middle" transform="rotate(-90 20 {0})">Im z</text>"#,
        0.5 * (TOP + BOTTOM)
    );

    // markers: references below resonances below eigenvalues
    let _ = writeln!(s, r#"<g clip-path="url(#plot-area)">"#);
    let layers = [
        |p: &Point| p.is_reference(),
        |p: &Point| !p.is_reference() && p.kind == Kind::Resonance,
        |p: &Point| p.kind == Kind::Eigenvalue,
    ];
    for keep in layers {
        for p in data.points.iter().filter(|p| keep(p)) {
            let (class, fill, r) = style(p);
            let _ = writeln!(
                s,
                r#"<circle class="{class}" cx="{:.2}" cy="{:.2}" r="{r}" fill="{fill}" data-kind="{}" data-m="{}" data-n="{}" data-z="{},{}"/>"#,
                px(p.z.re),
                py(p.z.im),
                p.kind.as_str(),
                p.m,
                p.n,
                fmt_f64(p.z.re),
                fmt_f64(p.z.im)
            );
        }
    }
    let _ = writeln!(s, "</g>");

    // legend and parameter stamp
    let lx = RIGHT + 20.0;
    let entries = [
        ("red", 3.5, "eigenvalues"),
        ("black", 2.5, "resonances"),
        ("blue", 2.5, "resonances at omega = 0"),
    ];
    for (i, (fill, r, label)) in entries.iter().enumerate() {
        let y = TOP + 10.0 + 20.0 * i as f64;
        let _ = writeln!(s, r#"<circle cx="{lx}" cy="{y}" r="{r}" fill="{fill}"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{y}" dominant-baseline="middle">{label}</text>"#,
            lx + 10.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{LEFT}" y="{}" font-size="11">{}</text>"#,
        HEIGHT - 8.0,
        escape(&stamp(data))
    );
    s.push_str("</svg>\n");
    s
}
