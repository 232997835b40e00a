//! Output writers: CSV, JSON, and a self-contained SVG plot.
//!
//! All three are deterministic functions of the ensemble contents, so a
//! fixed seed and config reproduce every output byte.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{HarnessError, Result};
use crate::trace::TraceEnsemble;

/// One row per (round, statistic), long form for easy downstream loading.
pub fn write_csv(ensemble: &TraceEnsemble, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    check_nonempty(std::slice::from_ref(ensemble))?;
    let mut out = String::from("round,statistic,value\n");
    for round in &ensemble.rounds {
        for (name, value) in [
            ("mean", round.mean),
            ("p20", round.p20),
            ("p80", round.p80),
        ] {
            writeln!(out, "{},{name},{value}", round.t).expect("string write");
        }
    }
    fs::write(path, out).map_err(|e| HarnessError::io(path, e))
}

pub fn write_json(ensemble: &TraceEnsemble, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    check_nonempty(std::slice::from_ref(ensemble))?;
    let mut text =
        serde_json::to_string_pretty(ensemble).map_err(|e| HarnessError::validation(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

pub fn read_json(path: impl AsRef<Path>) -> Result<TraceEnsemble> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let ensemble: TraceEnsemble = serde_json::from_str(&text)
        .map_err(|e| HarnessError::parse(path, e.line() as u64, e.to_string()))?;
    ensemble.validate_bands()?;
    Ok(ensemble)
}

#[derive(Clone, Copy, Debug)]
pub struct PlotOptions {
    pub width: u32,
    pub height: u32,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            width: 800,
            height: 500,
        }
    }
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
    "#bcbd22", "#e377c2",
];

const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 46.0;
const MARGIN_BOTTOM: f64 = 52.0;

fn check_nonempty(ensembles: &[TraceEnsemble]) -> Result<()> {
    if ensembles.is_empty() {
        return Err(HarnessError::validation("nothing to write: no ensembles"));
    }
    for e in ensembles {
        if e.rounds.is_empty() {
            return Err(HarnessError::validation(format!(
                "ensemble {} has no rounds",
                e.metadata.algorithm
            )));
        }
        e.validate_bands()?;
    }
    Ok(())
}

/// Mean-regret curves with shaded 20th-to-80th percentile bands, one color
/// per ensemble. No external assets, fonts, or scripts.
pub fn render_svg(ensembles: &[TraceEnsemble], opts: PlotOptions) -> Result<String> {
    check_nonempty(ensembles)?;
    if opts.width < 200 || opts.height < 150 {
        return Err(HarnessError::validation(format!(
            "plot size {}x{} is too small to label",
            opts.width, opts.height
        )));
    }
    let w = f64::from(opts.width);
    let h = f64::from(opts.height);
    let plot_w = w - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = h - MARGIN_TOP - MARGIN_BOTTOM;

    let t_max = ensembles.iter().map(|e| e.horizon()).max().unwrap() as f64;
    let mut y_min = 0.0f64;
    let mut y_max = 0.0f64;
    for e in ensembles {
        for r in &e.rounds {
            y_min = y_min.min(r.p20.min(r.mean));
            y_max = y_max.max(r.p80.max(r.mean));
        }
    }
    if y_max - y_min < 1e-12 {
        y_max = y_min + 1.0;
    }
    let pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    let x = |t: f64| MARGIN_LEFT + (t / t_max) * plot_w;
    let y = |v: f64| MARGIN_TOP + (1.0 - (v - y_min) / (y_max - y_min)) * plot_h;

    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        opts.width, opts.height, opts.width, opts.height
    )
    .expect("string write");
    writeln!(
        svg,
        "<rect width=\"{}\" height=\"{}\" fill=\"white\"/>",
        opts.width, opts.height
    )
    .expect("string write");

    for tick in 0..=5 {
        let v = y_min + (y_max - y_min) * f64::from(tick) / 5.0;
        let yy = y(v);
        writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{yy:.2}\" x2=\"{:.2}\" y2=\"{yy:.2}\" stroke=\"#dddddd\" stroke-width=\"1\"/>",
            MARGIN_LEFT,
            w - MARGIN_RIGHT
        )
        .expect("string write");
        writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">{v:.3}</text>",
            MARGIN_LEFT - 6.0,
            yy + 4.0
        )
        .expect("string write");
    }
    for tick in 0..=5 {
        let t = t_max * f64::from(tick) / 5.0;
        let xx = x(t);
        writeln!(
            svg,
            "<line x1=\"{xx:.2}\" y1=\"{:.2}\" x2=\"{xx:.2}\" y2=\"{:.2}\" stroke=\"#dddddd\" stroke-width=\"1\"/>",
            MARGIN_TOP,
            h - MARGIN_BOTTOM
        )
        .expect("string write");
        writeln!(
            svg,
            "<text x=\"{xx:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">{:.0}</text>",
            h - MARGIN_BOTTOM + 16.0,
            t
        )
        .expect("string write");
    }
    if y_min < 0.0 && y_max > 0.0 {
        let yy = y(0.0);
        writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{yy:.2}\" x2=\"{:.2}\" y2=\"{yy:.2}\" stroke=\"#999999\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>",
            MARGIN_LEFT,
            w - MARGIN_RIGHT
        )
        .expect("string write");
    }

    for (idx, e) in ensembles.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let mut band = String::new();
        for r in &e.rounds {
            write!(band, "{:.2},{:.2} ", x(r.t as f64), y(r.p80)).expect("string write");
        }
        for r in e.rounds.iter().rev() {
            write!(band, "{:.2},{:.2} ", x(r.t as f64), y(r.p20)).expect("string write");
        }
        writeln!(
            svg,
            "<polygon points=\"{}\" fill=\"{color}\" fill-opacity=\"0.18\" stroke=\"none\"/>",
            band.trim_end()
        )
        .expect("string write");
        let mut line = String::new();
        for r in &e.rounds {
            write!(line, "{:.2},{:.2} ", x(r.t as f64), y(r.mean)).expect("string write");
        }
        writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>",
            line.trim_end()
        )
        .expect("string write");
    }

    writeln!(
        svg,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#333333\" stroke-width=\"1\"/>",
        MARGIN_LEFT,
        h - MARGIN_BOTTOM,
        w - MARGIN_RIGHT,
        h - MARGIN_BOTTOM
    )
    .expect("string write");
    writeln!(
        svg,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#333333\" stroke-width=\"1\"/>",
        MARGIN_LEFT,
        MARGIN_TOP,
        MARGIN_LEFT,
        h - MARGIN_BOTTOM
    )
    .expect("string write");
    writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#111111\">round</text>",
        MARGIN_LEFT + plot_w / 2.0,
        h - 12.0
    )
    .expect("string write");
    writeln!(
        svg,
        "<text x=\"16\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#111111\" transform=\"rotate(-90 16 {:.2})\">cumulative regret</text>",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    )
    .expect("string write");

    let mut legend_x = MARGIN_LEFT;
    for (idx, e) in ensembles.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let label = &e.metadata.algorithm;
        writeln!(
            svg,
            "<rect x=\"{legend_x:.2}\" y=\"16\" width=\"14\" height=\"14\" fill=\"{color}\" fill-opacity=\"0.6\"/>"
        )
        .expect("string write");
        writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"27\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#111111\">{label}</text>",
            legend_x + 18.0
        )
        .expect("string write");
        legend_x += 18.0 + 7.5 * label.len() as f64 + 14.0;
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn write_svg(
    ensembles: &[TraceEnsemble],
    opts: PlotOptions,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let svg = render_svg(ensembles, opts)?;
    fs::write(path, svg).map_err(|e| HarnessError::io(path, e))
}
