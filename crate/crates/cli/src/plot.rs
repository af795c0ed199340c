//! SVG figures: convergence of a run and relative error against the baselines.

use std::path::Path;

use plotters::prelude::*;
use sce_core::EnsembleTrace;

use crate::error::{CliError, Result};
use crate::report::sce_gain;
use crate::run::RunOutcome;

const SIZE: (u32, u32) = (720, 480);
const PALETTE: [RGBColor; 4] = [BLUE, RED, GREEN, MAGENTA];

fn plot_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::output(path, std::io::Error::other(e.to_string()))
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = ((hi - lo) * 0.05).max(hi.abs() * 1e-3).max(1e-9);
    (lo - pad, hi + pad)
}

/// MSSC per outer iteration, with the best value so far.
pub fn convergence(path: &Path, trace: &EnsembleTrace) -> Result<()> {
    let err = |e| plot_err(path, e);
    let recs = &trace.records;
    let n = recs.len().max(2);
    let (lo, hi) = span(recs.iter().flat_map(|r| [r.mssc, r.best_mssc]));
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(err)?;
    let mut chart = ChartBuilder::on(&root)
        .caption("Convergence", ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(36)
        .y_label_area_size(80)
        .build_cartesian_2d(1f64..n as f64, lo..hi)
        .map_err(err)?;
    chart
        .configure_mesh()
        .x_desc("iteration")
        .y_desc("MSSC")
        .draw()
        .map_err(err)?;
    let pts = |f: fn(&sce_core::IterationRecord) -> f64| -> Vec<(f64, f64)> {
        recs.iter().map(|r| (r.iter as f64, f(r))).collect()
    };
    chart
        .draw_series(LineSeries::new(pts(|r| r.mssc), &BLUE))
        .map_err(err)?
        .label("iteration")
        .legend(|(x, y)| PathElement::new(vec![(x, y), (x + 16, y)], BLUE));
    chart
        .draw_series(LineSeries::new(pts(|r| r.best_mssc), &RED))
        .map_err(err)?
        .label("best so far")
        .legend(|(x, y)| PathElement::new(vec![(x, y), (x + 16, y)], RED));
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()
        .map_err(err)?;
    root.present().map_err(err)
}

/// One bar per baseline: relative error of the ensemble against it, in percent.
pub fn relerr_bars(path: &Path, bars: &[(String, f64)]) -> Result<()> {
    let err = |e| plot_err(path, e);
    let (lo, hi) = span(bars.iter().map(|b| b.1).chain([0.0]));
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(err)?;
    let names: Vec<String> = bars.iter().map(|b| b.0.clone()).collect();
    let mut chart = ChartBuilder::on(&root)
        .caption("Relative error of the ensemble (%)", ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(36)
        .y_label_area_size(60)
        .build_cartesian_2d(-0.5f64..bars.len().max(1) as f64 - 0.5, lo..hi)
        .map_err(err)?;
    chart
        .configure_mesh()
        .disable_x_mesh()
        .x_labels(bars.len().max(1))
        .x_label_formatter(&|x| {
            let i = x.round();
            if (x - i).abs() < 1e-6 && i >= 0.0 {
                names.get(i as usize).cloned().unwrap_or_default()
            } else {
                String::new()
            }
        })
        .y_desc("RE %")
        .draw()
        .map_err(err)?;
    chart
        .draw_series(bars.iter().enumerate().map(|(i, b)| {
            let x = i as f64;
            Rectangle::new([(x - 0.3, 0.0), (x + 0.3, b.1)], PALETTE[i % PALETTE.len()].filled())
        }))
        .map_err(err)?;
    root.present().map_err(err)
}

/// Relative error of the ensemble against each baseline as a function of k.
pub fn relerr_sweep(path: &Path, outcomes: &[RunOutcome]) -> Result<()> {
    let err = |e| plot_err(path, e);
    let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for o in outcomes {
        let Some(sce) = o.record("sce") else { continue };
        for r in o.records.iter().filter(|r| r.method != "sce" && r.mssc > 0.0) {
            let point = (r.k as f64, sce_gain(sce.mssc, r.mssc));
            match series.iter_mut().find(|s| s.0 == r.method) {
                Some(s) => s.1.push(point),
                None => series.push((r.method.clone(), vec![point])),
            }
        }
    }
    let (x0, x1) = span(outcomes.iter().filter_map(|o| o.records.first()).map(|r| r.k as f64));
    let (lo, hi) = span(series.iter().flat_map(|s| s.1.iter().map(|p| p.1)).chain([0.0]));
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(err)?;
    let mut chart = ChartBuilder::on(&root)
        .caption("Relative error of the ensemble (%)", ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(36)
        .y_label_area_size(60)
        .build_cartesian_2d(x0..x1, lo..hi)
        .map_err(err)?;
    chart
        .configure_mesh()
        .x_desc("k")
        .y_desc("RE %")
        .draw()
        .map_err(err)?;
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        chart
            .draw_series(LineSeries::new(pts.iter().copied(), &color))
            .map_err(err)?
            .label(name.as_str())
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 16, y)], color));
    }
    if !series.is_empty() {
        chart
            .configure_series_labels()
            .background_style(WHITE.mix(0.8))
            .border_style(BLACK)
            .draw()
            .map_err(err)?;
    }
    root.present().map_err(err)
}
