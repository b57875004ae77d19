//! Native SVG 1.1 emission — line plots and marching-squares contour
//! plots with axes, tick marks, and legends. No plotting dependency;
//! identical inputs yield identical bytes.

use std::fmt::Write as _;

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 540.0;
const MARGIN_L: f64 = 76.0;
const MARGIN_R: f64 = 26.0;
const MARGIN_T: f64 = 46.0;
const MARGIN_B: f64 = 62.0;

const PALETTE: [&str; 6] = [
    "#1f6feb", "#d73a49", "#2da44e", "#b08800", "#8250df", "#57606a",
];

/// One plotted curve. Points with nonpositive coordinates are dropped
/// from log-scaled axes (the polyline breaks there).
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
    pub markers: bool,
    pub line: bool,
}

impl Series {
    pub fn line(label: &str, points: Vec<(f64, f64)>) -> Series {
        Series {
            label: label.into(),
            points,
            dashed: false,
            markers: false,
            line: true,
        }
    }

    pub fn dashed(label: &str, points: Vec<(f64, f64)>) -> Series {
        Series {
            dashed: true,
            ..Series::line(label, points)
        }
    }

    pub fn scatter(label: &str, points: Vec<(f64, f64)>) -> Series {
        Series {
            markers: true,
            line: false,
            ..Series::line(label, points)
        }
    }

    pub fn line_with_markers(label: &str, points: Vec<(f64, f64)>) -> Series {
        Series {
            markers: true,
            ..Series::line(label, points)
        }
    }
}

struct Scale {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Scale {
    fn build<I: Iterator<Item = f64>>(values: I, log: bool) -> Scale {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            if !v.is_finite() || (log && v <= 0.0) {
                continue;
            }
            let v = if log { v.log10() } else { v };
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            lo = 0.0;
            hi = 1.0;
        }
        if hi - lo < 1e-12 {
            lo -= 0.5;
            hi += 0.5;
        }
        let pad = 0.04 * (hi - lo);
        Scale {
            lo: lo - pad,
            hi: hi + pad,
            log,
        }
    }

    /// Normalized [0,1] coordinate, or `None` when unrepresentable.
    fn norm(&self, v: f64) -> Option<f64> {
        let v = if self.log {
            if v <= 0.0 {
                return None;
            }
            v.log10()
        } else {
            v
        };
        v.is_finite()
            .then(|| (v - self.lo) / (self.hi - self.lo))
    }

    /// (normalized position, label) pairs.
    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let first = self.lo.ceil() as i64;
            let last = self.hi.floor() as i64;
            if first <= last {
                let count = (last - first + 1) as usize;
                let step = count.div_ceil(7).max(1) as i64;
                return (first..=last)
                    .step_by(step as usize)
                    .map(|j| {
                        let pos = (j as f64 - self.lo) / (self.hi - self.lo);
                        (pos, format!("1e{j}"))
                    })
                    .collect();
            }
            // Narrow log range without a full decade: three plain ticks.
            return (0..3)
                .map(|i| {
                    let frac = 0.1 + 0.4 * i as f64;
                    let v = 10f64.powf(self.lo + frac * (self.hi - self.lo));
                    (frac, format!("{v:.3e}"))
                })
                .collect();
        }
        let span = self.hi - self.lo;
        let raw = span / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|s| raw <= *s)
            .unwrap_or(10.0 * mag);
        let decimals = (-(step.log10().floor()) as i64).max(0) as usize;
        let mut ticks = Vec::new();
        let mut v = (self.lo / step).ceil() * step;
        while v <= self.hi + 1e-9 * span {
            ticks.push(((v - self.lo) / span, format!("{v:.decimals$}")));
            v += step;
        }
        ticks
    }
}

fn px(frac: f64) -> f64 {
    MARGIN_L + frac * (WIDTH - MARGIN_L - MARGIN_R)
}

fn py(frac: f64) -> f64 {
    HEIGHT - MARGIN_B - frac * (HEIGHT - MARGIN_T - MARGIN_B)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn open_svg(title: &str) -> String {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    let _ = writeln!(
        s,
        "<text x=\"{:.1}\" y=\"26\" font-family=\"sans-serif\" font-size=\"15\" \
         text-anchor=\"middle\">{}</text>",
        WIDTH / 2.0,
        escape(title)
    );
    s
}

fn frame_and_ticks(s: &mut String, x: &Scale, y: &Scale, x_label: &str, y_label: &str) {
    let _ = writeln!(
        s,
        "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{:.1}\" height=\"{:.1}\" \
         fill=\"none\" stroke=\"#444\"/>",
        WIDTH - MARGIN_L - MARGIN_R,
        HEIGHT - MARGIN_T - MARGIN_B
    );
    for (frac, label) in x.ticks() {
        let xp = px(frac);
        let _ = writeln!(
            s,
            "<line x1=\"{xp:.2}\" y1=\"{MARGIN_T}\" x2=\"{xp:.2}\" y2=\"{:.1}\" \
             stroke=\"#ddd\"/>",
            HEIGHT - MARGIN_B
        );
        let _ = writeln!(
            s,
            "<line x1=\"{xp:.2}\" y1=\"{:.1}\" x2=\"{xp:.2}\" y2=\"{:.1}\" stroke=\"#444\"/>",
            HEIGHT - MARGIN_B,
            HEIGHT - MARGIN_B + 5.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{xp:.2}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"middle\">{}</text>",
            HEIGHT - MARGIN_B + 18.0,
            escape(&label)
        );
    }
    for (frac, label) in y.ticks() {
        let yp = py(frac);
        let _ = writeln!(
            s,
            "<line x1=\"{MARGIN_L}\" y1=\"{yp:.2}\" x2=\"{:.1}\" y2=\"{yp:.2}\" \
             stroke=\"#ddd\"/>",
            WIDTH - MARGIN_R
        );
        let _ = writeln!(
            s,
            "<line x1=\"{:.1}\" y1=\"{yp:.2}\" x2=\"{MARGIN_L}\" y2=\"{yp:.2}\" stroke=\"#444\"/>",
            MARGIN_L - 5.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"end\">{}</text>",
            MARGIN_L - 8.0,
            yp + 4.0,
            escape(&label)
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\">{}</text>",
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        HEIGHT - 16.0,
        escape(x_label)
    );
    let ymid = (MARGIN_T + HEIGHT - MARGIN_B) / 2.0;
    let _ = writeln!(
        s,
        "<text x=\"20\" y=\"{ymid:.1}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\" transform=\"rotate(-90 20 {ymid:.1})\">{}</text>",
        escape(y_label)
    );
}

fn legend(s: &mut String, entries: &[(String, &str, bool)]) {
    for (i, (label, color, dashed)) in entries.iter().enumerate() {
        let y = MARGIN_T + 16.0 + 17.0 * i as f64;
        let x = WIDTH - MARGIN_R - 190.0;
        let dash = if *dashed { " stroke-dasharray=\"6 4\"" } else { "" };
        let _ = writeln!(
            s,
            "<line x1=\"{x:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" \
             stroke=\"{color}\" stroke-width=\"2\"{dash}/>",
            x + 26.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" \
             font-size=\"11\">{}</text>",
            x + 32.0,
            y + 4.0,
            escape(label)
        );
    }
}

/// Line/scatter plot; either axis may be log-scaled.
pub fn line_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    log_x: bool,
    log_y: bool,
    series: &[Series],
) -> String {
    let xs = Scale::build(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)), log_x);
    let ys = Scale::build(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)), log_y);
    let mut s = open_svg(title);
    frame_and_ticks(&mut s, &xs, &ys, x_label, y_label);
    let mut legend_entries = Vec::new();
    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        legend_entries.push((ser.label.clone(), color, ser.dashed));
        let mapped: Vec<Option<(f64, f64)>> = ser
            .points
            .iter()
            .map(|&(x, y)| match (xs.norm(x), ys.norm(y)) {
                (Some(fx), Some(fy)) => Some((px(fx), py(fy))),
                _ => None,
            })
            .collect();
        if !ser.markers {
            // Break the polyline at unrepresentable points.
            for run in mapped.split(|p| p.is_none()) {
                let pts: Vec<String> = run
                    .iter()
                    .flatten()
                    .map(|(x, y)| format!("{x:.2},{y:.2}"))
                    .collect();
                if pts.len() >= 2 {
                    let dash = if ser.dashed {
                        " stroke-dasharray=\"6 4\""
                    } else {
                        ""
                    };
                    let _ = writeln!(
                        s,
                        "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"{dash} \
                         points=\"{}\"/>",
                        pts.join(" ")
                    );
                }
            }
        }
        if ser.markers || ser.points.len() == 1 {
            for (x, y) in mapped.iter().flatten() {
                let _ = writeln!(
                    s,
                    "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"{color}\"/>"
                );
            }
        }
    }
    legend(&mut s, &legend_entries);
    s.push_str("</svg>\n");
    s
}

/// Marching-squares contour plot of `values[iy * xs.len() + ix]` sampled
/// on the tensor grid `xs × ys`, one path per level.
pub fn contour_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    xs: &[f64],
    ys: &[f64],
    values: &[f64],
    levels: &[(f64, String)],
) -> String {
    assert_eq!(values.len(), xs.len() * ys.len());
    let sx = Scale::build(xs.iter().copied(), false);
    let sy = Scale::build(ys.iter().copied(), false);
    let mut s = open_svg(title);
    frame_and_ticks(&mut s, &sx, &sy, x_label, y_label);
    let nx = xs.len();
    let value = |ix: usize, iy: usize| values[iy * nx + ix];
    let mut legend_entries = Vec::new();
    for (li, (level, label)) in levels.iter().enumerate() {
        let color = PALETTE[li % PALETTE.len()];
        legend_entries.push((label.clone(), color, false));
        let mut path = String::new();
        for iy in 0..ys.len() - 1 {
            for ix in 0..nx - 1 {
                let corners = [
                    value(ix, iy),
                    value(ix + 1, iy),
                    value(ix + 1, iy + 1),
                    value(ix, iy + 1),
                ];
                segments_for_cell(
                    *level,
                    (xs[ix], xs[ix + 1]),
                    (ys[iy], ys[iy + 1]),
                    corners,
                    &mut |a, b| {
                        let (fx, fy) = (sx.norm(a.0), sy.norm(a.1));
                        let (gx, gy) = (sx.norm(b.0), sy.norm(b.1));
                        if let (Some(fx), Some(fy), Some(gx), Some(gy)) = (fx, fy, gx, gy) {
                            let _ = write!(
                                path,
                                "M{:.2} {:.2}L{:.2} {:.2}",
                                px(fx),
                                py(fy),
                                px(gx),
                                py(gy)
                            );
                        }
                    },
                );
            }
        }
        if !path.is_empty() {
            let _ = writeln!(
                s,
                "<path fill=\"none\" stroke=\"{color}\" stroke-width=\"1.6\" d=\"{path}\"/>"
            );
        }
    }
    legend(&mut s, &legend_entries);
    s.push_str("</svg>\n");
    s
}

/// Emit the level-crossing segments of one cell. Corner order:
/// (x0,y0), (x1,y0), (x1,y1), (x0,y1).
fn segments_for_cell(
    level: f64,
    (x0, x1): (f64, f64),
    (y0, y1): (f64, f64),
    v: [f64; 4],
    emit: &mut impl FnMut((f64, f64), (f64, f64)),
) {
    let above = [v[0] > level, v[1] > level, v[2] > level, v[3] > level];
    let case = above
        .iter()
        .enumerate()
        .fold(0u8, |acc, (i, &b)| acc | ((b as u8) << i));
    if case == 0 || case == 15 {
        return;
    }
    let lerp = |a: f64, b: f64, va: f64, vb: f64| {
        if (vb - va).abs() < f64::MIN_POSITIVE {
            0.5 * (a + b)
        } else {
            a + (b - a) * ((level - va) / (vb - va)).clamp(0.0, 1.0)
        }
    };
    // Edge crossing points: bottom, right, top, left.
    let bottom = (lerp(x0, x1, v[0], v[1]), y0);
    let right = (x1, lerp(y0, y1, v[1], v[2]));
    let top = (lerp(x0, x1, v[3], v[2]), y1);
    let left = (x0, lerp(y0, y1, v[0], v[3]));
    match case {
        1 | 14 => emit(left, bottom),
        2 | 13 => emit(bottom, right),
        3 | 12 => emit(left, right),
        4 | 11 => emit(top, right),
        6 | 9 => emit(bottom, top),
        7 | 8 => emit(left, top),
        5 | 10 => {
            // Saddle: disambiguate by the cell-center average.
            let center_above = 0.25 * (v[0] + v[1] + v[2] + v[3]) > level;
            if (case == 5) == center_above {
                emit(left, top);
                emit(bottom, right);
            } else {
                emit(left, bottom);
                emit(top, right);
            }
        }
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_plot_is_wellformed_and_deterministic() {
        let series = [
            Series::line("data", vec![(1.0, 2.0), (2.0, 3.0), (3.0, 5.0)]),
            Series::dashed("fit", vec![(1.0, 2.1), (3.0, 4.9)]),
        ];
        let a = line_plot("title", "x", "y", false, false, &series);
        let b = line_plot("title", "x", "y", false, false, &series);
        assert_eq!(a, b);
        assert!(a.starts_with("<?xml"));
        assert!(a.contains("version=\"1.1\""));
        assert!(a.contains("<polyline"));
        assert!(a.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn log_axes_drop_nonpositive_points() {
        let series = [Series::line("d", vec![(1.0, 0.0), (10.0, 1.0), (100.0, 2.0)])];
        let svg = line_plot("t", "x", "y", true, true, &series);
        // Only two of the three points are representable: no polyline run
        // of length >= 2 exists until the positive pair, which does.
        assert!(svg.contains("<polyline"));
    }

    #[test]
    fn contours_of_a_radial_bump_close_around_the_peak() {
        let xs: Vec<f64> = (0..21).map(|i| -1.0 + 0.1 * i as f64).collect();
        let ys = xs.clone();
        let mut values = Vec::new();
        for y in &ys {
            for x in &xs {
                values.push((-(x * x + y * y)).exp());
            }
        }
        let levels = vec![(0.5, "0.5".to_string()), (0.9, "0.9".to_string())];
        let svg = contour_plot("bump", "x", "y", &xs, &ys, &values, &levels);
        assert_eq!(svg.matches("<path").count(), 2);
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn saddle_cells_emit_two_segments() {
        let mut count = 0;
        segments_for_cell(
            0.5,
            (0.0, 1.0),
            (0.0, 1.0),
            [1.0, 0.0, 1.0, 0.0],
            &mut |_, _| count += 1,
        );
        assert_eq!(count, 2);
    }
}
