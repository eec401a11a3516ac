//! Minimal static SVG plotting: enough for time-series panels and scatter
//! plots with linear fits, with no drawing dependencies.

pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub points: Vec<(f64, f64)>,
}

pub const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

const WIDTH: f64 = 860.0;
const PANEL_HEIGHT: f64 = 260.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 34.0;
const MARGIN_BOTTOM: f64 = 46.0;
const MAX_POINTS: usize = 1500;

struct Frame {
    left: f64,
    top: f64,
    width: f64,
    height: f64,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn sx(&self, x: f64) -> f64 {
        self.left + (x - self.x_min) / (self.x_max - self.x_min) * self.width
    }

    fn sy(&self, y: f64) -> f64 {
        self.top + self.height - (y - self.y_min) / (self.y_max - self.y_min) * self.height
    }
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for v in values.filter(|v| v.is_finite()) {
        min = min.min(v);
        max = max.max(v);
    }
    if !min.is_finite() || !max.is_finite() {
        return (0.0, 1.0);
    }
    if min == max {
        let pad = min.abs().max(1.0) * 0.1;
        return (min - pad, max + pad);
    }
    let pad = (max - min) * 0.05;
    (min - pad, max + pad)
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (1e-3..1e4).contains(&a) {
        let s = format!("{v:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        if s.is_empty() { "0".into() } else { s }
    } else {
        format!("{v:.2e}")
    }
}

fn axes(out: &mut String, f: &Frame, x_label: &str, y_label: &str) {
    out.push_str(&format!(
        "<rect x='{:.1}' y='{:.1}' width='{:.1}' height='{:.1}' fill='none' stroke='#444' stroke-width='1'/>\n",
        f.left, f.top, f.width, f.height
    ));
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let xv = f.x_min + t * (f.x_max - f.x_min);
        let yv = f.y_min + t * (f.y_max - f.y_min);
        let xp = f.sx(xv);
        let yp = f.sy(yv);
        out.push_str(&format!(
            "<line x1='{xp:.1}' y1='{:.1}' x2='{xp:.1}' y2='{:.1}' stroke='#444'/>\n",
            f.top + f.height,
            f.top + f.height + 5.0
        ));
        out.push_str(&format!(
            "<text x='{xp:.1}' y='{:.1}' font-size='11' text-anchor='middle' fill='#222'>{}</text>\n",
            f.top + f.height + 18.0,
            fmt_tick(xv)
        ));
        out.push_str(&format!(
            "<line x1='{:.1}' y1='{yp:.1}' x2='{:.1}' y2='{yp:.1}' stroke='#444'/>\n",
            f.left - 5.0,
            f.left
        ));
        out.push_str(&format!(
            "<text x='{:.1}' y='{:.1}' font-size='11' text-anchor='end' fill='#222'>{}</text>\n",
            f.left - 8.0,
            yp + 4.0,
            fmt_tick(yv)
        ));
        // Light gridline.
        out.push_str(&format!(
            "<line x1='{:.1}' y1='{yp:.1}' x2='{:.1}' y2='{yp:.1}' stroke='#ddd' stroke-width='0.5'/>\n",
            f.left,
            f.left + f.width
        ));
    }
    out.push_str(&format!(
        "<text x='{:.1}' y='{:.1}' font-size='12' text-anchor='middle' fill='#222'>{x_label}</text>\n",
        f.left + f.width / 2.0,
        f.top + f.height + 36.0
    ));
    out.push_str(&format!(
        "<text x='{:.1}' y='{:.1}' font-size='12' text-anchor='middle' fill='#222' transform='rotate(-90 {:.1} {:.1})'>{y_label}</text>\n",
        f.left - 52.0,
        f.top + f.height / 2.0,
        f.left - 52.0,
        f.top + f.height / 2.0
    ));
}

fn polyline(out: &mut String, f: &Frame, s: &Series) {
    if s.points.is_empty() {
        return;
    }
    let stride = (s.points.len() / MAX_POINTS).max(1);
    let mut d = String::new();
    for (i, (x, y)) in s.points.iter().enumerate() {
        if i % stride != 0 && i != s.points.len() - 1 {
            continue;
        }
        d.push_str(&format!("{:.2},{:.2} ", f.sx(*x), f.sy(*y)));
    }
    out.push_str(&format!(
        "<polyline points='{}' fill='none' stroke='{}' stroke-width='1.4'/>\n",
        d.trim_end(),
        s.color
    ));
}

fn legend(out: &mut String, f: &Frame, series: &[Series]) {
    let mut y = f.top + 14.0;
    for s in series {
        let x = f.left + f.width - 170.0;
        out.push_str(&format!(
            "<line x1='{x:.1}' y1='{:.1}' x2='{:.1}' y2='{:.1}' stroke='{}' stroke-width='2'/>\n",
            y - 4.0,
            x + 24.0,
            y - 4.0,
            s.color
        ));
        out.push_str(&format!(
            "<text x='{:.1}' y='{y:.1}' font-size='11' fill='#222'>{}</text>\n",
            x + 30.0,
            s.label
        ));
        y += 16.0;
    }
}

fn document(height: f64, body: &str) -> String {
    format!(
        "<svg xmlns='http://www.w3.org/2000/svg' version='1.1' width='{WIDTH:.0}' height='{height:.0}' viewBox='0 0 {WIDTH:.0} {height:.0}'>\n\
         <rect width='100%' height='100%' fill='white'/>\n{body}</svg>\n"
    )
}

/// Vertically stacked time-series panels sharing the x axis style.
pub fn time_panels(title: &str, x_label: &str, panels: &[(String, Vec<Series>)]) -> String {
    let mut body = format!(
        "<text x='{:.1}' y='20' font-size='14' font-weight='bold' fill='#111'>{title}</text>\n",
        MARGIN_LEFT
    );
    for (i, (y_label, series)) in panels.iter().enumerate() {
        let top = MARGIN_TOP + i as f64 * PANEL_HEIGHT + 10.0;
        let (x_min, x_max) =
            bounds(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
        let (y_min, y_max) =
            bounds(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
        let f = Frame {
            left: MARGIN_LEFT,
            top,
            width: WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
            height: PANEL_HEIGHT - MARGIN_BOTTOM,
            x_min,
            x_max,
            y_min,
            y_max,
        };
        axes(&mut body, &f, x_label, y_label);
        for s in series {
            polyline(&mut body, &f, s);
        }
        legend(&mut body, &f, series);
    }
    document(MARGIN_TOP + panels.len() as f64 * PANEL_HEIGHT + 14.0, &body)
}

/// Least-squares line over a point set.
pub fn linear_fit(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Scatter plot with one marker set per series and a per-series linear fit.
pub fn scatter_with_fits(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let mut body = format!(
        "<text x='{:.1}' y='20' font-size='14' font-weight='bold' fill='#111'>{title}</text>\n",
        MARGIN_LEFT
    );
    let (x_min, x_max) = bounds(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let (y_min, y_max) = bounds(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let f = Frame {
        left: MARGIN_LEFT,
        top: MARGIN_TOP + 10.0,
        width: WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
        height: PANEL_HEIGHT * 1.4 - MARGIN_BOTTOM,
        x_min,
        x_max,
        y_min,
        y_max,
    };
    axes(&mut body, &f, x_label, y_label);
    for s in series {
        if let Some((slope, intercept)) = linear_fit(&s.points) {
            let y1 = slope * f.x_min + intercept;
            let y2 = slope * f.x_max + intercept;
            body.push_str(&format!(
                "<line x1='{:.1}' y1='{:.1}' x2='{:.1}' y2='{:.1}' stroke='{}' stroke-width='1' stroke-dasharray='5,4'/>\n",
                f.sx(f.x_min),
                f.sy(y1.clamp(f.y_min, f.y_max)),
                f.sx(f.x_max),
                f.sy(y2.clamp(f.y_min, f.y_max)),
                s.color
            ));
        }
        for (x, y) in &s.points {
            body.push_str(&format!(
                "<circle cx='{:.1}' cy='{:.1}' r='4' fill='{}'/>\n",
                f.sx(*x),
                f.sy(*y),
                s.color
            ));
        }
    }
    legend(&mut body, &f, series);
    document(MARGIN_TOP + PANEL_HEIGHT * 1.4 + 14.0, &body)
}
