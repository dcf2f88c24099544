use std::fmt::Write as _;

use super::compare::ComparisonReport;
use crate::scalar::Scalar;

const PANEL: f64 = 220.0;
const PAD: f64 = 30.0;

fn polyline<T: Scalar>(points: &[(T, T)], x0: f64, y0: f64, colour: &str) -> String {
    let coords: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{:.2},{:.2}", x0 + x.as_f64() * PANEL, y0 + PANEL - y.as_f64() * PANEL))
        .collect();
    format!(r#"<polyline fill="none" stroke="{colour}" stroke-width="2" points="{}"/>"#, coords.join(" "))
}

/// One ROC panel per dimension with the engine (blue) and baseline (orange) curves.
pub fn roc_svg<T: Scalar>(report: &ComparisonReport<T>) -> String {
    let n = report.dimensions.len().max(1) as f64;
    let width = n * (PANEL + 2.0 * PAD);
    let height = PANEL + 3.0 * PAD;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="12">"#
    );
    for (i, d) in report.dimensions.iter().enumerate() {
        let x0 = PAD + i as f64 * (PANEL + 2.0 * PAD);
        let y0 = 2.0 * PAD;
        let _ = writeln!(s, r#"<rect x="{x0}" y="{y0}" width="{PANEL}" height="{PANEL}" fill="none" stroke="black"/>"#);
        let _ = writeln!(
            s,
            r##"<line x1="{x0}" y1="{}" x2="{}" y2="{y0}" stroke="#999" stroke-dasharray="4"/>"##,
            y0 + PANEL,
            x0 + PANEL
        );
        let _ = writeln!(s, "{}", polyline(&d.lrf_curve.points, x0, y0, "#e67e22"));
        let _ = writeln!(s, "{}", polyline(&d.engine_curve.points, x0, y0, "#2471a3"));
        let _ = writeln!(
            s,
            r#"<text x="{x0}" y="{}">{} (BRB {:.3}, LRF {:.3})</text>"#,
            y0 - 8.0,
            d.dimension,
            d.engine_auc.as_f64(),
            d.lrf_auc.as_f64()
        );
    }
    s.push_str("</svg>\n");
    s
}
