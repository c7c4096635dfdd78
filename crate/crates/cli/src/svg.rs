//! Static SVG line plot with axes and point markers.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const PAD: f64 = 50.0;

/// Plots `points` (x and y both in [0, 1]) as a polyline with markers.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, points: &[(f64, f64)]) -> String {
    let sx = |x: f64| PAD + x.clamp(0.0, 1.0) * (WIDTH - 2.0 * PAD);
    let sy = |y: f64| HEIGHT - PAD - y.clamp(0.0, 1.0) * (HEIGHT - 2.0 * PAD);
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    )
    .unwrap();
    // Axes.
    writeln!(
        s,
        r#"<path d="M{} {} L{} {} L{} {}" fill="none" stroke="black"/>"#,
        sx(0.0),
        sy(1.0),
        sx(0.0),
        sy(0.0),
        sx(1.0),
        sy(0.0)
    )
    .unwrap();
    for i in 0..=5 {
        let t = i as f64 / 5.0;
        writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">{t}</text>"#,
            sx(t),
            sy(0.0) + 16.0
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="11">{t}</text>"#,
            sx(0.0) - 6.0,
            sy(t) + 4.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 10.0,
        escape(x_label)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="14" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 14 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    )
    .unwrap();
    if !points.is_empty() {
        let coords: Vec<String> = points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
            coords.join(" ")
        )
        .unwrap();
        for &(x, y) in points {
            writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#, sx(x), sy(y)).unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn markers_and_polyline() {
        let svg = line_plot("t", "p", "prob", &[(0.0, 0.0), (1.0, 1.0)]);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.contains("points=\"50.00,350.00 590.00,50.00\""));
        assert!(line_plot("a<b", "", "", &[]).contains("a&lt;b"));
    }
}
