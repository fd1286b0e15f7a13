use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use bmanova::harness::CurvePoint;

use crate::CliError;

/// CSV text: digest comment line, header, rows; `,` separated, LF endings.
pub fn csv(digest: &str, header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = format!("# config_digest={digest}\n");
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// The `c1` column of a file written by `sample` with `n` values per row.
pub fn read_largest(path: &Path, n: usize) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let bad = |line: usize, what: &str| CliError::usage(format!("{}:{line}: {what}", path.display()));
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.starts_with('#') && !l.trim().is_empty());
    let expected: Vec<String> = std::iter::once("sample_index".to_string())
        .chain((1..=n).map(|i| format!("c{i}")))
        .collect();
    match lines.next() {
        Some((_, header)) if header.split(',').eq(expected.iter().map(String::as_str)) => {}
        Some((i, _)) => return Err(bad(i + 1, &format!("expected header {}", expected.join(",")))),
        None => return Err(bad(1, "empty sample file")),
    }
    lines
        .map(|(i, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != n + 1 {
                return Err(bad(i + 1, &format!("expected {} columns", n + 1)));
            }
            fields[1].trim().parse().map_err(|_| bad(i + 1, "c1 is not a number"))
        })
        .collect()
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;

fn px(x: f64) -> f64 {
    MARGIN + x.clamp(0.0, 1.0) * (WIDTH - 2.0 * MARGIN)
}

fn py(y: f64) -> f64 {
    HEIGHT - MARGIN - y.clamp(0.0, 1.0) * (HEIGHT - 2.0 * MARGIN)
}

/// Empirical CDF as a blue step curve over [0,1] with the analytic values
/// as red crosses at the grid points.
pub fn overlay_svg(digest: &str, title: &str, sorted_samples: &[f64], curve: &[CurvePoint]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, "<!-- config_digest={digest} -->");
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (x0, x1, y0, y1) = (px(0.0), px(1.0), py(0.0), py(1.0));
    let _ = writeln!(
        s,
        r#"<path d="M{x0} {y1} L{x0} {y0} L{x1} {y0}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    for i in 0..=10 {
        let v = i as f64 / 10.0;
        let (tx, ty) = (px(v), py(v));
        let _ = writeln!(
            s,
            r#"<line x1="{tx:.2}" y1="{y0}" x2="{tx:.2}" y2="{:.2}" stroke="black"/><text x="{tx:.2}" y="{:.2}" font-size="12" text-anchor="middle">{v:.1}</text>"#,
            y0 + 5.0,
            y0 + 20.0
        );
        let _ = writeln!(
            s,
            r#"<line x1="{x0}" y1="{ty:.2}" x2="{:.2}" y2="{ty:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">{v:.1}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            ty + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="30" font-size="16" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    let mut points = format!("{:.2},{:.2}", px(0.0), py(0.0));
    let count = sorted_samples.len() as f64;
    let mut level = 0.0;
    for (i, &x) in sorted_samples.iter().enumerate() {
        let next = (i + 1) as f64 / count;
        let _ = write!(points, " {:.2},{:.2} {:.2},{:.2}", px(x), py(level), px(x), py(next));
        level = next;
    }
    let _ = write!(points, " {:.2},{:.2}", px(1.0), py(level));
    let _ = writeln!(s, r#"<polyline points="{points}" fill="none" stroke="blue" stroke-width="1.5"/>"#);

    for p in curve {
        let (cx, cy) = (px(p.x), py(p.analytic));
        let _ = writeln!(
            s,
            r#"<path d="M{:.2} {:.2} L{:.2} {:.2} M{:.2} {:.2} L{:.2} {:.2}" stroke="red" stroke-width="1.5"/>"#,
            cx - 4.0,
            cy - 4.0,
            cx + 4.0,
            cy + 4.0,
            cx - 4.0,
            cy + 4.0,
            cx + 4.0,
            cy - 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
