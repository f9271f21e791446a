//! Convergence curves as a standalone SVG.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 170.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 50.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// Best-so-far fitness against real evaluations, averaged over runs.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(usize, f64)>,
}

/// Reads `run_id,fe,best_f` files into one series; values sharing an `fe`
/// are averaged across runs.
pub fn load_series<P: AsRef<Path>>(label: &str, paths: &[P]) -> Result<Series> {
    let mut by_fe: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for path in paths {
        let mut reader = csv::Reader::from_path(path)?;
        for row in reader.deserialize() {
            let (_run, fe, best_f): (usize, usize, f64) = row?;
            let slot = by_fe.entry(fe).or_insert((0.0, 0));
            slot.0 += best_f;
            slot.1 += 1;
        }
    }
    if by_fe.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(Series {
        label: label.to_string(),
        points: by_fe
            .into_iter()
            .map(|(fe, (s, n))| (fe, s / n as f64))
            .collect(),
    })
}

/// Groups `{F}_{dim}_{algo}_runNN.csv` files of a result directory by algorithm.
pub fn series_from_dir(dir: &Path) -> Result<Vec<Series>> {
    let mut groups: BTreeMap<String, Vec<std::path::PathBuf>> = BTreeMap::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else {
            continue;
        };
        if path.extension().and_then(|e| e.to_str()) != Some("csv") {
            continue;
        }
        let Some((cell, _run)) = stem.rsplit_once("_run") else {
            continue;
        };
        groups
            .entry(cell.to_string())
            .or_default()
            .push(path.clone());
    }
    let mut out = Vec::new();
    for (label, mut paths) in groups {
        paths.sort();
        out.push(load_series(&label, &paths)?);
    }
    if out.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(out)
}

/// Renders `series` to an SVG document.
pub fn render_svg(series: &[Series], log_scale: bool) -> Result<String> {
    let all: Vec<(usize, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .collect();
    if all.is_empty() {
        return Err(Error::EmptyInput);
    }
    let transform = |v: f64| {
        if log_scale {
            v.max(f64::MIN_POSITIVE).log10()
        } else {
            v
        }
    };
    let (fe_min, fe_max) = all.iter().fold((usize::MAX, 0), |(lo, hi), &(fe, _)| {
        (lo.min(fe), hi.max(fe))
    });
    let (mut y_min, mut y_max) =
        all.iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, v)| {
                let t = transform(v);
                (lo.min(t), hi.max(t))
            });
    if y_max - y_min < 1e-12 {
        y_min -= 0.5;
        y_max += 0.5;
    }
    let fe_span = (fe_max - fe_min).max(1) as f64;
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |fe: usize| MARGIN_LEFT + (fe - fe_min) as f64 / fe_span * plot_w;
    let sy = |t: f64| MARGIN_TOP + (y_max - t) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );

    for i in 0..=5 {
        let frac = i as f64 / 5.0;
        let fe = fe_min + ((fe_max - fe_min) as f64 * frac).round() as usize;
        let x = sx(fe);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="black"/><text x="{x:.1}" y="{:.1}" text-anchor="middle">{fe}</text>"#,
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 5.0,
            MARGIN_TOP + plot_h + 20.0
        );
        let t = y_min + (y_max - y_min) * frac;
        let y = sy(t);
        let label = if log_scale {
            format!("1e{t:.1}")
        } else {
            format!("{t:.3e}")
        };
        let _ = writeln!(
            svg,
            r#"<line x1="{:.1}" y1="{y:.1}" x2="{MARGIN_LEFT}" y2="{y:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" text-anchor="end">{label}</text>"#,
            MARGIN_LEFT - 5.0,
            MARGIN_LEFT - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">real evaluations</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    let y_title = if log_scale {
        "best fitness (log10)"
    } else {
        "best fitness"
    };
    let _ = writeln!(
        svg,
        r#"<text transform="translate(16 {:.1}) rotate(-90)" text-anchor="middle">{y_title}</text>"#,
        MARGIN_TOP + plot_h / 2.0
    );

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(fe, v)| format!("{:.2},{:.2}", sx(fe), sy(transform(v))))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = MARGIN_TOP + 15.0 + 20.0 * i as f64;
        let lx = WIDTH - MARGIN_RIGHT + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{:.1}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            lx + 20.0,
            lx + 25.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Writes the SVG for `series` to `output`.
pub fn emit_convergence_plot(series: &[Series], output: &Path, log_scale: bool) -> Result<()> {
    fs::write(output, render_svg(series, log_scale)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{make_problem, ProblemId};
    use crate::optimizer::{run, Algorithm, RphsaConfig};

    fn write_runs(dir: &Path) {
        let cfg = RphsaConfig {
            k: 5,
            n_local: 10,
            budget: 60,
            init_size: 20,
            ..RphsaConfig::default()
        };
        for algorithm in [Algorithm::Rphsa, Algorithm::Baseline] {
            for r in 0..2 {
                let mut problem = make_problem(ProblemId::F1, 10, 0).unwrap();
                let rec = run(
                    &mut problem,
                    &RphsaConfig {
                        seed: r,
                        ..cfg.clone()
                    },
                    algorithm,
                )
                .unwrap();
                let file =
                    fs::File::create(dir.join(format!("F1_10_{algorithm}_run{r:02}.csv"))).unwrap();
                rec.write_csv(file, r as usize).unwrap();
            }
        }
    }

    #[test]
    fn two_algorithms_two_monotone_series() {
        let dir = tempfile::tempdir().unwrap();
        write_runs(dir.path());
        let series = series_from_dir(dir.path()).unwrap();
        assert_eq!(series.len(), 2);
        for s in &series {
            assert_eq!(s.points.len(), 60);
            assert!(s.points.windows(2).all(|w| w[1].1 <= w[0].1));
        }
        let out = dir.path().join("plot.svg");
        emit_convergence_plot(&series, &out, true).unwrap();
        let svg = fs::read_to_string(out).unwrap();
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("F1_10_rphsa"));
    }

    #[test]
    fn point_count_is_distinct_fe_count() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.csv");
        fs::write(
            &path,
            "run_id,fe,best_f\n0,1,5\n0,2,4\n1,1,3\n1,2,2\n1,3,1\n",
        )
        .unwrap();
        let s = load_series("a", &[&path]).unwrap();
        assert_eq!(s.points, vec![(1, 4.0), (2, 3.0), (3, 1.0)]);
    }

    #[test]
    fn empty_input() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        fs::write(&path, "run_id,fe,best_f\n").unwrap();
        assert!(matches!(load_series("x", &[&path]), Err(Error::EmptyInput)));
        assert!(matches!(render_svg(&[], false), Err(Error::EmptyInput)));
        assert!(matches!(
            series_from_dir(dir.path()),
            Err(Error::EmptyInput)
        ));
    }
}
