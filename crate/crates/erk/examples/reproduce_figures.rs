// Writes CSV and SVG files for every preset figure.
//
// cargo run --release --example reproduce_figures -- [out_dir]

use std::path::{Path, PathBuf};

use erk::cli::figures::{build_figure, FigureId, FigureSpec};
use erk::cli::output::Units;
use erk::cli::svg;
use erk::oracle::McConfig;
use erk::SeriesConfig;

pub fn run(out_dir: &Path, mc: Option<McConfig>) -> erk::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(|e| erk::Error::Io {
        path: out_dir.display().to_string(),
        source: e,
    })?;
    let mut written = Vec::new();
    for id in FigureId::ALL {
        let spec = FigureSpec {
            mc,
            ..FigureSpec::new(id)
        };
        let fig = build_figure(&spec, &SeriesConfig::default(), Units::Nats)?;
        let csv = out_dir.join(format!("{}.csv", id.name()));
        let chart = out_dir.join(format!("{}.svg", id.name()));
        let write = |path: &Path, text: String| {
            std::fs::write(path, text).map_err(|e| erk::Error::Io {
                path: path.display().to_string(),
                source: e,
            })
        };
        write(&csv, fig.table.to_csv())?;
        write(&chart, svg::render(&fig.table, id.title(), &fig.x_label, &fig.y_label))?;
        written.extend([csv, chart]);
    }
    Ok(written)
}

fn main() -> erk::Result<()> {
    let out_dir = std::env::args()
        .nth(1)
        .map_or_else(|| PathBuf::from("figures"), PathBuf::from);
    for path in run(&out_dir, Some(McConfig::standard(7)))? {
        println!("{}", path.display());
    }
    Ok(())
}
