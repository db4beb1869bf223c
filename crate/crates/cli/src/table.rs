use std::io::{self, Write};

use anisofem::bench::TableRow;
use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Latex,
}

pub const HEADER: &str = "step,N,E,E_r,EI,EI_r,H_err,delta";

fn cells(r: &TableRow<f64>) -> [Option<f64>; 6] {
    [r.e, r.e_r, r.ei, r.ei_r, r.h_err, r.delta]
}

pub fn write(out: &mut dyn Write, rows: &[TableRow<f64>], format: Format) -> io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "{HEADER}")?;
            for r in rows {
                let fields: Vec<String> = cells(r).iter().map(|v| v.map(|x| x.to_string()).unwrap_or_default()).collect();
                writeln!(out, "{},{},{}", r.step, r.n_cells, fields.join(","))?;
            }
        }
        Format::Latex => {
            writeln!(out, "step & $N$ & $E$ & $E_r$ & $EI$ & $EI_r$ & $||H-H_r||$ & $\\delta$\\\\")?;
            writeln!(out, "\\hline")?;
            for r in rows {
                let c = cells(r);
                let fixed = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into());
                let short = |v: Option<f64>| v.map(|x| format!("{x:.2}")).unwrap_or_else(|| "-".into());
                let h = c[4].map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into());
                writeln!(
                    out,
                    "{} & {} & {} & {} & {} & {} & {} & {}\\\\",
                    r.step,
                    r.n_cells,
                    fixed(c[0]),
                    fixed(c[1]),
                    fixed(c[2]),
                    fixed(c[3]),
                    h,
                    short(c[5])
                )?;
            }
        }
    }
    Ok(())
}

/// One line per defined index: `series,N,value`.
pub fn write_plot(out: &mut dyn Write, rows: &[TableRow<f64>]) -> io::Result<()> {
    writeln!(out, "series,N,value")?;
    for (name, pick) in [
        ("E", (|r: &TableRow<f64>| r.e) as fn(&TableRow<f64>) -> Option<f64>),
        ("E_r", |r| r.e_r),
        ("EI", |r| r.ei),
        ("EI_r", |r| r.ei_r),
    ] {
        for r in rows {
            if let Some(v) = pick(r) {
                writeln!(out, "{name},{},{v}", r.n_cells)?;
            }
        }
    }
    Ok(())
}
