//! Interpolation capacity tables.

use bnglue_core::numerics::{self, Capacity};
use bnglue_core::CurveSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TableFormat {
    Csv,
    Md,
}

/// Rows `d = 1..=d_max`, columns `g = 0..=g_max`. Cells are the capacity,
/// `unbounded`, or empty where `d < g`.
fn cells(r: u32, d_max: u32, g_max: u32) -> bnglue_core::Result<Vec<(u32, Vec<String>)>> {
    (1..=d_max)
        .map(|d| {
            let row = (0..=g_max)
                .map(|g| {
                    let spec = CurveSpec::new(d, g, r)?;
                    Ok(match numerics::interpolation_capacity(&spec) {
                        Ok(Capacity::Bounded(n)) => n.to_string(),
                        Ok(Capacity::Unbounded) => "unbounded".to_owned(),
                        Err(_) => String::new(),
                    })
                })
                .collect::<bnglue_core::Result<Vec<_>>>()?;
            Ok((d, row))
        })
        .collect()
}

pub fn interpolation_table(
    r: u32,
    d_max: u32,
    g_max: u32,
    format: TableFormat,
) -> bnglue_core::Result<String> {
    let rows = cells(r, d_max, g_max)?;
    let header: Vec<String> = std::iter::once("d".to_owned())
        .chain((0..=g_max).map(|g| format!("g={g}")))
        .collect();
    Ok(match format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&header).expect("in-memory write");
            for (d, row) in rows {
                w.write_record(std::iter::once(d.to_string()).chain(row))
                    .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
        }
        TableFormat::Md => {
            let mut out = format!("| {} |\n", header.join(" | "));
            out.push_str(&format!("|{}\n", "---|".repeat(header.len())));
            for (d, row) in rows {
                out.push_str(&format!("| {d} | {} |\n", row.join(" | ")));
            }
            out
        }
    })
}
