//! Grid export. CSV: a header row holding the q-axis (first cell `p\q`), then one row per
//! momentum starting with `p`. JSON: an envelope `{convention, kind, grid, values, diagnostics}`
//! with `values[i][j]` at `(q_i, p_j)`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{Diagnostics, PhaseGrid, QuasiDistribution, QuasiKind};
use crate::error::{Error, Result};
use crate::fock::LadderConvention;

pub fn write_csv(dist: &QuasiDistribution, out: impl Write) -> Result<()> {
    let g = &dist.grid;
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["p\\q".to_string()];
    header.extend(g.q_axis().iter().map(|q| q.to_string()));
    w.write_record(&header).map_err(csv_err)?;
    for j in 0..g.np {
        let mut row = vec![g.p(j).to_string()];
        row.extend((0..g.nq).map(|i| dist.get(i, j).to_string()));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv(dist: &QuasiDistribution) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(dist, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(format!("csv: {e}"))
}

/// Reads a CSV grid; the file carries no metadata, so the kind and convention are supplied.
pub fn read_csv(input: impl Read, kind: QuasiKind, convention: LadderConvention) -> Result<QuasiDistribution> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(input);
    let mut rows = r.records();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number `{s}`")));
    let header = rows
        .next()
        .ok_or_else(|| Error::Parse("empty csv".into()))?
        .map_err(csv_err)?;
    let qs = header.iter().skip(1).map(num).collect::<Result<Vec<f64>>>()?;
    let mut ps = Vec::new();
    let mut by_p = Vec::new();
    for rec in rows {
        let rec = rec.map_err(csv_err)?;
        let mut cells = rec.iter();
        ps.push(num(cells.next().unwrap_or(""))?);
        let row = cells.map(num).collect::<Result<Vec<f64>>>()?;
        if row.len() != qs.len() {
            return Err(Error::Parse(format!("row has {} values, header has {}", row.len(), qs.len())));
        }
        by_p.push(row);
    }
    if qs.len() < 2 || ps.len() < 2 {
        return Err(Error::Parse("csv grid needs at least two points per axis".into()));
    }
    let grid = PhaseGrid::new(
        (qs[0], qs[qs.len() - 1], qs.len()),
        (ps[0], ps[ps.len() - 1], ps.len()),
        convention,
    )?;
    let mut values = Vec::with_capacity(qs.len() * ps.len());
    for i in 0..qs.len() {
        for row in &by_p {
            values.push(row[i]);
        }
    }
    QuasiDistribution::new(grid, kind, values)
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    convention: LadderConvention,
    kind: QuasiKind,
    grid: GridAxes,
    values: Vec<Vec<f64>>,
    diagnostics: Diagnostics,
}

#[derive(Serialize, Deserialize)]
struct GridAxes {
    q_min: f64,
    q_max: f64,
    nq: usize,
    p_min: f64,
    p_max: f64,
    np: usize,
}

pub fn write_json(dist: &QuasiDistribution, out: impl Write) -> Result<()> {
    let g = &dist.grid;
    let env = Envelope {
        convention: g.convention,
        kind: dist.kind.clone(),
        grid: GridAxes {
            q_min: g.q_min,
            q_max: g.q_max,
            nq: g.nq,
            p_min: g.p_min,
            p_max: g.p_max,
            np: g.np,
        },
        values: dist.values().chunks(g.np).map(<[f64]>::to_vec).collect(),
        diagnostics: dist.diagnostics.clone(),
    };
    serde_json::to_writer_pretty(out, &env)?;
    Ok(())
}

pub fn to_json(dist: &QuasiDistribution) -> Result<String> {
    let mut buf = Vec::new();
    write_json(dist, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_json(input: impl Read) -> Result<QuasiDistribution> {
    let env: Envelope = serde_json::from_reader(input)?;
    let a = &env.grid;
    let grid = PhaseGrid::new((a.q_min, a.q_max, a.nq), (a.p_min, a.p_max, a.np), env.convention)?;
    if env.values.len() != a.nq || env.values.iter().any(|r| r.len() != a.np) {
        return Err(Error::GridMismatch("values do not match the declared grid".into()));
    }
    let mut dist = QuasiDistribution::new(grid, env.kind, env.values.concat())?;
    dist.diagnostics = env.diagnostics;
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> QuasiDistribution {
        let conv = LadderConvention::new(0.5, 1.3).unwrap();
        let grid = PhaseGrid::new((-2.1, 3.7, 11), (-1.0, 0.3, 9), conv).unwrap();
        let mut d = QuasiDistribution::from_fn(grid, QuasiKind::SParam { s: -0.3 }, |a| {
            (a.re * 1.7).sin() * (-a.norm_sqr()).exp() / 3.0
        })
        .unwrap();
        d.diagnostics.warn("example");
        d
    }

    #[test]
    fn csv_round_trip() {
        let d = sample();
        let text = to_csv(&d).unwrap();
        assert!(text.starts_with("p\\q,-2.1,"));
        let back = read_csv(text.as_bytes(), d.kind.clone(), d.grid.convention).unwrap();
        assert!(back.grid.same_as(&d.grid));
        assert!(back.max_diff(&d).unwrap() <= 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let d = sample();
        let text = to_json(&d).unwrap();
        let back = read_json(text.as_bytes()).unwrap();
        assert_eq!(back.kind, d.kind);
        assert_eq!(back.grid, d.grid);
        assert_eq!(back.values(), d.values());
        assert_eq!(back.diagnostics.warnings, vec!["example".to_string()]);
    }

    #[test]
    fn malformed_inputs_fail() {
        assert!(read_csv("p\\q,1,2\n0,1\n".as_bytes(), QuasiKind::SParam { s: 0.0 }, LadderConvention::default()).is_err());
        assert!(read_json("{}".as_bytes()).is_err());
    }
}
