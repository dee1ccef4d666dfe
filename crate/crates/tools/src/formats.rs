//! File formats: JSON pattern descriptions, CSV tables and JSON reports.

use std::io::{self, Write};

use llg_core::blocking::{BlockingReport, BlockingTime};
use llg_core::config::{
    Configuration, Layers, LeftHexagons, Orientation, Pattern, Period, PeriodicTile, RandomPattern,
};
use llg_core::cycles::{is_symmetric_x_half, CycleDecomposition};
use llg_core::dynamics::{InitialCondition, ParticleState, Trajectory};
use llg_core::hexclass::TransitionGraph;
use llg_core::lattice::{HexId, Site};
use llg_core::localtraj::{LocalKind, LocalTrajectories, Region, TriperfectPartition};
use llg_core::stats::{CycleLengthHistogram, PowerLawFit, Series};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed pattern file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid pattern: {0}")]
    Pattern(String),
    #[error(transparent)]
    Core(#[from] llg_core::Error),
}

/// `{"kind": ..., "params": {...}, "overrides": [[p, q, ±1], ...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternFile {
    pub kind: String,
    #[serde(default = "empty_object")]
    pub params: Value,
    #[serde(default)]
    pub overrides: Vec<[i64; 3]>,
}

fn empty_object() -> Value {
    Value::Object(Default::default())
}

fn bad(msg: impl Into<String>) -> FormatError {
    FormatError::Pattern(msg.into())
}

fn param<'a>(params: &'a Value, key: &str) -> Option<&'a Value> {
    params.get(key)
}

fn int(v: &Value, what: &str) -> Result<i32, FormatError> {
    v.as_i64()
        .and_then(|x| i32::try_from(x).ok())
        .ok_or_else(|| bad(format!("{what} must be an integer")))
}

fn pair(v: &Value, what: &str) -> Result<(i32, i32), FormatError> {
    match v.as_array().map(Vec::as_slice) {
        Some([a, b]) => Ok((int(a, what)?, int(b, what)?)),
        _ => Err(bad(format!("{what} must be a [p, q] pair"))),
    }
}

fn period(v: Option<&Value>) -> Result<Period, FormatError> {
    let v = v.ok_or_else(|| bad("missing \"period\""))?;
    match v.as_array().map(Vec::as_slice) {
        Some([u, w]) => Ok(Period::new(
            pair(u, "period vector")?,
            pair(w, "period vector")?,
        )?),
        _ => Err(bad("\"period\" must hold two [p, q] vectors")),
    }
}

fn orientation(v: i64) -> Result<Orientation, FormatError> {
    Orientation::from_value(v).map_err(|_| bad("orientations must be +1 or -1"))
}

fn site_entry(e: &[i64; 3]) -> Result<(Site, Orientation), FormatError> {
    let p = i32::try_from(e[0]).map_err(|_| bad("coordinate out of range"))?;
    let q = i32::try_from(e[1]).map_err(|_| bad("coordinate out of range"))?;
    Ok((Site::new(p, q)?, orientation(e[2])?))
}

impl PatternFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn pattern(&self) -> Result<Pattern, FormatError> {
        let p = &self.params;
        Ok(match self.kind.as_str() {
            "all-right" => Pattern::AllRight,
            "all-left" => Pattern::AllLeft,
            "a" => {
                let d = LeftHexagons::default();
                let period = match param(p, "period") {
                    Some(v) => period(Some(v))?,
                    None => d.period,
                };
                let anchor = match param(p, "anchor") {
                    Some(v) => {
                        let (x, y) = pair(v, "anchor")?;
                        HexId::new(x, y)?
                    }
                    None => d.anchor,
                };
                Pattern::LeftHexagons(LeftHexagons { period, anchor })
            }
            "b" => {
                let d = Layers::default();
                let thickness =
                    param(p, "thickness").map_or(Ok(d.thickness), |v| int(v, "thickness"))?;
                let phase = param(p, "phase").map_or(Ok(d.phase), |v| int(v, "phase"))?;
                Pattern::Layers(Layers::new(thickness, phase)?)
            }
            "tile" => {
                let per = period(param(p, "period"))?;
                let default = match param(p, "default") {
                    Some(v) => {
                        orientation(v.as_i64().ok_or_else(|| bad("default must be +1 or -1"))?)?
                    }
                    None => Orientation::Right,
                };
                let cells: Vec<[i64; 3]> = match param(p, "cells") {
                    Some(v) => serde_json::from_value(v.clone())?,
                    None => Vec::new(),
                };
                let cells = cells
                    .iter()
                    .map(site_entry)
                    .collect::<Result<Vec<_>, _>>()?;
                Pattern::PeriodicTile(PeriodicTile::new(per, default, cells)?)
            }
            "random" => {
                let seed = param(p, "seed")
                    .map_or(Some(0), Value::as_u64)
                    .ok_or_else(|| bad("seed must be a nonnegative integer"))?;
                let p_right = param(p, "p_right")
                    .map_or(Some(0.5), Value::as_f64)
                    .ok_or_else(|| bad("p_right must be a number"))?;
                Pattern::Random(RandomPattern::new(seed, p_right)?)
            }
            other => return Err(bad(format!("unknown pattern kind {other:?}"))),
        })
    }

    pub fn configuration(&self) -> Result<Configuration, FormatError> {
        let mut c = Configuration::new(self.pattern()?);
        for e in &self.overrides {
            let (s, o) = site_entry(e)?;
            c.set(s, o);
        }
        Ok(c)
    }

    /// Describe a pattern, with the overrides of `c` if given.
    pub fn describe(pattern: &Pattern, c: Option<&Configuration>) -> Self {
        let vecs = |per: Period| {
            let [u, v] = per.vectors();
            json!([[u.0, u.1], [v.0, v.1]])
        };
        let (kind, params) = match pattern {
            Pattern::AllRight => ("all-right", empty_object()),
            Pattern::AllLeft => ("all-left", empty_object()),
            Pattern::LeftHexagons(lh) => (
                "a",
                json!({"period": vecs(lh.period), "anchor": [lh.anchor.p(), lh.anchor.q()]}),
            ),
            Pattern::Layers(l) => ("b", json!({"thickness": l.thickness, "phase": l.phase})),
            Pattern::PeriodicTile(t) => (
                "tile",
                json!({
                    "period": vecs(t.period()),
                    "default": t.default_orientation().value(),
                    "cells": t.cells().iter().map(|(s, o)| json!([s.p(), s.q(), o.value()])).collect::<Vec<_>>(),
                }),
            ),
            Pattern::Random(r) => ("random", json!({"seed": r.seed, "p_right": r.p_right})),
        };
        let mut overrides: Vec<[i64; 3]> = c
            .map(|c| {
                c.overrides()
                    .map(|(s, o)| [s.p() as i64, s.q() as i64, o.value() as i64])
                    .collect()
            })
            .unwrap_or_default();
        overrides.sort_unstable();
        PatternFile {
            kind: kind.to_string(),
            params,
            overrides,
        }
    }
}

pub fn write_trajectory_header(w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "t,p,q,k")
}

pub fn write_state(w: &mut impl Write, st: &ParticleState) -> io::Result<()> {
    writeln!(
        w,
        "{},{},{},{}",
        st.time,
        st.site.p(),
        st.site.q(),
        st.dir.index()
    )
}

pub fn write_trajectory_csv(w: &mut impl Write, traj: &Trajectory) -> io::Result<()> {
    write_trajectory_header(w)?;
    for t in 0..=traj.steps() {
        write_state(w, &traj.state(t))?;
    }
    Ok(())
}

/// Cycle sites mirrored in the vertical line half a bond right of the base.
pub fn cycle_is_symmetric(traj: &Trajectory, sites: &[Site]) -> bool {
    let b = traj.positions[0];
    let shifted: Vec<Site> = sites
        .iter()
        .filter_map(|s| Site::new(s.p() - b.p(), s.q() - b.q()).ok())
        .collect();
    shifted.len() == sites.len() && is_symmetric_x_half(&shifted)
}

pub fn write_cycle_report(
    w: &mut impl Write,
    traj: &Trajectory,
    d: &CycleDecomposition,
) -> io::Result<()> {
    writeln!(w, "i,tau_start,tau_end,L,local,symmetric")?;
    for (i, c) in d.cycles.iter().enumerate() {
        let sym = cycle_is_symmetric(traj, c.sites(traj));
        writeln!(
            w,
            "{},{},{},{},{},{}",
            i + 1,
            c.t_start,
            c.t_end,
            c.length(),
            c.local,
            sym
        )?;
    }
    Ok(())
}

pub fn write_series_csv(w: &mut impl Write, s: &Series) -> io::Result<()> {
    writeln!(w, "t,value")?;
    for (t, v) in s.iter() {
        writeln!(w, "{t},{v}")?;
    }
    Ok(())
}

pub fn write_histogram_csv(w: &mut impl Write, h: &CycleLengthHistogram) -> io::Result<()> {
    writeln!(w, "ell,count,fraction")?;
    for (&l, &n) in &h.counts {
        writeln!(w, "{l},{n},{}", n as f64 / h.total as f64)?;
    }
    Ok(())
}

fn ic_json(ic: InitialCondition) -> Value {
    json!({"p": ic.site.p(), "q": ic.site.q(), "k": ic.dir.index()})
}

pub fn fit_json(fit: &PowerLawFit) -> Value {
    let method = match fit.method {
        llg_core::stats::FitMethod::LogLog { points_per_decade } => {
            json!({"kind": "log-log", "points_per_decade": points_per_decade})
        }
        llg_core::stats::FitMethod::Linear => json!({"kind": "linear-least-squares"}),
    };
    json!({
        "c": fit.c,
        "alpha": fit.alpha,
        "t_min": fit.fit_range.0,
        "t_max": fit.fit_range.1,
        "residual": fit.residual,
        "points": fit.points,
        "method": method,
    })
}

pub fn graph_json(g: &TransitionGraph) -> Value {
    json!({
        "nodes": g.nodes().iter().map(|c| c.canonical().values().to_vec()).collect::<Vec<_>>(),
        "labels": g.nodes().iter().map(|c| c.label()).collect::<Vec<_>>(),
        "edges": g.edges().iter().map(|(a, b, e)| json!([a.label(), b.label(), e])).collect::<Vec<_>>(),
        "components": g
            .components()
            .iter()
            .map(|c| c.iter().map(|x| x.label()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

pub fn blocking_json(r: &BlockingReport) -> Value {
    let (tau_b, bound) = match r.blocking_time {
        BlockingTime::Blocking(t) => (json!(t), Value::Null),
        BlockingTime::NotBlockingWithin(b) => (Value::Null, json!(b)),
    };
    json!({
        "tau_b": tau_b,
        "not_blocking_within": bound,
        "witness": ic_json(r.witness),
        "return_lengths": r.return_lengths(),
        "cycles_by_shape": r.shapes.iter().map(|s| json!({
            "length": s.length,
            "count": s.count,
            "example": ic_json(s.example),
            "sites": s.shape.iter().map(|x| [x.p(), x.q()]).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn partition_json(
    region: &Region,
    found: &LocalTrajectories,
    partition: Option<&TriperfectPartition>,
) -> Value {
    let trajectories: Vec<Value> = found
        .trajectories
        .iter()
        .enumerate()
        .map(|(i, t)| {
            json!({
                "index": i,
                "kind": match t.kind { LocalKind::Crossing => "crossing", LocalKind::LocalCycle => "cycle" },
                "part": partition.map(|p| p.parts[i] + 1),
                "sites": t.sites().map(|s| [s.p(), s.q()]).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "hexes": region.hexes().iter().map(|h| [h.p(), h.q()]).collect::<Vec<_>>(),
        "triperfect": partition.is_some(),
        "trajectories": trajectories,
        "unexplained": found.unexplained.iter().map(|(s, d)| [s.p(), s.q(), d.index() as i32]).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_round_trip() {
        for pat in [
            Pattern::AllRight,
            Pattern::AllLeft,
            Pattern::pattern_a(),
            Pattern::pattern_b(),
            Pattern::Random(RandomPattern::new(9, 0.25).unwrap()),
        ] {
            let f = PatternFile::describe(&pat, None);
            let text = serde_json::to_string(&f).unwrap();
            let back = PatternFile::parse(&text).unwrap();
            assert_eq!(back.pattern().unwrap(), pat);
        }
    }

    #[test]
    fn overrides_are_applied() {
        let f = PatternFile::parse(r#"{"kind":"all-right","overrides":[[0,0,-1]]}"#).unwrap();
        let c = f.configuration().unwrap();
        assert_eq!(c.orientation(Site::ORIGIN), Orientation::Left);
    }

    #[test]
    fn bad_patterns_are_rejected() {
        for text in [
            r#"{"kind":"hexes"}"#,
            r#"{"kind":"all-right","overrides":[[1,1,1]]}"#,
            r#"{"kind":"all-right","overrides":[[0,0,0]]}"#,
            r#"{"kind":"b","params":{"thickness":0}}"#,
            r#"{"kind":"tile","params":{"period":[[1,1],[0,2]]}}"#,
            r#"{"kind":"a","params":{"anchor":[0,0]}}"#,
        ] {
            let r = PatternFile::parse(text).and_then(|f| f.configuration());
            assert!(r.is_err(), "{text}");
        }
        assert!(PatternFile::parse("{").is_err());
    }

    #[test]
    fn tile_file() {
        let text =
            r#"{"kind":"tile","params":{"period":[[0,2],[3,1]],"default":1,"cells":[[0,0,-1]]}}"#;
        let c = PatternFile::parse(text).unwrap().configuration().unwrap();
        assert_eq!(c.orientation(Site::new(3, 1).unwrap()), Orientation::Left);
        assert_eq!(c.orientation(Site::new(2, 0).unwrap()), Orientation::Right);
    }
}
