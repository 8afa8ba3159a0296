//! Trajectory export.

use std::io::Write;

use reeb_core::reeb_flow::{first_decrease, monotone_functional, Trajectory, MONOTONE_SLACK};
use serde_json::{json, Value};

/// Writes `t, chart_id, c1, c2, c3, Z` rows, one per trajectory point.
pub fn write_csv<W: Write>(trajectory: &Trajectory, out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "chart_id", "c1", "c2", "c3", "Z"])?;
    let z = monotone_functional(trajectory);
    for ((t, p), z) in trajectory.points().iter().zip(z) {
        let [c1, c2, c3] = p.coords();
        w.write_record([
            t.to_string(),
            p.chart().as_str().to_string(),
            c1.to_string(),
            c2.to_string(),
            c3.to_string(),
            z.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Summary of a trajectory; `z_monotone` is the pass criterion of `flow trace`.
pub fn summary(trajectory: &Trajectory) -> Value {
    let z = monotone_functional(trajectory);
    let decrease = first_decrease(&z, MONOTONE_SLACK);
    let end = trajectory.endpoint();
    json!({
        "field_id": trajectory.field_id(),
        "step": trajectory.step(),
        "points": trajectory.points().len(),
        "endpoint": { "chart": end.chart().as_str(), "coords": end.coords() },
        "transitions": trajectory.transitions().iter().map(|t| json!({
            "index": t.index,
            "from": t.from.as_str(),
            "to": t.to.as_str(),
        })).collect::<Vec<_>>(),
        "z_start": z.first(),
        "z_end": z.last(),
        "z_monotone": decrease.is_none(),
        "first_decrease": decrease,
    })
}
