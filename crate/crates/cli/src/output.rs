//! CSV and report writers. Comma separation, `.` decimal point, 17
//! significant digits so every double round-trips.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use csrk::tableau::fmt_g17;
use csrk::{IvpProblem, Trajectory};

use crate::config::{config_err, CliError};

/// Opens the output sink: a file when `out` is given, stdout otherwise.
pub fn open_sink(out: Option<&str>) -> Result<Box<dyn Write>, CliError> {
    match out {
        Some(path) => {
            let file = File::create(Path::new(path))
                .map_err(|e| config_err(format!("cannot create {path}: {e}")))?;
            Ok(Box::new(BufWriter::new(file)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

/// Writes a trajectory as CSV: `t`, the state components under the
/// problem's labels, then `energy_err` and `sol_err` (left empty when the
/// problem does not provide them).
pub fn write_trajectory_csv(
    sink: &mut dyn Write,
    problem: &IvpProblem,
    trajectory: &Trajectory,
) -> io::Result<()> {
    let labels = problem.labels().join(",");
    writeln!(sink, "t,{labels},energy_err,sol_err")?;
    for (n, (&t, state)) in trajectory
        .times
        .iter()
        .zip(trajectory.states.iter())
        .enumerate()
    {
        let mut fields = Vec::with_capacity(state.len() + 3);
        fields.push(fmt_g17(t));
        fields.extend(state.iter().map(|&v| fmt_g17(v)));
        fields.push(
            trajectory
                .energy_error
                .as_ref()
                .map(|e| fmt_g17(e[n]))
                .unwrap_or_default(),
        );
        fields.push(
            trajectory
                .solution_error
                .as_ref()
                .map(|e| fmt_g17(e[n]))
                .unwrap_or_default(),
        );
        writeln!(sink, "{}", fields.join(","))?;
    }
    Ok(())
}

/// Writes `(h, final_error)` pairs as CSV.
pub fn write_convergence_csv(sink: &mut dyn Write, samples: &[(f64, f64)]) -> io::Result<()> {
    writeln!(sink, "h,final_error")?;
    for &(h, err) in samples {
        writeln!(sink, "{},{}", fmt_g17(h), fmt_g17(err))?;
    }
    Ok(())
}
