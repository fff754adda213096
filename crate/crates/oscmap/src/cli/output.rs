//! CSV and report writers. All numbers are printed with 17 significant
//! digits so that files round-trip to the exact double-precision values and
//! repeated runs produce byte-identical output.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64;

use super::CliError;
use crate::integrators::ComplexTrajectory;

/// 17 significant digits: enough to reproduce any f64 exactly on re-parse.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn create(path: &Path) -> io::Result<fs::File> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::File::create(path)
}

/// One propagation method's full output: the complex amplitudes plus the
/// oscillator-language view (positions and momenta).
pub struct MethodRun {
    pub label: &'static str,
    pub z: ComplexTrajectory,
    pub q: Vec<Vec<f64>>,
    pub p: Vec<Vec<f64>>,
}

impl MethodRun {
    /// Derive the phase-space columns from the amplitudes (`q = √2 Re z`,
    /// `p = √2 Im z`), which is exact for the quantum methods.
    pub fn from_amplitudes(label: &'static str, z: ComplexTrajectory) -> Self {
        let root2 = std::f64::consts::SQRT_2;
        let q = z
            .states()
            .iter()
            .map(|s| s.iter().map(|z| root2 * z.re).collect())
            .collect();
        let p = z
            .states()
            .iter()
            .map(|s| s.iter().map(|z| root2 * z.im).collect())
            .collect();
        Self { label, z, q, p }
    }
}

/// Write one trajectory CSV: `t`, then per site `q_i, p_i, re_z_i, im_z_i,
/// pop_i`, then per requested pair `re_coh_i_j, im_coh_i_j`.
pub fn write_trajectory_csv(
    path: &Path,
    run: &MethodRun,
    pairs: &[(usize, usize)],
) -> Result<(), CliError> {
    let n = run.z.dim();
    let mut file = io::BufWriter::new(create(path)?);

    let mut header = vec!["t".to_string()];
    for i in 0..n {
        header.push(format!("q_{i}"));
        header.push(format!("p_{i}"));
        header.push(format!("re_z_{i}"));
        header.push(format!("im_z_{i}"));
        header.push(format!("pop_{i}"));
    }
    for &(i, j) in pairs {
        header.push(format!("re_coh_{i}_{j}"));
        header.push(format!("im_coh_{i}_{j}"));
    }
    writeln!(file, "{}", header.join(","))?;

    for (idx, (t, state)) in run.z.iter().enumerate() {
        let mut row = vec![fmt17(t)];
        for i in 0..n {
            row.push(fmt17(run.q[idx][i]));
            row.push(fmt17(run.p[idx][i]));
            row.push(fmt17(state[i].re));
            row.push(fmt17(state[i].im));
            row.push(fmt17(state[i].norm_sqr()));
        }
        for &(i, j) in pairs {
            let coh = state[i].conj() * state[j];
            row.push(fmt17(coh.re));
            row.push(fmt17(coh.im));
        }
        writeln!(file, "{}", row.join(","))?;
    }
    file.flush()?;
    Ok(())
}

/// Read a trajectory CSV back into times and amplitudes. Only the `t` and
/// `re_z/im_z` columns are interpreted; everything else is redundant.
pub fn read_trajectory_csv(path: &Path) -> Result<ComplexTrajectory, CliError> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Config(format!("{}: empty file", path.display())))?;
    let columns: Vec<&str> = header.split(',').collect();
    let re_cols: Vec<usize> = columns
        .iter()
        .enumerate()
        .filter(|(_, name)| name.starts_with("re_z_"))
        .map(|(i, _)| i)
        .collect();
    let im_cols: Vec<usize> = columns
        .iter()
        .enumerate()
        .filter(|(_, name)| name.starts_with("im_z_"))
        .map(|(i, _)| i)
        .collect();

    let mut times = Vec::new();
    let mut states = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let parse = |i: usize| -> Result<f64, CliError> {
            fields
                .get(i)
                .ok_or_else(|| CliError::Config(format!("{}: short row", path.display())))?
                .parse::<f64>()
                .map_err(|e| CliError::Config(format!("{}: bad number: {e}", path.display())))
        };
        times.push(parse(0)?);
        let mut state = Vec::with_capacity(re_cols.len());
        for (&re, &im) in re_cols.iter().zip(&im_cols) {
            state.push(Complex64::new(parse(re)?, parse(im)?));
        }
        states.push(state);
    }
    Ok(ComplexTrajectory::new(times, states))
}

/// Write a flat `key: value` report.
pub fn write_report(path: &Path, body: &str) -> Result<(), CliError> {
    let mut file = io::BufWriter::new(create(path)?);
    file.write_all(body.as_bytes())?;
    file.flush()?;
    Ok(())
}

/// Write a generic CSV from a header and pre-formatted rows.
pub fn write_csv_rows(path: &Path, header: &str, rows: &[String]) -> Result<(), CliError> {
    let mut file = io::BufWriter::new(create(path)?);
    writeln!(file, "{header}")?;
    for row in rows {
        writeln!(file, "{row}")?;
    }
    file.flush()?;
    Ok(())
}
