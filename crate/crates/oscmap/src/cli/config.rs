//! Run configuration: a flat `key = value` file with `[sections]`, plus
//! command-line overrides that win over the file.

use std::collections::HashMap;
use std::path::PathBuf;

use num_complex::Complex64;

use super::CliError;
use crate::models::{self, Hamiltonian, LcCircuitPair};

/// Which model the run is built around.
#[derive(Debug, Clone)]
pub enum ModelSpec {
    Dimer {
        epsilon: f64,
        v: f64,
    },
    Ring {
        n: usize,
        epsilon: f64,
        v: f64,
    },
    Dense {
        rows: Vec<Vec<f64>>,
    },
    Lc {
        inductance: f64,
        capacitance: f64,
        coupling_capacitance: f64,
    },
}

impl ModelSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ModelSpec::Dimer { .. } => "dimer",
            ModelSpec::Ring { .. } => "ring",
            ModelSpec::Dense { .. } => "dense",
            ModelSpec::Lc { .. } => "lc",
        }
    }

    /// Build the Hamiltonian; parameter violations surface as config errors.
    pub fn hamiltonian(&self) -> Result<Hamiltonian, CliError> {
        match self {
            ModelSpec::Dimer { epsilon, v } => {
                models::build_dimer(*epsilon, *v).map_err(CliError::config_from)
            }
            ModelSpec::Ring { n, epsilon, v } => {
                models::build_ring(*n, *epsilon, *v).map_err(CliError::config_from)
            }
            ModelSpec::Dense { rows } => {
                Hamiltonian::from_dense(rows).map_err(CliError::config_from)
            }
            ModelSpec::Lc {
                inductance,
                capacitance,
                coupling_capacitance,
            } => {
                let pair = LcCircuitPair::new(*inductance, *capacitance, *coupling_capacitance)
                    .map_err(CliError::config_from)?;
                models::lc_to_oscillator(&pair)
                    .equivalent_dimer()
                    .map_err(CliError::config_from)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ModelSpec::Dimer { epsilon, v } => format!("dimer epsilon={epsilon} v={v}"),
            ModelSpec::Ring { n, epsilon, v } => format!("ring n={n} epsilon={epsilon} v={v}"),
            ModelSpec::Dense { rows } => format!("dense n={}", rows.len()),
            ModelSpec::Lc {
                inductance,
                capacitance,
                coupling_capacitance,
            } => format!("lc l={inductance} c={capacitance} ck={coupling_capacitance}"),
        }
    }
}

/// The propagation methods the CLI can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    QuantumSpectral,
    QuantumOde,
    ClassicalExact,
    ClassicalRca,
    ClassicalRcaSpring,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::QuantumSpectral,
        Method::QuantumOde,
        Method::ClassicalExact,
        Method::ClassicalRca,
        Method::ClassicalRcaSpring,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Method::QuantumSpectral => "quantum-spectral",
            Method::QuantumOde => "quantum-ode",
            Method::ClassicalExact => "classical-exact",
            Method::ClassicalRca => "classical-rca",
            Method::ClassicalRcaSpring => "classical-rca-spring",
        }
    }

    pub fn parse(s: &str) -> Result<Method, CliError> {
        Method::ALL
            .iter()
            .copied()
            .find(|m| m.label() == s.trim())
            .ok_or_else(|| {
                CliError::Config(format!(
                    "unknown method '{s}'; expected one of {}",
                    Method::ALL.map(|m| m.label()).join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone)]
pub enum InitialState {
    Site(usize),
    Vector(Vec<Complex64>),
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// "k" (classical coupling, converted via V = K/(2ε)) or "v" (quantum
    /// coupling used directly).
    pub param: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub methods: Vec<Method>,
    pub gamma: Option<Vec<f64>>,
    pub initial: InitialState,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub samples: usize,
    pub out_prefix: PathBuf,
    pub workers: usize,
    pub coherence_pairs: Vec<(usize, usize)>,
    pub sweep: Option<SweepSpec>,
}

/// Command-line values that override the file; `None` means "not given".
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub model: Option<String>,
    pub epsilon: Option<f64>,
    pub v: Option<f64>,
    pub omega: Option<f64>,
    pub k: Option<f64>,
    pub n: Option<usize>,
    pub gamma: Option<Vec<f64>>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub samples: Option<usize>,
    pub methods: Option<Vec<String>>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub sweep_param: Option<String>,
    pub sweep_values: Option<Vec<f64>>,
}

fn config_err<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Config(msg.into()))
}

/// Parse the `[section]` / `key = value` file into `section.key` entries.
/// Later duplicates win, so a file can layer overrides on itself.
pub fn parse_config_text(text: &str) -> Result<HashMap<String, String>, CliError> {
    let mut map = HashMap::new();
    let mut section = String::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            match rest.strip_suffix(']') {
                Some(name) => {
                    section = name.trim().to_ascii_lowercase();
                    continue;
                }
                None => return config_err(format!("line {}: unterminated section", lineno + 1)),
            }
        }
        let Some((key, value)) = line.split_once('=') else {
            return config_err(format!(
                "line {}: expected 'key = value', got '{line}'",
                lineno + 1
            ));
        };
        let key = key.trim().to_ascii_lowercase();
        if key.is_empty() {
            return config_err(format!("line {}: empty key", lineno + 1));
        }
        let full = if section.is_empty() {
            key
        } else {
            format!("{section}.{key}")
        };
        map.insert(full, value.trim().to_string());
    }
    Ok(map)
}

fn parse_f64(key: &str, s: &str) -> Result<f64, CliError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| CliError::Config(format!("{key}: '{s}' is not a number")))
}

fn parse_usize(key: &str, s: &str) -> Result<usize, CliError> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| CliError::Config(format!("{key}: '{s}' is not a non-negative integer")))
}

fn parse_f64_list(key: &str, s: &str) -> Result<Vec<f64>, CliError> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse_f64(key, t))
        .collect()
}

fn parse_pairs(key: &str, s: &str) -> Result<Vec<(usize, usize)>, CliError> {
    let mut pairs = Vec::new();
    for tok in s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
    {
        let Some((i, j)) = tok.split_once(':') else {
            return config_err(format!("{key}: pair '{tok}' must look like i:j"));
        };
        pairs.push((parse_usize(key, i)?, parse_usize(key, j)?));
    }
    Ok(pairs)
}

fn parse_initial(s: &str) -> Result<InitialState, CliError> {
    let s = s.trim();
    if let Some(idx) = s.strip_prefix("site:") {
        return Ok(InitialState::Site(parse_usize("initial.state", idx)?));
    }
    if let Some(rest) = s.strip_prefix("vec:") {
        let mut values = Vec::new();
        for tok in rest
            .split(|c: char| c == ';' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let Some((re, im)) = tok.split_once(',') else {
                return config_err(format!(
                    "initial.state: component '{tok}' must look like re,im"
                ));
            };
            values.push(Complex64::new(
                parse_f64("initial.state", re)?,
                parse_f64("initial.state", im)?,
            ));
        }
        if values.is_empty() {
            return config_err("initial.state: empty amplitude vector");
        }
        return Ok(InitialState::Vector(values));
    }
    config_err(format!(
        "initial.state: '{s}' must be 'site:IDX' or 'vec: re,im re,im ...'"
    ))
}

fn parse_rows(s: &str) -> Result<Vec<Vec<f64>>, CliError> {
    let rows: Result<Vec<Vec<f64>>, CliError> = s
        .split(';')
        .map(|row| parse_f64_list("model.rows", row))
        .collect();
    let rows = rows?;
    if rows.is_empty() || rows.iter().all(Vec::is_empty) {
        return config_err("model.rows: no entries");
    }
    Ok(rows)
}

/// Merge file and flag sources into a validated [`RunConfig`].
pub fn resolve(
    file: Option<&HashMap<String, String>>,
    flags: &Overrides,
) -> Result<RunConfig, CliError> {
    let get = |key: &str| -> Option<&str> { file.and_then(|m| m.get(key)).map(String::as_str) };

    // -- model ------------------------------------------------------------
    let kind = flags
        .model
        .clone()
        .or_else(|| get("model.kind").map(str::to_string))
        .unwrap_or_else(|| "dimer".to_string())
        .to_ascii_lowercase();

    if flags.epsilon.is_some() && flags.omega.is_some() {
        return config_err(
            "give either --epsilon or --omega, not both (hbar = 1 makes them the same number)",
        );
    }
    let epsilon_file = get("model.epsilon")
        .map(|s| parse_f64("model.epsilon", s))
        .transpose()?;
    let omega_file = get("model.omega")
        .map(|s| parse_f64("model.omega", s))
        .transpose()?;
    let epsilon = flags
        .epsilon
        .or(flags.omega)
        .or(epsilon_file)
        .or(omega_file)
        .unwrap_or(1.0);

    let v_file = get("model.v")
        .map(|s| parse_f64("model.v", s))
        .transpose()?;
    let k_file = get("model.k")
        .map(|s| parse_f64("model.k", s))
        .transpose()?;
    // Flags beat the file as a block: a -v flag silences a file-level k.
    let (v_given, k_given) = if flags.v.is_some() || flags.k.is_some() {
        (flags.v, flags.k)
    } else {
        (v_file, k_file)
    };
    if v_given.is_some() && k_given.is_some() {
        return config_err(
            "give either the quantum coupling v or the classical coupling k, not both",
        );
    }
    let coupling_v = match (v_given, k_given) {
        (Some(v), None) => v,
        (None, Some(k)) => k / (2.0 * epsilon),
        (None, None) => 0.0,
        (Some(_), Some(_)) => unreachable!(),
    };

    let n = flags
        .n
        .map(Ok)
        .or_else(|| get("model.n").map(|s| parse_usize("model.n", s)))
        .transpose()?
        .unwrap_or(6);

    let model = match kind.as_str() {
        "dimer" => ModelSpec::Dimer {
            epsilon,
            v: coupling_v,
        },
        "ring" => ModelSpec::Ring {
            n,
            epsilon,
            v: coupling_v,
        },
        "dense" => {
            let Some(rows) = get("model.rows") else {
                return config_err("model dense needs model.rows in the config file");
            };
            ModelSpec::Dense {
                rows: parse_rows(rows)?,
            }
        }
        "lc" => {
            let l = get("model.l")
                .map(|s| parse_f64("model.l", s))
                .transpose()?
                .unwrap_or(1.0);
            let c = get("model.c")
                .map(|s| parse_f64("model.c", s))
                .transpose()?
                .unwrap_or(1.0);
            let ck = flags
                .k
                .or(get("model.ck")
                    .map(|s| parse_f64("model.ck", s))
                    .transpose()?)
                .unwrap_or(0.0);
            ModelSpec::Lc {
                inductance: l,
                capacitance: c,
                coupling_capacitance: ck,
            }
        }
        other => {
            return config_err(format!(
                "unknown model '{other}'; expected dimer, ring, dense or lc"
            ))
        }
    };

    // -- methods ----------------------------------------------------------
    let method_strings: Vec<String> = if let Some(ms) = &flags.methods {
        ms.clone()
    } else if let Some(s) = get("run.methods") {
        s.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(str::to_string)
            .collect()
    } else {
        vec!["quantum-spectral".into(), "classical-rca-spring".into()]
    };
    if method_strings.is_empty() {
        return config_err("methods list is empty");
    }
    // Repeats are legal (a self-compare is a valid baseline run).
    let methods = method_strings
        .iter()
        .map(|s| Method::parse(s))
        .collect::<Result<Vec<Method>, CliError>>()?;

    // -- damping ----------------------------------------------------------
    let gamma = if let Some(g) = &flags.gamma {
        Some(g.clone())
    } else {
        get("damping.gamma")
            .map(|s| parse_f64_list("damping.gamma", s))
            .transpose()?
    };
    if let Some(g) = &gamma {
        if g.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return config_err("damping.gamma: rates must be finite and non-negative");
        }
    }

    // -- initial state ----------------------------------------------------
    let initial = match get("initial.state") {
        Some(s) => parse_initial(s)?,
        None => InitialState::Site(0),
    };

    // -- plan -------------------------------------------------------------
    let dt = flags.dt.or(get("plan.dt")
        .map(|s| parse_f64("plan.dt", s))
        .transpose()?);
    if let Some(dt) = dt {
        if !(dt > 0.0) || !dt.is_finite() {
            return config_err(format!("plan.dt must be positive, got {dt}"));
        }
    }
    let t_end = flags.t_end.or(get("plan.t_end")
        .map(|s| parse_f64("plan.t_end", s))
        .transpose()?);
    if let Some(t) = t_end {
        if !(t > 0.0) || !t.is_finite() {
            return config_err(format!("plan.t_end must be positive, got {t}"));
        }
    }
    let samples = flags
        .samples
        .map(Ok)
        .or_else(|| get("plan.samples").map(|s| parse_usize("plan.samples", s)))
        .transpose()?
        .unwrap_or(1000);
    if samples < 2 {
        return config_err(format!("plan.samples must be at least 2, got {samples}"));
    }

    // -- output -----------------------------------------------------------
    let out_prefix = flags
        .out
        .clone()
        .or_else(|| get("output.prefix").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("oscmap_out"));
    let coherence_pairs = match get("output.pairs") {
        Some(s) => parse_pairs("output.pairs", s)?,
        None => vec![],
    };

    let workers = flags
        .workers
        .map(Ok)
        .or_else(|| get("run.workers").map(|s| parse_usize("run.workers", s)))
        .transpose()?
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        });
    if workers == 0 {
        return config_err("run.workers must be at least 1");
    }

    // -- sweep ------------------------------------------------------------
    let sweep_param = flags
        .sweep_param
        .clone()
        .or_else(|| get("sweep.param").map(str::to_string));
    let sweep_values = if let Some(vs) = &flags.sweep_values {
        Some(vs.clone())
    } else {
        get("sweep.values")
            .map(|s| parse_f64_list("sweep.values", s))
            .transpose()?
    };
    let sweep = match (sweep_param, sweep_values) {
        (None, None) => None,
        (param, values) => {
            let param = param
                .unwrap_or_else(|| "k".to_string())
                .to_ascii_lowercase();
            if param != "k" && param != "v" {
                return config_err(format!("sweep.param must be 'k' or 'v', got '{param}'"));
            }
            let values = values.unwrap_or_default();
            if values.iter().any(|x| !x.is_finite()) {
                return config_err("sweep.values must be finite");
            }
            Some(SweepSpec { param, values })
        }
    };

    Ok(RunConfig {
        model,
        methods,
        gamma,
        initial,
        dt,
        t_end,
        samples,
        out_prefix,
        workers,
        coherence_pairs,
        sweep,
    })
}

/// Load the optional config file and merge the flag overrides.
pub fn load(path: Option<&std::path::Path>, flags: &Overrides) -> Result<RunConfig, CliError> {
    let file_map = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| {
                CliError::Config(format!("cannot read config file {}: {e}", p.display()))
            })?;
            Some(parse_config_text(&text)?)
        }
        None => None,
    };
    resolve(file_map.as_ref(), flags)
}
