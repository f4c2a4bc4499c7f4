//! Run configuration: a TOML document with `[wave]`, `[particle]`, `[frame]`,
//! `[sim]`, and optional `[scan]` and `[resonance]` sections.
//!
//! The short keys `g`, `eta`, `epsilon`, `epsilon_sq`, `omega_l`, `steps` and
//! `t_end` may also be written at top level; they are moved into their
//! sections before validation. Every violation is collected, not just the first.

use std::fmt;

use spinflip_core::experiments::MIN_RABI_PERIODS;
use spinflip_core::spin::MIN_STEPS_PER_PERIOD;
use spinflip_core::{ChargeSign, FrameConfig, Integrator, Model, ParticleConfig, WaveConfig};
use toml::{Table, Value};

pub const SCHEMA_VERSION: i64 = 1;

const ALIASES: [(&str, &str, &str); 7] = [
    ("g", "particle", "g"),
    ("eta", "wave", "eta"),
    ("epsilon", "wave", "epsilon"),
    ("epsilon_sq", "wave", "epsilon_sq"),
    ("omega_l", "wave", "omega_l"),
    ("steps", "sim", "steps_per_period"),
    ("t_end", "sim", "t_end"),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSection {
    pub omega_l: f64,
    pub epsilon_sq: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleSection {
    pub g: f64,
    pub charge_sign: ChargeSign,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrameSection {
    AverageRestFrame,
    Explicit { gamma_z: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputKind {
    Spin,
    Field,
}

impl OutputKind {
    fn name(self) -> &'static str {
        match self {
            OutputKind::Spin => "spin",
            OutputKind::Field => "field",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimSection {
    /// Duration in laser periods.
    pub t_end: f64,
    pub steps_per_period: usize,
    pub integrator: Integrator,
    pub outputs: Vec<OutputKind>,
    /// Emit every n-th step (the last step is always emitted).
    pub sample_every: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSection {
    pub eta_min: f64,
    pub eta_max: f64,
    pub points: usize,
    pub rabi_periods: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceSection {
    pub bracket_tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub wave: WaveSection,
    pub particle: ParticleSection,
    pub frame: FrameSection,
    pub sim: SimSection,
    pub scan: Option<ScanSection>,
    pub resonance: ResonanceSection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    Schema(Vec<Violation>),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Syntax {
                line,
                column,
                message,
            } => {
                write!(f, "syntax error at line {line}, column {column}: {message}")
            }
            ConfigError::Schema(v) => {
                let parts: Vec<String> = v.iter().map(|v| v.to_string()).collect();
                write!(f, "{}", parts.join("; "))
            }
        }
    }
}

impl std::error::Error for ConfigError {}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Parse TOML text into a raw table, reporting syntax errors by position.
pub fn parse_table(text: &str) -> Result<Table, ConfigError> {
    toml::from_str::<Table>(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
        ConfigError::Syntax {
            line,
            column,
            message: e.message().trim().lines().collect::<Vec<_>>().join("; "),
        }
    })
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    from_table(parse_table(text)?)
}

/// Reads typed values out of a table, remembering which keys were used.
struct Section<'a> {
    path: String,
    table: Option<&'a Table>,
    used: Vec<&'static str>,
}

impl<'a> Section<'a> {
    fn new(path: &str, table: Option<&'a Table>) -> Self {
        Section {
            path: path.to_string(),
            table,
            used: Vec::new(),
        }
    }

    fn key(&self, key: &str) -> String {
        format!("{}.{key}", self.path)
    }

    fn raw(&mut self, key: &'static str) -> Option<&'a Value> {
        self.used.push(key);
        self.table.and_then(|t| t.get(key))
    }

    fn number(&mut self, key: &'static str, out: &mut Vec<Violation>) -> Option<f64> {
        match self.raw(key)? {
            Value::Float(x) => Some(*x),
            Value::Integer(i) => Some(*i as f64),
            other => {
                out.push(violation(
                    self.key(key),
                    format!("expected a number, found {}", other.type_str()),
                ));
                None
            }
        }
    }

    fn integer(&mut self, key: &'static str, out: &mut Vec<Violation>) -> Option<i64> {
        match self.raw(key)? {
            Value::Integer(i) => Some(*i),
            other => {
                out.push(violation(
                    self.key(key),
                    format!("expected an integer, found {}", other.type_str()),
                ));
                None
            }
        }
    }

    fn string(&mut self, key: &'static str, out: &mut Vec<Violation>) -> Option<&'a str> {
        match self.raw(key)? {
            Value::String(s) => Some(s.as_str()),
            other => {
                out.push(violation(
                    self.key(key),
                    format!("expected a string, found {}", other.type_str()),
                ));
                None
            }
        }
    }

    fn require<T>(&self, key: &str, v: Option<T>, out: &mut Vec<Violation>) -> Option<T> {
        let present = self.table.is_some_and(|t| t.contains_key(key));
        if v.is_none() && !present {
            out.push(violation(self.key(key), "missing required key".into()));
        }
        v
    }

    fn finish(self, out: &mut Vec<Violation>) {
        if let Some(t) = self.table {
            for k in t.keys() {
                if !self.used.contains(&k.as_str()) {
                    out.push(violation(self.key(k), "unknown key".into()));
                }
            }
        }
    }
}

fn violation(path: String, message: String) -> Violation {
    Violation { path, message }
}

fn check(ok: bool, path: String, message: &str, out: &mut Vec<Violation>) {
    if !ok {
        out.push(violation(path, message.to_string()));
    }
}

/// Move top-level short keys into their sections.
fn apply_aliases(mut root: Table, out: &mut Vec<Violation>) -> Table {
    for (alias, section, key) in ALIASES {
        let Some(v) = root.remove(alias) else {
            continue;
        };
        let entry = root
            .entry(section.to_string())
            .or_insert_with(|| Value::Table(Table::new()));
        match entry {
            Value::Table(t) => {
                if t.contains_key(key) {
                    out.push(violation(
                        format!("{section}.{key}"),
                        format!("given both as `{alias}` and `{section}.{key}`"),
                    ));
                } else {
                    t.insert(key.to_string(), v);
                }
            }
            _ => out.push(violation(section.to_string(), "expected a table".into())),
        }
    }
    root
}

fn section_table<'a>(root: &'a Table, name: &str, out: &mut Vec<Violation>) -> Option<&'a Table> {
    match root.get(name) {
        None => None,
        Some(Value::Table(t)) => Some(t),
        Some(other) => {
            out.push(violation(
                name.into(),
                format!("expected a table, found {}", other.type_str()),
            ));
            None
        }
    }
}

pub fn from_table(root: Table) -> Result<RunConfig, ConfigError> {
    let mut out = Vec::new();
    let root = apply_aliases(root, &mut out);

    for (k, v) in &root {
        match k.as_str() {
            "wave" | "particle" | "frame" | "sim" | "scan" | "resonance" => {}
            "schema_version" => {
                if v.as_integer() != Some(SCHEMA_VERSION) {
                    out.push(violation(k.clone(), format!("must be {SCHEMA_VERSION}")));
                }
            }
            _ => out.push(violation(k.clone(), "unknown key".into())),
        }
    }

    // [wave]
    let mut s = Section::new("wave", section_table(&root, "wave", &mut out));
    let omega_l = s.number("omega_l", &mut out).unwrap_or(1.0);
    check(
        omega_l.is_finite() && omega_l > 0.0,
        s.key("omega_l"),
        "must be finite and > 0",
        &mut out,
    );
    let eps = s.number("epsilon", &mut out);
    let eps_sq = s.number("epsilon_sq", &mut out);
    let eta = s.number("eta", &mut out);
    let eta = s.require("eta", eta, &mut out);
    if let Some(eta) = eta {
        check(
            eta.is_finite() && eta >= 0.0,
            s.key("eta"),
            "must be finite and >= 0",
            &mut out,
        );
    }
    if let Some(e) = eps {
        check(
            (0.0..=1.0).contains(&e),
            s.key("epsilon"),
            "epsilon out of [0,1]",
            &mut out,
        );
    }
    if let Some(e) = eps_sq {
        check(
            (0.0..=1.0).contains(&e),
            s.key("epsilon_sq"),
            "epsilon_sq out of [0,1]",
            &mut out,
        );
    }
    if eps.is_some() && eps_sq.is_some() {
        out.push(violation(
            "wave".into(),
            "give either epsilon or epsilon_sq, not both".into(),
        ));
    }
    let epsilon_sq = match (eps, eps_sq) {
        (Some(e), None) => WaveConfig::new(1.0, e, 0.0)
            .map(|w| w.epsilon_sq())
            .unwrap_or(f64::NAN),
        (None, Some(e2)) => e2,
        _ => 0.5,
    };
    s.finish(&mut out);

    // [particle]
    let mut s = Section::new("particle", section_table(&root, "particle", &mut out));
    let g = s.number("g", &mut out);
    let g = s.require("g", g, &mut out);
    if let Some(g) = g {
        check(
            g.is_finite() && g != 0.0,
            s.key("g"),
            "must be finite and nonzero",
            &mut out,
        );
    }
    let charge_sign = match s.integer("charge_sign", &mut out) {
        None => ChargeSign::Positive,
        Some(v) => ChargeSign::from_value(v).unwrap_or_else(|| {
            out.push(violation(s.key("charge_sign"), "must be 1 or -1".into()));
            ChargeSign::Positive
        }),
    };
    s.finish(&mut out);

    // [frame]
    let mut s = Section::new("frame", section_table(&root, "frame", &mut out));
    let mode = s.string("mode", &mut out).unwrap_or("average_rest_frame");
    let gamma_z = s.number("gamma_z", &mut out);
    let frame = match mode {
        "average_rest_frame" => {
            if gamma_z.is_some() {
                out.push(violation(
                    s.key("gamma_z"),
                    "only allowed with mode = \"explicit\"".into(),
                ));
            }
            FrameSection::AverageRestFrame
        }
        "explicit" => {
            let gamma_z = s.require("gamma_z", gamma_z, &mut out).unwrap_or(1.0);
            check(
                gamma_z.is_finite() && gamma_z > 0.0,
                s.key("gamma_z"),
                "must be finite and > 0",
                &mut out,
            );
            FrameSection::Explicit { gamma_z }
        }
        other => {
            out.push(violation(
                s.key("mode"),
                format!("unknown mode `{other}` (expected average_rest_frame or explicit)"),
            ));
            FrameSection::AverageRestFrame
        }
    };
    s.finish(&mut out);

    // [sim]
    let mut s = Section::new("sim", section_table(&root, "sim", &mut out));
    let t_end = s.number("t_end", &mut out).unwrap_or(5.0);
    check(
        t_end.is_finite() && t_end >= 0.0,
        s.key("t_end"),
        "must be finite and >= 0",
        &mut out,
    );
    let steps = s.integer("steps_per_period", &mut out).unwrap_or(2000);
    check(
        steps >= MIN_STEPS_PER_PERIOD as i64,
        s.key("steps_per_period"),
        &format!("must be >= {MIN_STEPS_PER_PERIOD}"),
        &mut out,
    );
    let integrator = match s.string("integrator", &mut out).unwrap_or("magnus4") {
        "magnus4" => Integrator::Magnus4,
        "midpoint" => Integrator::Midpoint,
        other => {
            out.push(violation(
                s.key("integrator"),
                format!("unknown integrator `{other}` (expected magnus4 or midpoint)"),
            ));
            Integrator::Magnus4
        }
    };
    let outputs = match s.raw("outputs") {
        None => vec![OutputKind::Spin],
        Some(Value::Array(items)) => {
            let mut kinds = Vec::new();
            for item in items {
                match item.as_str() {
                    Some("spin") => kinds.push(OutputKind::Spin),
                    Some("field") => kinds.push(OutputKind::Field),
                    _ => out.push(violation(
                        s.key("outputs"),
                        format!("unknown output {item} (expected \"spin\" or \"field\")"),
                    )),
                }
            }
            kinds.dedup();
            kinds
        }
        Some(other) => {
            out.push(violation(
                s.key("outputs"),
                format!("expected an array, found {}", other.type_str()),
            ));
            vec![OutputKind::Spin]
        }
    };
    let sample_every = s.integer("sample_every", &mut out).unwrap_or(1);
    check(
        sample_every >= 1,
        s.key("sample_every"),
        "must be >= 1",
        &mut out,
    );
    s.finish(&mut out);

    // [scan]
    let scan_table = section_table(&root, "scan", &mut out);
    let scan = scan_table.map(|t| {
        let mut s = Section::new("scan", Some(t));
        let eta_min = s.number("eta_min", &mut out);
        let eta_min = s.require("eta_min", eta_min, &mut out).unwrap_or(f64::NAN);
        let eta_max = s.number("eta_max", &mut out);
        let eta_max = s.require("eta_max", eta_max, &mut out).unwrap_or(f64::NAN);
        let points = s.integer("points", &mut out);
        let points = s.require("points", points, &mut out).unwrap_or(2);
        let rabi_periods = s
            .number("rabi_periods", &mut out)
            .unwrap_or(MIN_RABI_PERIODS);
        if !eta_min.is_nan() {
            check(
                eta_min.is_finite() && eta_min > 0.0,
                s.key("eta_min"),
                "must be finite and > 0",
                &mut out,
            );
        }
        if !eta_min.is_nan() && !eta_max.is_nan() {
            check(
                eta_max.is_finite() && eta_max > eta_min,
                s.key("eta_max"),
                "must be finite and > eta_min",
                &mut out,
            );
        }
        check(points >= 2, s.key("points"), "must be >= 2", &mut out);
        check(
            rabi_periods.is_finite() && rabi_periods >= MIN_RABI_PERIODS,
            s.key("rabi_periods"),
            &format!("must be >= {MIN_RABI_PERIODS}"),
            &mut out,
        );
        s.finish(&mut out);
        ScanSection {
            eta_min,
            eta_max,
            points: points.max(2) as usize,
            rabi_periods,
        }
    });

    // [resonance]
    let mut s = Section::new("resonance", section_table(&root, "resonance", &mut out));
    let bracket_tol = s.number("bracket_tol", &mut out).unwrap_or(1e-4);
    check(
        bracket_tol.is_finite() && bracket_tol > 0.0,
        s.key("bracket_tol"),
        "must be finite and > 0",
        &mut out,
    );
    s.finish(&mut out);

    if !out.is_empty() {
        return Err(ConfigError::Schema(out));
    }
    Ok(RunConfig {
        wave: WaveSection {
            omega_l,
            epsilon_sq,
            eta: eta.unwrap_or(0.0),
        },
        particle: ParticleSection {
            g: g.unwrap_or(2.0),
            charge_sign,
        },
        frame,
        sim: SimSection {
            t_end,
            steps_per_period: steps as usize,
            integrator,
            outputs,
            sample_every: sample_every as usize,
        },
        scan,
        resonance: ResonanceSection { bracket_tol },
    })
}

fn integrator_name(i: Integrator) -> &'static str {
    match i {
        Integrator::Magnus4 => "magnus4",
        Integrator::Midpoint => "midpoint",
    }
}

fn table(entries: Vec<(&str, Value)>) -> Table {
    entries
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

impl RunConfig {
    /// Fully resolved configuration as a TOML table, every default explicit.
    pub fn to_table(&self) -> Table {
        let frame = match self.frame {
            FrameSection::AverageRestFrame => table(vec![("mode", "average_rest_frame".into())]),
            FrameSection::Explicit { gamma_z } => table(vec![
                ("mode", "explicit".into()),
                ("gamma_z", gamma_z.into()),
            ]),
        };
        let outputs: Vec<Value> = self.sim.outputs.iter().map(|o| o.name().into()).collect();
        let mut root = table(vec![
            ("schema_version", SCHEMA_VERSION.into()),
            (
                "wave",
                Value::Table(table(vec![
                    ("omega_l", self.wave.omega_l.into()),
                    ("epsilon_sq", self.wave.epsilon_sq.into()),
                    ("eta", self.wave.eta.into()),
                ])),
            ),
            (
                "particle",
                Value::Table(table(vec![
                    ("g", self.particle.g.into()),
                    (
                        "charge_sign",
                        (self.particle.charge_sign.value() as i64).into(),
                    ),
                ])),
            ),
            ("frame", Value::Table(frame)),
            (
                "sim",
                Value::Table(table(vec![
                    ("t_end", self.sim.t_end.into()),
                    (
                        "steps_per_period",
                        (self.sim.steps_per_period as i64).into(),
                    ),
                    ("integrator", integrator_name(self.sim.integrator).into()),
                    ("outputs", Value::Array(outputs)),
                    ("sample_every", (self.sim.sample_every as i64).into()),
                ])),
            ),
            (
                "resonance",
                Value::Table(table(vec![(
                    "bracket_tol",
                    self.resonance.bracket_tol.into(),
                )])),
            ),
        ]);
        if let Some(scan) = self.scan {
            root.insert(
                "scan".into(),
                Value::Table(table(vec![
                    ("eta_min", scan.eta_min.into()),
                    ("eta_max", scan.eta_max.into()),
                    ("points", (scan.points as i64).into()),
                    ("rabi_periods", scan.rabi_periods.into()),
                ])),
            );
        }
        root
    }

    /// TOML document accepted by [`parse_config`].
    pub fn serialize(&self) -> String {
        toml::to_string(&self.to_table()).expect("config tables always serialize")
    }

    pub fn wave_config(&self) -> spinflip_core::Result<WaveConfig> {
        WaveConfig::from_epsilon_sq(self.wave.omega_l, self.wave.epsilon_sq, self.wave.eta)
    }

    pub fn particle_config(&self) -> spinflip_core::Result<ParticleConfig> {
        ParticleConfig::with_charge(self.particle.g, self.particle.charge_sign)
    }

    pub fn frame_config(&self) -> spinflip_core::Result<FrameConfig> {
        match self.frame {
            FrameSection::AverageRestFrame => Ok(FrameConfig::AverageRestFrame),
            FrameSection::Explicit { gamma_z } => FrameConfig::explicit(gamma_z),
        }
    }

    pub fn model(&self) -> spinflip_core::Result<Model> {
        Model::new(
            self.wave_config()?,
            self.particle_config()?,
            self.frame_config()?,
        )
    }
}

/// Apply a `key=value` override to a raw table. `key` is a dotted path or a
/// top-level short key; `value` is read as a TOML value, falling back to a
/// bare string.
pub fn apply_override(root: &mut Table, assignment: &str) -> Result<(), String> {
    let (key, value) = assignment
        .split_once('=')
        .ok_or_else(|| format!("override `{assignment}` is not of the form key=value"))?;
    let key = key.trim();
    let value = value.trim();
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(format!("override `{assignment}` has an empty key"));
    }
    let parsed = toml::from_str::<Table>(&format!("v = {value}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(value.to_string()));

    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().expect("split yields at least one part");
    let mut cur = root;
    for p in parts {
        let entry = cur
            .entry(p.to_string())
            .or_insert_with(|| Value::Table(Table::new()));
        cur = match entry {
            Value::Table(t) => t,
            _ => return Err(format!("override `{key}`: `{p}` is not a table")),
        };
    }
    cur.insert(last.to_string(), parsed);
    Ok(())
}

/// Pull the config table out of a CSV header line written by this tool.
pub fn table_from_csv_header(text: &str) -> Option<Result<Table, ConfigError>> {
    let line = text.lines().next()?;
    let rest = line.strip_prefix('#')?;
    let idx = rest.find(" config=")?;
    let inline = &rest[idx + " config=".len()..];
    Some(
        parse_table(&format!("config = {inline}")).and_then(|mut t| match t.remove("config") {
            Some(Value::Table(c)) => Ok(c),
            _ => Err(ConfigError::Schema(vec![violation(
                "config".into(),
                "expected a table".into(),
            )])),
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "g = 2\neta = 2\nepsilon_sq = 0.5\nsteps = 2000\nt_end = 5\n";

    #[test]
    fn minimal_flat_config() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.particle.g, 2.0);
        assert_eq!(c.wave.eta, 2.0);
        assert_eq!(c.wave.epsilon_sq, 0.5);
        assert_eq!(c.sim.steps_per_period, 2000);
        assert_eq!(c.sim.t_end, 5.0);
        assert_eq!(c.frame, FrameSection::AverageRestFrame);
        assert!(c.scan.is_none());
    }

    #[test]
    fn epsilon_out_of_range() {
        let err = parse_config("g = 2\neta = 1\nepsilon = 1.5\n").unwrap_err();
        let ConfigError::Schema(v) = err else {
            panic!()
        };
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].path, "wave.epsilon");
        assert!(v[0].message.contains("epsilon out of [0,1]"));
    }

    #[test]
    fn missing_eta_listed() {
        let ConfigError::Schema(v) = parse_config("[particle]\ng = 2\n").unwrap_err() else {
            panic!()
        };
        assert!(v
            .iter()
            .any(|v| v.path == "wave.eta" && v.message.contains("missing")));
    }

    #[test]
    fn all_violations_reported() {
        let text = "schema_version = 2\nbogus = 1\n[wave]\neta = -1\nepsilon = 0.1\nepsilon_sq = 0.3\n\
                    [particle]\ng = \"two\"\ncharge_sign = 3\n[sim]\nsteps_per_period = 10\nextra = true\n\
                    [frame]\nmode = \"explicit\"\n";
        let ConfigError::Schema(v) = parse_config(text).unwrap_err() else {
            panic!()
        };
        let paths: Vec<&str> = v.iter().map(|v| v.path.as_str()).collect();
        for p in [
            "schema_version",
            "bogus",
            "wave.eta",
            "wave",
            "particle.g",
            "particle.charge_sign",
            "sim.steps_per_period",
            "sim.extra",
            "frame.gamma_z",
        ] {
            assert!(paths.contains(&p), "{p} missing from {paths:?}");
        }
    }

    #[test]
    fn syntax_error_position() {
        let err = parse_config("g = 2\neta = \n").unwrap_err();
        match err {
            ConfigError::Syntax { line, column, .. } => {
                assert_eq!(line, 2);
                assert_eq!(column, 7);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn alias_conflict() {
        let ConfigError::Schema(v) =
            parse_config("eta = 1\n[wave]\neta = 2\n[particle]\ng = 2\n").unwrap_err()
        else {
            panic!()
        };
        assert_eq!(v[0].path, "wave.eta");
    }

    #[test]
    fn round_trip_full_config() {
        let text = "[wave]\nomega_l = 1.7\nepsilon = 0.3\neta = 0.123456789012345678\n\
                    [particle]\ng = 2.002319304\ncharge_sign = -1\n\
                    [frame]\nmode = \"explicit\"\ngamma_z = 1.25\n\
                    [sim]\nt_end = 3.5\nsteps_per_period = 1000\nintegrator = \"midpoint\"\noutputs = [\"spin\", \"field\"]\n\
                    [scan]\neta_min = 0.1\neta_max = 4\npoints = 9\n";
        let c = parse_config(text).unwrap();
        let again = parse_config(&c.serialize()).unwrap();
        assert_eq!(c, again);
        assert_eq!(c.wave.epsilon_sq, 0.3f64 * 0.3);
    }

    #[test]
    fn round_trip_defaults() {
        let c = parse_config("g = 2\neta = 2\n").unwrap();
        assert_eq!(parse_config(&c.serialize()).unwrap(), c);
    }

    #[test]
    fn circular_epsilon_snaps() {
        let c = parse_config("g = 2\neta = 2\nepsilon = 0.7071067811865476\n").unwrap();
        assert_eq!(c.wave.epsilon_sq, 0.5);
    }

    #[test]
    fn overrides() {
        let mut t = parse_table(MINIMAL).unwrap();
        apply_override(&mut t, "wave.eta=3.5").unwrap();
        apply_override(&mut t, "sim.integrator=midpoint").unwrap();
        apply_override(&mut t, "g=4").unwrap();
        assert!(apply_override(&mut t, "nonsense").is_err());
        assert!(apply_override(&mut t, "a..b=1").is_err());
        // the short key `eta` and wave.eta now both exist
        assert!(from_table(t.clone()).is_err());
        t.remove("eta");
        let c = from_table(t).unwrap();
        assert_eq!(c.wave.eta, 3.5);
        assert_eq!(c.particle.g, 4.0);
        assert_eq!(c.sim.integrator, Integrator::Midpoint);
    }

    #[test]
    fn csv_header_round_trip() {
        let c = parse_config(MINIMAL).unwrap();
        let header = format!(
            "# spinflip schema_version=1 version=0.1.0 command=simulate config={}\nt,p\n",
            Value::Table(c.to_table())
        );
        let t = table_from_csv_header(&header).unwrap().unwrap();
        assert_eq!(from_table(t).unwrap(), c);
        assert!(table_from_csv_header("g = 2\n").is_none());
    }
}
