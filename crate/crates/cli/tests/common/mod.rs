//! Shared inputs for the command-line tests: tower descriptions and the
//! round-trip corpus.

#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use pvt_core::expr::{parse_operator, parse_ratfn};
use pvt_core::tower::{Tower, TowerElem};

pub const AIRY: &str = "D^2 - x";
pub const REMARK: &str = "D^2 + (1/(2*x))*D - 1/(4*x)";

pub const EXP_SQRT: &str = r#"{"generators": [
    {"name": "s", "kind": "algebraic", "data": "T^2 - x"},
    {"name": "t", "kind": "exponential", "data": "1/(2*s)"}
]}"#;
pub const SQRT: &str = r#"{"generators": [{"name": "s", "kind": "algebraic", "data": "T^2 - x"}]}"#;
pub const LOG: &str = r#"{"generators": [{"name": "l", "kind": "primitive", "data": "1/x"}]}"#;
pub const RICCATI: &str = r#"{"generators": [{"name": "w", "kind": "rational_ode", "data": "x - w^2"}]}"#;
pub const TORUS: &str = r#"{"generators": [
    {"name": "xi1", "kind": "exponential", "data": "1"},
    {"name": "xi2", "kind": "exponential", "data": "2*x"}
]}"#;
pub const DILOG: &str = r#"{"generators": [
    {"name": "l", "kind": "primitive", "data": "1/x"},
    {"name": "eta", "kind": "primitive", "data": "l/(x + 1)"}
]}"#;

#[derive(Debug, Clone, Copy)]
pub enum Input {
    Operator(&'static str),
    Rational(&'static str),
    Tower(&'static str),
    Element(&'static str, &'static str),
}

pub const OPERATORS: [&str; 24] = [
    AIRY,
    REMARK,
    "D^2",
    "D^2 - 1",
    "D - 1",
    "D - 1/x",
    "D - 1/(2*x)",
    "D^2 - 2/x^2",
    "D^2 - (1 + 1/x)*D + 1/x",
    "D^2 + 2*D + 1",
    "x*D + 1",
    "D + 1/x",
    "2*D^2 - x",
    "D^3 - x*D + 1",
    "(x^2 + 1)*D^2 - 2",
    "D^2 - (3/16)/x^2",
    "D^4",
    "D^2 + x*D",
    "(1/(x - 1))*D - x^2",
    "D^2 - 1/x - 1/(x + 1)",
    "-D",
    "1",
    "x^2*D^2 + x*D - 4",
    "D*(D - 1/x)",
];

pub const RATIONALS: [&str; 12] = [
    "1/x",
    "(x + 1)/x",
    "x^2 - 1",
    "(x^2 + 1)/(x*(x - 1))",
    "7",
    "0",
    "-x^2",
    "(4*x - 3)/(16*x^2)",
    "1/(x + 1)^3",
    "x/2 - 1/3",
    "(x^3 - x)/(x^2 + 1)",
    "1/(2*x)",
];

pub const TOWERS: [&str; 9] = [
    SQRT,
    EXP_SQRT,
    LOG,
    RICCATI,
    TORUS,
    DILOG,
    r#"{"generators": [{"name": "c", "kind": "algebraic", "data": "T^3 - x"}]}"#,
    r#"{"generators": [{"name": "w", "kind": "rational_ode", "data": "1 + w^2"}]}"#,
    r#"{"generators": [
        {"name": "l", "kind": "primitive", "data": "1/x"},
        {"name": "m", "kind": "primitive", "data": "1/(x*l)"}
    ]}"#,
];

pub const ELEMENTS: [(&str, &str); 5] = [
    (EXP_SQRT, "t + 1/t"),
    (RICCATI, "w"),
    (TORUS, "xi1*xi2"),
    (DILOG, "eta"),
    (SQRT, "(s + 1)/(s - x)"),
];

/// Fifty inputs covering every parser, including all acceptance inputs.
pub fn corpus() -> Vec<Input> {
    let mut out: Vec<Input> = OPERATORS.iter().map(|s| Input::Operator(s)).collect();
    out.extend(RATIONALS.iter().map(|s| Input::Rational(s)));
    out.extend(TOWERS.iter().map(|s| Input::Tower(s)));
    out.extend(ELEMENTS.iter().map(|(t, e)| Input::Element(t, e)));
    out
}

fn shared(json: &str) -> Result<Arc<Tower>, String> {
    Tower::from_json(json).map(Tower::into_shared).map_err(|e| e.to_string())
}

/// Parses, prints, parses again and compares; also requires the printed form to
/// be a fixed point. Returns the printed form.
pub fn round_trip(input: Input) -> Result<String, String> {
    let err = |e: pvt_core::Error| e.to_string();
    let (printed, again) = match input {
        Input::Operator(s) => {
            let a = parse_operator(s).map_err(err)?;
            let p = a.to_canonical_string();
            let b = parse_operator(&p).map_err(err)?;
            if a != b {
                return Err(format!("{s} -> {p} changed value"));
            }
            (p, b.to_canonical_string())
        }
        Input::Rational(s) => {
            let a = parse_ratfn(s).map_err(err)?;
            let p = a.to_string();
            let b = parse_ratfn(&p).map_err(err)?;
            if a != b {
                return Err(format!("{s} -> {p} changed value"));
            }
            (p, b.to_string())
        }
        Input::Tower(s) => {
            let a = shared(s)?;
            let p = serde_json::to_string(&a.to_spec()).unwrap();
            let b = shared(&p)?;
            if a != b {
                return Err(format!("tower {p} changed value"));
            }
            (p, serde_json::to_string(&b.to_spec()).unwrap())
        }
        Input::Element(t, s) => {
            let t = shared(t)?;
            let a = TowerElem::parse(&t, s).map_err(err)?;
            let p = a.to_string();
            let b = TowerElem::parse(&t, &p).map_err(err)?;
            if a != b {
                return Err(format!("{s} -> {p} changed value"));
            }
            (p, b.to_string())
        }
    };
    if printed == again {
        Ok(printed)
    } else {
        Err(format!("printing is not stable: {printed} vs {again}"))
    }
}

/// Writes the named towers into a fresh directory.
pub fn tower_files(towers: &[(&str, &str)]) -> (tempfile::TempDir, Vec<PathBuf>) {
    let dir = tempfile::tempdir().unwrap();
    let paths = towers
        .iter()
        .map(|(name, json)| {
            let p = dir.path().join(format!("{name}.json"));
            std::fs::write(&p, json).unwrap();
            p
        })
        .collect();
    (dir, paths)
}
