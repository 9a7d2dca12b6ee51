#![allow(dead_code)]

use std::path::PathBuf;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

/// Rows of a checked-in CSV table, header dropped.
pub fn read_csv(name: &str) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(data_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

pub fn anchor(name: &str) -> f64 {
    read_csv("anchors.csv")
        .into_iter()
        .find(|r| r[0] == name)
        .unwrap_or_else(|| panic!("no anchor {name}"))[1]
        .parse()
        .unwrap()
}
