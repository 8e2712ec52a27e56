#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use pgen_core::interaction::{parse_script, Answer};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn listing() -> String {
    fs::read_to_string(fixtures().join("ogolovok.ppg")).unwrap()
}

pub struct CorpusItem {
    pub name: String,
    pub source: String,
    pub answers: Vec<Answer>,
}

pub fn corpus() -> Vec<CorpusItem> {
    let dir = fixtures().join("corpus");
    let mut paths: Vec<_> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "ppg"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let answers = p.with_extension("answers.json");
            let answers = match fs::read_to_string(&answers) {
                Ok(text) => parse_script(&text).unwrap(),
                Err(_) => Vec::new(),
            };
            CorpusItem {
                name: p.file_stem().unwrap().to_string_lossy().into_owned(),
                source: fs::read_to_string(&p).unwrap(),
                answers,
            }
        })
        .collect()
}
