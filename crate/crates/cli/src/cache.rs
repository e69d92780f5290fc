//! Persistent Tutte memo cache.
//!
//! The file starts with the version line `ngo-strings-tutte-cache v1`. Every
//! further line holds one entry: the canonical graph key in lowercase hex, a
//! tab, then the nonzero coefficients as space-separated `i:j:c` triples for
//! the monomials `c x^i y^j`. Entries are written sorted by key.

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::{BigInt, BigUint};

use ngo_strings::matroid::TutteCache;
use ngo_strings::{MultiGraph, TuttePolynomial};

pub const CACHE_HEADER: &str = "ngo-strings-tutte-cache v1";

pub type Entries = Vec<(Vec<u8>, TuttePolynomial)>;

/// What a load produced. Any problem leaves the caller with a cold cache.
#[derive(Debug)]
pub enum Loaded {
    Missing,
    Entries(Entries),
    Rejected(String),
}

pub fn load(path: &Path) -> Loaded {
    match std::fs::read_to_string(path) {
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Loaded::Missing,
        Err(e) => Loaded::Rejected(format!("cannot read cache {}: {e}", path.display())),
        Ok(text) => match parse(&text) {
            Ok(entries) => Loaded::Entries(entries),
            Err(e) => Loaded::Rejected(format!("ignoring cache {}: {e}", path.display())),
        },
    }
}

pub fn parse(text: &str) -> Result<Entries, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(CACHE_HEADER) => {}
        Some(other) => return Err(format!("version mismatch: found {other:?}, expected {CACHE_HEADER:?}")),
        None => return Err("empty file".into()),
    }
    let mut entries = Vec::new();
    for (no, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let at = |msg: &str| format!("line {}: {msg}", no + 2);
        let (hex, body) = line.split_once('\t').ok_or_else(|| at("missing tab"))?;
        let key = decode_hex(hex).ok_or_else(|| at("bad hex key"))?;
        let poly = parse_terms(body).ok_or_else(|| at("bad coefficient list"))?;
        check_entry(&key, &poly).map_err(|e| at(&e))?;
        entries.push((key, poly));
    }
    Ok(entries)
}

/// Cheap sanity checks so a damaged entry cannot poison later results: the
/// key must be a canonical key of a connected loopless graph, the degrees
/// must be `(r - 1, b1)` and `T(2, 2)` must equal `2^s`.
fn check_entry(key: &[u8], poly: &TuttePolynomial) -> Result<(), String> {
    let graph = MultiGraph::from_canonical_key(key).map_err(|e| e.to_string())?;
    if graph.canonical_key() != key {
        return Err("key is not canonical".into());
    }
    if graph.loop_count() > 0 {
        return Err("cached graph has loops".into());
    }
    let b1 = graph.betti1().map_err(|_| "cached graph is disconnected".to_string())?;
    let max_x = poly.terms().map(|(i, _, _)| i).max();
    let max_y = poly.terms().map(|(_, j, _)| j).max();
    if max_x != Some(graph.vertex_count() as u32 - 1) || max_y != Some(b1 as u32) {
        return Err("polynomial degrees do not match the graph".into());
    }
    if poly.evaluate_i64(2, 2) != BigInt::from(1) << graph.edge_count() {
        return Err("T(2,2) != 2^s".into());
    }
    Ok(())
}

fn decode_hex(s: &str) -> Option<Vec<u8>> {
    if !s.len().is_multiple_of(2) || !s.bytes().all(|b| b.is_ascii_hexdigit()) {
        return None;
    }
    (0..s.len()).step_by(2).map(|i| u8::from_str_radix(&s[i..i + 2], 16).ok()).collect()
}

fn parse_terms(body: &str) -> Option<TuttePolynomial> {
    let mut terms = Vec::new();
    for tok in body.split_whitespace() {
        let mut it = tok.splitn(3, ':');
        let i = it.next()?.parse().ok()?;
        let j = it.next()?.parse().ok()?;
        let c: BigUint = it.next()?.parse().ok()?;
        terms.push((i, j, c));
    }
    Some(TuttePolynomial::from_terms(terms))
}

pub fn render(entries: &[(Vec<u8>, TuttePolynomial)]) -> String {
    let mut out = format!("{CACHE_HEADER}\n");
    for (key, poly) in entries {
        for b in key {
            let _ = write!(out, "{b:02x}");
        }
        out.push('\t');
        let terms: Vec<String> = poly.terms().map(|(i, j, c)| format!("{i}:{j}:{c}")).collect();
        out.push_str(&terms.join(" "));
        out.push('\n');
    }
    out
}

/// Writes through a sibling temporary file so an interrupted run never leaves
/// a truncated cache behind.
pub fn store(path: &Path, cache: &TutteCache) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    std::fs::write(&tmp, render(&cache.entries()))?;
    std::fs::rename(&tmp, path)
}
