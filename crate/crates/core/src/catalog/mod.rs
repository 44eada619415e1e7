//! Configuration patterns, detection, and the shipped corpus of reduction certificates.

pub mod cert;
pub mod pattern;

use std::cmp::Ordering;

use crate::error::Result;

pub use cert::Certificate;
pub use pattern::{detect, detect_near, is_subconfiguration, ConfigPattern, Match};

mod files {
    include!(concat!(env!("OUT_DIR"), "/corpus_files.rs"));
}

/// Orders ids like `C2 < C3a < C10b < C13a-2`, comparing digit runs numerically.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, String)> {
        let mut out: Vec<(bool, String)> = Vec::new();
        for ch in s.chars() {
            let d = ch.is_ascii_digit();
            match out.last_mut() {
                Some((k, buf)) if *k == d => buf.push(ch),
                _ => out.push((d, ch.to_string())),
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for (x, y) in ca.iter().zip(&cb) {
        let o = match (x.0, y.0) {
            (true, true) => {
                let (p, q) = (x.1.trim_start_matches('0'), y.1.trim_start_matches('0'));
                p.len().cmp(&q.len()).then_with(|| p.cmp(q))
            }
            _ => x.1.cmp(&y.1),
        };
        if o != Ordering::Equal {
            return o;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

/// All shipped certificates, in natural id order.
pub fn certificates() -> Result<Vec<Certificate>> {
    let mut v: Vec<Certificate> = files::CERTS
        .iter()
        .map(|(id, text)| Certificate::parse(id, text))
        .collect::<Result<_>>()?;
    v.sort_by(|a, b| natural_cmp(&a.id, &b.id));
    Ok(v)
}

/// All shipped configuration patterns, in natural id order.
pub fn patterns() -> Result<Vec<ConfigPattern>> {
    let mut v: Vec<ConfigPattern> = files::PATTERNS.iter().map(|(_, text)| ConfigPattern::parse(text)).collect::<Result<_>>()?;
    v.sort_by(|a, b| natural_cmp(&a.id, &b.id));
    Ok(v)
}

/// Patterns whose id is `id` or starts with `id` followed by a disjunct suffix.
pub fn patterns_for(id: &str) -> Result<Vec<ConfigPattern>> {
    Ok(patterns()?
        .into_iter()
        .filter(|p| {
            p.id == id
                || p.id.strip_prefix(id).is_some_and(|rest| {
                    rest.starts_with('-') || (rest.len() == 1 && rest.chars().all(|c| c.is_ascii_lowercase()))
                        || rest.chars().next().is_some_and(|c| c.is_ascii_lowercase()) && rest[1..].starts_with('-')
                })
        })
        .collect())
}
