//! The discharging weight system: initial charges, rules R1 to R13, and the
//! check that negative final charge points at a reducible configuration.

use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::catalog::{detect_near, ConfigPattern};
use crate::classify::{classify_neighbor, SClass};
use crate::error::{Error, Result};
use crate::graph::EmbeddedGraph;

pub type Q = Ratio<i64>;

fn q(n: i64, d: i64) -> Q {
    Ratio::new(n, d)
}

/// Every amount a rule may move.
pub fn table_amounts() -> [Q; 10] {
    [q(1, 1), q(1, 2), q(5, 12), q(1, 3), q(1, 6), q(1, 12), q(2, 3), q(7, 12), q(1, 4), q(1, 5)]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Charged {
    Vertex(usize),
    Face(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    R1,
    R2,
    R3,
    R3Plus,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
    R12,
    R13,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::R3Plus => f.write_str("R3+"),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transfer {
    pub rule: Rule,
    pub from: Charged,
    pub to: Charged,
    pub amount: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChargeLedger {
    pub initial: Vec<(Charged, Q)>,
    pub transfers: Vec<Transfer>,
    pub finals: Vec<(Charged, Q)>,
}

impl ChargeLedger {
    pub fn initial_total(&self) -> Q {
        self.initial.iter().map(|(_, w)| *w).sum()
    }

    pub fn final_total(&self) -> Q {
        self.finals.iter().map(|(_, w)| *w).sum()
    }

    pub fn final_of(&self, x: Charged) -> Option<Q> {
        self.finals.iter().find(|(y, _)| *y == x).map(|(_, w)| *w)
    }

    /// The line-oriented text form: transfers, final charges, then the total.
    pub fn render(&self, g: &EmbeddedGraph) -> String {
        let mut out = String::new();
        for t in &self.transfers {
            out.push_str(&format!(
                "xfer {} {} {} {}\n",
                t.rule,
                charged_name(g, t.from),
                charged_name(g, t.to),
                frac(t.amount)
            ));
        }
        for (x, w) in &self.finals {
            out.push_str(&format!("final {} {}\n", charged_name(g, *x), frac(*w)));
        }
        out.push_str(&format!("total {}\n", frac(self.final_total())));
        out
    }
}

fn frac(x: Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn charged_name(g: &EmbeddedGraph, x: Charged) -> String {
    match x {
        Charged::Vertex(v) => g.label(v).to_string(),
        Charged::Face(f) => format!("f{f}"),
    }
}

fn check_input(g: &EmbeddedGraph) -> Result<()> {
    if g.max_degree() > 8 {
        return Err(Error::DegreeTooLarge(g.max_degree()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// `d - 6` on vertices and `2l - 6` on faces.
pub fn initial_weights(g: &EmbeddedGraph) -> Result<Vec<(Charged, Q)>> {
    check_input(g)?;
    let faces = g.faces()?;
    let mut out: Vec<(Charged, Q)> =
        (0..g.n()).map(|v| (Charged::Vertex(v), Q::from_integer(g.degree(v) as i64 - 6))).collect();
    out.extend((0..faces.len()).map(|f| (Charged::Face(f), Q::from_integer(2 * faces.length(f) as i64 - 6))));
    Ok(out)
}

pub fn apply_rules(g: &EmbeddedGraph) -> Result<ChargeLedger> {
    let initial = initial_weights(g)?;
    let mut transfers = Vec::new();
    face_rules(g, &mut transfers)?;
    for u in 0..g.n() {
        match g.degree(u) {
            8 => eight_rules(g, u, &mut transfers)?,
            7 => seven_rules(g, u, &mut transfers)?,
            _ => {}
        }
    }
    let mut finals = initial.clone();
    let slot = |x: Charged| match x {
        Charged::Vertex(v) => v,
        Charged::Face(f) => g.n() + f,
    };
    for t in &transfers {
        finals[slot(t.from)].1 -= t.amount;
        finals[slot(t.to)].1 += t.amount;
    }
    Ok(ChargeLedger { initial, transfers, finals })
}

fn face_rules(g: &EmbeddedGraph, out: &mut Vec<Transfer>) -> Result<()> {
    let faces = g.faces()?;
    for (f, walk) in faces.walks.iter().enumerate() {
        let l = walk.len();
        if l < 4 {
            continue;
        }
        for i in 0..l {
            let v = walk[i];
            let a = g.degree(walk[(i + l - 1) % l]);
            let b = g.degree(walk[(i + 1) % l]);
            let mut give = |rule, amount| {
                out.push(Transfer { rule, from: Charged::Face(f), to: Charged::Vertex(v), amount });
            };
            match g.degree(v) {
                d if d <= 5 => give(Rule::R1, q(1, 1)),
                8 if (a == 3 && b >= 6) || (b == 3 && a >= 6) => give(Rule::R2, q(5, 12)),
                7 if a >= 6 && b >= 6 => give(Rule::R3, if a == 6 || b == 6 { q(1, 3) } else { q(1, 12) }),
                7 if (a.min(b), a.max(b)) == (5, 6) => {
                    let last_is_5 = l == 4 && g.degree(walk[(i + 2) % 4]) == 5;
                    if !last_is_5 {
                        give(Rule::R3Plus, q(1, 6));
                    }
                }
                _ => {}
            }
        }
    }
    Ok(())
}

fn eight_rules(g: &EmbeddedGraph, u: usize, out: &mut Vec<Transfer>) -> Result<()> {
    for &v in g.rotation(u) {
        let c = classify_neighbor(g, u, v)?;
        let amount = match (g.degree(v), c.pq) {
            (3, _) if c.is_weak() => Some((Rule::R4, q(1, 1))),
            (3, _) if c.is_semi_weak() => Some((Rule::R5, q(1, 2))),
            (4, Some(pq)) => match pq {
                (7, 7) => Some((Rule::R6, q(2, 3))),
                (7, 8) => Some((Rule::R6, q(7, 12))),
                (8, 8) => Some((Rule::R6, q(1, 2))),
                _ => None,
            },
            (4, None) if c.is_semi_weak() => {
                let seven_face = g.rotation(v).iter().any(|&w| g.degree(w) == 7 && g.is_triangular_face(u, v, w));
                seven_face.then_some((Rule::R7, q(1, 12)))
            }
            (5, Some((p, qq))) if p >= 5 => Some((
                Rule::R8,
                if (p, qq) == (5, 6) {
                    q(1, 2)
                } else if p == 5 {
                    q(1, 6)
                } else if (p, qq) == (6, 6) {
                    q(2, 3)
                } else if c.e3 == Some(true) {
                    q(1, 3)
                } else {
                    q(1, 4)
                },
            )),
            _ => None,
        };
        if let Some((rule, amount)) = amount {
            out.push(Transfer { rule, from: Charged::Vertex(u), to: Charged::Vertex(v), amount });
        }
    }
    Ok(())
}

fn seven_rules(g: &EmbeddedGraph, u: usize, out: &mut Vec<Transfer>) -> Result<()> {
    for &v in g.rotation(u) {
        let c = classify_neighbor(g, u, v)?;
        let mut give = |rule, amount| out.push(Transfer { rule, from: Charged::Vertex(u), to: Charged::Vertex(v), amount });
        match g.degree(v) {
            4 => match c.pq {
                Some((7, 7)) => give(Rule::R9, q(1, 2)),
                Some((7, 8)) => give(Rule::R9, q(5, 12)),
                Some((8, 8)) => give(Rule::R9, q(1, 3)),
                _ => {}
            },
            5 if c.is_weak() => {
                if c.pq == Some((5, 6)) {
                    give(Rule::R10, q(1, 2));
                }
                match c.s_class {
                    Some(SClass::S3) => give(Rule::R11, q(1, 3)),
                    Some(SClass::S5) => give(Rule::R12, q(1, 5)),
                    Some(SClass::S6) => give(Rule::R13, q(1, 6)),
                    None => {}
                }
            }
            _ => {}
        }
    }
    Ok(())
}

/// A negatively charged element and the configurations found around it.
#[derive(Clone, Debug)]
pub struct NegativeReport {
    pub element: Charged,
    pub weight: Q,
    pub configs: Vec<String>,
}

/// Closed neighborhood of a vertex, or the boundary of a face.
pub fn vicinity(g: &EmbeddedGraph, x: Charged) -> Result<Vec<usize>> {
    Ok(match x {
        Charged::Vertex(v) => std::iter::once(v).chain(g.rotation(v).iter().copied()).collect(),
        Charged::Face(f) => g.faces()?.walks[f].clone(),
    })
}

pub fn verify_final(g: &EmbeddedGraph, ledger: &ChargeLedger, patterns: &[ConfigPattern]) -> Result<Vec<NegativeReport>> {
    let mut out = Vec::new();
    for &(x, w) in &ledger.finals {
        if !w.is_negative() {
            continue;
        }
        let near = vicinity(g, x)?;
        let configs = patterns.iter().filter(|p| !detect_near(g, p, &near).is_empty()).map(|p| p.id.clone()).collect();
        out.push(NegativeReport { element: x, weight: w, configs });
    }
    Ok(out)
}

/// Transfers whose amount is outside the rule table.
pub fn off_table(ledger: &ChargeLedger) -> Vec<&Transfer> {
    let table = table_amounts();
    ledger.transfers.iter().filter(|t| t.amount.is_zero() || !table.contains(&t.amount)).collect()
}
