//! Monomials, variable orders, and exact sparse integer polynomials.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Total order on variable labels.
///
/// The default compares the alphabetic prefix bytewise and then the numeric
/// suffix as a number, with "no suffix" first: `A < B < V1 < V2 < V10 < W < W1`.
#[derive(Clone, Debug, Default)]
pub struct VariableOrder {
    explicit: HashMap<String, usize>,
}

impl VariableOrder {
    /// Labels listed here come first, in the given order; the rest follow by
    /// the default comparison.
    pub fn explicit<I: IntoIterator<Item = String>>(labels: I) -> VariableOrder {
        let mut explicit = HashMap::new();
        for l in labels {
            let k = explicit.len();
            explicit.entry(l).or_insert(k);
        }
        VariableOrder { explicit }
    }

    /// Parses a whitespace-separated list of labels (`#` comments allowed).
    pub fn parse(text: &str) -> VariableOrder {
        Self::explicit(
            text.lines()
                .flat_map(|l| crate::graph::strip_comment(l).split_whitespace())
                .map(str::to_string)
                .collect::<Vec<_>>(),
        )
    }

    pub fn cmp(&self, a: &str, b: &str) -> Ordering {
        match (self.explicit.get(a), self.explicit.get(b)) {
            (Some(x), Some(y)) => x.cmp(y),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => default_cmp(a, b),
        }
    }

    pub fn less(&self, a: &str, b: &str) -> bool {
        self.cmp(a, b) == Ordering::Less
    }
}

fn split_suffix(s: &str) -> (&str, Option<u64>) {
    let cut = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (head, tail) = s.split_at(cut);
    (head, tail.parse().ok())
}

fn default_cmp(a: &str, b: &str) -> Ordering {
    let (ha, na) = split_suffix(a);
    let (hb, nb) = split_suffix(b);
    ha.as_bytes().cmp(hb.as_bytes()).then(na.cmp(&nb)).then(a.cmp(b))
}

/// Exponent map with no zero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: BTreeMap<String, u32>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (String, u32)>>(pairs: I) -> Monomial {
        let mut m = Monomial::default();
        for (v, e) in pairs {
            m.mul_var(&v, e);
        }
        m
    }

    pub fn mul_var(&mut self, v: &str, e: u32) {
        if e > 0 {
            *self.exps.entry(v.to_string()).or_insert(0) += e;
        }
    }

    /// Parses `A^2*B^3*W`; `1` is the empty monomial.
    pub fn parse(s: &str) -> Result<Monomial> {
        let s = s.trim();
        let mut m = Monomial::default();
        if s == "1" {
            return Ok(m);
        }
        for part in s.split('*') {
            let part = part.trim();
            let (v, e) = match part.split_once('^') {
                Some((v, e)) => {
                    let e: u32 = e
                        .trim()
                        .parse()
                        .map_err(|_| Error::Invalid(format!("bad exponent in `{part}`")))?;
                    (v.trim(), e)
                }
                None => (part, 1),
            };
            if v.is_empty() || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Invalid(format!("bad variable in monomial `{s}`")));
            }
            m.mul_var(v, e);
        }
        Ok(m)
    }

    pub fn degree(&self) -> u32 {
        self.exps.values().sum()
    }

    pub fn exponent(&self, v: &str) -> u32 {
        self.exps.get(v).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.exps.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Renders with variables sorted by `ord`.
    pub fn display(&self, ord: &VariableOrder) -> String {
        if self.exps.is_empty() {
            return "1".into();
        }
        let mut vars: Vec<(&String, &u32)> = self.exps.iter().collect();
        vars.sort_by(|a, b| ord.cmp(a.0, b.0));
        vars.iter()
            .map(|(v, &e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display(&VariableOrder::default()))
    }
}

/// Exact polynomial over a fixed variable list, terms keyed by dense exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePolynomial {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl SparsePolynomial {
    pub fn constant(vars: Vec<String>, c: BigInt) -> SparsePolynomial {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; vars.len()], c);
        }
        SparsePolynomial { vars, terms }
    }

    pub fn one(vars: Vec<String>) -> SparsePolynomial {
        Self::constant(vars, BigInt::one())
    }

    /// The binomial `X_i - X_j`.
    pub fn difference(vars: Vec<String>, i: usize, j: usize) -> SparsePolynomial {
        let n = vars.len();
        let mut p = SparsePolynomial { vars, terms: BTreeMap::new() };
        let mut a = vec![0; n];
        a[i] = 1;
        let mut b = vec![0; n];
        b[j] = 1;
        p.terms.insert(a, BigInt::one());
        p.terms.insert(b, -BigInt::one());
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &SparsePolynomial) -> SparsePolynomial {
        assert_eq!(self.vars, other.vars, "polynomials over different variables");
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let slot = terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *slot += c;
            if slot.is_zero() {
                terms.remove(e);
            }
        }
        SparsePolynomial { vars: self.vars.clone(), terms }
    }

    pub fn mul(&self, other: &SparsePolynomial) -> SparsePolynomial {
        assert_eq!(self.vars, other.vars, "polynomials over different variables");
        let mut terms: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *terms.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        SparsePolynomial { vars: self.vars.clone(), terms }
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        let mut e = vec![0; self.vars.len()];
        for (v, k) in m.iter() {
            match self.vars.iter().position(|x| x == v) {
                Some(i) => e[i] = k,
                None => return BigInt::zero(),
            }
        }
        self.terms.get(&e).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigInt)> {
        self.terms.iter().map(move |(e, c)| {
            let m = Monomial::from_pairs(
                e.iter().enumerate().map(|(i, &k)| (self.vars[i].clone(), k)),
            );
            (m, c)
        })
    }
}
