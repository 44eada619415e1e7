use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use rayon::prelude::*;

use tc10::catalog::{self, Certificate};
use tc10::choose::{self, Graph};
use tc10::colorer::{self, ColorerConfig, Outcome};
use tc10::discharge;
use tc10::error::{Error, Result};
use tc10::graph::EmbeddedGraph;
use tc10::nss::{self, ConstraintGraph};
use tc10::poly::VariableOrder;
use tc10::shift;
use tc10::total::TotalGraph;

#[derive(Parser)]
#[command(name = "tc10", version, about = "Total list coloring toolkit for planar graphs of maximum degree 8")]
struct Cli {
    /// Variable order file: labels in increasing order, whitespace separated.
    #[arg(long, global = true, value_name = "FILE")]
    order: Option<PathBuf>,
    /// Worker threads for corpus runs.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Node budget for searches.
    #[arg(long, global = true, value_name = "N")]
    node_cap: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Coefficient of the target monomial (.cg constraint file or .cert certificate).
    Coeff { file: PathBuf },
    /// Search for a suitable monomial under the file's caps.
    MonomialSearch { file: PathBuf },
    /// Decide f-choosability of a small graph.
    Choosable { graph: PathBuf, f: PathBuf },
    /// Run the discharging rules and report negative elements.
    Discharge { graph: PathBuf },
    /// List occurrences of shipped configurations.
    Detect { graph: PathBuf, config: Option<String> },
    /// Build the shifting graph of a colored clique and shift along a cycle.
    Shift { graph: PathBuf, coloring: PathBuf, clique: PathBuf },
    /// Total list coloring from per-element lists.
    Color { graph: PathBuf, lists: PathBuf },
    /// Work with the shipped certificate corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusCmd,
    },
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// Check every certificate and print a table.
    Verify,
    /// Write each certificate as a constraint file into DIR.
    Export { dir: PathBuf },
}

enum Verdict {
    Yes,
    No,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut out = String::new();
    let res = run(&cli, &mut out);
    print!("{out}");
    match res {
        Ok(Verdict::Yes) => ExitCode::SUCCESS,
        Ok(Verdict::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Yes
    } else {
        Verdict::No
    }
}

fn run(cli: &Cli, out: &mut String) -> Result<Verdict> {
    let ord = match &cli.order {
        Some(p) => VariableOrder::parse(&read(p)?),
        None => VariableOrder::default(),
    };
    match &cli.cmd {
        Cmd::Coeff { file } => {
            let h = load_constraints(file)?;
            let m = h.target.clone().ok_or_else(|| Error::Invalid("no `target` line".into()))?;
            let c = nss::coefficient(&h, &ord, &m)?;
            let _ = writeln!(out, "{}", c.value);
            if !c.degree_matches() {
                eprintln!("note: target degree {} differs from polynomial degree {}", c.target_degree, c.poly_degree);
            }
            Ok(match &h.expect {
                Some(z) if *z != c.value => {
                    eprintln!("expected {z}{}", ordering_hint(&c.value, z));
                    Verdict::No
                }
                _ => Verdict::Yes,
            })
        }
        Cmd::MonomialSearch { file } => {
            let h = load_constraints(file)?;
            let s = nss::find_monomial(&h, &ord, &h.caps, cli.node_cap)?;
            match s.found {
                Some((m, c)) => {
                    let _ = writeln!(out, "{} {c}", m.display(&ord));
                    Ok(Verdict::Yes)
                }
                None => {
                    let _ = writeln!(out, "NONE");
                    if !s.complete {
                        eprintln!("node cap reached after {} nodes", s.nodes);
                    }
                    Ok(Verdict::No)
                }
            }
        }
        Cmd::Choosable { graph, f } => {
            let g = EmbeddedGraph::parse(&read(graph)?)?;
            let h = Graph::from_edges(g.n(), &g.edges());
            let fv = parse_f(&g, &read(f)?)?;
            let r = choose::f_choosable(&h, &fv)?;
            if r.choosable {
                let _ = writeln!(out, "choosable ({} assignments)", r.assignments_checked);
            } else {
                let _ = writeln!(out, "not choosable");
                for (v, l) in r.witness.iter().flatten().enumerate() {
                    let cs: Vec<String> = l.iter().map(|c| c.to_string()).collect();
                    let _ = writeln!(out, "list {}: {}", g.label(v), cs.join(" "));
                }
            }
            Ok(verdict(r.choosable))
        }
        Cmd::Discharge { graph } => {
            let g = EmbeddedGraph::parse(&read(graph)?)?;
            let ledger = discharge::apply_rules(&g)?;
            let reports = discharge::verify_final(&g, &ledger, &catalog::patterns()?)?;
            let mut ok = true;
            for r in &reports {
                let name = discharge::charged_name(&g, r.element);
                if r.configs.is_empty() {
                    ok = false;
                    let _ = writeln!(out, "unreduced {name} {}/{}", r.weight.numer(), r.weight.denom());
                } else {
                    let _ = writeln!(out, "negative {name} {}/{} {}", r.weight.numer(), r.weight.denom(), r.configs.join(" "));
                }
            }
            out.push_str(&ledger.render(&g));
            Ok(verdict(ok))
        }
        Cmd::Detect { graph, config } => {
            let g = EmbeddedGraph::parse(&read(graph)?)?;
            let pats = match config {
                Some(id) => catalog::patterns_for(id)?,
                None => catalog::patterns()?,
            };
            if pats.is_empty() {
                return Err(Error::Invalid(format!("unknown configuration `{}`", config.as_deref().unwrap_or(""))));
            }
            let mut any = false;
            for p in &pats {
                for m in catalog::detect(&g, p) {
                    any = true;
                    let pairs: Vec<String> =
                        m.iter().enumerate().map(|(i, &v)| format!("{}={}", p.label(i), g.label(v))).collect();
                    let _ = writeln!(out, "match {} {}", p.id, pairs.join(" "));
                }
            }
            if !any {
                let _ = writeln!(out, "none");
            }
            Ok(verdict(any))
        }
        Cmd::Shift { graph, coloring, clique } => {
            let g = EmbeddedGraph::parse(&read(graph)?)?;
            let t = TotalGraph::new(&g);
            let gamma = colorer::parse_coloring(&g, &t, &read(coloring)?)?;
            let (s, lists) = parse_clique(&g, &t, &read(clique)?)?;
            let h = shift::build_shifting_graph(&t, &s, &gamma, &lists)?;
            let node_name = |i: usize| match h.nodes[i] {
                shift::Node::Elem(x) => t.name(x).to_string(),
                shift::Node::Color(c) => format!("s{c}"),
            };
            let _ = writeln!(out, "nodes {} arcs {}", h.len(), h.arc_count());
            let src: Vec<String> = shift::source_scc(&h).into_iter().map(node_name).collect();
            let _ = writeln!(out, "source {}", src.join(" "));
            let targets: Vec<usize> = (0..h.clique_len()).collect();
            match shift::find_shift_cycle(&h, &targets) {
                Some(cyc) => {
                    let names: Vec<String> = cyc.iter().map(|&i| node_name(i)).collect();
                    let _ = writeln!(out, "cycle {}", names.join(" "));
                    let new = shift::shift_along_cycle(&h, &cyc)?;
                    for (x, c) in new.iter().enumerate() {
                        if let Some(c) = c {
                            let _ = writeln!(out, "set {} {c}", t.name(x));
                        }
                    }
                    Ok(Verdict::Yes)
                }
                None => {
                    let _ = writeln!(out, "cycle none");
                    Ok(Verdict::No)
                }
            }
        }
        Cmd::Color { graph, lists } => {
            let g = EmbeddedGraph::parse(&read(graph)?)?;
            let t = TotalGraph::new(&g);
            let l = colorer::parse_lists(&g, &t, &read(lists)?)?;
            let mut cfg = ColorerConfig::default();
            if let Some(n) = cli.node_cap {
                cfg.node_cap = n;
            }
            match colorer::total_color(&g, &l, cfg)? {
                Outcome::Colored(col) => {
                    out.push_str(&colorer::render_coloring(&t, &col));
                    Ok(Verdict::Yes)
                }
                Outcome::Stuck { kernel } => {
                    let names: Vec<&str> = kernel.iter().map(|&x| t.name(x)).collect();
                    let _ = writeln!(out, "stuck {}", names.join(" "));
                    Ok(Verdict::No)
                }
            }
        }
        Cmd::Corpus { action: CorpusCmd::Verify } => corpus_verify(&ord, out),
        Cmd::Corpus { action: CorpusCmd::Export { dir } } => {
            fs::create_dir_all(dir)?;
            for c in catalog::certificates()? {
                let h = c.constraint_graph()?;
                fs::write(dir.join(format!("{}.cg", c.id)), h.to_text(&ord))?;
            }
            Ok(Verdict::Yes)
        }
    }
}

fn load_constraints(p: &Path) -> Result<ConstraintGraph> {
    let text = read(p)?;
    if p.extension().is_some_and(|e| e == "cert") {
        let id = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        Certificate::parse(&id, &text)?.constraint_graph()
    } else {
        ConstraintGraph::parse(&text)
    }
}

fn ordering_hint(value: &BigInt, expected: &BigInt) -> &'static str {
    if nss::sign_only_mismatch(value, expected) {
        " (sign differs: check the variable order)"
    } else {
        ""
    }
}

fn corpus_verify(ord: &VariableOrder, out: &mut String) -> Result<Verdict> {
    let certs = catalog::certificates()?;
    let rows: Vec<(String, bool)> = certs
        .par_iter()
        .map(|c| {
            let row = (|| -> Result<(bool, String)> {
                let h = c.constraint_graph()?;
                let r = nss::verify_certificate(&h, ord, &h.caps, &c.target)?;
                let exact = r.coefficient == c.coeff;
                let mut note = format!("got {} expected {}", r.coefficient, c.coeff);
                note.push_str(ordering_hint(&r.coefficient, &c.coeff));
                if !r.passed() {
                    let _ = write!(note, "; {}", r.summary());
                }
                for (x, stated, computed) in c.cap_mismatches() {
                    let _ = write!(note, "; cap {x} stated {stated} computed {computed}");
                }
                Ok((exact && r.passed(), note))
            })();
            match row {
                Ok((ok, note)) => (format!("{:<4} {:<10} {note}", if ok { "PASS" } else { "FAIL" }, c.id), ok),
                Err(e) => (format!("FAIL {:<10} {e}", c.id), false),
            }
        })
        .collect();
    let mut all = true;
    for (line, ok) in &rows {
        all &= ok;
        let _ = writeln!(out, "{line}");
    }
    let passed = rows.iter().filter(|r| r.1).count();
    let _ = writeln!(out, "{passed}/{} certificates verified", rows.len());
    Ok(verdict(all))
}

fn parse_f(g: &EmbeddedGraph, text: &str) -> Result<Vec<usize>> {
    let mut f = vec![None; g.n()];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let w: Vec<&str> = line.split_whitespace().collect();
        let ["f", v, k] = w[..] else {
            return Err(Error::Parse { line: i + 1, msg: "expected `f <vertex> <k>`".into() });
        };
        let k = k.parse().map_err(|_| Error::Parse { line: i + 1, msg: format!("bad size `{k}`") })?;
        f[g.vertex(v)?] = Some(k);
    }
    f.into_iter()
        .enumerate()
        .map(|(v, k)| k.ok_or_else(|| Error::Invalid(format!("no size for `{}`", g.label(v)))))
        .collect()
}

/// `clique <elements>` plus `list <element>: colors` for each clique element.
fn parse_clique(g: &EmbeddedGraph, t: &TotalGraph, text: &str) -> Result<(Vec<usize>, choose::Lists)> {
    let mut s = None;
    let mut list_text = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if let Some(rest) = line.strip_prefix("clique ") {
            let ids = rest.split_whitespace().map(|x| t.lookup(g, x)).collect::<Result<Vec<_>>>()?;
            if s.replace(ids).is_some() {
                return Err(Error::Parse { line: i + 1, msg: "second `clique` line".into() });
            }
        } else {
            list_text.push_str(line);
        }
        list_text.push('\n');
    }
    let s = s.ok_or_else(|| Error::Invalid("no `clique` line".into()))?;
    let mut lists = vec![Vec::new(); t.len()];
    for (i, raw) in list_text.lines().enumerate() {
        if raw.is_empty() {
            continue;
        }
        let rest = raw.strip_prefix("list ").ok_or_else(|| Error::Parse { line: i + 1, msg: "expected `list <element>: colors`".into() })?;
        let (name, cs) = rest.split_once(':').ok_or_else(|| Error::Parse { line: i + 1, msg: "missing `:`".into() })?;
        let x = t.lookup(g, name.trim())?;
        lists[x] = cs
            .split_whitespace()
            .map(|c| c.parse().map_err(|_| Error::Parse { line: i + 1, msg: format!("bad color `{c}`") }))
            .collect::<Result<_>>()?;
    }
    if let Some(&x) = s.iter().find(|&&x| lists[x].is_empty()) {
        return Err(Error::Invalid(format!("no list for `{}`", t.name(x))));
    }
    Ok((s, lists))
}
