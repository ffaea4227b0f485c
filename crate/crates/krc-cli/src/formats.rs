//! The three text formats (`.grw` graphs, `.td` decompositions, `.cwe`
//! expressions) plus DIMACS CNF. Vertex, bag and node ids are 1-indexed on
//! the wire and 0-indexed in memory. Lines starting with `c` are comments.

use std::fmt::Write as _;

use krc_core::generators::Cnf;
use krc_core::witness::cw::{CwExpression, CwNode};
use krc_core::witness::td::{require_valid, TreeDecomposition};
use krc_core::{CenterSet, Graph};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{CliError, CliResult};

/// Content lines with their 1-based line numbers, comments and blanks removed.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.first() {
            None => None,
            Some(&"c") => None,
            Some(_) => Some((i + 1, toks)),
        }
    })
}

fn syntax(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Syntax { line, msg: msg.into() }
}

fn num<T: std::str::FromStr>(line: usize, tok: Option<&&str>, what: &str) -> CliResult<T> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| syntax(line, format!("{what} {tok:?} is not a valid number")))
}

/// A 1-indexed id in `1..=bound`, returned 0-indexed.
fn id(line: usize, tok: Option<&&str>, what: &str, bound: usize) -> CliResult<usize> {
    let v: usize = num(line, tok, what)?;
    if v == 0 || v > bound {
        return Err(syntax(line, format!("{what} {v} out of range 1..={bound}")));
    }
    Ok(v - 1)
}

fn arity(line: usize, toks: &[&str], want: usize) -> CliResult<()> {
    if toks.len() != want {
        return Err(syntax(line, format!("expected {want} fields, found {}", toks.len())));
    }
    Ok(())
}

/// Parses a `.grw` graph.
///
/// ```text
/// p krc <n> <m> undirected|directed [allow-zero]
/// a <u> <v> <w>      (m lines; an edge or an arc u -> v)
/// i <v>              (vertex v is irrelevant)
/// ```
pub fn parse_graph(text: &str) -> CliResult<Graph> {
    let mut g: Option<(Graph, usize)> = None;
    let mut seen_arcs = 0usize;
    let mut last_line = 0;
    for (ln, toks) in content_lines(text) {
        last_line = ln;
        match toks[0] {
            "p" => {
                if g.is_some() {
                    return Err(syntax(ln, "second header line"));
                }
                if toks.len() < 5 || toks.len() > 6 || toks[1] != "krc" {
                    return Err(syntax(ln, "header must be `p krc <n> <m> undirected|directed [allow-zero]`"));
                }
                let n: usize = num(ln, toks.get(2), "vertex count")?;
                let m: usize = num(ln, toks.get(3), "arc count")?;
                let mut graph = match toks[4] {
                    "undirected" => Graph::new_undirected(n),
                    "directed" => Graph::new(n),
                    other => return Err(syntax(ln, format!("unknown orientation {other:?}"))),
                };
                match toks.get(5) {
                    None => {}
                    Some(&"allow-zero") => graph.allow_zero_weights(),
                    Some(other) => return Err(syntax(ln, format!("unknown header flag {other:?}"))),
                }
                g = Some((graph, m));
            }
            "a" => {
                let (graph, _) = g.as_mut().ok_or_else(|| syntax(ln, "arc before header"))?;
                arity(ln, &toks, 4)?;
                let n = graph.n();
                let u = id(ln, toks.get(1), "vertex", n)?;
                let v = id(ln, toks.get(2), "vertex", n)?;
                let w: u64 = num(ln, toks.get(3), "weight")?;
                let res = if graph.is_undirected() { graph.add_edge(u, v, w) } else { graph.add_arc(u, v, w) };
                res.map_err(|e| syntax(ln, e.to_string()))?;
                seen_arcs += 1;
            }
            "i" => {
                let (graph, _) = g.as_mut().ok_or_else(|| syntax(ln, "vertex line before header"))?;
                arity(ln, &toks, 2)?;
                let v = id(ln, toks.get(1), "vertex", graph.n())?;
                graph.set_irrelevant(v)?;
            }
            other => return Err(syntax(ln, format!("unknown line type {other:?}"))),
        }
    }
    let (graph, m) = g.ok_or_else(|| syntax(last_line.max(1), "missing header"))?;
    if m != seen_arcs {
        return Err(syntax(last_line.max(1), format!("header announces {m} arcs, found {seen_arcs}")));
    }
    Ok(graph)
}

/// Writes a graph in the `.grw` format; `parse_graph` inverts it exactly.
pub fn write_graph(g: &Graph) -> String {
    let step = if g.is_undirected() { 2 } else { 1 };
    let arcs: Vec<_> = g.arcs().iter().step_by(step).collect();
    let mut out = String::new();
    let orient = if g.is_undirected() { "undirected" } else { "directed" };
    let flag = if g.zero_weights_allowed() { " allow-zero" } else { "" };
    let _ = writeln!(out, "p krc {} {} {orient}{flag}", g.n(), arcs.len());
    for a in arcs {
        let _ = writeln!(out, "a {} {} {}", a.tail + 1, a.head + 1, a.weight);
    }
    for v in g.irrelevant_vertices() {
        let _ = writeln!(out, "i {}", v + 1);
    }
    out
}

/// Parses a PACE-style `.td` file, optionally checking it against `g`.
///
/// ```text
/// s td <#bags> <max bag size> <n>
/// b <bag> <v>...
/// <bag> <bag>        (tree edges)
/// r <bag>            (optional root, default 1)
/// ```
pub fn parse_td(text: &str, g: Option<&Graph>) -> CliResult<TreeDecomposition> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges = Vec::new();
    let mut root = None;
    let mut last_line = 0;
    for (ln, toks) in content_lines(text) {
        last_line = ln;
        if toks[0] == "s" {
            if header.is_some() {
                return Err(syntax(ln, "second header line"));
            }
            arity(ln, &toks, 5)?;
            if toks[1] != "td" {
                return Err(syntax(ln, "header must be `s td <#bags> <max bag size> <n>`"));
            }
            let nb: usize = num(ln, toks.get(2), "bag count")?;
            header = Some((nb, num(ln, toks.get(3), "bag size")?, num(ln, toks.get(4), "vertex count")?));
            bags = vec![None; nb];
            continue;
        }
        let (nb, max_bag, n) = header.ok_or_else(|| syntax(ln, "line before header"))?;
        match toks[0] {
            "b" => {
                let b = id(ln, toks.get(1), "bag", nb)?;
                let mut vs = Vec::with_capacity(toks.len() - 2);
                for t in &toks[2..] {
                    vs.push(id(ln, Some(t), "vertex", n)?);
                }
                if vs.len() > max_bag {
                    return Err(syntax(ln, format!("bag has {} vertices, header allows {max_bag}", vs.len())));
                }
                if bags[b].replace(vs).is_some() {
                    return Err(syntax(ln, format!("bag {} defined twice", b + 1)));
                }
            }
            "r" => {
                arity(ln, &toks, 2)?;
                root = Some(id(ln, toks.get(1), "bag", nb)?);
            }
            _ => {
                arity(ln, &toks, 2)?;
                edges.push((id(ln, toks.first(), "bag", nb)?, id(ln, toks.get(1), "bag", nb)?));
            }
        }
    }
    let (nb, _, n) = header.ok_or_else(|| syntax(last_line.max(1), "missing header"))?;
    if let Some(g) = g {
        if g.n() != n {
            return Err(CliError::Usage(format!("decomposition is for {n} vertices, graph has {}", g.n())));
        }
    }
    let bags: Vec<Vec<usize>> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| syntax(last_line, format!("bag {} never defined", i + 1))))
        .collect::<CliResult<_>>()?;
    let td = if nb == 0 {
        TreeDecomposition { bags: Vec::new(), parent: Vec::new(), root: 0 }
    } else {
        TreeDecomposition::from_edges(bags, &edges, root.unwrap_or(0))?
    };
    if let Some(g) = g {
        require_valid(g, &td)?;
    }
    Ok(td)
}

/// Writes a decomposition of a graph on `n` vertices in the `.td` format.
pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let mut out = String::new();
    let max_bag = td.bags.iter().map(Vec::len).max().unwrap_or(0);
    let _ = writeln!(out, "s td {} {max_bag} {n}", td.bags.len());
    for (i, bag) in td.bags.iter().enumerate() {
        let _ = write!(out, "b {}", i + 1);
        for v in bag {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    for (child, parent) in td.parent.iter().enumerate() {
        if let Some(p) = parent {
            let _ = writeln!(out, "{} {}", p + 1, child + 1);
        }
    }
    if !td.bags.is_empty() {
        let _ = writeln!(out, "r {}", td.root + 1);
    }
    out
}

/// Parses a `.cwe` expression.
///
/// ```text
/// p cwe <#nodes> <cw> <n>
/// n <id> intro <label> <vertex>
/// n <id> join <a> <b> <w> <child>
/// n <id> ren <a> <b> <child>
/// n <id> union <left> <right>
/// r <root>
/// ```
pub fn parse_cwe(text: &str) -> CliResult<CwExpression> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut nodes: Vec<Option<CwNode>> = Vec::new();
    let mut root = None;
    let mut last_line = 0;
    for (ln, toks) in content_lines(text) {
        last_line = ln;
        match toks[0] {
            "p" => {
                if header.is_some() {
                    return Err(syntax(ln, "second header line"));
                }
                arity(ln, &toks, 5)?;
                if toks[1] != "cwe" {
                    return Err(syntax(ln, "header must be `p cwe <#nodes> <cw> <n>`"));
                }
                let count: usize = num(ln, toks.get(2), "node count")?;
                header = Some((count, num(ln, toks.get(3), "label count")?, num(ln, toks.get(4), "vertex count")?));
                nodes = vec![None; count];
            }
            "n" => {
                let (count, _, n) = header.ok_or_else(|| syntax(ln, "node before header"))?;
                let i = id(ln, toks.get(1), "node", count)?;
                let node = match toks.get(2).copied() {
                    Some("intro") => {
                        arity(ln, &toks, 5)?;
                        CwNode::Intro {
                            label: num(ln, toks.get(3), "label")?,
                            vertex: id(ln, toks.get(4), "vertex", n)?,
                        }
                    }
                    Some("join") => {
                        arity(ln, &toks, 7)?;
                        CwNode::Join {
                            a: num(ln, toks.get(3), "label")?,
                            b: num(ln, toks.get(4), "label")?,
                            w: num(ln, toks.get(5), "weight")?,
                            child: id(ln, toks.get(6), "node", count)?,
                        }
                    }
                    Some("ren") => {
                        arity(ln, &toks, 6)?;
                        CwNode::Rename {
                            a: num(ln, toks.get(3), "label")?,
                            b: num(ln, toks.get(4), "label")?,
                            child: id(ln, toks.get(5), "node", count)?,
                        }
                    }
                    Some("union") => {
                        arity(ln, &toks, 5)?;
                        CwNode::Union {
                            left: id(ln, toks.get(3), "node", count)?,
                            right: id(ln, toks.get(4), "node", count)?,
                        }
                    }
                    other => return Err(syntax(ln, format!("unknown operation {other:?}"))),
                };
                if nodes[i].replace(node).is_some() {
                    return Err(syntax(ln, format!("node {} defined twice", i + 1)));
                }
            }
            "r" => {
                let (count, _, _) = header.ok_or_else(|| syntax(ln, "root before header"))?;
                arity(ln, &toks, 2)?;
                if root.replace(id(ln, toks.get(1), "node", count)?).is_some() {
                    return Err(syntax(ln, "second root line"));
                }
            }
            other => return Err(syntax(ln, format!("unknown line type {other:?}"))),
        }
    }
    let (_, cw, n) = header.ok_or_else(|| syntax(last_line.max(1), "missing header"))?;
    let nodes = nodes
        .into_iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| syntax(last_line, format!("node {} never defined", i + 1))))
        .collect::<CliResult<Vec<_>>>()?;
    let root = root.ok_or_else(|| syntax(last_line.max(1), "missing root line"))?;
    let e = CwExpression { nodes, root, cw, n };
    e.validate()?;
    Ok(e)
}

/// Writes an expression in the `.cwe` format.
pub fn write_cwe(e: &CwExpression) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p cwe {} {} {}", e.nodes.len(), e.cw, e.n);
    for (i, node) in e.nodes.iter().enumerate() {
        let id = i + 1;
        let _ = match *node {
            CwNode::Intro { label, vertex } => writeln!(out, "n {id} intro {label} {}", vertex + 1),
            CwNode::Join { a, b, w, child } => writeln!(out, "n {id} join {a} {b} {w} {}", child + 1),
            CwNode::Rename { a, b, child } => writeln!(out, "n {id} ren {a} {b} {}", child + 1),
            CwNode::Union { left, right } => writeln!(out, "n {id} union {} {}", left + 1, right + 1),
        };
    }
    let _ = writeln!(out, "r {}", e.root + 1);
    out
}

/// Parses a DIMACS CNF formula (`p cnf <vars> <clauses>`, clauses ended by 0).
pub fn parse_cnf(text: &str) -> CliResult<Cnf> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    let mut last_line = 0;
    for (ln, toks) in content_lines(text) {
        last_line = ln;
        if toks[0] == "p" {
            arity(ln, &toks, 4)?;
            if toks[1] != "cnf" || header.is_some() {
                return Err(syntax(ln, "header must appear once as `p cnf <vars> <clauses>`"));
            }
            header = Some((num(ln, toks.get(2), "variable count")?, num(ln, toks.get(3), "clause count")?));
            continue;
        }
        let (nv, _) = header.ok_or_else(|| syntax(ln, "clause before header"))?;
        for t in &toks {
            let lit: i64 = num(ln, Some(t), "literal")?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > nv {
                return Err(syntax(ln, format!("literal {lit} out of range")));
            } else {
                current.push(lit);
            }
        }
    }
    let (nv, nc) = header.ok_or_else(|| syntax(last_line.max(1), "missing header"))?;
    if !current.is_empty() {
        return Err(syntax(last_line, "last clause is not terminated by 0"));
    }
    if clauses.len() != nc {
        return Err(syntax(last_line.max(1), format!("header announces {nc} clauses, found {}", clauses.len())));
    }
    Ok(Cnf::new(nv, clauses))
}

/// Writes a formula in DIMACS CNF.
pub fn write_cnf(f: &Cnf) -> String {
    let mut out = format!("p cnf {} {}\n", f.num_vars, f.clauses.len());
    for c in &f.clauses {
        for l in c {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    out
}

/// Parses an exact positive rational written `p/q` or `p`.
pub fn parse_rational(s: &str) -> CliResult<BigRational> {
    let bad = || CliError::Usage(format!("{s:?} is not an exact rational p/q"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    let x = BigRational::new(p, q);
    if x <= BigRational::zero() {
        return Err(CliError::Usage(format!("epsilon must be positive, got {s}")));
    }
    if x > BigRational::one() {
        return Err(CliError::Usage(format!("epsilon must be at most 1, got {s}")));
    }
    Ok(x)
}

/// Parses a comma-separated list of 1-indexed vertices.
pub fn parse_vertex_list(s: &str, n: usize) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let v: usize = t.parse().map_err(|_| CliError::Usage(format!("vertex {t:?} is not a number")))?;
            if v == 0 || v > n {
                return Err(CliError::Usage(format!("vertex {v} out of range 1..={n}")));
            }
            Ok(v - 1)
        })
        .collect()
}

/// Parses a partition written `1,2;3,4` (parts separated by `;`).
pub fn parse_parts(s: &str, n: usize) -> CliResult<Vec<Vec<usize>>> {
    s.split(';').map(|p| parse_vertex_list(p, n)).collect()
}

/// A center set as 1-indexed ids.
pub fn one_indexed(c: &CenterSet) -> Vec<usize> {
    c.vertices.iter().map(|v| v + 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use krc_core::witness::cw::eval_cw_expression;

    #[test]
    fn p3_graph() {
        let g = parse_graph("p krc 3 2 undirected\na 1 2 1\na 2 3 1\n").unwrap();
        assert_eq!((g.n(), g.arc_count()), (3, 4));
        assert_eq!(write_graph(&g), "p krc 3 2 undirected\na 1 2 1\na 2 3 1\n");
        let h = parse_graph("c comment\np krc 3 0 directed\ni 2\n").unwrap();
        assert_eq!(h.irrelevant_vertices(), vec![1]);
    }

    #[test]
    fn zero_weight_needs_flag() {
        let err = parse_graph("p krc 2 1 undirected\na 1 2 0\n").unwrap_err();
        assert!(matches!(err, CliError::Syntax { line: 2, .. }), "{err}");
        assert!(parse_graph("p krc 2 1 undirected allow-zero\na 1 2 0\n").is_ok());
        assert!(matches!(parse_graph("p krc 2 1 undirected\na 1 3 1\n"), Err(CliError::Syntax { line: 2, .. })));
        assert!(parse_graph("p krc 2 2 undirected\na 1 2 1\n").is_err());
    }

    #[test]
    fn p3_decomposition() {
        let g = parse_graph("p krc 3 2 undirected\na 1 2 1\na 2 3 1\n").unwrap();
        let td = parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n", Some(&g)).unwrap();
        assert_eq!(td.bags, vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(parse_td(&write_td(&td, 3), Some(&g)).unwrap(), td);
        assert!(parse_td("s td 2 2 3\nb 1 1 2\nb 2 3\n1 2\n", Some(&g)).is_err());
        assert!(parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 3\n", None).is_err());
    }

    #[test]
    fn single_edge_expression() {
        let text =
            "p cwe 5 2 2\nn 1 intro 1 1\nn 2 intro 2 2\nn 3 union 1 2\nn 4 join 1 2 1 3\nn 5 join 2 1 1 4\nr 5\n";
        let e = parse_cwe(text).unwrap();
        let g = eval_cw_expression(&e).unwrap();
        assert_eq!((g.n(), g.arc_count()), (2, 2));
        assert_eq!(write_cwe(&e), text);
    }

    #[test]
    fn cyclic_expression_rejected() {
        let text = "p cwe 3 2 1\nn 1 intro 1 1\nn 2 join 1 2 1 3\nn 3 ren 1 2 2\nr 2\n";
        assert!(parse_cwe(text).is_err());
        assert!(parse_cwe("p cwe 1 1 1\nn 1 intro 1 1\n").is_err());
    }

    #[test]
    fn cnf_and_rationals() {
        let f = parse_cnf("p cnf 3 2\n1 -2 0\n3\n0\n").unwrap();
        assert_eq!(f.clauses, vec![vec![1, -2], vec![3]]);
        assert_eq!(parse_cnf(&write_cnf(&f)).unwrap(), f);
        assert_eq!(parse_rational("1/2").unwrap(), BigRational::new(1.into(), 2.into()));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("0/3").is_err());
        assert!(parse_rational("3/2").is_err());
        assert_eq!(parse_parts("1,2;3,4", 4).unwrap(), vec![vec![0, 1], vec![2, 3]]);
    }
}
