//! Internal-diagram export in Graphviz DOT form, plus a small reader for
//! the emitted subset.
//!
//! A diagram draws each state as a node with a solid edge to its one-step
//! image. A paired diagram puts two systems in separate clusters and adds a
//! dashed edge from each source state to its image under the map. Output is
//! deterministic: UTF-8, LF line endings, nodes in canonical state order.
//!
//! The reader understands exactly the statements the emitter produces
//! (graph attributes, node defaults, clusters, node and edge statements
//! with attribute lists) so emitted diagrams can be structurally checked
//! without Graphviz.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::dynamics::{DynSystem, DynamicsError, State, SystemMap};

/// Options for diagram export.
#[derive(Debug, Clone)]
pub struct DiagramOptions {
    /// Maximum number of states across all drawn systems.
    pub cap: usize,
}

impl Default for DiagramOptions {
    fn default() -> Self {
        DiagramOptions { cap: 200 }
    }
}

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

fn check_cap(states: usize, opts: &DiagramOptions) -> Result<(), DynamicsError> {
    if states > opts.cap {
        Err(DynamicsError::DiagramCapExceeded { states, cap: opts.cap })
    } else {
        Ok(())
    }
}

fn write_nodes<S: State>(out: &mut String, system: &DynSystem<S>, prefix: &str, indent: &str) {
    for i in 0..system.len() {
        out.push_str(&format!(
            "{indent}{prefix}{i} [label=\"{}\"];\n",
            escape(system.canon(i))
        ));
    }
}

fn write_step_edges<S: State>(out: &mut String, system: &DynSystem<S>, prefix: &str) {
    for i in 0..system.len() {
        out.push_str(&format!("  {prefix}{i} -> {prefix}{};\n", system.step_index(i)));
    }
}

/// One system: a node per state, a solid edge from each state to its image.
pub fn single_diagram<S: State>(
    system: &DynSystem<S>,
    name: &str,
    opts: &DiagramOptions,
) -> Result<String, DynamicsError> {
    check_cap(system.len(), opts)?;
    let mut out = String::from("digraph dynamics {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=box];\n");
    out.push_str(&format!("  label=\"{}\";\n", escape(name)));
    write_nodes(&mut out, system, "s", "  ");
    write_step_edges(&mut out, system, "s");
    out.push_str("}\n");
    Ok(out)
}

/// Two systems in clusters, solid step edges inside each, dashed edges from
/// every source state to its image under the map.
pub fn paired_diagram<S: State, T: State>(
    map: &SystemMap<S, T>,
    source_name: &str,
    target_name: &str,
    opts: &DiagramOptions,
) -> Result<String, DynamicsError> {
    let source = map.source();
    let target = map.target();
    check_cap(source.len() + target.len(), opts)?;
    let mut out = String::from("digraph dynamics {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=box];\n");
    out.push_str("  subgraph cluster_source {\n");
    out.push_str(&format!("    label=\"{}\";\n", escape(source_name)));
    write_nodes(&mut out, source, "a", "    ");
    out.push_str("  }\n");
    out.push_str("  subgraph cluster_target {\n");
    out.push_str(&format!("    label=\"{}\";\n", escape(target_name)));
    write_nodes(&mut out, target, "b", "    ");
    out.push_str("  }\n");
    write_step_edges(&mut out, source, "a");
    write_step_edges(&mut out, target, "b");
    for i in 0..source.len() {
        out.push_str(&format!("  a{i} -> b{} [style=dashed];\n", map.forward_index(i)));
    }
    out.push_str("}\n");
    Ok(out)
}

/// Error from [`parse_dot`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DotError {
    #[error("unterminated string literal at line {0}")]
    UnterminatedString(usize),
    #[error("unexpected character {0:?} at line {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected token {0:?} at line {1}")]
    UnexpectedToken(String, usize),
    #[error("unexpected end of input")]
    UnexpectedEnd,
}

/// A declared node with its attributes and enclosing cluster, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DotNode {
    pub id: String,
    pub attrs: BTreeMap<String, String>,
    pub cluster: Option<String>,
}

/// A directed edge with its attributes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DotEdge {
    pub from: String,
    pub to: String,
    pub attrs: BTreeMap<String, String>,
}

impl DotEdge {
    pub fn is_dashed(&self) -> bool {
        self.attrs.get("style").map(String::as_str) == Some("dashed")
    }
}

/// A parsed digraph: declared nodes, edges, and graph-level attributes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DotGraph {
    pub name: Option<String>,
    pub nodes: Vec<DotNode>,
    pub edges: Vec<DotEdge>,
    pub graph_attrs: BTreeMap<String, String>,
}

impl DotGraph {
    pub fn node(&self, id: &str) -> Option<&DotNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn solid_edges(&self) -> impl Iterator<Item = &DotEdge> {
        self.edges.iter().filter(|e| !e.is_dashed())
    }

    pub fn dashed_edges(&self) -> impl Iterator<Item = &DotEdge> {
        self.edges.iter().filter(|e| e.is_dashed())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Id(String),
    Str(String),
    LBrace,
    RBrace,
    LBrack,
    RBrack,
    Semi,
    Comma,
    Eq,
    Arrow,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, DotError> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '{' => {
                toks.push((Tok::LBrace, line));
                chars.next();
            }
            '}' => {
                toks.push((Tok::RBrace, line));
                chars.next();
            }
            '[' => {
                toks.push((Tok::LBrack, line));
                chars.next();
            }
            ']' => {
                toks.push((Tok::RBrack, line));
                chars.next();
            }
            ';' => {
                toks.push((Tok::Semi, line));
                chars.next();
            }
            ',' => {
                toks.push((Tok::Comma, line));
                chars.next();
            }
            '=' => {
                toks.push((Tok::Eq, line));
                chars.next();
            }
            '-' => {
                chars.next();
                match chars.next() {
                    Some('>') => toks.push((Tok::Arrow, line)),
                    _ => return Err(DotError::UnexpectedChar('-', line)),
                }
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some('\\') => match chars.next() {
                            Some(esc) => s.push(esc),
                            None => return Err(DotError::UnterminatedString(line)),
                        },
                        Some('\n') => return Err(DotError::UnterminatedString(line)),
                        Some(other) => s.push(other),
                        None => return Err(DotError::UnterminatedString(line)),
                    }
                }
                toks.push((Tok::Str(s), line));
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Id(s), line));
            }
            other => return Err(DotError::UnexpectedChar(other, line)),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn next(&mut self) -> Result<(Tok, usize), DotError> {
        let item = self.toks.get(self.pos).cloned().ok_or(DotError::UnexpectedEnd)?;
        self.pos += 1;
        Ok(item)
    }

    fn expect(&mut self, want: &Tok) -> Result<(), DotError> {
        let (tok, line) = self.next()?;
        if &tok == want {
            Ok(())
        } else {
            Err(DotError::UnexpectedToken(format!("{tok:?}"), line))
        }
    }

    fn name_or_string(&mut self) -> Result<(String, usize), DotError> {
        match self.next()? {
            (Tok::Id(s), line) | (Tok::Str(s), line) => Ok((s, line)),
            (tok, line) => Err(DotError::UnexpectedToken(format!("{tok:?}"), line)),
        }
    }

    fn attr_list(&mut self) -> Result<BTreeMap<String, String>, DotError> {
        let mut attrs = BTreeMap::new();
        self.expect(&Tok::LBrack)?;
        loop {
            match self.peek() {
                Some(Tok::RBrack) => {
                    self.next()?;
                    break;
                }
                Some(Tok::Comma) | Some(Tok::Semi) => {
                    self.next()?;
                }
                _ => {
                    let (key, _) = self.name_or_string()?;
                    self.expect(&Tok::Eq)?;
                    let (value, _) = self.name_or_string()?;
                    attrs.insert(key, value);
                }
            }
        }
        Ok(attrs)
    }

    fn body(&mut self, graph: &mut DotGraph, cluster: Option<&str>) -> Result<(), DotError> {
        loop {
            match self.next()? {
                (Tok::RBrace, _) => return Ok(()),
                (Tok::Semi, _) => {}
                (Tok::Id(word), line) if word == "subgraph" => {
                    let (sub_name, _) = self.name_or_string()?;
                    self.expect(&Tok::LBrace)
                        .map_err(|_| DotError::UnexpectedToken(sub_name.clone(), line))?;
                    self.body(graph, Some(&sub_name))?;
                }
                (Tok::Id(word), _) if word == "node" || word == "edge" => {
                    // Default attribute statements; recorded nowhere.
                    self.attr_list()?;
                }
                (Tok::Id(id), line) | (Tok::Str(id), line) => match self.peek() {
                    Some(Tok::Eq) => {
                        self.next()?;
                        let (value, _) = self.name_or_string()?;
                        graph.graph_attrs.insert(id, value);
                    }
                    Some(Tok::Arrow) => {
                        self.next()?;
                        let (to, _) = self.name_or_string()?;
                        let attrs = if self.peek() == Some(&Tok::LBrack) {
                            self.attr_list()?
                        } else {
                            BTreeMap::new()
                        };
                        graph.edges.push(DotEdge { from: id, to, attrs });
                    }
                    Some(Tok::LBrack) => {
                        let attrs = self.attr_list()?;
                        graph.nodes.push(DotNode {
                            id,
                            attrs,
                            cluster: cluster.map(str::to_string),
                        });
                    }
                    Some(Tok::Semi) => {
                        graph.nodes.push(DotNode {
                            id,
                            attrs: BTreeMap::new(),
                            cluster: cluster.map(str::to_string),
                        });
                    }
                    _ => {
                        return Err(DotError::UnexpectedToken(id, line));
                    }
                },
                (tok, line) => return Err(DotError::UnexpectedToken(format!("{tok:?}"), line)),
            }
        }
    }
}

/// Parses the DOT subset this crate emits.
pub fn parse_dot(text: &str) -> Result<DotGraph, DotError> {
    let mut parser = Parser { toks: tokenize(text)?, pos: 0 };
    let (kw, line) = parser.next()?;
    if kw != Tok::Id("digraph".into()) {
        return Err(DotError::UnexpectedToken(format!("{kw:?}"), line));
    }
    let mut graph = DotGraph::default();
    match parser.next()? {
        (Tok::LBrace, _) => {}
        (Tok::Id(name), _) | (Tok::Str(name), _) => {
            graph.name = Some(name);
            parser.expect(&Tok::LBrace)?;
        }
        (tok, line) => return Err(DotError::UnexpectedToken(format!("{tok:?}"), line)),
    }
    parser.body(&mut graph, None)?;
    Ok(graph)
}
