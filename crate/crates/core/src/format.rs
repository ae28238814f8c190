//! Line-oriented text format for graphs and colored graphs.
//!
//! ```text
//! # comment
//! graph k2 undirected
//! vertices 2
//! e 0 1
//! end
//!
//! colored x over k2
//! vertices 1
//! c 0 0
//! c 0 1
//! end
//! ```
//!
//! Edges in undirected blocks are stored in both orientations. A colored
//! block inherits directedness from its template, which must be declared
//! earlier in the same file or supplied by the caller.

use thiserror::Error;

use crate::colored::ColoredGraph;
use crate::graph::{Digraph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    Graph(Digraph),
    Colored { template: String, graph: ColoredGraph },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphFile {
    pub blocks: Vec<Block>,
}

impl GraphFile {
    pub fn graphs(&self) -> impl Iterator<Item = &Digraph> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Graph(g) => Some(g),
            Block::Colored { .. } => None,
        })
    }

    pub fn colored(&self) -> impl Iterator<Item = (&str, &ColoredGraph)> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Colored { template, graph } => Some((template.as_str(), graph)),
            Block::Graph(_) => None,
        })
    }

    pub fn graph(&self, name: &str) -> Option<&Digraph> {
        self.graphs().find(|g| g.name() == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("unknown template `{0}`")]
    UnknownTemplate(String),
    #[error("block `{0}` is not closed with `end`")]
    Unterminated(String),
}

struct Open {
    name: String,
    start: usize,
    symmetric: bool,
    template: Option<(String, usize)>,
    vertices: Option<usize>,
    edges: Vec<(Vertex, Vertex)>,
    colors: Vec<(Vertex, Vertex)>,
}

pub fn parse(text: &str) -> Result<GraphFile, ParseError> {
    parse_with_templates(text, &[])
}

/// Parses `text`; colored blocks may reference graphs declared earlier in the
/// file or any graph in `templates`.
pub fn parse_with_templates(text: &str, templates: &[Digraph]) -> Result<GraphFile, ParseError> {
    let mut file = GraphFile::default();
    let mut open: Option<Open> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |kind| ParseError { line, kind };
        let syntax = |msg: &str| ParseError { line, kind: ParseErrorKind::Syntax(msg.to_string()) };
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        let number = |w: &str| w.parse::<usize>().map_err(|_| syntax(&format!("expected a number, found `{w}`")));

        match (open.as_mut(), words.as_slice()) {
            (None, ["graph", name, kind]) => {
                let symmetric = match *kind {
                    "directed" => false,
                    "undirected" => true,
                    other => return Err(syntax(&format!("expected `directed` or `undirected`, found `{other}`"))),
                };
                open = Some(Open::new(name, line, symmetric, None));
            }
            (None, ["colored", name, "over", template]) => {
                let found = file.graph(template).or_else(|| templates.iter().find(|g| g.name() == *template));
                let Some(t) = found else {
                    return Err(err(ParseErrorKind::UnknownTemplate(template.to_string())));
                };
                open = Some(Open::new(name, line, t.is_symmetric(), Some((template.to_string(), t.n()))));
            }
            (None, _) => return Err(syntax("expected `graph <name> directed|undirected` or `colored <name> over <graph>`")),
            (Some(block), ["vertices", n]) => {
                if block.vertices.is_some() {
                    return Err(syntax("duplicate `vertices` line"));
                }
                block.vertices = Some(number(n)?);
            }
            (Some(block), ["e", u, v]) => {
                let limit = block.vertices.ok_or_else(|| syntax("`e` before `vertices`"))?;
                let (u, v) = (number(u)?, number(v)?);
                for index in [u, v] {
                    if index >= limit {
                        return Err(err(ParseErrorKind::IndexOutOfRange { index, limit }));
                    }
                }
                block.edges.push((u, v));
            }
            (Some(block), ["c", v, h]) => {
                let Some((_, template_n)) = block.template else {
                    return Err(syntax("color lines are only allowed in colored blocks"));
                };
                let limit = block.vertices.ok_or_else(|| syntax("`c` before `vertices`"))?;
                let (v, h) = (number(v)?, number(h)?);
                if v >= limit {
                    return Err(err(ParseErrorKind::IndexOutOfRange { index: v, limit }));
                }
                if h >= template_n {
                    return Err(err(ParseErrorKind::IndexOutOfRange { index: h, limit: template_n }));
                }
                block.colors.push((v, h));
            }
            (Some(_), ["end"]) => {
                let block = open.take().unwrap();
                file.blocks.push(block.finish().map_err(|msg| syntax(&msg))?);
            }
            (Some(_), _) => return Err(syntax(&format!("unexpected `{content}`"))),
        }
    }
    if let Some(block) = open {
        return Err(ParseError { line: block.start, kind: ParseErrorKind::Unterminated(block.name) });
    }
    Ok(file)
}

impl Open {
    fn new(name: &str, start: usize, symmetric: bool, template: Option<(String, usize)>) -> Self {
        Open { name: name.to_string(), start, symmetric, template, vertices: None, edges: Vec::new(), colors: Vec::new() }
    }

    fn finish(self) -> Result<Block, String> {
        let n = self.vertices.ok_or_else(|| format!("block `{}` has no `vertices` line", self.name))?;
        let carrier =
            if self.symmetric { Digraph::undirected(self.name, n, self.edges) } else { Digraph::directed(self.name, n, self.edges) }
                .map_err(|e| e.to_string())?;
        Ok(match self.template {
            None => Block::Graph(carrier),
            Some((template, template_n)) => {
                let graph = ColoredGraph::new(carrier, template_n, self.colors).map_err(|e| e.to_string())?;
                Block::Colored { template, graph }
            }
        })
    }
}

fn write_edges(out: &mut String, g: &Digraph) {
    let edges = if g.is_symmetric() { g.undirected_edges() } else { g.arcs().collect() };
    for (u, v) in edges {
        out.push_str(&format!("e {u} {v}\n"));
    }
}

pub fn serialize_graph(g: &Digraph) -> String {
    let kind = if g.is_symmetric() { "undirected" } else { "directed" };
    let mut out = format!("graph {} {kind}\nvertices {}\n", g.name(), g.n());
    write_edges(&mut out, g);
    out.push_str("end\n");
    out
}

pub fn serialize_colored(template: &str, x: &ColoredGraph) -> String {
    let mut out = format!("colored {} over {template}\nvertices {}\n", x.name(), x.n());
    write_edges(&mut out, x.carrier());
    for (v, h) in x.color_pairs() {
        out.push_str(&format!("c {v} {h}\n"));
    }
    out.push_str("end\n");
    out
}

pub fn serialize(file: &GraphFile) -> String {
    let parts: Vec<String> = file
        .blocks
        .iter()
        .map(|b| match b {
            Block::Graph(g) => serialize_graph(g),
            Block::Colored { template, graph } => serialize_colored(template, graph),
        })
        .collect();
    parts.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    #[test]
    fn parses_k2() {
        let f = parse("graph k2 undirected\nvertices 2\ne 0 1\nend\n").unwrap();
        let g = f.graph("k2").unwrap();
        assert!(g.is_symmetric());
        assert_eq!(g.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn multi_colored_vertex() {
        let text = "graph k2 undirected\nvertices 2\ne 0 1\nend\n\ncolored x over k2 # two colors\nvertices 1\nc 0 0\nc 0 1\nend\n";
        let f = parse(text).unwrap();
        let (template, x) = f.colored().next().unwrap();
        assert_eq!(template, "k2");
        assert_eq!(x.colors(0).collect::<Vec<_>>(), vec![0, 1]);
        assert!(x.carrier().is_symmetric());
    }

    #[test]
    fn index_errors_carry_line() {
        let e = parse("graph k2 undirected\nvertices 2\ne 0 5\nend\n").unwrap_err();
        assert_eq!(e, ParseError { line: 3, kind: ParseErrorKind::IndexOutOfRange { index: 5, limit: 2 } });
        let e = parse("colored x over nothing\nvertices 1\nend\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownTemplate("nothing".into()));
        let e = parse("graph k2 undirected\nvertices 2\nc 0 0\nend\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        let e = parse("graph k2 sideways\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse("\ngraph k2 undirected\nvertices 2\n").unwrap_err();
        assert_eq!(e, ParseError { line: 2, kind: ParseErrorKind::Unterminated("k2".into()) });
        let e = parse("graph k2 undirected\ne 0 1\nend\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn external_templates() {
        let x = parse_with_templates("colored x over arc\nvertices 2\ne 0 1\nc 1 0\nend\n", &[arc()]).unwrap();
        let (_, g) = x.colored().next().unwrap();
        assert!(!g.carrier().is_symmetric());
        assert!(g.has_color(1, 0));
        let e = parse_with_templates("colored x over arc\nvertices 1\nc 0 2\nend\n", &[arc()]).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::IndexOutOfRange { index: 2, limit: 2 });
    }

    #[test]
    fn canonical_text_round_trips() {
        let c6 = cycle(6);
        let x = ColoredGraph::new(path(3).renamed("x"), 6, [(0, 0), (2, 2), (2, 3)]).unwrap();
        let file = GraphFile { blocks: vec![Block::Graph(c6), Block::Graph(arc()), Block::Colored { template: "C6".into(), graph: x }] };
        let text = serialize(&file);
        assert_eq!(parse(&text).unwrap(), file);
        assert_eq!(serialize(&parse(&text).unwrap()), text);
    }
}
