//! A minimal literate-programming pipeline: parse a document of interleaved
//! prose and named code chunks, tangle chunks into source text, weave the
//! document into cross-referenced markdown notes.
//!
//! # Syntax
//!
//! * A line `<<Name>>=` starting in column 0 opens a chunk definition; the
//!   body runs until a line consisting of `@`, the next definition, or end
//!   of input.
//! * Inside a body, a line containing only optional indentation and
//!   `<<Name>>` is a reference; the indentation is prepended to every line
//!   the reference expands to. Anything else is literal code.
//! * Defining the same name again appends to the chunk (continuation
//!   semantics); the chunk keeps the ordinal of its first definition,
//!   counted from 1.
//! * Everything outside chunk bodies is prose. Reference-shaped text in
//!   prose is ignored.
//! * Chunk names are trimmed of surrounding whitespace and matched
//!   case-sensitively.
//!
//! A column-0 line that opens a `<<` delimiter and never closes it is a
//! parse error; resolution of references is deferred to [`tangle`], so a
//! document mentioning undefined chunks still parses and weaves.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiterateError {
    #[error("unterminated chunk delimiter at line {line}")]
    UnterminatedDelimiter { line: usize },
    #[error("empty chunk name at line {line}")]
    EmptyChunkName { line: usize },
    #[error("chunk <<{name}>> is not defined (referenced from <<{from}>> at line {line})")]
    UndefinedReference { name: String, from: String, line: usize },
    #[error("root chunk <<{name}>> is not defined")]
    UndefinedRoot { name: String },
    #[error("chunk reference cycle: {}", path.join(" -> "))]
    ReferenceCycle { path: Vec<String> },
}

/// One line of a chunk body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChunkLine {
    Code { line: usize, text: String },
    Reference { line: usize, indent: String, name: String },
}

/// One `<<Name>>=` block; a chunk may own several.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub header_line: usize,
    pub lines: Vec<ChunkLine>,
}

/// A named chunk: its ordinal (first-definition order, from 1) and every
/// definition block contributing to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chunk {
    pub name: String,
    pub ordinal: usize,
    pub definitions: Vec<Definition>,
}

impl Chunk {
    /// Line numbers of every definition header, in document order.
    pub fn defined_at(&self) -> Vec<usize> {
        self.definitions.iter().map(|d| d.header_line).collect()
    }

    fn lines(&self) -> impl Iterator<Item = &ChunkLine> {
        self.definitions.iter().flat_map(|d| d.lines.iter())
    }
}

/// Document block in source order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    Prose { start_line: usize, lines: Vec<String> },
    /// Definition `def` of chunk `chunk`, both indices.
    ChunkDef { chunk: usize, def: usize },
}

/// A reference site: which chunk mentions the name, and where.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefSite {
    pub chunk: String,
    pub line: usize,
}

/// Row of [`list_chunks`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkSummary {
    pub ordinal: usize,
    pub name: String,
    pub defined_at: Vec<usize>,
    pub references: Vec<RefSite>,
}

/// A parsed literate document.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WebDocument {
    blocks: Vec<Block>,
    chunks: Vec<Chunk>,
    by_name: HashMap<String, usize>,
}

impl WebDocument {
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Chunks in ordinal order.
    pub fn chunks(&self) -> &[Chunk] {
        &self.chunks
    }

    pub fn chunk(&self, name: &str) -> Option<&Chunk> {
        self.by_name.get(name.trim()).map(|&i| &self.chunks[i])
    }

    /// Every referenced name with its sites, defined or not, in name order.
    pub fn reference_sites(&self) -> BTreeMap<String, Vec<RefSite>> {
        let mut sites: BTreeMap<String, Vec<RefSite>> = BTreeMap::new();
        for chunk in &self.chunks {
            for line in chunk.lines() {
                if let ChunkLine::Reference { line, name, .. } = line {
                    sites.entry(name.clone()).or_default().push(RefSite {
                        chunk: chunk.name.clone(),
                        line: *line,
                    });
                }
            }
        }
        sites
    }
}

/// Classification of one source line during parsing.
enum LineKind {
    Definition { name: String },
    Terminator,
    Other,
}

fn classify(line: &str, number: usize) -> Result<LineKind, LiterateError> {
    if line.trim() == "@" {
        return Ok(LineKind::Terminator);
    }
    if let Some(inner) = line.strip_prefix("<<") {
        if !inner.contains(">>") {
            return Err(LiterateError::UnterminatedDelimiter { line: number });
        }
        if let Some(name_part) = inner.split_once(">>=").map(|(name, rest)| (name, rest)) {
            let (name, rest) = name_part;
            if rest.trim().is_empty() && !name.contains(">>") {
                let name = name.trim();
                if name.is_empty() {
                    return Err(LiterateError::EmptyChunkName { line: number });
                }
                return Ok(LineKind::Definition { name: name.to_string() });
            }
        }
    }
    Ok(LineKind::Other)
}

/// A whole-line chunk reference: optional indentation, `<<Name>>`, optional
/// trailing whitespace.
fn as_reference(line: &str) -> Option<(String, String)> {
    let trimmed_start = line.trim_start();
    let indent = &line[..line.len() - trimmed_start.len()];
    let body = trimmed_start.trim_end();
    let inner = body.strip_prefix("<<")?.strip_suffix(">>")?;
    if inner.contains("<<") || inner.contains(">>") {
        return None;
    }
    let name = inner.trim();
    if name.is_empty() {
        return None;
    }
    Some((indent.to_string(), name.to_string()))
}

/// Parses UTF-8 literate source. Line numbers are 1-based.
pub fn parse(source: &str) -> Result<WebDocument, LiterateError> {
    let mut doc = WebDocument::default();
    let mut in_chunk: Option<usize> = None; // index into doc.chunks
    let mut prose: Option<(usize, Vec<String>)> = None;

    let flush_prose = |doc: &mut WebDocument, prose: &mut Option<(usize, Vec<String>)>| {
        if let Some((start_line, lines)) = prose.take() {
            doc.blocks.push(Block::Prose { start_line, lines });
        }
    };

    for (i, raw) in source.lines().enumerate() {
        let number = i + 1;
        match classify(raw, number)? {
            LineKind::Definition { name } => {
                flush_prose(&mut doc, &mut prose);
                let chunk_idx = match doc.by_name.get(&name) {
                    Some(&idx) => idx,
                    None => {
                        let idx = doc.chunks.len();
                        doc.chunks.push(Chunk {
                            name: name.clone(),
                            ordinal: idx + 1,
                            definitions: Vec::new(),
                        });
                        doc.by_name.insert(name, idx);
                        idx
                    }
                };
                doc.chunks[chunk_idx].definitions.push(Definition {
                    header_line: number,
                    lines: Vec::new(),
                });
                let def = doc.chunks[chunk_idx].definitions.len() - 1;
                doc.blocks.push(Block::ChunkDef { chunk: chunk_idx, def });
                in_chunk = Some(chunk_idx);
            }
            LineKind::Terminator if in_chunk.is_some() => {
                in_chunk = None;
            }
            _ => match in_chunk {
                Some(chunk_idx) => {
                    let chunk = &mut doc.chunks[chunk_idx];
                    let def = chunk.definitions.last_mut().expect("open chunk has a definition");
                    match as_reference(raw) {
                        Some((indent, name)) => def.lines.push(ChunkLine::Reference {
                            line: number,
                            indent,
                            name,
                        }),
                        None => def.lines.push(ChunkLine::Code {
                            line: number,
                            text: raw.to_string(),
                        }),
                    }
                }
                None => match &mut prose {
                    Some((_, lines)) => lines.push(raw.to_string()),
                    None => prose = Some((number, vec![raw.to_string()])),
                },
            },
        }
    }
    flush_prose(&mut doc, &mut prose);
    Ok(doc)
}

fn expand(
    doc: &WebDocument,
    chunk_idx: usize,
    prefix: &str,
    out: &mut Vec<String>,
    path: &mut Vec<usize>,
) -> Result<(), LiterateError> {
    if let Some(pos) = path.iter().position(|&i| i == chunk_idx) {
        let mut cycle: Vec<String> = path[pos..]
            .iter()
            .map(|&i| doc.chunks[i].name.clone())
            .collect();
        cycle.push(doc.chunks[chunk_idx].name.clone());
        return Err(LiterateError::ReferenceCycle { path: cycle });
    }
    path.push(chunk_idx);
    for line in doc.chunks[chunk_idx].lines() {
        match line {
            ChunkLine::Code { text, .. } => out.push(format!("{prefix}{text}")),
            ChunkLine::Reference { line, indent, name } => {
                let target = doc.by_name.get(name.as_str()).copied().ok_or_else(|| {
                    LiterateError::UndefinedReference {
                        name: name.clone(),
                        from: doc.chunks[chunk_idx].name.clone(),
                        line: *line,
                    }
                })?;
                let nested = format!("{prefix}{indent}");
                expand(doc, target, &nested, out, path)?;
            }
        }
    }
    path.pop();
    Ok(())
}

/// Splices the chunk graph rooted at `root` into plain source text. Every
/// spliced line receives the indentation of the reference site it entered
/// through; nonempty output ends with exactly one newline.
pub fn tangle(doc: &WebDocument, root: &str) -> Result<String, LiterateError> {
    let root_idx = doc
        .by_name
        .get(root.trim())
        .copied()
        .ok_or_else(|| LiterateError::UndefinedRoot { name: root.trim().to_string() })?;
    let mut lines = Vec::new();
    expand(doc, root_idx, "", &mut lines, &mut Vec::new())?;
    if lines.is_empty() {
        Ok(String::new())
    } else {
        Ok(lines.join("\n") + "\n")
    }
}

fn note_header(chunk: &Chunk, continued: bool) -> String {
    if continued {
        format!(
            "**Note {0} (continued).** ⟨{1} {0}⟩ +≡",
            chunk.ordinal, chunk.name
        )
    } else {
        format!("**Note {0}.** ⟨{1} {0}⟩ ≡", chunk.ordinal, chunk.name)
    }
}

/// Weaves the document into markdown: prose passes through, each chunk
/// definition becomes a numbered note with a fenced code block, and a
/// trailing index lists where every chunk is defined and referenced.
/// Unresolved references are flagged as UNDEFINED in the index.
pub fn weave(doc: &WebDocument) -> String {
    let mut out: Vec<String> = Vec::new();
    for block in &doc.blocks {
        match block {
            Block::Prose { lines, .. } => out.extend(lines.iter().cloned()),
            Block::ChunkDef { chunk, def } => {
                let chunk = &doc.chunks[*chunk];
                if out.last().map(|l| !l.is_empty()).unwrap_or(false) {
                    out.push(String::new());
                }
                out.push(note_header(chunk, *def > 0));
                out.push(String::new());
                out.push("```".to_string());
                for line in &chunk.definitions[*def].lines {
                    match line {
                        ChunkLine::Code { text, .. } => out.push(text.clone()),
                        ChunkLine::Reference { indent, name, .. } => {
                            out.push(format!("{indent}<<{name}>>"))
                        }
                    }
                }
                out.push("```".to_string());
            }
        }
    }

    let sites = doc.reference_sites();
    if !doc.chunks.is_empty() || !sites.is_empty() {
        if out.last().map(|l| !l.is_empty()).unwrap_or(false) {
            out.push(String::new());
        }
        out.push("## Index".to_string());
        out.push(String::new());
        for chunk in &doc.chunks {
            let defined = chunk
                .defined_at()
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            let referenced = match sites.get(&chunk.name) {
                Some(refs) => format!("referenced by {}", format_sites(doc, refs)),
                None => "never referenced".to_string(),
            };
            out.push(format!(
                "- ⟨{} {}⟩: defined at line {}; {}.",
                chunk.name, chunk.ordinal, defined, referenced
            ));
        }
        for (name, refs) in &sites {
            if doc.by_name.contains_key(name.as_str()) {
                continue;
            }
            out.push(format!(
                "- ⟨{}⟩: UNDEFINED; referenced by {}.",
                name,
                format_sites(doc, refs)
            ));
        }
    }

    if out.is_empty() {
        String::new()
    } else {
        out.join("\n") + "\n"
    }
}

fn format_sites(doc: &WebDocument, refs: &[RefSite]) -> String {
    refs.iter()
        .map(|site| {
            let ordinal = doc
                .chunk(&site.chunk)
                .map(|c| format!(" {}", c.ordinal))
                .unwrap_or_default();
            format!("⟨{}{}⟩ (line {})", site.chunk, ordinal, site.line)
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// Chunk table in ordinal order: name, definition lines, reference sites.
pub fn list_chunks(doc: &WebDocument) -> Vec<ChunkSummary> {
    let sites = doc.reference_sites();
    doc.chunks
        .iter()
        .map(|chunk| ChunkSummary {
            ordinal: chunk.ordinal,
            name: chunk.name.clone(),
            defined_at: chunk.defined_at(),
            references: sites.get(&chunk.name).cloned().unwrap_or_default(),
        })
        .collect()
}
