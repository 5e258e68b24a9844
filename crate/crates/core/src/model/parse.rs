use serde::Deserialize;

use super::{
    measure_fragment, FragId, Fragment, Metrics, ModelError, Style, SyntaxNode, SyntaxTree,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlainTextMode {
    /// Spaces after a token are folded into its width; leading indentation is
    /// kept as a whitespace atom.
    Code,
    /// Runs of interior whitespace become explicit spacers.
    Prose,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Json,
    PlainText(PlainTextMode),
}

impl InputFormat {
    /// `.json` and `.tree` are tree files, anything else plain text.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json" | "tree") => InputFormat::Json,
            _ => InputFormat::PlainText(PlainTextMode::Code),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("input is not UTF-8: {0}")]
    Utf8(#[from] std::str::Utf8Error),
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum Raw {
    Node(RawNode),
    Atom(String),
    Pin(RawPin),
    Newline(serde::de::IgnoredAny),
    Spacer(f64),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNode {
    id: String,
    #[serde(default)]
    padding: f64,
    #[serde(default)]
    style: Style,
    #[serde(default)]
    children: Vec<Raw>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPin {
    pid: String,
    text: String,
}

struct Ids(u32);

impl Ids {
    fn measure(&mut self, text: &str, m: &Metrics) -> Result<Fragment, ModelError> {
        self.0 += 1;
        measure_fragment(FragId(self.0 - 1), text, m)
    }
}

pub fn parse_document(
    bytes: &[u8],
    format: InputFormat,
    metrics: &Metrics,
) -> Result<SyntaxTree, ParseError> {
    let text = std::str::from_utf8(bytes)?;
    match format {
        InputFormat::Json => parse_json(text, metrics),
        InputFormat::PlainText(mode) => Ok(parse_plain(text, mode, metrics)?),
    }
}

fn parse_json(text: &str, metrics: &Metrics) -> Result<SyntaxTree, ParseError> {
    if text.trim().is_empty() {
        return Ok(SyntaxTree::node("root", 0.0, vec![]));
    }
    let raw: Raw = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut ids = Ids(0);
    Ok(lower(raw, &mut ids, metrics)?)
}

fn lower(raw: Raw, ids: &mut Ids, m: &Metrics) -> Result<SyntaxTree, ModelError> {
    Ok(match raw {
        Raw::Node(n) => {
            if !(n.padding >= 0.0) {
                return Err(ModelError::NegativePadding {
                    id: n.id,
                    padding: n.padding,
                });
            }
            let children = n
                .children
                .into_iter()
                .map(|c| lower(c, ids, m))
                .collect::<Result<_, _>>()?;
            SyntaxTree::Node(SyntaxNode {
                id: n.id,
                padding: n.padding,
                style: n.style,
                children,
            })
        }
        Raw::Atom(s) => SyntaxTree::Atom(ids.measure(&s, m)?),
        Raw::Pin(p) => SyntaxTree::Pin {
            pid: p.pid,
            fragment: ids.measure(&p.text, m)?,
        },
        Raw::Newline(_) => SyntaxTree::Newline,
        Raw::Spacer(w) => {
            if !(w >= 0.0) {
                return Err(ModelError::NegativeSize(FragId(u32::MAX)));
            }
            SyntaxTree::Spacer(w)
        }
    })
}

fn parse_plain(text: &str, mode: PlainTextMode, m: &Metrics) -> Result<SyntaxTree, ModelError> {
    let text = text.strip_suffix('\n').unwrap_or(text);
    let mut ids = Ids(0);
    let mut children = Vec::new();
    if !text.is_empty() {
        for (i, line) in text.split('\n').enumerate() {
            let line = line.strip_suffix('\r').unwrap_or(line);
            if i > 0 {
                children.push(SyntaxTree::Newline);
            }
            let body = line.trim_start();
            let indent = &line[..line.len() - body.len()];
            if !indent.is_empty() {
                children.push(SyntaxTree::Atom(ids.measure(indent, m)?));
            }
            tokenize(body, mode, &mut ids, m, &mut children)?;
        }
    }
    Ok(SyntaxTree::node("root", 0.0, children))
}

fn tokenize(
    s: &str,
    mode: PlainTextMode,
    ids: &mut Ids,
    m: &Metrics,
    out: &mut Vec<SyntaxTree>,
) -> Result<(), ModelError> {
    let mut rest = s;
    while !rest.is_empty() {
        let word_end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let ws_end = rest[word_end..]
            .find(|c: char| !c.is_whitespace())
            .map_or(rest.len(), |k| word_end + k);
        let last = ws_end == rest.len();
        match mode {
            PlainTextMode::Code => {
                let tok = if last {
                    &rest[..word_end]
                } else {
                    &rest[..ws_end]
                };
                out.push(SyntaxTree::Atom(ids.measure(tok, m)?));
            }
            PlainTextMode::Prose => {
                out.push(SyntaxTree::Atom(ids.measure(&rest[..word_end], m)?));
                if !last {
                    let n = rest[word_end..ws_end].chars().count();
                    out.push(SyntaxTree::Spacer(n as f64 * m.char_width));
                }
            }
        }
        rest = &rest[ws_end..];
    }
    Ok(())
}
