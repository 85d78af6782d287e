//! Tolerant HTML tokenizer and tree builder that keeps byte offsets.
//!
//! Covers the subset of HTML tree construction that teaching material uses:
//! void elements, raw-text elements, comments, implied `</p>`/`</li>` ends,
//! unmatched end tags (ignored) and unclosed elements (closed at the parent's
//! end or at end of input). Offsets index into the original source.

use std::borrow::Cow;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Element(Element),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    /// Lowercased tag name.
    pub name: String,
    pub attrs: Vec<(String, String)>,
    /// Byte offset of the opening `<`.
    pub start: usize,
    /// Byte offset one past the end of the closing tag, or of the point at
    /// which the element was implicitly closed.
    pub end: usize,
    pub children: Vec<Node>,
}

impl Element {
    /// First value of attribute `name` (names are compared lowercased).
    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attrs.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str())
    }

    pub fn heading_level(&self) -> Option<u8> {
        match self.name.as_str() {
            "h1" => Some(1),
            "h2" => Some(2),
            "h3" => Some(3),
            "h4" => Some(4),
            "h5" => Some(5),
            "h6" => Some(6),
            _ => None,
        }
    }

    /// Concatenated text of all descendants, whitespace collapsed.
    pub fn text(&self) -> String {
        let mut raw = String::new();
        collect_text(&self.children, &mut raw);
        collapse_whitespace(&raw)
    }
}

fn collect_text(nodes: &[Node], out: &mut String) {
    for node in nodes {
        match node {
            Node::Text(t) => out.push_str(t),
            Node::Element(e) => {
                if matches!(e.name.as_str(), "script" | "style") {
                    continue;
                }
                // keep words in adjacent blocks apart
                if is_block_level(&e.name) || e.name == "br" {
                    out.push(' ');
                }
                collect_text(&e.children, out);
                if is_block_level(&e.name) {
                    out.push(' ');
                }
            }
        }
    }
}

pub fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    pub children: Vec<Node>,
}

impl Document {
    pub fn text(&self) -> String {
        let mut raw = String::new();
        collect_text(&self.children, &mut raw);
        collapse_whitespace(&raw)
    }
}

/// Text content of an HTML fragment with markup removed.
pub fn strip_tags(html: &str) -> String {
    parse(html).text()
}

const VOID: &[&str] = &[
    "area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta", "param", "source", "track", "wbr",
];

const RAW_TEXT: &[&str] = &["script", "style", "textarea", "title"];

/// Start tags that implicitly end an open `<p>`.
const CLOSES_P: &[&str] = &[
    "address",
    "article",
    "aside",
    "blockquote",
    "details",
    "div",
    "dl",
    "fieldset",
    "figcaption",
    "figure",
    "footer",
    "form",
    "h1",
    "h2",
    "h3",
    "h4",
    "h5",
    "h6",
    "header",
    "hr",
    "main",
    "nav",
    "ol",
    "p",
    "pre",
    "section",
    "table",
    "ul",
];

fn is_block_level(name: &str) -> bool {
    CLOSES_P.contains(&name) || matches!(name, "li" | "dt" | "dd" | "tr" | "td" | "th" | "body" | "html")
}

struct Builder {
    stack: Vec<Element>,
    root: Vec<Node>,
}

impl Builder {
    fn push_node(&mut self, node: Node) {
        match self.stack.last_mut() {
            Some(parent) => parent.children.push(node),
            None => self.root.push(node),
        }
    }

    fn close_top(&mut self, end: usize) {
        if let Some(mut el) = self.stack.pop() {
            el.end = end;
            self.push_node(Node::Element(el));
        }
    }

    /// Closes elements down to and including the innermost `name`, stopping at
    /// any of `boundaries`. Returns whether an element was closed.
    fn close_named(&mut self, name: &str, boundaries: &[&str], implicit_end: usize, own_end: usize) -> bool {
        let Some(pos) = self
            .stack
            .iter()
            .rposition(|e| e.name == name || boundaries.contains(&e.name.as_str()))
        else {
            return false;
        };
        if self.stack[pos].name != name {
            return false;
        }
        while self.stack.len() > pos + 1 {
            self.close_top(implicit_end);
        }
        self.close_top(own_end);
        true
    }

    fn start_element(&mut self, el: Element, self_closing: bool, tag_end: usize) {
        let name = el.name.clone();
        if CLOSES_P.contains(&name.as_str()) {
            self.close_named("p", &["button", "table", "td", "th"], el.start, el.start);
        }
        match name.as_str() {
            "li" => {
                self.close_named("li", &["ul", "ol"], el.start, el.start);
            }
            "dt" | "dd" if !self.close_named("dt", &["dl"], el.start, el.start) => {
                self.close_named("dd", &["dl"], el.start, el.start);
            }
            _ => {}
        }
        if el.heading_level().is_some() && self.stack.last().is_some_and(|top| top.heading_level().is_some()) {
            self.close_top(el.start);
        }
        if VOID.contains(&name.as_str()) || self_closing {
            let mut el = el;
            el.end = tag_end;
            self.push_node(Node::Element(el));
        } else {
            self.stack.push(el);
        }
    }

    fn end_element(&mut self, name: &str, start: usize, end: usize) {
        if name.len() == 2 && name.starts_with('h') && name.as_bytes()[1].is_ascii_digit() {
            // any heading end tag closes the open heading
            if let Some(pos) = self.stack.iter().rposition(|e| e.heading_level().is_some()) {
                while self.stack.len() > pos + 1 {
                    self.close_top(start);
                }
                self.close_top(end);
                return;
            }
        }
        if let Some(pos) = self.stack.iter().rposition(|e| e.name == name) {
            while self.stack.len() > pos + 1 {
                self.close_top(start);
            }
            self.close_top(end);
        }
    }
}

/// Parses `src` into a tree. Never fails.
pub fn parse(src: &str) -> Document {
    let bytes = src.as_bytes();
    let mut b = Builder {
        stack: Vec::new(),
        root: Vec::new(),
    };
    let mut i = 0;
    let mut text_start = 0;

    let flush_text = |b: &mut Builder, from: usize, to: usize| {
        if to > from {
            b.push_node(Node::Text(decode_entities(&src[from..to]).into_owned()));
        }
    };

    while i < bytes.len() {
        if bytes[i] != b'<' {
            i += 1;
            continue;
        }
        let rest = &src[i..];
        if let Some(comment) = rest.strip_prefix("<!--") {
            flush_text(&mut b, text_start, i);
            let end = comment.find("-->").map_or(bytes.len(), |p| i + 4 + p + 3);
            i = end;
            text_start = i;
        } else if rest.starts_with("<!") || rest.starts_with("<?") {
            flush_text(&mut b, text_start, i);
            i = rest.find('>').map_or(bytes.len(), |p| i + p + 1);
            text_start = i;
        } else if rest.starts_with("</") && rest[2..].starts_with(|c: char| c.is_ascii_alphabetic()) {
            flush_text(&mut b, text_start, i);
            let name_len = rest[2..]
                .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-'))
                .unwrap_or(rest.len() - 2);
            let name = rest[2..2 + name_len].to_ascii_lowercase();
            let end = rest.find('>').map_or(bytes.len(), |p| i + p + 1);
            b.end_element(&name, i, end);
            i = end;
            text_start = i;
        } else if rest[1..].starts_with(|c: char| c.is_ascii_alphabetic()) {
            flush_text(&mut b, text_start, i);
            let (el, self_closing, tag_end) = parse_start_tag(src, i);
            let raw = RAW_TEXT.contains(&el.name.as_str()) && !self_closing;
            let name = el.name.clone();
            b.start_element(el, self_closing, tag_end);
            i = tag_end;
            text_start = i;
            if raw {
                let close = format!("</{name}");
                let body_end = find_ascii_ci(&src[i..], &close).map_or(bytes.len(), |p| i + p);
                flush_text(&mut b, i, body_end);
                let end = src[body_end..].find('>').map_or(bytes.len(), |p| body_end + p + 1);
                b.end_element(&name, body_end, end);
                i = end;
                text_start = i;
            }
        } else {
            i += 1;
        }
    }
    flush_text(&mut b, text_start, bytes.len());
    while !b.stack.is_empty() {
        b.close_top(bytes.len());
    }
    Document { children: b.root }
}

fn find_ascii_ci(haystack: &str, needle: &str) -> Option<usize> {
    let h = haystack.as_bytes();
    let n = needle.as_bytes();
    if n.len() > h.len() {
        return None;
    }
    (0..=h.len() - n.len()).find(|&i| h[i..i + n.len()].eq_ignore_ascii_case(n))
}

fn parse_start_tag(src: &str, start: usize) -> (Element, bool, usize) {
    let bytes = src.as_bytes();
    let mut i = start + 1;
    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'-') {
        i += 1;
    }
    let name = src[start + 1..i].to_ascii_lowercase();
    let mut attrs = Vec::new();
    let mut self_closing = false;
    loop {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if i >= bytes.len() {
            break;
        }
        match bytes[i] {
            b'>' => {
                i += 1;
                break;
            }
            b'/' => {
                i += 1;
                if bytes.get(i) == Some(&b'>') {
                    self_closing = true;
                    i += 1;
                    break;
                }
                continue;
            }
            _ => {}
        }
        let name_start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() && !matches!(bytes[i], b'=' | b'>' | b'/') {
            i += 1;
        }
        if i == name_start {
            // stray '=' or similar
            i += 1;
            continue;
        }
        let attr_name = src[name_start..i].to_ascii_lowercase();
        let mut j = i;
        while j < bytes.len() && bytes[j].is_ascii_whitespace() {
            j += 1;
        }
        let mut value = String::new();
        if bytes.get(j) == Some(&b'=') {
            j += 1;
            while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                j += 1;
            }
            match bytes.get(j) {
                Some(&q @ (b'"' | b'\'')) => {
                    let vstart = j + 1;
                    let vend = src[vstart..].find(q as char).map_or(bytes.len(), |p| vstart + p);
                    value = decode_entities(&src[vstart..vend]).into_owned();
                    i = (vend + 1).min(bytes.len());
                }
                _ => {
                    let vstart = j;
                    while j < bytes.len() && !bytes[j].is_ascii_whitespace() && bytes[j] != b'>' {
                        j += 1;
                    }
                    value = decode_entities(&src[vstart..j]).into_owned();
                    i = j;
                }
            }
        }
        if !attrs.iter().any(|(k, _): &(String, String)| *k == attr_name) {
            attrs.push((attr_name, value));
        }
    }
    let el = Element {
        name,
        attrs,
        start,
        end: i,
        children: Vec::new(),
    };
    (el, self_closing, i)
}

/// Decodes the common named entities and numeric character references.
/// Unknown entities are left as written.
pub fn decode_entities(s: &str) -> Cow<'_, str> {
    if !s.contains('&') {
        return Cow::Borrowed(s);
    }
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        rest = &rest[amp..];
        let semi = rest[1..].find(';').map(|p| p + 1).filter(|&p| p <= 12);
        let decoded = semi.and_then(|p| decode_one(&rest[1..p]).map(|c| (c, p)));
        match decoded {
            Some((c, p)) => {
                out.push(c);
                rest = &rest[p + 1..];
            }
            None => {
                out.push('&');
                rest = &rest[1..];
            }
        }
    }
    out.push_str(rest);
    Cow::Owned(out)
}

fn decode_one(entity: &str) -> Option<char> {
    if let Some(num) = entity.strip_prefix('#') {
        let code = match num.strip_prefix(['x', 'X']) {
            Some(hex) => u32::from_str_radix(hex, 16).ok()?,
            None => num.parse().ok()?,
        };
        return char::from_u32(code);
    }
    Some(match entity {
        "amp" => '&',
        "lt" => '<',
        "gt" => '>',
        "quot" => '"',
        "apos" => '\'',
        "nbsp" => '\u{a0}',
        "ndash" => '\u{2013}',
        "mdash" => '\u{2014}',
        "hellip" => '\u{2026}',
        "copy" => '\u{a9}',
        "times" => '\u{d7}',
        _ => return None,
    })
}
