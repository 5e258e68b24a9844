#!/usr/bin/env python3
"""Convert the corpus sources into tree files.

The structure is shallow but code-shaped: every statement is a node, every
bracket pair is a node, a name directly followed by an opening bracket forms
a call node with it, and in indentation-sensitive files an indented suite is
a node inside the statement that introduces it. Leading indentation becomes a
spacer measured at CHAR_WIDTH pixels per column; the whitespace after a token
is folded into the token's text.

    python3 tools/make_corpus.py corpus/src corpus/trees
"""

import json
import re
import sys
from pathlib import Path

CHAR_WIDTH = 8
PADDING = 2

LANGS = {
    ".ts": {"comment": "//", "indent": False},
    ".py": {"comment": "#", "indent": True},
    ".hs": {"comment": "--", "indent": True},
}

OPEN = {"(": "paren", "[": "brack", "{": "brace"}
CLOSE = {")": "(", "]": "[", "}": "{"}
# a statement ending in one of these continues on the next line
CONTINUE = {"=", "=>", "?", ":", "+", "-", "&&", "||", ","}

TOKEN = re.compile(
    r"""
      "(?:\\.|[^"\\])*"
    | '(?:\\.|[^'\\])*'
    | `(?:\\.|[^`\\])*`
    | [A-Za-z_][A-Za-z0-9_']*
    | \d+(?:\.\d+)?
    | ===|!==|\*\*|=>|->|<-|<=|>=|==|!=|/=|\+\+|&&|\|\||::|\.\.\.|<\$>|<\*>
    | \S
    """,
    re.VERBOSE,
)


class Node:
    count = 0

    def __init__(self, kind, bracket=None):
        Node.count += 1
        self.serial = Node.count
        self.kind = kind
        self.bracket = bracket
        self.children = []

    def to_json(self):
        children = [c.to_json() if isinstance(c, Node) else c for c in self.children]
        if self.kind == "root":
            return {"node": {"id": "root", "children": children}}
        return {
            "node": {
                "id": f"{self.kind}{self.serial}",
                "padding": PADDING,
                "style": {"class": self.kind},
                "children": children,
            }
        }


def tokens(line, comment):
    """Split one line into (text-with-trailing-space, is_word) pairs."""
    out = []
    pos = 0
    while pos < len(line):
        if line.startswith(comment, pos):
            out.append((line[pos:], False))
            break
        m = TOKEN.match(line, pos)
        end = m.end()
        while end < len(line) and line[end] == " ":
            end += 1
        text = line[pos:end]
        if end == len(line):
            text = text.rstrip()
        word = bool(re.match(r"[A-Za-z_]", m.group())) and end == m.end()
        out.append((text, word))
        pos = end
    return out


class Builder:
    def __init__(self, indent_mode):
        self.indent_mode = indent_mode
        self.root = Node("root")
        self.stack = [self.root]
        # indentation of each open stmt/suite, indentation mode only
        self.levels = []

    def top(self):
        return self.stack[-1]

    def add(self, item):
        self.top().children.append(item)

    def push(self, kind, bracket=None):
        n = Node(kind, bracket)
        self.add(n)
        self.stack.append(n)
        return n

    def pop(self):
        n = self.stack.pop()
        # a call whose bracket group closed is finished too
        if self.top().kind == "call" and n.bracket is not None:
            self.stack.pop()
        return n

    def in_brackets(self):
        return any(n.bracket is not None for n in self.stack)

    def at_block_level(self):
        if self.top().kind in ("root", "suite"):
            return True
        return not self.indent_mode and self.top().bracket == "{"

    def close_stmt(self):
        if self.top().kind == "stmt":
            self.stack.pop()

    def line(self, text, comment):
        body = text.lstrip(" ")
        indent = len(text) - len(body)
        if self.indent_mode and body and not self.in_brackets():
            self.dedent_to(indent)
        if indent:
            self.add({"spacer": indent * CHAR_WIDTH})
        toks = tokens(body, comment)
        for i, (tok, word) in enumerate(toks):
            if self.at_block_level():
                self.push("stmt")
                if self.indent_mode:
                    self.levels.append(indent)
            head = tok.rstrip()
            if head in OPEN:
                self.push(OPEN[head], head)
                self.add({"atom": tok})
                continue
            if head in CLOSE:
                if self.top().kind == "stmt" and self.stack[-2].bracket == CLOSE[head]:
                    self.close_stmt()
                if self.top().bracket == CLOSE[head]:
                    self.add({"atom": tok})
                    self.pop()
                    continue
            nxt = toks[i + 1][0] if i + 1 < len(toks) else ""
            if word and nxt[:1] in ("(", "["):
                self.push("call")
            self.add({"atom": tok})
        last = toks[-1][0].rstrip() if toks else ""
        if not self.indent_mode and last not in CONTINUE:
            self.close_stmt()

    def dedent_to(self, indent):
        """Before a line at `indent`: close the statements it does not
        continue, then open a suite if it is indented past the open one."""
        while self.levels and self.levels[-1] >= indent:
            while self.stack.pop().kind != "stmt":
                pass
            self.levels.pop()
        if self.levels and self.top().kind == "stmt":
            self.push("suite")

    def newline(self):
        self.add({"newline": None})


def convert(src):
    lang = LANGS[src.suffix]
    Node.count = 0
    b = Builder(lang["indent"])
    lines = src.read_text().rstrip("\n").split("\n")
    for i, line in enumerate(lines):
        if i > 0:
            b.newline()
        b.line(line.rstrip(), lang["comment"])
    return b.root.to_json()


def main(argv):
    src_dir, out_dir = Path(argv[1]), Path(argv[2])
    out_dir.mkdir(parents=True, exist_ok=True)
    for src in sorted(src_dir.iterdir()):
        if src.suffix not in LANGS:
            continue
        out = out_dir / (src.stem + src.suffix.replace(".", "_") + ".json")
        out.write_text(json.dumps(convert(src), indent=1) + "\n")
        print(out)


if __name__ == "__main__":
    main(sys.argv)
