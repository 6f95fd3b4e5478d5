"""Turtle reader and writer.

Covers the Turtle 1.1 grammar except RDF-star annotations and collection
syntax ``( ... )``: directives, prefixed names, IRIs, blank-node labels and
``[...]`` property lists, predicate/object lists, typed and language-tagged
literals, numeric and boolean shorthand, the ``a`` keyword, and comments.

Blank-node labels are renamed to fresh graph-scoped labels on load so
separately parsed documents never collide.
"""

from __future__ import annotations

import re
from urllib.parse import urljoin

from .graph import Graph
from .namespaces import (
    RDF,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    XSD_STRING,
    WELL_KNOWN_PREFIXES,
)
from .terms import BlankNode, Iri, Literal, Term, Triple


class TurtleSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


_ESCAPES = {
    "t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f",
    '"': '"', "'": "'", "\\": "\\",
}

_NUMBER_RE = re.compile(
    r"[+-]?(?:"
    r"\d+\.\d*[eE][+-]?\d+"   # 1.2e3
    r"|\.\d+[eE][+-]?\d+"     # .2e3
    r"|\d+[eE][+-]?\d+"       # 1e3
    r"|\d*\.\d+"              # 1.2 | .5
    r"|\d+"                   # 12
    r")"
)

_PN_LOCAL_EXTRA = set("_-:%")


def _is_pn_char(ch: str) -> bool:
    return ch.isalnum() or ch in _PN_LOCAL_EXTRA or ord(ch) > 0x7F


class _Lexer:
    """Character cursor over the document with line/column bookkeeping."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str) -> TurtleSyntaxError:
        return TurtleSyntaxError(message, self.line, self.col)

    def eof(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.text[i] if i < len(self.text) else ""

    def advance(self, n: int = 1) -> str:
        taken = self.text[self.pos:self.pos + n]
        for ch in taken:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += n
        return taken

    def skip_ws(self) -> None:
        while not self.eof():
            ch = self.peek()
            if ch in " \t\r\n":
                self.advance()
            elif ch == "#":
                while not self.eof() and self.peek() != "\n":
                    self.advance()
            else:
                return

    def expect(self, token: str) -> None:
        self.skip_ws()
        if self.text.startswith(token, self.pos):
            self.advance(len(token))
        else:
            found = self.peek() or "end of input"
            raise self.error(f"expected {token!r}, found {found!r}")

    def startswith(self, token: str) -> bool:
        self.skip_ws()
        return self.text.startswith(token, self.pos)

    def startswith_keyword(self, word: str) -> bool:
        """Case-insensitive match of *word* followed by a non-name character."""
        self.skip_ws()
        end = self.pos + len(word)
        if self.text[self.pos:end].lower() != word.lower():
            return False
        return end >= len(self.text) or not _is_pn_char(self.text[end])


class TurtleParser:
    def __init__(self, text: str, graph: Graph | None = None):
        self.lx = _Lexer(text)
        self.graph = graph if graph is not None else Graph()
        self.base: str | None = None
        self._bnode_map: dict[str, BlankNode] = {}

    # -- entry -----------------------------------------------------------

    def parse(self) -> Graph:
        lx = self.lx
        while True:
            lx.skip_ws()
            if lx.eof():
                return self.graph
            if lx.startswith("@prefix"):
                self._directive_prefix("@prefix", dot=True)
            elif lx.startswith("@base"):
                self._directive_base("@base", dot=True)
            elif lx.startswith_keyword("PREFIX"):
                self._directive_prefix("PREFIX", dot=False)
            elif lx.startswith_keyword("BASE"):
                self._directive_base("BASE", dot=False)
            else:
                self._triples_block()
                lx.expect(".")

    def _directive_prefix(self, keyword: str, dot: bool) -> None:
        lx = self.lx
        lx.advance(len(keyword))
        lx.skip_ws()
        prefix = self._read_pname_ns()
        lx.skip_ws()
        namespace = self._read_iriref()
        if dot:
            lx.expect(".")
        self.graph.bind(prefix, namespace)

    def _directive_base(self, keyword: str, dot: bool) -> None:
        lx = self.lx
        lx.advance(len(keyword))
        lx.skip_ws()
        self.base = self._read_iriref()
        if dot:
            lx.expect(".")

    # -- grammar ---------------------------------------------------------

    def _triples_block(self) -> None:
        lx = self.lx
        lx.skip_ws()
        if lx.startswith("["):
            subject = self._blank_node_property_list()
            lx.skip_ws()
            if not lx.startswith("."):
                self._predicate_object_list(subject)
        else:
            subject = self._read_subject()
            self._predicate_object_list(subject)

    def _predicate_object_list(self, subject) -> None:
        lx = self.lx
        while True:
            predicate = self._read_predicate()
            while True:
                obj = self._read_object()
                self.graph.insert(Triple(subject, predicate, obj))
                lx.skip_ws()
                if lx.startswith(","):
                    lx.expect(",")
                    continue
                break
            lx.skip_ws()
            if lx.startswith(";"):
                lx.expect(";")
                lx.skip_ws()
                # a ';' may be trailing before '.' or ']'
                if lx.startswith(".") or lx.startswith("]") or lx.startswith(";"):
                    while lx.startswith(";"):
                        lx.expect(";")
                        lx.skip_ws()
                    return
                continue
            return

    def _read_subject(self):
        lx = self.lx
        lx.skip_ws()
        ch = lx.peek()
        if ch == "<" or self._at_pname():
            return self._read_iri()
        if lx.startswith("_:"):
            return self._read_bnode_label()
        if ch == "(":
            raise lx.error("collection syntax '( ... )' is not supported")
        raise lx.error(f"expected subject, found {ch!r}" if ch else "expected subject, found end of input")

    def _read_predicate(self) -> Iri:
        lx = self.lx
        lx.skip_ws()
        if lx.startswith_keyword("a") and lx.peek() == "a":
            lx.advance(1)
            return Iri(RDF.type)
        if lx.peek() == "<" or self._at_pname():
            return self._read_iri()
        raise lx.error(f"expected predicate, found {lx.peek()!r}")

    def _read_object(self) -> Term:
        lx = self.lx
        lx.skip_ws()
        ch = lx.peek()
        if ch == "<" and lx.peek(1) != "<":
            return self._read_iri()
        if lx.startswith("_:"):
            return self._read_bnode_label()
        if ch == "[":
            return self._blank_node_property_list()
        if ch == "(":
            raise lx.error("collection syntax '( ... )' is not supported")
        if ch in "\"'":
            return self._read_rdf_literal()
        if ch.isdigit() or (ch in "+-." and (lx.peek(1).isdigit() or lx.peek(1) == ".")):
            return self._read_numeric_literal()
        if lx.startswith_keyword("true"):
            lx.advance(4)
            return Literal("true", XSD_BOOLEAN)
        if lx.startswith_keyword("false"):
            lx.advance(5)
            return Literal("false", XSD_BOOLEAN)
        if self._at_pname():
            return self._read_iri()
        raise lx.error(f"expected object, found {ch!r}" if ch else "expected object, found end of input")

    def _blank_node_property_list(self) -> BlankNode:
        lx = self.lx
        lx.expect("[")
        node = self.graph.fresh_bnode()
        lx.skip_ws()
        if not lx.startswith("]"):
            self._predicate_object_list(node)
        lx.expect("]")
        return node

    # -- terminals -------------------------------------------------------

    def _at_pname(self) -> bool:
        lx = self.lx
        ch = lx.peek()
        if ch == ":":
            return True
        if not (ch.isalpha() or ord(ch) > 0x7F if ch else False):
            return False
        # scan forward through prefix characters to find ':'
        i = lx.pos
        text = lx.text
        while i < len(text) and (text[i].isalnum() or text[i] in "_-." or ord(text[i]) > 0x7F):
            i += 1
        return i < len(text) and text[i] == ":"

    def _read_iri(self) -> Iri:
        lx = self.lx
        if lx.peek() == "<":
            return Iri(self._read_iriref())
        prefix = self._read_pname_ns()
        if prefix not in self.graph.prefixes:
            raise lx.error(f"undefined prefix {prefix + ':'!r}")
        local = self._read_pn_local()
        return Iri(self.graph.prefixes[prefix] + local)

    def _read_iriref(self) -> str:
        lx = self.lx
        if lx.peek() != "<":
            raise lx.error(f"expected IRI, found {lx.peek()!r}")
        lx.advance()
        out = []
        while True:
            if lx.eof():
                raise lx.error("unterminated IRI")
            ch = lx.advance()
            if ch == ">":
                break
            if ch in " \t\n\r<\"{}|^`":
                raise lx.error(f"illegal character {ch!r} in IRI")
            if ch == "\\":
                out.append(self._read_unicode_escape())
            else:
                out.append(ch)
        value = "".join(out)
        if self.base and not re.match(r"^[A-Za-z][A-Za-z0-9+.-]*:", value):
            value = urljoin(self.base, value)
        if not value:
            raise lx.error("empty IRI")
        return value

    def _read_unicode_escape(self) -> str:
        lx = self.lx
        kind = lx.advance()
        if kind == "u":
            digits = lx.advance(4)
        elif kind == "U":
            digits = lx.advance(8)
        else:
            raise lx.error(f"illegal IRI escape '\\{kind}'")
        try:
            return chr(int(digits, 16))
        except ValueError:
            raise lx.error(f"bad unicode escape '\\{kind}{digits}'") from None

    def _read_pname_ns(self) -> str:
        """Prefix name up to (but not including) the ':'."""
        lx = self.lx
        out = []
        while not lx.eof():
            ch = lx.peek()
            if ch == ":":
                lx.advance()
                return "".join(out)
            if ch.isalnum() or ch in "_-." or ord(ch) > 0x7F:
                out.append(lx.advance())
            else:
                break
        raise lx.error("expected prefixed name (missing ':')")

    def _read_pn_local(self) -> str:
        lx = self.lx
        out = []
        while not lx.eof():
            ch = lx.peek()
            if ch == "\\":
                lx.advance()
                esc = lx.advance()
                if esc not in "_~.!$&'()*+,;=/?#@%-":
                    raise lx.error(f"illegal local-name escape '\\{esc}'")
                out.append(esc)
            elif ch == "%":
                out.append(lx.advance() + lx.advance(2))
            elif _is_pn_char(ch) or ch == ".":
                out.append(lx.advance())
            else:
                break
        # trailing dots belong to the statement terminator
        while out and out[-1] == ".":
            out.pop()
            lx.pos -= 1
            lx.col -= 1
        return "".join(out)

    def _read_bnode_label(self) -> BlankNode:
        lx = self.lx
        lx.advance(2)  # '_:'
        out = []
        while not lx.eof() and (_is_pn_char(lx.peek()) or lx.peek() == "."):
            out.append(lx.advance())
        while out and out[-1] == ".":
            out.pop()
            lx.pos -= 1
            lx.col -= 1
        if not out:
            raise lx.error("empty blank node label")
        label = "".join(out)
        if label not in self._bnode_map:
            self._bnode_map[label] = self.graph.fresh_bnode()
        return self._bnode_map[label]

    def _read_rdf_literal(self) -> Literal:
        lx = self.lx
        lexical = self._read_string()
        if lx.peek() == "@":
            lx.advance()
            tag = []
            while not lx.eof() and (lx.peek().isalnum() or lx.peek() == "-"):
                tag.append(lx.advance())
            if not tag:
                raise lx.error("empty language tag")
            return Literal(lexical, RDF.langString, "".join(tag))
        if lx.peek() == "^" and lx.peek(1) == "^":
            lx.advance(2)
            lx.skip_ws()
            datatype = self._read_iri()
            return Literal(lexical, datatype.value)
        return Literal(lexical, XSD_STRING)

    def _read_string(self) -> str:
        lx = self.lx
        quote = lx.peek()
        long_form = lx.peek(1) == quote and lx.peek(2) == quote
        delim = quote * 3 if long_form else quote
        lx.advance(len(delim))
        out = []
        while True:
            if lx.eof():
                raise lx.error("unterminated string literal")
            if lx.text.startswith(delim, lx.pos):
                lx.advance(len(delim))
                return "".join(out)
            ch = lx.advance()
            if ch == "\\":
                esc = lx.advance()
                if esc in _ESCAPES:
                    out.append(_ESCAPES[esc])
                elif esc in "uU":
                    lx.pos -= 2
                    lx.col -= 2
                    lx.advance()
                    out.append(self._read_unicode_escape())
                else:
                    raise lx.error(f"illegal string escape '\\{esc}'")
            elif not long_form and ch == "\n":
                raise lx.error("unterminated string literal")
            else:
                out.append(ch)

    def _read_numeric_literal(self) -> Literal:
        lx = self.lx
        m = _NUMBER_RE.match(lx.text, lx.pos)
        if not m:
            raise lx.error("malformed number")
        token = m.group(0)
        # do not swallow a statement-terminating dot: "10." -> INTEGER 10, DOT
        if token.endswith(".") or (token and "." == token[-1]):
            token = token[:-1]
        lx.advance(len(token))
        if re.search(r"[eE]", token):
            return Literal(token, XSD_DOUBLE)
        if "." in token:
            return Literal(token, XSD_DECIMAL)
        return Literal(token, XSD_INTEGER)


def parse_turtle(text: str, graph: Graph | None = None) -> Graph:
    """Parse a Turtle document into a (new or provided) graph."""
    return TurtleParser(text, graph).parse()


# -- serialization --------------------------------------------------------

_STRING_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t",
                   "\b": "\\b", "\f": "\\f"}

_SAFE_LOCAL_RE = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_-]*\Z")

_INTEGER_LEXICAL = re.compile(r"[+-]?\d+\Z")
_DECIMAL_LEXICAL = re.compile(r"[+-]?\d*\.\d+\Z")


def escape_string(value: str) -> str:
    return "".join(_STRING_ESCAPES.get(ch, ch) for ch in value)


class TurtleSerializer:
    def __init__(self, graph: Graph):
        self.graph = graph
        self.prefixes = dict(graph.prefixes)
        self._inline: set[BlankNode] = self._inlineable()

    def _inlineable(self) -> set[BlankNode]:
        """Blank nodes referenced exactly once as an object, safe to nest."""
        as_object: dict[BlankNode, int] = {}
        as_subject_of_bnode_ref: set[BlankNode] = set()
        for t in self.graph:
            if isinstance(t.object, BlankNode):
                as_object[t.object] = as_object.get(t.object, 0) + 1
        inline = {n for n, c in as_object.items() if c == 1}
        # drop anything on a bnode->bnode cycle
        def reaches(start: BlankNode, target: BlankNode, seen=None) -> bool:
            seen = seen or set()
            if start in seen:
                return False
            seen.add(start)
            for t in self.graph.triples(subject=start):
                if isinstance(t.object, BlankNode):
                    if t.object == target or reaches(t.object, target, seen):
                        return True
            return False
        return {n for n in inline if not reaches(n, n)} - as_subject_of_bnode_ref

    def serialize(self) -> str:
        lines = []
        for prefix in sorted(self.prefixes):
            lines.append(f"@prefix {prefix}: <{self.prefixes[prefix]}> .")

        subjects = [s for s in {t.subject for t in self.graph}
                    if not (isinstance(s, BlankNode) and s in self._inline)]
        subjects.sort(key=lambda s: (isinstance(s, BlankNode), str(s)))
        if lines and subjects:
            lines.append("")
        for subject in subjects:
            lines.append(self._subject_block(subject))
        return "\n".join(lines) + ("\n" if lines else "")

    def _subject_block(self, subject) -> str:
        body = self._predicate_object_text(subject, indent="    ")
        return f"{self._term(subject)} {body} .\n"

    def _predicate_object_text(self, subject, indent: str) -> str:
        by_pred: dict[Iri, list[Term]] = {}
        for t in self.graph.triples(subject=subject):
            by_pred.setdefault(t.predicate, []).append(t.object)
        rdf_type = Iri(RDF.type)
        preds = sorted(by_pred, key=lambda p: (p.value != RDF.type, p.value))
        parts = []
        for pred in preds:
            objs = sorted(by_pred[pred], key=lambda o: self._term(o))
            rendered = ", ".join(self._object(o, indent) for o in objs)
            name = "a" if pred == rdf_type else self._term(pred)
            parts.append(f"{name} {rendered}")
        return f" ;\n{indent}".join(parts)

    def _object(self, obj: Term, indent: str) -> str:
        if isinstance(obj, BlankNode) and obj in self._inline:
            inner = self._predicate_object_text(obj, indent + "    ")
            if not inner:
                return "[]"
            return f"[ {inner} ]"
        return self._term(obj)

    def _term(self, term: Term) -> str:
        if isinstance(term, Iri):
            return self._iri(term.value)
        if isinstance(term, BlankNode):
            return term.n3()
        return self._literal(term)

    def _iri(self, value: str) -> str:
        best = None
        for prefix, ns in self.prefixes.items():
            if value.startswith(ns) and (best is None or len(ns) > len(self.prefixes[best])):
                local = value[len(ns):]
                if _SAFE_LOCAL_RE.match(local):
                    best = prefix
        if best is not None:
            return f"{best}:{value[len(self.prefixes[best]):]}"
        return f"<{value}>"

    def _literal(self, lit: Literal) -> str:
        if lit.language is not None:
            return f'"{escape_string(lit.lexical)}"@{lit.language}'
        if lit.datatype == XSD_INTEGER and _INTEGER_LEXICAL.match(lit.lexical):
            return lit.lexical
        if lit.datatype == XSD_DECIMAL and _DECIMAL_LEXICAL.match(lit.lexical):
            return lit.lexical
        if lit.datatype == XSD_BOOLEAN and lit.lexical in ("true", "false"):
            return lit.lexical
        if lit.datatype == XSD_STRING:
            return f'"{escape_string(lit.lexical)}"'
        return f'"{escape_string(lit.lexical)}"^^{self._iri(lit.datatype)}'


def serialize_turtle(graph: Graph) -> str:
    """Render *graph* as deterministic Turtle (subjects and predicates sorted)."""
    return TurtleSerializer(graph).serialize()
