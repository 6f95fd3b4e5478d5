"""Standalone SPARQL 1.1 SELECT grammar checker used as the independent
validator for emitted query text.

This is a recursive-descent parser over the W3C grammar subset the engine
can emit: prologue (PREFIX), SELECT with variables and aggregate aliases,
a WHERE group holding triple patterns, FILTER constraints and SERVICE
blocks, then GROUP BY / ORDER BY.  It shares no code with the emitter; it
only accepts or rejects text.
"""

from __future__ import annotations

import re


class SparqlGrammarError(ValueError):
    pass


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\s]*>)
  | (?P<var>[?$][A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<number>[+-]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<pname>[A-Za-z_][A-Za-z0-9_.-]*?:[A-Za-z0-9_.%-]*|[A-Za-z_][A-Za-z0-9_-]*:?)
  | (?P<punct>\|\||&&|\^\^|!=|<=|>=|[{}().,;=<>!*/+-])
    """,
    re.VERBOSE,
)

_KEYWORDS = {
    "prefix", "base", "select", "distinct", "where", "filter", "group", "order",
    "by", "as", "a", "service", "optional", "regex", "asc", "desc", "avg", "sum",
    "min", "max", "count", "true", "false", "str", "lang", "bound", "union",
    "limit", "offset", "having",
}


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise SparqlGrammarError(f"lexical error at offset {pos}: {text[pos:pos+20]!r}")
        pos = m.end()
        kind = m.lastgroup
        if kind == "ws":
            continue
        value = m.group(0)
        if kind == "pname" and value.lower() in _KEYWORDS:
            kind = "keyword"
            value = value.lower()
        tokens.append((kind, value))
    tokens.append(("eof", ""))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> tuple[str, str]:
        return self.tokens[self.pos]

    def next(self) -> tuple[str, str]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def accept(self, kind: str, value: str | None = None) -> bool:
        k, v = self.peek()
        if k == kind and (value is None or v == value):
            self.pos += 1
            return True
        return False

    def expect(self, kind: str, value: str | None = None) -> str:
        k, v = self.next()
        if k != kind or (value is not None and v != value):
            raise SparqlGrammarError(f"expected {value or kind}, found {v!r}")
        return v

    def keyword(self, word: str) -> bool:
        return self.accept("keyword", word)

    def expect_keyword(self, word: str) -> None:
        if not self.keyword(word):
            raise SparqlGrammarError(f"expected {word.upper()}, found {self.peek()[1]!r}")

    # -- grammar -------------------------------------------------------------

    def parse_query(self) -> None:
        while self.keyword("prefix"):
            name = self.expect("pname")
            if not name.endswith(":"):
                raise SparqlGrammarError(f"prefix name must end with ':', got {name!r}")
            self.expect("iri")
        self.expect_keyword("select")
        self.keyword("distinct")
        self._select_clause()
        self.expect_keyword("where")
        self._group_graph_pattern()
        self._solution_modifiers()
        if self.peek()[0] != "eof":
            raise SparqlGrammarError(f"trailing tokens: {self.peek()[1]!r}")

    def _select_clause(self) -> None:
        saw_any = False
        while True:
            k, v = self.peek()
            if k == "var":
                self.next()
                saw_any = True
            elif k == "punct" and v == "(":
                self.next()
                self._expression()
                self.expect_keyword("as")
                self.expect("var")
                self.expect("punct", ")")
                saw_any = True
            elif k == "punct" and v == "*":
                self.next()
                saw_any = True
            else:
                break
        if not saw_any:
            raise SparqlGrammarError("empty SELECT clause")

    def _group_graph_pattern(self) -> None:
        self.expect("punct", "{")
        while True:
            k, v = self.peek()
            if k == "punct" and v == "}":
                self.next()
                return
            if k == "keyword" and v == "filter":
                self.next()
                self._constraint()
            elif k == "keyword" and v == "service":
                self.next()
                if self.peek()[0] not in ("iri", "var"):
                    raise SparqlGrammarError("SERVICE needs an IRI or variable")
                self.next()
                self._group_graph_pattern()
            elif k == "keyword" and v == "optional":
                self.next()
                self._group_graph_pattern()
            else:
                self._triples_block()

    def _triples_block(self) -> None:
        self._term(subject=True)
        while True:
            self._verb()
            self._term()
            while self.accept("punct", ","):
                self._term()
            if self.accept("punct", ";"):
                if self.peek() == ("punct", "."):
                    pass
                else:
                    continue
            break
        self.expect("punct", ".")

    def _verb(self) -> None:
        k, v = self.peek()
        if k == "keyword" and v == "a":
            self.next()
            return
        if k in ("iri", "var", "pname"):
            self.next()
            return
        raise SparqlGrammarError(f"expected predicate, found {v!r}")

    def _term(self, subject: bool = False) -> None:
        k, v = self.peek()
        if k in ("iri", "var", "pname"):
            self.next()
            return
        if not subject and k in ("string", "number"):
            self.next()
            if k == "string" and self.accept("punct", "^^"):
                if self.peek()[0] not in ("iri", "pname"):
                    raise SparqlGrammarError("datatype must be an IRI")
                self.next()
            return
        if not subject and k == "keyword" and v in ("true", "false"):
            self.next()
            return
        raise SparqlGrammarError(f"expected term, found {v!r}")

    def _constraint(self) -> None:
        k, v = self.peek()
        if k == "punct" and v == "(":
            self._bracketted_expression()
        elif k == "keyword" and v == "regex":
            self.next()
            self._regex_call()
        else:
            raise SparqlGrammarError(f"FILTER needs a bracketted expression or call, found {v!r}")

    def _bracketted_expression(self) -> None:
        self.expect("punct", "(")
        self._expression()
        self.expect("punct", ")")

    def _expression(self) -> None:
        self._relational()
        while self.accept("punct", "||") or self.accept("punct", "&&"):
            self._relational()

    def _relational(self) -> None:
        self._additive()
        k, v = self.peek()
        if k == "punct" and v in ("=", "!=", "<", "<=", ">", ">="):
            self.next()
            self._additive()

    def _additive(self) -> None:
        self._unary()
        while True:
            k, v = self.peek()
            if k == "punct" and v in ("+", "-", "*", "/"):
                self.next()
                self._unary()
            else:
                return

    def _unary(self) -> None:
        k, v = self.peek()
        if k == "punct" and v == "(":
            self._bracketted_expression()
            return
        if k == "keyword" and v == "regex":
            self.next()
            self._regex_call()
            return
        if k == "keyword" and v in ("avg", "sum", "min", "max", "count"):
            self.next()
            self.expect("punct", "(")
            self.keyword("distinct")
            self._expression()
            self.expect("punct", ")")
            return
        if k == "iri":  # function call through an IRI, e.g. a cast
            self.next()
            self.expect("punct", "(")
            self._expression()
            self.expect("punct", ")")
            return
        if k in ("var", "string", "number"):
            self.next()
            return
        if k == "keyword" and v in ("true", "false"):
            self.next()
            return
        raise SparqlGrammarError(f"unexpected token in expression: {v!r}")

    def _regex_call(self) -> None:
        self.expect("punct", "(")
        self._expression()
        self.expect("punct", ",")
        self._expression()
        if self.accept("punct", ","):
            self._expression()
        self.expect("punct", ")")

    def _solution_modifiers(self) -> None:
        if self.keyword("group"):
            self.expect_keyword("by")
            count = 0
            while self.peek()[0] == "var":
                self.next()
                count += 1
            if count == 0:
                raise SparqlGrammarError("GROUP BY needs at least one variable")
        if self.keyword("order"):
            self.expect_keyword("by")
            count = 0
            while True:
                k, v = self.peek()
                if k == "keyword" and v in ("asc", "desc"):
                    self.next()
                    self._bracketted_expression()
                    count += 1
                elif k == "var":
                    self.next()
                    count += 1
                else:
                    break
            if count == 0:
                raise SparqlGrammarError("ORDER BY needs at least one condition")


def check_sparql(text: str) -> None:
    """Raise SparqlGrammarError unless *text* is a well-formed SELECT query."""
    _Parser(text).parse_query()
