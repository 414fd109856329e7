"""Text format: a strict subset of Turtle/TriG.

Supported: ``@prefix`` declarations, the ``a`` keyword, ``;`` predicate
lists, arbitrarily nested anonymous blank nodes ``[ ... ]``, labeled
blanks ``_:x``, integer and string literals, IRIs in angle brackets and
prefixed names, ``#`` comments, and TriG-style named graph blocks
``<iri> { ... }``.

Not supported (absent from the data this library targets): collections,
language tags, datatype suffixes, floating point literals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import ParseError, UnknownPrefixError
from .store import Blank, Iri, Literal, Term, Triple, TripleStore, term_key


# ==========================================================================
# Documents
# ==========================================================================

@dataclass
class Document:
    prefixes: dict[str, str] = field(default_factory=dict)
    default_graph: list[Triple] = field(default_factory=list)
    named_graphs: dict[Iri, list[Triple]] = field(default_factory=dict)

    def all_triples(self) -> Iterator[Triple]:
        yield from self.default_graph
        for triples in self.named_graphs.values():
            yield from triples

    def triple_count(self) -> int:
        return len(self.default_graph) + sum(len(t) for t in self.named_graphs.values())


def insert_document(store: TripleStore, doc: Document) -> int:
    """Insert a document's triples, renaming its blank nodes so they stay
    unique within the store; returns the number of triples added."""
    mapping: dict[Blank, Blank] = {}

    def rename(t: Term) -> Term:
        if isinstance(t, Blank):
            if t not in mapping:
                mapping[t] = store.new_blank()
            return mapping[t]
        return t

    added = 0
    for triple in doc.all_triples():
        renamed = Triple(rename(triple.s), rename(triple.p), rename(triple.o), triple.g)
        if store.insert(renamed):
            added += 1
    return added


# ==========================================================================
# Tokenizer
# ==========================================================================

_PUNCT = {"[": "lbracket", "]": "rbracket", "{": "lbrace", "}": "rbrace",
          ";": "semi", ".": "dot"}


@dataclass(frozen=True)
class _Token:
    typ: str
    value: object
    line: int
    col: int


def _is_name_char(c: str) -> bool:
    return c.isalnum() or c == "_"


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def advance(k: int = 1):
        nonlocal i, line, col
        for _ in range(k):
            if i < n and text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        c = text[i]
        if c in " \t\r\n":
            advance()
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                advance()
            continue
        start_line, start_col = line, col
        if c in _PUNCT:
            tokens.append(_Token(_PUNCT[c], c, start_line, start_col))
            advance()
            continue
        if c == "<":
            advance()
            chars = []
            while i < n and text[i] != ">":
                if text[i] in "\n":
                    raise ParseError("unterminated IRI", start_line, start_col)
                chars.append(text[i])
                advance()
            if i >= n:
                raise ParseError("unterminated IRI", start_line, start_col)
            advance()
            tokens.append(_Token("iri", "".join(chars), start_line, start_col))
            continue
        if c == '"':
            advance()
            chars = []
            while i < n and text[i] != '"':
                if text[i] == "\\":
                    if i + 1 >= n or text[i + 1] not in '"\\':
                        raise ParseError("unsupported escape", line, col)
                    chars.append(text[i + 1])
                    advance(2)
                    continue
                if text[i] == "\n":
                    raise ParseError("unterminated string", start_line, start_col)
                chars.append(text[i])
                advance()
            if i >= n:
                raise ParseError("unterminated string", start_line, start_col)
            advance()
            tokens.append(_Token("string", "".join(chars), start_line, start_col))
            continue
        if c == "@":
            advance()
            word = []
            while i < n and _is_name_char(text[i]):
                word.append(text[i])
                advance()
            keyword = "".join(word)
            if keyword != "prefix":
                raise ParseError(f"unknown directive @{keyword}", start_line, start_col)
            tokens.append(_Token("prefix_kw", keyword, start_line, start_col))
            continue
        if c == "_" and i + 1 < n and text[i + 1] == ":":
            advance(2)
            label = []
            while i < n and _is_name_char(text[i]):
                label.append(text[i])
                advance()
            if not label:
                raise ParseError("blank node label expected after _:", start_line, start_col)
            tokens.append(_Token("blank", "".join(label), start_line, start_col))
            continue
        if c.isdigit() or (c == "-" and i + 1 < n and text[i + 1].isdigit()):
            chars = [c]
            advance()
            while i < n and text[i].isdigit():
                chars.append(text[i])
                advance()
            tokens.append(_Token("int", int("".join(chars)), start_line, start_col))
            continue
        if _is_name_char(c) or c == ":":
            name = []
            while i < n and _is_name_char(text[i]):
                name.append(text[i])
                advance()
            if i < n and text[i] == ":":
                advance()
                local = []
                while i < n and _is_name_char(text[i]):
                    local.append(text[i])
                    advance()
                tokens.append(_Token("pname", ("".join(name), "".join(local)),
                                     start_line, start_col))
                continue
            word = "".join(name)
            if word == "a":
                tokens.append(_Token("a", word, start_line, start_col))
                continue
            raise ParseError(f"unexpected word {word!r}", start_line, start_col)
        raise ParseError(f"unexpected character {c!r}", start_line, start_col)
    tokens.append(_Token("eof", None, line, col))
    return tokens


# ==========================================================================
# Parser
# ==========================================================================

class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0
        self.doc = Document()
        self.blank_counter = 0
        self.labels: dict[str, Blank] = {}

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, typ: str) -> _Token:
        tok = self.next()
        if tok.typ != typ:
            raise ParseError(f"expected {typ}, found {tok.typ}", tok.line, tok.col)
        return tok

    def fresh_blank(self) -> Blank:
        self.blank_counter += 1
        return Blank(f"b{self.blank_counter}")

    def labeled_blank(self, label: str) -> Blank:
        if label not in self.labels:
            self.labels[label] = Blank(f"n_{label}")
        return self.labels[label]

    def expand(self, tok: _Token) -> Iri:
        prefix, local = tok.value
        base = self.doc.prefixes.get(prefix)
        if base is None:
            shown = prefix + ":" if prefix else ":"
            raise UnknownPrefixError(f"unknown prefix {shown}", tok.line, tok.col)
        return Iri(base + local)

    def parse_document(self) -> Document:
        while self.peek().typ != "eof":
            if self.peek().typ == "prefix_kw":
                self.parse_prefix()
                continue
            self.parse_statement()
        return self.doc

    def parse_prefix(self):
        self.expect("prefix_kw")
        tok = self.next()
        if tok.typ != "pname" or tok.value[1] != "":
            raise ParseError("expected a prefix name ending in ':'", tok.line, tok.col)
        iri_tok = self.expect("iri")
        self.expect("dot")
        self.doc.prefixes[tok.value[0]] = iri_tok.value

    def parse_statement(self):
        tok = self.peek()
        subject = self.parse_term(as_subject=True, graph=None, sink=None)
        if self.peek().typ == "lbrace":
            if not isinstance(subject, Iri):
                raise ParseError("a named graph label must be an IRI", tok.line, tok.col)
            self.parse_graph_block(subject)
            return
        sink = self.doc.default_graph
        # The subject may have been a bracketed blank whose inner triples
        # were parsed before we knew the sink; re-parse is avoided by
        # parsing brackets directly into the default graph (see parse_term).
        self.parse_po_list(subject, None, sink)
        self.expect("dot")

    def parse_graph_block(self, label: Iri):
        self.expect("lbrace")
        sink = self.doc.named_graphs.setdefault(label, [])
        while self.peek().typ != "rbrace":
            subject = self.parse_term(as_subject=True, graph=label, sink=sink)
            self.parse_po_list(subject, label, sink)
            self.expect("dot")
        self.expect("rbrace")

    def parse_po_list(self, subject: Term, graph: Optional[Iri], sink: list):
        while True:
            tok = self.peek()
            if tok.typ in ("dot", "rbracket", "rbrace", "eof"):
                break
            predicate = self.parse_verb()
            obj = self.parse_term(as_subject=False, graph=graph, sink=sink)
            sink.append(Triple(subject, predicate, obj, graph))
            if self.peek().typ == "semi":
                self.next()
                continue
            break

    def parse_verb(self) -> Iri:
        tok = self.next()
        if tok.typ == "a":
            from .vocab import RDF
            return RDF.type
        if tok.typ == "iri":
            return Iri(tok.value)
        if tok.typ == "pname":
            return self.expand(tok)
        raise ParseError(f"expected a predicate, found {tok.typ}", tok.line, tok.col)

    def parse_term(self, as_subject: bool, graph: Optional[Iri], sink: Optional[list]) -> Term:
        tok = self.next()
        if tok.typ == "iri":
            return Iri(tok.value)
        if tok.typ == "pname":
            return self.expand(tok)
        if tok.typ == "blank":
            return self.labeled_blank(tok.value)
        if tok.typ == "lbracket":
            node = self.fresh_blank()
            inner_sink = sink if sink is not None else self.doc.default_graph
            if self.peek().typ != "rbracket":
                self.parse_po_list(node, graph, inner_sink)
            self.expect("rbracket")
            return node
        if not as_subject:
            if tok.typ == "int":
                return Literal(tok.value)
            if tok.typ == "string":
                return Literal(tok.value)
        raise ParseError(f"unexpected {tok.typ} in {'subject' if as_subject else 'object'} position",
                         tok.line, tok.col)


def parse(text: str) -> Document:
    """Parse a document; syntax errors carry line and column."""
    return _Parser(_tokenize(text)).parse_document()


def parse_file(path) -> Document:
    with open(path, "r", encoding="utf-8") as handle:
        return parse(handle.read())


# ==========================================================================
# Serializer
# ==========================================================================

def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


class _Writer:
    def __init__(self, prefixes: dict[str, str]):
        # Longest base first so the most specific prefix wins.
        self.prefixes = sorted(prefixes.items(), key=lambda kv: -len(kv[1]))

    def iri(self, t: Iri) -> str:
        from .vocab import RDF
        if t == RDF.type:
            return "a"
        for prefix, base in self.prefixes:
            if t.value.startswith(base):
                local = t.value[len(base):]
                if local and all(_is_name_char(c) for c in local):
                    return f"{prefix}:{local}"
        return f"<{t.value}>"

    def term(self, t: Term, inline: dict, indent: int) -> str:
        if isinstance(t, Iri):
            return self.iri(t)
        if isinstance(t, Literal):
            if isinstance(t.value, int):
                return str(t.value)
            return f'"{_escape(t.value)}"'
        if t in inline:
            body = self.po_block(inline.pop(t), inline, indent + 1)
            if not body:
                return "[]"
            return "[ " + body + " ]"
        return f"_:{t.id}"

    def po_block(self, pairs: list[tuple[Iri, Term]], inline: dict, indent: int) -> str:
        from .vocab import RDF
        grouped: dict[Iri, list[Term]] = {}
        for p, o in pairs:
            grouped.setdefault(p, []).append(o)
        preds = sorted(grouped, key=lambda p: (p != RDF.type, term_key(p)))
        chunks = []
        pad = "    " * (indent + 1)
        for p in preds:
            for o in sorted(grouped[p], key=term_key):
                chunks.append(f"{self.iri(p)} {self.term(o, inline, indent)}")
        return (" ;\n" + pad).join(chunks)

    def graph_text(self, triples: list[Triple], indent: int = 0) -> str:
        outgoing: dict[Term, list[tuple[Iri, Term]]] = {}
        incoming: dict[Term, int] = {}
        for t in triples:
            outgoing.setdefault(t.s, []).append((t.p, t.o))
            if isinstance(t.o, Blank):
                incoming[t.o] = incoming.get(t.o, 0) + 1
        cyclic = self._cyclic_blanks(outgoing)
        inline = {
            node: pairs for node, pairs in outgoing.items()
            if isinstance(node, Blank) and incoming.get(node, 0) == 1 and node not in cyclic
        }
        # Blanks that are pure leaves (no outgoing arcs) referenced once
        # also render inline as [].
        for t in triples:
            if (isinstance(t.o, Blank) and t.o not in outgoing
                    and incoming.get(t.o, 0) == 1):
                inline.setdefault(t.o, [])
        roots = [s for s in outgoing if not (isinstance(s, Blank) and s in inline)]
        roots.sort(key=term_key)
        pad = "    " * indent
        blocks = []
        for root in roots:
            if isinstance(root, Blank) and incoming.get(root, 0) == 0:
                head = "[ "
                body = self.po_block(outgoing[root], inline, indent)
                blocks.append(f"{pad}{head}{body} ] .")
            else:
                name = self.term(root, {}, indent) if isinstance(root, Blank) else self.iri(root)
                body = self.po_block(outgoing[root], inline, indent)
                blocks.append(f"{pad}{name} {body} .")
        return "\n\n".join(blocks)

    @staticmethod
    def _cyclic_blanks(outgoing: dict) -> set:
        cyclic: set = set()
        for start in outgoing:
            if not isinstance(start, Blank):
                continue
            stack = [(start, iter(outgoing.get(start, ())))]
            seen = {start}
            while stack:
                node, it = stack[-1]
                advanced = False
                for _, obj in it:
                    if isinstance(obj, Blank):
                        if obj == start:
                            cyclic.add(start)
                        if obj not in seen:
                            seen.add(obj)
                            stack.append((obj, iter(outgoing.get(obj, ()))))
                            advanced = True
                            break
                if not advanced:
                    stack.pop()
        return cyclic


def serialize(doc: Document) -> str:
    """Deterministic text form; parse(serialize(doc)) is isomorphic to doc."""
    writer = _Writer(doc.prefixes)
    parts = []
    for prefix in sorted(doc.prefixes):
        parts.append(f"@prefix {prefix}: <{doc.prefixes[prefix]}> .")
    if parts:
        parts.append("")
    if doc.default_graph:
        parts.append(writer.graph_text(doc.default_graph))
        parts.append("")
    for label in sorted(doc.named_graphs, key=term_key):
        triples = doc.named_graphs[label]
        parts.append(f"{writer.iri(label)} {{")
        body = writer.graph_text(triples, indent=1)
        if body:
            parts.append(body)
        parts.append("}")
        parts.append("")
    return "\n".join(parts).rstrip() + "\n"


# ==========================================================================
# Graph isomorphism (blank-node bijection search)
# ==========================================================================

def _signature(triples: list[Triple], blanks: set) -> dict:
    """Iteratively refined color per blank node, used to prune the search."""
    colors = {b: 0 for b in blanks}
    for _ in range(len(blanks) + 1):
        next_colors = {}
        for b in blanks:
            local = []
            for t in triples:
                s_part = colors.get(t.s, term_key(t.s) if t.s not in blanks else None)
                o_part = colors.get(t.o, term_key(t.o) if t.o not in blanks else None)
                if t.s == b:
                    local.append(("out", term_key(t.p), o_part if t.o != b else "self"))
                if t.o == b:
                    local.append(("in", term_key(t.p), s_part if t.s != b else "self"))
            next_colors[b] = hash(tuple(sorted(map(repr, local))))
        if len(set(next_colors.values())) == len(set(colors.values())):
            return next_colors
        colors = next_colors
    return colors


def _spo(t: Triple) -> tuple:
    return (t.s, t.p, t.o)


def _graph_isomorphic(a: list[Triple], b: list[Triple]) -> bool:
    blanks_a = {t.s for t in a if isinstance(t.s, Blank)} | {t.o for t in a if isinstance(t.o, Blank)}
    blanks_b = {t.s for t in b if isinstance(t.s, Blank)} | {t.o for t in b if isinstance(t.o, Blank)}
    if len(a) != len(b) or len(blanks_a) != len(blanks_b):
        return False
    ground_a = {(_spo(t)) for t in a if not ({t.s, t.o} & blanks_a)}
    ground_b = {(_spo(t)) for t in b if not ({t.s, t.o} & blanks_b)}
    if ground_a != ground_b:
        return False
    colors_a = _signature(a, blanks_a)
    colors_b = _signature(b, blanks_b)
    if sorted(colors_a.values()) != sorted(colors_b.values()):
        return False
    order = sorted(blanks_a, key=lambda n: (colors_a[n], n.id))
    set_b = {(_spo(t)) for t in b}
    triples_a = [t for t in a]

    def ok(mapping: dict) -> bool:
        for t in triples_a:
            s = mapping.get(t.s, t.s)
            o = mapping.get(t.o, t.o)
            if isinstance(t.s, Blank) and t.s not in mapping:
                continue
            if isinstance(t.o, Blank) and t.o not in mapping:
                continue
            if (s, t.p, o) not in set_b:
                return False
        return True

    def backtrack(idx: int, mapping: dict, used: set) -> bool:
        if idx == len(order):
            return ok(mapping)
        node = order[idx]
        for candidate in sorted(blanks_b, key=lambda n: n.id):
            if candidate in used or colors_b[candidate] != colors_a[node]:
                continue
            mapping[node] = candidate
            used.add(candidate)
            if ok(mapping) and backtrack(idx + 1, mapping, used):
                return True
            del mapping[node]
            used.discard(candidate)
        return False

    return backtrack(0, {}, set())


def isomorphic(a: Document, b: Document) -> bool:
    """Graph isomorphism per graph: equal up to a blank-node bijection."""
    if set(a.named_graphs) != set(b.named_graphs):
        return False
    if not _graph_isomorphic(list(a.default_graph), list(b.default_graph)):
        return False
    for label in a.named_graphs:
        if not _graph_isomorphic(list(a.named_graphs[label]), list(b.named_graphs[label])):
            return False
    return True
