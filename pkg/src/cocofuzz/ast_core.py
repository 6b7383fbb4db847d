"""Tokenizing and statement-level parsing of single Java methods.

The parser is deliberately shallow: it recovers exactly the structure the
mutation operators need (token stream, statement boundaries and kinds,
brace-delimited blocks with their legal insertion points, declared local
variables) and nothing more. Full Java semantic analysis is a non-goal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

__all__ = [
    "ParseError",
    "Token",
    "StatementNode",
    "BlockScope",
    "LocalVariable",
    "SourceUnit",
    "tokenize",
    "parse",
    "list_blocks",
    "render",
    "token_count",
]

JAVA_KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while""".split()
)

# Primitive types whose values participate in plain arithmetic.  `char` is
# integral in Java but promoting it changes the expression type, so the
# numeric-obfuscation operators handle it separately (see mutators).
NUMERIC_PRIMITIVES = frozenset({"byte", "short", "int", "long", "float", "double"})
PRIMITIVE_TYPES = NUMERIC_PRIMITIVES | {"boolean", "char"}

_NUMBER_RE = re.compile(
    r"0[xX][0-9a-fA-F][0-9a-fA-F_]*[lL]?"
    r"|0[bB][01][01_]*[lL]?"
    r"|(?:\d[\d_]*\.[\d_]*(?:[eE][+-]?\d+)?"
    r"|\.\d[\d_]*(?:[eE][+-]?\d+)?"
    r"|\d[\d_]*(?:[eE][+-]?\d+)?)[fFdDlL]?"
)

_OPERATORS = (
    ">>>=",
    ">>>", "<<=", ">>=",
    "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "<<", ">>", "->", "::",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "&", "|", "^", "~", "?", ":",
)

_SEPARATORS = ("...", "(", ")", "{", "}", "[", "]", ";", ",", ".", "@")

ASSIGNMENT_OPS = frozenset(
    {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="}
)


class ParseError(ValueError):
    """Raised when input is not a parseable Java method."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str  # keyword | ident | number | string | char | op | sep
    lexeme: str
    start: int
    end: int


@dataclass(frozen=True)
class Declarator:
    """One `name [= init]` element of a local variable declaration."""

    name_index: int
    init_range: tuple[int, int] | None  # token index range of the initializer


@dataclass(frozen=True)
class StatementNode:
    kind: str  # declaration | assignment | return | if | for | while | switch | other
    span: tuple[int, int]
    reads: frozenset[str]
    writes: frozenset[str]
    calls_method: bool
    token_range: tuple[int, int]
    in_block: bool  # direct child of a brace-delimited statement list
    declarators: tuple[Declarator, ...] = ()
    assign_index: int | None = None  # token index of the assignment operator


@dataclass(frozen=True)
class BlockScope:
    insertion_points: tuple[int, ...]
    depth: int


@dataclass(frozen=True)
class LocalVariable:
    name: str
    declared_span: tuple[int, int]
    usage_spans: tuple[tuple[int, int], ...]
    numeric: bool
    type_name: str
    scope_end: int


@dataclass(frozen=True)
class SourceUnit:
    text: str
    tokens: tuple[Token, ...]
    statements: tuple[StatementNode, ...]
    blocks: tuple[BlockScope, ...]
    local_variables: tuple[LocalVariable, ...]
    parameter_types: dict[str, str] = field(default_factory=dict)

    def identifiers(self) -> set[str]:
        """Every identifier lexeme appearing in the unit."""
        return {t.lexeme for t in self.tokens if t.kind == "ident"}


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    column = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, column


def tokenize(text: str, strict: bool = True) -> list[Token]:
    """Lex Java source into tokens, dropping comments and whitespace.

    With strict=False the lexer never raises: unterminated literals run to
    end of input and unexpected characters become single-char "op" tokens.
    """
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if text.startswith("//", i):
            j = text.find("\n", i)
            i = n if j < 0 else j + 1
            continue
        if text.startswith("/*", i):
            j = text.find("*/", i + 2)
            if j < 0:
                if strict:
                    raise ParseError("unterminated block comment", *_line_col(text, i))
                i = n
            else:
                i = j + 2
            continue
        if c in "\"'":
            j = i + 1
            while j < n and text[j] != c:
                j += 2 if text[j] == "\\" else 1
            if j >= n:
                if strict:
                    what = "string" if c == '"' else "char"
                    raise ParseError(f"unterminated {what} literal", *_line_col(text, i))
                j = n - 1
            kind = "string" if c == '"' else "char"
            tokens.append(Token(kind, text[i : j + 1], i, j + 1))
            i = j + 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            m = _NUMBER_RE.match(text, i)
            if m:
                tokens.append(Token("number", m.group(), i, m.end()))
                i = m.end()
                continue
        if c.isalpha() or c in "_$":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] in "_$"):
                j += 1
            lexeme = text[i:j]
            kind = "keyword" if lexeme in JAVA_KEYWORDS else "ident"
            tokens.append(Token(kind, lexeme, i, j))
            i = j
            continue
        for sep in _SEPARATORS:
            if text.startswith(sep, i):
                tokens.append(Token("sep", sep, i, i + len(sep)))
                i += len(sep)
                break
        else:
            for op in _OPERATORS:
                if text.startswith(op, i):
                    tokens.append(Token("op", op, i, i + len(op)))
                    i += len(op)
                    break
            else:
                if strict:
                    raise ParseError(f"unexpected character {c!r}", *_line_col(text, i))
                tokens.append(Token("op", c, i, i + 1))
                i += 1
    return tokens


_GENERIC_OK = frozenset({",", ".", "?", "extends", "super", "&", "[", "]"})


def _skip_generic_args(toks, i: int) -> int | None:
    """From toks[i] == '<', return the index just past the matching '>'.

    Returns None when the run cannot be a type-argument list (then '<' was a
    comparison).  '>>' and '>>>' close two and three levels.
    """
    depth = 0
    while i < len(toks):
        lex = toks[i].lexeme
        if lex == "<":
            depth += 1
        elif lex in (">", ">>", ">>>"):
            depth -= len(lex)
            if depth <= 0:
                return i + 1 if depth == 0 else None
        elif toks[i].kind in ("ident", "keyword"):
            if toks[i].kind == "keyword" and lex not in _GENERIC_OK:
                return None
        elif lex not in _GENERIC_OK:
            return None
        i += 1
    return None


def _match_type(toks, i: int) -> int | None:
    """Return the index just past a type written at toks[i], else None."""
    n = len(toks)
    if i >= n:
        return None
    t = toks[i]
    if t.kind == "keyword":
        if t.lexeme not in PRIMITIVE_TYPES:
            return None
        i += 1
    elif t.kind == "ident":
        i += 1
        while i + 1 < n and toks[i].lexeme == "." and toks[i + 1].kind == "ident":
            i += 2
        if i < n and toks[i].lexeme == "<":
            nxt = _skip_generic_args(toks, i)
            if nxt is None:
                return None
            i = nxt
    else:
        return None
    while i + 1 < n and toks[i].lexeme == "[" and toks[i + 1].lexeme == "]":
        i += 2
    return i


class _Parser:
    def __init__(self, text: str, tokens: list[Token]):
        self.text = text
        self.toks = tokens
        self.statements: list[StatementNode] = []
        # (start_offset, close_offset, insertion_points, depth)
        self.blocks: list[tuple[int, int, tuple[int, ...], int]] = []
        self.locals: list[dict] = []
        self.parameter_types: dict[str, str] = {}

    def _fail(self, message: str, tok_index: int) -> ParseError:
        pos = self.toks[tok_index].start if tok_index < len(self.toks) else len(self.text)
        return ParseError(message, *_line_col(self.text, pos))

    # ---- header ---------------------------------------------------------

    def parse_unit(self) -> None:
        body_open = self._find_body_open()
        self._parse_parameters(body_open)
        close = self._parse_block(body_open, depth=0)
        if close != len(self.toks) - 1:
            raise self._fail("trailing tokens after method body", close + 1)

    def _find_body_open(self) -> int:
        paren = 0
        seen_parens = False
        for i, t in enumerate(self.toks):
            if t.lexeme == "(":
                paren += 1
                seen_parens = True
            elif t.lexeme == ")":
                paren -= 1
                if paren < 0:
                    raise self._fail("unbalanced ')'", i)
            elif t.lexeme == "{" and paren == 0:
                if not seen_parens or i < 2:
                    raise self._fail("input does not look like a method", i)
                return i
        raise ParseError("no method body found", *_line_col(self.text, len(self.text)))

    def _parse_parameters(self, body_open: int) -> None:
        # The parameter list is the parenthesized group closing last before the
        # body (annotations may contribute earlier groups).
        close = None
        for i in range(body_open - 1, -1, -1):
            if self.toks[i].lexeme == ")":
                close = i
                break
        if close is None:
            raise self._fail("method has no parameter list", body_open)
        depth = 0
        open_idx = None
        for i in range(close, -1, -1):
            if self.toks[i].lexeme == ")":
                depth += 1
            elif self.toks[i].lexeme == "(":
                depth -= 1
                if depth == 0:
                    open_idx = i
                    break
        if open_idx is None:
            raise self._fail("unbalanced parameter list", close)
        seg: list[Token] = []
        inner = 0
        for t in self.toks[open_idx + 1 : close]:
            if t.lexeme in ("(", "[", "<"):
                inner += 1
            elif t.lexeme in (")", "]"):
                inner -= 1
            elif t.lexeme in (">", ">>", ">>>"):
                inner -= len(t.lexeme)
            if t.lexeme == "," and inner == 0:
                self._record_parameter(seg)
                seg = []
            else:
                seg.append(t)
        self._record_parameter(seg)

    def _record_parameter(self, seg: list[Token]) -> None:
        seg = [t for t in seg if t.lexeme not in ("final", "@")]
        if len(seg) < 2 or seg[-1].kind != "ident":
            return
        name = seg[-1].lexeme
        base = seg[0].lexeme
        is_array = any(t.lexeme in ("[", "...") for t in seg)
        self.parameter_types[name] = base + "[]" if is_array else base

    # ---- statements -------------------------------------------------------

    def _parse_block(self, open_idx: int, depth: int) -> int:
        """Parse `{ ... }` starting at open_idx; return index of the '}'."""
        points = [self.toks[open_idx].end]
        i = open_idx + 1
        while True:
            if i >= len(self.toks):
                raise self._fail("missing '}'", open_idx)
            if self.toks[i].lexeme == "}":
                break
            i = self._parse_statement(i, depth, in_block=True)
            points.append(self.toks[i - 1].end)
        self.blocks.append(
            (self.toks[open_idx].start, self.toks[i].start, tuple(points), depth)
        )
        return i

    def _parse_statement(self, i: int, depth: int, in_block: bool) -> int:
        toks = self.toks
        t = toks[i]
        if t.lexeme == "{":
            close = self._parse_block(i, depth + 1)
            if in_block:  # free-standing block; compound bodies are not statements
                self._add_compound("other", i, close, header_hi=i + 1, in_block=in_block)
            return close + 1
        if t.lexeme == "if":
            after_cond = self._skip_parens(i + 1)
            end = self._parse_statement(after_cond, depth, in_block=False)
            if end < len(toks) and toks[end].lexeme == "else":
                end = self._parse_statement(end + 1, depth, in_block=False)
            self._add_compound("if", i, end - 1, header_hi=after_cond, in_block=in_block)
            return end
        if t.lexeme in ("while", "switch"):
            after_cond = self._skip_parens(i + 1)
            if t.lexeme == "switch":
                if after_cond >= len(toks) or toks[after_cond].lexeme != "{":
                    raise self._fail("switch body must be a block", after_cond)
                end = self._parse_switch_body(after_cond, depth) + 1
            else:
                end = self._parse_statement(after_cond, depth, in_block=False)
            self._add_compound(t.lexeme, i, end - 1, header_hi=after_cond, in_block=in_block)
            return end
        if t.lexeme == "for":
            after_header = self._skip_parens(i + 1)
            self._scan_for_init(i + 1, after_header)
            end = self._parse_statement(after_header, depth, in_block=False)
            self._add_compound("for", i, end - 1, header_hi=after_header, in_block=in_block)
            for rec in self.locals:  # loop variables live to the statement end
                if rec["scope_end"] == ("for", i + 1):
                    rec["scope_end"] = toks[end - 1].end
            return end
        if t.lexeme == "do":
            body_end = self._parse_statement(i + 1, depth, in_block=False)
            if body_end >= len(toks) or toks[body_end].lexeme != "while":
                raise self._fail("do without while", body_end)
            after_cond = self._skip_parens(body_end + 1)
            if after_cond >= len(toks) or toks[after_cond].lexeme != ";":
                raise self._fail("missing ';' after do-while", after_cond)
            self._add_compound("other", i, after_cond, header_hi=i + 1, in_block=in_block)
            return after_cond + 1
        if t.lexeme == "try":
            end = self._parse_try(i, depth)
            self._add_compound("other", i, end - 1, header_hi=i + 1, in_block=in_block)
            return end
        if t.lexeme == "synchronized":
            after = self._skip_parens(i + 1)
            if after >= len(toks) or toks[after].lexeme != "{":
                raise self._fail("synchronized body must be a block", after)
            close = self._parse_block(after, depth + 1)
            self._add_compound("other", i, close, header_hi=after, in_block=in_block)
            return close + 1
        if t.lexeme == ";":
            self._add_simple(i, i, in_block)
            return i + 1
        return self._parse_simple(i, in_block)

    def _parse_switch_body(self, open_idx: int, depth: int) -> int:
        """Parse a switch block; each case group is its own insertion scope."""
        toks = self.toks
        i = open_idx + 1
        groups: list[tuple[int, list[int]]] = []
        current: list[int] | None = None
        current_start = 0
        while True:
            if i >= len(toks):
                raise self._fail("missing '}' in switch", open_idx)
            lex = toks[i].lexeme
            if lex == "}":
                if current is not None:
                    groups.append((current_start, current))
                close_off = toks[i].start
                for start, points in groups:
                    self.blocks.append((start, close_off, tuple(points), depth + 1))
                return i
            if lex in ("case", "default"):
                if current is not None:
                    groups.append((current_start, current))
                j = i + 1
                label_depth = 0
                while j < len(toks):
                    jl = toks[j].lexeme
                    if jl in ("(", "["):
                        label_depth += 1
                    elif jl in (")", "]"):
                        label_depth -= 1
                    elif jl == ":" and label_depth == 0:
                        break
                    j += 1
                if j >= len(toks):
                    raise self._fail("case label without ':'", i)
                current = [toks[j].end]
                current_start = toks[i].start
                i = j + 1
                continue
            if current is None:
                raise self._fail("statement before first case label", i)
            i = self._parse_statement(i, depth + 1, in_block=True)
            current.append(toks[i - 1].end)

    def _parse_try(self, i: int, depth: int) -> int:
        toks = self.toks
        j = i + 1
        if j < len(toks) and toks[j].lexeme == "(":  # try-with-resources
            j = self._skip_parens(j)
        if j >= len(toks) or toks[j].lexeme != "{":
            raise self._fail("try body must be a block", j)
        j = self._parse_block(j, depth + 1) + 1
        while j < len(toks) and toks[j].lexeme == "catch":
            j = self._skip_parens(j + 1)
            if j >= len(toks) or toks[j].lexeme != "{":
                raise self._fail("catch body must be a block", j)
            j = self._parse_block(j, depth + 1) + 1
        if j < len(toks) and toks[j].lexeme == "finally":
            if j + 1 >= len(toks) or toks[j + 1].lexeme != "{":
                raise self._fail("finally body must be a block", j)
            j = self._parse_block(j + 1, depth + 1) + 1
        return j

    def _skip_parens(self, i: int) -> int:
        toks = self.toks
        if i >= len(toks) or toks[i].lexeme != "(":
            raise self._fail("expected '('", i)
        depth = 0
        while i < len(toks):
            if toks[i].lexeme == "(":
                depth += 1
            elif toks[i].lexeme == ")":
                depth -= 1
                if depth == 0:
                    return i + 1
            i += 1
        raise self._fail("unbalanced '('", i - 1)

    def _parse_simple(self, i: int, in_block: bool) -> int:
        """Consume a semicolon-terminated statement starting at i."""
        toks = self.toks
        paren = bracket = brace = 0
        j = i
        while j < len(toks):
            lex = toks[j].lexeme
            if lex == "(":
                paren += 1
            elif lex == ")":
                paren -= 1
            elif lex == "[":
                bracket += 1
            elif lex == "]":
                bracket -= 1
            elif lex == "{":
                brace += 1
            elif lex == "}":
                if brace == 0:
                    raise self._fail("missing ';'", j)
                brace -= 1
            elif lex == ";" and paren == 0 and bracket == 0 and brace == 0:
                self._add_simple(i, j, in_block)
                return j + 1
            j += 1
        raise self._fail("unterminated statement", i)

    # ---- node construction -------------------------------------------------

    def _idents_in(self, lo: int, hi: int) -> set[str]:
        out = set()
        for k in range(lo, hi):
            t = self.toks[k]
            if t.kind == "ident" and not (k > 0 and self.toks[k - 1].lexeme == "."):
                out.add(t.lexeme)
        return out

    def _calls_in(self, lo: int, hi: int) -> bool:
        for k in range(lo + 1, hi):
            if self.toks[k].lexeme == "(":
                prev = self.toks[k - 1]
                if prev.kind == "ident" or prev.lexeme in ("this", "super"):
                    return True
        return False

    def _add_compound(self, kind, lo, hi_inclusive, header_hi, in_block) -> None:
        self.statements.append(
            StatementNode(
                kind=kind,
                span=(self.toks[lo].start, self.toks[hi_inclusive].end),
                reads=frozenset(self._idents_in(lo, header_hi)),
                writes=frozenset(),
                calls_method=self._calls_in(lo, hi_inclusive + 1),
                token_range=(lo, hi_inclusive + 1),
                in_block=in_block,
            )
        )

    def _add_simple(self, lo: int, semi: int, in_block: bool) -> None:
        toks = self.toks
        hi = semi + 1
        decl = self._match_declaration(lo, semi)
        if decl is not None:
            type_name, declarators = decl
            writes = {toks[d.name_index].lexeme for d in declarators}
            reads: set[str] = set()
            for d in declarators:
                if d.init_range:
                    reads |= self._idents_in(*d.init_range)
            self.statements.append(
                StatementNode(
                    kind="declaration",
                    span=(toks[lo].start, toks[semi].end),
                    reads=frozenset(reads - writes),
                    writes=frozenset(writes),
                    calls_method=self._calls_in(lo, hi),
                    token_range=(lo, hi),
                    in_block=in_block,
                    declarators=tuple(declarators),
                )
            )
            for d in declarators:
                name_tok = toks[d.name_index]
                self.locals.append(
                    {
                        "name": name_tok.lexeme,
                        "declared_span": (name_tok.start, name_tok.end),
                        "numeric": type_name in NUMERIC_PRIMITIVES,
                        "type_name": type_name,
                        "scope_end": None,  # patched to enclosing block close
                    }
                )
            return
        assign_idx = self._find_assignment(lo, semi)
        if assign_idx is not None:
            lhs_root = next(
                (toks[k].lexeme for k in range(lo, assign_idx) if toks[k].kind == "ident"),
                None,
            )
            writes = frozenset({lhs_root}) if lhs_root else frozenset()
            self.statements.append(
                StatementNode(
                    kind="assignment",
                    span=(toks[lo].start, toks[semi].end),
                    reads=frozenset(self._idents_in(lo, hi) - set(writes)),
                    writes=writes,
                    calls_method=self._calls_in(lo, hi),
                    token_range=(lo, hi),
                    in_block=in_block,
                    assign_index=assign_idx,
                )
            )
            return
        kind = "return" if toks[lo].lexeme == "return" else "other"
        writes = set()
        for k in range(lo, semi):
            if toks[k].lexeme in ("++", "--"):
                for adj in (k - 1, k + 1):
                    if lo <= adj <= semi and toks[adj].kind == "ident":
                        writes.add(toks[adj].lexeme)
        self.statements.append(
            StatementNode(
                kind=kind,
                span=(toks[lo].start, toks[semi].end),
                reads=frozenset(self._idents_in(lo, hi) - writes),
                writes=frozenset(writes),
                calls_method=self._calls_in(lo, hi),
                token_range=(lo, hi),
                in_block=in_block,
            )
        )

    def _match_declaration(self, lo: int, semi: int) -> tuple[str, list[Declarator]] | None:
        toks = self.toks
        i = lo
        while i < semi and toks[i].lexeme == "final":
            i += 1
        if i >= semi:
            return None
        type_start = i
        after_type = _match_type(toks, i)
        if after_type is None or after_type >= semi or toks[after_type].kind != "ident":
            return None
        base = toks[type_start].lexeme
        has_array = any(toks[k].lexeme == "[" for k in range(type_start, after_type))
        type_name = base + "[]" if has_array else base
        declarators: list[Declarator] = []
        i = after_type
        while True:
            if i >= semi or toks[i].kind != "ident":
                return None
            name_index = i
            i += 1
            while i + 1 < semi and toks[i].lexeme == "[" and toks[i + 1].lexeme == "]":
                type_name = base + "[]"
                i += 2
            init_range = None
            if i < semi and toks[i].lexeme == "=":
                init_lo = i + 1
                i = init_lo
                depth = 0
                while i < semi:
                    lex = toks[i].lexeme
                    if lex in ("(", "[", "{"):
                        depth += 1
                    elif lex in (")", "]", "}"):
                        depth -= 1
                    elif lex == "," and depth == 0:
                        break
                    i += 1
                if init_lo == i:
                    return None
                init_range = (init_lo, i)
            declarators.append(Declarator(name_index, init_range))
            if i >= semi:
                break
            if toks[i].lexeme == ",":
                i += 1
                continue
            return None
        return type_name, declarators

    def _find_assignment(self, lo: int, semi: int) -> int | None:
        depth = 0
        for k in range(lo, semi):
            lex = self.toks[k].lexeme
            if lex in ("(", "[", "{"):
                depth += 1
            elif lex in (")", "]", "}"):
                depth -= 1
            elif depth == 0 and lex in ASSIGNMENT_OPS and self.toks[k].kind == "op":
                return k
        return None

    def _scan_for_init(self, paren_idx: int, after_header: int) -> None:
        """Record loop variables declared in a `for` header."""
        toks = self.toks
        lo = paren_idx + 1
        hi = after_header - 1  # index of ')'
        if lo >= hi:
            return
        semi = None
        colon = None
        depth = 0
        for k in range(lo, hi):
            lex = toks[k].lexeme
            if lex in ("(", "["):
                depth += 1
            elif lex in (")", "]"):
                depth -= 1
            elif lex == "?":
                depth += 1  # ternary pairs with its ':'
            elif lex == ":" and depth > 0:
                depth -= 1
            elif lex == ":" and depth == 0 and colon is None:
                colon = k
            elif lex == ";" and depth == 0 and semi is None:
                semi = k
        after_type = _match_type(toks, lo)
        if after_type is None:
            return
        limit = semi if semi is not None else colon
        if limit is None or after_type >= limit or toks[after_type].kind != "ident":
            return
        base = toks[lo].lexeme
        is_numeric = base in NUMERIC_PRIMITIVES and after_type == lo + 1
        i = after_type
        while i < limit:
            if toks[i].kind == "ident":
                name_tok = toks[i]
                self.locals.append(
                    {
                        "name": name_tok.lexeme,
                        "declared_span": (name_tok.start, name_tok.end),
                        "numeric": is_numeric,
                        "type_name": base,
                        "scope_end": ("for", paren_idx),  # patched by caller
                    }
                )
            depth = 0
            while i < limit:
                lex = toks[i].lexeme
                if lex in ("(", "[", "{"):
                    depth += 1
                elif lex in (")", "]", "}"):
                    depth -= 1
                elif lex == "," and depth == 0:
                    break
                i += 1
            i += 1

    # ---- finalization -------------------------------------------------------

    def finalize(self) -> SourceUnit:
        self.statements.sort(key=lambda s: (s.span[0], -s.span[1]))
        self.blocks.sort(key=lambda b: b[0])
        block_ranges = [(s, e) for s, e, _, _ in self.blocks]

        for rec in self.locals:
            if not isinstance(rec["scope_end"], int):
                decl_start = rec["declared_span"][0]
                enclosing = [e for s, e in block_ranges if s < decl_start <= e]
                rec["scope_end"] = min(enclosing, default=len(self.text))

        locals_out = []
        for rec in self.locals:
            decl_span = tuple(rec["declared_span"])
            usages = []
            for k, t in enumerate(self.toks):
                if (
                    t.kind == "ident"
                    and t.lexeme == rec["name"]
                    and decl_span[1] <= t.start < rec["scope_end"]
                    and not (k > 0 and self.toks[k - 1].lexeme == ".")
                ):
                    usages.append((t.start, t.end))
            locals_out.append(
                LocalVariable(
                    name=rec["name"],
                    declared_span=decl_span,
                    usage_spans=tuple(usages),
                    numeric=rec["numeric"],
                    type_name=rec["type_name"],
                    scope_end=rec["scope_end"],
                )
            )
        locals_out.sort(key=lambda v: v.declared_span[0])
        return SourceUnit(
            text=self.text,
            tokens=tuple(self.toks),
            statements=tuple(self.statements),
            blocks=tuple(BlockScope(p, d) for _, _, p, d in self.blocks),
            local_variables=tuple(locals_out),
            parameter_types=self.parameter_types,
        )


def parse(text: str) -> SourceUnit:
    """Parse one Java method into a SourceUnit.

    Raises ParseError (with line/column) when the input is not a single
    syntactically plausible method.
    """
    tokens = tokenize(text, strict=True)
    if not tokens:
        raise ParseError("empty input")
    parser = _Parser(text, tokens)
    parser.parse_unit()
    return parser.finalize()


def list_blocks(unit: SourceUnit) -> list[BlockScope]:
    """All brace-delimited statement lists of the unit, ordered by offset."""
    return list(unit.blocks)


def render(unit: SourceUnit) -> str:
    """Emit the unit's source text (units carry their exact text)."""
    return unit.text


def token_count(unit: SourceUnit) -> int:
    """Number of lexical tokens, comments and whitespace excluded."""
    return len(unit.tokens)
