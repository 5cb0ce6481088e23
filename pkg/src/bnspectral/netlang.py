"""Feed-forward Boolean network DSL: parsing, validation, and collapse.

Grammar, one definition per line::

    name = expr
    expr := or_expr
    or_expr := and_expr (OR and_expr)*
    and_expr := not_expr (AND not_expr)*
    not_expr := NOT not_expr | atom
    atom := '(' expr ')' | identifier

``#`` starts a comment.  Identifiers are any run of characters excluding
whitespace and ``()=#``, so dataset names like ``glcn_xt>0`` or ``leu-l_xt``
are single atoms.  The keywords NOT/AND/OR (case-insensitive) are reserved,
as are the constants ``1``/``TRUE`` and ``0``/``FALSE``.  Names never
appearing on a left-hand side are inputs; an optional ``@inputs`` header
pins their order.  Definitions may only reference inputs and previously
defined nodes (no feedback).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .boolfn import ARITY_CAP_DEFAULT, ArityCapError, BoolFn, relevant_variables

KEYWORDS = {"NOT", "AND", "OR"}
CONST_TRUE = {"1", "TRUE"}
CONST_FALSE = {"0", "FALSE"}


class NetParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {message}")


# Expression AST.  And/Or are n-ary with at least two children.

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Not:
    child: "Expr"


@dataclass(frozen=True)
class And:
    children: tuple["Expr", ...]


@dataclass(frozen=True)
class Or:
    children: tuple["Expr", ...]


@dataclass(frozen=True)
class Const:
    sign: int


Expr = Var | Not | And | Or | Const


def references(expr: Expr) -> tuple[str, ...]:
    """Names referenced by an expression, deduplicated in first-use order."""
    seen: dict[str, None] = {}

    def walk(e: Expr) -> None:
        if isinstance(e, Var):
            seen.setdefault(e.name)
        elif isinstance(e, Not):
            walk(e.child)
        elif isinstance(e, (And, Or)):
            for c in e.children:
                walk(c)

    walk(expr)
    return tuple(seen)


@dataclass(frozen=True)
class Network:
    """Feed-forward network: declared inputs plus ordered node definitions."""

    inputs: tuple[str, ...]
    defs: tuple[tuple[str, Expr], ...]

    @property
    def names(self) -> tuple[str, ...]:
        return self.inputs + tuple(n for n, _ in self.defs)


# ---------------------------------------------------------------------------
# Tokenizer and parser

_Token = tuple[str, str, int, int]  # kind, text, line, col


def _tokenize_line(text: str, lineno: int) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "#":
            break
        if ch.isspace():
            i += 1
            continue
        if ch in "()=":
            tokens.append((ch, ch, lineno, i + 1))
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace() and text[j] not in "()=#":
            j += 1
        tokens.append(("name", text[i:j], lineno, i + 1))
        i = j
    return tokens


class _ExprParser:
    def __init__(self, tokens: Sequence[_Token], lineno: int):
        self.tokens = list(tokens)
        self.pos = 0
        self.lineno = lineno

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            raise NetParseError("unexpected end of expression", self.lineno,
                                self.tokens[-1][3] if self.tokens else 1)
        self.pos += 1
        return tok

    def parse(self) -> Expr:
        expr = self.parse_or()
        tok = self.peek()
        if tok is not None:
            raise NetParseError(f"unexpected token {tok[1]!r}", tok[2], tok[3])
        return expr

    def parse_or(self) -> Expr:
        parts = [self.parse_and()]
        while self._at_keyword("OR"):
            self.next()
            parts.append(self.parse_and())
        if len(parts) == 1:
            return parts[0]
        # splice directly nested disjunctions so OR is flat n-ary
        flat: list[Expr] = []
        for p in parts:
            flat.extend(p.children if isinstance(p, Or) else [p])
        return Or(tuple(flat))

    def parse_and(self) -> Expr:
        parts = [self.parse_not()]
        while self._at_keyword("AND"):
            self.next()
            parts.append(self.parse_not())
        if len(parts) == 1:
            return parts[0]
        flat: list[Expr] = []
        for p in parts:
            flat.extend(p.children if isinstance(p, And) else [p])
        return And(tuple(flat))

    def parse_not(self) -> Expr:
        if self._at_keyword("NOT"):
            self.next()
            return Not(self.parse_not())
        return self.parse_atom()

    def parse_atom(self) -> Expr:
        tok = self.next()
        kind, text, line, col = tok
        if kind == "(":
            expr = self.parse_or()
            closing = self.peek()
            if closing is None or closing[0] != ")":
                raise NetParseError("missing closing parenthesis", line, col)
            self.next()
            return expr
        if kind == "name":
            upper = text.upper()
            if upper in KEYWORDS:
                raise NetParseError(f"keyword {text!r} cannot start an operand", line, col)
            if upper in CONST_TRUE:
                return Const(1)
            if upper in CONST_FALSE:
                return Const(-1)
            return Var(text)
        raise NetParseError(f"unexpected token {text!r}", line, col)

    def _at_keyword(self, kw: str) -> bool:
        tok = self.peek()
        return tok is not None and tok[0] == "name" and tok[1].upper() == kw


def parse_expression(text: str, lineno: int = 1) -> Expr:
    """Parse a single expression (used for inline CLI specs)."""
    tokens = _tokenize_line(text, lineno)
    if not tokens:
        raise NetParseError("empty expression", lineno, 1)
    return _ExprParser(tokens, lineno).parse()


def parse(text: str) -> Network:
    """Parse DSL source into a validated feed-forward network."""
    declared_inputs: list[str] = []
    raw_defs: list[tuple[str, Expr, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped == "@inputs" or stripped.startswith("@inputs ") or stripped.startswith("@inputs\t"):
            rest = stripped[len("@inputs"):]
            for tok in _tokenize_line(rest, lineno):
                if tok[0] != "name":
                    raise NetParseError("only names may follow @inputs", lineno, tok[3])
                if tok[1] in declared_inputs:
                    raise NetParseError(f"input {tok[1]!r} declared twice", lineno, tok[3])
                declared_inputs.append(tok[1])
            continue
        tokens = _tokenize_line(line, lineno)
        if len(tokens) < 2 or tokens[0][0] != "name" or tokens[1][0] != "=":
            raise NetParseError("expected 'name = expr'", lineno,
                                tokens[0][3] if tokens else 1)
        name = tokens[0][1]
        if name.upper() in KEYWORDS | CONST_TRUE | CONST_FALSE:
            raise NetParseError(f"{name!r} is reserved", lineno, tokens[0][3])
        expr = _ExprParser(tokens[2:], lineno).parse()
        raw_defs.append((name, expr, lineno))

    defined = {}
    for name, _, lineno in raw_defs:
        if name in defined:
            raise NetParseError(f"duplicate definition of {name!r}", lineno, 1)
        defined[name] = lineno
    for name in declared_inputs:
        if name in defined:
            raise NetParseError(f"{name!r} is both an input and a definition",
                                defined[name], 1)

    inputs: list[str] = list(declared_inputs)
    seen_defs: set[str] = set()
    for name, expr, lineno in raw_defs:
        for ref in references(expr):
            if ref in seen_defs or ref in inputs:
                continue
            if ref in defined:
                raise NetParseError(
                    f"{ref!r} used before its definition (cycle or forward reference)",
                    lineno, 1)
            if declared_inputs:
                raise NetParseError(f"undefined name {ref!r}", lineno, 1)
            inputs.append(ref)
        seen_defs.add(name)

    return Network(tuple(inputs), tuple((n, e) for n, e, _ in raw_defs))


def _render(expr: Expr, parent: str = "or") -> str:
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Const):
        return "1" if expr.sign == 1 else "0"
    if isinstance(expr, Not):
        return "NOT " + _render(expr.child, "not")
    if isinstance(expr, And):
        body = " AND ".join(_render(c, "and") for c in expr.children)
        return f"({body})" if parent == "not" else body
    body = " OR ".join(_render(c, "or") for c in expr.children)
    return f"({body})" if parent in ("and", "not") else body


def to_text(net: Network) -> str:
    """Render a network back to DSL source (inputs pinned via @inputs)."""
    lines = []
    if net.inputs:
        lines.append("@inputs " + " ".join(net.inputs))
    for name, expr in net.defs:
        lines.append(f"{name} = {_render(expr)}")
    return "\n".join(lines) + "\n"


def out_degree(net: Network, name: str) -> int:
    """Number of definitions referencing ``name`` (once per definition)."""
    if name not in net.names:
        raise KeyError(f"unknown node {name!r}")
    return sum(1 for _, expr in net.defs if name in references(expr))


# ---------------------------------------------------------------------------
# Localization and collapse

@dataclass(frozen=True)
class LocalNode:
    """A node as a truth table over its direct arguments."""

    name: str
    args: tuple[str, ...]
    fn: BoolFn


@dataclass(frozen=True)
class LocalNetwork:
    inputs: tuple[str, ...]
    nodes: tuple[LocalNode, ...]


@dataclass(frozen=True)
class CollapsedNode:
    """A node re-expressed over input-layer variables, all of them relevant."""

    name: str
    inputs: tuple[str, ...]
    fn: BoolFn


@dataclass(frozen=True)
class CollapsedNetwork:
    inputs: tuple[str, ...]
    nodes: tuple[CollapsedNode, ...]

    @property
    def constants(self) -> tuple[tuple[str, int], ...]:
        return tuple((n.name, 1 if n.fn.table & 1 else -1)
                     for n in self.nodes if n.fn.arity == 0)

    def out_degree(self, name: str) -> int:
        """Number of collapsed nodes whose relevant inputs include ``name``."""
        if name not in self.inputs and all(n.name != name for n in self.nodes):
            raise KeyError(f"unknown node {name!r}")
        return sum(1 for n in self.nodes if name in n.inputs)


def _eval_expr_bits(expr: Expr, columns: Mapping[str, np.ndarray], size: int) -> np.ndarray:
    """Evaluate over all assignments at once; columns hold 0/1 arrays."""
    if isinstance(expr, Var):
        return columns[expr.name]
    if isinstance(expr, Const):
        return np.full(size, 1 if expr.sign == 1 else 0, dtype=np.uint8)
    if isinstance(expr, Not):
        return 1 - _eval_expr_bits(expr.child, columns, size)
    parts = [_eval_expr_bits(c, columns, size) for c in expr.children]
    if isinstance(expr, And):
        return np.minimum.reduce(parts)
    return np.maximum.reduce(parts)


def localize(net: Network, cap: int | None = None) -> LocalNetwork:
    """Tabulate each definition over its direct arguments."""
    limit = ARITY_CAP_DEFAULT if cap is None else cap
    nodes = []
    for name, expr in net.defs:
        args = references(expr)
        if len(args) > limit:
            raise ArityCapError(len(args), limit, name)
        size = 1 << len(args)
        idx = np.arange(size, dtype=np.int64)
        columns = {a: ((idx >> j) & 1).astype(np.uint8) for j, a in enumerate(args)}
        bits = _eval_expr_bits(expr, columns, size)
        nodes.append(LocalNode(name, args, BoolFn.from_bit_array(bits, args)))
    return LocalNetwork(net.inputs, tuple(nodes))


def _prune_irrelevant(bits: np.ndarray, support: Sequence[str]) -> tuple[np.ndarray, tuple[str, ...]]:
    fn = BoolFn.from_bit_array(bits, support)
    rel = relevant_variables(fn)
    if rel == (1 << fn.arity) - 1:
        return bits, tuple(support)
    kept = [i for i in range(fn.arity) if (rel >> i) & 1]
    sub_idx = np.zeros(1 << len(kept), dtype=np.int64)
    compact = np.arange(1 << len(kept), dtype=np.int64)
    for j, i in enumerate(kept):
        sub_idx |= ((compact >> j) & 1) << i
    return bits[sub_idx], tuple(support[i] for i in kept)


def collapse_local(ln: LocalNetwork, cap: int | None = None) -> CollapsedNetwork:
    """Express every node over input-layer variables only.

    Proceeds in definition order, substituting memoized collapsed tables of
    earlier nodes, then pruning variables the node does not depend on.  The
    per-node table is built over the union of the substituted supports; if
    that union exceeds the cap the offending node is reported.
    """
    limit = ARITY_CAP_DEFAULT if cap is None else cap
    input_rank = {name: i for i, name in enumerate(ln.inputs)}
    memo: dict[str, tuple[tuple[str, ...], np.ndarray]] = {}
    out = []
    for node in ln.nodes:
        support_set: set[str] = set()
        for a in node.args:
            if a in memo:
                support_set.update(memo[a][0])
            elif a in input_rank:
                support_set.add(a)
            else:
                raise ValueError(f"node {node.name!r} references unknown name {a!r}")
        support = tuple(sorted(support_set, key=input_rank.__getitem__))
        if len(support) > limit:
            raise ArityCapError(len(support), limit, node.name)
        size = 1 << len(support)
        idx = np.arange(size, dtype=np.int64)
        pos = {a: j for j, a in enumerate(support)}
        arg_cols = []
        for a in node.args:
            if a in memo:
                sub_support, sub_bits = memo[a]
                sub_idx = np.zeros(size, dtype=np.int64)
                for j, s in enumerate(sub_support):
                    sub_idx |= ((idx >> pos[s]) & 1) << j
                arg_cols.append(sub_bits[sub_idx])
            else:
                arg_cols.append(((idx >> pos[a]) & 1).astype(np.uint8))
        node_idx = np.zeros(size, dtype=np.int64)
        for j, col in enumerate(arg_cols):
            node_idx |= col.astype(np.int64) << j
        bits = node.fn.bits[node_idx]
        bits, kept = _prune_irrelevant(bits, support)
        memo[node.name] = (kept, bits)
        out.append(CollapsedNode(node.name, kept, BoolFn.from_bit_array(bits, kept)))
    return CollapsedNetwork(ln.inputs, tuple(out))


def collapse(net: Network, cap: int | None = None) -> CollapsedNetwork:
    """Localize each definition, then substitute bottom-up."""
    return collapse_local(localize(net, cap), cap)


def effective_inputs(c: CollapsedNetwork) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Split declared inputs by membership in some node's relevant set."""
    used = set()
    for node in c.nodes:
        used.update(node.inputs)
    eff = tuple(name for name in c.inputs if name in used)
    non_eff = tuple(name for name in c.inputs if name not in used)
    return eff, non_eff


def evaluate_assignment(net: Network, assignment: Mapping[str, int]) -> dict[str, int]:
    """One synchronous forward pass: node states from input states."""
    values: dict[str, int] = {}
    for name in net.inputs:
        v = assignment[name]
        if v not in (-1, 1):
            raise ValueError("input values must be +1 or -1")
        values[name] = v

    def ev(expr: Expr) -> int:
        if isinstance(expr, Var):
            return values[expr.name]
        if isinstance(expr, Const):
            return expr.sign
        if isinstance(expr, Not):
            return -ev(expr.child)
        if isinstance(expr, And):
            return min(ev(c) for c in expr.children)
        return max(ev(c) for c in expr.children)

    for name, expr in net.defs:
        values[name] = ev(expr)
    return values


def node_tables(net: Network) -> dict[str, np.ndarray]:
    """Layer-by-layer outputs of every node over the full input space.

    Brute-force oracle for collapse soundness; cost 2^(number of inputs).
    """
    n = len(net.inputs)
    size = 1 << n
    idx = np.arange(size, dtype=np.int64)
    columns: dict[str, np.ndarray] = {
        name: ((idx >> i) & 1).astype(np.uint8) for i, name in enumerate(net.inputs)
    }
    out = {}
    for name, expr in net.defs:
        bits = _eval_expr_bits(expr, columns, size)
        columns[name] = bits
        out[name] = bits
    return out


def collapsed_to_json(c: CollapsedNetwork) -> dict:
    """JSON-ready dump: per-node relevant inputs and table hex, plus the
    constants and non-effective input lists."""
    eff, non_eff = effective_inputs(c)
    return {
        "inputs": list(c.inputs),
        "effective_inputs": list(eff),
        "non_effective_inputs": list(non_eff),
        "nodes": [
            {"name": n.name, "inputs": list(n.inputs), "table_hex": n.fn.to_hex()}
            for n in c.nodes
        ],
        "constants": [{"name": name, "value": sign} for name, sign in c.constants],
    }
