"""One-variable intuitionistic formulas: trees, shared-subterm DAGs, text I/O.

The only atom is ``a``; ``~x`` and ``top`` are read as ``x -> bot`` and
``bot -> bot`` and never appear as nodes.  All traversals use explicit stacks
so arbitrarily deep inputs are fine.
"""

from __future__ import annotations

import graphlib
import random
import re
from dataclasses import dataclass
from typing import Callable, Iterator, TypeVar

from .rnindex import RNIndex

DEFAULT_RANK_CAP = 32

T = TypeVar("T")


class FormulaSyntaxError(SyntaxError):
    """Malformed formula text; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownVariable(FormulaSyntaxError):
    pass


class SizeLimitExceeded(ValueError):
    pass


class DagError(ValueError):
    pass


class Formula:
    """Base class of the immutable formula nodes."""

    __slots__ = ("left", "right", "_hash", "_length")
    tag = ""

    def __init__(self, left: Formula | None = None, right: Formula | None = None):
        sup = super()
        sup.__setattr__("left", left)
        sup.__setattr__("right", right)
        if left is None:
            sup.__setattr__("_hash", hash((self.tag,)))
            sup.__setattr__("_length", 1)
        else:
            sup.__setattr__("_hash", hash((self.tag, left._hash, right._hash)))
            sup.__setattr__("_length", 1 + left._length + right._length)

    def __setattr__(self, name, value):
        raise AttributeError("formulas are immutable")

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Formula):
            return NotImplemented
        stack = [(self, other)]
        seen = set()
        while stack:
            x, y = stack.pop()
            if x is y:
                continue
            if type(x) is not type(y) or x._hash != y._hash or x._length != y._length:
                return False
            if x.left is None:
                continue
            key = (id(x), id(y))
            if key in seen:
                continue
            seen.add(key)
            stack.append((x.right, y.right))
            stack.append((x.left, y.left))
        return True

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def __repr__(self) -> str:
        def show(node, l, r):
            if node.left is None:
                return f"{node.tag}()"
            return f"{node.tag}({l}, {r})"

        return fold(self, show)

    def __str__(self) -> str:
        return render(self)


class Var(Formula):
    __slots__ = ()
    tag = "Var"
    __match_args__ = ()

    def __init__(self):
        super().__init__()


class Bot(Formula):
    __slots__ = ()
    tag = "Bot"
    __match_args__ = ()

    def __init__(self):
        super().__init__()


class And(Formula):
    __slots__ = ()
    tag = "And"
    __match_args__ = ("left", "right")


class Or(Formula):
    __slots__ = ()
    tag = "Or"
    __match_args__ = ("left", "right")


class Impl(Formula):
    __slots__ = ()
    tag = "Impl"
    __match_args__ = ("left", "right")


A = Var()
BOTTOM = Bot()
TOP_FORMULA = Impl(BOTTOM, BOTTOM)


def neg(f: Formula) -> Formula:
    return Impl(f, BOTTOM)


def fold(f: Formula, fn: Callable[[Formula, T | None, T | None], T]) -> T:
    """Bottom-up evaluation of ``fn(node, left_value, right_value)``.

    Each distinct node object is evaluated once, so shared subtrees cost
    nothing extra.
    """
    memo: dict[int, T] = {}
    stack = [f]
    while stack:
        node = stack[-1]
        if id(node) in memo:
            stack.pop()
            continue
        if node.left is None:
            memo[id(node)] = fn(node, None, None)
            stack.pop()
            continue
        l, r = node.left, node.right
        pending = False
        if id(r) not in memo:
            stack.append(r)
            pending = True
        if id(l) not in memo:
            stack.append(l)
            pending = True
        if not pending:
            memo[id(node)] = fn(node, memo[id(l)], memo[id(r)])
            stack.pop()
    return memo[id(f)]


def length(f: Formula) -> int:
    """Number of occurrences of ``a``, ``bot`` and connectives."""
    return f._length


def subformulas(f: Formula) -> Iterator[Formula]:
    """Distinct node objects of ``f`` in post-order."""
    seen = set()
    order: list[Formula] = []

    def visit(node, l, r):
        if id(node) not in seen:
            seen.add(id(node))
            order.append(node)

    fold(f, visit)
    return iter(order)


# --- text ------------------------------------------------------------------

_TOKEN_RE = re.compile(r"(->)|([|&~()])|([A-Za-z_][A-Za-z0-9_]*)|(\S)")

# binding power; "~" binds tightest, "->" loosest and to the right
_PREC = {"->": 0, "|": 1, "&": 2, "~": 3}
_BINARY = {"->": Impl, "|": Or, "&": And}


def _tokens(text: str) -> Iterator[tuple[str, int]]:
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            return
        m = _TOKEN_RE.match(text, pos)
        start = pos
        if m.group(4) is not None:
            raise FormulaSyntaxError(f"unexpected character {m.group(4)!r}", start)
        tok = m.group(m.lastindex)
        if m.group(3) is not None and tok not in ("a", "bot", "top"):
            raise UnknownVariable(f"unknown identifier {tok!r} (only 'a' is allowed)", start)
        yield tok, start
        pos = m.end()


def parse(text: str) -> Formula:
    """Parse the ASCII grammar (precedence ``~ > & > | > ->``, ``->`` right-assoc)."""
    operands: list[Formula] = []
    ops: list[tuple[str, int]] = []
    expect_operand = True

    def reduce_top():
        op, pos = ops.pop()
        if op == "~":
            operands.append(neg(operands.pop()))
        else:
            r = operands.pop()
            l = operands.pop()
            operands.append(_BINARY[op](l, r))

    last = 0
    for tok, pos in _tokens(text):
        last = pos + len(tok)
        if expect_operand:
            if tok == "~" or tok == "(":
                ops.append((tok, pos))
            elif tok == "a":
                operands.append(A)
                expect_operand = False
            elif tok == "bot":
                operands.append(BOTTOM)
                expect_operand = False
            elif tok == "top":
                operands.append(TOP_FORMULA)
                expect_operand = False
            else:
                raise FormulaSyntaxError(f"expected a formula, found {tok!r}", pos)
        else:
            if tok in _BINARY:
                prec = _PREC[tok]
                while ops and ops[-1][0] != "(":
                    top = _PREC[ops[-1][0]]
                    if top > prec or (top == prec and tok != "->"):
                        reduce_top()
                    else:
                        break
                ops.append((tok, pos))
                expect_operand = True
            elif tok == ")":
                while ops and ops[-1][0] != "(":
                    reduce_top()
                if not ops:
                    raise FormulaSyntaxError("unmatched ')'", pos)
                ops.pop()
            else:
                raise FormulaSyntaxError(f"expected an operator, found {tok!r}", pos)
    if expect_operand:
        raise FormulaSyntaxError("unexpected end of input", last if text.strip() else 0)
    while ops:
        if ops[-1][0] == "(":
            raise FormulaSyntaxError("unclosed '('", ops[-1][1])
        reduce_top()
    return operands[0]


_RENDER_PREC = {"Impl": 0, "Or": 1, "And": 2}
_RENDER_OP = {"Impl": "->", "Or": "|", "And": "&"}


def render(f: Formula) -> str:
    """Inverse of :func:`parse` with minimal parentheses; negation prints as ``x -> bot``."""

    def show(node, l, r):
        if node.left is None:
            return ("a" if isinstance(node, Var) else "bot", 9)
        prec = _RENDER_PREC[node.tag]
        ls, lp = l
        rs, rp = r
        if node.tag == "Impl":
            if lp <= prec:
                ls = f"({ls})"
        else:
            if lp < prec:
                ls = f"({ls})"
            if rp <= prec:
                rs = f"({rs})"
        return (f"{ls} {_RENDER_OP[node.tag]} {rs}", prec)

    return fold(f, show)[0]


# --- Rieger-Nishimura formulas ----------------------------------------------

def rn_formula(idx: RNIndex, rank_cap: int = DEFAULT_RANK_CAP) -> Formula:
    """Canonical representative of the class ``idx``.

    The tree is exponential in the rank but built with shared node objects,
    so construction itself is linear.
    """
    if idx.rank > rank_cap:
        raise SizeLimitExceeded(f"rank {idx.rank} exceeds cap {rank_cap}")
    if idx.is_bot:
        return BOTTOM
    if idx.is_top:
        return TOP_FORMULA
    ph, ps = neg(A), A
    for _ in range(idx.rank - 1):
        ph, ps = Impl(ph, ps), Or(ph, ps)
    return ph if idx.is_phi else ps


# --- shared-subterm form ------------------------------------------------------

DAG_KINDS = ("a", "bot", "and", "or", "impl")
_TAG_TO_KIND = {"Var": "a", "Bot": "bot", "And": "and", "Or": "or", "Impl": "impl"}
_KIND_TO_CLS = {"and": And, "or": Or, "impl": Impl}


@dataclass(frozen=True)
class FormulaDag:
    """Node table ``(kind, left, right)`` addressed by position, plus a root.

    Leaves carry ``None`` children.  References must be acyclic.
    """

    nodes: tuple[tuple[str, int | None, int | None], ...]
    root: int

    def __post_init__(self):
        n = len(self.nodes)
        if not 0 <= self.root < n:
            raise DagError(f"root {self.root} out of range")
        for i, (kind, l, r) in enumerate(self.nodes):
            if kind not in DAG_KINDS:
                raise DagError(f"node {i}: unknown kind {kind!r}")
            if kind in ("a", "bot"):
                if l is not None or r is not None:
                    raise DagError(f"node {i}: leaf with children")
            elif not (isinstance(l, int) and isinstance(r, int) and 0 <= l < n and 0 <= r < n):
                raise DagError(f"node {i}: bad child reference")
        try:
            self.topological_order()
        except graphlib.CycleError as exc:
            raise DagError(f"cyclic references: {exc.args[1]}") from None

    def topological_order(self) -> list[int]:
        """Node ids with children before parents."""
        ts = graphlib.TopologicalSorter()
        for i, (kind, l, r) in enumerate(self.nodes):
            ts.add(i, *(c for c in (l, r) if c is not None))
        return list(ts.static_order())

    def __len__(self) -> int:
        return len(self.nodes)

    def unfold(self) -> Formula:
        """The tree this DAG denotes (node objects stay shared)."""
        built: dict[int, Formula] = {}
        for i in self.topological_order():
            kind, l, r = self.nodes[i]
            if kind == "a":
                built[i] = A
            elif kind == "bot":
                built[i] = BOTTOM
            else:
                built[i] = _KIND_TO_CLS[kind](built[l], built[r])
        return built[self.root]

    def to_text(self) -> str:
        lines = []
        for i, (kind, l, r) in enumerate(self.nodes):
            if l is None:
                lines.append(f"{i} := {kind}")
            else:
                lines.append(f"{i} := {kind} {l} {r}")
        lines.append(f"root {self.root}")
        return "\n".join(lines) + "\n"


def parse_dag(text: str) -> FormulaDag:
    """Read ``<id> := a | bot | and|or|impl <id> <id>`` lines and a final ``root <id>``.

    Ids are arbitrary tokens; forward references are allowed.
    """
    names: dict[str, int] = {}
    raw: list[tuple[str, list[str]]] = []
    root = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "root":
            if len(parts) != 2:
                raise DagError(f"line {lineno}: expected 'root <id>'")
            root = parts[1]
            continue
        if len(parts) < 3 or parts[1] != ":=":
            raise DagError(f"line {lineno}: expected '<id> := ...'")
        name, kind, args = parts[0], parts[2], parts[3:]
        if name in names:
            raise DagError(f"line {lineno}: duplicate id {name!r}")
        want = 0 if kind in ("a", "bot") else 2
        if kind not in DAG_KINDS or len(args) != want:
            raise DagError(f"line {lineno}: bad node definition {line!r}")
        names[name] = len(raw)
        raw.append((kind, args))
    if root is None:
        raise DagError("missing 'root <id>' line")
    try:
        nodes = tuple(
            (kind, names[args[0]], names[args[1]]) if args else (kind, None, None)
            for kind, args in raw
        )
        return FormulaDag(nodes, names[root])
    except KeyError as exc:
        raise DagError(f"undefined id {exc.args[0]!r}") from None


def to_dag(f: Formula) -> FormulaDag:
    """Hash-consed form of ``f``: structurally equal subterms become one node."""
    table: dict[tuple, int] = {}
    nodes: list[tuple[str, int | None, int | None]] = []

    def intern(node, l, r):
        key = (_TAG_TO_KIND[node.tag], l, r)
        i = table.get(key)
        if i is None:
            i = table[key] = len(nodes)
            nodes.append(key)
        return i

    root = fold(f, intern)
    return FormulaDag(tuple(nodes), root)


def rn_formula_dag(idx: RNIndex) -> FormulaDag:
    """Shared form of :func:`rn_formula`; node count is linear in the rank."""
    if idx.is_bot:
        return FormulaDag((("bot", None, None),), 0)
    if idx.is_top:
        return FormulaDag((("bot", None, None), ("impl", 0, 0)), 1)
    if idx.is_psi and idx.rank == 1:
        return FormulaDag((("a", None, None),), 0)
    nodes = [("a", None, None), ("bot", None, None), ("impl", 0, 1)]
    ph, ps = 2, 0
    for k in range(2, idx.rank + 1):
        last = k == idx.rank
        new_ph = new_ps = None
        if not last or idx.is_phi:
            nodes.append(("impl", ph, ps))
            new_ph = len(nodes) - 1
        if not last or idx.is_psi:
            nodes.append(("or", ph, ps))
            new_ps = len(nodes) - 1
        ph, ps = new_ph, new_ps
    return FormulaDag(tuple(nodes), ph if idx.is_phi else ps)


# --- random instances ---------------------------------------------------------

def random_formula(size: int, seed: int) -> Formula:
    """Deterministic pseudo-random formula with ``length <= size``."""
    if size < 1:
        raise ValueError("size must be >= 1")
    rng = random.Random(f"formula/{size}/{seed}")
    target = rng.randint(1, size)
    out: list[Formula] = []
    todo: list[tuple[str, object]] = [("gen", target)]
    while todo:
        what, arg = todo.pop()
        if what == "make":
            r = out.pop()
            l = out.pop()
            out.append(arg(l, r))
            continue
        n = arg
        if n < 3 or rng.random() < 0.06:
            out.append(A if rng.random() < 0.85 else BOTTOM)
            continue
        if n >= 5 and rng.random() < 0.3:
            out.append(_random_rungs(rng, n))
            continue
        cls = rng.choice((And, Or, Impl, Impl))
        lb = rng.randint(1, n - 2)
        todo.append(("make", cls))
        todo.append(("gen", n - 1 - lb))
        todo.append(("gen", lb))
    return out[0]


def _random_rungs(rng: random.Random, budget: int) -> Formula:
    # climb (x, y) -> (x -> y, x | y) from (~a, a), sometimes perturbed;
    # plain random trees almost never reach rank > 3
    x, y = neg(A), A
    best = [x, y]
    while 2 * x._length + 2 * y._length + 2 <= 2 * budget:
        roll = rng.random()
        if roll < 0.15:
            x, y = Impl(y, x), Or(x, y)
        elif roll < 0.25:
            x, y = Impl(x, y), And(x, y)
        else:
            x, y = Impl(x, y), Or(x, y)
        if x._length > budget:
            break
        best = [x, y]
        if rng.random() < 0.25:
            break
    pick = [f for f in best if f._length <= budget]
    return rng.choice(pick) if pick else A


def random_dag(n_nodes: int, seed: int) -> FormulaDag:
    """Random DAG whose inner nodes reuse earlier nodes, so sharing is common."""
    rng = random.Random(f"dag/{n_nodes}/{seed}")
    nodes: list[tuple[str, int | None, int | None]] = [("a", None, None), ("bot", None, None)]
    while len(nodes) < max(n_nodes, 3):
        kind = rng.choice(("and", "or", "impl", "impl"))
        hi = len(nodes) - 1
        # bias children toward recent nodes so the root sees most of the table
        l = max(0, hi - int(rng.expovariate(0.5)))
        r = rng.randint(0, hi)
        if rng.random() < 0.5:
            l, r = r, l
        nodes.append((kind, l, r))
    return FormulaDag(tuple(nodes), len(nodes) - 1)
