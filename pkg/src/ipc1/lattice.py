"""The Rieger-Nishimura lattice: meet, join and implication on class indices.

The free Heyting algebra on one generator is small enough to tabulate; every
case below is one line of the classical operation table (Nishimura 1960),
with the rank relation between the two arguments selecting the row.
"""

from __future__ import annotations

from .formula import Formula, FormulaDag, fold
from .rnindex import BOT, TOP, RNIndex, phi, psi

__all__ = ["RNIndex", "meet", "join", "rpc", "leq", "rn_index", "rn_index_dag", "is_valid"]


def meet(x: RNIndex, y: RNIndex) -> RNIndex:
    if x.is_bot or y.is_bot:
        return BOT
    if x.is_top:
        return y
    if y.is_top:
        return x
    n, m = x.rank, y.rank
    match x.kind, y.kind:
        case ("psi", "psi"):
            return psi(min(n, m))
        case ("phi", "phi"):
            n, m = min(n, m), max(n, m)
            if m == n:
                return x
            if m == n + 1:
                return BOT if n == 1 else psi(n - 1)
            return phi(n)
        case ("psi", "phi"):
            return meet(y, x)
        case ("phi", "psi"):
            if m > n:
                return x
            if m == n:
                return BOT if n == 1 else psi(n - 1)
            return y
    raise AssertionError((x, y))


def join(x: RNIndex, y: RNIndex) -> RNIndex:
    if x.is_top or y.is_top:
        return TOP
    if x.is_bot:
        return y
    if y.is_bot:
        return x
    n, m = x.rank, y.rank
    match x.kind, y.kind:
        case ("psi", "psi"):
            return psi(max(n, m))
        case ("phi", "phi"):
            n, m = min(n, m), max(n, m)
            if m == n + 1:
                return psi(n + 2)
            return phi(m)
        case ("psi", "phi"):
            return join(y, x)
        case ("phi", "psi"):
            if m == n:
                return psi(n + 1)
            if m > n:
                return y
            return x
    raise AssertionError((x, y))


def rpc(x: RNIndex, y: RNIndex) -> RNIndex:
    """Relative pseudo-complement: the largest d with ``meet(x, d) <= y``."""
    if x.is_bot or y.is_top:
        return TOP
    if x.is_top:
        return y
    n = x.rank
    if y.is_bot:
        if x.is_phi:
            return {1: phi(2), 2: phi(1)}.get(n, BOT)
        return phi(1) if n == 1 else BOT
    m = y.rank
    match x.kind, y.kind:
        case ("phi", "phi"):
            if m == n + 1:
                return y
            if m >= n:
                return TOP
            return y
        case ("phi", "psi"):
            if m == n:
                return phi(n + 1)
            if m > n:
                return TOP
            if n == m + 1:
                return phi(m + 2)
            if n == m + 2:
                return phi(m + 1)
            return y
        case ("psi", "psi"):
            if m >= n:
                return TOP
            if n == m + 1:
                return phi(n)
            return y
        case ("psi", "phi"):
            if m > n:
                return TOP
            return y
    raise AssertionError((x, y))


def leq(x: RNIndex, y: RNIndex) -> bool:
    return meet(x, y) == x


_A_INDEX = psi(1)


def _combine(node: Formula, l: RNIndex | None, r: RNIndex | None) -> RNIndex:
    tag = node.tag
    if tag == "Var":
        return _A_INDEX
    if tag == "Bot":
        return BOT
    if tag == "And":
        return meet(l, r)
    if tag == "Or":
        return join(l, r)
    return rpc(l, r)


def rn_index(f: Formula) -> RNIndex:
    """Normal form of ``f``: fold the lattice operations bottom-up over the tree."""
    return fold(f, _combine)


_DAG_OPS = {"and": meet, "or": join, "impl": rpc}


def rn_index_dag(g: FormulaDag) -> RNIndex:
    """Same as :func:`rn_index` on ``g.unfold()``, evaluating each node once."""
    value: dict[int, RNIndex] = {}
    for i in g.topological_order():
        kind, l, r = g.nodes[i]
        if kind == "a":
            value[i] = _A_INDEX
        elif kind == "bot":
            value[i] = BOT
        else:
            value[i] = _DAG_OPS[kind](value[l], value[r])
    return value[g.root]


def is_valid(f: Formula) -> bool:
    """Intuitionistic tautology test."""
    return rn_index(f).is_top
