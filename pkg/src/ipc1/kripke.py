"""Finite intuitionistic Kripke models over the single variable ``a``.

Two independent ways to decide ``M, s |= f``:

* :func:`check_brute` evaluates the satisfaction clauses directly on every
  state (the oracle);
* :func:`check_fast` compares the formula's lattice index with the model
  index ``h(M, s)``.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .formula import Formula, to_dag
from .lattice import rn_index
from .rnindex import holds_at

EXPLICIT = "explicit"
REFLEXIVE_TRANSITIVE = "reflexive-transitive"


class InvalidModel(ValueError):
    def __init__(self, message: str, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class UnknownState(KeyError):
    pass


# --- violations reported by validate() ----------------------------------------

@dataclass(frozen=True)
class EmptyModel:
    def __str__(self):
        return "model has no states"


@dataclass(frozen=True)
class UndeclaredState:
    state: str
    where: str

    def __str__(self):
        return f"{self.where} mentions undeclared state {self.state!r}"


@dataclass(frozen=True)
class NotReflexive:
    state: str

    def __str__(self):
        return f"missing reflexive pair ({self.state}, {self.state})"


@dataclass(frozen=True)
class NotTransitive:
    x: str
    z: str

    def __str__(self):
        return f"not transitive: missing ({self.x}, {self.z})"


@dataclass(frozen=True)
class NonMonotoneValuation:
    w: str
    v: str

    def __str__(self):
        return f"valuation not monotone: {self.w} has a, successor {self.v} does not"


# --- the model ------------------------------------------------------------------

@dataclass(frozen=True)
class KripkeModel:
    """``(U, R, xi)``: states, a preorder given as pairs, and ``xi(a)``."""

    states: tuple[str, ...]
    relation: frozenset[tuple[str, str]]
    valuation: frozenset[str] = frozenset()

    @classmethod
    def build(cls, states: Iterable, edges: Iterable, valuation: Iterable = (),
              closure: str = EXPLICIT) -> KripkeModel:
        states = tuple(str(s) for s in states)
        edges = {(str(u), str(v)) for u, v in edges}
        return cls(states, frozenset(saturate(edges, closure, states)),
                   frozenset(str(s) for s in valuation))

    @cached_property
    def position(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def up(self) -> list[int]:
        """Bitmask of R-successors (including itself when reflexive) per state."""
        pos = self.position
        masks = [0] * len(self.states)
        for u, v in self.relation:
            if u in pos and v in pos:
                masks[pos[u]] |= 1 << pos[v]
        return masks

    @cached_property
    def val_mask(self) -> int:
        pos = self.position
        return sum(1 << pos[s] for s in self.valuation if s in pos)

    def successors(self, s: str) -> list[str]:
        m = self.up[self._pos(s)]
        return [t for i, t in enumerate(self.states) if m >> i & 1]

    def _pos(self, s: str) -> int:
        try:
            return self.position[s]
        except KeyError:
            raise UnknownState(s) from None

    def __len__(self) -> int:
        return len(self.states)


def validate(m: KripkeModel) -> list:
    """All invariant violations of ``m``; an empty list means it is a model."""
    out: list = []
    if not m.states:
        out.append(EmptyModel())
    pos = m.position
    for u, v in sorted(m.relation):
        for s in (u, v):
            if s not in pos:
                out.append(UndeclaredState(s, "relation"))
    for s in sorted(m.valuation):
        if s not in pos:
            out.append(UndeclaredState(s, "valuation"))
    if out:
        return out
    up = m.up
    n = len(m.states)
    for i, s in enumerate(m.states):
        if not up[i] >> i & 1:
            out.append(NotReflexive(s))
    for i in range(n):
        reach = 0
        for j in _bits(up[i]):
            reach |= up[j]
        for k in _bits(reach & ~up[i]):
            out.append(NotTransitive(m.states[i], m.states[k]))
    val = m.val_mask
    for i in _bits(val):
        for j in _bits(up[i] & ~val):
            out.append(NonMonotoneValuation(m.states[i], m.states[j]))
    return out


def require_valid(m: KripkeModel) -> None:
    problems = validate(m)
    if problems:
        raise InvalidModel("; ".join(str(p) for p in problems[:5]), problems)


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def saturate(edges: Iterable[tuple[str, str]], mode: str = REFLEXIVE_TRANSITIVE,
             states: Iterable[str] = ()) -> set[tuple[str, str]]:
    """Return ``edges`` unchanged, or their reflexive-transitive closure.

    The closure adds loops on every edge endpoint and on ``states``.
    """
    edges = set(edges)
    if mode == EXPLICIT:
        return edges
    if mode != REFLEXIVE_TRANSITIVE:
        raise ValueError(f"unknown closure mode {mode!r}")
    names = list(dict.fromkeys([*states, *(x for e in edges for x in e)]))
    pos = {s: i for i, s in enumerate(names)}
    reach = [1 << i for i in range(len(names))]
    for u, v in edges:
        reach[pos[u]] |= 1 << pos[v]
    # Warshall over bit rows
    for k in range(len(names)):
        bit = 1 << k
        rk = reach[k]
        for i in range(len(names)):
            if reach[i] & bit:
                reach[i] |= rk
    return {(names[i], names[j]) for i in range(len(names)) for j in _bits(reach[i])}


def canonical(n: int) -> KripkeModel:
    """The ladder model H_n on ``{1..n-2} u {n}``; ``a`` holds at 1 unless n = 2."""
    if n < 1:
        raise ValueError("canonical models start at n = 1")
    ws = [*range(1, n - 1), n] if n >= 2 else [1]
    rel = {(str(x), str(y)) for x in ws for y in ws if x == y or x >= y + 2}
    val = frozenset() if n == 2 else frozenset({"1"})
    return KripkeModel(tuple(str(w) for w in ws), frozenset(rel), val)


# --- model index -----------------------------------------------------------------

@dataclass
class Condensation:
    """Clusters of mutually related states, ordered by R, with their h values."""

    cluster_of: dict[str, int]
    members: list[tuple[str, ...]]
    above: list[frozenset[int]]  # clusters strictly above, transitively
    order: list[int]  # successors before predecessors
    h: list[int] = field(default_factory=list)

    @property
    def depth(self) -> int:
        """Number of clusters on the longest R-chain."""
        longest: dict[int, int] = {}
        for c in self.order:
            longest[c] = 1 + max((longest[d] for d in self.above[c]), default=0)
        return max(longest.values(), default=0)


def condensation(m: KripkeModel) -> Condensation:
    require_valid(m)
    up = m.up
    n = len(m.states)
    cluster_mask: dict[int, int] = {}
    cluster_of_pos: list[int] = [-1] * n
    masks: list[int] = []
    for i in range(n):
        if cluster_of_pos[i] >= 0:
            continue
        mates = [j for j in _bits(up[i]) if up[j] >> i & 1]
        cid = len(masks)
        mask = 0
        for j in mates:
            cluster_of_pos[j] = cid
            mask |= 1 << j
        masks.append(mask)
        cluster_mask[cid] = mask
    members = [tuple(m.states[j] for j in _bits(mask)) for mask in masks]
    above = []
    for cid, mask in enumerate(masks):
        rep = (mask & -mask).bit_length() - 1
        others = up[rep] & ~mask
        above.append(frozenset(cluster_of_pos[j] for j in _bits(others)))
    # a strictly-above set is a proper subset of every predecessor's
    order = sorted(range(len(masks)), key=lambda c: len(above[c]))
    return Condensation(
        {m.states[i]: cluster_of_pos[i] for i in range(n)}, members, above, order
    )


def _h_from_above(in_val: bool, seen: set[int]) -> int:
    if in_val:
        return 1
    if 1 not in seen:
        return 2
    ks = [k for k in seen if (k == 1 or k - 1 in seen) and k + 1 not in seen]
    if len(ks) != 1:
        raise InvalidModel(f"model index undefined: successor indices {sorted(seen)}")
    return ks[0] + 2


def model_indices(m: KripkeModel, stats: Counter | None = None) -> dict[str, int]:
    """``h(M, w)`` for every state, computed bottom-up over the condensation."""
    cond = condensation(m)
    hs = [0] * len(cond.members)
    val = m.valuation
    for c in cond.order:
        seen = {hs[d] for d in cond.above[c]}
        hs[c] = _h_from_above(cond.members[c][0] in val, seen)
        if stats is not None:
            stats["h_clusters"] += 1
            stats["h_edges"] += len(cond.above[c])
    cond.h = hs
    return {s: hs[c] for s, c in cond.cluster_of.items()}


def model_index(m: KripkeModel, w: str) -> int:
    m._pos(w)
    return model_indices(m)[w]


# --- satisfaction ------------------------------------------------------------------

def truth_sets(m: KripkeModel, f: Formula, stats: Counter | None = None) -> int:
    """Bitmask of the states satisfying ``f``, straight from the forcing clauses."""
    require_valid(m)
    dag = to_dag(f)
    up = m.up
    n = len(m.states)
    full = (1 << n) - 1
    val = m.val_mask
    sets: dict[int, int] = {}
    for i in dag.topological_order():
        kind, l, r = dag.nodes[i]
        if kind == "a":
            sets[i] = val
        elif kind == "bot":
            sets[i] = 0
        elif kind == "and":
            sets[i] = sets[l] & sets[r]
        elif kind == "or":
            sets[i] = sets[l] | sets[r]
        else:
            bad = sets[l] & ~sets[r] & full
            sets[i] = sum(1 << s for s in range(n) if not up[s] & bad)
        if stats is not None:
            stats["brute_visits"] += n
    return sets[dag.root]


def check_brute(m: KripkeModel, s: str, f: Formula, stats: Counter | None = None) -> bool:
    i = m._pos(s)
    return bool(truth_sets(m, f, stats) >> i & 1)


def check_fast(m: KripkeModel, s: str, f: Formula, stats: Counter | None = None) -> bool:
    m._pos(s)
    idx = rn_index(f)
    if idx.is_bot:
        return False
    if idx.is_top:
        return True
    if stats is not None:
        stats["formula_nodes"] += f._length
    return holds_at(idx, model_indices(m, stats)[s])


def is_directed(m: KripkeModel) -> bool:
    """Every two states have a common successor."""
    require_valid(m)
    up = m.up
    return all(up[i] & up[j] for i in range(len(up)) for j in range(i + 1, len(up)))


# --- generation and I/O --------------------------------------------------------------

def random_model(n_states: int, seed: int, edge_prob: float = 0.25,
                 val_prob: float = 0.15, ladder: int = 0) -> KripkeModel:
    """Random valid model; back edges make nontrivial clusters common.

    With ``ladder = k`` a copy of H_k (states ``c<i>``) is embedded and the
    random states point into it, which spreads the model indices upward.
    ``n_states`` counts the ladder states too.
    """
    rng = random.Random(f"model/{n_states}/{seed}/{edge_prob}/{ladder}")
    edges = set()
    seeds = set()
    lad: list[str] = []
    if ladder:
        h = canonical(ladder)
        lad = [f"c{s}" for s in h.states]
        edges |= {(f"c{u}", f"c{v}") for u, v in h.relation}
        seeds |= {f"c{s}" for s in h.valuation}
    states = lad + [f"w{i}" for i in range(max(0, n_states - len(lad)))]
    free = states[len(lad):]
    for i, u in enumerate(free):
        for j, v in enumerate(free):
            if i != j and rng.random() < (edge_prob if i < j else edge_prob / 4):
                edges.add((u, v))
        if lad and rng.random() < 0.8:
            edges.add((u, rng.choice(lad)))
    rel = saturate(edges, REFLEXIVE_TRANSITIVE, states)
    seeds |= {s for s in free if rng.random() < val_prob}
    val = frozenset(v for (u, v) in rel if u in seeds)
    return KripkeModel(tuple(states), frozenset(rel), val)


def model_to_json(m: KripkeModel) -> dict:
    return {
        "states": list(m.states),
        "edges": sorted([u, v] for u, v in m.relation),
        "valuation": [s for s in m.states if s in m.valuation],
        "closure": EXPLICIT,
    }


def model_from_json(obj: dict) -> KripkeModel:
    try:
        states = obj["states"]
        edges = obj.get("edges", [])
        closure = obj.get("closure", EXPLICIT)
        valuation = obj.get("valuation", [])
        return KripkeModel.build(states, (tuple(e) for e in edges), valuation, closure)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidModel(f"malformed model file: {exc}") from None


def load_model(path: str) -> KripkeModel:
    with open(path) as fh:
        return model_from_json(json.load(fh))


def model_to_dot(m: KripkeModel, hide_implied: bool = False, name: str = "M") -> str:
    """Graphviz text; states in ``xi(a)`` are double circles.

    With ``hide_implied`` loops and edges implied by transitivity are left out.
    """
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for s in m.states:
        shape = "doublecircle" if s in m.valuation else "circle"
        lines.append(f'  "{s}" [shape={shape}];')
    rel = m.relation
    for u, v in sorted(rel):
        if hide_implied:
            if u == v:
                continue
            mutual = (v, u) in rel
            if not mutual and any(
                w not in (u, v) and (u, w) in rel and (w, v) in rel
                and (w, u) not in rel and (v, w) not in rel
                for w in m.states
            ):
                continue
        lines.append(f'  "{u}" -> "{v}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
