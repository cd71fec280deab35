"""Alternating slice graphs and their translation into Kripke models.

``reduce_to_model`` turns a slice graph G with m slices into a model M_G
whose model indices encode alternating reachability: for a node v in slice
i, ``h(v_out)`` is 4i+1 or 4i+2 and the choice records ``apath(v, t)``.
Together with one Rieger-Nishimura formula this yields model-checking
instances whose answer is ``apath(s, t)``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import cached_property

from .formula import DEFAULT_RANK_CAP, Formula, rn_formula
from .kripke import (KripkeModel, canonical, check_brute, check_fast, condensation,
                     model_indices, require_valid, InvalidModel)
from .rnindex import RNIndex, holds_at, phi, psi


class InvalidSliceGraph(ValueError):
    def __init__(self, message: str, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class UnknownNode(KeyError):
    pass


class BadParameters(ValueError):
    pass


# --- violations ------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self):
        return f"{self.kind}: {self.detail}"


def _v(kind, detail):
    return Violation(kind, detail)


# --- the graph ---------------------------------------------------------------------

@dataclass(frozen=True)
class SliceGraph:
    """Slices V_0..V_{m-1} (V_0 first), downward edges, start ``s`` and goal ``t``.

    Odd slices are existential, even slices universal.
    """

    slices: tuple[tuple[str, ...], ...]
    edges: frozenset[tuple[str, str]]
    s: str
    t: str

    @classmethod
    def build(cls, slices, edges, s, t) -> SliceGraph:
        return cls(
            tuple(tuple(str(v) for v in sl) for sl in slices),
            frozenset((str(u), str(v)) for u, v in edges),
            str(s),
            str(t),
        )

    @property
    def m(self) -> int:
        return len(self.slices)

    @property
    def n(self) -> int:
        return sum(len(sl) for sl in self.slices)

    @cached_property
    def slice_of(self) -> dict[str, int]:
        return {v: i for i, sl in enumerate(self.slices) for v in sl}

    @cached_property
    def successors(self) -> dict[str, tuple[str, ...]]:
        succ: dict[str, list[str]] = {v: [] for v in self.slice_of}
        for u, v in sorted(self.edges):
            if u in succ:
                succ[u].append(v)
        return {u: tuple(vs) for u, vs in succ.items()}

    def is_existential(self, v: str) -> bool:
        return self.slice_of[v] % 2 == 1

    def nodes(self):
        for sl in self.slices:
            yield from sl


def validate_slice_graph(g: SliceGraph) -> list[Violation]:
    out: list[Violation] = []
    if not g.slices:
        return [_v("NoSlices", "graph has no slices")]
    seen: dict[str, int] = {}
    for i, sl in enumerate(g.slices):
        if not sl:
            out.append(_v("EmptySlice", f"slice {i} is empty"))
        for v in sl:
            if v in seen:
                out.append(_v("DuplicateNode", f"{v} in slices {seen[v]} and {i}"))
            seen.setdefault(v, i)
    for u, v in sorted(g.edges):
        if u not in seen or v not in seen:
            out.append(_v("UnknownNode", f"edge ({u}, {v}) mentions an unknown node"))
        elif seen[u] != seen[v] + 1:
            out.append(_v("EdgeNotBetweenAdjacentSlices",
                          f"({u}, {v}) goes from slice {seen[u]} to slice {seen[v]}"))
    outdeg = {v: 0 for v in seen}
    for u, v in g.edges:
        if u in outdeg:
            outdeg[u] += 1
    for v, i in seen.items():
        if i > 0 and outdeg[v] == 0:
            out.append(_v("ZeroOutdegree", f"{v} in slice {i} has no out-edge"))
    top = len(g.slices) - 1
    if seen.get(g.s) != top:
        out.append(_v("SourceNotInTopSlice", f"s = {g.s} is not in slice {top}"))
    if top % 2 != 1:
        out.append(_v("SourceNotExistential", f"top slice {top} is universal; m must be even"))
    if seen.get(g.t) != 0:
        out.append(_v("TargetNotInBottomSlice", f"t = {g.t} is not in slice 0"))
    return out


def require_valid_graph(g: SliceGraph) -> None:
    problems = validate_slice_graph(g)
    if problems:
        raise InvalidSliceGraph("; ".join(map(str, problems[:5])), problems)


def apath_table(g: SliceGraph, y: str) -> dict[str, bool]:
    """``apath(x, y)`` for every node x.

    Nodes without successors reach only themselves.
    """
    if y not in g.slice_of:
        raise UnknownNode(y)
    succ = g.successors
    val: dict[str, bool] = {}
    for i, sl in enumerate(g.slices):
        for v in sl:
            if v == y:
                val[v] = True
            elif not succ[v]:
                val[v] = False
            elif i % 2 == 1:
                val[v] = any(val[z] for z in succ[v])
            else:
                val[v] = all(val[z] for z in succ[v])
    return val


def apath(g: SliceGraph, x: str, y: str) -> bool:
    if x not in g.slice_of:
        raise UnknownNode(x)
    return apath_table(g, y)[x]


# --- the model M_G -----------------------------------------------------------------

def state_in(v: str) -> str:
    return f"{v}_in"


def state_out(v: str) -> str:
    return f"{v}_out"


@dataclass
class Construction:
    """The pieces of M_G, kept apart for inspection and drawing."""

    m: int
    slice_in: list[list[str]]   # S_i^in
    slice_out: list[list[str]]  # S_i^out
    ladder: list[str]
    E: set = field(default_factory=set)
    H: set = field(default_factory=set)
    T_in: set = field(default_factory=set)
    T_out: set = field(default_factory=set)
    P: set = field(default_factory=set)
    T: set = field(default_factory=set)
    valuation: frozenset = frozenset()

    @property
    def states(self) -> list[str]:
        out = []
        for i in reversed(range(self.m)):
            out += self.slice_in[i] + self.slice_out[i]
        return out

    @property
    def relation(self) -> set:
        return self.E | self.H | self.T_in | self.T_out | self.P | self.T

    def model(self) -> KripkeModel:
        return KripkeModel(tuple(self.states), frozenset(self.relation), self.valuation)


def construct(g: SliceGraph) -> Construction:
    require_valid_graph(g)
    m = g.m
    top = 4 * m
    c = Construction(m, [], [], [*map(str, range(1, top - 1)), str(top)])
    for i, sl in enumerate(g.slices):
        c.slice_out.append([state_out(v) for v in sl] + [str(4 * i + 1), str(4 * i + 2)])
        extra = [str(4 * i + 3), str(4 * i + 4)] if i < m - 1 else [str(top)]
        c.slice_in.append([state_in(v) for v in sl] + extra)

    c.E = {(state_out(u), state_in(v)) for u, v in g.edges}
    c.E |= {(state_in(v), state_out(v)) for v in g.nodes()}
    ladder_nums = [*range(3, top - 1), top]
    c.H = {(str(k), str(k - 2)) for k in ladder_nums}
    c.H |= {(str(k), str(k - 3)) for k in ladder_nums if k % 2 == 0}
    for i, sl in enumerate(g.slices):
        c.T_in |= {(state_in(v), str(4 * i + 2)) for v in sl}
        if i >= 1:
            c.T_out |= {(state_out(v), str(4 * i - 1)) for v in sl}
    for i in range(1, m):
        below_in = [x for j in range(i) for x in c.slice_in[j] + c.slice_out[j]]
        c.P |= {(u, w) for u in c.slice_in[i] for w in below_in}
        below_out = c.slice_out[i - 1] + [
            x for j in range(i - 1) for x in c.slice_in[j] + c.slice_out[j]
        ]
        c.P |= {(u, w) for u in c.slice_out[i] for w in below_out}
    c.T = {(u, u) for u in c.states}
    c.valuation = frozenset({state_out(g.t), "1"})
    return c


def reduce_to_model(g: SliceGraph) -> tuple[KripkeModel, str]:
    """M_G and the start state ``s_out``.

    The relation is the union of the six edge families; it must already be
    a preorder, so closure is checked, never computed.
    """
    model = construct(g).model()
    try:
        require_valid(model)
    except InvalidModel as exc:
        raise AssertionError(f"construction produced an invalid model: {exc}") from None
    return model, state_out(g.s)


def decision_index(m: int) -> RNIndex:
    """Class separating h = 4m-2 (apath holds) from h = 4m-3 at ``s_out``."""
    return phi(4 * m - 3)


def mc_instance(g: SliceGraph, rank_cap: int = DEFAULT_RANK_CAP) -> tuple[Formula, KripkeModel, str]:
    """Model-checking triple whose answer is ``apath(s, t)``."""
    require_valid_graph(g)
    f = rn_formula(decision_index(g.m), rank_cap)
    model, start = reduce_to_model(g)
    return f, model, start


# --- verification report --------------------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def add(self, name, passed, detail=""):
        self.checks.append(Check(name, bool(passed), detail))

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_text(self) -> str:
        lines = [f"{'PASS' if c.passed else 'FAIL'}\t{c.name}\t{c.detail}" for c in self.checks]
        lines += [f"INFO\t{k}\t{v}" for k, v in self.info.items()]
        return "\n".join(lines) + "\n"


def verify_reduction(g: SliceGraph, rank_cap: int = DEFAULT_RANK_CAP) -> Report:
    """Run every property of M_G against brute force; failures become report entries."""
    rep = Report()
    c = construct(g)
    model = c.model()
    problems = []
    try:
        require_valid(model)
    except InvalidModel as exc:
        problems = exc.violations
    rep.add("model_valid", not problems, "; ".join(map(str, problems[:3])))
    if problems:
        return rep
    m, n = g.m, g.n
    h = model_indices(model)
    reach = apath_table(g, g.t)

    bad8, bad9 = [], []
    for v in g.nodes():
        i = g.slice_of[v]
        hout, hin = h[state_out(v)], h[state_in(v)]
        if hout not in (4 * i + 1, 4 * i + 2) or hin not in (4 * i + 2, 4 * i + 4):
            bad8.append(f"{v}:out={hout},in={hin}")
        if i % 2 == 0:
            want_out, want_in = 4 * i + 1, 4 * i + 4
        else:
            want_out, want_in = 4 * i + 2, 4 * i + 2
        if reach[v] != (hout == want_out) or reach[v] != (hin == want_in):
            bad9.append(f"{v}:apath={reach[v]},out={hout},in={hin}")
    rep.add("index_dichotomy", not bad8, ", ".join(bad8[:5]))
    rep.add("index_encodes_apath", not bad9, ", ".join(bad9[:5]))

    hs = h[state_out(g.s)]
    rep.add("parity", (hs % 2 == 0) == reach[g.s], f"h(s_out)={hs}, apath={reach[g.s]}")
    rep.info["h_s_out"] = hs
    rep.info["convention"] = (
        "slices from 0 (4m-3/4m-2)" if hs in (4 * m - 3, 4 * m - 2)
        else "slices from 1 (4m+1/4m+2)" if hs in (4 * m + 1, 4 * m + 2) else "neither"
    )

    size = len(model)
    rep.add("state_count", size == 2 * n + 4 * m - 1, f"|U|={size}, 2n+4m-1={2 * n + 4 * m - 1}")
    rep.add("size_bound_4n", size <= 4 * n, f"|U|={size}, 4n={4 * n}")
    depth = condensation(model).depth
    rep.add("depth_2m", depth == 2 * m, f"depth={depth}, 2m={2 * m}")

    ladder = set(c.ladder)
    sub = KripkeModel(
        tuple(c.ladder),
        frozenset((u, v) for u, v in model.relation if u in ladder and v in ladder),
        frozenset(x for x in model.valuation if x in ladder),
    )
    can = canonical(4 * m)
    rep.add("ladder_is_canonical",
            set(sub.states) == set(can.states) and sub.relation == can.relation
            and sub.valuation == can.valuation)
    rep.add("ladder_indices", all(h[x] == int(x) for x in c.ladder))

    start = state_out(g.s)
    idx = decision_index(m)
    if idx.rank <= rank_cap:
        f = rn_formula(idx, rank_cap)
        fast, brute = check_fast(model, start, f), check_brute(model, start, f)
        rep.add("mc_instance", fast == brute == reach[g.s],
                f"{idx}: fast={fast}, brute={brute}, apath={reach[g.s]}")
    for cand in (psi(4 * m + 2), psi(4 * m - 2), idx):
        rep.info[f"candidate_{cand}_matches_apath"] = holds_at(cand, hs) == reach[g.s]
    return rep


# --- generation and I/O ----------------------------------------------------------------

def gen_slice_graph(m: int, width: int, density: float = 0.5, seed: int = 0) -> SliceGraph:
    """Random slice graph with ``width`` nodes per slice; s and t are the first
    nodes of the top and bottom slices."""
    if m < 2 or m % 2:
        raise BadParameters("m must be even and >= 2")
    if width < 1:
        raise BadParameters("width must be >= 1")
    if not 0.0 <= density <= 1.0:
        raise BadParameters("density must lie in [0, 1]")
    rng = random.Random(f"slices/{m}/{width}/{density}/{seed}")
    slices = []
    for i in range(m):
        names = [f"v{i}_{j}" for j in range(width)]
        if i == 0:
            names[0] = "t"
        if i == m - 1:
            names[0] = "s"
        slices.append(tuple(names))
    edges = set()
    for i in range(1, m):
        for u in slices[i]:
            out = [v for v in slices[i - 1] if rng.random() < density]
            if not out:
                out = [rng.choice(slices[i - 1])]
            edges.update((u, v) for v in out)
    return SliceGraph(tuple(slices), frozenset(edges), "s", "t")


def graph_to_json(g: SliceGraph) -> dict:
    return {
        "slices": [list(sl) for sl in g.slices],
        "edges": sorted([u, v] for u, v in g.edges),
        "s": g.s,
        "t": g.t,
    }


def graph_from_json(obj: dict) -> SliceGraph:
    try:
        return SliceGraph.build(obj["slices"], (tuple(e) for e in obj["edges"]), obj["s"], obj["t"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSliceGraph(f"malformed slice-graph file: {exc}") from None


def load_graph(path: str) -> SliceGraph:
    with open(path) as fh:
        return graph_from_json(json.load(fh))


def graph_to_dot(g: SliceGraph) -> str:
    lines = ["digraph G {", "  rankdir=TB;"]
    for i in reversed(range(g.m)):
        q = "E" if i % 2 else "A"
        lines.append(f"  {{ rank=same; " + " ".join(f'"{v}"' for v in g.slices[i]) + " }")
        for v in g.slices[i]:
            shape = "doublecircle" if v == g.t else "circle"
            lines.append(f'  "{v}" [shape={shape}, xlabel="{q}{i}"];')
    for u, v in sorted(g.edges):
        lines.append(f'  "{u}" -> "{v}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def reduction_to_dot(g: SliceGraph, with_indices: bool = True) -> str:
    """M_G drawn as two columns: graph copies on the left, ladder on the right.

    Pseudotransitive and reflexive edges are omitted.
    """
    c = construct(g)
    h = model_indices(c.model()) if with_indices else {}
    ladder = set(c.ladder)
    lines = ["digraph MG {", "  rankdir=TB;", "  newrank=true;"]
    for side, pick in (("graph", lambda x: x not in ladder), ("ladder", lambda x: x in ladder)):
        lines.append(f"  subgraph cluster_{side} {{")
        lines.append(f'    label="{side}";')
        for x in c.states:
            if pick(x):
                shape = "doublecircle" if x in c.valuation else "circle"
                label = f"{x}\\nh={h[x]}" if h and x not in ladder else x
                lines.append(f'    "{x}" [shape={shape}, label="{label}"];')
        lines.append("  }")
    for i in reversed(range(c.m)):
        for layer in (c.slice_in[i], c.slice_out[i]):
            lines.append("  { rank=same; " + " ".join(f'"{x}"' for x in layer) + " }")
    for u, v in sorted(c.E | c.H | c.T_in | c.T_out):
        lines.append(f'  "{u}" -> "{v}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
