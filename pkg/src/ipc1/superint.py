"""Superintuitionistic one-variable logics: IPC plus one axiom.

A logic is represented by the set of model indices at which its axiom holds.
A model is admissible when every state's index lies in that set, and a
formula is valid when its class holds at every allowed index.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .formula import Formula, rn_formula
from .kripke import KripkeModel, check_brute, check_fast, canonical, is_directed, model_indices
from .lattice import rn_index
from .rnindex import RNIndex, all_indices, holds_at, psi


class AxiomIsBot(ValueError):
    pass


class InadmissibleModel(ValueError):
    pass


class ClassCheckFailed(AssertionError):
    pass


@dataclass(frozen=True)
class Logic:
    axiom: Optional[RNIndex] = None
    name: str = ""

    def __post_init__(self):
        if self.axiom is not None and self.axiom.is_bot:
            raise AxiomIsBot("bot as an axiom gives the inconsistent logic")

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        return "ipc" if self.axiom is None else str(self.axiom)


IPC = Logic(None, "ipc")
KC = Logic(psi(3), "kc")
CLASSICAL = Logic(psi(2), "classical")


def parse_logic(text: str) -> Logic:
    """``ipc``, ``kc``, ``psi:<k>`` or ``phi:<k>``."""
    t = text.strip().lower()
    if t == "ipc":
        return IPC
    if t == "kc":
        return KC
    m = re.fullmatch(r"(psi|phi):(\d+)", t)
    if not m or int(m.group(2)) < 1:
        raise ValueError(f"unknown logic {text!r}; use ipc, kc, psi:<k> or phi:<k>")
    return Logic(RNIndex(m.group(1), int(m.group(2))))


def allowed_indices(logic: Logic) -> frozenset[int] | None:
    """Model indices at which the axiom holds; ``None`` stands for all of them."""
    ax = logic.axiom
    if ax is None or ax.is_top:
        return None
    k = ax.rank
    if ax.is_psi:
        return frozenset(range(1, k + 1))
    return frozenset([*range(1, k), k + 1])


def describe_allowed(logic: Logic) -> str:
    a = allowed_indices(logic)
    return "all" if a is None else "{" + ",".join(map(str, sorted(a))) + "}"


def admissible(logic: Logic, m: KripkeModel) -> bool:
    allowed = allowed_indices(logic)
    if allowed is None:
        return True
    ok = all(h in allowed for h in model_indices(m).values())
    # directed models validate the weak excluded middle; the converse fails
    # for a fixed valuation (a fork with a nowhere true is admissible)
    if logic.axiom == KC.axiom and not ok and is_directed(m):
        raise ClassCheckFailed("directed model is not KC-admissible")
    return ok


def is_valid_in(logic: Logic, f: Formula) -> bool:
    idx = rn_index(f)
    allowed = allowed_indices(logic)
    if allowed is None:
        return idx.is_top
    return all(holds_at(idx, n) for n in allowed)


def check_in(logic: Logic, m: KripkeModel, s: str, f: Formula) -> bool:
    if not admissible(logic, m):
        raise InadmissibleModel(f"model is not a {logic.label} model")
    return check_fast(m, s, f)


@dataclass(frozen=True)
class EquivalenceClass:
    pattern: tuple[bool, ...]
    members: tuple[RNIndex, ...]
    representative: RNIndex

    def bits(self) -> str:
        return "".join("1" if b else "0" for b in self.pattern)


def classes(logic: Logic, verify: bool = True) -> list[EquivalenceClass]:
    """Group the indices of rank <= max(A)+2 by their truth pattern over A.

    With ``verify`` each pattern bit is recomputed by brute force on the
    canonical model of that index.
    """
    allowed = allowed_indices(logic)
    if allowed is None:
        raise ValueError("IPC has infinitely many classes")
    points = sorted(allowed)
    groups: dict[tuple[bool, ...], list[RNIndex]] = {}
    for idx in all_indices(max(points) + 2):
        pat = tuple(holds_at(idx, n) for n in points)
        groups.setdefault(pat, []).append(idx)
    if verify:
        models = {n: canonical(n) for n in points}
        for pat, members in groups.items():
            for idx in members:
                f = rn_formula(idx)
                got = tuple(check_brute(models[n], str(n), f) for n in points)
                if got != pat:
                    raise ClassCheckFailed(f"{idx}: pattern {pat} but brute force gives {got}")
    out = [
        EquivalenceClass(pat, tuple(ms), min(ms, key=RNIndex.sort_key))
        for pat, ms in groups.items()
    ]
    out.sort(key=lambda c: c.representative.sort_key())
    return out


def classes_table(logic: Logic) -> str:
    """Tab-separated rendering of :func:`classes`."""
    points = sorted(allowed_indices(logic) or ())
    rows = ["# pattern bits for h in " + ",".join(map(str, points)),
            "pattern\trepresentative\tmembers"]
    for c in classes(logic):
        rows.append(f"{c.bits()}\t{c.representative}\t{','.join(map(str, c.members))}")
    return "\n".join(rows) + "\n"

