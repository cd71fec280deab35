"""Class indices of the Rieger-Nishimura lattice.

Every one-variable formula is equivalent to exactly one of ``bot``, ``top``,
``phi<n>`` or ``psi<n>`` (n >= 1).  :class:`RNIndex` names that class.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

BOT_KIND = "bot"
TOP_KIND = "top"
PHI = "phi"
PSI = "psi"

_KIND_ORDER = {BOT_KIND: 0, TOP_KIND: 1, PSI: 2, PHI: 3}
_TEXT_RE = re.compile(r"^\s*(?:(bot|top)|(phi|psi)\s*(\d+))\s*$")


@dataclass(frozen=True)
class RNIndex:
    kind: str
    rank: int = 0

    def __post_init__(self):
        if self.kind in (BOT_KIND, TOP_KIND):
            if self.rank != 0:
                raise ValueError(f"{self.kind} carries no rank, got {self.rank}")
        elif self.kind in (PHI, PSI):
            if not isinstance(self.rank, int) or self.rank < 1:
                raise ValueError(f"{self.kind} needs rank >= 1, got {self.rank!r}")
        else:
            raise ValueError(f"unknown index kind {self.kind!r}")

    @property
    def is_bot(self) -> bool:
        return self.kind == BOT_KIND

    @property
    def is_top(self) -> bool:
        return self.kind == TOP_KIND

    @property
    def is_phi(self) -> bool:
        return self.kind == PHI

    @property
    def is_psi(self) -> bool:
        return self.kind == PSI

    def sort_key(self) -> tuple[int, int]:
        """Least rank first; at equal rank bot < top < psi < phi."""
        return (self.rank, _KIND_ORDER[self.kind])

    def __str__(self) -> str:
        if self.rank == 0:
            return self.kind
        return f"{self.kind}{self.rank}"

    def __repr__(self) -> str:
        return f"RNIndex({str(self)})"


BOT = RNIndex(BOT_KIND)
TOP = RNIndex(TOP_KIND)


def phi(n: int) -> RNIndex:
    return RNIndex(PHI, n)


def psi(n: int) -> RNIndex:
    return RNIndex(PSI, n)


def parse_index(text: str) -> RNIndex:
    """Read the text form used by the CLI: ``bot``, ``top``, ``phi3``, ``psi12``."""
    m = _TEXT_RE.match(text.lower())
    if not m:
        raise ValueError(f"not an RN index: {text!r}")
    if m.group(1):
        return BOT if m.group(1) == BOT_KIND else TOP
    return RNIndex(m.group(2), int(m.group(3)))


def all_indices(max_rank: int) -> list[RNIndex]:
    """bot, top and every phi/psi of rank 1..max_rank, in sort_key order."""
    out = [BOT, TOP]
    for n in range(1, max_rank + 1):
        out.append(psi(n))
        out.append(phi(n))
    return out


def holds_at(idx: RNIndex, h: int) -> bool:
    """Truth of the class ``idx`` at any state whose model index is ``h``.

    psi_k holds iff k >= h; phi_k holds iff k > h or k = h - 1.
    """
    if idx.is_bot:
        return False
    if idx.is_top:
        return True
    k = idx.rank
    if idx.is_psi:
        return k >= h
    return k > h or k == h - 1
