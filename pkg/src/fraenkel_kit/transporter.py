"""The permutation carrying a cell's representative onto any member of the cell."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .atoms import FinPerm
from .partition import Cell, classify, representative


@dataclass(frozen=True)
class TransportPlan:
    zeta: tuple[int, ...]
    perm: FinPerm
    cell: Cell
    source: tuple[int, ...]
    target: tuple[int, ...]

    @property
    def s(self) -> int:
        return len(self.zeta)


def zeta_sequence(mu: Sequence[int], cell: Cell, xi: Sequence[int]) -> tuple[int, ...]:
    """mu_1..mu_|K| followed by the new fresh values of xi in order of first occurrence."""
    k = len(cell.K)
    zeta = list(mu[:k])
    seen = set(zeta)
    for i in sorted(cell.idx):
        if xi[i - 1] not in seen:
            zeta.append(xi[i - 1])
            seen.add(xi[i - 1])
    return tuple(zeta)


def transport_perm(frame: Sequence[int], mu: Sequence[int], cell: Cell, xi: Sequence[int]) -> TransportPlan:
    xi = tuple(xi)
    if len(xi) != cell.n or classify(xi, frame) != cell:
        raise ValueError("tuple not in cell")
    rep = representative(frame, mu, cell)
    k = len(cell.K)
    if k == 0:
        return TransportPlan((), FinPerm(), cell, rep, xi)
    zeta = zeta_sequence(mu, cell, xi)
    # i_j: a position of the j-th block, where the representative holds mu_j
    blocks = cell.K.blocks
    image: dict[int, int] = {}
    used: set[int] = set()
    for j, z in enumerate(zeta):
        if j < k:
            image[z] = xi[blocks[j][0] - 1]
        else:
            t = next(i for i in range(k) if zeta[i] not in used)
            image[z] = zeta[t]
        used.add(image[z])
    perm = FinPerm(image)
    if perm.apply_tuple(rep) != xi:
        raise AssertionError(f"transport failed: {perm} maps {rep} to {perm.apply_tuple(rep)}, not {xi}")
    return TransportPlan(zeta, perm, cell, rep, xi)
