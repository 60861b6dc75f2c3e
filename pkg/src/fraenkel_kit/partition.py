"""Set partitions and the cell system of a support frame.

A support frame ``P = (nu_1 < ... < nu_q)`` splits the atoms into the
singletons ``{nu_j}`` and the fresh rest.  An n-tuple then lies in exactly
one cell ``(e, K)``: ``e_j`` is the 1-based frame position of component j
(or ``q + 1`` when the component is fresh) and ``K`` groups the fresh
positions by equality of their values.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb
from typing import Iterable, Sequence

from .atoms import fresh_atoms

SupportFrame = tuple  # strictly increasing tuple of atoms


def make_frame(atoms: Iterable[int] = ()) -> tuple[int, ...]:
    return tuple(sorted(set(atoms)))


def check_frame(frame: Sequence[int]) -> tuple[int, ...]:
    frame = tuple(frame)
    if any(a >= b for a, b in zip(frame, frame[1:])):
        raise ValueError(f"support frame must be strictly increasing: {frame}")
    if frame and frame[0] < 0:
        raise ValueError("atoms are non-negative")
    return frame


class SetPartition:
    """A partition of a finite set of positive indices.

    Blocks are kept sorted by their minima; equality is set equality.
    """

    __slots__ = ("blocks", "_hash")

    def __init__(self, blocks: Iterable[Iterable[int]] = ()):
        bs = [tuple(sorted(set(b))) for b in blocks]
        seen: set[int] = set()
        for b in bs:
            if not b:
                raise ValueError("partition blocks must be non-empty")
            if seen.intersection(b):
                raise ValueError("partition blocks must be pairwise disjoint")
            seen.update(b)
        bs.sort(key=lambda b: b[0])
        self.blocks: tuple[tuple[int, ...], ...] = tuple(bs)
        self._hash = hash(self.blocks)

    @property
    def ground(self) -> frozenset[int]:
        return frozenset(i for b in self.blocks for i in b)

    def block_of(self, i: int) -> int:
        """0-based position of the block containing ``i`` in ordered form."""
        for v, b in enumerate(self.blocks):
            if i in b:
                return v
        raise KeyError(i)

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(frozenset(b) for b in self.blocks)

    def __bool__(self):
        return bool(self.blocks)

    def __eq__(self, other):
        if not isinstance(other, SetPartition):
            return NotImplemented
        return self.blocks == other.blocks

    def __lt__(self, other):
        return self.blocks < other.blocks

    def __hash__(self):
        return self._hash

    def to_lists(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    def __repr__(self):
        return "SetPartition(" + repr(self.to_lists()) + ")"


EMPTY_PARTITION = SetPartition()


def enumerate_partitions(idx: Iterable[int]) -> list[SetPartition]:
    """All partitions of ``idx`` in restricted-growth-string order."""
    return list(_partitions(tuple(sorted(set(idx)))))


@lru_cache(maxsize=None)
def _partitions(elems: tuple[int, ...]) -> tuple[SetPartition, ...]:
    if not elems:
        return (EMPTY_PARTITION,)
    out = []
    n = len(elems)
    rgs = [0] * n
    while True:
        blocks: list[list[int]] = []
        for x, g in zip(elems, rgs):
            if g == len(blocks):
                blocks.append([])
            blocks[g].append(x)
        out.append(SetPartition(blocks))
        # next restricted growth string
        i = n - 1
        while i > 0:
            if rgs[i] <= max(rgs[:i]):
                rgs[i] += 1
                for j in range(i + 1, n):
                    rgs[j] = 0
                break
            i -= 1
        else:
            return tuple(out)


def ordered_blocks(K: SetPartition) -> tuple[tuple[int, ...], ...]:
    if not K:
        raise ValueError("no ordered form of empty partition")
    return K.blocks


def bell(n: int) -> int:
    """Bell number via B_{k+1} = sum_j C(k, j) B_j."""
    b = [1]
    for k in range(n):
        b.append(sum(comb(k, j) * b[j] for j in range(k + 1)))
    return b[n]


@dataclass(frozen=True, order=True)
class Cell:
    """Cell ``(e, K)`` of n-tuples relative to a frame of size ``q``."""

    e: tuple[int, ...]
    K: SetPartition
    q: int

    def __post_init__(self):
        n, q = len(self.e), self.q
        if n < 1:
            raise ValueError("arity must be positive")
        if q < 0 or any(not 1 <= x <= q + 1 for x in self.e):
            raise ValueError(f"index vector {self.e} out of range for q={q}")
        if self.K.ground != self.idx:
            raise ValueError(f"K={self.K.to_lists()} does not partition idx_e={sorted(self.idx)}")

    @property
    def n(self) -> int:
        return len(self.e)

    @property
    def idx(self) -> frozenset[int]:
        return frozenset(j + 1 for j, x in enumerate(self.e) if x == self.q + 1)

    @property
    def is_finite(self) -> bool:
        """A cell is a single tuple iff it has no fresh positions."""
        return not self.K

    def key(self) -> str:
        return f"e={list(self.e)};K={self.K.to_lists()}".replace(" ", "")

    def __repr__(self):
        return f"Cell({self.key()}, q={self.q})"


def cell_from_key(key: str, q: int) -> Cell:
    import json

    e_part, k_part = key.split(";")
    if not e_part.startswith("e=") or not k_part.startswith("K="):
        raise ValueError(f"malformed cell key {key!r}")
    return Cell(tuple(json.loads(e_part[2:])), SetPartition(json.loads(k_part[2:])), q)


def count_cells(n: int, q: int) -> int:
    return sum(comb(n, k) * q ** (n - k) * bell(k) for k in range(n + 1))


@lru_cache(maxsize=None)
def _cells(n: int, q: int) -> tuple[Cell, ...]:
    out = []
    for e in product(range(1, q + 2), repeat=n):
        idx = [j + 1 for j, x in enumerate(e) if x == q + 1]
        for K in _partitions(tuple(idx)):
            out.append(Cell(e, K, q))
    return tuple(out)


def enumerate_cells(n: int, q: int) -> list[Cell]:
    """All cells for arity n and frame size q, lexicographic in e then RGS order of K."""
    if n < 1:
        raise ValueError("arity must be positive")
    if q < 0:
        raise ValueError("support size must be non-negative")
    return list(_cells(n, q))


def classify(t: Sequence[int], frame: Sequence[int]) -> Cell:
    if len(t) < 1:
        raise ValueError("arity must be positive")
    q = len(frame)
    pos = {a: i + 1 for i, a in enumerate(frame)}
    e = []
    groups: dict[int, list[int]] = {}
    for j, a in enumerate(t, start=1):
        p = pos.get(a)
        if p is None:
            e.append(q + 1)
            groups.setdefault(a, []).append(j)
        else:
            e.append(p)
    return Cell(tuple(e), SetPartition(groups.values()), q)


def check_fresh_tuple(frame: Sequence[int], mu: Sequence[int], need: int) -> None:
    if len(mu) < need or len(set(mu)) != len(mu) or set(mu) & set(frame):
        raise ValueError("invalid fresh tuple")


def representative(frame: Sequence[int], mu: Sequence[int], cell: Cell) -> tuple[int, ...]:
    """The canonical member of ``cell``: frame atoms by index, block i gets mu_i."""
    if cell.q != len(frame):
        raise ValueError(f"cell is for frames of size {cell.q}, frame has {len(frame)}")
    check_fresh_tuple(frame, mu, len(cell.K))
    out = []
    blocks = cell.K.blocks
    for j, x in enumerate(cell.e, start=1):
        if x <= cell.q:
            out.append(frame[x - 1])
        else:
            out.append(mu[next(v for v, b in enumerate(blocks) if j in b)])
    return tuple(out)


def default_mu(frame: Sequence[int], n: int) -> tuple[int, ...]:
    """The n least atoms outside the frame, ascending."""
    return fresh_atoms(frame, n)
