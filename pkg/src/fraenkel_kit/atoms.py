"""Atoms and finitely supported permutations of the atom domain.

Atoms are plain non-negative ints standing for the individuals of an
infinite domain.  A permutation is stored sparsely: only the points it moves.
"""

from __future__ import annotations

from typing import Iterable, Mapping

Atom = int
AtomSet = frozenset


def atom_set(atoms: Iterable[int] = ()) -> frozenset[int]:
    out = frozenset(atoms)
    for a in out:
        if not isinstance(a, int) or a < 0:
            raise ValueError(f"atoms are non-negative ints, got {a!r}")
    return out


def fresh_atoms(avoid: Iterable[int], k: int) -> tuple[int, ...]:
    """The ``k`` least naturals outside ``avoid``, ascending."""
    avoid = set(avoid)
    out = []
    a = 0
    while len(out) < k:
        if a not in avoid:
            out.append(a)
        a += 1
    return tuple(out)


class FinPerm:
    """A permutation of the atoms moving finitely many points."""

    __slots__ = ("_map", "_hash")

    def __init__(self, mapping: Mapping[int, int] | None = None):
        m = {a: b for a, b in (mapping or {}).items() if a != b}
        if set(m) != set(m.values()):
            raise ValueError("mapping is not a bijection of its moved points")
        self._map = m
        self._hash = None

    @property
    def moved(self) -> dict[int, int]:
        return dict(self._map)

    def support(self) -> frozenset[int]:
        return frozenset(self._map)

    def __call__(self, a: int) -> int:
        return self._map.get(a, a)

    def apply_tuple(self, t: Iterable[int]) -> tuple[int, ...]:
        m = self._map
        return tuple(m.get(a, a) for a in t)

    def inverse(self) -> FinPerm:
        return FinPerm({b: a for a, b in self._map.items()})

    def __mul__(self, other: FinPerm) -> FinPerm:
        # (self * other)(x) = self(other(x))
        pts = set(self._map) | set(other._map)
        return FinPerm({x: self(other(x)) for x in pts})

    def is_identity(self) -> bool:
        return not self._map

    def fixes_pointwise(self, atoms: Iterable[int]) -> bool:
        m = self._map
        return all(a not in m for a in atoms)

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for a in sorted(self._map):
            if a in seen:
                continue
            cyc = [a]
            seen.add(a)
            b = self._map[a]
            while b != a:
                cyc.append(b)
                seen.add(b)
                b = self._map[b]
            out.append(tuple(cyc))
        return out

    def __eq__(self, other):
        if not isinstance(other, FinPerm):
            return NotImplemented
        return self._map == other._map

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def __repr__(self):
        if not self._map:
            return "FinPerm()"
        return "FinPerm(" + "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles()) + ")"


IDENTITY = FinPerm()


def identity() -> FinPerm:
    return IDENTITY


def transposition(a: int, b: int) -> FinPerm:
    if a == b:
        raise ValueError("degenerate transposition")
    return FinPerm({a: b, b: a})


def cycle(*atoms: int) -> FinPerm:
    """The cyclic permutation a1 -> a2 -> ... -> ak -> a1."""
    if len(set(atoms)) != len(atoms):
        raise ValueError("cycle entries must be distinct")
    k = len(atoms)
    return FinPerm({atoms[i]: atoms[(i + 1) % k] for i in range(k)})


def compose(p: FinPerm, q: FinPerm) -> FinPerm:
    """compose(p, q)(x) == p(q(x))."""
    return p * q


def inverse(p: FinPerm) -> FinPerm:
    return p.inverse()


def apply_tuple(p: FinPerm, t: Iterable[int]) -> tuple[int, ...]:
    return p.apply_tuple(t)


def fixes_pointwise(p: FinPerm, atoms: Iterable[int]) -> bool:
    return p.fixes_pointwise(atoms)
