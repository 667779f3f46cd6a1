"""Integer vectors under the lexicographic order, plus an order-preserving packing.

A failure aggregate is a tuple of ints of length ``rho + 1``; ``INF`` is the
infeasible value and compares above every vector.

The dynamic program works on *packed* aggregates. With base ``B`` larger
than any entry, ``<p_0, ..., p_rho>`` packs to ``sum_i p_i * B**(rho - i)``.
For aggregates this is ``sum over vertices of B**f(v)``, so the unit vector
for failure number ``i`` packs to ``B**i`` and all correction arithmetic is
plain integer addition. Packing is linear, and for entries in ``[0, B)`` it
is an order isomorphism, so lexicographic minima are integer minima.
"""

from __future__ import annotations

from functools import total_ordering
from typing import Sequence

Vector = tuple[int, ...]


@total_ordering
class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __eq__(self, other) -> bool:
        return other is self

    def __lt__(self, other) -> bool:
        return False

    def __gt__(self, other) -> bool:
        return other is not self

    def __hash__(self) -> int:
        return hash("lexplace.INF")

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def lex_cmp(a, b) -> int:
    """-1, 0 or 1 as ``a`` is lexicographically below, equal to or above ``b``."""
    if a is INF or b is INF:
        return (a is INF) - (b is INF)
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    for x, y in zip(a, b):
        if x != y:
            return -1 if x < y else 1
    return 0


def add(a, b):
    if a is INF or b is INF:
        return INF
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def sub(a, b):
    if a is INF or b is INF:
        return INF
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def scale(k: int, a):
    return INF if a is INF else tuple(k * x for x in a)


def zeros(rho: int) -> Vector:
    return (0,) * (rho + 1)


def unit(i: int, rho: int) -> Vector:
    """Vector with a single 1 at index ``rho - i`` (one vertex with failure number ``i``)."""
    if not 0 <= i <= rho:
        raise ValueError(f"failure number {i} outside [0, {rho}]")
    v = [0] * (rho + 1)
    v[rho - i] = 1
    return tuple(v)


def to_json(a):
    return "inf" if a is INF else list(a)


def from_json(obj):
    return INF if obj == "inf" else tuple(int(x) for x in obj)


class Packing:
    """Packs length-``rho + 1`` vectors with entries in ``[0, base)`` into ints."""

    def __init__(self, rho: int, base: int):
        if base < 2:
            base = 2
        self.rho = rho
        self.base = base
        # POW[i] is the packed unit vector for failure number i
        self.pow: tuple[int, ...] = tuple(base**i for i in range(rho + 1))

    def pack(self, vec: Sequence[int]) -> int:
        if len(vec) != self.rho + 1:
            raise ValueError(f"expected length {self.rho + 1}, got {len(vec)}")
        total = 0
        for x in vec:
            total = total * self.base + x
        return total

    def unpack(self, value: int) -> Vector:
        if value < 0:
            raise ValueError("packed aggregate is negative")
        out = []
        for _ in range(self.rho + 1):
            value, r = divmod(value, self.base)
            out.append(r)
        if value:
            raise ValueError("packed aggregate overflows the base")
        return tuple(reversed(out))
