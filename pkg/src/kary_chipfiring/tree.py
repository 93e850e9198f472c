"""Coordinate algebra for the infinite directed k-ary tree.

Vertices are never materialised. A vertex is addressed by its traversal
string, a tuple of digits in ``1..k`` (the empty tuple is the root), and a
chip's position once its layer has filled is a ``LandingOrder`` (string plus
rank among the chips at that vertex).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

from .errors import ChipFiringError

MAX_CHIPS = 2**63

Digits = tuple[int, ...]


class TraversalError(ChipFiringError):
    """Malformed traversal string or landing order."""


@dataclass(frozen=True)
class GameParams:
    """Branching factor ``k`` and depth exponent ``n``; the game has ``k**n`` chips."""

    k: int
    n: int

    def __post_init__(self):
        if self.k < 2:
            raise ChipFiringError(f"k must be at least 2, got {self.k}")
        if self.n < 0:
            raise ChipFiringError(f"n must be non-negative, got {self.n}")
        if self.k**self.n >= MAX_CHIPS:
            raise ChipFiringError(f"k**n = {self.k}**{self.n} does not fit in 63 bits")

    @property
    def total_chips(self) -> int:
        return self.k**self.n

    def sub(self) -> "GameParams":
        """Parameters of the game played inside a child subtree of the root."""
        return GameParams(self.k, self.n - 1)


@dataclass(frozen=True, order=True)
class LandingOrder:
    t: Digits
    x: int

    def __str__(self):
        return f"({format_traversal(self.t) or 'root'},{self.x})"


def check_traversal(t: Sequence[int], params: GameParams) -> Digits:
    t = tuple(t)
    if len(t) > params.n:
        raise TraversalError(f"traversal string of length {len(t)} exceeds n={params.n}")
    for d in t:
        if not 1 <= d <= params.k:
            raise TraversalError(f"digit {d} outside [1, {params.k}]")
    return t


def parse_traversal(text: str, params: GameParams) -> Digits:
    """Parse ``"12"`` (k <= 9) or ``"10.2.1"`` (any k) into a digit tuple.

    >>> parse_traversal("12", GameParams(3, 3))
    (1, 2)
    """
    text = text.strip()
    if not text:
        return ()
    if "." in text or params.k >= 10:
        parts = text.split(".")
    else:
        parts = list(text)
    try:
        digits = [int(p) for p in parts]
    except ValueError:
        raise TraversalError(f"not a traversal string: {text!r}") from None
    return check_traversal(digits, params)


def format_traversal(t: Sequence[int]) -> str:
    if any(d >= 10 for d in t):
        return ".".join(str(d) for d in t)
    return "".join(str(d) for d in t)


def chips_per_vertex(layer: int, params: GameParams) -> int:
    """Number of chips each vertex of ``layer`` receives (layer 1 is the root)."""
    if not 1 <= layer <= params.n + 1:
        raise TraversalError(f"layer {layer} outside [1, {params.n + 1}]")
    return params.k ** (params.n - layer + 1)


def check_landing_order(o: LandingOrder, params: GameParams) -> LandingOrder:
    t = check_traversal(o.t, params)
    cap = chips_per_vertex(len(t) + 1, params)
    if not 1 <= o.x <= cap:
        raise TraversalError(f"rank {o.x} outside [1, {cap}] for layer {len(t) + 1}")
    return LandingOrder(t, o.x) if t is not o.t else o


def vertex_index(t: Sequence[int], params: GameParams) -> int:
    """1-based left-to-right position of ``v_t`` within its layer."""
    t = check_traversal(t, params)
    idx = 0
    for d in t:
        idx = idx * params.k + (d - 1)
    return idx + 1


def vertex_at(index: int, length: int, params: GameParams) -> Digits:
    """Inverse of :func:`vertex_index` for strings of the given length."""
    k = params.k
    if not 1 <= index <= k**length:
        raise TraversalError(f"vertex index {index} outside [1, {k**length}]")
    rest = index - 1
    digits = []
    for _ in range(length):
        rest, d = divmod(rest, k)
        digits.append(d + 1)
    return tuple(reversed(digits))


def landing_order_index(o: LandingOrder, params: GameParams) -> int:
    """Position of ``o`` among the ``k**n`` landing slots of its layer.

    Each layer-(i+1) vertex holds ``k**(n-i)`` chips, so the digit at depth
    ``l`` contributes ``(t_l - 1) * k**(n-l)``.
    """
    o = check_landing_order(o, params)
    k, n = params.k, params.n
    return sum((d - 1) * k ** (n - pos) for pos, d in enumerate(o.t, start=1)) + o.x


def landing_order_at(index: int, layer: int, params: GameParams) -> LandingOrder:
    """Inverse of :func:`landing_order_index`."""
    if not 1 <= index <= params.total_chips:
        raise TraversalError(f"slot index {index} outside [1, {params.total_chips}]")
    cap = chips_per_vertex(layer, params)
    v, x = divmod(index - 1, cap)
    return LandingOrder(vertex_at(v + 1, layer - 1, params), x + 1)


def reflect_string(t: Sequence[int], params: GameParams) -> Digits:
    return tuple(params.k + 1 - d for d in check_traversal(t, params))


def reflect(o: LandingOrder, params: GameParams) -> LandingOrder:
    """Mirror image of a landing order through the vertical axis at the root."""
    o = check_landing_order(o, params)
    cap = chips_per_vertex(len(o.t) + 1, params)
    return LandingOrder(reflect_string(o.t, params), cap + 1 - o.x)


def string_dominates(t: Sequence[int], u: Sequence[int]) -> bool:
    """True iff ``t`` precedes ``u`` digit-wise (``t`` <= ``u`` in every position)."""
    if len(t) != len(u):
        raise TraversalError("domination compares strings of equal length only")
    return all(a <= b for a, b in zip(t, u))


def dominates(a: LandingOrder, b: LandingOrder) -> bool:
    """True iff ``a`` is dominated by ``b`` (``a`` precedes ``b`` in the poset)."""
    return string_dominates(a.t, b.t) and a.x <= b.x


def strings(length: int, params: GameParams) -> Iterator[Digits]:
    """All traversal strings of ``length`` in left-to-right order."""
    return product(range(1, params.k + 1), repeat=length)


def landing_orders(layer: int, params: GameParams) -> Iterator[LandingOrder]:
    """All landing slots of ``layer`` in left-to-right order."""
    cap = chips_per_vertex(layer, params)
    for t in strings(layer - 1, params):
        for x in range(1, cap + 1):
            yield LandingOrder(t, x)


def is_trivial_string(t: Sequence[int], params: GameParams) -> bool:
    return len(set(t)) <= 1 and (not t or t[0] in (1, params.k))
