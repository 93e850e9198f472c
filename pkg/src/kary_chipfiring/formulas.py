"""Closed forms: extremal chips per landing order, landing ranges, spreads, groups.

Every quantity here is exact integer arithmetic. Landing ranges depend only on
the multiset of digits in a traversal string, so whole-game scans iterate over
digit multisets (``combinations_with_replacement``) rather than all ``k**n``
terminal strings.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import prod
from typing import Iterator, Sequence

from .errors import ChipFiringError, TrivialChip
from .tree import (
    Digits,
    GameParams,
    LandingOrder,
    TraversalError,
    check_landing_order,
    check_traversal,
    chips_per_vertex,
    is_trivial_string,
    reflect,
    strings,
)


@dataclass(frozen=True)
class LandingRange:
    t: Digits
    lo: int
    hi: int

    @property
    def length(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, chip: int) -> bool:
        return self.lo <= chip <= self.hi


@dataclass(frozen=True)
class SpreadProfile:
    c: int
    m: int
    y: int
    j: int
    x: int
    leftmost: Digits
    rightmost: Digits
    spread: int


@dataclass(frozen=True)
class GroupPartition:
    boundaries: tuple[int, ...]
    groups: tuple[tuple[int, int], ...]  # inclusive (first, last) chip of each group

    def group_of(self, chip: int) -> int:
        for i, (lo, hi) in enumerate(self.groups):
            if lo <= chip <= hi:
                return i
        raise KeyError(chip)

    def starts(self) -> tuple[int, ...]:
        return tuple(lo for lo, _ in self.groups)


@dataclass(frozen=True)
class ExtremeRanges:
    shortest: int | None
    shortest_witnesses: tuple[Digits, ...]
    longest: int
    longest_witnesses: tuple[Digits, ...]


@dataclass(frozen=True)
class SpreadExtreme:
    spread: int
    chips: tuple[int, ...]


@dataclass(frozen=True)
class ExtremeSpreads:
    smallest: SpreadExtreme
    second_smallest: SpreadExtreme
    largest: SpreadExtreme


def smallest_chip(t: Sequence[int], x: int, params: GameParams) -> int:
    """Smallest chip that can occupy landing order ``(t, x)``."""
    o = check_landing_order(LandingOrder(tuple(t), x), params)
    return o.x * prod(o.t)


def largest_chip(t: Sequence[int], x: int, params: GameParams) -> int:
    """Largest chip that can occupy landing order ``(t, x)``."""
    o = check_landing_order(LandingOrder(tuple(t), x), params)
    k = params.k
    cap = chips_per_vertex(len(o.t) + 1, params)
    return params.total_chips + 1 - (cap + 1 - o.x) * prod(k + 1 - d for d in o.t)


def largest_chip_by_reflection(t: Sequence[int], x: int, params: GameParams) -> int:
    """Same value as :func:`largest_chip`, routed through the mirror slot."""
    r = reflect(LandingOrder(tuple(t), x), params)
    return params.total_chips + 1 - smallest_chip(r.t, r.x, params)


def landing_range(t: Sequence[int], params: GameParams) -> LandingRange:
    t = check_traversal(t, params)
    if len(t) != params.n:
        raise TraversalError(f"landing ranges are defined for strings of length n={params.n}")
    return LandingRange(t, smallest_chip(t, 1, params), largest_chip(t, 1, params))


def digit_multisets(params: GameParams) -> Iterator[Digits]:
    """One sorted representative per terminal digit multiset."""
    return combinations_with_replacement(range(1, params.k + 1), params.n)


def terminal_ranges(params: GameParams, by_multiset: bool = False) -> list[LandingRange]:
    source = digit_multisets(params) if by_multiset else strings(params.n, params)
    return [landing_range(t, params) for t in source]


def extreme_range_lengths(params: GameParams) -> ExtremeRanges:
    """Shortest nontrivial and longest landing-range lengths with witness strings.

    For ``n == 1`` every leaf is trivial: ``shortest`` is None with no witnesses.
    """
    k, n = params.k, params.n
    if n < 1:
        raise ChipFiringError("range lengths need n >= 1")
    half_down, half_up = n // 2, (n + 1) // 2
    longest = k**n + 2 - k**half_down - k**half_up
    longest_w = sorted({(1,) * half_down + (k,) * half_up, (1,) * half_up + (k,) * half_down})
    if n == 1:
        return ExtremeRanges(None, (), longest, tuple(longest_w))
    shortest_w = sorted({(1,) * (n - 1) + (2,), (k - 1,) + (k,) * (n - 1)})
    return ExtremeRanges(k ** (n - 1), tuple(shortest_w), longest, tuple(longest_w))


def scan_range_lengths(params: GameParams) -> ExtremeRanges:
    """Brute-force counterpart of :func:`extreme_range_lengths` over every terminal string.

    Witnesses are returned as sorted digit multisets.
    """
    if params.n < 1:
        raise ChipFiringError("range lengths need n >= 1")
    lengths = {}
    for t in digit_multisets(params):
        if params.n == 1 or not is_trivial_string(t, params):
            lengths[t] = landing_range(t, params).length
    if params.n == 1:
        longest = max(lengths.values())
        return ExtremeRanges(None, (), longest, tuple(t for t, v in lengths.items() if v == longest))
    lo, hi = min(lengths.values()), max(lengths.values())
    return ExtremeRanges(
        lo, tuple(t for t, v in lengths.items() if v == lo),
        hi, tuple(t for t, v in lengths.items() if v == hi),
    )


def _check_chip(c: int, params: GameParams):
    if not 1 <= c <= params.total_chips:
        raise ChipFiringError(f"chip {c} outside [1, {params.total_chips}]")


def chip_lands_at(c: int, t: Sequence[int], params: GameParams) -> bool:
    _check_chip(c, params)
    return c in landing_range(t, params)


def ilog(value: int, base: int) -> int:
    """``floor(log_base(value))`` by repeated division."""
    if value < 1:
        raise ValueError("ilog needs a positive value")
    e = 0
    while value >= base:
        value //= base
        e += 1
    return e


def spread_profile(c: int, params: GameParams) -> SpreadProfile:
    """Leftmost and rightmost terminal vertices a nontrivial chip can reach."""
    _check_chip(c, params)
    k, n, total = params.k, params.n, params.total_chips
    if c in (1, total):
        raise TrivialChip(f"chip {c} is trivial; its spread is 1")
    m = ilog(c, k)
    y = c // k**m
    mirror = total + 1 - c
    j = ilog(mirror, k)
    x = k + 1 - mirror // k**j
    leftmost = (1,) * j + (x,) + (k,) * (n - 1 - j)
    rightmost = (k,) * m + (y,) + (1,) * (n - m - 1)
    spread = 2 + (y - 1) * k ** (n - m - 1) + k**n - k ** (n - m) - x * k ** (n - 1 - j)
    return SpreadProfile(c, m, y, j, x, leftmost, rightmost, spread)


def chip_spread(c: int, params: GameParams) -> int:
    """Spread of any chip, 1 for the two trivial chips."""
    _check_chip(c, params)
    if c in (1, params.total_chips):
        return 1
    return spread_profile(c, params).spread


def reachable_leaves(c: int, params: GameParams) -> list[Digits]:
    """Every terminal string whose landing range contains ``c``, left to right."""
    _check_chip(c, params)
    return [t for t in strings(params.n, params) if c in landing_range(t, params)]


def extreme_spreads(params: GameParams) -> ExtremeSpreads:
    """Smallest, second smallest and largest spreads with the chips attaining them.

    The largest spread ``k**n - k`` is attained by ``y*k**(n-1)`` and
    ``y*k**(n-1) + 1`` for every leading digit ``y`` in ``1..k-1``; for
    ``k <= 3`` that is the familiar two- or four-chip set.
    """
    k, n = params.k, params.n
    if n < 2:
        raise ChipFiringError("spread extremes need n >= 2 (every spread is 1 below that)")
    total = k**n
    top = k ** (n - 1)
    smallest = SpreadExtreme(1, (1, total))
    if k == 2:
        second = SpreadExtreme(top, tuple(sorted({2, 3, total - 2, total - 1})))
    else:
        second = SpreadExtreme(top, (2, total - 1))
    largest_chips = sorted({c for y in range(1, k) for c in (y * top, y * top + 1)})
    return ExtremeSpreads(smallest, second, SpreadExtreme(total - k, tuple(largest_chips)))


def scan_spreads(params: GameParams) -> ExtremeSpreads:
    """Extremes found by evaluating :func:`chip_spread` on every chip."""
    if params.n < 2:
        raise ChipFiringError("spread extremes need n >= 2")
    by_value: dict[int, list[int]] = {}
    for c in range(1, params.total_chips + 1):
        by_value.setdefault(chip_spread(c, params), []).append(c)
    values = sorted(by_value)
    pick = lambda v: SpreadExtreme(v, tuple(by_value[v]))
    return ExtremeSpreads(pick(values[0]), pick(values[1]), pick(values[-1]))


def group_boundaries(params: GameParams) -> tuple[int, ...]:
    if params.n < 1:
        raise ChipFiringError("groups need n >= 1")
    out = set()
    for r in terminal_ranges(params, by_multiset=True):
        out.update((r.lo, r.hi))
    return tuple(sorted(out))


def landing_signature(c: int, params: GameParams) -> tuple[bool, ...]:
    """Membership of ``c`` in each multiset's landing range.

    Two chips reach the same terminal vertices iff their signatures match,
    because ranges are constant on digit-permutation classes.
    """
    return tuple(r.lo <= c <= r.hi for r in terminal_ranges(params, by_multiset=True))


def group_partition(params: GameParams) -> GroupPartition:
    """Maximal runs of consecutive chips that reach identical sets of terminal vertices."""
    if params.n < 1:
        raise ChipFiringError("groups need n >= 1")
    ranges = terminal_ranges(params, by_multiset=True)
    groups = []
    start, prev = 1, None
    for c in range(1, params.total_chips + 1):
        sig = tuple(r.lo <= c <= r.hi for r in ranges)
        if prev is not None and sig != prev:
            groups.append((start, c - 1))
            start = c
        prev = sig
    groups.append((start, params.total_chips))
    return GroupPartition(group_boundaries(params), tuple(groups))


def same_landing_set_binary(c1: int, c2: int, n: int) -> bool:
    """Bit-length characterisation of equal landing sets for ``k == 2``."""
    total = 2**n
    bits = lambda v: v.bit_length()
    if bits(c1) < n and bits(c1) == bits(c2):
        return True
    m1, m2 = total + 1 - c1, total + 1 - c2
    if bits(m1) < n and bits(m1) == bits(m2):
        return True
    if {c1, c2} == {total // 2, total // 2 + 1}:
        return True
    return c1 == c2


def binary_groups(n: int) -> tuple[tuple[int, int], ...]:
    """Groups for ``k == 2`` derived only from :func:`same_landing_set_binary`."""
    groups = []
    start = 1
    for c in range(2, 2**n + 1):
        if not same_landing_set_binary(start, c, n):
            groups.append((start, c - 1))
            start = c
    groups.append((start, 2**n))
    return tuple(groups)


@dataclass(frozen=True)
class BoundaryDiagnostic:
    agree: bool
    boundaries_not_starting_group: tuple[int, ...]
    group_starts_not_in_boundaries: tuple[int, ...]
    # a-values together with b+1 (the first chip past each range)
    shifted_agree: bool


def boundary_diagnostic(params: GameParams) -> BoundaryDiagnostic:
    """Compare the raw boundary set with the group starts found by comparison.

    A range ``[a, b]`` stops admitting chips after ``b``, so the change it
    causes shows up at ``b + 1``. ``shifted_agree`` checks that reading.
    """
    part = group_partition(params)
    starts = set(part.starts())
    bounds = set(part.boundaries)
    shifted = set()
    for r in terminal_ranges(params, by_multiset=True):
        shifted.add(r.lo)
        if r.hi < params.total_chips:
            shifted.add(r.hi + 1)
    return BoundaryDiagnostic(
        agree=starts == bounds,
        boundaries_not_starting_group=tuple(sorted(bounds - starts)),
        group_starts_not_in_boundaries=tuple(sorted(starts - bounds)),
        shifted_agree=starts == shifted,
    )
