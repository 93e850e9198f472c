"""Exhaustive ground truth for small games.

Fire order inside one vertex does not matter once the k-sets are fixed, so a
strategy is a choice of partition into k-sets at every vertex. A subtree's
behaviour depends only on the ranks of the chips it receives, which lets every
recursive table be keyed by depth alone and relabelled on the way out.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Iterable, Iterator, Sequence

from .engine import FireEvent, Strategy
from .errors import ChipFiringError, NotAPermutation, ScopeExceeded
from .formulas import landing_range
from .tree import Digits, GameParams, LandingOrder, check_landing_order, format_traversal, strings

DEFAULT_GUARD = 9
REACHABILITY_GUARD = 16


@dataclass(frozen=True)
class EnumerationScope:
    params: GameParams
    max_total_chips: int = DEFAULT_GUARD

    def check(self):
        if self.params.total_chips > self.max_total_chips:
            raise ScopeExceeded(
                f"k**n = {self.params.total_chips} exceeds the enumeration guard "
                f"{self.max_total_chips}"
            )


def count_partitions(size: int, k: int) -> int:
    blocks = size // k
    return factorial(size) // (factorial(k) ** blocks * factorial(blocks))


def set_partitions_into_k_blocks(chips: Iterable[int], k: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Yield every partition of ``chips`` into unordered blocks of size ``k``.

    Blocks are sorted tuples, listed by their smallest element, so each
    partition is produced exactly once.
    """
    items = tuple(sorted(chips))
    if len(items) % k:
        raise ChipFiringError(f"{len(items)} chips cannot be split into blocks of {k}")

    def rec(rest):
        if not rest:
            yield ()
            return
        first, others = rest[0], rest[1:]
        for mates in combinations(range(len(others)), k - 1):
            block = (first,) + tuple(others[i] for i in mates)
            left = tuple(v for i, v in enumerate(others) if i not in mates)
            for tail in rec(left):
                yield (block,) + tail

    yield from rec(items)


def child_sets(size: int, k: int) -> set[tuple[tuple[int, ...], ...]]:
    """Distinct ways one vertex holding ranks ``1..size`` can split its chips among children."""
    out = set()
    for part in set_partitions_into_k_blocks(range(1, size + 1), k):
        out.add(tuple(tuple(sorted(block[j] for block in part)) for j in range(k)))
    return out


@lru_cache(maxsize=None)
def _child_sets_cached(size: int, k: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    return tuple(sorted(child_sets(size, k)))


@lru_cache(maxsize=None)
def _patterns(k: int, depth: int) -> frozenset[tuple[int, ...]]:
    # stable permutations of ranks 1..k**depth for a subtree of the given depth
    if depth == 0:
        return frozenset({(1,)})
    sub = _patterns(k, depth - 1)
    out = set()
    for split in _child_sets_cached(k**depth, k):
        out.update(_combine(split, sub))
    return frozenset(out)


def _combine(split, sub):
    perms = [()]
    for chips in split:
        relabelled = [tuple(chips[r - 1] for r in p) for p in sub]
        perms = [head + tail for head in perms for tail in relabelled]
    return perms


def _patterns_for_splits(args):
    k, depth, splits = args
    sub = _patterns(k, depth - 1)
    out = set()
    for split in splits:
        out.update(_combine(split, sub))
    return out


def enumerate_stable(scope: EnumerationScope, workers: int = 1) -> set[tuple[int, ...]]:
    """Every stable permutation reachable by some strategy.

    With ``workers > 1`` the root splits are divided among processes and the
    results merged by set union.
    """
    scope.check()
    k, n = scope.params.k, scope.params.n
    if workers <= 1 or n == 0:
        return set(_patterns(k, n))
    splits = _child_sets_cached(k**n, k)
    chunks = [(k, n, splits[i::workers]) for i in range(workers)]
    out: set[tuple[int, ...]] = set()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_patterns_for_splits, chunks):
            out |= part
    return out


@lru_cache(maxsize=None)
def _vertex_sets(k: int, depth: int, t: Digits) -> frozenset[tuple[int, ...]]:
    # chip sets (as ranks of 1..k**depth) that can arrive at v_t
    if not t:
        return frozenset({tuple(range(1, k**depth + 1))})
    out = set()
    inner = _vertex_sets(k, depth - 1, t[1:])
    for split in _child_sets_cached(k**depth, k):
        chips = split[t[0] - 1]
        for ranks in inner:
            out.add(tuple(chips[r - 1] for r in ranks))
    return frozenset(out)


def reachable_chips(o: LandingOrder, scope: EnumerationScope) -> set[int]:
    """Every chip that some strategy places at landing order ``o``."""
    scope.check()
    o = check_landing_order(o, scope.params)
    return {chips[o.x - 1] for chips in _vertex_sets(scope.params.k, scope.params.n, o.t)}


def reachable_leaf_sets(scope: EnumerationScope) -> dict[int, set[Digits]]:
    """For each chip, the terminal vertices it occupies in some stable permutation."""
    leaves = list(strings(scope.params.n, scope.params))
    out: dict[int, set[Digits]] = {c: set() for c in range(1, scope.params.total_chips + 1)}
    for perm in enumerate_stable(scope):
        for t, c in zip(leaves, perm):
            out[c].add(t)
    return out


@dataclass
class Certificate:
    reachable: bool
    strategy: Strategy | None = None
    reason: str = ""


def _check_permutation(perm: Sequence[int], params: GameParams) -> tuple[int, ...]:
    perm = tuple(perm)
    if sorted(perm) != list(range(1, params.total_chips + 1)):
        raise NotAPermutation(f"expected a permutation of 1..{params.total_chips}")
    return perm


def _split_search(chips: tuple[int, ...], targets: list[list[int]], k: int):
    """Depth-first search for k-blocks sending targets[j] to child j.

    Blocks are built smallest-first. A block must take one chip from every
    child, increasing with the child index; the smallest unused chip overall
    always belongs to child 1 in its block, otherwise no block can hold it.
    """
    owner = {c: j for j, group in enumerate(targets) for c in group}
    blocks: list[tuple[int, ...]] = []
    used: set[int] = set()

    def rec():
        free = [c for c in chips if c not in used]
        if not free:
            return True
        first = free[0]
        if owner[first] != 0:
            return False
        used.add(first)
        block = [first]
        # enumerate every completion of this block before backtracking
        for completion in _completions(block, targets, used, k):
            for c in completion[1:]:
                used.add(c)
            blocks.append(tuple(completion))
            if rec():
                return True
            blocks.pop()
            for c in completion[1:]:
                used.discard(c)
        used.discard(first)
        return False

    if rec():
        return blocks
    return None


def _completions(block, targets, used, k):
    j = len(block)
    if j == k:
        yield list(block)
        return
    for c in targets[j]:
        if c in used or c <= block[-1] or c in block:
            continue
        yield from _completions(block + [c], targets, used, k)


def _domination_ok(targets: list[list[int]]) -> bool:
    # necessary: x-th smallest of child j is below the x-th smallest of child j+1
    return all(a < b for left, right in zip(targets, targets[1:]) for a, b in zip(left, right))


def reachability_certificate(
    perm: Sequence[int], scope: EnumerationScope, prune: bool = True
) -> Certificate:
    """Decide whether ``perm`` is a stable permutation, with a strategy if it is.

    The chips passing through ``v_t`` are exactly the leaves below it, so the
    search runs vertex by vertex over k-set partitions. Two prunes apply
    before any search: every leaf chip must lie in its landing range, and at
    every internal vertex the children's sorted chip lists must be pointwise
    increasing (layer-2 domination applied inside that subtree).
    ``prune=False`` skips both and leaves the decision to the search alone.
    """
    scope.check()
    params = scope.params
    k, n = params.k, params.n
    perm = _check_permutation(perm, params)
    leaves = list(strings(n, params))
    for t, c in zip(leaves, perm):
        if prune and c not in landing_range(t, params):
            return Certificate(False, reason=f"chip {c} lies outside the landing range of {format_traversal(t)}")

    fires: list[FireEvent] = []
    for depth in range(n):
        width = k ** (n - depth)
        for v_idx, t in enumerate(strings(depth, params)):
            here = perm[v_idx * width:(v_idx + 1) * width]
            part = width // k
            targets = [sorted(here[j * part:(j + 1) * part]) for j in range(k)]
            label = format_traversal(t) or "root"
            if prune and not _domination_ok(targets):
                return Certificate(False, reason=f"children of {label} violate domination")
            blocks = _split_search(tuple(sorted(here)), targets, k)
            if blocks is None:
                return Certificate(False, reason=f"no k-set partition at {label}")
            fires.extend(FireEvent(t, b) for b in blocks)
    return Certificate(True, Strategy(params, tuple(fires)))


def is_reachable(perm: Sequence[int], scope: EnumerationScope, prune: bool = True) -> bool:
    return reachability_certificate(perm, scope, prune).reachable


def reachability_scope(params: GameParams, guard: int = REACHABILITY_GUARD) -> EnumerationScope:
    return EnumerationScope(params, guard)
