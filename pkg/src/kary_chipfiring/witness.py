"""Explicit strategies that put a chosen chip at a chosen landing order.

The construction works one layer at a time. At the root it builds a
domination-respecting assignment of all chips to layer-2 slots with the
chip at a feasible slot ``(t_1, z)``, turns the assignment into root fires,
and then solves the same problem inside the subtree of ``v_{t_1}``, where
the chip is the ``z``-th smallest of the ``k**(n-1)`` chips present.
"""

from __future__ import annotations

from typing import Sequence

from .engine import FireEvent, Strategy, canonical_strategy, run_strategy
from .errors import DominationViolated, InternalInfeasible, OutOfRange
from .formulas import largest_chip, smallest_chip
from .tree import (
    GameParams,
    LandingOrder,
    TraversalError,
    check_landing_order,
    chips_per_vertex,
    landing_orders,
    string_dominates,
)

Layer2Assignment = dict[LandingOrder, int]


def layer2_assignment(target: LandingOrder, c: int, params: GameParams) -> Layer2Assignment:
    """Assign every chip to a layer-2 slot, with ``c`` at ``target``.

    Chips below ``a(target)`` fill the slots ``target`` dominates, chips above
    ``b(target)`` fill the slots dominating it, and the remaining chips fill
    what is left; each group is laid out left to right.
    """
    target = check_landing_order(target, params)
    if len(target.t) != 1:
        raise TraversalError("layer-2 targets have a single-digit traversal string")
    lo = smallest_chip(target.t, target.x, params)
    hi = largest_chip(target.t, target.x, params)
    if not lo <= c <= hi:
        raise OutOfRange(f"chip {c} cannot land at {target}; feasible chips are [{lo}, {hi}]")

    slots = list(landing_orders(2, params))
    below = [s for s in slots if s != target and _dom(s, target)]
    above = [s for s in slots if s != target and _dom(target, s)]
    taken = set(below) | set(above) | {target}
    rest = [s for s in slots if s not in taken]

    assign: Layer2Assignment = {}
    assign.update(zip(below, range(1, lo)))
    assign.update(zip(above, range(hi + 1, params.total_chips + 1)))
    assign[target] = c
    assign.update(zip(rest, [v for v in range(lo, hi + 1) if v != c]))
    assert len(assign) == params.total_chips
    return assign


def _dom(a: LandingOrder, b: LandingOrder) -> bool:
    return a.x <= b.x and string_dominates(a.t, b.t)


def check_assignment(assign: Layer2Assignment, params: GameParams):
    """Raise unless ``assign`` is a bijection onto the chips that respects domination."""
    k = params.k
    per_child = chips_per_vertex(2, params)
    if sorted(assign.values()) != list(range(1, params.total_chips + 1)):
        raise DominationViolated("assignment is not a bijection onto the chips")
    for j in range(1, k + 1):
        for x in range(1, per_child + 1):
            here = assign[LandingOrder((j,), x)]
            # covering relations generate the whole order
            if x < per_child and here >= assign[LandingOrder((j,), x + 1)]:
                raise DominationViolated(f"slot ({j},{x}) holds {here}, not below ({j},{x + 1})")
            if j < k and here >= assign[LandingOrder((j + 1,), x)]:
                raise DominationViolated(f"slot ({j},{x}) holds {here}, not below ({j + 1},{x})")


def assignment_to_fires(assign: Layer2Assignment, params: GameParams) -> list[FireEvent]:
    """Root fires realising a domination-respecting layer-2 assignment.

    The x-th fire carries the chips assigned to ``(1, x), ..., (k, x)``.
    """
    check_assignment(assign, params)
    per_child = chips_per_vertex(2, params)
    return [
        FireEvent((), [assign[LandingOrder((j,), x)] for j in range(1, params.k + 1)])
        for x in range(1, per_child + 1)
    ]


def _witness_fires(t: tuple[int, ...], x: int, c: int, params: GameParams) -> list[FireEvent]:
    # labels are ranks 1..k**n within the current subtree
    if not t:
        return list(canonical_strategy(params).fires)
    sub = params.sub()
    head, rest = t[0], t[1:]
    if rest:
        window = range(smallest_chip(rest, x, sub), largest_chip(rest, x, sub) + 1)
        z = next(
            (z for z in window
             if smallest_chip((head,), z, params) <= c <= largest_chip((head,), z, params)),
            None,
        )
        if z is None:
            raise InternalInfeasible(f"no layer-2 rank for chip {c} toward {t}, rank {x}")
    else:
        z = x
    assign = layer2_assignment(LandingOrder((head,), z), c, params)
    fires = assignment_to_fires(assign, params)
    per_child = chips_per_vertex(2, params)
    for j in range(1, params.k + 1):
        chips = [assign[LandingOrder((j,), r)] for r in range(1, per_child + 1)]
        if j == head and rest:
            below = _witness_fires(rest, x, z, sub)
        else:
            below = canonical_strategy(sub).fires
        for f in below:
            fires.append(FireEvent((j,) + f.vertex, [chips[r - 1] for r in f.chips]))
    return fires


def witness_strategy(t: Sequence[int], x: int, c: int, params: GameParams) -> Strategy:
    """A complete layered strategy whose run puts chip ``c`` at landing order ``(t, x)``."""
    o = check_landing_order(LandingOrder(tuple(t), x), params)
    lo, hi = smallest_chip(o.t, o.x, params), largest_chip(o.t, o.x, params)
    if not lo <= c <= hi:
        raise OutOfRange(f"chip {c} cannot land at {o}; feasible chips are [{lo}, {hi}]")
    fires = _witness_fires(o.t, o.x, c, params)
    # each subtree's fires are layered already; a stable sort interleaves them
    fires.sort(key=lambda f: len(f.vertex))
    return Strategy(params, tuple(fires))


def verify_witness(strategy: Strategy, t: Sequence[int], x: int, c: int) -> bool:
    """Run ``strategy`` and report whether chip ``c`` ends up at ``(t, x)``."""
    result = run_strategy(strategy.params, strategy)
    return result.landing_at(c, len(t) + 1) == LandingOrder(tuple(t), x)
