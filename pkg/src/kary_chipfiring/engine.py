"""Labeled chip-firing on the directed k-ary tree.

A strategy is a layer-ordered list of fire events. Each event names a vertex
and exactly ``k`` chips currently sitting there; the i-th smallest goes to the
i-th child. Running a complete strategy leaves one chip on every layer-(n+1)
vertex, and reading those left to right gives the stable permutation.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import (
    ChipFiringError,
    IncompleteStrategy,
    MissingChip,
    NotLayered,
    StrategyError,
    TerminalVertex,
    WrongArity,
)
from .tree import (
    Digits,
    GameParams,
    LandingOrder,
    check_traversal,
    format_traversal,
    parse_traversal,
    strings,
)


@dataclass(frozen=True)
class FireEvent:
    vertex: Digits
    chips: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertex", tuple(self.vertex))
        object.__setattr__(self, "chips", tuple(sorted(self.chips)))


@dataclass(frozen=True)
class Strategy:
    params: GameParams
    fires: tuple[FireEvent, ...] = ()

    def __len__(self):
        return len(self.fires)

    def to_dict(self) -> dict:
        return {
            "k": self.params.k,
            "n": self.params.n,
            "fires": [
                {"vertex": format_traversal(f.vertex), "chips": list(f.chips)}
                for f in self.fires
            ],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, doc: Mapping) -> "Strategy":
        try:
            params = GameParams(int(doc["k"]), int(doc["n"]))
            raw = doc["fires"]
        except (KeyError, TypeError, ValueError) as exc:
            raise StrategyError(f"strategy document needs integer k, n and a fires list: {exc}") from None
        if not isinstance(raw, list):
            raise StrategyError("'fires' must be a list")
        fires = []
        for i, item in enumerate(raw):
            try:
                vertex = parse_traversal(str(item["vertex"]), params)
                chips = [int(c) for c in item["chips"]]
            except (KeyError, TypeError, ValueError, ChipFiringError) as exc:
                raise StrategyError(f"fires[{i}]: malformed event ({exc})") from None
            fires.append(FireEvent(vertex, chips))
        return cls(params, tuple(fires))

    @classmethod
    def from_json(cls, text: str) -> "Strategy":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise StrategyError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
        return cls.from_dict(doc)


@dataclass
class Configuration:
    """Chip holdings per vertex. Vertices absent from ``holdings`` are empty."""

    params: GameParams
    holdings: dict[Digits, frozenset[int]] = field(default_factory=dict)

    def at(self, t: Iterable[int]) -> frozenset[int]:
        return self.holdings.get(tuple(t), frozenset())

    def all_chips(self) -> Counter:
        out = Counter()
        for chips in self.holdings.values():
            out.update(chips)
        return out

    def is_stable(self) -> bool:
        return all(len(chips) < self.params.k for chips in self.holdings.values())

    def terminal_reading(self) -> tuple[int, ...]:
        """Chips on layer n+1 read left to right (requires a stable configuration)."""
        out = []
        for t in strings(self.params.n, self.params):
            chips = self.at(t)
            if len(chips) != 1:
                raise StrategyError(f"vertex {format_traversal(t)!r} holds {len(chips)} chips")
            out.append(next(iter(chips)))
        return tuple(out)


@dataclass(frozen=True)
class RunResult:
    permutation: tuple[int, ...]
    # chip -> landing order on layers 1..n+1
    record: dict[int, tuple[LandingOrder, ...]]
    fire_counts: dict[Digits, int]

    def landing_at(self, chip: int, layer: int) -> LandingOrder:
        return self.record[chip][layer - 1]

    def chip_at(self, o: LandingOrder) -> int:
        for chip, orders in self.record.items():
            if orders[len(o.t)] == o:
                return chip
        raise KeyError(o)


def initial_configuration(params: GameParams) -> Configuration:
    return Configuration(params, {(): frozenset(range(1, params.total_chips + 1))})


def _check_event(params: GameParams, event: FireEvent):
    if len(event.vertex) > params.n:
        raise TerminalVertex(f"vertex {format_traversal(event.vertex)!r} is below layer n+1")
    check_traversal(event.vertex, params)
    if len(event.vertex) == params.n:
        raise TerminalVertex(f"vertex {format_traversal(event.vertex)!r} is on the terminal layer")
    if len(event.chips) != params.k or len(set(event.chips)) != params.k:
        raise WrongArity(f"a fire needs {params.k} distinct chips, got {list(event.chips)}")


def _apply(holdings: dict[Digits, set[int]], event: FireEvent):
    here = holdings.get(event.vertex, set())
    missing = [c for c in event.chips if c not in here]
    if missing:
        raise MissingChip(f"chips {missing} are not at vertex {format_traversal(event.vertex) or 'root'!r}")
    here.difference_update(event.chips)
    for i, chip in enumerate(event.chips, start=1):
        holdings.setdefault(event.vertex + (i,), set()).add(chip)


def fire(config: Configuration, event: FireEvent) -> Configuration:
    """Return a new configuration with ``event`` applied; ``config`` is unchanged."""
    _check_event(config.params, event)
    holdings = {t: set(chips) for t, chips in config.holdings.items()}
    _apply(holdings, event)
    return Configuration(config.params, {t: frozenset(c) for t, c in holdings.items() if c})


def unlabeled_fire_counts(params: GameParams) -> list[int]:
    """Fires per vertex on layers 1..n."""
    return [params.k ** (params.n - layer) for layer in range(1, params.n + 1)]


def validate_strategy(params: GameParams, strategy: Strategy) -> dict[Digits, int]:
    """Check layer order and exact per-vertex fire counts before anything runs."""
    if strategy.params != params:
        raise StrategyError(f"strategy is for {strategy.params}, not {params}")
    counts: Counter = Counter()
    depth = 0
    for i, event in enumerate(strategy.fires):
        _check_event(params, event)
        if len(event.vertex) < depth:
            raise NotLayered(
                f"fire #{i} at layer {len(event.vertex) + 1} follows a fire at layer {depth + 1}"
            )
        depth = len(event.vertex)
        counts[event.vertex] += 1
    required = unlabeled_fire_counts(params)
    for t, c in counts.items():
        if c > required[len(t)]:
            raise StrategyError(
                f"vertex {format_traversal(t) or 'root'!r} fires {c} times, expected {required[len(t)]}"
            )
    for layer in range(1, params.n + 1):
        for t in strings(layer - 1, params):
            if counts[t] != required[layer - 1]:
                raise IncompleteStrategy(
                    f"vertex {format_traversal(t) or 'root'!r} fires {counts[t]} times, "
                    f"expected {required[layer - 1]}"
                )
    return dict(counts)


def _rank_layer(holdings, layer, params, record):
    for t in strings(layer - 1, params):
        for x, chip in enumerate(sorted(holdings.get(t, ())), start=1):
            record[chip].append(LandingOrder(t, x))


def run_strategy(params: GameParams, strategy: Strategy) -> RunResult:
    """Execute a complete layered strategy and track every chip's landing orders."""
    counts = validate_strategy(params, strategy)
    holdings: dict[Digits, set[int]] = {(): set(range(1, params.total_chips + 1))}
    record: dict[int, list[LandingOrder]] = {c: [] for c in range(1, params.total_chips + 1)}
    _rank_layer(holdings, 1, params, record)
    depth = 0
    for event in strategy.fires:
        if len(event.vertex) > depth:
            # every layer-(depth+1) fire is done, so the next layer is full
            _rank_layer(holdings, depth + 2, params, record)
            depth = len(event.vertex)
        _apply(holdings, event)
    if params.n > 0:
        _rank_layer(holdings, params.n + 1, params, record)
    final = Configuration(params, {t: frozenset(c) for t, c in holdings.items() if c})
    return RunResult(
        permutation=final.terminal_reading(),
        record={c: tuple(orders) for c, orders in record.items()},
        fire_counts=counts,
    )


def canonical_strategy(params: GameParams) -> Strategy:
    """Every vertex repeatedly fires its ``k`` smallest chips."""
    k = params.k
    fires = []
    holdings: dict[Digits, list[int]] = {(): list(range(1, params.total_chips + 1))}
    for layer in range(1, params.n + 1):
        for t in strings(layer - 1, params):
            chips = sorted(holdings.pop(t))
            for start in range(0, len(chips), k):
                block = chips[start:start + k]
                fires.append(FireEvent(t, block))
                for i, chip in enumerate(block, start=1):
                    holdings.setdefault(t + (i,), []).append(chip)
    return Strategy(params, tuple(fires))


def normalize_layers(params: GameParams, fires: Iterable[FireEvent]) -> Strategy:
    """Stable-sort fire events by layer.

    Reordering is only sound when no fire at a deeper layer was meant to run
    before the chips it names arrived; the result is validated by executing it.
    """
    ordered = sorted(fires, key=lambda f: len(f.vertex))
    strategy = Strategy(params, tuple(ordered))
    run_strategy(params, strategy)
    return strategy


def random_strategy(params: GameParams, rng: random.Random) -> Strategy:
    """A uniformly shuffled k-set partition at every vertex, in layer order."""
    k = params.k
    fires = []
    holdings: dict[Digits, list[int]] = {(): list(range(1, params.total_chips + 1))}
    for layer in range(1, params.n + 1):
        for t in strings(layer - 1, params):
            chips = holdings.pop(t)
            rng.shuffle(chips)
            for start in range(0, len(chips), k):
                event = FireEvent(t, chips[start:start + k])
                fires.append(event)
                for i, chip in enumerate(event.chips, start=1):
                    holdings.setdefault(t + (i,), []).append(chip)
    return Strategy(params, tuple(fires))
