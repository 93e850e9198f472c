import json
import random

import pytest

from kary_chipfiring.engine import (
    FireEvent,
    Strategy,
    canonical_strategy,
    fire,
    initial_configuration,
    normalize_layers,
    random_strategy,
    run_strategy,
    unlabeled_fire_counts,
)
from kary_chipfiring.errors import (
    IncompleteStrategy,
    MissingChip,
    NotLayered,
    StrategyError,
    TerminalVertex,
    WrongArity,
)
from kary_chipfiring.tree import GameParams, LandingOrder, reflect

ROOT_SPLITS = [(1, 2, 7), (3, 4, 8), (5, 6, 9)]


def split_strategy():
    p = GameParams(3, 2)
    fires = [FireEvent((), b) for b in ROOT_SPLITS]
    fires += [FireEvent((1,), (1, 3, 5)), FireEvent((2,), (2, 4, 6)), FireEvent((3,), (7, 8, 9))]
    return Strategy(p, tuple(fires))


def test_initial_configuration():
    assert initial_configuration(GameParams(2, 2)).at(()) == {1, 2, 3, 4}
    assert initial_configuration(GameParams(3, 2)).at(()) == set(range(1, 10))
    c = initial_configuration(GameParams(2, 0))
    assert c.at(()) == {1} and c.is_stable()


def test_fire_sorted_dispatch():
    p = GameParams(3, 2)
    c0 = initial_configuration(p)
    c1 = fire(c0, FireEvent((), (7, 1, 2)))
    assert c1.at((1,)) == {1} and c1.at((2,)) == {2} and c1.at((3,)) == {7}
    assert c0.at(()) == set(range(1, 10))  # value semantics
    c = fire(initial_configuration(GameParams(2, 2)), FireEvent((), (1, 2)))
    assert c.at((1,)) == {1} and c.at((2,)) == {2}


def test_fire_errors():
    p = GameParams(2, 2)
    c = initial_configuration(p)
    with pytest.raises(WrongArity):
        fire(c, FireEvent((), (1, 2, 3)))
    with pytest.raises(MissingChip):
        fire(c, FireEvent((1,), (1, 2)))
    with pytest.raises(TerminalVertex):
        fire(c, FireEvent((1, 1), (1, 2)))


def test_fire_conserves_chips():
    p = GameParams(2, 3)
    rng = random.Random(5)
    c = initial_configuration(p)
    for event in random_strategy(p, rng).fires:
        c = fire(c, event)
        assert sorted(c.all_chips().elements()) == list(range(1, 9))
    assert c.is_stable()


def test_run_strategy_three_ary_example():
    r = run_strategy(GameParams(3, 2), split_strategy())
    assert r.permutation == (1, 3, 5, 2, 4, 6, 7, 8, 9)


def test_run_small_games():
    p = GameParams(2, 1)
    assert run_strategy(p, Strategy(p, (FireEvent((), (1, 2)),))).permutation == (1, 2)
    # hand simulation: root fires {1,2},{3,4}; left child {1,3}, right child {2,4}
    assert run_strategy(GameParams(2, 2), canonical_strategy(GameParams(2, 2))).permutation == (1, 3, 2, 4)
    p0 = GameParams(2, 0)
    assert run_strategy(p0, Strategy(p0)).permutation == (1,)


def test_canonical_strategy_shape():
    s = canonical_strategy(GameParams(2, 2))
    assert [(f.vertex, f.chips) for f in s.fires] == [
        ((), (1, 2)), ((), (3, 4)), ((1,), (1, 3)), ((2,), (2, 4)),
    ]
    s = canonical_strategy(GameParams(2, 1))
    assert [(f.vertex, f.chips) for f in s.fires] == [((), (1, 2))]
    p = GameParams(3, 2)
    s = canonical_strategy(p)
    assert [f.chips for f in s.fires[:3]] == [(1, 2, 3), (4, 5, 6), (7, 8, 9)]
    assert run_strategy(p, s).permutation == (1, 4, 7, 2, 5, 8, 3, 6, 9)


def test_unlabeled_fire_counts():
    assert unlabeled_fire_counts(GameParams(3, 3)) == [9, 3, 1]
    assert unlabeled_fire_counts(GameParams(2, 1)) == [1]
    assert unlabeled_fire_counts(GameParams(2, 3)) == [4, 2, 1]


def test_fire_counts_match_run():
    p = GameParams(2, 3)
    r = run_strategy(p, random_strategy(p, random.Random(1)))
    expected = unlabeled_fire_counts(p)
    assert all(c == expected[len(t)] for t, c in r.fire_counts.items())
    assert len(r.fire_counts) == 1 + 2 + 4


def test_rejects_unlayered_and_incomplete():
    p = GameParams(2, 2)
    fires = list(canonical_strategy(p).fires)
    swapped = [fires[0], fires[2], fires[1], fires[3]]
    with pytest.raises(NotLayered):
        run_strategy(p, Strategy(p, tuple(swapped)))
    with pytest.raises(IncompleteStrategy):
        run_strategy(p, Strategy(p, tuple(fires[:3])))
    with pytest.raises(StrategyError):
        run_strategy(p, Strategy(p, tuple(fires + [fires[-1]])))
    with pytest.raises(MissingChip):
        bad = fires[:2] + [FireEvent((1,), (1, 2)), fires[3]]
        run_strategy(p, Strategy(p, tuple(bad)))


def test_normalize_layers_reorders_when_possible():
    p = GameParams(2, 2)
    fires = list(canonical_strategy(p).fires)
    s = normalize_layers(p, [fires[2], fires[0], fires[3], fires[1]])
    assert run_strategy(p, s).permutation == (1, 3, 2, 4)


def test_landing_record():
    r = run_strategy(GameParams(3, 2), split_strategy())
    assert r.record[7] == (LandingOrder((), 7), LandingOrder((3,), 1), LandingOrder((3, 1), 1))
    assert r.record[5] == (LandingOrder((), 5), LandingOrder((1,), 3), LandingOrder((1, 3), 1))
    assert r.chip_at(LandingOrder((2,), 2)) == 4


def test_mirrored_strategy_mirrors_record():
    # reflecting every fire (vertex digits and chip labels) reflects every landing order
    for k, n, seed in [(2, 3, 0), (3, 2, 1), (3, 3, 2), (2, 4, 3)]:
        p = GameParams(k, n)
        s = random_strategy(p, random.Random(seed))
        total = p.total_chips
        mirror = Strategy(p, tuple(
            FireEvent(tuple(k + 1 - d for d in f.vertex), [total + 1 - c for c in f.chips])
            for f in s.fires
        ))
        a, b = run_strategy(p, s), run_strategy(p, mirror)
        for c, orders in a.record.items():
            assert b.record[total + 1 - c] == tuple(reflect(o, p) for o in orders)


def test_strategy_json_round_trip(tmp_path):
    s = split_strategy()
    text = s.to_json()
    again = Strategy.from_json(text)
    assert again == s
    assert again.to_json() == text
    assert json.loads(text)["fires"][0] == {"vertex": "", "chips": [1, 2, 7]}


@pytest.mark.parametrize("text, fragment", [
    ("{", "line 1"),
    ('{"k": 2, "n": 1}', "fires"),
    ('{"k": 2, "n": 1, "fires": [{"vertex": "3", "chips": [1, 2]}]}', "fires[0]"),
    ('{"k": 2, "n": 1, "fires": [{"vertex": "", "chips": ["a", 2]}]}', "fires[0]"),
])
def test_strategy_json_errors(text, fragment):
    with pytest.raises(StrategyError, match=fragment.replace("[", r"\[")):
        Strategy.from_json(text)
