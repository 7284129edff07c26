import random

from mmpersist.matching import combine_covering_matchings, hopcroft_karp


def brute_max_matching(n_left, n_right, adj):
    best = 0

    def go(u, used, size):
        nonlocal best
        if u == n_left:
            best = max(best, size)
            return
        go(u + 1, used, size)
        for v in adj[u]:
            if v not in used:
                go(u + 1, used | {v}, size + 1)

    go(0, frozenset(), 0)
    return best


def _random_graph(rng):
    nl, nr = rng.randint(0, 6), rng.randint(0, 6)
    adj = [[v for v in range(nr) if rng.random() < 0.4] for _ in range(nl)]
    return nl, nr, adj


def test_maximum_size_and_validity():
    rng = random.Random(1)
    for _ in range(300):
        nl, nr, adj = _random_graph(rng)
        ml, mr = hopcroft_karp(nl, nr, adj)
        pairs = [(u, v) for u, v in enumerate(ml) if v >= 0]
        assert all(v in adj[u] and mr[v] == u for u, v in pairs)
        assert len(pairs) == brute_max_matching(nl, nr, adj)


def test_left_order_restricts_matched_side():
    ml, _ = hopcroft_karp(3, 3, [[0], [0, 1], [2]], left_order=[1, 2])
    assert ml[0] == -1 and ml[1] >= 0 and ml[2] == 2


def test_combination_covers_both_sides():
    rng = random.Random(2)
    for _ in range(300):
        nl, nr, adj = _random_graph(rng)
        m1 = {u: v for u, v in enumerate(hopcroft_karp(nl, nr, adj)[0]) if v >= 0}
        # a second matching built from the right side's point of view
        radj = [[u for u in range(nl) if v in adj[u]] for v in range(nr)]
        mr = hopcroft_karp(nr, nl, radj)[0]
        m2 = {u: v for v, u in enumerate(mr) if u >= 0}
        merged = combine_covering_matchings(m1, m2)
        assert len(set(merged.values())) == len(merged)
        assert all(v in adj[u] for u, v in merged.items())
        assert set(m1) <= set(merged)
        assert set(m2.values()) <= set(merged.values())
