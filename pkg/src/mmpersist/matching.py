"""Maximum-cardinality bipartite matching (Hopcroft-Karp).

Vertices on each side are numbered from 0.  ``adj[u]`` lists the right
neighbours of left vertex ``u``; neighbours are tried in list order, so
sorted adjacency lists give reproducible matchings.
"""

from __future__ import annotations

from collections import deque
from typing import Sequence

__all__ = ["hopcroft_karp", "combine_covering_matchings"]

_FREE = -1


def hopcroft_karp(n_left: int, n_right: int, adj: Sequence[Sequence[int]],
                  left_order: Sequence[int] | None = None):
    """Return ``(match_left, match_right)`` with -1 marking free vertices.

    Only the left vertices in ``left_order`` (default: all) are matched.
    """
    lefts = list(range(n_left)) if left_order is None else list(left_order)
    match_l = [_FREE] * n_left
    match_r = [_FREE] * n_right

    # greedy start; the phases below only need to fix what it misses
    for u in lefts:
        for v in adj[u]:
            if match_r[v] == _FREE:
                match_l[u], match_r[v] = v, u
                break

    inf = len(lefts) + 1
    dist = {}
    while True:
        queue = deque()
        for u in lefts:
            if match_l[u] == _FREE:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = inf
        limit = inf
        while queue:
            u = queue.popleft()
            if dist[u] >= limit:
                continue
            for v in adj[u]:
                w = match_r[v]
                if w == _FREE:
                    limit = min(limit, dist[u] + 1)
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if limit == inf:
            break

        pointer = {u: 0 for u in lefts}
        for root in lefts:
            if match_l[root] != _FREE:
                continue
            # iterative DFS along the layered graph
            stack = [root]
            path_v = []
            found = False
            while stack:
                u = stack[-1]
                nbrs = adj[u]
                advanced = False
                while pointer[u] < len(nbrs):
                    v = nbrs[pointer[u]]
                    pointer[u] += 1
                    w = match_r[v]
                    if w == _FREE:
                        if dist[u] + 1 == limit:
                            path_v.append(v)
                            found = True
                            break
                    elif dist[w] == dist[u] + 1:
                        path_v.append(v)
                        stack.append(w)
                        advanced = True
                        break
                if found:
                    break
                if not advanced:
                    dist[u] = inf
                    stack.pop()
                    if path_v:
                        path_v.pop()
            if found:
                for u, v in zip(stack, path_v):
                    match_l[u] = v
                    match_r[v] = u
    return match_l, match_r


def combine_covering_matchings(m1: dict, m2: dict) -> dict:
    """Merge two matchings so every vertex covered by the right side wins.

    ``m1`` and ``m2`` map left to right vertices.  The result covers every
    left vertex covered by ``m1`` and every right vertex covered by ``m2``
    (the Mendelsohn-Dulmage exchange): each path of the symmetric difference
    keeps the edges of whichever matching covers both of its ends, or of
    ``m1`` if the ends are left vertices and ``m2`` if they are right ones.
    """
    result = {u: v for u, v in m1.items() if m2.get(u) == v}
    nbr = {}
    for label, m in ((1, m1), (2, m2)):
        for u, v in m.items():
            if result.get(u) == v:
                continue
            nbr.setdefault(("L", u), []).append((("R", v), label))
            nbr.setdefault(("R", v), []).append((("L", u), label))

    seen = set()

    def walk(start):
        edges = []
        prev, node = None, start
        seen.add(start)
        while True:
            nxt = [(n, lab) for n, lab in nbr[node] if n != prev and n not in seen]
            if not nxt:
                # close a cycle back to the start if there is an unused edge
                back = [(n, lab) for n, lab in nbr[node] if n == start and n != prev]
                if back and len(edges) > 1:
                    edges.append((node, back[0][0], back[0][1]))
                return edges
            n, lab = nxt[0]
            edges.append((node, n, lab))
            seen.add(n)
            prev, node = node, n

    def keep(edges, label):
        for a, b, lab in edges:
            if lab != label:
                continue
            u, v = (a[1], b[1]) if a[0] == "L" else (b[1], a[1])
            result[u] = v

    for node in sorted(nbr):
        if node in seen or len(nbr[node]) != 1:
            continue
        edges = walk(node)
        first, last = edges[0][2], edges[-1][2]
        if first == last:
            keep(edges, first)
        else:
            keep(edges, 1 if node[0] == "L" else 2)
    for node in sorted(nbr):
        if node not in seen:
            keep(walk(node), 1)
    return result
