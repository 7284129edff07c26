"""Normalisation, bottleneck distance, death histograms and PD files."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DivisorTooSmall, MalformedInput, ScaleMismatch
from .matching import combine_covering_matchings, hopcroft_karp
from .persistence import INFINITE, PersistenceDiagram

__all__ = [
    "DIAGONAL",
    "BottleneckResult",
    "normalize",
    "bottleneck",
    "bottleneck_distance",
    "DeathHistogram",
    "death_histogram",
    "serialize_pd",
    "parse_pd",
    "read_pd",
    "write_pd",
]

#: Marks the diagonal side of a matched pair in a bottleneck witness.
DIAGONAL = -1


def normalize(pd: PersistenceDiagram, divisor) -> PersistenceDiagram:
    """Divide births and deaths by ``divisor`` so they land in ``[0, 1]``.

    Infinite deaths become 1.0: the divisor is the level of the all-black
    image (``n + 1`` for ``n`` SEs) or the top grey level, where every
    remaining class would be cut off.  An infinite interval born at the
    divisor itself collapses and is dropped.
    """
    if not divisor > 0:
        raise DivisorTooSmall(f"divisor must be positive, got {divisor}")
    top = pd.max_finite_value()
    if top > divisor:
        raise DivisorTooSmall(f"divisor {divisor} is below the largest finite value {top}")
    out = []
    for q, b, d in pd.intervals:
        nb = b / divisor
        nd = 1.0 if math.isinf(d) else d / divisor
        if nb < nd:
            out.append((q, nb, nd))
    return PersistenceDiagram(tuple(out), pd.scale * divisor)


@dataclass(frozen=True)
class BottleneckResult:
    """Distance plus an optimal matching.

    ``witness`` pairs indices into ``a.in_dim(dim)`` and ``b.in_dim(dim)``;
    :data:`DIAGONAL` stands for a projection onto the diagonal.  Points of
    ``a`` come first in index order, then diagonal-matched points of ``b``.
    """

    distance: float
    witness: tuple = ()


def _points(pd: PersistenceDiagram, dim: int):
    pts = pd.in_dim(dim)
    births = np.array([p[0] for p in pts], dtype=float)
    deaths = np.array([p[1] for p in pts], dtype=float)
    return births, deaths


def _cost_matrix(ba, da, bb, db):
    """L-infinity costs; two essential points cost their birth gap, mixed pairs inf."""
    inf_a, inf_b = np.isinf(da), np.isinf(db)
    with np.errstate(invalid="ignore"):
        cost = np.maximum(np.abs(ba[:, None] - bb[None, :]), np.abs(da[:, None] - db[None, :]))
    both_inf = inf_a[:, None] & inf_b[None, :]
    cost[both_inf] = np.abs(ba[:, None] - bb[None, :])[both_inf]
    cost[inf_a[:, None] ^ inf_b[None, :]] = np.inf
    return cost


class _Instance:
    """Bottleneck matching problem between two point sets at a threshold."""

    def __init__(self, cost, diag_a, diag_b):
        self.cost = cost
        self.diag_a = diag_a
        self.diag_b = diag_b
        self.na, self.nb = cost.shape

    def adjacency(self, eps):
        mask = self.cost <= eps
        return [np.flatnonzero(row).tolist() for row in mask]

    def _covering(self, eps, adj):
        """Matching covering the points that cannot reach the diagonal, or None."""
        forced_a = np.flatnonzero(self.diag_a > eps).tolist()
        forced_b = np.flatnonzero(self.diag_b > eps).tolist()
        ml, _ = hopcroft_karp(self.na, self.nb, adj, forced_a)
        if any(ml[u] < 0 for u in forced_a):
            return None
        adj_t = [[] for _ in range(self.nb)]
        for u, row in enumerate(adj):
            for v in row:
                adj_t[v].append(u)
        mr, _ = hopcroft_karp(self.nb, self.na, adj_t, forced_b)
        if any(mr[v] < 0 for v in forced_b):
            return None
        m1 = {u: ml[u] for u in forced_a}
        m2 = {mr[v]: v for v in forced_b}
        return combine_covering_matchings(m1, m2)

    def feasible(self, eps) -> bool:
        return self._covering(eps, self.adjacency(eps)) is not None

    def canonical_matching(self, eps):
        """Lexicographically smallest feasible assignment of the points of A.

        Each point of A prefers partners in B by index, the diagonal last.
        Works on the usual reduction to a perfect matching: rows are A plus
        one diagonal copy per point of B, columns are B plus one diagonal copy
        per point of A, and every diagonal copy of B may meet every diagonal
        copy of A.
        """
        adj = self.adjacency(eps)
        base = self._covering(eps, adj)
        if base is None:
            raise AssertionError("canonical matching requested at an infeasible threshold")
        na, nb = self.na, self.nb
        diag_ok_a = (self.diag_a <= eps).tolist()
        diag_ok_b = (self.diag_b <= eps).tolist()
        # rows: a_i -> i, dB_j -> na + j ; columns: b_j -> j, dA_i -> nb + i
        mate_row = [-1] * (na + nb)
        mate_col = [-1] * (nb + na)

        def link(r, c):
            mate_row[r], mate_col[c] = c, r

        for i in range(na):
            if i in base:
                link(i, base[i])
            else:
                link(i, nb + i)
        spare_cols = [nb + i for i in range(na) if i in base]
        spare_rows = []
        matched_b = set(base.values())
        for j in range(nb):
            if j in matched_b:
                spare_rows.append(na + j)
            else:
                link(na + j, j)
        for r, c in zip(spare_rows, spare_cols):
            link(r, c)

        col_rows = [[] for _ in range(nb)]
        for i, row in enumerate(adj):
            for j in row:
                col_rows[j].append(i)
        for j in range(nb):
            if diag_ok_b[j]:
                col_rows[j].append(na + j)

        fixed = [False] * (na + nb)
        for i in range(na):
            target = mate_row[i]
            reach = {target: None}
            queue = [target]
            block_done = False
            seen_rows = {i}
            k = 0
            while k < len(queue):
                col = queue[k]
                k += 1
                if col < nb:
                    rows = col_rows[col]
                else:
                    owner = col - nb
                    rows = [owner] if diag_ok_a[owner] else []
                    if not block_done:
                        block_done = True
                        rows = rows + list(range(na, na + nb))
                for r in rows:
                    if r in seen_rows or fixed[r]:
                        continue
                    seen_rows.add(r)
                    c = mate_row[r]
                    if c not in reach:
                        reach[c] = (r, col)
                        queue.append(c)
            choices = list(adj[i])
            if diag_ok_a[i]:
                choices.append(nb + i)
            chosen = next(c for c in choices if c in reach)
            cur = chosen
            moves = []
            while cur != target:
                r, nxt = reach[cur]
                moves.append((r, nxt))
                cur = nxt
            for r, c in moves:
                link(r, c)
            link(i, chosen)
            fixed[i] = True

        pairs = []
        for i in range(na):
            c = mate_row[i]
            pairs.append((i, c if c < nb else DIAGONAL))
        for j in range(nb):
            if mate_col[j] >= na:
                pairs.append((DIAGONAL, j))
        return tuple(pairs)


def _essential_distance(ea, eb):
    if len(ea) != len(eb):
        return INFINITE
    if not ea:
        return 0.0
    return max(abs(x - y) for x, y in zip(sorted(ea), sorted(eb)))


def bottleneck(a: PersistenceDiagram, b: PersistenceDiagram, dim: int,
               witness: bool = True) -> BottleneckResult:
    """Exact bottleneck distance between the ``dim``-parts of two diagrams.

    The answer is one of the finitely many candidate costs (pairwise
    L-infinity distances and half-lifespans), so a binary search over them
    with a matching-based feasibility test is exact.  Essential points are
    matched among themselves by sorted birth; differing counts give an
    infinite distance.  Diagrams must share a scale.
    """
    if a.scale != b.scale:
        raise ScaleMismatch(f"cannot compare diagrams of scale {a.scale} and {b.scale}")
    ba, da = _points(a, dim)
    bb, db = _points(b, dim)
    inf_a, inf_b = np.isinf(da), np.isinf(db)
    d_ess = _essential_distance(ba[inf_a].tolist(), bb[inf_b].tolist())
    if math.isinf(d_ess):
        return BottleneckResult(INFINITE, ())

    cost = _cost_matrix(ba, da, bb, db)
    diag_a, diag_b = (da - ba) / 2, (db - bb) / 2
    fin_a, fin_b = ~inf_a, ~inf_b
    finite = _Instance(cost[np.ix_(fin_a, fin_b)], diag_a[fin_a], diag_b[fin_b])
    candidates = np.unique(np.concatenate([
        [0.0], finite.cost.ravel(), finite.diag_a, finite.diag_b]))
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if finite.feasible(candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    distance = max(float(candidates[lo]), float(d_ess))

    pairs = ()
    if witness:
        pairs = _Instance(cost, diag_a, diag_b).canonical_matching(distance)
    return BottleneckResult(distance, pairs)


def bottleneck_distance(a: PersistenceDiagram, b: PersistenceDiagram, dim: int) -> float:
    return bottleneck(a, b, dim, witness=False).distance


@dataclass(frozen=True)
class DeathHistogram:
    bin_width: float
    bins: tuple
    overflow: int = 0

    @property
    def counts(self) -> list[int]:
        return [c for _, c in self.bins]


def death_histogram(pd: PersistenceDiagram, dim: int, bin_width=1.0) -> DeathHistogram:
    """Counts of finite deaths in bins ``[k w, (k + 1) w)``.

    Bins run from the first to the last occupied one, empty bins in between
    included; infinite deaths are counted in ``overflow``.
    """
    if not bin_width > 0:
        raise MalformedInput(f"bin width must be positive, got {bin_width}")
    deaths = [d for b, d in pd.in_dim(dim)]
    overflow = sum(1 for d in deaths if math.isinf(d))
    finite = [d for d in deaths if not math.isinf(d)]
    if not finite:
        return DeathHistogram(bin_width, (), overflow)
    ks = [math.floor(d / bin_width) for d in finite]
    counts = {}
    for k in ks:
        counts[k] = counts.get(k, 0) + 1
    bins = tuple((k * bin_width, counts.get(k, 0)) for k in range(min(ks), max(ks) + 1))
    return DeathHistogram(bin_width, bins, overflow)


def _num(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if math.isinf(x):
        return '"inf"'
    return repr(float(x))


def serialize_pd(pd: PersistenceDiagram) -> bytes:
    """Canonical JSON: one interval per line, ordered by (dim, birth, death)."""
    lines = ["{", f'  "scale": {_num(pd.scale)},']
    if not pd.intervals:
        lines.append('  "intervals": []')
    else:
        lines.append('  "intervals": [')
        rows = [
            f'    {{"dim": {q}, "birth": {_num(b)}, "death": {_num(d)}}}'
            for q, b, d in pd.intervals
        ]
        lines.append(",\n".join(rows))
        lines.append("  ]")
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("ascii")


def _parse_value(v, what):
    if v == "inf":
        return INFINITE
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise MalformedInput(f"{what} must be a number or \"inf\", got {v!r}")
    return v


def parse_pd(data: bytes) -> PersistenceDiagram:
    try:
        doc = json.loads(data)
    except (ValueError, UnicodeDecodeError) as exc:
        raise MalformedInput(f"not a JSON document: {exc}") from None
    if not isinstance(doc, dict) or "intervals" not in doc:
        raise MalformedInput("PD document needs an \"intervals\" list")
    records = doc["intervals"]
    if not isinstance(records, list):
        raise MalformedInput("\"intervals\" must be a list")
    intervals = []
    for rec in records:
        if not isinstance(rec, dict) or set(rec) != {"dim", "birth", "death"}:
            raise MalformedInput(f"bad interval record {rec!r}")
        dim = rec["dim"]
        if dim not in (0, 1) or isinstance(dim, bool):
            raise MalformedInput(f"interval dim must be 0 or 1, got {dim!r}")
        birth = _parse_value(rec["birth"], "birth")
        if math.isinf(birth):
            raise MalformedInput("birth cannot be infinite")
        intervals.append((dim, birth, _parse_value(rec["death"], "death")))
    scale = _parse_value(doc.get("scale", 1), "scale")
    return PersistenceDiagram(tuple(intervals), scale)


def write_pd(pd: PersistenceDiagram, path) -> None:
    Path(path).write_bytes(serialize_pd(pd))


def read_pd(path) -> PersistenceDiagram:
    return parse_pd(Path(path).read_bytes())
