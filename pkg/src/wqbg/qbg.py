"""The quantum Bruhat graph of a finite Weyl group.

Vertices are the group elements (dense indices in enumeration order).  For
w and a positive root alpha there is an upward edge w -> w s_alpha when
l(w s_alpha) = l(w) + 1 (weight 0) and a downward edge when
l(w s_alpha) = l(w) - <alpha^vee, 2 rho> + 1 (weight alpha^vee).

Path weights live in the coroot lattice; along a breadth-first search they
are packed into a single int64 (base-256 digits per simple coroot), which
keeps the all-pairs suites in numpy.  Digits stay far below 256: a path has
at most `n_pos` edges and coroot coordinates are single digits.

Non-crystallographic groups are rejected: downward edges need coroots.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .cartan import Coweight
from .coxeter import (
    Automorphism,
    CoxeterGroup,
    DEFAULT_ENUM_BUDGET,
    GroupElement,
)

_BASE = 256


class NotCrystallographic(ValueError):
    """QBG requested for a group without coroots."""


@dataclass
class QuantumBruhatGraph:
    group: CoxeterGroup
    n: int
    # forward CSR
    out_ptr: np.ndarray
    out_dst: np.ndarray
    out_kind: np.ndarray  # 0 upward, 1 downward
    out_root: np.ndarray  # positive-root index of the edge reflection
    # reverse CSR
    in_ptr: np.ndarray
    in_src: np.ndarray
    in_kind: np.ndarray
    in_root: np.ndarray
    weight_enc: np.ndarray  # per-root packed coroot vector (0 for upward use)

    def out_edges(self, v: int):
        sl = slice(self.out_ptr[v], self.out_ptr[v + 1])
        return self.out_dst[sl], self.out_kind[sl], self.out_root[sl]

    def n_edges(self) -> int:
        return len(self.out_dst)

    def decode_weight(self, enc: int) -> tuple[int, ...]:
        coords = []
        for _ in range(self.group.rank):
            coords.append(int(enc % _BASE))
            enc //= _BASE
        return tuple(coords)

    def encode_weight(self, coords) -> int:
        enc = 0
        for c in reversed(list(coords)):
            enc = enc * _BASE + int(c)
        return enc

    def weight_two_rho(self, enc: int) -> int:
        """<wt, 2 rho> = twice the coordinate sum of the packed weight."""
        return 2 * sum(self.decode_weight(enc))


def build_qbg(group: CoxeterGroup, budget: int = DEFAULT_ENUM_BUDGET) -> QuantumBruhatGraph:
    if not group.rs.crystallographic:
        raise NotCrystallographic(
            f"{group.label} is not crystallographic; the quantum Bruhat graph "
            "is only defined for Weyl groups"
        )
    table = group.enumerate(budget)
    mat = table.mat
    n = len(table)
    lengths = table.lengths
    refl = group.reflections()
    two_rho = group.rs.coroot_two_rho  # <beta^vee, 2 rho> per root

    srcs, dsts, kinds, roots = [], [], [], []
    for k in range(group.n_pos):
        t = refl[k]
        t_idx = np.abs(t.images) - 1
        t_sgn = np.sign(t.images)
        cand = mat[:, t_idx] * t_sgn
        lt = (cand < 0).sum(axis=1)
        up = lt == lengths + 1
        down = lt == lengths - two_rho[k] + 1
        for mask, kind in ((up, 0), (down, 1)):
            idx = np.nonzero(mask)[0]
            if not len(idx):
                continue
            tgt = np.fromiter(
                (table.index_of_images(cand[i]) for i in idx),
                dtype=np.int64,
                count=len(idx),
            )
            srcs.append(idx)
            dsts.append(tgt)
            kinds.append(np.full(len(idx), kind, dtype=np.int8))
            roots.append(np.full(len(idx), k, dtype=np.int32))

    src = np.concatenate(srcs)
    dst = np.concatenate(dsts)
    kind = np.concatenate(kinds)
    root = np.concatenate(roots)

    def to_csr(a, b, k_, r_):
        order = np.lexsort((r_, b, a))
        a, b, k_, r_ = a[order], b[order], k_[order], r_[order]
        ptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(ptr, a + 1, 1)
        np.cumsum(ptr, out=ptr)
        return ptr, b, k_, r_

    out_ptr, out_dst, out_kind, out_root = to_csr(src, dst, kind, root)
    in_ptr, in_src, in_kind, in_root = to_csr(dst, src, kind, root)

    enc = np.zeros(group.n_pos, dtype=np.int64)
    for k in range(group.n_pos):
        e = 0
        for c in reversed(group.rs.coroot_matrix[k]):
            e = e * _BASE + int(c)
        enc[k] = e

    return QuantumBruhatGraph(
        group, n, out_ptr, out_dst, out_kind, out_root,
        in_ptr, in_src, in_kind, in_root, enc,
    )


# ---------------------------------------------------------------------------
# distances


def _gather_edges(ptr, dst, frontier):
    counts = ptr[frontier + 1] - ptr[frontier]
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=dst.dtype), np.empty(0, dtype=np.int64)
    starts = np.repeat(ptr[frontier], counts)
    offs = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    pos = starts + offs
    return dst[pos], pos


def qbg_distance(qbg: QuantumBruhatGraph, x: int, y: int, cap: Optional[int] = None) -> Optional[int]:
    """BFS distance d_Gamma(x, y); None if a cap is given and exceeded."""
    if x == y:
        return 0
    visited = np.zeros(qbg.n, dtype=bool)
    visited[x] = True
    frontier = np.array([x], dtype=np.int64)
    d = 0
    while len(frontier):
        d += 1
        if cap is not None and d > cap:
            return None
        nbrs, _ = _gather_edges(qbg.out_ptr, qbg.out_dst, frontier)
        nbrs = np.unique(nbrs)
        nbrs = nbrs[~visited[nbrs]]
        if not len(nbrs):
            break
        if (nbrs == y).any():
            return d
        visited[nbrs] = True
        frontier = nbrs
    if cap is not None:
        return None
    return _unreachable(x, y)


def _unreachable(x, y):
    raise AssertionError(f"quantum Bruhat graph not strongly connected: {x} -> {y}")


def distances_from(qbg: QuantumBruhatGraph, x: int) -> np.ndarray:
    dist = np.full(qbg.n, -1, dtype=np.int16)
    dist[x] = 0
    frontier = np.array([x], dtype=np.int64)
    d = 0
    while len(frontier):
        d += 1
        nbrs, _ = _gather_edges(qbg.out_ptr, qbg.out_dst, frontier)
        nbrs = np.unique(nbrs)
        nbrs = nbrs[dist[nbrs] < 0]
        dist[nbrs] = d
        frontier = nbrs
    return dist


def shortest_weights_from(qbg: QuantumBruhatGraph, x: int):
    """Single-source shortest distances, path weights, and a uniqueness flag.

    Returns (dist, wt, unique) where wt[v] is the packed weight of a shortest
    path x -> v and unique is False if two shortest paths to some vertex were
    found with different weights (which the Postnikov lemma rules out; the
    flag exists so the suite verifies rather than assumes it).
    """
    dist = np.full(qbg.n, -1, dtype=np.int16)
    wt = np.zeros(qbg.n, dtype=np.int64)
    dist[x] = 0
    frontier = np.array([x], dtype=np.int64)
    unique = True
    level = 0
    while len(frontier):
        level += 1
        counts = qbg.out_ptr[frontier + 1] - qbg.out_ptr[frontier]
        total = int(counts.sum())
        if total == 0:
            break
        starts = np.repeat(qbg.out_ptr[frontier], counts)
        offs = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
        pos = starts + offs
        cand_dst = qbg.out_dst[pos]
        cand_wt = (
            np.repeat(wt[frontier], counts)
            + qbg.weight_enc[qbg.out_root[pos]] * qbg.out_kind[pos]
        )
        fresh = dist[cand_dst] < 0
        cand_dst = cand_dst[fresh]
        cand_wt = cand_wt[fresh]
        if not len(cand_dst):
            break
        order = np.argsort(cand_dst, kind="stable")
        cd, cw = cand_dst[order], cand_wt[order]
        same = cd[1:] == cd[:-1]
        if (same & (cw[1:] != cw[:-1])).any():
            unique = False
        first = np.ones(len(cd), dtype=bool)
        first[1:] = ~same
        new_v = cd[first]
        dist[new_v] = level
        wt[new_v] = cw[first]
        frontier = new_v
    return dist, wt, unique


def qbg_weight(qbg: QuantumBruhatGraph, x: int, y: int) -> tuple[int, ...]:
    """wt(x, y): the common weight of all shortest paths from x to y."""
    dist, wt, _ = shortest_weights_from(qbg, x)
    if dist[y] < 0:
        _unreachable(x, y)
    return qbg.decode_weight(int(wt[y]))


# ---------------------------------------------------------------------------
# exact-weight path search


def _updown_lists(qbg: QuantumBruhatGraph):
    """Python adjacency lists: up[v] -> [dst], down[v] -> [(dst, root)]."""
    up = [[] for _ in range(qbg.n)]
    down = [[] for _ in range(qbg.n)]
    for v in range(qbg.n):
        dsts, kinds, roots = qbg.out_edges(v)
        for ddst, kk, rr in zip(dsts, kinds, roots):
            if kk == 0:
                up[v].append(int(ddst))
            else:
                down[v].append((int(ddst), int(rr)))
    return up, down


_UPDOWN_CACHE: dict[int, tuple] = {}


def _qbg_updown_cache(qbg: QuantumBruhatGraph):
    key = id(qbg)
    if key not in _UPDOWN_CACHE:
        _UPDOWN_CACHE[key] = _updown_lists(qbg)
    return _UPDOWN_CACHE[key]


def reachable_weight_table(
    qbg: QuantumBruhatGraph, x: int, budget: tuple[int, ...]
) -> dict[tuple[int, ...], set[int]]:
    """Dynamic program over (vertex, remaining budget) from (x, budget).

    Upward edges keep the budget, a downward edge through alpha consumes
    alpha^vee; states with a negative coordinate are dropped.  Layers are
    processed in decreasing coordinate-sum order, which each downward edge
    strictly decreases, so the search terminates and every layer is complete
    when processed.  The returned dict maps the remaining budget b to the
    vertex set reachable with weight exactly budget - b; since prefix
    weights of a path are monotone, a path of weight c <= budget is never
    cut off by the box, so one table answers every sub-budget of `budget`.
    """
    budget = tuple(int(c) for c in budget)
    up, down = _qbg_updown_cache(qbg)
    coroots = qbg.group.rs.coroot_matrix

    def up_closure(seed: set[int]) -> set[int]:
        out = set(seed)
        todo = list(seed)
        while todo:
            v = todo.pop()
            for w in up[v]:
                if w not in out:
                    out.add(w)
                    todo.append(w)
        return out

    layers: dict[tuple[int, ...], set[int]] = {budget: {x}}
    pending = {budget}
    while pending:
        b = max(pending, key=sum)
        pending.discard(b)
        cur = layers[b] = up_closure(layers[b])
        for v in cur:
            for dst, root in down[v]:
                nb = tuple(b[j] - int(coroots[root][j]) for j in range(len(b)))
                if any(c < 0 for c in nb):
                    continue
                tgt = layers.setdefault(nb, set())
                if dst not in tgt:
                    tgt.add(dst)
                    pending.add(nb)
    return layers


def exists_path_with_weight(
    qbg: QuantumBruhatGraph, x: int, y: int, budget
) -> bool:
    """Is there a directed path x -> y whose weight is exactly `budget`?"""
    budget = tuple(int(c) for c in budget)
    if any(c < 0 for c in budget):
        return False
    layers = reachable_weight_table(qbg, x, budget)
    zero = (0,) * len(budget)
    return y in layers.get(zero, set())


# ---------------------------------------------------------------------------
# the twisted minimum


def _twisted_targets(qbg: QuantumBruhatGraph, sigma: Automorphism) -> np.ndarray:
    """targets[x] = index of sigma(x) w0."""
    group = qbg.group
    table = group.enumerate()
    w0 = group.longest_element()
    w0_idx = np.abs(w0.images) - 1
    w0_sgn = np.sign(w0.images)
    rows = sigma.apply_many(table.mat)[:, w0_idx] * w0_sgn
    return np.fromiter(
        (table.index_of_images(rows[i]) for i in range(qbg.n)),
        dtype=np.int64,
        count=qbg.n,
    )


def _ball(ptr, dst, start: int, radius: int, stamp, stamp_val: int):
    """Stamp all vertices within `radius` of start; return the stamped list."""
    stamp[start] = stamp_val
    acc = [np.array([start], dtype=np.int64)]
    frontier = acc[0]
    for _ in range(radius):
        nbrs, _ = _gather_edges(ptr, dst, frontier)
        if not len(nbrs):
            break
        nbrs = np.unique(nbrs)
        nbrs = nbrs[stamp[nbrs] != stamp_val]
        if not len(nbrs):
            break
        stamp[nbrs] = stamp_val
        acc.append(nbrs)
        frontier = nbrs
    return acc


def min_twisted_distance(
    qbg: QuantumBruhatGraph, sigma: Automorphism
) -> tuple[int, int]:
    """min over x of d_Gamma(x, sigma(x) w0), with an argmin vertex.

    Exhaustive over all sources.  Sources are pruned honestly by the
    length obstruction d_Gamma(x, y) >= l(y) - l(x) (upward edges raise
    length by one, downward edges lower it); the remaining sources are
    checked by a two-sided capped search.
    """
    n = qbg.n
    targets = _twisted_targets(qbg, sigma)
    lengths = qbg.group.enumerate().lengths
    lw0 = qbg.group.longest_element().length()

    same = np.nonzero(targets == np.arange(n))[0]
    if len(same):
        return 0, int(same[0])

    # heuristic source order: length gap ascending, so the minimum turns up
    # early and caps every later search
    gap = np.abs(lw0 - 2 * lengths.astype(np.int64))
    order = np.argsort(gap, kind="stable")

    best = qbg_distance(qbg, int(order[0]), int(targets[order[0]]))
    argmin = int(order[0])
    for x in order[1:256]:
        if best == 1:
            break
        d = qbg_distance(qbg, int(x), int(targets[x]), cap=best - 1)
        if d is not None and d < best:
            best, argmin = d, int(x)

    # exhaustive pass: every source must satisfy d >= best
    stamp = np.zeros(n, dtype=np.int64)
    stamp_val = 0
    x_iter = 0
    while x_iter < n and best > 1:
        x = int(order[x_iter])
        x_iter += 1
        t = int(targets[x])
        if lw0 - 2 * int(lengths[x]) >= best:
            continue  # d(x, t) >= l(t) - l(x) already rules this source out
        cap = best - 1
        a = cap // 2
        stamp_val += 1
        _ball(qbg.out_ptr, qbg.out_dst, x, a, stamp, stamp_val)
        hit = stamp[t] == stamp_val
        if not hit:
            # reverse ball around the target, radius cap - a; negative stamps
            # mark the reverse side so the array is shared
            frontier = np.array([t], dtype=np.int64)
            stamp[t] = -stamp_val
            for _ in range(cap - a):
                nbrs, _ = _gather_edges(qbg.in_ptr, qbg.in_src, frontier)
                if not len(nbrs):
                    break
                nbrs = np.unique(nbrs)
                if (stamp[nbrs] == stamp_val).any():
                    hit = True
                    break
                nbrs = nbrs[stamp[nbrs] != -stamp_val]
                stamp[nbrs] = -stamp_val
                frontier = nbrs
        if hit:
            d = qbg_distance(qbg, x, t, cap=cap)
            assert d is not None
            best, argmin = d, x
            x_iter = 0  # restart the exhaustive pass with the tighter cap
    return best, argmin
