"""Hot loops of the simplex-grid search, in numba and pure-numpy flavours.

Both backends solve the same problem and return identical answers:

    maximize   sum(k[c] for c in subset classes)
    over       integer compositions k of n into C class counts
    such that  the population q_j = k[class_of[j]] / (n * class_size[class_of[j]])
               has its Lorenz curve on or below the initial curve (px, py).

The search space is split into chunks by the first class count ``k[0]``.
Inside a chunk compositions are visited in lexicographic order and only a
strict improvement replaces the incumbent, so every chunk reports its
lexicographically smallest maximizer; merging chunks in ascending order
keeps that property globally, whatever order the chunks ran in.

Because the initial curve is concave, comparing at the candidate's own knots
is enough: on each candidate segment the difference (concave minus linear)
attains its minimum at an endpoint.
"""
from __future__ import annotations

from itertools import chain, combinations

import numpy as np

from ._accel import njit, prange, default_backend
from .errors import UsageError


@njit(cache=True)
def _below_curve(q, inv_w, w, px, py, tol, idx):
    d = q.size
    for k in range(d):
        idx[k] = k
    # insertion sort on q/w descending; d <= 9
    for a in range(1, d):
        cur = idx[a]
        key = q[cur] * inv_w[cur]
        b = a - 1
        while b >= 0 and q[idx[b]] * inv_w[idx[b]] < key:
            idx[b + 1] = idx[b]
            b -= 1
        idx[b + 1] = cur
    x = 0.0
    y = 0.0
    seg = 0
    last = px.size - 1
    for a in range(d):
        j = idx[a]
        x += w[j]
        y += q[j]
        while seg < last - 1 and px[seg + 1] < x:
            seg += 1
        if x >= px[last]:
            lp = py[last]
        else:
            lp = py[seg] + (py[seg + 1] - py[seg]) * (x - px[seg]) / (px[seg + 1] - px[seg])
        if y > lp + tol:
            return False
    return True


@njit(cache=True)
def _search_chunk(first, n, class_of, class_size, subset, w, px, py, tol, out):
    n_cls = class_size.size
    d = class_of.size
    if n_cls == 1 and first != n:
        return -1
    k = np.zeros(n_cls, np.int64)
    k[0] = first
    if n_cls > 1:
        k[n_cls - 1] += n - first
    inv_w = 1.0 / w
    scale = np.empty(d)
    for j in range(d):
        scale[j] = 1.0 / (n * class_size[class_of[j]])
    q = np.empty(d)
    idx = np.empty(d, np.int64)
    best = -1
    while True:
        score = 0
        for c in range(n_cls):
            if subset[c]:
                score += k[c]
        if score > best:
            for j in range(d):
                q[j] = k[class_of[j]] * scale[j]
            if _below_curve(q, inv_w, w, px, py, tol, idx):
                best = score
                for c in range(n_cls):
                    out[c] = k[c]
        # advance to the next composition (positions 1..n_cls-1, lex order)
        j = n_cls - 1
        while j >= 1 and k[j] == 0:
            j -= 1
        if j <= 1:
            break
        t = k[j] - 1
        k[j] = 0
        k[j - 1] += 1
        k[n_cls - 1] = t
    return best


@njit(parallel=True, cache=True)
def _search_numba(n, class_of, class_size, subset, w, px, py, tol):
    n_cls = class_size.size
    scores = np.full(n + 1, -1, np.int64)
    counts = np.zeros((n + 1, n_cls), np.int64)
    for first in prange(n + 1):
        scores[first] = _search_chunk(first, n, class_of, class_size, subset,
                                      w, px, py, tol, counts[first])
    return scores, counts


def compositions(total: int, parts: int) -> np.ndarray:
    """All compositions of `total` into `parts` nonnegative integers, lex order."""
    if parts == 0:
        return np.zeros((1 if total == 0 else 0, 0), np.int64)
    if parts == 1:
        return np.array([[total]], np.int64)
    bars = np.fromiter(chain.from_iterable(combinations(range(total + parts - 1), parts - 1)),
                       np.int64).reshape(-1, parts - 1)
    edges = np.hstack([np.full((bars.shape[0], 1), -1), bars,
                       np.full((bars.shape[0], 1), total + parts - 1)])
    return np.diff(edges, axis=1) - 1


def _below_curve_numpy(Q, w, px, py, tol):
    order = np.argsort(-(Q / w), axis=1, kind="stable")
    xs = np.cumsum(w[order], axis=1)
    ys = np.cumsum(np.take_along_axis(Q, order, axis=1), axis=1)
    return np.all(ys <= np.interp(xs, px, py) + tol, axis=1)


def _chunk_blocks(first, n, n_cls):
    """Compositions with ``k[0] == first`` in lex order, one block per ``k[1]``."""
    if n_cls == 1:
        if first == n:
            yield np.array([[n]], np.int64)
        return
    if n_cls == 2:
        yield np.array([[first, n - first]], np.int64)
        return
    for second in range(n - first + 1):
        rest = compositions(n - first - second, n_cls - 2)
        head = np.tile(np.array([first, second], np.int64), (rest.shape[0], 1))
        yield np.hstack([head, rest])


def _search_numpy(n, class_of, class_size, subset, w, px, py, tol):
    n_cls = class_size.size
    scores = np.full(n + 1, -1, np.int64)
    counts = np.zeros((n + 1, n_cls), np.int64)
    scale = 1.0 / (n * class_size[class_of])
    for first in range(n + 1):
        best = -1
        for K in _chunk_blocks(first, n, n_cls):
            score = K[:, subset].sum(axis=1)
            live = np.flatnonzero(score > best)
            if live.size == 0:
                continue
            ok = _below_curve_numpy(K[live][:, class_of] * scale, w, px, py, tol)
            if not ok.any():
                continue
            cand = live[ok]
            # argmax returns the first maximizer, i.e. the lex smallest
            top = cand[np.argmax(score[cand])]
            best = int(score[top])
            counts[first] = K[top]
        scores[first] = best
    return scores, counts


def grid_search(n: int, class_of, class_size, subset, w, px, py, tol: float = 1e-9,
                backend: str | None = None) -> tuple[int, np.ndarray | None]:
    """Best (score, class counts) over the simplex grid; score -1 if nothing is feasible."""
    backend = backend or default_backend()
    args = (int(n), np.ascontiguousarray(class_of, np.int64),
            np.ascontiguousarray(class_size, np.int64),
            np.ascontiguousarray(subset, np.bool_),
            np.ascontiguousarray(w, np.float64), np.ascontiguousarray(px, np.float64),
            np.ascontiguousarray(py, np.float64), float(tol))
    if backend == "numba":
        scores, counts = _search_numba(*args)
    elif backend == "numpy":
        scores, counts = _search_numpy(*args)
    else:
        raise UsageError(f"unknown backend {backend!r}")
    best, arg = -1, None
    for first in range(scores.size):
        if scores[first] > best:
            best, arg = int(scores[first]), counts[first].copy()
    return best, arg
