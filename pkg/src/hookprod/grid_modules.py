"""N^2-graded modules seen through their rank invariant on a truncation box.

A :class:`GridModule` stores ranks only at critical coordinates ``xs`` and
``ys``; between consecutive critical values the module is constant, so a
query at an arbitrary grid point is answered at the largest critical value
below it.
"""
from __future__ import annotations

import csv
import io
import math
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .errors import NotHookDecomposable, UnstableTail

INF = math.inf


def _coord(v):
    if v == INF:
        return INF
    if isinstance(v, bool) or int(v) != v or v < 0:
        raise ValueError(f"grid coordinates are natural numbers, got {v!r}")
    return int(v)


class HookModule(NamedTuple):
    """Interval module supported on ``{r >= p, not r >= q}``.

    ``q = (INF, INF)`` is the free quadrant.  A ``q`` with exactly one
    infinite coordinate is accepted, and read literally its support is
    the whole quadrant as well (no finite r dominates it).
    """

    p: tuple
    q: tuple

    @property
    def is_free(self) -> bool:
        return self.q[0] == INF or self.q[1] == INF

    @property
    def is_mixed(self) -> bool:
        return (self.q[0] == INF) != (self.q[1] == INF)

    def contains(self, r) -> bool:
        return (r[0] >= self.p[0] and r[1] >= self.p[1]
                and not (r[0] >= self.q[0] and r[1] >= self.q[1]))

    def normalized(self) -> "HookModule":
        return hook(self.p, FREE) if self.is_free else self


FREE = (INF, INF)


def hook(p, q=FREE) -> HookModule:
    if q == INF or q is None:
        q = FREE
    p = (_coord(p[0]), _coord(p[1]))
    q = (_coord(q[0]), _coord(q[1]))
    if INF in p:
        raise ValueError("the lower corner of a hook must be finite")
    if not (p[0] <= q[0] and p[1] <= q[1]):
        raise ValueError(f"hook corners must satisfy p <= q, got {p}, {q}")
    if p == q:
        raise ValueError(f"hook <{p},{q}> has empty support")
    return HookModule(p, q)


def hook_sort_key(h: HookModule):
    return (h.p, h.q)


def as_multiset(hooks: Iterable[HookModule]) -> Counter:
    return Counter(h.normalized() for h in hooks)


def sorted_hooks(hooks: Iterable[HookModule]) -> list:
    return sorted(hooks, key=hook_sort_key)


@dataclass(frozen=True, eq=False)
class GridModule:
    """Rank invariant on the truncation grid ``{0..box[0]} x {0..box[1]}``.

    ``rank[i, j, k, l]`` is the rank of the map from ``(xs[i], ys[j])`` to
    ``(xs[k], ys[l])``; it is zero for incomparable index pairs.
    """

    box: tuple
    xs: tuple
    ys: tuple
    rank: np.ndarray

    def __post_init__(self):
        if self.xs[0] != 0 or self.ys[0] != 0:
            raise ValueError("critical coordinates must start at 0")
        if list(self.xs) != sorted(set(self.xs)) or list(self.ys) != sorted(set(self.ys)):
            raise ValueError("critical coordinates must be strictly increasing")
        if self.xs[-1] > self.box[0] or self.ys[-1] > self.box[1]:
            raise ValueError("critical coordinates exceed the box")
        shape = (len(self.xs), len(self.ys)) * 2
        if self.rank.shape != shape:
            raise ValueError(f"rank array has shape {self.rank.shape}, expected {shape}")
        self.rank.setflags(write=False)

    @property
    def shape(self):
        return len(self.xs), len(self.ys)

    def _index(self, r):
        if not (0 <= r[0] <= self.box[0] and 0 <= r[1] <= self.box[1]):
            raise ValueError(f"grid point {r} lies outside the box {self.box}")
        return bisect_right(self.xs, r[0]) - 1, bisect_right(self.ys, r[1]) - 1

    def dim(self, r) -> int:
        i, j = self._index(r)
        return int(self.rank[i, j, i, j])

    def rank_between(self, r, s) -> int:
        if not (r[0] <= s[0] and r[1] <= s[1]):
            raise ValueError(f"{r} and {s} are not comparable")
        i, j = self._index(r)
        k, l = self._index(s)
        return int(self.rank[i, j, k, l])

    @property
    def dims(self) -> dict:
        """Dimensions at the critical grid points, keyed by coordinates."""
        d = np.einsum("ijij->ij", self.rank)
        return {(x, y): int(d[i, j]) for i, x in enumerate(self.xs) for j, y in enumerate(self.ys)}

    def refine(self, xs, ys) -> "GridModule":
        """Same module on a finer set of critical coordinates."""
        xs, ys = tuple(sorted(set(xs) | set(self.xs))), tuple(sorted(set(ys) | set(self.ys)))
        ix = np.array([bisect_right(self.xs, x) - 1 for x in xs])
        iy = np.array([bisect_right(self.ys, y) - 1 for y in ys])
        r = self.rank[np.ix_(ix, iy, ix, iy)] * comparable_mask(len(xs), len(ys))
        return GridModule(self.box, xs, ys, r)

    def total_dimension(self) -> int:
        return int(np.einsum("ijij->", self.rank))

    def is_zero(self) -> bool:
        return not self.rank.any()


def comparable_mask(nx: int, ny: int) -> np.ndarray:
    a = np.arange(nx)
    b = np.arange(ny)
    cx = a[:, None] <= a[None, :]
    cy = b[:, None] <= b[None, :]
    return (cx[:, None, :, None] & cy[None, :, None, :]).astype(np.int64)


def zero_module(box) -> GridModule:
    return GridModule(tuple(box), (0,), (0,), np.zeros((1, 1, 1, 1), dtype=np.int64))


def rank_equal(a: GridModule, b: GridModule) -> bool:
    if tuple(a.box) != tuple(b.box):
        raise ValueError(f"modules live on different boxes {a.box} and {b.box}")
    xs = set(a.xs) | set(b.xs)
    ys = set(a.ys) | set(b.ys)
    return bool(np.array_equal(a.refine(xs, ys).rank, b.refine(xs, ys).rank))


def check_invariants(m: GridModule) -> list:
    """Violations of the rank-function axioms; empty when the module is consistent."""
    problems = []
    R = m.rank
    nx, ny = m.shape
    d = np.einsum("ijij->ij", R)
    if (R < 0).any():
        problems.append("negative rank")
    mask = comparable_mask(nx, ny).astype(bool)
    if (R[~mask] != 0).any():
        problems.append("nonzero rank on an incomparable pair")
    for i in range(nx):
        for j in range(ny):
            for k in range(i, nx):
                for l in range(j, ny):
                    v = R[i, j, k, l]
                    if v > min(d[i, j], d[k, l]):
                        problems.append(f"rank exceeds dimension at {(i, j, k, l)}")
                    # composition through the intermediate corners
                    if v > R[i, j, k, j] or v > R[i, j, i, l] or v > R[k, j, k, l] or v > R[i, l, k, l]:
                        problems.append(f"rank not monotone at {(i, j, k, l)}")
    return problems


def _membership(hooks, xs, ys):
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    P = np.array([h.p for h in hooks], dtype=float).reshape(-1, 2)
    Q = np.array([h.q for h in hooks], dtype=float).reshape(-1, 2)
    above_p = (xs[None, :, None] >= P[:, 0, None, None]) & (ys[None, None, :] >= P[:, 1, None, None])
    above_q = (xs[None, :, None] >= Q[:, 0, None, None]) & (ys[None, None, :] >= Q[:, 1, None, None])
    return above_p.astype(np.int64), above_q.astype(np.int64)


def _hook_ranks(hooks, xs, ys) -> np.ndarray:
    nx, ny = len(xs), len(ys)
    if not hooks:
        return np.zeros((nx, ny, nx, ny), dtype=np.int64)
    above_p, above_q = _membership(hooks, xs, ys)
    R = np.einsum("hij,hkl->ijkl", above_p, 1 - above_q)
    return R * comparable_mask(nx, ny)


def evaluate_hooks(hooks: Iterable[HookModule], box) -> GridModule:
    """Rank invariant of a direct sum of hook modules on the given box."""
    hooks = list(hooks)
    box = (_coord(box[0]), _coord(box[1]))
    xs = {0} | {v for h in hooks for v in (h.p[0], h.q[0]) if v <= box[0]}
    ys = {0} | {v for h in hooks for v in (h.p[1], h.q[1]) if v <= box[1]}
    xs, ys = tuple(sorted(xs)), tuple(sorted(ys))
    return GridModule(box, xs, ys, _hook_ranks(hooks, xs, ys))


def _trim_tail(m: GridModule):
    """Drop a critical coordinate sitting on the box edge if the module is constant across it."""
    R = m.rank
    xs, ys = list(m.xs), list(m.ys)
    if len(xs) > 1 and xs[-1] == m.box[0]:
        a, b = len(xs) - 2, len(xs) - 1
        for j in range(len(ys)):
            if not (R[a, j, b, j] == R[a, j, a, j] == R[b, j, b, j]):
                raise UnstableTail(f"module still changes at the box edge x={m.box[0]}")
        R = R[:-1, :, :-1, :]
        xs.pop()
    if len(ys) > 1 and ys[-1] == m.box[1]:
        a, b = len(ys) - 2, len(ys) - 1
        for i in range(len(xs)):
            if not (R[i, a, i, b] == R[i, a, i, a] == R[i, b, i, b]):
                raise UnstableTail(f"module still changes at the box edge y={m.box[1]}")
        R = R[:, :-1, :, :-1]
        ys.pop()
    return tuple(xs), tuple(ys), R


def hook_decompose(m: GridModule) -> list:
    """The unique multiset of hooks whose rank invariant equals that of ``m``.

    Hooks are peeled off one birth point at a time: at an index-minimal
    point carrying a nonzero dimension every live summand is born there,
    and inclusion-exclusion of ``dim - rank`` over the up-set recovers
    their upper corners.  Raises NotHookDecomposable when a multiplicity
    comes out negative or a residual remains.
    """
    xs, ys, R = _trim_tail(m)
    R = R.astype(np.int64).copy()
    nx, ny = len(xs), len(ys)
    if (R < 0).any():
        raise NotHookDecomposable("negative entries in the rank invariant")
    found = []
    order = sorted(((i, j) for i in range(nx) for j in range(ny)), key=lambda t: (t[0] + t[1], t[0]))
    for i, j in order:
        mult = int(R[i, j, i, j])
        if mult < 0:
            raise NotHookDecomposable(f"negative residual dimension at {(xs[i], ys[j])}")
        if mult == 0:
            continue
        c = mult - R[i, j, i:, j:]
        padded = np.zeros((c.shape[0] + 1, c.shape[1] + 1), dtype=np.int64)
        padded[1:, 1:] = c
        ends = padded[1:, 1:] - padded[:-1, 1:] - padded[1:, :-1] + padded[:-1, :-1]
        n_free = mult - int(c[-1, -1])
        if (ends < 0).any() or n_free < 0:
            raise NotHookDecomposable(
                f"no nonnegative hook combination explains the module at {(xs[i], ys[j])}")
        p = (xs[i], ys[j])
        new = [hook(p) for _ in range(n_free)]
        for a, b in zip(*np.nonzero(ends)):
            new.extend([hook(p, (xs[i + a], ys[j + b]))] * int(ends[a, b]))
        R -= _hook_ranks(new, xs, ys)
        found.extend(new)
    if R.any():
        raise NotHookDecomposable("rank invariant is not a nonnegative sum of hook rank functions")
    return sorted_hooks(found)


def iso_hook_decomposable(a: GridModule, b: GridModule) -> bool:
    return as_multiset(hook_decompose(a)) == as_multiset(hook_decompose(b))


def _fmt(v) -> str:
    return "inf" if v == INF else str(v)


def _parse_coord(tok: str, lineno: int):
    tok = tok.strip()
    if tok == "inf":
        return INF
    if not tok.isdigit():
        raise ValueError(f"line {lineno}: expected a natural number or 'inf', got {tok!r}")
    return int(tok)


def hooks_to_csv(hooks: Iterable[HookModule]) -> str:
    buf = io.StringIO()
    buf.write("p1,p2,q1,q2\n")
    for h in sorted_hooks(hooks):
        buf.write(f"{h.p[0]},{h.p[1]},{_fmt(h.q[0])},{_fmt(h.q[1])}\n")
    return buf.getvalue()


def hooks_from_csv(text: str) -> list:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [h.strip() for h in rows[0]] != ["p1", "p2", "q1", "q2"]:
        raise ValueError("hook CSV must start with the header 'p1,p2,q1,q2'")
    out = []
    for n, row in enumerate(rows[1:], start=2):
        if not row or all(not x.strip() for x in row):
            continue
        if len(row) != 4:
            raise ValueError(f"line {n}: expected four fields")
        p1, p2, q1, q2 = (_parse_coord(t, n) for t in row)
        if INF in (p1, p2):
            raise ValueError(f"line {n}: p must be finite")
        out.append(hook((p1, p2), (q1, q2)))
    return out


def grid_to_csv(m: GridModule) -> str:
    """Compressed rank-invariant dump; a leading comment records the box."""
    buf = io.StringIO()
    buf.write(f"# box {m.box[0]} {m.box[1]}\n")
    buf.write("r1,r2,s1,s2,rank\n")
    nx, ny = m.shape
    for i in range(nx):
        for j in range(ny):
            for k in range(i, nx):
                for l in range(j, ny):
                    buf.write(f"{m.xs[i]},{m.ys[j]},{m.xs[k]},{m.ys[l]},{int(m.rank[i, j, k, l])}\n")
    return buf.getvalue()


def grid_from_csv(text: str) -> GridModule:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# box "):
        raise ValueError("grid CSV must start with a '# box B1 B2' line")
    b1, b2 = (int(t) for t in lines[0].split()[2:4])
    rows = list(csv.reader(lines[1:]))
    if not rows or rows[0] != ["r1", "r2", "s1", "s2", "rank"]:
        raise ValueError("missing 'r1,r2,s1,s2,rank' header")
    data = [tuple(int(t) for t in row) for row in rows[1:] if row]
    xs = tuple(sorted({0} | {d[0] for d in data} | {d[2] for d in data}))
    ys = tuple(sorted({0} | {d[1] for d in data} | {d[3] for d in data}))
    ix = {x: i for i, x in enumerate(xs)}
    iy = {y: j for j, y in enumerate(ys)}
    R = np.zeros((len(xs), len(ys)) * 2, dtype=np.int64)
    for r1, r2, s1, s2, v in data:
        R[ix[r1], iy[r2], ix[s1], iy[s2]] = v
    return GridModule((b1, b2), xs, ys, R)
