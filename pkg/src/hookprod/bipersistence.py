"""Rank invariant of the bifiltration given by the pair (f, g)."""
from __future__ import annotations

import numpy as np

from . import linalg_fp
from .complex_io import FilteredComplex, dimension, facets
from .errors import MissingG
from .grid_modules import GridModule
from .persistence1 import compute_diagram


def default_box(c: FilteredComplex) -> tuple:
    if c.gvals is None:
        raise MissingG("the pair filtration needs g values")
    return (max(c.fvals, default=0) + 2, max(c.gvals, default=0) + 2)


def inclusion_rank(c: FilteredComplex, sub: list, sup: list, k: int, p: int) -> int:
    """Rank of H_k(sub) -> H_k(sup) for index lists ``sub`` contained in ``sup``.

    The boundary matrix of ``sup`` is reduced with the simplices of ``sub``
    ordered first; a k-simplex of ``sub`` that stays unpaired is a class
    surviving the inclusion.
    """
    in_sub = set(sub)
    wanted = (k - 1, k, k + 1)
    order = sorted((i for i in sup if dimension(c.simplices[i]) in wanted),
                   key=lambda i: (i not in in_sub, len(c.simplices[i]), i))
    pos = {c.simplices[i]: n for n, i in enumerate(order)}
    columns = []
    for i in order:
        col = []
        for t, face in enumerate(facets(c.simplices[i])):
            r = pos.get(face)
            if r is not None:
                col.append((r, (-1) ** t % p))
        col.sort()
        columns.append(col)
    lows = linalg_fp.lows(columns, len(order), p)
    killed = {lo for lo in lows if lo >= 0}
    return sum(1 for n, i in enumerate(order)
               if i in in_sub and dimension(c.simplices[i]) == k and lows[n] < 0 and n not in killed)


def grid_module_of_pair(c: FilteredComplex, k: int, p: int = linalg_fp.DEFAULT_PRIME,
                        box=None) -> GridModule:
    if c.gvals is None:
        raise MissingG("the pair filtration needs g values")
    if not linalg_fp.is_prime(p):
        raise ValueError(f"{p} is not prime")
    box = tuple(box) if box is not None else default_box(c)
    xs = tuple(sorted({0} | {v for v in c.fvals if v <= box[0]}))
    ys = tuple(sorted({0} | {v for v in c.gvals if v <= box[1]}))
    nx, ny = len(xs), len(ys)
    members = {}
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            members[i, j] = [n for n in range(len(c)) if c.fvals[n] <= x and c.gvals[n] <= y]
    R = np.zeros((nx, ny, nx, ny), dtype=np.int64)
    for (i, j), sub in members.items():
        if not sub:
            continue
        for k2 in range(i, nx):
            for l2 in range(j, ny):
                R[i, j, k2, l2] = inclusion_rank(c, sub, members[k2, l2], k, p)
    return GridModule(box, xs, ys, R)


def axis_barcodes(c: FilteredComplex, k: int, p: int = linalg_fp.DEFAULT_PRIME):
    if c.gvals is None:
        raise MissingG("axis barcodes need both f and g")
    return compute_diagram(c, "f", k, p), compute_diagram(c, "g", k, p)
