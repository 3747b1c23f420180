"""Matchings between persistence diagrams and the bigraded product they induce.

A matching lists one entry per stored point of either diagram:

``match i j``
    f-point ``i`` paired with g-point ``j``;
``fdiag i t``
    f-point ``i`` sent to the diagonal copy ``(t, t)`` of the g side;
``gdiag t j``
    the diagonal copy ``(t, t)`` of the f side sent to g-point ``j``.

Every diagonal copy not mentioned is matched diagonal-to-diagonal and
contributes nothing.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple

from .errors import InvalidMatching, UnsupportedHook
from .grid_modules import FREE, INF, HookModule, hook, sorted_hooks
from .persistence1 import DiagramPoint, PersistenceDiagram, point

log = logging.getLogger(__name__)

KINDS = ("match", "fdiag", "gdiag")


class Entry(NamedTuple):
    kind: str
    a: int  # f index, or diagonal parameter for gdiag
    b: int  # g index, or diagonal parameter for fdiag


@dataclass(frozen=True)
class Matching:
    entries: tuple = ()

    def __post_init__(self):
        entries = []
        for e in self.entries:
            e = Entry(*e)
            if e.kind not in KINDS:
                raise InvalidMatching(f"unknown entry kind {e.kind!r}")
            if min(e.a, e.b) < 0:
                raise InvalidMatching(f"negative index or parameter in {e}")
            entries.append(e)
        object.__setattr__(self, "entries", tuple(entries))

    def image_of_f(self) -> dict:
        """f index -> g index, or None when sent to the diagonal."""
        out = {}
        for e in self.entries:
            if e.kind == "match":
                out[e.a] = e.b
            elif e.kind == "fdiag":
                out[e.a] = None
        return out

    def inverse(self) -> "Matching":
        swap = {"match": "match", "fdiag": "gdiag", "gdiag": "fdiag"}
        return Matching(tuple(Entry(swap[e.kind], e.b, e.a) for e in self.entries))

    def canonical(self) -> "Matching":
        return Matching(tuple(sorted(self.entries)))

    def encode(self) -> str:
        return "".join(f"{e.kind} {e.a} {e.b}\n" for e in self.entries)

    def sort_key(self) -> tuple:
        return tuple(sorted(self.encode().splitlines()))

    def validate(self, pd_f: PersistenceDiagram, pd_g: PersistenceDiagram):
        used_f, used_g = set(), set()
        for e in self.entries:
            fi = e.a if e.kind in ("match", "fdiag") else None
            gj = e.b if e.kind in ("match", "gdiag") else None
            if fi is not None:
                if fi >= len(pd_f):
                    raise InvalidMatching(f"f index {fi} out of range ({len(pd_f)} points)")
                if fi in used_f:
                    raise InvalidMatching(f"f point {fi} matched twice")
                used_f.add(fi)
            if gj is not None:
                if gj >= len(pd_g):
                    raise InvalidMatching(f"g index {gj} out of range ({len(pd_g)} points)")
                if gj in used_g:
                    raise InvalidMatching(f"g point {gj} matched twice")
                used_g.add(gj)
        missing_f = set(range(len(pd_f))) - used_f
        missing_g = set(range(len(pd_g))) - used_g
        if missing_f or missing_g:
            raise InvalidMatching(
                f"unmatched points: f {sorted(missing_f)}, g {sorted(missing_g)}")


def identity_matching(n: int) -> Matching:
    return Matching(tuple(Entry("match", i, i) for i in range(n)))


def parse_matching(text: str) -> Matching:
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if len(tok) != 3 or tok[0] not in KINDS or not (tok[1].isdigit() and tok[2].isdigit()):
            raise InvalidMatching(f"line {lineno}: expected '<match|fdiag|gdiag> <nat> <nat>'")
        entries.append(Entry(tok[0], int(tok[1]), int(tok[2])))
    return Matching(tuple(entries))


class ProductGenerator(NamedTuple):
    """Generator of bidegree (b, b2) killed by x^a y^c."""

    b: int
    b2: int
    a: object  # natural or INF
    c: object
    source: tuple  # (f point, g point) the generator came from


@dataclass(frozen=True)
class GammaProduct:
    generators: tuple = ()

    def __len__(self):
        return len(self.generators)

    def dim(self, u: int, v: int) -> int:
        """Graded-piece dimension read straight off the presentation."""
        return sum(1 for g in self.generators
                   if g.b <= u and g.b2 <= v and (u - g.b < g.a or v - g.b2 < g.c))


def build_product(pd_f: PersistenceDiagram, pd_g: PersistenceDiagram, gamma: Matching
                  ) -> GammaProduct:
    gamma.validate(pd_f, pd_g)
    gens = []
    for e in gamma.entries:
        if e.kind == "match":
            fp, gp = pd_f[e.a], pd_g[e.b]
        elif e.kind == "fdiag":
            fp, gp = pd_f[e.a], DiagramPoint(e.b, e.b)
        else:
            fp, gp = DiagramPoint(e.a, e.a), pd_g[e.b]
        if fp.is_diagonal and gp.is_diagonal:
            continue  # diagonal to diagonal: outside S_gamma
        gens.append(ProductGenerator(fp.birth, gp.birth, fp.persistence, gp.persistence, (fp, gp)))
    return GammaProduct(tuple(gens))


def hook_of_generator(g: ProductGenerator):
    if g.a == INF or g.c == INF:
        return hook((g.b, g.b2), FREE)
    if g.a == 0 and g.c == 0:
        return None
    return hook((g.b, g.b2), (g.b + g.a, g.b2 + g.c))


def hooks_of_product(prod: GammaProduct) -> list:
    out = []
    for g in prod.generators:
        h = hook_of_generator(g)
        if h is None:
            log.warning("dropping zero generator of bidegree (%s, %s)", g.b, g.b2)
            continue
        out.append(h)
    return sorted_hooks(out)


def reconstruct_from_hooks(hooks) -> tuple:
    """Diagrams and matching whose product has exactly the given hooks.

    Returns ``(pd_f, pd_g, gamma_bar)``; hook ``<p, q>`` becomes the f point
    ``(p1, q1)`` matched to the g point ``(p2, q2)``.
    """
    f_pts, g_pts, entries = [], [], []
    for n, h in enumerate(sorted_hooks(hooks)):
        if h.is_mixed:
            raise UnsupportedHook(f"hook {h} has exactly one infinite corner coordinate")
        if h.q == FREE:
            f_pts.append(point(h.p[0], INF))
            g_pts.append(point(h.p[1], INF))
        else:
            f_pts.append(point(h.p[0], h.q[0]))
            g_pts.append(point(h.p[1], h.q[1]))
        entries.append(Entry("match", n, n))
    return PersistenceDiagram(tuple(f_pts)), PersistenceDiagram(tuple(g_pts)), Matching(tuple(entries))


def product_hooks(pd_f, pd_g, gamma) -> list:
    return hooks_of_product(build_product(pd_f, pd_g, gamma))

