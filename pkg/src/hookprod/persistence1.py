"""One-parameter persistence diagrams and barcode presentations."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import NamedTuple, Union

from . import linalg_fp
from .complex_io import FilteredComplex, dimension, facets
from .errors import UncoveredPoint

INF = math.inf
Death = Union[int, float]  # a natural number, or INF


class DiagramPoint(NamedTuple):
    birth: int
    death: Death

    @property
    def is_diagonal(self) -> bool:
        return self.birth == self.death

    @property
    def persistence(self) -> Death:
        return self.death - self.birth


def point(birth: int, death: Death) -> DiagramPoint:
    if death != INF:
        death = int(death)
    if birth < 0 or death < birth:
        raise ValueError(f"invalid diagram point ({birth}, {death})")
    return DiagramPoint(int(birth), death)


def _sort_key(pt: DiagramPoint):
    return (pt.birth, pt.death)


@dataclass(frozen=True)
class PersistenceDiagram:
    """Finite multiset of stored points.

    The infinitely many diagonal copies are implicit; explicitly stored
    diagonal points are zero-length pairs produced by the reduction.
    """

    points: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(point(*p) for p in self.points))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def off_diagonal(self) -> list:
        return [p for p in self.points if not p.is_diagonal]

    def multiset(self, include_diagonal: bool = True) -> dict:
        out: dict = {}
        for p in self.points:
            if include_diagonal or not p.is_diagonal:
                out[p] = out.get(p, 0) + 1
        return out


class Generator(NamedTuple):
    degree: int
    exponent: Death  # m * x^exponent = 0; INF means free


@dataclass(frozen=True)
class BarcodePresentation:
    generators: tuple = ()

    def dim(self, t: int) -> int:
        """Dimension of the graded piece in degree t."""
        return sum(1 for g in self.generators if g.degree <= t < g.degree + g.exponent)


def filtration_order(c: FilteredComplex, which: str) -> list:
    """Simplex indices sorted by value, faces first on ties, then input order."""
    vals = c.values(which)
    return sorted(range(len(c)), key=lambda i: (vals[i], len(c.simplices[i]), i))


def boundary_columns(c: FilteredComplex, order: list, p: int, dims=None):
    """Signed boundary columns of the simplices in ``order``, rows indexed by position.

    When ``dims`` is given, only simplices of those dimensions get columns
    and rows (the others are omitted from the matrix entirely).
    """
    pos = {}
    kept = []
    for i in order:
        if dims is None or dimension(c.simplices[i]) in dims:
            pos[c.simplices[i]] = len(kept)
            kept.append(i)
    columns = []
    for i in kept:
        entries = []
        for k, face in enumerate(facets(c.simplices[i])):
            r = pos.get(face)
            if r is not None:
                entries.append((r, (-1) ** k % p))
        entries.sort()
        columns.append(entries)
    return kept, columns


def compute_diagram(c: FilteredComplex, which: str, k: int, p: int = linalg_fp.DEFAULT_PRIME
                    ) -> PersistenceDiagram:
    vals = c.values(which)
    if not linalg_fp.is_prime(p):
        raise ValueError(f"{p} is not prime")
    order = filtration_order(c, which)
    kept, columns = boundary_columns(c, order, p, dims={k - 1, k, k + 1})
    lows = linalg_fp.lows(columns, len(kept), p)
    paired = set()
    pts = []
    for j, low in enumerate(lows):
        if low < 0:
            continue
        paired.add(low)
        birth_simplex = kept[low]
        if dimension(c.simplices[birth_simplex]) == k:
            pts.append(point(vals[birth_simplex], vals[kept[j]]))
    for j, low in enumerate(lows):
        i = kept[j]
        if low < 0 and j not in paired and dimension(c.simplices[i]) == k:
            pts.append(point(vals[i], INF))
    pts.sort(key=_sort_key)
    return PersistenceDiagram(tuple(pts))


def s_gamma(pd_f: PersistenceDiagram, gamma, pd_g: PersistenceDiagram = None) -> list:
    """Points of ``pd_f`` kept as generators under the matching ``gamma``.

    Only stored diagonal points whose image lies on the diagonal are dropped;
    diagonal copies that ``gamma`` sends to off-diagonal g points are added.
    A ``match`` entry counts as an off-diagonal image unless ``pd_g`` is
    supplied and shows the partner to be a stored diagonal point.  Use
    ``gamma.inverse()`` with the roles swapped for the g side.
    """
    image = gamma.image_of_f()
    out = []
    for i, pt in enumerate(pd_f):
        if i not in image:
            raise UncoveredPoint(f"point {i} {tuple(pt)} has no match")
        j = image[i]
        on_diagonal = j is None or (pd_g is not None and pd_g[j].is_diagonal)
        if pt.is_diagonal and on_diagonal:
            continue
        out.append(pt)
    # implicit diagonal copies of the f side that gamma sends off the diagonal
    for e in gamma.entries:
        if e.kind == "gdiag" and not (pd_g is not None and pd_g[e.b].is_diagonal):
            out.append(DiagramPoint(e.a, e.a))
    return out


def presentation_from_diagram(points) -> BarcodePresentation:
    pts = [point(*q) for q in points]
    return BarcodePresentation(tuple(Generator(q.birth, q.death - q.birth) for q in pts))


def _fmt_value(v) -> str:
    return "inf" if v == INF else str(v)


def diagram_to_csv(pd: PersistenceDiagram) -> str:
    buf = io.StringIO()
    buf.write("birth,death\n")
    for pt in pd:
        buf.write(f"{pt.birth},{_fmt_value(pt.death)}\n")
    return buf.getvalue()


def diagram_from_csv(text: str) -> PersistenceDiagram:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [h.strip() for h in rows[0]] != ["birth", "death"]:
        raise ValueError("diagram CSV must start with the header 'birth,death'")
    pts = []
    for n, row in enumerate(rows[1:], start=2):
        if not row or all(not x.strip() for x in row):
            continue
        if len(row) != 2:
            raise ValueError(f"diagram CSV line {n}: expected two fields")
        b, d = (x.strip() for x in row)
        if not b.isdigit() or not (d.isdigit() or d == "inf"):
            raise ValueError(f"diagram CSV line {n}: values must be naturals or 'inf'")
        pts.append(point(int(b), INF if d == "inf" else int(d)))
    return PersistenceDiagram(tuple(pts))
