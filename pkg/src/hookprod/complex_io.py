"""Simplicial complexes with one or two simplex-wise filtration functions.

Text format, one simplex per line::

    # comment
    simplex 0 1 2  f=1 g=101

Vertices may be listed in any order; either every line carries ``g=`` or
none does.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence, Union

from .errors import ClosureError, ComplexSyntaxError, MissingG, MonotonicityError

Simplex = tuple  # strictly increasing tuple of vertex ids


def make_simplex(vertices: Iterable[int]) -> Simplex:
    s = tuple(sorted(vertices))
    if not s:
        raise ValueError("a simplex needs at least one vertex")
    if any(a == b for a, b in zip(s, s[1:])):
        raise ValueError(f"repeated vertex in simplex {s}")
    if s[0] < 0:
        raise ValueError(f"negative vertex id in simplex {s}")
    return s


def dimension(s: Simplex) -> int:
    return len(s) - 1


def facets(s: Simplex):
    """Codimension-one faces, the i-th omitting vertex i."""
    if len(s) == 1:
        return []
    return [s[:i] + s[i + 1:] for i in range(len(s))]


@dataclass(frozen=True)
class FilteredComplex:
    simplices: tuple
    fvals: tuple
    gvals: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "simplices", tuple(make_simplex(s) for s in self.simplices))
        object.__setattr__(self, "fvals", tuple(self.fvals))
        if self.gvals is not None:
            object.__setattr__(self, "gvals", tuple(self.gvals))
        _validate(self)

    def __len__(self):
        return len(self.simplices)

    @property
    def has_g(self) -> bool:
        return self.gvals is not None

    def values(self, which: str) -> tuple:
        if which == "f":
            return self.fvals
        if which == "g":
            if self.gvals is None:
                raise MissingG("function g requested but the complex carries no g values")
            return self.gvals
        raise ValueError(f"unknown function {which!r}")

    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.simplices)}


def _check_nat(value, what: str):
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ValueError(f"{what} must be a natural number, got {value!r}")


def _validate(c: FilteredComplex):
    n = len(c.simplices)
    if len(c.fvals) != n or (c.gvals is not None and len(c.gvals) != n):
        raise ValueError("one filtration value per simplex is required")
    for v in c.fvals:
        _check_nat(v, "f value")
    for v in c.gvals or ():
        _check_nat(v, "g value")
    idx = {}
    for i, s in enumerate(c.simplices):
        if s in idx:
            raise ValueError(f"duplicate simplex {s}")
        idx[s] = i
    for i, s in enumerate(c.simplices):
        for face in facets(s):
            j = idx.get(face)
            if j is None:
                raise ClosureError(f"simplex {_fmt(s)} is missing its face {_fmt(face)}")
            if c.fvals[j] > c.fvals[i]:
                raise MonotonicityError(
                    f"f({_fmt(face)})={c.fvals[j]} exceeds f({_fmt(s)})={c.fvals[i]}")
            if c.gvals is not None and c.gvals[j] > c.gvals[i]:
                raise MonotonicityError(
                    f"g({_fmt(face)})={c.gvals[j]} exceeds g({_fmt(s)})={c.gvals[i]}")


def _fmt(s: Simplex) -> str:
    return "[" + " ".join(map(str, s)) + "]"


def _parse_nat(token: str, lineno: int, key: str) -> int:
    if not token.isdigit():
        raise ComplexSyntaxError(lineno, f"{key}= expects a natural number, got {token!r}")
    return int(token)


def parse_complex(text: str) -> FilteredComplex:
    simplices, fvals, gvals = [], [], []
    seen_g = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] != "simplex":
            raise ComplexSyntaxError(lineno, f"expected 'simplex', got {tokens[0]!r}")
        verts, f, g = [], None, None
        for tok in tokens[1:]:
            if tok.startswith("f="):
                if f is not None:
                    raise ComplexSyntaxError(lineno, "f= given twice")
                f = _parse_nat(tok[2:], lineno, "f")
            elif tok.startswith("g="):
                if g is not None:
                    raise ComplexSyntaxError(lineno, "g= given twice")
                g = _parse_nat(tok[2:], lineno, "g")
            elif f is not None or g is not None:
                raise ComplexSyntaxError(lineno, f"vertex {tok!r} after filtration values")
            elif tok.isdigit():
                verts.append(int(tok))
            else:
                raise ComplexSyntaxError(lineno, f"bad vertex identifier {tok!r}")
        if not verts:
            raise ComplexSyntaxError(lineno, "simplex without vertices")
        if f is None:
            raise ComplexSyntaxError(lineno, "missing f= value")
        if seen_g is None:
            seen_g = g is not None
        elif seen_g != (g is not None):
            raise ComplexSyntaxError(lineno, "either all or no lines must carry g=")
        if len(set(verts)) != len(verts):
            raise ComplexSyntaxError(lineno, "repeated vertex")
        simplex = tuple(sorted(verts))
        if simplex in simplices:
            raise ComplexSyntaxError(lineno, f"duplicate simplex {_fmt(simplex)}")
        simplices.append(simplex)
        fvals.append(f)
        gvals.append(g)
    return FilteredComplex(tuple(simplices), tuple(fvals), tuple(gvals) if seen_g else None)


def render_complex(c: FilteredComplex) -> str:
    lines = []
    for i, s in enumerate(c.simplices):
        line = "simplex " + " ".join(map(str, s)) + f"  f={c.fvals[i]}"
        if c.gvals is not None:
            line += f" g={c.gvals[i]}"
        lines.append(line)
    return "\n".join(lines) + ("\n" if lines else "")


def read_complex(path) -> FilteredComplex:
    with open(path, encoding="utf-8") as fh:
        return parse_complex(fh.read())


Threshold = Union[int, Sequence[int]]


def sublevel(c: FilteredComplex, which: str, threshold: Threshold) -> FilteredComplex:
    """Subcomplex of simplices whose value(s) are <= threshold.

    ``which='pair'`` takes a pair threshold compared coordinate-wise.
    """
    if which == "pair":
        if c.gvals is None:
            raise MissingG("pair sublevel sets need g values")
        t1, t2 = threshold
        _check_nat(t1, "threshold")
        _check_nat(t2, "threshold")
        keep = [i for i in range(len(c)) if c.fvals[i] <= t1 and c.gvals[i] <= t2]
    else:
        vals = c.values(which)
        _check_nat(threshold, "threshold")
        keep = [i for i in range(len(c)) if vals[i] <= threshold]
    return FilteredComplex(
        tuple(c.simplices[i] for i in keep),
        tuple(c.fvals[i] for i in keep),
        tuple(c.gvals[i] for i in keep) if c.gvals is not None else None,
    )


def closure(tops: Iterable[Iterable[int]]) -> list:
    """All faces of the given simplices, sorted by dimension then lexicographically."""
    out = set()
    for t in tops:
        t = make_simplex(t)
        for k in range(1, len(t) + 1):
            out.update(combinations(t, k))
    return sorted(out, key=lambda s: (len(s), s))
