"""Bottleneck and interleaving distances, and the search for a minimizing matching."""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .errors import BudgetExceeded, NotHookDecomposable
from .gamma_product import Entry, Matching, build_product, hooks_of_product
from .grid_modules import FREE, GridModule, HookModule, as_multiset, evaluate_hooks, hook_decompose
from .persistence1 import INF, DiagramPoint, PersistenceDiagram, point

EXACT = "exact_interleaving"
MATCHING = "matching_distance_estimate"


def diagonal_projection(pt: DiagramPoint) -> int:
    """Integer diagonal copy used when a point is sent to the diagonal."""
    if pt.death == INF:
        return pt.birth
    return (pt.birth + pt.death) // 2


# --------------------------------------------------------------------------
# bottleneck


def _linf(a: DiagramPoint, b: DiagramPoint):
    return max(abs(a.birth - b.birth), abs(a.death - b.death))


def _half(pt: DiagramPoint) -> Fraction:
    return Fraction(pt.death - pt.birth, 2)


def _max_matching(adj: list, n_right: int) -> list:
    """Kuhn's augmenting paths; ``adj[u]`` lists right vertices in preference order."""
    match_r = [-1] * n_right
    match_l = [-1] * len(adj)

    def try_augment(u, seen):
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if match_r[v] < 0 or try_augment(match_r[v], seen):
                match_r[v] = u
                match_l[u] = v
                return True
        return False

    for u in range(len(adj)):
        try_augment(u, set())
    return match_l


def _finite_bottleneck(A: list, B: list, ia: list, ib: list):
    """Bottleneck between finite points A and B (with index labels); returns (value, entries)."""
    na, nb = len(A), len(B)
    # left: A points then diagonal copies of B; right: B points then diagonal copies of A
    def cost(u, v):
        if u < na and v < nb:
            if A[u].is_diagonal or B[v].is_diagonal:
                return None  # stored diagonal points only ever pair with the diagonal
            return Fraction(_linf(A[u], B[v]))
        if u < na and v == nb + u:
            return _half(A[u])
        if u >= na and v < nb and u - na == v:
            return _half(B[v])
        if u >= na and v >= nb:
            return Fraction(0)
        return None

    n = na + nb
    edges = [[(cost(u, v), v) for v in range(n) if cost(u, v) is not None] for u in range(n)]
    candidates = sorted({c for row in edges for c, _ in row})

    def feasible(delta):
        adj = [[v for c, v in sorted(row, key=lambda cv: (cv[0], abs(cv[1] - u), cv[1])) if c <= delta]
               for u, row in enumerate(edges)]
        m = _max_matching(adj, n)
        return (all(v >= 0 for v in m), m)

    if n == 0:
        return Fraction(0), []
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(candidates[mid])[0]:
            hi = mid
        else:
            lo = mid + 1
    value = candidates[lo]
    _, m = feasible(value)
    entries = []
    for u, v in enumerate(m):
        if u < na and v < nb:
            entries.append(Entry("match", ia[u], ib[v]))
        elif u < na:
            entries.append(Entry("fdiag", ia[u], diagonal_projection(A[u])))
        elif v < nb:
            entries.append(Entry("gdiag", diagonal_projection(B[v]), ib[v]))
    return value, entries


def bottleneck(pd_a: PersistenceDiagram, pd_b: PersistenceDiagram):
    """Exact bottleneck distance (infinity norm) and a witnessing matching.

    Essential points pair only among themselves, in birth order.  The value
    is the usual one with diagonal cost half the persistence; in the
    witness a point sent to the diagonal lands on the integer copy
    ``floor((b + d) / 2)``.  Returns ``(value, matching)``; the value is a
    Fraction, or ``math.inf`` when the essential counts differ.
    """
    fin_a = [(i, p) for i, p in enumerate(pd_a) if p.death != INF]
    fin_b = [(j, p) for j, p in enumerate(pd_b) if p.death != INF]
    ess_a = sorted(((p.birth, i) for i, p in enumerate(pd_a) if p.death == INF))
    ess_b = sorted(((p.birth, j) for j, p in enumerate(pd_b) if p.death == INF))
    value, entries = _finite_bottleneck([p for _, p in fin_a], [p for _, p in fin_b],
                                        [i for i, _ in fin_a], [j for j, _ in fin_b])
    for (ba, i), (bb, j) in zip(ess_a, ess_b):
        value = max(value, Fraction(abs(ba - bb)))
        entries.append(Entry("match", i, j))
    for ba, i in ess_a[len(ess_b):]:
        entries.append(Entry("fdiag", i, ba))
    for bb, j in ess_b[len(ess_a):]:
        entries.append(Entry("gdiag", bb, j))
    if len(ess_a) != len(ess_b):
        value = math.inf
    return value, Matching(tuple(sorted(entries)))


# --------------------------------------------------------------------------
# exact interleaving between sums of hooks


def _shifted(r, e):
    return (r[0] + e, r[1] + e)


def hom_nonzero(src: HookModule, dst: HookModule, shift: int) -> bool:
    """Whether a nonzero morphism ``src -> dst`` of degree ``(shift, shift)`` exists.

    A hook is cyclic on its lower corner with one monomial relation, so the
    generator must land in ``dst`` and the relation must be honoured there.
    """
    if not dst.contains(_shifted(src.p, shift)):
        return False
    if src.is_free:
        return True
    return not dst.contains(_shifted(src.q, shift))


def _solvable_mod_p(rows: list, rhs: list, ncols: int, p: int) -> bool:
    rows = [list(r) + [b % p] for r, b in zip(rows, rhs)]
    piv_row = 0
    for col in range(ncols):
        sel = next((r for r in range(piv_row, len(rows)) if rows[r][col] % p), None)
        if sel is None:
            continue
        rows[piv_row], rows[sel] = rows[sel], rows[piv_row]
        inv = pow(rows[piv_row][col], p - 2, p)
        rows[piv_row] = [v * inv % p for v in rows[piv_row]]
        for r in range(len(rows)):
            if r != piv_row and rows[r][col] % p:
                f = rows[r][col]
                rows[r] = [(v - f * w) % p for v, w in zip(rows[r], rows[piv_row])]
        piv_row += 1
    return all(any(v % p for v in r[:-1]) or r[-1] % p == 0 for r in rows)


def _interleaved(A: list, B: list, eps: int, p: int, budget: int) -> bool:
    """Decide whether an eps-interleaving exists between the hook sums A and B.

    Morphisms between hook sums are matrices of scalars on the nonzero Hom
    slots; each composite is checked at the generator of its source summand.
    The cheaper side's coefficients are enumerated exhaustively and the
    other side solved as a linear system over F_p.
    """
    allowed_ab = [(j, i) for i in range(len(A)) for j in range(len(B)) if hom_nonzero(A[i], B[j], eps)]
    allowed_ba = [(i, j) for j in range(len(B)) for i in range(len(A)) if hom_nonzero(B[j], A[i], eps)]
    if len(allowed_ba) < len(allowed_ab):
        A, B = B, A
        allowed_ab, allowed_ba = allowed_ba, allowed_ab
    if len(allowed_ab) > budget:
        raise BudgetExceeded(
            f"{len(allowed_ab)} free coefficients to enumerate at eps={eps} (budget {budget})")
    d_index = {slot: n for n, slot in enumerate(allowed_ba)}
    two = 2 * eps
    # composite A_i -> B -> A_i2 is visible iff the generator of A_i survives into A_i2
    eq_a = [(i, i2) for i in range(len(A)) for i2 in range(len(A)) if A[i2].contains(_shifted(A[i].p, two))]
    eq_b = [(j, j2) for j in range(len(B)) for j2 in range(len(B)) if B[j2].contains(_shifted(B[j].p, two))]
    for values in itertools.product(range(p), repeat=len(allowed_ab)):
        C = dict(zip(allowed_ab, values))
        rows, rhs = [], []
        for i, i2 in eq_a:
            row = [0] * len(allowed_ba)
            for j in range(len(B)):
                c = C.get((j, i), 0)
                n = d_index.get((i2, j))
                if c and n is not None:
                    row[n] = (row[n] + c) % p
            rows.append(row)
            rhs.append(1 if i == i2 else 0)
        for j, j2 in eq_b:
            row = [0] * len(allowed_ba)
            for i in range(len(A)):
                c = C.get((j2, i), 0)
                n = d_index.get((i, j))
                if c and n is not None:
                    row[n] = (row[n] + c) % p
            rows.append(row)
            rhs.append(1 if j == j2 else 0)
        if _solvable_mod_p(rows, rhs, len(allowed_ba), p):
            return True
    return False


def default_max_eps(A: Iterable[HookModule], B: Iterable[HookModule]) -> int:
    coords = [v for h in list(A) + list(B) for v in h.p + h.q if v != INF]
    return max(coords, default=0) + 1


def interleaving_hooks(A, B, max_eps: Optional[int] = None, p: int = 2, budget: int = 12,
                       shortcut: bool = True) -> Optional[int]:
    """Smallest integer eps admitting an eps-interleaving, or None if above ``max_eps``.

    With ``shortcut`` the eps = 0 case is decided by comparing hook
    multisets (decompositions into hooks are unique up to isomorphism).
    """
    A = [h.normalized() for h in A]
    B = [h.normalized() for h in B]
    if max_eps is None:
        max_eps = default_max_eps(A, B)
    if sum(h.q == FREE for h in A) != sum(h.q == FREE for h in B):
        return None  # free summands never die under a shift
    for eps in range(0, max_eps + 1):
        if eps == 0 and shortcut:
            if as_multiset(A) == as_multiset(B):
                return 0
            continue
        if _interleaved(A, B, eps, p, budget):
            return eps
    return None


def interleaving_exact(a: GridModule, b: GridModule, max_eps: Optional[int] = None, p: int = 2,
                       budget: int = 12) -> Optional[int]:
    """Exact integer interleaving distance between two hook-decomposable grid modules.

    The modules are first decomposed into hooks (raises NotHookDecomposable
    otherwise).  ``budget`` caps the number of coefficients enumerated by
    brute force.  Returns None when no interleaving exists up to ``max_eps``.
    """
    return interleaving_hooks(hook_decompose(a), hook_decompose(b), max_eps, p, budget)


# --------------------------------------------------------------------------
# lower bound from restrictions to diagonal lines


def line_origin(offset: int):
    return (0, offset) if offset >= 0 else (-offset, 0)


def default_offsets(a: GridModule, b: GridModule) -> list:
    xs = set(a.xs) | set(b.xs)
    ys = set(a.ys) | set(b.ys)
    offs = {y - x for x in xs for y in ys} | {0}
    return sorted(o for o in offs if -a.box[0] <= o <= a.box[1])


def restricted_barcode(m: GridModule, offset: int, extra_breaks=()) -> PersistenceDiagram:
    """Barcode of ``m`` along the slope-one line with the given offset (line parameter t).

    The module is constant past the box, so the line is followed until both
    coordinates have left it; a bar still alive there is essential.
    """
    x0, y0 = line_origin(offset)
    T = max(m.box[0] - x0, m.box[1] - y0)
    if T < 0:
        return PersistenceDiagram(())
    ts = {0} | {x - x0 for x in m.xs if 0 <= x - x0 <= T} | {y - y0 for y in m.ys if 0 <= y - y0 <= T}
    ts |= {t for t in extra_breaks if 0 <= t <= T}
    ts = sorted(ts)
    n = len(ts)

    def at(t):
        return (min(x0 + t, m.box[0]), min(y0 + t, m.box[1]))

    def rk(u, v):
        if u < 0:
            return 0
        return m.rank_between(at(ts[u]), at(ts[v]))

    bars = []
    for u in range(n):
        for v in range(u + 1, n):
            mult = rk(u, v - 1) - rk(u, v) - rk(u - 1, v - 1) + rk(u - 1, v)
            bars.extend([point(ts[u], ts[v])] * mult)
        bars.extend([point(ts[u], INF)] * (rk(u, n - 1) - rk(u - 1, n - 1)))
    return PersistenceDiagram(tuple(bars))


def _breaks(m: GridModule, offset: int) -> set:
    x0, y0 = line_origin(offset)
    return {x - x0 for x in m.xs} | {y - y0 for y in m.ys}


def matching_distance_estimate(a: GridModule, b: GridModule, lines=None):
    """Max over slope-one lines of the bottleneck distance between restrictions.

    ``lines`` is an iterable of integer offsets ``y - x``; by default every
    offset between critical coordinates.  An integer eps-interleaving
    restricts to one on each such line, so the result never exceeds the
    interleaving distance.
    """
    if tuple(a.box) != tuple(b.box):
        raise ValueError("modules must share a box")
    offsets = default_offsets(a, b) if lines is None else list(lines)
    best = Fraction(0)
    for off in offsets:
        ba = restricted_barcode(a, off, _breaks(b, off))
        bb = restricted_barcode(b, off, _breaks(a, off))
        val, _ = bottleneck(ba, bb)
        if val > best:
            best = val
            if best == math.inf:
                break
    return best


# --------------------------------------------------------------------------
# search for the minimizing matching


@dataclass
class SearchConfig:
    objective: str = "auto"  # auto | exact | matching
    max_points: int = 8
    budget: int = 12
    p: int = 2
    max_eps: Optional[int] = None
    max_candidates: int = 200_000
    lines: Optional[list] = None


@dataclass
class SearchReport:
    best_matching: Matching
    best_value: object
    objective: str
    evaluations: int
    ties: int = 1
    scores: dict = field(default_factory=dict, repr=False)

    def render(self) -> str:
        lines = [
            f"objective: {self.objective}",
            f"best_value: {_fmt_value(self.best_value)}",
            f"evaluations: {self.evaluations}",
            f"tied_minimizers: {self.ties}",
            "best_matching:",
        ]
        return "\n".join(lines) + "\n" + self.best_matching.encode()


def _fmt_value(v) -> str:
    if v == math.inf or v is None:
        return "inf"
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def candidate_matchings(pd_f: PersistenceDiagram, pd_g: PersistenceDiagram, target: GridModule,
                        max_points: int = 8, max_candidates: int = 200_000) -> list:
    """Candidate bijections: every partial pairing of the off-diagonal points.

    Unpaired points go to the diagonal copy at their projection or at any
    critical coordinate of the target on the other axis.  Stored diagonal
    points always stay on the diagonal.
    """
    F = [i for i, p in enumerate(pd_f) if not p.is_diagonal]
    G = [j for j, p in enumerate(pd_g) if not p.is_diagonal]
    if len(F) > max_points or len(G) > max_points:
        raise BudgetExceeded(
            f"{len(F)} and {len(G)} off-diagonal points exceed the enumeration bound {max_points}")
    fixed = [Entry("fdiag", i, p.birth) for i, p in enumerate(pd_f) if p.is_diagonal]
    fixed += [Entry("gdiag", p.birth, j) for j, p in enumerate(pd_g) if p.is_diagonal]
    t_f = {i: sorted({diagonal_projection(pd_f[i])} | set(target.ys)) for i in F}
    t_g = {j: sorted({diagonal_projection(pd_g[j])} | set(target.xs)) for j in G}

    out = []
    for k in range(min(len(F), len(G)) + 1):
        for fs in itertools.combinations(F, k):
            for gs in itertools.permutations(G, k):
                pairs = [Entry("match", i, j) for i, j in zip(fs, gs)]
                free_f = [i for i in F if i not in fs]
                free_g = [j for j in G if j not in gs]
                choices = [[Entry("fdiag", i, t) for t in t_f[i]] for i in free_f]
                choices += [[Entry("gdiag", t, j) for t in t_g[j]] for j in free_g]
                for diag in itertools.product(*choices):
                    out.append(Matching(tuple(sorted(pairs + list(diag) + fixed))))
                    if len(out) > max_candidates:
                        raise BudgetExceeded(f"more than {max_candidates} candidate matchings")
    out.sort(key=Matching.sort_key)
    return out


def score_matching(pd_f, pd_g, gamma: Matching, target: GridModule, objective: str = EXACT,
                   p: int = 2, budget: int = 12, max_eps: Optional[int] = None, lines=None,
                   target_hooks=None):
    """Objective value of one bijection: distance from its product to the target.

    For the exact objective returns None when the distance exceeds ``max_eps``.
    """
    prod_module = evaluate_hooks(hooks_of_product(build_product(pd_f, pd_g, gamma)), target.box)
    if objective == EXACT:
        if target_hooks is None:
            target_hooks = hook_decompose(target)
        hooks = hook_decompose(prod_module)
        val = interleaving_hooks(hooks, target_hooks, max_eps, p, budget)
        if val is None and max_eps is None:
            return math.inf
        return val
    if objective == MATCHING:
        return matching_distance_estimate(prod_module, target, lines)
    raise ValueError(f"unknown objective {objective!r}")


def _search(pd_f, pd_g, target, candidates, objective, cfg: SearchConfig) -> SearchReport:
    target_hooks = hook_decompose(target) if objective == EXACT else None
    cache: dict = {}
    best = None
    best_value = None
    ties = 0
    scores = {}

    def key_of(gamma):
        hooks = hooks_of_product(build_product(pd_f, pd_g, gamma))
        return frozenset(as_multiset(hooks).items())

    # score the bottleneck witness first so the exact search starts with a tight bound
    _, witness = bottleneck(pd_f, pd_g)
    order = sorted(candidates, key=lambda g: (g != witness, g.sort_key()))
    for gamma in order:
        key = key_of(gamma)
        bound = None
        if objective == EXACT:
            bound = cfg.max_eps
            if best_value is not None and best_value != math.inf:
                bound = best_value if bound is None else min(bound, best_value)
        # bounds only shrink, so a cached "above bound" verdict stays valid
        if key in cache:
            val = cache[key]
        else:
            try:
                val = score_matching(pd_f, pd_g, gamma, target, objective, cfg.p, cfg.budget,
                                     bound, cfg.lines, target_hooks)
            except BudgetExceeded as exc:
                partial = None
                if best is not None:
                    partial = SearchReport(best, best_value, objective, len(scores), ties, scores)
                raise BudgetExceeded(str(exc), partial=partial) from exc
            if val is None and bound is None:
                val = math.inf
            cache[key] = val
        if val is None or (bound is not None and val > bound):
            continue  # worse than the current best
        scores[gamma] = val
        if best_value is None or val < best_value:
            best, best_value, ties = gamma, val, 1
        elif val == best_value:
            ties += 1
            if gamma.sort_key() < best.sort_key():
                best = gamma
    return SearchReport(best, best_value, objective, len(candidates), ties, scores)


def gamma_bar_search(pd_f: PersistenceDiagram, pd_g: PersistenceDiagram, target: GridModule,
                     config: Optional[SearchConfig] = None) -> SearchReport:
    cfg = config or SearchConfig()
    candidates = candidate_matchings(pd_f, pd_g, target, cfg.max_points, cfg.max_candidates)
    if cfg.objective == "matching":
        return _search(pd_f, pd_g, target, candidates, MATCHING, cfg)
    if cfg.objective not in ("auto", "exact"):
        raise ValueError(f"unknown objective {cfg.objective!r}")
    try:
        return _search(pd_f, pd_g, target, candidates, EXACT, cfg)
    except (BudgetExceeded, NotHookDecomposable) as exc:
        if cfg.objective == "exact":
            if isinstance(exc, NotHookDecomposable):
                raise BudgetExceeded(f"exact objective unavailable: {exc}") from exc
            raise
        return _search(pd_f, pd_g, target, candidates, MATCHING, cfg)
