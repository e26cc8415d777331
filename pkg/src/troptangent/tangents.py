"""Tropical tangent lines of a tropical complete intersection curve.

For every index pair J the valuation of the Plücker coordinate q_J of the
tangent line at a lift is read from the expansion
``z_J = sum_w Delta_J(w) c_w x^w`` over choices w of one nonconstant term per
normalized support.  Where a single term dominates the answer is forced.
Where two terms can cancel, the family of possible valuations is found by
an exact reduction in a ring of symbolic monomials.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .curve import CellContext, TropicalCurve
from .errors import AssumptionError, DivergenceError, NotApplicable
from .hypersurface import pair_exponent
from .lattice import INF, is_inf, minor_delta, primitive, rank, span_contains, vsub
from .polyhedra import Polyhedron, polyhedron_from_constraints


def index_pairs(n: int) -> list[tuple[int, int]]:
    """All 2-subsets of {0..n} in lexicographic order."""
    return list(itertools.combinations(range(n + 1), 2))


def delta(w: Sequence[Sequence[int]], pair) -> int:
    return minor_delta(list(w), pair)


def nu_value(ctx: CellContext, w, alpha) -> Fraction:
    return sum((ctx.term_value(i, wi, alpha) for i, wi in enumerate(w)), Fraction(0))


def nu_form(ctx: CellContext, w) -> tuple[Fraction, Fraction]:
    """nu_w along an edge as (value at parameter 0, slope)."""
    a = nu_value(ctx, w, ctx.point)
    b = sum((pair_exponent(wi, ctx.direction) for wi in w), Fraction(0))
    return a, b


def complement_sum(alpha, pair, n) -> Fraction:
    """sum of alpha_j over j outside the pair, with alpha_0 = 0."""
    return sum((alpha[j - 1] for j in range(1, n + 1) if j not in pair), Fraction(0))


@dataclass(frozen=True)
class NuEntry:
    value: object  # Fraction or INF
    minimizers: frozenset


def nu_table(ctx: CellContext, alpha) -> dict[tuple[int, int], NuEntry]:
    """Minimum of nu_w over tuples with nonzero minor, per index pair."""
    table = {}
    tuples = ctx.tuples()
    values = {w: nu_value(ctx, w, alpha) for w in tuples}
    for pair in index_pairs(ctx.n):
        live = [w for w in tuples if delta(w, pair) != 0]
        if not live:
            table[pair] = NuEntry(INF, frozenset())
            continue
        low = min(values[w] for w in live)
        table[pair] = NuEntry(low, frozenset(w for w in live if values[w] == low))
    return table


def nu_forms_on_segment(ctx: CellContext, s_lo, s_hi) -> dict:
    """Affine forms (value at 0, slope) of nu_J on an open edge segment
    free of critical points."""
    mid = _interior_parameter(s_lo, s_hi)
    table = nu_table(ctx, ctx.point_at(mid))
    forms = {}
    for pair, entry in table.items():
        if is_inf(entry.value):
            forms[pair] = None
            continue
        w = min(entry.minimizers)
        forms[pair] = nu_form(ctx, w)
    return forms


def _interior_parameter(lo, hi):
    if is_inf(hi):
        return lo + 1
    return (lo + hi) / 2


@dataclass(frozen=True)
class CriticalPoint:
    """A point of a cell where two tuples have equal nu."""

    label: str
    point: tuple[Fraction, ...]
    parameter: object  # edge parameter, or None at a vertex
    pairs: tuple[tuple, ...]  # cancellative pairs (r, r')
    relation: tuple[int, ...]


def _relation(r, rp):
    total = [0] * len(r[0])
    for a, b in zip(r, rp):
        for k in range(len(total)):
            total[k] += a[k] - b[k]
    return tuple(total)


def _check_non_colliding(ctx, pairs, where):
    """All cancellative pairs must differ in the same supports with the
    same two entries there."""
    signature = None
    for r, rp in pairs:
        rows = tuple(i for i in range(len(r)) if r[i] != rp[i])
        entries = tuple(frozenset((r[i], rp[i])) for i in rows)
        sig = (rows, entries)
        if signature is None:
            signature = sig
        elif sig != signature:
            raise AssumptionError(
                "valuations are colliding: cancellative pairs of different shape",
                cell=where)


def _orient(pairs, reference=None):
    """Orient pairs so that r carries the same entries as the reference."""
    r0, r0p = reference if reference is not None else pairs[0]
    rows = [i for i in range(len(r0)) if r0[i] != r0p[i]]
    out = []
    for r, rp in pairs:
        if all(r[i] == r0[i] for i in rows):
            out.append((r, rp))
        else:
            out.append((rp, r))
    return out


def _vertex_reference(ctx):
    """Reference orientation at a vertex: r uses the larger exponent of
    the support with three minimal terms."""
    i0 = ctx.special
    return i0, ctx.rows[i0], ctx.alt_row


def cancellative_pairs(ctx: CellContext, alpha) -> list[tuple]:
    tuples = ctx.tuples()
    values = {w: nu_value(ctx, w, alpha) for w in tuples}
    out = []
    for a, b in itertools.combinations(tuples, 2):
        if values[a] == values[b]:
            out.append((a, b))
    return out


def critical_locus(ctx: CellContext) -> list[CriticalPoint]:
    """Critical points of a cell: the vertex itself, or the finitely many
    interior points of an edge where two tuples have equal nu."""
    if ctx.kind == "vertex":
        pairs = cancellative_pairs(ctx, ctx.point)
        _check_non_colliding(ctx, pairs, ctx.label)
        i0, v, vp = _vertex_reference(ctx)
        ref = next(((r, rp) for r, rp in pairs if {r[i0], rp[i0]} == {v, vp}), None)
        if ref is None:
            raise AssumptionError("vertex without the expected cancellative pair", cell=ctx.label)
        if ref[0][i0] != v:
            ref = (ref[1], ref[0])
        pairs = _orient(pairs, ref)
        r, rp = pairs[0]
        return [CriticalPoint(ctx.label, ctx.point, None, tuple(pairs), _relation(r, rp))]
    tuples = ctx.tuples()
    forms = {w: nu_form(ctx, w) for w in tuples}
    hits: dict = {}
    for a, b in itertools.combinations(tuples, 2):
        (ca, sa), (cb, sb) = forms[a], forms[b]
        if sa == sb:
            if ca == cb:
                raise AssumptionError(
                    "valuations are colliding: two tuples agree along a whole edge",
                    cell=ctx.label)
            continue
        s = (cb - ca) / (sa - sb)
        if s <= 0 or (not is_inf(ctx.length) and s >= ctx.length):
            continue
        hits.setdefault(s, []).append((a, b))
    out = []
    for s in sorted(hits):
        pairs = hits[s]
        _check_non_colliding(ctx, pairs, ctx.label)
        pairs = _orient(sorted(pairs))
        r, rp = pairs[0]
        out.append(CriticalPoint(ctx.label, ctx.point_at(s), s, tuple(pairs), _relation(r, rp)))
    return out


@dataclass(frozen=True)
class Classification:
    forced: bool
    value: object
    reason: str
    pair: tuple | None = None

    def __str__(self):
        return f"Forced({self.value})" if self.forced else "Free"


def _critical_here(ctx, alpha):
    if ctx.kind == "vertex":
        return critical_locus(ctx)[0]
    for c in critical_locus(ctx):
        if c.point == tuple(alpha):
            return c
    return None


def classify_cancellation(ctx: CellContext, alpha, pair, crit=None, table=None) -> Classification:
    """Forced(nu_J) when the leading term of z_J cannot cancel, else Free."""
    table = table or nu_table(ctx, alpha)
    entry = table[pair]
    if is_inf(entry.value):
        return Classification(True, INF, "vanishing")
    if crit is None:
        crit = _critical_here(ctx, alpha)
    if crit is None:
        return Classification(True, entry.value, "not critical")
    if len(entry.minimizers) == 1:
        return Classification(True, entry.value, "unique minimizer")
    if len(entry.minimizers) != 2:
        raise AssumptionError("more than two minimizers for a minor expansion", cell=ctx.label)
    (r, rp), = _orient([tuple(sorted(entry.minimizers))], crit.pairs[0])
    if ctx.kind == "vertex":
        if delta(r, pair) == delta(rp, pair):
            return Classification(True, entry.value, "equal minors", (r, rp))
        return Classification(False, entry.value, "cancellation", (r, rp))
    if span_contains(list(ctx.rows), crit.relation):
        return Classification(True, entry.value,
                              "relation in the span of the edge rows "
                              "(assumes sufficiently general lowest order parts)", (r, rp))
    return Classification(False, entry.value, "cancellation", (r, rp))


def simultaneous_classes(ctx: CellContext, alpha, classifications) -> list[tuple]:
    """Partition the free index pairs by equality of minor ratios."""
    free = [(p, c.pair) for p, c in classifications.items() if not c.forced]
    classes: list[list] = []
    for p, (r, rp) in free:
        for cls in classes:
            q, (s, sp) = cls[0]
            # delta_p(r) / delta_p(rp) == delta_q(s) / delta_q(sp)
            if delta(r, p) * delta(sp, q) == delta(s, q) * delta(rp, p):
                cls.append((p, (r, rp)))
                break
        else:
            classes.append([(p, (r, rp))])
    return [tuple(p for p, _ in cls) for cls in classes]


# ---------------------------------------------------------------------------
# Reduction in the symbolic monomial ring


class _MarginalRing:
    """Monomials in the nonconstant terms of each support.

    A tuple w maps to the product of one symbol per support; tuples with
    the same symbols are identified, which realizes the substitution of
    the curve's coordinates exactly.
    """

    def __init__(self, ctx: CellContext, alpha):
        self.ctx = ctx
        self.atoms = [(i, u) for i, terms in enumerate(ctx.nonconstant_terms) for u in terms]
        self.index = {a: k for k, a in enumerate(self.atoms)}
        self.atom_val = [ctx.term_value(i, u, alpha) for i, u in self.atoms]
        self.blocks = len(ctx.supports)

    def mono(self, w) -> tuple[int, ...]:
        e = [0] * len(self.atoms)
        for i, u in enumerate(w):
            e[self.index[(i, u)]] += 1
        return tuple(e)

    def valuation(self, e) -> Fraction:
        return sum((x * v for x, v in zip(e, self.atom_val) if x), Fraction(0))

    def block_degrees(self, e) -> tuple[int, ...]:
        deg = [0] * self.blocks
        for x, (i, _) in zip(e, self.atoms):
            deg[i] += x
        return tuple(deg)


def _padd(p, q, scale=1):
    out = dict(p)
    for e, c in q.items():
        v = out.get(e, 0) + scale * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _pmul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e)
    return out


@dataclass
class ReductionTrace:
    """Per-step record of the reduction, for inspection and tests."""

    zetas: list = field(default_factory=list)
    gs: list = field(default_factory=list)
    lows: list = field(default_factory=list)  # minimal valuation of each zeta
    steps: int = 0
    result: object = None


def zalg_relation(ctx: CellContext, alpha, first, second, crit=None, trace=None,
                  factor_check=True):
    """Threshold w such that min(val z_I - nu_I, val z_J - nu_J, w) is
    attained at least twice for every lift; ``first`` is I, ``second`` J.

    With ``factor_check`` off, a common factor of z_I and z_J is not looked
    for up front and only the reduction loop decides.
    """
    first, second = tuple(first), tuple(second)
    if first == second:
        return INF
    table = nu_table(ctx, alpha)
    crit = crit or _critical_here(ctx, alpha)
    cls_i = classify_cancellation(ctx, alpha, first, crit, table)
    if cls_i.forced:
        raise AssumptionError(f"pair {first} has no cancellation at this point", cell=ctx.label)
    r, rp = cls_i.pair
    ring = _MarginalRing(ctx, alpha)
    tuples = ctx.tuples()
    nu_j = table[second].value
    zeta = {}
    for w in tuples:
        d = delta(w, second)
        if d:
            zeta = _padd(zeta, {ring.mono(w): Fraction(d)})
    d_r, d_rp = Fraction(delta(r, first)), Fraction(delta(rp, first))
    trace = trace if trace is not None else ReductionTrace()
    if factor_check and _shared_cancelling_factor(ctx, alpha, first, second, r, rp):
        trace.zetas.append(dict(zeta))
        trace.result = INF
        return INF
    m_r, m_rp = ring.mono(r), ring.mono(rp)
    binomial = _padd({m_r: d_r}, {m_rp: d_rp})
    rest = {}
    for w in tuples:
        if w in (r, rp):
            continue
        d = delta(w, first)
        if d:
            rest = _padd(rest, {ring.mono(w): Fraction(d)})
    pattern = tuple(a - b for a, b in zip(m_r, m_rp))
    nu_r = ring.valuation(m_r)
    distinct_vals = len({ring.valuation(ring.mono(w)) for w in tuples})
    cap = 16 * len(tuples) * max(distinct_vals, 1)
    rest_divisible = _divisible_by_binomial(rest, pattern, d_r, d_rp)
    last_min = None
    shapes: dict = {}
    for step in range(cap):
        trace.steps = step
        trace.zetas.append(dict(zeta))
        if not zeta:
            trace.result = INF
            return INF
        vals = {e: ring.valuation(e) for e in zeta}
        low = min(vals.values())
        if last_min is not None and low < last_min:
            raise DivergenceError("minimal valuation decreased during reduction", cell=ctx.label)
        last_min = low
        trace.lows.append(low)
        low_terms = [e for e in zeta if vals[e] == low]
        if len(low_terms) == 1:
            trace.result = low - nu_j
            return low - nu_j
        if _is_binomial_multiple(zeta, pattern, d_r, d_rp):
            trace.result = INF
            return INF
        if rest_divisible and _divisible_by_binomial(zeta, pattern, d_r, d_rp):
            # z_I and zeta both lie in the ideal of the binomial, so every later
            # zeta does too and its lowest part never shrinks to one term
            trace.result = INF
            return INF
        shape = _shape(zeta)
        if shape in shapes:
            # zeta is a scalar times a monomial shift of an earlier zeta, so
            # the reduction repeats itself forever at rising valuation
            if low <= shapes[shape]:
                raise DivergenceError("reduction cycles without raising the valuation",
                                      cell=ctx.label)
            trace.result = INF
            return INF
        shapes[shape] = low
        h, g = _cancel_lowest(zeta, vals, low, pattern, m_r, d_r, binomial, ring, ctx)
        for e in g:
            if any(ring.block_degrees(e)):
                raise AssertionError("quotient term of nonzero degree")
            if ring.valuation(e) != low - nu_r:
                raise AssertionError("quotient term with unexpected valuation")
        if sum(1 for e in h if ring.valuation(e) == low) > 1:
            raise AssertionError("more than one remainder term at the minimal valuation")
        trace.gs.append(dict(g))
        zeta = _padd(h, _pmul(g, rest), -1)
    raise DivergenceError("reduction did not terminate within the iteration cap", cell=ctx.label)


def _shared_cancelling_factor(ctx, alpha, first, second, r, rp) -> bool:
    """Whether z_I = H * P and z_J = H * Q, where H involves only the supports
    in which r and r' differ and contains both of their terms there, while P
    and Q each have a single term of lowest valuation.

    Then val z_I - nu_I and val z_J - nu_J both equal val H - val of the
    lowest part of H, so the two slacks always agree.
    """
    moving = [i for i in range(len(r)) if r[i] != rp[i]]
    still = [i for i in range(len(r)) if r[i] == rp[i]]
    rows = sorted({tuple(w[i] for i in moving) for w in ctx.tuples()})
    where = {key: k for k, key in enumerate(rows)}
    columns = []  # (valuation of the cofactor term, column vector)
    for pair in (first, second):
        cols: dict = {}
        for w in ctx.tuples():
            d = delta(w, pair)
            if not d:
                continue
            key = tuple(w[i] for i in still)
            col = cols.setdefault(key, [Fraction(0)] * len(rows))
            col[where[tuple(w[i] for i in moving)]] += d
        live = {k: c for k, c in cols.items() if any(c)}
        if not live:
            return False
        columns.append(live)
    vectors = [c for live in columns for c in live.values()]
    if rank(vectors) != 1:
        return False
    h = vectors[0]
    if not h[where[tuple(r[i] for i in moving)]] or not h[where[tuple(rp[i] for i in moving)]]:
        return False
    for live in columns:
        vals = [sum((ctx.term_value(i, e, alpha) for i, e in zip(still, key)), Fraction(0))
                for key in live]
        if vals.count(min(vals)) != 1:
            return False
    return True


def _shape(zeta):
    """Zeta up to multiplication by a monomial and a nonzero scalar."""
    items = sorted(zeta.items())
    e0, c0 = items[0]
    return tuple((tuple(a - b for a, b in zip(e, e0)), c / c0) for e, c in items)


def _divisible_by_binomial(poly, pattern, d_r, d_rp) -> bool:
    """Whether ``poly`` is a Laurent-polynomial multiple of d_r*y^pattern + d_rp.

    Terms are grouped by their class modulo ``pattern``; inside a class the
    polynomial is univariate in y^pattern and must vanish at -d_rp/d_r.
    """
    k = next(i for i, x in enumerate(pattern) if x)
    root = -d_rp / d_r
    classes: dict = {}
    for e, c in poly.items():
        q = e[k] // pattern[k]
        key = tuple(a - q * b for a, b in zip(e, pattern))
        classes[key] = classes.get(key, 0) + c * root ** q
    return all(v == 0 for v in classes.values())


def _is_binomial_multiple(zeta, pattern, d_r, d_rp) -> bool:
    if len(zeta) != 2:
        return False
    (e1, c1), (e2, c2) = sorted(zeta.items())
    diff = tuple(a - b for a, b in zip(e1, e2))
    if diff == pattern:
        return c1 * d_rp == c2 * d_r
    if tuple(-x for x in diff) == pattern:
        return c2 * d_rp == c1 * d_r
    return False


def _cancel_lowest(zeta, vals, low, pattern, m_r, d_r, binomial, ring, ctx):
    """Subtract multiples of the binomial until at most one monomial of
    minimal valuation remains.  Returns (remainder, quotient)."""
    f = dict(zeta)
    g: dict = {}
    pattern_nonzero = next(k for k, x in enumerate(pattern) if x)

    def level(e, ref):
        diff = [a - b for a, b in zip(e, ref)]
        j = Fraction(diff[pattern_nonzero], pattern[pattern_nonzero])
        if j.denominator != 1 or any(d != j * p for d, p in zip(diff, pattern)):
            raise AssumptionError(
                "valuation ties outside the cancellative pattern "
                "(coefficients not very general)", cell=ctx.label)
        return int(j)

    while True:
        low_terms = sorted(e for e in f if ring.valuation(e) == low)
        if len(low_terms) <= 1:
            return f, g
        ref = low_terms[0]
        levels = {e: level(e, ref) for e in low_terms}
        top = max(levels.values())
        if all(v == top for v in levels.values()):
            return f, g
        for eta in sorted(e for e in low_terms if levels[e] == top):
            coeff = f[eta] / d_r
            quotient = {tuple(a - b for a, b in zip(eta, m_r)): coeff}
            f = _padd(f, _pmul(binomial, quotient), -1)
            g = _padd(g, quotient)


# ---------------------------------------------------------------------------
# Families of tangents


@dataclass(frozen=True)
class TangentBranch:
    """Segment or ray ``start + t * direction`` for 0 <= t <= length."""

    start: tuple
    direction: tuple[int, ...]
    length: object

    def point_at(self, t):
        return tuple(INF if is_inf(b) else b + t * d for b, d in zip(self.start, self.direction))

    @property
    def end(self):
        return None if is_inf(self.length) else self.point_at(self.length)


@dataclass
class TangentFamily:
    """All tropical tangents at one point of the curve.

    Plücker vectors are indexed by :func:`index_pairs` and store the raw
    valuations; :meth:`normalized` shifts them to minimum zero.
    """

    label: str
    point: tuple
    pairs: list
    base: tuple
    branches: list
    classes: list = field(default_factory=list)
    multiplicity: int | None = None
    notes: list = field(default_factory=list)

    def vectors(self, samples=(0, Fraction(1, 2), 1, 3, Fraction(7, 2), 5)):
        out = [self.base]
        for b in self.branches:
            for t in samples:
                if is_inf(b.length) or t <= b.length:
                    out.append(b.point_at(t))
            if b.end is not None:
                out.append(b.end)
        return out

    def contains(self, beta) -> bool:
        beta = tuple(beta)
        if beta == self.base:
            return True
        for b in self.branches:
            t = None
            ok = True
            for x, s, d in zip(beta, b.start, b.direction):
                if is_inf(s) or is_inf(x):
                    ok &= x == s
                    continue
                if d == 0:
                    ok &= x == s
                else:
                    tt = (x - s) / d
                    if t is None:
                        t = tt
                    ok &= tt == t
            if ok and t is not None and t >= 0 and (is_inf(b.length) or t <= b.length):
                return True
        return False

    def to_json(self) -> dict:
        def vec(v):
            return [str(x) for x in v]
        return {
            "cell": self.label,
            "point": vec(self.point),
            "pairs": ["".join(map(str, p)) for p in self.pairs],
            "base": vec(self.base),
            "branches": [{"start": vec(b.start), "direction": list(b.direction),
                          "length": str(b.length)} for b in self.branches],
            "classes": [["".join(map(str, p)) for p in c] for c in self.classes],
            "notes": list(self.notes),
        }


def normalized(beta):
    finite = [x for x in beta if not is_inf(x)]
    low = min(finite)
    return tuple(x if is_inf(x) else x - low for x in beta)


def plucker_from_slacks(table, alpha, slacks, n):
    out = []
    for pair in index_pairs(n):
        v = table[pair].value
        if is_inf(v):
            out.append(INF)
        else:
            out.append(v + slacks.get(pair, 0) - complement_sum(alpha, pair, n))
    return tuple(out)


def _min_twice_options(a, b, threshold):
    """Constraint options for 'min(x_a, x_b, threshold) attained twice'.

    Each option is (equalities, inequalities) on slack indices, written as
    sparse rows {index: coeff} with a constant: row.x = c or row.x >= c.
    """
    if is_inf(threshold):
        return [([({a: 1, b: -1}, 0)], [])]
    return [
        ([({a: 1, b: -1}, 0)], [({a: -1}, -threshold)]),
        ([({a: 1}, threshold)], [({b: 1}, threshold)]),
        ([({b: 1}, threshold)], [({a: 1}, threshold)]),
    ]


def class_solution_set(size: int, thresholds: dict) -> list[Polyhedron]:
    """One-dimensional pieces of the slack set of a simultaneous class.

    ``thresholds`` maps ordered index pairs (a, b) of slacks to w_ab.
    The solution set is the union of closed polyhedra; it is returned as
    segments and rays meeting only at endpoints.
    """
    constraints = []
    for (a, b), w in sorted(thresholds.items(), key=lambda kv: kv[0]):
        constraints.append(_min_twice_options(a, b, w))

    def dense(row):
        return tuple(Fraction(row.get(k, 0)) for k in range(size))

    base_ineqs = [(dense({k: 1}), Fraction(0)) for k in range(size)]
    pieces: list[Polyhedron] = []

    def dfs(k, eqs, ineqs):
        poly = polyhedron_from_constraints(size, eqs, base_ineqs + ineqs)
        if poly is None:
            return
        if k == len(constraints):
            if poly.dim > 1:
                raise AssumptionError("tangent family is not one dimensional")
            if poly.dim == 1:
                pieces.append(poly)
            return
        for opt_eqs, opt_ineqs in constraints[k]:
            dfs(k + 1, eqs + [(dense(r), Fraction(c)) for r, c in opt_eqs],
                ineqs + [(dense(r), Fraction(c)) for r, c in opt_ineqs])

    dfs(0, [], [])
    return split_one_cells(pieces)


def split_one_cells(pieces: Sequence[Polyhedron]) -> list[Polyhedron]:
    """Subdivide segments and rays at every endpoint lying on them and drop
    duplicates, so that distinct cells meet only at endpoints."""
    endpoints = set()
    for p in pieces:
        endpoints.update(p.points)
    out = {}
    for p in pieces:
        start = p.points[0]
        if p.rays:
            d = p.rays[0]
            stops = sorted({_param(start, d, q) for q in endpoints if _on_ray(start, d, q)})
            for a, b in zip(stops, stops[1:]):
                seg = Polyhedron(tuple(sorted((_at(start, d, a), _at(start, d, b)))))
                out[seg.key()] = seg
            last = _at(start, d, stops[-1])
            ray = Polyhedron((last,), (d,))
            out[ray.key()] = ray
        else:
            a, b = sorted(p.points)
            d = vsub(b, a)
            stops = sorted({_param(a, d, q) for q in endpoints
                            if _on_ray(a, d, q) and _param(a, d, q) <= 1})
            for s, t in zip(stops, stops[1:]):
                seg = Polyhedron(tuple(sorted((_at(a, d, s), _at(a, d, t)))))
                out[seg.key()] = seg
    return [out[k] for k in sorted(out)]


def _param(base, d, q):
    k = next(i for i, x in enumerate(d) if x)
    return Fraction(q[k] - base[k]) / d[k]


def _on_ray(base, d, q):
    t = _param(base, d, q)
    if t < 0:
        return False
    return all(q[i] - base[i] == t * d[i] for i in range(len(d)))


def _at(base, d, t):
    return tuple(Fraction(b) + t * x for b, x in zip(base, d))


def tangent_family(ctx: CellContext, alpha=None, crit=None) -> TangentFamily:
    """All tropical tangents at a point of the cell (its vertex by default)."""
    alpha = tuple(ctx.point if alpha is None else alpha)
    n = ctx.n
    pairs = index_pairs(n)
    table = nu_table(ctx, alpha)
    crit = crit if crit is not None else _critical_here(ctx, alpha)
    classes_of = {p: classify_cancellation(ctx, alpha, p, crit, table) for p in pairs}
    base = plucker_from_slacks(table, alpha, {}, n)
    fam = TangentFamily(ctx.label, alpha, pairs, base, [])
    if any("general lowest order" in c.reason for c in classes_of.values()):
        fam.notes.append("assumes sufficiently general lowest order parts")
    if crit is None:
        return fam
    classes = simultaneous_classes(ctx, alpha, classes_of)
    fam.classes = classes
    fam.multiplicity = branch_multiplicity(ctx, crit)
    for cls in classes:
        k = len(cls)
        thresholds = {}
        for a, b in itertools.permutations(range(k), 2):
            thresholds[(a, b)] = zalg_relation(ctx, alpha, cls[a], cls[b], crit)
        for piece in class_solution_set(k, thresholds):
            start = piece.points[0] if piece.rays else min(piece.points)
            if piece.rays:
                direction, length = piece.rays[0], INF
            else:
                end = max(piece.points)
                diff = vsub(end, start)
                direction = primitive(diff)
                length = next(Fraction(d) / p for d, p in zip(diff, direction) if p)
            slacks = {cls[j]: start[j] for j in range(k)}
            start_beta = plucker_from_slacks(table, alpha, slacks, n)
            dir_beta = tuple(direction[cls.index(p)] if p in cls else 0 for p in pairs)
            fam.branches.append(TangentBranch(start_beta, dir_beta, length))
    return fam


def branch_multiplicity(ctx: CellContext, crit: CriticalPoint) -> int:
    """|det| of a maximal nonzero minor of the edge rows plus the relation."""
    from .lattice import maximal_minors
    minors = {abs(m) for m in maximal_minors(list(ctx.rows) + [crit.relation]) if m}
    if not minors:
        raise AssumptionError("relation vector lies in the span of the rows", cell=ctx.label)
    if len(minors) != 1:
        raise AssumptionError("maximal minors disagree in absolute value", cell=ctx.label)
    return minors.pop()


def edge_tangent_forms(ctx: CellContext, s_lo, s_hi):
    """Plücker valuations on an open edge segment as affine maps of the
    edge parameter: list of (value at 0, slope) or INF."""
    forms = nu_forms_on_segment(ctx, s_lo, s_hi)
    out = []
    n = ctx.n
    for pair in index_pairs(n):
        f = forms[pair]
        if f is None:
            out.append(INF)
            continue
        a, b = f
        c0 = complement_sum(ctx.point, pair, n)
        c1 = complement_sum(ctx.direction, pair, n)
        out.append((a - c0, b - c1))
    return out


def vanishing_pluckers(curve: TropicalCurve) -> set:
    """Index pairs J whose coordinate vanishes on the Gauss image: those
    with the span of the curve inside the span of the complementary
    coordinate directions."""
    n = curve.n
    dirs = [e.direction for e in curve.edges]
    out = set()
    for pair in index_pairs(n):
        gens = [coordinate_direction(j, n) for j in range(n + 1) if j not in pair]
        if all(span_contains(gens, d) for d in dirs):
            out.add(pair)
    return out


def coordinate_direction(j: int, n: int) -> tuple[int, ...]:
    """Image of the j-th standard basis vector in chart coordinates."""
    if j == 0:
        return tuple(-1 for _ in range(n))
    return tuple(int(k == j - 1) for k in range(n))


def _span_meets(a_gens, b_gens) -> bool:
    """Do two linear subspaces intersect nontrivially?"""
    a = [g for g in a_gens if any(g)]
    b = [g for g in b_gens if any(g)]
    return rank(a) + rank(b) > rank(a + b)


def _span_inside(inner, outer) -> bool:
    return all(span_contains(outer, g) for g in inner)


def local_span(curve: TropicalCurve, ctx: CellContext, alpha) -> list:
    """Directions of the curve near alpha."""
    if ctx.kind == "edge":
        return [ctx.direction]
    k = curve.vertex_index(alpha)
    return [curve.outgoing_direction(e, k) for e in curve.edges_at(k)]


def generic_tangents(curve: TropicalCurve, ctx: CellContext, alpha=None) -> TangentFamily:
    """Closed form of the tangent family under the generic hypotheses."""
    alpha = tuple(ctx.point if alpha is None else alpha)
    n = ctx.n
    pairs = index_pairs(n)
    span = local_span(curve, ctx, alpha)
    for sub in itertools.combinations(range(n + 1), n - 1):
        gens = [coordinate_direction(j, n) for j in sub]
        if _span_inside(span, gens):
            raise NotApplicable(f"local span lies in a coordinate subspace {sub}", cell=ctx.label)
    base = tuple(-complement_sum(alpha, p, n) for p in pairs)
    fam = TangentFamily(ctx.label, alpha, pairs, base, [])
    if ctx.kind == "edge":
        return fam
    if n < 3:
        raise NotApplicable("the vertex criterion needs a curve in dimension at least 3",
                            cell=ctx.label)
    for i in range(n + 1):
        for j in range(i, n + 1):
            rest = [k for k in range(n + 1) if k not in (i, j)]
            for extra in itertools.combinations(rest, n - 3):
                gens = [tuple(a + b for a, b in zip(coordinate_direction(i, n),
                                                      coordinate_direction(j, n)))]
                gens += [coordinate_direction(k, n) for k in extra]
                if _span_meets(span, gens):
                    raise NotApplicable("local span meets a forbidden subspace", cell=ctx.label)
    k = curve.vertex_index(alpha)
    adjacent = [curve.outgoing_direction(e, k) for e in curve.edges_at(k)]
    for idx, p in enumerate(pairs):
        comp = [coordinate_direction(j, n) for j in range(n + 1) if j not in p]
        if any(span_contains(comp, d) for d in adjacent):
            continue
        direction = tuple(int(q == idx) for q in range(len(pairs)))
        fam.branches.append(TangentBranch(base, direction, INF))
    return fam


def satisfies_plucker_relations(beta, n) -> bool:
    """Tropical three-term relations for every four distinct indices."""
    pairs = index_pairs(n)
    pos = {p: k for k, p in enumerate(pairs)}

    def val(i, j):
        return beta[pos[tuple(sorted((i, j)))]]
    for i, j, k, l in itertools.combinations(range(n + 1), 4):
        terms = [val(i, j) + val(k, l), val(i, k) + val(j, l), val(i, l) + val(j, k)]
        finite = [t for t in terms if not is_inf(t)]
        if not finite:
            continue
        low = min(finite)
        if sum(1 for t in finite if t == low) < 2:
            return False
    return True
