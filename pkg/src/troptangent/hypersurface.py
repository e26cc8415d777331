"""Valued supports and their tropical hypersurfaces.

Exponents live in the lattice of integer vectors with coordinate sum
zero (Laurent monomials on projective space).  Points of the tropical
torus are written in the affine chart where the zeroth coordinate is 0,
so a point is a tuple of n rationals and pairs with an exponent w through
``sum(w[i] * alpha[i - 1] for i >= 1)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import InputError
from .lattice import lattice_index, rank, to_fraction, vsub
from .polyhedra import open_cell_nonempty


Exponent = tuple[int, ...]


def pair_exponent(w: Sequence[int], alpha: Sequence) -> Fraction:
    """Pairing of an exponent with a chart point."""
    return sum((w[i + 1] * alpha[i] for i in range(len(alpha))), Fraction(0))


@dataclass(frozen=True)
class ValuedSupport:
    """Finite support with the valuation of each coefficient.

    ``terms`` is a sorted tuple of (exponent, valuation) pairs.
    """

    terms: tuple[tuple[Exponent, Fraction], ...]

    @classmethod
    def from_mapping(cls, data: Mapping[Sequence[int], object] | Iterable) -> "ValuedSupport":
        items = data.items() if isinstance(data, Mapping) else data
        terms = {}
        for exponent, value in items:
            w = tuple(int(x) for x in exponent)
            if w in terms:
                raise InputError(f"repeated exponent {w}")
            terms[w] = to_fraction(value)
        return cls.build(terms)

    @classmethod
    def build(cls, terms: Mapping[Exponent, Fraction]) -> "ValuedSupport":
        if len(terms) < 2:
            raise InputError("a support needs at least two terms")
        lengths = {len(w) for w in terms}
        if len(lengths) != 1:
            raise InputError("exponents of different lengths")
        for w in terms:
            if sum(w) != 0:
                raise InputError(f"exponent {w} does not have coordinate sum zero")
        return cls(tuple(sorted((w, Fraction(v)) for w, v in terms.items())))

    @classmethod
    def from_homogeneous(cls, data) -> "ValuedSupport":
        """Dehomogenize by dividing through the lex-smallest monomial."""
        items = data.items() if isinstance(data, Mapping) else data
        items = [(tuple(int(x) for x in w), to_fraction(v)) for w, v in items]
        degrees = {sum(w) for w, _ in items}
        if len(degrees) != 1:
            raise InputError("homogeneous input with mixed degrees")
        low = min(w for w, _ in items)
        return cls.build({vsub(w, low): v for w, v in items})

    @property
    def n(self) -> int:
        return len(self.terms[0][0]) - 1

    @property
    def exponents(self) -> tuple[Exponent, ...]:
        return tuple(w for w, _ in self.terms)

    def valuation(self, w: Exponent) -> Fraction:
        for u, v in self.terms:
            if u == w:
                return v
        raise KeyError(w)

    def to_json(self) -> list:
        return [[list(w), str(v)] for w, v in self.terms]


def term_valuation(support: ValuedSupport, w: Exponent, alpha: Sequence) -> Fraction:
    return support.valuation(w) + pair_exponent(w, alpha)


def min_terms(support: ValuedSupport, alpha: Sequence) -> frozenset[Exponent]:
    """Exponents attaining the minimal term valuation at alpha."""
    vals = {w: v + pair_exponent(w, alpha) for w, v in support.terms}
    low = min(vals.values())
    return frozenset(w for w, v in vals.items() if v == low)


def region_constraints(support: ValuedSupport, chosen: Sequence[Exponent]):
    """Linear data for {alpha : chosen is exactly the minimal set}.

    Returns equalities and strict inequalities in the convention
    ``a.x = b`` / ``a.x > b`` on chart coordinates.
    """
    chosen = list(chosen)
    ref = chosen[0]
    ref_val = support.valuation(ref)
    eqs, strict = [], []
    for w, v in support.terms:
        # (v + <w, a>) - (ref_val + <ref, a>) compared with 0
        a = tuple(Fraction(w[i] - ref[i]) for i in range(1, len(w)))
        b = ref_val - v
        if w == ref:
            continue
        if w in chosen:
            eqs.append((a, b))
        else:
            strict.append((a, b))
    return eqs, strict


@dataclass(frozen=True)
class HypersurfaceCell:
    """Open cell of a tropical hypersurface, keyed by its minimal set."""

    minimal: tuple[Exponent, ...]
    codim: int
    closure: object  # Polyhedron


def hypersurface_cells(support: ValuedSupport) -> list[HypersurfaceCell]:
    """All nonempty open cells, i.e. minimal sets with at least two terms."""
    n = support.n
    out = []
    exps = support.exponents
    for size in range(2, len(exps) + 1):
        for chosen in itertools.combinations(exps, size):
            eqs, strict = region_constraints(support, chosen)
            poly = open_cell_nonempty(n, eqs, [], strict)
            if poly is None:
                continue
            codim = rank([vsub(w, chosen[0]) for w in chosen[1:]])
            out.append(HypersurfaceCell(tuple(chosen), codim, poly))
    return out


def subdivision_cells(support: ValuedSupport) -> list[tuple[Exponent, ...]]:
    """Maximal cells of the regular subdivision induced by the valuations.

    A maximal cell is a minimal set whose convex hull has the dimension
    of the whole support.
    """
    exps = support.exponents
    full = rank([vsub(w, exps[0]) for w in exps[1:]])
    out = []
    n = support.n
    for size in range(full + 1, len(exps) + 1):
        for chosen in itertools.combinations(exps, size):
            if rank([vsub(w, chosen[0]) for w in chosen[1:]]) != full:
                continue
            eqs, strict = region_constraints(support, chosen)
            if open_cell_nonempty(n, eqs, [], strict) is not None:
                out.append(chosen)
    return out


def is_tropically_smooth(support: ValuedSupport) -> bool:
    """True when every maximal cell of the regular subdivision is a
    unimodular simplex relative to the lattice it spans."""
    exps = support.exponents
    full = rank([vsub(w, exps[0]) for w in exps[1:]])
    for cell in subdivision_cells(support):
        if len(cell) != full + 1:
            return False
        if full and lattice_index([vsub(w, cell[0]) for w in cell[1:]]) != 1:
            return False
    return True
