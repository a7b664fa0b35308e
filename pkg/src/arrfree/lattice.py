"""Intersection lattices, Moebius values, Poincare polynomials, and exponent
extraction by integer factorization.

The lattice is built level by level: elements of codimension k are
intersected with each hyperplane not already containing them, canonicalized
by reduced row echelon form, and deduplicated.  Members (the hyperplanes
containing an element) accumulate along the generating pairs, which yields
the complete localization of every element without per-form span tests.
"""

from __future__ import annotations

import functools

from .geometry import Arrangement, LinearForm, rref

IntegerPolynomial = tuple[int, ...]  # ascending degree, no trailing zeros


class LatticeElement:
    """A subspace X in L(A): canonical defining span, codimension, the
    subarrangement A_X, and its Moebius value."""

    __slots__ = ("span", "codim", "members", "mobius", "_hash")

    def __init__(self, span, codim: int, members: frozenset, mobius: int) -> None:
        object.__setattr__(self, "span", span)
        object.__setattr__(self, "codim", codim)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "mobius", mobius)
        object.__setattr__(self, "_hash", None)

    def sort_key(self):
        return (self.codim, tuple(tuple(c.coeffs for c in row) for row in self.span))

    def __eq__(self, other):
        if not isinstance(other, LatticeElement):
            return NotImplemented
        return self.span == other.span

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.span)
            object.__setattr__(self, "_hash", h)
        return h

    def __setattr__(self, name, value):
        raise AttributeError("LatticeElement is immutable")

    def __repr__(self):
        return f"LatticeElement(codim={self.codim}, members={len(self.members)}, mobius={self.mobius})"


def _identity_span(dim: int, order: int):
    from .exactnum import CycNum

    one = CycNum.one(order)
    zero = CycNum.zero(order)
    return tuple(
        tuple(one if i == j else zero for j in range(dim)) for i in range(dim)
    )


def _lattice_levels(arrangement: Arrangement):
    """Levels of L(A): list of dicts span -> member set, by codimension."""
    forms = arrangement.forms
    dim = arrangement.dim
    levels = [{(): frozenset()}]
    origin_span = _identity_span(dim, arrangement.order)
    codim = 0
    current = levels[0]
    while current and codim < dim:
        nxt: dict = {}
        for span, members in current.items():
            for f in forms:
                if f in members:
                    continue
                if codim == dim - 1:
                    new_span = origin_span  # a line not inside f meets it in 0
                else:
                    new_span = rref(span + (f.coeffs,))
                    assert len(new_span) == codim + 1
                acc = nxt.get(new_span)
                if acc is None:
                    nxt[new_span] = set(members) | {f}
                else:
                    acc.update(members)
                    acc.add(f)
        current = {span: frozenset(mem) for span, mem in nxt.items()}
        if current:
            levels.append(current)
        codim += 1
    return levels


def _mobius_from_levels(levels):
    """Moebius values by the defining recursion mu(V) = 1,
    mu(X) = -sum of mu(Y) over elements Y strictly containing X."""
    values: list[dict] = [{(): 1}]
    flat: list[tuple[frozenset, int]] = [(frozenset(), 1)]
    for level in levels[1:]:
        level_values = {}
        for span, members in level.items():
            acc = 0
            for other_members, mob in flat:
                if other_members <= members:
                    acc += mob
            level_values[span] = -acc
        values.append(level_values)
        flat.extend((level[span], level_values[span]) for span in level)
    return values


@functools.lru_cache(maxsize=None)
def intersection_lattice(arrangement: Arrangement) -> tuple[LatticeElement, ...]:
    """The complete lattice L(A), sorted by (codim, canonical span).

    >>> from .geometry import empty
    >>> [e.codim for e in intersection_lattice(empty(2))]
    [0]
    """
    levels = _lattice_levels(arrangement)
    values = _mobius_from_levels(levels)
    elements = []
    for codim, level in enumerate(levels):
        for span, members in level.items():
            elements.append(
                LatticeElement(span, codim, members, values[codim][span])
            )
    elements.sort(key=LatticeElement.sort_key)
    return tuple(elements)


def mobius_values(elements) -> dict:
    """Recompute X -> mu(X) for a complete lattice, independently of any
    stored values (containment read off the localizations)."""
    ordered = sorted(elements, key=lambda e: e.codim)
    out: dict = {}
    for elem in ordered:
        if elem.codim == 0:
            out[elem] = 1
            continue
        acc = 0
        for other in ordered:
            if other.codim >= elem.codim:
                break
            if other.members <= elem.members:
                acc += out[other]
        out[elem] = -acc
    return out


@functools.lru_cache(maxsize=None)
def poincare_polynomial(arrangement: Arrangement) -> IntegerPolynomial:
    """pi(A, t) = sum over X of mu(X) (-t)^codim(X), as exact integers."""
    levels = _lattice_levels(arrangement)
    values = _mobius_from_levels(levels)
    coeffs = [0] * (arrangement.dim + 1)
    for codim, level_values in enumerate(values):
        sign = -1 if codim % 2 else 1
        coeffs[codim] = sign * sum(level_values.values())
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _divide_linear(poly: list[int], b: int) -> list[int] | None:
    """Exact quotient poly / (1 + b*t), or None."""
    degree = len(poly) - 1
    quo = [0] * degree
    quo[0] = poly[0]
    for k in range(1, degree):
        quo[k] = poly[k] - b * quo[k - 1]
    if poly[degree] != b * quo[degree - 1]:
        return None
    return quo


def exponents_from_factorization(poly: IntegerPolynomial, dim: int):
    """The multiset {b_1, ..., b_dim} with poly = prod(1 + b_i t) over
    nonnegative integers, zero-padded up to dim; None if no such splitting.

    >>> exponents_from_factorization((1, 5, 4), 2)
    (1, 4)
    >>> exponents_from_factorization((1, 3, 2), 3)
    (0, 1, 2)
    """
    coeffs = list(poly)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs or coeffs[0] != 1:
        return None
    if len(coeffs) - 1 > dim:
        return None
    exponents = []
    while len(coeffs) > 1:
        lead = coeffs[-1]
        if lead <= 0:
            return None
        for b in _divisors(lead):
            quo = _divide_linear(coeffs, b)
            if quo is not None:
                exponents.append(b)
                coeffs = quo
                break
        else:
            return None
    exponents.extend([0] * (dim - len(exponents)))
    return tuple(sorted(exponents))


def clear_caches() -> None:
    intersection_lattice.cache_clear()
    poincare_polynomial.cache_clear()
