"""Linear forms, central hyperplane arrangements, and the constructions on
them: deletion, restriction, triples, products, localization.

A hyperplane is identified with its canonically normalized defining form
(first nonzero coefficient equal to 1), so equality and hashing of
hyperplanes are structural.  Arrangements store deduplicated, sorted form
tuples; all values are immutable, and every operation here is a pure
function, so shared use across threads is safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactnum import CycNum, euler_phi


def _coerce_entry(value, order: int) -> CycNum:
    if isinstance(value, CycNum):
        if value.order != order:
            raise ValueError(f"cyclotomic order mismatch: {value.order} vs {order}")
        return value
    if isinstance(value, (int, Fraction)):
        return CycNum.rational(order, value)
    raise TypeError(f"cannot use {type(value).__name__} as a form coefficient")


class LinearForm:
    """A normalized linear form; the hyperplane is its kernel."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs) -> None:
        vec = tuple(coeffs)
        if not vec:
            raise ValueError("a linear form needs at least one coefficient")
        order = vec[0].order
        if any(c.order != order for c in vec):
            raise ValueError("mixed cyclotomic orders in one form")
        pivot = next((i for i, c in enumerate(vec) if not c.is_zero()), None)
        if pivot is None:
            raise ValueError("the zero vector does not define a hyperplane")
        if vec[pivot] != 1:
            raise ValueError("form is not normalized; use normalize_form()")
        object.__setattr__(self, "coeffs", vec)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, coeffs: tuple[CycNum, ...]) -> "LinearForm":
        self = object.__new__(cls)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_hash", None)
        return self

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    @property
    def order(self) -> int:
        return self.coeffs[0].order

    @property
    def pivot(self) -> int:
        """Index of the first nonzero (hence = 1) coefficient."""
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                return i
        raise AssertionError("normalized form cannot be zero")

    def sort_key(self):
        return tuple(c.coeffs for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.coeffs)
            object.__setattr__(self, "_hash", h)
        return h

    def __setattr__(self, name, value):
        raise AttributeError("LinearForm is immutable")

    def __repr__(self):
        body = " , ".join(c._text() for c in self.coeffs)
        return f"LinearForm({body})"


def normalize_form(raw) -> LinearForm:
    """Scale a nonzero coefficient vector so its first nonzero entry is 1.

    Forms are only defined up to a scalar, so this is the canonical
    representative.  Rejects the zero vector.
    """
    vec = tuple(raw)
    if not vec:
        raise ValueError("a linear form needs at least one coefficient")
    pivot = next((i for i, c in enumerate(vec) if not c.is_zero()), None)
    if pivot is None:
        raise ValueError("the zero vector does not define a hyperplane")
    lead = vec[pivot]
    if lead == 1:
        return LinearForm._raw(vec)
    inv = lead.inv()
    one = CycNum.one(lead.order)
    scaled = (
        vec[:pivot]
        + (one,)
        + tuple(c * inv for c in vec[pivot + 1 :])
    )
    return LinearForm._raw(scaled)


class Arrangement:
    """A central arrangement: ambient dimension, cyclotomic order, and a
    deduplicated, canonically sorted tuple of normalized forms."""

    __slots__ = ("dim", "order", "forms", "_hash")

    def __init__(self, dim: int, order: int, forms: tuple[LinearForm, ...]) -> None:
        if dim < 0:
            raise ValueError("dimension must be nonnegative")
        if order < 1:
            raise ValueError("cyclotomic order must be positive")
        if dim == 0 and forms:
            raise ValueError("the 0-dimensional space has no hyperplanes")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "forms", forms)
        object.__setattr__(self, "_hash", None)

    def __len__(self) -> int:
        return len(self.forms)

    def __iter__(self):
        return iter(self.forms)

    def __contains__(self, form) -> bool:
        return form in self.forms

    def with_form(self, form: LinearForm) -> "Arrangement":
        if form.dim != self.dim:
            raise ValueError("form has the wrong number of coefficients")
        if form in self.forms:
            return self
        merged = tuple(sorted(self.forms + (form,), key=LinearForm.sort_key))
        return Arrangement(self.dim, self.order, merged)

    def lift(self, new_order: int) -> "Arrangement":
        """Re-express all forms over Q(zeta_m) for a multiple m of the order."""
        if new_order == self.order:
            return self
        lifted = tuple(
            LinearForm._raw(tuple(c.lift(new_order) for c in f.coeffs))
            for f in self.forms
        )
        return Arrangement(self.dim, new_order, lifted)

    def __eq__(self, other):
        if not isinstance(other, Arrangement):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.order == other.order
            and self.forms == other.forms
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.dim, self.order, self.forms))
            object.__setattr__(self, "_hash", h)
        return h

    def __setattr__(self, name, value):
        raise AttributeError("Arrangement is immutable")

    def __repr__(self):
        return f"Arrangement(dim={self.dim}, order={self.order}, n={len(self.forms)})"


def empty(dim: int, order: int = 1) -> Arrangement:
    """The empty arrangement in C^dim."""
    return Arrangement(dim, order, ())


def arrangement_from_forms(dim: int, order: int, raw_forms) -> Arrangement:
    """Normalize, deduplicate and sort raw coefficient vectors.

    Order-insensitive: the result is a set of hyperplanes.
    """
    seen = set()
    for raw in raw_forms:
        vec = tuple(_coerce_entry(v, order) for v in raw)
        if len(vec) != dim:
            raise ValueError(f"form has {len(vec)} coefficients, expected {dim}")
        seen.add(normalize_form(vec))
    return Arrangement(dim, order, tuple(sorted(seen, key=LinearForm.sort_key)))


@dataclass(frozen=True)
class CoordinateMap:
    """How a restriction eliminated an ambient coordinate.

    The pivot variable x_eliminated was replaced by
    sum(substitution[j] * x_kept[j]); remaining coordinates keep their
    relative order.
    """

    eliminated: int
    kept: tuple[int, ...]
    substitution: tuple[CycNum, ...]


@dataclass(frozen=True)
class Triple:
    """(A, A', A'') at a pivot hyperplane, with the coordinate bookkeeping
    for the restriction."""

    full: Arrangement
    deleted: Arrangement
    restricted: Arrangement
    pivot: LinearForm
    coordinate_map: CoordinateMap


def delete(arrangement: Arrangement, form: LinearForm) -> Arrangement:
    """A' = A minus one of its hyperplanes."""
    if form not in arrangement.forms:
        raise ValueError("hyperplane is not in the arrangement")
    remaining = tuple(f for f in arrangement.forms if f != form)
    return Arrangement(arrangement.dim, arrangement.order, remaining)


def _restricted_form(f: LinearForm, pivot_form: LinearForm, pivot: int) -> LinearForm:
    coeffs = f.coeffs
    factor = coeffs[pivot]
    if factor.is_zero():
        reduced = coeffs[:pivot] + coeffs[pivot + 1 :]
    else:
        h = pivot_form.coeffs
        reduced = coeffs[:pivot] + tuple(
            coeffs[j] - factor * h[j] for j in range(pivot + 1, len(coeffs))
        )
    return normalize_form(reduced)


def restrict(arrangement: Arrangement, form: LinearForm) -> Arrangement:
    """A'' = the restriction of A to the hyperplane `form`.

    Deterministic coordinate elimination: the pivot (first nonzero) variable
    of the form is solved for and substituted into every other form; the
    remaining ambient coordinates keep their relative order.  Substituted
    forms never vanish (they would have been equal to the pivot form), so
    the result has one dimension less and at most |A| - 1 hyperplanes.
    """
    if form not in arrangement.forms:
        raise ValueError("hyperplane is not in the arrangement")
    pivot = form.pivot
    images = set()
    for f in arrangement.forms:
        if f == form:
            continue
        images.add(_restricted_form(f, form, pivot))
    return Arrangement(
        arrangement.dim - 1,
        arrangement.order,
        tuple(sorted(images, key=LinearForm.sort_key)),
    )


def triple(arrangement: Arrangement, form: LinearForm) -> Triple:
    """Bundle deletion and restriction at a pivot hyperplane."""
    deleted = delete(arrangement, form)
    restricted = restrict(arrangement, form)
    pivot = form.pivot
    kept = tuple(j for j in range(arrangement.dim) if j != pivot)
    substitution = tuple(-form.coeffs[j] for j in kept)
    return Triple(
        full=arrangement,
        deleted=deleted,
        restricted=restricted,
        pivot=form,
        coordinate_map=CoordinateMap(pivot, kept, substitution),
    )


def product(a1: Arrangement, a2: Arrangement) -> Arrangement:
    """The product arrangement in the direct sum of the ambient spaces.

    |A1 x A2| = |A1| + |A2|: the first factor's forms padded with zeros on
    the right, the second factor's padded on the left.
    """
    if a1.order != a2.order:
        raise ValueError(
            f"cyclotomic order mismatch: {a1.order} vs {a2.order}; lift() first"
        )
    zero1 = (CycNum.zero(a1.order),) * a1.dim
    zero2 = (CycNum.zero(a1.order),) * a2.dim
    forms = [LinearForm._raw(f.coeffs + zero2) for f in a1.forms]
    forms += [LinearForm._raw(zero1 + f.coeffs) for f in a2.forms]
    return Arrangement(
        a1.dim + a2.dim,
        a1.order,
        tuple(sorted(forms, key=LinearForm.sort_key)),
    )


def rref(rows) -> tuple[tuple[CycNum, ...], ...]:
    """Reduced row echelon form over Q(zeta_n); zero rows dropped.

    The result is the canonical representative of the row space: pivots are
    1, pivot columns are cleared, rows are ordered by pivot column.
    """
    mat = [list(r) for r in rows]
    if not mat:
        return ()
    width = len(mat[0])
    rank = 0
    for col in range(width):
        sel = None
        for i in range(rank, len(mat)):
            if not mat[i][col].is_zero():
                sel = i
                break
        if sel is None:
            continue
        mat[rank], mat[sel] = mat[sel], mat[rank]
        lead = mat[rank][col]
        if lead != 1:
            inv = lead.inv()
            row = mat[rank]
            row[col] = CycNum.one(lead.order)
            for j in range(col + 1, width):
                if not row[j].is_zero():
                    row[j] = row[j] * inv
        prow = mat[rank]
        for i in range(len(mat)):
            if i == rank:
                continue
            factor = mat[i][col]
            if factor.is_zero():
                continue
            row = mat[i]
            row[col] = CycNum.zero(factor.order)
            for j in range(col + 1, width):
                if not prow[j].is_zero():
                    row[j] = row[j] - factor * prow[j]
        rank += 1
        if rank == len(mat):
            break
    return tuple(tuple(r) for r in mat[:rank])


def reduce_against(vector, rref_rows):
    """Residual of a vector after elimination against RREF rows."""
    vec = list(vector)
    for row in rref_rows:
        pivot = next(i for i, c in enumerate(row) if not c.is_zero())
        factor = vec[pivot]
        if factor.is_zero():
            continue
        for j in range(pivot, len(vec)):
            if not row[j].is_zero():
                vec[j] = vec[j] - factor * row[j]
    return tuple(vec)


def in_span(vector, rref_rows) -> bool:
    return all(c.is_zero() for c in reduce_against(vector, rref_rows))


def localization(arrangement: Arrangement, subspace_forms, strict: bool = False) -> Arrangement:
    """A_X: the hyperplanes containing the subspace X = intersection of the
    kernels of `subspace_forms`.

    With strict=True the span must be an element of L(A).
    """
    rows = rref([tuple(f.coeffs) for f in subspace_forms])
    members = tuple(
        f for f in arrangement.forms if in_span(f.coeffs, rows)
    )
    if strict:
        from .lattice import intersection_lattice

        keys = {elem.span for elem in intersection_lattice(arrangement)}
        if rows not in keys:
            raise ValueError("subspace is not an element of the intersection lattice")
    return Arrangement(arrangement.dim, arrangement.order, members)


def forms_equal_as_sets(a1: Arrangement, a2: Arrangement) -> bool:
    """True iff the normalized form sets coincide (same ambient space)."""
    if a1.dim != a2.dim or a1.order != a2.order:
        raise ValueError("arrangements live in different ambient spaces")
    return a1.forms == a2.forms
