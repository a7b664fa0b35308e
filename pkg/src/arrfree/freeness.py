"""Inductive-freeness machinery: certificate replay, exhaustive or budgeted
search for induction orders, non-freeness witnesses, and the hereditary
check over the intersection lattice.

A certificate is an ordered list of hyperplane additions.  Replaying it
verifies, row by row, that the restriction's exponents are contained (as a
multiset, with multiplicity) in the running exponents, and folds in the new
exponent.  Empty arrangements and 1-/2-dimensional arrangements are
auto-certified; their exponents are forced.

The search works top-down over deletion orders with a shared memo table
keyed by the exact normalized form multiset.  A branch is pruned as soon as
the Poincare polynomial of a sub-arrangement stops factoring into
nonnegative integer linear terms (inductively free implies free implies the
polynomial factors), and a hyperplane is skipped when the forced
addition-step exponent pattern cannot match.  "Not inductively free" is
only ever reported after exhaustive exploration; a budgeted run that runs
out reports "unknown" instead.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

from .exactnum import CycNum
from .geometry import (
    Arrangement,
    LinearForm,
    delete,
    empty,
    in_span,
    normalize_form,
    restrict,
    rref,
    _restricted_form,
)
from .lattice import (
    LatticeElement,
    exponents_from_factorization,
    intersection_lattice,
    poincare_polynomial,
)

ExponentMultiset = tuple[int, ...]  # sorted ascending


class CertificateError(Exception):
    """A certificate failed to replay; `row` is the 1-based failing step."""

    def __init__(self, message: str, row: int | None = None) -> None:
        self.row = row
        super().__init__(message if row is None else f"row {row}: {message}")


@dataclass(frozen=True)
class CertStep:
    """One addition: the form, the expected restriction exponents, and an
    optional nested certificate for the restriction (None means the replay
    auto-derives or searches it)."""

    form: LinearForm
    restriction_exponents: ExponentMultiset
    restriction_cert: "InductionCertificate | None" = None


@dataclass(frozen=True)
class InductionCertificate:
    """A machine-checkable witness of inductive freeness: the addition order
    starting from the empty arrangement, with per-step restriction data."""

    dim: int
    order: int
    steps: tuple[CertStep, ...]
    final_exponents: ExponentMultiset


@dataclass(frozen=True)
class NonFreeWitness:
    """Evidence that an arrangement is not free: deleting `pivot` leaves a
    certified-free arrangement whose exponents fail to contain the
    restriction's exponents."""

    pivot: LinearForm
    deleted_exponents: ExponentMultiset
    restricted_exponents: ExponentMultiset


class Status(enum.Enum):
    INDUCTIVELY_FREE = "inductively free"
    NOT_INDUCTIVELY_FREE = "not inductively free"
    NOT_FREE = "not free"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    status: Status
    certificate: InductionCertificate | None = None
    witness: NonFreeWitness | None = None
    reason: str = ""

    @property
    def is_inductively_free(self) -> bool:
        return self.status is Status.INDUCTIVELY_FREE


# -- multiset helpers ------------------------------------------------------


def multiset_contains(big, small) -> bool:
    """Containment with multiplicity, on sorted tuples."""
    big = list(big)
    for x in small:
        try:
            big.remove(x)
        except ValueError:
            return False
    return True


def _remove_one(values: ExponentMultiset, x: int) -> ExponentMultiset:
    out = list(values)
    out.remove(x)
    return tuple(out)


def _insert_sorted(values, x: int) -> ExponentMultiset:
    return tuple(sorted(values + (x,)))


def _addition_exponents(exp_deleted, exp_restricted, row: int | None = None) -> ExponentMultiset:
    """The exponents after one addition step: exp A'' must be contained in
    exp A'; the unique leftover b becomes b + 1."""
    if len(exp_restricted) != len(exp_deleted) - 1:
        raise CertificateError(
            f"restriction exponents must have one entry fewer "
            f"({list(exp_restricted)} vs {list(exp_deleted)})",
            row,
        )
    leftovers = list(exp_deleted)
    for x in exp_restricted:
        try:
            leftovers.remove(x)
        except ValueError:
            raise CertificateError(
                f"exponents {list(exp_restricted)} of the restriction are not "
                f"contained in {list(exp_deleted)}",
                row,
            ) from None
    (b,) = leftovers
    return _insert_sorted(exp_restricted, b + 1)


# -- base cases ------------------------------------------------------------


def base_exponents(dim: int, count: int) -> ExponentMultiset | None:
    """Forced exponents for the auto-certified cases: empty arrangements in
    any dimension, and any 1- or 2-arrangement.  None otherwise."""
    if count == 0:
        return (0,) * dim
    if dim == 1:
        return (1,)
    if dim == 2:
        return (0, 1) if count == 1 else (1, count - 1)
    return None


def auto_certificate(arrangement: Arrangement) -> InductionCertificate:
    """Canonical certificate for an empty or 1-/2-dimensional arrangement."""
    final = base_exponents(arrangement.dim, len(arrangement))
    if final is None:
        raise ValueError("only empty or dim <= 2 arrangements are auto-certified")
    steps = []
    for i, form in enumerate(arrangement.forms):
        if arrangement.dim == 1:
            restriction_exponents: ExponentMultiset = ()
        else:  # dim == 2: first addition restricts to Phi_1, later ones to a point
            restriction_exponents = (0,) if i == 0 else (1,)
        steps.append(CertStep(form, restriction_exponents, None))
    return InductionCertificate(arrangement.dim, arrangement.order, tuple(steps), final)


# -- search engine ---------------------------------------------------------


class _Ground:
    """Per-search-root context: a fixed form tuple whose subsets the search
    explores as index sets.

    For 3-dimensional roots the pairwise intersection classes are
    precomputed once, which turns Poincare polynomials of sub-arrangements
    into pure integer counting.  Restrictions are shared: the restriction of
    any subset at hyperplane h is an index set into the ground built from
    the full restriction at h.
    """

    __slots__ = ("arrangement", "forms", "dim", "order", "_pairs", "_restrictions")

    def __init__(self, arrangement: Arrangement) -> None:
        self.arrangement = arrangement
        self.forms = arrangement.forms
        self.dim = arrangement.dim
        self.order = arrangement.order
        self._pairs = None
        self._restrictions: dict = {}

    def subset_arrangement(self, indices) -> Arrangement:
        if len(indices) == len(self.forms):
            return self.arrangement
        forms = tuple(self.forms[i] for i in sorted(indices))
        return Arrangement(self.dim, self.order, forms)

    def pair_table(self):
        """(i, j) -> id of the codim-2 subspace ker(f_i) cap ker(f_j)."""
        if self._pairs is None:
            span_ids: dict = {}
            table = {}
            for i, j in itertools.combinations(range(len(self.forms)), 2):
                span = rref((self.forms[i].coeffs, self.forms[j].coeffs))
                pid = span_ids.setdefault(span, len(span_ids))
                table[(i, j)] = pid
            self._pairs = table
        return self._pairs

    def restriction(self, h: int):
        """(ground of the full restriction at form h, image index per form)."""
        cached = self._restrictions.get(h)
        if cached is not None:
            return cached
        pivot_form = self.forms[h]
        pivot = pivot_form.pivot
        images = [
            None if i == h else _restricted_form(f, pivot_form, pivot)
            for i, f in enumerate(self.forms)
        ]
        ordered = sorted({g for g in images if g is not None}, key=LinearForm.sort_key)
        index_of = {g: k for k, g in enumerate(ordered)}
        image_ids = tuple(-1 if g is None else index_of[g] for g in images)
        ground = _Ground(Arrangement(self.dim - 1, self.order, tuple(ordered)))
        self._restrictions[h] = (ground, image_ids)
        return ground, image_ids


def _poincare_dim3(ground: _Ground, indices) -> tuple[int, ...]:
    """pi of a sub-arrangement of a 3-dimensional ground, via the pair
    table.  mu of a codim-2 element on m hyperplanes is m - 1; the origin
    coefficient follows from the Moebius sum."""
    idx = sorted(indices)
    n = len(idx)
    if n == 0:
        return (1,)
    if n == 1:
        return (1, 1)
    table = ground.pair_table()
    counts: dict = {}
    for a, b in itertools.combinations(idx, 2):
        pid = table[(a, b)]
        counts[pid] = counts.get(pid, 0) + 1
    c2 = 0
    for pair_count in counts.values():
        # pair_count = C(m, 2) determines the member count m exactly
        m = (1 + math.isqrt(1 + 8 * pair_count)) // 2
        c2 += m - 1
    coeffs = [1, n, c2, c2 - n + 1]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class SearchEngine:
    """Memoized backtracking search for induction orders.

    The memo table is keyed by the exact arrangement (normalized form
    multiset), so identical sub-problems collide reliably.  NOT_INDUCTIVELY_FREE
    is only stored after exhaustive exploration of a node; budgeted runs
    return UNKNOWN verdicts that are never memoized.  ``threads`` is accepted
    for interface compatibility; the engine is sequential (verdicts are
    deterministic and independent of the value).
    """

    def __init__(self, budget: int | None = None, threads: int = 1) -> None:
        if budget is not None and budget < 0:
            raise ValueError("budget must be nonnegative")
        if threads < 1:
            raise ValueError("threads must be >= 1")
        self.budget = budget
        self.threads = threads
        self.nodes_explored = 0
        self._memo: dict[Arrangement, Verdict] = {}
        self._grounds: dict[Arrangement, _Ground] = {}

    # public entry -------------------------------------------------------

    def search(self, arrangement: Arrangement) -> Verdict:
        ground = self._grounds.get(arrangement)
        if ground is None:
            ground = _Ground(arrangement)
            self._grounds[arrangement] = ground
        return self._search(ground, frozenset(range(len(arrangement))))

    # internals ----------------------------------------------------------

    def _factor_exponents(self, ground: _Ground, indices):
        if ground.dim == 3:
            poly = _poincare_dim3(ground, indices)
        else:
            poly = poincare_polynomial(ground.subset_arrangement(indices))
        return exponents_from_factorization(poly, ground.dim)

    def _search(self, ground: _Ground, indices: frozenset) -> Verdict:
        arrangement = ground.subset_arrangement(indices)
        hit = self._memo.get(arrangement)
        if hit is not None:
            return hit

        n = len(indices)
        if n == 0 or ground.dim <= 2:
            verdict = Verdict(Status.INDUCTIVELY_FREE, auto_certificate(arrangement))
            self._memo[arrangement] = verdict
            return verdict

        exponents = self._factor_exponents(ground, indices)
        if exponents is None:
            verdict = Verdict(
                Status.NOT_INDUCTIVELY_FREE,
                reason="the Poincare polynomial does not factor into "
                "nonnegative integer linear terms, so the arrangement is not free",
            )
            self._memo[arrangement] = verdict
            return verdict

        if self.budget is not None and self.nodes_explored >= self.budget:
            return Verdict(Status.UNKNOWN, reason="search budget exhausted")
        self.nodes_explored += 1

        # Addition-Deletion forces the whole exponent pattern once the added
        # hyperplane is fixed: exp A'' = exp A minus one element b, and
        # exp A' = exp A with that b decremented.  Filter candidates on it.
        candidates = []
        for h in sorted(indices):
            res_ground, image_ids = ground.restriction(h)
            res_indices = frozenset(image_ids[i] for i in indices if i != h)
            b = n - len(res_indices)
            if b not in exponents:
                continue
            target_restricted = _remove_one(exponents, b)
            if res_ground.dim <= 2:
                actual = base_exponents(res_ground.dim, len(res_indices))
            else:
                actual = self._factor_exponents(res_ground, res_indices)
            if actual != target_restricted:
                continue
            target_deleted = _insert_sorted(target_restricted, b - 1)
            if self._factor_exponents(ground, indices - {h}) != target_deleted:
                continue
            candidates.append((len(res_indices), h, res_ground, res_indices))
        candidates.sort(key=lambda item: item[:2])

        saw_unknown = False
        for _, h, res_ground, res_indices in candidates:
            restricted_verdict = self._search(res_ground, res_indices)
            if restricted_verdict.status is Status.UNKNOWN:
                saw_unknown = True
                continue
            if not restricted_verdict.is_inductively_free:
                continue
            deleted_verdict = self._search(ground, indices - {h})
            if deleted_verdict.status is Status.UNKNOWN:
                saw_unknown = True
                continue
            if not deleted_verdict.is_inductively_free:
                continue
            deleted_exponents = deleted_verdict.certificate.final_exponents
            restricted_exponents = restricted_verdict.certificate.final_exponents
            if not multiset_contains(deleted_exponents, restricted_exponents):
                continue
            nested = None if res_ground.dim <= 2 else restricted_verdict.certificate
            steps = deleted_verdict.certificate.steps + (
                CertStep(ground.forms[h], restricted_exponents, nested),
            )
            final = _addition_exponents(deleted_exponents, restricted_exponents)
            verdict = Verdict(
                Status.INDUCTIVELY_FREE,
                InductionCertificate(ground.dim, ground.order, steps, final),
            )
            self._memo[arrangement] = verdict
            return verdict

        if saw_unknown:
            return Verdict(Status.UNKNOWN, reason="search budget exhausted")
        verdict = Verdict(
            Status.NOT_INDUCTIVELY_FREE,
            reason="no hyperplane admits a valid addition step (search was exhaustive)",
        )
        self._memo[arrangement] = verdict
        return verdict


def search_if(arrangement: Arrangement, budget: int | None = None,
              engine: SearchEngine | None = None) -> Verdict:
    """Search for an induction order.  Exhaustive when budget is None."""
    eng = engine if engine is not None else SearchEngine(budget)
    return eng.search(arrangement)


# -- certificate replay ------------------------------------------------------


@dataclass(frozen=True)
class ReplayRow:
    exponents_before: ExponentMultiset
    form: LinearForm
    restriction_exponents: ExponentMultiset


@dataclass(frozen=True)
class ReplayResult:
    final_exponents: ExponentMultiset
    rows: tuple[ReplayRow, ...]


def _certify_restriction(restriction: Arrangement,
                         cert: InductionCertificate | None,
                         engine: SearchEngine | None,
                         row: int | None = None) -> ExponentMultiset:
    if cert is not None:
        listed = tuple(
            sorted((step.form for step in cert.steps), key=LinearForm.sort_key)
        )
        if listed != restriction.forms:
            raise CertificateError(
                "nested certificate does not enumerate the restriction", row
            )
        return replay_certificate(restriction, cert, engine=engine).final_exponents
    forced = base_exponents(restriction.dim, len(restriction))
    if forced is not None:
        return forced
    eng = engine if engine is not None else SearchEngine()
    verdict = eng.search(restriction)
    if verdict.is_inductively_free:
        return verdict.certificate.final_exponents
    raise CertificateError(
        f"the restriction could not be certified inductively free "
        f"({verdict.status.value})",
        row,
    )


def verify_step(current: Arrangement, current_exponents, form: LinearForm,
                restriction_cert: InductionCertificate | None = None,
                engine: SearchEngine | None = None) -> ExponentMultiset:
    """Check one addition step and return the new exponent multiset.

    Raises CertificateError when the restriction cannot be certified or the
    multiset containment exp A'' <= exp A' fails.
    """
    if form in current:
        raise CertificateError("hyperplane is already present")
    full = current.with_form(form)
    restriction = restrict(full, form)
    restricted_exponents = _certify_restriction(restriction, restriction_cert, engine)
    return _addition_exponents(tuple(sorted(current_exponents)), restricted_exponents)


def replay_certificate(arrangement: Arrangement, cert: InductionCertificate,
                       engine: SearchEngine | None = None) -> ReplayResult:
    """Replay an induction order against an arrangement.

    The certificate must enumerate the arrangement exactly; every row's
    declared restriction exponents must match the certified ones, and each
    restriction must itself be certified (nested certificate, auto base
    case, or search).  Raises CertificateError with the failing row.
    """
    if cert.dim != arrangement.dim or cert.order != arrangement.order:
        raise CertificateError("certificate targets a different ambient space")
    listed = [step.form for step in cert.steps]
    if len(listed) != len(set(listed)):
        raise CertificateError("certificate lists a hyperplane twice")
    if set(listed) != set(arrangement.forms):
        raise CertificateError("certificate does not enumerate the arrangement exactly")

    current = empty(arrangement.dim, arrangement.order)
    exponents: ExponentMultiset = (0,) * arrangement.dim
    rows = []
    for i, step in enumerate(cert.steps, start=1):
        full = current.with_form(step.form)
        restriction = restrict(full, step.form)
        restricted_exponents = _certify_restriction(
            restriction, step.restriction_cert, engine, row=i
        )
        declared = tuple(sorted(step.restriction_exponents))
        if declared != restricted_exponents:
            raise CertificateError(
                f"declared restriction exponents {list(declared)} but the "
                f"restriction certifies to {list(restricted_exponents)}",
                row=i,
            )
        rows.append(ReplayRow(exponents, step.form, restricted_exponents))
        exponents = _addition_exponents(exponents, restricted_exponents, row=i)
        current = full

    if exponents != tuple(sorted(cert.final_exponents)):
        raise CertificateError(
            f"certificate ends at {list(cert.final_exponents)} but replay "
            f"reached {list(exponents)}"
        )
    assert sum(exponents) == len(arrangement)
    return ReplayResult(exponents, tuple(rows))


def derive_certificate(arrangement: Arrangement, forms_order,
                       engine: SearchEngine | None = None) -> InductionCertificate:
    """Build a certificate for a given total order on the hyperplanes,
    certifying each restriction by base case or search.  Raises
    CertificateError if the order does not witness inductive freeness."""
    order_list = list(forms_order)
    if set(order_list) != set(arrangement.forms) or len(order_list) != len(arrangement):
        raise CertificateError("order does not enumerate the arrangement exactly")
    eng = engine if engine is not None else SearchEngine()
    current = empty(arrangement.dim, arrangement.order)
    exponents: ExponentMultiset = (0,) * arrangement.dim
    steps = []
    for i, form in enumerate(order_list, start=1):
        full = current.with_form(form)
        restriction = restrict(full, form)
        restricted_exponents = _certify_restriction(restriction, None, eng, row=i)
        nested = None
        if base_exponents(restriction.dim, len(restriction)) is None:
            nested = eng.search(restriction).certificate
        exponents = _addition_exponents(exponents, restricted_exponents, row=i)
        steps.append(CertStep(form, restricted_exponents, nested))
        current = full
    return InductionCertificate(
        arrangement.dim, arrangement.order, tuple(steps), exponents
    )


# -- non-freeness criteria ---------------------------------------------------


def not_if_by_restriction(exp_full, exp_restricted, transitive: bool = True) -> bool:
    """The containment criterion: with A and A^H free at the given exponents
    and the containment behavior hyperplane-independent (caller-asserted via
    `transitive`), exp A^H not contained in exp A certifies that A is not
    inductively free."""
    exp_full = tuple(sorted(exp_full))
    exp_restricted = tuple(sorted(exp_restricted))
    if len(exp_restricted) != len(exp_full) - 1:
        raise ValueError(
            "restriction exponents must have exactly one entry fewer than the "
            "arrangement's"
        )
    if not transitive:
        return False
    return not multiset_contains(exp_full, exp_restricted)


def nonfree_witness(arrangement: Arrangement, form: LinearForm,
                    engine: SearchEngine | None = None) -> NonFreeWitness | None:
    """Witness that A is not free: A' = A minus `form` certified inductively
    free, the restriction's exponents known, and exp A'' not contained in
    exp A'.  None when the criterion is silent."""
    if form not in arrangement:
        raise ValueError("hyperplane is not in the arrangement")
    eng = engine if engine is not None else SearchEngine()
    deleted_verdict = eng.search(delete(arrangement, form))
    if not deleted_verdict.is_inductively_free:
        return None
    deleted_exponents = deleted_verdict.certificate.final_exponents
    restriction = restrict(arrangement, form)
    restricted_exponents = base_exponents(restriction.dim, len(restriction))
    if restricted_exponents is None:
        restricted_verdict = eng.search(restriction)
        if not restricted_verdict.is_inductively_free:
            return None
        restricted_exponents = restricted_verdict.certificate.final_exponents
    if multiset_contains(deleted_exponents, restricted_exponents):
        return None
    return NonFreeWitness(form, deleted_exponents, restricted_exponents)


# -- hereditary check --------------------------------------------------------


@dataclass(frozen=True)
class HifEntry:
    element: LatticeElement
    restriction: Arrangement
    verdict: Verdict


@dataclass(frozen=True)
class HifReport:
    hereditarily_inductively_free: bool | None  # None = inconclusive (budget)
    entries: tuple[HifEntry, ...]
    failing: HifEntry | None


def restriction_to_element(arrangement: Arrangement, element: LatticeElement) -> Arrangement:
    """A^X, computed by iterated restriction along a chain down to X.

    At each step the smallest hyperplane of the current arrangement whose
    form lies in the (transformed) defining span of X is eliminated.
    """
    current = arrangement
    rows = element.span
    while rows:
        pivot_form = next(
            (f for f in current.forms if in_span(f.coeffs, rows)), None
        )
        assert pivot_form is not None, "chain to the lattice element broke"
        pivot = pivot_form.pivot
        transformed = []
        for row in rows:
            factor = row[pivot]
            if factor.is_zero():
                reduced = row[:pivot] + row[pivot + 1 :]
            else:
                h = pivot_form.coeffs
                reduced = row[:pivot] + tuple(
                    row[j] - factor * h[j] for j in range(pivot + 1, len(row))
                )
            if any(not c.is_zero() for c in reduced):
                transformed.append(reduced)
        current = restrict(current, pivot_form)
        rows = rref(transformed)
    return current


def check_hif(arrangement: Arrangement, budget: int | None = None,
              engine: SearchEngine | None = None) -> HifReport:
    """Check hereditary inductive freeness element by element.

    Every X in L(A) is visited (V included); restrictions of dimension at
    most 2 auto-pass.  A failing restriction is strengthened to a non-free
    witness when the deletion criterion fires for one of its hyperplanes.
    """
    eng = engine if engine is not None else SearchEngine(budget)
    entries = []
    failing = None
    inconclusive = False
    for element in intersection_lattice(arrangement):
        if element.codim == 0:
            restricted = arrangement
        else:
            restricted = restriction_to_element(arrangement, element)
        if len(restricted) == 0 or restricted.dim <= 2:
            verdict = Verdict(Status.INDUCTIVELY_FREE, auto_certificate(restricted))
        else:
            verdict = eng.search(restricted)
        if verdict.status is Status.NOT_INDUCTIVELY_FREE:
            for candidate in restricted.forms:
                witness = nonfree_witness(restricted, candidate, eng)
                if witness is not None:
                    verdict = Verdict(
                        Status.NOT_FREE,
                        witness=witness,
                        reason=verdict.reason,
                    )
                    break
        entry = HifEntry(element, restricted, verdict)
        entries.append(entry)
        if verdict.status in (Status.NOT_INDUCTIVELY_FREE, Status.NOT_FREE):
            if failing is None:
                failing = entry
        elif verdict.status is Status.UNKNOWN:
            inconclusive = True
    if failing is not None:
        result: bool | None = False
    elif inconclusive:
        result = None
    else:
        result = True
    return HifReport(result, tuple(entries), failing)
