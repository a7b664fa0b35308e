"""Named arrangements, exponent formulas, the inductive-freeness
classification lookup, and embedded induction tables.

The three embedded tables (the 10-form 4-arrangement separating inductive
from hereditary inductive freeness, and the 21- and 40-hyperplane
reflection arrangements over Q(zeta_3)) are stored row by row exactly as
published: form expression plus expected restriction exponents.  Table
certificates for the monomial family are generated recursively in the
standard order (the new coordinate hyperplane first, then x_i - z^m x_l
ascending in i and m).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .exactnum import CycNum
from .geometry import Arrangement, LinearForm, arrangement_from_forms, empty
from .formats import parse_linear_form
from .freeness import CertStep, InductionCertificate


# -- families ---------------------------------------------------------------


def braid(rank: int) -> Arrangement:
    """The braid arrangement in C^rank: x_i - x_j for i < j (order 1)."""
    if rank < 1:
        raise ValueError("rank must be >= 1")
    one = CycNum.one(1)
    zero = CycNum.zero(1)
    forms = []
    for i in range(rank):
        for j in range(i + 1, rank):
            forms.append(tuple(
                one if k == i else (-one if k == j else zero) for k in range(rank)
            ))
    return arrangement_from_forms(rank, 1, forms)


def monomial_full(r: int, rank: int) -> Arrangement:
    """The arrangement of all x_i and all x_i - z^m x_j over order r.

    Serves G(r,1,rank) and every G(r,p,rank) with p != r; r = 2 is the
    type-B Coxeter arrangement.
    """
    if r < 1 or rank < 1:
        raise ValueError("need r >= 1 and rank >= 1")
    zero = CycNum.zero(r)
    one = CycNum.one(r)
    forms = []
    for i in range(rank):
        forms.append(tuple(one if k == i else zero for k in range(rank)))
    for i in range(rank):
        for j in range(i + 1, rank):
            for m in range(r):
                zeta = CycNum.zeta(r, m)
                forms.append(tuple(
                    one if k == i else (-zeta if k == j else zero)
                    for k in range(rank)
                ))
    return arrangement_from_forms(rank, r, forms)


def monomial_rr(r: int, rank: int) -> Arrangement:
    """The arrangement of all x_i - z^m x_j over order r (no coordinate
    hyperplanes); r = 2 is the type-D Coxeter arrangement."""
    if r < 2 or rank < 2:
        raise ValueError("need r >= 2 and rank >= 2")
    zero = CycNum.zero(r)
    one = CycNum.one(r)
    forms = []
    for i in range(rank):
        for j in range(i + 1, rank):
            for m in range(r):
                zeta = CycNum.zeta(r, m)
                forms.append(tuple(
                    one if k == i else (-zeta if k == j else zero)
                    for k in range(rank)
                ))
    return arrangement_from_forms(rank, r, forms)


# -- group descriptors and the classification --------------------------------


_EXCLUDED_EXCEPTIONALS = frozenset({24, 27, 29, 31, 33, 34})


@dataclass(frozen=True)
class GroupDescriptor:
    """An irreducible type or a product of them.

    kind is one of "cyclic", "symmetric", "monomial", "exceptional",
    "product"; params carries (rank) / (r, p, rank) / (index); factors the
    product components.
    """

    kind: str
    params: tuple[int, ...] = ()
    factors: tuple["GroupDescriptor", ...] = ()

    def __post_init__(self):
        if self.kind == "symmetric":
            (rank,) = self.params
            if rank < 1:
                raise ValueError("symmetric group rank must be >= 1")
        elif self.kind == "monomial":
            r, p, rank = self.params
            if r < 2 or rank < 1 or p < 1 or r % p:
                raise ValueError("monomial group needs r >= 2, rank >= 1, p | r")
        elif self.kind == "exceptional":
            (index,) = self.params
            if not 4 <= index <= 37:
                raise ValueError("exceptional index must be in 4..37")
        elif self.kind == "product":
            if not self.factors:
                raise ValueError("a product needs factors")
        elif self.kind != "cyclic":
            raise ValueError(f"unknown descriptor kind {self.kind!r}")

    @classmethod
    def cyclic(cls) -> "GroupDescriptor":
        return cls("cyclic")

    @classmethod
    def symmetric(cls, rank: int) -> "GroupDescriptor":
        return cls("symmetric", (rank,))

    @classmethod
    def monomial(cls, r: int, p: int, rank: int) -> "GroupDescriptor":
        return cls("monomial", (r, p, rank))

    @classmethod
    def exceptional(cls, index: int) -> "GroupDescriptor":
        return cls("exceptional", (index,))

    @classmethod
    def product(cls, *factors: "GroupDescriptor") -> "GroupDescriptor":
        return cls("product", factors=tuple(factors))

    def label(self) -> str:
        if self.kind == "cyclic":
            return "cyclic"
        if self.kind == "symmetric":
            return f"S{self.params[0]}"
        if self.kind == "monomial":
            return "G({},{},{})".format(*self.params)
        if self.kind == "exceptional":
            return f"G{self.params[0]}"
        return " x ".join(f.label() for f in self.factors)


def excluded_reason(descriptor: GroupDescriptor) -> str | None:
    """Why the type is not inductively free, or None when it is."""
    if descriptor.kind == "product":
        for factor in descriptor.factors:
            reason = excluded_reason(factor)
            if reason is not None:
                return reason
        return None
    if descriptor.kind == "monomial":
        r, p, rank = descriptor.params
        if p == r and r >= 3 and rank >= 3:
            return f"{descriptor.label()} has an irreducible factor G(r,r,ℓ), r,ℓ ≥ 3"
    if descriptor.kind == "exceptional" and descriptor.params[0] in _EXCLUDED_EXCEPTIONALS:
        return (
            f"{descriptor.label()} is one of the excluded exceptional types "
            "G24, G27, G29, G31, G33, G34"
        )
    return None


def classification_is_if(descriptor: GroupDescriptor) -> bool:
    """The classification lookup: inductively free iff no irreducible factor
    is a G(r,r,l) with r,l >= 3 or one of G24, G27, G29, G31, G33, G34."""
    return excluded_reason(descriptor) is None


# Exponent data the classification relies on for the 60-hyperplane rank-4
# case: no forms are published for it, only these numbers.
G31_DATA = {
    "exponents": (1, 13, 17, 29),
    "hyperplanes": 60,
    "restriction_size": 31,
    "restriction_exponents": (1, 13, 17),
}


# -- exponent formulas --------------------------------------------------------


def exponents_formula(descriptor, restriction: bool = False) -> tuple[int, ...]:
    """Closed-form exponents for the monomial families.

    monomial full (p != r):  {1, r+1, 2r+1, ..., (rank-1)r+1}
    monomial rr:             {1, r+1, ..., (rank-2)r+1, (rank-1)(r-1)}
    rr restriction:          {1, r+1, ..., (rank-3)r+1, (rank-2)(r-1)+1}
    """
    if descriptor.kind == "symmetric":
        rank = descriptor.params[0]
        if restriction:
            raise ValueError("no restriction formula for this family")
        return tuple(range(rank))
    if descriptor.kind != "monomial":
        raise ValueError(f"no exponent formula for {descriptor.label()}")
    r, p, rank = descriptor.params
    if p != r:
        if restriction:
            raise ValueError("no restriction formula for this family")
        return tuple(sorted(k * r + 1 for k in range(rank)))
    if restriction:
        if rank < 3:
            raise ValueError("restriction formula needs rank >= 3")
        head = [k * r + 1 for k in range(rank - 2)]
        return tuple(sorted(head + [(rank - 2) * (r - 1) + 1]))
    head = [k * r + 1 for k in range(rank - 1)]
    return tuple(sorted(head + [(rank - 1) * (r - 1)]))


# -- embedded tables ----------------------------------------------------------

# 10 forms in C^4 over Q: inductively free, not hereditarily so.
_TABLE1_ROWS = (
    ("a - b + c - d", (0, 0, 0)),
    ("a + b + c + d", (0, 0, 1)),
    ("a + b + c - d", (0, 1, 1)),
    ("a", (1, 1, 1)),
    ("b", (1, 1, 1)),
    ("a + b - c + d", (1, 1, 2)),
    ("d", (1, 2, 2)),
    ("a - b + c + d", (1, 2, 2)),
    ("a + b - c - d", (1, 2, 3)),
    ("c", (1, 3, 3)),
)
_TABLE1_FINAL = (1, 3, 3, 3)

# 21 hyperplanes in C^3 over Q(zeta_3).
_G26_ROWS = (
    ("b - c", (0, 0)),
    ("c", (0, 1)),
    ("a + b + c", (1, 1)),
    ("b", (1, 1)),
    ("b - z*c", (1, 1)),
    ("a + b + z*c", (1, 3)),
    ("a + b + z^2*c", (1, 3)),
    ("b - z^2*c", (1, 3)),
    ("a - z*b", (1, 4)),
    ("a - z^2*b", (1, 4)),
    ("a - z^2*c", (1, 5)),
    ("a - z*c", (1, 5)),
    ("a + z^2*b + c", (1, 6)),
    ("a + z*b + c", (1, 6)),
    ("a + z^2*b + z*c", (1, 7)),
    ("a + z*b + z*c", (1, 7)),
    ("a + z^2*b + z^2*c", (1, 7)),
    ("a + z*b + z^2*c", (1, 7)),
    ("a - c", (1, 7)),
    ("a", (1, 7)),
    ("a - b", (1, 7)),
)
_G26_FINAL = (1, 7, 13)

# 40 hyperplanes in C^4 over Q(zeta_3).
_G32_ROWS = (
    ("c", (0, 0, 0)),
    ("a + b + c", (0, 0, 1)),
    ("b", (0, 1, 1)),
    ("a - b - d", (1, 1, 1)),
    ("a + b + z*c", (1, 1, 1)),
    ("a + b + z^2*c", (1, 1, 1)),
    ("a + z^2*b + c", (1, 1, 3)),
    ("a + z*b + c", (1, 1, 3)),
    ("a - z*b - d", (1, 3, 3)),
    ("a + z*b + z^2*c", (1, 2, 3)),
    ("a + z*b + z*c", (1, 2, 4)),
    ("a - z^2*b - d", (1, 4, 4)),
    ("a - z*c + z^2*d", (1, 4, 4)),
    ("a + z^2*b + z*c", (1, 4, 4)),
    ("a - z^2*c + z^2*d", (1, 4, 5)),
    ("b - c - z^2*d", (1, 5, 5)),
    ("a + z^2*b + z^2*c", (1, 5, 5)),
    ("a - c + z^2*d", (1, 5, 6)),
    ("b - z^2*c - z^2*d", (1, 6, 6)),
    ("b - z*c - z^2*d", (1, 6, 6)),
    ("a", (1, 6, 7)),
    ("a - z^2*c + z*d", (1, 7, 7)),
    ("a - c + z*d", (1, 7, 7)),
    ("b - z*c - z*d", (1, 7, 8)),
    ("a - z*c + z*d", (1, 7, 8)),
    ("b - z^2*c - z*d", (1, 7, 9)),
    ("b - c - z*d", (1, 7, 9)),
    ("a - z*b - z*d", (1, 7, 9)),
    ("a - z^2*b - z^2*d", (1, 7, 9)),
    ("b - c - d", (1, 7, 12)),
    ("b - z*c - d", (1, 7, 12)),
    ("b - z^2*c - d", (1, 7, 12)),
    ("a - z^2*b - z*d", (1, 7, 12)),
    ("a - b - z^2*d", (1, 7, 13)),
    ("a - b - z*d", (1, 7, 13)),
    ("a - z*b - z^2*d", (1, 7, 13)),
    ("a - z*c + d", (1, 7, 13)),
    ("d", (1, 7, 13)),
    ("a - z^2*c + d", (1, 7, 13)),
    ("a - c + d", (1, 7, 13)),
)
_G32_FINAL = (1, 7, 13, 19)

_TABLES = {
    "table1": (4, 1, _TABLE1_ROWS, _TABLE1_FINAL),
    "g26": (3, 3, _G26_ROWS, _G26_FINAL),
    "g32": (4, 3, _G32_ROWS, _G32_FINAL),
}


def _table_forms(name: str) -> tuple[int, int, tuple[tuple[LinearForm, tuple[int, ...]], ...]]:
    dim, order, rows, final = _TABLES[name]
    parsed = tuple(
        (parse_linear_form(text, dim, order), exponents) for text, exponents in rows
    )
    return dim, order, parsed, final


def paper_arrangement(name: str) -> Arrangement:
    """One of the embedded arrangements: table1, g26, g32."""
    if name not in _TABLES:
        raise ValueError(f"unknown arrangement name {name!r}")
    dim, order, rows, _ = _table_forms(name)
    return arrangement_from_forms(dim, order, (f.coeffs for f, _ in rows))


def monomial_certificate(r: int, rank: int) -> InductionCertificate:
    """The recursively generated induction order for the full monomial
    arrangement: certify the rank-(l-1) arrangement inside the first l-1
    coordinates, then add x_l and all x_i - z^m x_l; every such restriction
    is again the rank-(l-1) arrangement."""
    if r < 1 or rank < 1:
        raise ValueError("need r >= 1 and rank >= 1")
    one = CycNum.one(r)
    zero = CycNum.zero(r)

    def coordinate_form(index: int, dim: int) -> LinearForm:
        return LinearForm(tuple(one if k == index else zero for k in range(dim)))

    def pad_step(step: CertStep) -> CertStep:
        padded_form = LinearForm(step.form.coeffs + (zero,))
        nested = pad_cert(step.restriction_cert) if step.restriction_cert else None
        return CertStep(
            padded_form,
            tuple(sorted(step.restriction_exponents + (0,))),
            nested,
        )

    def pad_cert(cert: InductionCertificate) -> InductionCertificate:
        return InductionCertificate(
            cert.dim + 1,
            cert.order,
            tuple(pad_step(s) for s in cert.steps),
            tuple(sorted(cert.final_exponents + (0,))),
        )

    cert = InductionCertificate(
        1, r, (CertStep(coordinate_form(0, 1), (), None),), (1,)
    )
    for level in range(2, rank + 1):
        previous = cert
        prev_exponents = previous.final_exponents
        nested = previous if level - 1 > 2 else None
        steps = [pad_step(s) for s in previous.steps]
        steps.append(CertStep(coordinate_form(level - 1, level), prev_exponents, nested))
        for i in range(level - 1):
            for m in range(r):
                zeta = CycNum.zeta(r, m)
                coeffs = tuple(
                    one if k == i else (-zeta if k == level - 1 else zero)
                    for k in range(level)
                )
                steps.append(CertStep(LinearForm(coeffs), prev_exponents, nested))
        final = tuple(sorted(prev_exponents + ((level - 1) * r + 1,)))
        cert = InductionCertificate(level, r, tuple(steps), final)
    return cert


def table_certificate(name: str) -> InductionCertificate:
    """An embedded or generated induction table.

    Names: table1, g26, g32, or monomial:r,l (r >= 3, l >= 2 generates the
    recursive order for the full monomial arrangement).
    """
    if name.startswith("monomial:"):
        try:
            r, rank = (int(x) for x in name.split(":", 1)[1].split(","))
        except ValueError:
            raise ValueError(f"bad monomial certificate name {name!r}") from None
        if r < 3 or rank < 2:
            raise ValueError("monomial table certificates need r >= 3 and l >= 2")
        return monomial_certificate(r, rank)
    if name not in _TABLES:
        raise ValueError(f"unknown table name {name!r}")
    dim, order, rows, final = _table_forms(name)
    steps = tuple(CertStep(form, exponents, None) for form, exponents in rows)
    return InductionCertificate(dim, order, steps, final)


# -- identifiers (CLI surface) -------------------------------------------------


def from_identifier(identifier: str) -> Arrangement:
    """Resolve a catalog identifier: braid:L, full:R,L, rr:R,L, paper:NAME,
    or monomial:R,P,L."""
    kind, _, rest = identifier.partition(":")
    try:
        if kind == "braid":
            return braid(int(rest))
        if kind == "full":
            r, rank = (int(x) for x in rest.split(","))
            return monomial_full(r, rank)
        if kind == "rr":
            r, rank = (int(x) for x in rest.split(","))
            return monomial_rr(r, rank)
        if kind == "paper":
            return paper_arrangement(rest)
        if kind == "monomial":
            r, p, rank = (int(x) for x in rest.split(","))
            if p < 1 or r % p:
                raise ValueError(f"p must divide r in {identifier!r}")
            return monomial_rr(r, rank) if p == r else monomial_full(r, rank)
    except ValueError as exc:
        raise ValueError(f"bad catalog identifier {identifier!r}: {exc}") from None
    raise ValueError(f"unknown catalog identifier {identifier!r}")


def parse_descriptor(text: str) -> GroupDescriptor:
    """Parse a classification descriptor: atoms braid:L, full:R,L, rr:R,L,
    monomial:R,P,L, cyclic, gN / GN; products joined with '*' or 'x'."""
    pieces = [p.strip() for p in re.split(r"\s*[*]\s*|\s+x\s+", text) if p.strip()]
    if not pieces:
        raise ValueError("empty descriptor")
    atoms = [_parse_descriptor_atom(p) for p in pieces]
    if len(atoms) == 1:
        return atoms[0]
    return GroupDescriptor.product(*atoms)


def _parse_descriptor_atom(text: str) -> GroupDescriptor:
    lowered = text.lower()
    if lowered == "cyclic":
        return GroupDescriptor.cyclic()
    match = re.fullmatch(r"g(\d+)", lowered)
    if match:
        return GroupDescriptor.exceptional(int(match.group(1)))
    kind, _, rest = lowered.partition(":")
    try:
        if kind == "braid":
            return GroupDescriptor.symmetric(int(rest))
        if kind == "full":
            r, rank = (int(x) for x in rest.split(","))
            return GroupDescriptor.monomial(r, 1, rank)
        if kind == "rr":
            r, rank = (int(x) for x in rest.split(","))
            return GroupDescriptor.monomial(r, r, rank)
        if kind == "monomial":
            r, p, rank = (int(x) for x in rest.split(","))
            return GroupDescriptor.monomial(r, p, rank)
    except ValueError as exc:
        raise ValueError(f"bad descriptor {text!r}: {exc}") from None
    raise ValueError(f"unknown descriptor {text!r}")
