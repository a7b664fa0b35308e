"""Exact arithmetic in Q and in the cyclotomic fields Q(zeta_n).

A ``CycNum`` is a residue modulo the n-th cyclotomic polynomial, stored as a
coefficient vector of length phi(n) over ``fractions.Fraction`` in the power
basis 1, zeta, ..., zeta^(phi(n)-1).  The representation is canonical: two
values are equal iff their coefficient vectors coincide, so equality and
hashing are structural.  Values are immutable and safe to share.

The arithmetic order is fixed per value; mixing orders raises.  Callers that
need to combine contexts lift to a common order first (`CycNum.lift`).
"""

from __future__ import annotations

import functools
from fractions import Fraction

# Arbitrary-precision rationals.  Fraction already maintains the invariants we
# need: gcd(|num|, den) = 1, den >= 1, zero stored as 0/1.
Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def euler_phi(n: int) -> int:
    """Euler totient; the degree of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError(f"order must be a positive integer, got {n}")
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_trim(coeffs: list[Fraction]) -> list[Fraction]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            if cb != 0:
                out[i + j] += ca * cb
    return _poly_trim(out)


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = list(a) + [_ZERO] * (len(b) - len(a))
    for i, cb in enumerate(b):
        out[i] -= cb
    return _poly_trim(out)


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    quo = [_ZERO] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    for k in range(len(rem) - len(b), -1, -1):
        c = rem[k + len(b) - 1] * inv_lead
        if c == 0:
            continue
        quo[k] = c
        for j, cb in enumerate(b):
            rem[k + j] -= c * cb
    return _poly_trim(quo), _poly_trim(rem)


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, ascending degree.

    Computed by dividing x^n - 1 by Phi_d for every proper divisor d of n.
    Orders used in practice are tiny, so correctness beats speed here.

    >>> cyclotomic_polynomial(1)
    (-1, 1)
    >>> cyclotomic_polynomial(6)
    (1, -1, 1)
    """
    if n < 1:
        raise ValueError(f"order must be a positive integer, got {n}")
    poly = [Fraction(-1)] + [_ZERO] * (n - 1) + [_ONE]
    for d in range(1, n):
        if n % d == 0:
            phi_d = [Fraction(c) for c in cyclotomic_polynomial(d)]
            poly, rem = _poly_divmod(poly, phi_d)
            assert not rem, f"Phi_{d} must divide x^{n} - 1"
    assert len(poly) == euler_phi(n) + 1
    return tuple(int(c) for c in poly)


@functools.lru_cache(maxsize=None)
def _phi_fractions(n: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(c) for c in cyclotomic_polynomial(n))


@functools.lru_cache(maxsize=None)
def _reduction_rows(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Residues of x^(phi(n)+j) modulo Phi_n for j = 0 .. phi(n)-2.

    Used to fold products back into the canonical basis without a full
    polynomial division.
    """
    phi = euler_phi(n)
    head = _phi_fractions(n)[:phi]
    base = tuple(-c for c in head)
    rows = [base]
    for _ in range(phi - 2):
        prev = rows[-1]
        top = prev[-1]
        shifted = (_ZERO,) + prev[:-1]
        rows.append(tuple(s + top * b for s, b in zip(shifted, base)))
    return tuple(rows)


class CycNum:
    """An element of Q(zeta_n) in canonical reduced form."""

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, order: int, coeffs) -> None:
        vec = tuple(Fraction(c) for c in coeffs)
        if len(vec) != euler_phi(order):
            raise ValueError(
                f"order {order} needs {euler_phi(order)} coefficients, got {len(vec)}"
            )
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", vec)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, order: int, coeffs: tuple[Fraction, ...]) -> "CycNum":
        self = object.__new__(cls)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_hash", None)
        return self

    @classmethod
    def rational(cls, order: int, value) -> "CycNum":
        """Embed a rational number as an order-n constant."""
        phi = euler_phi(order)
        return cls._raw(order, (Fraction(value),) + (_ZERO,) * (phi - 1))

    @classmethod
    def zeta(cls, order: int, power: int = 1) -> "CycNum":
        """zeta_n^power."""
        power %= order
        return reduce_mod_cyclotomic([0] * power + [1], order)

    @classmethod
    def zero(cls, order: int) -> "CycNum":
        return cls.rational(order, 0)

    @classmethod
    def one(cls, order: int) -> "CycNum":
        return cls.rational(order, 1)

    # -- canonical form -------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CycNum):
            if other.order != self.order:
                raise ValueError(
                    f"cyclotomic order mismatch: {self.order} vs {other.order}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum.rational(self.order, other)
        return None

    def __add__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return CycNum._raw(self.order, tuple(a + b for a, b in zip(self.coeffs, rhs.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return CycNum._raw(self.order, tuple(a - b for a, b in zip(self.coeffs, rhs.coeffs)))

    def __rsub__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return rhs - self

    def __neg__(self):
        return CycNum._raw(self.order, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        a, b = self.coeffs, rhs.coeffs
        phi = len(a)
        if phi == 1:
            return CycNum._raw(self.order, (a[0] * b[0],))
        conv = [_ZERO] * (2 * phi - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                if cb != 0:
                    conv[i + j] += ca * cb
        rows = _reduction_rows(self.order)
        out = conv[:phi]
        for k in range(phi, 2 * phi - 1):
            ck = conv[k]
            if ck == 0:
                continue
            row = rows[k - phi]
            for i in range(phi):
                if row[i] != 0:
                    out[i] += ck * row[i]
        return CycNum._raw(self.order, tuple(out))

    __rmul__ = __mul__

    def inv(self) -> "CycNum":
        """Multiplicative inverse, by the extended Euclidean algorithm
        against Phi_n."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_n)")
        a = _poly_trim(list(self.coeffs))
        if len(a) == 1:
            return CycNum.rational(self.order, 1 / a[0])
        modulus = list(_phi_fractions(self.order))
        old_r, r = a, modulus
        old_s, s = [_ONE], []
        while r:
            quo, rem = _poly_divmod(old_r, r)
            old_r, r = r, rem
            old_s, s = s, _poly_sub(old_s, _poly_mul(quo, s))
        # Phi_n is irreducible and deg(a) < deg(Phi_n), so the gcd is a unit.
        assert len(old_r) == 1, "gcd with the cyclotomic polynomial must be constant"
        scale = 1 / old_r[0]
        return reduce_mod_cyclotomic([c * scale for c in old_s], self.order)

    def __truediv__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self * rhs.inv()

    def __rtruediv__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return rhs * self.inv()

    def __pow__(self, exponent: int) -> "CycNum":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inv() ** (-exponent)
        result = CycNum.one(self.order)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def lift(self, new_order: int) -> "CycNum":
        """Embed into Q(zeta_m) for a multiple m of the current order,
        via zeta_n = zeta_m^(m/n)."""
        if new_order % self.order:
            raise ValueError(
                f"cannot lift order {self.order} into non-multiple order {new_order}"
            )
        if new_order == self.order:
            return self
        step = new_order // self.order
        poly = [_ZERO] * ((len(self.coeffs) - 1) * step + 1)
        for k, c in enumerate(self.coeffs):
            poly[k * step] = c
        return reduce_mod_cyclotomic(poly, new_order)

    # -- identity ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, CycNum):
            return self.order == other.order and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            if self.is_rational():
                h = hash(self.coeffs[0])
            else:
                h = hash((self.order, self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    def __setattr__(self, name, value):
        raise AttributeError("CycNum is immutable")

    def __repr__(self):
        return f"CycNum({self.order}, {self._text()!r})"

    def _text(self) -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                zpow = "z" if k == 1 else f"z^{k}"
                body = zpow if mag == 1 else f"{mag}*{zpow}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(parts) if parts else "0"


def reduce_mod_cyclotomic(poly_coeffs, n: int) -> CycNum:
    """Reduce a polynomial in zeta_n (ascending coefficients) to the unique
    residue modulo Phi_n.

    >>> reduce_mod_cyclotomic([0, 0, 1], 3).coeffs   # zeta_3^2 = -1 - zeta_3
    (Fraction(-1, 1), Fraction(-1, 1))
    """
    if n < 1:
        raise ValueError(f"order must be a positive integer, got {n}")
    phi = euler_phi(n)
    # zeta^n = 1, so exponents fold mod n before the polynomial division.
    folded = [_ZERO] * min(n, len(poly_coeffs) or 1)
    if len(folded) < 1:
        folded = [_ZERO]
    for k, c in enumerate(poly_coeffs):
        frac = Fraction(c)
        if frac != 0:
            folded[k % n] += frac
    _, rem = _poly_divmod(folded, list(_phi_fractions(n)))
    rem = rem + [_ZERO] * (phi - len(rem))
    return CycNum._raw(n, tuple(rem))
