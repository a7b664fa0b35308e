"""Text formats: the coefficient expression grammar, linear-form
expressions, arrangement files, and induction-table files.

Coefficient grammar (``z`` denotes zeta_n for the file's declared order n):

    coefficient := [sign] term ((``+`` | ``-``) term)*
    term        := rational | rational ``*`` zpow | zpow
    zpow        := ``z`` [``^`` integer]
    rational    := integer [``/`` positive-integer]

Arrangement files carry a ``dim``/``order`` header and one ``form`` line per
hyperplane with comma-separated coefficients.  Table files carry the same
header, one ``<form> | <restriction exponents>`` row per addition step, and
a final ``= <exponents>`` line.  ``#`` starts a comment; whitespace is
insignificant.  Writing is canonical, so write(parse(write(x))) == write(x).
"""

from __future__ import annotations

import re
from fractions import Fraction

from .exactnum import CycNum, reduce_mod_cyclotomic
from .geometry import Arrangement, LinearForm, arrangement_from_forms, normalize_form
from .freeness import CertStep, InductionCertificate


class FormatError(ValueError):
    """A parse failure, with 1-based line and column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<int>\d+)"
    r"|(?P<var>x\d+|[abcd])"
    r"|(?P<z>z)"
    r"|(?P<op>[-+*/^()|,=])"
)

_ALIASES = {"a": 0, "b": 1, "c": 2, "d": 3}


def _tokenize(text: str, line: int | None, offset: int = 0):
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise FormatError(
                f"unexpected character {text[pos]!r}", line, offset + pos + 1
            )
        pos = match.end()
        if match.lastgroup == "ws":
            continue
        tokens.append((match.lastgroup, match.group(), offset + match.start() + 1))
    return tokens


class _ExprParser:
    """Recursive-descent parser over the token list."""

    def __init__(self, text: str, order: int, line: int | None = None, offset: int = 0):
        self.tokens = _tokenize(text, line, offset)
        self.pos = 0
        self.order = order
        self.line = line
        self.end_column = offset + len(text) + 1

    def _peek(self, ahead: int = 0):
        index = self.pos + ahead
        return self.tokens[index] if index < len(self.tokens) else None

    def _take(self):
        token = self._peek()
        if token is None:
            raise FormatError("unexpected end of expression", self.line, self.end_column)
        self.pos += 1
        return token

    def _expect(self, kind: str, value: str | None = None):
        token = self._take()
        if token[0] != kind or (value is not None and token[1] != value):
            raise FormatError(
                f"expected {value or kind}, found {token[1]!r}", self.line, token[2]
            )
        return token

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def _sign(self) -> int:
        sign = 1
        while True:
            token = self._peek()
            if token is not None and token[0] == "op" and token[1] in "+-":
                self.pos += 1
                if token[1] == "-":
                    sign = -sign
            else:
                return sign

    def _rational(self) -> Fraction:
        token = self._expect("int")
        value = Fraction(int(token[1]))
        nxt = self._peek()
        if nxt is not None and nxt[0] == "op" and nxt[1] == "/":
            self.pos += 1
            den = self._expect("int")
            if int(den[1]) == 0:
                raise FormatError("zero denominator", self.line, den[2])
            value /= int(den[1])
        return value

    def _zpow(self) -> int:
        self._expect("z")
        token = self._peek()
        if token is not None and token[0] == "op" and token[1] == "^":
            self.pos += 1
            exponent = self._expect("int")
            return int(exponent[1])
        return 1

    def _coef_term(self) -> tuple[Fraction, int]:
        """One grammar term: (rational, power of zeta)."""
        token = self._peek()
        if token is None:
            raise FormatError("unexpected end of expression", self.line, self.end_column)
        if token[0] == "int":
            value = self._rational()
            nxt = self._peek()
            if (
                nxt is not None
                and nxt[0] == "op"
                and nxt[1] == "*"
                and self._peek(1) is not None
                and self._peek(1)[0] == "z"
            ):
                self.pos += 1
                return value, self._zpow()
            return value, 0
        if token[0] == "z":
            return Fraction(1), self._zpow()
        raise FormatError(f"expected a coefficient, found {token[1]!r}", self.line, token[2])

    def coefficient(self, stop_at_star: bool = False) -> CycNum:
        """A sum of coefficient terms."""
        poly: dict[int, Fraction] = {}
        first = True
        while True:
            token = self._peek()
            if token is None:
                break
            if not first and not (token[0] == "op" and token[1] in "+-"):
                break
            sign = self._sign()
            value, power = self._coef_term()
            poly[power] = poly.get(power, Fraction(0)) + sign * value
            first = False
            if stop_at_star:
                nxt = self._peek()
                if nxt is not None and nxt[0] == "op" and nxt[1] == "*":
                    break
        if first:
            raise FormatError("empty coefficient", self.line, self.end_column)
        size = max(poly) + 1 if poly else 1
        coeffs = [Fraction(0)] * size
        for power, value in poly.items():
            coeffs[power] = value
        return reduce_mod_cyclotomic(coeffs, self.order)

    def _variable(self, dim: int) -> int:
        token = self._expect("var")
        name = token[1]
        index = _ALIASES[name] if name in _ALIASES else int(name[1:]) - 1
        if not 0 <= index < dim:
            raise FormatError(
                f"variable {name!r} is out of range for dimension {dim}",
                self.line,
                token[2],
            )
        return index

    def linear_form(self, dim: int) -> tuple[CycNum, ...]:
        """A sum of [coefficient *] variable terms."""
        coeffs = [CycNum.zero(self.order) for _ in range(dim)]
        saw_term = False
        while True:
            token = self._peek()
            if token is None:
                break
            if saw_term and not (token[0] == "op" and token[1] in "+-"):
                raise FormatError(f"expected + or -, found {token[1]!r}", self.line, token[2])
            sign = self._sign()
            token = self._peek()
            if token is None:
                raise FormatError("dangling sign", self.line, self.end_column)
            if token[0] == "var":
                value = CycNum.one(self.order)
            elif token[0] == "op" and token[1] == "(":
                self.pos += 1
                value = self.coefficient()
                self._expect("op", ")")
                self._expect("op", "*")
            else:
                value = self.coefficient(stop_at_star=True)
                self._expect("op", "*")
            index = self._variable(dim)
            scaled = value if sign == 1 else -value
            coeffs[index] = coeffs[index] + scaled
            saw_term = True
        if not saw_term:
            raise FormatError("empty form expression", self.line, self.end_column)
        return tuple(coeffs)


def parse_coefficient(text: str, order: int, line: int | None = None, offset: int = 0) -> CycNum:
    parser = _ExprParser(text, order, line, offset)
    value = parser.coefficient()
    if not parser.at_end():
        token = parser._peek()
        raise FormatError(f"trailing input {token[1]!r}", line, token[2])
    return value


def parse_linear_form(text: str, dim: int, order: int, line: int | None = None) -> LinearForm:
    parser = _ExprParser(text, order, line)
    coeffs = parser.linear_form(dim)
    if all(c.is_zero() for c in coeffs):
        raise FormatError("form expression is identically zero", line)
    return normalize_form(coeffs)


# -- rendering ---------------------------------------------------------------


def _term_pieces(value: Fraction, power: int) -> str:
    magnitude = abs(value)
    if power == 0:
        return str(magnitude)
    zpow = "z" if power == 1 else f"z^{power}"
    return zpow if magnitude == 1 else f"{magnitude}*{zpow}"


def render_coefficient(value: CycNum) -> str:
    parts = []
    for power, c in enumerate(value.coeffs):
        if c == 0:
            continue
        body = _term_pieces(c, power)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(parts) if parts else "0"


def _single_term(value: CycNum) -> tuple[int, Fraction, int] | None:
    """(sign, magnitude, zeta power) when the value has one basis term."""
    found = None
    for power, c in enumerate(value.coeffs):
        if c == 0:
            continue
        if found is not None:
            return None
        found = (1 if c > 0 else -1, abs(c), power)
    return found


def render_linear_form(form: LinearForm) -> str:
    parts = []
    for index, value in enumerate(form.coeffs):
        if value.is_zero():
            continue
        single = _single_term(value)
        variable = f"x{index + 1}"
        if single is not None:
            sign, magnitude, power = single
            if magnitude == 1 and power == 0:
                body = variable
            else:
                body = f"{_term_pieces(magnitude, power)}*{variable}"
        else:
            sign = 1
            body = f"({render_coefficient(value)})*{variable}"
        if not parts:
            parts.append(body if sign > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if sign > 0 else f" - {body}")
    return "".join(parts)


def _render_exponents(exponents) -> str:
    return ", ".join(str(e) for e in exponents)


# -- arrangement files ---------------------------------------------------------


def _meaningful_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _parse_header(entries, kind: str) -> tuple[int, int, list]:
    rows = list(entries)
    if len(rows) < 2:
        raise FormatError(f"{kind} is missing its dim/order header")
    (dim_line, dim_text), (order_line, order_text) = rows[0], rows[1]
    dim_match = re.fullmatch(r"dim\s+(\d+)", dim_text)
    if dim_match is None:
        raise FormatError("expected 'dim <integer>'", dim_line, 1)
    order_match = re.fullmatch(r"order\s+(\d+)", order_text)
    if order_match is None:
        raise FormatError("expected 'order <integer>'", order_line, 1)
    order = int(order_match.group(1))
    if order < 1:
        raise FormatError("order must be positive", order_line, 1)
    return int(dim_match.group(1)), order, rows[2:]


def parse_arrangement_text(text: str) -> Arrangement:
    dim, order, rows = _parse_header(_meaningful_lines(text), "arrangement file")
    vectors = []
    for lineno, line in rows:
        if not line.startswith("form"):
            raise FormatError("expected a 'form' line", lineno, 1)
        body = line[4:].strip()
        if not body:
            raise FormatError("empty form line", lineno, 1)
        offset = 0
        coeffs = []
        pieces = body.split(",")
        if len(pieces) != dim:
            raise FormatError(
                f"form has {len(pieces)} coefficients, expected {dim}", lineno, 1
            )
        column = line.index(body) + 1
        for piece in pieces:
            coeffs.append(parse_coefficient(piece, order, lineno, offset=column - 1))
            column += len(piece) + 1
        if all(c.is_zero() for c in coeffs):
            raise FormatError("the zero vector does not define a hyperplane", lineno, 1)
        vectors.append(tuple(coeffs))
    return arrangement_from_forms(dim, order, vectors)


def write_arrangement_text(arrangement: Arrangement) -> str:
    lines = [
        f"# {len(arrangement)} hyperplanes in C^{arrangement.dim} over Q(zeta_{arrangement.order})",
        f"dim {arrangement.dim}",
        f"order {arrangement.order}",
    ]
    for form in arrangement.forms:
        rendered = ", ".join(render_coefficient(c) for c in form.coeffs)
        lines.append(f"form {rendered}")
    return "\n".join(lines) + "\n"


# -- induction table files ------------------------------------------------------


def _parse_exponents(text: str, lineno: int, column: int) -> tuple[int, ...]:
    body = text.strip()
    if not body:
        return ()
    values = []
    for piece in body.split(","):
        piece = piece.strip()
        if not re.fullmatch(r"\d+", piece):
            raise FormatError(f"bad exponent {piece!r}", lineno, column)
        values.append(int(piece))
    return tuple(sorted(values))


def parse_table_text(text: str) -> InductionCertificate:
    dim, order, rows = _parse_header(_meaningful_lines(text), "table file")
    steps = []
    final = None
    for lineno, line in rows:
        if final is not None:
            raise FormatError("content after the final exponent line", lineno, 1)
        if line.startswith("="):
            final = _parse_exponents(line[1:], lineno, 2)
            continue
        if "|" not in line:
            raise FormatError(
                "expected '<form> | <restriction exponents>' or '= <exponents>'",
                lineno,
                1,
            )
        form_text, exp_text = line.split("|", 1)
        form = parse_linear_form(form_text.strip(), dim, order, line=lineno)
        exponents = _parse_exponents(exp_text, lineno, line.index("|") + 2)
        if len(exponents) != dim - 1:
            raise FormatError(
                f"restriction exponents need {dim - 1} entries, got {len(exponents)}",
                lineno,
                line.index("|") + 2,
            )
        steps.append(CertStep(form, exponents, None))
    if final is None:
        raise FormatError("table file is missing its final '=' line")
    if len(final) != dim:
        raise FormatError(f"final exponents need {dim} entries, got {len(final)}")
    return InductionCertificate(dim, order, tuple(steps), final)


def write_table_text(cert: InductionCertificate) -> str:
    lines = [
        f"# induction table: {len(cert.steps)} rows in C^{cert.dim} over Q(zeta_{cert.order})",
        f"dim {cert.dim}",
        f"order {cert.order}",
    ]
    for step in cert.steps:
        lines.append(
            f"{render_linear_form(step.form)} | {_render_exponents(step.restriction_exponents)}"
        )
    lines.append(f"= {_render_exponents(cert.final_exponents)}")
    return "\n".join(lines) + "\n"
