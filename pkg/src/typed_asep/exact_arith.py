"""Exact arithmetic in Q, Q[q, 1/q] and Q(q).

``Fraction`` from the standard library plays the role of the arbitrary
precision rational.  Polynomial kernels (multiplication, gcd, exact division)
are delegated to FLINT through ``python-flint``; everything above that
(Laurent shifts, canonical forms, fraction-free elimination) lives here.

A ``LaurentPoly`` is stored as ``q**shift * P(q)`` with ``P(0) != 0``.
A ``RationalFunction`` is stored as ``num / den`` where ``num`` is a
``LaurentPoly`` and ``den`` is a monic polynomial with nonzero constant
term, coprime to ``num``.  Both forms are unique, so ``==`` is structural.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from flint import fmpq, fmpq_poly

__all__ = [
    "BigRational",
    "LaurentPoly",
    "RationalFunction",
    "DivisionByZero",
    "PoleAtPoint",
    "SingularMatrix",
    "Q",
    "R",
    "parse_rational",
    "laurent_arith",
    "ratfunc_arith",
    "evaluate_at",
    "ratfunc_matrix_solve",
    "matrix_rank",
    "nullspace",
    "SymbolicField",
    "NumericField",
]

BigRational = Fraction


class DivisionByZero(ZeroDivisionError):
    pass


class PoleAtPoint(ZeroDivisionError):
    pass


class SingularMatrix(ValueError):
    pass


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or an integer literal. Floats are rejected."""
    if isinstance(text, (Fraction, int)):
        return Fraction(text)
    s = str(text).strip()
    if "." in s or "e" in s.lower():
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(s)


def _to_fmpq(c) -> fmpq:
    if isinstance(c, fmpq):
        return c
    c = Fraction(c)
    return fmpq(c.numerator, c.denominator)


def _to_fraction(c: fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


_ZERO_POLY = fmpq_poly([])
_ONE_POLY = fmpq_poly([1])


def _strip(poly: fmpq_poly, shift: int) -> tuple[fmpq_poly, int]:
    """Move factors of q out of ``poly`` into ``shift``."""
    if poly.is_zero():
        return _ZERO_POLY, 0
    cs = poly.coeffs()
    v = 0
    while cs[v] == 0:
        v += 1
    if v:
        poly = poly.right_shift(v)
    return poly, shift + v


class LaurentPoly:
    """Laurent polynomial in ``q`` with rational coefficients. Immutable."""

    __slots__ = ("_poly", "_shift", "_hash")

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        if not coeffs:
            self._poly, self._shift = _ZERO_POLY, 0
        else:
            lo = min(coeffs)
            dense = [0] * (max(coeffs) - lo + 1)
            for e, c in coeffs.items():
                dense[e - lo] = _to_fmpq(c)
            self._poly, self._shift = _strip(fmpq_poly(dense), lo)
        self._hash = None

    @classmethod
    def _raw(cls, poly: fmpq_poly, shift: int) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._poly, obj._shift = _strip(poly, shift)
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls._raw(fmpq_poly([_to_fmpq(c)]), 0)

    @classmethod
    def monomial(cls, exponent: int, c=1) -> "LaurentPoly":
        return cls._raw(fmpq_poly([_to_fmpq(c)]), exponent)

    @classmethod
    def coerce(cls, x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, (int, Fraction, Rational)):
            return cls.constant(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")

    # -- inspection --------------------------------------------------------
    @property
    def coeffs(self) -> dict[int, Fraction]:
        """Nonzero coefficients keyed by exponent, in ascending order."""
        out = {}
        for i, c in enumerate(self._poly.coeffs()):
            if c != 0:
                out[self._shift + i] = _to_fraction(c)
        return out

    def is_zero(self) -> bool:
        return self._poly.is_zero()

    @property
    def min_exponent(self) -> int:
        return self._shift

    @property
    def max_exponent(self) -> int:
        return self._shift + self._poly.degree()

    def constant_value(self):
        """Return the value if this is a constant, else ``None``."""
        if self.is_zero():
            return Fraction(0)
        if self._shift == 0 and self._poly.degree() == 0:
            return _to_fraction(self._poly.coeffs()[0])
        return None

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        a, b = self, other
        if a._shift > b._shift:
            a, b = b, a
        return LaurentPoly._raw(a._poly + b._poly.left_shift(b._shift - a._shift), a._shift)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(-self._poly, self._shift)

    def __sub__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        try:
            return self + (-LaurentPoly.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return LaurentPoly._raw(self._poly * other._poly, self._shift + other._shift)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if self._poly.degree() == 0:
                return LaurentPoly._raw(fmpq_poly([self._poly.coeffs()[0] ** k]), self._shift * k)
            return RationalFunction(1) / RationalFunction(self) ** (-k)
        return LaurentPoly._raw(self._poly ** k, self._shift * k)

    def __truediv__(self, other):
        return RationalFunction(self) / other

    def __rtruediv__(self, other):
        return RationalFunction(other) / self

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return other == self
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self._shift == other._shift and self._poly == other._poly

    def __hash__(self):
        if self._hash is None:
            c = self.constant_value()
            self._hash = hash(c) if c is not None else hash((self._shift, tuple(self._poly.coeffs())))
        return self._hash

    def __reduce__(self):
        return (LaurentPoly, (self.coeffs,))

    def evaluate(self, q0) -> Fraction:
        q0 = Fraction(q0)
        if q0 == 0 and self._shift < 0:
            raise PoleAtPoint("negative power of q at q = 0")
        val = _to_fraction(self._poly(_to_fmpq(q0)))
        return val * q0 ** self._shift

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        return _format_laurent(self.coeffs)

    def to_json(self) -> dict:
        return {str(e): str(c) for e, c in self.coeffs.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "LaurentPoly":
        return cls({int(e): Fraction(c) for e, c in data.items()})


def _format_laurent(coeffs: Mapping[int, Fraction]) -> str:
    if not coeffs:
        return "0"
    parts = []
    for e in sorted(coeffs, reverse=True):
        c = coeffs[e]
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            mono = "q" if e == 1 else f"q^{e}" if e > 0 else f"q^({e})"
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append(("- " if c < 0 else "+ ") + body)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


Q = LaurentPoly.monomial(1)


class RationalFunction:
    """Element of Q(q) in canonical form. Immutable."""

    __slots__ = ("_num", "_den", "_hash")

    def __init__(self, num=0, den=1):
        num = num if isinstance(num, (LaurentPoly, RationalFunction)) else LaurentPoly.coerce(num)
        den = den if isinstance(den, (LaurentPoly, RationalFunction)) else LaurentPoly.coerce(den)
        if isinstance(num, RationalFunction) or isinstance(den, RationalFunction):
            res = RationalFunction.coerce(num) / RationalFunction.coerce(den)
            self._num, self._den, self._hash = res._num, res._den, None
            return
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        self._num, self._den = RationalFunction._canonical(num._poly, num._shift, den._poly, den._shift)
        self._hash = None

    @staticmethod
    def _canonical(np_: fmpq_poly, ns: int, dp: fmpq_poly, ds: int):
        # dp is assumed already stripped (dp(0) != 0)
        if np_.is_zero():
            return LaurentPoly._raw(_ZERO_POLY, 0), _ONE_POLY
        if dp.degree() > 0:
            g = np_.gcd(dp)
            if not g.is_one():
                np_ = np_ // g
                dp = dp // g
        lc = dp.leading_coefficient()
        if lc != 1:
            np_ = np_ / lc
            dp = dp / lc
        return LaurentPoly._raw(np_, ns - ds), dp

    @classmethod
    def _raw(cls, num: LaurentPoly, den: fmpq_poly) -> "RationalFunction":
        obj = cls.__new__(cls)
        obj._num, obj._den, obj._hash = num, den, None
        return obj

    @classmethod
    def coerce(cls, x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        return cls._raw(LaurentPoly.coerce(x), _ONE_POLY)

    @property
    def num(self) -> LaurentPoly:
        return self._num

    @property
    def den(self) -> LaurentPoly:
        return LaurentPoly._raw(self._den, 0)

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def is_laurent(self) -> bool:
        return self._den.degree() == 0

    def as_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        return self._num

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        try:
            other = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        a, b = self._num, other._num
        if self._den == other._den:
            if self.is_laurent():
                return RationalFunction._raw(a + b, self._den)
            s = a + b
            return RationalFunction._raw_from(s._poly, s._shift, self._den)
        # (a/d1) + (b/d2) over common denominator d1*d2/g
        g = self._den.gcd(other._den)
        d1, d2 = self._den // g, other._den // g
        s = LaurentPoly._raw(a._poly * d2, a._shift) + LaurentPoly._raw(b._poly * d1, b._shift)
        return RationalFunction._raw_from(s._poly, s._shift, self._den * d2)

    __radd__ = __add__

    @classmethod
    def _raw_from(cls, np_: fmpq_poly, ns: int, dp: fmpq_poly) -> "RationalFunction":
        np_, ns = _strip(np_, ns)
        dp, ds = _strip(dp, 0)
        num, den = cls._canonical(np_, ns, dp, ds)
        return cls._raw(num, den)

    def __neg__(self):
        return RationalFunction._raw(-self._num, self._den)

    def __sub__(self, other):
        try:
            return self + (-RationalFunction.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_laurent() and other.is_laurent():
            return RationalFunction._raw(self._num * other._num, _ONE_POLY)
        if self.is_zero() or other.is_zero():
            return RationalFunction._raw(LaurentPoly._raw(_ZERO_POLY, 0), _ONE_POLY)
        a, b = self._num, other._num
        # cross-cancel before multiplying to keep degrees small
        g1 = a._poly.gcd(other._den) if other._den.degree() > 0 and not a.is_zero() else _ONE_POLY
        g2 = b._poly.gcd(self._den) if self._den.degree() > 0 and not b.is_zero() else _ONE_POLY
        np_ = (a._poly // g1) * (b._poly // g2)
        dp = (self._den // g2) * (other._den // g1)
        lc = dp.leading_coefficient()
        if lc != 1:
            np_, dp = np_ / lc, dp / lc
        return RationalFunction._raw(LaurentPoly._raw(np_, a._shift + b._shift), dp)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise DivisionByZero("inverse of the zero function")
        # (q^s P / D)^{-1} = q^{-s} D / P
        p, s = self._num._poly, self._num._shift
        return RationalFunction._raw_from(self._den, -s, p)

    def __truediv__(self, other):
        try:
            other = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("division by the zero function")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction._raw(self._num ** k, self._den ** k)

    def __eq__(self, other):
        try:
            other = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._num) if self.is_laurent() else hash(
                (hash(self._num), tuple(self._den.coeffs())))
        return self._hash

    def __reduce__(self):
        return (_rf_from_parts, (self._num.coeffs, [_to_fraction(c) for c in self._den.coeffs()]))

    def evaluate(self, q0) -> Fraction:
        q0 = Fraction(q0)
        d = _to_fraction(self._den(_to_fmpq(q0)))
        if d == 0:
            raise PoleAtPoint(f"denominator vanishes at q = {q0}")
        return self._num.evaluate(q0) / d

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        if self.is_laurent():
            return str(self._num)
        return f"({self._num}) / ({self.den})"

    def to_json(self) -> dict:
        return {"num": self._num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data) -> "RationalFunction":
        return cls(LaurentPoly.from_json(data["num"]), LaurentPoly.from_json(data["den"]))


def _rf_from_parts(num_coeffs, den_coeffs):
    return RationalFunction(LaurentPoly(num_coeffs), LaurentPoly(dict(enumerate(den_coeffs))))


R = RationalFunction(LaurentPoly({1: 1, -1: -1}))  # q - 1/q


# -- operation wrappers -------------------------------------------

def laurent_arith(a: LaurentPoly, b: LaurentPoly, op: str) -> LaurentPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def ratfunc_arith(a, b, op: str) -> RationalFunction:
    a, b = RationalFunction.coerce(a), RationalFunction.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def evaluate_at(f, q0) -> Fraction:
    if isinstance(f, (int, Fraction)):
        return Fraction(f)
    return f.evaluate(q0)


# -- linear algebra ----------------------------------------------------------

def _is_zero(x) -> bool:
    return x.is_zero() if hasattr(x, "is_zero") else x == 0


def _poly_rows(M: Sequence[Sequence], rhs: Sequence | None):
    """Scale each row of [M | rhs] by a Laurent unit times a polynomial so
    every entry becomes a polynomial in q (fmpq_poly)."""
    rows = []
    for i, row in enumerate(M):
        full = list(row) + ([rhs[i]] if rhs is not None else [])
        full = [RationalFunction.coerce(x) for x in full]
        den = _ONE_POLY
        lo = 0
        for x in full:
            if not x.is_zero():
                den = den * (x._den // den.gcd(x._den))
                lo = min(lo, x._num._shift)
        out = []
        for x in full:
            if x.is_zero():
                out.append(_ZERO_POLY)
            else:
                p = x._num._poly * (den // x._den)
                out.append(p.left_shift(x._num._shift - lo))
        rows.append(out)
    return rows


def _bareiss(rows: list[list], ncols: int):
    """In-place fraction-free elimination. Returns (pivot columns, row order sign)."""
    m = len(rows)
    prev = _ONE_POLY
    pivots = []
    r = 0
    sign = 1
    for c in range(ncols):
        piv = next((i for i in range(r, m) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            sign = -sign
        pr = rows[r]
        pc = pr[c]
        width = len(pr)
        for i in range(r + 1, m):
            row = rows[i]
            a = row[c]
            if a.is_zero():
                for j in range(c + 1, width):
                    if not row[j].is_zero():
                        row[j] = (row[j] * pc) // prev
            else:
                for j in range(c + 1, width):
                    row[j] = (row[j] * pc - a * pr[j]) // prev
            row[c] = _ZERO_POLY
        prev = pc
        pivots.append(c)
        r += 1
        if r == m:
            break
    return pivots, sign


def ratfunc_matrix_solve(M: Sequence[Sequence], rhs: Sequence) -> list[RationalFunction]:
    """Solve ``M x = rhs`` exactly over Q(q) by Bareiss elimination.

    Entries may be ints, Fractions, LaurentPolys or RationalFunctions.
    """
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix must be square")
    if n == 0:
        return []
    rows = _poly_rows(M, rhs)
    pivots, _ = _bareiss(rows, n)
    if len(pivots) < n:
        raise SingularMatrix(f"rank {len(pivots)} < {n}")
    det = rows[n - 1][n - 1]
    # fraction-free back substitution: X_i = det * x_i is a polynomial
    X = [None] * n
    for i in range(n - 1, -1, -1):
        acc = det * rows[i][n]
        for j in range(i + 1, n):
            if not rows[i][j].is_zero():
                acc = acc - rows[i][j] * X[j]
        X[i] = acc // rows[i][i]
    return [RationalFunction._raw_from(x, 0, det) if not x.is_zero() else RationalFunction(0)
            for x in X]


def _gauss_jordan(M: Sequence[Sequence]):
    """Reduced row echelon form over whatever field the entries live in."""
    A = [list(row) for row in M]
    m = len(A)
    ncols = len(A[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, m) if not _is_zero(A[i][c])), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c] if not isinstance(A[r][c], int) else Fraction(1, A[r][c])
        A[r] = [x * inv for x in A[r]]
        for i in range(m):
            if i != r and not _is_zero(A[i][c]):
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def matrix_rank(M: Sequence[Sequence]) -> int:
    if not M:
        return 0
    if all(isinstance(x, (int, Fraction)) for row in M for x in row):
        _, piv = _gauss_jordan([[Fraction(x) for x in row] for row in M])
        return len(piv)
    rows = _poly_rows(M, None)
    pivots, _ = _bareiss(rows, len(M[0]))
    return len(pivots)


def nullspace(M: Sequence[Sequence]) -> list[list]:
    """Basis of the right kernel, one vector per free column, with a 1 in
    that free column."""
    if not M:
        return []
    ncols = len(M[0])
    numeric = all(isinstance(x, (int, Fraction)) for row in M for x in row)
    conv = Fraction if numeric else RationalFunction.coerce
    A, pivots = _gauss_jordan([[conv(x) for x in row] for row in M])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [conv(0)] * ncols
        v[f] = conv(1)
        for r, pc in enumerate(pivots):
            v[pc] = -A[r][f]
        basis.append(v)
    return basis


# -- evaluation domains --------------------------------------------------------

class SymbolicField:
    """Values are RationalFunctions in the indeterminate q."""

    symbolic = True
    q0 = None

    def __repr__(self):
        return "SymbolicField()"

    @property
    def zero(self):
        return RationalFunction(0)

    @property
    def one(self):
        return RationalFunction(1)

    @property
    def q(self):
        return RationalFunction(Q)

    def q_pow(self, k: int):
        return RationalFunction._raw(LaurentPoly.monomial(k), _ONE_POLY)

    def from_int_laurent(self, d: Mapping[int, int]):
        return RationalFunction.coerce(LaurentPoly(d)) if d else self.zero

    def convert(self, x):
        return RationalFunction.coerce(x)

    def solve(self, M, rhs):
        return ratfunc_matrix_solve(M, rhs)

    def __eq__(self, other):
        return isinstance(other, SymbolicField)

    def __hash__(self):
        return hash("symbolic")


class NumericField:
    """Values are Fractions: everything evaluated at a fixed rational q0."""

    symbolic = False

    def __init__(self, q0):
        q0 = parse_rational(q0)
        if q0 == 0:
            raise ValueError("q0 must be nonzero")
        self.q0 = q0
        self._pows: dict[int, Fraction] = {}

    def __repr__(self):
        return f"NumericField({self.q0})"

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    @property
    def q(self):
        return self.q0

    def q_pow(self, k: int) -> Fraction:
        v = self._pows.get(k)
        if v is None:
            v = self._pows[k] = self.q0 ** k
        return v

    def from_int_laurent(self, d: Mapping[int, int]) -> Fraction:
        return sum((c * self.q_pow(e) for e, c in d.items()), Fraction(0))

    def convert(self, x):
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        return x.evaluate(self.q0)

    def solve(self, M, rhs):
        n = len(M)
        A = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(M)]
        R_, piv = _gauss_jordan(A)
        if piv[:n] != list(range(n)) or len(piv) > n:
            raise SingularMatrix(f"singular at q = {self.q0}")
        return [R_[i][n] for i in range(n)]

    def __eq__(self, other):
        return isinstance(other, NumericField) and other.q0 == self.q0

    def __hash__(self):
        return hash(("numeric", self.q0))


def as_field(mode) -> SymbolicField | NumericField:
    """Accept "symbolic", a rational q0, or an existing field."""
    if isinstance(mode, (SymbolicField, NumericField)):
        return mode
    if mode is None or mode == "symbolic":
        return SymbolicField()
    return NumericField(mode)


def iter_nonzero(values: Iterable) -> bool:
    return any(not _is_zero(v) for v in values)
