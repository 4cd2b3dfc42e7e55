"""Static data for so(2n): Cartan matrix, roots, weights and the fundamental
representation.

Coordinates of C^{2n} are numbered 1..2n as in the matrix formulas.  The
weight-ordered vectors v_1..v_{2n} sit on coordinates 1..n followed by
2n, 2n-1, ..., n+1.  Internally everything is 0-based; the public helpers
that mirror the usual 1-based notation say so in their names or docstrings.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .exact_arith import LaurentPoly, RationalFunction

__all__ = [
    "NotInRootLattice",
    "WeightLabel",
    "check_rank",
    "cartan_entry",
    "cartan_matrix",
    "simple_roots",
    "positive_roots",
    "root_pairing",
    "fundamental_matrices",
    "FundamentalRep",
    "fundamental_rep",
    "weight_vector",
    "weight_of_vector",
    "coordinate_weight",
    "all_weights",
    "rho_exponent",
    "rho_factor",
    "mu_lambda_exponent",
    "mu_lambda_factor",
    "cartan_exponents",
    "weight_space_dimension",
]


class NotInRootLattice(ValueError):
    pass


def check_rank(n: int) -> int:
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"so(2n) needs an integer n >= 2, got {n!r}")
    return n


@dataclass(frozen=True, order=False)
class WeightLabel:
    """The weight ``sign * L_index`` of the fundamental representation."""

    index: int
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1) or self.index < 1:
            raise ValueError(f"bad weight label {self.index}, {self.sign}")

    def position(self, n: int) -> int:
        """1-based position in L_1 > ... > L_n > -L_n > ... > -L_1."""
        return self.index if self.sign > 0 else 2 * n + 1 - self.index

    def vector(self, n: int) -> tuple[int, ...]:
        v = [0] * n
        v[self.index - 1] = self.sign
        return tuple(v)

    def __neg__(self):
        return WeightLabel(self.index, -self.sign)

    def __str__(self):
        return ("+" if self.sign > 0 else "-") + f"L{self.index}"

    @classmethod
    def parse(cls, text: str) -> "WeightLabel":
        s = text.strip()
        sign = -1 if s.startswith("-") else 1
        s = s.lstrip("+-")
        if not s.startswith("L"):
            raise ValueError(f"cannot parse weight {text!r}")
        return cls(int(s[1:]), sign)


def cartan_entry(i: int, j: int, n: int) -> int:
    if i == j:
        return 2
    if {i, j} == {n - 2, n} and n >= 3:
        return -1
    if abs(i - j) == 1 and min(i, j) <= n - 2:
        return -1
    return 0


@lru_cache(maxsize=None)
def cartan_matrix(n: int) -> tuple[tuple[int, ...], ...]:
    check_rank(n)
    return tuple(tuple(cartan_entry(i, j, n) for j in range(1, n + 1)) for i in range(1, n + 1))


@lru_cache(maxsize=None)
def simple_roots(n: int) -> tuple[tuple[int, ...], ...]:
    """alpha_i = L_i - L_{i+1} (i < n), alpha_n = L_{n-1} + L_n, in the L-basis."""
    check_rank(n)
    roots = []
    for i in range(n - 1):
        v = [0] * n
        v[i], v[i + 1] = 1, -1
        roots.append(tuple(v))
    v = [0] * n
    v[n - 2], v[n - 1] = 1, 1
    roots.append(tuple(v))
    return tuple(roots)


@lru_cache(maxsize=None)
def positive_roots(n: int) -> tuple[tuple[int, ...], ...]:
    """L_i - L_j and L_i + L_j for i < j, in the L-basis."""
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            for s in (-1, 1):
                v = [0] * n
                v[i], v[j] = 1, s
                out.append(tuple(v))
    return tuple(out)


def root_pairing(a: Sequence[int], b: Sequence[int], n: int) -> int:
    """(sum a_i alpha_i, sum b_j alpha_j) for exponent vectors a, b."""
    A = cartan_matrix(n)
    return sum(a[i] * A[i][j] * b[j] for i in range(n) if a[i] for j in range(n) if b[j])


def _unit(i: int, j: int):
    return (i - 1, j - 1)


def fundamental_matrices(n: int) -> dict[str, dict]:
    """E_i, F_i, H_i as sparse integer matrices ``{(row, col): value}``
    (0-based), and K_i as diagonal matrices over Q(q), keyed ``"E1"``, ...
    """
    check_rank(n)
    mats: dict[str, dict] = {}
    for i in range(1, n):
        mats[f"E{i}"] = {_unit(i, i + 1): 1, _unit(n + i + 1, n + i): -1}
        mats[f"F{i}"] = {_unit(i + 1, i): 1, _unit(n + i, n + i + 1): -1}
        mats[f"H{i}"] = {_unit(i, i): 1, _unit(i + 1, i + 1): -1,
                         _unit(n + i, n + i): -1, _unit(n + i + 1, n + i + 1): 1}
    mats[f"E{n}"] = {_unit(n - 1, 2 * n): 1, _unit(n, 2 * n - 1): -1}
    mats[f"F{n}"] = {_unit(2 * n - 1, n): 1, _unit(2 * n, n - 1): -1}
    mats[f"H{n}"] = {_unit(n - 1, n - 1): 1, _unit(n, n): 1,
                     _unit(2 * n - 1, 2 * n - 1): -1, _unit(2 * n, 2 * n): -1}
    q = RationalFunction(LaurentPoly.monomial(1))
    for i in range(1, n + 1):
        h = mats[f"H{i}"]
        mats[f"K{i}"] = {(c, c): q ** h.get((c, c), 0) for c in range(2 * n)}
    return mats


@dataclass(frozen=True)
class FundamentalRep:
    """Monomial form of the generators acting on coordinates 0..2n-1.

    ``raise_[i][c]`` is ``(row, sign)`` with E_{i+1} e_c = sign * e_row, or
    absent when E_{i+1} e_c = 0; ``lower_`` likewise for F.  ``h[i][c]`` is
    the diagonal entry of H_{i+1}.
    """

    n: int
    raise_: tuple[Mapping[int, tuple[int, int]], ...]
    lower_: tuple[Mapping[int, tuple[int, int]], ...]
    h: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return 2 * self.n


@lru_cache(maxsize=None)
def fundamental_rep(n: int) -> FundamentalRep:
    mats = fundamental_matrices(n)
    raise_, lower_, h = [], [], []
    for i in range(1, n + 1):
        raise_.append({c: (r, s) for (r, c), s in mats[f"E{i}"].items()})
        lower_.append({c: (r, s) for (r, c), s in mats[f"F{i}"].items()})
        h.append(tuple(mats[f"H{i}"].get((c, c), 0) for c in range(2 * n)))
    return FundamentalRep(n, tuple(raise_), tuple(lower_), tuple(h))


def weight_vector(k: int, n: int) -> tuple[int, ...]:
    """v_k as a 0/1 tuple of length 2n."""
    if not 1 <= k <= 2 * n:
        raise ValueError(f"k must lie in 1..{2 * n}")
    coord = k if k <= n else 3 * n + 1 - k
    return tuple(1 if c == coord else 0 for c in range(1, 2 * n + 1))


def vector_coordinate(k: int, n: int) -> int:
    """0-based coordinate carrying v_k."""
    return (k if k <= n else 3 * n + 1 - k) - 1


def weight_of_vector(k: int, n: int) -> WeightLabel:
    if not 1 <= k <= 2 * n:
        raise ValueError(f"k must lie in 1..{2 * n}")
    return WeightLabel(k, 1) if k <= n else WeightLabel(2 * n + 1 - k, -1)


def coordinate_weight(c: int, n: int) -> WeightLabel:
    """Weight of the 0-based coordinate vector e_{c+1}."""
    return WeightLabel(c + 1, 1) if c < n else WeightLabel(c + 1 - n, -1)


def all_weights(n: int) -> list[WeightLabel]:
    """Weights in decreasing order L_1 > ... > -L_1."""
    return [weight_of_vector(k, n) for k in range(1, 2 * n + 1)]


def rho_exponent(mu: WeightLabel, n: int) -> int:
    """Exponent of q^{(-2 rho, mu)}."""
    i = mu.index
    return 2 * i - 2 * n if mu.sign > 0 else 2 * n - 2 * i


def rho_factor(mu: WeightLabel, n: int) -> RationalFunction:
    return RationalFunction(LaurentPoly.monomial(rho_exponent(mu, n)))


def mu_lambda_exponent(mu: WeightLabel, lam: WeightLabel) -> int:
    """Exponent of q^{(mu - lambda, mu)} for fundamental weights."""
    if lam == mu:
        return 0
    if lam == -mu:
        return 2
    return 1


def mu_lambda_factor(mu: WeightLabel, lam: WeightLabel) -> RationalFunction:
    return RationalFunction(LaurentPoly.monomial(mu_lambda_exponent(mu, lam)))


def _as_L_vector(w, n: int) -> tuple[int, ...]:
    if isinstance(w, WeightLabel):
        return w.vector(n)
    if isinstance(w, Mapping):
        v = [0] * n
        for i, c in w.items():
            v[i - 1] += c
        return tuple(v)
    w = tuple(w)
    if len(w) != n:
        raise ValueError(f"expected a length-{n} vector in the L-basis")
    return w


def cartan_exponents(w, n: int) -> tuple[int, ...]:
    """Integer c with H_w = sum_k c_k H_k, i.e. w = sum_k c_k alpha_k.

    ``w`` is a length-n coefficient vector in the L-basis, a mapping
    ``{i: coeff}`` over L_i (1-based), or a WeightLabel.
    """
    check_rank(n)
    w = _as_L_vector(w, n)
    # alpha_k = L_k - L_{k+1} (k < n-1), alpha_{n-1} = L_{n-1} - L_n,
    # alpha_n = L_{n-1} + L_n; solve from the last coordinates upward.
    # coefficient of L_j is c_j - c_{j-1} for j < n-1; the last two
    # coordinates give c_{n-1} + c_n = w_{n-1} + c_{n-2}, c_n - c_{n-1} = w_n
    c = [Fraction(0)] * n
    c[0] = Fraction(w[0])
    for j in range(1, n - 2):
        c[j] = w[j] + c[j - 1]
    s = w[n - 2] + (c[n - 3] if n >= 3 else 0)
    c[n - 1] = Fraction(s + w[n - 1], 2)
    c[n - 2] = Fraction(s - w[n - 1], 2)
    if any(x.denominator != 1 for x in c):
        raise NotInRootLattice(f"{w} is not in the root lattice of D{n}")
    out = tuple(int(x) for x in c)
    roots = simple_roots(n)
    check = tuple(sum(out[k] * roots[k][j] for k in range(n)) for j in range(n))
    if check != w:  # pragma: no cover - algebra above is exact
        raise NotInRootLattice(f"{w} is not in the root lattice of D{n}")
    return out


@lru_cache(maxsize=None)
def weight_space_dimension(nu: tuple[int, ...], n: int) -> int:
    """Kostant partition function: number of ways to write nu (simple-root
    coordinates) as a sum of positive roots.  Equals dim U_q(n+)_nu."""
    pos = []
    for r in positive_roots(n):
        pos.append(cartan_exponents(r, n))
    pos.sort()

    @lru_cache(maxsize=None)
    def count(rem: tuple[int, ...], k: int) -> int:
        if not any(rem):
            return 1
        if k == len(pos):
            return 0
        total = 0
        cur = rem
        while all(x >= 0 for x in cur):
            total += count(cur, k + 1)
            cur = tuple(a - b for a, b in zip(cur, pos[k]))
        return total

    return count(tuple(nu), 0)
