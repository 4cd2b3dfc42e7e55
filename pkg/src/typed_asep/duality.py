"""q-special functions and the q-Krawtchouk self-duality function.

For a configuration eta on L sites, eta_i^x in {0, 1} is the number of
species-i particles at site x.  The duality function factorizes over
species and sites:

    D(eta, xi) = prod_i prod_x K_{eta_i^x}(q^{-2 xi_i^x}; p_i^x, 1; q^2),
    p_i^x = alpha_i^{-1} q^{-2(N^-_{x-1}(xi_i) - N^+_{x+1}(eta_i)) + 2x - 2},

with N^- counting particles strictly left of x and N^+ strictly right.
The polynomial degree is eta_i^x and the argument carries xi_i^x.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .asep_generator import (
    AsepParams,
    GeneratorMatrix,
    LOCAL_BASIS,
    lex_basis,
    local_generator,
    multi_site_generator,
    occupation,
)
from .exact_arith import LaurentPoly, RationalFunction, _is_zero, parse_rational
from .matrices import SparseMatrix

__all__ = [
    "NonTerminating",
    "DualityViolated",
    "DualityParams",
    "HeightProfile",
    "height_profile",
    "q_pochhammer",
    "q_hypergeometric_2phi1",
    "q_krawtchouk",
    "duality_value",
    "duality_factors",
    "duality_matrix",
    "duality_symbol_matrix",
    "sample_points",
    "verify_duality",
    "verify_duality_symbolic",
    "duality_residual",
]


class NonTerminating(ValueError):
    pass


class DualityViolated(AssertionError):
    pass


# -- q-special functions ----------------------------------------------------------

def q_pochhammer(a, k: int, q):
    """(a; q)_k = prod_{i<k} (1 - a q^i)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    out = a ** 0 if not isinstance(a, int) else 1
    qi = q ** 0
    for _ in range(k):
        out = out * (1 - a * qi)
        qi = qi * q
    return out


def _first_zero(a, q, max_k: int):
    """Smallest k <= max_k with (a; q)_k = 0, or None."""
    qi = q ** 0
    for i in range(max_k):
        if _is_zero(1 - a * qi):
            return i + 1
        qi = qi * q
    return None


def q_hypergeometric_2phi1(a, b, c, q, z, max_k: int = 64):
    """Terminating 2phi1(a, b; c; q, z).

    The series must hit a zero of (a;q)_k or (b;q)_k no later than the
    first zero of (c;q)_k or (q;q)_k; terms from that index on vanish."""
    zeros = [k for k in (_first_zero(a, q, max_k), _first_zero(b, q, max_k)) if k is not None]
    if not zeros:
        raise NonTerminating(f"no numerator zero within {max_k} terms")
    stop = min(zeros)
    den_zeros = [k for k in (_first_zero(c, q, max_k), _first_zero(q, q, max_k)) if k is not None]
    if den_zeros and min(den_zeros) < stop:
        raise NonTerminating(
            f"denominator vanishes at k = {min(den_zeros)} before the series stops at k = {stop}")
    total = 0
    term = q ** 0
    for k in range(stop):
        total = total + term
        if k + 1 == stop:
            break
        qk = q ** k
        term = term * (1 - a * qk) * (1 - b * qk) * z / ((1 - c * qk) * (1 - q * qk))
    return total


def q_krawtchouk(x_exp, degree: int, p, c, q):
    """K_degree(q^{-x}; p, c; q) with x_exp = q^{-x} and c an integer
    exponent: 2phi1(q^{-x}, q^{-degree}; q^{-c}; q, p q^{degree+1})."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    return q_hypergeometric_2phi1(x_exp, q ** -degree, q ** -c, q, p * q ** (degree + 1),
                                  max_k=degree + 1)


# -- duality function ------------------------------------------------------------

@dataclass(frozen=True)
class DualityParams:
    alpha1: object
    alpha2: object
    q: object
    n: int
    L: int = 2

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "q"):
            v = getattr(self, name)
            if isinstance(v, str):
                v = RationalFunction(LaurentPoly.monomial(1)) if v == "symbolic" else parse_rational(v)
            elif isinstance(v, int):
                v = Fraction(v)
            object.__setattr__(self, name, v)
        if _is_zero(self.alpha1) or _is_zero(self.alpha2):
            raise ValueError("alpha parameters must be nonzero")
        if isinstance(self.q, Fraction) and (self.q <= 0 or self.q == 1):
            raise ValueError("q must be positive and different from 1")
        if self.L < 1:
            raise ValueError("need at least one site")

    @property
    def alphas(self):
        return (self.alpha1, self.alpha2)


@dataclass(frozen=True)
class HeightProfile:
    """left[i][x] = N^-_{x-1}, right[i][x] = N^+_{x+1} for species i+1 and
    0-based site x."""

    occupancy: tuple[tuple[int, ...], tuple[int, ...]]
    left: tuple[tuple[int, ...], tuple[int, ...]]
    right: tuple[tuple[int, ...], tuple[int, ...]]

    def totals(self) -> tuple[int, int]:
        return sum(self.occupancy[0]), sum(self.occupancy[1])


def height_profile(config: Sequence[int]) -> HeightProfile:
    occ = tuple(tuple(occupation(s)[i] for s in config) for i in range(2))
    left, right = [], []
    for row in occ:
        pre, acc = [], 0
        for v in row:
            pre.append(acc)
            acc += v
        post, acc = [], 0
        for v in reversed(row):
            post.append(acc)
            acc += v
        left.append(tuple(pre))
        right.append(tuple(reversed(post)))
    return HeightProfile(occ, tuple(left), tuple(right))


def _exponent(x1: int, xi_prof: HeightProfile, eta_prof: HeightProfile, i: int, x: int) -> int:
    """Exponent j with p_i^x q^2 = q^j / alpha_i (x1 is the 1-based site)."""
    return 2 * x1 - 2 * (xi_prof.left[i][x] - eta_prof.right[i][x])


def duality_factors(eta: Sequence[int], xi: Sequence[int]) -> list[tuple[int, int]]:
    """The (i, j) with D(eta, xi) = prod (1 - q^j / alpha_i): one factor per
    site where both configurations carry a species-i particle."""
    if len(eta) != len(xi):
        raise ValueError("configurations must have equal length")
    pe, px = height_profile(eta), height_profile(xi)
    out = []
    for i in range(2):
        for x in range(len(eta)):
            if pe.occupancy[i][x] and px.occupancy[i][x]:
                out.append((i + 1, _exponent(x + 1, px, pe, i, x)))
    return out


def duality_value(eta: Sequence[int], xi: Sequence[int], params: DualityParams):
    """D(eta, xi) through the q-Krawtchouk product."""
    if len(eta) != len(xi):
        raise ValueError("configurations must have equal length")
    q = params.q
    Q = q * q
    pe, px = height_profile(eta), height_profile(xi)
    out = q ** 0
    for i, alpha in enumerate(params.alphas):
        for x in range(len(eta)):
            deg = pe.occupancy[i][x]
            arg = Q ** (-px.occupancy[i][x])
            p = q ** (_exponent(x + 1, px, pe, i, x) - 2) / alpha
            out = out * q_krawtchouk(arg, deg, p, 1, Q)
    return out


def _default_basis(L: int):
    return list(LOCAL_BASIS) if L == 2 else lex_basis(L)


def duality_matrix(params: DualityParams, basis=None) -> GeneratorMatrix:
    """Matrix with (eta, xi) entry D(eta, xi)."""
    basis = _default_basis(params.L) if basis is None else basis
    q = params.q
    alphas = params.alphas
    # closed form per factor; duality_value is the q-Krawtchouk route
    entries = {}
    for a, eta in enumerate(basis):
        for b, xi in enumerate(basis):
            v = q ** 0
            for i, j in duality_factors(eta, xi):
                v = v * (1 - q ** j / alphas[i - 1])
            entries[(a, b)] = v
    return GeneratorMatrix(basis, entries)


def duality_symbol_matrix(L: int = 2, basis=None) -> list[list[tuple[tuple[int, int], ...]]]:
    """Entries as sorted tuples of (i, j) standing for D_i^j = 1 - q^j/alpha_i."""
    basis = _default_basis(L) if basis is None else basis
    return [[tuple(sorted(duality_factors(eta, xi))) for xi in basis] for eta in basis]


# -- verification ---------------------------------------------------------------

def _random_rational(rng: random.Random, lo: int = 1, hi: int = 9) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(lo, hi))


def sample_points(seed: int, count: int, L: int = 2):
    """Deterministic (q, alpha1, alpha2) triples avoiding degenerate values:
    q not in {0, 1}, alpha_i != q^j for |j| <= 2L + 2."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        q = _random_rational(rng)
        if q == 1:
            continue
        bad = {q ** j for j in range(-2 * L - 2, 2 * L + 3)}
        a1 = _random_rational(rng) * rng.choice((1, -1))
        a2 = _random_rational(rng) * rng.choice((1, -1))
        if a1 in bad or a2 in bad:
            continue
        out.append((q, a1, a2))
    return out


def _generator(n: int, L: int, q, delta: int = 0) -> GeneratorMatrix:
    params = AsepParams(q, n, delta)
    return local_generator(params) if L == 2 else multi_site_generator(params, L)


def duality_residual(gen: GeneratorMatrix, D: SparseMatrix) -> SparseMatrix:
    """L D - D L^T."""
    return gen @ D - D @ gen.transpose()


def _max_entry(R: SparseMatrix):
    best = None
    for k, v in R.entries.items():
        mag = abs(v) if isinstance(v, Fraction) else None
        if best is None or (mag is not None and mag > best[2]):
            best = (k, v, mag if mag is not None else 0)
    return best


def _check_point(args):
    n, L, delta, q, a1, a2 = args
    gen = _generator(n, L, q, delta)
    D = duality_matrix(DualityParams(a1, a2, q, n, L), basis=gen.basis)
    R = duality_residual(gen, D)
    worst = None
    if not R.is_zero():
        (i, j), v, _ = _max_entry(R)
        worst = (gen.basis[i], gen.basis[j], v)
    return {"q": str(q), "alpha1": str(a1), "alpha2": str(a2),
            "nonzero_residuals": len(R.entries), "ok": worst is None}, worst


def verify_duality(n: int, L: int = 2, num_points: int = 5, seed: int = 0, delta: int = 0,
                   raise_on_failure: bool = True, workers: int = 1) -> dict:
    """Check L D = D L^T exactly at pseudorandom rational (q, alpha1, alpha2)."""
    jobs = [(n, L, delta, q, a1, a2) for q, a1, a2 in sample_points(seed, num_points, L)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_check_point, jobs))
    else:
        results = [_check_point(j) for j in jobs]
    report = {"n": n, "L": L, "delta": delta, "seed": seed,
              "points": [r for r, _ in results], "ok": all(w is None for _, w in results)}
    if raise_on_failure:
        for point, worst in results:
            if worst is not None:
                eta, xi, v = worst
                raise DualityViolated(
                    f"residual {v} at ({eta}, {xi}) for q={point['q']}, "
                    f"alpha=({point['alpha1']}, {point['alpha2']}), n={n}, L={L}")
    return report


def verify_duality_symbolic(n: int, L: int = 2, delta: int = 0) -> dict:
    """L D = D L^T with q symbolic.  Each entry is a polynomial of degree
    <= L in each 1/alpha_i, so vanishing on an (L+1) x (L+1) grid of
    alpha values proves the identity for all alpha."""
    q = RationalFunction(LaurentPoly.monomial(1))
    gen = _generator(n, L, "symbolic", delta)
    grid = [Fraction(1, k) for k in range(1, L + 2)]
    checked = 0
    for a1 in grid:
        for a2 in grid:
            D = duality_matrix(DualityParams(a1, a2, q, n, L), basis=gen.basis)
            R = duality_residual(gen, D)
            if not R.is_zero():
                (i, j), v, _ = _max_entry(R)
                raise DualityViolated(
                    f"symbolic residual {v} at ({gen.basis[i]}, {gen.basis[j]}), "
                    f"alpha=({a1}, {a2}), n={n}")
            checked += 1
    return {"n": n, "L": L, "delta": delta, "grid_points": checked, "ok": True}
