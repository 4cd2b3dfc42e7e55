"""Central element of U_q(so(2n)) built from dual bases of weight spaces.

For every pair of fundamental weights mu >= lambda joined by a chain of
raising operators we take

    q^{(mu - lambda, mu)} q^{(-2 rho, mu)} e*_{mu lambda} K_{-mu-lambda} f*_{lambda mu}

where e* (an F-word combination) is dual to the path word e_{mu lambda}
inside a basis of its weight space, and f* (an E-word combination) is dual
to the reversed F-path.  The sum over pairs is central.

The element is kept factored (one :class:`CentralTerm` per weight pair):
evaluating the factored form costs one pass over each dual element instead
of one pass per product word.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .exact_arith import (
    RationalFunction,
    SingularMatrix,
    as_field,
)
from .lie_data import (
    WeightLabel,
    all_weights,
    cartan_exponents,
    cartan_matrix,
    check_rank,
    coordinate_weight,
    fundamental_rep,
    mu_lambda_exponent,
    rho_exponent,
    vector_coordinate,
    weight_space_dimension,
)
from .matrices import SparseMatrix
from .uq_algebra import (
    AlgebraElement,
    E,
    F,
    GenSymbol,
    K,
    evaluate,
    reduced_pairing,
    tensor_word_action,
    word_action,
)

log = logging.getLogger(__name__)

__all__ = [
    "SingularAfterExhaustion",
    "NotScalar",
    "WeightPair",
    "DualElementResult",
    "CentralTerm",
    "CentralElement",
    "path_words",
    "permutation_span",
    "dual_elements",
    "assemble_central",
    "contributing_pairs",
    "verify_scalar_action",
    "verify_centrality",
    "rep_matrix",
    "tensor_matrix",
]


class SingularAfterExhaustion(RuntimeError):
    pass


class NotScalar(ValueError):
    pass


@dataclass(frozen=True)
class WeightPair:
    mu: WeightLabel
    lam: WeightLabel

    def check(self, n: int):
        if self.mu.position(n) > self.lam.position(n):
            raise ValueError(f"need mu >= lambda, got {self.mu} < {self.lam}")

    def __str__(self):
        return f"({self.mu}, {self.lam})"


# -- path words -------------------------------------------------------------------

def _raising_paths(start: int, goal: int, n: int) -> list[list[tuple[int, int, int]]]:
    """All chains of raising operators from coordinate ``start`` to ``goal``;
    each step is (generator index, new coordinate, sign)."""
    rep = fundamental_rep(n)
    out = []

    def walk(c, acc):
        if c == goal:
            out.append(list(acc))
            return
        for i in range(n):
            hit = rep.raise_[i].get(c)
            if hit is not None:
                acc.append((i + 1, hit[0], hit[1]))
                walk(hit[0], acc)
                acc.pop()

    walk(start, [])
    return out


def _path(mu: WeightLabel, lam: WeightLabel, n: int, route: str = "upper"):
    """(sign_e, E indices, sign_f, F indices) or None.  At the fork the
    "upper" route passes through v_n, the "lower" one through v_{n+1}."""
    if route not in ("upper", "lower"):
        raise ValueError(f"route must be 'upper' or 'lower', got {route!r}")
    WeightPair(mu, lam).check(n)
    if mu == lam:
        return 1, (), 1, ()
    start = vector_coordinate(lam.position(n), n)
    goal = vector_coordinate(mu.position(n), n)
    paths = _raising_paths(start, goal, n)
    if not paths:
        return None
    via = n - 1 if route == "upper" else n  # coordinate of v_n or v_{n+1}
    paths.sort(key=lambda p: 0 if any(c == via for _, c, _ in p) else 1)
    steps = paths[0]
    e_idx = tuple(i for i, _, _ in reversed(steps))
    sign_e = 1
    for _, _, s in steps:
        sign_e *= s
    f_idx = tuple(reversed(e_idx))
    _, sign_f, _ = _apply_indices("F", f_idx, goal, n)
    return sign_e, e_idx, sign_f, f_idx


def _apply_indices(kind: str, idx: Sequence[int], c: int, n: int):
    act = word_action(E(*idx) if kind == "E" else F(*idx), n)
    row, sign, ex = act[c]
    return row, sign, ex


def path_words(mu: WeightLabel, lam: WeightLabel, n: int, route: str = "upper"):
    """Signed path words (e_{mu lambda}, f_{lambda mu}) or None."""
    check_rank(n)
    found = _path(mu, lam, n, route)
    if found is None:
        return None
    se, ei, sf, fi = found
    return AlgebraElement.from_word(E(*ei), se), AlgebraElement.from_word(F(*fi), sf)


def _multiset_perms(items: Sequence[int]):
    """Distinct permutations in lexicographic order."""
    a = sorted(items)
    k = len(a)
    while True:
        yield tuple(a)
        i = k - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = k - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1:] = reversed(a[i + 1:])


def _index_span(idx: tuple[int, ...]):
    yield idx
    for w in _multiset_perms(idx):
        if w != idx:
            yield w


def permutation_span(word) -> list:
    """All distinct rearrangements of an E-word: the word itself first,
    then the others in lexicographic order of their indices."""
    if isinstance(word, AlgebraElement):
        if len(word) != 1:
            raise ValueError("expected a single word")
        (word,) = word.terms
    if any(s.kind != "E" for s in word):
        raise ValueError("permutation_span expects an E-word")
    idx = tuple(s.index for s in word)
    return [E(*w) for w in _index_span(idx)]


# -- greedy basis ---------------------------------------------------------------------
#
# Basis selection only needs ranks, so it runs over Z/p at a fixed probe
# value of q.  A matrix singular over Q(q) stays singular under any
# specialization, so a word accepted here is never a dependent one; the
# exact solve afterwards confirms invertibility in the requested field.

_PRIME = 67108859  # < 2^26: products and 75-term dot products fit in int64
_PROBE = 1234567


@lru_cache(maxsize=None)
def _mod_pairing_table(n: int):
    cache: dict = {}
    A = cartan_matrix(n)
    qp = {}

    def qpow(e):
        v = qp.get(e)
        if v is None:
            v = qp[e] = pow(_PROBE if e >= 0 else pow(_PROBE, -1, _PRIME), abs(e), _PRIME)
        return v

    def pair(I: tuple, J: tuple) -> int:
        if not I:
            return 1
        key = (I, J)
        hit = cache.get(key)
        if hit is not None:
            return hit
        j = J[-1] - 1
        rest = J[:-1]
        tail = 0
        total = 0
        for p in range(len(I) - 1, -1, -1):
            if I[p] - 1 == j:
                total += qpow(tail) * pair(I[:p] + I[p + 1:], rest)
            tail += A[j][I[p] - 1]
        total %= _PRIME
        cache[key] = total
        return total

    return pair


@lru_cache(maxsize=None)
def _select_basis(first: tuple, target: int, n: int) -> tuple:
    """Greedily extend [first] by words from its permutation span while the
    pairing matrix stays invertible at the probe point."""
    p = _PRIME
    m = _mod_pairing_table(n)
    d0 = m(first, first)
    if d0 == 0:
        raise SingularAfterExhaustion(f"<F_w, E_w> vanishes for w = {first}")
    chosen = [first]
    B = np.array([[pow(d0, -1, p)]], dtype=np.int64)
    for w in _index_span(first):
        if len(chosen) == target:
            break
        if w == first:
            continue
        u = np.array([m(s, w) for s in chosen], dtype=np.int64)  # column M(S, w)
        v = np.array([m(w, s) for s in chosen], dtype=np.int64)  # row M(w, S)
        Bu = (B @ u) % p
        s = (m(w, w) - int((v @ Bu) % p)) % p
        if s == 0:
            continue
        vB = (v @ B) % p
        sinv = pow(s, -1, p)
        corr = (np.outer(Bu, vB) % p) * sinv % p
        size = len(chosen)
        newB = np.empty((size + 1, size + 1), dtype=np.int64)
        newB[:size, :size] = (B + corr) % p
        newB[:size, size] = (-Bu * sinv) % p
        newB[size, :size] = (-vB * sinv) % p
        newB[size, size] = sinv
        B = newB
        chosen.append(w)
    if len(chosen) != target:
        raise SingularAfterExhaustion(
            f"found {len(chosen)} independent words for {first}, weight space has dimension {target}")
    return tuple(chosen)


# -- dual elements ---------------------------------------------------------------

@dataclass
class DualElementResult:
    pair: WeightPair
    e_star: AlgebraElement
    f_star: AlgebraElement
    basis_size: int
    pairing_matrix: list
    e_basis: list = dc_field(default_factory=list)
    f_basis: list = dc_field(default_factory=list)
    e_sign: int = 1
    f_sign: int = 1


def _solve_dual(words: list, n: int, fld, transpose: bool):
    """Solve P^T y = e_1 (transpose=True) or P z = e_1 over the field, where
    P is the reduced pairing matrix P_{kj} = <F_{w_k}, E_{w_j}> / c^k."""
    m = len(words)
    P = [[fld.from_int_laurent(reduced_pairing(a, b, n)) for b in words] for a in words]
    A = [[P[j][i] for j in range(m)] for i in range(m)] if transpose else P
    rhs = [fld.one] + [fld.zero] * (m - 1)
    try:
        sol = fld.solve(A, rhs)
    except SingularMatrix as exc:
        raise SingularAfterExhaustion(f"pairing matrix singular over {fld}: {exc}") from exc
    return P, sol


def dual_elements(pair: WeightPair, n: int, mode="symbolic", _basis=None,
                  route: str = "upper") -> DualElementResult:
    """Dual elements e*_{mu lambda} (F-words) and f*_{lambda mu} (E-words)."""
    check_rank(n)
    fld = as_field(mode)
    found = _path(pair.mu, pair.lam, n, route)
    if found is None:
        raise ValueError(f"no raising path for {pair}")
    se, ei, sf, fi = found
    if not ei:
        one = AlgebraElement.one(fld.one)
        return DualElementResult(pair, one, one, 1, [[fld.one]], [()], [()], 1, 1)
    k = len(ei)
    nu = tuple(ei.count(i) for i in range(1, n + 1))
    target = weight_space_dimension(nu, n)
    if _basis is not None:
        e_words, f_words = _basis
    else:
        e_words = list(_select_basis(ei, target, n))
        f_words = list(_select_basis(fi, target, n))
    # <F_I, E_J> = c^k P_{IJ}, c = -1/r, so dividing by c^k multiplies by (-r)^k
    r = fld.q - fld.one / fld.q
    scale = (-r) ** k
    P, y = _solve_dual(e_words, n, fld, transpose=True)
    _, z = _solve_dual(f_words, n, fld, transpose=False)
    e_star = AlgebraElement({F(*w): scale * se * c for w, c in zip(e_words, y)})
    f_star = AlgebraElement({E(*w): scale * sf * c for w, c in zip(f_words, z)})
    cpow = (-fld.one / r) ** k
    M = [[cpow * x for x in row] for row in P]
    return DualElementResult(pair, e_star, f_star, len(e_words), M,
                             e_words, f_words, se, sf)


# -- assembly --------------------------------------------------------------------

@dataclass
class CentralTerm:
    pair: WeightPair
    q_exponent: int
    e_star: AlgebraElement
    k_exponents: tuple[int, ...]
    f_star: AlgebraElement

    def expand(self, fld) -> AlgebraElement:
        kw = K(self.k_exponents)
        qf = fld.q_pow(self.q_exponent)
        out: dict = {}
        for w1, c1 in self.e_star.terms.items():
            for w2, c2 in self.f_star.terms.items():
                w = w1 + kw + w2
                v = qf * c1 * c2
                out[w] = out[w] + v if w in out else v
        return AlgebraElement(out)


class CentralElement(AlgebraElement):
    """The assembled central element, stored factored by weight pair.
    ``terms`` expands lazily into words."""

    __slots__ = ("n", "field", "factors", "_expanded")

    def __init__(self, n: int, fld, factors: list[CentralTerm]):
        self.n = n
        self.field = fld
        self.factors = factors
        self._expanded = None
        self._terms = None

    @property
    def terms(self) -> dict:
        if self._expanded is None:
            total = AlgebraElement()
            for t in self.factors:
                total = total + t.expand(self.field)
            self._expanded = total.terms
        return self._expanded

    def term(self, mu: WeightLabel, lam: WeightLabel) -> CentralTerm | None:
        for t in self.factors:
            if t.pair == WeightPair(mu, lam):
                return t
        return None


def contributing_pairs(n: int) -> list[WeightPair]:
    ws = all_weights(n)
    out = []
    for a, mu in enumerate(ws):
        for lam in ws[a:]:
            if _path(mu, lam, n) is not None:
                out.append(WeightPair(mu, lam))
    return out


def _term_for(args) -> CentralTerm:
    pair, n, mode = args
    fld = as_field(mode)
    res = dual_elements(pair, n, fld)
    mu, lam = pair.mu, pair.lam
    ex = mu_lambda_exponent(mu, lam) + rho_exponent(mu, n)
    w = [0] * n
    w[mu.index - 1] -= mu.sign
    w[lam.index - 1] -= lam.sign
    return CentralTerm(pair, ex, res.e_star, cartan_exponents(tuple(w), n), res.f_star)


def assemble_central(n: int, mode="symbolic", workers: int = 1) -> CentralElement:
    check_rank(n)
    fld = as_field(mode)
    pairs = contributing_pairs(n)
    jobs = [(p, n, fld) for p in pairs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            terms = list(pool.map(_term_for, jobs))
    else:
        terms = [_term_for(j) for j in jobs]
    log.debug("assembled %d weight-pair terms for n=%d", len(terms), n)
    return CentralElement(n, fld, terms)


# -- evaluation -----------------------------------------------------------------

def _combo_matrix(x: AlgebraElement, n: int, fld, tensor: bool) -> SparseMatrix:
    """Matrix of a linear combination of words (tensor: (rho x rho) Delta)."""
    dim = 2 * n
    if not tensor:
        acc: dict = {}
        for w, c in x.terms.items():
            cc = fld.convert(c)
            for col, (row, sign, ex) in word_action(w, n).items():
                v = cc * fld.q_pow(ex) * sign
                acc[(row, col)] = acc[(row, col)] + v if (row, col) in acc else v
        return SparseMatrix(dim, acc)
    acc = {}
    for w, c in x.terms.items():
        cc = fld.convert(c)
        for col, rows in tensor_word_action(w, n).items():
            for row, lp in rows.items():
                v = cc * fld.from_int_laurent(lp)
                acc[(row, col)] = acc[(row, col)] + v if (row, col) in acc else v
    return SparseMatrix(dim * dim, acc)


def _diag_k(exps, n: int, fld, tensor: bool) -> SparseMatrix:
    h = fundamental_rep(n).h
    d = 2 * n
    wt = [sum(exps[i] * h[i][c] for i in range(n)) for c in range(d)]
    if not tensor:
        return SparseMatrix(d, {(c, c): fld.q_pow(wt[c]) for c in range(d)})
    return SparseMatrix(d * d, {(a * d + b, a * d + b): fld.q_pow(wt[a] + wt[b])
                                for a in range(d) for b in range(d)})


def _factored_matrix(C: CentralElement, fld, tensor: bool) -> SparseMatrix:
    n = C.n
    dim = (2 * n) ** (2 if tensor else 1)
    total = SparseMatrix(dim)
    for t in C.factors:
        Y = _combo_matrix(t.e_star, n, fld, tensor)
        Z = _combo_matrix(t.f_star, n, fld, tensor)
        Kd = _diag_k(t.k_exponents, n, fld, tensor)
        total = total + (Y @ Kd @ Z).scale(fld.q_pow(t.q_exponent))
    return total


def _field_for(C, field):
    if field is None:
        return C.field if isinstance(C, CentralElement) else as_field("symbolic")
    return as_field(field)


def rep_matrix(C: AlgebraElement, n: int, field=None) -> SparseMatrix:
    fld = _field_for(C, field)
    if isinstance(C, CentralElement) and C.field == fld:
        return _factored_matrix(C, fld, tensor=False)
    return _combo_matrix(C, n, fld, tensor=False)


def tensor_matrix(C: AlgebraElement, n: int, field=None) -> SparseMatrix:
    """(rho x rho)(Delta(C))."""
    fld = _field_for(C, field)
    if isinstance(C, CentralElement) and C.field == fld:
        return _factored_matrix(C, fld, tensor=True)
    return _combo_matrix(C, n, fld, tensor=True)


def verify_scalar_action(C: AlgebraElement, n: int, field=None):
    """Return s if rho(C) = s * Id exactly, else raise NotScalar."""
    check_rank(n)
    fld = _field_for(C, field)
    M = rep_matrix(C, n, fld)
    d = 2 * n
    s = M.get(0, 0, fld.zero)
    for (i, j), v in M.entries.items():
        if i != j:
            raise NotScalar(f"off-diagonal entry ({i}, {j}) = {v}")
    for i in range(d):
        v = M.get(i, i, fld.zero)
        if v != s:
            raise NotScalar(f"diagonal entry ({i}, {i}) = {v} differs from {s}")
    if not fld.symbolic:
        return s
    return RationalFunction.coerce(s)


def generator_elements(n: int) -> list[tuple[str, AlgebraElement]]:
    out = []
    for i in range(1, n + 1):
        out.append((f"E{i}", AlgebraElement.from_word(E(i))))
        out.append((f"F{i}", AlgebraElement.from_word(F(i))))
        out.append((f"K{i}", AlgebraElement.from_word((GenSymbol("K", i, 1),))))
    return out


def verify_centrality(C: AlgebraElement, n: int, field=None, H: SparseMatrix | None = None) -> bool:
    """True iff (rho x rho)Delta(C) commutes with (rho x rho)Delta(g) for
    every generator g."""
    fld = _field_for(C, field)
    if H is None:
        H = tensor_matrix(C, n, fld)
    for _, g in generator_elements(n):
        G = evaluate(g, n, 2, fld)
        if not (H @ G - G @ H).is_zero():
            return False
    return True


def coordinate_label(c: int, n: int) -> str:
    return str(coordinate_weight(c, n))
