"""U_q(so(2n)) as a free word algebra.

Words are tuples of :class:`GenSymbol`.  No normal form is ever computed:
elements are compared through their action in the fundamental
representation (or its tensor square) and through the Borel pairing.

Coefficients may be RationalFunctions, Fractions or ints; the evaluation
and pairing functions take a field (``SymbolicField`` or ``NumericField``)
that decides what comes out.
"""

from __future__ import annotations

import threading
from collections import defaultdict
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple, Sequence

from .exact_arith import (
    LaurentPoly,
    RationalFunction,
    _is_zero,
    as_field,
)
from .lie_data import cartan_matrix, check_rank, fundamental_rep, root_pairing
from .matrices import SparseMatrix, kron

__all__ = [
    "GenSymbol",
    "MixedBorelInput",
    "AlgebraElement",
    "TensorElement",
    "E",
    "F",
    "K",
    "word_str",
    "parse_symbol",
    "coproduct",
    "evaluate",
    "word_action",
    "tensor_word_action",
    "pairing",
    "reduced_pairing",
    "pairing_constant",
    "clear_pairing_cache",
]


class MixedBorelInput(ValueError):
    pass


class GenSymbol(NamedTuple):
    kind: str
    index: int
    power: int = 1

    def __str__(self):
        if self.kind == "K" and self.power != 1:
            return f"K{self.index}^{self.power}"
        return f"{self.kind}{self.index}"


def _sym(kind: str, index: int, power: int = 1) -> GenSymbol:
    if kind not in ("E", "F", "K"):
        raise ValueError(f"unknown generator kind {kind!r}")
    if index < 1:
        raise ValueError("generator indices start at 1")
    if kind != "K" and power != 1:
        raise ValueError("only K symbols carry a power")
    if power == 0:
        raise ValueError("K symbols need a nonzero power")
    return GenSymbol(kind, index, power)


def parse_symbol(text: str) -> GenSymbol:
    text = text.strip()
    kind, rest = text[0], text[1:]
    power = 1
    if "^" in rest:
        rest, p = rest.split("^")
        power = int(p)
    return _sym(kind, int(rest), power)


def word_str(word: Sequence[GenSymbol]) -> str:
    return " ".join(str(s) for s in word) if word else "1"


Word = tuple


def E(*indices: int) -> Word:
    return tuple(_sym("E", i) for i in indices)


def F(*indices: int) -> Word:
    return tuple(_sym("F", i) for i in indices)


def K(exponents: Sequence[int]) -> Word:
    """K_1^{c_1} ... K_n^{c_n}, one symbol per nonzero exponent."""
    return tuple(_sym("K", i + 1, c) for i, c in enumerate(exponents) if c)


# -- elements --------------------------------------------------------------

class AlgebraElement:
    """Finite linear combination of words.  Treated as immutable."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, object] | None = None):
        self._terms = {tuple(w): c for w, c in (terms or {}).items() if not _is_zero(c)}

    @property
    def terms(self) -> dict:
        return self._terms

    @classmethod
    def from_word(cls, word: Iterable[GenSymbol], coeff=1) -> "AlgebraElement":
        return cls({tuple(word): coeff})

    @classmethod
    def one(cls, coeff=1) -> "AlgebraElement":
        return cls({(): coeff})

    def items(self):
        return self.terms.items()

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def kinds(self) -> set[str]:
        return {s.kind for w in self.terms for s in w}

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            other = AlgebraElement.one(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return AlgebraElement(out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            out: dict = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    p = c1 * c2
                    out[w] = out[w] + p if w in out else p
            return AlgebraElement(out)
        return AlgebraElement({w: c * other for w, c in self.terms.items()})

    def __rmul__(self, other):
        return AlgebraElement({w: other * c for w, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        return all(self.terms.get(k, 0) == other.terms.get(k, 0) for k in keys)

    def __repr__(self):
        parts = [f"({c})*{word_str(w)}" for w, c in self.terms.items()]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> list:
        out = []
        for w, c in self.terms.items():
            out.append({"word": [str(s) for s in w], "coeff": _coeff_json(c)})
        return out

    @classmethod
    def from_json(cls, data: Sequence[Mapping]) -> "AlgebraElement":
        terms = {}
        for item in data:
            w = tuple(parse_symbol(s) for s in item["word"])
            terms[w] = _coeff_from_json(item["coeff"])
        return cls(terms)


def _coeff_json(c):
    if isinstance(c, (RationalFunction, LaurentPoly)):
        return RationalFunction.coerce(c).to_json()
    return str(c)


def _coeff_from_json(c):
    if isinstance(c, Mapping):
        return RationalFunction.from_json(c)
    from .exact_arith import parse_rational
    return parse_rational(c)


class TensorElement:
    """Finite linear combination of pairs of words."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[Word, Word], object] | None = None):
        self._terms = {(tuple(a), tuple(b)): c for (a, b), c in (terms or {}).items()
                       if not _is_zero(c)}

    @property
    def terms(self) -> dict:
        return self._terms

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __add__(self, other: "TensorElement"):
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out[k] + c if k in out else c
        return TensorElement(out)

    def __mul__(self, other):
        if isinstance(other, TensorElement):
            out: dict = {}
            for (a1, b1), c1 in self._terms.items():
                for (a2, b2), c2 in other._terms.items():
                    k = (a1 + a2, b1 + b2)
                    p = c1 * c2
                    out[k] = out[k] + p if k in out else p
            return TensorElement(out)
        return TensorElement({k: c * other for k, c in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        keys = set(self._terms) | set(other._terms)
        return all(self._terms.get(k, 0) == other._terms.get(k, 0) for k in keys)

    def __repr__(self):
        parts = [f"({c})*{word_str(a)} ⊗ {word_str(b)}" for (a, b), c in self._terms.items()]
        return " + ".join(parts) if parts else "0"


# -- coproduct -----------------------------------------------------------------

def _letter_coproduct(s: GenSymbol) -> list[tuple[Word, Word]]:
    if s.kind == "E":
        return [((s,), ()), ((GenSymbol("K", s.index, 1),), (s,))]
    if s.kind == "F":
        return [((), (s,)), ((s,), (GenSymbol("K", s.index, -1),))]
    return [((s,), (s,))]


def coproduct(x: AlgebraElement) -> TensorElement:
    """Delta as an algebra homomorphism, fully expanded."""
    out: dict = defaultdict(int)
    for w, c in x.terms.items():
        partial = {((), ()): 1}
        for s in w:
            nxt: dict = defaultdict(int)
            for (a, b), m in partial.items():
                for la, lb in _letter_coproduct(s):
                    nxt[(a + la, b + lb)] += m
            partial = nxt
        for k, m in partial.items():
            out[k] = out[k] + m * c
    return TensorElement(out)


# -- representation ------------------------------------------------------------
#
# Generators act monomially on coordinate vectors: e_c -> sign q^e e_c'.
# Actions are accumulated with integer Laurent coefficients {exp: int}.

def _check_word(word: Sequence[GenSymbol], n: int):
    for s in word:
        if s.index > n:
            raise ValueError(f"{s} is not a generator of U_q(so({2 * n}))")


def _single_letter(rep, s: GenSymbol, c: int):
    """Image of e_c under one letter: (c', sign, exp) or None."""
    i = s.index - 1
    if s.kind == "E":
        hit = rep.raise_[i].get(c)
        return None if hit is None else (hit[0], hit[1], 0)
    if s.kind == "F":
        hit = rep.lower_[i].get(c)
        return None if hit is None else (hit[0], hit[1], 0)
    return (c, 1, s.power * rep.h[i][c])


def word_action(word: Sequence[GenSymbol], n: int) -> dict[int, tuple[int, int, int]]:
    """rho(word) on C^{2n}: column -> (row, sign, q-exponent)."""
    rep = fundamental_rep(n)
    _check_word(word, n)
    out = {}
    for c in range(rep.dim):
        cur, sign, ex = c, 1, 0
        for s in reversed(word):
            img = _single_letter(rep, s, cur)
            if img is None:
                break
            cur, sg, e = img
            sign *= sg
            ex += e
        else:
            out[c] = (cur, sign, ex)
    return out


@lru_cache(maxsize=None)
def _tensor_letter_table(n: int, kind: str, index: int, power: int):
    """For each tensor basis index a*d+b the list of (target, sign, exp)."""
    rep = fundamental_rep(n)
    d = rep.dim
    i = index - 1
    h = rep.h[i]
    table = []
    for a in range(d):
        for b in range(d):
            imgs = []
            if kind == "E":
                t = rep.raise_[i]
                if a in t:
                    r, s = t[a]
                    imgs.append((r * d + b, s, 0))
                if b in t:
                    r, s = t[b]
                    imgs.append((a * d + r, s, h[a]))
            elif kind == "F":
                t = rep.lower_[i]
                if b in t:
                    r, s = t[b]
                    imgs.append((a * d + r, s, 0))
                if a in t:
                    r, s = t[a]
                    imgs.append((r * d + b, s, -h[b]))
            else:
                imgs.append((a * d + b, 1, power * (h[a] + h[b])))
            table.append(tuple(imgs))
    return tuple(table)


def _apply_tensor_letter(table, vec: dict) -> dict:
    out: dict = {}
    for idx, coeff in vec.items():
        for tgt, sign, ex in table[idx]:
            acc = out.get(tgt)
            if acc is None:
                acc = out[tgt] = {}
            for e, v in coeff.items():
                k = e + ex
                nv = acc.get(k, 0) + sign * v
                if nv:
                    acc[k] = nv
                else:
                    acc.pop(k, None)
    return {k: v for k, v in out.items() if v}


def tensor_word_action(word: Sequence[GenSymbol], n: int,
                       columns: Iterable[int] | None = None) -> dict[int, dict[int, dict[int, int]]]:
    """(rho x rho)(Delta(word)) as column -> row -> {exp: int}."""
    _check_word(word, n)
    d = 2 * n
    tables = [_tensor_letter_table(n, s.kind, s.index, s.power) for s in reversed(word)]
    out = {}
    for col in (range(d * d) if columns is None else columns):
        vec = {col: {0: 1}}
        for t in tables:
            vec = _apply_tensor_letter(t, vec)
            if not vec:
                break
        if vec:
            out[col] = vec
    return out


def evaluate(x, n: int, tensor_power: int = 1, field="symbolic") -> SparseMatrix:
    """Matrix of x in the fundamental representation (tensor_power=1) or of
    (rho x rho)(Delta(x)) / (rho x rho)(x) for a TensorElement (tensor_power=2)."""
    check_rank(n)
    fld = as_field(field)
    d = 2 * n
    if tensor_power == 1:
        if isinstance(x, TensorElement):
            raise TypeError("a TensorElement needs tensor_power=2")
        acc: dict = {}
        for w, c in x.terms.items():
            for col, (row, sign, ex) in word_action(w, n).items():
                acc.setdefault((row, col), []).append((c, {ex: sign}))
        return _collect(acc, fld, d)
    if tensor_power != 2:
        raise ValueError("tensor_power must be 1 or 2")
    if isinstance(x, TensorElement):
        total = SparseMatrix(d * d)
        for (a, b), c in x.terms.items():
            ma = evaluate(AlgebraElement.from_word(a), n, 1, fld)
            mb = evaluate(AlgebraElement.from_word(b), n, 1, fld)
            total = total + kron(ma, mb).scale(fld.convert(c))
        return total
    acc = {}
    for w, c in x.terms.items():
        for col, rows in tensor_word_action(w, n).items():
            for row, lp in rows.items():
                acc.setdefault((row, col), []).append((c, lp))
    return _collect(acc, fld, d * d)


def _collect(acc: dict, fld, dim: int) -> SparseMatrix:
    entries = {}
    for key, parts in acc.items():
        total = fld.zero
        for c, lp in parts:
            total = total + fld.convert(c) * fld.from_int_laurent(lp)
        entries[key] = total
    return SparseMatrix(dim, entries)


# -- pairing ----------------------------------------------------------------------
#
# <F_I, E_J> = c^k P_{I,J}(q) with c = -1/(q - 1/q), k = |I| = |J|.
# Peeling the last letter E_j off the right slot:
#   <F_I, x E_j> = sum_{p : I_p = j} c q^{sum_{s>p} (alpha_j, alpha_{I_s})} <F_{I minus p}, x>.

_PAIR_CACHE: dict = {}
_PAIR_LOCK = threading.Lock()


def clear_pairing_cache():
    with _PAIR_LOCK:
        _PAIR_CACHE.clear()


def _multiset_key(word: Sequence[int]) -> tuple:
    return tuple(sorted(word))


def reduced_pairing(I: Sequence[int], J: Sequence[int], n: int) -> dict[int, int]:
    """P_{I,J} as {exponent: integer coefficient}."""
    I, J = tuple(I), tuple(J)
    if len(I) != len(J) or _multiset_key(I) != _multiset_key(J):
        return {}
    return _reduced_pairing(I, J, n)


def _reduced_pairing(I: tuple, J: tuple, n: int) -> dict[int, int]:
    if not I:
        return {0: 1}
    key = (n, I, J)
    hit = _PAIR_CACHE.get(key)
    if hit is not None:
        return hit
    A = cartan_matrix(n)
    j = J[-1] - 1
    rest = J[:-1]
    out: dict[int, int] = {}
    k = len(I)
    tail = 0
    # walk p from the right, accumulating sum_{s>p} (alpha_j, alpha_{I_s})
    for p in range(k - 1, -1, -1):
        if I[p] - 1 == j:
            sub = _reduced_pairing(I[:p] + I[p + 1:], rest, n)
            for e, v in sub.items():
                nv = out.get(e + tail, 0) + v
                if nv:
                    out[e + tail] = nv
                else:
                    out.pop(e + tail, None)
        tail += A[j][I[p] - 1]
    with _PAIR_LOCK:
        _PAIR_CACHE[key] = out
    return out


def pairing_constant(field="symbolic"):
    """c = -1/(q - 1/q) in the given field."""
    fld = as_field(field)
    return -fld.one / (fld.q - fld.one / fld.q)


def _normalize(word: Sequence[GenSymbol], n: int, letter: str):
    """Move every K to the right: word = q^ex * X_I * K_c."""
    A = cartan_matrix(n)
    sgn = -1 if letter == "F" else 1
    idx: list[int] = []
    c = [0] * n
    ex = 0
    for s in word:
        if s.kind == "K":
            c[s.index - 1] += s.power
        elif s.kind == letter:
            i = s.index - 1
            ex += sgn * sum(c[a] * A[a][i] for a in range(n) if c[a])
            idx.append(s.index)
        else:
            raise MixedBorelInput(
                f"pairing expects {'F/K' if letter == 'F' else 'E/K'} words, got {s}")
    return ex, tuple(idx), tuple(c)


def pairing(y, x, n: int, field="symbolic"):
    """Bilinear pairing <y, x> for y over {F, K} and x over {E, K}."""
    check_rank(n)
    fld = as_field(field)
    if not isinstance(y, AlgebraElement):
        y = AlgebraElement.from_word(y)
    if not isinstance(x, AlgebraElement):
        x = AlgebraElement.from_word(x)
    cst = pairing_constant(fld)
    total = fld.zero
    xs = [(_normalize(w, n, "E"), c) for w, c in x.terms.items()]
    for wy, cy in y.terms.items():
        ey, I, a = _normalize(wy, n, "F")
        for (ex, J, b), cx in xs:
            P = reduced_pairing(I, J, n)
            if not P:
                continue
            val = fld.from_int_laurent(P) * fld.q_pow(ey + ex - root_pairing(a, b, n))
            total = total + fld.convert(cy) * fld.convert(cx) * val * cst ** len(I)
    return total
