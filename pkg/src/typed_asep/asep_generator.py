"""Generator of the two-species (type D) exclusion process.

Site states: 0 empty, 1 species-1 particle, 2 species-2 particle, 3 both.
The two-site generator is the direct sum of a 4x4 block on
{(3,0),(2,1),(0,3),(1,2)}, four 2x2 blocks and four absorbing states; the
L-site generator is the sum of two-site generators on neighbouring pairs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exact_arith import (
    LaurentPoly,
    RationalFunction,
    _is_zero,
    as_field,
    parse_rational,
)
from .matrices import SparseMatrix

__all__ = [
    "InvalidParams",
    "DimensionOverflow",
    "AsepParams",
    "GeneratorMatrix",
    "LOCAL_BASIS",
    "TWO_SITE_CLASSES",
    "occupation",
    "block_L1",
    "block_L2",
    "local_generator",
    "multi_site_generator",
    "rate_positivity_scan",
    "DEFAULT_MAX_DIM",
]

LOCAL_BASIS: tuple[tuple[int, int], ...] = (
    (3, 0), (2, 1), (0, 3), (1, 2),
    (1, 0), (0, 1), (2, 0), (0, 2), (3, 1), (1, 3), (3, 2), (2, 3),
    (0, 0), (1, 1), (2, 2), (3, 3),
)

TWO_SITE_CLASSES: tuple[tuple[tuple[int, int], ...], ...] = (
    LOCAL_BASIS[0:4],
    LOCAL_BASIS[4:6], LOCAL_BASIS[6:8], LOCAL_BASIS[8:10], LOCAL_BASIS[10:12],
    LOCAL_BASIS[12:13], LOCAL_BASIS[13:14], LOCAL_BASIS[14:15], LOCAL_BASIS[15:16],
)

DEFAULT_MAX_DIM = 4 ** 8


class InvalidParams(ValueError):
    pass


class DimensionOverflow(ValueError):
    pass


def occupation(state: int) -> tuple[int, int]:
    """(species-1 count, species-2 count) at a site in state 0..3."""
    if state not in (0, 1, 2, 3):
        raise ValueError(f"site state must be 0..3, got {state}")
    return state & 1, state >> 1


@dataclass(frozen=True)
class AsepParams:
    """(q, n, delta).  ``q`` is a rational number, or the string
    "symbolic" / a RationalFunction for the indeterminate."""

    q: object
    n: int
    delta: int = 0

    def __post_init__(self):
        q = self.q
        if isinstance(q, str) and q != "symbolic":
            q = parse_rational(q)
        if isinstance(q, (RationalFunction, LaurentPoly)) or q == "symbolic":
            rf = RationalFunction(LaurentPoly.monomial(1))
            if q != "symbolic" and RationalFunction.coerce(q) != rf:
                raise InvalidParams("a symbolic q must be the indeterminate itself")
            q = rf
        else:
            q = Fraction(q)
            if q <= 0 or q == 1:
                raise InvalidParams(f"q must be positive and different from 1, got {q}")
        object.__setattr__(self, "q", q)
        if not isinstance(self.n, int) or self.n < 2:
            raise InvalidParams(f"n must be an integer >= 2, got {self.n!r}")
        if not isinstance(self.delta, int) or not 0 <= self.delta <= self.n - 2:
            raise InvalidParams(f"delta must lie in 0..{self.n - 2}, got {self.delta!r}")

    @property
    def symbolic(self) -> bool:
        return isinstance(self.q, RationalFunction)

    @property
    def field(self):
        return as_field("symbolic" if self.symbolic else self.q)

    def with_q(self, q) -> "AsepParams":
        return AsepParams(q, self.n, self.delta)


class GeneratorMatrix(SparseMatrix):
    """Square sparse matrix with an ordered list of configurations."""

    __slots__ = ("basis", "_index")

    def __init__(self, basis: Sequence[tuple[int, ...]], entries=None):
        super().__init__(len(basis), entries)
        self.basis = [tuple(b) for b in basis]
        self._index = {b: i for i, b in enumerate(self.basis)}

    def index_of(self, config: Sequence[int]) -> int:
        return self._index[tuple(config)]

    def rate(self, src: Sequence[int], dst: Sequence[int]):
        return self.get(self.index_of(src), self.index_of(dst))

    def row_sums(self) -> list:
        sums = [0] * self.dim
        for (i, _), v in self.entries.items():
            sums[i] = sums[i] + v
        return sums

    def off_diagonal(self):
        return {k: v for k, v in self.entries.items() if k[0] != k[1]}

    def reorder(self, basis: Sequence[tuple[int, ...]]) -> "GeneratorMatrix":
        pos = [self.index_of(b) for b in basis]
        inv = {old: new for new, old in enumerate(pos)}
        return GeneratorMatrix(basis, {(inv[i], inv[j]): v for (i, j), v in self.entries.items()})

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "basis": [list(b) for b in self.basis],
            "entries": [[i, j, _value_json(v)] for (i, j), v in sorted(self.entries.items())],
        }

    def __repr__(self):
        return f"GeneratorMatrix(dim={self.dim}, nnz={len(self.entries)})"


def _value_json(v):
    if isinstance(v, (RationalFunction, LaurentPoly)):
        return RationalFunction.coerce(v).to_json()
    return str(v)


# -- local blocks -------------------------------------------------------------------

def _rates(params: AsepParams):
    q, n, d = params.q, params.n, params.delta
    one = q ** 0
    sq = (q ** (n - 1) - q ** (1 - n)) ** 2
    a = q ** (2 * n - 2) - q ** (2 * n - 4) + 2 * q ** -2
    b = q ** (2 * n) - q ** (2 * n - 2) + 2 * one
    c = q ** (-2 * n) - q ** (2 - 2 * n) + 2 * one
    e = 2 * q ** 2 + q ** (2 - 2 * n) - q ** (4 - 2 * n)
    up, down = q ** (2 * d), q ** (-2 * d)
    return q, one, sq, a, b, c, e, up, down


def block_L1(params: AsepParams) -> list[list]:
    """4x4 block on (3,0), (2,1), (0,3), (1,2), diagonal included."""
    q, one, sq, a, b, c, e, up, down = _rates(params)
    off = [
        [None, down * a, sq / q ** 2, a],
        [down * b, None, c, sq],
        [q ** 2 * sq, e, None, up * e],
        [b, sq, up * c, None],
    ]
    return _fill_diagonal(off)


def block_L2(params: AsepParams) -> list[list]:
    """2x2 block, first state moving to the second at rate (q^{1-2n}+q^{2n-1})/q."""
    q, n = params.q, params.n
    s = q ** (1 - 2 * n) + q ** (2 * n - 1)
    return _fill_diagonal([[None, s / q], [q * s, None]])


def _fill_diagonal(off: list[list]) -> list[list]:
    out = [row[:] for row in off]
    for i, row in enumerate(out):
        total = 0
        for j, v in enumerate(row):
            if j != i:
                total = total + v
        row[i] = -total
    return out


def local_generator(params: AsepParams) -> GeneratorMatrix:
    """The 16x16 two-site generator in LOCAL_BASIS order."""
    entries = {}
    L1 = block_L1(params)
    for i in range(4):
        for j in range(4):
            entries[(i, j)] = L1[i][j]
    L2 = block_L2(params)
    for k in range(4):
        off = 4 + 2 * k
        for i in range(2):
            for j in range(2):
                entries[(off + i, off + j)] = L2[i][j]
    return GeneratorMatrix(LOCAL_BASIS, entries)


def lex_basis(L: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(4), repeat=L))


def multi_site_generator(params: AsepParams, L: int, max_dim: int = DEFAULT_MAX_DIM) -> GeneratorMatrix:
    """Sum of two-site generators on sites (x, x+1), lexicographic basis."""
    if not isinstance(L, int) or L < 2:
        raise InvalidParams(f"need at least two sites, got {L!r}")
    dim = 4 ** L
    if dim > max_dim:
        raise DimensionOverflow(f"4^{L} = {dim} states exceeds the cap {max_dim}")
    loc = local_generator(params)
    local_rows: dict[tuple[int, int], list] = {}
    for (i, j), v in loc.entries.items():
        local_rows.setdefault(LOCAL_BASIS[i], []).append((LOCAL_BASIS[j], v))
    basis = lex_basis(L)
    index = {b: k for k, b in enumerate(basis)}
    entries: dict = {}
    for k, cfg in enumerate(basis):
        for x in range(L - 1):
            for (a, b), v in local_rows.get((cfg[x], cfg[x + 1]), ()):
                tgt = cfg[:x] + (a, b) + cfg[x + 2:]
                key = (k, index[tgt])
                entries[key] = entries[key] + v if key in entries else v
    return GeneratorMatrix(basis, entries)


def rate_positivity_scan(params: AsepParams, grid: Iterable = (Fraction(1, 2), Fraction(3, 4),
                                                            Fraction(3, 2), 2, 10)) -> dict:
    """Check off-diagonal rates of the two-site generator are >= 0 at each
    numeric q in the grid."""
    report = {"n": params.n, "delta": params.delta, "points": [], "violations": []}
    for q in grid:
        p = params.with_q(q)
        gen = local_generator(p)
        rates = [v for (i, j), v in gen.entries.items() if i != j]
        low = min(rates)
        report["points"].append({"q": str(p.q), "min_rate": str(low)})
        for (i, j), v in gen.entries.items():
            if i != j and v < 0:
                report["violations"].append(
                    {"q": str(p.q), "from": list(LOCAL_BASIS[i]), "to": list(LOCAL_BASIS[j]),
                     "rate": str(v)})
    report["ok"] = not report["violations"]
    return report


def conserved_counts(config: Sequence[int]) -> tuple[int, int]:
    n1 = sum(occupation(s)[0] for s in config)
    n2 = sum(occupation(s)[1] for s in config)
    return n1, n2


def is_zero_value(v) -> bool:
    return _is_zero(v)
