"""Sparse square/rectangular matrices over an exact field (Fractions or
RationalFunctions).  Only the handful of operations the pipeline needs."""

from __future__ import annotations

from typing import Callable, Iterable, Mapping

from .exact_arith import _is_zero


class SparseMatrix:
    __slots__ = ("shape", "entries")

    def __init__(self, shape, entries: Mapping[tuple[int, int], object] | None = None):
        if isinstance(shape, int):
            shape = (shape, shape)
        self.shape = tuple(shape)
        self.entries = {k: v for k, v in (entries or {}).items() if not _is_zero(v)}

    @property
    def dim(self) -> int:
        return self.shape[0]

    @classmethod
    def identity(cls, n: int, one=1):
        return cls(n, {(i, i): one for i in range(n)})

    @classmethod
    def from_dense(cls, rows):
        rows = [list(r) for r in rows]
        return cls((len(rows), len(rows[0]) if rows else 0),
                   {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r)})

    def get(self, i: int, j: int, default=0):
        return self.entries.get((i, j), default)

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def to_dense(self, zero=0):
        out = [[zero] * self.shape[1] for _ in range(self.shape[0])]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def rows(self) -> dict[int, dict[int, object]]:
        out: dict[int, dict[int, object]] = {}
        for (i, j), v in self.entries.items():
            out.setdefault(i, {})[j] = v
        return out

    def map(self, fn: Callable) -> "SparseMatrix":
        return SparseMatrix(self.shape, {k: fn(v) for k, v in self.entries.items()})

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.shape[::-1], {(j, i): v for (i, j), v in self.entries.items()})

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return SparseMatrix(self.shape, out)

    def __neg__(self):
        return self.map(lambda v: -v)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SparseMatrix":
        return self.map(lambda v: c * v)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape[1] != other.shape[0]:
            raise ValueError("shape mismatch")
        right = other.rows()
        out: dict = {}
        for (i, k), a in self.entries.items():
            row = right.get(k)
            if not row:
                continue
            for j, b in row.items():
                key = (i, j)
                prod = a * b
                out[key] = out[key] + prod if key in out else prod
        return SparseMatrix((self.shape[0], other.shape[1]), out)

    def apply(self, vec: Iterable) -> list:
        vec = list(vec)
        out = [0] * self.shape[0]
        for (i, j), v in self.entries.items():
            if not _is_zero(vec[j]):
                out[i] = out[i] + v * vec[j]
        return out

    def is_zero(self) -> bool:
        return not self.entries

    def submatrix(self, rows, cols) -> "SparseMatrix":
        rpos = {r: a for a, r in enumerate(rows)}
        cpos = {c: b for b, c in enumerate(cols)}
        return SparseMatrix((len(rows), len(cols)),
                            {(rpos[i], cpos[j]): v for (i, j), v in self.entries.items()
                             if i in rpos and j in cpos})

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        keys = set(self.entries) | set(other.entries)
        return all(self.entries.get(k, 0) == other.entries.get(k, 0) for k in keys)

    def __repr__(self):
        return f"SparseMatrix({self.shape}, nnz={len(self.entries)})"


def kron(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    r2, c2 = b.shape
    out = {}
    for (i, j), x in a.entries.items():
        for (k, l), y in b.entries.items():
            out[(i * r2 + k, j * c2 + l)] = x * y
    return SparseMatrix((a.shape[0] * r2, a.shape[1] * c2), out)


def commutator(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    return a @ b - b @ a
