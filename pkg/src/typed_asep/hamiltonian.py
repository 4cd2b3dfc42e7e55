"""From the central element to the two-site generator.

H is the action of Delta(C) on C^{2n} (x) C^{2n} and Hhat = H - Lambda Id,
with Lambda the eigenvalue on v_1 (x) v_1.  Hhat splits into one block on
the weight-zero space (dimension 2n), 2x2 blocks and 1x1 blocks.  Each of
the n-1 staircase kernel vectors g_delta of the big block turns the block,
after conjugation by diag(g_delta) and restriction to the support of
g_delta, into r^2 times the 4x4 block of the (q, n, delta) generator.

Tensor basis index of e_a (x) e_b is a*2n + b (0-based coordinates).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .asep_generator import LOCAL_BASIS, AsepParams, GeneratorMatrix, block_L1, block_L2
from .central_element import assemble_central, tensor_matrix, verify_scalar_action
from .exact_arith import RationalFunction, _is_zero, as_field, nullspace
from .lie_data import check_rank
from .matrices import SparseMatrix

__all__ = [
    "WrongKernelDimension",
    "GroundState",
    "HamiltonianReport",
    "build_hamiltonian",
    "block_decomposition",
    "weight_zero_indices",
    "ground_state_support",
    "canonicalize_ground_state",
    "ground_states",
    "conjugate_prune",
    "match_asep",
    "match_two_by_two",
    "two_by_two_blocks",
    "analyze",
]


class WrongKernelDimension(RuntimeError):
    pass


@dataclass
class GroundState:
    delta: int
    vector: list
    support: tuple[int, ...]


@dataclass
class HamiltonianReport:
    n: int
    field: object
    H: SparseMatrix
    H_hat: SparseMatrix
    Lambda: object
    scalar: object
    blocks: list
    big_block: list
    ground_states: list
    pruned: dict = dc_field(default_factory=dict)
    matches: dict = dc_field(default_factory=dict)
    two_by_two: list = dc_field(default_factory=list)

    @property
    def block_sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def census(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for b in self.blocks:
            out[len(b)] = out.get(len(b), 0) + 1
        return out


def build_hamiltonian(C, n: int, field=None):
    """(H, Hhat, Lambda)."""
    check_rank(n)
    H = tensor_matrix(C, n, field)
    fld = as_field(field) if field is not None else getattr(C, "field", as_field("symbolic"))
    lam = H.get(0, 0, fld.zero)
    shift = SparseMatrix.identity(H.dim, lam)
    return H, H - shift, lam


def block_decomposition(M: SparseMatrix) -> list[tuple[int, ...]]:
    """Connected components of the off-diagonal pattern, largest first."""
    parent = list(range(M.dim))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (i, j) in M.entries:
        if i != j:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    comps: dict[int, list[int]] = {}
    for i in range(M.dim):
        comps.setdefault(find(i), []).append(i)
    return sorted((tuple(c) for c in comps.values()), key=lambda c: (-len(c), c[0]))


def weight_zero_indices(n: int) -> list[int]:
    """Tensor indices of e_a (x) e_b with opposite weights, in increasing
    order: (1, n+1), ..., (n, 2n), (n+1, 1), ..., (2n, n) in 1-based
    coordinates."""
    d = 2 * n
    out = []
    for a in range(d):
        b = a + n if a < n else a - n
        out.append(a * d + b)
    return out


def ground_state_support(n: int, delta: int) -> tuple[int, ...]:
    """0-based positions in the weight-zero block."""
    if not 0 <= delta <= n - 2:
        raise ValueError(f"delta must lie in 0..{n - 2}")
    return (n - 2 - delta, n - 1 - delta, 2 * n - 2 - delta, 2 * n - 1 - delta)


def canonicalize_ground_state(vec: list, n: int, delta: int, fld) -> GroundState:
    """Scale so the third support entry equals -1."""
    sup = ground_state_support(n, delta)
    for i, v in enumerate(vec):
        if i not in sup and not _is_zero(v):
            raise ValueError(f"vector is not supported on {sup}")
    pivot = vec[sup[2]]
    if _is_zero(pivot):
        raise ValueError("third support entry vanishes")
    scale = -fld.one / pivot
    return GroundState(delta, [scale * v for v in vec], sup)


def ground_states(H_hat: SparseMatrix, n: int, field="symbolic") -> list[GroundState]:
    """Staircase basis g_0, ..., g_{n-2} of the big block's kernel."""
    fld = as_field(field)
    idx = weight_zero_indices(n)
    B = H_hat.submatrix(idx, idx).to_dense(fld.zero)
    kernel = nullspace(B)
    if len(kernel) != n - 1:
        raise WrongKernelDimension(f"kernel of the weight-zero block has dimension "
                                   f"{len(kernel)}, expected {n - 1}")
    out = []
    for delta in range(n - 1):
        sup = ground_state_support(n, delta)
        cols = [[row[j] for j in sup] for row in B]
        local = nullspace(cols)
        if len(local) != 1:
            raise WrongKernelDimension(
                f"expected a unique kernel vector on support {sup}, found {len(local)}")
        vec = [fld.zero] * (2 * n)
        for j, v in zip(sup, local[0]):
            vec[j] = v
        out.append(canonicalize_ground_state(vec, n, delta, fld))
    return out


def conjugate_prune(block: SparseMatrix, g: GroundState, field="symbolic") -> GeneratorMatrix:
    """Entries block[i, j] g[j] / g[i] / r^2 for i, j in the support of g."""
    fld = as_field(field)
    r2 = (fld.q - fld.one / fld.q) ** 2
    sup = g.support
    entries = {}
    for a, i in enumerate(sup):
        for b, j in enumerate(sup):
            v = block.get(i, j, fld.zero)
            if not _is_zero(v):
                entries[(a, b)] = v * g.vector[j] / g.vector[i] / r2
    return GeneratorMatrix(LOCAL_BASIS[:4], entries)


def _params(n: int, delta: int, fld) -> AsepParams:
    return AsepParams("symbolic" if fld.symbolic else fld.q0, n, delta)


def match_asep(Lt: SparseMatrix, n: int, delta: int, field="symbolic") -> bool:
    """Exact comparison with the 4x4 block of the (q, n, delta) generator."""
    fld = as_field(field)
    target = block_L1(_params(n, delta, fld))
    return all(Lt.get(i, j, fld.zero) == target[i][j] for i in range(4) for j in range(4))


def match_two_by_two(block: SparseMatrix, n: int, field="symbolic") -> bool:
    """diag(q,1)^{-1} block diag(q,1) == r^2 L_2."""
    fld = as_field(field)
    q = fld.q
    r2 = (q - fld.one / q) ** 2
    target = block_L2(_params(n, 0, fld))
    g = (q, fld.one)
    for i in range(2):
        for j in range(2):
            if block.get(i, j, fld.zero) * g[j] / g[i] != r2 * target[i][j]:
                return False
    return True


def two_by_two_blocks(H_hat: SparseMatrix, blocks) -> list[tuple[tuple[int, int], SparseMatrix]]:
    """Each 2x2 block, ordered so that (q, 1) is its kernel vector."""
    out = []
    for b in blocks:
        if len(b) != 2:
            continue
        i, j = b
        # kernel (q, 1) means H[i,i] q + H[i,j] = 0; otherwise swap
        sub = H_hat.submatrix([i, j], [i, j])
        out.append(((i, j), sub))
    return out


def _orient(sub: SparseMatrix, fld):
    """Put the pair in the order whose kernel vector is (q, 1)."""
    q = fld.q
    if _is_zero(sub.get(0, 0, fld.zero) * q + sub.get(0, 1, fld.zero)):
        return sub, False
    return sub.submatrix([1, 0], [1, 0]), True


def analyze(n: int, mode="symbolic", C=None) -> HamiltonianReport:
    """Run central element -> Hhat -> blocks -> ground states -> prune -> match."""
    fld = as_field(mode)
    if C is None:
        C = assemble_central(n, fld)
    scalar = verify_scalar_action(C, n, fld)
    H, Hh, lam = build_hamiltonian(C, n, fld)
    blocks = block_decomposition(Hh)
    idx = weight_zero_indices(n)
    gs = ground_states(Hh, n, fld)
    big = Hh.submatrix(idx, idx)
    rep = HamiltonianReport(n, fld, H, Hh, lam, scalar, blocks, idx, gs)
    for g in gs:
        Lt = conjugate_prune(big, g, fld)
        rep.pruned[g.delta] = Lt
        rep.matches[g.delta] = match_asep(Lt, n, g.delta, fld)
    for pair, sub in two_by_two_blocks(Hh, blocks):
        oriented, swapped = _orient(sub, fld)
        order = pair[::-1] if swapped else pair
        rep.two_by_two.append((order, oriented, match_two_by_two(oriented, n, fld)))
    return rep


def as_rational_function(x):
    return RationalFunction.coerce(x)
