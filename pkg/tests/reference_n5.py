"""Closed forms for the n = 5 Hamiltonian, as functions of q.

Each entry is a plain lambda so it evaluates exactly on Fractions.  The
weight-zero block is U^T + D + U in the order v1 (x) v10, ..., v5 (x) v6,
v10 (x) v1, ..., v6 (x) v5.
"""


def B1(q):
    return -q**5 + 3*q**3 - 3*q + 1/q - 2/q**5 + 4/q**7 - 2/q**9


def B2(q):
    return -2*q**3 + 4*q - 2/q + 1/q**5 - 3/q**7 + 3/q**9 - 1/q**11


def B3(q):
    return q**10 - 2*q**8 + q**6 - 2*q**2 + 4 - 2/q**2 + 1/q**6 - 2/q**8 + 1/q**10


LAMBDA = lambda q: q**12 + q**6 + q**4 + q**2 + 2 + q**-2 + q**-4 + q**-6 + q**-12  # noqa: E731
SCALAR = lambda q: q**10 + q**6 + q**4 + q**2 + 2 + q**-2 + q**-4 + q**-6 + q**-10  # noqa: E731


def upper(q, corrected=True):
    """Strict upper triangle of the weight-zero block.  With corrected=False
    the (4, 6) and (5, 6) entries (1-based) carry B3 as printed; the computed
    block has B2 there, matching the rest of column 6."""
    b1, b2, b3 = B1(q), B2(q), B3(q)
    col6 = (q**2 * b2, q**3 * b2) if corrected else (q**2 * b3, q**3 * b3)
    return [
        [0, b1, q*b1, q**2*b1, q**3*b1, b3, q**6*b1, q**5*b1, q**4*b1, q**3*b1],
        [0, 0, q**2*b1, q**3*b1, q**4*b1, b2, b3, q**6*b1, q**5*b1, q**4*b1],
        [0, 0, 0, q**4*b1, q**5*b1, q*b2, b2, b3, q**6*b1, q**5*b1],
        [0, 0, 0, 0, q**6*b1, col6[0], q*b2, b2, b3, q**6*b1],
        [0, 0, 0, 0, 0, col6[1], q**2*b2, q*b2, b2, b3],
        [0] * 6 + [q**6*b2, q**5*b2, q**4*b2, q**3*b2],
        [0] * 7 + [q**4*b2, q**3*b2, q**2*b2],
        [0] * 8 + [q**2*b2, q*b2],
        [0] * 9 + [b2],
        [0] * 10,
    ]


DIAGONAL = [
    lambda q: -q**10 + 2*q**8 - q**6 - q**4 + 3*q**2 - 3 + q**-2 - 2*q**-6 + 3*q**-8 - q**-12,
    lambda q: -q**10 + 2*q**8 - 2*q**6 + 3*q**4 - 3*q**2 + 1 - 2*q**-4 + 4*q**-6 - 3*q**-8 + 2*q**-10 - q**-12,
    lambda q: -q**10 + q**8 + 2*q**6 - 3*q**4 + q**2 - 2*q**-2 + 4*q**-4 - 2*q**-6 - q**-8 + 2*q**-10 - q**-12,
    lambda q: -2*q**10 + 5*q**8 - 4*q**6 + q**4 - 2 + 4*q**-2 - 2*q**-4 - q**-8 + 2*q**-10 - q**-12,
    lambda q: -q**12 + 2*q**10 - q**8 - 2*q**2 + 4 - 2*q**-2 - q**-8 + 2*q**-10 - q**-12,
    lambda q: -q**12 + 3*q**8 - 2*q**6 + q**2 - 3 + 3*q**-2 - q**-4 - q**-6 + 2*q**-8 - q**-10,
    lambda q: -q**12 + 2*q**10 - 3*q**8 + 4*q**6 - 2*q**4 + 1 - 3*q**-2 + 3*q**-4 - 2*q**-6 + 2*q**-8 - q**-10,
    lambda q: -q**12 + 2*q**10 - q**8 - 2*q**6 + 4*q**4 - 2*q**2 + q**-2 - 3*q**-4 + 2*q**-6 + q**-8 - q**-10,
    lambda q: -q**12 + 2*q**10 - q**8 - 2*q**4 + 4*q**2 - 2 + q**-4 - 4*q**-6 + 5*q**-8 - 2*q**-10,
    lambda q: -q**12 + 2*q**10 - q**8 - 2*q**2 + 4 - 2*q**-2 - q**-8 + 2*q**-10 - q**-12,
]


def block(q, corrected=True):
    U = upper(q, corrected)
    return [[DIAGONAL[i](q) if i == j else (U[i][j] if i < j else U[j][i]) for j in range(10)]
            for i in range(10)]


GROUND_STATES = [
    lambda q: [0, 0, 0, -q**2, q, 0, 0, 0, -1, q],
    lambda q: [0, 0, -q**2, q, 0, 0, 0, -1, q, 0],
    lambda q: [0, -q**2, q, 0, 0, 0, -1, q, 0, 0],
    lambda q: [-q**2, q, 0, 0, 0, -1, q, 0, 0, 0],
]


def two_by_two(q):
    off = (q**2 - 1)**2 * (q**18 + 1) / q**11
    return [[-q**10 + 2*q**8 - q**6 - q**-8 + 2*q**-10 - q**-12, off],
            [off, -q**12 + 2*q**10 - q**8 - q**-6 + 2*q**-8 - q**-10]]


def _pruned(q, d1, d2, d3, d4, a1, a2, a3):
    """Shared shape of the four pruned generators: d* are the diagonals and
    a1..a3 the q-powers dividing the (q^10 - q^8 + 2) and (2q^10 - q^2 + 1)
    entries that move with delta."""
    u = q**10 - q**8 + 2
    v = q**16 - 2*q**8 + 1
    w = 2*q**10 - q**2 + 1
    return [
        [d1, u / q**a1, v / q**10, u / q**2],
        [u / q**(a1 - 2), d2, w / q**10, v / q**8],
        [v / q**6, w / q**8, d3, w / q**a2],
        [u, v / q**8, w / q**a3, d4],
    ]


PRUNED = [
    lambda q: _pruned(q, (-2*q**18 + q**16 - 2*q**8 - 1) / q**10, (-q**20 - 2*q**10 - 1) / q**10,
                      (-q**18 - 2*q**10 + q**2 - 2) / q**8, (-q**20 - 2*q**10 - 1) / q**10, 2, 8, 10),
    lambda q: _pruned(q, (-q**18 - q**16 + q**14 - 2*q**6 - 1) / q**10, (-2*q**18 + q**16 - 2*q**8 - 1) / q**10,
                      (-q**18 - 2*q**12 + q**4 - q**2 - 1) / q**8, (-q**18 - 2*q**10 + q**2 - 2) / q**8, 4, 6, 8),
    lambda q: _pruned(q, (-q**18 - q**14 + q**12 - 2*q**4 - 1) / q**10, (-q**18 - q**16 + q**14 - 2*q**6 - 1) / q**10,
                      (-q**18 - 2*q**14 + q**6 - q**4 - 1) / q**8, (-q**18 - 2*q**12 + q**4 - q**2 - 1) / q**8, 6, 4, 6),
    lambda q: _pruned(q, (-q**18 - q**12 + q**10 - 2*q**2 - 1) / q**10, (-q**18 - q**14 + q**12 - 2*q**4 - 1) / q**10,
                      (-q**18 - 2*q**16 + q**8 - q**6 - 1) / q**8, (-q**18 - 2*q**14 + q**6 - q**4 - 1) / q**8, 8, 2, 4),
]
