"""
Self-duality on two sites
=========================

The duality function is a product of q-Krawtchouk polynomials, one per
species and site.  On two sites each entry collapses to a product of
factors D_i^j = 1 - q^j / alpha_i.
"""

from fractions import Fraction

from typed_asep.asep_generator import LOCAL_BASIS
from typed_asep.duality import (
    DualityParams,
    duality_matrix,
    duality_symbol_matrix,
    duality_value,
    verify_duality,
)


def show(entry):
    return " ".join(f"D{i}^{j}" for i, j in entry) or "1"


sym = duality_symbol_matrix(2)
for state, row in list(zip(LOCAL_BASIS, sym))[:4]:
    print(state, " | ".join(show(e) for e in row[:6]), "...")

# the closed form and the q-Krawtchouk product agree entry by entry
p = DualityParams(Fraction(3), Fraction(-5, 2), Fraction(7, 3), n=4)
D = duality_matrix(p)
print("\nentry ((3,0),(3,0)) =", D.entries[(0, 0)], "=", duality_value((3, 0), (3, 0), p))

# L D = D L^T, exactly, at pseudorandom rational (q, alpha1, alpha2)
for n in range(2, 7):
    rep = verify_duality(n, 2, num_points=5, seed=n)
    print(f"n = {n}: {len(rep['points'])} points, ok = {rep['ok']}")

# with the asymmetry parameter switched on the identity breaks
rep = verify_duality(4, 2, num_points=2, delta=1, raise_on_failure=False)
print("n = 4, delta = 1:", [pt["nonzero_residuals"] for pt in rep["points"]], "nonzero residuals")
