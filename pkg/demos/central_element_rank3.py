"""
From a central element to an exclusion process, rank 3
=======================================================

Build the central element of U_q(so(6)), check that it acts as a scalar on
the six-dimensional representation, and read the two-species generator off
the weight-zero block of its action on the tensor square.
"""

from typed_asep.central_element import assemble_central, verify_centrality
from typed_asep.hamiltonian import analyze

n = 3
C = assemble_central(n, "symbolic")
print(f"{len(C.factors)} weight pairs contribute")

# the action on C^6 is a Laurent polynomial times the identity
rep = analyze(n, "symbolic", C=C)
print("scalar:", rep.scalar)
print("central:", verify_centrality(C, n, H=rep.H))

# shifting by the (0, 0) entry leaves one big block plus 2x2 and 1x1 pieces
print("Lambda:", rep.Lambda)
print("block sizes:", rep.census())

# each ground state of the big block conjugates it into a 4x4 generator
for delta, Lt in rep.pruned.items():
    print(f"\ndelta = {delta}, matches the exclusion generator: {rep.matches[delta]}")
    for i in range(4):
        print("   ", [str(Lt.get(i, j)) for j in range(4)])
