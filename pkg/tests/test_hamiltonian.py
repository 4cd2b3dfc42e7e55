from fractions import Fraction

import pytest

import reference_n5 as ref
from conftest import Q_POINTS_N5, report5_at, symmetric
from oracles import class_block, pair_block
from typed_asep.exact_arith import LaurentPoly, RationalFunction, matrix_rank
from typed_asep.hamiltonian import (
    WrongKernelDimension,
    canonicalize_ground_state,
    ground_state_support,
    ground_states,
    match_asep,
    match_two_by_two,
    weight_zero_indices,
)
from typed_asep.matrices import SparseMatrix

q = RationalFunction(LaurentPoly.monomial(1))
r = q - q.inverse()


def dense(M, idx, zero=0):
    return [[M.get(i, j, zero) for j in idx] for i in idx]


class TestSmallRanks:
    def test_lambda(self, report3, report4):
        assert report3.Lambda == symmetric(8, 2)
        assert report4.Lambda == symmetric(10, 4, 2)

    @pytest.mark.parametrize("n,census", [(3, {6: 1, 2: 12, 1: 6}), (4, {8: 1, 2: 24, 1: 8})])
    def test_census(self, n, census, request):
        rep = request.getfixturevalue(f"report{n}")
        assert rep.census() == census

    @pytest.mark.parametrize("n", [3, 4])
    def test_one_by_one_blocks_vanish(self, n, request):
        rep = request.getfixturevalue(f"report{n}")
        for b in rep.blocks:
            if len(b) == 1:
                assert rep.H_hat.get(b[0], b[0], RationalFunction(0)).is_zero()

    @pytest.mark.parametrize("n", [3, 4])
    def test_pruned_equals_class_block(self, n, request):
        rep = request.getfixturevalue(f"report{n}")
        assert sorted(rep.pruned) == list(range(n - 1))
        for delta, Lt in rep.pruned.items():
            want = class_block(q, n, delta)
            assert all(Lt.get(i, j, RationalFunction(0)) == want[i][j]
                       for i in range(4) for j in range(4)), delta
            assert rep.matches[delta]

    @pytest.mark.parametrize("n", [3, 4])
    def test_two_by_two_blocks(self, n, request):
        rep = request.getfixturevalue(f"report{n}")
        fwd, back = pair_block(q, n)
        assert len(rep.two_by_two) == 2 * n * (n - 1)
        for _, sub, ok in rep.two_by_two:
            assert ok
            # diag(q, 1)^{-1} sub diag(q, 1) = r^2 L_2
            assert sub.get(0, 1) / q == r ** 2 * fwd
            assert sub.get(1, 0) * q == r ** 2 * back

    def test_ground_states_n3(self, report3):
        g0, g1 = report3.ground_states
        assert g0.support == (1, 2, 4, 5) and g1.support == (0, 1, 3, 4)
        assert g0.vector == [0, -q ** 2, q, 0, -1, q]
        assert g1.vector == [-q ** 2, q, 0, -1, q, 0]

    def test_big_block_rank(self, report4):
        idx = weight_zero_indices(4)
        assert matrix_rank(dense(report4.H_hat, idx, RationalFunction(0))) == 8 - 3


class TestHelpers:
    def test_weight_zero_indices(self):
        assert weight_zero_indices(2) == [0 * 4 + 2, 1 * 4 + 3, 2 * 4 + 0, 3 * 4 + 1]

    def test_support(self):
        assert ground_state_support(5, 0) == (3, 4, 8, 9)
        assert ground_state_support(5, 3) == (0, 1, 5, 6)
        with pytest.raises(ValueError):
            ground_state_support(5, 4)

    def test_canonical_scaling(self, report3):
        from typed_asep.exact_arith import SymbolicField

        g = report3.ground_states[0]
        doubled = [2 * v for v in g.vector]
        assert canonicalize_ground_state(doubled, 3, 0, SymbolicField()).vector == g.vector
        with pytest.raises(ValueError):
            canonicalize_ground_state([1] + [0] * 5, 3, 0, SymbolicField())

    def test_perturbed_block_does_not_match(self, report3):
        Lt = report3.pruned[0]
        bad = SparseMatrix(4, dict(Lt.entries))
        bad.entries[(0, 1)] = bad.entries[(0, 1)] + 1
        assert not match_asep(bad, 3, 0)
        assert match_asep(Lt, 3, 0)

    def test_identity_is_not_a_pair_block(self):
        assert not match_two_by_two(SparseMatrix.identity(2, RationalFunction(1)), 3)

    def test_wrong_kernel(self):
        with pytest.raises(WrongKernelDimension):
            ground_states(SparseMatrix.identity(36, RationalFunction(1)), 3)


@pytest.fixture(scope="module", params=Q_POINTS_N5, ids=str)
def point(request):
    q0 = request.param
    return q0, report5_at(q0)


@pytest.mark.slow
class TestRankFive:
    def test_scalar_and_lambda(self, point):
        q0, rep = point
        assert rep.scalar == ref.SCALAR(q0)
        assert rep.Lambda == ref.LAMBDA(q0)

    def test_census(self, point):
        _, rep = point
        assert rep.census() == {10: 1, 2: 40, 1: 10}
        assert all(rep.H_hat.get(b[0], b[0]) == 0 for b in rep.blocks if len(b) == 1)

    def test_big_block_closed_form(self, point):
        q0, rep = point
        got = dense(rep.H_hat, rep.big_block)
        assert got == ref.block(q0)
        assert got != ref.block(q0, corrected=False)
        assert matrix_rank(got) == 6

    def test_ground_states(self, point):
        q0, rep = point
        assert [g.vector for g in rep.ground_states] == [f(q0) for f in ref.GROUND_STATES]

    def test_pruned(self, point):
        q0, rep = point
        for delta in range(4):
            got = [[rep.pruned[delta].get(i, j) for j in range(4)] for i in range(4)]
            assert got == ref.PRUNED[delta](q0), delta
            assert got == class_block(q0, 5, delta)
            assert rep.matches[delta]

    def test_two_by_two(self, point):
        q0, rep = point
        want = ref.two_by_two(q0)
        assert len(rep.two_by_two) == 40
        for _, sub, ok in rep.two_by_two:
            assert ok
            assert [[sub.get(i, j) for j in range(2)] for i in range(2)] == want


def test_reference_forms_are_consistent():
    # the transcribed closed forms satisfy their own structural claims
    for q0 in (Fraction(3), Fraction(5, 2)):
        for delta in range(4):
            Lt = ref.PRUNED[delta](q0)
            assert all(sum(row) == 0 for row in Lt)
        blk = ref.two_by_two(q0)
        assert blk[0][0] * q0 + blk[0][1] == 0 and blk[1][0] * q0 + blk[1][1] == 0
