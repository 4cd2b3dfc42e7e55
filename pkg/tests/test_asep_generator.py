from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import class_block, kron_embedding, pair_block
from typed_asep.asep_generator import (
    LOCAL_BASIS,
    TWO_SITE_CLASSES,
    AsepParams,
    DimensionOverflow,
    InvalidParams,
    block_L1,
    block_L2,
    conserved_counts,
    local_generator,
    multi_site_generator,
    occupation,
    rate_positivity_scan,
)
from typed_asep.exact_arith import LaurentPoly, RationalFunction

q = RationalFunction(LaurentPoly.monomial(1))
GRID = [(n, d, L) for n in range(2, 7) for d in range(n - 1) for L in (2, 3, 4)]


def reachable(gen, start):
    seen, todo = {start}, [start]
    while todo:
        i = todo.pop()
        for (a, b), v in gen.entries.items():
            if a == i and b not in seen and v != 0:
                seen.add(b)
                todo.append(b)
    return seen


class TestParams:
    @pytest.mark.parametrize("bad", [dict(q=1, n=3), dict(q=0, n=3), dict(q=-2, n=3),
                                     dict(q=2, n=1), dict(q=2, n=3, delta=2),
                                     dict(q=2, n=3, delta=-1), dict(q="1", n=3)])
    def test_invalid(self, bad):
        with pytest.raises(InvalidParams):
            AsepParams(**bad)

    def test_symbolic_and_strings(self):
        assert AsepParams("symbolic", 3).symbolic
        assert AsepParams("7/3", 3).q == Fraction(7, 3)
        with pytest.raises(InvalidParams):
            AsepParams(q * q, 3)

    def test_occupation(self):
        assert [occupation(s) for s in range(4)] == [(0, 0), (1, 0), (0, 1), (1, 1)]
        with pytest.raises(ValueError):
            occupation(4)
        assert conserved_counts((3, 0, 1, 2)) == (2, 2)


class TestLocal:
    def test_class_block_entry(self):
        p = AsepParams("symbolic", 5, 2)
        gen = local_generator(p)
        assert gen.rate((2, 1), (3, 0)) == q ** -4 * (q ** 10 - q ** 8 + 2)

    @pytest.mark.parametrize("n,delta", [(2, 0), (3, 1), (5, 0), (5, 3), (6, 2)])
    def test_blocks_match_transcription(self, n, delta):
        p = AsepParams("symbolic", n, delta)
        assert block_L1(p) == class_block(q, n, delta)
        fwd, back = pair_block(q, n)
        assert block_L2(p) == [[-fwd, fwd], [back, -back]]

    def test_pair_rates(self):
        gen = local_generator(AsepParams("symbolic", 3))
        s = q ** -5 + q ** 5
        assert gen.rate((1, 0), (0, 1)) == s / q
        assert gen.rate((0, 1), (1, 0)) == q * s
        for a, b in TWO_SITE_CLASSES[1:5]:
            assert gen.rate(a, b) == s / q and gen.rate(b, a) == q * s

    def test_absorbing_rows(self):
        gen = local_generator(AsepParams(2, 4, 1))
        for state in [(0, 0), (1, 1), (2, 2), (3, 3)]:
            i = gen.index_of(state)
            assert all(v == 0 for (a, _), v in gen.entries.items() if a == i)

    def test_communicating_classes(self):
        gen = local_generator(AsepParams(Fraction(3, 2), 4, 1))
        for cls in TWO_SITE_CLASSES:
            idx = {gen.index_of(s) for s in cls}
            for i in idx:
                assert reachable(gen, i) == (idx if len(cls) > 1 else {i})

    def test_numeric_equals_symbolic_at_point(self):
        q0 = Fraction(7, 3)
        sym = local_generator(AsepParams("symbolic", 4, 2))
        num = local_generator(AsepParams(q0, 4, 2))
        assert {k: v.evaluate(q0) for k, v in sym.entries.items() if v.evaluate(q0) != 0} == \
            {k: v for k, v in num.entries.items() if v != 0}

    def test_json(self):
        data = local_generator(AsepParams(2, 3)).to_json()
        assert data["dim"] == 16 and data["basis"][0] == [3, 0]
        assert all(len(t) == 3 for t in data["entries"])


class TestMultiSite:
    @pytest.mark.parametrize("n,delta,L", GRID, ids=lambda v: str(v))
    def test_row_sums_zero(self, n, delta, L):
        gen = multi_site_generator(AsepParams("symbolic", n, delta), L)
        assert all(RationalFunction.coerce(s).is_zero() for s in gen.row_sums())

    def test_two_sites_is_reordering(self):
        p = AsepParams("symbolic", 3, 1)
        assert multi_site_generator(p, 2).reorder(LOCAL_BASIS) == local_generator(p)

    @pytest.mark.parametrize("n,delta", [(3, 0), (4, 2)])
    def test_embedding_oracle(self, n, delta):
        p = AsepParams(Fraction(5, 2), n, delta)
        loc = local_generator(p)
        local = {(LOCAL_BASIS[i], LOCAL_BASIS[j]): v for (i, j), v in loc.entries.items()}
        want = kron_embedding(local, 3, None)
        got = {k: v for k, v in multi_site_generator(p, 3).entries.items() if v != 0}
        assert got == want

    def test_embedded_pair_rate(self):
        p = AsepParams("symbolic", 3)
        gen = multi_site_generator(p, 3)
        s = q ** -5 + q ** 5
        assert gen.rate((1, 0, 0), (0, 1, 0)) == s / q
        assert gen.rate((0, 1, 0), (1, 0, 0)) == q * s
        assert gen.rate((0, 1, 0), (0, 0, 1)) == s / q

    @given(st.integers(2, 5), st.data())
    @settings(max_examples=15, deadline=None)
    def test_conservation(self, n, data):
        delta = data.draw(st.integers(0, n - 2))
        L = data.draw(st.integers(2, 3))
        gen = multi_site_generator(AsepParams(Fraction(3, 2), n, delta), L)
        for (i, j), v in gen.entries.items():
            if v != 0:
                assert conserved_counts(gen.basis[i]) == conserved_counts(gen.basis[j])

    def test_sparsity(self):
        gen = multi_site_generator(AsepParams(2, 3), 4)
        rows = {}
        for (i, _), v in gen.entries.items():
            rows[i] = rows.get(i, 0) + (v != 0)
        assert gen.dim == 256 and max(rows.values()) <= 16

    def test_guards(self):
        with pytest.raises(DimensionOverflow):
            multi_site_generator(AsepParams(2, 3), 5, max_dim=256)
        with pytest.raises(InvalidParams):
            multi_site_generator(AsepParams(2, 3), 1)


class TestPositivity:
    @pytest.mark.parametrize("n,delta", [(n, d) for n in range(2, 7) for d in range(n - 1)])
    def test_scan(self, n, delta):
        rep = rate_positivity_scan(AsepParams(2, n, delta))
        assert rep["ok"] and len(rep["points"]) == 5

    def test_dense_scan(self):
        # every off-diagonal rate is a positive combination, so no q > 0 gives a negative one
        for n, delta in [(2, 0), (5, 3), (6, 0)]:
            qs = [Fraction(k, 8) for k in range(1, 40) if k != 8]
            assert rate_positivity_scan(AsepParams(2, n, delta), qs)["ok"]

    def test_square_entries(self):
        for q0 in (Fraction(1, 3), Fraction(9, 4)):
            gen = local_generator(AsepParams(q0, 4, 0))
            assert gen.rate((2, 1), (1, 2)) == (q0 ** 3 - q0 ** -3) ** 2 >= 0
