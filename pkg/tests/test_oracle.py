import random
from math import comb

import pytest

from cilattice.decompose import Branch, decompose, del_pezzo_witness
from cilattice.lattice import (
    A,
    D,
    E6,
    E8,
    Decomposition,
    GramLattice,
    LatticeError,
    U,
    direct_sum,
    orthogonal_complement,
    unimodular_transform_check,
)
from cilattice.linalg import mat_mul, transpose
from cilattice.oracle import (
    BudgetExhausted,
    IsometrySearchBudget,
    audit,
    audit_passed,
    definite_isometry,
    short_vectors,
)
from cilattice.decompose import lucas_parity

from test_lattice import diag, random_unimodular


def check_witness(g1, g2, res):
    t = [list(r) for r in res.witness]
    assert mat_mul(transpose(t), mat_mul([list(r) for r in g2.gram], t)) == [list(r) for r in g1.gram]


def test_isometry_permuted_a2():
    g1 = A(2).gram()
    g2 = unimodular_transform_check(g1, [[0, 1], [1, 0]])
    res = definite_isometry(g1, g2)
    assert res.isometric
    check_witness(g1, g2, res)


def test_isometry_cubic_surface_e6():
    g1 = orthogonal_complement(diag([1] + [-1] * 6), (3, -1, -1, -1, -1, -1, -1))
    g2 = E6(-1).gram()
    res = definite_isometry(g1, g2)
    assert res.isometric
    check_witness(g1, g2, res)


def test_isometry_cheap_rejection():
    res = definite_isometry(direct_sum([A(1).gram(), A(1).gram()]), A(2).gram())
    assert not res.isometric
    assert "determinant" in res.reason


def test_isometry_proves_non_isometry():
    # both even, rank 4, determinant 16; A1^4 has 8 roots, A3 + <4> has 12
    g1 = direct_sum([A(1).gram()] * 4)
    g2 = direct_sum([A(3).gram(), GramLattice(((4,),))])
    assert len(short_vectors(g1, 2)) == 8 and len(short_vectors(g2, 2)) == 12
    res = definite_isometry(g1, g2)
    assert not res.isometric
    assert res.reason.startswith("exhaustive")
    assert not definite_isometry(g2, g1).isometric


def test_isometry_preconditions():
    with pytest.raises(LatticeError):
        definite_isometry(U().gram(), U().gram())
    with pytest.raises(LatticeError):
        definite_isometry(A(9).gram(), A(9).gram())
    assert not definite_isometry(A(2).gram(), A(2, -1).gram()).isometric
    assert not definite_isometry(A(2).gram(), A(3).gram()).isometric


def test_isometry_budget_exhausted():
    g = E8().gram()
    h = unimodular_transform_check(g, random_unimodular(8, random.Random(3)))
    with pytest.raises(BudgetExhausted):
        definite_isometry(h, g, IsometrySearchBudget(node_limit=5))


@pytest.mark.parametrize("seed", range(12))
def test_isometry_respects_basis_change(seed):
    rng = random.Random(seed)
    comp = rng.choice([A(3), D(4), E6(), E8(), D(5, -1), A(6, -1)])
    g = comp.gram()
    h = unimodular_transform_check(g, random_unimodular(g.rank, rng, steps=12))
    for a, b in [(g, h), (h, g), (h, h)]:
        res = definite_isometry(a, b)
        assert res.isometric
        check_witness(a, b, res)


def test_isometry_symmetric_on_small_pairs():
    lats = [A(4).gram(), D(4).gram(), direct_sum([A(2).gram(), A(2).gram()]),
            direct_sum([A(1).gram(), A(3).gram()]), direct_sum([A(1).gram()] * 4),
            direct_sum([A(3).gram(), GramLattice(((4,),))])]
    for a in lats:
        for b in lats:
            assert definite_isometry(a, b).isometric == definite_isometry(b, a).isometric
            assert definite_isometry(a, b).isometric == (a == b)


def test_short_vectors_counts():
    assert len(short_vectors(E8().gram(), 2)) == 240
    assert len(short_vectors(E8().gram(), 4)) == 2160
    assert len(short_vectors(A(2).gram(), 2)) == 6
    # D4 has 24 roots
    assert len(short_vectors(D(4).gram(), 2)) == 24


# ---------------------------------------------------------------- audit


@pytest.mark.parametrize("degrees,n", [((3,), 4), ((4,), 2), ((2, 2, 2, 2), 2), ((3,), 2), ((2, 2), 2), ((2, 2), 8)])
def test_audit_passes(degrees, n):
    checks = audit(decompose(degrees, n))
    assert audit_passed(checks), [c for c in checks if not c.passed]


def test_audit_k3_details():
    rep = decompose((4,), 2)
    checks = {c.check: c for c in audit(rep)}
    assert checks["parity"].passed
    assert rep.parity.lattice_is_even
    assert rep.signature.s % 8 == 0
    assert checks["mod8"].passed


def test_audit_cubic_surface_certifies_e6():
    checks = {c.check: c for c in audit(decompose((3,), 2))}
    assert checks["witness_isometry"].passed


def test_audit_detects_tampering():
    rep = decompose((3,), 4)
    tampered = Decomposition.of(A(2), (E8(), 2), (U(), 1))
    from dataclasses import replace

    checks = {c.check: c for c in audit(replace(rep, decomposition=tampered))}
    assert not checks["rank"].passed
    assert not checks["signature"].passed
    assert not checks["witness_complement"].passed


def test_audit_does_not_mutate():
    rep = decompose((5,), 2)
    before = rep.to_jsonable()
    audit(rep)
    assert rep.to_jsonable() == before


def test_lucas_parity_exhaustive():
    for a in range(65):
        for b in range(65):
            assert lucas_parity(a, b) == comb(a + b, b) % 2


def test_del_pezzo_four_is_d5():
    res = definite_isometry(del_pezzo_witness(4).core, D(5, -1).gram())
    assert res.isometric
