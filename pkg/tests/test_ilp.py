import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triortho import analysis, gf2, ilp

from conftest import brute_dual


def example_witness(inst, z_t=(1, 1, 1, 1)):
    delta = np.zeros((15, 15), dtype=np.uint8)
    delta[:, 7] = 1
    return ilp.Witness(x=(1,) * 15, z_p=(4, 2, 2, 2, 4, 2, 2, 4, 2, 4), z_t=z_t, delta=delta)


@pytest.fixture(scope="module")
def inst15():
    return ilp.build_instance(4, 15, 3)


def test_column_types_order():
    assert ilp.column_types(2).tolist() == [[0, 1], [1, 0], [1, 1]]
    assert ilp.type_index([1, 1, 1, 1]) == 14
    assert ilp.type_index([0, 0, 0, 1]) == 0
    with pytest.raises(ValueError):
        ilp.type_index([0, 0])


def test_build_instance_shapes(inst15):
    assert inst15.num_types == 15
    assert inst15.p_mat.shape == (10, 15)
    assert inst15.t_mat.shape == (4, 15)
    assert inst15.p_index[:5] == ((1, 1), (1, 2), (1, 3), (1, 4), (2, 2))
    assert inst15.t_index == ((1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4))
    # M[i, j] = 1 iff <v_i, v_j> = 0
    for i, j in [(0, 0), (0, 1), (2, 2), (14, 14)]:
        ti, tj = inst15.types[i], inst15.types[j]
        assert inst15.m_mat[i, j] == int(ti @ tj % 2 == 0)


@pytest.mark.parametrize("args", [(0, 5, 1), (13, 20, 2), (3, 0, 1), (3, 5, 0), (3, 5, 6)])
def test_build_instance_rejects_bad_ranges(args):
    with pytest.raises(ValueError):
        ilp.build_instance(*args)


def test_example_witness_verifies(inst15):
    report = ilp.verify_witness(inst15, example_witness(inst15))
    assert report
    assert set(report.checks) == {"L1", "O1", "O2", "W1", "W2", "D=", "D>="}


def test_wrong_triple_slack_fails_o2(inst15):
    report = ilp.verify_witness(inst15, example_witness(inst15, z_t=(0, 0, 0, 0)))
    assert not report.checks["O2"]
    assert all(v for k, v in report.checks.items() if k != "O2")


def test_higher_dual_distance_fails_equality():
    inst = ilp.build_instance(4, 15, 4)
    report = ilp.verify_witness(inst, example_witness(inst))
    assert not report.checks["D="]
    assert report.detail["D="] == "fails at ell=3"


def test_verify_rejects_wrong_shape(inst15):
    w = example_witness(inst15)
    bad = ilp.Witness(x=w.x[:-1], z_p=w.z_p, z_t=w.z_t, delta=w.delta)
    with pytest.raises(ValueError):
        ilp.verify_witness(inst15, bad)


def test_derive_witness_example(inst15):
    w = ilp.derive_witness(inst15, [1] * 15)
    expected = example_witness(inst15)
    assert w.x == expected.x and w.z_p == expected.z_p and w.z_t == expected.z_t
    assert np.array_equal(w.delta, expected.delta)
    assert w.weight_counts() == [1] + [0] * 7 + [15] + [0] * 7


def test_derive_witness_rank_deficient():
    inst = ilp.build_instance(2, 2, 1)
    with pytest.raises(ilp.RankDeficient):
        ilp.derive_witness(inst, [0, 0, 2])


def test_derive_witness_parity():
    inst = ilp.build_instance(2, 3, 1)
    with pytest.raises(ilp.ParityViolation):
        ilp.derive_witness(inst, [1, 1, 1])


def test_derive_witness_dual_distance():
    inst = ilp.build_instance(1, 2, 2)
    # x = (2): matrix (1 1) whose dual {00, 11} has distance 2, fine
    ilp.derive_witness(inst, [2])
    with pytest.raises(ilp.DualDistanceViolation):
        ilp.derive_witness(ilp.build_instance(4, 15, 4), [1] * 15)


def test_derive_witness_input_checks(inst15):
    with pytest.raises(ValueError):
        ilp.derive_witness(inst15, [1] * 14)
    with pytest.raises(ValueError):
        ilp.derive_witness(inst15, [2] * 15)


def test_derive_small_feasible():
    inst = ilp.build_instance(1, 2, 1)
    w = ilp.derive_witness(inst, [2])
    assert ilp.extract_matrix(inst, w).tolist() == [[1, 1]]


def test_extract_example_matrix(inst15, hx15):
    assert np.array_equal(ilp.extract_matrix(inst15, example_witness(inst15)), hx15)


def test_extract_refuses_bad_witness(inst15):
    with pytest.raises(ValueError, match="O2"):
        ilp.extract_matrix(inst15, example_witness(inst15, z_t=(0, 0, 0, 0)))


def test_orbits():
    swap = ilp.orbit_partition(2, [[0, 1], [1, 0]])
    assert sorted(swap.orbits) == [(0, 1), (2,)]
    shift = ilp.orbit_partition(4, ilp.cyclic_shift(4))
    assert [len(o) for o in shift.orbits] == [4, 4, 2, 4, 1]
    ident = ilp.orbit_partition(3, np.eye(3, dtype=np.uint8))
    assert len(ident.orbits) == 7
    with pytest.raises(ValueError):
        ilp.orbit_partition(2, [[1, 1], [1, 1]])


def test_orbits_are_closed_under_generator():
    spec = ilp.orbit_partition(5, ilp.cyclic_shift(5))
    types = ilp.column_types(5)
    for orbit in spec.orbits:
        images = {ilp.type_index(gf2.matvec(spec.generator, types[i])) for i in orbit}
        assert images == set(orbit)
    assert sorted(i for o in spec.orbits for i in o) == list(range(31))


def test_solve_example(inst15):
    res = ilp.solve(inst15)
    assert res.feasible
    assert ilp.verify_witness(inst15, res.witness)
    h = ilp.extract_matrix(inst15, res.witness)
    assert analysis.dual_distance(h) >= 3


@pytest.mark.parametrize("args", [(4, 3, 3), (2, 2, 2)])
def test_solve_infeasible(args):
    res = ilp.solve(ilp.build_instance(*args))
    assert res.status == "infeasible"
    assert res.witness is None


def test_infeasible_by_exhaustion_oracle():
    """Every x with sum 2 over three types fails for (2, 2, 2)."""
    inst = ilp.build_instance(2, 2, 2)
    for x in itertools.product(range(3), repeat=3):
        if sum(x) != 2:
            continue
        with pytest.raises(ilp.InfeasibleAtX):
            ilp.derive_witness(inst, x)


def test_solve_budget(inst15):
    res = ilp.solve(ilp.build_instance(5, 31, 3), max_nodes=3)
    assert res.status == "budget-exhausted"
    assert not res.feasible


def test_solve_deterministic(inst15):
    a = ilp.solve(inst15)
    b = ilp.solve(inst15)
    assert a.witness.x == b.witness.x
    assert (a.nodes, a.leaves) == (b.nodes, b.leaves)


def test_orbit_solution_is_orbit_constant():
    inst = ilp.build_instance(5, 31, 3)
    spec = ilp.orbit_partition(5, ilp.cyclic_shift(5))
    res = ilp.solve(inst, orbit=spec)
    assert res.feasible
    for orbit in spec.orbits:
        assert len({res.witness.x[i] for i in orbit}) == 1
    # also a witness of the unconstrained instance
    assert ilp.verify_witness(inst, res.witness)


def test_solve_cap_limits_values():
    inst = ilp.build_instance(1, 4, 1)
    assert ilp.solve(inst).feasible
    assert ilp.solve(inst, cap=2).status == "infeasible"


def check_pipeline_matrix(inst, h):
    assert analysis.is_triorthogonal(h)
    assert not (h.sum(axis=1) % 2).any()
    assert gf2.rank(h) == inst.k0
    dual = brute_dual(h)
    nonzero = dual[dual.any(axis=1)]
    assert int(nonzero.sum(axis=1).min()) >= inst.d_perp


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(1, 14), st.integers(1, 4))
def test_solver_outputs_satisfy_contract(k0, n, d_perp):
    if d_perp > n:
        return
    inst = ilp.build_instance(k0, n, d_perp)
    res = ilp.solve(inst, max_nodes=200_000)
    if not res.feasible:
        return
    w = res.witness
    report = ilp.verify_witness(inst, w)
    assert report.checks["D>="]
    assert report
    h = ilp.extract_matrix(inst, w)
    check_pipeline_matrix(inst, h)
    # round trip: the matrix reproduces delta, z_P and z_T
    wd = analysis.weight_distribution(h)
    assert list(wd.coeffs) == w.weight_counts()
    rows = h.astype(np.int64)
    pairs = [int(rows[a - 1] @ rows[b - 1]) for a, b in inst.p_index]
    triples = [int((rows[a - 1] * rows[b - 1]) @ rows[c - 1]) for a, b, c in inst.t_index]
    assert pairs == [2 * z for z in w.z_p]
    assert triples == [2 * z for z in w.z_t]
