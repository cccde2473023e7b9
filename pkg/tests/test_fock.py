"""Heisenberg group arithmetic and the truncated Bargmann-space model."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gelfand import fock
from gelfand.fock import (
    HeisenbergPoint,
    RegularFunction,
    coefficient_inner_product,
    coefficient_series,
    fock_operator,
    heis_identity,
    heis_inv,
    heis_mul,
    matrix_coefficient,
    multi_indices,
    regular_gram_rank,
    regular_norm_sq,
)

ints = st.integers(min_value=-4, max_value=4)


def int_point(z, reals, imags):
    return HeisenbergPoint(float(z), tuple(complex(a, b) for a, b in zip(reals, imags)))


# ---------------------------------------------------------------------------
# group arithmetic (exact on integer coordinates)
# ---------------------------------------------------------------------------


@given(z=ints, xs=st.tuples(ints, ints), ys=st.tuples(ints, ints))
def test_identity_and_inverse(z, xs, ys):
    g = int_point(z, xs, ys)
    e = heis_identity(2)
    assert heis_mul(g, e) == g
    assert heis_mul(e, g) == g
    assert heis_mul(g, heis_inv(g)) == e


@settings(max_examples=80)
@given(
    data=st.tuples(*(ints for _ in range(9))),
)
def test_associativity_exact_on_integers(data):
    z1, x1, y1, z2, x2, y2, z3, x3, y3 = data
    g1 = int_point(z1, (x1,), (y1,))
    g2 = int_point(z2, (x2,), (y2,))
    g3 = int_point(z3, (x3,), (y3,))
    assert heis_mul(heis_mul(g1, g2), g3) == heis_mul(g1, heis_mul(g2, g3))


@given(xs=st.tuples(ints, ints), ys=st.tuples(ints, ints),
       xs2=st.tuples(ints, ints), ys2=st.tuples(ints, ints))
def test_commutator_is_central_with_doubled_symplectic_form(xs, ys, xs2, ys2):
    g = int_point(0, xs, ys)
    h = int_point(0, xs2, ys2)
    comm = heis_mul(heis_mul(g, h), heis_mul(heis_inv(g), heis_inv(h)))
    pairing = sum(a * b.conjugate() for a, b in zip(g.w, h.w))
    assert comm.w == (0j, 0j)
    assert comm.z == 2 * pairing.imag


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        heis_mul(heis_identity(1), heis_identity(2))


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------


def test_identity_element_gives_identity_matrix():
    op = fock_operator(1, 1.0, heis_identity(1), 8)
    assert np.array_equal(op.matrix, np.eye(9, dtype=complex))


def test_central_elements_act_by_exact_phase():
    z = 0.73
    for t in (0.5, 1.0, -2.0):
        op = fock_operator(1, t, HeisenbergPoint(z, (0j,)), 6)
        expected = complex(math.cos(t * z), math.sin(t * z)) * np.eye(7)
        assert np.array_equal(op.matrix, expected)


def test_rejects_t_zero_and_mismatch():
    with pytest.raises(ValueError):
        fock_operator(1, 0.0, heis_identity(1), 8)
    with pytest.raises(ValueError):
        fock_operator(2, 1.0, heis_identity(1), 8)
    with pytest.raises(ValueError):
        fock_operator(1, 1.0, HeisenbergPoint(0.0, (40 + 0j,)), 8)


def test_matrix_entries_are_graded_lex_contract():
    idx = multi_indices(2, 2)
    assert idx == ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))


def test_truncated_operator_is_unitary():
    g = HeisenbergPoint(0.3, (0.4 - 0.2j,))
    for t in (0.5, 2.0, -1.0):
        op = fock_operator(1, t, g, 20)
        err = np.linalg.norm(op.matrix.conj().T @ op.matrix - np.eye(21))
        assert err < 1e-12


def test_coherent_overlap_matches_series_oracle():
    # operator route vs the normal-ordered series at small displacement
    for t in (0.5, 1.0, 2.0, -1.0):
        for v in (0.5, 0.3 + 0.2j, 0.1 - 0.45j):
            g = HeisenbergPoint(0.0, (v,))
            got = matrix_coefficient(t, (0,), (0,), g, cutoff=20)
            want = coefficient_series(t, (0,), (0,), g)
            assert abs(got - want) < 1e-10
            assert abs(want - math.exp(-abs(t) * abs(v) ** 2 / 2)) < 1e-12


def test_matrix_coefficient_identity_and_center():
    assert matrix_coefficient(1.0, (1,), (1,), heis_identity(1)) == 1.0
    assert matrix_coefficient(1.0, (1,), (2,), heis_identity(1)) == 0.0
    val = matrix_coefficient(1.5, (2,), (2,), HeisenbergPoint(0.9, (0j,)))
    assert abs(val - complex(math.cos(1.35), math.sin(1.35))) < 1e-15


def test_index_beyond_cutoff_rejected():
    op = fock_operator(1, 1.0, heis_identity(1), 4)
    with pytest.raises(ValueError):
        op.entry((5,), (0,))


def test_conjugate_symmetry_under_inverse():
    g = HeisenbergPoint(0.2, (0.3 + 0.1j,))
    for (l, m) in [((0,), (1,)), ((2,), (3,)), ((1,), (1,))]:
        a = matrix_coefficient(1.0, l, m, heis_inv(g), cutoff=20)
        b = matrix_coefficient(1.0, m, l, g, cutoff=20)
        assert abs(a - b.conjugate()) < 1e-10


@pytest.mark.parametrize("t", [1.0, 0.5, -1.0])
def test_representation_property_small_displacements(t):
    # the group law holds on the protected block (degrees <= cutoff/2 in and
    # out); outside it the truncated exponentials are allowed to disagree.
    # negative t exercises the conjugate-variable branch of the action
    cutoff = 20
    g = HeisenbergPoint(0.15, (0.3 + 0.4j,))
    h = HeisenbergPoint(-0.4, (-0.3 - 0.4j,))
    u = fock_operator(1, t, g, cutoff).matrix
    v = fock_operator(1, t, h, cutoff).matrix
    w = fock_operator(1, t, heis_mul(g, h), cutoff).matrix
    keep = [i for i, m in enumerate(multi_indices(1, cutoff)) if sum(m) <= 10]
    diff = (u @ v - w)[np.ix_(keep, keep)]
    assert np.linalg.norm(diff, 2) < 1e-6


def test_two_coordinate_operator_factorizes():
    t = 1.0
    g = HeisenbergPoint(0.0, (0.3 + 0.1j, -0.2 + 0.25j))
    got = matrix_coefficient(t, (1, 0), (0, 1), g, cutoff=12)
    want = coefficient_series(t, (1, 0), (0, 1), g)
    assert abs(got - want) < 1e-9


# ---------------------------------------------------------------------------
# orthogonality integrals
# ---------------------------------------------------------------------------


def test_off_diagonal_coefficients_orthogonal():
    pairs = [((0,), (0,)), ((1,), (0,)), ((2,), (1,)), ((3,), (3,))]
    for t in (0.5, 1.0, 2.0):
        for i, p in enumerate(pairs):
            for q in pairs[i + 1:]:
                val = coefficient_inner_product(t, p, q)
                assert abs(val) < 1e-8


def test_diagonal_value_times_degree_is_constant():
    pairs = [((0,), (0,)), ((1,), (0,)), ((2,), (2,)), ((4,), (1,))]
    values = []
    for t in (0.5, 1.0, 2.0, -1.5):
        for p in pairs:
            val = coefficient_inner_product(t, p, p)
            assert abs(val.imag) < 1e-12
            values.append(val.real * abs(t))
    mean = sum(values) / len(values)
    assert all(abs(v - mean) <= 1e-6 * abs(mean) for v in values)
    # with Lebesgue measure on C the constant is pi
    assert abs(mean - math.pi) < 1e-8


def test_n_two_inner_product_and_pre():
    val = coefficient_inner_product(1.0, ((0, 0), (0, 0)), ((0, 0), (0, 0)))
    assert abs(val - math.pi ** 2) < 1e-6
    with pytest.raises(ValueError):
        coefficient_inner_product(1.0, ((0, 0, 0), (0, 0, 0)), ((0, 0, 0), (0, 0, 0)))


# ---------------------------------------------------------------------------
# regular functions
# ---------------------------------------------------------------------------


def test_regular_norm_values():
    exact, quad = regular_norm_sq(1, 0)
    assert exact == Fraction(1, 2)
    assert abs(quad - 0.5) < 1e-10
    exact, quad = regular_norm_sq(0, 0)
    assert exact == 1
    exact, quad = regular_norm_sq(1, 3)
    assert exact == Fraction(3, 2)
    assert abs(quad - 1.5) < 1e-10


def test_regular_function_eval():
    f = RegularFunction.zero(1)
    assert f.eval(0.7, heis_identity(1)) == 0
    g = RegularFunction.from_term(1, (1,), (2,), (2,))
    assert abs(g.eval(0.7, heis_identity(1)) - math.exp(-0.7)) < 1e-15


def test_regular_function_product_adds_indices():
    a = RegularFunction.from_term(1, (1,), (1,), (0,))
    b = RegularFunction.from_term(1, (0, 1), (2,), (1,))
    prod = a * b
    assert len(prod.terms) == 1
    (key, coeffs), = prod.terms
    assert key == ((3,), (1,))
    assert coeffs == (0, 1)


def test_regular_gram_full_rank_density_proxy():
    terms = []
    for m in range(4):
        for mp in range(4):
            for k in range(5):
                terms.append((k, (m,), (mp,)))
    terms = terms[:50]
    assert regular_gram_rank(1, terms) == len(terms)


def test_regular_function_eval_wrapper():
    f = fock.RegularFunction.from_term(1, (1,), (0,), (0,))
    got = fock.regular_function_eval(f, 0.3, heis_identity(1))
    assert abs(got - math.exp(-0.3)) < 1e-15


# ---------------------------------------------------------------------------
# vectors
# ---------------------------------------------------------------------------


def test_fock_vector_norm_and_basis():
    v = fock.FockVector.basis_vector(1, 8, (3,))
    assert v.norm_sq() == 1.0
    w = fock.FockVector.from_coeffs(1, 8, {(0,): 1.0, (2,): 2j})
    assert abs(w.norm_sq() - 5.0) < 1e-15
    with pytest.raises(ValueError):
        fock.FockVector.basis_vector(1, 4, (5,))


def test_operator_csv_export(tmp_path):
    op = fock_operator(1, 1.0, HeisenbergPoint(0.1, (0.2 + 0.1j,)), 3)
    path = tmp_path / "op.csv"
    fock.operator_to_csv(op, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0].startswith("#")  # index header in graded order
    assert lines[0] == "# 0;1;2;3"
    assert len(lines) == 5
    first = complex(lines[1].split(",")[0].replace("j", "j"))
    assert abs(first - op.matrix[0, 0]) < 1e-15


def test_operator_preserves_inner_products_on_protected_range():
    # unitarity at the vector level: pairings of protected-degree vectors
    # are preserved to well below 1e-8
    t, cutoff = 1.0, 20
    op = fock_operator(1, t, HeisenbergPoint(0.2, (0.4 - 0.1j,)), cutoff)
    u = fock.FockVector.from_coeffs(1, cutoff, {(0,): 1.0, (3,): -0.5j, (9,): 0.25})
    v = fock.FockVector.from_coeffs(1, cutoff, {(1,): 2.0, (6,): 1.0 + 1.0j})
    before = u.inner(v)
    after = op.apply(u).inner(op.apply(v))
    assert abs(after - before) < 1e-8
    assert abs(op.apply(u).norm_sq() - u.norm_sq()) < 1e-10
