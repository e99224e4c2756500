import itertools

import pytest

from schemedouble.errors import NoSolution
from schemedouble.fields import QQ, make_field
from schemedouble.groupschemes import ga_frobenius_subgroup, ga_kernel, quotient_by_normal
from schemedouble.linalg import (
    Echelon,
    annihilator,
    contract,
    mat_identity,
    mat_inverse,
    solve_affine,
    span,
    subspace_intersection,
    subspace_sum,
    unit_vec,
)

F3 = make_field("prime", p=3)
F2 = make_field("prime", p=2)


def test_solve_identity_system():
    A = mat_identity(3, F3)
    part, kern = solve_affine(A, {0: 1, 2: 2}, F3, 3, 3)
    assert part == {0: 1, 2: 2}
    assert kern.dim == 0


def test_solve_zero_system_full_kernel():
    part, kern = solve_affine({}, {}, F3, 3, 3)
    assert part == {}
    assert kern.dim == 3


def test_solve_inconsistent_raises():
    # 0 * x = 1
    with pytest.raises(NoSolution):
        solve_affine({0: {}}, {0: QQ.one()}, QQ, 1, 1)


def test_solver_is_deterministic():
    A = {0: {0: 1, 1: 2}, 1: {0: 2, 1: 1}, 2: {0: 1, 1: 1}}
    out1 = solve_affine(A, {0: 1, 1: 1}, F3, 2, 3)
    out2 = solve_affine(A, {0: 1, 1: 1}, F3, 2, 3)
    assert out1[0] == out2[0]
    assert out1[1].key() == out2[1].key()


def test_frobenius_tower_cleaving_solves_section_system():
    """The closed-form cleaving of the height-four kernel modulo the height-one
    kernel at p=2 satisfies the section and colinearity constraints."""
    G = ga_kernel(4, F2)
    H = ga_frobenius_subgroup(G, 1)
    q = quotient_by_normal(G, H)
    kg = G.group_algebra
    Q = q.hopf
    gamma = {r: unit_vec(2 * r, F2) for r in range(Q.dim)}
    # section: pi(gamma(x)) = x
    for r in range(Q.dim):
        img = {}
        for i, c in gamma[r].items():
            col = q.pi.mat.get(i, {})
            for k, v in col.items():
                img[k] = F2.add(img.get(k, F2.zero()), F2.mul(c, v))
        assert {k: v for k, v in img.items() if v} == unit_vec(r, F2)
    # colinearity: gamma(x_1) (x) x_2 = gamma(x)_1 (x) pi(gamma(x)_2)
    from schemedouble.hopf import t2_axpy, t2_outer
    for r in range(Q.dim):
        lhs = {}
        for (u, v), c in Q.comult[r].items():
            t2_axpy(F2, lhs, c, t2_outer(F2, gamma[u], unit_vec(v, F2)))
        rhs = {}
        for (x, z), c in kg.coproduct(gamma[r]).items():
            pz = q.pi.apply(unit_vec(z, F2))
            if pz:
                t2_axpy(F2, rhs, c, t2_outer(F2, unit_vec(x, F2), pz))
        assert lhs == rhs


def test_subspace_lattice_laws():
    U = span(F3, 4, [{0: 1, 1: 1}, {2: 1}])
    V = span(F3, 4, [{1: 1}, {3: 1}])
    assert subspace_intersection(U, U).key() == U.key()
    S = subspace_sum(U, V)
    for row in U.basis():
        assert S.contains(row)
    I = subspace_intersection(U, V)
    assert S.dim + I.dim == U.dim + V.dim


def test_dimension_formula_over_random_spans():
    vec_pool = [{0: 1}, {1: 1}, {0: 1, 1: 2}, {2: 1, 0: 1}, {3: 1, 1: 1}]
    for i in range(len(vec_pool)):
        for j in range(len(vec_pool)):
            U = span(F3, 4, vec_pool[: i + 1])
            V = span(F3, 4, vec_pool[j:])
            S = subspace_sum(U, V)
            I = subspace_intersection(U, V)
            assert S.dim + I.dim == U.dim + V.dim


def test_delta_span_intersection_in_height_two_kernel():
    # span{d0, d2} meet span{d0, d1} = span{d0} inside k[Ga_2] at p=2
    G = ga_kernel(2, F2)
    U = span(F2, 4, [unit_vec(0, F2), unit_vec(2, F2)])
    V = span(F2, 4, [unit_vec(0, F2), unit_vec(1, F2)])
    I = subspace_intersection(U, V)
    assert I.dim == 1 and I.contains(unit_vec(0, F2))


def test_annihilator_involution():
    U = span(F3, 5, [{0: 1, 4: 2}, {1: 1}])
    assert annihilator(annihilator(U)).key() == U.key()


def test_contract_group_algebra_multiplication():
    # dual-basis product of the height-one kernel is binomial
    G = ga_kernel(1, F3)
    tensor = G.group_algebra.mult
    out = contract(tensor, unit_vec(1, F3), unit_vec(1, F3), F3)
    assert out == {2: 2}  # binom(2,1) = 2
    out = contract(tensor, unit_vec(2, F3), unit_vec(1, F3), F3)
    assert out == {}  # m + n beyond the truncation


def test_contract_with_unit_is_identity():
    G = ga_kernel(2, F3)
    tensor = G.group_algebra.mult
    unit = G.group_algebra.unit
    for i in range(G.order):
        assert contract(tensor, unit, unit_vec(i, F3), F3) == unit_vec(i, F3)
        assert contract(tensor, unit_vec(i, F3), unit, F3) == unit_vec(i, F3)


def test_contract_matches_dense_oracle():
    G = ga_kernel(2, F3)  # dim 9, well under the dense cap
    n = G.order
    tensor = G.group_algebra.mult
    dense = [[[0] * n for _ in range(n)] for _ in range(n)]
    for (i, j), cell in tensor.items():
        for k, c in cell.items():
            dense[i][j][k] = c
    x = {0: 1, 1: 2, 4: 1}
    y = {2: 2, 3: 1}
    out = contract(tensor, x, y, F3)
    expect = [0] * n
    for i in range(n):
        for j in range(n):
            ci = x.get(i, 0)
            cj = y.get(j, 0)
            if ci and cj:
                for k in range(n):
                    expect[k] = (expect[k] + ci * cj * dense[i][j][k]) % 3
    assert out == {k: v for k, v in enumerate(expect) if v}


def test_mat_inverse_roundtrip():
    M = {0: {1: 1}, 1: {0: 1, 1: 1}}
    inv = mat_inverse(F3, M, 2)
    from schemedouble.linalg import mat_compose
    assert mat_compose(F3, inv, M) == mat_identity(2, F3)
    singular = {0: {0: 1}, 1: {0: 2}}
    assert mat_inverse(F3, singular, 2) is None
