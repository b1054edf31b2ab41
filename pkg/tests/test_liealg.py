from fractions import Fraction

import pytest

from wakimoto.liealg import (
    CartanTypeError,
    build_root_system,
    build_structure_table,
    get_algebra,
    osp22_fixture,
    verify_jacobi,
    verify_killing_invariance,
)


def brute_force_closure(cartan):
    """Independent positive-root oracle: grow sums and keep root-string-valid ones."""
    r = len(cartan)
    simple = [tuple(1 if j == i else 0 for j in range(r)) for i in range(r)]
    roots = set(simple)
    changed = True
    while changed:
        changed = False
        for beta in list(roots):
            for i in range(r):
                cand = tuple(beta[j] + simple[i][j] for j in range(r))
                if cand in roots:
                    continue
                pairing = sum(cartan[i][j] * beta[j] for j in range(r))
                p = 0
                cur = tuple(beta[j] - simple[i][j] for j in range(r))
                while cur in roots:
                    p += 1
                    cur = tuple(cur[j] - simple[i][j] for j in range(r))
                if p - pairing > 0:
                    roots.add(cand)
                    changed = True
    return roots


def test_b2_root_data():
    rs = build_root_system("B2")
    assert rs.rank == 2
    assert len(rs.pos_roots) == 4
    assert rs.dim == 10
    assert rs.hvee == 3
    assert rs.theta == (1, 2)
    assert set(rs.pos_roots) == {(1, 0), (0, 1), (1, 1), (1, 2)}
    # engine order: height then first-simple-root-first
    assert rs.pos_roots == ((1, 0), (0, 1), (1, 1), (1, 2))
    assert rs.root_norm2((1, 2)) == 2
    assert rs.root_norm2((1, 0)) == 2
    assert rs.root_norm2((0, 1)) == 1
    assert rs.root_norm2((1, 1)) == 1
    assert rs.G == ((2, -2), (-2, 4))


def test_a1_root_data():
    rs = build_root_system("A1")
    assert rs.pos_roots == ((1,),)
    assert rs.dim == 3
    assert rs.theta == (1,)
    assert rs.hvee == 2


def test_a2_closure_matches_oracle():
    rs = build_root_system("A2")
    assert set(rs.pos_roots) == brute_force_closure(rs.cartan)
    assert len(rs.pos_roots) == 3
    assert rs.hvee == 3


@pytest.mark.parametrize("label", ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2"])
def test_strange_formula(label):
    rs = build_root_system(label)
    assert rs.dim == 2 * len(rs.pos_roots) + rs.rank
    # rho^2 = hvee * theta^2 * d / 24 with theta^2 = 2
    assert rs.rho_norm2() == Fraction(rs.hvee * 2 * rs.dim, 24)
    # rho . alpha_i^vee = 1 is built in through the Dynkin labels
    for i in range(rs.rank):
        e_i = [Fraction(1) if j == i else Fraction(0) for j in range(rs.rank)]
        labels = rs.root_labels(tuple(1 if j == i else 0 for j in range(rs.rank)))
        coroot = [2 * x / rs.norms[i] for x in labels]
        assert rs.weight_inner(rs.rho_labels, coroot) == 1


def test_rejects_non_finite_type():
    with pytest.raises(CartanTypeError):
        build_root_system([[2, -2], [-2, 2]])  # affine A1^(1)
    with pytest.raises(CartanTypeError):
        build_root_system([[2, 0], [0, 2]])  # disconnected
    with pytest.raises(CartanTypeError):
        build_root_system([[2, -1], [-5, 2]])


def test_b2_structure_constants_match_reference():
    rs = build_root_system("B2")
    tab = build_structure_table(rs)
    a1, a2, a11, th = (1, 0), (0, 1), (1, 1), (1, 2)
    assert tab.fconst(("e", a1), ("e", a2), ("e", a11)) == 1
    assert tab.fconst(("e", a2), ("e", a11), ("e", th)) == 2
    assert tab.fconst(("h", 0), ("e", a11), ("e", a11)) == 1
    assert tab.fconst(("h", 1), ("e", a11), ("e", a11)) == 0
    assert tab.fconst(("h", 0), ("e", th), ("e", th)) == 0
    assert tab.fconst(("h", 1), ("e", th), ("e", th)) == 2
    assert tab.fconst(("e", a11), ("f", a11), ("h", 0)) == 2
    assert tab.fconst(("e", a11), ("f", a11), ("h", 1)) == 1
    assert tab.fconst(("e", th), ("f", th), ("h", 0)) == 1
    assert tab.fconst(("e", th), ("f", th), ("h", 1)) == 1
    # kappa
    for a in rs.pos_roots:
        assert tab.kappa_of(("e", a), ("f", a)) == Fraction(2) / rs.root_norm2(a)
    assert tab.kappa_of(("h", 0), ("h", 0)) == 2
    assert tab.kappa_of(("h", 0), ("h", 1)) == -2


def test_sum_not_root_gives_zero():
    rs = build_root_system("B2")
    tab = build_structure_table(rs)
    assert tab.fconst(("e", (1, 0)), ("e", (1, 1)), ("e", (1, 2))) == 0
    assert tab.bracket(("e", (1, 0)), ("e", (1, 2))) == {}


@pytest.mark.parametrize("label", ["A1", "A2", "B2", "A3", "G2"])
def test_jacobi_holds(label):
    rs = build_root_system(label)
    tab = build_structure_table(rs)
    assert verify_jacobi(tab) == []
    assert verify_killing_invariance(tab) == []


def test_jacobi_detects_sign_flip():
    rs = build_root_system("B2")
    tab = build_structure_table(rs)
    key = (("e", (1, 0)), ("e", (0, 1)))
    tab.f[key] = {("e", (1, 1)): Fraction(-1)}
    assert verify_jacobi(tab) != []


def test_sign_override_still_consistent():
    rs = build_root_system("B2")
    tab = build_structure_table(rs, sign_overrides={(1, 1): -1})
    assert tab.fconst(("e", (1, 0)), ("e", (0, 1)), ("e", (1, 1))) == -1
    assert verify_jacobi(tab) == []
    assert verify_killing_invariance(tab) == []


def test_osp22_fixture_values():
    rs, tab = osp22_fixture()
    a1, a2, a12 = (1, 0), (0, 1), (1, 1)
    assert rs.hvee == 1
    assert rs.parity(a2) == 1 and rs.parity(a12) == 1 and rs.parity(a1) == 0
    assert tab.fconst(("e", a12), ("f", a12), ("h", 0)) == 1
    assert tab.fconst(("e", a12), ("f", a12), ("h", 1)) == 1
    assert tab.fconst(("e", a1), ("e", a2), ("e", a12)) == 1
    assert tab.fconst(("f", a1), ("f", a2), ("f", a12)) == -1
    assert tab.fconst(("e", a2), ("f", a12), ("f", a1)) == 1
    assert tab.fconst(("f", a2), ("e", a12), ("e", a1)) == 1
    assert tab.fconst(("e", a1), ("f", a12), ("f", a2)) == -1
    assert tab.fconst(("f", a1), ("e", a12), ("e", a2)) == 1
    assert tab.kappa_of(("e", a2), ("f", a2)) == 1
    assert tab.kappa_of(("f", a2), ("e", a2)) == -1
    # Weyl vector is -alpha_2: rho labels (1, 0) in this basis
    assert rs.weight_inner((1, 0), (1, 0)) == 0  # isotropic


def test_osp22_graded_jacobi():
    rs, tab = osp22_fixture()
    assert verify_jacobi(tab) == []
    assert verify_killing_invariance(tab) == []


def test_get_algebra_selectors(tmp_path):
    rs, tab = get_algebra("B2")
    assert rs.name == "B2"
    rs2, _ = get_algebra("OSP22")
    assert rs2.name == "OSP22"
    p = tmp_path / "cartan.json"
    p.write_text('{"cartan_matrix": [[2, -1], [-2, 2]], "name": "my-b2"}')
    rs3, tab3 = get_algebra(str(p))
    assert rs3.pos_roots == rs.pos_roots
    assert verify_jacobi(tab3) == []
