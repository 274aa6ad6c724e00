import json

import pytest

import cartanrep as cr


def test_roots_and_forms():
    b2 = cr.Datum.named("B2")
    assert sorted(map(tuple, cr.positive_roots(b2))) == [(0, 1), (1, 0), (1, 1), (1, 2)]
    f = cr.forms(b2, [(1, 2)])
    assert f["coxeter"] == [[-1, 1], [-2, 1]]
    assert len(cr.w0_word(b2)) == 4


def test_bad_datum_raises():
    with pytest.raises(cr.MathError):
        cr.Datum([[2, -1], [-2, 2]], [1, 1])
    affine = cr.Datum([[2, -2], [-2, 2]], [1, 1])
    with pytest.raises(cr.MathError):
        cr.w0_word(affine)


def test_root_modules_and_homology():
    g2 = cr.Datum.named("G2")
    mods = cr.root_modules(g2)
    assert sorted(tuple(m.rank) for m in mods) == sorted(map(tuple, cr.positive_roots(g2)))
    for m in mods:
        assert m.relations_hold()
        assert cr.ext1_dim(m, m) == 0
        assert cr.is_indecomposable(m)
    a = cr.random_locally_free(g2, [1, 2], seed=3)
    b = cr.random_locally_free(g2, [2, 1], seed=4)
    assert cr.hom_dim(a, b) - cr.ext1_dim(a, b) == cr.euler_form(g2, [1, 2], [2, 1])


def test_f_polynomial_and_cluster():
    b2 = cr.Datum.named("B2")
    top = [m for m in cr.root_modules(b2) if list(m.rank) == [1, 2]][0]
    poly = cr.f_polynomial(top)
    terms = {tuple(t["e"]): int(t["coeff"]) for t in poly["terms"]}
    assert terms == {(0, 0): 1, (1, 0): 1, (1, 1): 2, (1, 2): 1}
    assert cr.cluster_match(b2) == {"matched": 4, "total": 4, "sign": -1}


def test_pi_modules():
    b2 = cr.Datum.named("B2")
    e1 = cr.generalized_simple(b2, 1, pi=True)
    e2 = cr.generalized_simple(b2, 2, pi=True)
    assert cr.ext1_pi(e1, e2) == cr.ext1_pi(e2, e1) == 2
    x = cr.random_E_filtered(b2, [1, 2, 1], seed=10)
    assert cr.is_E_filtered(x)
    assert not cr.is_crystal(x)
    assert cr.serre_value(x, 1, 2) == "-2"
    again = cr.Module.from_json(json.dumps(x.to_json()))
    assert again.dims == x.dims
