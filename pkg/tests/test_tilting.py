import pytest

from nauslander.nabelian import check_axioms
from nauslander.quivrep import enumerate_indecomposables, ext_dims, factor_through, hom_space
from nauslander.subcategory import SubcategorySpec
from nauslander.tilting import (ExtTable, IncompleteEnumeration, approximation_defect,
                                is_n_cluster_tilting, left_approximation,
                                left_approximation_data, maximality_witness, n_rigidity_report,
                                right_approximation, right_approximation_data,
                                search_cluster_tilting)

from helpers import a2, a4_rad2, by_name, gamma5, indecs, linear_quiver_algebra, semisimple


def _ambient(A, bound=4):
    e = enumerate_indecomposables(A, bound, bound)
    assert e.complete
    return e


def _sub(A, e, names):
    mods = by_name(e.modules)
    return SubcategorySpec(A, [mods[n] for n in names], name="+".join(names))


def test_right_approximation_of_s2_is_the_projective_cover():
    A = gamma5()
    e = _ambient(A)
    M = _sub(A, e, ["S1", "S3", "P1", "P2"])
    S2 = by_name(e.modules)["S2"]
    a = right_approximation_data(S2, M)
    assert [M.names[i] for i in a.summands] == ["P2"]
    assert a.morphism.is_epi() and a.minimal
    assert not approximation_defect(a, M)
    left = left_approximation_data(S2, M)
    assert [M.names[i] for i in left.summands] == ["P1"]
    assert left.morphism.is_mono()


def test_approximation_property_by_factoring():
    A = gamma5()
    e = _ambient(A)
    M = _sub(A, e, ["S1", "S3", "P1", "P2"])
    for B in e.modules:
        r = right_approximation(B, M)
        l = left_approximation(B, M)
        for Y in M.members:
            for g in hom_space(Y, B).basis:
                assert factor_through(g, r, "left") is not None
            for g in hom_space(B, Y).basis:
                assert factor_through(g, l, "right") is not None


def test_approximation_of_a_member_is_an_isomorphism():
    A = a4_rad2()
    e = _ambient(A)
    M = _sub(A, e, ["S1", "S4", "P1", "P2", "P3"])
    for X in M.members:
        assert right_approximation(X, M).is_iso()
        assert left_approximation(X, M).is_iso()


def test_non_minimal_approximation_is_larger():
    A = gamma5()
    e = _ambient(A)
    M = _sub(A, e, ["S1", "S3", "P1", "P2"])
    S2 = by_name(e.modules)["S2"]
    big = right_approximation_data(S2, M, minimal=False)
    small = right_approximation_data(S2, M)
    assert big.obj.dim >= small.obj.dim
    assert not approximation_defect(big, M)


def test_rigidity_table_for_gamma5():
    A = gamma5()
    e = _ambient(A)
    rep = n_rigidity_report(_sub(A, e, ["S1", "S3", "P1", "P2"]), 2)
    assert rep.rigid and len(rep.table) == 16
    bad = n_rigidity_report(_sub(A, e, ["S1", "S2", "S3"]), 2)
    assert not bad.rigid
    assert {(d["source"], d["target"]) for d in bad.nonzero()} == {("S1", "S2"), ("S2", "S3")}
    assert n_rigidity_report(_sub(A, e, ["S1"]), 1).table == {}


def test_ext_table_is_lazy_and_cached():
    A = gamma5()
    mods = indecs(A)
    calls = []

    def compute(X, Y, k):
        calls.append((X.name, Y.name))
        return ext_dims(X, Y, k)

    t = ExtTable(mods, 1, compute)
    assert calls == []
    t(0, 1)
    t(0, 1)
    assert len(calls) == 1
    assert not t.vanishes(0, 1, 1)                 # Ext^1(S1, S2) != 0


def test_gamma5_certificate():
    A = gamma5()
    e = _ambient(A)
    cert = is_n_cluster_tilting(_sub(A, e, ["S1", "S3", "P1", "P2"]), 2, e)
    assert cert.is_ct and not cert.conditional
    assert cert.left_orthogonal["S2"] is False and cert.right_orthogonal["S2"] is False
    assert all(cert.generating.values()) and all(cert.cogenerating.values())
    d = cert.to_dict()
    assert d["is_cluster_tilting"] and d["failures"] == []


@pytest.mark.parametrize("make,n,names", [
    (gamma5, 2, ["S1", "S3", "P1", "P2"]),
    (a4_rad2, 3, ["S1", "S4", "P1", "P2", "P3"]),
])
def test_every_single_removal_fails(make, n, names):
    A = make()
    e = _ambient(A)
    M = _sub(A, e, names)
    assert is_n_cluster_tilting(M, n, e).is_ct
    for i in range(len(names)):
        cert = is_n_cluster_tilting(M.without(i), n, e)
        assert not cert.is_ct, names[i]


def test_adding_a_module_breaks_rigidity():
    A = gamma5()
    e = _ambient(A)
    cert = is_n_cluster_tilting(_sub(A, e, ["S1", "S2", "S3", "P1", "P2"]), 2, e)
    assert not cert.is_ct and not cert.rigidity.rigid


def test_search_gamma5():
    A = gamma5()
    found = search_cluster_tilting(A, 2, _ambient(A))
    assert len(found) == 1
    assert sorted(found[0].names) == ["P1", "P2", "S1", "S3"]


def test_search_a4_rad2():
    A = a4_rad2()
    found = search_cluster_tilting(A, 3, _ambient(A))
    assert [sorted(M.names) for M in found] == [["P1", "P2", "P3", "S1", "S4"]]


def test_search_a2_has_no_2ct_but_mod_a_is_1ct():
    A = a2()
    e = _ambient(A, 2)
    assert search_cluster_tilting(A, 2, e) == []
    one = search_cluster_tilting(A, 1, e)
    assert len(one) == 1 and len(one[0]) == 3


def test_search_semisimple_for_all_n():
    A = semisimple()
    e = _ambient(A, 1)
    for n in (1, 2, 3):
        found = search_cluster_tilting(A, n, e)
        assert len(found) == 1 and len(found[0]) == 2


def test_search_a3_n2_is_empty():
    # every 2-CT subcategory contains S1 = I1 and P2, but Ext^1(S1, P2) != 0
    A = linear_quiver_algebra(3)
    e = _ambient(A, 3)
    assert e.complete
    S1 = [X for X in e.modules if X.dims == (1, 0, 0)][0]
    P2 = [X for X in e.modules if X.dims == (0, 1, 1)][0]
    assert ext_dims(S1, P2, 1)[1] == 1
    assert search_cluster_tilting(A, 2, e) == []


def test_incomplete_enumeration_refused():
    A = gamma5()
    e = enumerate_indecomposables(A, 1)              # no declared bound
    assert not e.complete
    with pytest.raises(IncompleteEnumeration):
        search_cluster_tilting(A, 2, e)
    # certification over a partial list is marked conditional
    full = _ambient(A)
    M = _sub(A, full, ["S1", "S3", "P1", "P2"])
    partial = enumerate_indecomposables(A, 2)
    assert is_n_cluster_tilting(M, 2, partial).conditional


def test_maximality_witness_collapses_for_members():
    A = gamma5()
    e = _ambient(A)
    M = _sub(A, e, ["S1", "S3", "P1", "P2"])
    for X in M.members:
        assert maximality_witness(X, M, 2)["in_subcategory"]
    w = maximality_witness(by_name(e.modules)["S2"], M, 2)
    assert not w["in_subcategory"] and w["steps"][0]["mono"]


def test_found_subcategories_satisfy_the_axioms():
    for A, n in ((gamma5(), 2), (a4_rad2(), 3)):
        for M in search_cluster_tilting(A, n, _ambient(A)):
            assert n_rigidity_report(M, n).rigid
            assert check_axioms(M, n, seed=0, per_pair=10, sum_samples=10).passed


@pytest.mark.parametrize("p", [2, 3, 101])
def test_search_does_not_depend_on_the_characteristic(p):
    for make, n, names in ((gamma5, 2, ["P1", "P2", "S1", "S3"]),
                           (a4_rad2, 3, ["P1", "P2", "P3", "S1", "S4"])):
        A = make(p)
        found = search_cluster_tilting(A, n, _ambient(A))
        assert [sorted(M.names) for M in found] == [names]
