import json

import numpy as np
import pytest

from nauslander import exactfield as ef
from nauslander.austransform import (InvariantViolation, _test_family, counit,
                                     endomorphism_algebra, functor_V, functor_V_morphism,
                                     is_effaceable, minimal_presentation,
                                     presentation_to_morphism, restricted_yoneda,
                                     restricted_yoneda_morphism, unit, verify_higher_auslander,
                                     yoneda_on_add)
from nauslander.quivrep import (compose, enumerate_indecomposables, hom_dim, hom_space,
                                identity, is_isomorphic, zero_morphism)
from nauslander.subcategory import SubcategorySpec

from helpers import a2, a4_rad2, by_name, gamma5, semisimple, subcategory, whole_category
from oracles import brute_hom_dim


def _ambient(A, bound=4):
    e = enumerate_indecomposables(A, bound, bound)
    assert e.complete
    return e


def _setup(name):
    """(algebra, enumeration, subcategory, n) for the worked instances."""
    if name == "A2":
        A = a2()
        e = _ambient(A, 2)
        return A, e, SubcategorySpec(A, e.modules, name="all"), 1
    if name == "Gamma5":
        A = gamma5()
        e = _ambient(A)
        mods = by_name(e.modules)
        return A, e, SubcategorySpec(A, [mods[k] for k in ("S1", "S3", "P1", "P2")]), 2
    if name == "semisimple":
        A = semisimple()
        e = _ambient(A, 1)
        return A, e, SubcategorySpec(A, e.modules, name="all"), 3
    if name == "a4_rad2":
        A = a4_rad2()
        e = _ambient(A)
        mods = by_name(e.modules)
        return A, e, SubcategorySpec(A, [mods[k] for k in ("S1", "S4", "P1", "P2", "P3")]), 3
    raise KeyError(name)


INSTANCES = ["A2", "Gamma5", "semisimple", "a4_rad2"]


def test_gamma_dimension_matches_brute_force_hom_count():
    # over F_3 so that Hom spaces can be counted by enumeration
    for make, names in ((a2, None), (gamma5, ["S1", "S3", "P1", "P2"])):
        A = make(3)
        M = whole_category(A, 3) if names is None else subcategory(A, names, 3)
        expected = sum(brute_hom_dim(X, Y) for X in M.members for Y in M.members)
        assert endomorphism_algebra(M).dimension == expected


@pytest.mark.parametrize("name,dim", [("A2", 5), ("Gamma5", 7), ("semisimple", 2),
                                      ("a4_rad2", 9)])
def test_gamma_dimension(name, dim):
    _, _, M, _ = _setup(name)
    G = endomorphism_algebra(M)
    assert G.dimension == dim
    assert G.associativity_defect() is None
    assert sum(P.dim for P in G.projectives()) == dim


@pytest.mark.parametrize("name", INSTANCES)
def test_yoneda_of_a_member_is_its_projective(name):
    _, _, M, _ = _setup(name)
    G = endomorphism_algebra(M)
    for i, X in enumerate(M.members):
        H = restricted_yoneda(X, G)
        P = G.projective(i)
        assert H.dims == P.dims
        assert all(np.array_equal(a, b) for a, b in zip(H.maps, P.maps))


@pytest.mark.parametrize("name", INSTANCES)
def test_yoneda_preserves_hom_dimensions(name):
    _, e, M, _ = _setup(name)
    G = endomorphism_algebra(M)
    for X in e.modules:
        for Y in e.modules:
            assert hom_dim(restricted_yoneda(X, G), restricted_yoneda(Y, G)) == hom_dim(X, Y)


def test_yoneda_of_s2_over_gamma5():
    A, e, M, _ = _setup("Gamma5")
    G = endomorphism_algebra(M)
    assert restricted_yoneda(by_name(e.modules)["S2"], G).dim == 1


def test_yoneda_morphism_is_functorial():
    A, e, M, _ = _setup("Gamma5")
    G = endomorphism_algebra(M)
    rng = np.random.default_rng(0)
    mods = e.modules
    for _ in range(30):
        X, Y, Z = (mods[int(k)] for k in rng.integers(0, len(mods), 3))
        f = hom_space(X, Y).random_element(rng)
        g = hom_space(Y, Z).random_element(rng)
        lhs = restricted_yoneda_morphism(compose(g, f), G)
        rhs = compose(restricted_yoneda_morphism(g, G), restricted_yoneda_morphism(f, G))
        assert lhs.equals(rhs)
    X = mods[0]
    assert restricted_yoneda_morphism(identity(X), G).is_iso()


def test_presentation_to_morphism_identity_and_zero():
    _, _, M, _ = _setup("Gamma5")
    G = endomorphism_algebra(M)
    for s in ([0], [2, 3], [1, 1, 3]):
        P = G.projective_sum(s)
        u = presentation_to_morphism(identity(P), s, s, G)
        assert u.is_iso() and u.equals(identity(u.source))
        z = presentation_to_morphism(zero_morphism(P, P), s, s, G)
        assert z.is_zero()


def test_presentation_round_trip_on_100_maps():
    _, _, M, _ = _setup("Gamma5")
    G = endomorphism_algebra(M)
    rng = np.random.default_rng(4)
    t = len(M.members)
    for _ in range(100):
        src = sorted(int(x) for x in rng.integers(0, t, size=int(rng.integers(1, 3))))
        tgt = sorted(int(x) for x in rng.integers(0, t, size=int(rng.integers(1, 3))))
        X, Y = G.member_sum(src)[0], G.member_sum(tgt)[0]
        u = hom_space(X, Y).random_element(rng)
        phi = yoneda_on_add(u, src, tgt, G)
        back = presentation_to_morphism(phi, src, tgt, G, source=X, target=Y)
        assert back.equals(u)


def test_presentation_rejects_wrong_layout():
    _, _, M, _ = _setup("Gamma5")
    G = endomorphism_algebra(M)
    P = G.projective_sum([0, 1])
    with pytest.raises(ValueError, match="not the projective"):
        presentation_to_morphism(identity(P), [0], [0, 1], G)
    S = G.simple(0)
    with pytest.raises(ValueError):
        presentation_to_morphism(identity(S), [0], [0], G)


@pytest.mark.parametrize("name", INSTANCES)
def test_V_of_representables(name):
    _, _, M, _ = _setup(name)
    G = endomorphism_algebra(M)
    for i, X in enumerate(M.members):
        assert is_isomorphic(functor_V(G.projective(i), G), X, rng=0)
    assert functor_V(G.zero_module(), G).is_zero()
    s = list(range(len(M.members)))
    assert functor_V(G.projective_sum(s), G).dims == G.member_sum(s)[0].dims


@pytest.mark.parametrize("name", INSTANCES)
def test_V_of_simples_is_the_top_relative_to_radical_maps(name):
    _, _, M, _ = _setup(name)
    G = endomorphism_algebra(M)
    p = G.p
    for i, X in enumerate(M.members):
        # dim of M_i modulo the images of all radical maps into it
        covered = 0
        for v in range(len(X.dims)):
            cols = [h.maps[v] for j in range(len(M.members))
                    for h in M.radical_morphisms(j, i) if h.maps[v].size]
            covered += ef.rank(np.hstack(cols), p) if cols else 0
        assert functor_V(G.simple(i), G).dim == X.dim - covered


@pytest.mark.parametrize("name,effaceable", [("A2", 1), ("Gamma5", 1), ("semisimple", 0),
                                             ("a4_rad2", 1)])
def test_effaceable_simples(name, effaceable):
    A, _, M, _ = _setup(name)
    G = endomorphism_algebra(M)
    flags = [is_effaceable(S, G) for S in G.simples()]
    assert sum(flags) == effaceable
    # non-effaceable simples correspond to the simple A-modules
    assert len(flags) - sum(flags) == len(A.simples())


def test_effaceable_s_at_s1_for_a2():
    _, _, M, _ = _setup("A2")
    G = endomorphism_algebra(M)
    eff = [M.names[i] for i, S in enumerate(G.simples()) if is_effaceable(S, G)]
    assert eff == ["S1"]


@pytest.mark.parametrize("name", INSTANCES)
def test_effaceability_characterisations_agree_on_the_family(name):
    _, e, M, _ = _setup(name)
    G = endomorphism_algebra(M)
    fam, _ = _test_family(G, e.modules, 3, np.random.default_rng(0))
    for _, F in fam:
        pres = minimal_presentation(F, G)
        epi = all(ef.rank(m, G.p) == m.shape[0] for m in pres.morphism.maps)
        assert is_effaceable(F, G) == epi == functor_V(F, G).is_zero()


@pytest.mark.parametrize("name", INSTANCES)
def test_adjunction_dimensions(name):
    # dim Hom_Γ(F, U b) = dim Hom_A(V F, b) for every test F and ambient b
    _, e, M, _ = _setup(name)
    G = endomorphism_algebra(M)
    fam, _ = _test_family(G, e.modules, 3, np.random.default_rng(0))
    for _, F in fam:
        VF = functor_V(F, G)
        for b in e.modules:
            assert hom_dim(F, restricted_yoneda(b, G)) == hom_dim(VF, b)


@pytest.mark.parametrize("name", ["A2", "Gamma5"])
def test_unit_and_counit(name):
    _, e, M, _ = _setup(name)
    G = endomorphism_algebra(M)
    for b in e.modules:
        c = counit(b, G)
        assert c.is_iso()                     # V U b ≅ b when M generates
    for i in range(len(M.members)):
        eta = unit(G.projective(i), G)
        assert eta.is_iso()


def test_V_on_morphisms_is_functorial():
    _, e, M, _ = _setup("Gamma5")
    G = endomorphism_algebra(M)
    fam, _ = _test_family(G, e.modules, 3, np.random.default_rng(0))
    mods = [F for _, F in fam]
    rng = np.random.default_rng(3)
    for _ in range(30):
        F1, F2, F3 = (mods[int(k)] for k in rng.integers(0, len(mods), 3))
        a = hom_space(F1, F2).random_element(rng)
        b = hom_space(F2, F3).random_element(rng)
        lhs = functor_V_morphism(compose(b, a), G)
        rhs = compose(functor_V_morphism(b, G), functor_V_morphism(a, G))
        assert lhs.equals(rhs)


def test_semisimple_U_V_is_the_identity_dimensionally():
    _, e, M, _ = _setup("semisimple")
    G = endomorphism_algebra(M)
    fam, _ = _test_family(G, e.modules, 3, np.random.default_rng(0))
    for _, F in fam:
        assert restricted_yoneda(functor_V(F, G), G).dim == F.dim
        assert not is_effaceable(F, G)


@pytest.mark.parametrize("name", INSTANCES)
def test_verification_passes(name):
    A, e, M, n = _setup(name)
    rep = verify_higher_auslander(A, M, n, e, seed=0, instance=name)
    assert rep.passed, {k: v for k, v in rep.groups().items() if not v}
    assert all(rep.groups().values()) and len(rep.groups()) == 6


@pytest.mark.parametrize("n", [1, 2, 3])
def test_semisimple_passes_for_every_n(n):
    A, e, M, _ = _setup("semisimple")
    rep = verify_higher_auslander(A, M, n, e)
    assert rep.passed
    assert rep.summary["effaceable_simples"] == 0
    assert rep.summary["gamma_dimension"] == 2


def test_verification_fails_without_a_member():
    A, e, M, n = _setup("Gamma5")
    rep = verify_higher_auslander(A, M.without(0), n, e)
    assert not rep.passed
    assert not rep.groups()["6_cluster_tilting_in_B"]


def test_gamma5_summary():
    A, e, M, n = _setup("Gamma5")
    s = verify_higher_auslander(A, M, n, e).summary
    assert s["gamma_dimension"] == 7
    assert s["effaceable_simples"] == 1 and s["non_effaceable_simples"] == 3


def test_report_json_is_stable():
    A, e, M, n = _setup("Gamma5")
    a = verify_higher_auslander(A, M, n, e, seed=3).to_json()
    A, e, M, n = _setup("Gamma5")
    b = verify_higher_auslander(A, M, n, e, seed=3).to_json()
    assert a == b
    assert "timings" not in json.loads(a)
    assert "timings" in verify_higher_auslander(A, M, n, e).to_dict(include_timings=True)


def test_invariant_violation_is_a_runtime_error():
    assert issubclass(InvariantViolation, RuntimeError)
