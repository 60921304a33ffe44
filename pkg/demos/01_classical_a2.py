"""The n = 1 case on the smallest interesting algebra.

A is the path algebra of 1 -> 2 over F_101.  mod-A has three
indecomposables, so the Auslander algebra Γ = End(S1 ⊕ S2 ⊕ P1) is small
enough to print in full.
"""
from nauslander.austransform import (endomorphism_algebra, functor_V, is_effaceable,
                                     restricted_yoneda, verify_higher_auslander)
from nauslander.quivrep import enumerate_indecomposables, hom_dim, linear_quiver_algebra
from nauslander.subcategory import SubcategorySpec

A = linear_quiver_algebra(2)
enum = enumerate_indecomposables(A, dim_bound=2, declared_max_dim=2)
print("indecomposables:", [(X.name, X.dims) for X in enum.modules], "complete:", enum.complete)

# with n = 1 the whole module category plays the role of M
M = SubcategorySpec(A, enum.modules, name="mod A")
G = endomorphism_algebra(M)
print("dim Γ =", G.dimension)
for b in G.basis:
    print(f"  {b.label:12s} {M.names[b.source]} -> {M.names[b.target]}")

# the Hom table that adds up to dim Γ
for X in M.members:
    print("  Hom(%s, -):" % X.name, [hom_dim(X, Y) for Y in M.members])

# the restricted Yoneda functor sends members to indecomposable projectives
for i, X in enumerate(M.members):
    print(f"U({X.name}) has dims {restricted_yoneda(X, G).dims}; "
          f"projective {i} has dims {G.projective(i).dims}")

# exactly one simple Γ-module dies under V: the one at the non-projective S1
for i, S in enumerate(G.simples()):
    print(f"simple at {M.names[i]}: V = {functor_V(S, G).dims}, "
          f"effaceable = {is_effaceable(S, G)}")

rep = verify_higher_auslander(A, M, 1, enum, instance="A2")
for group, ok in rep.groups().items():
    print(f"{group:28s} {'pass' if ok else 'FAIL'}")
