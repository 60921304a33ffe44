"""Quivers with relations and their finite-dimensional representations."""
from .algebra import (Arrow, BasicAlgebra, InadmissibleRelation, Quiver, QuiverAlgebra,
                      QuiverError, Relation, RelationSet, linear_quiver_algebra, path_algebra)
from .decomposition import (Decomposition, EndomorphismRing, Enumeration, LocalityCertificate,
                            Undecided, decompose, endomorphism_ring, enumerate_indecomposables,
                            find_isomorphism, group_isomorphic, index_of_isomorphic,
                            is_indecomposable, is_isomorphic, locality_certificate, standard_name)
from .homological import (Ext1Data, ProjectiveCover, Resolution, ext1_data, ext_dim, ext_dims,
                          projective_cover, projective_resolution, radical_bases, syzygy, top_dims)
from .module import (Complex, HomSpace, Module, ModuleMorphism, NotAMorphism, RelationViolation,
                     block_morphism, cokernel, column_morphism, complex_from_maps, compose,
                     direct_sum, factor_through, hom_basis, hom_dim, hom_space, identity, image,
                     is_identity, kernel, make_module, rank_of_morphisms, row_morphism, sum_of,
                     zero_morphism)
