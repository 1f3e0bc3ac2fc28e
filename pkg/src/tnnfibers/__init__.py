"""Demazure products, subword complexes and fibers of totally nonnegative factorization maps."""
from .coxeter import CoxeterMatrix, CoxeterSystem, build_system, named_matrix, type_a
from .demazure import demazure_product

__all__ = ["CoxeterMatrix", "CoxeterSystem", "build_system", "named_matrix", "type_a", "demazure_product"]
