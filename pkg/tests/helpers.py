"""Shared small-instance constructors for the test suite.

Everything here is built directly from first principles (matrix units,
permutation tables, polynomial quotients), independent of qfcert.fixtures,
so tests cross-check the package against independent constructions.
"""

import itertools

import numpy as np

from qfcert.algebra import group_algebra, make_algebra
from qfcert.modrep import LeftModule, Bimodule


def mat_units_algebra(p, n):
    dim = n * n

    def idx(a, b):
        return a * n + b

    mul = np.zeros((dim, dim, dim), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    if b == c:
                        mul[idx(a, b), idx(c, d), idx(a, d)] = 1
    unit = np.zeros(dim, dtype=np.int64)
    for a in range(n):
        unit[idx(a, a)] = 1
    return make_algebra(p, mul, unit)


def dual_numbers(p):
    mul = np.zeros((2, 2, 2), dtype=np.int64)
    mul[0, 0, 0] = 1
    mul[0, 1, 1] = 1
    mul[1, 0, 1] = 1
    return make_algebra(p, mul, [1, 0])


def prod_fields(p):
    """F_p x F_p with idempotent basis."""
    mul = np.zeros((2, 2, 2), dtype=np.int64)
    mul[0, 0, 0] = 1
    mul[1, 1, 1] = 1
    return make_algebra(p, mul, [1, 1])


def upper_triangular2(p):
    """2x2 upper triangular matrices, basis (e11, e22, e12)."""
    mul = np.zeros((3, 3, 3), dtype=np.int64)
    mul[0, 0, 0] = 1  # e11 e11
    mul[1, 1, 1] = 1  # e22 e22
    mul[0, 2, 2] = 1  # e11 e12 = e12
    mul[2, 1, 2] = 1  # e12 e22 = e12
    return make_algebra(p, mul, [1, 1, 0])


def cyclic_table(n):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def s3_table():
    perms = list(itertools.permutations(range(3)))

    def compose(q, r):
        return tuple(q[r[i]] for i in range(3))

    return [[perms.index(compose(q, r)) for r in perms] for q in perms]


def group_alg(p, n):
    return group_algebra(p, cyclic_table(n))


def column_module(p, n=2):
    """F_p^n as the natural left module over M_n(F_p)."""
    a = mat_units_algebra(p, n)
    act = np.zeros((n * n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            act[i * n + j, i, j] = 1
    return LeftModule(a, act)


def trivial_module_dualnum(p):
    """F_p with x acting by 0, over F_p[x]/(x^2)."""
    a = dual_numbers(p)
    act = np.zeros((2, 1, 1), dtype=np.int64)
    act[0, 0, 0] = 1
    return LeftModule(a, act)


def simple_modules_prod(p):
    """The two 1-dim simples of F_p x F_p."""
    a = prod_fields(p)
    act1 = np.zeros((2, 1, 1), dtype=np.int64)
    act1[0, 0, 0] = 1
    act2 = np.zeros((2, 1, 1), dtype=np.int64)
    act2[1, 0, 0] = 1
    return LeftModule(a, act1), LeftModule(a, act2)


def unit_bimodule_rs(r_alg, s_alg, phi_matrix, p):
    """S as an (R, S)-bimodule: left through phi, right regular."""
    la = np.stack([s_alg.left_mult_matrix(phi_matrix[:, i]) for i in range(r_alg.dim)])
    return Bimodule(r_alg, s_alg, la % p, s_alg.right_mult)
