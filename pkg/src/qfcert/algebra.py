"""Finite-dimensional associative unital F_p-algebras by structure constants.

An algebra of dimension n is stored as a tensor ``mul`` of shape (n, n, n)
with ``e_i * e_j = sum_k mul[i, j, k] e_k``, plus the coordinate vector of
the unit.  ``make_algebra`` checks associativity exhaustively (all basis
triples, via the regular representation) and both unit laws.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .errors import (
    AssociativityViolation,
    NotAGroup,
    NotMultiplicative,
    NotUnital,
    UnitViolation,
    UsageError,
)
from .linalg import Mat, PrimeField


class Algebra:
    """Structure-constant algebra over F_p.  Construct via make_algebra."""

    def __init__(self, field: PrimeField, mul, unit, _validate=True):
        self.field = field
        p = field.p
        self.mul = linalg.asmat(mul, p)
        if self.mul.ndim != 3 or len(set(self.mul.shape)) != 1:
            raise UsageError(f"structure constants must be (n,n,n), got {self.mul.shape}")
        self.dim = self.mul.shape[0]
        self.unit = linalg.asmat(unit, p).reshape(-1)
        if self.unit.shape[0] != self.dim:
            raise UsageError("unit vector has wrong length")
        # left_mult[i] is the matrix of x -> e_i x; columns are coordinates.
        self.left_mult = np.ascontiguousarray(self.mul.transpose(0, 2, 1))
        # right_mult[j] : x -> x e_j
        self.right_mult = np.ascontiguousarray(self.mul.transpose(1, 2, 0))
        self._gens = None
        if _validate:
            self._validate()

    # -- validation ------------------------------------------------------

    def _validate(self):
        p = self.field.p
        n = self.dim
        if n == 0:
            raise UsageError("algebras must have positive dimension")
        L = self.left_mult
        # unit laws: 1 * e_i = e_i = e_i * 1.
        lhs = np.einsum("i,iab->ab", self.unit, L) % p
        if not np.array_equal(lhs, linalg.identity(n)):
            bad = int(np.nonzero((lhs - linalg.identity(n)) % p)[1][0])
            raise UnitViolation(bad)
        rhs = np.einsum("j,jab->ab", self.unit, self.right_mult) % p
        if not np.array_equal(rhs, linalg.identity(n)):
            bad = int(np.nonzero((rhs - linalg.identity(n)) % p)[1][0])
            raise UnitViolation(bad)
        # associativity: L_{e_i e_j} == L_i L_j for all pairs, which pins
        # (e_i e_j) e_l = e_i (e_j e_l) for every l.
        prod = np.einsum("iab,jbc->ijac", L, L) % p
        expect = np.einsum("ijk,kac->ijac", self.mul, L) % p
        if not np.array_equal(prod, expect):
            diff = np.nonzero((prod - expect) % p)
            i, j, l = int(diff[0][0]), int(diff[1][0]), int(diff[3][0])
            raise AssociativityViolation(i, j, l)

    # -- arithmetic ------------------------------------------------------

    @property
    def p(self) -> int:
        return self.field.p

    def multiply(self, x, y) -> Mat:
        x = linalg.asmat(x, self.p).reshape(-1)
        y = linalg.asmat(y, self.p).reshape(-1)
        return np.einsum("i,j,ijk->k", x, y, self.mul) % self.p

    def left_mult_matrix(self, x) -> Mat:
        x = linalg.asmat(x, self.p).reshape(-1)
        return np.einsum("i,iab->ab", x, self.left_mult) % self.p

    def right_mult_matrix(self, x) -> Mat:
        x = linalg.asmat(x, self.p).reshape(-1)
        return np.einsum("i,iab->ab", x, self.right_mult) % self.p

    def power(self, x, k: int) -> Mat:
        out = self.unit.copy()
        base = linalg.asmat(x, self.p).reshape(-1)
        while k:
            if k & 1:
                out = self.multiply(out, base)
            base = self.multiply(base, base)
            k >>= 1
        return out

    def generating_indices(self):
        """A (greedy, deterministic) generating subset of the basis.

        Returned as a list of basis indices whose generated unital
        subalgebra is everything.  Used to trim intertwining/relation
        systems; validation never uses this shortcut.
        """
        if self._gens is not None:
            return self._gens
        p = self.p
        gens = []
        span = self.unit.reshape(-1, 1) % p
        span = linalg.column_space_basis(span, p)
        for i in range(self.dim):
            e = linalg.zeros(self.dim, 1)
            e[i, 0] = 1
            if linalg.in_span(span, e, p):
                continue
            gens.append(i)
            span = np.concatenate([span, e], axis=1)
            # close under multiplication
            while True:
                prods = []
                for a in range(span.shape[1]):
                    va = span[:, a]
                    prods.append(
                        np.einsum("i,ijk->jk", va, self.mul).T % p
                        @ span
                        % p
                    )
                cand = np.concatenate([span] + prods, axis=1) % p
                newspan = linalg.column_space_basis(cand, p)
                if newspan.shape[1] == span.shape[1]:
                    break
                span = newspan
            if span.shape[1] == self.dim:
                break
        self._gens = gens
        return gens

    def __repr__(self):
        return f"Algebra(dim={self.dim}, p={self.p})"


def make_algebra(p: int, mul, unit) -> Algebra:
    """Validated algebra from structure constants; the only public entry."""
    return Algebra(PrimeField(p), mul, unit)


def equal_algebras(a: Algebra, b: Algebra) -> bool:
    return (
        a.field == b.field
        and a.dim == b.dim
        and np.array_equal(a.mul, b.mul)
        and np.array_equal(a.unit, b.unit)
    )


def opposite(a: Algebra) -> Algebra:
    """Same space, reversed multiplication.

    Laws are inherited from ``a``, so validation is skipped.
    """
    return Algebra(a.field, a.mul.transpose(1, 0, 2), a.unit, _validate=False)


def tensor_algebra(a: Algebra, b: Algebra) -> Algebra:
    """a (x) b with the lexicographic basis e_i (x) f_j -> index i*dim(b)+j.

    Associativity and the unit law hold factorwise, so validation is skipped
    (it would cost dim^5 work on the product).
    """
    if a.field != b.field:
        raise UsageError("tensor factors live over different fields")
    p = a.p
    na, nb = a.dim, b.dim
    mul = np.einsum("ikm,jln->ijklmn", a.mul, b.mul) % p
    # index order (i,j),(k,l),(m,n) -> reshape with left factor major
    mul = mul.transpose(0, 1, 2, 3, 4, 5).reshape(na * nb, na * nb, na * nb)
    unit = np.kron(a.unit, b.unit) % p
    return Algebra(a.field, mul, unit, _validate=False)


class EnvelopingAlgebra(Algebra):
    """R (x) S^op together with the two canonical embeddings.

    ``left_embed`` sends r to r (x) 1, ``right_embed`` sends s to 1 (x) s
    (the latter is an algebra map out of S^op, i.e. it reverses products
    of S).
    """

    def __init__(self, left: Algebra, right: Algebra):
        if left.field != right.field:
            raise UsageError("enveloping factors live over different fields")
        sop = opposite(right)
        t = tensor_algebra(left, sop)
        super().__init__(t.field, t.mul, t.unit, _validate=False)
        self.left_factor = left
        self.right_factor = right
        nl, nr = left.dim, right.dim
        le = linalg.zeros(nl * nr, nl)
        for i in range(nl):
            le[:, i] = np.kron(np.eye(nl, dtype=np.int64)[i], right.unit) % self.p
        re = linalg.zeros(nl * nr, nr)
        for j in range(nr):
            re[:, j] = np.kron(left.unit, np.eye(nr, dtype=np.int64)[j]) % self.p
        self.left_embed = le
        self.right_embed = re


_env_cache = {}


def enveloping(left: Algebra, right: Algebra) -> EnvelopingAlgebra:
    """Memoized on factor identity: bimodules over the same pair of algebra
    objects share one enveloping algebra (and its generating-set cache)."""
    key = (id(left), id(right))
    hit = _env_cache.get(key)
    if hit is not None and hit.left_factor is left and hit.right_factor is right:
        return hit
    if len(_env_cache) > 256:
        _env_cache.clear()
    env = EnvelopingAlgebra(left, right)
    _env_cache[key] = env
    return env


def check_group_table(table):
    """Validate a multiplication table t[i][j] = index of g_i g_j.

    Returns (table, identity index, inverse list); raises NotAGroup.
    """
    t = np.asarray(table, dtype=np.int64)
    if t.ndim != 2 or t.shape[0] != t.shape[1]:
        raise NotAGroup("table must be square")
    n = t.shape[0]
    if n == 0 or t.min() < 0 or t.max() >= n:
        raise NotAGroup("table entries out of range")
    # identity element
    e = None
    for i in range(n):
        if all(t[i, x] == x and t[x, i] == x for x in range(n)):
            e = i
            break
    if e is None:
        raise NotAGroup("no identity element")
    # associativity
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if t[t[i, j], k] != t[i, t[j, k]]:
                    raise NotAGroup("associativity fails", (i, j, k))
    # inverses
    inv = [-1] * n
    for i in range(n):
        for j in range(n):
            if t[i, j] == e and t[j, i] == e:
                inv[i] = j
                break
        if inv[i] < 0:
            raise NotAGroup("no inverse", i)
    return t, e, inv


def group_algebra(p: int, table) -> Algebra:
    """Group algebra F_p[G] from a multiplication table t[i][j] = index of g_i g_j."""
    t, e, _ = check_group_table(table)
    n = t.shape[0]
    mul = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            mul[i, j, t[i, j]] = 1
    unit = np.zeros(n, dtype=np.int64)
    unit[e] = 1
    return make_algebra(p, mul, unit)


def solve_unit(mul, p: int):
    """Two-sided identity of a multiplication tensor, or None."""
    mul = np.asarray(mul, dtype=np.int64) % p
    n = mul.shape[0]
    if n == 0:
        return None
    lhs = np.concatenate(
        [mul.transpose(1, 2, 0).reshape(n * n, n), mul.transpose(0, 2, 1).reshape(n * n, n)]
    )
    eye = linalg.vec(linalg.identity(n))
    rhs = np.concatenate([eye, eye])
    return linalg.solve_right(lhs, rhs, p)


class AlgebraHom:
    """Unital algebra map, stored as its matrix on coordinates.

    ``matrix`` has shape (dim target, dim source); column i is the image
    of the i-th source basis vector.
    """

    def __init__(self, source: Algebra, target: Algebra, matrix, _validate=True):
        if source.field != target.field:
            raise UsageError("hom endpoints live over different fields")
        self.source = source
        self.target = target
        self.matrix = linalg.asmat(matrix, source.p)
        if self.matrix.shape != (target.dim, source.dim):
            raise UsageError(
                f"hom matrix must be {(target.dim, source.dim)}, got {self.matrix.shape}"
            )
        if _validate:
            self._validate()

    def _validate(self):
        p = self.source.p
        m = self.matrix
        img_unit = linalg.matmul(m, self.source.unit.reshape(-1, 1), p).reshape(-1)
        if not np.array_equal(img_unit, self.target.unit):
            raise NotUnital("map does not send unit to unit")
        # phi(e_i e_j) == phi(e_i) phi(e_j)
        cols = [m[:, i] for i in range(self.source.dim)]
        for i in range(self.source.dim):
            for j in range(self.source.dim):
                lhs = linalg.matmul(m, self.source.mul[i, j].reshape(-1, 1), p).reshape(-1)
                rhs = self.target.multiply(cols[i], cols[j])
                if not np.array_equal(lhs, rhs):
                    raise NotMultiplicative(i, j)

    def apply(self, x) -> Mat:
        return linalg.matmul(self.matrix, linalg.asmat(x, self.source.p).reshape(-1, 1), self.source.p).reshape(-1)

    def compose(self, inner: "AlgebraHom") -> "AlgebraHom":
        """self after inner."""
        if inner.target is not self.source and not equal_algebras(inner.target, self.source):
            raise UsageError("homs are not composable")
        return AlgebraHom(
            inner.source,
            self.target,
            linalg.matmul(self.matrix, inner.matrix, self.source.p),
            _validate=False,
        )

    def __repr__(self):
        return f"AlgebraHom({self.source!r} -> {self.target!r})"


def make_hom(source: Algebra, target: Algebra, matrix) -> AlgebraHom:
    return AlgebraHom(source, target, matrix)


def identity_hom(a: Algebra) -> AlgebraHom:
    return AlgebraHom(a, a, linalg.identity(a.dim), _validate=False)


def field_algebra(p: int) -> Algebra:
    """F_p as a 1-dimensional algebra (the trivial side of one-sided data)."""
    return make_algebra(p, [[[1]]], [1])
