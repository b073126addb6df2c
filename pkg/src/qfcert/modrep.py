"""Left modules and bimodules with explicit action matrices.

A left module over an n-dimensional algebra is an action tensor of shape
(n, d, d): ``action[i]`` is the matrix of the action of the i-th basis
element, acting on coordinate columns.  A bimodule over (R, S) stores both
one-sided action families plus the induced left module over the enveloping
algebra R (x) S^op (basis pair (i, j) at index i*dim(S)+j acts by
``left[i] @ right[j]``).

Balanced tensor products M (x)_S N are computed as explicit quotients of
the vector-space tensor product; the quotient basis is the set of
non-pivot coset representatives of the row-reduced relation space, and the
returned object carries the projection/section pair so that callers can
transport maps along the quotient.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .algebra import Algebra, EnvelopingAlgebra, enveloping, equal_algebras, opposite
from .errors import (
    ActionsDoNotCommute,
    InternalCheckError,
    ModuleLawViolation,
    UnitViolation,
    UsageError,
)
from .linalg import Mat


def _validate_action(alg: Algebra, action: Mat):
    p = alg.p
    n, d = action.shape[0], action.shape[1]
    ident = linalg.identity(d)
    u = np.einsum("i,iab->ab", alg.unit, action) % p
    if not np.array_equal(u, ident):
        raise UnitViolation(int(np.nonzero((u - ident) % p)[0][0]) if d else 0)
    for i in range(n):
        lhs = np.matmul(action[i], action) % p  # (n, d, d)
        rhs = np.einsum("jk,kab->jab", alg.mul[i], action) % p
        if not np.array_equal(lhs, rhs):
            j = int(np.nonzero((lhs - rhs) % p)[0][0])
            raise ModuleLawViolation(i, j)


class LeftModule:
    """Finite-dimensional left module given by its action tensor."""

    def __init__(self, algebra: Algebra, action, _validate=True):
        self.algebra = algebra
        p = algebra.p
        self.action = linalg.asmat(action, p)
        if self.action.ndim != 3 or self.action.shape[0] != algebra.dim or self.action.shape[1] != self.action.shape[2]:
            raise UsageError(
                f"action tensor must be ({algebra.dim}, d, d), got {self.action.shape}"
            )
        self.dim = self.action.shape[1]
        if _validate:
            _validate_action(algebra, self.action)

    @property
    def p(self) -> int:
        return self.algebra.p

    def act(self, x) -> Mat:
        """Matrix of the action of an algebra element given by coordinates."""
        x = linalg.asmat(x, self.p).reshape(-1)
        return np.einsum("i,iab->ab", x, self.action) % self.p

    def __repr__(self):
        return f"LeftModule(dim={self.dim} over dim-{self.algebra.dim} algebra, p={self.p})"


def make_module(algebra: Algebra, action) -> LeftModule:
    return LeftModule(algebra, action)


def regular_left(algebra: Algebra) -> LeftModule:
    return LeftModule(algebra, algebra.left_mult, _validate=False)


def equal_modules(m: LeftModule, n: LeftModule) -> bool:
    return equal_algebras(m.algebra, n.algebra) and np.array_equal(m.action, n.action)


def direct_sum(*modules: LeftModule):
    """Direct sum plus the block injection/projection matrices."""
    if not modules:
        raise UsageError("direct_sum needs at least one summand")
    alg = modules[0].algebra
    p = alg.p
    for m in modules[1:]:
        if not equal_algebras(m.algebra, alg):
            raise UsageError("direct_sum over mixed algebras")
    total = sum(m.dim for m in modules)
    action = linalg.zeros(alg.dim * total * total, 1).reshape(alg.dim, total, total)
    offs = []
    o = 0
    for m in modules:
        action[:, o : o + m.dim, o : o + m.dim] = m.action
        offs.append(o)
        o += m.dim
    out = LeftModule(alg, action, _validate=False)
    injs, projs = [], []
    for m, o in zip(modules, offs):
        inj = linalg.zeros(total, m.dim)
        inj[o : o + m.dim] = linalg.identity(m.dim)
        injs.append(inj)
        projs.append(inj.T.copy())
    return out, injs, projs


class HomSpace:
    """A basis of the space of module maps M -> N (matrices act on columns)."""

    def __init__(self, source: LeftModule, target: LeftModule, basis: Mat):
        self.source = source
        self.target = target
        self.basis = basis  # (k, dim N, dim M)
        self.k = basis.shape[0]

    def matrix(self) -> Mat:
        """Basis as columns of a (dimN*dimM, k) matrix of flattened maps."""
        return self.basis.reshape(self.k, self.target.dim * self.source.dim).T

    def coords(self, f: Mat):
        return linalg.solve_right(self.matrix(), linalg.vec(f), self.source.p)

    def coords_batch(self, fs: Mat) -> Mat:
        """Coordinates of a stack (m, dN, dM); columns of the result."""
        targets = fs.reshape(fs.shape[0], self.target.dim * self.source.dim).T
        sol = linalg.solve_right(self.matrix(), targets, self.source.p)
        if sol is None:
            raise InternalCheckError("map expected to lie in hom space does not")
        return sol

    def element(self, coeffs) -> Mat:
        c = linalg.asmat(coeffs, self.source.p).reshape(-1)
        return np.einsum("t,tab->ab", c, self.basis) % self.source.p


def hom_space(source: LeftModule, target: LeftModule) -> HomSpace:
    """All module maps source -> target, via intertwining conditions.

    Constraints are imposed generator-by-generator, shrinking the solution
    space incrementally (equivalent to the full stacked system because the
    intertwining condition is closed under products and the unit acts as
    the identity).
    """
    if not equal_algebras(source.algebra, target.algebra):
        raise UsageError("hom_space endpoints live over different algebras")
    p = source.p
    dm, dn = source.dim, target.dim
    k = dn * dm
    if k == 0:
        return HomSpace(source, target, np.zeros((0, dn, dm), dtype=np.int64))
    v = linalg.identity(k)
    for g in source.algebra.generating_indices():
        cur = v.shape[1]
        if cur == 0:
            break
        stack = v.T.reshape(cur, dn, dm)
        resid = (np.matmul(stack, source.action[g]) - np.matmul(target.action[g], stack)) % p
        coeffs = linalg.nullspace(resid.reshape(cur, k).T, p)
        v = linalg.matmul(v, coeffs, p)
    basis = v.T.reshape(-1, dn, dm)
    return HomSpace(source, target, basis)


class Bimodule:
    """An (R, S)-bimodule; carrier is a left module over R (x) S^op."""

    def __init__(self, left_alg: Algebra, right_alg: Algebra, left_acts, right_acts, env=None, _validate=True):
        if left_alg.field != right_alg.field:
            raise UsageError("bimodule sides live over different fields")
        p = left_alg.p
        self.left_alg = left_alg
        self.right_alg = right_alg
        self.left_acts = linalg.asmat(left_acts, p)
        self.right_acts = linalg.asmat(right_acts, p)
        if self.left_acts.ndim != 3 or self.left_acts.shape[0] != left_alg.dim:
            raise UsageError(f"left action tensor has shape {self.left_acts.shape}")
        if self.right_acts.ndim != 3 or self.right_acts.shape[0] != right_alg.dim:
            raise UsageError(f"right action tensor has shape {self.right_acts.shape}")
        self.dim = self.left_acts.shape[1]
        if self.right_acts.shape[1] != self.dim:
            raise UsageError("left and right actions act on different spaces")
        if _validate:
            _validate_action(left_alg, self.left_acts)
            _validate_action(opposite(right_alg), self.right_acts)
            # compatibility (a m) b = a (m b)
            lhs = np.einsum("iab,jbc->ijac", self.left_acts, self.right_acts) % p
            rhs = np.einsum("jab,ibc->ijac", self.right_acts, self.left_acts) % p
            if not np.array_equal(lhs, rhs):
                w = np.nonzero((lhs - rhs) % p)
                raise ActionsDoNotCommute(int(w[0][0]), int(w[1][0]))
        self.env = env if env is not None else enveloping(left_alg, right_alg)
        carrier_action = (
            np.einsum("iab,jbc->ijac", self.left_acts, self.right_acts) % p
        ).reshape(left_alg.dim * right_alg.dim, self.dim, self.dim)
        # module laws over the enveloping algebra follow from the three
        # validations above, so the carrier skips re-validation.
        self.carrier = LeftModule(self.env, carrier_action, _validate=False)

    @property
    def p(self) -> int:
        return self.left_alg.p

    def __repr__(self):
        return (
            f"Bimodule(dim={self.dim} over ({self.left_alg.dim}, {self.right_alg.dim}), p={self.p})"
        )


def bimodule_from_actions(left_alg, right_alg, left_acts, right_acts, env=None) -> Bimodule:
    return Bimodule(left_alg, right_alg, left_acts, right_acts, env=env)


def regular_bimodule(a: Algebra) -> Bimodule:
    return Bimodule(a, a, a.left_mult, a.right_mult)


def restrict_bimodule(m: Bimodule, side: str) -> LeftModule:
    """One-sided restriction.  'left': over R.  'right': over S^op."""
    if side == "left":
        return LeftModule(m.left_alg, m.left_acts, _validate=False)
    if side == "right":
        return LeftModule(opposite(m.right_alg), m.right_acts, _validate=False)
    raise UsageError(f"side must be 'left' or 'right', got {side!r}")


def as_bimodule(m: LeftModule) -> Bimodule:
    """View a left module as an (A, F_p)-bimodule (trivial right side)."""
    from .algebra import field_algebra

    k = field_algebra(m.p)
    ra = linalg.identity(m.dim).reshape(1, m.dim, m.dim)
    return Bimodule(m.algebra, k, m.action, ra)


def power_bimodule(m: Bimodule, k: int) -> Bimodule:
    """Direct sum of k copies of m."""
    d = m.dim * k
    la = linalg.zeros(m.left_alg.dim * d * d, 1).reshape(m.left_alg.dim, d, d)
    ra = linalg.zeros(m.right_alg.dim * d * d, 1).reshape(m.right_alg.dim, d, d)
    for c in range(k):
        sl = slice(c * m.dim, (c + 1) * m.dim)
        la[:, sl, sl] = m.left_acts
        ra[:, sl, sl] = m.right_acts
    return Bimodule(m.left_alg, m.right_alg, la, ra, env=m.env, _validate=False)


class BalancedTensor(Bimodule):
    """M (x)_S N as an (R, T)-bimodule, with the quotient data attached.

    ``proj``/``sect`` mediate between the full tensor space (dimension
    dim M * dim N, index i*dimN + j for e_i (x) f_j) and the chosen
    quotient basis; ``proj @ sect`` is the identity.
    """

    def __init__(self, middle, m, n, left_alg, right_alg, left_acts, right_acts, proj, sect):
        super().__init__(left_alg, right_alg, left_acts, right_acts)
        self.middle = middle
        self.factor_left = m
        self.factor_right = n
        self.proj = proj
        self.sect = sect

    def pure(self, vm, vn) -> Mat:
        """Class of the pure tensor vm (x) vn in quotient coordinates."""
        p = self.p
        w = np.kron(linalg.asmat(vm, p).reshape(-1), linalg.asmat(vn, p).reshape(-1)) % p
        return linalg.matmul(self.proj, w.reshape(-1, 1), p).reshape(-1)


def balanced_relations(s_alg: Algebra, m: Bimodule, n: Bimodule) -> Mat:
    """Rows spanning the balancing subspace of the full tensor space.

    The subspace is spanned by (m s) (x) n - m (x) (s n) over algebra
    generators s; quotienting the dm*dn space by it gives M (x)_S N.
    """
    p = s_alg.p
    dm, dn = m.dim, n.dim
    eye_m, eye_n = linalg.identity(dm), linalg.identity(dn)
    rel_rows = []
    for g in s_alg.generating_indices():
        diff = (np.kron(m.right_acts[g], eye_n) - np.kron(eye_m, n.left_acts[g])) % p
        rel_rows.append(diff.T)
    if not rel_rows:
        return linalg.zeros(0, dm * dn)
    return np.concatenate(rel_rows, axis=0)


def tensor_over(s_alg: Algebra, m: Bimodule, n: Bimodule) -> BalancedTensor:
    """Balanced tensor product of an (R, S)- and an (S, T)-bimodule."""
    if not (equal_algebras(m.right_alg, s_alg) and equal_algebras(n.left_alg, s_alg)):
        raise UsageError("tensor_over: middle algebra does not match the factors")
    p = s_alg.p
    dm, dn = m.dim, n.dim
    dim0 = dm * dn
    eye_m, eye_n = linalg.identity(dm), linalg.identity(dn)
    rel = balanced_relations(s_alg, m, n)
    proj, sect = linalg.row_space_quotient(rel, dim0, p)
    la = np.stack(
        [linalg.matmul_chain(p, proj, np.kron(m.left_acts[a], eye_n) % p, sect) for a in range(m.left_alg.dim)]
    )
    ra = np.stack(
        [linalg.matmul_chain(p, proj, np.kron(eye_m, n.right_acts[b]) % p, sect) for b in range(n.right_alg.dim)]
    )
    out = BalancedTensor(s_alg, m, n, m.left_alg, n.right_alg, la, ra, proj, sect)
    # spot-check representative independence of the induced actions
    if rel.shape[0]:
        rng = np.random.RandomState(0)
        combo = rel.T @ rng.randint(0, p, size=(rel.shape[0], 3)) % p
        for a in range(min(2, m.left_alg.dim)):
            img = linalg.matmul_chain(p, proj, np.kron(m.left_acts[a], eye_n) % p, combo)
            if img.any():
                raise InternalCheckError("balanced tensor action not well-defined")
    return out


def induced_map(t_source: BalancedTensor, t_target: BalancedTensor, f_left, f_right, p: int) -> Mat:
    """Map induced on balanced tensors by a pair of factor maps."""
    big = np.kron(linalg.asmat(f_left, p), linalg.asmat(f_right, p)) % p
    return linalg.matmul_chain(p, t_target.proj, big, t_source.sect)


def left_dual(m: Bimodule) -> Bimodule:
    """Hom_R(M, R) for an (R, S)-bimodule M, as an (S, R)-bimodule.

    Actions: (s . f . r)(x) = f(x s) r.
    """
    r_alg, s_alg = m.left_alg, m.right_alg
    p = m.p
    h = hom_space(restrict_bimodule(m, "left"), regular_left(r_alg))
    k = h.k
    la = linalg.zeros(s_alg.dim * k * k, 1).reshape(s_alg.dim, k, k)
    for s in range(s_alg.dim):
        transformed = np.matmul(h.basis, m.right_acts[s]) % p
        la[s] = h.coords_batch(transformed)
    ra = linalg.zeros(r_alg.dim * k * k, 1).reshape(r_alg.dim, k, k)
    for r in range(r_alg.dim):
        transformed = np.matmul(r_alg.right_mult[r], h.basis) % p
        ra[r] = h.coords_batch(transformed)
    out = Bimodule(s_alg, r_alg, la, ra)
    out.hom_basis = h.basis
    return out


def right_dual(m: Bimodule) -> Bimodule:
    """Hom_S(M, S) of right-S-linear maps, as an (S, R)-bimodule.

    Actions: (s . g . r)(x) = s g(r x).
    """
    r_alg, s_alg = m.left_alg, m.right_alg
    p = m.p
    h = hom_space(restrict_bimodule(m, "right"), regular_left(opposite(s_alg)))
    k = h.k
    la = linalg.zeros(s_alg.dim * k * k, 1).reshape(s_alg.dim, k, k)
    for s in range(s_alg.dim):
        transformed = np.matmul(s_alg.left_mult[s], h.basis) % p
        la[s] = h.coords_batch(transformed)
    ra = linalg.zeros(r_alg.dim * k * k, 1).reshape(r_alg.dim, k, k)
    for r in range(r_alg.dim):
        transformed = np.matmul(h.basis, m.left_acts[r]) % p
        ra[r] = h.coords_batch(transformed)
    out = Bimodule(s_alg, r_alg, la, ra)
    out.hom_basis = h.basis
    return out


class SplitWitness:
    """Certificate that M is a direct summand of a finite free module.

    ``pi_blocks[b]`` is the b-th block of the projection A^d -> M (a
    (dim M, dim A) matrix, sending a |-> a . m_b for the b-th generator);
    ``sigma_blocks[b]`` is the b-th block of an A-linear section.  The
    defining identities are re-checked on construction.
    """

    def __init__(self, module: LeftModule, pi_blocks: Mat, sigma_blocks: Mat):
        self.module = module
        self.pi_blocks = pi_blocks
        self.sigma_blocks = sigma_blocks
        self.free_rank = pi_blocks.shape[0]
        p = module.p
        d = module.dim
        alg = module.algebra
        total = linalg.zeros(d, d)
        for b in range(self.free_rank):
            total = (total + linalg.matmul(pi_blocks[b], sigma_blocks[b], p)) % p
        if not np.array_equal(total, linalg.identity(d)):
            raise InternalCheckError("split witness: pi . sigma is not the identity")
        for b in range(self.free_rank):
            lhs = np.matmul(sigma_blocks[b], module.action) % p
            rhs = np.matmul(alg.left_mult, sigma_blocks[b]) % p
            if not np.array_equal(lhs, rhs):
                raise InternalCheckError("split witness: sigma is not a module map")
            lhs = np.matmul(pi_blocks[b], alg.left_mult) % p
            rhs = np.matmul(module.action, pi_blocks[b]) % p
            if not np.array_equal(lhs, rhs):
                raise InternalCheckError("split witness: pi is not a module map")


def is_fg_projective(m: LeftModule):
    """Split witness exhibiting M as a summand of A^dim(M), or None.

    The generators are the basis vectors of M; a section is searched for
    inside Hom_A(M, A)^dim(M) by one exact linear solve, so a None answer
    is a proof of non-projectivity (over these generators, hence over any:
    the regular cover by all basis vectors is surjective).
    """
    alg = m.algebra
    p = m.p
    d = m.dim
    if d == 0:
        return SplitWitness(m, np.zeros((0, 0, alg.dim), dtype=np.int64), np.zeros((0, alg.dim, 0), dtype=np.int64))
    h = hom_space(m, regular_left(alg))
    if h.k == 0:
        return None
    pi_blocks = np.stack([m.action[:, :, b].T for b in range(d)]) % p
    cols = []
    for b in range(d):
        prods = np.matmul(pi_blocks[b], h.basis) % p  # (k, d, d)
        cols.append(prods.reshape(h.k, d * d).T)
    cmat = np.concatenate(cols, axis=1)
    sol = linalg.solve_right(cmat, linalg.vec(linalg.identity(d)), p)
    if sol is None:
        return None
    coeffs = sol.reshape(d, h.k)
    sigma_blocks = np.einsum("bt,tnd->bnd", coeffs, h.basis) % p
    return SplitWitness(m, pi_blocks, sigma_blocks)
