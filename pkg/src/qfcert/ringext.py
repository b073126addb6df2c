"""Ring extensions phi: R -> S and their quasi-Frobenius property.

An extension is tested through the two unit bimodules it induces on S:
left via phi / right regular (the (R, S) side), and left regular / right
via phi (the (S, R) side).  The extension is quasi-Frobenius iff either
bimodule is, and the two routes must agree — disagreement is an internal
inconsistency, never a verdict.

``qf_pair_witness`` instantiates the similarity of the induced functors
S (x)_R -  and  Hom_R(S, -)  at a concrete test module X: it tensors the
division certificate S | Hom_R(S,R)^m by X and transports along the
canonical isomorphism  Hom_R(S,R) (x)_R X  ->  Hom_R(S, X), producing an
exactly split pair of S-module maps.
"""

from __future__ import annotations

import numpy as np

from . import linalg, report
from .algebra import Algebra, AlgebraHom, equal_algebras
from .decomp import iso
from .errors import InternalCheckError, UsageError
from .linalg import Mat
from .modrep import (
    Bimodule,
    LeftModule,
    as_bimodule,
    hom_space,
    is_fg_projective,
    left_dual,
    restrict_bimodule,
    tensor_over,
)
from .simdiv import _module_payload, divides, is_qf_bimodule, split_witness_payload


class Extension:
    def __init__(self, hom: AlgebraHom):
        self.hom = hom
        r, s = hom.source, hom.target
        p = r.p
        la = np.stack([s.left_mult_matrix(hom.matrix[:, i]) for i in range(r.dim)]) % p
        self.bimodule_rs = Bimodule(r, s, la, s.right_mult)
        ra = np.stack([s.right_mult_matrix(hom.matrix[:, i]) for i in range(r.dim)]) % p
        self.bimodule_sr = Bimodule(s, r, s.left_mult, ra)

    @property
    def source(self) -> Algebra:
        return self.hom.source

    @property
    def target(self) -> Algebra:
        return self.hom.target

    @property
    def p(self) -> int:
        return self.hom.source.p


def make_extension(hom: AlgebraHom) -> Extension:
    return Extension(hom)


def is_qf_extension(ext: Extension, seed: int = 0) -> report.Outcome:
    """QF test via the (R,S) unit bimodule, cross-checked on the (S,R) one."""
    primary = is_qf_bimodule(ext.bimodule_rs, seed=seed)
    cross = is_qf_bimodule(ext.bimodule_sr, seed=seed)
    out = report.Outcome(report.YES)
    for c in primary.checks:
        out.add(report.Check("target over (source,target): " + c.name, c.condition, c.verdict, c.certificate, c.reason, c.note))
    for c in cross.checks:
        out.add(report.Check("target over (target,source): " + c.name, c.condition, c.verdict, c.certificate, c.reason, c.note))
    if primary.verdict != cross.verdict:
        out.verdict = report.INCONSISTENT
        out.notes.append("the two equivalent unit-bimodule routes disagree")
    else:
        out.verdict = primary.verdict
    return out


def is_frobenius_extension(ext: Extension, seed: int = 0) -> report.Outcome:
    """Frobenius: _R S projective f.g. and S ~ Hom_R(S, R) as (S,R)-bimodules."""
    out = report.Outcome(report.YES)
    w = is_fg_projective(restrict_bimodule(ext.bimodule_rs, "left"))
    if w is None:
        out.verdict = report.NO
        out.add(report.Check("source-side projectivity", "target-projective-over-source", report.NO, reason="no split section onto a free cover exists"))
        out.add(report.Check("dual comparison", "target-isomorphic-to-its-source-dual", report.SKIPPED, reason="projectivity failed"))
        return out
    out.add(report.Check("source-side projectivity", "target-projective-over-source", report.YES, certificate=split_witness_payload(w)))
    d = left_dual(ext.bimodule_rs)
    f = iso(ext.bimodule_sr.carrier, d.carrier, seed=seed)
    if f is None:
        out.verdict = report.NO
        out.add(report.Check("dual comparison", "target-isomorphic-to-its-source-dual", report.NO, reason="the target and its source-dual are not isomorphic bimodules"))
        return out
    cert = {
        "kind": "bimodule-iso",
        "p": ext.p,
        "source": _module_payload(ext.bimodule_sr),
        "target": _module_payload(d),
        "matrix": report.payload_array(f),
    }
    out.add(report.Check("dual comparison", "target-isomorphic-to-its-source-dual", report.YES, certificate=cert))
    return out


def compose_check(alpha: Extension, beta: Extension, seed: int = 0) -> report.Outcome:
    """With beta QF, alpha is QF iff beta . alpha is; vacuous otherwise."""
    if not equal_algebras(alpha.target, beta.source):
        raise UsageError("extensions are not composable")
    out = report.Outcome(report.YES)
    beta_out = is_qf_extension(beta, seed=seed)
    out.add(report.Check("outer extension", "outer-extension-qf", beta_out.verdict))
    if beta_out.verdict == report.INCONSISTENT:
        out.verdict = report.INCONSISTENT
        return out
    if beta_out.verdict != report.YES:
        out.verdict = report.VACUOUS
        out.notes.append("precondition failed: the outer extension is not quasi-Frobenius")
        return out
    alpha_out = is_qf_extension(alpha, seed=seed)
    comp_hom = AlgebraHom(
        alpha.source,
        beta.target,
        linalg.matmul(beta.hom.matrix, alpha.hom.matrix, alpha.p),
    )
    comp_out = is_qf_extension(Extension(comp_hom), seed=seed)
    out.add(report.Check("inner extension", "inner-extension-qf", alpha_out.verdict))
    out.add(report.Check("composite extension", "composite-extension-qf", comp_out.verdict))
    if report.INCONSISTENT in (alpha_out.verdict, comp_out.verdict):
        out.verdict = report.INCONSISTENT
        return out
    if alpha_out.verdict == comp_out.verdict:
        out.verdict = report.YES
        out.notes.append("inner and composite verdicts agree, as the composition law predicts")
    else:
        out.verdict = report.INCONSISTENT
        out.notes.append("composition law violated: inner and composite verdicts differ")
    return out


def _hom_module_over_target(ext: Extension, x_mod: LeftModule):
    """Hom_R(S, X) as a left S-module, (s.h)(s') = h(s' s).

    Returns (hom_space, action tensor of S on hom coordinates).
    """
    p = ext.p
    s_alg = ext.target
    rs_left = restrict_bimodule(ext.bimodule_rs, "left")
    g = hom_space(rs_left, x_mod)
    acts = np.zeros((s_alg.dim, g.k, g.k), dtype=np.int64)
    for s in range(s_alg.dim):
        transformed = np.matmul(g.basis, s_alg.right_mult[s]) % p
        acts[s] = g.coords_batch(transformed)
    return g, acts


def qf_pair_witness(ext: Extension, x_mod: LeftModule, seed: int = 0) -> report.Outcome:
    """Split pair alpha: S(x)_R X -> Hom_R(S,X)^m, alphabar back, at X.

    Requires the extension to be quasi-Frobenius (vacuous otherwise).
    The returned certificate contains both matrices, the S-actions on
    both sides, and m; the composite alphabar . alpha is checked to be
    the identity exactly, and both maps are checked to be S-linear.
    """
    if not equal_algebras(x_mod.algebra, ext.source):
        raise UsageError("test module must be a left module over the extension source")
    p = ext.p
    s_alg = ext.target
    if is_fg_projective(restrict_bimodule(ext.bimodule_rs, "left")) is None:
        return report.Outcome(
            report.VACUOUS,
            notes=["precondition failed: the target is not projective over the source"],
        )
    d_bim = left_dual(ext.bimodule_rs)  # Hom_R(S, R) as an (S, R)-bimodule
    cert = divides(ext.bimodule_sr, d_bim, seed=seed)
    if cert is None:
        return report.Outcome(
            report.VACUOUS,
            notes=["precondition failed: the target does not divide a power of its source-dual"],
        )
    m = cert.n
    dd, ds, dx = d_bim.dim, s_alg.dim, x_mod.dim
    xb = as_bimodule(x_mod)
    lx = tensor_over(ext.source, ext.bimodule_sr, xb)  # S (x)_R X
    dx_t = tensor_over(ext.source, d_bim, xb)  # D (x)_R X
    g, g_acts = _hom_module_over_target(ext, x_mod)
    if g.k != dx_t.dim:
        raise InternalCheckError("hom module and tensor dual have different dimensions")
    # theta0: pure tensor f_t (x) e_j  |->  (s |-> act_X(f_t(s)) e_j)
    hom_basis = d_bim.hom_basis  # (dd, dim R, ds)
    theta0 = linalg.zeros(g.k, dd * dx)
    for t in range(dd):
        weights = np.einsum("rs,rab->sab", hom_basis[t], x_mod.action) % p  # (ds, dx, dx)
        maps = weights.transpose(2, 1, 0)  # (dx maps, dx rows, ds cols)
        theta0[:, t * dx : (t + 1) * dx] = g.coords_batch(maps)
    # well-definedness on the quotient, then invertibility (projectivity)
    resid = linalg.matmul(theta0, (linalg.identity(dd * dx) - linalg.matmul(dx_t.sect, dx_t.proj, p)) % p, p)
    if resid.any():
        raise InternalCheckError("canonical hom transport does not respect the tensor relations")
    theta = linalg.matmul(theta0, dx_t.sect, p)
    theta_inv = linalg.invert(theta, p)
    if theta_inv is None:
        raise InternalCheckError("canonical hom transport is singular despite projectivity")
    eye_x = linalg.identity(dx)
    alpha = linalg.zeros(m * g.k, lx.dim)
    alphabar = linalg.zeros(lx.dim, m * g.k)
    for c in range(m):
        phic = cert.phi[c * dd : (c + 1) * dd]
        psic = cert.psi[:, c * dd : (c + 1) * dd]
        alpha[c * g.k : (c + 1) * g.k] = linalg.matmul_chain(
            p, theta, dx_t.proj, np.kron(phic, eye_x) % p, lx.sect
        )
        alphabar[:, c * g.k : (c + 1) * g.k] = linalg.matmul_chain(
            p, lx.proj, np.kron(psic, eye_x) % p, dx_t.sect, theta_inv
        )
    composite = linalg.matmul(alphabar, alpha, p)
    identity_ok = np.array_equal(composite, linalg.identity(lx.dim))
    # S-linearity of both maps, blockwise
    linear_ok = True
    for s in range(s_alg.dim):
        for c in range(m):
            ablk = alpha[c * g.k : (c + 1) * g.k]
            if not np.array_equal(
                linalg.matmul(ablk, lx.left_acts[s], p), linalg.matmul(g_acts[s], ablk, p)
            ):
                linear_ok = False
            bblk = alphabar[:, c * g.k : (c + 1) * g.k]
            if not np.array_equal(
                linalg.matmul(bblk, g_acts[s], p), linalg.matmul(lx.left_acts[s], bblk, p)
            ):
                linear_ok = False
    verdict = report.YES if (identity_ok and linear_ok) else report.INCONSISTENT
    payload = {
        "kind": "pair-witness",
        "p": p,
        "m": m,
        "alpha": report.payload_array(alpha),
        "alphabar": report.payload_array(alphabar),
        "tensor_side_action": report.payload_array(lx.left_acts),
        "hom_side_action": report.payload_array(g_acts),
        "composite_is_identity": bool(identity_ok),
        "maps_are_linear": bool(linear_ok),
    }
    out = report.Outcome(verdict)
    out.add(
        report.Check(
            "functor pair at test module",
            "tensor-functor-splits-into-hom-functor",
            verdict,
            certificate=payload,
        )
    )
    if verdict == report.INCONSISTENT:
        out.notes.append("witness failed exact verification; this contradicts the certificate")
    return out
