"""Divisibility and similarity of bimodules, with checkable certificates.

M divides N (here: M | N^n for the minimal feasible n) when M is a direct
summand of a finite power of N; the certificate is the pair of bimodule
maps phi: M -> N^n and psi: N^n -> M with psi . phi = id_M.  Similarity
means mutual division, i.e. M and N have the same indecomposable support.

The quasi-Frobenius predicate for an (R, S)-bimodule M: both one-sided
restrictions are finitely generated projective and the left dual
Hom_R(M, R) is similar to the right dual Hom_S(M, S) as (S, R)-bimodules.
"""

from __future__ import annotations

import math

import numpy as np

from . import linalg, report
from .algebra import equal_algebras
from .decomp import _iso_indecomposable, decompose, iso
from .errors import InternalCheckError, NotProjectiveAtStage, UsageError
from .linalg import Mat
from .modrep import (
    Bimodule,
    SplitWitness,
    is_fg_projective,
    left_dual,
    restrict_bimodule,
    right_dual,
    tensor_over,
)

import random


def _module_payload(m: Bimodule):
    return {
        "left_acts": report.payload_array(m.left_acts),
        "right_acts": report.payload_array(m.right_acts),
        "dim": m.dim,
    }


def split_witness_payload(w: SplitWitness) -> dict:
    alg = w.module.algebra
    return {
        "kind": "split-witness",
        "p": w.module.p,
        "algebra_mul": report.payload_array(alg.mul),
        "algebra_unit": report.payload_array(alg.unit),
        "module_action": report.payload_array(w.module.action),
        "pi_blocks": report.payload_array(w.pi_blocks),
        "sigma_blocks": report.payload_array(w.sigma_blocks),
    }


class DividesCert:
    """Certificate for M | N^n; all identities re-checked on construction."""

    def __init__(self, source: Bimodule, target: Bimodule, n: int, phi: Mat, psi: Mat):
        self.source = source
        self.target = target
        self.n = n
        self.phi = phi
        self.psi = psi
        ok, reasons = verify_cert(self, source, target)
        if not ok:
            raise InternalCheckError("constructed divides certificate is invalid: " + "; ".join(reasons))

    def payload(self) -> dict:
        return {
            "kind": "divides",
            "p": self.source.p,
            "n": self.n,
            "source": _module_payload(self.source),
            "target": _module_payload(self.target),
            "phi": report.payload_array(self.phi),
            "psi": report.payload_array(self.psi),
            "note": "n is the smallest feasible power",
        }


def verify_cert(cert: DividesCert, source: Bimodule, target: Bimodule):
    """Re-check a divides certificate against the given bimodules.

    Independent of how the certificate was produced: verifies shapes,
    psi . phi = id, and blockwise intertwining with both action families.
    """
    p = source.p
    dm, dn, n = source.dim, target.dim, cert.n
    reasons = []
    if cert.phi.shape != (n * dn, dm):
        reasons.append(f"phi has shape {cert.phi.shape}, expected {(n * dn, dm)}")
    if cert.psi.shape != (dm, n * dn):
        reasons.append(f"psi has shape {cert.psi.shape}, expected {(dm, n * dn)}")
    if reasons:
        return False, reasons
    if not np.array_equal(linalg.matmul(cert.psi, cert.phi, p), linalg.identity(dm)):
        reasons.append("psi . phi is not the identity")
    for c in range(n):
        phic = cert.phi[c * dn : (c + 1) * dn]
        psic = cert.psi[:, c * dn : (c + 1) * dn]
        for acts_m, acts_n, label in (
            (source.left_acts, target.left_acts, "left"),
            (source.right_acts, target.right_acts, "right"),
        ):
            lhs = np.matmul(phic, acts_m) % p
            rhs = np.matmul(acts_n, phic) % p
            if not np.array_equal(lhs, rhs):
                reasons.append(f"phi block {c} does not intertwine the {label} actions")
            lhs = np.matmul(psic, acts_n) % p
            rhs = np.matmul(acts_m, psic) % p
            if not np.array_equal(lhs, rhs):
                reasons.append(f"psi block {c} does not intertwine the {label} actions")
    return (not reasons), reasons


def _require_same_sides(m: Bimodule, n: Bimodule):
    if not (equal_algebras(m.left_alg, n.left_alg) and equal_algebras(m.right_alg, n.right_alg)):
        raise UsageError("bimodules do not share their algebra pair")


def divides(m: Bimodule, n: Bimodule, seed: int = 0):
    """DividesCert for M | N^n (minimal n), or None."""
    _require_same_sides(m, n)
    p = m.p
    if m.dim == 0:
        return DividesCert(m, n, 1, linalg.zeros(n.dim, 0), linalg.zeros(0, n.dim))
    if n.dim == 0:
        return None
    rng = random.Random(seed)
    dm = decompose(m.carrier, seed=seed)
    dn = decompose(n.carrier, seed=seed)
    matches = []
    for sm in dm.summands:
        found = None
        for sn in dn.summands:
            if sn.module.dim != sm.module.dim:
                continue
            g = _iso_indecomposable(sm.module, sn.module, rng)
            if g is not None:
                found = (sn, g)
                break
        if found is None:
            return None
        matches.append((sm, found[0], found[1]))
    power = max(math.ceil(sm.multiplicity / sn.multiplicity) for sm, sn, _ in matches)
    phi = linalg.zeros(power * n.dim, m.dim)
    psi = linalg.zeros(m.dim, power * n.dim)
    for sm, sn, g in matches:
        ginv = linalg.invert(g, p)
        for t in range(sm.multiplicity):
            c, j = divmod(t, sn.multiplicity)
            block = slice(c * n.dim, (c + 1) * n.dim)
            phi[block] = (phi[block] + linalg.matmul_chain(p, sn.injections[j], g, sm.projections[t])) % p
            psi[:, block] = (psi[:, block] + linalg.matmul_chain(p, sm.injections[t], ginv, sn.projections[j])) % p
    return DividesCert(m, n, power, phi, psi)


class SimilarityCert:
    def __init__(self, forward: DividesCert, backward: DividesCert):
        self.forward = forward
        self.backward = backward

    def payload(self) -> dict:
        return {
            "kind": "similarity",
            "forward": self.forward.payload(),
            "backward": self.backward.payload(),
        }


def similar(m: Bimodule, n: Bimodule, seed: int = 0):
    """SimilarityCert (mutual division), or None."""
    fwd = divides(m, n, seed=seed)
    bwd = divides(n, m, seed=seed)
    if (fwd is None) != (bwd is None):
        # one-sided division is perfectly possible; similarity just fails
        return None
    if fwd is None:
        return None
    return SimilarityCert(fwd, bwd)


# ---------------------------------------------------------------------------
# quasi-Frobenius predicates


def _fgp_check(name, condition, module, payload_extra=None):
    w = is_fg_projective(module)
    if w is None:
        return None, report.Check(name, condition, report.NO, reason="no split section onto a free cover exists")
    cert = split_witness_payload(w)
    if payload_extra:
        cert.update(payload_extra)
    return w, report.Check(name, condition, report.YES, certificate=cert)


def is_qf_bimodule(m: Bimodule, seed: int = 0) -> report.Outcome:
    """Quasi-Frobenius test for an (R, S)-bimodule."""
    out = report.Outcome(report.YES)
    wl, cl = _fgp_check(
        "left restriction projective",
        "left-restriction-fg-projective",
        restrict_bimodule(m, "left"),
    )
    out.add(cl)
    wr, cr = _fgp_check(
        "right restriction projective",
        "right-restriction-fg-projective",
        restrict_bimodule(m, "right"),
    )
    out.add(cr)
    if wl is None or wr is None:
        out.verdict = report.NO
        out.add(
            report.Check(
                "dual similarity",
                "left-dual-similar-to-right-dual",
                report.SKIPPED,
                reason="restrictions are not both projective",
            )
        )
        return out
    ld = left_dual(m)
    rd = right_dual(m)
    sim = similar(ld, rd, seed=seed)
    if sim is None:
        out.verdict = report.NO
        out.add(
            report.Check(
                "dual similarity",
                "left-dual-similar-to-right-dual",
                report.NO,
                reason="left and right duals have different indecomposable support",
            )
        )
        return out
    out.add(
        report.Check(
            "dual similarity",
            "left-dual-similar-to-right-dual",
            report.YES,
            certificate=sim.payload(),
        )
    )
    return out


def is_frobenius_bimodule(m: Bimodule, seed: int = 0) -> report.Outcome:
    """Frobenius = projective restrictions + duals actually isomorphic."""
    out = report.Outcome(report.YES)
    wl, cl = _fgp_check(
        "left restriction projective",
        "left-restriction-fg-projective",
        restrict_bimodule(m, "left"),
    )
    out.add(cl)
    wr, cr = _fgp_check(
        "right restriction projective",
        "right-restriction-fg-projective",
        restrict_bimodule(m, "right"),
    )
    out.add(cr)
    if wl is None or wr is None:
        out.verdict = report.NO
        out.add(report.Check("dual isomorphism", "left-dual-isomorphic-to-right-dual", report.SKIPPED, reason="restrictions are not both projective"))
        return out
    ld = left_dual(m)
    rd = right_dual(m)
    f = iso(ld.carrier, rd.carrier, seed=seed)
    if f is None:
        out.verdict = report.NO
        out.add(report.Check("dual isomorphism", "left-dual-isomorphic-to-right-dual", report.NO, reason="duals are not isomorphic as bimodules"))
        return out
    cert = {
        "kind": "bimodule-iso",
        "p": m.p,
        "source": _module_payload(ld),
        "target": _module_payload(rd),
        "matrix": report.payload_array(f),
    }
    out.add(report.Check("dual isomorphism", "left-dual-isomorphic-to-right-dual", report.YES, certificate=cert))
    return out


def dual_sequence(m: Bimodule, depth: int):
    """Iterated duals: positions -depth..depth, 0 = M itself.

    Positive positions iterate the left dual, negative ones the right
    dual.  Before each dualization the side being dualized must be
    finitely generated projective; otherwise NotProjectiveAtStage(k)
    fires with the 1-based stage count and direction.
    """
    if depth < 0:
        raise UsageError("depth must be >= 0")
    stages = {0: m}
    cur = m
    for k in range(1, depth + 1):
        if is_fg_projective(restrict_bimodule(cur, "left")) is None:
            raise NotProjectiveAtStage(k, "left-dual direction")
        cur = left_dual(cur)
        stages[k] = cur
    cur = m
    for k in range(1, depth + 1):
        if is_fg_projective(restrict_bimodule(cur, "right")) is None:
            raise NotProjectiveAtStage(k, "right-dual direction")
        cur = right_dual(cur)
        stages[-k] = cur
    return [(k, stages[k]) for k in sorted(stages)]


def qf_tensor_check(m: Bimodule, n: Bimodule, seed: int = 0) -> report.Outcome:
    """QF (x) QF should be QF; reports agreement (expected: yes)."""
    if not equal_algebras(m.right_alg, n.left_alg):
        raise UsageError("tensor factors do not share the middle algebra")
    out_m = is_qf_bimodule(m, seed=seed)
    out_n = is_qf_bimodule(n, seed=seed)
    out = report.Outcome(report.YES)
    out.add(report.Check("left factor", "first-factor-qf", out_m.verdict))
    out.add(report.Check("right factor", "second-factor-qf", out_n.verdict))
    if out_m.verdict != report.YES or out_n.verdict != report.YES:
        out.verdict = report.VACUOUS
        out.notes.append("precondition failed: both factors must be quasi-Frobenius")
        return out
    t = tensor_over(m.right_alg, m, n)
    out_t = is_qf_bimodule(t, seed=seed)
    for c in out_t.checks:
        out.add(c)
    if out_t.verdict == report.YES:
        out.verdict = report.YES
    else:
        out.verdict = report.INCONSISTENT
        out.notes.append("tensor product of quasi-Frobenius bimodules failed the criterion")
    return out
