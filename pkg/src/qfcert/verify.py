"""Independent re-checking of emitted certificates and reports.

Everything here is re-derived from the payload's own embedded data using
exact matrix arithmetic only — no prover module is imported, so a bug in
a prover cannot hide itself in its own verifier.  Each certificate kind
states concrete matrix identities; this module recomputes them.

Entry points: ``verify_payload`` for one certificate dict,
``verify_report`` for a full report (every certificate attached to a
passing check must verify), both returning (ok, list of reasons).
"""

from __future__ import annotations

import numpy as np

from . import linalg

PASSING = ("yes", "valid")
VERDICTS = ("yes", "no", "vacuous", "inconsistent", "valid", "skipped")


def _arr(obj):
    a = np.array(obj, dtype=np.int64)
    return a


def _fail(reasons, prefix, msg):
    reasons.append(f"{prefix}: {msg}" if prefix else msg)
    return False


def _module_payload(obj):
    """(left_acts, right_acts, dim) from an embedded bimodule payload.

    Shapes are rebuilt explicitly because zero-size arrays flatten when
    serialized (a (0, d) matrix round-trips as []); the reshape raises
    ValueError on genuinely inconsistent data, which callers turn into a
    malformed-payload reason.
    """
    d = int(obj["dim"])
    la = _arr(obj["left_acts"]).reshape(len(obj["left_acts"]), d, d)
    ra = _arr(obj["right_acts"]).reshape(len(obj["right_acts"]), d, d)
    return la, ra, d


def _intertwines(f, source_acts, target_acts, p):
    """f . a_source == a_target . f for every action index."""
    lhs = np.matmul(f, source_acts) % p
    rhs = np.matmul(target_acts, f) % p
    return np.array_equal(lhs, rhs)


def _verify_divides(cert, reasons, prefix):
    try:
        p = int(cert["p"])
        n = int(cert["n"])
        sl, sr, dm = _module_payload(cert["source"])
        tl, tr, dn = _module_payload(cert["target"])
        phi = _arr(cert["phi"]).reshape(n * dn, dm)
        psi = _arr(cert["psi"]).reshape(dm, n * dn)
    except (KeyError, TypeError, ValueError) as exc:
        return _fail(reasons, prefix, f"malformed divides payload ({exc})")
    ok = True
    if not np.array_equal(linalg.matmul(psi, phi, p), linalg.identity(dm)):
        ok = _fail(reasons, prefix, "psi . phi is not the identity")
    for c in range(n):
        phic = phi[c * dn : (c + 1) * dn]
        psic = psi[:, c * dn : (c + 1) * dn]
        for acts_m, acts_n, label in ((sl, tl, "left"), (sr, tr, "right")):
            if not _intertwines(phic, acts_m, acts_n, p):
                ok = _fail(reasons, prefix, f"phi block {c} is not {label}-equivariant")
            if not _intertwines(psic, acts_n, acts_m, p):
                ok = _fail(reasons, prefix, f"psi block {c} is not {label}-equivariant")
    return ok


def _verify_similarity(cert, reasons, prefix):
    try:
        fwd = cert["forward"]
        bwd = cert["backward"]
    except (KeyError, TypeError) as exc:
        return _fail(reasons, prefix, f"malformed similarity payload ({exc})")
    ok = _verify_divides(fwd, reasons, f"{prefix}/forward")
    ok = _verify_divides(bwd, reasons, f"{prefix}/backward") and ok
    # the two halves must talk about the same pair, crosswise
    if fwd.get("source") != bwd.get("target") or fwd.get("target") != bwd.get("source"):
        ok = _fail(reasons, prefix, "forward and backward halves disagree about the modules")
    return ok


def _verify_split_witness(cert, reasons, prefix):
    try:
        p = int(cert["p"])
        n = len(cert["algebra_mul"])
        mul = _arr(cert["algebra_mul"]).reshape(n, n, n)
        d = len(cert["module_action"][0]) if n else 0
        action = _arr(cert["module_action"]).reshape(n, d, d)
        r = len(cert["pi_blocks"])
        pi = _arr(cert["pi_blocks"]).reshape(r, d, n)
        sigma = _arr(cert["sigma_blocks"]).reshape(r, n, d)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        return _fail(reasons, prefix, f"malformed split witness ({exc})")
    left_mult = mul.transpose(0, 2, 1) % p
    total = linalg.zeros(d, d)
    ok = True
    for b in range(r):
        total = (total + linalg.matmul(pi[b], sigma[b], p)) % p
        if not _intertwines(sigma[b], action, left_mult, p):
            ok = _fail(reasons, prefix, f"sigma block {b} is not a module map")
        if not _intertwines(pi[b], left_mult, action, p):
            ok = _fail(reasons, prefix, f"pi block {b} is not a module map")
    if not np.array_equal(total, linalg.identity(d)):
        ok = _fail(reasons, prefix, "sum of pi . sigma is not the identity")
    return ok


def _verify_bimodule_iso(cert, reasons, prefix):
    try:
        p = int(cert["p"])
        sl, sr, dm = _module_payload(cert["source"])
        tl, tr, dn = _module_payload(cert["target"])
        f = _arr(cert["matrix"]).reshape(dn, dm)
    except (KeyError, TypeError, ValueError) as exc:
        return _fail(reasons, prefix, f"malformed bimodule-iso payload ({exc})")
    if dm != dn:
        return _fail(reasons, prefix, f"source and target dimensions differ ({dm} vs {dn})")
    ok = True
    if dm and linalg.invert(f, p) is None:
        ok = _fail(reasons, prefix, "matrix is not invertible")
    if not _intertwines(f, sl, tl, p) or not _intertwines(f, sr, tr, p):
        ok = _fail(reasons, prefix, "matrix does not intertwine the actions")
    return ok


def _verify_pair_witness(cert, reasons, prefix):
    try:
        p = int(cert["p"])
        m = int(cert["m"])
        s = len(cert["tensor_side_action"])
        d = len(cert["tensor_side_action"][0]) if s else 0
        k = len(cert["hom_side_action"][0]) if s else 0
        tacts = _arr(cert["tensor_side_action"]).reshape(s, d, d)
        hacts = _arr(cert["hom_side_action"]).reshape(s, k, k)
        alpha = _arr(cert["alpha"]).reshape(m * k, d)
        alphabar = _arr(cert["alphabar"]).reshape(d, m * k)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        return _fail(reasons, prefix, f"malformed pair witness ({exc})")
    ok = True
    if not np.array_equal(linalg.matmul(alphabar, alpha, p), linalg.identity(d)):
        ok = _fail(reasons, prefix, "composite alphabar . alpha is not the identity")
    for c in range(m):
        ablk = alpha[c * k : (c + 1) * k]
        bblk = alphabar[:, c * k : (c + 1) * k]
        if not _intertwines(ablk, tacts, hacts, p):
            ok = _fail(reasons, prefix, f"alpha block {c} is not equivariant")
        if not _intertwines(bblk, hacts, tacts, p):
            ok = _fail(reasons, prefix, f"alphabar block {c} is not equivariant")
    return ok


def _verify_projective_and_similar(cert, reasons, prefix):
    try:
        proj = cert["projectivity"]
        sim = cert["similarity"]
    except (KeyError, TypeError) as exc:
        return _fail(reasons, prefix, f"malformed payload ({exc})")
    ok = verify_payload(proj, reasons, f"{prefix}/projectivity")
    return verify_payload(sim, reasons, f"{prefix}/similarity") and ok


def _verify_decomposition(cert, reasons, prefix):
    try:
        p = int(cert["p"])
        na = len(cert["module_action"])
        d = len(cert["module_action"][0]) if na else 0
        action = _arr(cert["module_action"]).reshape(na, d, d)
        classes = cert["classes"]
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        return _fail(reasons, prefix, f"malformed decomposition payload ({exc})")
    ok = True
    pairs = []
    total = linalg.zeros(d, d)
    for i, cls in enumerate(classes):
        try:
            dk = int(cls["dim"])
            cact = _arr(cls["action"]).reshape(na, dk, dk)
            injs = [_arr(v).reshape(d, dk) for v in cls["injections"]]
            projs = [_arr(v).reshape(dk, d) for v in cls["projections"]]
        except (KeyError, TypeError, ValueError) as exc:
            return _fail(reasons, prefix, f"malformed class {i} ({exc})")
        if len(injs) != len(projs):
            return _fail(reasons, prefix, f"class {i} has inconsistent shapes")
        for j, (inj, proj) in enumerate(zip(injs, projs)):
            if not _intertwines(inj, cact, action, p):
                ok = _fail(reasons, prefix, f"class {i} copy {j} injection is not a module map")
            if not _intertwines(proj, action, cact, p):
                ok = _fail(reasons, prefix, f"class {i} copy {j} projection is not a module map")
            total = (total + linalg.matmul(inj, proj, p)) % p
            pairs.append((inj, proj, dk))
    if not np.array_equal(total, linalg.identity(d)):
        ok = _fail(reasons, prefix, "sum of injection . projection is not the identity")
    for a, (inja, proja, da) in enumerate(pairs):
        for b, (injb, projb, db) in enumerate(pairs):
            want = linalg.identity(da) if a == b else linalg.zeros(da, db)
            if not np.array_equal(linalg.matmul(proja, injb, p), want):
                ok = _fail(reasons, prefix, f"copies {a} and {b} are not orthogonal idempotents")
    return ok


def _verify_outcome(cert, reasons, prefix):
    checks = cert.get("checks")
    if not isinstance(checks, list):
        return _fail(reasons, prefix, "outcome payload has no check list")
    ok = True
    for i, chk in enumerate(checks):
        if not isinstance(chk, dict) or "verdict" not in chk:
            ok = _fail(reasons, prefix, f"nested check {i} is malformed")
            continue
        if chk["verdict"] in PASSING and chk.get("certificate") is not None:
            ok = verify_payload(chk["certificate"], reasons, f"{prefix}/checks/{i}") and ok
    return ok


_KINDS = {
    "divides": _verify_divides,
    "similarity": _verify_similarity,
    "split-witness": _verify_split_witness,
    "bimodule-iso": _verify_bimodule_iso,
    "pair-witness": _verify_pair_witness,
    "projective-and-similar": _verify_projective_and_similar,
    "decomposition": _verify_decomposition,
    "outcome": _verify_outcome,
}


def verify_payload(cert, reasons=None, prefix="certificate"):
    """Re-check one certificate dict.  Returns ok when reasons is given,
    else the pair (ok, reasons)."""
    collected = [] if reasons is None else reasons
    if not isinstance(cert, dict) or "kind" not in cert:
        ok = _fail(collected, prefix, "certificate is not an object with a kind")
    else:
        handler = _KINDS.get(cert["kind"])
        if handler is None:
            ok = _fail(collected, prefix, f"unknown certificate kind {cert['kind']!r}")
        else:
            try:
                ok = handler(cert, collected, prefix)
            except Exception as exc:  # malformed payloads must not crash the verifier
                ok = _fail(collected, prefix, f"verification raised {type(exc).__name__}: {exc}")
    if reasons is None:
        return ok, collected
    return ok


def verify_report(rep):
    """Structural check plus re-verification of every passing certificate."""
    reasons = []
    if not isinstance(rep, dict):
        return False, ["report is not an object"]
    if isinstance(rep.get("fixtures"), list):
        # battery report: each entry embeds an ordinary report
        ok = True
        for i, item in enumerate(rep["fixtures"]):
            sub = item.get("report") if isinstance(item, dict) else None
            if not isinstance(sub, dict):
                ok = _fail(reasons, f"fixtures/{i}", "missing embedded report")
                continue
            sub_ok, sub_reasons = verify_report(sub)
            if not sub_ok:
                ok = False
                reasons.extend(f"fixtures/{i}: {r}" for r in sub_reasons)
        return ok, reasons
    for key in ("verdict", "checks", "seed", "tool_version"):
        if key not in rep:
            _fail(reasons, "report", f"missing key {key!r}")
    if reasons:
        return False, reasons
    if rep["verdict"] not in VERDICTS[:5]:
        return False, [f"report: unknown verdict {rep['verdict']!r}"]
    if not isinstance(rep["checks"], list):
        return False, ["report: checks is not a list"]
    ok = True
    for i, chk in enumerate(rep["checks"]):
        if not isinstance(chk, dict) or not {"name", "condition", "verdict"} <= set(chk):
            ok = _fail(reasons, f"checks/{i}", "malformed check entry")
            continue
        if chk["verdict"] not in VERDICTS:
            ok = _fail(reasons, f"checks/{i}", f"unknown verdict {chk['verdict']!r}")
            continue
        if chk["verdict"] in PASSING and chk.get("certificate") is not None:
            ok = verify_payload(chk["certificate"], reasons, f"checks/{i}") and ok
    return ok, reasons
