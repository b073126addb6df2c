"""Divisibility/similarity tests, cross-checked against the span oracle."""

import numpy as np
import pytest

from helpers import (
    dual_numbers,
    group_alg,
    mat_units_algebra,
    prod_fields,
    simple_modules_prod,
    trivial_module_dualnum,
    unit_bimodule_rs,
)
from oracles import divides_enumeration_oracle, divides_oracle, similar_oracle
from qfcert import linalg, report
from qfcert.algebra import field_algebra
from qfcert.errors import NotProjectiveAtStage
from qfcert.modrep import (
    as_bimodule,
    direct_sum,
    regular_bimodule,
    regular_left,
)
from qfcert.simdiv import (
    DividesCert,
    divides,
    dual_sequence,
    is_frobenius_bimodule,
    is_qf_bimodule,
    qf_tensor_check,
    similar,
    verify_cert,
)


def sum_module(*mods):
    tot, _, _ = direct_sum(*mods)
    return as_bimodule(tot)


def test_divides_self_trivial():
    p = 5
    m = regular_bimodule(group_alg(p, 2))
    c = divides(m, m)
    assert c is not None and c.n == 1
    ok, reasons = verify_cert(c, m, m)
    assert ok, reasons


def test_divides_simple_in_sum_but_not_conversely():
    p = 5
    s1, s2 = simple_modules_prod(p)
    b1 = as_bimodule(s1)
    b12 = sum_module(s1, s2)
    c = divides(b1, b12)
    assert c is not None and c.n == 1
    assert divides(b12, b1) is None
    assert divides_oracle(b1, b12) is True
    assert divides_oracle(b12, b1) is False


def test_divides_minimal_power():
    # p = 7: End(S1 + 2 S2) is 5-dimensional and the radical guard needs p > 5
    p = 7
    s1, s2 = simple_modules_prod(p)
    m = sum_module(s1, s2, s2)  # S1 + 2 S2
    n = sum_module(s1, s2)
    c = divides(m, n)
    assert c is not None and c.n == 2
    back = divides(n, m)
    assert back is not None and back.n == 1
    sim = similar(m, n)
    assert sim is not None


def test_similarity_matches_oracle_on_small_corpus():
    p = 5
    s1, s2 = simple_modules_prod(p)
    dn = dual_numbers(p)
    reg_dn = as_bimodule(regular_left(dn))
    triv_dn = as_bimodule(trivial_module_dualnum(p))
    corpus = [
        (as_bimodule(s1), as_bimodule(s2)),
        (as_bimodule(s1), sum_module(s1, s1)),
        (sum_module(s1, s2), sum_module(s2, s1)),
        (reg_dn, triv_dn),
        (triv_dn, triv_dn),
        (reg_dn, reg_dn),
    ]
    for a, b in corpus:
        got = divides(a, b) is not None
        want = divides_oracle(a, b)
        assert got == want, (a, b)
        got_sim = similar(a, b) is not None
        want_sim = similar_oracle(a, b)
        assert got_sim == want_sim


def test_span_oracle_agrees_with_literal_enumeration():
    p = 3  # keep the enumeration tiny
    mul = np.zeros((1, 1, 1), dtype=np.int64)
    mul[0, 0, 0] = 1
    s1, s2 = simple_modules_prod(p)
    pairs = [
        (as_bimodule(s1), as_bimodule(s1)),
        (as_bimodule(s1), as_bimodule(s2)),
    ]
    for a, b in pairs:
        assert divides_oracle(a, b) == divides_enumeration_oracle(a, b)


def test_verify_cert_rejects_tampering():
    p = 5
    m = regular_bimodule(group_alg(p, 2))
    c = divides(m, m)
    c.phi = (c.phi + 1) % p
    ok, reasons = verify_cert(c, m, m)
    assert not ok and reasons


def test_qf_bimodule_regular_always_yes():
    # A as an (A, A)-bimodule is QF for every A, even a non-QF algebra:
    # both duals are isomorphic to A itself.
    p = 5
    from helpers import upper_triangular2

    for alg in (group_alg(p, 2), dual_numbers(p), upper_triangular2(p)):
        out = is_qf_bimodule(regular_bimodule(alg))
        assert out.verdict == report.YES
        frob = is_frobenius_bimodule(regular_bimodule(alg))
        assert frob.verdict == report.YES


def test_qf_bimodule_trivial_module_fails_on_projectivity():
    p = 5
    dn = dual_numbers(p)
    k = field_algebra(p)
    # F5 as a (dualnum, F5)-bimodule: left via the quotient, right regular
    la = np.zeros((2, 1, 1), dtype=np.int64)
    la[0, 0, 0] = 1
    from qfcert.modrep import Bimodule

    b = Bimodule(dn, k, la, np.ones((1, 1, 1), dtype=np.int64))
    out = is_qf_bimodule(b)
    assert out.verdict == report.NO
    assert any(c.verdict == report.NO and "projective" in c.condition for c in out.checks)


def test_qf_bimodule_unit_extension_group_algebra():
    p = 5
    k = field_algebra(p)
    s = group_alg(p, 2)
    phi = np.array([[1], [0]], dtype=np.int64)  # unit embedding F5 -> F5[C2]
    b = unit_bimodule_rs(k, s, phi, p)
    out = is_qf_bimodule(b)
    assert out.verdict == report.YES
    # certificates exist for all three checks
    assert len(out.certificates()) == 3


def test_dual_sequence_regular():
    p = 5
    m = regular_bimodule(group_alg(p, 2))
    seq = dual_sequence(m, 2)
    assert [k for k, _ in seq] == [-2, -1, 0, 1, 2]
    assert all(b.dim == 2 for _, b in seq)


def test_dual_sequence_stops_on_nonprojective():
    p = 5
    dn = dual_numbers(p)
    k = field_algebra(p)
    la = np.zeros((2, 1, 1), dtype=np.int64)
    la[0, 0, 0] = 1
    from qfcert.modrep import Bimodule

    b = Bimodule(dn, k, la, np.ones((1, 1, 1), dtype=np.int64))
    with pytest.raises(NotProjectiveAtStage) as exc:
        dual_sequence(b, 1)
    assert exc.value.stage == 1


def test_qf_tensor_check_regular_pair():
    p = 5
    a = group_alg(p, 2)
    m = regular_bimodule(a)
    out = qf_tensor_check(m, m)
    assert out.verdict == report.YES


def test_qf_tensor_check_vacuous():
    p = 5
    dn = dual_numbers(p)
    k = field_algebra(p)
    la = np.zeros((2, 1, 1), dtype=np.int64)
    la[0, 0, 0] = 1
    from qfcert.modrep import Bimodule

    bad = Bimodule(dn, k, la, np.ones((1, 1, 1), dtype=np.int64))
    good = regular_bimodule(dn)
    out = qf_tensor_check(good, bad)
    assert out.verdict == report.VACUOUS
