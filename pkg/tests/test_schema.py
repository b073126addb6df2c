"""Document validation, pointer paths, and build/emit round-trips."""

import json

import numpy as np
import pytest

from helpers import dual_numbers, group_alg, mat_units_algebra
from qfcert import schema
from qfcert.algebra import equal_algebras, field_algebra, make_hom
from qfcert.coring import sweedler, trivial_coring
from qfcert.errors import SchemaError, ValidationError
from qfcert.graded import equal_graded_modules, grade_by_partition, graded_regular
from qfcert.modrep import regular_bimodule, regular_left
from qfcert.ringext import make_extension

P = 5


def unit_extension(alg):
    f = field_algebra(alg.p)
    return make_extension(make_hom(f, alg, np.array(alg.unit).reshape(-1, 1)))


def pointer_of(doc):
    with pytest.raises(SchemaError) as exc:
        schema.validate(doc)
    return exc.value.pointer


def test_algebra_roundtrip():
    a = group_alg(P, 3)
    doc = {"p": P, "algebra": schema.algebra_document(a)}
    assert schema.validate(doc) == "algebra"
    kind, b = schema.build(doc)
    assert kind == "algebra" and equal_algebras(a, b)


def test_hom_and_module_roundtrip():
    ext = unit_extension(dual_numbers(P))
    kind, h = schema.build(schema.hom_document(ext.hom))
    assert kind == "hom"
    assert np.array_equal(h.matrix, ext.hom.matrix)
    m = regular_left(mat_units_algebra(P, 2))
    kind, m2 = schema.build(schema.module_document(m))
    assert kind == "module" and np.array_equal(m2.action, m.action)


def test_bimodule_roundtrip():
    m = regular_bimodule(group_alg(P, 2))
    kind, b = schema.build(schema.bimodule_document(m))
    assert kind == "bimodule"
    assert np.array_equal(b.left_acts, m.left_acts)
    assert np.array_equal(b.right_acts, m.right_acts)


def test_coring_roundtrip_exact_through_raw_delta():
    for c in (trivial_coring(group_alg(P, 2)), sweedler(unit_extension(dual_numbers(P)))):
        doc = schema.coring_document(c)
        kind, c2 = schema.build(doc)
        assert kind == "coring"
        # the quotient-coordinate comultiplication must come back bit-exact
        assert np.array_equal(c2.delta, c.delta)
        assert np.array_equal(c2.eps, c.eps)


def test_graded_roundtrip():
    table = [[0, 1], [1, 0]]
    ring = grade_by_partition(group_alg(P, 2), table, [[0], [1]])
    kind, ring2 = schema.build(schema.graded_document(ring))
    assert kind == "graded"
    assert ring2.dims == ring.dims
    assert np.array_equal(ring2.total.mul, ring.total.mul)
    assert equal_graded_modules(graded_regular(ring2), graded_regular(ring))


def test_documents_are_json_serializable():
    docs = [
        {"p": P, "algebra": schema.algebra_document(group_alg(P, 2))},
        schema.module_document(regular_left(dual_numbers(P))),
        schema.coring_document(trivial_coring(dual_numbers(P))),
    ]
    for doc in docs:
        assert json.loads(json.dumps(doc)) == doc


def test_pointer_paths():
    good_alg = schema.algebra_document(dual_numbers(P))
    assert pointer_of({"p": 4, "algebra": good_alg}) == "/p"
    assert pointer_of({"p": 9, "algebra": good_alg}) == "/p"
    assert pointer_of({"p": P}) == ""
    assert pointer_of({"p": P, "algebra": good_alg, "hom": {}}) == ""
    assert pointer_of({"p": P, "algebra": {"dim": 2, "unit": [1, 0]}}) == "/algebra"
    bad_mul = {"dim": 2, "mul": [[[0, 0], [0, 0]], [[0, 0]]], "unit": [1, 0]}
    assert pointer_of({"p": P, "algebra": bad_mul}).startswith("/algebra/mul")
    bad_unit = {"dim": 2, "mul": good_alg["mul"], "unit": [True, 0]}
    assert pointer_of({"p": P, "algebra": bad_unit}) == "/algebra/unit/0"
    out_of_range = {"dim": 2, "mul": good_alg["mul"], "unit": [5, 0]}
    assert pointer_of({"p": P, "algebra": out_of_range}) == "/algebra/unit/0"
    assert pointer_of([1, 2, 3]) == ""


def test_graded_table_entries_are_group_indices():
    ring = grade_by_partition(group_alg(P, 2), [[0, 1], [1, 0]], [[0], [1]])
    doc = schema.graded_document(ring)
    doc["graded"]["group_table"][0][0] = 2  # order is 2, so index 2 is bad
    assert pointer_of(doc).startswith("/graded/group_table")


def test_build_enforces_mathematical_laws():
    # schema-valid but mathematically broken: action violates module laws
    alg = schema.algebra_document(dual_numbers(P))
    doc = {
        "p": P,
        "module": {"algebra": alg, "dim": 1, "action": [[[1]], [[1]]]},
    }
    assert schema.validate(doc) == "module"
    with pytest.raises(ValidationError):
        schema.build(doc)


def test_expect_and_build_extension_guard_kinds():
    doc = schema.module_document(regular_left(dual_numbers(P)))
    with pytest.raises(SchemaError):
        schema.expect(doc, "coring")
    with pytest.raises(SchemaError):
        schema.build_extension(doc)


def test_load_path_errors(tmp_path):
    with pytest.raises(SchemaError):
        schema.load_path(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("not json at all")
    with pytest.raises(SchemaError):
        schema.load_path(str(bad))
