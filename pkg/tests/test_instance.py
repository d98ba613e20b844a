import copy
import json

import pytest
from hypothesis import given

from dualgap.catalog import ParabolaIndicator
from dualgap.functions import PolyhedralFn
from dualgap.instance import (
    InvariantError,
    ParseError,
    TagError,
    canonical_text,
    canonicalize,
    dumps,
    load,
    loads,
    packaged,
    packaged_corpus,
    polyhedral_entry,
)
from strategies import polyhedral_functions

MINIMAL = {
    "version": 1,
    "dimension": 1,
    "functions": [{"name": "f", "kind": "polyhedral", "dim": 1,
                   "epigraph": {"ineqs": [{"a": ["1", "-1"], "b": "0"}]}}],
    "constraint": {"type": "subspace", "generators": [["1"]]},
}


def variant(**changes):
    doc = copy.deepcopy(MINIMAL)
    doc.update(changes)
    return doc


def error_of(doc):
    with pytest.raises((ParseError, InvariantError, TagError)) as info:
        loads(json.dumps(doc))
    return info.value


class TestLoading:
    def test_minimal(self):
        parsed = loads(json.dumps(MINIMAL))
        assert parsed.names == ("f",)
        assert parsed.instance.blocks[0].evaluate((3,)) == 3
        assert parsed.feasible is True and parsed.queries == ()

    def test_example33(self):
        parsed = loads(packaged("example33.json"))
        f, g = parsed.instance.blocks
        assert isinstance(f, ParabolaIndicator)
        assert g.evaluate((0, 5)) == 0 and g.evaluate((-1, 0)) != 0
        assert parsed.instance.is_diagonal
        assert len(parsed.queries) == 16

    def test_load_from_disk(self, tmp_path):
        p = tmp_path / "inst.json"
        p.write_text(json.dumps(MINIMAL))
        assert load(p).names == ("f",)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            load(tmp_path / "absent.json")

    def test_cone_rows(self):
        doc = variant(dimension=2, functions=MINIMAL["functions"] * 1 + [
            {"name": "g", "kind": "polyhedral", "dim": 1, "epigraph": {"ineqs": [{"a": ["0", "-1"], "b": "0"}]}}],
            constraint={"type": "cone", "rows": [["-1", "0"], ["0", "-1"]]})
        parsed = loads(json.dumps(doc))
        assert parsed.instance.constraint.cone.contains((1, 2))
        assert not parsed.instance.constraint.cone.contains((-1, 0))


class TestErrors:
    def test_decimal_rejected(self):
        doc = variant(functions=[{"name": "f", "kind": "polyhedral", "dim": 1,
                                  "epigraph": {"ineqs": [{"a": ["0.5", "-1"], "b": "0"}]}}])
        err = error_of(doc)
        assert err.code == "E_PARSE" and "functions[0].epigraph.ineqs[0].a[0]" in err.path

    def test_float_rejected(self):
        err = error_of(variant(constraint={"type": "subspace", "generators": [[0.5]]}))
        assert err.code == "E_PARSE"

    def test_unknown_field(self):
        err = error_of(variant(colour="blue"))
        assert err.code == "E_PARSE" and "colour" in str(err)

    def test_bad_json_cites_line(self):
        with pytest.raises(ParseError) as info:
            loads('{\n  "version": 1,\n  oops\n}')
        assert info.value.path.startswith("line 3")

    def test_unknown_tag(self):
        doc = variant(dimension=2, functions=[{"name": "c", "kind": "catalog", "dim": 2, "tag": "no-such-set"}],
                      constraint={"type": "subspace", "generators": [["1", "0"], ["0", "1"]]})
        assert error_of(doc).code == "E_TAG"

    def test_dimension_mismatch(self):
        assert error_of(variant(dimension=2)).code == "E_INVARIANT"

    def test_improper_epigraph(self):
        doc = variant(functions=[{"name": "f", "kind": "polyhedral", "dim": 1,
                                  "epigraph": {"ineqs": [{"a": ["1", "0"], "b": "-1"}, {"a": ["-1", "0"], "b": "-1"}]}}])
        assert error_of(doc).code == "E_INVARIANT"

    def test_unsupported_version(self):
        assert error_of(variant(version=2)).code == "E_PARSE"

    def test_unknown_query_parameter(self):
        err = error_of(variant(queries=[{"name": "q", "check": "duality", "x": ["0"]}]))
        assert err.code == "E_PARSE" and "queries[0]" in err.path

    def test_query_names_a_missing_function(self):
        err = error_of(variant(queries=[{"name": "q", "check": "conjugate", "y": ["0"], "function": "nope"}]))
        assert err.code == "E_INVARIANT"

    def test_duplicate_names(self):
        doc = variant(dimension=2, functions=MINIMAL["functions"] * 2,
                      constraint={"type": "subspace", "generators": [["1", "1"]]})
        assert error_of(doc).code == "E_INVARIANT"

    def test_cone_needs_one_description(self):
        err = error_of(variant(constraint={"type": "cone", "rows": [["1"]], "generators": [["1"]]}))
        assert err.code == "E_PARSE"


class TestRoundTrip:
    @pytest.mark.parametrize("name", ["example33.json", "poly_demo.json"])
    def test_shipped_files_are_canonical(self, name):
        text = packaged(name)
        assert canonical_text(text) == text
        assert dumps(loads(text).document) == text

    def test_corpus_is_canonical(self):
        corpus = packaged_corpus()
        assert len(corpus) >= 6
        for _, text in corpus:
            assert canonical_text(text) == text

    def test_rationals_are_reduced(self):
        doc = variant(functions=[{"name": "f", "kind": "polyhedral", "dim": 1,
                                  "epigraph": {"ineqs": [{"a": ["2/4", -1], "b": "0/7"}]}}])
        out = canonicalize(doc)
        assert out["functions"][0]["epigraph"]["ineqs"][0] == {"a": ["1/2", "-1"], "b": "0"}
        assert canonical_text(dumps(out)) == dumps(out)

    @given(polyhedral_functions())
    def test_generated_functions(self, f):
        gens = [["1" if i == j else "0" for i in range(f.dim)] for j in range(f.dim)]
        doc = {"version": 1, "dimension": f.dim, "functions": [polyhedral_entry("f", f)],
               "constraint": {"type": "subspace", "generators": gens}}
        text = dumps(canonicalize(doc))
        assert canonical_text(text) == text
        g = loads(text).instance.blocks[0]
        assert isinstance(g, PolyhedralFn) and g.equals(f)
