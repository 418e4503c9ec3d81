import json

import pytest

from catalog.evaluate import (atoms_to_expr, canonical_atom, expand, formal_expand, multidegree_of,
                              numeric_eval, reduce_to_atoms, standard_unit)
from catalog.models import ENTRY_REPORT_FIELDS, REPAIRED, VERBATIM
from catalog.parser import CatalogSyntaxError, bracket_variants, check_balanced, parse_expr
from catalog.reports import ReportStore, dumps, strip_timing
from catalog.store import (CatalogMissingError, load_catalog, parse_catalog, repair_variants,
                           validate_entry, validate_group)
from core.partitions import Partition
from matrices.numcheck import SamplePoint

# ── parser ───────────────────────────────────────────────────────────────


def test_parse_and_print():
    assert str(parse_expr("tr(x1^2)")) == "tr(x1^2)"
    assert str(parse_expr("tr(x1x2)tr(x3)")) == "tr(x1x2)tr(x3)"
    assert parse_expr("tr^2(x1x2)") == parse_expr("tr(x1x2)^2")


def test_macros_expand_in_place():
    assert parse_expr("u(x1,x2)") == parse_expr("tr(x1^2)tr(x2^2) - tr(x1x2)^2")
    assert parse_expr("v(x1,x2,x3)") == parse_expr("tr(x1^2)tr(x2x3) - tr(x1x2)tr(x1x3)")


@pytest.mark.parametrize("bad", [
    "",
    "tr(x1",
    "tr(x0)",
    "tr(xs1)",
    "tr(s3(x1,x2))",
    "u(x1,x2,x3)",
    "sum_sgn(s:2; tr(xs3x1))",
    "tr(x1) )",
    "tr(x1 # x2)",
    "1/0",
])
def test_parse_errors(bad):
    with pytest.raises(CatalogSyntaxError):
        parse_expr(bad)


def test_check_balanced():
    assert check_balanced("tr(x1)tr(x2)") is None
    assert check_balanced("tr(x1))") == 6
    assert check_balanced("(tr(x1)") == 0
    assert check_balanced("[x1,x2)") == 6


def test_syntax_error_carries_position():
    with pytest.raises(CatalogSyntaxError) as info:
        parse_expr("tr(x1^2)) + tr(x2^2)")
    assert info.value.pos == 8
    with pytest.raises(CatalogSyntaxError) as info:
        parse_expr("(tr(x1^2)")
    assert info.value.pos == len("(tr(x1^2)")


def test_bracket_variants_drop_surplus_closing_brackets(store):
    entry = store.entry((4, 1, 1, 1), 3)
    variants = bracket_variants(entry.printed)
    assert entry.expr in [node for _, node in variants]
    assert all(d.count("delete") == 4 for d, _ in variants)
    assert bracket_variants(entry.text) == []


def test_bracket_variants_inside_signed_sums(store):
    entry = store.entry((2, 1, 1, 1, 1, 1), 2)
    variants = bracket_variants(entry.printed)
    assert entry.expr in [node for _, node in variants]


def test_bracket_variants_drop_surplus_opening_bracket(store):
    entry = store.entry((3, 2, 1, 1), 1)
    damaged = entry.text.replace("tr(s3(x1,x2,x4)(x2x3", "tr((s3(x1,x2,x4)(x2x3", 1)
    assert damaged != entry.text
    assert entry.expr in [node for _, node in bracket_variants(damaged)]


# ── reduction to trace atoms ─────────────────────────────────────────────


def test_vanishing_traces():
    assert reduce_to_atoms(parse_expr("tr(x1)")) == {}
    assert reduce_to_atoms(parse_expr("tr([x1,x2])")) == {}
    assert reduce_to_atoms(parse_expr("tr(s2(x1,x2))")) == {}
    assert reduce_to_atoms(parse_expr("tr(s3(x1,x1,x2))")) == {}
    assert canonical_atom((("s", (1, 2, 3, 4)),)) is None
    assert canonical_atom((("s", (1, 2, 3)),)) == (("s", (1, 2, 3)),)


def test_standard_unit_sorts_with_sign():
    assert standard_unit((2, 1)) == (-1, ("c", 1, 2))
    assert standard_unit((3, 1, 2)) == (1, ("s", (1, 2, 3)))
    assert standard_unit((1, 1)) == (0, None)


def test_cyclic_rotation_and_constants():
    assert reduce_to_atoms(parse_expr("tr(x1x2x3)")) == reduce_to_atoms(parse_expr("tr(x3x1x2)"))
    assert reduce_to_atoms(parse_expr("tr(2x1x1 - x1^2)")) == reduce_to_atoms(parse_expr("tr(x1^2)"))
    # the trace of the identity is 3
    assert reduce_to_atoms(parse_expr("tr([x1,x2]^0)")) == reduce_to_atoms(parse_expr("3"))


def test_signed_sum_equals_standard_polynomial(ctx3):
    signed = parse_expr("sum_sgn(s:3; tr(xs1xs2xs3))")
    assert expand(signed, ctx3) == expand(parse_expr("tr(s3(x1,x2,x3))"), ctx3)
    partial = parse_expr("sum_sgn(s:{2,3}; tr(x1xs2xs3))")
    assert expand(partial, ctx3) == expand(parse_expr("tr(x1[x2,x3])"), ctx3)


def test_signed_sum_blocks_in_parallel(store):
    expr = store.entry((2, 1, 1, 1, 1, 1), 1).expr
    assert reduce_to_atoms(expr, workers=3) == reduce_to_atoms(expr)


def test_nested_signed_sums_keep_outer_binding():
    nested = parse_expr("sum_sgn(s:{2,3}; sum_sgn(t:{1,4}; tr(xt1xs2xs3xt4)))")
    direct = parse_expr("tr(x1[x2,x3]x4) - tr(x4[x2,x3]x1)")
    assert reduce_to_atoms(nested) == reduce_to_atoms(direct)
    assert reduce_to_atoms(nested)


def test_atoms_round_trip():
    expr = parse_expr("tr(s3(x1,x2,x3)x1^2)tr(x1^2) - 5tr([x1,x2]x1x3)")
    atoms = reduce_to_atoms(expr)
    assert reduce_to_atoms(atoms_to_expr(atoms)) == atoms


def test_numeric_eval_matches_direct_trace():
    pt = SamplePoint(2, seed=4)
    m = pt.matrix(1)
    tr_square = sum(m[(p, q)] * m[(q, p)] for p in range(3) for q in range(3))
    assert numeric_eval(parse_expr("tr(x1^2)"), pt) == tr_square
    assert numeric_eval(parse_expr("1/2tr(x1^2)^2"), pt) == pt.trace_of_word((1, 1, 1, 1))


def test_formal_expand_keeps_traces_formal():
    a, b = formal_expand(parse_expr("tr(x1^4)"), parse_expr("1/2tr(x1^2)^2"))
    assert a != b
    a, b = formal_expand(parse_expr("tr(x1x2)"), parse_expr("tr(x2x1)"))
    assert a == b
    assert formal_expand(parse_expr("tr([x1,x2])"))[0] == 0


def test_multidegree_of():
    assert multidegree_of(parse_expr("u(x1,x2)")) == {1: 2, 2: 2}
    assert multidegree_of(parse_expr("tr(x1^2) + tr(x1^3)")) is None


# ── the catalog file ─────────────────────────────────────────────────────


def test_shipped_catalog(store):
    assert len(store.entries) == 50
    assert store.unparsed() == []
    assert store.weights(8) == [Partition(p) for p in ((4, 3, 1), (4, 2, 2), (3, 3, 2))]
    assert len(store.group((3, 2, 2))) == 4
    assert len(store.group((4, 2, 2))) == 9
    repaired = store.entry((4, 1, 1, 1), 3)
    assert repaired.status == REPAIRED
    assert repaired.printed and repaired.notes
    assert str(store.entry((3, 2, 2), 4)) == "(3,2^2) w4 [verbatim]"
    with pytest.raises(CatalogMissingError):
        store.group((9,))
    with pytest.raises(CatalogMissingError):
        store.entry((3, 2, 2), 5)


def test_every_repaired_entry_records_its_printed_form(store):
    for e in store.entries:
        if e.status == REPAIRED:
            assert e.notes and e.printed, e.label
    for lam, index in [((4, 1, 1, 1), 3), ((3, 2, 1, 1), 1), ((2, 2, 1, 1, 1), 2), ((2, 1, 1, 1, 1, 1), 2)]:
        assert check_balanced(store.entry(lam, index).printed) is not None


@pytest.mark.parametrize("text", [
    "entry 2,2 w1 verbatim\n  u(x1,x2)\n",
    "version 2\nentry 2,2 w1 verbatim\n  u(x1,x2)\n",
    "version 1\nentry 2,2 w1 verbatim\n  u(x1,x2)\nentry 2,2 w1 verbatim\n  u(x1,x2)\n",
    "version 1\nentry 2,2 w1 repaired\n  u(x1,x2)\n",
    "version 1\nentry 2,2 w1 fixed\n  u(x1,x2)\n",
    "version 1\n  u(x1,x2)\n",
    "version 1\nentry 2,2 w1 verbatim\n",
    "version 1\nentry 2,2 1 verbatim\n  u(x1,x2)\n",
])
def test_parse_catalog_errors(text):
    with pytest.raises(CatalogSyntaxError):
        parse_catalog(text)


def test_parse_catalog_joins_continuation_lines():
    entries = parse_catalog("version 1\n# comment\nentry 2,2 w1 verbatim\n  tr(x1^2)tr(x2^2)\n"
                            "  - tr(x1x2)^2\nnote: u\n")
    assert len(entries) == 1
    assert entries[0].expr == parse_expr("u(x1,x2)")
    assert entries[0].notes == ["u"]
    assert entries[0].line == 3


def test_parse_catalog_keeps_entries_that_do_not_parse():
    entries = parse_catalog("version 1\nentry 2,2 w1 verbatim\n  u(x1,x2)\n"
                            "entry 2,2 w2 verbatim\n  (tr(x1^2)tr(x2^2) - tr(x1x2)^2\n"
                            "entry 1,1 w1 verbatim\n  tr(x1x2)\n")
    assert [e.label for e in entries] == ["(2^2) w1", "(2^2) w2", "(1^2) w1"]
    broken = entries[1]
    assert not broken.parses
    assert broken.expr is None and broken.error
    assert entries[0].parses and entries[2].parses


def test_load_catalog(store):
    entries = load_catalog(7, 3, store, screen=False)
    assert {e.lam for e in entries} == {Partition((3, 2, 2))}
    assert len(load_catalog(4, 2, store)) == 2
    with pytest.raises(ValueError):
        load_catalog(8, 4, store)
    with pytest.raises(ValueError):
        load_catalog(3, 3, store)


# ── validation ───────────────────────────────────────────────────────────


def _entry(body, lam="2,2"):
    return parse_catalog(f"version 1\nentry {lam} w1 verbatim\n  {body}\n")[0]


def test_validate_entry_accepts_hwv(ctx2):
    report = validate_entry(_entry("u(x1,x2)"), ctx2)
    assert report.passed
    assert report.to_dict()['hwv'] is True
    assert set(ENTRY_REPORT_FIELDS) <= set(report.to_dict())


def test_validate_entry_suggests_sign_repairs(ctx2):
    entry = _entry("tr(x1^2)tr(x2^2) + tr(x1x2)^2")
    report = validate_entry(entry, ctx2)
    assert report.hwv is False
    assert not report.passed
    assert report.repairs == ["flip summand 1", "flip summand 2"]
    variants = repair_variants(entry)
    assert all(v.status == REPAIRED and v.notes for _, v in variants)
    assert repair_variants(_entry("tr(x1^2)tr(x2^2)")) == []


def test_validate_entry_suggests_bracket_repairs(ctx2):
    entry = _entry("(tr(x1^2)tr(x2^2) - tr(x1x2)^2")
    report = validate_entry(entry, ctx2)
    assert not report.passed
    assert report.errors and report.errors[0].startswith("does not parse")
    assert report.bracket_damage == 0
    assert report.repairs
    variants = repair_variants(entry)
    assert parse_expr("u(x1,x2)") in [v.expr for _, v in variants]
    assert all(v.status == REPAIRED and v.printed == entry.text and v.error is None for _, v in variants)


def test_validate_group_with_unparsed_member(ctx2):
    entries = [_entry("u(x1,x2)"), _entry("(u(x1,x2)")]
    report = validate_group(entries, ctx2)
    assert report.independent is False
    assert report.entries[0].passed
    assert not report.entries[1].passed


def test_validate_entry_reports_wrong_multidegree(ctx2):
    report = validate_entry(_entry("tr(x1^3)"), ctx2)
    assert not report.multidegree
    assert report.errors


def test_validate_group(ctx2, store):
    report = validate_group(store.group((2, 2)), ctx2)
    assert report.passed
    assert report.independent
    assert report.multiplicity == 1
    assert report.to_dict()['lambda'] == "2,2"
    with pytest.raises(CatalogMissingError):
        validate_group([], ctx2)


def test_validate_group_detects_dependence(ctx2):
    entries = [_entry("u(x1,x2)"), _entry("2u(x1,x2)")]
    report = validate_group(entries, ctx2)
    assert report.formal_rank == 1
    assert not report.independent
    assert not report.passed


# ── report files ─────────────────────────────────────────────────────────


def test_report_store_round_trip(tmp_path):
    reports = ReportStore(str(tmp_path / "out"), timing=False)
    path = reports.write_json("run.json", {'b': [{'wall_ms': 17}], 'a': 1})
    with open(path) as f:
        assert json.load(f) == {'a': 1, 'b': [{'wall_ms': 0}]}
    assert reports.read_json("run.json")['a'] == 1
    assert reports.read_json("missing.json") is None
    reports.write_text("run.txt", "done")
    assert reports.list_reports() == ["run.json", "run.txt"]
    assert not [n for n in (tmp_path / "out").iterdir() if n.name.startswith(".report-")]


def test_dumps_is_deterministic():
    obj = {'z': 1, 'a': {'wall_ms': 5}}
    assert dumps(obj, timing=False) == dumps({'a': {'wall_ms': 9}, 'z': 1}, timing=False)
    assert strip_timing([{'wall_ms': 3}]) == [{'wall_ms': 0}]
    assert VERBATIM == "verbatim"
