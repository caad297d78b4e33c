import pytest

from parabolic_rigidity.notation import parse_cell, parse_condition
from parabolic_rigidity.tables import (
    TABLES, TableParseError, diff_tables, live_instances, load_tables, parse_table, raw_table_text,
)


@pytest.fixture(scope="module")
def gt():
    return load_tables()


@pytest.mark.parametrize("table", TABLES)
def test_reserialization_byte_identical(gt, table):
    assert gt.serialize(table) == raw_table_text(table)


@pytest.mark.parametrize("table", TABLES)
def test_row_counts_match_files(gt, table):
    text = raw_table_text(table)
    data_lines = [l for l in text.splitlines()[1:] if l.strip() and not l.startswith("#")]
    assert len(gt.rows[table]) == len(data_lines)


def test_parse_error_reports_line():
    text = raw_table_text(2)
    lines = text.splitlines()
    lines[3] = "sl(4,R)\t{1,2}"
    with pytest.raises(TableParseError) as err:
        parse_table(2, "\n".join(lines) + "\n")
    assert "line 4" in str(err.value)


def test_missing_header():
    with pytest.raises(TableParseError):
        parse_table(1, "")


def test_condition_parsing():
    sigma = (1, 2)
    assert parse_condition("j1=1, j2=-1").lattice(sigma) == parse_condition("j2=-1, j1=1").lattice(sigma)
    cube = parse_cell("sqrt[3](1)", 1).lattice((1,))
    assert cube.basis == ((3,),)
    alt = parse_condition("j1=sqrt[5](1) or j1=sqrt[7](1)").lattice((1,))
    assert alt.basis == ((35,),)


def test_empty_records_all_missing(gt):
    live, _ = live_instances(gt, 4)
    rep = diff_tables([], gt, max_rank=4)
    assert len(rep.missing) == len(live) and not rep.matched and not rep.extra


def test_one_removed_record_is_missing(gt):
    from parabolic_rigidity.classify import classify_all
    recs = classify_all("A", 4, workers=1).records
    base = diff_tables(recs, gt, max_rank=4)
    per_rec, per_inst = {}, {}
    for inst, r in base.matched:
        per_rec[id(r)] = per_rec.get(id(r), 0) + 1
        per_inst[id(inst)] = per_inst.get(id(inst), 0) + 1
    # a record that is the only match of exactly one instance
    victim = next(r for inst, r in base.matched if per_rec[id(r)] == 1 and per_inst[id(inst)] == 1)
    rep = diff_tables([r for r in recs if r is not victim], gt, max_rank=4)
    assert len(rep.missing) == len(base.missing) + 1
    assert len(rep.extra) == len(base.extra)
