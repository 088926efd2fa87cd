import pathlib

import pytest

import mincad

FIXTURES = pathlib.Path(__file__).resolve().parents[2] / "fixtures"


def trousers():
    return mincad.load_cadspec(str(FIXTURES / "trousers.cadspec"))


def test_trousers_tree_and_witness():
    doc = trousers()
    fam = doc.family()
    tree = mincad.build_tree(doc.cad("C"), fam)
    assert tree.leaf_count == 9
    assert tree.reductions() == ["1.2"]
    lift = mincad.liftable(doc.cad("C"), "1.2")
    assert lift["status"] == "fails"
    assert lift["witness"]["point"] == "(1, 0)"
    assert (lift["witness"]["side_value"], lift["witness"]["section_value"]) == ("-1/2", "0")


def test_trousers_normal_forms():
    doc = trousers()
    rep = mincad.confluence(doc.cad("Cbar"), doc.family())
    assert rep["verdict"] == "MultipleNormalForms"
    expected = {doc.cad("C").fingerprint(), doc.cad("Cprime").fingerprint()}
    assert set(rep["normal_forms"]) == expected


def test_disk_minimal():
    doc = mincad.load_cadspec(str(FIXTURES / "disk.cadspec"))
    cad, trace, certified = mincad.minimal(doc.cad("Cprime"), doc.family())
    assert certified
    assert cad.fingerprint() == doc.cad("C").fingerprint()
    assert len(trace) >= 1
    agree, mismatches = mincad.cross_validate(doc.cad("Cprime"), doc.family())
    assert agree, mismatches


def test_bell_and_one_dimensional_minimum():
    assert mincad.bell(9) - 1 == 21146
    assert mincad.bell(15) - 1 == 1382958544
    sections, labels = mincad.minimum_cad_1d(["[-2,0) u {1}", "[0,inf)"])
    assert sections == ["-2", "0", "1"]
    assert labels == ["(0,0)", "(1,0)", "(1,0)", "(0,1)", "(0,1)", "(1,1)", "(0,1)"]


def test_fibers_and_behaviours():
    assert mincad.fiber("x1^2 + x2^2 <= 1", ["3/5"]) == "[-4/5,4/5]"
    doc = mincad.load_cadspec(str(FIXTURES / "halfspace0.cadspec"))
    assert mincad.behaviour(doc.family(), ["0"]) == "(0,0,1)"
    assert mincad.behaviour(doc.family(), ["1"]) == "(0,1,1)"


def test_corpus_and_generators():
    assert "trousers" in mincad.corpus.entry_names()
    assert all(f["ok"] for f in mincad.corpus.check("halfspace0"))
    d0 = mincad.corpus.d_t("0")
    assert d0.fingerprint() == trousers().cad("Cprime").fingerprint()
    checked, failures = mincad.corpus.verify_analytic_trousers(100)
    assert checked >= 100 and failures == []


def test_errors_are_raised():
    with pytest.raises(mincad.MincadError):
        mincad.parse_cadspec("cad X dim=2\ncell 1: u=")
    with pytest.raises(mincad.MincadError):
        mincad.corpus.d_t("1")
