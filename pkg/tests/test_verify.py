import pytest

from conftest import system
from moufang import verify as V
from moufang.action import NLetter, RootLetter
from moufang.chambers import ChamberSystem
from moufang.foundation import from_dict, to_dict, bundled


def glued_a3(q, scale, frobenius=0):
    doc = to_dict(bundled("a3_f3"))
    for e in doc["edges"]:
        e["q"] = q
    doc["glueings"] = [{"triple": ["r", "s", "t"], "scale": scale, "frobenius": frobenius}]
    return ChamberSystem(from_dict(doc))


@pytest.mark.parametrize("name", ["A2:2", "A2:3", "B2:2", "B2:3", "A1xA1:3"])
def test_relation_suites_single_edges(name):
    cs = system(name)
    for suite in (V.verify_braid, V.verify_ps, V.verify_torus_and_conj):
        rep = suite(cs)
        assert rep.ok and rep.checked > 0 and rep.skipped == 0


def test_relations_on_glued_a3():
    cs = glued_a3(3, 2)
    for suite in (V.verify_braid, V.verify_ps):
        rep = suite(cs)
        assert rep.ok and rep.checked > 0


def test_frobenius_glueing_over_f4():
    cs = glued_a3(4, 2, 1)
    rep = V.verify_braid(cs, 3)
    assert rep.ok and rep.checked > 0


def test_compare_reports_counterexamples():
    cs = system("A2:2")
    bogus = [("n_s = u_s(1)", [NLetter("s")], [RootLetter("s", 1)])]
    rep = V.compare(cs, bogus, cs.enumerate(3))
    assert not rep.ok and rep.failures[0]["relation"] == "n_s = u_s(1)"
    assert set(rep.failures[0]) == {"relation", "chamber", "lhs", "rhs"}


def test_threads_do_not_change_reports():
    cs = system("a3_f2")
    one = V.verify_ps(cs, threads=1).to_dict()
    four = V.verify_ps(cs, threads=4).to_dict()
    assert one == four


def test_truncation_skips():
    cs = system("d4tilde_f2")
    rep = V.verify_braid(cs, 2)
    assert rep.ok and rep.checked > 0 and rep.skipped > 0


def test_rgd_a2():
    rep = V.verify_rgd(system("A2:3"))
    assert rep.ok
    assert set(rep.notes) == {"RGD0", "RGD1", "RGD2", "RGD3", "RGD4"}
    assert rep.notes["RGD3"]["witnesses"]["s:1"] != {"type": [], "labels": []}


def test_rgd_commuting_edge():
    rep = V.verify_rgd(system("A1xA1:3"))
    assert rep.ok and rep.notes["RGD1"]["checked"] > 0


def test_orbit_examples():
    cs = system("A2:3")
    rep = V.orbit_w(cs, ())
    assert rep.notes["images"] == rep.notes["sphere"] == 1
    rep = V.orbit_w(cs, ("s",))
    assert rep.notes["sphere"] == 3 and rep.notes["bijective"]
    rep = V.orbit_w(system("a3_f2"), system("a3_f2").W.longest_element())
    assert rep.notes["images"] == 64 and rep.notes["bijective"]


@pytest.mark.parametrize("name", ["A2:2", "A2:3", "B2:2", "B2:3", "A1xA1:2", "A1xA1:3", "A2:4"])
def test_matrix_oracle(name):
    rep = V.verify_oracle(system(name))
    assert rep.ok and rep.checked > 0


def test_b2_f2_unsupported_is_reported():
    cs = system("b3_f2")
    rep = V.verify_torus_and_conj(cs, 3)
    assert rep.ok and rep.unsupported > 0
