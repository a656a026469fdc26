from fractions import Fraction

import pytest

import cantordyn as cd


@pytest.fixture
def dyadic():
    return cd.Signature("dyadic")


def test_clopen_algebra(dyadic):
    a = cd.Clopen(dyadic, "{0}")
    b = cd.Clopen(dyadic, "{1}")
    assert (a | b).is_full()
    assert (a & b).is_empty()
    assert ~a == b
    assert str(cd.Clopen(dyadic, "{00,1}")) == "{00,1}"


def test_non_canonical_set_rejected(dyadic):
    with pytest.raises(ValueError, match="sibling-complete"):
        cd.Clopen(dyadic, "{00,01}")


def test_maps_and_distance(dyadic):
    swap = cd.Homeo.named("swap")
    ident = cd.Homeo.named("id")
    assert swap.apply("0(1)") == "(1)"
    assert cd.distance(ident, swap) == (2, 2)
    odo = cd.odometer(dyadic)
    assert odo.apply("1(0)") == "01(0)"
    assert (odo @ odo.inverse()).same_action(ident)
    q = cd.odometer_truncation(dyadic, 3)
    lo, hi = cd.distance(odo, q)
    assert hi <= Fraction(1, 4)


def test_measure(dyadic):
    mu = cd.Measure(dyadic, "product(;[1/3,2/3])")
    assert Fraction(mu.of(cd.Clopen(dyadic, "{0,10}"))) == Fraction(5, 9)


def test_synthesis_and_witness(dyadic):
    ident = cd.Homeo.named("id")
    res = cd.synth_odometer(ident, ["{0}", "{1}"])
    assert not res["ok"]
    assert res["witness"] == {"set": "{0}", "forward_closed": True}
    odo = cd.odometer(dyadic)
    parts = ["{00}", "{01}", "{10}", "{11}"]
    res = cd.synth_odometer(odo, parts)
    assert res["ok"]
    assert cd.in_p_neighborhood(res["map"], odo, parts) == "true"


def test_castle_and_rank1(dyadic):
    odo = cd.odometer(dyadic)
    c = cd.rokhlin_castle(odo, 2, ["uniform"], "1/4")
    assert c["towers"] == [("{0}", 2)]
    ap = cd.aperiodize(cd.Homeo.named("swap"), "1")
    r = cd.rank1(ap["map"], ["uniform"], "1/2")
    assert Fraction(r["bound_values"][0]) < Fraction(1, 2)


def test_circulation():
    m = cd.min_circulation([[False, True], [True, True]])
    assert m == [[0, 1], [1, 1]]
    assert cd.min_circulation([[False, True], [False, False]]) is None


def test_documents_and_cli():
    text = cd.normalize_document("homeo tree-pair dyadic {0→1, 1→0}")
    assert text.startswith("cdyn 1 homeo\n")
    assert ("map", "tree-pair {0->1,1->0}") in cd.parse_document(text)
    code, out, _ = cd.run_cli(["dist", "id", "swap"])
    assert (code, out) == (0, "2\n")
    code, out, _ = cd.run_cli(["synth", "odometer", "--target", "id", "--partition", "{0},{1}"])
    assert code == 2 and "witness: {0} forward-closed" in out
