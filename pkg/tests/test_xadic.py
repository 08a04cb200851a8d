import pytest

from cobarext import cobar, xadic
from cobarext.grading import RO2Degree
from cobarext.xadic import EinftyMonomial, parse_einfty_label


def names(monos):
    return [m.label() for m in monos]


def test_admissibility_examples():
    assert names(xadic.einfty_basis(2, 1, RO2Degree(1, 1))) == ["y_0"]
    for n in (1, 2, 3, None):
        assert xadic.einfty_basis(n, 1, RO2Degree(1, -1)) == []
    assert names(xadic.einfty_basis(1, 0, RO2Degree(2, -2))) == ["u^2"]
    # pure a-powers at n = inf, and only them, in the zero-y column
    assert names(xadic.einfty_basis(None, 0, RO2Degree(0, -3))) == ["a^3"]
    assert xadic.einfty_basis(None, 0, RO2Degree(4, -4)) == []


def test_degree_and_filtration():
    mono = parse_einfty_label("a u^4 y_0^2 y_1")
    assert mono == EinftyMonomial(1, 4, (2, 1))
    assert mono.filtration == 3
    assert mono.degree() == RO2Degree(8, -1)


def test_label_roundtrip():
    for m in [
        EinftyMonomial(0, 0, ()),
        EinftyMonomial(3, -4, ()),
        EinftyMonomial(1, 8, (0, 0, 1)),
        EinftyMonomial(0, 2, (2,)),
    ]:
        assert parse_einfty_label(m.label()) == m
    with pytest.raises(ValueError):
        parse_einfty_label("y_0 a")  # non-canonical ordering
    with pytest.raises(ValueError):
        parse_einfty_label("z^2")


def test_stage_examples():
    # stage 0 is the full polynomial ring's tridegree slice
    assert names(xadic.xadic_stage(2, 0, 0, RO2Degree(1, -1))) == ["u"]
    # u dies leaving stage 0, so it is absent from stage 1 on
    for t in (1, 2):
        assert xadic.xadic_stage(2, t, 0, RO2Degree(1, -1)) == []
    # the final stage equals the closed-form basis across a window
    for s in range(4):
        for p in range(-4, 5):
            for q in range(-4, 5):
                d = RO2Degree(p, q)
                assert names(xadic.xadic_stage(2, 2, s, d)) == \
                    names(xadic.einfty_basis(2, s, d))
    with pytest.raises(xadic.StageOutOfRangeError):
        xadic.xadic_stage(2, 3, 0, RO2Degree(0, 0))


def test_stage_monotone_counts():
    for s in range(4):
        for p in range(-4, 5):
            for q in range(-4, 5):
                d = RO2Degree(p, q)
                counts = [len(xadic.xadic_stage(3, t, s, d)) for t in range(4)]
                assert counts == sorted(counts, reverse=True)


def test_differential_examples():
    u = EinftyMonomial(0, 1, ())
    assert xadic.xadic_differential(2, 0, u) == frozenset(
        {EinftyMonomial(2, 0, (1,))})
    assert xadic.xadic_differential(2, 0, EinftyMonomial(0, 2, ())) == frozenset()
    assert xadic.xadic_differential(2, 0, EinftyMonomial(0, 3, ())) == frozenset(
        {EinftyMonomial(2, 2, (1,))})
    with pytest.raises(xadic.NotOnPageError):
        xadic.xadic_differential(2, 1, u)


def test_differential_degree_and_square():
    for t in (0, 1):
        for s in range(3):
            for p in range(-3, 4):
                for q in range(-3, 4):
                    d = RO2Degree(p, q)
                    for mono in xadic.xadic_stage(3, t, s, d):
                        image = xadic.xadic_differential(3, t, mono)
                        acc = set()
                        for tgt in image:
                            assert tgt.degree() == d
                            assert tgt.filtration == s + 1
                            acc ^= set(xadic.xadic_differential(3, t, tgt))
                        assert not acc  # d after d vanishes termwise


def test_coboundary_examples():
    assert xadic.verify_coboundary(0, 0, 1).ok
    c = xadic.verify_coboundary(1, 1, 2)
    assert c.ok and c.source_label == "u^6"
    assert c.kept_labels == ("a^4 u^4 [x^2]",) and c.discarded_labels == ()
    c = xadic.verify_coboundary(2, 0, 3)
    assert c.ok and c.expected_label == "a^8 [x^4]"
    with pytest.raises(ValueError):
        xadic.verify_coboundary(2, 0, 2)


def test_coboundary_sweep():
    for r in range(4):
        for m in range(4):
            for n in range(r + 1, 5):
                assert xadic.verify_coboundary(r, m, n).ok


def test_vanishing_examples():
    report = xadic.verify_vanishing((0, 0), (-3, -3), 2)
    assert report.ok
    by_s = {e.s: e for e in report.entries if e.p == 0 and e.q == -3}
    assert by_s[0].expected_basis == ("a^3",) and by_s[0].got_basis == ("a^3",)
    assert by_s[1].got_dim == 0 and by_s[2].got_dim == 0
    assert xadic.verify_vanishing((-2, -2), (-1, -1), 2).ok
    assert xadic.verify_vanishing((3, 3), (-1, -1), 2).ok
    with pytest.raises(ValueError):
        xadic.verify_vanishing((0, 0), (-1, 0), 1)


def test_einfty_oracle_sample():
    report = xadic.verify_einfty(1, 5, 3)
    assert report.ok and report.checked == 4 * 11 * 11


def test_predicted_a_rank_matches_cobar():
    for n in (1, 2):
        for s in range(3):
            for p in range(-3, 4):
                for q in range(-3, 4):
                    d = RO2Degree(p, q)
                    assert xadic.predicted_a_rank(n, s, d) == \
                        cobar.a_multiplication_rank(s, d, n), (n, s, p, q)


def test_completed_basis_negative_powers():
    # u-inverted world: the y_1 tower reaches down to negative u-exponents
    monos = xadic.completed_basis(1, RO2Degree(-2, 4))
    assert names(monos) == ["a^2 u^-4 y_1"]
    assert xadic.completed_basis(0, RO2Degree(0, -2)) == [EinftyMonomial(2, 0, ())]
    assert xadic.completed_basis(0, RO2Degree(2, -2)) == []
