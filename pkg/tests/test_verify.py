from fractions import Fraction

import pytest

from wallis_cf.approx import ApproxKind
from wallis_cf.numerics import BallValue, DomainError, EvalContext
from wallis_cf.verify import (
    PUBLISHED_TABLE,
    certify,
    compare_entry,
    format_ball,
    gap_sequence,
    monotone_direction,
    rate_probe,
    relative_error,
    reproduce_published_table,
    round_sig,
    sign_probe_FG,
)

CTX = EvalContext(50)


@pytest.mark.parametrize(
    "kind, n, published",
    [("alpha", 50, "-6.1876e-6"), ("beta", 500, "7.1643e-20"), ("sigma", 2000, "-1.4549e-33"),
     ("gamma", 1000, "6.9443e-12"), ("sigma", 1000, "-7.4489e-31"), ("beta", 50, "7.3576e-14")],
)
def test_relative_error_examples(kind, n, published):
    r = relative_error(kind, n, CTX)
    m = compare_entry(n, ApproxKind.parse(kind), r)
    assert m.computed == published and m.radius_ok and m.ok


def test_table_rows_are_well_resolved():
    rows = reproduce_published_table(CTX)
    assert [r.n for r in rows] == list(PUBLISHED_TABLE)
    for row in rows:
        for v in row.rel_error.values():
            assert v.radius_fraction() * 100 < abs(v.center_fraction())


def test_table_signs():
    for row in reproduce_published_table(CTX):
        signs = {k.label: v.is_positive() for k, v in row.rel_error.items()}
        assert signs == {"alpha": False, "beta": True, "gamma": True, "sigma": False}


def test_round_and_format():
    assert str(round_sig(Fraction(-380824, 10**24), 5)) == "-3.8082E-19"
    assert format_ball(Fraction(5555449, 10**14)) == "5.5554e-8"
    assert format_ball(Fraction(123456, 100)) == "1.2346e3"


def test_mismatch_is_reported():
    fake = BallValue.exact(Fraction(-62, 10**7))
    m = compare_entry(50, ApproxKind.parse("alpha"), fake)
    assert not m.ok and m.computed == "-6.2000e-6"


def test_certify_theorem2_small_range():
    cert = certify("theorem2", 2, 300, CTX, probe_below=True)
    assert cert.certified and not cert.witnesses
    assert cert.notes and "holds" in cert.notes[0]


def test_certify_chen_qi_boundary():
    cert = certify("chen_qi", 1, 1, CTX)
    assert cert.certified and cert.equalities == [1]


def test_certify_guo_boundary():
    cert = certify("guo", 2, 50, CTX)
    assert cert.certified and cert.equalities == [2]


def test_certify_detects_violation(monkeypatch):
    import wallis_cf.verify as v

    # swap the cf2 and sigma bounds: the claim must then fail everywhere
    monkeypatch.setitem(v.CLAIMS, "swapped", ((True, True), 2))
    real = v._bounds
    monkeypatch.setattr(v, "_bounds", lambda claim, n, ctx: real("theorem2", n, ctx)[::-1])
    cert = v.certify("swapped", 2, 6, CTX)
    assert cert.status == "violated" and [w.n for w in cert.witnesses] == [2, 3, 4, 5, 6]


def test_certify_indeterminate_when_bounds_coincide(monkeypatch):
    import wallis_cf.verify as v
    from wallis_cf.numerics import rational_to_ball, wallis_exact

    monkeypatch.setitem(v.CLAIMS, "tight", ((True, True), 1))

    def fuzzy(claim, n, ctx):
        w = BallValue.from_center_radius(wallis_exact(n), Fraction(1, 10**200))
        return w, w

    monkeypatch.setattr(v, "_bounds", fuzzy)
    cert = v.certify("tight", 1, 2, CTX)
    assert cert.status == "indeterminate"
    assert cert.precision_used == 50 * 2**4


@pytest.mark.parametrize("args", [("theorem2", 1, 5), ("theorem2", 5, 2), ("guo", 1, 3), ("nope", 2, 3)])
def test_certify_invalid_range(args):
    with pytest.raises(ValueError):
        certify(*args, ctx=CTX)


def test_rate_probe_depth0():
    probe = rate_probe(0, [100, 1000, 10000], CTX)
    assert probe.rate == 3 and probe.claimed_limit == Fraction(1, 144)
    errors = [abs(v.center_fraction() - Fraction(1, 144)) for _, v in probe.samples]
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] < Fraction(1, 144) / 100


@pytest.mark.parametrize("depth", [1, 2, 3])
def test_rate_probe_approaches_derived_limit(depth):
    probe = rate_probe(depth, [10**3, 10**4, 10**5], CTX)
    lim = probe.claimed_limit
    rel = [abs(v.center_fraction() / lim - 1) for _, v in probe.samples]
    assert rel[-1] < Fraction(1, 10**4)
    assert not probe.indeterminate


def test_rate_probe_bad_depth():
    with pytest.raises(ValueError):
        rate_probe(9, [100], CTX)


def test_sign_probe():
    samples = sign_probe_FG([2, 100, 1.5], CTX)
    assert all(s.ok for s in samples)
    assert samples[2].x == Fraction(3, 2)
    with pytest.raises(DomainError):
        sign_probe_FG([1], CTX)


def test_sign_probe_magnitudes_decrease():
    samples = sign_probe_FG([1.5, 2, 3, 5, 10, 100, 1000, 10000], CTX)
    F = [abs(s.F.center_fraction()) for s in samples]
    G = [abs(s.G.center_fraction()) for s in samples]
    assert F == sorted(F, reverse=True) and G == sorted(G, reverse=True)


def test_step_difference_matches_integer_gaps():
    f = dict(gap_sequence(2, 5, 6, CTX))
    F = sign_probe_FG([5], CTX)[0].F
    diff = f[6] - f[5]
    assert abs(diff.center_fraction() - F.center_fraction()) <= diff.radius_fraction() + F.radius_fraction()


def test_gap_directions():
    # f > 0 decreasing and g < 0 increasing, consistent with F < 0 < G
    f = gap_sequence(2, 2, 200, CTX)
    g = gap_sequence(3, 2, 200, CTX)
    assert all(v.is_positive() for _, v in f) and all(v.is_negative() for _, v in g)
    assert monotone_direction(f) == "decreasing"
    assert monotone_direction(g) == "increasing"


def test_monotone_direction_undetermined():
    a = BallValue.exact(1)
    assert monotone_direction([(1, a), (2, a)]) == "undetermined"
