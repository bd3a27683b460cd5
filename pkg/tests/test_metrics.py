import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import kernelscope as ks
from kernelscope import INF

from conftest import random_disk

finite_complex = st.builds(
    complex,
    st.floats(-50, 50, allow_nan=False, allow_infinity=False),
    st.floats(-50, 50, allow_nan=False, allow_infinity=False),
)


# -- chordal distance ---------------------------------------------------------

def test_chordal_examples():
    assert ks.chordal_distance(0, 0) == 0
    assert ks.chordal_distance(0, 1) == pytest.approx(math.sqrt(2), rel=1e-15)
    assert ks.chordal_distance(0, float("inf")) == 2
    assert ks.chordal_distance(float("inf"), float("inf")) == 0


@given(finite_complex, finite_complex)
def test_chordal_symmetric_and_separating(a, b):
    assert ks.chordal_distance(a, b) == ks.chordal_distance(b, a)
    assert (ks.chordal_distance(a, b) == 0) == (a == b)
    assert 0 <= ks.chordal_distance(a, b) <= 2


@settings(max_examples=200)
@given(finite_complex, finite_complex, finite_complex)
def test_chordal_triangle_inequality(a, b, c):
    ab = ks.chordal_distance(a, b)
    ac = ks.chordal_distance(a, c)
    cb = ks.chordal_distance(c, b)
    assert ab <= ac + cb + 1e-12


# -- Hausdorff distance on finite sets ------------------------------------------

def test_hausdorff_examples():
    assert ks.hausdorff_distance([0], [0]) == 0
    assert ks.hausdorff_distance([0, 1], [0]) == pytest.approx(math.sqrt(2), rel=1e-15)


def test_hausdorff_gauss_exp_pair():
    s_pert = ks.singular_values("gauss_exp", INF, 0.05)
    s_base = ks.singular_values("gauss_exp", INF, 0)
    # independent derivation: the directed distance is chordal(e^3, 0)
    # = 2 e^3 / hypot(1, e^3) = 1.9975258464844605
    expected = 2 * math.exp(3) / math.hypot(1.0, math.exp(3))
    assert expected == pytest.approx(1.9975258464844605, rel=1e-15)
    assert ks.hausdorff_distance(s_pert, s_base) == pytest.approx(expected, rel=1e-12)


def test_hausdorff_empty_set_error():
    with pytest.raises(ks.EmptySet):
        ks.hausdorff_distance([], [0])


def test_hausdorff_metric_axioms(rng):
    # 200 random triples of finite sets: exact symmetry, triangle inequality
    def random_set():
        return [complex(z) for z in random_disk(rng, int(rng.integers(1, 6)), 5.0)]
    for _ in range(200):
        a, b, c = random_set(), random_set(), random_set()
        assert ks.hausdorff_distance(a, b) == ks.hausdorff_distance(b, a)
        assert (ks.hausdorff_distance(a, b)
                <= ks.hausdorff_distance(a, c) + ks.hausdorff_distance(c, b))
        assert ks.hausdorff_distance(a, a) == 0


# -- chi_luc ----------------------------------------------------------------------

def test_chi_luc_identity():
    value, bound = ks.chi_luc(("exp_poly", 8, 1.0), ("exp_poly", 8, 1.0), 6)
    assert value == 0
    assert bound == 2 ** -6


def test_chi_luc_decreases_with_n():
    v8, _ = ks.chi_luc(("exp_poly", 8, 1.0), ("exp_poly", INF, 1.0), 6)
    v128, _ = ks.chi_luc(("exp_poly", 128, 1.0), ("exp_poly", INF, 1.0), 6)
    assert v8 > v128


def test_chi_luc_blind_to_singular_blowup():
    # locally uniform distance stays small while the singular sets separate
    value, _ = ks.chi_luc(("gauss_exp", INF, 0.01), ("gauss_exp", INF, 0.0), 6)
    assert value <= 0.2
    report = ks.chi_dyn(("gauss_exp", INF, 0.01), ("gauss_exp", INF, 0.0), 6)
    assert report.hausdorff_singular >= 1.9


# -- chi_dyn ----------------------------------------------------------------------

def test_chi_dyn_identity_within_truncation():
    report = ks.chi_dyn(("cubic_example", 4, 0.2), ("cubic_example", 4, 0.2), 6)
    assert report.chi_dyn <= report.truncation_bound


def test_chi_dyn_decomposition_exact():
    report = ks.chi_dyn(("exp_poly", 32, 1.0), ("exp_poly", INF, 1.0), 6)
    assert report.chi_dyn == report.chi_luc + report.hausdorff_singular


def test_chi_dyn_equals_chi_luc_for_exp_poly():
    # both singular sets are {0}, so the Hausdorff term vanishes exactly
    report = ks.chi_dyn(("exp_poly", 8, 1.0), ("exp_poly", INF, 1.0), 6)
    assert report.hausdorff_singular == 0
    assert report.chi_dyn == report.chi_luc


def test_chi_dyn_dynamical_approximation_witness():
    # frozen from direct computation: 0.5606 / 0.3626 / 0.2284; the series
    # terms k >= 4 saturate at this n range, so the plateau is ~0.109
    values = [ks.chi_dyn(("exp_poly", n, 1.0), ("exp_poly", INF, 1.0), 6).chi_dyn
              for n in (8, 32, 128)]
    assert values[0] > values[1] > values[2]
    assert values[2] < 0.25


def test_metric_report_json_keys():
    report = ks.chi_dyn(("gauss_exp", INF, 0.01), ("gauss_exp", INF, 0.0), 6)
    d = report.to_json_dict()
    assert set(d) == {"chi_luc", "hausdorff_singular", "chi_dyn", "truncation_bound"}
    assert d["chi_dyn"] == d["chi_luc"] + d["hausdorff_singular"]


def test_chi_luc_rejects_bad_K():
    with pytest.raises(ValueError):
        ks.chi_luc(("exp_poly", 8, 1.0), ("exp_poly", 8, 1.0), 0)
