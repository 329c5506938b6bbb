"""Filtrations, completion complexes, and the sandwich property."""

import math

import numpy as np
import pytest

from cechkit.complexes import (
    Filtration,
    cech_filtration,
    check_completion_sandwich,
    completion,
    rips_filtration,
)
from cechkit.errors import InvalidInput

from conftest import TRIANGLE, random_cloud


def test_cech_filtration_triangle():
    filt = cech_filtration(TRIANGLE, 2)
    vals = filt.value_of()
    assert len(vals) == 7
    for v in ((0,), (1,), (2,)):
        assert vals[v] == 0.0
    assert vals[(0, 1)] == pytest.approx(1.0)
    assert vals[(0, 1, 2)] == pytest.approx(1.1547005, abs=1e-6)


def test_rips_filtration_triangle():
    vals = rips_filtration(TRIANGLE, 2).value_of()
    assert vals[(0, 1)] == pytest.approx(2.0)
    assert vals[(0, 1, 2)] == pytest.approx(2.0)


def test_filtration_sorted_and_face_monotone():
    rng = np.random.default_rng(51)
    pts = random_cloud(rng, 7, 3)
    for filt in (cech_filtration(pts, 3), rips_filtration(pts, 3)):
        assert filt.is_face_monotone()
        keys = [(v, len(s), s) for s, v in filt.entries]
        assert keys == sorted(keys)


def test_cech_rips_interleaving():
    # rad <= diam <= 2 * rad, edge values equal.
    rng = np.random.default_rng(52)
    pts = random_cloud(rng, 8, 2)
    cv = cech_filtration(pts, 2).value_of()
    rv = rips_filtration(pts, 2).value_of()
    for s, v in cv.items():
        if len(s) == 2:
            assert rv[s] == pytest.approx(2.0 * v, rel=1e-12)
        assert v <= rv[s] + 1e-12
        assert rv[s] <= 2.0 * v + 1e-12


def test_completion_order_one_is_rips_radius_convention():
    # M_1 of a Cech filtration enters a simplex at its largest edge
    # radius, i.e. half the Rips value.
    rng = np.random.default_rng(53)
    pts = random_cloud(rng, 7, 2)
    comp = completion(cech_filtration(pts, 1), 1, 6).value_of()
    rips = rips_filtration(pts, 6).value_of()
    for s, v in comp.items():
        assert v == pytest.approx(rips[s] / 2.0, rel=1e-12, abs=1e-12)


def test_completion_exact_for_high_orders():
    # In R^d, Cech values are determined by (d+1)-wise mebs (Helly), so
    # completion at order i >= d reproduces the Cech filtration.
    rng = np.random.default_rng(54)
    for d in (1, 2):
        pts = random_cloud(rng, 7, d)
        cech = cech_filtration(pts, 6)
        comp = completion(cech, d, 6).value_of()
        for s, v in cech.value_of().items():
            assert comp[s] == pytest.approx(v, rel=1e-9, abs=1e-12)


def test_completion_idempotent_and_monotone_in_order():
    rng = np.random.default_rng(55)
    pts = random_cloud(rng, 6, 3)
    cech = cech_filtration(pts, 5)
    prev = None
    for i in (1, 2, 3):
        comp = completion(cech, i, 5)
        again = completion(comp, i, 5)
        assert comp.value_of() == again.value_of()
        vals = comp.value_of()
        if prev is not None:
            for s, v in prev.items():
                assert v <= vals[s] + 1e-12  # higher order enters later
        prev = vals
    with pytest.raises(InvalidInput):
        completion(cech, 0, 5)


def test_completion_requires_full_skeleton():
    filt = Filtration([((0,), 0.0), ((1,), 0.0), ((2,), 0.0), ((0, 1), 1.0)])
    with pytest.raises(InvalidInput):
        completion(filt, 1, 2)


def test_sandwich_at_sqrt2_minus_one():
    rng = np.random.default_rng(56)
    eps = math.sqrt(2.0) - 1.0
    for _ in range(3):
        pts = random_cloud(rng, 7, 3)
        report = check_completion_sandwich(pts, eps, [0.1, 0.3, 0.6, 1.0])
        assert report.ok, report.violations[:3]
        assert report.delta == 2


def test_sandwich_small_eps():
    rng = np.random.default_rng(57)
    pts = random_cloud(rng, 8, 2)
    report = check_completion_sandwich(pts, 0.25, [0.2, 0.5])
    assert report.ok, report.violations[:3]


def test_dump_parse_round_trip():
    rng = np.random.default_rng(58)
    filt = cech_filtration(random_cloud(rng, 6, 2), 2)
    back = Filtration.parse(filt.dump())
    assert back.entries == filt.entries


def test_parse_rejects_garbage():
    with pytest.raises(InvalidInput):
        Filtration.parse("0 1 ; not-a-number\n")
    with pytest.raises(InvalidInput):
        Filtration.parse("just words\n")


def test_complex_at_threshold():
    filt = Filtration([((0,), 0.0), ((1,), 0.0), ((0, 1), 0.5)])
    assert filt.complex_at(0.4) == {(0,), (1,)}
    assert filt.complex_at(0.5) == {(0,), (1,), (0, 1)}
    assert filt.max_dim() == 1
