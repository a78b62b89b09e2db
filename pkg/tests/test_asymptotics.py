import math

import pytest

from sharp_constant.asymptotics import asymptotics_report, comparison_constants, mehler_heine_gap
from utils.errors import DomainError

TABLE_P = [10.0, 30.0, 100.0, 300.0, 1000.0, 3000.0, 10000.0]


def test_comparison_constants_at_two():
    assert comparison_constants(2.0) == (2.0, 1.0, 1.0)


def test_report_for_small_p():
    report = asymptotics_report([6.0, 12.0])
    first, second = report.rows
    assert first.c_p == pytest.approx(2.0 + math.sqrt(3.0), abs=1e-9)
    assert second.p_one_minus_z == pytest.approx(12.0 * (1.0 - math.sqrt(0.6)), abs=1e-9)
    assert second.p_one_minus_z == pytest.approx(2.7048, abs=1e-4)
    assert second.p_one_minus_z < report.j0_sq_half
    assert report.j0_sq_half == pytest.approx(2.8916, abs=1e-4)
    assert report.four_over_j0_sq == pytest.approx(2.0 / report.j0_sq_half, rel=1e-15)
    for row in report.rows:
        assert row.c_p < row.orthogonal_bound


def test_frame_and_header():
    report = asymptotics_report([6.0, 12.0])
    frame = report.to_frame()
    assert list(frame.columns) == [
        "p",
        "z_p",
        "c_p",
        "p_one_minus_z",
        "c_over_p",
        "orthogonal_bound",
        "orthogonal_subordinate_bound",
        "general_bound",
    ]
    assert len(frame) == 2
    assert report.header_lines()[0].startswith("j0 = 2.4048")


@pytest.mark.slow
def test_large_p_limits():
    report = asymptotics_report(TABLE_P)
    products = [row.p_one_minus_z for row in report.rows]
    zs = [row.z_p for row in report.rows]
    assert all(b > a for a, b in zip(products, products[1:]))
    assert all(b > a for a, b in zip(zs, zs[1:]))
    last = report.rows[-1]
    assert abs(last.p_one_minus_z / report.j0_sq_half - 1.0) < 0.02
    assert abs(last.c_over_p / report.four_over_j0_sq - 1.0) < 0.02


@pytest.mark.parametrize("p_list", [[], [12.0, 6.0], [6.0, 6.0]])
def test_report_rejects_bad_lists(p_list):
    with pytest.raises(DomainError):
        asymptotics_report(p_list)


def test_mehler_heine_gap_shrinks():
    assert mehler_heine_gap(100, 2.0) < mehler_heine_gap(10, 2.0)
    assert mehler_heine_gap(100, 2.0) < 1e-2


def test_mehler_heine_needs_positive_degree():
    with pytest.raises(DomainError):
        mehler_heine_gap(0, 1.0)
