from fractions import Fraction
from math import comb

import pytest

from depthkit.arrangement import (CircleSpec, DegenerateArrangement, accumulated_entries,
                                  audit_row, circle_arrangement_counts,
                                  collinear_closed_forms, collinear_derived_closed_forms,
                                  collinear_gabriel_circles, collinear_gabriel_counts_derived,
                                  incremental_entry)


def test_published_small_values():
    assert {k: collinear_closed_forms(2)[k] for k in ("faces", "edges", "vertices")} == \
        {"faces": 2, "edges": 2, "vertices": 2}
    four = collinear_closed_forms(4)
    assert (four["faces"], four["vertices"], four["edges"]) == (12, 6, 14)
    with pytest.raises(ValueError):
        collinear_closed_forms(1)


@pytest.mark.parametrize("kind,k,n,want", [("face", 2, 4, 4), ("vertex", 3, 5, 4),
                                           ("face", 1, 7, 1), ("edge", 1, 2, 2)])
def test_incremental_entries(kind, k, n, want):
    assert incremental_entry(kind, k, n) == want


def test_incremental_entry_range():
    with pytest.raises(ValueError):
        incremental_entry("face", 4, 4)
    with pytest.raises(ValueError):
        incremental_entry("area", 1, 3)


@pytest.mark.parametrize("n", range(2, 16))
def test_tables_accumulate_to_published_polynomials(n):
    pub = collinear_closed_forms(n)
    assert accumulated_entries("face", n) == pub["faces"]
    assert accumulated_entries("vertex", n) == pub["vertices"]
    assert accumulated_entries("edge", n) == pub["edges"]


def test_single_circle():
    c = CircleSpec.gabriel((0, 0), (2, 0))
    got = circle_arrangement_counts([c], [(0, 0), (2, 0)])
    assert (got.vertices, got.edges, got.faces, got.cc) == (2, 2, 2, 6)


def test_lone_circle_gets_artificial_vertex():
    got = circle_arrangement_counts([CircleSpec((0, 0), 1)])
    assert (got.vertices, got.edges, got.faces) == (1, 1, 2)


def test_three_crossing_circles():
    circles = [CircleSpec((0, 0), 4), CircleSpec((2, 0), 4), CircleSpec((1, 2), 4)]
    got = circle_arrangement_counts(circles)
    assert (got.vertices, got.edges, got.faces) == (6, 12, 8)
    assert got.euler_ok()


def test_disjoint_circles_two_components():
    got = circle_arrangement_counts([CircleSpec((0, 0), 1), CircleSpec((10, 0), 1)])
    assert got.components == 2 and got.faces == 3 and got.euler_ok()


def test_tangent_circles_share_one_vertex():
    got = circle_arrangement_counts([CircleSpec((0, 0), 1), CircleSpec((2, 0), 1)])
    assert (got.vertices, got.edges, got.faces) == (1, 2, 3)


def test_coincident_circles_rejected():
    with pytest.raises(DegenerateArrangement):
        circle_arrangement_counts([CircleSpec((0, 0), 1), CircleSpec((0, 0), 1)])


def test_marked_point_must_be_on_a_circle():
    with pytest.raises(ValueError):
        circle_arrangement_counts([CircleSpec((0, 0), 1)], [(5, 5)])


def test_unit_spacing_degenerates_at_nine():
    # circles on diameters 0-5, 2-6 and 3-8 all pass through (4, 2)
    circles, _ = collinear_gabriel_circles(9)
    assert all(c.contains_on_boundary((4, 2)) for c in
               [CircleSpec.gabriel((0, 0), (5, 0)), CircleSpec.gabriel((2, 0), (6, 0)),
                CircleSpec.gabriel((3, 0), (8, 0))])
    with pytest.raises(DegenerateArrangement):
        collinear_gabriel_counts_derived(9)
    relaxed = collinear_gabriel_counts_derived(9, strict=False)
    assert relaxed.euler_ok()
    assert relaxed.vertices < collinear_derived_closed_forms(9).vertices


@pytest.mark.parametrize("n,want", [(3, (3, 6, 5, 14)), (4, (6, 16, 12, 34))])
def test_derived_examples(n, want):
    got = collinear_gabriel_counts_derived(n)
    assert (got.vertices, got.edges, got.faces, got.cc) == want


def test_derived_five():
    got = collinear_gabriel_counts_derived(5)
    assert (got.vertices, got.faces, got.edges) == (15, 27, 40)


@pytest.mark.parametrize("n", range(2, 13))
def test_derived_forms_on_generic_spacing(n):
    # squares 0, 1, 4, 9, ... keep every off-axis intersection distinct
    got = collinear_gabriel_counts_derived(n, [k * k for k in range(n)])
    assert got == collinear_derived_closed_forms(n)
    pub = collinear_closed_forms(n)
    assert got.faces == pub["faces"] and got.vertices == pub["vertices"]
    assert got.vertices - n == 2 * comb(n, 4)


def _rotate(p, c, s, shift):
    return (c * p[0] - s * p[1] + shift[0], s * p[0] + c * p[1] + shift[1])


@pytest.mark.parametrize("cs", [(Fraction(3, 5), Fraction(4, 5)), (Fraction(5, 13), Fraction(-12, 13)),
                                (Fraction(-8, 17), Fraction(15, 17))])
def test_rigid_motion_invariance(cs):
    c, s = cs
    shift = (Fraction(7, 3), Fraction(-2))
    pts = [(k * k, 0) for k in range(6)]
    moved = [_rotate(p, c, s, shift) for p in pts]
    circles = [CircleSpec.gabriel(moved[i], moved[j]) for i in range(6) for j in range(i + 1, 6)]
    assert circle_arrangement_counts(circles, moved) == collinear_gabriel_counts_derived(6, [k * k for k in range(6)])


def test_audit_row_flags_edges():
    row = audit_row(4)
    assert row["published"]["edges"] == 14 and row["derived"]["edges"] == 16
    assert not row["match"]["edges"] and not row["match"]["cc"]
    assert row["match"]["faces"] and row["match"]["vertices"] and row["euler_ok"]
