"""Monodromy data: validation, total spaces, constructions."""
from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from coverbench.errors import (
    InvalidData,
    NonorientableBase,
    NotConnected,
    NotSimple,
    WrongBase,
)
from coverbench.hurwitz import (
    CoverSummary,
    HurwitzData,
    compose_orientation_double,
    construct_cyclic_rp2,
    construct_hyperelliptic,
    generators,
    is_connected,
    stabilize,
    total_space,
    validate,
)
from coverbench.perms import Perm, from_cycles, identity, inverse, orbits, transposition
from coverbench.surfaces import (
    KLEIN_BOTTLE,
    PROJECTIVE_PLANE,
    SPHERE,
    TORUS,
    ClosedSurface,
    euler_characteristic,
)

from oracles import (
    lifted_cell_chi,
    orientable_bruteforce,
    random_simple_sphere_datum,
    random_valid_datum,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


# --- validate ---


def test_validate_hyperelliptic_six_points():
    assert validate(construct_hyperelliptic(2)).ok


def test_validate_odd_transposition_count_fails():
    datum = HurwitzData(SPHERE, 2, meridians=(transposition(2, 0, 1),))
    report = validate(datum)
    assert not report.ok
    assert any("relation" in p for p in report.problems)


def test_validate_rp2_three_cycle():
    c = from_cycles(3, [(0, 1, 2)])
    datum = HurwitzData(PROJECTIVE_PLANE, 3, crosscaps=(c,), meridians=(c,))
    assert validate(datum).ok


def test_validate_structural_problems():
    report = validate(
        HurwitzData(
            SPHERE,
            3,
            crosscaps=(identity(3),),
            meridians=(identity(3), transposition(2, 0, 1)),
        )
    )
    assert not report.ok
    assert any("crosscap" in p for p in report.problems)
    assert any("identity" in p for p in report.problems)
    assert any("degree 2" in p for p in report.problems)


def test_validate_handle_count_checked():
    report = validate(HurwitzData(TORUS, 2))
    assert not report.ok
    assert any("handle" in p for p in report.problems)


def test_validate_unbranched_notes():
    report = validate(HurwitzData(SPHERE, 2))
    assert report.ok
    assert report.notes


# --- total_space ---


def test_total_space_hyperelliptic_genus_2():
    summary = total_space(construct_hyperelliptic(2))
    assert summary.degree == 2
    assert summary.simple
    assert summary.components == ((ClosedSurface(True, 2), 2),)
    assert summary.branch_point_count == 6
    assert summary.branching_indices == ((2,),) * 6
    assert euler_characteristic(summary.components[0][0]) == -2


def test_total_space_trivial_monodromy_splits():
    summary = total_space(HurwitzData(SPHERE, 2))
    assert summary.components == ((SPHERE, 1), (SPHERE, 1))
    assert not summary.connected


def test_total_space_klein_bottle():
    datum = HurwitzData(
        PROJECTIVE_PLANE,
        2,
        crosscaps=(identity(2),),
        meridians=(transposition(2, 0, 1), transposition(2, 0, 1)),
    )
    summary = total_space(datum)
    assert summary.components == ((KLEIN_BOTTLE, 2),)
    assert summary.simple


def test_total_space_rejects_invalid():
    with pytest.raises(InvalidData):
        total_space(HurwitzData(SPHERE, 2, meridians=(transposition(2, 0, 1),)))


# --- constructions ---


@pytest.mark.parametrize("g", [0, 1, 2, 5])
def test_hyperelliptic_family(g):
    datum = construct_hyperelliptic(g)
    assert validate(datum).ok
    assert datum.branch_count == 2 * g + 2
    summary = total_space(datum)
    assert summary.components == ((ClosedSurface(True, g), 2),)
    assert summary.simple


def test_cyclic_rp2_degenerate():
    datum = construct_cyclic_rp2(1)
    assert validate(datum).ok
    assert datum.degree == 1 and datum.branch_count == 0
    assert total_space(datum).components == ((PROJECTIVE_PLANE, 1),)


@pytest.mark.parametrize("h", [2, 3, 4, 7])
def test_cyclic_rp2_family(h):
    datum = construct_cyclic_rp2(h)
    assert validate(datum).ok
    summary = total_space(datum)
    assert summary.components == ((ClosedSurface(False, h), h),)
    assert summary.branching_indices == ((h,), (h,))


def test_cyclic_rp2_h3_monodromy():
    datum = construct_cyclic_rp2(3)
    assert datum.meridians[0].images == (1, 2, 0)
    assert datum.meridians[1].images == (2, 0, 1)
    assert total_space(datum).components[0][0] == ClosedSurface(False, 3)


# --- stabilize ---


def test_stabilize_torus_cover():
    out = stabilize(construct_hyperelliptic(1))
    assert out.degree == 3 and out.branch_count == 6
    assert total_space(out).components == ((TORUS, 3),)


def test_stabilize_twice_sphere():
    out = stabilize(stabilize(construct_hyperelliptic(0)))
    assert out.degree == 4 and out.branch_count == 6
    assert total_space(out).components == ((SPHERE, 4),)


@pytest.mark.parametrize("g", [0, 1, 3])
def test_stabilize_tower_every_degree(g):
    datum = construct_hyperelliptic(g)
    for n in range(3, 8):
        datum = stabilize(datum)
        summary = total_space(datum)
        assert datum.degree == n
        assert summary.simple
        assert summary.components == ((ClosedSurface(True, g), n),)


def test_stabilize_rejects_nonsimple():
    c = from_cycles(3, [(0, 1, 2)])
    datum = HurwitzData(SPHERE, 3, meridians=(c, inverse(c)))
    assert validate(datum).ok
    with pytest.raises(NotSimple):
        stabilize(datum)


def test_stabilize_rejects_disconnected():
    t = transposition(4, 0, 1)
    datum = HurwitzData(SPHERE, 4, meridians=(t, t))
    with pytest.raises(NotConnected):
        stabilize(datum)


def test_stabilize_rejects_nonorientable_base():
    with pytest.raises(NonorientableBase):
        stabilize(construct_cyclic_rp2(2))


# --- orientation double cover ---


def test_double_of_identity_cover():
    datum = HurwitzData(SPHERE, 1)
    out = compose_orientation_double(datum)
    assert out.base == PROJECTIVE_PLANE and out.degree == 2
    assert out.crosscaps[0].images == (1, 0)
    assert out.branch_count == 0
    assert total_space(out).components == ((SPHERE, 2),)


@pytest.mark.parametrize("g", [1, 2])
def test_double_of_hyperelliptic(g):
    out = compose_orientation_double(construct_hyperelliptic(g))
    assert out.degree == 4
    summary = total_space(out)
    assert summary.components == ((ClosedSurface(True, g), 4),)
    assert summary.simple


def test_double_rejects_other_bases():
    datum = HurwitzData(TORUS, 2, handles=((identity(2), identity(2)),))
    assert validate(datum).ok
    with pytest.raises(WrongBase):
        compose_orientation_double(datum)


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_double_preserves_components_and_doubles_degrees(seed):
    rng = random.Random(seed)
    datum = random_valid_datum(rng, max_degree=5, max_branch=6)
    if not datum.base.orientable or datum.base.genus != 0:
        return
    before = total_space(datum)
    after = total_space(compose_orientation_double(datum))
    assert after.degree == 2 * before.degree
    assert after.simple == before.simple
    assert tuple((s, 2 * n) for s, n in before.components) == after.components


# --- randomized agreement with the oracles ---


@given(seeds)
@settings(max_examples=120, deadline=None)
def test_chi_matches_lifted_cell_count(seed):
    rng = random.Random(seed)
    datum = random_valid_datum(rng, max_degree=6, max_branch=8)
    summary = total_space(datum)
    parts = orbits(generators(datum), datum.degree)
    assert len(parts) == len(summary.components)
    for orbit, (surface, size) in zip(parts, summary.components):
        assert size == len(orbit)
        assert euler_characteristic(surface) == lifted_cell_chi(datum, orbit)


@given(seeds)
@settings(max_examples=80, deadline=None)
def test_orientability_matches_bruteforce(seed):
    rng = random.Random(seed)
    datum = random_valid_datum(rng, max_degree=6, max_branch=6)
    summary = total_space(datum)
    for orbit, (surface, _) in zip(
        orbits(generators(datum), datum.degree), summary.components
    ):
        assert surface.orientable == orientable_bruteforce(datum, orbit)


@given(seeds)
@settings(max_examples=80, deadline=None)
def test_orientable_base_gives_orientable_components(seed):
    rng = random.Random(seed)
    datum = random_valid_datum(rng, max_degree=6, max_branch=8)
    if not datum.base.orientable:
        return
    for surface, _ in total_space(datum).components:
        assert surface.orientable


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_stabilize_preserves_classification_over_sphere(seed):
    rng = random.Random(seed)
    degree = rng.randint(2, 5)
    datum = random_simple_sphere_datum(
        rng, degree=degree, branch=2 * rng.randint(degree - 1, degree + 1),
        require_connected=True,
    )
    before = total_space(datum)
    after = total_space(stabilize(datum))
    assert after.components[0][0] == before.components[0][0]
    assert after.degree == before.degree + 1


def test_sphere_total_space_needs_sphere_base():
    """Over an orientable base of positive genus no component can be a
    sphere: branching only lowers chi, so chi <= size*(2-2g) < 2."""
    for g in range(1, 4):
        for degree in range(1, 5):
            for size in range(1, degree + 1):
                assert size * (2 - 2 * g) < 2


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_positive_genus_base_never_covered_by_sphere(seed):
    rng = random.Random(seed)
    datum = random_valid_datum(rng, max_degree=4, max_branch=6)
    if not datum.base.orientable or datum.base.genus == 0:
        return
    for surface, _ in total_space(datum).components:
        assert surface != SPHERE
