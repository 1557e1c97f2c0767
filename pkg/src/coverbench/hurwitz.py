"""Branched covers of closed surfaces as permutation monodromy data.

A datum records where loops on the punctured base go in S_d: one pair of
permutations per handle, one per crosscap, one meridian per branch
point. Words multiply left to right, so the surface relation reads

    orientable base:     [a1,b1]...[ag,bg] . m1...mb = id
    nonorientable base:  c1^2 ... ch^2     . m1...mb = id

with [a,b] = a.b.a^-1.b^-1 in the same convention.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    InvalidData,
    NonorientableBase,
    NotConnected,
    NotSimple,
    ValidationReport,
    WrongBase,
)
from .perms import (
    Perm,
    compose_all,
    from_cycles,
    identity,
    inverse,
    orbits,
    transposition,
)
from .surfaces import (
    PROJECTIVE_PLANE,
    SPHERE,
    ClosedSurface,
    classify,
    euler_characteristic,
)


@dataclass(frozen=True)
class HurwitzData:
    base: ClosedSurface
    degree: int
    handles: tuple[tuple[Perm, Perm], ...] = ()
    crosscaps: tuple[Perm, ...] = ()
    meridians: tuple[Perm, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "handles", tuple((a, b) for a, b in self.handles)
        )
        object.__setattr__(self, "crosscaps", tuple(self.crosscaps))
        object.__setattr__(self, "meridians", tuple(self.meridians))

    @property
    def branch_count(self) -> int:
        return len(self.meridians)


@dataclass(frozen=True)
class CoverSummary:
    degree: int
    simple: bool
    components: tuple[tuple[ClosedSurface, int], ...]
    branch_point_count: int
    branching_indices: tuple[tuple[int, ...], ...]

    @property
    def connected(self) -> bool:
        return len(self.components) == 1


def generators(datum: HurwitzData) -> list[Perm]:
    """All monodromy generators, in datum order."""
    gens: list[Perm] = []
    for a, b in datum.handles:
        gens.append(a)
        gens.append(b)
    gens.extend(datum.crosscaps)
    gens.extend(datum.meridians)
    return gens


def relation_word(datum: HurwitzData) -> list[Perm]:
    """The boundary word whose product must be the identity."""
    word: list[Perm] = []
    if datum.base.orientable:
        for a, b in datum.handles:
            word += [a, b, inverse(a), inverse(b)]
    else:
        for c in datum.crosscaps:
            word += [c, c]
    word.extend(datum.meridians)
    return word


def validate(datum: HurwitzData) -> ValidationReport:
    problems: list[str] = []
    notes: list[str] = []
    d = datum.degree
    if d < 1:
        problems.append(f"degree must be positive, got {d}")
        return ValidationReport(False, problems)

    if datum.base.orientable:
        if len(datum.handles) != datum.base.genus:
            problems.append(
                f"expected {datum.base.genus} handle pairs, got {len(datum.handles)}"
            )
        if datum.crosscaps:
            problems.append("orientable base cannot carry crosscap images")
    else:
        if len(datum.crosscaps) != datum.base.genus:
            problems.append(
                f"expected {datum.base.genus} crosscap images, got {len(datum.crosscaps)}"
            )
        if datum.handles:
            problems.append("nonorientable base cannot carry handle images")

    degrees_ok = True
    for label, p in _labeled_perms(datum):
        if p.degree != d:
            problems.append(f"{label} has degree {p.degree}, expected {d}")
            degrees_ok = False

    for j, m in enumerate(datum.meridians):
        if m.is_identity():
            problems.append(f"meridian {j} is the identity")

    if degrees_ok:
        product = compose_all(relation_word(datum), d)
        if not product.is_identity():
            problems.append(
                f"surface relation fails: word product has images {list(product.images)}"
            )

    if not datum.meridians:
        notes.append("unbranched datum (no branch points)")

    return ValidationReport(not problems, problems, notes)


def _labeled_perms(datum: HurwitzData):
    for i, (a, b) in enumerate(datum.handles):
        yield f"handle {i} first image", a
        yield f"handle {i} second image", b
    for i, c in enumerate(datum.crosscaps):
        yield f"crosscap {i}", c
    for j, m in enumerate(datum.meridians):
        yield f"meridian {j}", m


def _restricted_cycle_count(p: Perm, orbit: set[int]) -> int:
    # orbits of the full generator set are p-invariant for any generator p
    return sum(1 for cyc in p.cycles(include_fixed=True) if cyc[0] in orbit)


def _component_orientable(datum: HurwitzData, orbit: list[int]) -> bool:
    """Sign-propagation test on the Schreier graph of one orbit.

    Crosscap generators carry weight -1, everything else +1; the
    component is orientable iff signs can be assigned consistently.
    """
    if datum.base.orientable:
        return True
    weighted = [(c, -1) for c in datum.crosscaps] + [
        (m, 1) for m in datum.meridians
    ]
    adjacency: dict[int, list[tuple[int, int]]] = {i: [] for i in orbit}
    edges: list[tuple[int, int, int]] = []
    for g, w in weighted:
        for i in orbit:
            j = g.images[i]
            edges.append((i, j, w))
            adjacency[i].append((j, w))
            adjacency[j].append((i, w))
    sign: dict[int, int] = {}
    for start in orbit:
        if start in sign:
            continue
        sign[start] = 1
        stack = [start]
        while stack:
            i = stack.pop()
            for j, w in adjacency[i]:
                if j not in sign:
                    sign[j] = w * sign[i]
                    stack.append(j)
    return all(sign[j] == w * sign[i] for i, j, w in edges)


def total_space(datum: HurwitzData) -> CoverSummary:
    report = validate(datum)
    if not report.ok:
        raise InvalidData("; ".join(report.problems))
    d = datum.degree
    chi_base = euler_characteristic(datum.base)
    components: list[tuple[ClosedSurface, int]] = []
    for orbit in orbits(generators(datum), d):
        orbit_set = set(orbit)
        size = len(orbit)
        chi = size * chi_base
        for m in datum.meridians:
            chi -= size - _restricted_cycle_count(m, orbit_set)
        orientable = _component_orientable(datum, list(orbit))
        components.append((classify(chi, orientable), size))
    return CoverSummary(
        degree=d,
        simple=all(m.is_transposition() for m in datum.meridians),
        components=tuple(components),
        branch_point_count=len(datum.meridians),
        branching_indices=tuple(m.cycle_type() for m in datum.meridians),
    )


def is_connected(datum: HurwitzData) -> bool:
    return len(orbits(generators(datum), datum.degree)) == 1


def construct_hyperelliptic(g: int) -> HurwitzData:
    """Degree-2 data over the sphere with 2g+2 branch points; the total
    space is the closed orientable genus-g surface."""
    if g < 0:
        raise ValueError(f"genus must be >= 0, got {g}")
    swap = transposition(2, 0, 1)
    return HurwitzData(SPHERE, 2, meridians=(swap,) * (2 * g + 2))


def construct_cyclic_rp2(h: int) -> HurwitzData:
    """Degree-h cyclic data over the projective plane whose total space
    is the nonorientable surface with h crosscaps.

    The crosscap image is trivial and the two meridians are inverse
    h-cycles; h = 1 degenerates to the unbranched identity datum.
    """
    if h < 1:
        raise ValueError(f"crosscap number must be >= 1, got {h}")
    if h == 1:
        return HurwitzData(PROJECTIVE_PLANE, 1, crosscaps=(identity(1),))
    sigma = from_cycles(h, [tuple(range(h))])
    return HurwitzData(
        PROJECTIVE_PLANE,
        h,
        crosscaps=(identity(h),),
        meridians=(sigma, inverse(sigma)),
    )


def _extended(p: Perm, new_degree: int) -> Perm:
    return Perm(p.images + tuple(range(p.degree, new_degree)))


def stabilize(datum: HurwitzData) -> HurwitzData:
    """Add a trivial sheet joined by a pair of simple branch points.

    Degree goes up by one and the branch count by two. Over the sphere
    this is a connected sum with the base, so the total space is
    unchanged; over positive genus it adds the base's topology.
    """
    report = validate(datum)
    if not report.ok:
        raise InvalidData("; ".join(report.problems))
    if not datum.base.orientable:
        raise NonorientableBase("stabilization needs an orientable base")
    if not all(m.is_transposition() for m in datum.meridians):
        raise NotSimple("stabilization needs simple branching")
    if not is_connected(datum):
        raise NotConnected("stabilization needs a connected total space")
    d = datum.degree
    swap = transposition(d + 1, d - 1, d)
    return HurwitzData(
        datum.base,
        d + 1,
        handles=tuple(
            (_extended(a, d + 1), _extended(b, d + 1)) for a, b in datum.handles
        ),
        meridians=tuple(_extended(m, d + 1) for m in datum.meridians)
        + (swap, swap),
    )


def compose_orientation_double(datum: HurwitzData) -> HurwitzData:
    """Push data over the sphere down to the projective plane by
    composing with the orientation double cover.

    Sheets double: sheet i of the input becomes i and i+d, the crosscap
    image swaps the two copies, and each meridian acts on the first copy
    only. Component surfaces and simplicity are unchanged while every
    component degree doubles.
    """
    report = validate(datum)
    if not report.ok:
        raise InvalidData("; ".join(report.problems))
    if datum.base != SPHERE:
        raise WrongBase("orientation double cover composition needs base = sphere")
    d = datum.degree
    swap_copies = Perm(tuple(range(d, 2 * d)) + tuple(range(d)))
    return HurwitzData(
        PROJECTIVE_PLANE,
        2 * d,
        crosscaps=(swap_copies,),
        meridians=tuple(_extended(m, 2 * d) for m in datum.meridians),
    )
