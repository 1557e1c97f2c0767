"""Independent cross-checks used by the test suite only.

These recompute invariants by a different route than the library:
Euler characteristics by counting cells of a lifted cell structure,
orientability by brute-force search over sign assignments.  Agreement
with the library is what the randomized tests assert.
"""
from __future__ import annotations

import random
from typing import Iterable

from coverbench.hurwitz import HurwitzData
from coverbench.perms import Perm, compose_all, inverse
from coverbench.surfaces import ClosedSurface


def lifted_cell_chi(datum: HurwitzData, orbit: Iterable[int]) -> int:
    """Euler characteristic of the part of the total space over one orbit,
    counted as vertices - edges + faces of a lifted cell structure.

    Base cells: one vertex, one loop per handle side or crosscap, one
    spoke out to each branch point, one 2-cell running through the whole
    surface relation. Upstairs each cell is counted by its lifts: the
    vertex and every edge lift once per sheet, the spoke endpoints give
    one vertex per meridian cycle, and the 2-cell lifts once per sheet
    because the relation word acts trivially.
    """
    orbit_set = set(orbit)
    r = 2 * datum.base.genus if datum.base.orientable else datum.base.genus
    b = len(datum.meridians)
    vertices = len(orbit_set)
    for m in datum.meridians:
        # orbits are m-invariant, so testing the first point suffices
        vertices += sum(
            1 for cyc in m.cycles(include_fixed=True) if cyc[0] in orbit_set
        )
    edges = len(orbit_set) * (r + b)
    faces = len(orbit_set)
    return vertices - edges + faces


def signed_generators(datum: HurwitzData) -> list[tuple[Perm, int]]:
    """Generators with their orientation weights: -1 on crosscaps,
    +1 on handle sides and meridians."""
    gens: list[tuple[Perm, int]] = []
    if datum.base.orientable:
        for a, b in datum.handles:
            gens.append((a, 1))
            gens.append((b, 1))
    else:
        for c in datum.crosscaps:
            gens.append((c, -1))
    for m in datum.meridians:
        gens.append((m, 1))
    return gens


def orientable_bruteforce(datum: HurwitzData, orbit: Iterable[int]) -> bool:
    """Exhaustive search for a consistent sign assignment on one orbit.

    Exponential in the orbit size; keep orbits small.
    """
    gens = signed_generators(datum)
    pts = sorted(set(orbit))
    index = {i: k for k, i in enumerate(pts)}
    n = len(pts)
    for bits in range(2 ** max(0, n - 1)):
        s = [1] + [1 if (bits >> k) & 1 else -1 for k in range(n - 1)]
        ok = True
        for g, w in gens:
            for i in pts:
                if s[index[g.images[i]]] != w * s[index[i]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def random_perm(rng: random.Random, d: int) -> Perm:
    xs = list(range(d))
    rng.shuffle(xs)
    return Perm(tuple(xs))


def random_valid_datum(
    rng: random.Random, max_degree: int = 6, max_branch: int = 8
) -> HurwitzData:
    """A random datum satisfying the surface relation.

    All entries but the last meridian are uniform; the last meridian is
    solved from the relation and dropped when it comes out the identity,
    so the branch count occasionally lands one short of the draw.
    """
    d = rng.randint(1, max_degree)
    orientable = rng.random() < 0.5
    genus = rng.randint(0, 2) if orientable else rng.randint(1, 2)
    base = ClosedSurface(orientable, genus)
    handles: tuple[tuple[Perm, Perm], ...] = ()
    crosscaps: tuple[Perm, ...] = ()
    word: list[Perm] = []
    if orientable:
        handles = tuple(
            (random_perm(rng, d), random_perm(rng, d)) for _ in range(genus)
        )
        for a, b in handles:
            word += [a, b, inverse(a), inverse(b)]
    else:
        crosscaps = tuple(random_perm(rng, d) for _ in range(genus))
        for c in crosscaps:
            word += [c, c]
    lead: list[Perm] = []
    target = rng.randint(1, max_branch)
    while len(lead) < target - 1:
        p = random_perm(rng, d)
        if p.is_identity():
            if d == 1:
                break
            continue
        lead.append(p)
    last = inverse(compose_all(word + lead, d))
    meridians = tuple(lead) + (() if last.is_identity() else (last,))
    return HurwitzData(base, d, handles, crosscaps, meridians)


def oracle_census(base: ClosedSurface, d: int, b: int, simple_only: bool):
    """Brute-force census with no solving and no tables: iterate every
    generator tuple, keep valid transitive ones, count raw tuples and
    exact conjugation classes per realized surface.

    Only usable for tiny cells; complexity is |S_d|^(slots).
    """
    import itertools

    from coverbench.hurwitz import HurwitzData, is_connected, total_space, validate
    from coverbench.perms import compose

    group = [Perm(p) for p in itertools.permutations(range(d))]
    pool = [
        p
        for p in group
        if (p.is_transposition() if simple_only else not p.is_identity())
    ]
    r = 2 * base.genus if base.orientable else base.genus
    slots = [group] * r + [pool] * b
    raw: dict = {}
    classes: dict = {}
    for combo in itertools.product(*slots):
        if base.orientable:
            datum = HurwitzData(
                base,
                d,
                handles=tuple(
                    (combo[2 * i], combo[2 * i + 1]) for i in range(base.genus)
                ),
                meridians=tuple(combo[r:]),
            )
        else:
            datum = HurwitzData(
                base, d, crosscaps=tuple(combo[:r]), meridians=tuple(combo[r:])
            )
        if not validate(datum).ok or not is_connected(datum):
            continue
        surface = total_space(datum).components[0][0]
        raw[surface] = raw.get(surface, 0) + 1
        canon = min(
            tuple(
                x
                for g in combo
                for x in compose(compose(inverse(t), g), t).images
            )
            for t in group
        )
        classes.setdefault(surface, set()).add(canon)
    return sorted(
        ((s, raw[s], len(classes[s])) for s in raw),
        key=lambda row: (not row[0].orientable, row[0].genus),
    )


def random_transposition(rng: random.Random, d: int) -> Perm:
    a, b = rng.sample(range(d), 2)
    images = list(range(d))
    images[a], images[b] = b, a
    return Perm(tuple(images))


def random_simple_sphere_datum(
    rng: random.Random, degree: int, branch: int, require_connected: bool = False
) -> HurwitzData:
    """Rejection-sample simple data over the sphere: draw branch-1
    transpositions until their product is itself a transposition, which
    then closes the relation.

    A connected outcome needs branch >= 2*(degree-1); after a bounded
    number of failed draws a deterministic ladder of doubled adjacent
    transpositions is returned instead.
    """
    from coverbench.hurwitz import is_connected
    from coverbench.surfaces import SPHERE

    assert degree >= 2 and branch >= 2 and branch % 2 == 0
    if require_connected:
        assert branch >= 2 * (degree - 1)
    for _ in range(500):
        lead = [random_transposition(rng, degree) for _ in range(branch - 1)]
        last = inverse(compose_all(lead, degree))
        if not last.is_transposition():
            continue
        datum = HurwitzData(SPHERE, degree, meridians=tuple(lead) + (last,))
        if require_connected and not is_connected(datum):
            continue
        return datum
    rungs = [transposition_pair(degree, a) for a in range(degree - 1)]
    meridians = [t for pair in rungs for t in pair]
    while len(meridians) < branch:
        meridians += list(transposition_pair(degree, 0))
    return HurwitzData(SPHERE, degree, meridians=tuple(meridians))


def transposition_pair(degree: int, a: int) -> tuple[Perm, Perm]:
    images = list(range(degree))
    images[a], images[a + 1] = a + 1, a
    t = Perm(tuple(images))
    return t, t
