"""Branched covers of the plane built level by level over an exhaustion.

Each piece of a normalized exhaustion is covered by one block. The
block over the level-1 disk is the two-sheeted cover branched at one
point. A one-legged piece of genus g is covered by an annulus block on
the same two sheets with 2g simple branch points. A two-legged piece
adds two fresh sheets capped inward by disks, so the degree over later
stages grows by two per split; its meridians are the lexicographically
first word of transpositions whose total boundary product splits the
four sheets into two pairs while the meridians alone connect them.

The staircase is the standalone comparison cover: one new sheet per
level, one branch point per level, fiber count growing without bound.
All invariants checked here are combinatorial consequences of counting
lifted cells, so verify_layered re-derives them from the raw block
data rather than trusting the constructors.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    DepthExceeded,
    InvalidInput,
    NonorientableInput,
    NotNormalized,
    UnverifiedInput,
)
from .exhaustion import (
    ExhaustionGraph,
    is_normalized_through,
    piece_shape,
    validate_exhaustion,
)

BLOCK_KINDS = ("disk", "annulus", "pants", "staircase")


@dataclass(frozen=True)
class Block:
    piece: str
    level: int
    kind: str
    sheets: tuple[int, ...]
    caps: tuple[int, ...]
    inbound: tuple[int, ...] | None
    meridians: tuple[tuple[int, int], ...]
    labels: tuple[tuple[int, int], ...]
    outbound: tuple[tuple[int, tuple[int, ...]], ...]
    parent: str | None
    parent_circle: int | None


@dataclass(frozen=True)
class LayeredCover:
    depth: int
    degree: int
    blocks: tuple[Block, ...]

    def at_level(self, j: int) -> tuple[Block, ...]:
        return tuple(b for b in self.blocks if b.level == j)

    @property
    def pants_count(self) -> int:
        return sum(1 for b in self.blocks if b.kind == "pants")

    @property
    def branch_count(self) -> int:
        return sum(len(b.meridians) for b in self.blocks)


@dataclass(frozen=True)
class LayeredReport:
    checks: tuple[tuple[str, bool, str], ...]

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.checks)

    @property
    def failures(self) -> tuple[str, ...]:
        return tuple(name for name, passed, _ in self.checks if not passed)


@dataclass(frozen=True)
class ComposedReport:
    cover_degree: int
    staircase_depth: int
    fiber_count: int
    labels: tuple[tuple, ...]
    potentially_nonsimple: bool
    unbounded_in_depth: bool
    notes: tuple[str, ...]


# --- permutation words on small sheet sets ---


def _word_perm(
    sheets: tuple[int, ...],
    inbound: tuple[int, ...] | None,
    meridians: tuple[tuple[int, int], ...],
) -> dict[int, int]:
    """Boundary product of a block: inbound cycle first, then the
    meridian transpositions left to right."""
    perm = {s: s for s in sheets}
    if inbound:
        for a, b in zip(inbound, inbound[1:] + (inbound[0],)):
            perm[a] = b
    for a, b in meridians:
        for s in sheets:
            v = perm[s]
            perm[s] = b if v == a else a if v == b else v
    return perm


def _perm_cycles(perm: dict[int, int]) -> tuple[tuple[int, ...], ...]:
    seen: set[int] = set()
    out = []
    for s in sorted(perm):
        if s in seen:
            continue
        cyc = [s]
        seen.add(s)
        x = perm[s]
        while x != s:
            cyc.append(x)
            seen.add(x)
            x = perm[x]
        if len(cyc) > 1:
            out.append(tuple(cyc))
    return tuple(out)


# --- canonical pants meridians ---

_TRANS4 = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
_FULL_PART = (0, 0, 0, 0)


def _tmul(p: tuple[int, ...], t: tuple[int, int]) -> tuple[int, ...]:
    a, b = t
    return tuple(b if x == a else a if x == b else x for x in p)


def _pmerge(part: tuple[int, ...], a: int, b: int) -> tuple[int, ...]:
    ra, rb = part[a], part[b]
    if ra == rb:
        return part
    lo, hi = min(ra, rb), max(ra, rb)
    return tuple(lo if x == hi else x for x in part)


def _is_pairing(p: tuple[int, ...]) -> bool:
    return all(p[i] != i and p[p[i]] == i for i in range(4))


@lru_cache(maxsize=None)
def _completable(steps: int, prod: tuple[int, ...], part: tuple[int, ...]) -> bool:
    if steps == 0:
        return part == _FULL_PART and _is_pairing(prod)
    return any(
        _completable(steps - 1, _tmul(prod, t), _pmerge(part, t[0], t[1]))
        for t in _TRANS4
    )


@lru_cache(maxsize=None)
def _pants_meridians(genus: int) -> tuple[tuple[tuple[int, int], ...], tuple[int, ...]]:
    """Lexicographically first transposition word of length 2g + 3 on
    sheets {0,1,2,3} (0,1 continuing, 2,3 capped) whose boundary
    product after the inbound (0 1) pairs all four sheets without fixed
    points, with the word alone acting transitively. Returns the word
    and the boundary product."""
    length = 2 * genus + 3
    prod = (1, 0, 2, 3)
    part = (0, 1, 2, 3)
    word: list[tuple[int, int]] = []
    for pos in range(length):
        for t in _TRANS4:
            nprod, npart = _tmul(prod, t), _pmerge(part, t[0], t[1])
            if _completable(length - pos - 1, nprod, npart):
                word.append(t)
                prod, part = nprod, npart
                break
        else:
            raise RuntimeError("no admissible meridian word")
    return tuple(word), prod


# --- constructors ---


def build_cover(e: ExhaustionGraph, J: int) -> LayeredCover:
    """Degree 2k cover of the plane truncated at level J, where k - 1
    is the number of two-legged pieces through level J."""
    if J < 1:
        raise ValueError(f"need J >= 1, got {J}")
    bad = [p.id for p in e.pieces if not p.orientable]
    if bad:
        raise NonorientableInput(f"nonorientable pieces: {', '.join(bad)}")
    report = validate_exhaustion(e)
    if not report.ok:
        raise InvalidInput("; ".join(report.problems))
    if not is_normalized_through(e, J):
        raise NotNormalized(f"exhaustion is not in normal shape through level {J}")

    blocks: list[Block] = []
    feeds: dict[int, tuple[str, tuple[int, ...]]] = {}
    root = e.at_level(1)[0]
    c0 = root.outer[0]
    blocks.append(
        Block(root.id, 1, "disk", (0, 1), (), None, ((0, 1),), ((1, 1),), ((c0, (0, 1)),), None, None)
    )
    feeds[c0] = (root.id, (0, 1))
    next_sheet = 2

    for j in range(2, J + 1):
        branch_idx = 0
        for p in sorted(e.at_level(j), key=lambda q: q.id):
            circle = p.inner[0]
            parent_id, cyc = feeds[circle]
            s1, s2 = sorted(cyc)
            if piece_shape(p) == "a":
                word = ((s1, s2),) * (2 * p.genus)
                labels = tuple((j, branch_idx + i + 1) for i in range(len(word)))
                branch_idx += len(word)
                out_c = p.outer[0]
                blocks.append(
                    Block(p.id, j, "annulus", (s1, s2), (), (s1, s2), word, labels, ((out_c, (s1, s2)),), parent_id, circle)
                )
                feeds[out_c] = (p.id, (s1, s2))
            else:
                t1, t2 = next_sheet, next_sheet + 1
                next_sheet += 2
                cword, cprod = _pants_meridians(p.genus)
                onto = {0: s1, 1: s2, 2: t1, 3: t2}
                word = tuple(
                    tuple(sorted((onto[a], onto[b]))) for a, b in cword
                )
                labels = tuple((j, branch_idx + i + 1) for i in range(len(word)))
                branch_idx += len(word)
                pairing = {onto[i]: onto[cprod[i]] for i in range(4)}
                cycles = _perm_cycles(pairing)
                outs = sorted(p.outer)
                outbound = tuple(zip(outs, cycles))
                blocks.append(
                    Block(p.id, j, "pants", (s1, s2, t1, t2), (t1, t2), (s1, s2), word, labels, outbound, parent_id, circle)
                )
                for c, ccyc in outbound:
                    feeds[c] = (p.id, ccyc)

    degree = 2 + 2 * sum(1 for b in blocks if b.kind == "pants")
    return LayeredCover(J, degree, tuple(blocks))


def staircase(J: int) -> LayeredCover:
    """Connected cover over the standard disk/annulus exhaustion with
    one fresh sheet and one simple branch point per level; the fiber
    count over stage J is J + 1."""
    if J < 1:
        raise ValueError(f"need J >= 1, got {J}")
    blocks = [
        Block("s1", 1, "staircase", (0, 1), (), None, ((0, 1),), ((1, 1),), ((1, (0, 1)),), None, None)
    ]
    prev = (0, 1)
    for i in range(2, J + 1):
        sheets = tuple(range(i + 1))
        perm = _word_perm(sheets, prev, ((i - 1, i),))
        (out_cycle,) = _perm_cycles(perm)
        blocks.append(
            Block(f"s{i}", i, "staircase", sheets, (i,), prev, ((i - 1, i),), ((i, 1),), ((i, out_cycle),), f"s{i - 1}", i - 1)
        )
        prev = out_cycle
    return LayeredCover(J, J + 1, tuple(blocks))


# --- verification ---


def _block_chi(b: Block) -> int:
    # level 1 covers a disk (chi 1), later levels cover annuli (chi 0);
    # inward caps are disks glued back on
    if b.level == 1:
        return len(b.sheets) - len(b.meridians)
    return len(b.caps) - len(b.meridians)


def verify_layered(c: LayeredCover) -> LayeredReport:
    checks: list[tuple[str, bool, str]] = []

    def add(name: str, passed: bool, detail: str) -> None:
        checks.append((name, passed, detail))

    problems: list[str] = []
    if not c.blocks:
        problems.append("no blocks")
    levels = {b.level for b in c.blocks}
    if levels and levels != set(range(1, c.depth + 1)):
        problems.append("levels not contiguous from 1")
    if c.depth != max(levels, default=0):
        problems.append("depth field disagrees with deepest block")
    roots = c.at_level(1)
    if len(roots) != 1:
        problems.append(f"expected one level-1 block, found {len(roots)}")
    by_piece = {}
    for b in c.blocks:
        if b.piece in by_piece:
            problems.append(f"two blocks over piece {b.piece!r}")
        by_piece[b.piece] = b
        if b.kind not in BLOCK_KINDS:
            problems.append(f"unknown block kind {b.kind!r}")
        if len(set(b.sheets)) != len(b.sheets):
            problems.append(f"block {b.piece!r} repeats sheets")
        if not set(b.caps) <= set(b.sheets):
            problems.append(f"block {b.piece!r} caps outside its sheets")
        if b.inbound is not None and not set(b.inbound) <= set(b.sheets) - set(b.caps):
            problems.append(f"block {b.piece!r} inbound cycle leaves its open sheets")
        if len(b.labels) != len(b.meridians):
            problems.append(f"block {b.piece!r} labels out of step with meridians")
        if (b.level == 1) != (b.parent is None):
            problems.append(f"block {b.piece!r} parent link wrong for its level")
    add("structure", not problems, "; ".join(problems) or "block shapes consistent")

    glue: list[str] = []
    out_owner: dict[int, tuple[Block, tuple[int, ...]]] = {}
    for b in c.blocks:
        for circle, cyc in b.outbound:
            if circle in out_owner:
                glue.append(f"circle {circle} emitted twice")
            out_owner[circle] = (b, cyc)
    consumed: dict[int, str] = {}
    for b in c.blocks:
        if b.level == 1:
            continue
        if b.parent not in by_piece or by_piece[b.parent].level != b.level - 1:
            glue.append(f"block {b.piece!r} parent missing or at wrong level")
            continue
        if b.parent_circle not in out_owner:
            glue.append(f"block {b.piece!r} glued to unknown circle {b.parent_circle}")
            continue
        owner, cyc = out_owner[b.parent_circle]
        if owner.piece != b.parent:
            glue.append(f"block {b.piece!r} parent does not own circle {b.parent_circle}")
        if b.inbound != cyc:
            glue.append(f"block {b.piece!r} inbound cycle disagrees with parent gluing")
        if b.parent_circle in consumed:
            glue.append(f"circle {b.parent_circle} consumed twice")
        consumed[b.parent_circle] = b.piece
    for b in c.blocks:
        if b.level < c.depth:
            for circle, _ in b.outbound:
                if circle not in consumed:
                    glue.append(f"circle {circle} of block {b.piece!r} feeds nothing")
    lower_sheets: set[int] = set()
    for j in range(1, c.depth + 1):
        for b in c.at_level(j):
            if set(b.caps) & lower_sheets:
                glue.append(f"block {b.piece!r} caps reuse lower sheets")
        for b in c.at_level(j):
            lower_sheets |= set(b.sheets)
    add("gluing", not glue, "; ".join(glue) or "inbound cycles match parent gluings")

    rel: list[str] = []
    for b in c.blocks:
        perm = _word_perm(b.sheets, b.inbound, b.meridians)
        got = set(_perm_cycles(perm))
        want = {cyc for _, cyc in b.outbound}
        covered = {s for cyc in want for s in cyc}
        if got != want:
            rel.append(f"block {b.piece!r} boundary product disagrees with outbound cycles")
        elif covered != set(b.sheets):
            rel.append(f"block {b.piece!r} outbound cycles miss some sheets")
    add("relations", not rel, "; ".join(rel) or "boundary products match outbound cycles")

    simple: list[str] = []
    seen_labels: set[tuple[int, int]] = set()
    for b in c.blocks:
        for t in b.meridians:
            if len(t) != 2 or t[0] == t[1] or not set(t) <= set(b.sheets):
                simple.append(f"block {b.piece!r} has a non-transposition meridian")
                break
        for lab in b.labels:
            if lab in seen_labels:
                simple.append(f"branch label {lab} reused")
            seen_labels.add(lab)
    add("simple-branching", not simple, "; ".join(simple) or "all meridians simple, labels distinct")

    trans: list[str] = []
    for b in c.blocks:
        if b.kind != "pants":
            continue
        part = {s: s for s in b.sheets}

        def find(x: int) -> int:
            while part[x] != x:
                part[x] = part[part[x]]
                x = part[x]
            return x

        for a, bb in b.meridians:
            part[find(a)] = find(bb)
        if len({find(s) for s in b.sheets}) != 1:
            trans.append(f"pants block {b.piece!r} meridians not transitive")
    add("pants-transitivity", not trans, "; ".join(trans) or "pants meridians transitive")

    fiber: list[str] = []
    for j in range(1, c.depth + 1):
        count = sum(len(b.sheets) for b in c.at_level(j)) + sum(
            len(b.caps) for b in c.blocks if b.level > j
        )
        if count != c.degree:
            fiber.append(f"fiber count over stage {j} is {count}, not {c.degree}")
    add("fiber-count", not fiber, "; ".join(fiber) or f"fiber count {c.degree} at every stage")

    chi: list[str] = []
    for b in c.blocks:
        if b.kind == "annulus" and len(b.meridians) % 2 != 0:
            chi.append(f"annulus block {b.piece!r} has odd branch count")
        if b.kind == "pants" and (len(b.meridians) < 3 or len(b.meridians) % 2 != 1):
            chi.append(f"pants block {b.piece!r} branch count not 2g + 3")
        if b.kind == "disk" and (len(b.sheets) != 2 or len(b.meridians) != 1):
            chi.append(f"disk block {b.piece!r} is not the two-sheeted branched disk")
    total = sum(_block_chi(b) for b in c.blocks)
    expected = c.degree - c.branch_count
    if total != expected:
        chi.append(f"blockwise chi {total} disagrees with degree - branching {expected}")
    add("chi", not chi, "; ".join(chi) or f"chi of stage {c.depth} is {total} both ways")

    ends = 1 + c.pants_count
    add(
        "ends-bound",
        ends <= c.degree,
        f"{ends} ends within degree {c.degree}"
        if ends <= c.degree
        else f"{ends} ends exceeds degree {c.degree}",
    )

    return LayeredReport(tuple(checks))


def restriction_compatibility(c: LayeredCover, i: int) -> bool:
    """Whether the data at level i + 1 restricts to exactly the data at
    level i: parent gluings match, fresh sheets are genuinely fresh,
    and the level-(i + 1) boundary products close up."""
    if i < 1:
        raise ValueError(f"need i >= 1, got {i}")
    if c.depth < i + 1:
        raise DepthExceeded(f"cover truncated at depth {c.depth}, level {i + 1} missing")
    out_map: dict[int, tuple[Block, tuple[int, ...]]] = {}
    for b in c.at_level(i):
        for circle, cyc in b.outbound:
            out_map[circle] = (b, cyc)
    lower_sheets = {s for b in c.blocks if b.level <= i for s in b.sheets}
    claimed: list[int] = []
    for b in c.at_level(i + 1):
        if b.parent_circle not in out_map:
            return False
        owner, cyc = out_map[b.parent_circle]
        if b.parent != owner.piece or b.inbound != cyc:
            return False
        if set(b.caps) & lower_sheets:
            return False
        perm = _word_perm(b.sheets, b.inbound, b.meridians)
        want = {cc for _, cc in b.outbound}
        if set(_perm_cycles(perm)) != want:
            return False
        if {s for cyc2 in want for s in cyc2} != set(b.sheets):
            return False
        claimed.append(b.parent_circle)
    return sorted(claimed) == sorted(out_map)


def compose_with_staircase(c: LayeredCover, J: int) -> ComposedReport:
    """Stack a verified finite-degree cover on top of the staircase
    truncated at level J. The composite has one fiber copy of the cover
    per staircase sheet, so its degree over stage J is degree * (J + 1)
    and grows without bound in J."""
    if J < 0:
        raise ValueError(f"need J >= 0, got {J}")
    report = verify_layered(c)
    if not report.ok:
        raise UnverifiedInput(
            "cover failed verification: " + ", ".join(report.failures)
        )
    labels: list[tuple] = [
        ("cover",) + lab for b in c.blocks for lab in b.labels
    ]
    labels += [("staircase", i, 1) for i in range(1, J + 1)]
    notes = (
        "branch images of the two maps are kept disjoint by tagging",
        "fiber count grows linearly in the staircase depth",
        "branch points of the upper map may collide over a staircase branch value, so simplicity is not claimed",
    )
    return ComposedReport(
        cover_degree=c.degree,
        staircase_depth=J,
        fiber_count=c.degree * (J + 1),
        labels=tuple(labels),
        potentially_nonsimple=True,
        unbounded_in_depth=True,
        notes=notes,
    )
