"""Closed surfaces and the Euler characteristic dictionary.

A closed surface is recorded by orientability plus genus: handle count g
when orientable, crosscap count h >= 1 when not.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import NotASurface


@dataclass(frozen=True)
class ClosedSurface:
    orientable: bool
    genus: int

    def __post_init__(self) -> None:
        if self.orientable:
            if self.genus < 0:
                raise NotASurface(f"orientable genus must be >= 0, got {self.genus}")
        else:
            if self.genus < 1:
                raise NotASurface(f"crosscap number must be >= 1, got {self.genus}")

    @property
    def name(self) -> str:
        if self.orientable:
            if self.genus == 0:
                return "sphere"
            if self.genus == 1:
                return "torus"
            return f"orientable genus-{self.genus} surface"
        if self.genus == 1:
            return "projective plane"
        if self.genus == 2:
            return "Klein bottle"
        return f"nonorientable surface with {self.genus} crosscaps"


SPHERE = ClosedSurface(True, 0)
TORUS = ClosedSurface(True, 1)
PROJECTIVE_PLANE = ClosedSurface(False, 1)
KLEIN_BOTTLE = ClosedSurface(False, 2)


def euler_characteristic(s: ClosedSurface) -> int:
    if s.orientable:
        return 2 - 2 * s.genus
    return 2 - s.genus


def classify(chi: int, orientable: bool) -> ClosedSurface:
    """The unique closed surface with the given invariants."""
    if orientable:
        if chi > 2 or chi % 2 != 0:
            raise NotASurface(f"no orientable closed surface has chi = {chi}")
        return ClosedSurface(True, (2 - chi) // 2)
    if chi > 1:
        raise NotASurface(f"no nonorientable closed surface has chi = {chi}")
    return ClosedSurface(False, 2 - chi)
