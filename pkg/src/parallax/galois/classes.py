"""Algebraic subgroups of SL2 / PSL2 up to conjugacy, as used by the classifiers."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Tag(str, Enum):
    TRIVIAL = "Trivial"
    FINITE_CYCLIC = "FiniteCyclic"
    DIAGONAL_TORUS = "DiagonalTorus"
    UNIPOTENT = "Unipotent"
    BOREL = "Borel"
    DIHEDRAL_FINITE = "DihedralFinite"
    DIHEDRAL_INFINITE = "DihedralInfinite"
    TETRAHEDRAL = "Tetrahedral"
    OCTAHEDRAL = "Octahedral"
    ICOSAHEDRAL = "Icosahedral"
    FULL = "Full"


SL2 = "SL2"
PSL2 = "PSL2"


@dataclass(frozen=True)
class GaloisClass:
    """A conjugacy class of algebraic subgroups.

    ``order`` is the group order for FiniteCyclic and DihedralFinite.  For
    Borel it is the order of the finite diagonal part (mu_k semidirect G_a);
    ``None`` there means the full triangular group.
    """

    level: str
    tag: Tag
    order: int | None = None

    def __post_init__(self):
        if self.level not in (SL2, PSL2):
            raise ValueError(f"unknown level {self.level!r}")
        needs = self.tag in (Tag.FINITE_CYCLIC, Tag.DIHEDRAL_FINITE)
        if needs and not self.order:
            raise ValueError(f"{self.tag.value} needs an order")
        if self.order is not None and self.tag not in (Tag.FINITE_CYCLIC, Tag.DIHEDRAL_FINITE, Tag.BOREL):
            raise ValueError(f"{self.tag.value} carries no order")

    @property
    def name(self) -> str:
        return f"{self.tag.value}({self.order})" if self.order is not None else self.tag.value

    @property
    def is_finite(self) -> bool:
        return self.tag in (Tag.TRIVIAL, Tag.FINITE_CYCLIC, Tag.DIHEDRAL_FINITE, Tag.TETRAHEDRAL,
                            Tag.OCTAHEDRAL, Tag.ICOSAHEDRAL)

    @property
    def is_solvable(self) -> bool:
        return self.tag not in (Tag.FULL, Tag.ICOSAHEDRAL)

    def __str__(self):
        return f"{self.name} in {self.level}"

    def to_json(self) -> dict:
        return {"level": self.level, "tag": self.tag.value, "order": self.order, "name": self.name}


def sl2(tag: Tag, order=None) -> GaloisClass:
    return GaloisClass(SL2, tag, order)


def psl2(tag: Tag, order=None) -> GaloisClass:
    return GaloisClass(PSL2, tag, order)


def _cyclic_image(k: int) -> int:
    return k // 2 if k % 2 == 0 else k


def psl2_projection(c: GaloisClass) -> GaloisClass:
    """Image of an SL2 class in PSL2 = SL2 / {Id, -Id}."""
    if c.level != SL2:
        raise ValueError("projection expects an SL2 class")
    if c.tag == Tag.FINITE_CYCLIC:
        k = _cyclic_image(c.order)
        return psl2(Tag.TRIVIAL) if k == 1 else psl2(Tag.FINITE_CYCLIC, k)
    if c.tag == Tag.BOREL and c.order is not None:
        k = _cyclic_image(c.order)
        return psl2(Tag.UNIPOTENT) if k == 1 else psl2(Tag.BOREL, k)
    if c.tag == Tag.DIHEDRAL_FINITE:
        return psl2(Tag.DIHEDRAL_FINITE, c.order // 2)
    return psl2(c.tag, c.order)
