"""Short exact sequences of binary multicomplexes.

An extension is a degreewise-split-free datum sub >-> total ->> quot where
the three members share one box, the inclusion and projection commute with
both differential families, and every coordinate carries a genuine short
exact sequence of modules.  The grid-of-sequences and sequence-of-grids
views are interchangeable: unpack/repack move between them losslessly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import ShapeError
from .fpmod import FpMorphism, check_ses
from .multicomplex import (BinaryMulticomplex, MultiMorphism, box_coords,
                           common_shape, direct_sum_multi, pad_to,
                           summand_inclusion, summand_projection)


@dataclass(frozen=True)
class ExtensionFailure:
    kind: str  # "ses" | "mono-square" | "epi-square"
    coord: tuple
    detail: str = ""


class ExtensionObject:
    """sub >-> total ->> quot with coordinate-wise exactness."""

    __slots__ = ("sub", "total", "quot", "mono", "epi")

    def __init__(self, sub: BinaryMulticomplex, total: BinaryMulticomplex,
                 quot: BinaryMulticomplex, mono: MultiMorphism, epi: MultiMorphism):
        if mono.source != sub or mono.target != total:
            raise ShapeError("inclusion endpoints must be sub -> total")
        if epi.source != total or epi.target != quot:
            raise ShapeError("projection endpoints must be total -> quot")
        self.sub = sub
        self.total = total
        self.quot = quot
        self.mono = mono
        self.epi = epi

    def verify(self) -> Optional[ExtensionFailure]:
        """None when everything checks out, else the first failure found."""
        if not self.mono.commutes():
            return ExtensionFailure("mono-square", (), "inclusion does not commute with differentials")
        if not self.epi.commutes():
            return ExtensionFailure("epi-square", (), "projection does not commute with differentials")
        for c in sorted(box_coords(self.total.shape)):
            verdict = check_ses(self.mono.components[c], self.epi.components[c])
            if not verdict.ok:
                return ExtensionFailure("ses", c, verdict.reason)
        return None

    def is_valid(self) -> bool:
        return self.verify() is None

    def members(self):
        return (self.sub, self.total, self.quot)


def split_extension(sub: BinaryMulticomplex, quot: BinaryMulticomplex) -> ExtensionObject:
    """The direct-sum extension sub >-> sub (+) quot ->> quot."""
    shape = common_shape([sub, quot])
    sub_p, quot_p = pad_to(sub, shape), pad_to(quot, shape)
    total = direct_sum_multi([sub, quot])
    mono = summand_inclusion([sub, quot], 0)
    epi = summand_projection([sub, quot], 1)
    return ExtensionObject(sub_p, total, quot_p, mono, epi)


def unpack(ext: ExtensionObject) -> dict:
    """Coordinate -> (inclusion, projection) short exact sequence of modules."""
    return {c: (ext.mono.components[c], ext.epi.components[c])
            for c in box_coords(ext.total.shape)}


def repack(sub: BinaryMulticomplex, total: BinaryMulticomplex,
           quot: BinaryMulticomplex, grid: dict) -> ExtensionObject:
    """Rebuild the extension from its per-coordinate sequences."""
    monos = {c: pair[0] for c, pair in grid.items()}
    epis = {c: pair[1] for c, pair in grid.items()}
    return ExtensionObject(sub, total, quot,
                           MultiMorphism(sub, total, monos),
                           MultiMorphism(total, quot, epis))


def ext_layer(ext: ExtensionObject, axis: int, t: int) -> ExtensionObject:
    """The extension of (dim-1)-multicomplexes at layer t of the axis."""
    from .multicomplex import expand_along

    sub_t = expand_along(ext.sub, axis).terms[t]
    tot_t = expand_along(ext.total, axis).terms[t]
    quo_t = expand_along(ext.quot, axis).terms[t]

    def _restrict(mm, src, tgt):
        comps = {}
        for r in box_coords(src.shape):
            full = r[:axis] + (t,) + r[axis:]
            comps[r] = mm.components[full]
        return MultiMorphism(src, tgt, comps)

    return ExtensionObject(sub_t, tot_t, quo_t,
                           _restrict(ext.mono, sub_t, tot_t),
                           _restrict(ext.epi, tot_t, quo_t))
