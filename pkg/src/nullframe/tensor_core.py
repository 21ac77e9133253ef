"""Dense pointwise tensors with index-variance bookkeeping.

Everything downstream (groups, connections, curvature) manipulates small
dense arrays; this module fixes the conventions: components are stored
row-major, every index runs over the same dimension, and each slot is
tagged ``up`` (contravariant) or ``down`` (covariant).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ATOL = 1e-12
RTOL = 1e-9

UP = "up"
DOWN = "down"


class TensorError(ValueError):
    """Raised on variance mismatches, bad slots, or singular frames."""


@dataclass(frozen=True)
class TensorValue:
    """A tensor at a point: dense components plus per-slot variance tags."""

    dims: int
    variances: tuple[str, ...]
    components: np.ndarray = field(repr=False)

    def __post_init__(self):
        comps = np.asarray(self.components, dtype=float)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "variances", tuple(self.variances))
        if self.dims < 1:
            raise TensorError("dims must be positive")
        for v in self.variances:
            if v not in (UP, DOWN):
                raise TensorError(f"bad variance tag {v!r}")
        if comps.shape != (self.dims,) * len(self.variances):
            raise TensorError(
                f"component shape {comps.shape} does not match "
                f"rank {len(self.variances)} at dims {self.dims}"
            )

    @property
    def rank(self) -> int:
        return len(self.variances)

    def allclose(self, other: "TensorValue", atol: float = ATOL, rtol: float = RTOL) -> bool:
        return (
            self.dims == other.dims
            and self.variances == other.variances
            and np.allclose(self.components, other.components, atol=atol, rtol=rtol)
        )


@dataclass(frozen=True)
class FrameMatrix:
    """A square change-of-frame matrix; column j holds the j-th new basis vector."""

    size: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        object.__setattr__(self, "entries", m)
        if m.shape != (self.size, self.size):
            raise TensorError(f"frame must be {self.size}x{self.size}, got {m.shape}")

    def require_invertible(self) -> np.ndarray:
        if abs(np.linalg.det(self.entries)) <= 1e-12:
            raise TensorError("frame matrix is singular")
        return np.linalg.inv(self.entries)


def contract(t: TensorValue, slot_up: int, slot_down: int) -> TensorValue:
    """Einstein-sum the given up/down slot pair, reducing the rank by two."""
    if slot_up == slot_down:
        raise TensorError("contraction slots must be distinct")
    for slot in (slot_up, slot_down):
        if not 0 <= slot < t.rank:
            raise TensorError(f"slot {slot} out of range for rank {t.rank}")
    if t.variances[slot_up] != UP or t.variances[slot_down] != DOWN:
        raise TensorError(
            f"need (up, down) variances at slots ({slot_up}, {slot_down}), "
            f"got ({t.variances[slot_up]}, {t.variances[slot_down]})"
        )
    comps = np.trace(t.components, axis1=slot_up, axis2=slot_down)
    variances = tuple(
        v for i, v in enumerate(t.variances) if i not in (slot_up, slot_down)
    )
    if not variances:
        return TensorValue(t.dims, (), np.asarray(comps))
    return TensorValue(t.dims, variances, comps)


def _swap(t: TensorValue, i: int, j: int) -> np.ndarray:
    return np.swapaxes(t.components, i, j)


def _check_pair(t: TensorValue, slots: tuple[int, int]):
    i, j = slots
    for s in (i, j):
        if not 0 <= s < t.rank:
            raise TensorError(f"slot {s} out of range for rank {t.rank}")
    if i == j:
        raise TensorError("slots must be distinct")
    if t.variances[i] != t.variances[j]:
        raise TensorError("(anti)symmetrization requires equal variances")


def symmetrize(t: TensorValue, slots: tuple[int, int]) -> TensorValue:
    _check_pair(t, slots)
    return TensorValue(t.dims, t.variances, 0.5 * (t.components + _swap(t, *slots)))


def antisymmetrize(t: TensorValue, slots: tuple[int, int]) -> TensorValue:
    _check_pair(t, slots)
    return TensorValue(t.dims, t.variances, 0.5 * (t.components - _swap(t, *slots)))


def change_frame(t: TensorValue, frame: FrameMatrix) -> TensorValue:
    """Transform: up indices by the inverse frame, down indices by the frame.

    Convention: the frame matrix columns are the new basis vectors expressed in
    the old one, so new up-components are ``A^{-1} v`` and new down-components
    are ``A^t w``; a round trip with the inverse frame restores the input.
    """
    if frame.size != t.dims:
        raise TensorError("frame size does not match tensor dims")
    inv = frame.require_invertible()
    comps = t.components
    for axis, variance in enumerate(t.variances):
        mat = inv if variance == UP else frame.entries.T
        comps = np.moveaxis(np.tensordot(mat, comps, axes=(1, axis)), 0, axis)
    return TensorValue(t.dims, t.variances, comps)
