"""Admissible stress-energy shapes for n = 3 in an adapted coframe.

The frame-bundle reduction constrains the right-hand side of Einstein's
equations to the pattern

    T = lam (th1 x th1 + th2 x th2) + pi th0 x th0
      + sig (th1 x th2 + th2 x th1)
      + rho1 (th0 x th1 + th1 x th0) + rho2 (th0 x th2 + th2 x th0)
      + rho3 (th0 x th3 + th3 x th0)

with level-dependent constraints: the G_I reduction forces lam = sig = 0
and rho3 = S/2; the G_R reduction forces pi = sig = rho1 = rho2 = 0 and
rho3 - lam = S/2, where S is the scalar curvature.  Classification is a
shape fit: zero/nonzero slots and the linear constraints, independent of
any curvature sign convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import LEVEL_G, LEVEL_GI, LEVEL_GR, LEVELS

PATTERN_TOL = 1e-10

PARAM_NAMES = ("lam", "pi", "sig", "rho1", "rho2", "rho3")


class ShapeError(ValueError):
    """Raised on level-invariant violations or malformed component matrices."""


def _slot_basis() -> dict:
    def sym(i, j):
        m = np.zeros((4, 4))
        m[i, j] = m[j, i] = 1.0
        return m

    return {
        "lam": sym(1, 1) + sym(2, 2),
        "pi": sym(0, 0),
        "sig": sym(1, 2),
        "rho1": sym(0, 1),
        "rho2": sym(0, 2),
        "rho3": sym(0, 3),
    }


_BASIS = _slot_basis()


@dataclass(frozen=True)
class StressEnergyPattern:
    """Shape parameters (lam, pi, sig, rho1, rho2, rho3) at a given level."""

    level: str
    lam: float = 0.0
    pi: float = 0.0
    sig: float = 0.0
    rho1: float = 0.0
    rho2: float = 0.0
    rho3: float = 0.0
    S: float = 0.0

    def __post_init__(self):
        if self.level not in LEVELS:
            raise ShapeError(f"unknown level {self.level!r}")
        if self.level == LEVEL_GI:
            if self.lam != 0.0 or self.sig != 0.0:
                raise ShapeError("level G_I requires lam = sig = 0")
            if abs(self.rho3 - 0.5 * self.S) > PATTERN_TOL:
                raise ShapeError("level G_I requires rho3 = S/2")
        if self.level == LEVEL_GR:
            if any(v != 0.0 for v in (self.pi, self.sig, self.rho1, self.rho2)):
                raise ShapeError("level G_R requires pi = sig = rho1 = rho2 = 0")
            if abs(self.rho3 - self.lam - 0.5 * self.S) > PATTERN_TOL:
                raise ShapeError("level G_R requires rho3 - lam = S/2")

    def parameters(self) -> tuple:
        return (self.lam, self.pi, self.sig, self.rho1, self.rho2, self.rho3)


def pattern_matrix(p: StressEnergyPattern) -> np.ndarray:
    """The 4x4 symmetric component matrix of the pattern in (th0..th3)."""
    out = np.zeros((4, 4))
    for name, value in zip(PARAM_NAMES, p.parameters()):
        out += value * _BASIS[name]
    return out


def _check_symmetric(T: np.ndarray) -> np.ndarray:
    T = np.asarray(T, dtype=float)
    if T.shape != (4, 4):
        raise ShapeError("component matrix must be 4x4")
    if np.max(np.abs(T - T.T)) > PATTERN_TOL:
        raise ShapeError("component matrix must be symmetric")
    return 0.5 * (T + T.T)


def classify(T, level: str, scalar_curvature: float | None = None):
    """Least-squares fit of the level's shape; returns (pattern, residual).

    The residual is the max-abs entry of T minus the fitted pattern: it
    collects forbidden slots such as (1,3), (2,3) and (3,3), the mismatch
    of the two lam diagonal slots, and (when the scalar curvature is
    supplied) the violation of the level's linear constraint.
    """
    if level not in LEVELS:
        raise ShapeError(f"unknown level {level!r}")
    T = _check_symmetric(T)
    S = scalar_curvature
    offset = np.zeros((4, 4))
    if level == LEVEL_G:
        free = list(PARAM_NAMES)
        columns = {name: _BASIS[name] for name in free}
    elif level == LEVEL_GI:
        free = ["pi", "rho1", "rho2"]
        columns = {name: _BASIS[name] for name in free}
        if S is None:
            free.append("rho3")
            columns["rho3"] = _BASIS["rho3"]
        else:
            offset = 0.5 * S * _BASIS["rho3"]
    else:
        if S is None:
            free = ["lam", "rho3"]
            columns = {name: _BASIS[name] for name in free}
        else:
            # rho3 = lam + S/2 folds into a single combined lam column
            free = ["lam"]
            columns = {"lam": _BASIS["lam"] + _BASIS["rho3"]}
            offset = 0.5 * S * _BASIS["rho3"]

    A = np.stack([columns[name].reshape(-1) for name in free], axis=1)
    rhs = (T - offset).reshape(-1)
    coeffs, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    values = dict.fromkeys(PARAM_NAMES, 0.0)
    for name, v in zip(free, coeffs):
        values[name] = float(v)
    if level == LEVEL_GI:
        S_used = 2.0 * values["rho3"] if S is None else float(S)
        values["rho3"] = 0.5 * S_used
    elif level == LEVEL_GR:
        S_used = 2.0 * (values["rho3"] - values["lam"]) if S is None else float(S)
        values["rho3"] = values["lam"] + 0.5 * S_used
    else:
        S_used = 0.0 if S is None else float(S)
    fitted = StressEnergyPattern(level, S=S_used, **values)
    residual = float(np.max(np.abs(T - pattern_matrix(fitted))))
    return fitted, residual
