"""Atom-only rotation driven by the stochastic field.

The field couples to the atom through sigma_y, so one noise step is the real
rotation U'(dt;t) = exp(-i * (dt/2) * E(t) * sigma_y) acting identically on
every photon sector:

    g' =  cos(theta) g + sin(theta) e
    e' = -sin(theta) g + cos(theta) e,      theta = dt * E(t) / 2.

In matrix-element form <g,k|U'|e,k> = +sin(theta) and <e,k|U'|g,k> =
-sin(theta), diagonal cos(theta), zero between different photon numbers.
The rotation is exactly norm-preserving and leaves the photon-number
marginal untouched.
"""
from __future__ import annotations

import numpy as np

from .states import StateVector, from_blocks


def rotation_angle(dt: float, field: float) -> float:
    """Half-angle theta = dt * E / 2 for one noise step."""
    return 0.5 * dt * field


def apply_atom_rotation(s: StateVector, theta: float) -> StateVector:
    """Rotate the atom by theta around sigma_y, all photon sectors alike."""
    c = np.cos(theta)
    si = np.sin(theta)
    g = c * s.g + si * s.e
    e = c * s.e - si * s.g
    return from_blocks(g, e, s.K)
