"""Default tolerances, grids and the sign convention package.

Every tolerance used by the acceptance run is read from here so there is one
place to change it.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass

import numpy as np

TOLERANCES: dict[str, float] = {
    "gamma_rel": 1e-12,
    "gamma_recurrence": 1e-11,
    "gamma_reflection": 1e-10,
    "beta_integral": 1e-8,
    "quadrature_linear": 1e-13,
    "onshell": 1e-12,
    "mandelstam": 1e-12,
    "cosh_flip": 1e-14,
    "group_law": 1e-13,
    "unitarity_delta": 1e-10,
    "s_squared": 1e-10,
    "proto_crossing": 1e-10,
    "j_delta_j": 1e-10,
    "k_space": 1e-8,
    "kms": 1e-6,
    "kms_negative": 1e-2,
    "crossing": 1e-8,
    "crossing_negative": 1e-3,
    "boost_kms": 1e-6,
    "wick": 1e-9,
    "zf_axioms": 1e-12,
    "watson": 1e-6,
    "ff_crossing": 1e-6,
    "sinh_ratio": 1e-4,
    "veneziano_integral": 1e-8,
    "duality": 1e-12,
    "residue_fit": 1e-6,
    "mellin": 1e-6,
}

# Rapidity grid used by the one-particle modular checks.
WEDGE_GRID = {"re_min": -6.0, "re_max": 6.0, "n_re": 201, "n_im": 41}

# Residual grid for the formfactor axioms.
FORMFACTOR_GRID = {"re_min": -5.0, "re_max": 5.0, "n_re": 101, "im_lines": (0.0, np.pi / 2, np.pi)}

# Truncated real line for rapidity pairings (dtheta/2 measure).
PAIRING_LINE = {"half_width": 12.0, "order": 32, "subdivisions": 48}


@dataclass(frozen=True)
class ConventionPackage:
    """Signs fixing the rapidity-representation of the modular objects.

    ``boost_sign``: delta^{it} maps psi(theta) to psi(theta + boost_sign*2*pi*t).
    ``continuation_sign``: delta^{1/2} maps psi(theta) to
    psi(theta + continuation_sign*i*pi).  The two are tied by analytic
    continuation t -> -i/2, so only the combination listed here is consistent.
    """

    boost_sign: int = -1
    continuation_sign: int = 1
    reflection: str = "complex-conjugation"

    def __post_init__(self):
        if self.boost_sign not in (-1, 1) or self.continuation_sign not in (-1, 1):
            raise ValueError("convention signs must be +1 or -1")
        if self.continuation_sign != -self.boost_sign:
            raise ValueError("continuation sign must be opposite to the boost sign")

    def fingerprint(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


CONVENTIONS = ConventionPackage()
