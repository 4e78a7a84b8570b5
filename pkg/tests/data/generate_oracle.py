"""Regenerate ``oracle_values.json``.

Every value here comes from a route that shares no code with the Galerkin
solver: RK4 shooting for the scalar ODE, closed-form integrals, and brute
random search over tail coefficients with independently rebuilt sines.

    python3 tests/data/generate_oracle.py
"""

import json
import math
import os
import platform
import sys

import numpy as np

from indefcrit.oracle import brute_embedding, shooting_ground_state
from indefcrit.spectral import DomainSpec, build_basis

HERE = os.path.dirname(os.path.abspath(__file__))


def main():
    out = {}

    # -u'' = u^3 on (0, pi), u(0) = u(pi) = 0, u > 0.  The scalar action
    # J = int |u'|^2/2 - u^4/4 at two step counts bounds the ODE error.
    fine = shooting_ground_state(4.0, math.pi, nsteps=40000)
    coarse = shooting_ground_state(4.0, math.pi, nsteps=20000)
    J = fine.energy
    out["shooting_p4_pi"] = {
        "energy": J,
        "slope": fine.slope,
        "boundary_residual": fine.boundary_residual,
        "step_change": abs(fine.energy - coarse.energy),
        "method": "RK4 shooting, bisection on u'(0), Simpson energy, nsteps=40000",
    }
    # The diagonal u = v of the system with p = q = 4, s = t = 1 turns the
    # system action into twice the scalar action.  The n-bump solution is
    # n copies of the rescaled ground state on (0, pi/n); by the scaling
    # u_n(x) = n u(n x) each copy carries n^3 J, so the level is 2 n^4 J.
    out["es_power4_levels"] = {
        "k0": 2.0 * J,
        "k2": 2.0 * 3**4 * J,
        "k4": 2.0 * 5**4 * J,
        "method": "scaling of the shooting ground state along the diagonal u = v",
    }
    scaled = shooting_ground_state(4.0, math.pi / 3.0, nsteps=40000)
    out["shooting_p4_pi_over_3"] = {
        "energy": scaled.energy,
        "ratio_to_pi": scaled.energy / J,
        "method": "same shooting on (0, pi/3); the scaling predicts ratio 27",
    }

    # Phi at (phi_1, phi_1) for POWER p = q = 4: |phi_1'|_2^2 = 1 and
    # 2 int phi_1^4 / 4 = (1/2)(4/pi^2)(3 pi / 8) = 3 / (4 pi).
    out["phi_first_mode_power4"] = {
        "value": 1.0 - 3.0 / (4.0 * math.pi),
        "method": "closed-form integral of sin^4",
    }

    # Brute-force tail constants for L^r embeddings on (0, pi), N = 16.
    basis = build_basis(DomainSpec.interval(), 16)
    brute = {}
    for r in (3.0, 4.0):
        brute[f"r{r:g}"] = [brute_embedding(basis, 1.0, r, k, n_samples=20000, seed=7) for k in range(6)]
    out["brute_embedding_s1_N16"] = {
        **brute,
        "method": "random search over tail coefficients, sines rebuilt on the quadrature nodes; lower bounds",
    }

    out["provenance"] = {
        "generator": "tests/data/generate_oracle.py",
        "python": platform.python_version(),
        "numpy": np.__version__,
    }
    path = os.path.join(HERE, "oracle_values.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(out, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(f"wrote {path}", file=sys.stderr)


if __name__ == "__main__":
    main()
