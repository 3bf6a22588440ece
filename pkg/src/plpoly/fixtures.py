"""Reference problem instances used across the test-suite and docs.

* square_polygon_lp: the 2-constraint/4-variable standard-form LP whose
  feasible set projects to the polygon x1 >= 0, x2 >= 0, 3x1 - x2 <= 6,
  -x1 + 3x2 <= 6 (vertices (0,0), (2,0), (3,3), (0,2)).
* pyramid_plp: a pyramid over a k-gon base with apex (1,1,1); at the apex
  all k slack variables vanish, so the apex vertex is described by C(k,3)
  distinct bases - the canonical primal-degeneracy stress instance.
"""

from __future__ import annotations

from .exact_arith import rat
from .lp_core import StandardLP, make_standard_lp
from .plp_engine import ParametricObjective


def square_polygon_lp() -> StandardLP:
    """AX = B with x3 = 6 - 3x1 + x2 and x4 = 6 + x1 - 3x2 as slacks."""
    a = [
        [3, -1, 1, 0],
        [-1, 3, 0, 1],
    ]
    return make_standard_lp(a, [6, 6], 4)


def square_polygon_objective() -> ParametricObjective:
    """C(mu) = (mu1, mu2, 0, 0)."""
    return ParametricObjective.make(
        [0, 0, 0, 0], [[1, 0, 0, 0], [0, 1, 0, 0]]
    )


# lateral face normals (in x1,x2,x3) of the pyramid, by face count
_PYRAMID_NORMALS = {
    4: [
        (1, 0, 1, 2),
        (0, 1, 1, 2),
        (-1, 0, 1, 0),
        (0, -1, 1, 0),
    ],
    # octagon base: axis faces with radius 1, diagonal faces with radius 3/2
    8: [
        (1, 0, 1, 2),
        (0, 1, 1, 2),
        (-1, 0, 1, 0),
        (0, -1, 1, 0),
        (2, 2, 3, 7),
        (-2, 2, 3, 3),
        (-2, -2, 3, -1),
        (2, -2, 3, 3),
    ],
}


def pyramid_lp(k: int) -> StandardLP:
    """Pyramid with k lateral faces: k equations over 3 + k unknowns.

    Row i reads a_i·(x1,x2,x3) + s_i = b_i with a_i·(1,1,1) = b_i, so the
    apex is X = (1,1,1,0,...,0) with every slack zero.
    """
    if k not in _PYRAMID_NORMALS:
        raise ValueError(f"pyramid fixture supports k in {sorted(_PYRAMID_NORMALS)}")
    rows = []
    rhs = []
    for i, (a1, a2, a3, b) in enumerate(_PYRAMID_NORMALS[k]):
        row = [a1, a2, a3] + [0] * k
        row[3 + i] = 1
        rows.append(row)
        rhs.append(b)
    return make_standard_lp(rows, rhs, 3 + k)


def pyramid_objective(k: int) -> ParametricObjective:
    """C(mu) = mu1 e1 + mu2 e2 + mu3 e3 over the 3 + k unknowns."""
    n = 3 + k
    dirs = []
    for axis in range(3):
        row = [0] * n
        row[axis] = 1
        dirs.append(row)
    return ParametricObjective.make([0] * n, dirs)


def pyramid_apex(k: int) -> tuple:
    return tuple(rat(v) for v in [1, 1, 1] + [0] * k)
