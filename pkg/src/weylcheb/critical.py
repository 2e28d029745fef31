"""Critical and post-critical structure checks: sampling of the reflection
walls, vanishing of Jacobians along them, invariance of the wall arrangement
under integer scaling, and the deltoid identity in the A2 case.

The image of the wall arrangement under the generalized cosine carries no
general implicit equation here; it is handled by sampling, except for A2
where the classical deltoid quartic is available in closed form.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .chebmap import PolynomialMap, eval_poly, jacobian_polys
from .gencos import eval_gencos, is_on_diagram
from .rootsys import Root, RootSystem

STRICT_PREIMAGE_TOL = 1e-6  # wall-avoidance margin for "strict preimage" samples
_IM_SCALE = 0.15            # imaginary spread of wall samples; keeps float det error tiny


@dataclass
class DiagramSample:
    """A sampled point on one wall <v, x> = ell."""

    wall: tuple          # (Root, ell)
    point: np.ndarray    # complex, coroot coordinates
    tangential_offset: tuple  # the free complex coordinates used


@dataclass
class PostCriticalReport:
    type_spec: str
    d: int
    samples: int
    det_residuals: list = field(default_factory=list)
    value_residuals: list = field(default_factory=list)
    invariance_ok: bool = True
    skipped: int = 0

    @property
    def max_det_residual(self):
        return float(max(self.det_residuals, default=0.0))

    @property
    def max_value_residual(self):
        return float(max(self.value_residuals, default=0.0))

    def passed(self, tol: float) -> bool:
        return bool(self.invariance_ok
                    and self.max_det_residual <= tol
                    and self.max_value_residual <= tol)

    def as_dict(self, tol: float) -> dict:
        return {
            "type_spec": self.type_spec,
            "d": self.d,
            "samples": self.samples,
            "skipped": self.skipped,
            "max_det_residual": self.max_det_residual,
            "max_value_residual": self.max_value_residual,
            "invariance_ok": self.invariance_ok,
            "tol": tol,
            "pass": self.passed(tol),
        }


def sample_diagram_points(rs: RootSystem, count: int,
                          ell_range=(-2, -1, 0, 1, 2),
                          seed: int = 0) -> list:
    """Deterministic wall samples: pick a root and an integer level, fill the
    n-1 free coordinates at random, and solve the wall equation for the
    remaining one."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = random.Random(seed)
    ells = list(ell_range)
    out = []
    for _ in range(count):
        v = rng.choice(rs.roots)
        ell = rng.choice(ells)
        w = np.array(v.weight_coords)
        pivot = int(np.argmax(np.abs(w)))
        x = np.zeros(rs.rank, dtype=complex)
        free = []
        for j in range(rs.rank):
            if j == pivot:
                continue
            z = complex(rng.uniform(-1, 1), rng.uniform(-_IM_SCALE, _IM_SCALE))
            x[j] = z
            free.append(z)
        x[pivot] = (ell - np.dot(np.delete(w, pivot), np.delete(x, pivot))) / w[pivot]
        out.append(DiagramSample((v, ell), x, tuple(free)))
    return out


def diagram_invariance_check(rs: RootSystem, d: int, samples: list) -> dict:
    """Scaling a wall point by the integer d lands on the wall with exactly
    d times the level: witness arithmetic is exact, membership is numeric."""
    results = []
    for s in samples:
        v, ell = s.wall
        scaled = d * s.point
        on, _ = is_on_diagram(rs, scaled, 1e-8)
        residual = abs(np.dot(np.array(v.weight_coords), scaled) - d * ell)
        results.append({"ell": ell, "scaled_ell": d * ell, "on_diagram": on,
                        "witness_residual": float(residual)})
    ok = all(r["on_diagram"] and r["witness_residual"] < 1e-8 for r in results)
    return {"type_spec": rs.type_spec, "d": d, "pass": ok, "walls": results}


def post_critical_check(rs: RootSystem, d: int, pmap: PolynomialMap,
                        samples: int = 50, tol: float = 1e-7,
                        seed: int = 0) -> PostCriticalReport:
    """At points y with d*y on a wall but y itself off the walls, the exact
    symbolic Jacobian of the map must be singular at the image of y, and the
    image point must again be an image of a wall point (checked through the
    intertwining identity).

    Degenerate draws (y on a wall itself, e.g. when the level is divisible by
    d) are flagged in `skipped` and redrawn until `samples` strict-preimage
    points have been checked.
    """
    report = PostCriticalReport(rs.type_spec, d, samples)
    jpolys = jacobian_polys(pmap)
    done = 0
    batch = 0
    while done < samples and batch < 40:
        wall_samples = sample_diagram_points(rs, samples, seed=seed + 1000 * batch)
        batch += 1
        for s in wall_samples:
            if done >= samples:
                break
            y = s.point / d
            on, _ = is_on_diagram(rs, y, STRICT_PREIMAGE_TOL)
            if on:
                # degenerate: y sits on a wall itself, not a strict preimage
                report.skipped += 1
                continue
            done += 1
            _check_strict_preimage(rs, d, pmap, jpolys, y, report)
    return report


def _check_strict_preimage(rs, d, pmap, jpolys, y, report):
    from .chebmap import eval_poly_map
    gy = eval_gencos(rs, y)
    jt = np.array([[eval_poly(jpolys[i][j], gy) for j in range(rs.rank)]
                   for i in range(rs.rank)], dtype=complex)
    report.det_residuals.append(abs(np.linalg.det(jt)))
    # critical value lands where the scaled wall point maps
    img = np.array(eval_poly_map(pmap, gy), dtype=complex)
    report.value_residuals.append(
        float(np.abs(img - eval_gencos(rs, d * y)).max()))
    if not is_on_diagram(rs, d * y, 1e-8)[0]:
        report.invariance_ok = False


def deltoid_residual(x1: complex, x2: complex) -> complex:
    """Residual of the deltoid quartic X1^2 X2^2 + 18 X1 X2 - 4(X1^3 + X2^3) - 27."""
    return x1 * x1 * x2 * x2 + 18 * x1 * x2 - 4 * (x1 ** 3 + x2 ** 3) - 27


def deltoid_check(rs: RootSystem, samples: int = 100, seed: int = 0):
    """Images of wall samples under the A2 generalized cosine satisfy the
    deltoid equation.  Returns the list of |residual| values."""
    if rs.type_spec != "A2":
        raise ValueError("the deltoid identity is specific to A2")
    out = []
    for s in sample_diagram_points(rs, samples, seed=seed):
        x1, x2 = eval_gencos(rs, s.point)
        out.append(abs(deltoid_residual(x1, x2)))
    return out
