"""Boundary-value solver for the packing equation on a window.

At every interior vertex the six inner angles collected from its incident
faces must sum to 2*pi.  With the boundary log radii held fixed this is a
nonlinear system in the interior log radii.  The local angle sum is
strictly decreasing in the vertex's own log radius (growing the circle
shrinks all six angles at it) and ranges from 6*pi down to 0, so each
one-dimensional subproblem has a unique root; Gauss-Seidel and Jacobi
sweeps exploit that with a safeguarded Newton step per vertex, and the
Newton mode solves the assembled symmetric linear system per iteration.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .geometry import theta
from .lattice import NEIGHBOR_OFFSETS, ScalarField, Vertex, Window

TWO_PI = 2.0 * math.pi

MODES = ("gauss-seidel", "jacobi", "newton")
INITS = ("harmonic", "keep", "zero")

DEFAULT_TOLERANCE = 1e-10
DEFAULT_MAX_ITERATIONS = 100_000

# Residual target of the per-vertex 1-D solves; well below any sensible
# field tolerance and above angle-evaluation noise.
_VERTEX_TOL = 1e-14


class InvalidPatch(ValueError):
    """The window has no interior vertices to solve for."""


@dataclass(frozen=True)
class SolveReport:
    iterations: int
    final_defect: float
    converged: bool

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "final_defect": self.final_defect,
            "converged": self.converged,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


class NonConvergence(RuntimeError):
    """Raised when the iteration budget runs out; carries the last iterate."""

    def __init__(self, report: SolveReport, field: ScalarField) -> None:
        super().__init__(
            f"no convergence after {report.iterations} iterations "
            f"(final defect {report.final_defect:.3e})"
        )
        self.report = report
        self.field = field


@dataclass(frozen=True)
class SolveOptions:
    tolerance: float = DEFAULT_TOLERANCE
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    mode: str = "gauss-seidel"
    init: str = "harmonic"

    def __post_init__(self) -> None:
        if not (math.isfinite(self.tolerance) and self.tolerance > 0):
            raise ValueError(f"tolerance must be positive, got {self.tolerance!r}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.init not in INITS:
            raise ValueError(f"init must be one of {INITS}, got {self.init!r}")


def angle_sum(u: ScalarField, v: Vertex) -> float:
    """Sum of the six inner angles at an interior vertex."""
    if not u.window.is_interior(v):
        raise ValueError(f"angle sum needs an interior vertex, got {v}")
    uv = u[v]
    vals = [u[(v[0] + dm, v[1] + dn)] for dm, dn in NEIGHBOR_OFFSETS]
    return sum(
        theta(vals[k] - uv, vals[(k + 1) % 6] - uv) for k in range(6)
    )


def angle_defect(u: ScalarField, v: Vertex) -> float:
    """2*pi minus the angle sum; zero exactly when the packing equation
    holds at ``v``."""
    return TWO_PI - angle_sum(u, v)


def harmonic_interpolation(u0: ScalarField) -> ScalarField:
    """Replace the interior by the graph-harmonic interpolation of the
    boundary values (each interior value the mean of its six neighbors).

    Exact for fields linear in (m, n), hence for spiral boundaries.
    Boundary entries are returned bit for bit.
    """
    window = u0.window
    interior = window.interior_vertices()
    if not interior:
        return u0.copy()
    index = {v: i for i, v in enumerate(interior)}
    n = len(interior)
    rows, cols, data = [], [], []
    b = np.zeros(n)
    for i, (m, nn) in enumerate(interior):
        rows.append(i)
        cols.append(i)
        data.append(6.0)
        for dm, dn in NEIGHBOR_OFFSETS:
            w = (m + dm, nn + dn)
            j = index.get(w)
            if j is None:
                b[i] += u0[w]
            else:
                rows.append(i)
                cols.append(j)
                data.append(-1.0)
    mat = scipy.sparse.csr_matrix((data, (rows, cols)), shape=(n, n))
    x = scipy.sparse.linalg.spsolve(mat, b)
    out = u0.copy()
    for v, xi in zip(interior, x):
        out[v] = float(xi)
    return out


class _Grid:
    """Flat-array view of a field: interior flat indices plus the constant
    flat offsets of the six neighbors (valid at interior vertices only)."""

    def __init__(self, window: Window) -> None:
        mc = window.m_count
        self.window = window
        self.offsets = (1, mc, mc - 1, -1, -mc, -mc + 1)
        self.interior = [
            (n - window.n_min) * mc + (m - window.m_min)
            for (m, n) in window.interior_vertices()
        ]


def _local_sum_slope(vals: list, i: int, offs: tuple, t: float) -> tuple[float, float]:
    """Angle sum at flat index ``i`` when its log radius is ``t``, and the
    derivative of that sum in ``t``."""
    exp = math.exp
    atan = math.atan
    sqrt = math.sqrt
    p = [exp(vals[i + o] - t) for o in offs]
    s_total = 0.0
    d_total = 0.0
    for k in range(6):
        pk = p[k]
        pk1 = p[k - 5]  # (k+1) mod 6
        g = pk * pk1 / (1.0 + pk + pk1)
        s = sqrt(g)
        s_total += 2.0 * atan(s)
        d_total -= s * (1.0 / (1.0 + pk) + 1.0 / (1.0 + pk1))
    return s_total, d_total


def _solve_vertex(vals: list, i: int, offs: tuple, t: float) -> float:
    """Root of the monotone 1-D problem angle_sum(t) = 2*pi at one vertex.

    Newton steps are kept inside a sign-changing bracket, with bisection
    as the fallback, so convergence is unconditional.
    """
    s, ds = _local_sum_slope(vals, i, offs, t)
    f = s - TWO_PI
    if abs(f) <= _VERTEX_TOL:
        return t
    # The sum decreases in t, so f > 0 means the root lies above t.
    step = 1.0
    if f > 0.0:
        lo = t
        while True:
            t = t + step
            step *= 2.0
            s, ds = _local_sum_slope(vals, i, offs, t)
            f = s - TWO_PI
            if f <= 0.0:
                hi = t
                break
            lo = t
    else:
        hi = t
        while True:
            t = t - step
            step *= 2.0
            s, ds = _local_sum_slope(vals, i, offs, t)
            f = s - TWO_PI
            if f >= 0.0:
                lo = t
                break
            hi = t
    for _ in range(100):
        if abs(f) <= _VERTEX_TOL:
            return t
        if f > 0.0:
            lo = t
        else:
            hi = t
        if ds != 0.0:
            t_new = t - f / ds
            if not (lo < t_new < hi):
                t_new = 0.5 * (lo + hi)
        else:
            t_new = 0.5 * (lo + hi)
        if hi - lo <= 4.0 * math.ulp(max(abs(lo), abs(hi))):
            return t_new
        t = t_new
        s, ds = _local_sum_slope(vals, i, offs, t)
        f = s - TWO_PI
    return t


def _max_defect(vals: list, grid: _Grid) -> float:
    exp = math.exp
    atan = math.atan
    sqrt = math.sqrt
    offs = grid.offsets
    worst = 0.0
    for i in grid.interior:
        t = vals[i]
        p = [exp(vals[i + o] - t) for o in offs]
        s_total = 0.0
        for k in range(6):
            pk = p[k]
            pk1 = p[k - 5]
            s_total += 2.0 * atan(sqrt(pk * pk1 / (1.0 + pk + pk1)))
        d = abs(TWO_PI - s_total)
        if d > worst:
            worst = d
    return worst


def _sweep_gauss_seidel(vals: list, grid: _Grid) -> None:
    offs = grid.offsets
    for i in grid.interior:
        vals[i] = _solve_vertex(vals, i, offs, vals[i])


def _sweep_jacobi(vals: list, grid: _Grid) -> list:
    offs = grid.offsets
    new_vals = vals.copy()
    for i in grid.interior:
        new_vals[i] = _solve_vertex(vals, i, offs, vals[i])
    return new_vals


def _newton_step(vals: list, grid: _Grid) -> np.ndarray:
    """One full Newton correction for the interior residual vector."""
    exp = math.exp
    sqrt = math.sqrt
    atan = math.atan
    offs = grid.offsets
    interior = grid.interior
    pos = {i: a for a, i in enumerate(interior)}
    n = len(interior)
    resid = np.zeros(n)
    rows, cols, data = [], [], []
    for a, i in enumerate(interior):
        t = vals[i]
        p = [exp(vals[i + o] - t) for o in offs]
        s_faces = []
        s_total = 0.0
        diag = 0.0
        for k in range(6):
            pk = p[k]
            pk1 = p[k - 5]
            s = sqrt(pk * pk1 / (1.0 + pk + pk1))
            s_faces.append(s)
            s_total += 2.0 * atan(s)
            diag -= s * (1.0 / (1.0 + pk) + 1.0 / (1.0 + pk1))
        resid[a] = s_total - TWO_PI
        rows.append(a)
        cols.append(a)
        data.append(diag)
        for k in range(6):
            b = pos.get(i + offs[k])
            if b is None:
                continue
            # d(angle sum)/d(u_neighbor k): the two faces sharing that edge.
            coeff = (s_faces[k - 1] + s_faces[k]) / (1.0 + p[k])
            rows.append(a)
            cols.append(b)
            data.append(coeff)
    jac = scipy.sparse.csr_matrix((data, (rows, cols)), shape=(n, n))
    return scipy.sparse.linalg.spsolve(jac, -resid)


def _run_newton(vals: list, grid: _Grid, tol: float, max_iterations: int):
    interior = grid.interior
    iterations = 0
    while True:
        defect = _max_defect(vals, grid)
        if defect <= tol:
            return iterations, defect, True
        if iterations >= max_iterations:
            return iterations, defect, False
        delta = _newton_step(vals, grid)
        scale = 1.0
        base = [vals[i] for i in interior]
        for _ in range(40):
            for a, i in enumerate(interior):
                vals[i] = base[a] + scale * delta[a]
            if _max_defect(vals, grid) < defect:
                break
            scale *= 0.5
        iterations += 1


def solve_patch(u0: ScalarField, options: SolveOptions | None = None):
    """Solve the packing equation on the interior of ``u0``'s window with
    its boundary values held fixed.

    The interior start is chosen by ``options.init``: "harmonic" (default)
    interpolates the boundary harmonically in (m, n), "keep" uses the
    interior of ``u0`` as given, "zero" starts from zero.  Returns the
    solved field and a report; raises :class:`NonConvergence` (which still
    carries the last iterate) when the budget runs out, and
    :class:`InvalidPatch` when the window has no interior.
    """
    opts = options or SolveOptions()
    window = u0.window
    interior_vertices = window.interior_vertices()
    if not interior_vertices:
        raise InvalidPatch(f"window {window} has no interior vertices")

    if opts.init == "harmonic":
        u = harmonic_interpolation(u0)
    else:
        u = u0.copy()
        if opts.init == "zero":
            for v in interior_vertices:
                u[v] = 0.0

    grid = _Grid(window)
    vals = [float(x) for x in u.values.ravel()]

    if opts.mode == "newton":
        iterations, defect, converged = _run_newton(
            vals, grid, opts.tolerance, opts.max_iterations
        )
    else:
        iterations = 0
        while True:
            defect = _max_defect(vals, grid)
            if defect <= opts.tolerance:
                converged = True
                break
            if iterations >= opts.max_iterations:
                converged = False
                break
            if opts.mode == "gauss-seidel":
                _sweep_gauss_seidel(vals, grid)
            else:
                vals = _sweep_jacobi(vals, grid)
            iterations += 1

    for i, v in zip(grid.interior, interior_vertices):
        u[v] = vals[i]
    report = SolveReport(iterations=iterations, final_defect=defect, converged=converged)
    if not converged:
        raise NonConvergence(report, u)
    return u, report
