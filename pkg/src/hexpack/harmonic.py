"""Edge weights that make the m-difference of a solved field harmonic,
plus volume growth and random-walk experiments on the weighted lattice.

Shifting a face one step in m and integrating the angle gradient along the
straight segment between the two log-radius triples turns the difference of
the packing equations at v and at its m-translate into a linear identity

    sum_w  eta_{vw} (D1u_w - D1u_v)  =  angle_sum(R v) - angle_sum(v),

where eta_{vw} collects, over the two faces sharing the edge {v, w}, the
integral of d(angle at v)/d(u_w) along the segment.  On a solved field the
right side vanishes, so D1u is harmonic for these weights.  The integrand
is analytic in the segment parameter, so Gauss-Legendre quadrature
converges spectrally; for spiral fields it is constant and any order is
exact.  The weights are symmetric and lie strictly between 0 and 2.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .geometry import dtheta_dx1_array
from .lattice import (
    Face,
    ScalarField,
    Vertex,
    Window,
    are_adjacent,
    faces_containing_edge,
    neighbors,
    translate,
)


class MissingEdgeError(LookupError):
    """A required edge weight is not present."""


class WindowTooSmallError(ValueError):
    """The window does not contain every value the computation needs."""


@dataclass(frozen=True)
class Quadrature:
    rule: str = "gauss-legendre"
    order: int = 32

    def __post_init__(self) -> None:
        if self.rule != "gauss-legendre":
            raise ValueError(f"unsupported quadrature rule: {self.rule!r}")
        if self.order < 2:
            raise ValueError(f"quadrature order must be >= 2, got {self.order}")


DEFAULT_QUADRATURE = Quadrature()


@lru_cache(maxsize=None)
def _nodes_weights_01(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def _require_translatable(u: ScalarField, face: Face) -> None:
    window = u.window
    for v in face:
        if not window.contains(v):
            raise WindowTooSmallError(f"face vertex {v} is outside window {window}")
        if not window.contains(translate(v)):
            raise WindowTooSmallError(
                f"translated face vertex {translate(v)} is outside window {window}"
            )


def segment(u: ScalarField, face: Face, t: float) -> tuple[float, float, float]:
    """Componentwise linear interpolation between the log radii on a face
    and those on its m-translate, at parameter t in [0, 1]."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"segment parameter must lie in [0, 1], got {t}")
    _require_translatable(u, face)
    a, b, c = (u[v] + (u[translate(v)] - u[v]) * t for v in face)
    return a, b, c


def _face_integral(u: ScalarField, face: Face, v: Vertex, w: Vertex,
                   quad: Quadrature) -> float:
    """Integral over t in [0, 1] of d(angle at v)/d(u_w) on the segment."""
    nodes, wts = _nodes_weights_01(quad.order)
    iv = face.index(v)
    iw = face.index(w)
    ik = 3 - iv - iw
    a = np.array([u[x] for x in face])
    b = np.array([u[translate(x)] for x in face])
    interp = a[:, None] + (b - a)[:, None] * nodes[None, :]
    x1 = interp[iw] - interp[iv]
    x2 = interp[ik] - interp[iv]
    return float(np.dot(wts, dtheta_dx1_array(x1, x2)))


def eta(u: ScalarField, v: Vertex, w: Vertex,
        quad: Quadrature = DEFAULT_QUADRATURE) -> float:
    """Edge weight for {v, w}: the segment integral of d(angle at v)/d(u_w),
    summed over the two faces containing the edge.  Strictly in (0, 2)."""
    if not are_adjacent(v, w):
        raise ValueError(f"{v} and {w} are not adjacent")
    total = 0.0
    for face in faces_containing_edge(v, w):
        _require_translatable(u, face)
        total += _face_integral(u, face, v, w, quad)
    return total


class EdgeWeights:
    """Symmetric positive weights on the undirected edges of a window,
    stored once per edge under the lexicographically sorted endpoint pair."""

    def __init__(self, window: Window, weights: dict) -> None:
        self.window = window
        self._weights: dict[tuple[Vertex, Vertex], float] = {}
        for (v, w), value in weights.items():
            self._set(v, w, value)

    def _set(self, v: Vertex, w: Vertex, value: float) -> None:
        if not are_adjacent(v, w):
            raise ValueError(f"{v} and {w} are not adjacent")
        if not (self.window.contains(v) and self.window.contains(w)):
            raise ValueError(f"edge {(v, w)} leaves window {self.window}")
        if not (math.isfinite(value) and 0.0 < value < 2.0):
            raise ValueError(f"edge weight must lie in (0, 2), got {value!r}")
        self._weights[(v, w) if v <= w else (w, v)] = float(value)

    @classmethod
    def uniform(cls, window: Window, value: float) -> "EdgeWeights":
        out = cls(window, {})
        for v in window.vertices():
            for dm, dn in ((1, 0), (0, 1), (-1, 1)):
                w = (v[0] + dm, v[1] + dn)
                if window.contains(w):
                    out._set(v, w, value)
        return out

    def has(self, v: Vertex, w: Vertex) -> bool:
        return ((v, w) if v <= w else (w, v)) in self._weights

    def get(self, v: Vertex, w: Vertex) -> float:
        key = (v, w) if v <= w else (w, v)
        try:
            return self._weights[key]
        except KeyError:
            raise MissingEdgeError(f"no weight stored for edge {key}") from None

    def edges(self) -> list[tuple[Vertex, Vertex, float]]:
        return [(v, w, self._weights[(v, w)]) for (v, w) in sorted(self._weights)]

    def __len__(self) -> int:
        return len(self._weights)

    def complete_at(self, v: Vertex) -> bool:
        return all(self.has(v, w) for w in neighbors(v))

    def to_csv(self) -> str:
        lines = ["m1,n1,m2,n2,eta"]
        for v, w, value in self.edges():
            lines.append(f"{v[0]},{v[1]},{w[0]},{w[1]},{value:.16e}")
        return "\n".join(lines) + "\n"


def compute_edge_weights(u: ScalarField, quad: Quadrature = DEFAULT_QUADRATURE,
                         around: set | None = None) -> EdgeWeights:
    """Weights for every window edge whose two faces and their m-translates
    fit inside the window (others are skipped).  Each stored weight is the
    average of the two directional integrals, which are equal analytically;
    averaging removes the last bits of quadrature asymmetry.

    With ``around`` given, only edges incident to that vertex set are
    computed.
    """
    window = u.window
    out = EdgeWeights(window, {})
    if around is None:
        candidates = window.vertices()
        def wanted(v, w):
            return v <= w
    else:
        candidates = sorted(around)
        def wanted(v, w):
            return v <= w or w not in around
    for v in candidates:
        if not window.contains(v):
            continue
        for w in neighbors(v):
            if not window.contains(w) or not wanted(v, w):
                continue
            try:
                forward = eta(u, v, w, quad)
                backward = eta(u, w, v, quad)
            except WindowTooSmallError:
                continue
            out._set(v, w, 0.5 * (forward + backward))
    return out


def harmonic_residual(u: ScalarField, v: Vertex,
                      quad: Quadrature = DEFAULT_QUADRATURE,
                      weights: EdgeWeights | None = None) -> float:
    """Weighted sum over the neighbors of (D1u_w - D1u_v); zero, up to
    solver and quadrature tolerance, wherever the packing equation holds
    at both ``v`` and its m-translate."""
    window = u.window
    for x in [v, *neighbors(v)]:
        if not window.contains(x) or not window.contains(translate(x)):
            raise WindowTooSmallError(
                f"residual at {v} needs {x} and its translate inside {window}"
            )
    d1u_v = u[translate(v)] - u[v]
    total = 0.0
    for w in neighbors(v):
        weight = weights.get(v, w) if weights is not None else eta(u, v, w, quad)
        total += weight * ((u[translate(w)] - u[w]) - d1u_v)
    return total


def volume(weights: EdgeWeights, vertices: set) -> float:
    """Sum over the vertex set of all incident edge weights (interior edges
    therefore count twice)."""
    total = 0.0
    for v in vertices:
        for w in neighbors(v):
            total += weights.get(v, w)
    return total


@dataclass(frozen=True)
class WalkReport:
    trials: int
    returned: int
    censored: int
    frequency: float
    seed: int

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "returned": self.returned,
            "censored": self.censored,
            "frequency": self.frequency,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def random_walk_return(weights: EdgeWeights, start: Vertex, steps: int,
                       trials: int, seed: int) -> WalkReport:
    """Fraction of weighted random walks from ``start`` that revisit it
    within ``steps`` steps.

    Transition probabilities at a vertex are proportional to its incident
    edge weights.  A trial reaching a vertex with incomplete incident
    weights is censored: counted, but excluded from the frequency.  All
    trials are driven by one generator seeded with ``seed``, so the result
    is reproducible bit for bit.
    """
    if steps < 0:
        raise ValueError(f"steps must be nonnegative, got {steps}")
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    window = weights.window
    if not window.contains(start):
        raise ValueError(f"start vertex {start} is outside window {window}")

    verts = window.vertices()
    index = {v: i for i, v in enumerate(verts)}
    nv = len(verts)
    nbr_idx = np.full((nv, 6), -1, dtype=np.int64)
    cum = np.ones((nv, 6))
    steppable = np.zeros(nv, dtype=bool)
    for v, i in index.items():
        ws = neighbors(v)
        if not all(weights.has(v, w) for w in ws):
            continue
        steppable[i] = True
        etas = np.array([weights.get(v, w) for w in ws])
        c = np.cumsum(etas / etas.sum())
        c[-1] = 1.0
        cum[i] = c
        for k, w in enumerate(ws):
            nbr_idx[i, k] = index.get(w, -1)

    rng = np.random.default_rng(seed)
    start_idx = index[start]
    state = np.full(trials, start_idx, dtype=np.int64)
    returned = np.zeros(trials, dtype=bool)
    censored = np.zeros(trials, dtype=bool)
    for _ in range(steps):
        active = ~(returned | censored)
        censored |= active & ~steppable[state]
        active &= ~censored
        draws = rng.random(trials)
        k = (draws[:, None] > cum[state]).sum(axis=1)
        nxt = nbr_idx[state, k]
        exits = active & (nxt < 0)
        censored |= exits
        move = active & ~exits
        state = np.where(move, nxt, state)
        returned |= move & (state == start_idx)

    n_returned = int(returned.sum())
    n_censored = int(censored.sum())
    effective = trials - n_censored
    frequency = n_returned / effective if effective > 0 else 0.0
    return WalkReport(trials, n_returned, n_censored, frequency, seed)
