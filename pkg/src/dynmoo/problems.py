"""Time-dependent benchmark problems (FDA, dMOP, and F suites) with analytic fronts.

Every problem is a pure function of (x, t): minimization, box-bounded, with a
closed-form Pareto set and front at every time value. Front samples come from
the analytic parameterization, never from running an optimizer, so the quality
indicators have an independent reference.

The change types follow the usual four-way classification:

* Type 1: the optimal set in decision space moves, the front is static.
* Type 2: both the optimal set and the front move.
* Type 3: the front moves, the optimal set is static.
* Type 4: neither moves.

Published variants of several of these problems disagree on variable bounds
and minor details; the definitions pinned here are documented in the class
docstrings and in the README.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .core import Bounds

DEFAULT_DIMENSION = 20

#: Index resolution for the problems whose definition switches by time window
#: (one window per 0.1 step of t).
_WINDOW = 10


def _window_index(t: float) -> int:
    # guard against 10*t landing just under an integer (e.g. t = 3/10)
    return int(math.floor(_WINDOW * t + 1e-9))


@dataclass(frozen=True)
class TruePFSample:
    """Analytic front sample at one time value plus its per-objective maxima."""

    t: float
    points: np.ndarray  # K x m, mutually non-dominated
    z: np.ndarray  # per-objective maxima over the sample


class Problem:
    """Base class: registry metadata plus the evaluate/front sampler contract."""

    name: str = ""
    m: int = 2
    change_type: str = ""
    linearity: str = ""

    def __init__(self, n: int = DEFAULT_DIMENSION):
        if n < 2:
            raise ValueError("need at least two decision variables")
        self.n = n
        self.bounds = self._make_bounds()

    def _make_bounds(self) -> Bounds:
        raise NotImplementedError

    def _evaluate(self, X: np.ndarray, t: float) -> np.ndarray:
        raise NotImplementedError

    def evaluate_batch(self, X, t: float) -> np.ndarray:
        """Objective matrix for the rows of X at time t."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n:
            raise ValueError(f"{self.name}: expected {self.n} variables, got {X.shape[1]}")
        if t < 0:
            raise ValueError("t must be nonnegative")
        if np.any(X < self.bounds.low) or np.any(X > self.bounds.up):
            raise ValueError(f"{self.name}: decision vector outside bounds")
        return self._evaluate(X, float(t))

    def evaluate(self, x, t: float) -> np.ndarray:
        """Objective vector for one decision vector at time t."""
        return self.evaluate_batch(np.asarray(x, dtype=np.float64)[None, :], t)[0]

    def true_pf(self, t: float, K: int = 1000) -> TruePFSample:
        """Uniformly spread sample of the analytic front at time t.

        For two objectives the sample has exactly K points; for three it is
        the smallest square grid with at least K points.
        """
        if K < 2:
            raise ValueError("K must be at least 2")
        points = self._pf_points(float(t), int(K))
        return TruePFSample(float(t), points, points.max(axis=0))

    def _pf_points(self, t: float, K: int) -> np.ndarray:
        raise NotImplementedError

    def max_objectives(self, t: float, K: int = 1000) -> np.ndarray:
        """Per-objective maxima of the front sample (reference-point anchor)."""
        return self.true_pf(t, K).z

    def pareto_set_samples(self, t: float, count: int = 10) -> np.ndarray:
        """Decision vectors lying exactly on the optimal set at time t."""
        raise NotImplementedError

    @property
    def default_pf_size(self) -> int:
        return 1000 if self.m == 2 else 1089

    def __repr__(self):
        return (
            f"{type(self).__name__}(name={self.name!r}, m={self.m}, n={self.n}, "
            f"change_type={self.change_type!r}, linearity={self.linearity!r})"
        )


def _grid_side(K: int) -> int:
    side = int(math.ceil(math.sqrt(K)))
    return max(side, 2)


def _sphere_octant(side: int) -> np.ndarray:
    """Grid on the unit-sphere octant via two angle parameters in [0, 1]."""
    s1, s2 = np.meshgrid(np.linspace(0.0, 1.0, side), np.linspace(0.0, 1.0, side))
    s1 = s1.ravel()
    s2 = s2.ravel()
    c1 = np.cos(0.5 * np.pi * s1)
    return np.column_stack(
        [c1 * np.cos(0.5 * np.pi * s2), c1 * np.sin(0.5 * np.pi * s2), np.sin(0.5 * np.pi * s1)]
    )


# ---------------------------------------------------------------------------
# FDA suite (linear variable coupling)
# ---------------------------------------------------------------------------


class FDA1(Problem):
    """f1 = x1, f2 = g (1 - sqrt(f1/g)), g = 1 + sum (xi - G)^2, G = sin(pi t / 2).

    x1 in [0, 1], the rest in [-1, 1]. The optimal set tracks xi = G; the
    front f2 = 1 - sqrt(f1) never moves.
    """

    name = "FDA1"
    change_type = "Type1"
    linearity = "Linear"

    def _make_bounds(self):
        low = np.full(self.n, -1.0)
        up = np.ones(self.n)
        low[0] = 0.0
        return Bounds(low, up)

    def _evaluate(self, X, t):
        G = math.sin(0.5 * math.pi * t)
        f1 = X[:, 0]
        g = 1.0 + np.sum((X[:, 1:] - G) ** 2, axis=1)
        f2 = g * (1.0 - np.sqrt(f1 / g))
        return np.column_stack([f1, f2])

    def _pf_points(self, t, K):
        u = np.linspace(0.0, 1.0, K)
        return np.column_stack([u**2, 1.0 - u])

    def pareto_set_samples(self, t, count=10):
        G = math.sin(0.5 * math.pi * t)
        X = np.full((count, self.n), G)
        X[:, 0] = np.linspace(0.0, 1.0, count)
        return X


class FDA2(Problem):
    """f1 = x1, f2 = g (1 - (f1/g)^H), g = 1 + sum xi^2, H = 0.75 + 0.7 sin(pi t / 2).

    x1 in [0, 1], the rest in [-1, 1]. The front morphs between convex and
    concave with H while the optimal set stays at xi = 0. Published versions
    of this problem differ in how H enters; this fixed-set form is pinned so
    the front/set behavior actually matches its usual Type 3 label.
    """

    name = "FDA2"
    change_type = "Type3"
    linearity = "Linear"

    def _make_bounds(self):
        low = np.full(self.n, -1.0)
        up = np.ones(self.n)
        low[0] = 0.0
        return Bounds(low, up)

    @staticmethod
    def _H(t):
        return 0.75 + 0.7 * math.sin(0.5 * math.pi * t)

    def _evaluate(self, X, t):
        H = self._H(t)
        f1 = X[:, 0]
        g = 1.0 + np.sum(X[:, 1:] ** 2, axis=1)
        f2 = g * (1.0 - (f1 / g) ** H)
        return np.column_stack([f1, f2])

    def _pf_points(self, t, K):
        u = np.linspace(0.0, 1.0, K)
        return np.column_stack([u ** (1.0 / self._H(t)), 1.0 - u])

    def pareto_set_samples(self, t, count=10):
        X = np.zeros((count, self.n))
        X[:, 0] = np.linspace(0.0, 1.0, count)
        return X


class FDA3(Problem):
    """f1 = x1^F, f2 = g (1 - sqrt(f1/g)), g = 1 + G + sum (xi - G)^2.

    G = |sin(pi t / 2)|, F = 10^(2 sin(pi t / 2)); x1 in [0, 1], the rest in
    [-1, 1]. Both the optimal set (xi = G) and the front (scaled by 1 + G)
    move.
    """

    name = "FDA3"
    change_type = "Type2"
    linearity = "Linear"

    def _make_bounds(self):
        low = np.full(self.n, -1.0)
        up = np.ones(self.n)
        low[0] = 0.0
        return Bounds(low, up)

    def _evaluate(self, X, t):
        G = abs(math.sin(0.5 * math.pi * t))
        F = 10.0 ** (2.0 * math.sin(0.5 * math.pi * t))
        f1 = X[:, 0] ** F
        g = 1.0 + G + np.sum((X[:, 1:] - G) ** 2, axis=1)
        f2 = g * (1.0 - np.sqrt(f1 / g))
        return np.column_stack([f1, f2])

    def _pf_points(self, t, K):
        G = abs(math.sin(0.5 * math.pi * t))
        scale = 1.0 + G
        v = np.linspace(0.0, 1.0 / math.sqrt(scale), K)
        return np.column_stack([scale * v**2, scale * (1.0 - v)])

    def pareto_set_samples(self, t, count=10):
        G = abs(math.sin(0.5 * math.pi * t))
        X = np.full((count, self.n), G)
        X[:, 0] = np.linspace(0.0, 1.0, count)
        return X


class FDA4(Problem):
    """Tri-objective sphere-octant front with a moving distance optimum.

    f1 = (1+g) cos(x1 pi/2) cos(x2 pi/2), f2 = (1+g) cos(x1 pi/2) sin(x2 pi/2),
    f3 = (1+g) sin(x1 pi/2), g = sum_{i>=3} (xi - G)^2, G = |sin(pi t / 2)|,
    all variables in [0, 1]. The front (the unit-sphere octant) is static.
    """

    name = "FDA4"
    m = 3
    change_type = "Type1"
    linearity = "Linear"

    def __init__(self, n: int = DEFAULT_DIMENSION):
        if n < 3:
            raise ValueError("FDA4 needs at least three variables")
        super().__init__(n)

    def _make_bounds(self):
        return Bounds(np.zeros(self.n), np.ones(self.n))

    def _evaluate(self, X, t):
        G = abs(math.sin(0.5 * math.pi * t))
        g = np.sum((X[:, 2:] - G) ** 2, axis=1)
        a1 = 0.5 * np.pi * X[:, 0]
        a2 = 0.5 * np.pi * X[:, 1]
        scale = 1.0 + g
        return np.column_stack(
            [
                scale * np.cos(a1) * np.cos(a2),
                scale * np.cos(a1) * np.sin(a2),
                scale * np.sin(a1),
            ]
        )

    def _pf_points(self, t, K):
        return _sphere_octant(_grid_side(K))

    def pareto_set_samples(self, t, count=10):
        G = abs(math.sin(0.5 * math.pi * t))
        X = np.full((count, self.n), G)
        u = np.linspace(0.0, 1.0, count)
        X[:, 0] = u
        X[:, 1] = u[::-1]
        return X


# ---------------------------------------------------------------------------
# dMOP suite (linear variable coupling)
# ---------------------------------------------------------------------------


class DMOP1(Problem):
    """f1 = x1, f2 = g (1 - (f1/g)^H), g = 1 + 9 sum xi^2, H = 1.25 + 0.75 sin(pi t / 2).

    All variables in [0, 1]. The optimal set stays at xi = 0; the front
    f2 = 1 - f1^H changes shape.
    """

    name = "dMOP1"
    change_type = "Type3"
    linearity = "Linear"

    def _make_bounds(self):
        return Bounds(np.zeros(self.n), np.ones(self.n))

    @staticmethod
    def _H(t):
        return 1.25 + 0.75 * math.sin(0.5 * math.pi * t)

    def _evaluate(self, X, t):
        H = self._H(t)
        f1 = X[:, 0]
        g = 1.0 + 9.0 * np.sum(X[:, 1:] ** 2, axis=1)
        f2 = g * (1.0 - (f1 / g) ** H)
        return np.column_stack([f1, f2])

    def _pf_points(self, t, K):
        u = np.linspace(0.0, 1.0, K)
        return np.column_stack([u ** (1.0 / self._H(t)), 1.0 - u])

    def pareto_set_samples(self, t, count=10):
        X = np.zeros((count, self.n))
        X[:, 0] = np.linspace(0.0, 1.0, count)
        return X


class DMOP2(DMOP1):
    """dMOP1 with the distance optimum moving: g = 1 + 9 sum (xi - G)^2.

    G = sin(pi t / 2); x1 in [0, 1] and the distance variables in [-1, 1] so
    the optimal set stays inside the box for negative G. Both set and front
    change.
    """

    name = "dMOP2"
    change_type = "Type2"

    def _make_bounds(self):
        low = np.full(self.n, -1.0)
        up = np.ones(self.n)
        low[0] = 0.0
        return Bounds(low, up)

    def _evaluate(self, X, t):
        H = self._H(t)
        G = math.sin(0.5 * math.pi * t)
        f1 = X[:, 0]
        g = 1.0 + 9.0 * np.sum((X[:, 1:] - G) ** 2, axis=1)
        f2 = g * (1.0 - (f1 / g) ** H)
        return np.column_stack([f1, f2])

    def pareto_set_samples(self, t, count=10):
        G = math.sin(0.5 * math.pi * t)
        X = np.full((count, self.n), G)
        X[:, 0] = np.linspace(0.0, 1.0, count)
        return X


class DMOP3(Problem):
    """FDA1-shaped problem whose position variable rotates between environments.

    The position index r cycles deterministically with the time window
    (r = floor(10 t) mod n); the remaining variables track G = |sin(pi t / 2)|.
    All variables in [0, 1]. The front f2 = 1 - sqrt(f1) is static. The
    original formulation picks r at random; a deterministic rotation keeps
    runs reproducible while preserving the set-jump behavior.
    """

    name = "dMOP3"
    change_type = "Type1"
    linearity = "Linear"

    def _make_bounds(self):
        return Bounds(np.zeros(self.n), np.ones(self.n))

    def _position_index(self, t):
        return _window_index(t) % self.n

    def _evaluate(self, X, t):
        G = abs(math.sin(0.5 * math.pi * t))
        r = self._position_index(t)
        f1 = X[:, r]
        rest = np.delete(X, r, axis=1)
        g = 1.0 + 9.0 * np.sum((rest - G) ** 2, axis=1)
        f2 = g * (1.0 - np.sqrt(f1 / g))
        return np.column_stack([f1, f2])

    def _pf_points(self, t, K):
        u = np.linspace(0.0, 1.0, K)
        return np.column_stack([u**2, 1.0 - u])

    def pareto_set_samples(self, t, count=10):
        G = abs(math.sin(0.5 * math.pi * t))
        r = self._position_index(t)
        X = np.full((count, self.n), G)
        X[:, r] = np.linspace(0.0, 1.0, count)
        return X


# ---------------------------------------------------------------------------
# F suite (nonlinear variable coupling)
# ---------------------------------------------------------------------------


class _FBase(Problem):
    """Shared structure of the nonlinear suite.

    The position variable x1 moves over [a, a+1]; every distance variable has
    a nonlinear, index-dependent optimum y_i = 0 with
    y_i = x_i - b - 1 + |x1 - a|^(H + i/n). On the optimal set
    f1 = u^H and f2 = (1-u)^H for u = x1 - a, so the front is
    f1^(1/H) + f2^(1/H) = 1. Distance terms are split between the two
    objectives by index parity. x1 in [0, 5], the rest in [-2, 3].
    """

    linearity = "NonLinear"
    change_type = "Type2"

    def _make_bounds(self):
        low = np.full(self.n, -2.0)
        up = np.full(self.n, 3.0)
        low[0] = 0.0
        up[0] = 5.0
        return Bounds(low, up)

    # time-varying movement/shape parameters, overridden per problem
    def _a(self, t):
        return 2.0 * math.cos(math.pi * t) + 2.0

    def _b(self, t):
        return 2.0 * math.sin(2.0 * math.pi * t)

    def _H(self, t):
        return 1.25 + 0.75 * math.sin(math.pi * t)

    def _distance_terms(self, X, t):
        a, b, H = self._a(t), self._b(t), self._H(t)
        idx = np.arange(2, self.n + 1)  # 1-based indices of the distance variables
        expo = H + idx / self.n
        y = X[:, 1:] - b - 1.0 + np.abs(X[:, 0:1] - a) ** expo
        odd = (idx % 2) == 1
        g1 = np.sum(y[:, ~odd] ** 2, axis=1)
        g2 = np.sum(y[:, odd] ** 2, axis=1)
        return g1, g2

    def _evaluate(self, X, t):
        a, H = self._a(t), self._H(t)
        g1, g2 = self._distance_terms(X, t)
        u = np.abs(X[:, 0] - a)
        f1 = u**H + g1
        f2 = np.abs(X[:, 0] - a - 1.0) ** H + g2
        return np.column_stack([f1, f2])

    def _pf_points(self, t, K):
        H = self._H(t)
        u = np.linspace(0.0, 1.0, K)
        return np.column_stack([u**H, (1.0 - u) ** H])

    def pareto_set_samples(self, t, count=10):
        a, b, H = self._a(t), self._b(t), self._H(t)
        u = np.linspace(0.0, 1.0, count)
        X = np.empty((count, self.n))
        X[:, 0] = a + u
        idx = np.arange(2, self.n + 1)
        X[:, 1:] = b + 1.0 - u[:, None] ** (H + idx / self.n)
        return X


class F5(_FBase):
    """Baseline nonlinear problem: a = 2 cos(pi t) + 2, b = 2 sin(2 pi t)."""

    name = "F5"


class F6(_FBase):
    """Nonlinear problem whose optimum moves on a curled path.

    a = 2 cos(1.5 pi t) sin(pi t / 2) + 2, b = 2 cos(1.5 pi t) cos(pi t / 2).
    """

    name = "F6"

    def _a(self, t):
        return 2.0 * math.cos(1.5 * math.pi * t) * math.sin(0.5 * math.pi * t) + 2.0

    def _b(self, t):
        return 2.0 * math.cos(1.5 * math.pi * t) * math.cos(0.5 * math.pi * t)


class F7(_FBase):
    """Nonlinear problem with a slow drift: a = 2 cos(pi t / 2) + 2, b = 2 sin(pi t / 2)."""

    name = "F7"

    def _a(self, t):
        return 2.0 * math.cos(0.5 * math.pi * t) + 2.0

    def _b(self, t):
        return 2.0 * math.sin(0.5 * math.pi * t)


class F8(_FBase):
    """Tri-objective nonlinear problem on a powered sphere-octant front.

    Position variables x1, x2 move over [a, a+1]^2; objectives are the
    sphere-octant coordinates raised to H (so the front shape changes with t)
    scaled by 1 + g with the usual nonlinear distance terms. x1, x2 in [0, 5],
    the rest in [-2, 3].
    """

    name = "F8"
    m = 3

    def __init__(self, n: int = DEFAULT_DIMENSION):
        if n < 3:
            raise ValueError("F8 needs at least three variables")
        super().__init__(n)

    def _make_bounds(self):
        low = np.full(self.n, -2.0)
        up = np.full(self.n, 3.0)
        low[:2] = 0.0
        up[:2] = 5.0
        return Bounds(low, up)

    def _evaluate(self, X, t):
        a, b, H = self._a(t), self._b(t), self._H(t)
        idx = np.arange(3, self.n + 1)
        expo = H + idx / self.n
        y = X[:, 2:] - b - 1.0 + np.abs(X[:, 0:1] - a) ** expo
        g = np.sum(y**2, axis=1)
        s1 = np.clip(np.abs(X[:, 0] - a), 0.0, 1.0)
        s2 = np.clip(np.abs(X[:, 1] - a), 0.0, 1.0)
        c1 = np.cos(0.5 * np.pi * s1)
        scale = 1.0 + g
        return np.column_stack(
            [
                scale * (c1 * np.cos(0.5 * np.pi * s2)) ** H,
                scale * (c1 * np.sin(0.5 * np.pi * s2)) ** H,
                scale * np.sin(0.5 * np.pi * s1) ** H,
            ]
        )

    def _pf_points(self, t, K):
        return _sphere_octant(_grid_side(K)) ** self._H(t)

    def pareto_set_samples(self, t, count=10):
        a, b, H = self._a(t), self._b(t), self._H(t)
        u = np.linspace(0.0, 1.0, count)
        X = np.empty((count, self.n))
        X[:, 0] = a + u
        X[:, 1] = a + u[::-1]
        idx = np.arange(3, self.n + 1)
        X[:, 2:] = b + 1.0 - u[:, None] ** (H + idx / self.n)
        return X


class F9(_FBase):
    """F5 whose optimum occasionally jumps to a far region.

    In every fifth time window (floor(10 t) mod 5 == 4) the movement
    parameter a gains a +3 offset, so the optimal set leaps instead of
    drifting. x1 in [0, 8] to keep the jumped optimum inside the box.
    """

    name = "F9"

    def _make_bounds(self):
        low = np.full(self.n, -2.0)
        up = np.full(self.n, 3.0)
        low[0] = 0.0
        up[0] = 8.0
        return Bounds(low, up)

    def _a(self, t):
        jump = 3.0 if _window_index(t) % 5 == 4 else 0.0
        return 2.0 * math.cos(math.pi * t) + 2.0 + jump


class F10(_FBase):
    """F5 whose front alternates between two shapes in consecutive time windows.

    H flips between 0.5 and 2.0 with the parity of floor(10 t), so the front
    swaps between the concave arc f1^2 + f2^2 = 1 and the convex curve
    sqrt(f1) + sqrt(f2) = 1 at every window boundary.
    """

    name = "F10"

    def _H(self, t):
        return 0.5 if _window_index(t) % 2 == 0 else 2.0


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

_PROBLEM_CLASSES = [FDA1, FDA2, FDA3, FDA4, DMOP1, DMOP2, DMOP3, F5, F6, F7, F8, F9, F10]
_REGISTRY = {cls.name: cls for cls in _PROBLEM_CLASSES}


def list_problems(n: int = DEFAULT_DIMENSION) -> list[Problem]:
    """Fresh instances of all registered problems."""
    return [cls(n) for cls in _PROBLEM_CLASSES]


def get_problem(name: str, n: int = DEFAULT_DIMENSION) -> Problem:
    """Look a problem up by name (case-insensitive on the suite prefixes)."""
    key = name.strip()
    if key not in _REGISTRY:
        lowered = {k.lower(): k for k in _REGISTRY}
        if key.lower() in lowered:
            key = lowered[key.lower()]
        else:
            raise KeyError(f"unknown problem {name!r}; known: {', '.join(sorted(_REGISTRY))}")
    return _REGISTRY[key](n)


def problem_names() -> list[str]:
    return [cls.name for cls in _PROBLEM_CLASSES]


def export_true_pf(problem: Problem, ts, K: int, path) -> None:
    """Write front samples for several time values as CSV (columns t, f1..fm)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t"] + [f"f{j + 1}" for j in range(problem.m)])
        for t in ts:
            sample = problem.true_pf(t, K)
            for row in sample.points:
                writer.writerow([repr(float(t))] + [repr(float(v)) for v in row])
