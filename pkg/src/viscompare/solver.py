"""Monotone finite-difference solver on truncated boxes (1-d and 2-d).

Discretization: 3-point second differences for the (axis-aligned) diffusion,
first-order upwinding for the drift, and a Lax-Friedrichs regularization for
the gradient term,

    H(x, Dc u) - sum_ax lf_ax * (second difference)_ax * h_ax / 2,

with Dc the central gradient.  With lf_ax at least the per-axis slope bound
sup |dH/dxi_ax| on the realized gradients, every off-center stencil
coefficient of the linearized update has the monotone sign, which is the
discrete counterpart of degenerate ellipticity and grants a discrete
comparison principle.

The nonlinear system is solved by a damped semismooth Newton sweep: H is
linearized at the current central gradient, the resulting monotone sparse
linear system is solved exactly, and the update is damped.  For game-form
Hamiltonians the slope comes from the current argmin/argmax index pair, so
the sweep is exactly Howard policy iteration (freeze policies, solve,
re-optimize).  lf is re-tuned every iteration from the current gradient
range with a 1.2 safety factor and recorded in the report.

Truncation replaces behavior at infinity by Dirichlet data; choosing
boundary traces of candidate solutions with different growth tells the
non-uniqueness story at desk scale.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import growth as growth_mod
from .fields import as_point
from .hamiltonians import GameHamiltonian, check_A4, compute_gamma, hamiltonian_slope
from .operators import check_A1_A3
from .residual import SmoothCandidate, verify_solution


class MonotonicityError(ValueError):
    """User-fixed Lax-Friedrichs dissipation below the required slope bound."""


@dataclass(frozen=True)
class Box:
    """Axis-aligned truncation box, center +- half_width per axis."""

    center: tuple
    half_width: tuple

    def __post_init__(self):
        c = tuple(float(v) for v in np.atleast_1d(self.center))
        w = tuple(float(v) for v in np.atleast_1d(self.half_width))
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "half_width", w)
        if len(c) != len(w):
            raise ValueError("center and half_width must have equal length")
        if any(v <= 0 for v in w):
            raise ValueError("half_width must be positive")
        if len(c) not in (1, 2):
            raise ValueError("solver supports N in {1, 2}")

    @property
    def N(self) -> int:
        return len(self.center)


@dataclass
class DiscreteField:
    """Grid function on the box with Dirichlet boundary values baked in."""

    axes: tuple          # per-axis node coordinates
    values: np.ndarray   # shape (n0,) or (n0, n1)
    h: tuple             # realized spacings
    boundary_mode: str = "explicit"

    def __post_init__(self):
        for ax in self.axes:
            if len(ax) % 2 == 0:
                raise ValueError("node count must be odd per axis (center node exists)")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")

    def points(self) -> np.ndarray:
        if len(self.axes) == 1:
            return self.axes[0].reshape(-1, 1)
        X0, X1 = np.meshgrid(self.axes[0], self.axes[1], indexing="ij")
        return np.column_stack([X0.ravel(), X1.ravel()])

    def center_value(self) -> float:
        idx = tuple(len(ax) // 2 for ax in self.axes)
        return float(self.values[idx])


@dataclass
class SchemeConfig:
    """Iteration knobs; None means auto (damping 1.0 linear / policy, 0.5 superlinear)."""

    lf_dissipation: object = None  # None = auto-tune; scalar or per-axis sequence
    damping: float | None = None
    max_iters: int = 200
    tol_residual: float = 1e-9
    policy_iteration: bool = False


@dataclass
class SolveReport:
    iterations: int
    final_residual_norm: float
    monotonicity_certificate: bool
    wall_time: float
    converged: bool
    lf_used: tuple
    damping: float
    residual_history: tuple

    def to_json_dict(self) -> dict:
        # wall_time deliberately excluded: reports must be run-to-run identical
        return {
            "iterations": int(self.iterations),
            "final_residual_norm": float(self.final_residual_norm),
            "monotonicity_certificate": bool(self.monotonicity_certificate),
            "converged": bool(self.converged),
            "lf_used": [float(v) for v in self.lf_used],
            "damping": float(self.damping),
            "residual_history": [float(v) for v in self.residual_history],
        }


class DiscreteOperator:
    """Node-wise update rule for one problem on one grid."""

    def __init__(self, problem, box: Box, h: float):
        if box.N != problem.N:
            raise ValueError(f"box dimension {box.N} != problem dimension {problem.N}")
        if problem.N not in (1, 2):
            raise ValueError("solver supports N in {1, 2}")
        self.problem = problem
        self.box = box
        axes, spacings = [], []
        for c, w in zip(box.center, box.half_width):
            m = max(2, round(w / h))
            axes.append(np.linspace(c - w, c + w, 2 * m + 1))
            spacings.append(w / m)
        self.axes = tuple(axes)
        self.h = tuple(spacings)
        self.shape = tuple(len(ax) for ax in axes)
        self.int_shape = tuple(n - 2 for n in self.shape)
        self.n_interior = int(np.prod(self.int_shape))

        if problem.N == 1:
            self.points_int = self.axes[0][1:-1].reshape(-1, 1)
        else:
            X0, X1 = np.meshgrid(self.axes[0][1:-1], self.axes[1][1:-1], indexing="ij")
            self.points_int = np.column_stack([X0.ravel(), X1.ravel()])

        # diffusion restricted to (near-)diagonal sigma sigma^T in 2-d:
        # cross-derivative monotone stencils are out of scope
        diff = np.array([problem.operator.diffusion(x) for x in self.points_int])
        if problem.N == 2:
            off = np.abs(diff[:, 0, 1])
            scale = 1.0 + np.abs(diff[:, 0, 0]) + np.abs(diff[:, 1, 1])
            bad = np.nonzero(off > 1e-10 * scale)[0]
            if bad.size:
                raise ValueError(
                    "2-d diffusion must be diagonal for a monotone axis-aligned "
                    f"stencil; offending node {self.points_int[bad[0]]} has "
                    f"sigma sigma^T off-diagonal {diff[bad[0], 0, 1]:.3g}"
                )
        self.D = [diff[:, ax, ax] for ax in range(problem.N)]
        self.bdrift = np.array([problem.operator.b_at(x) for x in self.points_int])

    # -- array plumbing ----------------------------------------------------

    def _interior(self, u: np.ndarray) -> np.ndarray:
        sl = tuple(slice(1, -1) for _ in self.shape)
        return u[sl]

    def _neighbor(self, u: np.ndarray, ax: int, step: int) -> np.ndarray:
        idx = [slice(1, -1)] * len(self.shape)
        idx[ax] = slice(2, None) if step > 0 else slice(None, -2)
        return u[tuple(idx)]

    def central_gradient(self, u: np.ndarray) -> np.ndarray:
        cols = [
            ((self._neighbor(u, ax, +1) - self._neighbor(u, ax, -1)) / (2.0 * self.h[ax])).ravel()
            for ax in range(self.problem.N)
        ]
        return np.column_stack(cols)

    def second_difference(self, u: np.ndarray, ax: int) -> np.ndarray:
        return (
            (self._neighbor(u, ax, +1) - 2.0 * self._interior(u) + self._neighbor(u, ax, -1))
            / self.h[ax] ** 2
        ).ravel()

    def upwind_drift(self, u: np.ndarray) -> np.ndarray:
        total = np.zeros(self.n_interior)
        for ax in range(self.problem.N):
            b = self.bdrift[:, ax]
            fwd = ((self._neighbor(u, ax, +1) - self._interior(u)) / self.h[ax]).ravel()
            bwd = ((self._interior(u) - self._neighbor(u, ax, -1)) / self.h[ax]).ravel()
            total += np.maximum(b, 0.0) * bwd + np.minimum(b, 0.0) * fwd
        return total

    def hamiltonian_values(self, grads: np.ndarray) -> np.ndarray:
        H = self.problem.hamiltonian
        if H is None:
            return np.zeros(self.n_interior)
        return np.array([H(x, g) for x, g in zip(self.points_int, grads)])

    def hamiltonian_slopes(self, grads: np.ndarray) -> np.ndarray:
        H = self.problem.hamiltonian
        if H is None:
            return np.zeros_like(grads)
        return np.array([hamiltonian_slope(H, x, g) for x, g in zip(self.points_int, grads)])

    def lf_field(self, lf) -> np.ndarray:
        """Normalize dissipation input to a per-node, per-axis array."""
        arr = np.asarray(lf, dtype=float)
        if arr.shape == (self.n_interior, self.problem.N):
            return arr
        return np.broadcast_to(
            np.atleast_1d(arr).reshape(1, -1), (self.n_interior, self.problem.N)
        )

    def local_dissipation(self, u: np.ndarray) -> np.ndarray:
        """Local Lax-Friedrichs coefficients: 1.2 x |dH/dxi| at the current
        central gradients, per node and axis."""
        return 1.2 * np.abs(self.hamiltonian_slopes(self.central_gradient(u)))

    def linear_residual(self, u: np.ndarray, f_int: np.ndarray) -> np.ndarray:
        """Residual of the gradient-term-free part only (warm-start system)."""
        val = self.problem.lam * self._interior(u).ravel()
        for ax in range(self.problem.N):
            val -= self.D[ax] * self.second_difference(u, ax)
        val += self.upwind_drift(u)
        return f_int - val

    def residual(self, u: np.ndarray, f_int: np.ndarray, lf) -> np.ndarray:
        """f - S(u) on the interior (Newton right-hand side)."""
        lf = self.lf_field(lf)
        val = self.problem.lam * self._interior(u).ravel()
        for ax in range(self.problem.N):
            val -= self.D[ax] * self.second_difference(u, ax)
        val += self.upwind_drift(u)
        grads = self.central_gradient(u)
        val += self.hamiltonian_values(grads)
        for ax in range(self.problem.N):
            val -= lf[:, ax] * (self.h[ax] / 2.0) * self.second_difference(u, ax)
        return f_int - val

    # -- linearized monotone system -----------------------------------------

    def assemble(self, slopes: np.ndarray, lf):
        """CSR matrix of the linearization; also reports monotone sign pattern."""
        N = self.problem.N
        lam = self.problem.lam
        lf = self.lf_field(lf)
        rows, cols, vals = [], [], []
        diag = np.full(self.n_interior, lam)
        max_offdiag = 0.0
        idx = np.arange(self.n_interior).reshape(self.int_shape)
        for ax in range(N):
            h = self.h[ax]
            Deff = self.D[ax] + lf[:, ax] * h / 2.0
            b = self.bdrift[:, ax]
            s = slopes[:, ax]
            diag += 2.0 * Deff / h**2 + np.abs(b) / h
            c_plus = -Deff / h**2 + np.minimum(b, 0.0) / h + s / (2.0 * h)
            c_minus = -Deff / h**2 - np.maximum(b, 0.0) / h - s / (2.0 * h)
            max_offdiag = max(max_offdiag, float(c_plus.max(initial=-np.inf)),
                              float(c_minus.max(initial=-np.inf)))
            take = [slice(None)] * N
            take[ax] = slice(None, -1)
            src = idx[tuple(take)].ravel()
            take[ax] = slice(1, None)
            dst = idx[tuple(take)].ravel()
            rows.extend(src)
            cols.extend(dst)
            vals.extend(c_plus[src])
            rows.extend(dst)
            cols.extend(src)
            vals.extend(c_minus[dst])
        rows.extend(range(self.n_interior))
        cols.extend(range(self.n_interior))
        vals.extend(diag)
        A = sp.csr_matrix(
            (np.asarray(vals), (np.asarray(rows), np.asarray(cols))),
            shape=(self.n_interior, self.n_interior),
        )
        monotone = max_offdiag <= 1e-12 and float(diag.min()) > 0.0
        return A, monotone


def discretize(problem, box: Box, h: float) -> DiscreteOperator:
    """Build the node-wise update rule; rejects non-diagonal 2-d diffusion."""
    return DiscreteOperator(problem, box, h)


def _boundary_values(disc: DiscreteOperator, boundary) -> np.ndarray:
    fn = boundary if callable(boundary) else (lambda x, v=float(boundary): v)
    u = np.zeros(disc.shape)
    if disc.problem.N == 1:
        u[0] = fn(disc.axes[0][:1])
        u[-1] = fn(disc.axes[0][-1:])
    else:
        n0, n1 = disc.shape
        for i in range(n0):
            for j in range(n1):
                if i in (0, n0 - 1) or j in (0, n1 - 1):
                    u[i, j] = fn(np.array([disc.axes[0][i], disc.axes[1][j]]))
    return u


def _field_on_interior(disc: DiscreteOperator, f) -> np.ndarray:
    if f is None:
        return np.array([disc.problem.f_at(x) for x in disc.points_int])
    if callable(f):
        return np.array([float(f(x)) for x in disc.points_int])
    arr = np.asarray(f, dtype=float)
    if arr.shape == disc.shape:
        sl = tuple(slice(1, -1) for _ in disc.shape)
        return arr[sl].ravel()
    if arr.size == disc.n_interior:
        return arr.ravel()
    raise ValueError(f"field array shape {arr.shape} matches neither grid nor interior")


def solve(problem, box: Box, h: float, boundary, config: SchemeConfig | None = None,
          f_values=None, boundary_mode: str | None = None):
    """Damped Newton / Howard iteration on the monotone scheme.

    boundary: callable x -> value or a constant; boundary_mode tags the
    data's provenance ("explicit function", "barrier-growth cap",
    "candidate-solution trace").  f_values optionally overrides the problem
    right-hand side (callable or grid array).  Returns
    (DiscreteField, SolveReport); raises MonotonicityError when a
    user-fixed lf is below the required slope bound.
    """
    config = config or SchemeConfig()
    disc = discretize(problem, box, h)
    t0 = time.perf_counter()

    f_int = _field_on_interior(disc, f_values)
    u = _boundary_values(disc, boundary)
    sl = tuple(slice(1, -1) for _ in disc.shape)
    u[sl] = (f_int / problem.lam).reshape(disc.int_shape)
    # warm start on the gradient-term-free linearization: brings the iterate
    # (and hence the gradient range seen by the lf tuning) to solution scale
    zero_slopes = np.zeros((disc.n_interior, problem.N))
    A0, _ = disc.assemble(zero_slopes, zero_slopes)
    u[sl] += spla.spsolve(A0, disc.linear_residual(u, f_int)).reshape(disc.int_shape)

    superlinear = problem.hamiltonian is not None
    if config.damping is not None:
        damping = config.damping
    elif not superlinear or (config.policy_iteration and isinstance(problem.hamiltonian, GameHamiltonian)):
        damping = 1.0
    else:
        damping = 0.5
    if not 0.0 < damping <= 1.0:
        raise ValueError(f"damping must lie in (0, 1], got {damping}")

    user_lf = config.lf_dissipation
    if user_lf is not None:
        user_lf = np.broadcast_to(np.atleast_1d(np.asarray(user_lf, dtype=float)),
                                  (problem.N,)).copy()
        if np.any(user_lf < 0):
            raise ValueError("lf_dissipation must be nonnegative")

    history = []
    monotone_all = True
    lf_report = np.zeros(problem.N)
    converged = False
    iterations = 0
    for iterations in range(1, config.max_iters + 1):
        grads = disc.central_gradient(u)
        slopes = disc.hamiltonian_slopes(grads)
        abs_slopes = np.abs(slopes)
        if user_lf is None:
            lf = 1.2 * abs_slopes  # local Lax-Friedrichs
        else:
            # user-fixed dissipation is a global per-axis scalar
            strict_need = abs_slopes.max(axis=0) if slopes.size else np.zeros(problem.N)
            for ax in range(problem.N):
                if user_lf[ax] + 1e-12 < strict_need[ax]:
                    node = int(abs_slopes[:, ax].argmax())
                    raise MonotonicityError(
                        f"lf_dissipation[{ax}] = {user_lf[ax]:g} breaks monotonicity at "
                        f"node x = {disc.points_int[node]}; required >= {strict_need[ax]:g}"
                    )
            lf = disc.lf_field(user_lf)
        lf_report = lf.max(axis=0) if lf.size else np.zeros(problem.N)
        r = disc.residual(u, f_int, lf)
        resnorm = float(np.abs(r).max()) if r.size else 0.0
        history.append(resnorm)
        if resnorm <= config.tol_residual:
            converged = True
            break
        A, monotone = disc.assemble(slopes, lf)
        monotone_all = monotone_all and monotone
        delta = spla.spsolve(A, r)
        u[sl] += damping * delta.reshape(disc.int_shape)

    field_out = DiscreteField(
        axes=disc.axes,
        values=u,
        h=disc.h,
        boundary_mode=boundary_mode
        or ("explicit function" if callable(boundary) else "explicit constant"),
    )
    report = SolveReport(
        iterations=iterations,
        final_residual_norm=history[-1] if history else 0.0,
        monotonicity_certificate=monotone_all,
        wall_time=time.perf_counter() - t0,
        converged=converged,
        lf_used=tuple(float(v) for v in lf_report),
        damping=damping,
        residual_history=tuple(history),
    )
    return field_out, report


# ---------------------------------------------------------------------------
# demonstrations


@dataclass
class ComparisonReport:
    ordered: bool
    min_gap: float
    witness: np.ndarray | None
    report_low: SolveReport
    report_high: SolveReport

    def to_json_dict(self) -> dict:
        return {
            "ordered": bool(self.ordered),
            "min_gap": float(self.min_gap),
            "witness": None if self.witness is None else [float(v) for v in np.atleast_1d(self.witness)],
            "report_low": self.report_low.to_json_dict(),
            "report_high": self.report_high.to_json_dict(),
        }


def comparison_check(problem, box: Box, h: float, f_low, f_high,
                     boundary_low, boundary_high, config: SchemeConfig | None = None,
                     order_tol: float = 1e-8) -> ComparisonReport:
    """Solve the ordered data pair and assert nodewise solution ordering.

    Preconditions f_low <= f_high and boundary_low <= boundary_high are
    validated nodewise; a violation of the output ordering indicates a
    monotonicity breach and is reported with the witness node.
    """
    disc = discretize(problem, box, h)
    fl = _field_on_interior(disc, f_low)
    fh = _field_on_interior(disc, f_high)
    if np.any(fl > fh + 1e-12):
        raise ValueError("f_low must be <= f_high nodewise")
    bl = _boundary_values(disc, boundary_low)
    bh = _boundary_values(disc, boundary_high)
    if np.any(bl > bh + 1e-12):
        raise ValueError("boundary_low must be <= boundary_high nodewise")
    sol_low, rep_low = solve(problem, box, h, boundary_low, config, f_values=f_low)
    sol_high, rep_high = solve(problem, box, h, boundary_high, config, f_values=f_high)
    gap = sol_high.values - sol_low.values
    min_gap = float(gap.min())
    ordered = min_gap >= -order_tol
    witness = None
    if not ordered:
        flat = int(np.argmin(gap))
        witness = sol_low.points()[flat]
    return ComparisonReport(ordered, min_gap, witness, rep_low, rep_high)


@dataclass
class PinningReport:
    gamma_points: np.ndarray
    target: float
    deviations: tuple        # per refinement level, max |u - f/lam| on Gamma nodes
    h_levels: tuple
    decreasing: bool
    hypothesis_checks: dict

    def to_json_dict(self) -> dict:
        return {
            "gamma_points": [[float(v) for v in np.atleast_1d(p)] for p in self.gamma_points],
            "target": float(self.target),
            "deviations": [float(d) for d in self.deviations],
            "h_levels": [float(h) for h in self.h_levels],
            "decreasing": bool(self.decreasing),
            "hypothesis_checks": {k: bool(v) for k, v in self.hypothesis_checks.items()},
        }


def gamma_pinning_check(problem, box: Box, h, boundary=0.0,
                        config: SchemeConfig | None = None) -> PinningReport:
    """Refinement study of |u - f/lam| at the Hamiltonian's zero set.

    h may be the finest spacing (levels 4h, 2h, h are run) or an explicit
    sequence.  The sign-split hypotheses (vanishing extremal data on Gamma
    and the local degeneracy bound) are checked first.
    """
    ham = problem.hamiltonian
    if ham is None or not hasattr(ham, "a"):
        raise ValueError("gamma pinning requires a signed scalar Hamiltonian")
    levels = tuple(float(v) for v in (h if np.iterable(h) else (4.0 * h, 2.0 * h, h)))

    probe = np.linspace(box.center[0] - box.half_width[0],
                        box.center[0] + box.half_width[0], 401).reshape(-1, 1)
    gamma = compute_gamma(ham, probe)
    checks = {}
    if len(gamma.gamma_points):
        a13 = check_A1_A3(problem.extremal, gamma, window_radius=box.half_width[0])
        a4 = check_A4(ham, gamma.gamma_points, r=0.5 * box.half_width[0],
                      C1_candidate=max(1.0, box.half_width[0]))
        checks = {"A1_A3": a13.passed, "A4": a4.passed}
        if not all(checks.values()):
            raise ValueError(f"sign-split hypotheses failed on the box: {checks}")
    devs = []
    for lev in levels:
        sol, _ = solve(problem, box, lev, boundary, config)
        if not len(gamma.gamma_points):
            devs.append(0.0)
            continue
        worst = 0.0
        for x0 in gamma.gamma_points:
            i = int(np.argmin(np.abs(sol.axes[0] - float(np.atleast_1d(x0)[0]))))
            worst = max(worst, abs(float(sol.values[i]) - problem.f_at(x0) / problem.lam))
        devs.append(worst)
    target = problem.f_at(gamma.gamma_points[0]) / problem.lam if len(gamma.gamma_points) else 0.0
    decreasing = all(b <= a + 1e-12 for a, b in zip(devs, devs[1:]))
    return PinningReport(
        gamma_points=gamma.gamma_points,
        target=float(target),
        deviations=tuple(devs),
        h_levels=levels,
        decreasing=decreasing,
        hypothesis_checks=checks,
    )


@dataclass
class NonuniquenessBranch:
    label: str
    sup_distance_to_trace: float
    max_abs_residual: float
    growth: growth_mod.GrowthReport
    in_uniqueness_class: bool
    solution: DiscreteField


@dataclass
class NonuniquenessReport:
    example_id: str
    branches: tuple
    sup_distance_between: float

    def to_json_dict(self) -> dict:
        return {
            "example_id": self.example_id,
            "sup_distance_between": float(self.sup_distance_between),
            "branches": [
                {
                    "label": b.label,
                    "sup_distance_to_trace": float(b.sup_distance_to_trace),
                    "max_abs_residual": float(b.max_abs_residual),
                    "in_uniqueness_class": bool(b.in_uniqueness_class),
                    "in_S": bool(b.growth.in_S),
                    "in_SG": bool(b.growth.in_SG),
                    "liminf_plus": float(b.growth.liminf_plus),
                    "liminf_minus": float(b.growth.liminf_minus),
                }
                for b in self.branches
            ],
        }


def nonuniqueness_demo(example_id: str, box: Box, h: float, lam: float = 1.0,
                       t: float = -1.0, config: SchemeConfig | None = None) -> NonuniquenessReport:
    """Solve with the boundary traces of both closed-form solutions.

    Each branch converges to its trace's solution; growth classification of
    the closed forms shows exactly one branch lies in the uniqueness class
    (vanishing order-q' relative growth).
    """
    from . import problems as prob_mod

    if example_id == "eq12":
        problem = prob_mod.eq12(lam)
        cands = prob_mod.eq12_solutions(lam)
    elif example_id == "hje3":
        problem = prob_mod.hje3(lam, t)
        cands = prob_mod.hje3_solutions(lam, t)
    elif example_id == "ex2":
        problem = prob_mod.ex2()
        cands = prob_mod.ex2_solutions()
    else:
        raise ValueError(f"unknown non-uniqueness example {example_id!r}")

    branches = []
    solutions = []
    cert_grid = np.linspace(-10.0, 10.0, 801)
    for cand in cands:
        sol, _ = solve(problem, box, h, lambda x, c=cand: c.val(x), config,
                       boundary_mode="candidate-solution trace")
        exact = np.array([cand.val(x) for x in sol.points()]).reshape(sol.values.shape)
        rep = verify_solution(problem, cand, cert_grid)
        grep = growth_mod.classify_growth(lambda x, c=cand: c.val(x), problem.q_prime,
                                          dim=problem.N)
        branches.append(NonuniquenessBranch(
            label=cand.label,
            sup_distance_to_trace=float(np.abs(sol.values - exact).max()),
            max_abs_residual=rep.max_abs_residual,
            growth=grep,
            in_uniqueness_class=grep.in_S,
            solution=sol,
        ))
        solutions.append(sol.values)
    return NonuniquenessReport(
        example_id=example_id,
        branches=tuple(branches),
        sup_distance_between=float(np.abs(solutions[0] - solutions[1]).max()),
    )


def manufactured_rhs(problem, u_star: SmoothCandidate, x) -> float:
    """Right-hand side making u_star an exact solution:
    f := lam u* + F(x, Du*, D^2u*) + H(x, Du*)."""
    x = as_point(x, problem.N)
    g = u_star.grad(x)
    return (
        problem.lam * u_star.val(x)
        + problem.operator(x, g, u_star.hess(x))
        + problem.Hval(x, g)
    )
