"""Hamiltonian forms and sampled hypothesis checkers.

Four gradient-term shapes are supported: the convex power form
<A(x) xi, xi>^(q/2), the scalar signed form a(x)|xi|^q (whose zero set
Gamma drives the sign-split comparison route), a pointwise minimum of
convex forms, and the inf-sup game form min_beta max_alpha of
|sigma^T xi|^2 - |tau^T xi|^2 over finite index sets.

The check_* functions sample a stated inequality and report the worst
violation with a witness; violations are report content, not exceptions.
A passing report means "consistent with the hypothesis on the samples",
never a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fields import as_point


class HamiltonianDomainError(ValueError):
    """Raised when <A(x) xi, xi> < 0 meets a non-integer power q/2."""


def _coeff(value, x):
    return value(x) if callable(value) else value


@dataclass(frozen=True)
class PowerHamiltonian:
    """H(x, xi) = <A(x) xi, xi>^(q/2) with symmetric A and q > 1."""

    A: object  # (N,N) array or callable x -> (N,N) array
    q: float

    def __call__(self, x, xi) -> float:
        xi = as_point(xi)
        A = np.asarray(_coeff(self.A, as_point(x)), dtype=float)
        s = float(xi @ A @ xi)
        half_q = 0.5 * self.q
        if s < 0 and abs(half_q - round(half_q)) > 1e-12:
            raise HamiltonianDomainError(
                f"<A(x)xi, xi> = {s} < 0 at x = {as_point(x)} with non-integer "
                f"q/2 = {half_q}; A(x) is not positive semidefinite there"
            )
        return float(np.sign(s) * abs(s) ** half_q) if s < 0 else s**half_q

    def slope(self, x, xi) -> np.ndarray:
        """d/dxi H = q <A xi, xi>^(q/2 - 1) A xi (0 at xi = 0 for q > 1)."""
        xi = as_point(xi)
        A = np.asarray(_coeff(self.A, as_point(x)), dtype=float)
        Axi = A @ xi
        s = float(xi @ A @ xi)
        if s <= 0:
            return np.zeros_like(xi) if self.q < 2 or s == 0 else self.q * s ** (0.5 * self.q - 1.0) * Axi
        return self.q * s ** (0.5 * self.q - 1.0) * Axi


@dataclass(frozen=True)
class SignedScalarHamiltonian:
    """H(x, xi) = a(x) |xi|^q; sign in xi follows the sign of a(x)."""

    a: object  # scalar or callable x -> scalar
    q: float

    def __call__(self, x, xi) -> float:
        xi = as_point(xi)
        return float(_coeff(self.a, as_point(x))) * float(np.linalg.norm(xi)) ** self.q

    def slope(self, x, xi) -> np.ndarray:
        xi = as_point(xi)
        n = float(np.linalg.norm(xi))
        if n == 0.0:
            return np.zeros_like(xi)
        return float(_coeff(self.a, as_point(x))) * self.q * n ** (self.q - 2.0) * xi


@dataclass(frozen=True)
class MinConvexHamiltonian:
    """H = min_k H_k over convex components sharing the structural q.

    Ties break to the lowest component index so witnesses are deterministic.
    """

    components: tuple
    q: float

    def value_with_witness(self, x, xi):
        best_val, best_k = None, None
        for k, Hk in enumerate(self.components):
            v = float(Hk(x, xi))
            if best_val is None or v < best_val:
                best_val, best_k = v, k
        return best_val, best_k

    def __call__(self, x, xi) -> float:
        return self.value_with_witness(x, xi)[0]

    def slope(self, x, xi) -> np.ndarray:
        _, k = self.value_with_witness(x, xi)
        return hamiltonian_slope(self.components[k], x, xi)


@dataclass(frozen=True)
class GameHamiltonian:
    """Inf-sup game form over finite index sets.

    H(x, xi) = min over beta_set of max over alpha_set of
    |sigma(x,a,b)^T xi|^2 - |tau(x,a,b)^T xi|^2.  Only S = sigma sigma^T and
    T = tau tau^T enter; q = 2 structurally.  min/max ties break to the
    lowest index.
    """

    alpha_set: tuple
    beta_set: tuple
    sigma: object  # callable (x, alpha, beta) -> (N, n) array
    tau: object
    q: float = field(default=2.0, init=False)

    def __post_init__(self):
        if not self.alpha_set or not self.beta_set:
            raise ValueError("index sets must be nonempty")

    def term(self, x, xi, alpha, beta) -> float:
        x, xi = as_point(x), as_point(xi)
        s = np.asarray(self.sigma(x, alpha, beta), dtype=float)
        t = np.asarray(self.tau(x, alpha, beta), dtype=float)
        return float(np.dot(s.T @ xi, s.T @ xi) - np.dot(t.T @ xi, t.T @ xi))

    def S(self, x, alpha, beta) -> np.ndarray:
        s = np.atleast_2d(np.asarray(self.sigma(as_point(x), alpha, beta), dtype=float))
        return s @ s.T

    def T(self, x, alpha, beta) -> np.ndarray:
        t = np.atleast_2d(np.asarray(self.tau(as_point(x), alpha, beta), dtype=float))
        return t @ t.T

    def value_with_witness(self, x, xi):
        best_min, wit = None, (None, None)
        for ib, beta in enumerate(self.beta_set):
            best_max, ia_best = None, None
            for ia, alpha in enumerate(self.alpha_set):
                v = self.term(x, xi, alpha, beta)
                if best_max is None or v > best_max:
                    best_max, ia_best = v, ia
            if best_min is None or best_max < best_min:
                best_min, wit = best_max, (ia_best, ib)
        return best_min, wit

    def __call__(self, x, xi) -> float:
        return self.value_with_witness(x, xi)[0]

    def slope(self, x, xi) -> np.ndarray:
        xi = as_point(xi)
        _, (ia, ib) = self.value_with_witness(x, xi)
        alpha, beta = self.alpha_set[ia], self.beta_set[ib]
        return 2.0 * (self.S(x, alpha, beta) - self.T(x, alpha, beta)) @ xi


def hamiltonian_slope(H, x, xi, fd_step: float = 1e-6) -> np.ndarray:
    """d/dxi H(x, xi), analytic for the built-in forms, central FD otherwise."""
    if hasattr(H, "slope"):
        return H.slope(x, xi)
    xi = as_point(xi)
    out = np.empty_like(xi)
    step = fd_step * (1.0 + float(np.linalg.norm(xi)))
    for i in range(xi.size):
        e = np.zeros_like(xi)
        e[i] = step
        out[i] = (float(H(x, xi + e)) - float(H(x, xi - e))) / (2.0 * step)
    return out


@dataclass(frozen=True)
class CheckReport:
    name: str
    passed: bool
    worst: float
    witness: object = None
    notes: str = ""
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ModulusReport:
    """Empirical modulus table: per-|x-y|-bin suprema of a normalized gap."""

    name: str
    bin_edges: tuple[float, ...]
    values: tuple[float, ...]  # nan for empty bins
    passed: bool
    notes: str = ""
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class GammaPartition:
    """Sampled split of a grid by the sign of the signed coefficient a."""

    gamma_points: np.ndarray
    omega_plus: np.ndarray
    omega_minus: np.ndarray
    tol: float

    def covers(self, n_points: int) -> bool:
        return len(self.gamma_points) + len(self.omega_plus) + len(self.omega_minus) == n_points


def check_H1_convexity(H, x_samples, xi_pairs, t_samples, tol: float = 1e-9) -> CheckReport:
    """Sample H(x, t xi1 + (1-t) xi2) <= t H(x,xi1) + (1-t) H(x,xi2) + tol."""
    worst, witness = -np.inf, None
    for x in x_samples:
        for xi1, xi2 in xi_pairs:
            xi1, xi2 = as_point(xi1), as_point(xi2)
            v1, v2 = float(H(x, xi1)), float(H(x, xi2))
            for t in t_samples:
                if not 0.0 < t < 1.0:
                    raise ValueError(f"t samples must lie in (0,1), got {t}")
                gap = float(H(x, t * xi1 + (1.0 - t) * xi2)) - (t * v1 + (1.0 - t) * v2)
                if gap > worst:
                    worst, witness = gap, (np.asarray(x), xi1, xi2, t)
    return CheckReport("H1 convexity", worst <= tol, worst, witness)


def check_H2_bounds(H, delta, C0: float, samples, tol: float = 1e-9) -> CheckReport:
    """Sample delta(x)|xi|^q <= H(x,xi) <= C0 |xi|^q; report the worst slack."""
    q = H.q
    worst, witness = np.inf, None
    for x, xi in samples:
        xi = as_point(xi)
        d = float(_coeff(delta, as_point(x)))
        if not d > 0:
            raise ValueError(f"delta must be positive on samples, got {d} at x={x}")
        nq = float(np.linalg.norm(xi)) ** q
        v = float(H(x, xi))
        lower_slack = v - d * nq
        upper_slack = C0 * nq - v
        for slack, side in ((lower_slack, "lower"), (upper_slack, "upper")):
            if slack < worst:
                worst, witness = slack, (np.asarray(x), xi, side)
    return CheckReport("H2 bounds", worst >= -tol, worst, witness)


def check_H3_homogeneity(H, samples, thetas, tol: float = 1e-12) -> CheckReport:
    """Sample H(x, theta xi) = theta^q H(x, xi); scale-aware deviation."""
    q = H.q
    worst, witness = 0.0, None
    for x, xi in samples:
        xi = as_point(xi)
        base = float(H(x, xi))
        for theta in thetas:
            if theta < 0:
                raise ValueError(f"theta must be >= 0, got {theta}")
            target = theta**q * base
            dev = abs(float(H(x, theta * xi)) - target) / max(1.0, abs(target))
            if dev > worst:
                worst, witness = dev, (np.asarray(x), xi, theta)
    return CheckReport("H3 homogeneity", worst <= tol, worst, witness)


def check_H4_modulus(H, R: float, pair_samples, bins: int = 8, tol: float = 1e-9) -> ModulusReport:
    """Tabulate sup |H(x,xi)-H(y,xi)| / |xi|^q against |x-y| bins inside B_R.

    Passes when the table is nonincreasing toward small separations (within
    tol) and the smallest-bin value has decayed to at most half the
    largest-bin value; an estimate of continuity, not a modulus certificate.
    """
    q = H.q
    dists, ratios = [], []
    for x, y, xi in pair_samples:
        x, y, xi = as_point(x), as_point(y), as_point(xi)
        if np.linalg.norm(x) > R + 1e-12 or np.linalg.norm(y) > R + 1e-12:
            raise ValueError("pair samples must lie in B_R")
        n = float(np.linalg.norm(xi))
        if n == 0.0:
            raise ValueError("xi samples must be nonzero")
        dists.append(float(np.linalg.norm(x - y)))
        ratios.append(abs(float(H(x, xi)) - float(H(y, xi))) / n**q)
    dists, ratios = np.asarray(dists), np.asarray(ratios)
    top = max(dists.max(), 1e-300)
    edges = np.linspace(0.0, top, bins + 1)
    values = np.full(bins, np.nan)
    for i in range(bins):
        mask = (dists > edges[i]) & (dists <= edges[i + 1]) if i else (dists <= edges[1])
        if mask.any():
            values[i] = ratios[mask].max()
    filled = [v for v in values if not np.isnan(v)]
    monotone = all(a <= b + tol for a, b in zip(filled, filled[1:]))
    decays = (not filled) or filled[0] <= 0.5 * filled[-1] + tol
    return ModulusReport(
        "H4 modulus",
        tuple(edges),
        tuple(values),
        monotone and decays,
        notes="empirical binned modulus; consistent-with check only",
    )


def check_H2prime(game: GameHamiltonian, delta, C0: float, x_samples, tol: float = 1e-9) -> CheckReport:
    """Game-form positivity/boundedness: per x and beta an alpha with
    S - T >= delta(x) I, and per x a beta with sup_alpha |S| <= C0.

    Witnesses are the lowest passing indices.
    """
    alpha_witnesses, beta_witnesses, failures = {}, {}, []
    worst = np.inf
    for ix, x in enumerate(x_samples):
        d = float(_coeff(delta, as_point(x)))
        for ib, beta in enumerate(game.beta_set):
            found = None
            margin_best = -np.inf
            for ia, alpha in enumerate(game.alpha_set):
                gap = game.S(x, alpha, beta) - game.T(x, alpha, beta)
                margin = float(np.linalg.eigvalsh(0.5 * (gap + gap.T)).min()) - d
                margin_best = max(margin_best, margin)
                if margin >= -tol:
                    found = ia
                    break
            worst = min(worst, margin_best)
            if found is None:
                failures.append(("(ii)", ix, ib, margin_best))
            else:
                alpha_witnesses[(ix, ib)] = found
        found_b = None
        bound_best = np.inf
        for ib, beta in enumerate(game.beta_set):
            sup_norm = max(
                float(np.abs(np.linalg.eigvalsh(game.S(x, alpha, beta))).max())
                for alpha in game.alpha_set
            )
            bound_best = min(bound_best, sup_norm)
            if sup_norm <= C0 + tol:
                found_b = ib
                break
        if found_b is None:
            failures.append(("(iii)", ix, None, bound_best))
        else:
            beta_witnesses[ix] = found_b
    return CheckReport(
        "H2' game positivity",
        not failures,
        worst,
        witness=failures[0] if failures else None,
        extra={"alpha_witnesses": alpha_witnesses, "beta_witnesses": beta_witnesses},
    )


def compute_gamma(signed: SignedScalarHamiltonian, grid, tol: float | None = None) -> GammaPartition:
    """Partition grid points by the sign of a(x); |a| <= tol goes to Gamma."""
    pts = np.atleast_2d(np.asarray(grid, dtype=float))
    if pts.shape[0] == 1 and pts.shape[1] > 1:
        pts = pts.T
    if pts.size == 0:
        raise ValueError("grid must be nonempty")
    avals = np.array([float(_coeff(signed.a, p)) for p in pts])
    if tol is None:
        tol = 1e-10 * (1.0 + float(np.abs(avals).max()))
    gamma = np.abs(avals) <= tol
    return GammaPartition(
        gamma_points=pts[gamma],
        omega_plus=pts[(~gamma) & (avals > 0)],
        omega_minus=pts[(~gamma) & (avals < 0)],
        tol=tol,
    )


def check_A4(H, gamma_points, r: float, C1_candidate: float,
             n_radii: int = 12, min_radius: float = 1e-3, tol: float = 1e-9) -> CheckReport:
    """Sample |H(x, xi)| <= C1 |x - x0|^q |xi|^q for x in B_r(x0), x0 in Gamma.

    Reports the smallest feasible C1 found on the samples; fails when it
    exceeds the candidate (e.g. when |H| decays slower than |x-x0|^q).
    """
    q = H.q
    pts = np.atleast_2d(np.asarray(gamma_points, dtype=float))
    if pts.shape[0] == 1 and pts.shape[1] > 1:
        pts = pts.T
    from .growth import shell_directions

    dirs = shell_directions(pts.shape[1], 16)
    radii = np.geomspace(min_radius, r, n_radii)
    xi_samples = [d * m for d in dirs for m in (1.0, 3.0)]
    worst_C1, witness = 0.0, None
    for x0 in pts:
        for rad in radii:
            for d in dirs:
                x = x0 + rad * d
                for xi in xi_samples:
                    denom = rad**q * float(np.linalg.norm(xi)) ** q
                    ratio = abs(float(H(x, xi))) / denom
                    if ratio > worst_C1:
                        worst_C1, witness = ratio, (x, np.asarray(xi))
    return CheckReport(
        "A4 degeneracy on Gamma",
        worst_C1 <= C1_candidate * (1.0 + 1e-9) + tol,
        worst_C1,
        witness,
        notes=f"smallest feasible C1 on samples: {worst_C1:.6g}",
        extra={"C1_required": worst_C1},
    )


def estimate_delta(H, x_samples) -> float:
    """Window estimate of the lower-bound coefficient delta for (H2).

    For the power form: the smallest eigenvalue of A(x) over the samples.
    For the signed form: the minimum of a(x).
    """
    if isinstance(H, PowerHamiltonian):
        return min(
            float(np.linalg.eigvalsh(np.asarray(_coeff(H.A, as_point(x)), dtype=float)).min())
            for x in x_samples
        )
    if isinstance(H, SignedScalarHamiltonian):
        return min(float(_coeff(H.a, as_point(x))) for x in x_samples)
    raise ValueError(f"no delta estimator for {type(H).__name__}")


def estimate_C0(H, x_samples) -> float:
    """Window estimate of the upper-bound coefficient C0 for (H2)."""
    if isinstance(H, PowerHamiltonian):
        return max(
            float(np.linalg.eigvalsh(np.asarray(_coeff(H.A, as_point(x)), dtype=float)).max())
            for x in x_samples
        )
    if isinstance(H, SignedScalarHamiltonian):
        return max(abs(float(_coeff(H.a, as_point(x)))) for x in x_samples)
    if isinstance(H, MinConvexHamiltonian):
        return max(estimate_C0(Hk, x_samples) for Hk in H.components)
    if isinstance(H, GameHamiltonian):
        return max(
            float(np.abs(np.linalg.eigvalsh(H.S(x, a, b))).max())
            for x in x_samples
            for a in H.alpha_set
            for b in H.beta_set
        )
    raise ValueError(f"no C0 estimator for {type(H).__name__}")
