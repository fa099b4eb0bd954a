"""Scenario runner: viscompare <subcommand> <scenario.json> [flags].

Subcommands: check-hypotheses, classify-growth, barrier, verify-classical,
solve, compare, gamma-pin, nonuniqueness, system-solve.  Scenarios are JSON
with coefficient fields as polynomial tables or named built-ins; outputs are
report.json (sorted keys, canonical floats, byte-identical across runs) and
field_*.csv / residual_*.csv.  Every nonzero exit prints exactly one failed
predicate or solver diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import barrier as barrier_mod
from . import growth as growth_mod
from . import problems as prob_mod
from . import solver as solver_mod
from . import systems as sys_mod
from .fields import parse_matrix_field, parse_scalar_field, parse_vector_field
from .hamiltonians import (
    GameHamiltonian,
    MinConvexHamiltonian,
    PowerHamiltonian,
    SignedScalarHamiltonian,
    check_A4,
    check_H1_convexity,
    check_H2_bounds,
    check_H2prime,
    check_H3_homogeneity,
    check_H4_modulus,
    compute_gamma,
    estimate_C0,
    estimate_delta,
)
from .operators import (
    check_A1_A3,
    check_degenerate_ellipticity,
    check_F1_standard_form,
    check_F3_F4_growth,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PREDICATE = 3
EXIT_SOLVER = 4


class ScenarioError(ValueError):
    pass


class PredicateFailure(Exception):
    def __init__(self, predicate: str, report: dict | None = None):
        self.predicate = predicate
        self.report = report or {}
        super().__init__(predicate)


# ---------------------------------------------------------------------------
# scenario parsing


def load_scenario(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ScenarioError(f"scenario file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario JSON parse error at line {exc.lineno}: {exc.msg}") from exc


def _parse_field(parser, spec, dim, what):
    try:
        return parser(spec, dim)
    except ValueError as exc:
        raise ScenarioError(f"field {what!r}: {exc}") from exc


def build_problem(spec: dict) -> prob_mod.ProblemSpec:
    if not isinstance(spec, dict):
        raise ScenarioError("problem spec must be an object")
    if "builtin" in spec:
        name = spec["builtin"]
        lam = float(spec.get("lambda", 1.0))
        if name == "eq12":
            return prob_mod.eq12(lam)
        if name == "eq13":
            N = int(spec.get("N", 1))
            f = _parse_field(parse_scalar_field, spec["f"], N, "f") if "f" in spec else None
            return prob_mod.eq13(lam, float(spec.get("q", 2.0)), f, N)
        if name == "hje3":
            return prob_mod.hje3(lam, float(spec.get("t", -1.0)))
        if name == "ex2":
            return prob_mod.ex2()
        if name == "signswitch":
            return prob_mod.signswitch(lam)
        if name == "minconvex":
            return prob_mod.minconvex_problem(lam)
        if name == "game":
            return prob_mod.game_problem(lam)
        if name == "example1":
            N = int(spec.get("N", 1))
            return prob_mod.example1(
                sigma=_parse_field(parse_matrix_field, spec["sigma"], N, "sigma"),
                b=_parse_field(parse_vector_field, spec["b"], N, "b"),
                A=_parse_field(parse_matrix_field, spec["A"], N, "A"),
                q=float(spec.get("q", 2.0)),
                f=_parse_field(parse_scalar_field, spec.get("f", 0.0), N, "f"),
                N=N, lam=lam,
            )
        raise ScenarioError(f"unknown builtin problem {name!r}")
    try:
        N = int(spec["N"])
        lam = float(spec["lambda"])
        sigma = _parse_field(parse_matrix_field, spec["sigma"], N, "sigma")
        b = _parse_field(parse_vector_field, spec["b"], N, "b")
        f = _parse_field(parse_scalar_field, spec.get("f", 0.0), N, "f")
        q = float(spec.get("q", 2.0))
    except KeyError as exc:
        raise ScenarioError(f"problem spec missing field {exc.args[0]!r}") from exc
    ham_spec = spec.get("hamiltonian")
    ham = None
    if ham_spec is not None:
        kind = ham_spec.get("type")
        if kind == "power":
            ham = PowerHamiltonian(A=_parse_field(parse_matrix_field, ham_spec["A"], N, "A"), q=q)
        elif kind == "signed":
            ham = SignedScalarHamiltonian(a=_parse_field(parse_scalar_field, ham_spec["a"], N, "a"), q=q)
        else:
            raise ScenarioError(f"unknown hamiltonian type {kind!r} in custom problem")
    from .operators import DriftDiffusionOperator

    op = DriftDiffusionOperator(sigma=sigma, b=b, N=N)
    return prob_mod.ProblemSpec(N=N, lam=lam, operator=op, hamiltonian=ham, q=q,
                                f=f, C0=spec.get("C0"), name=spec.get("id", "custom"))


def build_system(spec: dict) -> sys_mod.MonotoneSystem:
    if "builtin" in spec:
        if spec["builtin"] != "system2":
            raise ScenarioError(f"unknown builtin system {spec['builtin']!r}")
        return sys_mod.system2(
            coupling=spec.get("coupling", "none"),
            c=float(spec.get("c", 0.5)),
            lam=float(spec.get("lambda", 1.0)),
        )
    raise ScenarioError("custom system scenarios are not supported; use builtin system2")


def parse_grid(scn: dict, h_flag: float | None):
    grid = scn.get("grid")
    if grid is None:
        raise ScenarioError("scenario has no grid spec")
    box = solver_mod.Box(center=grid["box"]["center"], half_width=grid["box"]["half_width"])
    h = float(h_flag if h_flag is not None else grid["h"])
    return box, h


def parse_boundary(spec, problem, scn):
    if spec is None:
        return 0.0
    if isinstance(spec, (int, float)):
        return float(spec)
    if "value" in spec:
        return float(spec["value"])
    if "field" in spec:
        return parse_scalar_field(spec["field"], problem.N)
    if "trace" in spec:
        name = scn["problem"].get("builtin")
        lam = problem.lam
        if name == "eq12":
            cands = prob_mod.eq12_solutions(lam)
        elif name == "hje3":
            cands = prob_mod.hje3_solutions(lam, float(scn["problem"].get("t", -1.0)))
        elif name == "ex2":
            cands = prob_mod.ex2_solutions()
        else:
            raise ScenarioError(f"no closed-form traces for builtin {name!r}")
        by_label = {c.label: c for c in cands}
        try:
            cand = by_label[spec["trace"]]
        except KeyError:
            raise ScenarioError(f"unknown trace {spec['trace']!r}; have {sorted(by_label)}")
        return lambda x, c=cand: c.val(x)
    raise ScenarioError(f"cannot parse boundary spec {spec!r}")


# ---------------------------------------------------------------------------
# reporting


def _sanitize(obj):
    if hasattr(obj, "to_json_dict"):
        return _sanitize(obj.to_json_dict())
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):  # before int: bool is an int subclass
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else repr(v)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_sanitize(v) for v in obj.tolist()]
    return obj


def write_report(outdir: Path, report: dict) -> Path:
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / "report.json"
    with open(path, "w") as fh:
        json.dump(_sanitize(report), fh, sort_keys=True, indent=2)
        fh.write("\n")
    return path


def write_field_csv(outdir: Path, name: str, points: np.ndarray, values: np.ndarray):
    outdir.mkdir(parents=True, exist_ok=True)
    points = np.atleast_2d(points)
    values = np.asarray(values).ravel()
    dim = points.shape[1]
    with open(outdir / name, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{i}" for i in range(dim)] + ["value"])
        for p, v in zip(points, values):
            writer.writerow([repr(float(c)) for c in p] + [repr(float(v))])


# ---------------------------------------------------------------------------
# hypothesis dispatch


def _h_samples(problem):
    xs = [np.full(problem.N, v) for v in (-2.0, -0.5, 0.0, 0.5, 2.0)]
    xis = [np.full(problem.N, v) for v in (1.0, -1.0, 0.3)]
    if problem.N == 2:
        xis.append(np.array([1.0, -2.0]))
    xi_pairs = [(xis[0], xis[1]), (xis[0], 2.0 * xis[2]), (xis[1], -3.0 * xis[2])]
    samples = [(x, xi) for x in xs for xi in xis]
    pair_samples = [(x, y, xi) for x in xs for y in xs for xi in xis if not np.array_equal(x, y)]
    return xs, xi_pairs, samples, pair_samples


def check_hypotheses(problem_or_system, window_radii=None) -> dict:
    """Run the applicable checkers strictest-first and name the theorem."""
    radii = tuple(float(R) for R in window_radii) if window_radii else None
    if isinstance(problem_or_system, sys_mod.MonotoneSystem):
        system = problem_or_system
        rng = np.random.default_rng(7)
        r_s = [(rng.uniform(-2, 2, system.m), rng.uniform(-2, 2, system.m)) for _ in range(400)]
        rep_m = sys_mod.check_M(system, r_s)
        if not rep_m.passed:
            raise PredicateFailure("(M) monotone coupling", {"worst": rep_m.worst})
        f2_samples = [(np.zeros(system.N), rng.uniform(-1, 1, system.m),
                       rng.uniform(-1, 1, system.N), np.eye(system.N)) for _ in range(20)]
        rep_f2 = sys_mod.check_F2prime(system, f2_samples, thetas=(0.0, 0.5, 2.0))
        if not rep_f2.passed:
            raise PredicateFailure("(F2') homogeneity", {"worst": rep_f2.worst})
        growth_ok = all(
            check_F3_F4_growth(system.extremal(k), "strict", radii=radii, dim=system.N).passed
            for k in range(system.m)
        )
        if not growth_ok:
            raise PredicateFailure("component extremal data not in S_1 (strict growth)")
        return {"verdict": "Theorem 5.2 applies",
                "checks": {"M": True, "F2prime": True, "component_growth_strict": True}}

    problem = problem_or_system
    checks: dict = {}
    ham = problem.hamiltonian
    xs, xi_pairs, samples, pair_samples = _h_samples(problem)
    f_rep = growth_mod.classify_growth(problem.f_at, problem.q_prime, radii=radii,
                                       tol=0.02, dim=problem.N)
    growth_rep = check_F3_F4_growth(problem.extremal, "strict", radii=radii, dim=problem.N)
    growth_rel = check_F3_F4_growth(problem.extremal, "relaxed", radii=radii, dim=problem.N)
    checks["degenerate_ellipticity"] = check_degenerate_ellipticity(problem.operator).passed
    if not checks["degenerate_ellipticity"]:
        raise PredicateFailure("degenerate ellipticity")
    checks["F1_consistent"] = check_F1_standard_form(problem.operator, R=2.0).passed
    checks["f_in_S_qprime_plus"] = f_rep.in_S_plus
    checks["f_in_SG_qprime_plus"] = f_rep.in_SG_plus
    checks["coeffs_strict_S1"] = growth_rep.passed
    checks["coeffs_relaxed_SG1"] = growth_rel.passed

    if ham is None:
        if growth_rep.passed and f_rep.in_S_plus:
            return {"verdict": "Proposition 3.3 applies", "checks": checks}
        if growth_rel.passed and f_rep.in_SG_plus:
            return {"verdict": "Proposition 3.4 applies (lambda large)", "checks": checks}
        raise PredicateFailure("f not estimated in SG_{q'}^+ on the window", checks)

    checks["H3_homogeneity"] = check_H3_homogeneity(ham, samples, thetas=(0.0, 0.5, 2.0)).passed
    if not checks["H3_homogeneity"]:
        raise PredicateFailure("(H3) positive homogeneity")
    checks["H4_consistent"] = check_H4_modulus(ham, R=3.0, pair_samples=pair_samples).passed

    if isinstance(ham, GameHamiltonian):
        delta_est = lambda x: 0.99 * min(
            max(float(np.linalg.eigvalsh(ham.S(x, a, b) - ham.T(x, a, b)).min())
                for a in ham.alpha_set)
            for b in ham.beta_set
        )
        C0 = problem.C0 if problem.C0 is not None else estimate_C0(ham, xs)
        rep = check_H2prime(ham, delta_est, C0, xs)
        checks["H2prime"] = rep.passed
        if not rep.passed:
            raise PredicateFailure("(H2') game positivity/boundedness", checks)
        if not (growth_rep.passed and f_rep.in_S_plus):
            raise PredicateFailure("growth hypotheses for the game route "
                                   "(coefficients S_1, f in S_2^+)", checks)
        return {"verdict": "Corollary 4.4 applies", "checks": checks}

    if isinstance(ham, MinConvexHamiltonian):
        delta = min(estimate_delta(Hk, xs) for Hk in ham.components)
        C0 = problem.C0 if problem.C0 is not None else max(estimate_C0(Hk, xs) for Hk in ham.components)
        ok = delta > 0 and all(
            check_H1_convexity(Hk, xs, xi_pairs, (0.25, 0.5, 0.75)).passed
            and check_H2_bounds(Hk, lambda _x, d=delta: d, C0, samples).passed
            for Hk in ham.components
        )
        checks["components_H1_H2_common_constants"] = ok
        if not ok:
            raise PredicateFailure("per-component (H1)-(H2) with common constants", checks)
        if not (growth_rep.passed and f_rep.in_S_plus):
            raise PredicateFailure("growth hypotheses for the min-convex route", checks)
        return {"verdict": "Theorem 4.2 applies", "checks": checks}

    sign_changing = False
    if isinstance(ham, SignedScalarHamiltonian):
        probe = np.linspace(-3.0, 3.0, 301).reshape(-1, 1) if problem.N == 1 else np.array(xs)
        gamma = compute_gamma(ham, probe)
        sign_changing = len(gamma.omega_minus) > 0
        if sign_changing:
            a13 = check_A1_A3(problem.extremal, gamma, window_radius=3.0)
            checks["A1_A3"] = a13.passed
            if not a13.passed:
                raise PredicateFailure("(A1) extremal data vanishing on Gamma", checks)
            a4 = check_A4(ham, gamma.gamma_points, r=1.0, C1_candidate=10.0)
            checks["A4"] = a4.passed
            if not a4.passed:
                raise PredicateFailure("(A4) Hamiltonian degeneracy on Gamma", checks)
            if not (growth_rep.passed and f_rep.in_S_plus):
                raise PredicateFailure("growth hypotheses for the sign-split route", checks)
            return {"verdict": "Theorem 4.1 applies", "checks": checks}

    checks["H1_convexity"] = check_H1_convexity(ham, xs, xi_pairs, (0.25, 0.5, 0.75)).passed
    if not checks["H1_convexity"]:
        raise PredicateFailure("(H1) convexity in the gradient", checks)
    delta = estimate_delta(ham, xs)
    C0 = problem.C0 if problem.C0 is not None else estimate_C0(ham, xs)
    checks["H2_bounds"] = delta > 0 and check_H2_bounds(
        ham, lambda _x, d=delta: d, C0, samples).passed
    if not checks["H2_bounds"]:
        raise PredicateFailure("(H2) strict positivity/boundedness", checks)
    if growth_rep.passed and f_rep.in_S_plus:
        return {"verdict": "Theorem 3.1 applies", "checks": checks}
    if growth_rel.passed and f_rep.in_SG_plus:
        return {"verdict": "Theorem 3.2 applies (lambda >= lambda0)", "checks": checks}
    raise PredicateFailure("f not estimated in SG_{q'}^+ on the window", checks)


# ---------------------------------------------------------------------------
# subcommands


def cmd_check_hypotheses(scn, args, outdir):
    target = build_system(scn["system"]) if "system" in scn else build_problem(scn["problem"])
    report = check_hypotheses(target, scn.get("window"))
    write_report(outdir, {"id": scn.get("id", ""), **report})
    print(report["verdict"])
    return EXIT_OK, []


def cmd_classify_growth(scn, args, outdir):
    problem = build_problem(scn["problem"])
    radii = scn.get("window")
    f_rep = growth_mod.classify_growth(problem.f_at, problem.q_prime,
                                       radii=radii, dim=problem.N)
    s_rep = growth_mod.classify_growth(lambda x: problem.extremal.sigma0_norm(x), 1.0,
                                       radii=radii, dim=problem.N, tol=0.02)
    b_rep = growth_mod.classify_growth(lambda x: problem.b0_at(x), 1.0,
                                       radii=radii, dim=problem.N, tol=0.02)

    def g(rep):
        return {
            "in_S_plus": rep.in_S_plus, "in_S_minus": rep.in_S_minus,
            "in_SG_plus": rep.in_SG_plus, "in_SG_minus": rep.in_SG_minus,
            "liminf_plus": rep.liminf_plus, "liminf_minus": rep.liminf_minus,
            "radii": list(rep.radii_used), "note": rep.verdict_note,
        }

    write_report(outdir, {
        "id": scn.get("id", ""),
        "f_order_qprime": g(f_rep),
        "sigma0_order_1": g(s_rep),
        "b0_order_1": g(b_rep),
    })
    return EXIT_OK, []


def cmd_barrier(scn, args, outdir):
    problem = build_problem(scn["problem"])
    radii = scn.get("window", growth_mod.DEFAULT_RADII)
    window = barrier_mod.Window(radius=float(max(radii)), nodes=4001)
    mus = args.mu or scn.get("mu", [0.5, 0.9, 0.99])
    per_mu = []
    csvs = []
    for mu in mus:
        entry = {"mu": mu}
        try:
            params = barrier_mod.construct_barrier(problem, mu, window)
            rep = barrier_mod.verify_strict(problem, params)
            entry["mode"] = "strict"
            entry["params"] = params.to_json_dict()
            entry["strictness"] = rep.to_json_dict()
            entry["gap_bound"] = f"w <= (1-mu)(C1 + alpha<x>^q') with C1={params.C1:.6g}, alpha={params.alpha:.6g}"
            if not rep.passed:
                raise PredicateFailure("barrier strictness (min grid residual > 0)", entry)
            if not csvs:
                pts = barrier_mod.window_points(window, problem.N)
                vals = []
                for x in pts:
                    v, g_, h_ = barrier_mod.eval_barrier(params, x)
                    vals.append(barrier_mod.extremal_residual(problem, params, v, g_, h_, x))
                csvs.append(("residual_barrier.csv", pts, np.asarray(vals)))
        except barrier_mod.BarrierPreconditionError as exc:
            lrep = barrier_mod.lambda0_for_SG(problem, mu, window)
            entry["mode"] = "relaxed"
            entry["refusal"] = str(exc)
            entry["lambda0"] = lrep.to_json_dict()
            if lrep.lambda0 is None:
                raise PredicateFailure("lambda0 ladder exhausted", entry) from exc
        per_mu.append(entry)
    write_report(outdir, {"id": scn.get("id", ""), "per_mu": per_mu})
    return EXIT_OK, csvs


def cmd_verify_classical(scn, args, outdir):
    problem = build_problem(scn["problem"])
    name = scn["problem"].get("builtin")
    if name == "eq12":
        cands = prob_mod.eq12_solutions(problem.lam)
    elif name == "hje3":
        cands = prob_mod.hje3_solutions(problem.lam, float(scn["problem"].get("t", -1.0)))
    elif name == "ex2":
        cands = prob_mod.ex2_solutions()
    else:
        raise ScenarioError(f"no closed-form solutions catalogued for {name!r}")
    from .residual import pde_residual, verify_solution

    grid = np.linspace(-10.0, 10.0, 801)
    entries, csvs = [], []
    worst = 0.0
    for cand in cands:
        rep = verify_solution(problem, cand, grid)
        worst = max(worst, rep.max_abs_residual)
        entries.append({"label": cand.label, **rep.to_json_dict()})
        res = np.array([pde_residual(problem, cand, x) for x in grid])
        csvs.append((f"residual_{cand.label}.csv", grid.reshape(-1, 1), res))
        if rep.sign_classification != "solution":
            raise PredicateFailure(
                f"classical certification of {cand.label} (classified {rep.sign_classification})",
                {"candidates": entries})
    write_report(outdir, {"id": scn.get("id", ""), "candidates": entries,
                          "max_abs_residual": worst})
    print(f"max |residual| over candidates: {worst:.3e}")
    return EXIT_OK, csvs


def cmd_solve(scn, args, outdir):
    problem = build_problem(scn["problem"])
    box, h = parse_grid(scn, args.h)
    boundary = parse_boundary(scn.get("boundary"), problem, scn)
    config = solver_mod.SchemeConfig(tol_residual=args.tol or 1e-9)
    sol, rep = solver_mod.solve(problem, box, h, boundary, config)
    if not rep.converged:
        raise PredicateFailure(
            f"solver non-convergence (residual {rep.final_residual_norm:.3e} "
            f"after {rep.iterations} iterations)", rep.to_json_dict())
    write_report(outdir, {"id": scn.get("id", ""), "solve": rep.to_json_dict()})
    return EXIT_OK, [("field_solution.csv", sol.points(), sol.values.ravel()),
                     ("residual_history.csv",
                      np.arange(len(rep.residual_history), dtype=float).reshape(-1, 1),
                      np.asarray(rep.residual_history))]


def cmd_compare(scn, args, outdir):
    problem = build_problem(scn["problem"])
    box, h = parse_grid(scn, args.h)
    f_low = _parse_field(parse_scalar_field, scn["f_low"], problem.N, "f_low")
    f_high = _parse_field(parse_scalar_field, scn["f_high"], problem.N, "f_high")
    b_low = parse_boundary(scn.get("boundary_low", 0.0), problem, scn)
    b_high = parse_boundary(scn.get("boundary_high", 0.0), problem, scn)
    rep = solver_mod.comparison_check(problem, box, h, f_low, f_high, b_low, b_high)
    write_report(outdir, {"id": scn.get("id", ""), **rep.to_json_dict()})
    if not rep.ordered:
        raise PredicateFailure("discrete comparison (nodewise ordering)", rep.to_json_dict())
    print(f"ordered with min gap {rep.min_gap:.3e}")
    return EXIT_OK, []


def cmd_gamma_pin(scn, args, outdir):
    problem = build_problem(scn["problem"])
    box, h = parse_grid(scn, args.h)
    rep = solver_mod.gamma_pinning_check(problem, box, h)
    write_report(outdir, {"id": scn.get("id", ""), **rep.to_json_dict()})
    if not rep.decreasing:
        raise PredicateFailure("Gamma-pinning deviation not decreasing under refinement",
                               rep.to_json_dict())
    print(f"pinning deviations {[f'{d:.3e}' for d in rep.deviations]}")
    return EXIT_OK, []


def cmd_nonuniqueness(scn, args, outdir):
    name = scn["problem"].get("builtin")
    if name not in ("eq12", "hje3", "ex2"):
        raise ScenarioError(f"nonuniqueness demo needs builtin eq12/hje3/ex2, got {name!r}")
    box, h = parse_grid(scn, args.h)
    rep = solver_mod.nonuniqueness_demo(
        name, box, h,
        lam=float(scn["problem"].get("lambda", 1.0)),
        t=float(scn["problem"].get("t", -1.0)),
    )
    write_report(outdir, {"id": scn.get("id", ""), **rep.to_json_dict()})
    csvs = [(f"field_{b.label}.csv", b.solution.points(), b.solution.values.ravel())
            for b in rep.branches]
    uniq = [b.label for b in rep.branches if b.in_uniqueness_class]
    print(f"branches in the uniqueness class: {uniq}")
    return EXIT_OK, csvs


def cmd_system_solve(scn, args, outdir):
    system = build_system(scn["system"])
    box, h = parse_grid(scn, args.h)
    boundaries = [parse_boundary(b, system.scalar_problem(k), scn)
                  for k, b in enumerate(scn.get("boundaries", [0.0] * system.m))]
    fields, rep = sys_mod.solve_system(system, box, h, boundaries)
    if not rep.converged:
        raise PredicateFailure(
            f"system sweep non-convergence (residual {rep.final_residual_norm:.3e})",
            rep.to_json_dict())
    write_report(outdir, {"id": scn.get("id", ""), **rep.to_json_dict()})
    csvs = [(f"field_component_{k}.csv", fields[k].points(), fields[k].values.ravel())
            for k in range(system.m)]
    return EXIT_OK, csvs


COMMANDS = {
    "check-hypotheses": cmd_check_hypotheses,
    "classify-growth": cmd_classify_growth,
    "barrier": cmd_barrier,
    "verify-classical": cmd_verify_classical,
    "solve": cmd_solve,
    "compare": cmd_compare,
    "gamma-pin": cmd_gamma_pin,
    "nonuniqueness": cmd_nonuniqueness,
    "system-solve": cmd_system_solve,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="viscompare",
        description="comparison-principle scenario runner",
    )
    parser.add_argument("subcommand", choices=sorted(COMMANDS))
    parser.add_argument("scenario", help="scenario JSON file")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--h", type=float, default=None, help="grid spacing override")
    parser.add_argument("--mu", type=lambda s: [float(v) for v in s.split(",")],
                        default=None, help="comma-separated list of mu values")
    parser.add_argument("--window", type=lambda s: [float(v) for v in s.split(",")],
                        default=None, help="comma-separated growth radii")
    parser.add_argument("--tol", type=float, default=None)
    args = parser.parse_args(argv)

    try:
        scn = load_scenario(args.scenario)
        if args.window is not None:
            scn["window"] = args.window
        outdir = Path(args.out or scn.get("out") or f"out_{scn.get('id', 'scenario')}")
        code, csvs = COMMANDS[args.subcommand](scn, args, outdir)
        for name, points, values in csvs:
            write_field_csv(outdir, name, points, values)
        return code
    except ScenarioError as exc:
        print(f"PARSE_ERROR: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PredicateFailure as exc:
        print(f"FAILED: {exc.predicate}", file=sys.stderr)
        return EXIT_PREDICATE
    except solver_mod.MonotonicityError as exc:
        print(f"SOLVER: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        # grid/problem refusals from the library (e.g. non-diagonal 2-d
        # diffusion, wrong Hamiltonian shape for a demo)
        print(f"SOLVER: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    raise SystemExit(main())
