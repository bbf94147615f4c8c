"""Scenario-driven command-line front end.

A scenario file declares an ambient size, a symbol class with its payload,
a rank-n perturbation, and a list of checks.  The runner dispatches each
check, collects residuals and sigma gaps, and emits a machine-readable JSON
report plus a human-readable summary.  Exit codes are a stable contract:
0 pass, 1 check failure, 2 parse error, 3 validation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import Tolerances
from .errors import (ScenarioParseError, ScenarioValidationError, TKLabError)
from .hardy_core import CoeffVec
from .near_invariance import (DefectReport, compute_defect, kernel_of,
                              verify_theorem_inner_symbol,
                              verify_theorem_invertible_factors,
                              verify_theorem_phi_zero,
                              verify_theorem_theta_star)
from .operators import brown_halmos_check, build_perturbed, gram_deviation
from .representation import (build_frame, check_coordinate_space_invariance,
                             default_depth, extract_coordinates,
                             rank_one_complement_analysis,
                             rank_one_inner_kernel,
                             rank_one_invertible_kernel,
                             rank_one_theta_star_analysis)
from .subspaces import Subspace
from .symbols import (LaurentMatrixSymbol, is_inner, is_invertible_analytic,
                      scalar_inner_outer, symbol_adjoint, symbol_multiply)

EXIT_PASS = 0
EXIT_CHECK_FAIL = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3

SYMBOL_CLASSES = ("zero", "inner", "invertible_factors", "theta_star", "raw")
HEADROOM = 4


@dataclass
class Scenario:
    name: str
    m: int
    N: int
    symbol_class: str
    checks: list[str]
    seed: int
    G: list[CoeffVec]
    H: list[CoeffVec]
    symbol: LaurentMatrixSymbol | None = None
    factors: tuple[LaurentMatrixSymbol, LaurentMatrixSymbol] | None = None
    pair: tuple[LaurentMatrixSymbol, LaurentMatrixSymbol] | None = None
    expect: dict = field(default_factory=dict)
    tolerance_overrides: dict = field(default_factory=dict)
    depth: int | None = None

    def tolerances(self, base: Tolerances) -> Tolerances:
        if not self.tolerance_overrides:
            return base
        return base.override(**self.tolerance_overrides)

    def total_bandwidth(self) -> int:
        if self.symbol is not None:
            return self.symbol.d
        if self.factors is not None:
            return self.factors[0].d + self.factors[1].d
        if self.pair is not None:
            return self.pair[0].d + self.pair[1].d
        return 0


def _parse_vec(payload, what: str) -> CoeffVec:
    try:
        return CoeffVec.from_json(payload)
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioParseError(f"bad {what}: {exc}") from exc


def _parse_symbol(payload, what: str) -> LaurentMatrixSymbol:
    try:
        return LaurentMatrixSymbol.from_json(payload)
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioParseError(f"bad {what}: {exc}") from exc


def parse_scenario(data: dict, name_hint: str = "scenario") -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioParseError("scenario payload must be a JSON object")
    try:
        name = str(data.get("name", name_hint))
        m = int(data["m"])
        N = int(data["N"])
        symbol_class = str(data["symbol_class"])
        checks = [str(c) for c in data.get("checks", [])]
        seed = int(data.get("seed", 0))
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioParseError(f"missing or malformed scenario field: {exc}") from exc
    pert = data.get("perturbation", {"G": [], "H": []})
    if not isinstance(pert, dict) or "G" not in pert or "H" not in pert:
        raise ScenarioParseError("perturbation must carry G and H arrays")
    G = [_parse_vec(v, "perturbation G") for v in pert["G"]]
    H = [_parse_vec(v, "perturbation H") for v in pert["H"]]
    symbol = _parse_symbol(data["symbol"], "symbol") if data.get("symbol") else None
    factors = None
    if data.get("factors"):
        factors = (_parse_symbol(data["factors"]["F1"], "factor F1"),
                   _parse_symbol(data["factors"]["F2"], "factor F2"))
    pair = None
    if data.get("pair"):
        pair = (_parse_symbol(data["pair"]["psi"], "pair psi"),
                _parse_symbol(data["pair"]["phi"], "pair phi"))
    return Scenario(name=name, m=m, N=N, symbol_class=symbol_class, checks=checks,
                    seed=seed, G=G, H=H, symbol=symbol, factors=factors, pair=pair,
                    expect=dict(data.get("expect", {})),
                    tolerance_overrides=dict(data.get("tolerances", {})),
                    depth=data.get("depth"))


def validate_scenario(sc: Scenario, tol: Tolerances) -> None:
    if sc.symbol_class not in SYMBOL_CLASSES:
        raise ScenarioValidationError(f"unknown symbol class {sc.symbol_class!r}")
    if sc.m < 1 or sc.N < 2:
        raise ScenarioValidationError(f"degenerate ambient ({sc.m}, {sc.N})")
    if sc.N <= sc.total_bandwidth() + HEADROOM:
        raise ScenarioValidationError(
            f"N={sc.N} leaves no headroom over bandwidth {sc.total_bandwidth()}")
    for fam_name, fam in (("G", sc.G), ("H", sc.H)):
        for v in fam:
            if v.shape != (sc.m, sc.N):
                raise ScenarioValidationError(
                    f"{fam_name} member shape {v.shape} != ({sc.m}, {sc.N})")
    if len(sc.G) != len(sc.H):
        raise ScenarioValidationError("perturbation families differ in length")
    if sc.symbol_class in ("inner", "theta_star"):
        if sc.symbol is None:
            raise ScenarioValidationError(f"class {sc.symbol_class} needs a symbol")
        chk = is_inner(sc.symbol, tol=tol.inner)
        if not chk.ok:
            raise ScenarioValidationError(
                f"symbol fails the inner test (deviation {chk.max_deviation:.3e})")
    if sc.symbol_class == "invertible_factors":
        if sc.factors is None:
            raise ScenarioValidationError("class invertible_factors needs factors")
        for label, F in zip(("F1", "F2"), sc.factors):
            if not is_invertible_analytic(F, margin=tol.invertibility_margin):
                raise ScenarioValidationError(f"factor {label} is not invertible")
    if sc.symbol_class == "raw" and sc.symbol is None and sc.pair is None:
        raise ScenarioValidationError("raw scenarios need a symbol or a pair")


@dataclass
class CheckOutcome:
    name: str
    status: str  # pass | fail | skipped
    residuals: dict
    seconds: float

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status,
                "residuals": self.residuals, "seconds": round(self.seconds, 4)}


@dataclass
class RunReport:
    scenario: str
    outcomes: list[CheckOutcome]
    tolerances: Tolerances

    @property
    def ok(self) -> bool:
        return all(o.status != "fail" for o in self.outcomes)

    def to_json(self) -> dict:
        return {"scenario": self.scenario, "ok": self.ok,
                "checks": [o.to_json() for o in self.outcomes],
                "environment": {"tolerances": self.tolerances.to_json()}}


def _expect_matches(expect: dict, key: str, actual) -> bool:
    return key not in expect or expect[key] == actual


def _sigma_conclusive(report: DefectReport, tol: Tolerances) -> bool:
    ratio = report.details.get("kernel_sigma_ratio", 0.0)
    return not (np.isfinite(ratio) and ratio > tol.sigma_ratio_flag)


def _dispatch_defect(sc: Scenario, tol: Tolerances) -> DefectReport:
    if sc.symbol_class == "zero":
        return verify_theorem_phi_zero(sc.G, sc.H, sc.N, m=sc.m,
                                       defect_floor=tol.defect_floor,
                                       tol_ortho=tol.ortho)
    if sc.symbol_class == "inner":
        return verify_theorem_inner_symbol(sc.symbol, sc.G, sc.H, sc.N,
                                           defect_floor=tol.defect_floor,
                                           tol_ortho=tol.ortho,
                                           tol_inner=tol.inner)
    if sc.symbol_class == "invertible_factors":
        return verify_theorem_invertible_factors(
            sc.factors[0], sc.factors[1], sc.G, sc.H, sc.N,
            defect_floor=tol.defect_floor, tol_ortho=tol.ortho,
            margin=tol.invertibility_margin)
    if sc.symbol_class == "theta_star":
        return verify_theorem_theta_star(sc.symbol, sc.G, sc.H, sc.N,
                                         defect_floor=tol.defect_floor,
                                         tol_ortho=tol.ortho,
                                         tol_inner=tol.inner,
                                         range_membership=tol.range_membership)
    raise ScenarioValidationError(
        f"defect_theorem is not defined for class {sc.symbol_class!r}")


def containment_tolerance(sc: Scenario, tol: Tolerances) -> float:
    # series inversion makes the prediction itself truncated; everything else
    # is exact polynomial arithmetic
    return tol.containment if sc.symbol_class == "invertible_factors" \
        else tol.containment_strict


def check_defect_theorem(sc: Scenario, tol: Tolerances) -> CheckOutcome:
    t0 = time.perf_counter()
    report = _dispatch_defect(sc, tol)
    ctol = containment_tolerance(sc, tol)
    ok = (report.bound_ok and report.containment_ok(ctol)
          and report.details.get("kernel_audit_violations", 0) == 0
          and _sigma_conclusive(report, tol))
    ok = ok and _expect_matches(sc.expect, "defect_dim", report.defect_dim)
    ok = ok and _expect_matches(sc.expect, "kernel_dim", report.subspace_dim)
    res = report.to_json()
    res.pop("details", None)
    res["sigma_conclusive"] = _sigma_conclusive(report, tol)
    return CheckOutcome("defect_theorem", "pass" if ok else "fail",
                        res, time.perf_counter() - t0)


def _scenario_kernel(sc: Scenario, tol: Tolerances) -> Subspace:
    if sc.symbol_class == "zero":
        symbol = LaurentMatrixSymbol.zero(sc.m)
    elif sc.symbol_class == "inner":
        symbol = sc.symbol
    elif sc.symbol_class == "theta_star":
        symbol = symbol_adjoint(sc.symbol)
    elif sc.symbol_class == "invertible_factors":
        symbol = symbol_multiply(symbol_adjoint(sc.factors[0]), sc.factors[1])
    elif sc.symbol_class == "raw" and sc.symbol is not None:
        symbol = sc.symbol
    else:
        raise ScenarioValidationError("no operator kernel for this scenario")
    ortho = gram_deviation(sc.G) <= tol.ortho and gram_deviation(sc.H) <= tol.ortho
    T = build_perturbed(symbol, sc.N, sc.G, sc.H, tol_ortho=tol.ortho,
                        require_orthonormal=ortho)
    return kernel_of(T).subspace


def check_representation(sc: Scenario, tol: Tolerances) -> CheckOutcome:
    t0 = time.perf_counter()
    kernel = _scenario_kernel(sc, tol)
    residuals: dict = {"kernel_dim": kernel.dim}
    if kernel.dim == 0:
        return CheckOutcome("representation", "skipped", residuals,
                            time.perf_counter() - t0)
    defect = compute_defect(kernel, defect_floor=tol.defect_floor)
    frame = build_frame(kernel, defect.defect_basis, defect_floor=tol.defect_floor)
    coords = []
    iso = rec = 0.0
    for F in kernel.basis_vectors():
        c = extract_coordinates(F, frame, tol_membership=tol.membership,
                                tol_rep=max(tol.representation, 1e-6))
        coords.append(c)
        iso = max(iso, c.isometry_gap / max(c.source_norm ** 2, 1e-300))
        rec = max(rec, c.reconstruction_residual / max(c.source_norm, 1e-300))
    depth = sc.depth if sc.depth is not None else default_depth(sc.N)
    inv = check_coordinate_space_invariance(frame, coords, depth)
    residuals.update({"r": frame.r, "p": frame.p,
                      "vanishing_case": frame.vanishing_case,
                      "case": "vanishing" if frame.vanishing_case else "nonvanishing",
                      "isometry_residual_max": iso,
                      "reconstruction_residual_max": rec,
                      "invariance_residuals": list(inv.residuals),
                      "depth": depth})
    ok = (iso <= tol.representation and rec <= tol.representation
          and inv.max_residual <= tol.membership)
    return CheckOutcome("representation", "pass" if ok else "fail",
                        residuals, time.perf_counter() - t0)


def check_rank_one(sc: Scenario, tol: Tolerances) -> CheckOutcome:
    t0 = time.perf_counter()
    if len(sc.G) != 1:
        raise ScenarioValidationError("rank_one checks need exactly one (G, H) pair")
    G, H = sc.G[0], sc.H[0]
    residuals: dict
    if sc.symbol_class == "zero":
        rep = rank_one_complement_analysis(G, sc.N, depth=sc.depth, seed=sc.seed)
        residuals = rep.to_json()
        inv = check_coordinate_space_invariance(
            rep.frame, rep.coords, sc.depth or default_depth(sc.N))
        residuals["invariance_residual_max"] = inv.max_residual
        residuals.pop("G0", None)
        residuals.pop("g", None)
        residuals["g_norm"] = rep.g.norm()
        residuals["G0_norm"] = rep.G0.norm()
        ok = (rep.condition_residual_max <= tol.membership
              and rep.projection_formula_residual <= tol.subspace_equality
              and inv.max_residual <= tol.membership
              and _expect_matches(sc.expect, "r", rep.r))
        if "g_norm_max" in sc.expect:
            ok = ok and rep.g.norm() <= sc.expect["g_norm_max"]
        if "G0_norm_max" in sc.expect:
            ok = ok and rep.G0.norm() <= sc.expect["G0_norm_max"]
    elif sc.symbol_class == "inner":
        rep = rank_one_inner_kernel(sc.symbol, G, H, sc.N, tol=tol.inner)
        residuals = rep.to_json()
        ok = (rep.case != "unexpected"
              and _expect_matches(sc.expect, "case", rep.case)
              and _expect_matches(sc.expect, "kernel_dim", rep.kernel_dim)
              and (rep.expected_match_residual is None
                   or rep.expected_match_residual <= tol.subspace_equality))
    elif sc.symbol_class == "invertible_factors":
        rep = rank_one_invertible_kernel(sc.factors[0], sc.factors[1], G, H, sc.N,
                                         margin=tol.invertibility_margin)
        residuals = rep.to_json()
        ok = (_expect_matches(sc.expect, "case", rep.case)
              and _expect_matches(sc.expect, "kernel_dim", rep.kernel_dim)
              and rep.details["convolution_gap"] <= tol.representation
              and (rep.expected_match_residual is None
                   or rep.expected_match_residual <= tol.containment))
    elif sc.symbol_class == "theta_star":
        rep = rank_one_theta_star_analysis(sc.symbol, G, H, sc.N, tol=tol.inner,
                                           depth=sc.depth,
                                           tol_equality=tol.containment)
        residuals = rep.to_json()
        ok = (rep.equality_residual <= tol.containment
              and rep.projection_formula_residual <= tol.membership
              and _expect_matches(sc.expect, "case", rep.case)
              and _expect_matches(sc.expect, "kernel_dim", rep.kernel_dim)
              and max(rep.membership_residuals.values()) <= tol.membership)
    else:
        raise ScenarioValidationError(
            f"rank_one is not defined for class {sc.symbol_class!r}")
    return CheckOutcome("rank_one", "pass" if ok else "fail",
                        residuals, time.perf_counter() - t0)


def check_brown_halmos(sc: Scenario, tol: Tolerances) -> CheckOutcome:
    t0 = time.perf_counter()
    if sc.pair is None:
        raise ScenarioValidationError("brown_halmos needs a (psi, phi) pair")
    rep = brown_halmos_check(sc.pair[0], sc.pair[1], sc.N)
    residuals = rep.to_json()
    if rep.hypothesis_met:
        ok = rep.deviation <= 1e-10
    else:
        ok = True  # report-style; expectations can pin the counterexample shape
    for key in ("product_is_zero", "product_symbol_is_zero", "hypothesis_met"):
        ok = ok and _expect_matches(sc.expect, key, getattr(rep, key))
    if "deviation_max" in sc.expect:
        ok = ok and rep.deviation <= sc.expect["deviation_max"]
    return CheckOutcome("brown_halmos", "pass" if ok else "fail",
                        residuals, time.perf_counter() - t0)


CHECKS = {
    "defect_theorem": check_defect_theorem,
    "representation": check_representation,
    "rank_one": check_rank_one,
    "brown_halmos": check_brown_halmos,
}


def run_scenario_object(sc: Scenario, base_tol: Tolerances) -> RunReport:
    tol = sc.tolerances(base_tol)
    validate_scenario(sc, tol)
    outcomes = []
    for name in sc.checks:
        fn = CHECKS.get(name)
        if fn is None:
            raise ScenarioValidationError(f"unknown check {name!r}")
        outcomes.append(fn(sc, tol))
    return RunReport(scenario=sc.name, outcomes=outcomes, tolerances=tol)


def load_scenario(path: Path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioParseError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"invalid JSON in {path}: {exc}") from exc
    return parse_scenario(data, name_hint=Path(path).stem)


def run_scenario(path: Path, base_tol: Tolerances = Tolerances(),
                 out: Path | None = None) -> tuple[RunReport, int]:
    """Run one scenario file; returns (report, exit code)."""
    sc = load_scenario(path)
    report = run_scenario_object(sc, base_tol)
    if out is not None:
        Path(out).write_text(json.dumps(report.to_json(), indent=2) + "\n")
    return report, EXIT_PASS if report.ok else EXIT_CHECK_FAIL


@dataclass
class SuiteResult:
    reports: list
    errors: list  # (path, kind, message)

    @property
    def exit_code(self) -> int:
        if any(kind == "parse" for _, kind, _ in self.errors):
            return EXIT_PARSE
        if any(kind == "validation" for _, kind, _ in self.errors):
            return EXIT_VALIDATION
        if any(not r.ok for r in self.reports):
            return EXIT_CHECK_FAIL
        return EXIT_PASS

    def to_json(self) -> dict:
        return {
            "scenarios": [r.to_json() for r in self.reports],
            "errors": [{"path": str(p), "kind": k, "message": m}
                       for p, k, m in self.errors],
            "passed": sum(r.ok for r in self.reports),
            "failed": sum(not r.ok for r in self.reports),
        }

    def table(self) -> str:
        lines = [f"{'scenario':<42} {'status':<8} {'checks':<30}"]
        for r in self.reports:
            marks = ",".join(f"{o.name}:{o.status}" for o in r.outcomes)
            lines.append(f"{r.scenario:<42} {'PASS' if r.ok else 'FAIL':<8} {marks:<30}")
        for p, k, msg in self.errors:
            lines.append(f"{Path(p).stem:<42} {'ERROR':<8} {k}: {msg[:60]}")
        return "\n".join(lines)


def run_suite(directory: Path, jobs: int = 1,
              base_tol: Tolerances = Tolerances(),
              out: Path | None = None) -> SuiteResult:
    paths = sorted(Path(directory).glob("*.json"))
    if not paths:
        raise ScenarioValidationError(f"no scenario files in {directory}")

    def one(p: Path):
        try:
            return ("report", run_scenario(p, base_tol)[0], p)
        except ScenarioParseError as exc:
            return ("parse", str(exc), p)
        except (ScenarioValidationError, TKLabError, ValueError) as exc:
            return ("validation", str(exc), p)

    results = []
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one, paths))
    else:
        results = [one(p) for p in paths]
    reports, errors = [], []
    for kind, payload, p in results:
        if kind == "report":
            reports.append(payload)
        else:
            errors.append((p, kind, payload))
    suite = SuiteResult(reports=reports, errors=errors)
    if out is not None:
        Path(out).write_text(json.dumps(suite.to_json(), indent=2) + "\n")
    return suite


SWEEP_PARAMS = ("N", "p", "s", "n")


def _monomial_power(symbol: LaurentMatrixSymbol) -> int | None:
    powers = symbol.powers()
    if len(powers) != 1 or powers[0] < 0:
        return None
    if not np.allclose(symbol.fourier(powers[0]), np.eye(symbol.m)):
        return None
    return powers[0]


def sweep(sc: Scenario, param: str, values: list[int],
          base_tol: Tolerances = Tolerances()) -> str:
    """Run the defect check across a parameter range; returns CSV text."""
    if param not in SWEEP_PARAMS:
        raise ScenarioValidationError(f"unknown sweep parameter {param!r}")
    if param in ("p", "s"):
        if sc.symbol_class not in ("inner", "theta_star") or \
                _monomial_power(sc.symbol) is None:
            raise ScenarioValidationError(
                f"parameter {param!r} needs a monomial identity symbol")
    if param == "n" and any(v > len(sc.G) for v in values):
        raise ScenarioValidationError("sweep n exceeds the stored family size")
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow([param, "kernel_dim", "defect_dim", "containment_residual",
                     "kernel_residual_max", "sigma_ratio"])
    for v in values:
        variant = Scenario(
            name=f"{sc.name}[{param}={v}]", m=sc.m,
            N=v if param == "N" else sc.N,
            symbol_class=sc.symbol_class, checks=["defect_theorem"],
            seed=sc.seed,
            G=[g.resized(v) if param == "N" else g for g in
               (sc.G[:v] if param == "n" else sc.G)],
            H=[h.resized(v) if param == "N" else h for h in
               (sc.H[:v] if param == "n" else sc.H)],
            symbol=(LaurentMatrixSymbol.shift(sc.m, v) if param in ("p", "s")
                    else sc.symbol),
            factors=sc.factors, expect={},
            tolerance_overrides=sc.tolerance_overrides)
        if param == "N":
            top = max([g.top_degree() for g in sc.G + sc.H] + [0])
            if v <= top + HEADROOM:
                raise ScenarioValidationError(
                    f"N={v} truncates the stored perturbation (top degree {top})")
        tol = variant.tolerances(base_tol)
        validate_scenario(variant, tol)
        report = _dispatch_defect(variant, tol)
        writer.writerow([v, report.subspace_dim, report.defect_dim,
                         _fmt(report.containment_residual),
                         _fmt(report.kernel_residual_max),
                         _fmt(report.details.get("kernel_sigma_ratio"))])
    return buf.getvalue()


def _fmt(x) -> str:
    return "" if x is None else f"{x:.6e}"


# ---------------------------------------------------------------------------
# command line
# ---------------------------------------------------------------------------


def bundled_scenario_dir() -> Path:
    return Path(__file__).parent / "scenarios"


def _tol_from_args(args) -> Tolerances:
    tol = Tolerances()
    overrides = {}
    if getattr(args, "tol_rank", None) is not None:
        overrides["rank_rel"] = args.tol_rank
    if getattr(args, "tol_contain", None) is not None:
        overrides["containment"] = args.tol_contain
        overrides["containment_strict"] = args.tol_contain
    return tol.override(**overrides) if overrides else tol


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="tklab",
        description="kernels of perturbed block Toeplitz compressions: "
                    "scenario runner and verification reports")
    parser.add_argument("--tol-rank", type=float, default=None,
                        help="relative singular-value rank cut")
    parser.add_argument("--tol-contain", type=float, default=None,
                        help="defect containment tolerance")
    parser.add_argument("--seed", type=int, default=None,
                        help="override scenario seeds")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario file")
    p_run.add_argument("file", type=Path)
    p_run.add_argument("--out", type=Path, default=None,
                       help="write the JSON report here")

    p_suite = sub.add_parser("suite", help="run a directory of scenarios")
    p_suite.add_argument("dir", type=Path)
    p_suite.add_argument("--jobs", type=int, default=1)
    p_suite.add_argument("--out", type=Path, default=None)

    p_sweep = sub.add_parser("sweep", help="sweep one parameter of a scenario")
    p_sweep.add_argument("file", type=Path)
    p_sweep.add_argument("--param", required=True, choices=SWEEP_PARAMS)
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated integer values")
    p_sweep.add_argument("--out", type=Path, default=None)

    p_factor = sub.add_parser("factor", help="inner-outer split of a scalar polynomial")
    p_factor.add_argument("file", type=Path,
                          help='JSON file {"coeffs": [[re, im], ...]}')

    args = parser.parse_args(argv)
    tol = _tol_from_args(args)

    try:
        if args.command == "run":
            report, code = _run_command(args, tol)
            return code
        if args.command == "suite":
            suite = run_suite(args.dir, jobs=args.jobs, base_tol=tol, out=args.out)
            print(suite.table())
            return suite.exit_code
        if args.command == "sweep":
            sc = load_scenario(args.file)
            if args.seed is not None:
                sc.seed = args.seed
            values = [int(v) for v in args.values.split(",") if v]
            text = sweep(sc, args.param, values, base_tol=tol)
            if args.out is not None:
                args.out.write_text(text)
            print(text, end="")
            return EXIT_PASS
        if args.command == "factor":
            return _factor_command(args.file)
    except ScenarioParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ScenarioValidationError, TKLabError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_PASS


def _run_command(args, tol: Tolerances):
    sc = load_scenario(args.file)
    if args.seed is not None:
        sc.seed = args.seed
    report = run_scenario_object(sc, tol)
    if args.out is not None:
        args.out.write_text(json.dumps(report.to_json(), indent=2) + "\n")
    for o in report.outcomes:
        print(f"{report.scenario}: {o.name} {o.status.upper()}")
    print(f"{report.scenario}: {'PASS' if report.ok else 'FAIL'}")
    return report, EXIT_PASS if report.ok else EXIT_CHECK_FAIL


def _factor_command(path: Path) -> int:
    try:
        data = json.loads(Path(path).read_text())
        coeffs = np.array([complex(re, im) for re, im in data["coeffs"]])
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    fact = scalar_inner_outer(coeffs)
    payload = fact.to_json()
    payload["reconstruction_residual"] = fact.reconstruction_residual(coeffs)
    print(json.dumps(payload, indent=2))
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
