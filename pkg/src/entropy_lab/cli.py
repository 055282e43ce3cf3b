"""Command-line interface producing reproducible report bundles.

Subcommands: ellipsoid, counting, carl, invert, cover, lps, sobolev,
validate.  Every run writes a bundle (summary.json, CSV tables, two-column
plot data, rendered figures) that is byte-identical for identical
(configuration, seed, thread count).

Exit codes: 0 success, 2 regime/hypothesis violations, 1 all other errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .acceptance import _bisect_root, lps_sandwich_normalized, run_criteria
from .asymptotics import (
    carl_asymptotic,
    carl_supremum,
    entropy_from_counting_model,
    entropy_from_eigenvalue_model,
    entropy_numbers_from_counting_model,
    entropy_numbers_from_eigenvalue_model,
    eval_expansion,
    invert_first_order,
    invert_second_order,
)
from .covering import (
    DEFAULT_ROGERS_C,
    DEFAULT_TAU,
    Ellipsoid,
    ball_covering_upper,
    export_bounds_csv,
    greedy_cover_count,
    sandwich_entropy,
    volume_lower_bound,
)
from .errors import EntropyLabError, RegimeError
from .report import ReportWriter, result
from .sequence_model import (
    CountingModel,
    EigenvalueModel,
    SpectrumSample,
    counting_to_eigenvalue_model,
    empirical_counting,
    load_spectrum,
    save_spectrum,
)
from .spectra import (
    BoxDomain,
    LPSConfig,
    SobolevConfig,
    box_laplacian_counting,
    lps_counting_rate,
    lps_entropy_rate,
    lps_eigenvalues,
    recommended_nodes,
    sobolev_counting_model,
    sobolev_entropy,
)


class CliUsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep exit code 2 reserved for regime violations
        raise CliUsageError(message)


def _float_list(raw: str) -> list[tuple[str, float]]:
    """Parse a comma list keeping the original tokens for stable summary keys."""
    out = []
    for token in raw.split(","):
        token = token.strip()
        if token:
            out.append((token, float(token)))
    if not out:
        raise CliUsageError(f"empty list argument: {raw!r}")
    return out


def _int_list(raw: str) -> list[int]:
    return [int(float(tok)) for tok in raw.split(",") if tok.strip()]


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", type=Path, default=None, help="bundle output directory")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    parser.add_argument("--threads", type=int, default=1, help="worker count (recorded)")
    parser.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json",
                        help="what to echo on stdout")


def _base_summary(command: str, args, inputs: dict) -> dict:
    return {
        "command": command,
        "version": __version__,
        "inputs": inputs,
        "environment": {"seed": args.seed, "threads": args.threads},
    }


def _echo(args, bundle, table_rel: str | None = None) -> None:
    if args.fmt == "json":
        sys.stdout.write(bundle.summary_path.read_text())
    elif table_rel is not None:
        sys.stdout.write((bundle.out_dir / table_rel).read_text())


def _out_dir(args, command: str) -> Path:
    return args.out if args.out is not None else Path("entropy-lab-out") / command


def _expansion_results(prefix: str, exp) -> dict:
    return {
        f"{prefix}_A": result(exp.A, "formula"),
        f"{prefix}_a": result(exp.a, "formula"),
        f"{prefix}_B": result(exp.B, "formula"),
        f"{prefix}_b": result(exp.b, "formula"),
    }


def _eps_curve(eps_values: list[float]) -> np.ndarray:
    lo = min(eps_values) / 10.0
    hi = max(max(eps_values), 1.0)
    return np.logspace(math.log10(lo), math.log10(hi), 200)


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------
def cmd_ellipsoid(args) -> int:
    model = EigenvalueModel(c1=args.c1, alpha1=args.alpha1, c2=args.c2, alpha2=args.alpha2)
    entropy = entropy_from_eigenvalue_model(model)
    numbers = entropy_numbers_from_eigenvalue_model(model)
    writer = ReportWriter(_out_dir(args, "ellipsoid"))
    eps = args.eps
    rows = [(tok, eval_expansion(entropy, val)) for tok, val in eps]
    table = writer.add_table("entropy_evaluations", ["epsilon", "entropy_bits"], rows)
    grid = _eps_curve([v for _, v in eps])
    writer.add_plot(
        "entropy_vs_epsilon",
        [("", grid, eval_expansion(entropy, grid))],
        xlabel="epsilon",
        ylabel="entropy (bits)",
        title="two-term entropy expansion",
        logx=True,
        logy=True,
    )
    m_grid = np.unique(np.round(np.logspace(0, 6, 200)).astype(int)).astype(float)
    writer.add_plot(
        "entropy_numbers_vs_m",
        [("", m_grid, eval_expansion(numbers, m_grid))],
        xlabel="m (bits)",
        ylabel="m-th entropy number",
        title="two-term entropy-number expansion",
        logx=True,
        logy=True,
    )
    results = _expansion_results("entropy", entropy)
    results.update(_expansion_results("entropy_numbers", numbers))
    for tok, val in eps:
        results[f"entropy_at[{tok}]"] = result(eval_expansion(entropy, val), "formula")
    summary = _base_summary(
        "ellipsoid",
        args,
        {"c1": args.c1, "alpha1": args.alpha1, "c2": args.c2,
         "alpha2": model.alpha2, "eps": [tok for tok, _ in eps]},
    )
    summary["results"] = results
    bundle = writer.finalize(summary)
    _echo(args, bundle, table)
    return 0


def cmd_counting(args) -> int:
    cm = CountingModel(kappa1=args.kappa1, beta1=args.beta1,
                       kappa2=args.kappa2, beta2=args.beta2)
    entropy = entropy_from_counting_model(cm)
    numbers = entropy_numbers_from_counting_model(cm)
    derived = counting_to_eigenvalue_model(cm)
    writer = ReportWriter(_out_dir(args, "counting"))
    eps = args.eps
    rows = [(tok, eval_expansion(entropy, val)) for tok, val in eps]
    table = writer.add_table("entropy_evaluations", ["epsilon", "entropy_bits"], rows)
    grid = _eps_curve([v for _, v in eps])
    writer.add_plot(
        "entropy_vs_epsilon",
        [("", grid, eval_expansion(entropy, grid))],
        xlabel="epsilon", ylabel="entropy (bits)",
        title="entropy from counting model", logx=True, logy=True,
    )
    results = _expansion_results("entropy", entropy)
    results.update(_expansion_results("entropy_numbers", numbers))
    results["beta_star"] = result(cm.beta_star, "formula")
    for name, val in (("c1", derived.c1), ("alpha1", derived.alpha1),
                      ("c2", derived.c2), ("alpha2", derived.alpha2)):
        results[f"derived_eigenvalue_{name}"] = result(val, "formula")
    for tok, val in eps:
        results[f"entropy_at[{tok}]"] = result(eval_expansion(entropy, val), "formula")
    summary = _base_summary(
        "counting",
        args,
        {"kappa1": args.kappa1, "beta1": args.beta1,
         "kappa2": args.kappa2, "beta2": cm.beta2, "eps": [tok for tok, _ in eps]},
    )
    summary["results"] = results
    bundle = writer.finalize(summary)
    _echo(args, bundle, table)
    return 0


def _resolve_spectrum(spec: str, n_max: int):
    """Named builtin or CSV path -> (source object, model if known)."""
    if spec == "harmonic":
        model = EigenvalueModel(c1=1.0, alpha1=1.0)
        return model, model
    if spec == "geometric":
        n = np.arange(1, min(n_max, 1060) + 1, dtype=float)
        sample = SpectrumSample(values=np.exp2(-n), source="analytic",
                                params={"kind": "geometric"})
        return sample, None
    path = Path(spec)
    if not path.exists():
        raise CliUsageError(
            f"--spectrum must be 'harmonic', 'geometric' or an existing CSV file, got {spec!r}"
        )
    return load_spectrum(path), None


def cmd_carl(args) -> int:
    source, model = _resolve_spectrum(args.spectrum, args.n_max)
    writer = ReportWriter(_out_dir(args, "carl"))
    rows = []
    results = {}
    for m in args.m:
        res = carl_supremum(source, m=m, n_max=args.n_max)
        row = [m, res.value, res.n_star, "yes" if res.boundary_hit else "no"]
        results[f"supremum[m={m}]"] = result(res.value, "oracle")
        results[f"n_star[m={m}]"] = result(res.n_star, "oracle")
        if model is not None:
            asym = carl_asymptotic(model, m)
            row.append(asym)
            results[f"asymptotic[m={m}]"] = result(asym, "formula")
        rows.append(row)
    header = ["m", "supremum", "n_star", "boundary_hit"]
    if model is not None:
        header.append("asymptotic_leading_term")
    table = writer.add_table("carl_bound", header, rows)
    ms = np.asarray(args.m, dtype=float)
    series = [("supremum", ms, np.asarray([r[1] for r in rows]))]
    if model is not None:
        series.append(("asymptotic", ms, np.asarray([r[4] for r in rows])))
    writer.add_plot("carl_vs_m", series, xlabel="m (bits)", ylabel="bound value",
                    title="geometric-mean supremum bound", logx=True, logy=True)
    summary = _base_summary(
        "carl", args,
        {"spectrum": args.spectrum, "m": args.m, "n_max": args.n_max},
    )
    summary["results"] = results
    bundle = writer.finalize(summary)
    _echo(args, bundle, table)
    return 0


def cmd_invert(args) -> int:
    writer = ReportWriter(_out_dir(args, "invert"))
    results = {}
    if args.kappa2 == 0.0 or args.beta1 == args.beta2:
        first = invert_first_order(args.kappa1, args.beta1)
        coeffs = (first.coefficient, first.exponent, 0.0, 0.0)
        results["order"] = result(1, "formula")
    else:
        inv = invert_second_order(args.kappa1, args.kappa2, args.beta1, args.beta2)
        coeffs = tuple(inv)
        results["order"] = result(2, "formula")
    c_lead, e_lead, c_second, e_second = coeffs
    for name, val in (("c_lead", c_lead), ("e_lead", e_lead),
                      ("c_second", c_second), ("e_second", e_second)):
        results[name] = result(val, "formula")
    rows = []
    for n in args.n:
        two_term = c_lead * n**e_lead + (c_second * n**e_second if c_second else 0.0)
        exact = _bisect_root(args.kappa1, args.kappa2, args.beta1, args.beta2, n) \
            if args.kappa2 else (args.kappa1 / n) ** (1.0 / args.beta1)
        second = abs(c_second) * n**e_second if c_second else 0.0
        ratio = abs(exact - two_term) / second if second else 0.0
        rows.append([n, two_term, exact, abs(exact - two_term), second, ratio])
    table = writer.add_table(
        "inversion_check",
        ["n", "two_term", "exact_root", "residual", "second_term", "residual_over_second"],
        rows,
    )
    ns = np.asarray([r[0] for r in rows], dtype=float)
    writer.add_plot(
        "inversion_residual",
        [("residual", ns, np.asarray([max(r[3], 1e-300) for r in rows])),
         ("second_term", ns, np.asarray([max(r[4], 1e-300) for r in rows]))],
        xlabel="n", ylabel="magnitude", title="inversion residual vs second term",
        logx=True, logy=True,
    )
    for r in rows:
        results[f"exact_root[n={int(r[0])}]"] = result(r[2], "oracle")
        results[f"residual_over_second[n={int(r[0])}]"] = result(r[5], "oracle")
    summary = _base_summary(
        "invert", args,
        {"kappa1": args.kappa1, "kappa2": args.kappa2,
         "beta1": args.beta1, "beta2": args.beta2, "n": args.n},
    )
    summary["results"] = results
    bundle = writer.finalize(summary)
    _echo(args, bundle, table)
    return 0


TAU_SENSITIVITY_GRID = (0.2, 0.35, 0.5, 0.65, 0.8)


def cmd_cover(args) -> int:
    axes = np.asarray(sorted((v for _, v in args.axes), reverse=True))
    ell = Ellipsoid(axes, field=args.field)
    writer = ReportWriter(_out_dir(args, "cover"))
    results = {}
    bound_rows = []
    csv_rows = []
    for tok, eps in args.eps:
        bounds = sandwich_entropy(axes, eps, tau=args.tau, rogers_c=args.rogers_c)
        greedy = None
        if ell.real_dim <= 3:
            step = args.grid_step if args.grid_step else eps / 8.0
            greedy = greedy_cover_count(ell, eps, grid_step=step)
        bound_rows.append([
            tok, bounds.lower_log2, bounds.upper_log2,
            "" if greedy is None else greedy,
            bounds.methods[0], bounds.methods[1],
        ])
        csv_rows.append({
            "axes": axes, "epsilon": eps, "tau": args.tau,
            "lower_bits": bounds.lower_log2, "upper_bits": bounds.upper_log2,
            "greedy_count": greedy,
        })
        results[f"lower_bits[{tok}]"] = result(bounds.lower_log2, "formula")
        results[f"upper_bits[{tok}]"] = result(bounds.upper_log2, "formula")
        if greedy is not None:
            results[f"greedy_count[{tok}]"] = result(greedy, "oracle")
    table = writer.add_table(
        "covering_bounds",
        ["epsilon", "lower_bits", "upper_bits", "greedy_count", "lower_method", "upper_method"],
        bound_rows,
    )
    export_bounds_csv(writer.out_dir / "tables" / "bounds_export.csv", csv_rows)
    writer.add_file("tables/bounds_export.csv")
    # tau sensitivity: the theory takes tau -> 0, so the default is a choice
    # that reports must expose
    sens_rows = []
    for tau in TAU_SENSITIVITY_GRID:
        for tok, eps in args.eps:
            b = sandwich_entropy(axes, eps, tau=tau, rogers_c=args.rogers_c)
            sens_rows.append([tau, tok, b.lower_log2, b.upper_log2])
    writer.add_table("tau_sensitivity", ["tau", "epsilon", "lower_bits", "upper_bits"],
                     sens_rows)
    eps_vals = np.asarray([v for _, v in args.eps])
    order = np.argsort(eps_vals)
    writer.add_plot(
        "bounds_vs_epsilon",
        [("lower", eps_vals[order], np.asarray([bound_rows[i][1] for i in order])),
         ("upper", eps_vals[order], np.asarray([bound_rows[i][2] for i in order]))],
        xlabel="epsilon", ylabel="bits",
        title="covering sandwich", logx=True,
    )
    summary = _base_summary(
        "cover", args,
        {"axes": [tok for tok, _ in args.axes], "field": args.field,
         "eps": [tok for tok, _ in args.eps], "tau": args.tau,
         "rogers_c": args.rogers_c,
         "grid_step": args.grid_step if args.grid_step else "eps/8"},
    )
    summary["results"] = results
    bundle = writer.finalize(summary)
    _echo(args, bundle, table)
    return 0


def cmd_lps(args) -> int:
    nodes = args.nodes if args.nodes else recommended_nodes(args.sigma, args.r)
    cfg = LPSConfig(sigma=args.sigma, r=args.r, nodes=nodes, quadrature=args.quadrature)
    sample = lps_eigenvalues(cfg)
    writer = ReportWriter(_out_dir(args, "lps"))
    spectrum_rel = "tables/spectrum.csv"
    (writer.out_dir / "tables").mkdir(exist_ok=True)
    save_spectrum(sample, writer.out_dir / spectrum_rel)
    writer.add_file(spectrum_rel)
    writer.add_file("tables/spectrum.json")
    results = {
        "shannon_number": result(2.0 * args.sigma * args.r / math.pi, "formula"),
        "rate_limit": result(2.0 * args.sigma / math.pi, "formula"),
        "raw_min": result(sample.params["raw_min"], "spectrum"),
        "raw_max": result(sample.params["raw_max"], "spectrum"),
        "jacobi_sweeps": result(sample.params["jacobi_sweeps"], "spectrum"),
    }
    rows = []
    for tok, gamma in args.gamma:
        count = empirical_counting(sample, gamma)
        rate = lps_counting_rate(cfg, gamma, spectrum=sample)
        rows.append([tok, count, rate])
        results[f"counting[gamma={tok}]"] = result(count, "spectrum")
        results[f"rate[gamma={tok}]"] = result(rate, "spectrum")
    table = writer.add_table("counting_rates", ["gamma", "count", "count_per_r"], rows)
    for tok, eps in args.eps:
        theory = lps_entropy_rate(2.0, 2.0 * args.sigma, 1, eps) / 2.0
        low, up = lps_sandwich_normalized(sample, args.r, eps, tau=args.tau)
        results[f"entropy_rate_theory[{tok}]"] = result(theory, "formula")
        results[f"sandwich_lower_per_2r[{tok}]"] = result(low, "oracle")
        results[f"sandwich_upper_per_2r[{tok}]"] = result(up, "oracle")
    idx = np.arange(1, len(sample) + 1, dtype=float)
    keep = min(len(sample), max(64, int(4 * 2 * args.sigma * args.r / math.pi)))
    writer.add_plot(
        "eigenvalue_plateau",
        [("", idx[:keep], sample.values[:keep])],
        xlabel="index n", ylabel="eigenvalue",
        title=f"plateau at sigma={args.sigma:g}, r={args.r:g}",
    )
    summary = _base_summary(
        "lps", args,
        {"sigma": args.sigma, "r": args.r, "nodes": nodes,
         "quadrature": args.quadrature, "gamma": [t for t, _ in args.gamma],
         "eps": [t for t, _ in args.eps], "tau": args.tau},
    )
    summary["results"] = results
    bundle = writer.finalize(summary)
    _echo(args, bundle, table)
    return 0


def cmd_sobolev(args) -> int:
    if args.interval_length is not None:
        sides = (args.interval_length,)
    elif args.sides is not None:
        sides = tuple(v for _, v in args.sides)
    else:
        raise CliUsageError("provide --sides or --interval-length")
    if args.dim != len(sides):
        raise CliUsageError(f"--dim {args.dim} does not match {len(sides)} side lengths")
    box = BoxDomain(sides)
    cfg = SobolevConfig(k=args.order_k, box=box)
    cm = sobolev_counting_model(cfg, args.order)
    exp = sobolev_entropy(cfg, args.order)
    numbers = entropy_numbers_from_counting_model(cm)
    writer = ReportWriter(_out_dir(args, "sobolev"))
    geom = box.geometry()
    results = {
        "volume": result(geom.volume, "formula"),
        "boundary_area": result(geom.boundary_area, "formula"),
        "kappa1": result(cm.kappa1, "formula"),
        "beta1": result(cm.beta1, "formula"),
        "kappa2": result(cm.kappa2, "formula"),
        "beta2": result(cm.beta2, "formula"),
        "beta_star": result(cm.beta_star, "formula"),
    }
    results.update(_expansion_results("entropy", exp))
    results.update(_expansion_results("entropy_numbers", numbers))
    rows = [(tok, eval_expansion(exp, val)) for tok, val in args.eps]
    table = writer.add_table("entropy_evaluations", ["epsilon", "entropy_bits"], rows)
    for tok, val in args.eps:
        results[f"entropy_at[{tok}]"] = result(eval_expansion(exp, val), "formula")
    if args.gamma is not None and box.dim <= 4:
        # lattice cross-check of the Weyl constants (boxes are enumerable
        # exactly; the smooth-boundary hypothesis behind the two-term law is
        # not satisfied by boxes, which is why this check is reported rather
        # than asserted)
        gamma = args.gamma
        count = box_laplacian_counting(box, gamma)
        pred1 = cm.kappa1 * gamma ** (box.dim / 2.0)
        pred2 = pred1 + (cm.kappa2 * gamma ** ((box.dim - 1) / 2.0)
                         if args.order == "two-term" else 0.0)
        results["lattice_count"] = result(count, "oracle")
        results["weyl_one_term_prediction"] = result(pred1, "formula")
        results["weyl_two_term_prediction"] = result(pred2, "formula")
    grid = _eps_curve([v for _, v in args.eps])
    writer.add_plot(
        "entropy_vs_epsilon",
        [("", grid, eval_expansion(exp, grid))],
        xlabel="epsilon", ylabel="entropy (bits)",
        title=f"Sobolev ball entropy (d={box.dim}, k={args.order_k})",
        logx=True, logy=True,
    )
    summary = _base_summary(
        "sobolev", args,
        {"dim": args.dim, "order_k": args.order_k, "sides": list(sides),
         "order": args.order, "eps": [t for t, _ in args.eps],
         "gamma": args.gamma,
         "note": "box domains violate the smooth-boundary hypothesis of the "
                 "two-term law; lattice counts are reported for comparison"},
    )
    summary["results"] = results
    bundle = writer.finalize(summary)
    _echo(args, bundle, table)
    return 0


def cmd_validate(args) -> int:
    writer = ReportWriter(_out_dir(args, "validate"))
    criteria = run_criteria(args.suite, seed=args.seed)
    rows = []
    results = {}
    for c in criteria:
        rows.append([c.cid, c.name, c.status])
        results[f"{c.cid}:{c.name}"] = {"status": c.status, "details": c.details}
        if args.suite == "full":
            results[f"{c.cid}:{c.name}"]["seconds"] = c.seconds
        sys.stdout.write(f"{c.cid} {c.name}: {c.status.upper()}\n")
    table = writer.add_table("criteria", ["cid", "name", "status"], rows)
    summary = _base_summary("validate", args, {"suite": args.suite})
    summary["results"] = results
    summary["passed"] = all(c.status != "fail" for c in criteria)
    bundle = writer.finalize(summary)
    if args.fmt == "csv":
        sys.stdout.write((bundle.out_dir / table).read_text())
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------
def build_parser() -> _Parser:
    parser = _Parser(prog="entropy-lab",
                     description="metric entropy of compact operators: expansions, "
                                 "covering bounds, and computed spectra")
    parser.add_argument("--version", action="version", version=f"entropy-lab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ellipsoid", help="expansions from an eigenvalue decay model")
    p.add_argument("--c1", type=float, required=True)
    p.add_argument("--alpha1", type=float, required=True)
    p.add_argument("--c2", type=float, default=0.0)
    p.add_argument("--alpha2", type=float, default=None)
    p.add_argument("--eps", type=_float_list, default=_float_list("1e-1,1e-2,1e-3"))
    _add_common(p)
    p.set_defaults(func=cmd_ellipsoid)

    p = sub.add_parser("counting", help="expansions from a counting-function model")
    p.add_argument("--kappa1", type=float, required=True)
    p.add_argument("--beta1", type=float, required=True)
    p.add_argument("--kappa2", type=float, default=0.0)
    p.add_argument("--beta2", type=float, default=None)
    p.add_argument("--eps", type=_float_list, default=_float_list("1e-1,1e-2,1e-3"))
    _add_common(p)
    p.set_defaults(func=cmd_counting)

    p = sub.add_parser("carl", help="geometric-mean supremum bound")
    p.add_argument("--spectrum", default="harmonic",
                   help="'harmonic', 'geometric', or a spectrum CSV file")
    p.add_argument("--m", type=_int_list, default=[10, 100, 1000])
    p.add_argument("--n-max", dest="n_max", type=int, default=100_000)
    _add_common(p)
    p.set_defaults(func=cmd_carl)

    p = sub.add_parser("invert", help="asymptotic inversion with a root-finding check")
    p.add_argument("--kappa1", type=float, required=True)
    p.add_argument("--kappa2", type=float, default=0.0)
    p.add_argument("--beta1", type=float, required=True)
    p.add_argument("--beta2", type=float, default=None)
    p.add_argument("--n", type=_int_list, default=[1000, 10_000, 100_000, 1_000_000])
    _add_common(p)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("cover", help="covering sandwich and greedy oracle")
    p.add_argument("--axes", type=_float_list, required=True,
                   help="comma list of semi-axes")
    p.add_argument("--field", choices=("real", "complex"), default="complex")
    p.add_argument("--eps", type=_float_list, default=_float_list("0.5,0.3"))
    p.add_argument("--tau", type=float, default=DEFAULT_TAU)
    p.add_argument("--rogers-c", dest="rogers_c", type=float, default=DEFAULT_ROGERS_C)
    p.add_argument("--grid-step", dest="grid_step", type=float, default=None,
                   help="greedy oracle grid step (default eps/8)")
    _add_common(p)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("lps", help="time-band-time spectrum and entropy rate")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--r", type=float, default=20.0)
    p.add_argument("--nodes", type=int, default=None,
                   help="quadrature size (default 30*sigma*r/pi)")
    p.add_argument("--quadrature", choices=("gauss-legendre", "trapezoid"),
                   default="gauss-legendre")
    p.add_argument("--gamma", type=_float_list, default=_float_list("0.2,0.5,0.8"))
    p.add_argument("--eps", type=_float_list, default=_float_list("0.5"))
    p.add_argument("--tau", type=float, default=DEFAULT_TAU)
    _add_common(p)
    p.set_defaults(func=cmd_lps)

    p = sub.add_parser("sobolev", help="Sobolev ball entropy on a box domain")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--order-k", dest="order_k", type=int, required=True)
    p.add_argument("--sides", type=_float_list, default=None)
    p.add_argument("--interval-length", dest="interval_length", type=float, default=None,
                   help="d=1 shorthand for --sides L")
    p.add_argument("--order", choices=("one-term", "two-term"), default="one-term")
    p.add_argument("--eps", type=_float_list, default=_float_list("1e-1,1e-2,1e-3"))
    p.add_argument("--gamma", type=float, default=None,
                   help="lattice cross-check threshold (d <= 4)")
    _add_common(p)
    p.set_defaults(func=cmd_sobolev)

    p = sub.add_parser("validate", help="run the acceptance criteria")
    p.add_argument("--suite", choices=("fast", "full"), default="fast")
    _add_common(p)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except CliUsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except SystemExit as exc:  # --help / --version
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except CliUsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except RegimeError as exc:
        sys.stderr.write(f"regime violation: {exc}\n")
        return 2
    except EntropyLabError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
