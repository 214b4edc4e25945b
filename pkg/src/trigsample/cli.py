"""Command-line interface: ``trigsample {bounds,simulate,stirling,voronoi,reconstruct}``.

Exit codes: 0 success, 1 refused computation (e.g. singular normal matrix),
2 usage error, 3 a simulated failure rate contradicts a verifiable bound.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import bounds, montecarlo, rng, stirling
from .errors import TrigSampleError
from .fourier import SampleSet, build_matrix, reconstruct
from .spectrum import parse_spectrum
from .voronoi import voronoi_weights_1d, voronoi_weights_mc

EXIT_OK, EXIT_REFUSED, EXIT_USAGE, EXIT_VIOLATED = 0, 1, 2, 3

FORMULAS = {
    "main": "i.i.d. rows with moment constants (--M, --v); --real for real matrices",
    "bounded": "i.i.d. rows with entries bounded by --C and variance --b; --improved for Bennett's sharper form",
    "noniid": "independent non-identical rows; per-entry tables from --table JSON {v: [[[..]]], M: [[[..]]]}",
    "fourier": "uniform random Fourier matrix: bound at --n, or sample size for --delta (order D^2 log D)",
    "mp": "Mendelson-Pajor bound for a symmetric spectrum; depends on the unspecified constant --c",
    "detprob": "Voronoi-weighted matrix for the full cube of degree --m in --d variables",
    "moment": "moment-method bound eps^-2m D G_2m(n/D); optimal m unless --m given",
    "uniform": "moment-method sample size with free parameter --alpha (order D log D)",
    "simple": "moment-method sample size with alpha = eps^2/e (order D log D)",
}


class UsageError(Exception):
    pass


def _num(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _int(text: str) -> int:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if x != int(x):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(x)


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"--formula {args.formula} needs " + ", ".join("--" + m for m in missing))


def _finite(x):
    return x if math.isfinite(x) else None


# bounds ---------------------------------------------------------------------


def _bounds_result(args) -> dict:
    f = args.formula
    caveats: list[str] = []
    out: dict = {}
    eps = args.eps
    lam_min = lam_max = 1.0
    if f == "main":
        _need(args, "n", "D", "eps", "M", "v")
        out["bound"] = bounds.main_failure_bound(args.n, args.D, eps, bounds.MomentProfile.iid(args.M, args.v), args.real)
        lam_min, lam_max = args.lambda_min_q, args.lambda_max_q
    elif f == "bounded":
        _need(args, "n", "D", "eps", "C", "b")
        out["bound"] = bounds.bounded_failure_bound(args.n, args.D, eps, args.C, args.b, args.improved)
        lam_min, lam_max = args.lambda_min_q, args.lambda_max_q
    elif f == "noniid":
        _need(args, "n", "eps", "table")
        data = json.loads(Path(args.table).read_text())
        prof = bounds.MomentProfile("non-iid", v_table=data["v"], M_table=data["M"])
        out["bound"] = bounds.noniid_psi(args.n, prof.D, eps, prof, refine=args.refine)
        out["coarse_bound"] = bounds.noniid_coarse_bound(args.n, prof.D, eps, prof)
        lam_min, lam_max = args.lambda_min_q, args.lambda_max_q
    elif f == "fourier":
        _need(args, "D", "eps")
        if args.n is not None:
            out["bound"] = bounds.fourier_failure_bound(args.n, args.D, eps)
        else:
            _need(args, "delta")
            out["min_n"] = bounds.fourier_min_n(args.D, eps, args.delta)
    elif f == "mp":
        _need(args, "D", "eps")
        caveats.append(bounds.MP_CAVEAT)
        if args.n is not None:
            alpha = args.alpha if args.alpha is not None else 2.0
            p = bounds.MPParams.fourier_symmetric(args.D, alpha, args.c)
            if args.rho is not None or args.z_orlicz is not None:
                p = bounds.MPParams(args.rho or p.rho, args.z_orlicz or p.z_orlicz, alpha, args.lambda_max_q, args.c)
            out["bound"] = bounds.mp_failure_bound(args.n, args.D, p, eps)
        else:
            _need(args, "delta")
            out["min_n"] = bounds.better_bound_min_n(args.D, eps, args.delta, args.c)
            out["terms"] = list(bounds.better_bound_terms(args.D, eps, args.delta, args.c))
    elif f == "detprob":
        _need(args, "m", "d", "gamma", "delta")
        out["min_n"] = bounds.detprob_min_n(args.m, args.d, args.gamma, args.delta)
        out["condition_bound"] = bounds.detprob_cond_bound(args.gamma)
        out["D"] = (2 * args.m + 1) ** args.d
        eps = None
    elif f == "moment":
        _need(args, "n", "D", "eps")
        if args.m is not None:
            out["m"] = args.m
            out["bound"] = bounds.moment_failure_bound(args.n, args.D, eps, args.m)
        else:
            out["m"], out["bound"] = bounds.moment_best_m(args.n, args.D, eps)
    elif f == "uniform":
        _need(args, "D", "eps", "alpha", "delta")
        out["min_n"] = bounds.uniform_min_n(args.D, eps, args.alpha, args.delta)
    elif f == "simple":
        _need(args, "D", "eps", "delta")
        out["min_n"] = bounds.uniform_simple_min_n(args.D, eps, args.delta)
    if eps is not None:
        out["certified_condition_number"] = _finite(bounds.certified_condition_number(eps, lam_min, lam_max))
    inputs = {k: v for k, v in vars(args).items()
              if k not in ("command", "func", "json", "threads") and v is not None and v is not False}
    return {"inputs": inputs, **out, "caveats": caveats}


def cmd_bounds(args) -> int:
    res = _bounds_result(args)
    if args.json:
        print(json.dumps(res))
    else:
        key = "min_n" if "min_n" in res else "bound"
        print(res[key])
    return EXIT_OK


# simulate -------------------------------------------------------------------


def cmd_simulate(args) -> int:
    if args.trials < 100:
        raise UsageError("--trials must be at least 100")
    if args.n < 1 or not args.eps > 0:
        raise UsageError("--n must be positive and --eps positive")
    seed = rng.fresh_seed() if args.seed is None else args.seed
    if args.family == "fourier":
        if args.spectrum is None:
            raise UsageError("--family fourier needs --spectrum")
        family = montecarlo.FourierUniform(parse_spectrum(args.spectrum))
    else:
        if args.D is None:
            raise UsageError("--family scaledsign needs --D")
        family = montecarlo.ScaledSign(args.sigmas, args.D)
    report = montecarlo.run_tail_experiment(family, args.n, args.eps, args.trials, seed, args.threads)
    fmt = args.format or (Path(args.out).suffix.lstrip(".") if args.out else "json")
    if fmt == "csv":
        text = report.to_csv()
    elif fmt == "table":
        lines = [f"# seed: {seed}", f"# failures: {report.failure_count}/{report.trials}"]
        lines += [f"{b.name:22s} {b.value:.6g} {b.verdict}" for b in report.bounds]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(report.to_dict(), indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"seed: {seed}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_VIOLATED if report.violated else EXIT_OK


# stirling, voronoi, reconstruct -----------------------------------------------


def cmd_stirling(args) -> int:
    if args.g:
        if args.theta is None:
            raise UsageError("--g needs --theta")
        print(repr(stirling.g_eval(args.m, args.theta)))
    elif args.k is not None:
        print(stirling.assoc_stirling2(args.m, args.k))
    else:
        print(" ".join(str(stirling.assoc_stirling2(args.m, k)) for k in range(1, args.m // 2 + 1)))
    return EXIT_OK


def cmd_voronoi(args) -> int:
    samples = SampleSet.from_json(Path(args.points).read_text())
    if samples.dim == 1 and args.probes is None:
        w = voronoi_weights_1d(samples.points[:, 0])
    else:
        w = voronoi_weights_mc(samples, args.probes, args.seed)
    print(json.dumps(w.to_dict()))
    return EXIT_OK


def _complex_vector(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 2:
        return arr[:, 0] + 1j * arr[:, 1]
    return arr.astype(complex)


def cmd_reconstruct(args) -> int:
    spec = parse_spectrum(args.spectrum)
    samples = SampleSet.from_json(Path(args.samples).read_text())
    y = _complex_vector(json.loads(Path(args.values).read_text()))
    a = reconstruct(build_matrix(spec, samples), y)
    print(json.dumps({"freqs": [list(k) for k in spec.freqs],
                      "coefficients": [[float(c.real), float(c.imag)] for c in a]}))
    return EXIT_OK


# parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trigsample", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=_int, default=None,
                   help=f"worker threads for simulations (default ${montecarlo.THREADS_ENV} or 1)")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="evaluate a failure bound or sample-size formula",
                       formatter_class=argparse.RawDescriptionHelpFormatter,
                       epilog="formulas:\n" + "\n".join(f"  {k:8s} {v}" for k, v in FORMULAS.items()))
    b.add_argument("--formula", required=True, choices=list(FORMULAS))
    b.add_argument("--json", action="store_true", help="emit a JSON object")
    for name in ("n", "D", "m", "d"):
        b.add_argument(f"--{name}", type=_int)
    for name in ("eps", "delta", "M", "v", "C", "b", "gamma", "alpha", "rho", "z-orlicz"):
        b.add_argument(f"--{name}", type=_num)
    b.add_argument("--c", type=_num, default=1.0, help="absolute constant of the MP bound")
    b.add_argument("--lambda-min-q", type=_num, default=1.0)
    b.add_argument("--lambda-max-q", type=_num, default=1.0)
    b.add_argument("--real", action="store_true")
    b.add_argument("--improved", action="store_true")
    b.add_argument("--refine", action="store_true", help="use per-row D_k for noniid")
    b.add_argument("--table")
    b.set_defaults(func=cmd_bounds)

    s = sub.add_parser("simulate", help="Monte Carlo tail experiment")
    s.add_argument("--family", choices=["fourier", "scaledsign"], default="fourier")
    s.add_argument("--spectrum", help="cube:m:d, line:D or a spectrum JSON file")
    s.add_argument("--D", type=_int, help="columns for scaledsign")
    s.add_argument("--sigmas", type=_num, nargs="+", default=[1.0, 2.0],
                   help="row scales for scaledsign, cycled over rows")
    s.add_argument("--n", type=_int, required=True)
    s.add_argument("--eps", type=_num, required=True)
    s.add_argument("--trials", type=_int, required=True)
    s.add_argument("--seed", type=_int)
    s.add_argument("--out")
    s.add_argument("--format", choices=["json", "csv", "table"])
    s.set_defaults(func=cmd_simulate)

    st = sub.add_parser("stirling", help="associated Stirling numbers S2(m, k) and G_m(theta)")
    st.add_argument("--m", type=_int, required=True)
    st.add_argument("--k", type=_int)
    st.add_argument("--g", action="store_true", help="print G_m(theta)")
    st.add_argument("--theta", type=_num)
    st.set_defaults(func=cmd_stirling)

    v = sub.add_parser("voronoi", help="Voronoi weights of a sample set JSON file")
    v.add_argument("--points", required=True)
    v.add_argument("--probes", type=_int)
    v.add_argument("--seed", type=_int, default=0)
    v.set_defaults(func=cmd_voronoi)

    r = sub.add_parser("reconstruct", help="least-squares coefficients from samples")
    r.add_argument("--spectrum", required=True)
    r.add_argument("--samples", required=True, help="sample set JSON")
    r.add_argument("--values", required=True, help="JSON list of values, complex as [re, im]")
    r.set_defaults(func=cmd_reconstruct)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"trigsample: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TrigSampleError as exc:
        print(f"trigsample: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (ValueError, OSError, KeyError) as exc:
        print(f"trigsample: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
