"""Command line front end.

Every command prints a one-line summary on stdout.  Failures print a JSON
object ``{"error", "message", "exit_code"}`` on stderr and exit with the code
carried by the exception; output files of a failed run are never left behind.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import io, solver, stats, zeta
from .errors import CirculantError, SymmetricMetricWarning, UsageError, VerificationFailed
from .graph import MetricGraph, random_spec, validate_spec

CHECKPOINT_VERSION = 1
CHECKPOINT_ROOTS = 100_000
VERIFY_RTOL = 1e-6


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _interval(text: str) -> tuple[float, float]:
    vals = _float_list(text)
    if len(vals) != 2 or not 0 < vals[0] <= vals[1]:
        raise argparse.ArgumentTypeError(f"expected lo,hi with 0 < lo <= hi, got {text!r}")
    return vals[0], vals[1]


def _window(text: str) -> tuple[float, float]:
    vals = _float_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected xlo,xhi, got {text!r}")
    return vals[0], vals[1]


def _graph_options(p: argparse.ArgumentParser) -> None:
    grp = p.add_argument_group("graph (inline flags or --graph FILE)")
    grp.add_argument("--graph", type=Path, help="graph spec JSON file")
    grp.add_argument("--n", type=int)
    grp.add_argument("--a", type=_int_list, help="jump set, e.g. 1,2")
    metric = grp.add_mutually_exclusive_group()
    metric.add_argument("--symmetric-lengths", type=_float_list, metavar="L1,L2,...")
    metric.add_argument("--lengths", type=_float_list, metavar="L1,L2,...",
                        help="one length per edge, class-major order")
    metric.add_argument("--random-lengths", type=_interval, metavar="LO,HI",
                        help="edge lengths drawn uniformly from (LO, HI) with --seed")
    metric.add_argument("--random-symmetric-lengths", type=_interval, metavar="LO,HI",
                        help="class lengths drawn uniformly from (LO, HI) with --seed")
    grp.add_argument("--seed", type=int, default=0)


def _spectrum_range(p: argparse.ArgumentParser, required: bool = True) -> None:
    rng = p.add_mutually_exclusive_group(required=required)
    rng.add_argument("--kmax", type=float)
    rng.add_argument("--levels", type=int, help="target eigenvalue count (kmax from the Weyl law)")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="quantum-circulant", description="Spectra, statistics and zeta functions "
                "of quantum circulant graphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("spectrum", help="eigenvalues k up to kmax as CSV")
    _graph_options(sp)
    _spectrum_range(sp)
    sp.add_argument("--method", choices=("auto", "symmetric", "generic"), default="auto")
    sp.add_argument("--out", type=Path, required=True)
    sp.add_argument("--checkpoint", type=Path, help="resumable progress file (.npz)")

    st = sub.add_parser("stats", help="spectral statistics")
    ssub = st.add_subparsers(dest="stat", required=True, parser_class=_Parser)

    nn = ssub.add_parser("nnsd", help="nearest-neighbour spacing histogram")
    _graph_options(nn)
    _spectrum_range(nn, required=False)
    nn.add_argument("--spectrum", type=Path, help="spectrum CSV to analyse instead of solving")
    nn.add_argument("--bins", type=int, default=stats.NNSD_BINS)
    nn.add_argument("--smax", type=float, default=stats.NNSD_SMAX)
    nn.add_argument("--out", type=Path, required=True)
    nn.add_argument("--cdf-out", type=Path, help="also write the integrated NNSD")

    r2 = ssub.add_parser("r2", help="two-point correlation of a full spectrum or one subspectrum")
    _graph_options(r2)
    _spectrum_range(r2, required=False)
    r2.add_argument("--spectrum", type=Path, help="spectrum CSV to analyse instead of solving")
    r2.add_argument("--rep", type=int, help="representation j of a symmetric metric")
    r2.add_argument("--xmax", type=float, default=10.0)
    r2.add_argument("--bins", type=int, default=500)
    r2.add_argument("--window", type=_window, default=stats.FIT_WINDOW)
    r2.add_argument("--out", type=Path, required=True)

    fc = ssub.add_parser("fit-c", help="fit the small-separation constant to an R2 CSV")
    fc.add_argument("--r2", type=Path, required=True)
    fc.add_argument("--window", type=_window, default=stats.FIT_WINDOW)
    fc.add_argument("--out", type=Path)

    zp = sub.add_parser("zeta", help="spectral zeta function report (JSON)")
    _graph_options(zp)
    zp.add_argument("--s", type=float, required=True)
    zp.add_argument("--formulation", choices=zeta.FORMULATIONS, default="auto")
    zp.add_argument("--out", type=Path)

    dp = sub.add_parser("det", help="zeta-regularized spectral determinant")
    _graph_options(dp)
    dp.add_argument("--formulation", choices=zeta.FORMULATIONS, default="auto")
    dp.add_argument("--verify", action="store_true", help="compare with exp(-zeta'(0))")
    dp.add_argument("--out", type=Path)

    vp = sub.add_parser("vacuum", help="vacuum (Casimir) energy")
    _graph_options(vp)
    vp.add_argument("--formulation", choices=zeta.FORMULATIONS, default="auto")
    vp.add_argument("--out", type=Path)

    rg = sub.add_parser("random-graph", help="draw a random jump set and write a graph spec")
    rg.add_argument("--n", type=int, required=True)
    rg.add_argument("--p", type=float, default=0.5)
    rg.add_argument("--seed", type=int, default=0)
    rg.add_argument("--metric", choices=("symmetric", "generic"), default="symmetric")
    rg.add_argument("--length-range", type=_interval, default=(1.0, 1.5), metavar="LO,HI")
    rg.add_argument("--out", type=Path, required=True)
    return p


def resolve_graph(args) -> MetricGraph:
    inline = args.n is not None or args.a is not None
    metric_flags = [args.symmetric_lengths, args.lengths, args.random_lengths,
                    args.random_symmetric_lengths]
    if args.graph is not None:
        if inline or any(m is not None for m in metric_flags):
            raise UsageError("give the graph either inline (--n/--a/lengths) or by --graph, not both")
        return io.load_graph(args.graph)
    if args.n is None:
        raise UsageError("missing --n (or a --graph spec file)")
    if args.a is None:
        raise UsageError("missing --a")
    spec = validate_spec(args.n, args.a)
    if args.symmetric_lengths is not None:
        return MetricGraph.symmetric(spec, args.symmetric_lengths)
    if args.lengths is not None:
        return MetricGraph.generic(spec, args.lengths)
    if args.random_lengths is not None:
        return MetricGraph.random_generic(spec, *args.random_lengths, seed=args.seed)
    if args.random_symmetric_lengths is not None:
        return MetricGraph.random_symmetric(spec, *args.random_symmetric_lengths, seed=args.seed)
    raise UsageError("missing metric: one of --symmetric-lengths, --lengths, --random-lengths, "
                     "--random-symmetric-lengths")


def parse_config(argv=None) -> argparse.Namespace:
    """Parse and validate the command line; the graph is resolved into ``args.graph_obj``."""
    args = build_parser().parse_args(argv)
    analysing = args.command == "stats" and args.stat in ("nnsd", "r2")
    if args.command in ("spectrum", "zeta", "det", "vacuum") or analysing:
        # a spectrum CSV still needs its graph for the unfolding density
        args.graph_obj = resolve_graph(args)
    if analysing:
        solving = args.kmax is not None or args.levels is not None
        if solving == (args.spectrum is not None):
            raise UsageError("give exactly one of --spectrum FILE or --kmax/--levels")
    return args


# ---------------------------------------------------------------------------
# spectrum with checkpoints
# ---------------------------------------------------------------------------

def _kmax(g: MetricGraph, args, density: float | None = None) -> float:
    if args.kmax is not None:
        if not args.kmax > 0:
            raise UsageError("--kmax must be positive")
        return args.kmax
    if not args.levels > 0:
        raise UsageError("--levels must be positive")
    density = density if density is not None else g.total_length / math.pi
    return args.levels / density


def _method(g: MetricGraph, method: str) -> str:
    if method == "auto":
        return "symmetric" if g.is_symmetric and g.d >= 2 else "generic"
    if method == "symmetric" and not g.is_symmetric:
        raise UsageError("--method symmetric needs --symmetric-lengths")
    return method


def _fingerprint(g: MetricGraph, method: str, kmax: float) -> str:
    h = hashlib.sha256()
    h.update(json.dumps([g.n, list(g.spec.a), method, repr(kmax)]).encode())
    h.update(np.ascontiguousarray(g.lengths).tobytes())
    return h.hexdigest()


def _load_checkpoint(path: Path, fingerprint: str):
    if path is None or not path.exists():
        return None
    with np.load(path) as data:
        if int(data["version"]) != CHECKPOINT_VERSION or str(data["fingerprint"]) != fingerprint:
            raise UsageError(f"checkpoint {path} belongs to a different run; remove it to start over")
        return float(data["done"]), [data[f"col{i}"] for i in range(6)]


def _save_checkpoint(path: Path, fingerprint: str, done: float, s: solver.Spectrum) -> None:
    cols = {f"col{i}": c for i, c in enumerate(s._columns())}
    with io.atomic_output(path) as tmp:
        with open(tmp, "wb") as fh:
            np.savez(fh, version=CHECKPOINT_VERSION, fingerprint=fingerprint, done=done, **cols)


def compute_spectrum(g: MetricGraph, kmax: float, method: str = "auto",
                     checkpoint: Path | None = None, progress=None) -> solver.Spectrum:
    """Solve in windows of about 1e5 levels, checkpointing after each window.

    Each window is solved without its own Weyl test; the assembled spectrum
    is tested once over (0, kmax].
    """
    method = _method(g, method)
    solve = solver.spectrum_symmetric if method == "symmetric" else solver.spectrum_generic
    fingerprint = _fingerprint(g, method, kmax)
    step = CHECKPOINT_ROOTS * math.pi / g.total_length
    done, parts = 0.0, []
    resumed = _load_checkpoint(checkpoint, fingerprint)
    if resumed is not None:
        done, cols = resumed
        parts.append(solver.Spectrum(g, *cols, kmin=0.0, kmax=done))
    with warnings.catch_warnings():
        if method == "generic":
            warnings.simplefilter("ignore", SymmetricMetricWarning)
        while done < kmax:
            upper = kmax if kmax - done < 1.5 * step else done + step
            parts.append(solve(g, upper, kmin=done, check=False))
            done = upper
            if checkpoint is not None and done < kmax:
                _save_checkpoint(checkpoint, fingerprint,
                                 done, solver.Spectrum.concatenate(g, parts, 0.0, done))
            if progress:
                progress(done)
    s = solver.Spectrum.concatenate(g, parts, 0.0, kmax)
    s.weyl = solver._weyl(g, 0.0, kmax, s.total())
    if not s.weyl.ok:
        raise solver.WeylCountMismatch(f"{s.weyl.count} levels in (0, {kmax}], expected "
                                       f"{s.weyl.expected:.3f} +- {s.weyl.bound}")
    return s


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_spectrum(args) -> str:
    g = args.graph_obj
    kmax = _kmax(g, args)
    t0 = time.perf_counter()
    s = compute_spectrum(g, kmax, args.method, args.checkpoint)
    io.write_spectrum_csv(args.out, s)
    if args.checkpoint is not None and args.checkpoint.exists():
        args.checkpoint.unlink()
    w = s.weyl
    return (f"spectrum: {len(s)} distinct k, {s.total()} levels in (0, {kmax:.6g}]; "
            f"Weyl residual {w.residual:+.2f} (bound {w.bound:g}); {time.perf_counter() - t0:.1f} s")


def _levels_for_stats(args, rep: int | None):
    """Unfolded sequence either from a spectrum CSV or solved on the fly."""
    g = args.graph_obj
    if rep is not None:
        if not g.is_symmetric:
            raise UsageError("--rep needs a symmetric metric")
        if not 0 <= rep <= g.n // 2:
            raise UsageError(f"--rep must lie in 0..{g.n // 2}")
        mode = "edge" if rep == 0 or 2 * rep == g.n else "interior"
        if args.spectrum is not None:
            s = io.read_spectrum_csv(args.spectrum, g)
            roots = s.k[(s.kind == solver.REP) & (s.rep_index == rep)]
        else:
            roots = solver.rep_root_array(g, rep, _kmax(g, args, solver.unfold_density(g, mode)))
        return solver.unfold(roots, mode, g), mode
    if args.spectrum is not None:
        return solver.unfold(io.read_spectrum_csv(args.spectrum, g), "full", g), "full"
    return solver.unfold(compute_spectrum(g, _kmax(g, args)), "full", g), "full"


def _cmd_nnsd(args) -> str:
    u, _ = _levels_for_stats(args, None)
    h = stats.nnsd(u, args.bins, args.smax)
    grid = np.linspace(0.0, args.smax, 4 * args.bins + 1)
    emp = stats.integrated_nnsd(u, grid)
    goe = stats.wigner_goe_cdf(grid)
    sup = float(np.max(np.abs(emp - goe)))
    if args.cdf_out is not None:
        io.write_columns_csv(args.cdf_out, io.CDF_COLUMNS, grid, emp, goe)
    io.write_columns_csv(args.out, io.NNSD_COLUMNS, h.bin_centers, h.density)
    return f"nnsd: {len(u)} levels, {int(h.counts.sum())} gaps in range; sup |CDF - Wigner| = {sup:.4f}"


def _cmd_r2(args) -> str:
    u, mode = _levels_for_stats(args, args.rep)
    est = stats.r2_estimate(u, args.xmax, args.bins)
    io.write_columns_csv(args.out, io.R2_COLUMNS, est.bin_centers, est.values)
    fit = stats.fit_small_c(est, args.window)
    tail = (est.bin_centers > 3) & (est.bin_centers < 10)
    extra = ""
    if tail.any() and mode != "full":
        mad = float(np.mean(np.abs(est.values[tail] - stats.r2_large_model(est.bin_centers[tail], mode))))
        extra = f"; tail MAD {mad:.4f}"
    return (f"r2: {len(u)} levels ({mode}), {est.pair_count} pairs; "
            f"fitted c = {fit.c:.4f} on {fit.window}{extra}")


def _cmd_fit_c(args) -> str:
    x, y = io.read_columns_csv(args.r2, io.R2_COLUMNS)
    if x.size < 2:
        raise UsageError(f"{args.r2} holds fewer than two bins")
    width = float(x[1] - x[0])
    est = stats.R2Estimate(x, y, 0, float(x[-1] + width / 2), 0)
    fit = stats.fit_small_c(est, args.window)
    if args.out is not None:
        io.write_json(args.out, {"c": fit.c, "window": list(fit.window), "residual": fit.residual,
                                 "bins_used": fit.bins_used,
                                 "sensitivity": [{"window": list(w), "c": c} for w, c in fit.sensitivity]})
    sens = ", ".join(f"{w[1]:g}: {c:.4f}" for w, c in fit.sensitivity)
    return f"fit-c: c = {fit.c:.6f} on {fit.window} ({fit.bins_used} bins); upper-edge sensitivity {sens}"


def _c_or_none(g: MetricGraph):
    try:
        return zeta.leading_coefficient_c(g)
    except zeta.DegenerateC:
        return None


def _emit(args, payload: dict) -> None:
    if args.out is not None:
        io.write_json(args.out, payload)
    else:
        print(json.dumps(payload, sort_keys=True))


def _cmd_zeta(args) -> str:
    g, form = args.graph_obj, args.formulation
    z = zeta.zeta(g, args.s, form)
    closed = zeta.determinant_closed_form(g, form)
    payload = {
        "s": z.s,
        "zeta": z.value,
        "det_closed": closed.value,
        "det_numeric": zeta.determinant_numeric(g, form).value,
        "vacuum_energy": zeta.vacuum_energy(g, form),
        "c_coefficient": closed.c_coefficient if closed.c_coefficient is not None else _c_or_none(g),
        "quadrature_error": z.quadrature_error,
    }
    _emit(args, payload)
    return f"zeta: zeta({z.s:g}) = {z.value:.12g} (quadrature error {z.quadrature_error:.1e})"


def _cmd_det(args) -> str:
    g, form = args.graph_obj, args.formulation
    closed = zeta.determinant_closed_form(g, form)
    payload = {"det_closed": closed.value, "c_coefficient": closed.c_coefficient}
    line = f"det: closed form {closed.value:.12g}"
    if args.verify:
        numeric = zeta.determinant_numeric(g, form).value
        rel = abs(numeric - closed.value) / closed.value
        payload.update(det_numeric=numeric, relative_difference=rel)
        line += f", exp(-zeta'(0)) {numeric:.12g}, relative difference {rel:.1e}"
        if not rel <= VERIFY_RTOL:
            raise VerificationFailed(f"closed form and exp(-zeta'(0)) differ by {rel:.3e} "
                                     f"(limit {VERIFY_RTOL:g})")
    _emit(args, payload)
    return line


def _cmd_vacuum(args) -> str:
    energy = zeta.vacuum_energy(args.graph_obj, args.formulation)
    _emit(args, {"vacuum_energy": energy})
    return f"vacuum: E_c = {energy:.12g}"


def _cmd_random_graph(args) -> str:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        spec = random_spec(args.n, args.p, args.seed)
    lo, hi = args.length_range
    if args.metric == "symmetric":
        g = MetricGraph.random_symmetric(spec, lo, hi, seed=args.seed)
    else:
        g = MetricGraph.random_generic(spec, lo, hi, seed=args.seed)
    io.write_json(args.out, io.graph_to_dict(g))
    note = "; n is not prime" if any(issubclass(w.category, Warning) for w in caught) else ""
    return f"random-graph: n = {spec.n}, d = {spec.d}, total length {g.total_length:.6g}{note}"


def run(args) -> str:
    if args.command == "stats":
        return {"nnsd": _cmd_nnsd, "r2": _cmd_r2, "fit-c": _cmd_fit_c}[args.stat](args)
    return {"spectrum": _cmd_spectrum, "zeta": _cmd_zeta, "det": _cmd_det, "vacuum": _cmd_vacuum,
            "random-graph": _cmd_random_graph}[args.command](args)


def main(argv=None) -> int:
    try:
        args = parse_config(argv)
        print(run(args))
        return 0
    except CirculantError as exc:
        code = exc.exit_code
        err = exc
    except (ValueError, ArithmeticError) as exc:
        code, err = 1, exc
    print(json.dumps({"error": type(err).__name__, "message": str(err), "exit_code": code}),
          file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
