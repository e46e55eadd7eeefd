"""Command-line front end.

Exit codes: 0 success, 1 I/O or parse error, 2 validation failure,
3 numerical degeneracy.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import io
from .config import RunConfig
from .errors import DegenerateError, FormatError, GridMismatchError, ValidationError, WignerLabError
from .grid import SampleGrid1D, make_conjugate_grid
from .states import fidelity, gaussian_state, harmonic_oscillator_state
from .superpose import (
    SuperpositionSpec,
    cross_term_direct,
    cross_term_fast,
    recover_hilbert_superposition,
    restrict_to_grid,
    superpose_wigner,
)
from .symmetry import (
    derivative_generator,
    factorizability_residual,
    generator_from_entries,
    generator_symbol,
    quantize_generator,
    rotation_generator,
)
from .transforms import WignerFunction, reconstruct_wavefunction, wigner_from_wavefunction
from .verify import check_norm, check_orthogonality, check_purity

EXIT_OK, EXIT_IO, EXIT_VALIDATION, EXIT_DEGENERATE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


def _grid_arg(text: str) -> SampleGrid1D:
    try:
        x0, dx, n = text.split(",")
        return SampleGrid1D(float(x0), float(dx), int(n))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected X0,DX,N ({exc})") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="wignerlab", description="Phase-space quantum mechanics toolkit.")
    ap.add_argument("--config", help="JSON run configuration (flags override it)")
    ap.add_argument("--hbar", type=float)
    ap.add_argument("--grid", type=_grid_arg, help="coordinate grid as X0,DX,N")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--out", help="output path")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    st = sub.add_parser("state", help="write a wavefunction (wfn-v1)")
    st.add_argument("kind", choices=["hermite", "gaussian", "file"])
    st.add_argument("params", nargs="*")

    wg = sub.add_parser("wigner", help="Wigner function of a wavefunction")
    wg.add_argument("input")
    wg.add_argument("--method", choices=["fft", "quadrature"], default="fft")
    wg.add_argument("--csv", help="also write q,p,w CSV")

    rc = sub.add_parser("reconstruct", help="wavefunction from a pure Wigner function")
    rc.add_argument("input")
    rc.add_argument("--x0", default="auto")
    rc.add_argument("--reference", help="wfn-v1 file to compare against")

    sp = sub.add_parser("superpose", help="superpose two Wigner functions (sup-v1 request)")
    sp.add_argument("request")
    sp.add_argument("--oracle", action="store_true", help="also evaluate the direct triple integral")
    sp.add_argument("--report", help="write the JSON report here (default: stdout)")

    fz = sub.add_parser("factorize", help="symbol and Hilbert generator of a phase-space generator")
    fz.add_argument("generator")
    fz.add_argument("--c", type=float, default=0.0, help="additive constant of the symbol")
    fz.add_argument("--symbol-csv", help="symbol CSV path (default: <out>.symbol.csv)")

    vf = sub.add_parser("verify", help="purity/normalization (and orthogonality) checks")
    vf.add_argument("inputs", nargs="+")

    bn = sub.add_parser("bench", help="timing table (CSV)")
    bn.add_argument("--sizes", default="32,64,128")
    bn.add_argument("--repeat", type=int, default=3)
    return ap


def _config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    kw = {}
    if args.hbar is not None:
        kw["hbar"] = args.hbar
    if args.grid is not None:
        kw["grid"] = args.grid
    if args.seed is not None:
        kw["seed"] = args.seed
    if kw:
        from dataclasses import replace

        cfg = replace(cfg, **kw)
    return cfg


def _out(args, default: str) -> Path:
    return Path(args.out or default)


def _emit(reports, stream=None) -> bool:
    io.write_reports(stream or sys.stdout, reports)
    return all(r.passed for r in reports)


def cmd_state(args, cfg) -> int:
    grid, hbar = cfg.grid, cfg.hbar
    p = args.params
    if args.kind == "hermite":
        if len(p) != 1:
            raise FormatError("usage: state hermite K")
        phi = harmonic_oscillator_state(int(p[0]), grid, hbar)
    elif args.kind == "gaussian":
        if len(p) != 3:
            raise FormatError("usage: state gaussian Q0 P0 SIGMA")
        phi = gaussian_state(float(p[0]), float(p[1]), float(p[2]), grid, hbar)
    else:
        if len(p) != 1:
            raise FormatError("usage: state file PATH")
        phi = io.load_wavefunction(p[0])
    a = np.abs(phi.values)
    print(json.dumps({"norm": phi.norm(), "edge_ratio": float(max(a[0], a[-1]) / a.max())}))
    io.save_wavefunction(_out(args, "state.json"), phi)
    return EXIT_OK


def cmd_wigner(args, cfg) -> int:
    phi = io.load_wavefunction(args.input)
    pg = make_conjugate_grid(phi.grid, phi.hbar)
    W = wigner_from_wavefunction(phi, pg, method=args.method)
    io.save_wigner(_out(args, "wigner.json"), W)
    if args.csv:
        io.write_wigner_csv(args.csv, W)
    tol = cfg.tolerances
    ok = _emit([check_purity(W, tol.purity_rel), check_norm(W, tol.norm_abs)])
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_reconstruct(args, cfg) -> int:
    W = io.load_wigner(args.input)
    phi = reconstruct_wavefunction(W, args.x0, tolerances=cfg.tolerances)
    io.save_wavefunction(_out(args, "reconstructed.json"), phi)
    info = {"norm": phi.norm()}
    if args.reference:
        info["fidelity"] = fidelity(phi, io.load_wavefunction(args.reference))
    print(json.dumps(info))
    return EXIT_OK


def cmd_superpose(args, cfg) -> int:
    req = io.load_superposition_request(args.request)
    W1 = io.load_wigner(req["w1"])
    W2 = io.load_wigner(req["w2"])
    spec = SuperpositionSpec(req["A"], req["B"], req["epsilon"], req["x1"], req["x2"])
    res = superpose_wigner(W1, W2, spec, tolerances=cfg.tolerances)
    io.save_wigner(_out(args, "superposed.json"), res.W)
    report = res.report()
    psi = recover_hilbert_superposition(res, W1, W2)
    Wh = wigner_from_wavefunction(psi, W1.grid)
    report["dual_path_max_abs"] = float(np.abs(Wh.values - res.W.values).max())
    if args.oracle:
        direct = cross_term_direct(W1, W2, spec, n_oracle=min(cfg.oracle_n, W1.grid.n), tolerances=cfg.tolerances)
        fast = restrict_to_grid(cross_term_fast(W1, W2, spec, tolerances=cfg.tolerances), direct.grid)
        report["oracle_n"] = direct.grid.n
        report["oracle_max_abs"] = float(np.abs(direct.values - fast.values).max())
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.report:
        Path(args.report).write_text(text + "\n")
    else:
        print(text)
    ok = all(c["passed"] for c in report["checks"].values())
    return EXIT_OK if ok else EXIT_VALIDATION


def _build_generator(spec: dict, pg):
    kind = spec["kind"]
    if kind in ("dq", "dp"):
        return derivative_generator(pg, kind, spec["order"])
    if kind == "rotation":
        return rotation_generator(pg, spec["order"])
    idx, vals = spec["entries"]
    return generator_from_entries(pg, idx[:, 0], idx[:, 1], idx[:, 2], idx[:, 3], vals)


def _interior(pg):
    Q, P = np.meshgrid(pg.q, pg.p, indexing="ij")
    qc = pg.qgrid.x0 + pg.n * pg.dq / 2
    half_q = pg.n * pg.dq / 4
    half_p = pg.n * pg.dp / 4
    return Q, P, (np.abs(Q - qc) < half_q) & (np.abs(P) < half_p)


def symbol_fit(kind: str, A, c: float = 0.0) -> dict:
    """Closed-form comparison of a generator symbol on the interior box."""
    Q, P, m = _interior(A.grid)
    if kind in ("dq", "dp"):
        X = P if kind == "dq" else Q
        slope, icpt = np.polyfit(X[m], A.values[m], 1)
        return {"form": "p + c" if kind == "dq" else "q + c", "slope": float(slope), "intercept": float(icpt),
                "max_dev_from_fit": float(np.abs(A.values[m] - slope * X[m] - icpt).max())}
    if kind == "rotation":
        target = (Q[m] ** 2 + P[m] ** 2) / 2
        resid = A.values[m] - c - target
        return {"form": "(q^2 + p^2)/2 + c",
                "relative_residual": float(np.linalg.norm(resid) / np.linalg.norm(target))}
    return {}


def cmd_factorize(args, cfg) -> int:
    spec = io.load_generator_file(args.generator)
    pg = make_conjugate_grid(cfg.grid, cfg.hbar)
    alpha = _build_generator(spec, pg)
    resid = factorizability_residual(alpha, seed=cfg.seed)
    A = generator_symbol(alpha, args.c)
    K = quantize_generator(A)
    out = _out(args, "generator.json")
    io.save_kernel(out, K)
    io.write_field_csv(args.symbol_csv or str(out.with_suffix("")) + ".symbol.csv", A, header="q,p,A")
    thr = cfg.tolerances.factorizable_residual
    report = {"kind": spec["kind"], "residual": resid, "threshold": thr,
              "factorizable": bool(resid <= thr), "skew": alpha.skew}
    report.update(symbol_fit(spec["kind"], A, args.c))
    print(json.dumps(report, sort_keys=True))
    if not report["factorizable"]:
        print("not factorizable: residual above threshold", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args, cfg) -> int:
    fields = [io.load_wigner(p) for p in args.inputs]
    tol = cfg.tolerances
    reports = []
    for W in fields:
        reports += [check_purity(W, tol.purity_rel), check_norm(W, tol.norm_abs)]
    for i in range(len(fields)):
        for j in range(i + 1, len(fields)):
            reports.append(check_orthogonality(fields[i], fields[j], tol.orthogonality_abs))
    return EXIT_OK if _emit(reports) else EXIT_VALIDATION


def cmd_bench(args, cfg) -> int:
    from .bench import format_csv, run_benchmark

    try:
        sizes = tuple(int(s) for s in args.sizes.split(","))
    except ValueError as exc:
        raise FormatError(f"bad --sizes {args.sizes!r}") from exc
    text = format_csv(run_benchmark(sizes, cfg.hbar, args.repeat))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {
    "state": cmd_state,
    "wigner": cmd_wigner,
    "reconstruct": cmd_reconstruct,
    "superpose": cmd_superpose,
    "factorize": cmd_factorize,
    "verify": cmd_verify,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    with warnings.catch_warnings():
        warnings.showwarning = _show_warning
        return _run(args)


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


def _run(args) -> int:
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except (FormatError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DegenerateError as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ValidationError, GridMismatchError) as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (WignerLabError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
