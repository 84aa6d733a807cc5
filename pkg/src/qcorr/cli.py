"""Command-line front end: build states, evaluate measures, sweep detectors, verify.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 measure or
dimension mismatch.  Standard output carries only data; diagnostics go to
standard error at the level selected by the QC_LOG environment variable
(error, warn, info, debug).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import detector, measures, states, verify
from .errors import DimensionMismatchError, InvalidStateError
from .linalg import validate_density

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_MISMATCH = 3

_MEASURES = (
    "entropy",
    "mutual-info",
    "fidelity",
    "schmidt",
    "concurrence",
    "ppt",
    "chsh",
    "d3",
    "discord-opt",
    "classical-cq",
)


def _fmt(x: float) -> str:
    """17 significant digits: enough to round-trip IEEE doubles exactly."""
    return format(float(x), ".17g")


def _configure_logging() -> None:
    level = {
        "error": logging.ERROR,
        "warn": logging.WARNING,
        "info": logging.INFO,
        "debug": logging.DEBUG,
    }.get(os.environ.get("QC_LOG", "warn").lower(), logging.WARNING)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(message)s")


# ---------------------------------------------------------------------------
# state files


def write_state_file(path: str, rho: np.ndarray, dim_a: int, dim_b: int) -> None:
    """Serialize a bipartite density matrix as JSON with [re, im] pairs."""
    rows = []
    for i in range(rho.shape[0]):
        cells = ", ".join(
            f"[{_fmt(rho[i, j].real)}, {_fmt(rho[i, j].imag)}]" for j in range(rho.shape[1])
        )
        rows.append(f"    [{cells}]")
    body = ",\n".join(rows)
    text = (
        "{\n"
        f'  "dims": [{dim_a}, {dim_b}],\n'
        '  "matrix": [\n'
        f"{body}\n"
        "  ]\n"
        "}\n"
    )
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def read_state_file(path: str) -> tuple[np.ndarray, int, int]:
    """Parse and validate a state file; raises InvalidStateError on bad input."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InvalidStateError(f"cannot read state file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidStateError(f"state file {path} is not valid JSON: {exc}") from exc
    try:
        dim_a, dim_b = (int(d) for d in data["dims"])
        matrix = data["matrix"]
        dim = dim_a * dim_b
        rho = np.empty((dim, dim), dtype=complex)
        if len(matrix) != dim:
            raise ValueError(f"expected {dim} rows, found {len(matrix)}")
        for i, row in enumerate(matrix):
            if len(row) != dim:
                raise ValueError(f"row {i} has {len(row)} entries, expected {dim}")
            for j, (re, im) in enumerate(row):
                rho[i, j] = complex(float(re), float(im))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidStateError(f"malformed state file {path}: {exc}") from exc
    if dim_a < 1 or dim_b < 1:
        raise InvalidStateError("dims must be positive")
    report = validate_density(rho, tol=1e-8)
    if not report.ok:
        raise InvalidStateError(
            f"state file {path} fails density validation: hermiticity {report.hermiticity_defect:.2e}, "
            f"trace {report.trace_defect:.2e}, min eigenvalue {report.min_eigenvalue:.2e}"
        )
    return rho, dim_a, dim_b


# ---------------------------------------------------------------------------
# state command


def _floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip() != ""]


def _build_state(args) -> tuple[np.ndarray, int, int]:
    fam = args.family
    if fam == "werner":
        return states.werner(args.p), 2, 2
    if fam == "bell":
        psi = states.bell_state(args.kind)
        return np.outer(psi, psi.conj()), 2, 2
    if fam == "pseudo-pure":
        if args.psi is not None:
            with open(args.psi) as fh:
                pairs = json.load(fh)
            psi = np.array([complex(re, im) for re, im in pairs])
        else:
            psi = states.singlet()
        rho = states.pseudo_pure(psi, args.p)
        half = int(round(np.sqrt(rho.shape[0])))
        return rho, half, half
    if fam == "classical":
        dims = [int(d) for d in args.dims.split(",")]
        if len(dims) != 2:
            raise ValueError("--dims must be 'dimA,dimB'")
        probs = np.array(_floats(args.probs)).reshape(dims[0], dims[1])
        return states.classical_bipartite(probs), dims[0], dims[1]
    if fam == "tile-vector":
        tiles, stopper = states.tile_basis()
        if args.index.upper() == "S":
            vec = stopper
        else:
            idx = int(args.index)
            if not 1 <= idx <= 9:
                raise ValueError("tile index must be 1..9 or S")
            vec = tiles[idx - 1]
        return np.outer(vec, vec.conj()), 3, 3
    if fam == "tiles-bound":
        return states.bound_entangled_tiles(), 3, 3
    if fam == "cq":
        alphas = _floats(args.alphas)
        dim_a = len(alphas)
        basis = [np.eye(dim_a, dtype=complex)[i] for i in range(dim_a)]
        taus = [
            np.outer(v, v.conj())
            for v in (
                states.random_pure(args.dim_b, seed=args.seed + i) for i in range(dim_a)
            )
        ]
        return states.cq_state(alphas, basis, taus), dim_a, args.dim_b
    if fam == "random-density":
        rho = states.random_density(args.dim_a * args.dim_b, rank=args.rank, seed=args.seed)
        return rho, args.dim_a, args.dim_b
    if fam == "random-pure":
        psi = states.random_pure(args.dim_a * args.dim_b, seed=args.seed)
        return np.outer(psi, psi.conj()), args.dim_a, args.dim_b
    raise ValueError(f"unknown family {fam!r}")


def _cmd_state(args) -> int:
    try:
        rho, dim_a, dim_b = _build_state(args)
        write_state_file(args.out, rho, dim_a, dim_b)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    logger.info("wrote %s (%dx%d over %d x %d)", args.out, *rho.shape, dim_a, dim_b)
    return EXIT_OK


# ---------------------------------------------------------------------------
# measure command


def _measure_lines(args, rho, dim_a, dim_b) -> tuple[list[str], dict]:
    name = args.name
    if name == "entropy":
        v = measures.vn_entropy(rho)
        return [_fmt(v)], {"measure": name, "value": v}
    if name == "mutual-info":
        v = measures.mutual_information(rho, dim_a, dim_b)
        return [_fmt(v)], {"measure": name, "value": v}
    if name == "fidelity":
        if args.state2 is None:
            raise DimensionMismatchError("fidelity needs --state2")
        sigma, _, _ = read_state_file(args.state2)
        v = measures.fidelity(rho, sigma)
        return [_fmt(v)], {"measure": name, "value": v}
    if name == "schmidt":
        vals, vecs = np.linalg.eigh(rho)
        if vals[-1] < 1.0 - 1e-8:
            raise DimensionMismatchError(
                "schmidt decomposition needs a pure state (largest eigenvalue < 1)"
            )
        dec = measures.schmidt_decompose(vecs[:, -1], dim_a, dim_b)
        coeffs = list(dec.coefficients)
        return (
            ["schmidt_coefficients " + " ".join(_fmt(c) for c in coeffs)],
            {"measure": name, "coefficients": coeffs},
        )
    if name == "concurrence":
        v = measures.concurrence(rho)
        return [_fmt(v)], {"measure": name, "value": v}
    if name == "ppt":
        res = measures.ppt_check(rho, dim_a, dim_b)
        lines = [
            f"is_ppt {'true' if res.is_ppt else 'false'}",
            f"min_eigenvalue {_fmt(res.min_eigenvalue)}",
            f"negativity {_fmt(res.negativity)}",
        ]
        return lines, {
            "measure": name,
            "is_ppt": res.is_ppt,
            "min_eigenvalue": res.min_eigenvalue,
            "negativity": res.negativity,
        }
    if name == "chsh":
        v = measures.chsh_max(rho)
        return [_fmt(v)], {"measure": name, "value": v}
    if name == "d3":
        if args.basis == "computational":
            basis = np.eye(dim_a, dtype=complex)
            projs = measures.projectors_from_basis(basis)
            v = measures.discord_for_measurement(rho, dim_a, dim_b, projs)
            return [_fmt(v)], {"measure": name, "value": v, "basis": "computational"}
        v, degenerate = measures.dephasing_discord(rho, dim_a, dim_b)
        lines = [_fmt(v), f"degenerate {'true' if degenerate else 'false'}"]
        return lines, {"measure": name, "value": v, "degenerate": degenerate}
    if name == "discord-opt":
        v = measures.discord_projective_opt(rho, dim_a, dim_b)
        return [_fmt(v)], {"measure": name, "value": v}
    if name == "classical-cq":
        res = measures.is_classical_quantum(rho, dim_a, dim_b)
        lines = [
            res.verdict,
            f"discord {_fmt(res.discord)}",
            f"degenerate {'true' if res.degenerate else 'false'}",
        ]
        return lines, {
            "measure": name,
            "verdict": res.verdict,
            "discord": res.discord,
            "degenerate": res.degenerate,
        }
    raise ValueError(f"unknown measure {name!r}")


def _cmd_measure(args) -> int:
    try:
        rho, dim_a, dim_b = read_state_file(args.state)
    except InvalidStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    try:
        lines, payload = _measure_lines(args, rho, dim_a, dim_b)
    except InvalidStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (DimensionMismatchError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in lines:
            print(line)
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep command


def _sweep_csv(rows) -> str:
    lines = [",".join(detector.SWEEP_COLUMNS)]
    for r in rows:
        lines.append(
            ",".join(
                [
                    _fmt(r.omega_sigma),
                    _fmt(r.l_over_sigma),
                    _fmt(r.a_prob),
                    _fmt(r.abs_x),
                    _fmt(r.c_corr),
                    _fmt(r.e_joint),
                    _fmt(r.concurrence),
                    _fmt(r.d3_over_eps0_sq),
                    _fmt(r.corr_coeff),
                    r.flags,
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _sweep_json(rows) -> str:
    entries = []
    for r in rows:
        fields = [
            f'"omega_sigma": {_fmt(r.omega_sigma)}',
            f'"l_over_sigma": {_fmt(r.l_over_sigma)}',
            f'"a_prob": {_fmt(r.a_prob)}',
            f'"abs_x": {_fmt(r.abs_x)}',
            f'"c_corr": {_fmt(r.c_corr)}',
            f'"e_joint": {_fmt(r.e_joint)}',
            f'"concurrence": {_fmt(r.concurrence)}',
            f'"d3_over_eps0_sq": {_fmt(r.d3_over_eps0_sq)}',
            f'"corr_coeff": {_fmt(r.corr_coeff)}',
            f'"flags": "{r.flags}"',
        ]
        entries.append("  {" + ", ".join(fields) + "}")
    return "[\n" + ",\n".join(entries) + "\n]\n"


def _render_heatmap(rows, omega_values, l_values, svg_path: str) -> None:
    """Discord heatmap over the sweep grid with the |X| = A contour overlaid."""
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "qcorr-sweep"
    import matplotlib.pyplot as plt

    n_w, n_l = len(omega_values), len(l_values)
    d3 = np.array([r.d3_over_eps0_sq for r in rows]).reshape(n_w, n_l)
    gap = np.array([r.abs_x - r.a_prob for r in rows]).reshape(n_w, n_l)

    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    mesh = ax.pcolormesh(l_values, omega_values, d3, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="discord / eps0^2")
    if n_w >= 2 and n_l >= 2:
        ax.contour(l_values, omega_values, gap, levels=[0.0], colors="red", linewidths=1.2)
    ax.set_xlabel("separation L / sigma")
    ax.set_ylabel("gap Omega * sigma")
    ax.set_title("detector discord; red: entanglement boundary")
    fig.savefig(svg_path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _cmd_sweep(args) -> int:
    if (
        args.eps0 <= 0
        or args.omega_sigma_min <= 0
        or args.l_min < 1e-3
        or args.omega_sigma_max < args.omega_sigma_min
        or args.l_max < args.l_min
        or args.omega_sigma_steps < 1
        or args.l_steps < 1
    ):
        print("error: invalid sweep ranges", file=sys.stderr)
        return EXIT_INPUT_ERROR
    omega_values = np.linspace(args.omega_sigma_min, args.omega_sigma_max, args.omega_sigma_steps)
    l_values = np.linspace(args.l_min, args.l_max, args.l_steps)
    rows = detector.sweep(omega_values, l_values, args.eps0)
    text = _sweep_csv(rows) if args.format == "csv" else _sweep_json(rows)
    with open(args.out, "w", newline="\n") as fh:
        fh.write(text)
    logger.info("wrote %d sweep rows to %s", len(rows), args.out)
    if args.svg is not None:
        _render_heatmap(rows, omega_values, l_values, args.svg)
        logger.info("wrote heatmap to %s", args.svg)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify command


def _cmd_verify(args) -> int:
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    passed = failed = 0
    for name in names:
        for check in verify.SUITES[name](args.seed):
            tag = "PASS" if check.passed else "FAIL"
            detail = f"  ({check.detail})" if check.detail else ""
            print(f"[{tag}] {name}: {check.name}{detail}")
            if check.passed:
                passed += 1
            else:
                failed += 1
    print(f"{passed} passed, {failed} failed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcorr", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_state = sub.add_parser("state", help="build a named state and write it to disk")
    p_state.add_argument(
        "family",
        choices=[
            "werner",
            "bell",
            "pseudo-pure",
            "classical",
            "tile-vector",
            "tiles-bound",
            "cq",
            "random-density",
            "random-pure",
        ],
    )
    p_state.add_argument("--p", type=float, default=0.5, help="mixing parameter")
    p_state.add_argument("--kind", default="psi-", help="bell state label")
    p_state.add_argument("--psi", default=None, help="JSON file of [re, im] amplitudes")
    p_state.add_argument("--probs", default="", help="comma-separated joint probabilities")
    p_state.add_argument("--dims", default="2,2", help="dimA,dimB for classical tables")
    p_state.add_argument("--index", default="1", help="tile index 1..9 or S")
    p_state.add_argument("--alphas", default="0.5,0.5", help="CQ mixture weights")
    p_state.add_argument("--dim-a", type=int, default=2)
    p_state.add_argument("--dim-b", type=int, default=2)
    p_state.add_argument("--rank", type=int, default=None)
    p_state.add_argument("--seed", type=int, default=0)
    p_state.add_argument("--out", required=True)
    p_state.add_argument("--format", choices=["json"], default="json")
    p_state.set_defaults(func=_cmd_state)

    p_meas = sub.add_parser("measure", help="evaluate a measure on a state file")
    p_meas.add_argument("name", choices=_MEASURES)
    p_meas.add_argument("--state", required=True)
    p_meas.add_argument("--state2", default=None)
    p_meas.add_argument("--basis", choices=["eigen", "computational"], default="eigen")
    p_meas.add_argument("--json", action="store_true")
    p_meas.set_defaults(func=_cmd_measure)

    p_sweep = sub.add_parser("sweep", help="scan the two-detector model over a grid")
    p_sweep.add_argument("--eps0", type=float, required=True)
    p_sweep.add_argument("--omega-sigma-min", type=float, required=True)
    p_sweep.add_argument("--omega-sigma-max", type=float, required=True)
    p_sweep.add_argument("--omega-sigma-steps", type=int, required=True)
    p_sweep.add_argument("--l-min", type=float, required=True)
    p_sweep.add_argument("--l-max", type=float, required=True)
    p_sweep.add_argument("--l-steps", type=int, required=True)
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("--format", choices=["csv", "json"], default="csv")
    p_sweep.add_argument("--svg", default=None, help="optional heatmap output path")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_ver = sub.add_parser("verify", help="run the built-in invariant suites")
    p_ver.add_argument("--suite", choices=["core", "measures", "detector", "all"], default="all")
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except DimensionMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
