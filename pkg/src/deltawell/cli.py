"""Command-line client for the service endpoints.

The CLI never computes anything itself: it posts to the HTTP API, either
a remote server given with --server or the in-process ASGI app.  Data
goes to stdout (or --out) as CSV or JSON with shortest round-trip float
formatting; diagnostics go to stderr.

Exit codes: 0 success, 1 usage or validation error, 2 internal
cross-check mismatch, 3 physics-check failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

import httpx

DEFAULT_SEED = 20240824

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2
EXIT_PHYSICS = 3


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message: str) -> None:  # noqa: A002 - argparse API
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _units(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected H,M,L")
    hbar, mass, width = (float(p) for p in parts)
    if hbar <= 0 or mass <= 0 or width <= 0:
        raise argparse.ArgumentTypeError("units must be positive")
    return hbar, mass, width


def _float_list(text: str) -> list[float]:
    return [float(p) for p in text.split(",") if p.strip()]


def _onoff(text: str) -> bool:
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected on or off")
    return text == "on"


def build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--units", type=_units, default=(1.0, 1.0, 1.0),
                        metavar="H,M,L", help="hbar, mass, width (default 1,1,1)")
    common.add_argument("--format", choices=("json", "csv"), default="csv")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="seed recorded with the run for reproducibility")
    common.add_argument("--server", default=None,
                        help="base URL of a running service; in-process if omitted")

    parser = _Parser(prog="deltawell",
                     description="reformed square-well workbench client")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common])
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--method", choices=("direct", "matching", "both"),
                   default="direct")

    p = sub.add_parser("residual", parents=[common])
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--amp-sin", type=float, default=0.0)
    p.add_argument("--amp-cos", type=float, default=0.0)
    p.add_argument("--energy", type=float, required=True)

    p = sub.add_parser("ehrenfest", parents=[common])
    p.add_argument("--packet", required=True, help="packet JSON path")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--oracle", type=_onoff, default=True, metavar="{on,off}")
    p.add_argument("--grid", type=int, default=10_000)
    p.add_argument("--normalize", action="store_true")

    p = sub.add_parser("finite", parents=[common])
    p.add_argument("--v0", type=float, default=None)
    p.add_argument("--v0-list", type=_float_list, default=None)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--recovery", type=_onoff, default=True, metavar="{on,off}")

    p = sub.add_parser("sample", parents=[common])
    p.add_argument("--kind", choices=("eigenstate", "vpsi", "finite"),
                   default="eigenstate")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--v0", type=float, default=None)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--x-min", type=float, default=None)
    p.add_argument("--x-max", type=float, default=None)

    return parser


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=300.0)
    import warnings

    from .service import app

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    # Drives the ASGI app in-process; same wire format as a live server.
    return TestClient(app, raise_server_exceptions=False)


def _post(args: argparse.Namespace, path: str, payload: dict) -> tuple[dict | None, int]:
    with _client(args.server) as client:
        resp = client.post(path, json=payload)
    if resp.status_code >= 500:
        print(f"internal error: {resp.text}", file=sys.stderr)
        return None, EXIT_MISMATCH
    if resp.status_code >= 400:
        print(f"request rejected: {resp.text}", file=sys.stderr)
        return None, EXIT_USAGE
    return resp.json(), EXIT_OK


def _fmt(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _emit(args: argparse.Namespace, payload: dict, header: Sequence[str],
          rows: Sequence[Sequence[Any]], comments: Sequence[str] = ()) -> None:
    if args.format == "json":
        text = json.dumps({"command": args.command, "seed": args.seed, **payload},
                          sort_keys=True, indent=2) + "\n"
    else:
        lines = [",".join(header)]
        lines.extend(comments)
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _units_payload(args: argparse.Namespace) -> dict:
    hbar, mass, width = args.units
    return {"hbar": hbar, "mass": mass, "width": width}


def cmd_spectrum(args: argparse.Namespace) -> int:
    data, code = _post(args, "/spectrum", {
        "units": _units_payload(args), "n_max": args.n_max, "method": args.method})
    if data is None:
        return code
    header = ["n", "k", "energy", "jump_left", "jump_right"]
    keys = list(header)
    if args.method == "both":
        header.append("agree")
        keys.append("agree")
    rows = [[r[k] for k in keys] for r in data["rows"]]
    _emit(args, data, header, rows)
    return EXIT_MISMATCH if data["mismatch"] else EXIT_OK


def cmd_residual(args: argparse.Namespace) -> int:
    data, code = _post(args, "/residual", {
        "units": _units_payload(args), "k": args.k, "amp_sin": args.amp_sin,
        "amp_cos": args.amp_cos, "energy": args.energy})
    if data is None:
        return code
    header = ["c0_max_coeff", "c1_divergent", "c1_re", "c1_im",
              "c2_divergent", "c2_re", "c2_im", "passes"]
    row = [data["c0_max_coeff"],
           data["c1"]["divergent"], data["c1"]["re"], data["c1"]["im"],
           data["c2"]["divergent"], data["c2"]["re"], data["c2"]["im"],
           data["passes"]]
    _emit(args, data, header, [row])
    return EXIT_OK if data["passes"] else EXIT_PHYSICS


def _load_packet(args: argparse.Namespace) -> dict | None:
    try:
        with open(args.packet, encoding="utf-8") as fh:
            doc = json.load(fh)
        coeffs = [{"re": float(c.get("re", 0.0)), "im": float(c.get("im", 0.0))}
                  for c in doc["coeffs"]]
    except (OSError, ValueError, KeyError, TypeError, AttributeError) as exc:
        print(f"cannot read packet file {args.packet}: {exc}", file=sys.stderr)
        return None
    hbar, mass, width = args.units
    return {
        "hbar": float(doc.get("hbar", hbar)),
        "mass": float(doc.get("mass", mass)),
        "width": float(doc.get("L", width)),
        "coeffs": coeffs,
    }


def cmd_ehrenfest(args: argparse.Namespace) -> int:
    packet = _load_packet(args)
    if packet is None:
        return EXIT_USAGE
    data, code = _post(args, "/ehrenfest", {
        "units": {k: packet[k] for k in ("hbar", "mass", "width")},
        "coeffs": packet["coeffs"], "normalize": args.normalize,
        "t0": args.t0, "t1": args.t1, "steps": args.steps,
        "oracle": args.oracle, "grid": args.grid})
    if data is None:
        return code
    header = ["t", "p_series", "dpdt_series", "dVdx_series", "residual",
              "p_quadrature"]
    rows = [[r[k] for k in header] for r in data["rows"]]
    _emit(args, data, header, rows)
    return EXIT_OK if data["passed"] else EXIT_PHYSICS


def cmd_finite(args: argparse.Namespace) -> int:
    data, code = _post(args, "/finite", {
        "units": _units_payload(args), "v0": args.v0, "v0_list": args.v0_list,
        "n": args.n, "recovery": args.recovery})
    if data is None:
        return code
    if args.v0_list is not None:
        header = ["V0", "k", "gap", "edge_slope", "exterior_prob"]
        rows = [[r[k] for k in header] for r in data["sweep"]]
    else:
        header = ["k", "q", "a", "A", "energy"]
        if args.recovery:
            header.append("recovery_ok")
        rows = [[r[k] for k in header] for r in data["rows"]]
    _emit(args, data, header, rows)
    return EXIT_OK if data["passed"] else EXIT_PHYSICS


def cmd_sample(args: argparse.Namespace) -> int:
    data, code = _post(args, "/sample", {
        "units": _units_payload(args), "kind": args.kind, "n": args.n,
        "v0": args.v0, "points": args.points,
        "x_min": args.x_min, "x_max": args.x_max})
    if data is None:
        return code
    comments = [
        f"# atom anchor={_fmt(a['anchor'])} order={a['order']} "
        f"weight={_fmt(a['weight_re'])}{'+' if a['weight_im'] >= 0 else ''}"
        f"{_fmt(a['weight_im'])}j"
        for a in data["atoms"]
    ]
    rows = [[r["x"], r["re"], r["im"]] for r in data["rows"]]
    _emit(args, data, ["x", "re", "im"], rows, comments=comments)
    return EXIT_OK


_HANDLERS = {
    "spectrum": cmd_spectrum,
    "residual": cmd_residual,
    "ehrenfest": cmd_ehrenfest,
    "finite": cmd_finite,
    "sample": cmd_sample,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return _HANDLERS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
