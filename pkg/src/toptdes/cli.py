"""Command-line front end; a thin client of the HTTP service.

Every subcommand builds a request, sends it to the service (in process
by default, or to ``--server URL``) and serializes the response.  Data
goes to stdout or ``--output``; diagnostics go to stderr.  Exit codes:
0 certified success, 1 numerical failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys

import numpy as np

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_INVALID = 2


def _parse_values(text: str) -> list[float]:
    """lo:hi:n sweep syntax or a comma-separated value list."""
    try:
        if ":" in text:
            lo, hi, n = text.split(":")
            count = int(n)
            if count < 2:
                raise ValueError("sweep needs at least 2 steps")
            return np.linspace(float(lo), float(hi), count).tolist()
        values = [float(tok) for tok in text.split(",") if tok.strip() != ""]
        if not values:
            raise ValueError("empty value list")
        return values
    except ValueError as err:
        raise argparse.ArgumentTypeError(
            f"expected lo:hi:n or comma-separated floats, got {text!r} ({err})"
        ) from None


def _parse_b(text: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"b must be comma-separated floats, got {text!r}"
        ) from None
    if not values:
        raise argparse.ArgumentTypeError("b must not be empty")
    return values


def _post(server: str | None, path: str, payload: dict) -> tuple[int, dict]:
    import httpx

    if server is not None:
        with httpx.Client(base_url=server, timeout=None) as client:
            resp = client.post(path, json=payload)
            return resp.status_code, resp.json()

    from .service import create_app

    async def run() -> tuple[int, dict]:
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://toptdes.internal"
        ) as client:
            resp = await client.post(path, json=payload)
            return resp.status_code, resp.json()

    return asyncio.run(run())


def _emit(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _diag(message: str) -> None:
    print(message, file=sys.stderr)


def _reject(status: int, payload: dict) -> int:
    detail = payload.get("detail", payload)
    _diag(f"error ({status}): {detail}")
    return EXIT_INVALID if status in (400, 422) else EXIT_NUMERICAL


def _jobs(args: argparse.Namespace) -> int:
    env = os.environ.get("TOPTDES_JOBS")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            _diag(f"ignoring non-integer TOPTDES_JOBS={env!r}")
    return args.jobs


def _options_payload(args: argparse.Namespace) -> dict:
    return {
        "max_outer_iters": args.max_outer_iters,
        "grid_size": args.grid_size,
        "cluster_delta": args.cluster_delta,
        "stop_gap_rel": args.stop_gap_rel,
        "polish_iters": args.polish_iters,
        "restarts": args.restarts,
        "seed": args.seed,
    }


def _add_solver_opts(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("solver options")
    group.add_argument("--max-outer-iters", type=int, default=5000)
    group.add_argument("--grid-size", type=int, default=None)
    group.add_argument("--cluster-delta", type=float, default=1e-3)
    group.add_argument("--stop-gap-rel", type=float, default=1e-6)
    group.add_argument("--polish-iters", type=int, default=200)
    group.add_argument("--restarts", type=int, default=4)
    group.add_argument("--seed", type=int, default=0)


def cmd_analytic(args: argparse.Namespace) -> int:
    payload = {
        "thm": args.thm,
        "m": args.m,
        "b1": args.b1,
        "b2": args.b2,
        "tol_rel": args.tol_rel,
    }
    status, body = _post(args.server, "/analytic", payload)
    if status != 200:
        return _reject(status, body)
    _emit(json.dumps(body, indent=2), args.output)
    if not body["certificate"]["passed"]:
        _diag("closed-form design failed its certificate")
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    payload = {
        "m": args.m,
        "k1": args.k1,
        "k2": args.k2,
        "b": args.b,
        "options": _options_payload(args),
    }
    status, body = _post(args.server, "/solve", payload)
    if status != 200:
        return _reject(status, body)
    _emit(json.dumps(body, indent=2), args.output)
    if body["status"] != "certified":
        _diag(f"solve failed: {body.get('error')}")
        return EXIT_NUMERICAL
    return EXIT_OK


def _load_design(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    # accept either a bare design or any command output carrying one
    if "design" in data and isinstance(data["design"], dict):
        data = data["design"]
    return {"points": data["points"], "weights": data["weights"]}


def cmd_check(args: argparse.Namespace) -> int:
    try:
        design = _load_design(args.design)
    except (OSError, ValueError, KeyError) as err:
        _diag(f"cannot read design file {args.design!r}: {err}")
        return EXIT_INVALID
    payload = {
        "m": args.m,
        "k1": args.k1,
        "k2": args.k2,
        "b": args.b,
        "design": design,
        "tol_rel": args.tol_rel,
    }
    status, body = _post(args.server, "/check", payload)
    if status != 200:
        return _reject(status, body)
    _emit(json.dumps(body, indent=2), args.output)
    return EXIT_OK if body["passed"] else EXIT_NUMERICAL


def _table_command(args: argparse.Namespace, path: str, payload: dict) -> int:
    status, body = _post(args.server, path, payload)
    if status != 200:
        return _reject(status, body)
    _emit(body["csv"], args.output)
    failures = body.get("failures") or []
    if failures:
        _diag(f"{len(failures)} unresolved rows: {failures}")
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_scan_regions(args: argparse.Namespace) -> int:
    payload = {
        "case": args.case,
        "b1_range": args.b1,
        "b2_range": args.b2,
        "jobs": _jobs(args),
        "options": _options_payload(args),
    }
    return _table_command(args, "/scan-regions", payload)


def cmd_trace(args: argparse.Namespace) -> int:
    payload = {
        "case": args.case,
        "b2": args.b2,
        "b1_range": args.b1,
        "jobs": _jobs(args),
        "options": _options_payload(args),
    }
    return _table_command(args, "/trace", payload)


def cmd_efficiency(args: argparse.Namespace) -> int:
    payload = {
        "b2_values": args.b2,
        "b1_range": args.b1,
        "jobs": _jobs(args),
        "options": _options_payload(args),
    }
    return _table_command(args, "/efficiency", payload)


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toptdes",
        description="T-optimal discriminating designs on the circle",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--server",
        default=None,
        help="service URL; default runs the service in process",
    )
    common.add_argument(
        "--output", default=None, help="write data here instead of stdout"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "analytic", parents=[common], help="closed-form design by case tag"
    )
    p.add_argument("--thm", required=True, help="3.1, 3.2, 3.4, 4.1 or 4.2")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--b1", type=float, default=None)
    p.add_argument("--b2", type=float, default=None)
    p.add_argument("--tol-rel", type=float, default=1e-6)
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser(
        "solve", parents=[common], help="certified numerical optimum"
    )
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k1", type=int, required=True)
    p.add_argument("--k2", type=int, required=True)
    p.add_argument("--b", type=_parse_b, required=True)
    _add_solver_opts(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser(
        "check", parents=[common], help="certify a design from a JSON file"
    )
    p.add_argument("--design", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k1", type=int, required=True)
    p.add_argument("--k2", type=int, required=True)
    p.add_argument("--b", type=_parse_b, required=True)
    p.add_argument("--tol-rel", type=float, default=1e-6)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser(
        "scan-regions",
        parents=[common],
        help="support-structure scan over a (b1, b2) grid, CSV",
    )
    p.add_argument("--case", required=True, help="m2 or m3")
    p.add_argument("--b1", type=_parse_values, required=True)
    p.add_argument("--b2", type=_parse_values, required=True)
    p.add_argument("--jobs", type=int, default=1)
    _add_solver_opts(p)
    p.set_defaults(func=cmd_scan_regions)

    p = sub.add_parser(
        "trace",
        parents=[common],
        help="support trajectories along a b1 sweep, CSV",
    )
    p.add_argument("--case", required=True)
    p.add_argument("--b2", type=float, required=True)
    p.add_argument("--b1", type=_parse_values, required=True)
    p.add_argument("--jobs", type=int, default=1)
    _add_solver_opts(p)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser(
        "efficiency",
        parents=[common],
        help="reference-design efficiency table, CSV",
    )
    p.add_argument("--b2", type=_parse_values, required=True)
    p.add_argument("--b1", type=_parse_values, required=True)
    p.add_argument("--jobs", type=int, default=1)
    _add_solver_opts(p)
    p.set_defaults(func=cmd_efficiency)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
