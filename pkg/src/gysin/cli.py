"""Command-line front end for the exact-arithmetic engine.

The CLI is a thin client: every subcommand builds a request, posts it to
the in-process HTTP service (:func:`gysin.service.create_app` mounted on
an ASGI transport — no socket is opened), and renders the returned report
in the requested format.  ``json``, ``csv``, and ``markdown`` all render
the same report object, so switching formats never changes the data.

Exit status: 0 when the command succeeds and every certificate in the
report passes, 1 when a certificate fails, 2 on usage or engine errors.
"""

from __future__ import annotations

import argparse
import asyncio
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field

import httpx

from .algebra import DEFAULT_DEGREE_CAP
from .service import create_app

OUTPUT_DIR_ENV = "GYSIN_OUTPUT_DIR"
FORMATS = ("json", "csv", "markdown")


@dataclass
class RunConfig:
    """Validated parameters of one CLI invocation."""

    command: str
    fmt: str = "json"
    output: str | None = None
    truncation: int = DEFAULT_DEGREE_CAP
    maxdeg: int = 4
    payload: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.fmt not in FORMATS:
            raise ValueError(f"format must be one of {', '.join(FORMATS)}")
        if self.maxdeg < 0:
            raise ValueError("maxdeg must be non-negative")
        if self.maxdeg > self.truncation:
            raise ValueError(
                f"maxdeg {self.maxdeg} exceeds the truncation budget "
                f"{self.truncation}"
            )


def _parse_range(text, flag):
    """Parse 'a:b' (inclusive) into a pair, rejecting empty ranges."""
    try:
        lo, hi = (int(part) for part in text.split(":", 1))
    except ValueError:
        raise ValueError(f"{flag} expects 'lo:hi', got {text!r}") from None
    if lo > hi:
        raise ValueError(f"{flag} range {text!r} is empty")
    return lo, hi


def _call(path, payload):
    """Post one request to the in-process service."""
    app = create_app()

    async def go():
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://gysin"
        ) as client:
            response = await client.post(path, json=payload)
            return response.status_code, response.json()

    return asyncio.run(go())


# ---------------------------------------------------------------------------
# rendering


def _table_for(command, report):
    """Extract (headers, rows, footers) for csv/markdown rendering."""
    if command == "generators":
        with_bidegree = any("bidegree" in row for row in report["rows"])
        headers = ["name", "degree"] + (["p", "q"] if with_bidegree else [])
        rows = []
        for row in report["rows"]:
            out = [row["name"], row["degree"]]
            if with_bidegree:
                out.extend(row.get("bidegree", ["", ""]))
            rows.append(out)
        return headers, rows, []

    if command == "hilbert":
        if "rows" in report:  # collapse-consistency report
            rows = [
                [r["degree"], r["check"], r["left"], r["right"], r["ok"]]
                for r in report["rows"]
            ]
            footer = ["PASS" if report["passed"] else "FAIL"]
            return ["degree", "check", "left", "right", "ok"], rows, footer
        if report.get("variable") == "t":
            rows = list(enumerate(report["coefficients"]))
            return ["degree", "dim"], rows, []
        rows = [
            [c["p"], c["q"], c["count"]] for c in report["coefficients"]
        ]
        return ["p", "q", "count"], rows, []

    if command == "grr":
        rows = [
            ["r", report["r"]],
            ["s", report["s"]],
            ["lambda", report["degree2"]["lambda"]],
            ["zeta", report["degree2"]["zeta"]],
            ["m01", report["degree2"]["m01"]],
            ["integral", report["integral"]],
            ["closed_form_match", report["closed_form_match"]],
        ]
        footer = ["PASS" if report["passed"] else "FAIL"]
        return ["field", "value"], rows, footer

    if command == "basis-check":
        headers = ["model"] + report["basis"]
        rows = [
            [label] + list(vec)
            for label, vec in zip(report["models"], report["vectors"])
        ]
        footer = []
        if "determinant" in report:
            footer.append(f"determinant: {report['determinant']}")
            footer.append("PASS" if report["passed"] else "FAIL")
        return headers, rows, footer

    if command == "orders":
        headers = [
            "g",
            "k",
            "h3_pic",
            "h1",
            "h3_gamma",
            "eta_lambda",
            "eta_zeta",
            "eta_m01",
            "section",
        ]
        rows = []
        for r in report["rows"]:
            rows.append(
                [
                    r["g"],
                    r["k"],
                    r["h3_pic_order"],
                    r["h1_mg_pic0_order"],
                    r["h3_gamma_tilde_order"],
                    r["eta_vector"][0],
                    r["eta_vector"][1],
                    r["eta_vector"][2],
                    r["section_exists"],
                ]
            )
        return headers, rows, []

    if command == "restrict":
        rows = [[r["name"], r["value"]] for r in report["rows"]]
        return ["class", "restriction"], rows, []

    if command == "certify":
        rows = [
            [c["name"], "PASS" if c["passed"] else "FAIL", c["detail"]]
            for c in report["certificates"]
        ]
        footer = ["PASS" if report["passed"] else "FAIL"]
        return ["certificate", "status", "detail"], rows, footer

    raise ValueError(f"no table renderer for {command!r}")


def render(command, report, fmt):
    """Render the report object in the requested format."""
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    headers, rows, footers = _table_for(command, report)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(headers)
        writer.writerows(rows)
        for line in footers:
            writer.writerow([line])
        return buf.getvalue()
    lines = [
        "| " + " | ".join(str(h) for h in headers) + " |",
        "| " + " | ".join("---" for _ in headers) + " |",
    ]
    for row in rows:
        lines.append("| " + " | ".join(str(v) for v in row) + " |")
    lines.extend(f"\n**{line}**" for line in footers)
    return "\n".join(lines) + "\n"


def _emit(text, output):
    if output is None:
        sys.stdout.write(text)
        return
    directory = os.environ.get(OUTPUT_DIR_ENV)
    if directory and not os.path.isabs(output):
        output = os.path.join(directory, output)
    with open(output, "w", encoding="utf-8") as fh:
        fh.write(text)
    sys.stdout.write(output + "\n")


# ---------------------------------------------------------------------------
# argument parsing


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gysin",
        description=(
            "Exact characteristic-class computations for surface "
            "bundles and their universal Picard fibrations"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, maxdeg_default=4):
        p.add_argument(
            "--format",
            dest="fmt",
            choices=FORMATS,
            default="json",
            help="output rendering (default json)",
        )
        p.add_argument(
            "--output",
            default=None,
            help=f"write to this path (relative paths join ${OUTPUT_DIR_ENV})",
        )
        p.add_argument(
            "--truncation",
            type=int,
            default=DEFAULT_DEGREE_CAP,
            help="degree budget cap",
        )
        p.add_argument("--maxdeg", type=int, default=maxdeg_default)

    p = sub.add_parser("generators", help="generator table of a stable ring")
    p.add_argument("--ring", default="hol")
    p.add_argument("--g", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--variant", choices=("boundary", "closed"))
    common(p)

    p = sub.add_parser("hilbert", help="Hilbert series of a stable ring")
    p.add_argument("--ring", default="hol")
    p.add_argument("--g", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--variant", choices=("boundary", "closed"))
    p.add_argument(
        "--check-collapse",
        action="store_true",
        help="verify the graded dimension identities instead",
    )
    common(p)

    p = sub.add_parser("grr", help="degree-2 index expansion")
    p.add_argument("--r", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--symbolic", action="store_true")
    common(p, maxdeg_default=2)

    p = sub.add_parser("basis-check", help="free-basis certificate")
    p.add_argument(
        "--model",
        action="append",
        default=None,
        help="named model (declared, trivial, hirzebruch) or a .json file; "
        "repeatable; default: the three standard models",
    )
    common(p)

    p = sub.add_parser("orders", help="torsion orders over a (g,k) grid")
    p.add_argument("--g", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--g-range", dest="g_range")
    p.add_argument("--k-range", dest="k_range")
    common(p)

    p = sub.add_parser("restrict", help="restrict classes to a trivial family")
    p.add_argument("--g", type=int, default=6)
    p.add_argument("--k", type=int, default=0)
    p.add_argument(
        "--class",
        dest="classes",
        action="append",
        required=True,
        help="class expression, e.g. 'm_{0,1}' or 'zeta' (repeatable; "
        "quote braces in the shell)",
    )
    common(p, maxdeg_default=4)

    p = sub.add_parser("certify", help="run every engine certificate")
    p.add_argument("--g", type=int, default=6)
    p.add_argument("--k", type=int, default=0)
    common(p, maxdeg_default=20)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _build_config(args):
    if args.command == "serve":
        return RunConfig(command="serve")
    config = RunConfig(
        command=args.command,
        fmt=args.fmt,
        output=args.output,
        truncation=args.truncation,
        maxdeg=args.maxdeg,
    )

    if args.command == "generators":
        config.payload = {
            "ring": args.ring,
            "g": args.g,
            "k": args.k,
            "variant": args.variant,
            "maxdeg": args.maxdeg,
        }
    elif args.command == "hilbert":
        config.payload = {
            "ring": args.ring,
            "g": args.g,
            "k": args.k,
            "variant": args.variant,
            "maxdeg": args.maxdeg,
            "check_collapse": args.check_collapse,
        }
    elif args.command == "grr":
        if not args.symbolic and (args.r is None or args.s is None):
            raise ValueError("grr needs --r and --s, or --symbolic")
        config.payload = {
            "r": args.r,
            "s": args.s,
            "symbolic": args.symbolic,
            "maxdeg": args.maxdeg,
        }
    elif args.command == "basis-check":
        models = []
        custom = None
        for name in args.model or ():
            if name.endswith(".json"):
                if custom is not None:
                    raise ValueError("at most one custom model file")
                with open(name, encoding="utf-8") as fh:
                    custom = json.load(fh)
            else:
                models.append(name)
        config.payload = {
            "models": models or None,
            "custom_model": custom,
        }
    elif args.command == "orders":
        if args.g_range or args.k_range:
            if not (args.g_range and args.k_range):
                raise ValueError("--g-range and --k-range go together")
            g_min, g_max = _parse_range(args.g_range, "--g-range")
            k_min, k_max = _parse_range(args.k_range, "--k-range")
        else:
            if args.g is None or args.k is None:
                raise ValueError("orders needs --g/--k or the range flags")
            g_min = g_max = args.g
            k_min = k_max = args.k
        config.payload = {
            "g_min": g_min,
            "g_max": g_max,
            "k_min": k_min,
            "k_max": k_max,
        }
    elif args.command == "restrict":
        config.payload = {
            "g": args.g,
            "k": args.k,
            "classes": args.classes,
            "truncation": config.truncation,
        }
    elif args.command == "certify":
        config.payload = {
            "maxdeg": args.maxdeg,
            "g": args.g,
            "k": args.k,
        }
    return config


_ENDPOINTS = {
    "generators": "/v1/generators",
    "hilbert": "/v1/hilbert",
    "grr": "/v1/grr",
    "basis-check": "/v1/basis-check",
    "orders": "/v1/orders",
    "restrict": "/v1/restrict",
    "certify": "/v1/certify",
}


def _join_range_flags(argv):
    """Fold '--k-range -10:10' into '--k-range=-10:10' for argparse.

    Range values may start with a minus sign, which argparse would
    otherwise read as a new option.
    """
    out = []
    skip = False
    for i, token in enumerate(argv):
        if skip:
            skip = False
            continue
        if token in ("--g-range", "--k-range") and i + 1 < len(argv):
            out.append(f"{token}={argv[i + 1]}")
            skip = True
        else:
            out.append(token)
    return out


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(_join_range_flags(argv))
    try:
        config = _build_config(args)
    except (ValueError, OSError) as exc:
        parser.error(str(exc))

    if config.command == "serve":
        import uvicorn

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0

    status, report = _call(_ENDPOINTS[config.command], config.payload)
    if status != 200:
        detail = report.get("detail", report)
        if isinstance(detail, list):  # pydantic validation errors
            detail = "; ".join(
                e.get("msg", str(e)) if isinstance(e, dict) else str(e)
                for e in detail
            )
        sys.stderr.write(f"error: {detail}\n")
        return 2

    _emit(render(config.command, report, config.fmt), config.output)
    if report.get("passed") is False:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
