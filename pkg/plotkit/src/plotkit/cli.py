"""Batch figure rendering from simulator CSV outputs.

Either one JSON figure spec (``plotkit render --spec fig.json``) or a
per-figure subcommand with explicit paths.  Schema violations exit with
code 2 and a message naming the file and column.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import figures
from .schema import SchemaError


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="plotkit",
                                     description="Render simulator figures")
    sub = parser.add_subparsers(dest="command", required=True)

    p_render = sub.add_parser("render", help="render from a JSON figure spec")
    p_render.add_argument("--spec", required=True)

    p_ts = sub.add_parser("timeseries")
    p_ts.add_argument("--csv", required=True)
    p_ts.add_argument("--out", required=True)

    p_hm = sub.add_parser("heatmap")
    p_hm.add_argument("--csv", required=True)
    p_hm.add_argument("--curve", help="analytic-curve CSV overlay")
    p_hm.add_argument("--out", required=True)

    p_sc = sub.add_parser("scaling")
    p_sc.add_argument("--scaling-csv", required=True)
    p_sc.add_argument("--advantage-csv", required=True)
    p_sc.add_argument("--paradox-csv")
    p_sc.add_argument("--out", required=True)

    p_rw = sub.add_parser("rwa")
    p_rw.add_argument("--csv", required=True)
    p_rw.add_argument("--threshold", type=float, default=0.1)
    p_rw.add_argument("--out", required=True)

    args = parser.parse_args(argv)
    try:
        if args.command == "render":
            with open(args.spec) as fh:
                spec = json.load(fh)
            out = figures.render(spec)
        elif args.command == "timeseries":
            out = figures.render({"kind": "timeseries",
                                  "inputs": {"timeseries": args.csv},
                                  "output": args.out})
        elif args.command == "heatmap":
            inputs = {"survival": args.csv}
            if args.curve:
                inputs["analytic_curve"] = args.curve
            out = figures.render({"kind": "heatmap", "inputs": inputs,
                                  "output": args.out})
        elif args.command == "scaling":
            inputs = {"scaling": args.scaling_csv,
                      "advantage": args.advantage_csv}
            if args.paradox_csv:
                inputs["paradox"] = args.paradox_csv
            out = figures.render({"kind": "scaling_panel", "inputs": inputs,
                                  "output": args.out})
        else:
            out = figures.render({"kind": "rwa",
                                  "inputs": {"rwa": args.csv},
                                  "output": args.out,
                                  "style": {"threshold": args.threshold}})
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
