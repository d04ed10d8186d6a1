"""Command line interface: one JSON job per invocation."""

import argparse
import json
import sys
from pathlib import Path

from . import __version__, codec, jobs
from .errors import ToolkitError

HELP = {
    "verify-loop": "check det = 1 and identity endpoints",
    "verify-homotopy": "check a homotopy certificate",
    "loop-mul": "multiply two loops",
    "winding": "exact winding number of a plane loop",
    "eta": "winding number of the first column of a loop over Q",
    "oracle": "compare the exact winding number with a numeric estimate",
    "decompose-nil": "elementary factorization of a matrix = I mod eps",
    "connect-identity": "path from I to a matrix = I mod eps",
    "contract-nil": "contract a loop that is I mod eps",
    "lift-nil": "lift a loop over Q to dual numbers",
    "injectivity-homotopy": "build M(X)(T)(W) from a, b and theta",
    "swan-weibel": "Swan-Weibel map on a polynomial or a loop",
    "basepoint-shift": "homotopy from a(X=1) to a",
    "product-split": "split a loop over a product ring",
    "gamma-mul": "product of two unimodular rows",
    "complete": "complete a unimodular row to a determinant-one matrix",
    "quillen-check": "verify a splitting over a double localization",
    "circle-degree": "degree of a unimodular row over the circle ring",
    "paper-suite": "re-run the built-in worked examples",
}


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--ring", default=argparse.SUPPRESS, help="ring descriptor: JSON file or inline JSON")
    p.add_argument("--json-out", default=argparse.SUPPRESS, metavar="PATH", help="write the JSON report ('-' for stdout)")
    p.add_argument("--refine-width", default=argparse.SUPPRESS, metavar="Q", help="refine root intervals to this rational width")
    return p


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="sl2loops", description=__doc__, parents=[common])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, text in HELP.items():
        sp = sub.add_parser(name, help=text, description=text, parents=[common])
        if name == "paper-suite":
            continue
        sp.add_argument("job", nargs="?", help="JSON job file (or inline JSON)")
        sp.add_argument("--job", "--matrix", "--loop", "--row", dest="job_opt", metavar="FILE", help="JSON job file")
        if name == "oracle":
            sp.add_argument("--samples", type=int, default=None, help="initial sample count (doubled until resolved)")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    json_out = getattr(args, "json_out", None)
    try:
        opts = {}
        if getattr(args, "ring", None) is not None:
            opts["ring"] = codec.load_json(args.ring)
        if getattr(args, "refine_width", None) is not None:
            opts["refine_width"] = codec.rational_from_text(args.refine_width)
        if args.command == "paper-suite":
            report = jobs.paper_suite()
        else:
            source = args.job_opt or args.job
            if source is None:
                raise ToolkitError(f"{args.command} needs a job file")
            if getattr(args, "samples", None) is not None:
                opts["samples"] = args.samples
            report = jobs.run_job(args.command, codec.load_json(source), **opts)
    except ToolkitError as exc:
        report = jobs.Report(args.command, error=str(exc), exit_code=exc.exit_code if exc.exit_code != 1 else 2)
    print(report.summary())
    if json_out:
        text = json.dumps(report.to_json(), indent=2, sort_keys=True)
        if json_out == "-":
            print(text)
        else:
            Path(json_out).write_text(text + "\n")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
