"""
Application entry point.
"""
import argparse
import logging
import sys

from .cli.commands import cmd_certify, cmd_compare, cmd_run, cmd_stationary
from .utils.logging import setup_logger


def _times(text):
    return [float(t) for t in text.split(",") if t.strip()]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="blendflow",
        description="Blended-gas pipeline flow: simulation, synchronization diagnostics, drift-flux comparison",
    )
    parser.add_argument("--verbose", action="store_true", help="Log per-step details")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="Run a scenario and write frames.csv and bounds.json")
    p_run.add_argument("scenario")
    p_run.add_argument("--out", default=".", help="Output directory")
    p_run.add_argument("--snapshots", type=_times, default=None, help="Comma-separated snapshot times")

    p_cert = sub.add_parser("certify", help="Certify the synchronization envelope")
    p_cert.add_argument("frames")
    p_cert.add_argument("bounds")
    p_cert.add_argument("--t-star", type=float, default=None)
    p_cert.add_argument("--tolerance", type=float, default=0.05, help="Relative envelope tolerance")
    p_cert.add_argument("--out", default=None, help="Directory for cert.json (default: next to frames)")

    p_cmp = sub.add_parser("compare", help="Compare the full model with the drift-flux model")
    p_cmp.add_argument("scenario")
    p_cmp.add_argument("--out", default=".")
    p_cmp.add_argument("--omega-bar", type=float, default=None, help="Override the coupling constant")

    p_st = sub.add_parser("stationary", help="Compute a stationary profile")
    p_st.add_argument("scenario")
    p_st.add_argument("--out", default=".")
    p_st.add_argument("--shoot", action="store_true", help="Match the outlet densities by shooting")
    return parser


def main(argv=None):
    """
    Main function to run the application.
    """
    args = build_parser().parse_args(argv)
    setup_logger(logging.DEBUG if args.verbose else logging.INFO)
    logging.info(f"blendflow {args.command} starting...")
    if args.command == "run":
        return cmd_run(args.scenario, args.out, args.snapshots)
    if args.command == "certify":
        return cmd_certify(args.frames, args.bounds, args.t_star, args.tolerance, args.out)
    if args.command == "compare":
        return cmd_compare(args.scenario, args.out, args.omega_bar)
    return cmd_stationary(args.scenario, args.out, args.shoot)


if __name__ == '__main__':
    sys.exit(main())
