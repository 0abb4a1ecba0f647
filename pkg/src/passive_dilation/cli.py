"""Command-line interface.

Exit status is 0 for an affirmative verdict, 1 for a negative one and 2 for
malformed input. Reports go to standard output as JSON, diagnostics to
standard error.
"""

import argparse
import sys

from . import files
from .dilation import (
    check_dilatable,
    construct_dilation,
    random_dilatable_channel,
    verify_dilation,
)
from .gaussian import validate_channel
from .normal_form import compute_normal_form, reconstruction_residual
from .numerics import Tolerance, max_norm
from .symplectic import ModeOrdering, standard_form

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _tolerance(args):
    return Tolerance(rel=args.tol) if args.tol is not None else Tolerance()


def _report(command, tol, inputs=(), **sections):
    report = {"command": command}
    if inputs:
        report["input_digest"] = {str(p): files.digest(p) for p in inputs}
    report["tolerance"] = {"rel": tol.rel, "abs": tol.abs}
    report.update(sections)
    return report


def _load_channel(path, tol):
    try:
        c = files.channel_from_doc(files.read_document(path), tol)
    except files.FileFormatError as exc:
        raise InputError(str(exc)) from None
    valid = validate_channel(c, tol)
    if not valid:
        raise InputError(f"{path}: {valid.message}")
    return c


def _check_sections(c, l, tol):
    report = check_dilatable(c, l, tol)
    sigma = standard_form(c.n)
    comm_Y = max_norm(c.Y @ sigma - sigma @ c.Y)
    modes = report.min_modes if l is None else l
    verdicts = {
        "psd_ok": report.psd_ok,
        "commutes_ok": report.commutes_ok,
        "kernel_ok": report.kernel_ok,
        "modes_ok": 2 * modes >= report.rank_noise,
        "dilatable": report.overall(modes),
        "Y_commutes_with_sigma": comm_Y <= tol.bound(max(1.0, max_norm(c.Y))),
    }
    residuals = dict(report.residuals)
    residuals.update({
        "rank_noise": report.rank_noise,
        "rank_Y": report.rank_Y,
        "commutator_Y": comm_Y,
    })
    return report, modes, verdicts, residuals


def cmd_check(args):
    tol = _tolerance(args)
    c = _load_channel(args.channel, tol)
    report, modes, verdicts, residuals = _check_sections(c, args.modes, tol)
    out = _report("check", tol, [args.channel], modes=modes,
                  min_modes=report.min_modes, verdicts=verdicts, residuals=residuals)
    files.write_document(out)
    return EXIT_OK if verdicts["dilatable"] else EXIT_NEGATIVE


def cmd_dilate(args):
    tol = _tolerance(args)
    c = _load_channel(args.channel, tol)
    report, modes, verdicts, residuals = _check_sections(c, args.modes, tol)
    if not verdicts["dilatable"]:
        failed = ", ".join(report.failing(modes))
        print(f"not passively dilatable with {modes} environment modes (failed: {failed})",
              file=sys.stderr)
        files.write_document(_report("dilate", tol, [args.channel], modes=modes,
                                     verdicts=verdicts, residuals=residuals))
        return EXIT_NEGATIVE
    dil = construct_dilation(c, modes, tol)
    check = verify_dilation(c, dil, tol)
    doc = files.dilation_to_doc(dil, args.ordering, {"ok": check.ok, "residuals": check.residuals})
    sections = {"modes": modes, "verdicts": {"dilatable": True, "verified": check.ok},
                "residuals": check.residuals}
    if args.out:
        files.write_document(doc, args.out)
        sections["artifacts"] = {"dilation": str(args.out)}
    else:
        sections["artifacts"] = {"dilation": doc}
    files.write_document(_report("dilate", tol, [args.channel], **sections))
    return EXIT_OK if check.ok else EXIT_NEGATIVE


def cmd_normal_form(args):
    tol = _tolerance(args)
    c = _load_channel(args.channel, tol)
    report = check_dilatable(c, c.n, tol)
    if not report.overall(c.n):
        print(f"not passively dilatable (failed: {', '.join(report.failing(c.n))})", file=sys.stderr)
        files.write_document(_report("normal-form", tol, [args.channel],
                                     verdicts={"dilatable": False}, residuals=report.residuals))
        return EXIT_NEGATIVE
    nf = compute_normal_form(c, tol)
    residual = reconstruction_residual(c, nf, tol)
    doc = files.normal_form_to_doc(nf, residual, args.ordering)
    reconstructed = residual <= 1e-8 * max(1.0, max_norm(c.Y), max_norm(c.X))
    sections = {
        "verdicts": {"dilatable": True, "reconstructed": reconstructed},
        "residuals": {"reconstruction": residual},
        "lambda": doc["lambda"],
    }
    if args.out:
        files.write_document(doc, args.out)
        sections["artifacts"] = {"normal_form": str(args.out)}
    else:
        sections["artifacts"] = {"normal_form": doc}
    files.write_document(_report("normal-form", tol, [args.channel], **sections))
    return EXIT_OK if reconstructed else EXIT_NEGATIVE


def cmd_verify(args):
    tol = _tolerance(args)
    c = _load_channel(args.channel, tol)
    try:
        dil = files.dilation_from_doc(files.read_document(args.dilation))
    except (files.FileFormatError, ValueError) as exc:
        raise InputError(str(exc)) from None
    if dil.n != c.n:
        raise InputError(f"dilation acts on {dil.n} system modes, channel on {c.n}")
    check = verify_dilation(c, dil, tol)
    if not check.ok:
        print(f"verification {check.message}", file=sys.stderr)
    files.write_document(_report("verify", tol, [args.channel, args.dilation],
                                 verdicts={"verified": check.ok}, residuals=check.residuals))
    return EXIT_OK if check.ok else EXIT_NEGATIVE


def cmd_random(args):
    tol = _tolerance(args)
    if args.n < 1 or args.l < 1:
        raise InputError("--n and --l must be positive")
    c, dil = random_dilatable_channel(args.n, args.l, args.passive_env, args.seed)
    meta = {"seed": args.seed, "l": args.l, "passive_env": args.passive_env}
    channel_doc = files.channel_to_doc(c, args.ordering, meta)
    check = verify_dilation(c, dil, tol)
    dilation_doc = files.dilation_to_doc(dil, args.ordering,
                                         {"ok": check.ok, "residuals": check.residuals})
    sections = {"verdicts": {"verified": check.ok}, "residuals": check.residuals}
    if args.out:
        paths = {"channel": f"{args.out}.channel.json", "dilation": f"{args.out}.dilation.json"}
        files.write_document(channel_doc, paths["channel"])
        files.write_document(dilation_doc, paths["dilation"])
        sections["artifacts"] = paths
    else:
        sections["artifacts"] = {"channel": channel_doc, "dilation": dilation_doc}
    files.write_document(_report("random", tol, **sections))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="passive-dilation",
        description="Passive dilations and normal forms of Gaussian channels.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=None, help="relative tolerance (default 1e-9)")
        return p

    def ordering(p):
        p.add_argument("--ordering", choices=[o.value for o in ModeOrdering],
                       default="blocked", help="ordering of emitted matrices")

    p = common(sub.add_parser("check", help="decide passive dilatability"))
    p.add_argument("channel")
    p.add_argument("--modes", type=int, default=None,
                   help="environment modes to test (default: the minimal number)")
    p.set_defaults(func=cmd_check)

    p = common(sub.add_parser("dilate", help="construct a passive dilation"))
    p.add_argument("channel")
    p.add_argument("--modes", type=int, default=None)
    p.add_argument("--out", default=None)
    ordering(p)
    p.set_defaults(func=cmd_dilate)

    p = common(sub.add_parser("normal-form", help="additive-channel normal form"))
    p.add_argument("channel")
    p.add_argument("--out", default=None)
    ordering(p)
    p.set_defaults(func=cmd_normal_form)

    p = common(sub.add_parser("verify", help="verify a dilation against a channel"))
    p.add_argument("channel")
    p.add_argument("dilation")
    p.set_defaults(func=cmd_verify)

    p = common(sub.add_parser("random", help="emit a random dilatable channel and its dilation"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--passive-env", action="store_true")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=None, help="path prefix for <prefix>.channel.json / .dilation.json")
    ordering(p)
    p.set_defaults(func=cmd_random)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "modes", None) is not None and args.modes < 0:
        print("error: --modes must be nonnegative", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
