"""Command-line entry point: ``fantastack <command> --fan FILE [options]``."""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass

from fantastack.arcs import beta_fiber, j_w, sep_pi
from fantastack.cones import dual_cone, hilbert_basis
from fantastack.fanfile import load_fan_file
from fantastack.jets import j_prime, stability_threshold, theta
from fantastack.lattice import dot
from fantastack.measures import stringy_rational, stringy_series_fan, verify_identities
from fantastack.motive import render_class, render_rational, render_series
from fantastack.stacky import Fantastack, NotQGorensteinError, build_fantastack

EXIT_OK, EXIT_INPUT, EXIT_CHECK = 0, 1, 2
DEFAULT_PRECISION = 12
DEFAULT_GRADE_BOUND = 8


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CommandResult:
    exit_code: int
    payload: str


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _point(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fantastack", description="Arc and measure computations on toric fantastacks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--fan", required=True, metavar="FILE", help="JSON fan file")
        p.add_argument("--format", choices=("table", "json"), default="table")
        return p

    add("analyze", "flags, Q-Gorenstein data, crepancy and stabilizers")
    add("hilbert-basis", "Hilbert basis of each maximal cone").add_argument(
        "--dual", action="store_true", help="use the dual cone instead")
    for name, text in (("sep", "number of lifts of a point"),
                       ("beta-fiber", "all lifts of a point"),
                       ("jw", "contact order of the Gorenstein ideal"),
                       ("theta", "jet-fiber class")):
        add(name, text).add_argument("--point", required=True, type=_point, help="e.g. 1,1")
    p = add("stringy", "stringy series")
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    p.add_argument("--rational", action="store_true", help="closed form (single-cone fans)")
    add("stabilizers", "basis-extension test for all column subsets")
    p = add("verify", "run the identity checks on every maximal cone")
    p.add_argument("--grade-bound", type=int, default=DEFAULT_GRADE_BOUND)
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    return parser


def _locate(f: Fantastack, w):
    if len(w) != f.d:
        raise ValueError(f"point {list(w)} is not of length {f.d}")
    k = f.cone_containing(w)
    if k is None:
        raise ValueError(f"point {list(w)} is outside the support of the fan")
    return k, f.affine(k)


def _analyze(f: Fantastack, args):
    cones = []
    for k, c in enumerate(f.cones):
        qm = f.affine(k).qm
        cones.append({
            "index": k,
            "rays": [list(r) for r in c.rays],
            "q_gorenstein": qm is not None,
            "q": list(qm[0]) if qm else None,
            "m": qm[1] if qm else None,
        })
    try:
        crepant = f.combinatorially_crepant
    except NotQGorensteinError:
        crepant = None
    special, wit = f.special_stabilizers
    doc = {
        "name": f.input.name,
        "lattice_rank": f.d,
        "columns": [list(v) for v in f.columns],
        "canonical": f.is_canonical,
        "gms_iso_over_torus": f.gms_iso_over_torus,
        "combinatorially_crepant": crepant,
        "special_stabilizers": special,
        "stabilizer_witness": list(wit) if wit else None,
        "cones": cones,
    }
    lines = [f"name: {doc['name'] or '-'}", f"lattice rank: {f.d}",
             f"columns: {doc['columns']}", f"canonical: {_yn(f.is_canonical)}",
             f"gms iso over torus: {_yn(f.gms_iso_over_torus)}",
             f"combinatorially crepant: {'n/a' if crepant is None else _yn(crepant)}",
             f"special stabilizers: {_yn(special)}" + (f" (witness {list(wit)})" if wit else "")]
    for c in cones:
        qg = f"q = {c['q']}, m = {c['m']}" if c["q_gorenstein"] else "not Q-Gorenstein"
        lines.append(f"cone {c['index']}: rays {c['rays']}; {qg}")
    return EXIT_OK, doc, "\n".join(lines)


def _yn(b: bool) -> str:
    return "true" if b else "false"


def _hilbert(f: Fantastack, args):
    out = []
    for k, c in enumerate(f.cones):
        basis = f.affine(k).hilbert_P if args.dual else hilbert_basis(c)
        out.append({"index": k, "cone": "dual" if args.dual else "primal", "basis": [list(b) for b in basis]})
    text = "\n".join(f"cone {e['index']} ({e['cone']}): " + " ".join(str(tuple(b)) for b in e["basis"]) for e in out)
    return EXIT_OK, {"cones": out}, text


def _sep(f: Fantastack, args):
    k, s = _locate(f, args.point)
    n = sep_pi(f, s, args.point)
    return EXIT_OK, {"point": list(args.point), "cone": k, "sep": n}, str(n)


def _beta(f: Fantastack, args):
    k, s = _locate(f, args.point)
    lifts = [list(x) for x in beta_fiber(f, s, args.point).lifts]
    text = "\n".join(str(tuple(x)) for x in lifts) or "(empty)"
    return EXIT_OK, {"point": list(args.point), "cone": k, "lifts": lifts}, text


def _jw(f: Fantastack, args):
    k, s = _locate(f, args.point)
    q, m = s.require_q_gorenstein()
    doc = {"point": list(args.point), "cone": k, "grade": dot(args.point, q), "m": m,
           "j_w": j_w(s, args.point), "j_prime": j_prime(s, args.point)}
    text = f"j_w: {doc['j_w']}\nj'_w: {doc['j_prime']}\n<w,q>: {doc['grade']} (m = {m})"
    return EXIT_OK, doc, text


def _theta(f: Fantastack, args):
    k, s = _locate(f, args.point)
    th = render_class(theta(f, s, args.point))
    n = stability_threshold(f, s, args.point)
    doc = {"point": list(args.point), "cone": k, "theta": th, "j_prime": j_prime(s, args.point),
           "stability_threshold": n}
    return EXIT_OK, doc, f"theta: {th}\nj'_w: {doc['j_prime']}\nstable from level: {n}"


def _stringy(f: Fantastack, args):
    if args.precision < 0:
        raise ValueError("precision must be nonnegative")
    if args.rational:
        if len(f.cones) != 1:
            raise ValueError("--rational needs a fan with a single maximal cone")
        r = render_rational(stringy_rational(f.affine(0)))
        return EXIT_OK, {"rational": r}, r
    s = stringy_series_fan(f.input, args.precision)
    doc = {"precision": args.precision, "m": s.m, "series": render_series(s),
           "coefficients": [str(c) for c in s.coefficient_list()]}
    return EXIT_OK, doc, doc["series"]


def _stabilizers(f: Fantastack, args):
    special, wit = f.special_stabilizers
    text = f"special: {_yn(special)}" + (f"\nwitness: {list(wit)}" if wit else "")
    return EXIT_OK, {"special": special, "witness": list(wit) if wit else None}, text


def _verify(f: Fantastack, args):
    if args.grade_bound < 0 or args.precision < 0:
        raise ValueError("grade bound and precision must be nonnegative")
    reports = [(k, verify_identities(f, f.affine(k), args.grade_bound, args.precision)) for k in range(len(f.cones))]
    ok = all(r.ok for _, r in reports)
    doc = {"ok": ok, "cones": [{"index": k, **r.to_json()} for k, r in reports]}
    text = "\n\n".join(f"cone {k}\n{r.render_table()}" for k, r in reports)
    return (EXIT_OK if ok else EXIT_CHECK), doc, text


COMMANDS = {
    "analyze": _analyze,
    "hilbert-basis": _hilbert,
    "sep": _sep,
    "beta-fiber": _beta,
    "jw": _jw,
    "theta": _theta,
    "stringy": _stringy,
    "stabilizers": _stabilizers,
    "verify": _verify,
}


def run_command(argv, stderr=None) -> CommandResult:
    """Parse ``argv`` and run one command; never raises for bad input."""
    stderr = stderr if stderr is not None else sys.stderr
    try:
        args = build_parser().parse_args(list(argv))
    except UsageError as e:
        return CommandResult(EXIT_INPUT, str(e))
    fmt = args.format
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            fan = load_fan_file(args.fan)
        for w in caught:
            print(f"warning: {w.message}", file=stderr)
        f = build_fantastack(fan.to_input())
        code, doc, text = COMMANDS[args.command](f, args)
    except (ValueError, OSError) as e:
        msg = str(e)
        return CommandResult(EXIT_INPUT, json.dumps({"error": msg}) if fmt == "json" else f"error: {msg}")
    return CommandResult(code, json.dumps(doc, indent=2) if fmt == "json" else text)


def main(argv=None) -> int:
    res = run_command(sys.argv[1:] if argv is None else argv)
    stream = sys.stderr if res.exit_code == EXIT_INPUT else sys.stdout
    print(res.payload, file=stream)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
