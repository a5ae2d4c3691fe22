"""twistlab command line: build, verify, certify, scan.

Exit codes: 0 every check passed, 1 a check failed, 2 usage or I/O error.
Reports are JSON with sorted keys; output files are written atomically.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time
from pathlib import Path
from typing import Callable

from . import factorization as fz
from . import genus2
from . import intlinalg as la
from . import subgroup as sg
from .braid.word import full_twist

FIXTURES_ENV = "TWISTLAB_FIXTURES"
RUN_SCHEMA = "twistlab.run/1"
LEVELS = ("perm", "homology", "base")

BUILDERS: dict[str, Callable[[], fz.FactorTuple]] = {
    "x1": fz.x1_canonical,
    "x2": fz.x2_canonical,
    "genus2-x1": lambda: fz.genus2_factorizations()[0],
    "genus2-x2": lambda: fz.genus2_factorizations()[1],
    "genus2-x1-twisted": fz.x1_genus2_twisted,
}


class UsageError(Exception):
    """Bad arguments, unreadable input or unwritable output (exit 2)."""


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        Path(tmp).unlink(missing_ok=True)
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _dump(obj: object) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


class Run:
    """RunReport: command, input digest, checks with levels, artifacts."""

    def __init__(self, command: str, inputs: str) -> None:
        self.command = command
        self.inputs = inputs
        self.checks: list[dict] = []
        self.artifacts: list[str] = []
        self.data: dict = {}

    def check(self, name: str, level: str, fn: Callable[[], bool], note: str = "") -> bool:
        t0 = time.perf_counter()
        verdict = bool(fn())
        rec = {"name": name, "level": level, "verdict": verdict,
               "elapsed_ms": int((time.perf_counter() - t0) * 1000)}
        if note:
            rec["note"] = note
        self.checks.append(rec)
        return verdict

    @property
    def verdict(self) -> bool:
        return all(c["verdict"] for c in self.checks)

    def record(self, timings: bool = True) -> dict:
        checks = self.checks if timings else [{k: v for k, v in c.items() if k != "elapsed_ms"} for c in self.checks]
        return {"schema": RUN_SCHEMA, "command": self.command, "inputs_sha256": self.inputs,
                "checks": checks, "artifacts": self.artifacts, "verdict": self.verdict, **self.data}


def _fixtures(args: argparse.Namespace) -> str | None:
    d = args.fixtures or os.environ.get(FIXTURES_ENV) or None
    if d is not None and not Path(d).is_dir():
        raise UsageError(f"fixture directory {d} does not exist")
    return d


def _read_tuple(path: str) -> tuple[fz.FactorTuple, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return fz.FactorTuple.loads(text), _sha(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{path} is not a factor tuple: {exc}") from None


def _load_target(name_or_path: str) -> tuple[fz.FactorTuple, str]:
    if name_or_path in BUILDERS and not Path(name_or_path).exists():
        t = BUILDERS[name_or_path]()
        return t, _sha(t.dumps())
    return _read_tuple(name_or_path)


# ---------------------------------------------------------------- commands


def cmd_build(args: argparse.Namespace) -> Run:
    t = BUILDERS[args.target]()
    text = t.dumps()
    run = Run(f"build {args.target}", _sha(args.target))
    run.data["factors"] = len(t)
    run.data["tuple_sha256"] = _sha(text)
    if args.out:
        write_atomic(args.out, text)
        run.artifacts.append(str(args.out))
    else:
        run.data["tuple"] = t.to_record()
    return run


def cmd_verify(args: argparse.Namespace) -> Run:
    t, digest = _load_target(args.tuple)
    fx = _fixtures(args)
    levels = args.level or list(LEVELS)
    run = Run("verify", digest)
    run.data["ambient"] = t.ambient
    run.data["factors"] = len(t)
    if t.ambient == fz.MAP_2:
        word = fz.product_word(t)
        if "perm" in levels:
            img = genus2.perm_image([fz.resolver(fz.MAP_2).base_word(f) for f in t.factors])
            run.data["perm_group_order"] = img["order"]
            run.check("product permutation is trivial", "permutation",
                      lambda: word.permutation() == tuple(range(word.n)))
        if "homology" in levels:
            run.check("product acts trivially on H1 (necessary, not sufficient)", "homology",
                      lambda: genus2.sp4_image(word) == la.identity(4))
        if "base" in levels:
            run.check("product is the identity in Map2", "base-exact", lambda: genus2.map2_is_identity(word))
    elif t.ambient == fz.MAP_17_16:
        if "perm" in levels:
            word = fz.product_word(t, fixtures_dir=fx)
            run.check("base product permutation is trivial", "permutation",
                      lambda: word.permutation() == tuple(range(word.n)))
        if "homology" in levels:
            run.check("product acts trivially on capped H1 (necessary, not an identity proof)", "homology",
                      lambda: fz.product_homology(t, fx) == la.identity(fz.resolver(t.ambient, fx).rank))
        if "base" in levels:
            run.check("vanishing-cycle base product is the boundary twist", "base-exact",
                      lambda: fz.product_base(t, "vanishing", fx) == fz.BaseProduct.of(full_twist(43)),
                      "trivial in the sphere base; lifts of separate delta signs are not checked here")
    else:
        if "perm" in levels:
            word = fz.product_word(t)
            run.check("product permutation is trivial", "permutation",
                      lambda: word.permutation() == tuple(range(word.n)))
        if "homology" in levels and args.level:
            raise UsageError(f"no homology model for ambient {t.ambient}")
        if "base" in levels:
            run.check("product is the full twist", "base-exact",
                      lambda: fz.product_base(t) == fz.BaseProduct.of(full_twist(5)))
    return run


def cmd_certify(args: argparse.Namespace) -> Run:
    fx = _fixtures(args)
    run = Run(f"certify {args.what}", _sha(args.what))
    try:
        if args.what == "phi":
            c = sg.derive_phi(fixtures_dir=fx)
            rep = sg.replay(c, fx)
            run.check("phi in G2 replays (base-exact node claims)", "base-exact", lambda: rep["levels"].get("base", False))
            run.check("phi in G2 replays (homology node claims)", "homology", lambda: rep["levels"].get("homology", False))
            payload = c.to_record()
        else:
            rep = sg.subgroup_equal_report(fx)
            run.check("G1 = G2 report", "base-exact", lambda: rep["verdict"])
            payload = rep
    except sg.CertificateError as exc:
        run.check("derivation", "base-exact", lambda: False, str(exc))
        run.data["error"] = str(exc)
        return run
    text = _dump(payload)
    run.data["payload_sha256"] = _sha(text)
    if args.out:
        write_atomic(args.out, text)
        run.artifacts.append(str(args.out))
    else:
        run.data["payload"] = payload
    return run


def cmd_scan(args: argparse.Namespace) -> Run:
    if args.budget < 0:
        raise UsageError("--budget must be non-negative")
    t, digest = _load_target(args.tuple)
    pairs = sg.matching_path_scan(t, args.budget, _fixtures(args))
    run = Run("scan", digest)
    counts: dict[str, int] = {}
    for p in pairs:
        counts[p["kind"]] = counts.get(p["kind"], 0) + 1
    run.data.update({"budget": args.budget, "pairs": len(pairs), "kinds": counts})
    if args.out:
        write_atomic(args.out, _dump({"schema": sg.SCAN_SCHEMA, "budget": args.budget, "pairs": pairs}))
        run.artifacts.append(str(args.out))
    return run


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twistlab", description=__doc__.splitlines()[0])
    p.add_argument("--fixtures", metavar="DIR", help=f"arc and curve fixture directory (default ${FIXTURES_ENV})")
    p.add_argument("--no-timings", action="store_true", help="omit elapsed times so reports are byte-identical")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="write a factor tuple")
    b.add_argument("target", choices=sorted(BUILDERS))
    b.add_argument("--out", metavar="PATH")

    v = sub.add_parser("verify", help="check the product of a tuple file (or a build target name)")
    v.add_argument("tuple")
    v.add_argument("--level", choices=LEVELS, action="append", help="repeatable; default all levels")

    c = sub.add_parser("certify", help="derive phi in G2, or the G1 = G2 report")
    c.add_argument("what", choices=("phi", "g1g2"))
    c.add_argument("--out", metavar="PATH")

    s = sub.add_parser("scan", help="matching-path candidates within a Hurwitz move budget")
    s.add_argument("tuple")
    s.add_argument("--budget", type=int, default=0, metavar="N")
    s.add_argument("--out", metavar="PATH")
    return p


COMMANDS = {"build": cmd_build, "verify": cmd_verify, "certify": cmd_certify, "scan": cmd_scan}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        run = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"twistlab: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(_dump(run.record(timings=not args.no_timings)))
    return 0 if run.verdict else 1


if __name__ == "__main__":
    sys.exit(main())
