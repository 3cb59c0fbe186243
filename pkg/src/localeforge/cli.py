"""Command-line interface.

Exit codes: 0 when every reported check passes, 1 when a mathematical check
fails, 2 on bad input (malformed JSON, invalid structure, exceeded cap).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

from . import config
from .errors import ImplementationBug, InputError, LocaleForgeError, SizeOverflow
from .frame import Frame, boolean, chain, property_report
from .poset import Poset
from .verdict import Verdict

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class CliInputError(Exception):
    pass


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliInputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliInputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _load_frame(path: str) -> Frame:
    return Frame.from_json(_read_json(path))


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, default=lambda o: list(o) if isinstance(o, tuple) else repr(o))


def _verdict_json(v: Verdict) -> dict:
    out = {"pass": v.ok}
    if v.witness is not None:
        out["witness"] = v.witness
    if v.note:
        out["note"] = v.note
    return out


def _emit_verdicts(name: str, verdicts: dict[str, Verdict], fmt: str) -> int:
    if fmt == "json":
        print(_dump({"subject": name, "checks": {k: _verdict_json(v) for k, v in verdicts.items()}}))
    else:
        for k, v in verdicts.items():
            line = f"{k:<10} {'yes' if v.ok else 'no'}"
            if not v.ok and v.witness is not None:
                line += f"  (witness {_dump(v.witness)})"
            print(line)
    return EXIT_OK if all(v.ok for v in verdicts.values()) else EXIT_FAIL


# -- frame ------------------------------------------------------------------


def cmd_frame_check(args) -> int:
    lat = _load_frame(args.file)
    return _emit_verdicts(args.file, property_report(lat), args.format)


def cmd_frame_nuclei(args) -> int:
    from .nuclei import all_nuclei, decompose, generate_NX

    lat = _load_frame(args.file)
    nx = generate_NX(lat)
    if lat.n <= config.current().nucleus_cap:
        brute = [j.table for j in all_nuclei(lat)]
        if brute != [j.table for j in nx.nuclei]:
            raise ImplementationBug("generated nuclei differ from the brute-force list")
    if args.dot:
        print(nx.lattice.to_dot("NX"), end="")
        return EXIT_OK
    rows = [{"index": i, "table": list(j.table), "generators": decompose(j)} for i, j in enumerate(nx.nuclei)]
    if args.format == "json":
        print(_dump({"count": len(rows), "nuclei": rows}))
    else:
        print(f"{len(rows)} nuclei")
        for r in rows:
            gens = " ".join(f"o{u}&c{v}" for u, v in r["generators"])
            print(f"{r['index']:>3}: {r['table']}  = join of {gens}")
    return EXIT_OK


def cmd_frame_hausdorff(args) -> int:
    from .coproduct import check_hausdorff

    return _emit_verdicts(args.file, {"hausdorff": check_hausdorff(_load_frame(args.file))}, args.format)


def cmd_frame_coproduct(args) -> int:
    from .coproduct import coproduct

    cp = coproduct(_load_frame(args.file1), _load_frame(args.file2))
    body = _dump({"poset": cp.carrier.poset.to_json()})
    if args.out:
        Path(args.out).write_text(body + "\n")
    else:
        print(body)
    summary = {"left": cp.left.n, "right": cp.right.n, "carrier": cp.carrier.n}
    print(_dump(summary) if args.format == "json" else f"carrier has {cp.carrier.n} elements",
          file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


# -- map --------------------------------------------------------------------


def cmd_map_check(args) -> int:
    from .maps import FrameHom, LocalicMap, is_closed, is_dense, is_injection, is_proper, is_surjection

    f = LocalicMap(FrameHom.from_json(_read_json(args.file)))
    verdicts = {
        "injection": is_injection(f),
        "surjection": is_surjection(f),
        "dense": is_dense(f),
        "closed": is_closed(f),
        "proper": is_proper(f),
    }
    return _emit_verdicts(args.file, verdicts, args.format)


# -- pretopos / functor ---------------------------------------------------


def cmd_pretopos_audit(args) -> int:
    from .finset import pretopos_audit

    rows = pretopos_audit(args.max_size, seed=config.current().seed)
    if args.format == "json":
        print(_dump([{"axiom": r.axiom, "pass": r.ok, "checked": r.checked, "witness": r.witness} for r in rows]))
    else:
        for r in rows:
            line = f"{'PASS' if r.ok else 'FAIL'}  {r.axiom:<28} {r.checked} cases"
            if not r.ok:
                line += f"  witness {_dump(r.witness)}"
            print(line)
    return EXIT_OK if all(r.ok for r in rows) else EXIT_FAIL


def cmd_functor_verify(args) -> int:
    from .functor import verify_embedding

    cfg = config.current()
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            report = verify_embedding(args.max_size, seed=cfg.seed, map_fn=pool.map)
    else:
        report = verify_embedding(args.max_size, seed=cfg.seed)
    fmt = "json" if args.json else "text" if args.text else args.format
    sys.stdout.write(report.to_json() + "\n" if fmt == "json" else report.to_text())
    return EXIT_OK if report.ok else EXIT_FAIL


# -- gen ------------------------------------------------------------------


def cmd_gen(args) -> int:
    if args.kind in ("chain", "boolean"):
        try:
            n = int(args.param)
        except ValueError:
            raise CliInputError(f"expected an integer, got {args.param!r}") from None
        lat = chain(n) if args.kind == "chain" else boolean(n)
        poset = lat.poset
    else:
        poset = Poset.from_json(_read_json(args.param))
    cap = config.current().downset_cap
    if poset.count_downsets(cap) > cap:
        raise SizeOverflow("downset_cap", cap, f"frame would exceed downset_cap ({cap})")
    print(_dump({"poset": poset.to_json()}))
    return EXIT_OK


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="localeforge", description="Finite frames, locales and the subobject functor.")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-downsets", type=int, help="downset cap (default 2^20, or $LOCALEFORGE_MAXCAP)")
    p.add_argument("--nucleus-cap", type=int, help="largest frame for brute-force nuclei (default 7)")
    p.add_argument("--format", choices=("text", "json", "dot"), default="text")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="group", required=True)

    frame = sub.add_parser("frame").add_subparsers(dest="cmd", required=True)
    c = frame.add_parser("check")
    c.add_argument("file")
    c.set_defaults(func=cmd_frame_check)
    c = frame.add_parser("nuclei")
    c.add_argument("file")
    c.add_argument("--dot", action="store_true")
    c.set_defaults(func=cmd_frame_nuclei)
    c = frame.add_parser("hausdorff")
    c.add_argument("file")
    c.set_defaults(func=cmd_frame_hausdorff)
    c = frame.add_parser("coproduct")
    c.add_argument("file1")
    c.add_argument("file2")
    c.add_argument("--out")
    c.set_defaults(func=cmd_frame_coproduct)

    mp = sub.add_parser("map").add_subparsers(dest="cmd", required=True)
    c = mp.add_parser("check")
    c.add_argument("file")
    c.set_defaults(func=cmd_map_check)

    pt = sub.add_parser("pretopos").add_subparsers(dest="cmd", required=True)
    c = pt.add_parser("audit")
    c.add_argument("--max-size", type=int, default=3)
    c.set_defaults(func=cmd_pretopos_audit)

    fn = sub.add_parser("functor").add_subparsers(dest="cmd", required=True)
    c = fn.add_parser("verify")
    c.add_argument("--max-size", type=int, default=3)
    out = c.add_mutually_exclusive_group()
    out.add_argument("--json", action="store_true")
    out.add_argument("--text", action="store_true")
    c.set_defaults(func=cmd_functor_verify)

    c = sub.add_parser("gen")
    c.add_argument("kind", choices=("chain", "boolean", "downsets-of"))
    c.add_argument("param")
    c.set_defaults(func=cmd_gen)
    return p


def _config_from(args) -> config.Config:
    kwargs = {"seed": args.seed, "jobs": args.jobs, "output_format": args.format}
    if args.max_downsets is not None:
        kwargs["downset_cap"] = args.max_downsets
    if args.nucleus_cap is not None:
        kwargs["nucleus_cap"] = args.nucleus_cap
    if getattr(args, "max_size", None) is not None:
        if args.max_size < 1:
            raise CliInputError("--max-size must be at least 1")
        kwargs["sweep_max_size"] = args.max_size
    return config.Config.from_env(**kwargs)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = _config_from(args)
    except (ValueError, CliInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    saved = config.current()
    config.install(cfg)
    try:
        return args.func(args)
    except SizeOverflow as exc:
        print(f"error: cap exceeded: {exc.cap_name} = {exc.cap}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, CliInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ImplementationBug as exc:
        print(f"internal check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except LocaleForgeError as exc:
        print(f"check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    finally:
        config.install(saved)


if __name__ == "__main__":
    sys.exit(main())
