"""Command-line entry point: ``plslab <command> ...``.

Exit codes: 0 success, 2 precondition violation (bad input, nonmember given to
a prover, bad construction parameters), 3 search or oracle budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .bits import CodecContext
from .constructions import (PreconditionError, build_path_stp, build_regular_glue,
                            build_wrapper_construction, directed_cycle, paired_cycle)
from .corpus import corrupted_corpus, exhaustive_suite
from .engine import UNDECODABLE, Certificate, ProverRefused, decode_map, encode_map, run_verifier
from .graph import InstanceError, parse_instance, serialize_instance
from .languages import (DEFAULT_BUDGET, BudgetExceeded, Language, decide_membership,
                        edit_distance_to_language, regular_degree_lower_bound)
from .oracles import (SensitivityReport, SensitivityRow, min_rejections,
                      strong_local_stability_probe)
from .schemes import DEFAULT_SCHEME, WrappedScheme, make_scheme

EXIT_OK, EXIT_PRECONDITION, EXIT_BUDGET = 0, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_PRECONDITION):
        super().__init__(message)
        self.code = code


# --------------------------------------------------------------------------
# file helpers


def read_instance(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None
    return parse_instance(text)


def cert_file_text(scheme_name: str, instance, certs: dict) -> str:
    width = CodecContext.for_instance(instance).width
    doc = {"scheme": scheme_name, "width": width,
           "certs": [{"id": v, "bits": certs[v].bits} for v in sorted(certs)]}
    return json.dumps(doc, indent=1) + "\n"


def read_cert_file(path: str, instance) -> dict:
    """Certificates by node; anything unreadable yields undecodable certificates."""
    try:
        doc = json.loads(Path(path).read_text())
        entries = {int(e["id"]): Certificate(str(e["bits"])) for e in doc["certs"]}
    except (OSError, ValueError, KeyError, TypeError):
        return {v: UNDECODABLE for v in instance.nodes}
    return {v: entries.get(v, UNDECODABLE) for v in instance.nodes}


def write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _lang(args):
    if not args.lang:
        raise CliError("--lang is required")
    return Language.parse(args.lang)


def _scheme(args, lang: Language | None = None):
    name = args.scheme or (DEFAULT_SCHEME[lang] if lang else None)
    if not name:
        raise CliError("--scheme is required")
    try:
        return make_scheme(name)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def threads() -> int:
    try:
        return max(1, int(os.environ.get("PLSLAB_THREADS", "1")))
    except ValueError:
        return 1


# --------------------------------------------------------------------------
# commands


def cmd_check(args) -> int:
    lang = _lang(args)
    inst = read_instance(args.instance)
    if decide_membership(lang, inst):
        print("member, distance 0")
        return EXIT_OK
    try:
        d = edit_distance_to_language(lang, inst, args.budget)
    except BudgetExceeded as exc:
        if lang is Language.REGULAR:
            print(f"nonmember, distance >= {regular_degree_lower_bound(inst)}")
        else:
            print("nonmember, distance unknown")
        raise CliError(f"budget exceeded: {exc}", EXIT_BUDGET) from None
    print(f"nonmember, distance {d}")
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = read_instance(args.instance)
    scheme = _scheme(args, Language.parse(args.lang) if args.lang else None)
    if args.certs:
        certs = read_cert_file(args.certs, inst)
    else:
        certs = encode_map(scheme, inst, scheme.prove(inst))
    verdict = run_verifier(scheme, inst, certs)
    width = CodecContext.for_instance(inst).width
    for v in inst.nodes:
        c = certs[v]
        size = c.size if isinstance(c, Certificate) else 0
        print(f"node {v}: {'accept' if verdict.accept[v] else 'reject'} ({size} bits)")
    print(f"width = {width}")
    print(f"k = {verdict.k}")
    return EXIT_OK


def cmd_prove(args) -> int:
    inst = read_instance(args.instance)
    scheme = _scheme(args, Language.parse(args.lang) if args.lang else None)
    certs = encode_map(scheme, inst, scheme.prove(inst))
    text = cert_file_text(scheme.name, inst, certs)
    if args.out:
        write_text(args.out, text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_construct(args) -> int:
    kind = args.kind
    p = args.params
    try:
        if kind == "path-stp":
            c = build_path_stp(int(p[0]))
        elif kind == "regular-glue":
            if len(p) != 4:
                raise CliError("regular-glue takes d1 m1 d2 m2")
            c = build_regular_glue(*(int(x) for x in p))
        elif kind == "wrapper-fake":
            base = p[0] if p else "cycle:6"
            if base.startswith("cycle:"):
                inst = directed_cycle(int(base.split(":", 1)[1]))
            elif base.startswith("pairs:"):
                inst = paired_cycle(int(base.split(":", 1)[1]))
            else:
                inst = read_instance(base)
            inner = make_scheme(args.scheme or "acyclic")
            c = build_wrapper_construction(inner, inst)
        else:
            raise CliError(f"unknown construction {kind!r}")
    except (IndexError, ValueError) as exc:
        if isinstance(exc, PreconditionError):
            raise
        raise CliError(f"bad parameters for {kind}: {exc}") from None
    out = Path(args.out or ".")
    certs = encode_map(c.scheme, c.instance, c.certs)
    write_text(out / "instance.json", serialize_instance(c.instance))
    write_text(out / "certs.json", cert_file_text(c.scheme.name, c.instance, certs))
    verdict = run_verifier(c.scheme, c.instance, certs)
    print(f"{c.name}: n = {c.instance.n}, scheme = {c.scheme.name}")
    print(f"rejecting = {list(verdict.rejecting)}")
    print(f"k = {verdict.k}")
    print(f"wrote {out / 'instance.json'} and {out / 'certs.json'}")
    return EXIT_OK


def cmd_attack(args) -> int:
    inst = read_instance(args.instance)
    scheme = _scheme(args, Language.parse(args.lang) if args.lang else None)
    try:
        res = min_rejections(scheme, inst, budget=args.budget, cutoff=args.cutoff,
                             samples=args.samples, seed=args.seed)
    except BudgetExceeded as exc:
        raise CliError(f"budget exceeded: {exc}", EXIT_BUDGET) from None
    if res.k is None:
        print(f"no certificate map with fewer than {res.lower_bound} rejections")
    else:
        print(f"k-min = {res.k}")
    print(f"exhaustive = {str(res.exhaustive).lower()}")
    print(f"visits = {res.visits} ({res.method})")
    if res.witness is not None and args.out:
        certs = encode_map(scheme, inst, res.witness)
        write_text(args.out, cert_file_text(scheme.name, inst, certs))
        print(f"wrote witness {args.out}")
    if not res.exhaustive and res.k is None:
        return EXIT_BUDGET
    return EXIT_OK


PRESETS = {
    # name: (language, scheme, corpus kind, default max n, default count)
    "acyclic": (Language.ACYCLIC, "acyclic", "exhaustive", 4, 0),
    "st": (Language.ST_L, "st", "corrupted", 7, 500),
    "stp": (Language.ST_P, "stp", "exhaustive", 4, 0),
    "mst": (Language.MST_L, "mst", "corrupted", 6, 300),
    "leader": (Language.LEADER, "universal:LEADER", "exhaustive", 4, 0),
}


def mst_seed_maps(instance) -> list[dict]:
    """Forged maps: Borůvka certificates of every spanning tree, whole."""
    from .mst import certs_for_tree
    from .spanning import spanning_trees
    return [certs_for_tree(instance.graph, t) for t in spanning_trees(instance.graph)]


def _sweep_row(task):
    index, inst, scheme_name, lang, budget, seed, out_dir = task
    scheme = make_scheme(scheme_name)
    d = edit_distance_to_language(lang, inst, budget)
    seeds = mst_seed_maps(inst) if lang is Language.MST_L else ()
    res = min_rejections(scheme, inst, budget=budget, seeds=seeds,
                         samples=8 if lang is Language.MST_L else 0, seed=seed + index)
    name = f"{lang.value.lower()}-{index:05d}"
    wfile = ""
    if out_dir and res.witness is not None:
        wdir = Path(out_dir) / "witnesses"
        write_text(wdir / f"{name}.instance.json", serialize_instance(inst))
        write_text(wdir / f"{name}.certs.json",
                   cert_file_text(scheme.name, inst, encode_map(scheme, inst, res.witness)))
        wfile = f"witnesses/{name}.certs.json"
    return SensitivityRow(name, inst.n, d, res.k, res.exhaustive, wfile)


def cmd_sensitivity(args) -> int:
    preset = args.preset or (args.lang or "").lower()
    if preset not in PRESETS:
        raise CliError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
    lang, scheme_name, corpus_kind, max_n, count = PRESETS[preset]
    scheme_name = args.scheme or scheme_name
    max_n = args.max_n or max_n
    count = args.count or count
    if corpus_kind == "exhaustive":
        corpus = [x for x in exhaustive_suite(lang, max_n) if not decide_membership(lang, x)]
    else:
        corpus = corrupted_corpus(lang, count, args.seed, max_n=max_n)
    tasks = [(i, inst, scheme_name, lang, args.budget, args.seed, args.out) for i, inst in enumerate(corpus)]
    workers = threads()
    try:
        if workers > 1:
            with ProcessPoolExecutor(workers) as pool:
                rows = list(pool.map(_sweep_row, tasks, chunksize=8))
        else:
            rows = [_sweep_row(t) for t in tasks]
    except BudgetExceeded as exc:
        raise CliError(f"budget exceeded: {exc}", EXIT_BUDGET) from None
    report = SensitivityReport(make_scheme(scheme_name).name, lang.value, rows)
    report.scope += f"; corpus={corpus_kind} max_n={max_n} seed={args.seed} count={len(rows)}"
    summary = report.summary()
    if args.out:
        write_text(Path(args.out) / "report.csv", report.to_csv())
        write_text(Path(args.out) / "summary.json", report.summary_json())
    print(json.dumps(summary, indent=1, sort_keys=True))
    return EXIT_OK


def cmd_probe(args) -> int:
    lang = _lang(args)
    betas = args.beta or [1.0, 2.0, 3.0]
    try:
        res = strong_local_stability_probe(lang, args.max_n or 5, betas, pair_cap=args.pair_cap,
                                           seed=args.seed, budget=args.budget)
    except BudgetExceeded as exc:
        raise CliError(f"budget exceeded: {exc}", EXIT_BUDGET) from None
    doc = {"language": res.language, "max_n": res.max_n, "exhaustive": res.exhaustive,
           "pastes_checked": res.pastes_checked, "results": []}
    for beta in sorted(res.witnesses):
        w = res.witnesses[beta]
        entry = {"beta": beta, "violation": w is not None}
        if w is not None:
            entry.update({"distance": w.distance, "boundary": w.boundary, "H": list(w.H_nodes),
                          "G_prime_is_H": w.G_prime != w.G,
                          "pasted": json.loads(serialize_instance(w.pasted))})
        doc["results"].append(entry)
        print(f"beta = {beta:g}: " + (f"violation (distance {w.distance}, boundary {w.boundary})"
                                      if w else "no violation found"))
    print(f"exhaustive = {str(res.exhaustive).lower()}, pastes = {res.pastes_checked}")
    if args.out:
        write_text(args.out, json.dumps(doc, indent=1, sort_keys=True) + "\n")
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plslab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, instance=True):
        if instance:
            sp.add_argument("instance", help="instance file (JSON)")
        sp.add_argument("--lang")
        sp.add_argument("--scheme")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--max-n", type=int, dest="max_n")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        sp.add_argument("--out")

    sp = sub.add_parser("check", help="membership and exact edit distance")
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("verify", help="run a verifier (prover certificates unless --certs)")
    common(sp)
    sp.add_argument("--certs")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("prove", help="write prover certificates")
    common(sp)
    sp.set_defaults(func=cmd_prove)

    sp = sub.add_parser("construct", help="build a counterexample bundle")
    sp.add_argument("kind", choices=["path-stp", "regular-glue", "wrapper-fake"])
    sp.add_argument("params", nargs="*")
    common(sp, instance=False)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("attack", help="fewest rejections over the bounded certificate space")
    common(sp)
    sp.add_argument("--cutoff", type=int)
    sp.add_argument("--samples", type=int, default=0)
    sp.set_defaults(func=cmd_attack)

    sp = sub.add_parser("sensitivity", help="sensitivity sweep over a preset corpus")
    common(sp, instance=False)
    sp.add_argument("--preset", choices=sorted(PRESETS))
    sp.add_argument("--count", type=int)
    sp.set_defaults(func=cmd_sensitivity)

    sp = sub.add_parser("probe", help="strong local stability probe")
    common(sp, instance=False)
    sp.add_argument("--beta", type=float, action="append")
    sp.add_argument("--pair-cap", type=int, default=400, dest="pair_cap")
    sp.set_defaults(func=cmd_probe)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InstanceError, ProverRefused, PreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
