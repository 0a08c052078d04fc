"""Command-line front end.

Subcommands: solve (decision tasks), enforce (strict complete enforcement),
verify / enumerate (exact oracle), gen (benchmark instances), encode (QUBO
export).  Plain solve output is machine-parseable: first line YES or NO,
then at most one witness line ``w <arg> ...``.

Exit codes: 0 solved/verified, 2 parse or configuration error, 3 uncertified
NO (budget or timeout exhausted, or unverified enforcement), 4 internal
consistency failure (a zero-energy sample that fails verification).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import benchgen, encodings, enforcement, oracle
from .anneal import ANSWER_YES, AnnealParams, EncodingConsistencyError, decide
from .framework import (ArgumentSet, ArgumentationFramework, ParseError, Semantics,
                        detect_format, format_apx, format_iccma, parse)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNCERTIFIED = 3
EXIT_INCONSISTENT = 4

SOLVE_TASKS = ("DC-CO", "DC-PR", "DC-ST", "SCneg-CO", "EX-ST",
               "NE-AD", "NE-CO", "NE-PR", "NE-SST")
ENCODE_ONLY_TASKS = ("CF", "ADM", "CO", "PR", "SST", "ST", "ENFORCE")


def build_task(af: ArgumentationFramework, task: str, arg_name: str | None):
    """Encoded penalty for one solve task; DC/SCneg need an argument."""
    needs_arg = task.startswith("DC-") or task.startswith("SCneg")
    if needs_arg and not arg_name:
        raise ValueError(f"task {task} needs --arg")
    if task == "DC-CO":
        return encodings.fix_credulous(encodings.build_co(af), arg_name)
    if task == "DC-PR":
        # credulous acceptance under preferred coincides with admissible
        return encodings.fix_credulous(encodings.build_adm(af), arg_name)
    if task == "DC-ST":
        return encodings.fix_credulous(encodings.build_st(af), arg_name)
    if task == "SCneg-CO":
        return encodings.fix_skeptical_negative(encodings.build_co(af), arg_name)
    if task == "EX-ST":
        return encodings.build_st(af)
    if task == "NE-CO":
        return encodings.add_nonempty(encodings.build_co(af))
    if task in ("NE-AD", "NE-PR", "NE-SST"):
        # nonempty preferred/semi-stable reduce to nonempty admissible
        return encodings.add_nonempty(encodings.build_adm(af))
    raise ValueError(f"unknown task {task!r}")


def oracle_answer(af: ArgumentationFramework, task: str, arg_name: str | None,
                  limit: int = oracle.DEFAULT_ORACLE_LIMIT):
    """Ground truth for the reported answer, or None above the oracle limit."""
    try:
        if task == "DC-CO":
            return oracle.decide_oracle(af, af.index_of(arg_name), Semantics.COMPLETE,
                                        "credulous", limit)
        if task == "DC-PR":
            return oracle.decide_oracle(af, af.index_of(arg_name), Semantics.ADMISSIBLE,
                                        "credulous", limit)
        if task == "DC-ST":
            return oracle.decide_oracle(af, af.index_of(arg_name), Semantics.STABLE,
                                        "credulous", limit)
        if task == "SCneg-CO":
            return oracle.decide_oracle(af, af.index_of(arg_name), Semantics.COMPLETE,
                                        "skeptical", limit)
        if task == "EX-ST":
            return bool(oracle.enumerate_extensions(af, Semantics.STABLE, limit))
        sigma = Semantics.COMPLETE if task == "NE-CO" else Semantics.ADMISSIBLE
        return any(len(e) for e in oracle.enumerate_extensions(af, sigma, limit))
    except oracle.OracleLimitError:
        return None


def _read_framework(path: str, fmt: str) -> tuple[ArgumentationFramework, str]:
    text = Path(path).read_text()
    used = detect_format(text) if fmt == "auto" else fmt
    return parse(text, used), used


def _anneal_params(ns) -> AnnealParams:
    return AnnealParams(
        num_reads=ns.reads, num_sweeps=ns.sweeps, base_seed=ns.seed,
        beta_hot=ns.beta_hot, beta_cold=ns.beta_cold,
        max_restart_iterations=ns.restarts, timeout_seconds=ns.timeout)


def _apply_config(ns, parser: argparse.ArgumentParser):
    if not getattr(ns, "config", None):
        return
    try:
        values = json.loads(Path(ns.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config file: {exc}")
    aliases = {"lambda": "lam"}
    for key, value in values.items():
        attr = aliases.get(key, key)
        if hasattr(ns, attr) and getattr(ns, attr) is None:
            setattr(ns, attr, value)


_DEFAULTS = {"seed": 0, "restarts": 100, "timeout": 60.0, "jobs": 1}


def _fill_defaults(ns):
    for key, value in _DEFAULTS.items():
        if hasattr(ns, key) and getattr(ns, key) is None:
            setattr(ns, key, value)


def _solve_report(af: ArgumentationFramework, task: str, arg_name: str | None,
                  params: AnnealParams, check: bool) -> dict:
    encoded = build_task(af, task, arg_name)
    report = decide(encoded, params)
    inverted = task == "SCneg-CO"
    encoded_yes = report.answer == ANSWER_YES
    reported = ("NO" if encoded_yes else "YES") if inverted else \
        ("YES" if encoded_yes else "NO")
    doc = {
        "task": task,
        "argument": arg_name,
        "answer": reported,
        "certified": report.certified,
        "witness": list(report.witness.names(af)) if report.witness else None,
        "energy": report.energy,
        "restarts": report.restarts,
        "reads": report.reads_executed,
        "wall_time": round(report.wall_time, 6),
        "timed_out": report.answer == "TIMEOUT-NO",
        "num_variables": encoded.problem.num_variables,
        "num_decision_variables": encoded.num_decision_variables,
        "seed": params.base_seed,
    }
    if inverted:
        doc["encoded_answer"] = report.answer
    if check:
        truth = oracle_answer(af, task, arg_name)
        doc["oracle"] = None if truth is None else {
            "answer": "YES" if truth else "NO",
            "agrees": (reported == "YES") == truth,
        }
    return doc


def _print_solve(doc: dict, as_json: bool):
    if as_json:
        print(json.dumps(doc, indent=2))
        return
    print(doc["answer"])
    if doc["witness"]:
        print("w " + " ".join(doc["witness"]))


def _solve_exit(doc: dict) -> int:
    if doc.get("oracle") and not doc["oracle"]["agrees"] and doc["certified"]:
        # a verified witness can never contradict the oracle
        return EXIT_INCONSISTENT
    return EXIT_OK if doc["certified"] else EXIT_UNCERTIFIED


def _solve_one_file(job) -> dict:
    path, fmt, task, arg_name, params_dict, check = job
    try:
        af, _ = _read_framework(path, fmt)
        params = AnnealParams(**params_dict)
        doc = _solve_report(af, task, arg_name, params, check)
        doc["input"] = path
        return doc
    except (ParseError, ValueError) as exc:
        return {"input": path, "error": str(exc)}


def cmd_solve(ns, parser) -> int:
    params = _anneal_params(ns)
    check = bool(ns.check)
    if ns.dir:
        root = Path(ns.input)
        if not root.is_dir():
            parser.error(f"{ns.input} is not a directory")
        files = sorted(str(p) for p in root.iterdir()
                       if p.is_file() and not p.name.endswith(".json"))
        params_dict = {
            "num_reads": ns.reads, "num_sweeps": ns.sweeps, "base_seed": ns.seed,
            "beta_hot": ns.beta_hot, "beta_cold": ns.beta_cold,
            "max_restart_iterations": ns.restarts, "timeout_seconds": ns.timeout}
        jobs = [(f, ns.format, ns.task, ns.arg, params_dict, check) for f in files]
        if ns.jobs > 1:
            with ProcessPoolExecutor(max_workers=ns.jobs) as pool:
                results = list(pool.map(_solve_one_file, jobs))
        else:
            results = [_solve_one_file(j) for j in jobs]
        summary = {
            "count": len(results),
            "yes": sum(1 for r in results if r.get("answer") == "YES"),
            "no": sum(1 for r in results if r.get("answer") == "NO"),
            "timeouts": sum(1 for r in results if r.get("timed_out")),
            "errors": sum(1 for r in results if "error" in r),
            "certified": sum(1 for r in results if r.get("certified")),
            "wall_time": round(sum(r.get("wall_time", 0.0) for r in results), 6),
        }
        if check:
            agreements = [r["oracle"]["agrees"] for r in results
                          if r.get("oracle") is not None]
            summary["oracle_checked"] = len(agreements)
            summary["oracle_agreements"] = sum(agreements)
        if ns.json:
            print(json.dumps({"instances": results, "summary": summary}, indent=2))
        else:
            for r in results:
                print(f"{r['input']}\t{r.get('answer', 'ERROR')}")
            print(f"# {summary['count']} instances, {summary['yes']} YES, "
                  f"{summary['no']} NO, {summary['errors']} errors")
        return EXIT_CONFIG if summary["errors"] else EXIT_OK
    try:
        af, _ = _read_framework(ns.input, ns.format)
        doc = _solve_report(af, ns.task, ns.arg, params, check)
    except EncodingConsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    doc["input"] = ns.input
    if doc.get("oracle") and not doc["oracle"]["agrees"] and not doc["certified"]:
        print("note: exact oracle disagrees with the uncertified answer "
              "(solver miss, not an error)", file=sys.stderr)
    _print_solve(doc, ns.json)
    return _solve_exit(doc)


def _parse_target(ns, af: ArgumentationFramework) -> ArgumentSet:
    if ns.target:
        names = [t.strip() for t in ns.target.split(",") if t.strip()]
    elif ns.target_file:
        names = [line.strip() for line in Path(ns.target_file).read_text().splitlines()
                 if line.strip()]
    else:
        raise ValueError("enforce needs --target or --target-file")
    return ArgumentSet.from_names(af, names)


def cmd_enforce(ns, parser) -> int:
    try:
        af, fmt = _read_framework(ns.input, ns.format)
        target = _parse_target(ns, af)
        params = _anneal_params(ns)
        result = enforcement.enforce(af, target, params, ns.lam)
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    added = sorted(result.attacks - af.attacks)
    removed = sorted(af.attacks - result.attacks)
    names = af.arguments
    if ns.json:
        doc = {
            "input": ns.input,
            "target": list(target.names(af)),
            "distance": result.distance,
            "verified": result.verified,
            "energy": result.energy,
            "constraint_penalty": result.constraint_penalty,
            "added": [[names[a], names[b]] for a, b in added],
            "removed": [[names[a], names[b]] for a, b in removed],
            "lambda": ns.lam if ns.lam is not None
            else enforcement.default_lambda(af.num_arguments),
            "restarts": result.restarts,
            "wall_time": round(result.wall_time, 6),
        }
        print(json.dumps(doc, indent=2))
    else:
        writer = format_iccma if fmt == "iccma" else format_apx
        sys.stdout.write(writer(result.framework))
        for a, b in removed:
            print(f"-att({names[a]},{names[b]})")
        for a, b in added:
            print(f"+att({names[a]},{names[b]})")
        print(f"distance {result.distance}")
    return EXIT_OK if result.verified else EXIT_UNCERTIFIED


def cmd_verify(ns, parser) -> int:
    try:
        af, _ = _read_framework(ns.input, ns.format)
        sigma = Semantics.parse(ns.sigma)
        names = [t.strip() for t in ns.set.split(",") if t.strip()] if ns.set else []
        e = ArgumentSet.from_names(af, names)
        ok = oracle.verify(af, e, sigma, ns.limit)
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print("YES" if ok else "NO")
    return EXIT_OK


def cmd_enumerate(ns, parser) -> int:
    try:
        af, _ = _read_framework(ns.input, ns.format)
        sigma = Semantics.parse(ns.sigma)
        extensions = oracle.enumerate_extensions(af, sigma, ns.limit)
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if ns.json:
        print(json.dumps([list(e.names(af)) for e in extensions]))
    else:
        for e in extensions:
            print(" ".join(e.names(af)))
    return EXIT_OK


def cmd_gen(ns, parser) -> int:
    try:
        spec = benchgen.GenSpec(n=ns.n, c=ns.c, seed=ns.seed, variant=ns.variant)
        base = None
        if ns.base:
            base, _ = _read_framework(ns.base, ns.format)
        af = benchgen.generate(spec, base)
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = format_iccma(af) if ns.format == "iccma" else format_apx(af)
    doc = benchgen.manifest(spec, af)
    if ns.out:
        Path(ns.out).write_text(text)
        Path(ns.out + ".manifest.json").write_text(json.dumps(doc, indent=2) + "\n")
        print(ns.out)
    else:
        sys.stdout.write(text)
        print(json.dumps(doc), file=sys.stderr)
    return EXIT_OK


def cmd_encode(ns, parser) -> int:
    try:
        af, _ = _read_framework(ns.input, ns.format)
        if ns.task == "ENFORCE":
            if not (ns.target or ns.target_file):
                raise ValueError("encoding ENFORCE needs --target")
            target = _parse_target(ns, af)
            task = enforcement.build_strict_complete(af, target, ns.lam)
            problem, roles = task.problem, task.registry.variable_roles()
            meta = {
                "task": "ENFORCE", "target": list(target.names(af)),
                "lambda": task.lam,
                "nominal_variables": task.registry.nominal_count,
                "paper_variable_estimate": task.paper_estimate,
            }
        elif ns.task in ENCODE_ONLY_TASKS:
            builder = {"CF": encodings.build_cf, "ADM": encodings.build_adm,
                       "CO": encodings.build_co, "PR": encodings.build_pr,
                       "SST": encodings.build_sst, "ST": encodings.build_st}[ns.task]
            task = builder(af)
            problem, roles = task.problem, task.variable_roles()
            meta = {"task": ns.task, "label": task.label,
                    "expected_zero": task.expected_zero,
                    "nominal_variables": task.registry.nominal_count}
        else:
            task = build_task(af, ns.task, ns.arg)
            problem, roles = task.problem, task.variable_roles()
            meta = {"task": ns.task, "argument": ns.arg, "label": task.label,
                    "expected_zero": task.expected_zero,
                    "nominal_variables": task.registry.nominal_count}
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if ns.triangular:
        sys.stdout.write(problem.to_triangular_text())
    else:
        doc = problem.to_json_dict(roles)
        doc.update(meta)
        print(json.dumps(doc, indent=2))
    return EXIT_OK


def _add_anneal_flags(sub):
    sub.add_argument("--reads", type=int, default=None,
                     help="annealing reads per restart (default 2x decision bits)")
    sub.add_argument("--sweeps", type=int, default=None,
                     help="sweeps per read (default min(50x decision bits, 1000))")
    sub.add_argument("--seed", type=int, default=None, help="base random seed")
    sub.add_argument("--restarts", type=int, default=None,
                     help="maximum reseeded restarts (default 100)")
    sub.add_argument("--timeout", type=float, default=None,
                     help="wall-clock budget in seconds (default 60)")
    sub.add_argument("--beta-hot", type=float, default=None,
                     help="hottest inverse temperature (default auto)")
    sub.add_argument("--beta-cold", type=float, default=None,
                     help="coldest inverse temperature (default auto)")
    sub.add_argument("--config", help="JSON file supplying values for absent flags")


def _add_common(sub):
    sub.add_argument("input", help="framework file")
    sub.add_argument("--format", choices=("auto", "apx", "iccma"), default="auto")
    sub.add_argument("--json", action="store_true", help="emit a JSON report")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="afqubo",
        description="argumentation decision tasks and enforcement via annealed QUBO")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("solve", help="decide an acceptance/existence task")
    _add_common(p)
    p.add_argument("--task", choices=SOLVE_TASKS, required=True)
    p.add_argument("--arg", help="argument name for DC-*/SCneg-* tasks")
    p.add_argument("--check", action="store_true",
                   help="compare against the exact oracle when feasible")
    p.add_argument("--dir", action="store_true",
                   help="treat input as a directory and solve every file")
    p.add_argument("--jobs", type=int, default=None,
                   help="parallel workers in --dir mode")
    _add_anneal_flags(p)
    p.set_defaults(func=cmd_solve)

    p = subs.add_parser("enforce", help="minimally edit attacks so the target is complete")
    _add_common(p)
    p.add_argument("--target", help="comma-separated argument names")
    p.add_argument("--target-file", help="file with one argument name per line")
    p.add_argument("--lambda", dest="lam", type=int, default=None,
                   help="constraint amplification (default max(100, n^2+1))")
    _add_anneal_flags(p)
    p.set_defaults(func=cmd_enforce)

    p = subs.add_parser("verify", help="exact oracle membership check")
    _add_common(p)
    p.add_argument("--sigma", required=True)
    p.add_argument("--set", default="", help="comma-separated argument names")
    p.add_argument("--limit", type=int, default=oracle.DEFAULT_ORACLE_LIMIT)
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("enumerate", help="exact oracle extension listing")
    _add_common(p)
    p.add_argument("--sigma", required=True)
    p.add_argument("--limit", type=int, default=oracle.DEFAULT_ORACLE_LIMIT)
    p.set_defaults(func=cmd_enumerate)

    p = subs.add_parser("gen", help="generate benchmark frameworks")
    p.add_argument("--variant", choices=("er", "b3", "b4"), required=True)
    p.add_argument("-n", type=int, required=True, help="base argument count")
    p.add_argument("--c", type=float, default=2.5, help="connectivity constant")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--base", help="framework file to transform (b3/b4)")
    p.add_argument("--format", choices=("apx", "iccma"), default="apx")
    p.add_argument("--out", help="output path; stdout when absent")
    p.set_defaults(func=cmd_gen)

    p = subs.add_parser("encode", help="export a task's QUBO")
    _add_common(p)
    p.add_argument("--task", choices=SOLVE_TASKS + ENCODE_ONLY_TASKS, required=True)
    p.add_argument("--arg")
    p.add_argument("--target")
    p.add_argument("--target-file")
    p.add_argument("--lambda", dest="lam", type=int, default=None)
    p.add_argument("--triangular", action="store_true",
                   help="upper-triangular text instead of JSON")
    p.set_defaults(func=cmd_encode)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    ns = parser.parse_args(argv)
    _apply_config(ns, parser)
    _fill_defaults(ns)
    try:
        return ns.func(ns, parser)
    except BrokenPipeError:
        return EXIT_OK


def entry():  # console-script target
    sys.exit(main())


if __name__ == "__main__":
    entry()
