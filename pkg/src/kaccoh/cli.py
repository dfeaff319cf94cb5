"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 budget exceeded, 4 a mathematical
check failed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import __version__
from .cocycles import (check_pair_cocycle, check_pentagon, check_pentagonal_cocycle, build_W,
                       kac_cochain_to_pair, load_theta, pair_to_json, pentagonal_coboundary,
                       pent_cochain_to_theta, reduce_values, zeros)
from .complexes import (ALIASES, DEFAULT_BUDGET, KINDS, BudgetExceeded, CoefficientModule,
                        ComplexError, build_complex, export_complex)
from .groups import GroupError, build_group_from_permutations, build_group_from_table, subgroup_closure
from .homology import cohomology
from .matched_pair import MatchedPairError, build_matched_pair, square_bijection_report
from .sequence import extension_group, kac_sequence

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_FAIL = 0, 2, 3, 4


class SchemaError(ValueError):
    def __init__(self, where, message):
        self.where = where
        super().__init__(f"{where}: {message}")


@dataclass
class RunConfig:
    input: str
    command: str
    coeff: str = "T"
    degree: int = 2
    through: int = 3
    complex: str = "kac_C"
    theta: str | None = None
    out: str | None = None
    budget: int = DEFAULT_BUDGET
    seed: int = 0
    fuzz: int = 0
    representatives: bool = False
    max_degree: int = 3

    def __post_init__(self):
        if self.max_degree < 1:
            raise ValueError("max_degree must be at least 1")
        if self.budget <= 0:
            raise ValueError("budget must be positive")


# --------------------------------------------------------------------------
# input

def _field(doc, key, where):
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError(where, f"missing field {key!r}")
    return doc[key]


def _int_list(value, where):
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool)
                                              for v in value):
        raise SchemaError(where, "expected a list of integers")
    return value


def parse_group(doc):
    if not isinstance(doc, dict):
        raise SchemaError("group", "expected an object")
    if "table" in doc:
        table = _field(doc, "table", "group")
        if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
            raise SchemaError("group.table", "expected a list of rows")
        for i, row in enumerate(table):
            _int_list(row, f"group.table[{i}]")
        if "order" in doc and doc["order"] != len(table):
            raise SchemaError("group.order", f"order {doc['order']} but table has {len(table)} rows")
        return build_group_from_table(np.array(table, dtype=np.int64))
    if "permutation_generators" in doc:
        degree = _field(doc, "degree", "group")
        if not isinstance(degree, int) or degree < 1:
            raise SchemaError("group.degree", "expected a positive integer")
        gens = doc["permutation_generators"]
        if not isinstance(gens, list):
            raise SchemaError("group.permutation_generators", "expected a list")
        for i, g in enumerate(gens):
            _int_list(g, f"group.permutation_generators[{i}]")
        return build_group_from_permutations(degree, gens)
    raise SchemaError("group", "needs either 'table' or 'permutation_generators'")


def parse_document(doc):
    group = parse_group(_field(doc, "group", "<root>"))
    g1 = _int_list(_field(doc, "G1", "<root>"), "G1")
    g2 = _int_list(_field(doc, "G2", "<root>"), "G2")
    for name, lst in (("G1", g1), ("G2", g2)):
        if any(not 0 <= v < group.order for v in lst):
            raise SchemaError(name, f"element index outside 0..{group.order - 1}")
    if doc.get("generators", False):
        g1 = subgroup_closure(group, g1).elements
        g2 = subgroup_closure(group, g2).elements
    return group, build_matched_pair(group, g1, g2)


def parse_input(path):
    """Read a matched-pair JSON file; returns (group, matched pair)."""
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        doc = json.loads(raw.decode("utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}", exc.msg) from exc
    except UnicodeDecodeError as exc:
        raise SchemaError("<file>", "not UTF-8 text") from exc
    return parse_document(doc)


# --------------------------------------------------------------------------
# commands

def _fraction_strings(vec):
    return [str(Fraction(v)) for v in vec]


def _cmd_validate(cfg, mp):
    rep = square_bijection_report(mp)
    ok = all(rep.values())
    payload = {"order": mp.group.order, "G1": list(mp.g1.elements), "G2": list(mp.g2.elements),
               "square_checks": rep}
    return payload, ok


def _cmd_cohomology(cfg, mp):
    coeff = CoefficientModule.parse(cfg.coeff)
    kind = ALIASES.get(cfg.complex, cfg.complex)
    cx = build_complex(mp, kind, max(1, cfg.degree), cfg.budget)
    grp = cohomology(cx, cfg.degree, coeff)
    payload = {"complex": kind, "group": grp.info.to_json(cfg.degree, coeff.label),
               "summary": str(grp.info), "generator_orders": list(grp.orders)}
    if cfg.representatives:
        payload["representatives"] = [_fraction_strings(g) for g in grp.generators]
    return payload, True


def _cmd_sequence(cfg, mp):
    coeff = CoefficientModule.parse(cfg.coeff)
    seq = kac_sequence(mp, coeff, cfg.through, cfg.budget)
    nodes = [{"label": lab, "group": info.to_json(coeff=coeff.label), "summary": str(info)}
             for lab, info in zip(seq.labels, seq.infos())]
    results = [dict(r.to_json(), label=seq.labels[r.index]) for r in seq.results]
    return {"nodes": nodes, "exactness": results}, seq.exact


def _cmd_extensions(cfg, mp):
    coeff = CoefficientModule.parse(cfg.coeff)
    rep = extension_group(mp, coeff, 2, cfg.budget)
    reps = []
    if coeff.variant == "T":
        for k, o in enumerate(rep.kac.orders):
            coords = [Fraction(1 if j == k else 0, o if o else 1) for j in range(rep.kac.rank)]
            vec = rep.kac.representative(coords)
            pair = kac_cochain_to_pair(mp, vec, coeff)
            violations = check_pair_cocycle(mp, pair)
            reps.append({"order": o, "pair": pair_to_json(pair), "violations": len(violations)})
    payload = {
        "kac_C": rep.kac.info.to_json(2, coeff.label),
        "mapping_cone_M": rep.cone.info.to_json(2, coeff.label),
        "pentagonal_E": rep.pentagonal.info.to_json(2, coeff.label),
        "summary": str(rep.kac.info),
        "kac_to_cone_isomorphism": rep.cone_iso,
        "kac_to_pentagonal_isomorphism": rep.pentagonal_iso,
        "agree": rep.agree,
        "representatives": reps,
    }
    ok = rep.agree and all(r["violations"] == 0 for r in reps)
    return payload, ok


def _random_values(rng, shape, den=12):
    arr = zeros(shape)
    flat = arr.ravel()
    for k in range(flat.size):
        flat[k] = Fraction(int(rng.integers(0, den)), den)
    return arr


def pentagon_fuzz(mp, count, seed):
    """Bridge checks on seeded coboundaries and single-entry perturbations."""
    rng = np.random.default_rng(seed)
    n = mp.group.order
    mismatches = 0
    for _ in range(count):
        theta = pentagonal_coboundary(mp, _random_values(rng, n))
        if check_pentagonal_cocycle(mp, theta) or not check_pentagon(build_W(mp, theta)):
            mismatches += 1
        while True:
            bad = theta.copy()
            x, y = (int(v) for v in rng.integers(0, n, 2))
            bad[x, y] = bad[x, y] + Fraction(int(rng.integers(1, 12)), 12)
            bad = reduce_values(bad)
            if check_pentagonal_cocycle(mp, bad):
                break
        if check_pentagon(build_W(mp, bad)):
            mismatches += 1
    return mismatches


def _cmd_pentagon(cfg, mp):
    n = mp.group.order
    if cfg.theta:
        theta, _ = load_theta(cfg.theta)
    else:
        theta = zeros((n, n))
    violations = check_pentagonal_cocycle(mp, theta)
    verdict = check_pentagon(build_W(mp, theta))
    payload = {"cocycle_violations": len(violations),
               "first_violation": list(violations[0]) if violations else None,
               "pentagon": verdict, "consistent": verdict == (not violations)}
    ok = verdict and payload["consistent"]
    if cfg.fuzz:
        mism = pentagon_fuzz(mp, cfg.fuzz, cfg.seed)
        payload["fuzz"] = {"trials": cfg.fuzz, "seed": cfg.seed, "mismatches": mism}
        ok = ok and mism == 0
    return payload, ok


def _cmd_export(cfg, mp):
    if not cfg.out:
        raise SchemaError("--out", "export needs an output directory")
    kind = ALIASES.get(cfg.complex, cfg.complex)
    cx = build_complex(mp, kind, cfg.max_degree, cfg.budget)
    paths = export_complex(cx, cfg.out)
    return {"complex": kind, "ranks": {str(k): v for k, v in cx.ranks.items()},
            "files": paths}, True


def _cmd_isocheck(cfg, mp):
    coeff = CoefficientModule.parse(cfg.coeff)
    rep = extension_group(mp, coeff, cfg.degree, cfg.budget)
    payload = {"degree": cfg.degree, "kac_C": str(rep.kac.info),
               "pentagonal_E": str(rep.pentagonal.info), "isomorphism": rep.pentagonal_iso}
    return payload, rep.pentagonal_iso


COMMANDS = {"validate": _cmd_validate, "cohomology": _cmd_cohomology, "sequence": _cmd_sequence,
            "extensions": _cmd_extensions, "pentagon": _cmd_pentagon, "export": _cmd_export,
            "isocheck": _cmd_isocheck}


def run_command(cfg: RunConfig):
    """Run one command; returns the report dict (``status`` is PASS or FAIL)."""
    with open(cfg.input, "rb") as fh:
        digest = hashlib.sha256(fh.read()).hexdigest()
    start = time.perf_counter()
    _, mp = parse_input(cfg.input)
    payload, ok = COMMANDS[cfg.command](cfg, mp)
    return {
        "tool": "kaccoh",
        "version": __version__,
        "command": cfg.command,
        "input_digest": f"sha256:{digest}",
        "config": {"coeff": cfg.coeff, "degree": cfg.degree, "through": cfg.through,
                   "complex": cfg.complex, "budget": cfg.budget, "seed": cfg.seed},
        "status": "PASS" if ok else "FAIL",
        "payload": payload,
        "timing": {"seconds": round(time.perf_counter() - start, 3)},
    }


def _render(report):
    lines = [f"kaccoh {report['command']}: {report['status']}"]
    p = report["payload"]
    cmd = report["command"]
    if cmd == "cohomology":
        lines.append(f"H^{p['group']['degree']}({p['complex']}; {p['group']['coeff']}) = {p['summary']}")
    elif cmd == "sequence":
        status = {r["node"]: r["status"] for r in p["exactness"]}
        for k, nd in enumerate(p["nodes"]):
            lines.append(f"  {nd['label']:<22} {nd['summary']:<24} {status.get(k, '')}")
    elif cmd == "extensions":
        lines.append(f"H^2(m.p.; T) = {p['summary']}")
        for key in ("kac_C", "mapping_cone_M", "pentagonal_E"):
            g = p[key]
            lines.append(f"  {key:<15} torsion={g['torsion']} free={g['free_rank']} torus={g['torus_rank']}")
        lines.append(f"  agreement: {p['agree']}")
    elif cmd == "pentagon":
        lines.append(f"  cocycle violations: {p['cocycle_violations']}  pentagon: {p['pentagon']}")
        if "fuzz" in p:
            lines.append(f"  fuzz mismatches: {p['fuzz']['mismatches']} / {p['fuzz']['trials']}")
    else:
        lines.append(json.dumps(p, indent=2))
    return "\n".join(lines)


def build_parser():
    ap = argparse.ArgumentParser(prog="kaccoh", description="Cohomology of finite matched pairs.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("input", help="matched-pair JSON file")
    ap.add_argument("--coeff", default="T", help="Z, Zm:<m> or T (default T)")
    ap.add_argument("--degree", type=int, default=2)
    ap.add_argument("--through", type=int, default=3)
    ap.add_argument("--complex", default="kac_C", choices=sorted(set(KINDS) | set(ALIASES)))
    ap.add_argument("--theta", help="θ table JSON for the pentagon command")
    ap.add_argument("--out", help="output directory for export")
    ap.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                    help="maximum number of basis elements per block")
    ap.add_argument("--max-degree", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--fuzz", type=int, default=0, help="random bridge trials for pentagon")
    ap.add_argument("--representatives", action="store_true")
    ap.add_argument("--json", help="write the JSON report here")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.input, args.command, args.coeff, args.degree, args.through,
                        args.complex, args.theta, args.out, args.budget, args.seed, args.fuzz,
                        args.representatives, args.max_degree)
        report = run_command(cfg)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (SchemaError, GroupError, MatchedPairError, ComplexError, OSError, ValueError,
            KeyError) as exc:
        print(f"input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(_render(report))
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK if report["status"] == "PASS" else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
