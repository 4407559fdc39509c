"""Command-line entry point ``unram-lab``."""

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field

from . import groups
from .arith import is_prime, prime_factors, split_prime_power
from .chartab import character_table, dixon_table, load_table, partitions
from .congruence import (
    depth_matrix,
    explain_gap,
    sim_m,
    unramified_for,
    verify_prop_3_2,
    verify_theorem_3_3,
)
from .cyclotomic import INFINITY
from .errors import ParseError, UnramLabError
from .symtools import (
    Partition,
    comb_equivalent,
    comb_normal_form,
    count_row_decompositions,
    m_character_value,
    verify_lemma_4_6,
    verify_prop_4_2,
)
from .unramified import gamma_classes_from_table, unramified_table

COMMANDS = ("chartab", "unramified", "gamma-classes", "simm", "depth", "verify", "partition", "mvalue", "sweep")
CHECKS = ("thm33", "prop32", "gap", "all", "prop42", "lemma46")

BUILTIN_SUITE = (
    ["sym:1", "sym:2", "sym:3", "sym:4", "sym:5"]
    + [f"cyc:{n}" for n in (2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 16, 18, 24, 25, 27, 32, 36, 49, 64, 81, 100, 128)]
    + [f"dih:{n}" for n in range(3, 13)]
    + ["dih:16", "dih:25", "dih:27", "dih:50", "dih:100"]
    + ["elem:2,2", "elem:2,3", "elem:2,4", "elem:2,5", "elem:2,6", "elem:2,7"]
    + ["elem:3,2", "elem:3,3", "elem:3,4", "elem:5,2", "elem:5,3", "elem:7,2"]
    + ["heis:3,1", "heis:5,1", "q8"]
    + [
        "prod:q8,cyc:2",
        "prod:q8,cyc:3",
        "prod:q8,q8",
        "prod:sym:3,cyc:3",
        "prod:sym:3,sym:3",
        "prod:sym:4,cyc:2",
        "prod:sym:4,cyc:3",
        "prod:dih:4,cyc:4",
        "prod:cyc:4,cyc:4",
        "prod:cyc:9,cyc:3",
        "prod:heis:3,1,cyc:2",
        "prod:dih:5,cyc:5",
    ]
)


def builtin_suite(max_order=200):
    """Group specs of the built-in suite with order at most ``max_order``."""
    out = []
    for spec in BUILTIN_SUITE:
        G = parse_group_spec(spec)
        if G.order <= max_order:
            out.append(spec)
    return out


# -- group specs ------------------------------------------------------------


class _SpecParser:
    def __init__(self, text, order_cap):
        self.text = text
        self.pos = 0
        self.order_cap = order_cap

    def error(self, msg):
        raise ParseError(f"bad group spec {self.text!r} at position {self.pos}: {msg}")

    def expect(self, s):
        if not self.text.startswith(s, self.pos):
            self.error(f"expected {s!r}")
        self.pos += len(s)

    def integer(self):
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def word(self):
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum()):
            self.pos += 1
        return self.text[start:self.pos]

    def group(self):
        kind = self.word()
        cap = self.order_cap
        if kind == "q8":
            return groups.quaternion8(order_cap=cap)
        self.expect(":")
        if kind == "sym":
            return groups.symmetric(self.integer(), order_cap=cap)
        if kind == "cyc":
            return groups.cyclic(self.integer(), order_cap=cap)
        if kind == "dih":
            return groups.dihedral(self.integer(), order_cap=cap)
        if kind in ("elem", "heis"):
            a = self.integer()
            self.expect(",")
            b = self.integer()
            builder = groups.elementary_abelian if kind == "elem" else groups.heisenberg
            return builder(a, b, order_cap=cap)
        if kind == "prod":
            left = self.group()
            self.expect(",")
            right = self.group()
            return groups.direct_product(left, right, order_cap=cap)
        if kind == "file":
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos] != ",":
                self.pos += 1
            path = self.text[start:self.pos]
            if not path:
                self.error("empty file path")
            return groups.from_file(path, order_cap=cap)
        self.error(f"unknown group family {kind!r}")


def parse_group_spec(text, order_cap=None):
    parser = _SpecParser(text.strip(), order_cap)
    G = parser.group()
    if parser.pos != len(parser.text):
        parser.error("trailing characters")
    G.order  # enumerate now so cap violations surface as input errors
    return G


# -- output -----------------------------------------------------------------


@dataclass
class Output:
    data: object
    header: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    ok: bool = True


def _render(out, fmt):
    if fmt == "json":
        return json.dumps(out.data, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if out.header:
            writer.writerow(out.header)
        writer.writerows(out.rows)
        return buf.getvalue()
    cells = ([out.header] if out.header else []) + [[str(c) for c in r] for r in out.rows]
    if not cells:
        return ""
    widths = [max(len(r[i]) for r in cells if i < len(r)) for i in range(max(len(r) for r in cells))]
    lines = []
    for r in cells:
        lines.append("  ".join(c.rjust(widths[i]) for i, c in enumerate(r)).rstrip())
    return "\n".join(lines) + "\n"


def _depth_cell(d):
    return "inf" if d is INFINITY else d


def _report_output(reports):
    ok = all(r.passed for r in reports)
    data = [r.to_json() for r in reports]
    rows = []
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        info = json.dumps(r.details, sort_keys=True)
        if r.counterexample is not None:
            info += " counterexample=" + json.dumps(r.counterexample)
        rows.append([r.check, r.group, r.p, "" if r.m is None else r.m, status, info])
    return Output(data if len(data) != 1 else data[0], ["check", "group", "p", "m", "status", "details"], rows, ok)


# -- commands ---------------------------------------------------------------


def _group(args):
    if not args.group:
        raise ParseError("a group spec is required")
    return parse_group_spec(args.group, args.order_cap)


def _need_prime(p):
    if p is None:
        raise ParseError("-p is required")
    if not is_prime(p):
        raise ParseError(f"-p {p} is not prime")
    return p


def _table(args):
    if args.table_file:
        return load_table(args.table_file, validate=True)
    G = _group(args)
    if getattr(args, "engine", "auto") == "dixon":
        return dixon_table(G)
    return character_table(G, engine=getattr(args, "engine", "auto"))


def cmd_chartab(args):
    T = _table(args)
    header = ["chi"] + [c.name for c in T.classes]
    rows = [[f"X.{i + 1}"] + [v.format() for v in row] for i, row in enumerate(T.characters)]
    rows.insert(0, ["size"] + [c.size for c in T.classes])
    return Output(T.to_json(), header, rows)


def _unramified(args):
    p = _need_prime(args.p)
    if args.table_file:
        return unramified_table(_table(args), p)
    return unramified_for(_group(args), p)


def cmd_unramified(args):
    U = _unramified(args)
    header = ["orbit"] + U.column_names()
    rows = [[" ".join(map(str, row.orbit))] + [v.format() for v in row.values] for row in U.rows]
    return Output(U.to_json(), header, rows)


def cmd_gamma_classes(args):
    p = _need_prime(args.p)
    T = _table(args)
    blocks = gamma_classes_from_table(T, p)
    data = {
        "group": T.group_name,
        "p": p,
        "gamma_classes": [
            {"classes": [T.classes[j].name for j in gc.classes], "representative": T.classes[gc.representative].name}
            for gc in blocks
        ],
    }
    rows = [[i, T.classes[gc.representative].name, " ".join(T.classes[j].name for j in gc.classes)] for i, gc in enumerate(blocks)]
    return Output(data, ["index", "representative", "classes"], rows)


def cmd_simm(args):
    p = _need_prime(args.p)
    G = _group(args)
    part = sim_m(G, p, args.m)
    classes = G.conjugacy_classes()
    named = [[classes[j].name for j in block] for block in part.blocks]
    data = {"group": G.name, "p": p, "m": args.m, "blocks": named}
    return Output(data, ["block", "classes"], [[i, " ".join(b)] for i, b in enumerate(named)])


def _class_lookup(U, name):
    for j, c in enumerate(U.table.classes):
        if c.name == name:
            return U.gamma_class_of(j)
    names = U.column_names()
    if name in names:
        return names.index(name)
    raise ParseError(f"unknown class {name!r}")


def cmd_depth(args):
    U = _unramified(args)
    D = depth_matrix(U)
    labels = list(D.labels)
    if args.pair:
        try:
            a, b = args.pair.split(",")
        except ValueError:
            raise ParseError("--pair needs two class names separated by a comma") from None
        i, j = _class_lookup(U, a.strip()), _class_lookup(U, b.strip())
        d = _depth_cell(D[i, j])
        data = {"group": U.table.group_name, "p": U.p, "e": U.e, "pair": [labels[i], labels[j]], "depth": d}
        return Output(data, ["a", "b", "depth"], [[labels[i], labels[j], d]])
    entries = [[_depth_cell(x) for x in row] for row in D.entries]
    data = {"group": U.table.group_name, "p": U.p, "e": U.e, "labels": labels, "depth": entries}
    return Output(data, [""] + labels, [[labels[i]] + entries[i] for i in range(len(labels))])


def _levels(G, p, m):
    e, _ = split_prime_power(G.order, p)
    return [m] if m is not None else list(range(1, e + 1))


def _sym_degree(spec):
    text = spec.strip()
    if not text.startswith("sym:") or not text[4:].isdigit():
        raise ParseError("this check needs a group spec of the form sym:N")
    return int(text[4:])


def run_verify(spec, p, m, check, order_cap=None):
    """Reports for one check; the symmetric-group checks never enumerate a group here."""
    if check == "prop42":
        n = _sym_degree(spec)
        levels = [m] if m is not None else [1, 2, 3]
        return [verify_prop_4_2(n, p, level) for level in levels]
    if check == "lemma46":
        return lemma46_reports(_sym_degree(spec), p, m)
    G = parse_group_spec(spec, order_cap)
    reports = []
    if check in ("thm33", "all"):
        reports.extend(verify_theorem_3_3(G, p, level) for level in _levels(G, p, m))
    if check in ("prop32", "all"):
        reports.append(verify_prop_3_2(G, p))
    if check in ("gap", "all"):
        reports.append(explain_gap(G, p, m))
    return reports


def lemma46_reports(n, p, m=None):
    """Every valid (xi, k, m) with |xi| + k p^m = n."""
    out = []
    levels = [m] if m is not None else range(1, n + 1)
    for level in levels:
        k = 1
        while k * p**level <= n:
            rest = n - k * p**level
            if n - p * k >= k:
                for xi in partitions(rest):
                    out.append(verify_lemma_4_6(Partition(xi), k, level, p))
            k += 1
    return out


def cmd_verify(args):
    p = _need_prime(args.p)
    if not args.group:
        raise ParseError("a group spec is required")
    return _report_output(run_verify(args.group, p, args.m, args.check, args.order_cap))


def cmd_partition(args):
    p = _need_prime(args.p)
    if args.action == "nf":
        lam = Partition.parse(args.partitions[0])
        nf = comb_normal_form(lam, p, args.m)
        return Output({"partition": str(lam), "p": p, "m": args.m, "normal_form": str(nf)}, ["partition", "normal_form"], [[str(lam), str(nf)]])
    if len(args.partitions) != 2:
        raise ParseError("partition equiv needs two partitions")
    lam, mu = (Partition.parse(t) for t in args.partitions)
    eq = comb_equivalent(lam, mu, p, args.m, oracle=args.oracle)
    data = {"lambda": str(lam), "mu": str(mu), "p": p, "m": args.m, "oracle": args.oracle, "equivalent": eq}
    return Output(data, ["lambda", "mu", "equivalent"], [[str(lam), str(mu), str(eq).lower()]])


def cmd_mvalue(args):
    lam, mu = Partition.parse(args.lam), Partition.parse(args.mu)
    value = count_row_decompositions(lam, mu)
    data = {"lambda": str(lam), "mu": str(mu), "value": value}
    ok = True
    if args.oracle:
        check = m_character_value(lam, mu)
        data["oracle"] = check
        ok = check == value
    return Output(data, list(data), [list(data.values())], ok)


# -- sweep ------------------------------------------------------------------


def _load_manifest(path):
    if path == "builtin":
        return [{"command": "verify", "group": spec, "check": "thm33+prop32"} for spec in builtin_suite()]
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read manifest {path}: {exc}") from None
    if isinstance(data, dict):
        data = data.get("runs", data.get("entries"))
    if not isinstance(data, list):
        raise ParseError("manifest must be a list of run configurations")
    return data


def _sweep_entry(cfg, order_cap):
    if not isinstance(cfg, dict):
        raise ParseError("entry must be an object")
    command = cfg.get("command", "verify")
    spec = cfg.get("group")
    if not isinstance(spec, str):
        raise ParseError("entry needs a 'group' spec")
    cap = cfg.get("order_cap", order_cap)
    primes = cfg.get("p")
    if primes is None:
        primes = prime_factors(parse_group_spec(spec, cap).order)
    elif isinstance(primes, int):
        primes = [primes]
    for p in primes:
        if not isinstance(p, int) or not is_prime(p):
            raise ParseError(f"bad prime {p!r}")
    m = cfg.get("m")
    if command == "depth":
        G = parse_group_spec(spec, cap)
        results = []
        for p in primes:
            D = depth_matrix(unramified_for(G, p))
            results.append(
                {
                    "p": p,
                    "e": D.e,
                    "labels": list(D.labels),
                    "depth": [[_depth_cell(x) for x in row] for row in D.entries],
                }
            )
        return True, {"depths": results}
    if command != "verify":
        raise ParseError(f"sweep supports 'verify' and 'depth', not {command!r}")
    checks = str(cfg.get("check", "all")).split("+")
    reports = []
    for p in primes:
        for check in checks:
            if check not in CHECKS:
                raise ParseError(f"unknown check {check!r}")
            reports.extend(run_verify(spec, p, m, check, cap))
    passed = all(r.passed for r in reports)
    return passed, {"reports": [r.to_json() for r in reports]}


def run_sweep(manifest, order_cap=None):
    entries = []
    counts = {"passed": 0, "failed": 0, "errors": 0}
    for index, cfg in enumerate(manifest):
        record = {"index": index, "config": cfg}
        try:
            passed, payload = _sweep_entry(cfg, order_cap)
        except UnramLabError as exc:
            record["status"] = "error"
            record["error"] = f"{type(exc).__name__}: {exc}"
            counts["errors"] += 1
        else:
            record["status"] = "pass" if passed else "fail"
            record.update(payload)
            counts["passed" if passed else "failed"] += 1
        entries.append(record)
    return {"entries": entries, "summary": counts}


def cmd_sweep(args):
    data = run_sweep(_load_manifest(args.manifest), args.order_cap)
    rows = []
    for rec in data["entries"]:
        cfg = rec["config"]
        label = cfg.get("group", "?") if isinstance(cfg, dict) else "?"
        rows.append([rec["index"], label, rec["status"], rec.get("error", "")])
    ok = data["summary"]["failed"] == 0 and data["summary"]["errors"] == 0
    return Output(data, ["index", "group", "status", "error"], rows, ok)


HANDLERS = {
    "chartab": cmd_chartab,
    "unramified": cmd_unramified,
    "gamma-classes": cmd_gamma_classes,
    "simm": cmd_simm,
    "depth": cmd_depth,
    "verify": cmd_verify,
    "partition": cmd_partition,
    "mvalue": cmd_mvalue,
    "sweep": cmd_sweep,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", type=int, help="prime")
    common.add_argument("-m", type=int, help="congruence level m >= 1")
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--order-cap", type=int, default=None, help="largest group order to enumerate")
    common.add_argument("--out", help="write output to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="unram-lab", description="Unramified character tables and their congruences.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_group(name, help_text, table_file=True):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.add_argument("group", nargs="?", help="group spec, e.g. cyc:81 or prod:q8,cyc:3")
        if table_file:
            sp.add_argument("--table-file", help="character table JSON to use instead of computing one")
        else:
            sp.set_defaults(table_file=None)
        return sp

    sp = with_group("chartab", "ordinary character table")
    sp.add_argument("--engine", choices=("auto", "dixon", "mn"), default="auto")
    with_group("unramified", "unramified character table at p")
    with_group("gamma-classes", "Gamma-conjugacy classes at p")
    with_group("simm", "blocks of the ~_m relation", table_file=False)
    sp = with_group("depth", "congruence depths between unramified columns")
    sp.add_argument("--pair", help="two class names, e.g. 1a,2a")
    sp = with_group("verify", "run verification checks", table_file=False)
    sp.add_argument("--check", choices=CHECKS, default="all")

    sp = sub.add_parser("partition", parents=[common], help="comb relation on partitions")
    sp.add_argument("action", choices=("nf", "equiv"))
    sp.add_argument("partitions", nargs="+", help="partitions such as 2,1,1 or 1^4")
    sp.add_argument("--oracle", action="store_true", help="decide equivalence by breadth-first search")

    sp = sub.add_parser("mvalue", parents=[common], help="permutation character of a Young subgroup")
    sp.add_argument("lam")
    sp.add_argument("mu")
    sp.add_argument("--oracle", action="store_true", help="cross-check by enumerating set partitions")

    sp = sub.add_parser("sweep", parents=[common], help="run a JSON manifest of configurations")
    sp.add_argument("manifest", help="manifest path, or 'builtin' for the built-in suite")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.order_cap is not None:
        os.environ["UNRAM_LAB_ORDER_CAP"] = str(args.order_cap)
    if args.m is not None and args.m < 1:
        print("unram-lab: -m must be at least 1", file=sys.stderr)
        return 2
    if args.command in ("simm", "partition") and args.m is None:
        print(f"unram-lab: {args.command} needs -m", file=sys.stderr)
        return 2
    try:
        out = HANDLERS[args.command](args)
        text = _render(out, args.format)
    except (UnramLabError, OSError) as exc:
        print(f"unram-lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if out.ok else 1


if __name__ == "__main__":
    sys.exit(main())
