"""Command line front end.

Facet files hold one facet per line as 1-based vertex labels, an optional
``m <int>`` header, ``#`` comments and blank lines.  Exit codes: 0 success,
1 manifold/orientability gate failure, 2 parse or configuration error,
3 internal inconsistency.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import fixtures
from .complex_core import from_facets, members, vertex_set
from .errors import (
    BudgetExceeded,
    GateFailure,
    GhostVertex,
    InternalInconsistency,
    MomentAngleError,
    NotPrime,
    ParseError,
    VertexOutOfRange,
)
from .field_linalg import check_prime
from .hochster import DEFAULT_M_CAP, all_subcomplex_betti, beta_zk_total, hochster_table, theorem_a_bound
from .homology import SubcomplexHomology, betti_numbers, is_closed_homology_manifold, is_F_orientable

EXIT_OK, EXIT_GATE, EXIT_CONFIG, EXIT_INCONSISTENT = 0, 1, 2, 3
COMMANDS = ("info", "betti", "hochster", "tightness", "double", "duality")
METHODS = ("all", "direct", "lemma", "theorem-a")
SAMPLED_SQUARES = 512


@dataclass
class RunConfig:
    p: int = 2
    threads: int = 0
    m_cap: int = DEFAULT_M_CAP
    output: str = "table"
    seed: int = 0

    def __post_init__(self):
        self.p = check_prime(self.p)
        if self.threads <= 0:
            self.threads = os.cpu_count() or 1
        if self.output not in ("table", "json"):
            raise ValueError(f"unknown output format {self.output!r}")


def parse_facets_text(text):
    m = None
    facets = []
    seen_facet = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "m":
            if seen_facet or m is not None or len(tokens) != 2:
                raise ParseError(lineno, "header 'm <integer>' must come first, once")
            try:
                m = int(tokens[1])
            except ValueError:
                raise ParseError(lineno, f"bad vertex count {tokens[1]!r}") from None
            if m <= 0:
                raise ParseError(lineno, "vertex count must be positive")
            continue
        try:
            facet = [int(t) for t in tokens]
        except ValueError:
            raise ParseError(lineno, f"non-integer vertex in {line!r}") from None
        if any(v < 1 for v in facet):
            raise ParseError(lineno, "vertex labels are 1-based")
        facets.append(facet)
        seen_facet = True
    if not facets:
        raise ParseError(0, "no facets")
    if m is None:
        m = max(max(f) for f in facets)
    return from_facets(facets, m)


def parse_facets(path):
    return parse_facets_text(Path(path).read_text())


def load_complex(source):
    """A facet file path, or the name of a bundled fixture."""
    path = Path(source)
    if path.exists():
        return parse_facets(path)
    try:
        return parse_facets_text(fixtures.text(path.name))
    except KeyError:
        raise FileNotFoundError(source) from None


def _gates(K, p):
    manifold = is_closed_homology_manifold(K, p)
    orientable = K.is_pure() and bool(K.facets) and is_F_orientable(K, p)
    return {"homology_manifold": manifold, "orientable": orientable}


def _table_dict(table):
    return [{"k": k, "l": l, "bidegree": [-k, 2 * l], "dim": v} for (k, l), v in table.entries.items()]


def cmd_info(K, cfg, args):
    primes = sorted({2, 3, 5, cfg.p})
    return {
        "euler_characteristic": K.euler_characteristic(),
        "facets": K.facet_lists(),
        "gates_by_prime": {str(q): _gates(K, q) for q in primes},
        "backend": _backend(),
    }


def _backend():
    from . import _kernels

    return _kernels.backend_name()


def cmd_betti(K, cfg, args):
    J = K.vertices
    if args.subcomplex:
        J = vertex_set(int(t) for t in args.subcomplex.replace(",", " ").split())
        if J & ~K.vertices:
            raise VertexOutOfRange("subcomplex uses vertices outside 1..m")
    b = betti_numbers(K, cfg.p, J=J)
    rb = betti_numbers(K, cfg.p, reduced=True, J=J)
    return {
        "subcomplex": members(J),
        "betti": {str(q): v for q, v in sorted(b.as_dict().items())},
        "reduced_betti": {str(q): v for q, v in sorted(rb.as_dict().items())},
        "total": b.total,
    }


def cmd_hochster(K, cfg, args):
    cache = all_subcomplex_betti(K, cfg.p, m_cap=cfg.m_cap, threads=cfg.threads)
    table = hochster_table(cache)
    total = beta_zk_total(cache)
    beta_K = betti_numbers(K, cfg.p).total
    return {
        "table": _table_dict(table),
        "betti_zk": {str(n): v for n, v in table.single_graded().items()},
        "beta_zk": total,
        "sum_beta_full_subcomplexes": int(cache.unreduced_totals().sum()),
        "theorem_a": {"lhs": total, "rhs": theorem_a_bound(K.m, beta_K), "beta_K": beta_K,
                      "equal": total == theorem_a_bound(K.m, beta_K)},
    }


def cmd_tightness(K, cfg, args):
    from . import tightness as t

    cache = all_subcomplex_betti(K, cfg.p, m_cap=cfg.m_cap, threads=cfg.threads)
    fn = {"all": t.check_all, "direct": t.direct_check,
          "lemma": t.lemma_identity_check, "theorem-a": t.theorem_a_check}[args.method]
    return fn(K, cfg.p, cache).to_dict()


def cmd_double(K, cfg, args):
    from .poset_cohomology import double_homology, homology_functor_tables

    if K.m > cfg.m_cap:
        raise BudgetExceeded(K.m, cfg.m_cap)
    engine = SubcomplexHomology(K, cfg.p)
    dh = double_homology(K, cfg.p, engine=engine)
    tables = homology_functor_tables(K, cfg.p, engine=engine, sample=SAMPLED_SQUARES,
                                     rng=np.random.default_rng(cfg.seed))
    return {
        "double_homology": _table_dict(dh),
        "total": dh.total,
        "functor_cohomology": {str(q): v for q, v in tables.items()},
    }


def cmd_duality(K, cfg, args):
    from .duality import theorem_b_report

    if K.m > cfg.m_cap:
        raise BudgetExceeded(K.m, cfg.m_cap)
    return theorem_b_report(K, cfg.p).to_dict()


HANDLERS = {
    "info": cmd_info, "betti": cmd_betti, "hochster": cmd_hochster,
    "tightness": cmd_tightness, "double": cmd_double, "duality": cmd_duality,
}


def build_report(command, K, cfg, args):
    return {
        "command": command,
        "complex": {"m": K.m, "dim": K.dim, "f_vector": K.f_vector()},
        "field": {"p": cfg.p},
        "gates": _gates(K, cfg.p),
        "result": HANDLERS[command](K, cfg, args),
    }


def format_table(report):
    lines = []
    c, res = report["complex"], report["result"]
    lines.append(f"complex: m={c['m']} dim={c['dim']} f-vector={tuple(c['f_vector'])}")
    g = report["gates"]
    lines.append(f"field: GF({report['field']['p']})")
    lines.append(f"homology-manifold over GF({report['field']['p']}): {'yes' if g['homology_manifold'] else 'no'}")
    lines.append(f"orientable: {'yes' if g['orientable'] else 'no'}")
    cmd = report["command"]
    if cmd == "info":
        lines.append(f"euler characteristic: {res['euler_characteristic']}")
        for q, gate in res["gates_by_prime"].items():
            lines.append(f"  GF({q}): homology-manifold={'yes' if gate['homology_manifold'] else 'no'} "
                         f"orientable={'yes' if gate['orientable'] else 'no'}")
        lines.append(f"backend: {res['backend']}")
    elif cmd == "betti":
        lines.append(f"subcomplex: {res['subcomplex']}")
        lines.append("betti: " + ", ".join(f"b{q}={v}" for q, v in res["betti"].items()) + f"  (total {res['total']})")
        lines.append("reduced: " + ", ".join(f"b{q}={v}" for q, v in res["reduced_betti"].items()))
    elif cmd in ("hochster", "double"):
        key = "table" if cmd == "hochster" else "double_homology"
        lines.append("   k   l  bidegree    dim")
        for e in res[key]:
            lines.append(f"{e['k']:4d}{e['l']:4d}  ({e['bidegree'][0]:3d},{e['bidegree'][1]:3d}) {e['dim']:6d}")
        if cmd == "hochster":
            lines.append("betti(Z_K): " + ", ".join(f"b{n}={v}" for n, v in res["betti_zk"].items()))
            ta = res["theorem_a"]
            rel = "=" if ta["equal"] else ">" if ta["lhs"] > ta["rhs"] else "<"
            lines.append(f"beta(Z_K) = {res['beta_zk']}; bound {ta['lhs']} {rel} {ta['rhs']}")
        else:
            lines.append(f"total: {res['total']}")
            for q, dims in res["functor_cohomology"].items():
                lines.append(f"H^l(H_{q}): " + " ".join(str(v) for v in dims))
    elif cmd == "tightness":
        lines.append(f"verdict: {res['verdict']} (method {res['method']})")
        for name, v in res["methods"].items():
            lines.append(f"  {name}: {v}")
        b = res["bound"]
        rel = "=" if b["lhs"] == b["rhs"] else ">" if b["lhs"] > b["rhs"] else "<"
        lines.append(f"bound: {b['lhs']} {rel} {b['rhs']}")
        for w in res["witnesses"]:
            cyc = " + ".join(f"{e['coeff']}*{e['face']}" for e in w["kernel_cycle"])
            lines.append(f"  witness J={w['J']} q={w['q']} nullity={w['nullity']}: {cyc}")
    elif cmd == "duality":
        lines.append(f"verdict: {res['verdict']} (tight: {'yes' if res['tight'] else 'no'})")
        lines.append("   q   l    lhs    rhs  equal")
        for e in res["entries"]:
            lines.append(f"{e['q']:4d}{e['l']:4d}{e['lhs']:7d}{e['rhs']:7d}  {'yes' if e['equal'] else 'no'}")
    return "\n".join(lines) + "\n"


class _ArgError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgError(message)


def make_parser():
    parser = _Parser(prog="momentangle", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("complex", help="facet file, or a bundled fixture name")
    parser.add_argument("-p", type=int, default=2, help="prime field (default 2)")
    parser.add_argument("--threads", type=int, default=0, help="worker count (default: all cores)")
    parser.add_argument("--m-cap", type=int, default=DEFAULT_M_CAP)
    parser.add_argument("--output", choices=("table", "json"), default="table")
    parser.add_argument("--subcomplex", help="comma separated vertex list J for 'betti'")
    parser.add_argument("--method", choices=METHODS, default="all")
    parser.add_argument("--seed", type=int, default=0)
    return parser


def run(argv, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        cfg = RunConfig(p=args.p, threads=args.threads, m_cap=args.m_cap, output=args.output, seed=args.seed)
        K = load_complex(args.complex)
    except (_ArgError, ParseError, GhostVertex, VertexOutOfRange, NotPrime, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_CONFIG
    try:
        report = build_report(args.command, K, cfg, args)
    except GateFailure as exc:
        print(f"gate failure: {exc}", file=stderr)
        return EXIT_GATE
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=stderr)
        return EXIT_INCONSISTENT
    except (BudgetExceeded, VertexOutOfRange, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_CONFIG
    except MomentAngleError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_CONFIG
    if cfg.output == "json":
        stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        stdout.write(format_table(report))
    return EXIT_OK


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
