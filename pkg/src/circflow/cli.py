"""Command line interface: construction, solving, verification, demo pipelines.

Exit codes: 0 verified, 1 refuted, 2 inconclusive or budget exhausted,
3 usage error.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import blanusa, colorings, families, flower_coloring, flows, mp_coloring, valuations
from .certificates import Certificate, certificate_from_json, graph_hash, rat, reverify, unrat
from .multigraph import Multigraph, deserialize, edge_cut, perfect_matchings, serialize

EXIT_VERIFIED = 0
EXIT_REFUTED = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3

VALUATION_HEADER = "circflow-valuation v1"


class UsageError(ValueError):
    pass


def _read_graph(path: str) -> Multigraph:
    return deserialize(Path(path).read_text())


def _read_ids(path: str) -> list[str]:
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def write_valuation(omega: valuations.BalancedValuation) -> str:
    lines = [VALUATION_HEADER, f"r {rat(omega.r)}"]
    unit = omega.unit
    for v, k in sorted(omega.k.items()):
        lines.append(f"{v} {rat(k * unit)}")
    return "\n".join(lines) + "\n"


def read_valuation(text: str) -> valuations.BalancedValuation:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != VALUATION_HEADER:
        raise UsageError(f"expected header {VALUATION_HEADER!r}")
    r: Fraction | None = None
    k: dict[str, int] = {}
    for ln in lines[1:]:
        name, value = ln.split()
        if name == "r":
            r = unrat(value)
            continue
        if r is None:
            raise UsageError("valuation file must state r before vertex weights")
        weight = unrat(value)
        ratio = weight / (r / (r - 2))
        if ratio.denominator != 1:
            raise UsageError(f"weight of {name!r} is not an integer multiple of r/(r-2)")
        k[name] = int(ratio)
    if r is None:
        raise UsageError("valuation file missing its r header")
    return valuations.BalancedValuation(r, k)


# -- subcommands ------------------------------------------------------------------


def _cmd_construct(args) -> int:
    fam = args.family
    if fam == "petersen":
        g = families.petersen()
    elif fam == "complete":
        g = families.complete_graph(args.m)
    elif fam == "flower":
        g = families.flower_snark(args.n).graph
    elif fam == "blanusa-chain":
        g = families.blanusa_chain(args.n).graph
    elif fam == "mp":
        g = families.mp_graph(args.p, args.stage).graph
    else:
        raise UsageError(f"unknown family {fam!r}")
    text = serialize(g)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_VERIFIED


def _cmd_flow_number(args) -> int:
    g = _read_graph(args.graph)
    t0 = time.monotonic()
    try:
        result = flows.circular_flow_number(g, cap=args.cap)
    except flows.BridgedGraphError as exc:
        print(f"refuted: {exc}")
        return EXIT_REFUTED
    except flows.SizeCapExceeded as exc:
        print(f"inconclusive: {exc}")
        return EXIT_INCONCLUSIVE
    cert = flows.phi_c_certificate(g, result, time.monotonic() - t0)
    print(f"phi_c = {rat(result.value)}")
    if args.out:
        Path(args.out).write_text(cert.to_json())
    return EXIT_VERIFIED


def _cmd_verify_flow(args) -> int:
    g = _read_graph(args.graph)
    flow = flows.read_flow(Path(args.flow).read_text())
    cert = flows.verify_flow(g, flow)
    print(f"{cert.verdict}: r = {rat(flow.r)}")
    if args.out:
        Path(args.out).write_text(cert.to_json())
    return EXIT_VERIFIED if cert.verdict == "verified" else EXIT_REFUTED


def _cmd_build_flow(args) -> int:
    if args.family == "flower":
        data = flows.build_flower_flow(args.n)
        graph, flow = data.graph, data.flow
    elif args.family == "blanusa-chain":
        data = flows.build_blanusa_chain_flow(args.n)
        graph, flow = data.chain.graph, data.flow
    elif args.family == "bipartite":
        graph = _read_graph(args.graph)
        flow = flows.bipartite_regular_flow(graph, args.t)
    else:
        raise UsageError(f"unknown flow family {args.family!r}")
    cert = flows.verify_flow(graph, flow)
    print(f"{cert.verdict}: r = {rat(flow.r)}")
    if args.out:
        Path(args.out).write_text(flows.write_flow(flow))
    if args.out_graph:
        Path(args.out_graph).write_text(serialize(graph))
    return EXIT_VERIFIED if cert.verdict == "verified" else EXIT_REFUTED


def _cmd_chromatic_index(args) -> int:
    g = _read_graph(args.graph)
    t0 = time.monotonic()
    result = colorings.chromatic_index(g, budget_s=args.budget)
    cert = colorings.chromatic_index_certificate(g, result, time.monotonic() - t0)
    if args.out:
        Path(args.out).write_text(cert.to_json())
    if result.is_exact:
        print(f"chromatic index = {result.exact} ({result.method})")
        return EXIT_VERIFIED
    print(f"inconclusive: bounds [{result.lower}, {result.upper}]")
    return EXIT_INCONCLUSIVE


def _cmd_color(args) -> int:
    if args.construction == "mp-prime":
        data = mp_coloring.mp_prime_coloring(args.t)
        graph, coloring = data.family.graph, data.coloring
    elif args.construction == "mp-tilde":
        graph, coloring = mp_coloring.mp_tilde_coloring(args.t)
    elif args.construction == "flower-plus-m":
        matching = _read_ids(args.matching)
        graph, coloring = flower_coloring.flower_plus_m_coloring(args.n, matching)
    else:
        raise UsageError(f"unknown construction {args.construction!r}")
    print(f"palette {coloring.palette}, mode {coloring.mode}")
    if args.out:
        Path(args.out).write_text(colorings.write_coloring(coloring))
    if args.out_graph:
        Path(args.out_graph).write_text(serialize(graph))
    return EXIT_VERIFIED


def _cmd_class_property(args) -> int:
    g = _read_graph(args.graph)
    matching = _read_ids(args.matching)
    t_range = [int(x) for x in args.t_range.split(",")]
    cert = colorings.class_property(g, matching, args.which, t_range, budget_s=args.budget)
    print(f"{cert.verdict}: class-{args.which} over t in {t_range} (tested range only)")
    if args.out:
        Path(args.out).write_text(cert.to_json())
    return {"verified": EXIT_VERIFIED, "refuted": EXIT_REFUTED}.get(cert.verdict, EXIT_INCONCLUSIVE)


def _cmd_check_balanced(args) -> int:
    g = _read_graph(args.graph)
    omega = read_valuation(Path(args.valuation).read_text())
    cert = valuations.check_balanced(g, omega)
    print(cert.verdict)
    if args.out:
        Path(args.out).write_text(cert.to_json())
    return EXIT_VERIFIED if cert.verdict == "verified" else EXIT_REFUTED


def _cmd_asymptotic_bound(args) -> int:
    value = valuations.asymptotic_bound(unrat(args.r), args.t)
    print(rat(value))
    return EXIT_VERIFIED


def _cmd_reverify(args) -> int:
    g = _read_graph(args.graph)
    cert = certificate_from_json(Path(args.certificate).read_text())
    ok = reverify(cert, g)
    print("reproduced" if ok else "NOT reproduced")
    return EXIT_VERIFIED if ok else EXIT_REFUTED


# -- the paper demo ----------------------------------------------------------------


class _Report:
    def __init__(self, out_dir: Path):
        self.rows: list[tuple[str, str, float]] = []
        self.out_dir = out_dir
        out_dir.mkdir(parents=True, exist_ok=True)

    def add(self, claim: str, verdict: str, seconds: float) -> None:
        self.rows.append((claim, verdict, seconds))
        print(f"  [{verdict:>12}] {claim} ({seconds:.2f}s)")

    def run(self, claim: str, fn) -> None:
        t0 = time.monotonic()
        try:
            verdict = fn()
        except Exception as exc:  # demo keeps going; failures surface in the exit code
            self.add(f"{claim}: {exc}", "refuted", time.monotonic() - t0)
            return
        self.add(claim, verdict, time.monotonic() - t0)

    def save(self, g: Multigraph | None, name: str, text: str) -> None:
        (self.out_dir / name).write_text(text)

    def exit_code(self) -> int:
        verdicts = {v for _, v, _ in self.rows}
        if "refuted" in verdicts:
            return EXIT_REFUTED
        if "inconclusive" in verdicts:
            return EXIT_INCONCLUSIVE
        return EXIT_VERIFIED

    def write_table(self) -> None:
        width = max((len(c) for c, _, _ in self.rows), default=10)
        lines = [f"{'claim'.ljust(width)}  verdict       seconds"]
        for claim, verdict, seconds in self.rows:
            lines.append(f"{claim.ljust(width)}  {verdict:<12}  {seconds:8.2f}")
        (self.out_dir / "report.txt").write_text("\n".join(lines) + "\n")


def _demo_flows(report: _Report, budget: float | None) -> None:
    for name, g, want in (("K4", families.complete_graph(4), Fraction(4)),
                          ("K6", families.complete_graph(6), Fraction(3)),
                          ("Petersen", families.petersen(), Fraction(5))):
        def claim(g=g, want=want, name=name):
            result = flows.circular_flow_number(g)
            report.save(g, f"phi_c_{name}.cert.json",
                        flows.phi_c_certificate(g, result).to_json())
            return "verified" if result.value == want else "refuted"
        report.run(f"phi_c({name})", claim)
    for n in (1, 2, 3, 4):
        def claim(n=n):
            data = flows.build_flower_flow(n)
            cert = flows.verify_flow(data.graph, data.flow)
            report.save(data.graph, f"flower_{n}.graph", serialize(data.graph))
            report.save(data.graph, f"flower_{n}.flow", flows.write_flow(data.flow))
            report.save(data.graph, f"flower_{n}.cert.json", cert.to_json())
            return cert.verdict
        report.run(f"flower flow J{2 * n + 1} at 4+1/{n}", claim)
    for n in (1, 2, 3):
        def claim(n=n):
            data = flows.build_blanusa_chain_flow(n)
            cert = flows.verify_flow(data.chain.graph, data.flow)
            report.save(None, f"blanusa_{n}.graph", serialize(data.chain.graph))
            report.save(None, f"blanusa_{n}.flow", flows.write_flow(data.flow))
            report.save(None, f"blanusa_{n}.cert.json", cert.to_json())
            return cert.verdict
        report.run(f"Blanusa chain flow G{n} at 4+1/{n + 1}", claim)


def _demo_class2(report: _Report, budget: float | None) -> None:
    seed = blanusa.load_or_find_seed()
    dp = seed.dot_product
    g1 = blanusa._relabelled_petersen("L.")
    g2 = blanusa._relabelled_petersen("R.")
    product = families.m_dot_product(
        g1, dp["n1"], g2, dp["n2"], dp["e1"], dp["e2"], dp["xy"],
        e1_order=tuple(dp["e1_order"]), e2_order=tuple(dp["e2_order"]),
        u_neighbors=tuple(dp["u_neighbors"]), w_neighbors=tuple(dp["w_neighbors"]))

    certs = []
    for tag, g, m in (("left", g1, dp["n1"]), ("right", g2, dp["n2"])):
        def claim(tag=tag, g=g, m=m):
            cert = colorings.class_property(g, m, 2, [2], budget_s=budget)
            certs.append(cert)
            report.save(g, f"petersen_{tag}_class2.cert.json", cert.to_json())
            return cert.verdict
        report.run(f"Petersen ({tag} factor) + 2M is class 2", claim)

    def prover_claim():
        cert = colorings.dot_product_class2_prover(product, certs[0], certs[1], 2)
        report.save(product.graph, "dot_product_class2.cert.json", cert.to_json())
        return cert.verdict
    report.run("dot product + 2M class 2 (parity prover)", prover_claim)

    def direct_claim():
        cert = colorings.class_property(product.graph, sorted(product.matching), 2, [2],
                                        budget_s=budget)
        report.save(product.graph, "dot_product_class2_direct.cert.json", cert.to_json())
        return cert.verdict
    report.run("dot product + 2M class 2 (direct refutation)", direct_claim)


def _demo_section3(report: _Report, budget: float | None) -> None:
    def degrees_claim():
        fam = families.mp_graph(3, families.MP_BASE)
        g = fam.graph
        ok = all(g.degree(c) == 15 for c in fam.junctions) and g.degree("w") == 13
        ok = ok and all(g.degree(v) in (13, 15) for v in g.vertices)
        report.save(g, "m3.graph", serialize(g))
        return "verified" if ok else "refuted"
    report.run("M_3 degrees match the construction", degrees_claim)

    def prime_claim():
        data = mp_coloring.mp_prime_coloring(1)
        report.save(None, "m3_prime.coloring", colorings.write_coloring(data.coloring))
        return "verified"
    report.run("M_3' sees-odd 13-coloring", prime_claim)

    def tilde_claim():
        g, col = mp_coloring.mp_tilde_coloring(1)
        report.save(g, "m3_tilde.graph", serialize(g))
        report.save(g, "m3_tilde.coloring", colorings.write_coloring(col))
        ok, _ = colorings.is_proper(g, col)
        return "verified" if ok and g.is_regular(13) else "refuted"
    report.run("M~_3 is 13-regular and properly 13-colored", tilde_claim)


def _demo_appendix(report: _Report, budget: float | None) -> None:
    for n in (1, 2):
        def claim(n=n):
            g = families.flower_snark(n).graph
            pms = perfect_matchings(g)
            bad = 0
            for pm in pms:
                try:
                    h, col = flower_coloring.flower_plus_m_coloring(n, sorted(pm))
                except flower_coloring.FlowerColoringCounterexample:
                    bad += 1
            if bad:
                return "refuted"  # the J3 triangle matchings: see the report
            return "verified"
        report.run(f"4-coloring of J{2 * n + 1}+M for all {2 ** (2 * n + 1)} matchings", claim)

    def j7_claim():
        g = families.flower_snark(3).graph
        pms = sorted(perfect_matchings(g), key=sorted)
        rng = random.Random(7)
        for pm in rng.sample(pms, 20):
            flower_coloring.flower_plus_m_coloring(3, sorted(pm))
        return "verified"
    report.run("4-coloring of J7+M for 20 random matchings", j7_claim)

    def claim_scan():
        count = 0
        for k in (3, 5, 7, 9, 11):
            for types in _admissible_sequences(k):
                if colorings.transition_claim_check(types) is None:
                    return "refuted"
                count += 1
        return "verified"
    report.run("transition claim on all admissible sequences up to length 11", claim_scan)


def _admissible_sequences(k: int):
    from .colorings import _ALLOWED_NEXT, X1, X2, X3

    seq: list[str] = []

    def rec():
        if len(seq) == k:
            if seq[0] in _ALLOWED_NEXT[seq[-1]]:
                yield tuple(seq)
            return
        for t in (X1, X2, X3):
            if not seq or t in _ALLOWED_NEXT[seq[-1]]:
                seq.append(t)
                yield from rec()
                seq.pop()

    yield from rec()


def _cmd_paper_demo(args) -> int:
    report = _Report(Path(args.out))
    scopes = {
        "section-2": [_demo_class2],
        "section-2.1": [_demo_flows],
        "section-3": [_demo_section3],
        "appendix": [_demo_appendix],
    }
    if args.scope == "all":
        runs = [fn for fns in scopes.values() for fn in fns]
    elif args.scope in scopes:
        runs = scopes[args.scope]
    else:
        raise UsageError(f"unknown scope {args.scope!r}")
    for fn in runs:
        fn(report, args.budget)
    report.write_table()
    return report.exit_code()


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="circflow",
                                description="exact flow/coloring certificates for snark families")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="emit a graph of one of the families")
    c.add_argument("--family", required=True,
                   choices=["petersen", "complete", "flower", "blanusa-chain", "mp"])
    c.add_argument("--n", type=int, default=1)
    c.add_argument("--m", type=int, default=4)
    c.add_argument("--p", type=int, default=3)
    c.add_argument("--stage", choices=["base", "prime", "tilde"], default="base")
    c.add_argument("--out")
    c.set_defaults(fn=_cmd_construct)

    c = sub.add_parser("flow-number", help="exact circular flow number")
    c.add_argument("graph")
    c.add_argument("--cap", type=int, default=flows.PHI_C_EDGE_CAP)
    c.add_argument("--out")
    c.set_defaults(fn=_cmd_flow_number)

    c = sub.add_parser("verify-flow", help="check a flow file against a graph")
    c.add_argument("graph")
    c.add_argument("flow")
    c.add_argument("--out")
    c.set_defaults(fn=_cmd_verify_flow)

    c = sub.add_parser("build-flow", help="construct one of the paper flows")
    c.add_argument("--family", required=True, choices=["flower", "blanusa-chain", "bipartite"])
    c.add_argument("--n", type=int, default=1)
    c.add_argument("--t", type=int, default=1)
    c.add_argument("--graph", help="input graph (bipartite family)")
    c.add_argument("--out")
    c.add_argument("--out-graph")
    c.set_defaults(fn=_cmd_build_flow)

    c = sub.add_parser("chromatic-index", help="exact chromatic index")
    c.add_argument("graph")
    c.add_argument("--budget", type=float)
    c.add_argument("--out")
    c.set_defaults(fn=_cmd_chromatic_index)

    c = sub.add_parser("color", help="build one of the paper colorings")
    c.add_argument("--construction", required=True,
                   choices=["mp-prime", "mp-tilde", "flower-plus-m"])
    c.add_argument("--t", type=int, default=1)
    c.add_argument("--n", type=int, default=1)
    c.add_argument("--matching", help="file with one matching edge id per line")
    c.add_argument("--out")
    c.add_argument("--out-graph")
    c.set_defaults(fn=_cmd_color)

    c = sub.add_parser("class-property", help="class-1/2 of g+(2t-2)M over tested t")
    c.add_argument("graph")
    c.add_argument("--matching", required=True)
    c.add_argument("--which", type=int, required=True, choices=[1, 2])
    c.add_argument("--t-range", default="1,2")
    c.add_argument("--budget", type=float)
    c.add_argument("--out")
    c.set_defaults(fn=_cmd_class_property)

    c = sub.add_parser("check-balanced", help="balanced-valuation inequality over all subsets")
    c.add_argument("graph")
    c.add_argument("valuation")
    c.add_argument("--out")
    c.set_defaults(fn=_cmd_check_balanced)

    c = sub.add_parser("asymptotic-bound", help="the flow bound 2 + 2(r-2)/(r+(2t-3)(r-2))")
    c.add_argument("--t", type=int, required=True)
    c.add_argument("--r", required=True, help="rational p/q in (4,5)")
    c.set_defaults(fn=_cmd_asymptotic_bound)

    c = sub.add_parser("paper-demo", help="regenerate and verify the headline artifacts")
    c.add_argument("--scope", default="all",
                   choices=["all", "section-2", "section-2.1", "section-3", "appendix"])
    c.add_argument("--out", required=True)
    c.add_argument("--budget", type=float, default=1800.0)
    c.set_defaults(fn=_cmd_paper_demo)

    c = sub.add_parser("reverify", help="re-check a certificate against its graph")
    c.add_argument("graph")
    c.add_argument("certificate")
    c.set_defaults(fn=_cmd_reverify)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
