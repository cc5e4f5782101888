"""
Command-line front end for the biliaison toolkit

    python cli.py gb "ideal { x*y; x*z; y*z }" --ring x,y,z,w
    python cli.py gaeta run fixtures/twisted_cubic.mat --seed 7
    python cli.py verify-link --certificate link.json
    python cli.py example 3.9
    python cli.py fixtures --check --jobs 4

Reports go to stdout (JSON or text); logs go to stderr. The exit status is
0 for verified or plain results, 1 for refuted, 2 for inconclusive or error.
"""
import os
import sys
import argparse
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional

# Add the current directory to Python path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from config import Config
from biliaison.catalog import EXAMPLES, run_example
from biliaison.determinantal import (
    determinantal_ideal,
    determinantal_summary,
    gaeta_chain,
    gaeta_step,
    lemma42_check,
    lemma42_sweep,
    maximal_minors,
)
from biliaison.divisor import (
    anticanonical_divisor,
    divisor_negate,
    divisor_sub,
    divisor_sum,
    linear_system_dimension,
    linearly_equivalent,
    sections_of_M,
    twist_by_H,
)
from biliaison.errors import BiliaisonError, GaetaChainError
from biliaison.groebner import (
    Ideal,
    codimension,
    ideal_quotient,
    ideal_quotient_by_syzygies,
    intersect,
    krull_dimension,
    saturation,
)
from biliaison.liaison import (
    INCONCLUSIVE,
    REFUTED,
    VERIFIED,
    LinkCertificate,
    biliaison_to_strict_links,
    intersection_divisor_check,
    link,
    replay,
    verify_elementary_biliaison,
    verify_strict_AG,
)
from biliaison.modules import quotient_ring
from biliaison.resolve import (
    betti_table,
    canonical_module,
    equidimensional_hull,
    free_resolution,
    hilbert_data,
    is_omega_reflexive,
    rao_dimensions,
    satisfies_S2,
)
from biliaison.session import BiliaisonSession, Outcome
from utils.fixture_store import FixtureStoreManager

logger = logging.getLogger(__name__)


def _gens(I: Ideal) -> List[str]:
    return [str(g) for g in I.minimal_generators()]


def _window(text: str):
    try:
        lo, hi = (int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"Window must be 'lo,hi', got {text!r}")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"Empty degree window [{lo}, {hi}]")
    return lo, hi


# -- groebner and resolve

def cmd_gb(session: BiliaisonSession, args) -> Outcome:
    I = session.ideal(args.ideal)
    return {"basis": [str(g) for g in I.gb], "size": len(I.gb), "minimal_generators": _gens(I)}, "ok", []


def cmd_nf(session: BiliaisonSession, args) -> Outcome:
    I = session.ideal(args.ideal)
    f = session.polynomial(args.poly)
    r = I.normal_form(f)
    return {"normal_form": str(r), "member": r.is_zero()}, "ok", []


def cmd_quotient(session: BiliaisonSession, args) -> Outcome:
    I = session.ideal(args.ideal, "I")
    J = session.ideal(args.by, "J")
    if args.syzygies and len(J.generators) == 1:
        Q = ideal_quotient_by_syzygies(I, J.generators[0])
    else:
        Q = ideal_quotient(I, J)
    return {"quotient": _gens(Q)}, "ok", []


def cmd_saturate(session: BiliaisonSession, args) -> Outcome:
    I = session.ideal(args.ideal, "I")
    J = session.ideal(args.by, "J") if args.by else None
    return {"saturation": _gens(saturation(I, J))}, "ok", []


def cmd_intersect(session: BiliaisonSession, args) -> Outcome:
    I = session.ideal(args.ideal, "I")
    J = session.ideal(args.other, "J")
    return {"intersection": _gens(intersect(I, J))}, "ok", []


def cmd_codim(session: BiliaisonSession, args) -> Outcome:
    I = session.ideal(args.ideal)
    return {"codimension": codimension(I), "krull_dimension": krull_dimension(I)}, "ok", []


def cmd_resolve(session: BiliaisonSession, args) -> Outcome:
    I = session.ideal(args.ideal)
    res = free_resolution(quotient_ring(I), minimal=not args.nonminimal)
    return {**res.to_dict(), "table": res.betti().to_text(), "is_complex": res.is_complex()}, "ok", []


def cmd_betti(session: BiliaisonSession, args) -> Outcome:
    table = betti_table(session.ideal(args.ideal))
    return {**table.to_dict(), "table": table.to_text()}, "ok", []


def cmd_hilbert(session: BiliaisonSession, args) -> Outcome:
    return hilbert_data(session.ideal(args.ideal)).to_dict(), "ok", []


def cmd_canonical(session: BiliaisonSession, args) -> Outcome:
    omega = canonical_module(session.ideal(args.ideal)).prune()
    return omega.to_dict(), "ok", []


def cmd_rao(session: BiliaisonSession, args) -> Outcome:
    I = session.ideal(args.ideal)
    dim_v = I.ring.nvars - codimension(I) - 1
    window = args.window or session.window
    modules = {str(i): rao_dimensions(I, i, window) for i in range(1, dim_v + 1)}
    return {"degrees": list(range(window[0], window[1] + 1)), "rao": modules}, "ok", []


def cmd_s2(session: BiliaisonSession, args) -> Outcome:
    I = session.ideal(args.ideal)
    M = quotient_ring(I)
    s2 = satisfies_S2(M)
    outputs: Dict[str, Any] = {"S2": s2}
    status = "ok"
    if args.omega:
        reflexive = is_omega_reflexive(M, canonical_module(I).prune())
        outputs["omega_reflexive"] = reflexive
        status = VERIFIED if reflexive == s2 else REFUTED
    return outputs, status, []


def cmd_hull(session: BiliaisonSession, args) -> Outcome:
    I = session.ideal(args.ideal)
    H = equidimensional_hull(I)
    return {"hull": _gens(H), "unmixed": H == I}, "ok", []


# -- divisors

def cmd_divisor(session: BiliaisonSession, args) -> Outcome:
    if args.action in ("sum", "sub", "equiv") and not args.other:
        raise BiliaisonError(f"divisor {args.action} needs a second divisor")
    if args.action == "anticanonical":
        X = session.ambient(args.divisor)
        E, d = anticanonical_divisor(X, session.seed, session.bound, session.retries)
        return {"divisor": E.to_dict(), "twist": d, "text": E.to_text()}, "ok", []
    D = session.divisor(args.divisor, "D")
    X = D.ambient
    if args.action == "sum":
        result = divisor_sum(D, session.divisor(args.other, "E", X))
    elif args.action == "neg":
        result = divisor_negate(D, session.seed)
    elif args.action == "sub":
        result = divisor_sub(D, session.divisor(args.other, "E", X), session.seed)
    elif args.action == "twist":
        result = twist_by_H(D, args.m)
    elif args.action == "equiv":
        E = session.divisor(args.other, "E", X)
        f = linearly_equivalent(D, E, args.h, session.seed, session.retries)
        if f is None:
            return {"equivalent": False, "h": args.h}, REFUTED, []
        return {"equivalent": True, "h": args.h, "multiplier": f.to_dict()}, VERIFIED, []
    elif args.action == "sections":
        window = args.window or session.window
        outputs = sections_of_M(D, X, window)
        outputs["linear_system_dimension"] = linear_system_dimension(D)
        return outputs, VERIFIED if outputs["exact"] else REFUTED, []
    else:
        raise BiliaisonError(f"Unknown divisor action {args.action!r}")
    return {"divisor": result.to_dict(), "text": result.to_text()}, "ok", []


# -- liaison

def cmd_link(session: BiliaisonSession, args) -> Outcome:
    I_Y = session.ideal(args.Y, "Y")
    I_V1 = session.ideal(args.V1, "V1")
    I_V2, cert = link(I_Y, I_V1)
    return {"V2": _gens(I_V2), "kind": cert.kind}, VERIFIED, [cert.to_dict()]


def cmd_verify_link(session: BiliaisonSession, args) -> Outcome:
    if args.certificate:
        loaded = session.load(args.certificate, kind="certificate")
        result = replay(loaded.data)
        return result, result["verdict"], []
    if not (args.Y and args.V1):
        raise BiliaisonError("verify-link needs --certificate or --Y and --V1")
    I_Y = session.ideal(args.Y, "Y")
    I_V1 = session.ideal(args.V1, "V1")
    if args.V2:
        cert = LinkCertificate(I_Y, I_V1, session.ideal(args.V2, "V2"), "unmixed")
        ok = cert.verify()
        return {"checks": cert.checks}, VERIFIED if ok else REFUTED, [cert.to_dict()]
    try:
        I_V2, cert = link(I_Y, I_V1)
    except BiliaisonError as e:
        return {"refutation": str(e)}, REFUTED, []
    return {"V2": _gens(I_V2), "kind": cert.kind}, VERIFIED, [cert.to_dict()]


def cmd_strict_ag(session: BiliaisonSession, args) -> Outcome:
    X = session.ambient(args.ambient)
    I_Y = session.ideal(args.Y, "Y")
    report = verify_strict_AG(I_Y, X, args.m, args.window or session.window, session.seed, session.retries)
    return report, report["verdict"], []


def cmd_biliaison(session: BiliaisonSession, args) -> Outcome:
    V1 = session.divisor(args.V1, "V1")
    X = V1.ambient
    V2 = session.divisor(args.V2, "V2", X)
    rao_window = (args.window or session.window) if args.rao else None
    cert = verify_elementary_biliaison(V1, V2, X, args.h, seed=session.seed, rao_window=rao_window)
    return {"checks": cert.checks}, VERIFIED if cert.verified else REFUTED, [cert.to_dict()]


def cmd_strict_links(session: BiliaisonSession, args) -> Outcome:
    V1 = session.divisor(args.V1, "V1")
    X = V1.ambient
    V2 = session.divisor(args.V2, "V2", X)
    links = biliaison_to_strict_links(V1, V2, X, args.h, session.seed, session.bound)
    certs = [links.first.to_dict(), links.second.to_dict()]
    ok = all(replay(c)["verdict"] == VERIFIED for c in certs)
    return links.to_dict(), VERIFIED if ok else REFUTED, certs


def cmd_lemma53(session: BiliaisonSession, args) -> Outcome:
    I_X1 = session.ideal(args.X1, "X1")
    I_X2 = session.ideal(args.X2, "X2")
    I_S = session.ideal(args.S, "S")
    report = intersection_divisor_check(I_X1, I_X2, I_S, args.window or session.window, session.seed)
    return report, report["verdict"], [report["link"]]


# -- determinantal

def cmd_minors(session: BiliaisonSession, args) -> Outcome:
    A = session.matrix(args.matrix)
    t = args.t if args.t is not None else min(A.shape)
    outputs = determinantal_summary(A, t)
    outputs["minors"] = [str(p) for p in maximal_minors(A, t)]
    outputs["row_degrees"] = A.row_degrees
    outputs["col_degrees"] = A.col_degrees
    if args.hilbert:
        outputs["hilbert"] = hilbert_data(determinantal_ideal(A, t)).to_dict()
    return outputs, "ok", []


def cmd_lemma42(session: BiliaisonSession, args) -> Outcome:
    A = session.matrix(args.matrix)
    if args.indices:
        results = [lemma42_check(A, *(i - 1 for i in args.indices))]
    else:
        results = lemma42_sweep(A)
    ok = all(r["holds"] and r["sign"] == r["predicted_sign"] for r in results)
    for r in results:
        r["indices"] = [i + 1 for i in r["indices"]]
    return {"checked": len(results), "results": results}, VERIFIED if ok else REFUTED, []


def cmd_gaeta(session: BiliaisonSession, args) -> Outcome:
    A = session.matrix(args.matrix)
    if args.action == "step":
        step = gaeta_step(A, session.seed, session.retries)
        ok = step.certificate.verified and step.membership
        return step.to_dict(), VERIFIED if ok else REFUTED, [step.certificate.to_dict()]
    try:
        chain = gaeta_chain(A, session.seed, session.retries)
    except GaetaChainError as e:
        partial = e.partial.to_dict() if e.partial is not None else None
        return {"error": str(e), "partial": partial}, INCONCLUSIVE, []
    outputs = chain.to_dict()
    if args.invariants:
        outputs["invariants"] = chain.invariants()
    certs = [s.certificate.to_dict() for s in chain.steps]
    return outputs, VERIFIED if chain.verified else REFUTED, certs


def cmd_example(session: BiliaisonSession, args) -> Outcome:
    outputs, status = run_example(args.name, session.seed)
    return outputs, status, []


def _check_fixture(item):
    """Run one fixture in a fresh session; returns (name, diffs, status)"""
    fixture, argv, expect = item
    report = run(argv)
    actual = report.to_dict()
    return fixture["name"], FixtureStoreManager.compare(actual, expect), actual["status"]


def cmd_fixtures(session: BiliaisonSession, args) -> Outcome:
    store = session.fixture_store
    if args.name:
        found = store.find(args.name)
        if found is None:
            raise BiliaisonError(f"Unknown fixture {args.name!r}")
        fixtures = [found]
    else:
        fixtures = store.find_by_tag(args.tag) if args.tag else store.load_index()
    listing = [{"name": f["name"], "tags": f.get("tags", []), "argv": f.get("argv", [])} for f in fixtures]
    if args.record:
        recorded = []
        for f in fixtures:
            actual = run(store.resolve_argv(f)).to_dict()
            store.save_expected(f, {"status": actual["status"], "outputs": actual["outputs"]})
            recorded.append(f["name"])
        return {"fixtures": listing, "recorded": recorded}, "ok", []
    if not args.check:
        return {"fixtures": listing}, "ok", []
    items = [(f, store.resolve_argv(f), store.load_expected(f)) for f in fixtures]
    jobs = args.jobs or session.config.JOBS
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_check_fixture, items))
    else:
        results = [_check_fixture(item) for item in items]
    checks = {name: {"status": status, "diffs": diffs} for name, diffs, status in results}
    ok = all(not c["diffs"] for c in checks.values())
    return {"fixtures": listing, "checks": checks}, VERIFIED if ok else REFUTED, []


COMMANDS = {
    "gb": cmd_gb,
    "nf": cmd_nf,
    "quotient": cmd_quotient,
    "saturate": cmd_saturate,
    "intersect": cmd_intersect,
    "codim": cmd_codim,
    "resolve": cmd_resolve,
    "betti": cmd_betti,
    "hilbert": cmd_hilbert,
    "canonical": cmd_canonical,
    "rao": cmd_rao,
    "s2": cmd_s2,
    "hull": cmd_hull,
    "divisor": cmd_divisor,
    "link": cmd_link,
    "verify-link": cmd_verify_link,
    "strict-ag": cmd_strict_ag,
    "biliaison": cmd_biliaison,
    "strict-links": cmd_strict_links,
    "lemma53": cmd_lemma53,
    "minors": cmd_minors,
    "lemma42": cmd_lemma42,
    "gaeta": cmd_gaeta,
    "example": cmd_example,
    "fixtures": cmd_fixtures,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default=None, help="Report format")
    common.add_argument("--seed", type=int, default=None, help="Seed for every random choice")
    common.add_argument("--bound", type=int, default=None, help="Degree search bound")
    common.add_argument("--retries", type=int, default=None, help="Random retries before giving up")
    common.add_argument("--window", type=_window, default=None, help="Degree window lo,hi")
    common.add_argument("--field", choices=["prime", "rational"], default=None, help="Coefficient field")
    common.add_argument("--prime", type=int, default=None, help="Characteristic of the prime field")
    common.add_argument("--ring", default=None, help="Variables, e.g. x,y,z,w, when inputs carry no ring block")
    common.add_argument("--timing", action="store_true", help="Include wall-clock timing in the report")
    common.add_argument("--save", action="store_true", help="Save the report to the report store")

    parser = argparse.ArgumentParser(description="Generalized divisors, Gorenstein biliaison and the Gaeta chain")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("gb", "Reduced Groebner basis")
    p.add_argument("ideal")
    p = add("nf", "Normal form of a polynomial")
    p.add_argument("poly")
    p.add_argument("ideal")
    p = add("quotient", "Colon ideal (I : J)")
    p.add_argument("ideal")
    p.add_argument("by")
    p.add_argument("--syzygies", action="store_true", help="Use the syzygy algorithm for a principal J")
    p = add("saturate", "Saturation by J, default the irrelevant ideal")
    p.add_argument("ideal")
    p.add_argument("by", nargs="?")
    p = add("intersect", "Intersection of two ideals")
    p.add_argument("ideal")
    p.add_argument("other")
    p = add("codim", "Codimension and Krull dimension")
    p.add_argument("ideal")
    p = add("resolve", "Free resolution of R/I")
    p.add_argument("ideal")
    p.add_argument("--nonminimal", action="store_true")
    p = add("betti", "Graded Betti table of R/I")
    p.add_argument("ideal")
    p = add("hilbert", "Hilbert series, polynomial, degree and genus")
    p.add_argument("ideal")
    p = add("canonical", "Canonical module of R/I")
    p.add_argument("ideal")
    p = add("rao", "Rao module dimensions on the window")
    p.add_argument("ideal")
    p = add("s2", "Serre S2 for R/I")
    p.add_argument("ideal")
    p.add_argument("--omega", action="store_true", help="Compare with omega-reflexivity")
    p = add("hull", "Equidimensional hull")
    p.add_argument("ideal")

    p = add("divisor", "Generalized divisor arithmetic")
    p.add_argument("action", choices=["sum", "neg", "sub", "twist", "equiv", "sections", "anticanonical"])
    p.add_argument("divisor")
    p.add_argument("other", nargs="?")
    p.add_argument("--m", type=int, default=1, help="Twist by mH")
    p.add_argument("--h", type=int, default=0, help="Height for equiv")

    p = add("link", "Link V1 by Y")
    p.add_argument("Y")
    p.add_argument("V1")
    p = add("verify-link", "Verify a link, or replay a certificate")
    p.add_argument("--Y")
    p.add_argument("--V1")
    p.add_argument("--V2")
    p.add_argument("--certificate")
    p = add("strict-ag", "Is Y of the form M + mH on X")
    p.add_argument("Y")
    p.add_argument("--ambient", required=True)
    p.add_argument("--m", type=int, required=True)
    p = add("biliaison", "Certify V2 ~ V1 + hH")
    p.add_argument("V1")
    p.add_argument("V2")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--rao", action="store_true", help="Also compare Rao modules")
    p = add("strict-links", "Split V2 ~ V1 + hH into two strict Gorenstein links")
    p.add_argument("V1")
    p.add_argument("V2")
    p.add_argument("--h", type=int, required=True)
    p = add("lemma53", "Intersection of two linked schemes is AG of the form M + lH")
    p.add_argument("X1")
    p.add_argument("X2")
    p.add_argument("S")

    p = add("minors", "Determinantal ideal and its expected codimension")
    p.add_argument("matrix")
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--hilbert", action="store_true")
    p = add("lemma42", "Minor identity M_ij M_kl - M_il M_kj = ±M_{ij,kl} det M")
    p.add_argument("matrix")
    p.add_argument("--indices", type=int, nargs=4, metavar=("I", "J", "K", "L"), help="1-based indices")
    p = add("gaeta", "Gaeta step or full chain")
    p.add_argument("action", choices=["step", "run"])
    p.add_argument("matrix")
    p.add_argument("--invariants", action="store_true", help="Degree and genus of each step")

    p = add("example", "Run a bundled worked example")
    p.add_argument("name", choices=list(EXAMPLES))
    p = add("fixtures", "List or check the bundled fixtures")
    p.add_argument("--check", action="store_true")
    p.add_argument("--record", action="store_true", help="Overwrite expectations with the current reports")
    p.add_argument("--name", default=None)
    p.add_argument("--tag", default=None)
    p.add_argument("--jobs", type=int, default=None)
    return parser


def _inputs(args) -> Dict[str, Any]:
    skip = {"command", "format", "timing", "save", "seed", "jobs"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None and v is not False}


def run(argv: List[str], session: Optional[BiliaisonSession] = None):
    """Parse argv and run the command; returns the Report"""
    args = build_parser().parse_args(argv)
    if session is None:
        session = BiliaisonSession(
            field=args.field,
            prime=args.prime,
            seed=args.seed,
            window=args.window,
            bound=args.bound,
            retries=args.retries,
            timing=args.timing,
        )
        session.initialize()
    command = args.command
    if getattr(args, "action", None) and command in ("divisor", "gaeta"):
        command = f"{command} {args.action}"

    def action() -> Outcome:
        if args.ring:
            session.set_ring(args.ring)
        return COMMANDS[args.command](session, args)

    return session.run(command, _inputs(args), action)


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(argv)
    session = BiliaisonSession(
        field=args.field,
        prime=args.prime,
        seed=args.seed,
        window=args.window,
        bound=args.bound,
        retries=args.retries,
        timing=args.timing,
    )
    session.initialize()
    if args.save:
        session.start_new_session()
    report = run(argv, session)
    fmt = args.format or Config.FORMAT
    print(report.to_json(args.timing) if fmt == "json" else report.to_text(args.timing))
    if args.save:
        session.end_session(save_session=True)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
