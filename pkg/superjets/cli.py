"""Command line front end: ``superjets check|build|enumerate|schur|export``.

Exit status is 0 when every verdict holds, 1 when a run produced a failing
verdict and 2 for unusable input.
"""

import argparse
import json
import logging
import sys

from superjets import __version__, config
from superjets import data_manager, export_data
from superjets.constructions import (
    app1_closed_two_forms,
    cartan_violations,
    closed_forms_jet,
    cocycle_to_linfty,
    crossed_to_dgla,
    gerbe_cocycle_check,
    gerbe_two_form,
    group_cocycle_check,
    pair_maps_jet,
    vanest,
    weil,
)
from superjets.dgman import check_q, de_rham
from superjets.errors import CrossedModuleError, PreconditionError, SuperjetsError, Verdict
from superjets.linfty import ce_from_lie, jacobi_violations, q_from_brackets
from superjets.nervejet import descent_mc_bijection, nerve_one_jet
from superjets.schur import (
    EVEN,
    ODD,
    YoungDiagram,
    closed_forms_dim,
    composition_series,
    hook_content_dim,
    omega2_character_identity,
    schur_dim,
    ssyt_count,
    tensor_jet_dim,
)
from superjets.simplicial import (
    g_chain,
    hom_enumerate,
    is_kan,
    is_truncated,
    pair_nerve,
    restrict_to_chain,
)
from superjets.superalg import format_scalar

logger = logging.getLogger(__name__)

CONSTRUCTIONS = {
    "lie_algebra": ("ce", "weil"),
    "crossed_module": ("crossed_to_dgla",),
    "cocycle": ("cocycle_to_linfty",),
    "group_law": ("nerve_one_jet", "descent"),
    "gerbe_cocycle": ("gerbe_two_form",),
    "fiber": ("pair_maps_jet", "closed_forms_jet", "app1"),
}


class UsageError(SuperjetsError):
    pass


def make_report(command, kind, verdicts, objects=None, construction=None):
    """Assemble a deterministic report from named verdicts"""
    return {
        "schema_version": config.REPORT_SCHEMA_VERSION,
        "command": command,
        "kind": kind,
        "construction": construction,
        "ok": all(v.ok for _, v in verdicts),
        "verdicts": [{"name": name, **v.to_dict()} for name, v in verdicts],
        "objects": objects or {},
    }


def _field(Q):
    algebra = Q.algebra
    return {name: str(Q.value(name)) for name in algebra.names}


def _degrees(manifold):
    return {spec.name: spec.degree for spec in manifold.coordinates}


def _failures_verdict(kind, failures, passed):
    if failures:
        return Verdict.failed(kind, f"{len(failures)} failing relations", failures)
    return Verdict.passed(passed)


# -- check ------------------------------------------------------------------------


def _check_lie(lie, workers):
    violations = jacobi_violations(lie, workers)
    jacobi = Verdict.passed("Jacobi identity holds")
    if violations:
        jacobi = Verdict.failed("jacobi", f"Jacobi fails on {violations[0]['triple']}", violations[0])
    return [("jacobi", jacobi), ("q_squared", check_q(ce_from_lie(lie)))], {"lie_algebra": lie.to_dict()}


def cmd_check(doc, args):
    kind = doc.get("kind")
    try:
        obj = data_manager.parse_document(doc)
    except CrossedModuleError as e:
        return make_report("check", kind, [("crossed_module", Verdict.failed(e.identity, str(e), e.witness))])
    except PreconditionError as e:
        return make_report("check", kind, [(kind, Verdict.failed("precondition", str(e), e.witness))])
    if kind == "lie_algebra":
        verdicts, objects = _check_lie(obj, args.workers)
    elif kind == "crossed_module":
        verdicts = [("crossed_module", Verdict.passed("crossed module axioms hold"))]
        objects = {"g": obj.g.to_dict(), "h": obj.h.to_dict()}
    elif kind == "cocycle":
        verdicts = [("group_law", obj.group.check()), ("cocycle", group_cocycle_check(obj))]
        objects = {"group": obj.group.to_dict()}
    elif kind == "group_law":
        verdicts, objects = [("group_law", obj.check())], {"group": obj.to_dict()}
    elif kind == "simplicial_set":
        verdicts = [
            ("simplicial_identities", Verdict.passed("simplicial identities hold")),
            ("kan", is_kan(obj)),
            ("truncation", is_truncated(obj, obj.m)),
        ]
        objects = {"sizes": obj.sizes(), "m": obj.m}
    elif kind == "young":
        n = int(doc.get("n", 2))
        hook, count = hook_content_dim(obj, n), ssyt_count(obj, n)
        agree = Verdict.passed("hook-content and tableau counts agree")
        if hook != count:
            agree = Verdict.failed("schur_dim", "hook-content and tableau counts differ", {"hook": hook, "tableaux": count})
        verdicts, objects = [("schur_dim", agree)], {"rows": obj.to_list(), "n": n, "dim": count}
    elif kind == "gerbe_cocycle":
        fiber_dim, h = obj
        verdicts, objects = [("gerbe_cocycle", gerbe_cocycle_check(h, fiber_dim))], {"h": str(h)}
    else:
        fiber_dim, form_degree = obj
        verdicts = [("fiber", Verdict.passed("fiber document"))]
        objects = {"fiber_dim": fiber_dim, "form_degree": form_degree}
    return make_report("check", kind, verdicts, objects)


# -- build ----------------------------------------------------------------------------


def _build_linfty(L):
    Q = q_from_brackets(L)
    return [("q_squared", check_q(Q))], {"linfty": L.to_dict(), "q": _field(Q.Q)}


def cmd_build(doc, args):
    kind, construction = doc.get("kind"), args.construction
    if construction not in CONSTRUCTIONS.get(kind, ()):
        raise UsageError(f"construction {construction!r} does not apply to {kind!r}; "
                         f"choose from {list(CONSTRUCTIONS.get(kind, ()))}")
    obj = data_manager.parse_document(doc)
    if construction == "ce":
        Q = ce_from_lie(obj)
        verdicts, objects = [("q_squared", check_q(Q))], {"q": _field(Q.Q), "degrees": _degrees(Q.manifold)}
    elif construction == "weil":
        W = weil(obj)
        verdicts = [("cartan", _failures_verdict("cartan", cartan_violations(W), "d^2 = 0 and Cartan relations hold"))]
        objects = {"d": _field(W.d), "degrees": _degrees(W.manifold)}
    elif construction == "crossed_to_dgla":
        verdicts, objects = _build_linfty(crossed_to_dgla(obj))
    elif construction == "cocycle_to_linfty":
        verdicts, objects = _build_linfty(cocycle_to_linfty(obj))
        objects["vanest"] = [
            {"inputs": list(key), "value": {k: format_scalar(c) for k, c in sorted(row.items())}}
            for key, row in sorted(vanest(obj).items())
        ]
    elif construction == "nerve_one_jet":
        jet = nerve_one_jet(obj)
        verdicts = [("isomorphism", jet.isomorphism), ("q_squared", check_q(jet.q_structure))]
        objects = jet.to_dict()
        objects.pop("verdict")
    elif construction == "descent":
        q = 1 if args.params is None else args.params
        report = descent_mc_bijection(obj, q)
        verdict = _failures_verdict("descent", report.failures, f"descent data match MC elements for q={q}")
        verdicts, objects = [("descent_mc", verdict)], report.to_dict()
    elif construction == "gerbe_two_form":
        fiber_dim, h = obj
        forms, omega = gerbe_two_form(h, fiber_dim)
        d_omega = de_rham(forms)(omega)
        closed = Verdict.passed("d omega = 0")
        if not d_omega.is_zero():
            closed = Verdict.failed("closed", "d omega != 0", {"d_omega": str(d_omega)})
        verdicts, objects = [("closed", closed)], {"omega": str(omega)}
    elif construction == "pair_maps_jet":
        fiber_dim, _ = obj
        Q = pair_maps_jet(fiber_dim)
        verdicts, objects = [("q_squared", check_q(Q))], {"q": _field(Q.Q), "degrees": _degrees(Q.manifold)}
    elif construction == "closed_forms_jet":
        fiber_dim, form_degree = obj
        space = closed_forms_jet(form_degree)
        verdicts = [("closed_forms", Verdict.passed(f"Z^{form_degree} has dimension {space.dim}"))]
        objects = {"degree": space.degree, "dim": space.dim, "basis": [str(b) for b in space.basis]}
    else:
        fiber_dim, _ = obj
        degree = 2 if args.degree is None else args.degree
        forms, morphisms = app1_closed_two_forms(fiber_dim, degree)
        d = de_rham(forms)
        closed = all(d(omega).is_zero() for omega in morphisms)
        verdict = Verdict.passed("every morphism is a closed 2-form")
        if not closed:
            verdict = Verdict.failed("closed", "a morphism out of R[2] is not closed")
        verdicts, objects = [("closed", verdict)], {"dim": len(morphisms), "max_degree": degree}
    return make_report("build", kind, verdicts, objects, construction)


# -- enumerate --------------------------------------------------------------------------


def cmd_enumerate(doc, args):
    if doc.get("kind") != "simplicial_set":
        raise UsageError("enumerate needs a simplicial_set document")
    X = data_manager.parse_document(doc)
    S = data_manager.parse_pointed_set(doc.get("pointed_set"), args.params)
    for name, verdict in (("kan", is_kan(X)), ("truncation", is_truncated(X, X.m))):
        if not verdict.ok:
            return make_report("enumerate", "simplicial_set", [(name, verdict)], {"sizes": X.sizes()})
    chain = g_chain(S, X, args.workers)
    verdicts = [
        ("surjective", Verdict.passed("transitions are surjective") if all(chain.surjective)
         else Verdict.failed("surjective", "a transition is not surjective", chain.surjective)),
        ("bijective", Verdict.passed(f"transitions bijective from level {X.m}") if all(chain.bijective[X.m:])
         else Verdict.failed("bijective", "a high transition is not bijective", chain.bijective)),
    ]
    objects = {"pointed_set": list(S.elements), **chain.to_dict()}
    if not args.no_oracle:
        source = pair_nerve(S, X.m)
        morphisms = hom_enumerate(source, X, args.workers)
        restricted = {restrict_to_chain(S, source, f, X.m) for f in morphisms}
        agree = len(morphisms) == chain.count and restricted == set(chain.levels[X.m])
        verdicts.append(("oracle", Verdict.passed("oracle agrees") if agree else Verdict.failed(
            "oracle", "chain and oracle differ", {"chain": chain.count, "oracle": len(morphisms)})))
        objects["oracle_count"] = len(morphisms)
    return make_report("enumerate", "simplicial_set", verdicts, objects)


# -- schur ---------------------------------------------------------------------------------


def _young_inputs(doc, args):
    doc = doc or {}
    rows = args.rows if args.rows is not None else doc.get("rows")
    return (
        YoungDiagram(tuple(rows)) if rows is not None else None,
        args.n if args.n is not None else int(doc.get("n", 2)),
        args.parity or doc.get("parity", EVEN),
        args.k if args.k is not None else int(doc.get("k", 1)),
        args.degree if args.degree is not None else int(doc.get("degree", 4)),
    )


def cmd_schur(doc, args):
    diagram, n, parity, k, degree = _young_inputs(doc, args)
    sub = args.subcommand
    if sub in ("dim", "series") and diagram is None:
        raise UsageError(f"schur {sub} needs a diagram (--rows or an input document)")
    if sub == "dim":
        value = schur_dim(diagram, n, parity)
        objects = {"rows": diagram.to_list(), "n": n, "parity": parity, "dim": value}
        if parity == ODD:
            objects["tensor_jet_dim"] = tensor_jet_dim(diagram, n)
        verdicts = [("dim", Verdict.passed(f"dim = {value}"))]
    elif sub == "series":
        try:
            series = composition_series(diagram)
        except PreconditionError as e:
            raise UsageError(str(e)) from None
        objects = {"series": [d.to_list() for d in series]}
        verdicts = [("series", Verdict.passed(f"{len(series)} subquotients"))]
    elif sub == "closed":
        value = closed_forms_dim(k, n)
        objects = {"k": k, "n": n, "dim": value}
        verdicts = [("closed", Verdict.passed(f"dim Z^{k} = {value}"))]
    else:
        report = omega2_character_identity(degree, args.workers)
        objects = report.to_dict()
        verdicts = [("omega2", report.verdict)]
    return make_report("schur", "young", verdicts, objects, sub)


def cmd_export(args):
    report = data_manager.get_report_by_id(args.id)
    if report is None:
        raise UsageError(f"no saved report with id {args.id}")
    if args.to == "csv":
        data = export_data.export_to_csv(report)
    elif args.to == "json":
        data = export_data.export_to_json(report)
    else:
        data = export_data.generate_summary_report(report).encode("utf-8")
    if args.output:
        with open(args.output, "wb") as f:
            f.write(data)
    else:
        sys.stdout.write(data.decode("utf-8"))
    return 0


# -- entry point ------------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="superjets", description="Exact checks for dg manifolds, L-infinity algebras and jets.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--format", choices=("text", "structured"), default="text")
    parser.add_argument("--workers", type=int, default=None, help="process pool width (default SUPERJETS_WORKERS)")
    parser.add_argument("--log-level", default=None, help="default SUPERJETS_LOG_LEVEL")
    parser.add_argument("--save", action="store_true", help="append the report to the history file")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="verify an input document")
    check.add_argument("--input", required=True)

    build = sub.add_parser("build", help="run a construction on an input document")
    build.add_argument("--input", required=True)
    build.add_argument("--construction", required=True)
    build.add_argument("--params", type=int, default=None, help="odd parameter count q for descent")
    build.add_argument("--degree", type=int, default=None)

    enumerate_ = sub.add_parser("enumerate", help="horn-filling enumeration against a pointed set")
    enumerate_.add_argument("--input", required=True)
    enumerate_.add_argument("--params", type=int, default=None, help="size of the pointed set")
    enumerate_.add_argument("--no-oracle", action="store_true")

    schur = sub.add_parser("schur", help="Young diagram tools")
    schur.add_argument("subcommand", choices=("dim", "series", "omega2", "closed"))
    schur.add_argument("--input", default=None)
    schur.add_argument("--rows", type=lambda s: [int(r) for r in s.split(",") if r], default=None)
    schur.add_argument("--n", type=int, default=None)
    schur.add_argument("--parity", choices=(EVEN, ODD), default=None)
    schur.add_argument("--k", type=int, default=None)
    schur.add_argument("--degree", type=int, default=None)

    export = sub.add_parser("export", help="export a saved report")
    export.add_argument("--id", type=int, required=True)
    export.add_argument("--to", choices=("json", "csv", "text"), default="text")
    export.add_argument("--output", default=None)
    return parser


def _emit(report, fmt):
    if fmt == "structured":
        sys.stdout.write(export_data.export_to_json(report).decode("utf-8"))
    else:
        sys.stdout.write(export_data.generate_summary_report(report, timestamp=False))


def run(args):
    if args.command == "export":
        return cmd_export(args)
    doc = data_manager.load_document(args.input) if getattr(args, "input", None) else None
    if doc is not None:
        ok, message = data_manager.validate_document(doc)
        if not ok:
            raise UsageError(message)
    if args.command == "check":
        report = cmd_check(doc, args)
    elif args.command == "build":
        report = cmd_build(doc, args)
    elif args.command == "enumerate":
        report = cmd_enumerate(doc, args)
    else:
        report = cmd_schur(doc, args)
    if args.save:
        report_id = data_manager.append_report(report, getattr(args, "input", "") or "")
        logger.info("saved report %d", report_id)
    _emit(report, args.format)
    return 0 if report["ok"] else 1


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=(args.log_level or config.LOG_LEVEL).upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    if args.workers is None:
        args.workers = config.WORKERS
    try:
        return run(args)
    except SuperjetsError as e:
        witness = getattr(e, "witness", None)
        sys.stderr.write(f"error: {e}\n")
        if witness is not None:
            sys.stderr.write(f"witness: {json.dumps(witness, sort_keys=True, default=str)}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
