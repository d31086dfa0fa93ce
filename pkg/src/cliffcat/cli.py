"""Command-line front end.  Every command prints one JSON report on stdout.

Exit codes: 0 success, 1 input error, 2 a check failed.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass, field

import numpy as np

from . import FORMAT, __version__
from .clifford import GradedPointedCategory, check_induced_equivalence, classify_graded
from .cohomology import Cochain, cochain_from_json, cohomology_group, cyclic_generator, is_cocycle
from .errors import (CliffcatError, ConsistencyFailure, GroupTheoreticalCase, InputError, InvariantBroken,
                     LiftDependence, NotCocycle)
from .extensions import (COCYCLE_RULE, ExtensionContext, equivalence_matrix, extension_candidates,
                         extension_classes, oracle_complement_count, relation_laws, torsor_check,
                         z1_cocycles)
from .groups import (DEFAULT_BOUND, FiniteGroup, Subgroup, cyclic, group_from_json, group_to_json,
                     normal_subgroups, small_groups)
from .pointed import PointedCategory, module_classes, modules_equivalent
from .ty import TYCategory, classify_ty_modules, duality_action, hyperbolic_klein, ising, is_group_theoretical, three_way


@dataclass
class RunReport:
    command: str
    inputs: dict
    results: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def check(self, name: str, ok) -> bool:
        self.checks.append({"name": name, "pass": bool(ok)})
        return bool(ok)

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def to_json(self) -> dict:
        out = {"format": FORMAT, "command": self.command, "inputs": self.inputs, "results": self.results,
               "checks": self.checks, "versions": {"cliffcat": __version__, "format": FORMAT}}
        if self.notes:
            out["notes"] = self.notes
        return out


# --- input parsing ----------------------------------------------------------


def _load_json_arg(arg: str):
    if os.path.exists(arg):
        try:
            with open(arg) as fh:
                return json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{arg}: malformed JSON ({exc.msg})") from exc
    if arg.lstrip().startswith(("{", "[")):
        try:
            return json.loads(arg)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON argument ({exc.msg})") from exc
    return arg


def parse_omega(K: FiniteGroup, spec) -> Cochain:
    """``zero``, ``h3:<i>`` (i-th generator of H^3), ``cyclic:<q>`` or a cochain object."""
    if spec is None or spec == "zero":
        return Cochain.zero(K, 3, 1)
    if isinstance(spec, str):
        kind, _, arg = spec.partition(":")
        if kind == "h3":
            reps = cohomology_group(K, 3).representatives
            i = int(arg or -1)
            if not reps or not -len(reps) <= i < len(reps):
                raise InputError(f"H^3 has {len(reps)} generators; no index {i}")
            return reps[i]
        if kind == "cyclic":
            if K != cyclic(K.order):
                raise InputError("cyclic:<q> omega needs the group cyclic:n")
            return cyclic_generator(K.order, int(arg or 1))
        raise InputError(f"unknown omega {spec!r}")
    if isinstance(spec, dict):
        w = cochain_from_json(spec, K)
        if w.degree != 3 or not is_cocycle(w):
            raise InputError("omega must be a normalized 3-cocycle")
        return w
    raise InputError("omega must be a string or a cochain object")


def load_category(arg: str, omega_override: str | None, bound: int) -> PointedCategory:
    obj = _load_json_arg(arg)
    if isinstance(obj, str):
        obj = {"group": obj}
    if not isinstance(obj, dict) or "group" not in obj:
        raise InputError("category needs a 'group' entry")
    K = group_from_json(obj["group"])
    if K.order > bound:
        raise InputError(f"group order {K.order} exceeds --bound {bound}")
    omega = parse_omega(K, omega_override if omega_override is not None else obj.get("omega", "zero"))
    return PointedCategory(K, omega, obj.get("label", K.label))


def parse_kernel(K: FiniteGroup, spec: str) -> Subgroup:
    """``first`` (first proper nontrivial normal subgroup), ``trivial``, ``whole``,
    ``index:<i>`` into the normal subgroup list, or comma-separated elements."""
    normals = normal_subgroups(K, K.order)
    if spec == "trivial":
        return K.trivial()
    if spec == "whole":
        return K.whole()
    if spec == "first":
        proper = [N for N in normals if 1 < N.order < K.order]
        if not proper:
            raise InputError("group has no proper nontrivial normal subgroup")
        return proper[0]
    if spec.startswith("index:"):
        i = int(spec[6:])
        if not 0 <= i < len(normals):
            raise InputError(f"normal subgroup index {i} out of range")
        return normals[i]
    try:
        elems = [int(t) for t in spec.split(",") if t.strip()]
    except ValueError as exc:
        raise InputError(f"bad kernel {spec!r}") from exc
    N = Subgroup.of(K, elems)
    if not N.is_normal():
        raise InputError(f"kernel {list(N.elements)} is not normal")
    return N


def _category_inputs(C: PointedCategory) -> dict:
    return {"group": group_to_json(C.group), "omega": C.omega.to_json(C.group.label)}


# --- commands ---------------------------------------------------------------


def cmd_cohomology(args) -> RunReport:
    G = group_from_json(_load_json_arg(args.group))
    if G.order > args.bound:
        raise InputError(f"group order {G.order} exceeds --bound {args.bound}")
    if args.degree < 1:
        raise InputError("degree must be >= 1")
    H = cohomology_group(G, args.degree)
    rep = RunReport("cohomology", {"group": group_to_json(G), "degree": args.degree})
    rep.results = {"invariant_factors": list(H.invariant_factors), "order": H.order,
                   "representatives": [r.to_json(G.label) for r in H.representatives]}
    rep.check("representatives_are_cocycles", all(is_cocycle(r) for r in H.representatives))
    return rep


def cmd_classify_pointed(args) -> RunReport:
    C = load_category(args.category, args.omega, args.bound)
    classes = module_classes(C, args.bound)
    rep = RunReport("classify-pointed", _category_inputs(C))
    rep.results = {"count": len(classes), "classes": [m.to_json() for m in classes]}
    rep.check("pairwise_inequivalent", all(not modules_equivalent(a, b)
                                           for i, a in enumerate(classes) for b in classes[i + 1:]))
    return rep


def cmd_classify_graded(args) -> RunReport:
    C = load_category(args.category, args.omega, args.bound)
    N = parse_kernel(C.group, args.kernel)
    GC = GradedPointedCategory(C, N)
    rep = RunReport("classify-graded", {**_category_inputs(C), "kernel": list(N.elements), "check": args.check})
    try:
        recs = classify_graded(GC, check=args.check)
    except ConsistencyFailure as exc:
        rep.check("clifford_consistency", False)
        rep.results = {"error": str(exc)}
        return rep
    rep.results = {"grading_group_order": GC.G.order, "trivial_component_classes": len(GC.trivial_classes()),
                   "count": len(recs), "classes": [r.to_json() for r in recs]}
    names = sorted({k for r in recs for k in r.checks})
    for name in names:
        rep.check(name, all(r.checks[name] for r in recs))
    if args.check:
        rep.check("induced_equivalence", check_induced_equivalence(GC))
    return rep


def _extension_payload(ctx: ExtensionContext, orientation: int, terms: int, rep: RunReport, full: bool):
    classes = extension_classes(ctx, orientation, terms)
    rep.results.update({"semidirect": ctx.semidirect, "count": len(classes),
                        "working_modulus": ctx.modulus if ctx.semidirect else None,
                        "classes": [d.to_json() for d in classes]})
    rep.notes.append(f"1-cocycle rule in use: {COCYCLE_RULE}")
    rep.check("oracle_complement_count", len(classes) == oracle_complement_count(ctx))
    if full and ctx.semidirect:
        E = equivalence_matrix(extension_candidates(ctx), orientation, terms)
        for name, ok in relation_laws(E).items():
            rep.check(f"equivalence_{name}", ok)
        torsor = [torsor_check(ctx, th) for th in z1_cocycles(ctx.action)]
        rep.check("torsor", all(t["free"] and t["transitive"] and t.get("brute_force", True)
                                for t in torsor if t["nonempty"]))
    return classes


def cmd_extensions(args) -> RunReport:
    C = load_category(args.category, args.omega, args.bound)
    N = parse_kernel(C.group, args.kernel)
    ctx = ExtensionContext(C.group, N, C.omega)
    rep = RunReport("extensions", {**_category_inputs(C), "kernel": list(N.elements),
                                   "orientation": args.orientation, "terms": args.terms})
    _extension_payload(ctx, args.orientation, args.terms, rep, args.check)
    return rep


def _load_ty(arg: str) -> TYCategory:
    if arg == "ising":
        return ising()
    if arg == "hyperbolic":
        return hyperbolic_klein()
    obj = _load_json_arg(arg)
    if not isinstance(obj, dict):
        raise InputError("TY input must be a JSON object, 'ising' or 'hyperbolic'")
    try:
        return TYCategory.from_json(obj)
    except (KeyError, ValueError) as exc:
        raise InputError(f"bad TY input: {exc}") from exc


def cmd_ty_check(args) -> RunReport:
    ty = _load_ty(args.ty)
    if ty.A.order > args.bound:
        raise InputError(f"group order {ty.A.order} exceeds --bound {args.bound}")
    rep = RunReport("ty-check", ty.to_json())
    w = is_group_theoretical(ty)
    rep.results = {"group_theoretical": w is not None, "witness": None if w is None else list(w.elements)}
    try:
        orbits = classify_ty_modules(ty)
        rep.results["module_orbits"] = [[m.to_json() for m in o] for o in orbits]
        rep.results["module_count"] = len(orbits)
    except GroupTheoreticalCase:
        rep.results["module_orbits"] = None
    rep.notes.append("tau is recorded but not used by these criteria")
    tw = three_way(ty)
    rep.results["agreement"] = tw
    rep.check("three_way_agreement", len(set(tw.values())) == 1)
    rep.check("duality_involution", all(modules_equivalent(duality_action(ty, duality_action(ty, m)), m)
                                        for m in ty.trivial_classes()))
    return rep


def cmd_pipeline(args) -> RunReport:
    C = load_category(args.group, args.omega, args.bound)
    N = parse_kernel(C.group, args.kernel)
    GC = GradedPointedCategory(C, N)
    rep = RunReport("pipeline", {**_category_inputs(C), "kernel": list(N.elements)})
    ce = GC.trivial_classes()
    whole = module_classes(C)
    try:
        recs = classify_graded(GC, check=True)
        rep.check("clifford_consistency", True)
    except ConsistencyFailure as exc:
        rep.check("clifford_consistency", False)
        rep.results["error"] = str(exc)
        return rep
    rep.check("induced_equivalence", check_induced_equivalence(GC))
    rep.results.update({
        "trivial_component_classes": len(ce),
        "module_classes": len(whole),
        "orbits": sorted({tuple(sorted(set(r.orbit))) for r in recs}),
        "stabilizers": [list(r.stabilizer.elements) for r in recs],
    })
    ctx = ExtensionContext(C.group, N, C.omega)
    classes = _extension_payload(ctx, 1, 3, rep, True)
    rep.results["extension_count"] = len(classes)
    return rep


def _sweep_instances(bound: int):
    for K in small_groups(bound):
        H = cohomology_group(K, 3)
        omegas = [Cochain.zero(K, 3, 1)] + ([H.representatives[-1]] if H.order > 1 else [])
        for w in omegas:
            for N in normal_subgroups(K, K.order):
                yield K, w, N


def cmd_oracle_compare(args) -> RunReport:
    rep = RunReport("oracle-compare", {"bound": args.bound, "sample": args.sample, "seed": args.seed})
    inst = list(_sweep_instances(min(args.bound, 8)))
    if args.sample:
        rng = random.Random(args.seed)
        inst = sorted(rng.sample(range(len(inst)), min(args.sample, len(inst))))
        inst = [x for i, x in enumerate(_sweep_instances(min(args.bound, 8))) if i in set(inst)]
    rows = []
    for K, w, N in inst:
        C = PointedCategory(K, w)
        GC = GradedPointedCategory(C, N)
        try:
            classify_graded(GC, check=True)
            clif = True
        except ConsistencyFailure:
            clif = False
        ctx = ExtensionContext(K, N, w)
        n_ext = len(extension_classes(ctx)) if ctx.semidirect else 0
        n_orc = oracle_complement_count(ctx) if ctx.semidirect else 0
        rows.append({"group": K.label, "omega_modulus": w.modulus, "kernel": list(N.elements),
                     "clifford": clif, "extensions": n_ext, "oracle": n_orc})
    rep.results = {"instances": len(rows), "rows": rows}
    rep.check("clifford_all", all(r["clifford"] for r in rows))
    rep.check("extension_counts_match", all(r["extensions"] == r["oracle"] for r in rows))
    return rep


# --- driver -----------------------------------------------------------------


def _pretty(rep: dict, stream):
    print(f"{rep['command']}  ({rep['format']})", file=stream)
    for k, v in rep.get("results", {}).items():
        if isinstance(v, (list, dict)) and len(json.dumps(v)) > 70:
            size = len(v)
            print(f"  {k:<28} [{size} entries]", file=stream)
        else:
            print(f"  {k:<28} {json.dumps(v)}", file=stream)
    for c in rep.get("checks", []):
        print(f"  check {c['name']:<22} {'pass' if c['pass'] else 'FAIL'}", file=stream)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="also print a human summary on stderr")
    common.add_argument("--bound", type=int, default=DEFAULT_BOUND, help="largest group order accepted")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled sweeps")

    p = argparse.ArgumentParser(prog="cliffcat", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"cliffcat {__version__} ({FORMAT})")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("cohomology", parents=[common], help="H^n(G, k*)")
    s.add_argument("group")
    s.add_argument("degree", type=int)
    s.set_defaults(func=cmd_cohomology)

    s = sub.add_parser("classify-pointed", parents=[common], help="module categories over Vec_K^omega")
    s.add_argument("category")
    s.add_argument("--omega")
    s.set_defaults(func=cmd_classify_pointed)

    s = sub.add_parser("classify-graded", parents=[common], help="Clifford data for a grading K -> K/N")
    s.add_argument("category")
    s.add_argument("--kernel", required=True)
    s.add_argument("--omega")
    s.add_argument("--check", action="store_true", help="verify every clause; exit 2 on failure")
    s.set_defaults(func=cmd_classify_graded)

    s = sub.add_parser("extensions", parents=[common], help="extensions of the regular C_e-module category")
    s.add_argument("category")
    s.add_argument("--kernel", required=True)
    s.add_argument("--omega")
    s.add_argument("--orientation", type=int, choices=[1, -1], default=1)
    s.add_argument("--terms", type=int, choices=[2, 3], default=3)
    s.add_argument("--check", action="store_true", help="also check relation laws and the torsor property")
    s.set_defaults(func=cmd_extensions)

    s = sub.add_parser("ty-check", parents=[common], help="Tambara-Yamagami group-theoreticity and modules")
    s.add_argument("ty")
    s.set_defaults(func=cmd_ty_check)

    s = sub.add_parser("pipeline", parents=[common], help="all steps for one graded pointed category")
    s.add_argument("--group", required=True)
    s.add_argument("--kernel", default="first")
    s.add_argument("--omega", default="zero")
    s.set_defaults(func=cmd_pipeline)

    s = sub.add_parser("oracle-compare", parents=[common], help="sweep all groups of order <= 8 against the oracle")
    s.add_argument("--sample", type=int, default=0, help="check only this many randomly chosen instances")
    s.set_defaults(func=cmd_oracle_compare, bound=8)
    return p


def _emit(obj: dict, pretty: bool):
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2, default=_json_default) + "\n")
    if pretty:
        _pretty(obj, sys.stderr)


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(type(o).__name__)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep = args.func(args)
    except (ConsistencyFailure, InvariantBroken, LiftDependence, NotCocycle) as exc:
        err = {"format": FORMAT, "command": args.command, "error": f"{type(exc).__name__}: {exc}",
               "versions": {"cliffcat": __version__, "format": FORMAT}}
        _emit(err, args.pretty)
        return 2
    except (CliffcatError, ValueError, OSError) as exc:
        err = {"format": FORMAT, "command": args.command, "error": f"{type(exc).__name__}: {exc}",
               "versions": {"cliffcat": __version__, "format": FORMAT}}
        _emit(err, args.pretty)
        return 1
    _emit(rep.to_json(), args.pretty)
    return 0 if rep.passed else 2


if __name__ == "__main__":
    sys.exit(main())
