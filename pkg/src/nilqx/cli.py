"""Command-line front end: one verb per invocation, one JSON document out."""

import argparse
import json
import os
import sys

from . import group as grp
from . import linalg, separability, subgroup
from . import serialize as ser
from .errors import InputError, NilqxError


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message, code="bad-arguments")


# -- input helpers ----------------------------------------------------------


def _load(text, what):
    """A JSON document given inline or as a file path."""
    if text is None:
        raise InputError(f"missing --{what}", code="bad-arguments")
    source = _read(text) if os.path.exists(text) else text
    try:
        return json.loads(source)
    except json.JSONDecodeError as exc:
        raise InputError(f"--{what}: {exc}", code="malformed-json")


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}", code="file-not-found")


def _poly_arg(args, name, required=True):
    inline = getattr(args, name)
    path = getattr(args, name + "_file")
    if inline is not None and path is not None:
        raise InputError(f"--{name} and --{name}-file are both given", code="conflicting-arguments")
    if path is not None:
        return ser.poly_from_json(_load(path, name + "-file"))
    if inline is not None:
        try:
            return ser.poly_from_json(json.loads(inline))
        except json.JSONDecodeError as exc:
            raise InputError(f"--{name}: {exc}", code="malformed-json")
    if required:
        raise InputError(f"missing --{name}", code="bad-arguments")
    return None


def _prime_arg(args, name="prime"):
    return ser.PrimePoly.of(_poly_arg(args, name), assume=getattr(args, "assume_prime", False))


class _Context:
    """Lazily resolves the group, preferring --group, else a 'group' key in a document."""

    def __init__(self, args):
        self.args = args
        self.docs = {}
        self._group = None

    def doc(self, name):
        if name not in self.docs:
            self.docs[name] = _load(getattr(self.args, name), name)
        return self.docs[name]

    def group(self, *doc_names):
        if self._group is not None:
            return self._group
        spec = getattr(self.args, "group", None)
        if spec is not None:
            if spec.startswith("preset:"):
                self._group = ser.parse_preset(spec)
            else:
                self._group = ser.group_from_json(_load(spec, "group"))
            return self._group
        for name in doc_names:
            if getattr(self.args, name, None) is None:
                continue
            d = self.doc(name)
            if isinstance(d, dict) and "group" in d:
                self._group = ser.group_from_json(d["group"])
                return self._group
        raise InputError("no group given: pass --group or embed a 'group' key",
                         code="missing-group")

    def _checked_group(self, name):
        G = self.group(name)
        d = self.doc(name)
        if isinstance(d, dict) and "group" in d and ser.group_from_json(d["group"]) != G:
            raise InputError(f"--{name} embeds a different presentation",
                             code="presentation-mismatch")
        return G

    def element(self, name):
        return ser.element_from_json(self.doc(name), self._checked_group(name))

    def subgroup(self, name):
        return ser.subgroup_from_json(self.doc(name), self._checked_group(name))


# -- verbs ------------------------------------------------------------------


def _elements(ctx, *names):
    ctx.group(*names)
    return [ctx.element(n) for n in names]


def cmd_validate(ctx):
    G = ctx.group()
    doc = {"valid": True, "group": ser.group_to_json(G)}
    if ctx.args.g is not None:
        doc["element"] = ser.element_to_json(ctx.element("g"))
    if ctx.args.H is not None:
        doc["subgroup"] = ser.subgroup_to_json(ctx.subgroup("H"))
    return 0, doc


def cmd_mul(ctx):
    g, h = _elements(ctx, "lhs", "rhs")
    return 0, {"result": ser.element_to_json(grp.multiply(g, h))}


def cmd_pow(ctx):
    (g,) = _elements(ctx, "g")
    return 0, {"result": ser.element_to_json(grp.power(g, _poly_arg(ctx.args, "lam")))}


def cmd_comm(ctx):
    g, h = _elements(ctx, "lhs", "rhs")
    return 0, {"result": ser.element_to_json(grp.commutator(g, h))}


def cmd_root(ctx):
    (g,) = _elements(ctx, "g")
    res = subgroup.extract_root(g, _poly_arg(ctx.args, "lam"))
    if not res:
        return 1, {"root": None}
    return 0, {"root": ser.element_to_json(res.root)}


def cmd_rank(ctx):
    if ctx.args.H is not None:
        ctx.group("H")
        return 0, {"rank": subgroup.subgroup_rank(ctx.subgroup("H"))}
    return 0, {"rank": grp.torsion_free_rank(ctx.group())}


def cmd_center(ctx):
    return 0, {"center": ser.subgroup_to_json(grp.center(ctx.group()))}


def cmd_classify(ctx):
    G = ctx.group()
    doc = ser.type_report_to_json(grp.classify(G))
    doc["torsion_free"] = grp.is_torsion_free(G)
    return 0, doc


def cmd_torsion(ctx):
    return 0, {"torsion": ser.subgroup_to_json(subgroup.torsion_subgroup(ctx.group()))}


def cmd_quotient(ctx):
    G = ctx.group()
    Q, _ = grp.quotient_mod_prime_power(G, _prime_arg(ctx.args), ctx.args.power)
    return 0, {"group": ser.group_to_json(Q)}


def cmd_sub_canon(ctx):
    ctx.group("H")
    return 0, ser.subgroup_to_json(ctx.subgroup("H"))


def cmd_sub_member(ctx):
    ctx.group("H", "g")
    ok = subgroup.member(ctx.element("g"), ctx.subgroup("H"))
    return (0 if ok else 1), {"member": ok}


def cmd_sub_isolator(ctx):
    ctx.group("H")
    return 0, {"isolator": ser.subgroup_to_json(subgroup.isolator(ctx.subgroup("H")))}


def cmd_sub_is_isolated(ctx):
    ctx.group("H")
    ok = subgroup.is_isolated(ctx.subgroup("H"))
    return (0 if ok else 1), {"isolated": ok}


def cmd_sub_is_normal(ctx):
    ctx.group("H")
    ok = subgroup.is_normal(ctx.subgroup("H"))
    return (0 if ok else 1), {"normal": ok}


def cmd_conj_test(ctx):
    g, h = _elements(ctx, "lhs", "rhs")
    ok = separability.conjugacy_test(g, h)
    return (0 if ok else 1), {"conjugate": ok}


def _pool(args):
    if args.pool is None and args.pool_file is None:
        return None
    if args.pool is not None and args.pool_file is not None:
        raise InputError("--pool and --pool-file are both given", code="conflicting-arguments")
    raw = _load(args.pool_file, "pool-file") if args.pool_file else json.loads(args.pool)
    if not isinstance(raw, list):
        raise InputError("the prime pool must be a JSON list of polynomials", code="malformed-json")
    return [ser.PrimePoly.of(ser.poly_from_json(p)) for p in raw]


def cmd_conj_witness(ctx):
    g, h = _elements(ctx, "lhs", "rhs")
    w = separability.conjugacy_witness(g, h, _pool(ctx.args), ctx.args.max_power)
    return 0, ser.witness_to_json(w)


def cmd_sep_thm3(ctx):
    ctx.group("H", "g")
    w = separability.thm3_witness(ctx.element("g"), ctx.subgroup("H"), _prime_arg(ctx.args),
                                  ctx.args.max_power)
    return 0, ser.witness_to_json(w)


def cmd_sep_thm4(ctx):
    ctx.group("H", "g")
    w = separability.thm4_witness(ctx.element("g"), ctx.subgroup("H"), _prime_arg(ctx.args),
                                  ctx.args.max_power)
    return 0, ser.witness_to_json(w)


def cmd_sep_demo2(ctx):
    z2, h = _elements(ctx, "z2", "h")
    d = separability.thm2_demo(ctx.group(), _prime_arg(ctx.args), z2, h,
                               max_power=ctx.args.max_power or 5, prime_pool=_pool(ctx.args))
    return 0, ser.demo_to_json(d)


def cmd_residual(ctx):
    (g,) = _elements(ctx, "g")
    w = separability.residual_witness(g, _prime_arg(ctx.args), ctx.args.max_power)
    return 0, ser.witness_to_json(w)


def cmd_hp_check(ctx):
    g, h = _elements(ctx, "lhs", "rhs")
    ok = grp.hall_petresco_check(g, h, _poly_arg(ctx.args, "alpha"))
    return (0 if ok else 1), {"holds": ok}


def cmd_verify(ctx):
    G = ctx.group("witness")
    doc = ctx.doc("witness")
    if doc.get("kind") == "Thm2":
        w = ser.demo_from_json(doc, G)
    else:
        w = ser.witness_from_json(doc, G)
    ok = separability.verify_witness(w)
    return (0 if ok else 1), {"verified": ok}


def _matrix(ctx):
    return ser.mat_from_json(ctx.doc("matrix"))


def cmd_mat_hnf(ctx):
    return 0, ser.mat_to_json(linalg.hermite_nf(_matrix(ctx)))


def cmd_mat_snf(ctx):
    res = linalg.smith_nf(_matrix(ctx))
    return 0, {"U": ser.mat_to_json(res.U), "D": ser.mat_to_json(res.D),
               "V": ser.mat_to_json(res.V),
               "invariant_factors": [ser.poly_to_json(p) for p in res.invariant_factors]}


def cmd_mat_howell(ctx):
    return 0, ser.mat_to_json(linalg.howell_nf(_matrix(ctx)))


def cmd_mat_saturate(ctx):
    return 0, ser.mat_to_json(linalg.saturate(_matrix(ctx)))


def cmd_mat_member(ctx):
    A = _matrix(ctx)
    raw = ctx.doc("vector")
    if not isinstance(raw, list):
        raise InputError("--vector must be a JSON list of polynomials", code="malformed-json")
    coeffs = linalg.module_member([ser.poly_from_json(v) for v in raw], A)
    if coeffs is None:
        return 1, {"member": False}
    return 0, {"member": True, "coefficients": [ser.poly_to_json(c) for c in coeffs]}


# -- parser -----------------------------------------------------------------


def _add_poly(p, name, helptext):
    p.add_argument(f"--{name}", help=f"{helptext} as an inline coefficient array")
    p.add_argument(f"--{name}-file", dest=f"{name.replace('-', '_')}_file",
                   help=f"{helptext} read from a JSON file")


_COMMANDS = {
    "validate": (cmd_validate, ["g?", "H?"], []),
    "mul": (cmd_mul, ["lhs", "rhs"], []),
    "pow": (cmd_pow, ["g"], ["lam"]),
    "comm": (cmd_comm, ["lhs", "rhs"], []),
    "root": (cmd_root, ["g"], ["lam"]),
    "rank": (cmd_rank, ["H?"], []),
    "center": (cmd_center, [], []),
    "classify": (cmd_classify, [], []),
    "torsion": (cmd_torsion, [], []),
    "quotient": (cmd_quotient, [], ["prime", "power"]),
    "sub-canon": (cmd_sub_canon, ["H"], []),
    "sub-member": (cmd_sub_member, ["g", "H"], []),
    "sub-isolator": (cmd_sub_isolator, ["H"], []),
    "sub-is-isolated": (cmd_sub_is_isolated, ["H"], []),
    "sub-is-normal": (cmd_sub_is_normal, ["H"], []),
    "conj-test": (cmd_conj_test, ["lhs", "rhs"], []),
    "conj-witness": (cmd_conj_witness, ["lhs", "rhs"], ["pool", "max-power"]),
    "sep-thm3": (cmd_sep_thm3, ["g", "H"], ["prime", "max-power"]),
    "sep-thm4": (cmd_sep_thm4, ["g", "H"], ["prime", "max-power"]),
    "sep-demo2": (cmd_sep_demo2, ["z2", "h"], ["prime", "max-power", "pool"]),
    "residual": (cmd_residual, ["g"], ["prime", "max-power"]),
    "hp-check": (cmd_hp_check, ["lhs", "rhs"], ["alpha"]),
    "verify": (cmd_verify, ["witness"], []),
    "mat-hnf": (cmd_mat_hnf, ["matrix"], []),
    "mat-snf": (cmd_mat_snf, ["matrix"], []),
    "mat-howell": (cmd_mat_howell, ["matrix"], []),
    "mat-saturate": (cmd_mat_saturate, ["matrix"], []),
    "mat-member": (cmd_mat_member, ["matrix", "vector"], []),
}

VERBS = tuple(_COMMANDS)


def build_parser():
    parser = _Parser(prog="nilqx", description=__doc__)
    sub = parser.add_subparsers(dest="verb", parser_class=_Parser)
    for verb, (_, docs, extras) in _COMMANDS.items():
        p = sub.add_parser(verb)
        if not verb.startswith("mat-"):
            p.add_argument("--group", help="group JSON file, inline JSON, or preset:NAME(args)")
        p.add_argument("--output", help="write the document here instead of stdout")
        for d in docs:
            p.add_argument(f"--{d.rstrip('?')}", help=f"{d.rstrip('?')} JSON file or inline JSON")
        for e in extras:
            if e in ("prime", "lam", "alpha"):
                _add_poly(p, e, e)
            elif e == "power":
                p.add_argument("--power", type=int, required=True)
            elif e == "max-power":
                p.add_argument("--max-power", type=int,
                               default=separability.DEFAULT_MAX_POWER if verb != "sep-demo2" else 5)
            elif e == "pool":
                _add_poly(p, "pool", "prime pool (list of polynomials)")
        if "prime" in extras:
            p.add_argument("--assume-prime", action="store_true",
                           help="accept a prime of degree >= 4 without proof")
    return parser


def _error_doc(exc):
    return {"error": exc.code, "detail": exc.detail}


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    out_path = None
    try:
        if not argv or argv[0] not in _COMMANDS:
            if argv and argv[0] in ("-h", "--help"):
                build_parser().print_help()
                return 0
            raise InputError(f"unknown verb {argv[0] if argv else ''!r}; known: "
                             f"{', '.join(_COMMANDS)}", code="unknown-verb")
        args = build_parser().parse_args(argv)
        out_path = args.output
        handler = _COMMANDS[args.verb][0]
        status, doc = handler(_Context(args))
    except NilqxError as exc:
        status, doc = exc.exit_status, _error_doc(exc)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        status, doc = 2, {"error": "malformed-input", "detail": f"{type(exc).__name__}: {exc}"}
    text = ser.dumps(doc)
    if out_path is not None and "error" not in doc:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
