"""JSON encodings for polynomials, rings, matrices, groups, elements, subgroups, witnesses."""

import json
import re
from .errors import InputError
from .group import PRESETS, GroupPresentation
from .linalg import Mat
from .poly import EXACT, Poly, PrimePoly, Rat, RingTag
from .separability import Check, SeparationWitness, Thm2Demo
from .subgroup import Subgroup, canonicalize


def _rat(value):
    if isinstance(value, bool):
        raise InputError(f"not a rational coefficient: {value!r}", code="malformed-json")
    if isinstance(value, int):
        return Rat(value)
    if isinstance(value, str):
        try:
            return Rat(value.strip().replace("−", "-"))
        except (ValueError, ZeroDivisionError):
            raise InputError(f"not a rational coefficient: {value!r}", code="malformed-json")
    raise InputError(f"not a rational coefficient: {value!r}", code="malformed-json")


def poly_to_json(p):
    return {"coeffs": [str(c) for c in p.coeffs]}


def poly_from_json(obj):
    if isinstance(obj, dict):
        if "coeffs" not in obj:
            raise InputError("polynomial object needs a 'coeffs' field", code="malformed-json")
        obj = obj["coeffs"]
    if isinstance(obj, (int, str)) and not isinstance(obj, bool):
        obj = [obj]
    if not isinstance(obj, list):
        raise InputError(f"not a polynomial: {obj!r}", code="malformed-json")
    return Poly(_rat(c) for c in obj)


def prime_to_json(p):
    return poly_to_json(p.poly)


def prime_from_json(obj, assume=False):
    return PrimePoly.of(poly_from_json(obj), assume=assume)


def ring_to_json(tag):
    if tag.is_exact:
        return {"kind": "exact"}
    return {"kind": "residue", "prime": prime_to_json(tag.prime), "power": tag.power,
            "certified": tag.prime.certified}


def ring_from_json(obj):
    if obj is None:
        return EXACT
    kind = str(obj.get("kind", "exact")).lower()
    if kind == "exact":
        return EXACT
    if kind == "residue":
        prime = prime_from_json(obj["prime"], assume=obj.get("certified") == "assumed")
        return RingTag.residue(prime, int(obj["power"]))
    raise InputError(f"unknown ring kind {kind!r}", code="malformed-json")


def mat_to_json(A):
    return {"rows": A.nrows, "cols": A.ncols, "tag": ring_to_json(A.tag),
            "entries": [[poly_to_json(e) for e in r] for r in A.entries]}


def mat_from_json(obj):
    tag = ring_from_json(obj.get("tag"))
    rows = [[poly_from_json(e) for e in r] for r in obj.get("entries", [])]
    ncols = obj.get("cols", len(rows[0]) if rows else None)
    if ncols is None:
        raise InputError("empty matrix needs 'cols'", code="malformed-json")
    if "rows" in obj and obj["rows"] != len(rows):
        raise InputError("'rows' does not match the entries", code="dimension-mismatch")
    return Mat.from_rows(rows, ncols, tag)


# -- groups ---------------------------------------------------------------


def group_to_json(G):
    return {
        "ring": ring_to_json(G.tag),
        "n": G.n,
        "m": G.m,
        "comm": [{"i": i + 1, "j": j + 1, "c": [poly_to_json(v) for v in vec]}
                 for i, j, vec in G.comm],
        "central_relations": [[poly_to_json(v) for v in r] for r in G.relations.entries],
    }


def group_from_json(obj):
    if isinstance(obj, str):
        return parse_preset(obj)
    try:
        tag = ring_from_json(obj.get("ring"))
        n, m = int(obj["n"]), int(obj["m"])
        comm = {}
        for entry in obj.get("comm", []):
            key = (int(entry["i"]), int(entry["j"]))
            if key in comm:
                raise InputError(f"duplicate commutator entry {key}", code="malformed-json")
            comm[key] = [poly_from_json(v) for v in entry["c"]]
        rels = [[poly_from_json(v) for v in r] for r in obj.get("central_relations", [])]
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"malformed group document: {exc}", code="malformed-json")
    return GroupPresentation.build(n, m, comm, rels, tag)


_PRESET_RE = re.compile(r"^(?:preset:)?([a-z0-9-]+)(?:\((.*)\))?$")


def _split_args(text):
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
            continue
        depth += ch in "[{"
        depth -= ch in "]}"
        cur += ch
    if cur.strip():
        parts.append(cur)
    return [p.strip() for p in parts]


def parse_preset(spec):
    """``heisenberg``, ``abelian(3)``, ``heisenberg-torsion([0,1],2)``, ``free-class2(3)``..."""
    match = _PRESET_RE.match(spec.strip())
    if not match or match.group(1) not in PRESETS:
        raise InputError(f"unknown preset {spec!r}; known: {', '.join(sorted(PRESETS))}",
                         code="unknown-preset")
    name, raw = match.groups()
    args = []
    for part in _split_args(raw or ""):
        val = json.loads(part)
        args.append(poly_from_json(val) if isinstance(val, (list, dict)) else val)
    if name == "heisenberg-torsion" and args:
        args[0] = PrimePoly.of(args[0])
    try:
        return PRESETS[name](*args)
    except TypeError as exc:
        raise InputError(f"bad preset arguments for {name}: {exc}", code="unknown-preset")


# -- elements and subgroups -------------------------------------------------


def element_to_json(g):
    return {"a": [poly_to_json(v) for v in g.a], "c": [poly_to_json(v) for v in g.c]}


def element_from_json(obj, G):
    if not isinstance(obj, dict) or "a" not in obj or "c" not in obj:
        raise InputError("element document needs 'a' and 'c'", code="malformed-json")
    return G.element([poly_from_json(v) for v in obj["a"]], [poly_from_json(v) for v in obj["c"]])


def subgroup_to_json(H):
    return {"canonical": True,
            "arows": [element_to_json(h) for h in H.arows],
            "crows": [[poly_to_json(v) for v in r] for r in H.crows.entries]}


def subgroup_from_json(obj, G):
    if not isinstance(obj, dict):
        raise InputError("subgroup document must be an object", code="malformed-json")
    if "generators" in obj:
        gens = [element_from_json(e, G) for e in obj["generators"]]
    elif obj.get("canonical"):
        gens = [element_from_json(e, G) for e in obj.get("arows", [])]
        gens += [G.element(None, [poly_from_json(v) for v in r]) for r in obj.get("crows", [])]
    else:
        raise InputError("subgroup document needs 'generators' or a canonical form",
                         code="malformed-json")
    return canonicalize(gens, G)


# -- reports ----------------------------------------------------------------


def type_report_to_json(rep):
    return {
        "torsion": rep.is_torsion_group,
        "finite_type": rep.is_finite_type,
        "pi_type": prime_to_json(rep.pi_type) if rep.pi_type is not None else None,
        "exponent": None if rep.exponent is None else [prime_to_json(p) for p in rep.exponent],
    }


def _arg_to_json(arg):
    if isinstance(arg, Subgroup):
        return {"subgroup": subgroup_to_json(arg)}
    return {"element": element_to_json(arg)}


def _arg_from_json(obj, G):
    if "subgroup" in obj:
        return subgroup_from_json(obj["subgroup"], G)
    return element_from_json(obj["element"], G)


def check_to_json(c):
    return {"op": c.op, "power": c.power, "args": [_arg_to_json(a) for a in c.args],
            "result": c.result}


def check_from_json(obj, G):
    return Check(obj["op"], int(obj["power"]), tuple(_arg_from_json(a, G) for a in obj["args"]),
                 bool(obj["result"]))


def witness_to_json(w):
    return {"kind": w.kind, "prime": prime_to_json(w.prime), "power": w.power,
            "transcript": [check_to_json(c) for c in w.transcript]}


def witness_from_json(obj, G):
    return SeparationWitness(obj["kind"], prime_from_json(obj["prime"]), int(obj["power"]),
                             tuple(check_from_json(c, G) for c in obj["transcript"]))


def demo_to_json(d):
    return {"kind": "Thm2", "prime": prime_to_json(d.pi), "alpha": prime_to_json(d.alpha_prime),
            "n": d.n, "u": element_to_json(d.u), "v": element_to_json(d.v),
            "z1": element_to_json(d.z1), "checked_powers": list(d.checked_powers),
            "transcript": [check_to_json(c) for c in d.transcript]}


def demo_from_json(obj, G):
    return Thm2Demo(prime_from_json(obj["alpha"]), int(obj["n"]),
                    element_from_json(obj["u"], G), element_from_json(obj["v"], G),
                    element_from_json(obj["z1"], G), prime_from_json(obj["prime"]),
                    tuple(obj["checked_powers"]),
                    tuple(check_from_json(c, G) for c in obj["transcript"]))


def dumps(doc):
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
