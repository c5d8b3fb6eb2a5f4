"""Command-line interface: one query per invocation, JSON report on stdout."""

import argparse
import json
import re
import sys
import time
from fractions import Fraction

from .errors import AssumptionsNotMet, InputError, QuatselError
from .ext import SplitMarker, make_extension, make_order
from .field import FieldElem, make_field, primes_above, unit_ideal
from .genus import class_field_trace, contains_L_in_KR, custom, eichler, genus_dual, make_order_spec, parameterize_genus
from .oracle import DEFAULT_BOUND, cross_validate
from .quaternion import abhn_embeds, make_algebra, satisfies_eichler
from .selectivity import PROVENANCE, decide_embedding, decide_optimal

SUBCOMMANDS = ("ramify", "embeds", "genus", "classfield", "select", "verify")
CONFIG_KEYS = (
    "field", "algebra", "ramification", "level", "delta", "conductor", "optimal", "oracle_bound", "json_out",
)

_ELEM_RE = re.compile(
    r"^(?:(?P<x>[+-]?\d+(?:/\d+)?)(?=$|[+-]))?(?:(?P<s>[+-])?(?P<y>\d+(?:/\d+)?)?(?P<r>r))?$"
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def parse_elem(text: str, d: int) -> FieldElem:
    """Parse 'x', 'x+yr', 'yr', 'r' or '-r' (r = sqrt d) with rational x, y."""
    s = text.replace(" ", "")
    m = _ELEM_RE.match(s)
    if not s or m is None or (m.group("x") is None and m.group("r") is None):
        raise InputError(f"cannot parse element {text!r}")
    x = Fraction(m.group("x")) if m.group("x") else Fraction(0)
    y = Fraction(0)
    if m.group("r"):
        if d == 1:
            raise InputError("r = sqrt(d) is not available over Q")
        y = Fraction(m.group("y")) if m.group("y") else Fraction(1)
        if m.group("s") == "-":
            y = -y
    return FieldElem(d, x, y)


def fmt_elem(x: FieldElem) -> str:
    if x.d == 1 or x.y == 0:
        return str(x.x)
    y = "" if abs(x.y) == 1 else str(abs(x.y))
    sign = "+" if x.y > 0 else "-"
    head = str(x.x) if x.x else ""
    if not head and sign == "+":
        return f"{y}r"
    return f"{head}{sign}{y}r"


def parse_place(label: str, d: int):
    label = label.strip()
    m = re.match(r"^(\d+)(?:\.(\d+))?$", label)
    if not m:
        raise InputError(f"bad place label {label!r}")
    p = int(m.group(1))
    Ps = primes_above(d, p)
    if m.group(2) is None:
        if len(Ps) != 1:
            raise InputError(f"{p} splits; name the place as {p}.0 or {p}.1")
        return Ps[0]
    i = int(m.group(2))
    if i >= len(Ps):
        raise InputError(f"no place {label}")
    return Ps[i]


def _split_top(text: str, sep: str):
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return [t.strip() for t in out if t.strip()]


def parse_level(text: str, d: int):
    """Entries 'p:e' (Eichler exponent e) or 'p:custom(units=1,odd=0,exp=2)'."""
    entries = []
    for tok in _split_top(text or "", ","):
        if ":" not in tok:
            raise InputError(f"level entry {tok!r} needs the form place:exponent")
        place, spec = tok.split(":", 1)
        P = parse_place(place, d)
        m = re.match(r"^custom\((.*)\)$", spec.strip())
        if m:
            opts = {"units": "1", "odd": "0", "exp": "0"}
            for kv in _split_top(m.group(1), ","):
                k, _, v = kv.partition("=")
                if k.strip() not in opts:
                    raise InputError(f"unknown custom option {k!r}")
                opts[k.strip()] = v.strip()
            try:
                entries.append(custom(P, opts["units"] == "1", opts["odd"] == "1", int(opts["exp"])))
            except ValueError as exc:
                raise InputError(f"bad custom exponent in {tok!r}") from exc
            continue
        try:
            e = int(spec)
        except ValueError as exc:
            raise InputError(f"bad exponent in level entry {tok!r}") from exc
        if e > 0:
            entries.append(eichler(P, e))
    return entries


def parse_conductor(text: str, d: int):
    """Product of '*'-separated factors: 'p.i^k' (prime place p.i) or 'n^k' (the ideal (n))."""
    f = unit_ideal(d)
    if not text:
        return f
    for tok in text.split("*"):
        tok = tok.strip()
        base, _, k = tok.partition("^")
        k = int(k) if k else 1
        if "." in base:
            f = f * parse_place(base, d).ideal ** k
        else:
            try:
                n = int(base)
            except ValueError as exc:
                raise InputError(f"bad conductor factor {tok!r}") from exc
            if n <= 0:
                raise InputError("conductor factors must be positive")
            f = f * unit_ideal(d) * FieldElem(d, n ** k)
    return f


def read_config(path: str) -> dict:
    cfg = {}
    try:
        lines = open(path, encoding="utf-8").read().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    for no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"config line {no}: expected key = value")
        key, _, val = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in CONFIG_KEYS:
            raise InputError(f"config line {no}: unknown key {key!r}")
        cfg[key] = val.strip()
    return cfg


def build_parser():
    p = _Parser(prog="quatsel", description="Selectivity of quadratic orders in genera of quaternion orders.")
    p.add_argument("command", choices=SUBCOMMANDS)
    p.add_argument("--config")
    p.add_argument("--field")
    p.add_argument("--algebra", help="a,b")
    p.add_argument("--ramification", help="expected ramified places, e.g. 2,infty_0 (checked, not constructed)")
    p.add_argument("--level", help="p:e[,p:e...]")
    p.add_argument("--delta")
    p.add_argument("--conductor")
    p.add_argument("--optimal", action="store_true", default=None)
    p.add_argument("--oracle-bound", dest="oracle_bound")
    p.add_argument("--json-out", dest="json_out")
    return p


def _settings(args) -> dict:
    cfg = read_config(args.config) if args.config else {}
    for key in CONFIG_KEYS:
        v = getattr(args, key)
        if v is not None:
            cfg[key] = v
    return cfg


def _flag(v) -> bool:
    if isinstance(v, bool):
        return v
    return str(v).strip().lower() in ("1", "true", "yes", "on")


class Query:
    """Parsed, validated query inputs."""

    def __init__(self, cfg: dict):
        self.cfg = cfg
        try:
            self.d = int(cfg.get("field", "1"))
        except ValueError as exc:
            raise InputError(f"key 'field': not an integer: {cfg.get('field')!r}") from exc
        self.K = make_field(self.d)
        alg = cfg.get("algebra", "1,1")
        parts = _split_top(alg, ",")
        if len(parts) != 2:
            raise InputError(f"key 'algebra': expected a,b, got {alg!r}")
        self.a, self.b = (parse_elem(x, self.d) for x in parts)
        ram = cfg.get("ramification")
        self.expected_ram = None if ram is None else sorted(x.strip() for x in ram.split(",") if x.strip())
        self.entries = parse_level(cfg.get("level", ""), self.d)
        self.delta = parse_elem(cfg["delta"], self.d) if cfg.get("delta") else None
        self.conductor = parse_conductor(cfg.get("conductor", ""), self.d)
        self.optimal = _flag(cfg.get("optimal", False))
        try:
            self.bound = int(cfg.get("oracle_bound", DEFAULT_BOUND))
        except ValueError as exc:
            raise InputError("key 'oracle_bound': not an integer") from exc

    def algebra(self):
        A = make_algebra(self.K, self.a, self.b)
        if self.expected_ram is not None:
            got = sorted(v.label for v in A.ramified_places)
            if got != self.expected_ram:
                raise InputError(f"key 'ramification': algebra ramifies at {got}, not {self.expected_ram}")
        return A

    def order_spec(self):
        return make_order_spec(self.algebra(), self.entries)

    def extension(self):
        if self.delta is None:
            raise InputError("this command needs --delta")
        return make_extension(self.K, self.delta)

    def describe(self) -> dict:
        return {
            "field": self.d,
            "algebra": [fmt_elem(self.a), fmt_elem(self.b)],
            "level": [
                {"place": D.place.label, "kind": D.kind, "exponent": D.exponent, "units": D.units, "odd": D.odd}
                for D in self.entries
            ],
            "delta": fmt_elem(self.delta) if self.delta is not None else None,
            "conductor": _ideal_labels(self.conductor),
            "optimal": self.optimal,
            "oracle_bound": self.bound,
        }


def _ideal_labels(I):
    return [f"{P.label}^{k}" if k != 1 else P.label for P, k in I.factor()]


def _place_labels(places):
    return [v.label for v in places]


def cmd_ramify(q: Query):
    A = q.algebra()
    return {"places": _place_labels(A.ramified_places), "eichler": satisfies_eichler(A)}, []


def cmd_embeds(q: Query):
    A = q.algebra()
    E = q.extension()
    if isinstance(E, SplitMarker):
        return {"embeds": A.is_split, "split_algebra": True, "splitting": {}}, [PROVENANCE["abhn"]]
    split = {v.label: E.splitting(v).value for v in A.ramified_places}
    return {"embeds": abhn_embeds(A, E), "split_algebra": False, "splitting": split}, [PROVENANCE["abhn"]]


def cmd_genus(q: Query):
    R = q.order_spec()
    G = genus_dual(R)
    E = q.extension() if q.delta is not None else None
    P = parameterize_genus(R, E, G)
    return {
        "rank": G.rank,
        "type_number": G.type_number,
        "dual_basis": [fmt_elem(x) for x in G.deltas],
        "generator_primes": _place_labels(P.primes),
        "level": _ideal_labels(R.level_ideal),
        "classes": [c.label for c in P.classes()],
    }, [PROVENANCE["genus"]]


def cmd_classfield(q: Query):
    R = q.order_spec()
    E = q.extension()
    if isinstance(E, SplitMarker):
        return {"contains": True, "trace": []}, [PROVENANCE["classfield"]]
    trace = [
        {"place": v.label, "local_order": kind, "splitting": s.value, "kills_chi": ok}
        for v, kind, s, ok in class_field_trace(R, E)
    ]
    return {"contains": contains_L_in_KR(R, E), "trace": trace}, [PROVENANCE["classfield"]]


def _verdict_result(v):
    return {
        "outcome": v.outcome,
        "optimal": v.optimal,
        "fraction": str(v.fraction),
        "classes": [c.label for c in v.classes],
        "admitting": [c.label for c in v.admitting],
        "generator_primes": _place_labels(v.param.primes) if v.param else [],
        "witness_place": v.witness.label if v.witness is not None else None,
    }


def cmd_select(q: Query):
    R = q.order_spec()
    W = make_order(q.extension(), q.conductor)
    v = decide_optimal(R, W) if q.optimal else decide_embedding(R, W)
    return _verdict_result(v), [v.provenance]


def _fmt_matrix(w):
    return [[fmt_elem(x) for x in row] for row in w.matrix]


def cmd_verify(q: Query):
    R = q.order_spec()
    W = make_order(q.extension(), q.conductor)
    rep = cross_validate(R, W, q.bound, optimal=q.optimal)
    rows = [
        {
            "order": r.order.label,
            "ideal": _ideal_labels(r.order.a) or ["1"],
            "gamma": "".join(map(str, r.gamma)),
            "predicted": r.predicted,
            "found": r.found,
            "witness": _fmt_matrix(r.witness) if r.witness else None,
            "optimal": r.optimal,
        }
        for r in rep.rows
    ]
    res = _verdict_result(rep.verdict)
    res.update(
        {
            "rows": rows,
            "agreements": rep.agreements,
            "disagreements": rep.disagreements,
            "bound_hits": rep.bound_hits,
            "consistent_absent": rep.consistent_absent,
        }
    )
    return res, [rep.verdict.provenance]


COMMANDS = {
    "ramify": cmd_ramify,
    "embeds": cmd_embeds,
    "genus": cmd_genus,
    "classfield": cmd_classfield,
    "select": cmd_select,
    "verify": cmd_verify,
}


def run(command: str, cfg: dict):
    """Execute one query; returns (exit code, report document)."""
    start = time.perf_counter()
    query_doc = dict(cfg)
    try:
        q = Query(cfg)
        query_doc = q.describe()
        result, prov = COMMANDS[command](q)
        code = 0
    except AssumptionsNotMet as exc:
        result, prov, code = {"error": "assumptions_not_met", "failed": list(exc.failed), "message": str(exc)}, [], 2
    except (QuatselError, ValueError, ZeroDivisionError) as exc:
        result, prov, code = {"error": type(exc).__name__, "message": str(exc)}, [], 1
    doc = {
        "query": {"command": command, **query_doc},
        "result": result,
        "provenance": prov,
        "timing_ms": round((time.perf_counter() - start) * 1000, 3),
    }
    return code, doc


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = _settings(args)
    except InputError as exc:
        print(json.dumps({"query": {}, "result": {"error": "InputError", "message": str(exc)},
                          "provenance": [], "timing_ms": 0}, indent=2))
        return 1
    code, doc = run(args.command, cfg)
    text = json.dumps(doc, indent=2)
    if cfg.get("json_out"):
        with open(cfg["json_out"], "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
