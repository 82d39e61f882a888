"""Query dispatch, certificate payloads and their re-verification."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .. import verdict as V
from ..algebra import Report, unit_map
from ..bimodule import (GRID_THRESHOLD, MAX_RANDOM_TRIES, MalformedQuery, regular_bimodule,
                        regular_bimodules, tensor_over)
from ..coalgebra import ComoduleFrobeniusSystem, decide_comodule_adjoint, verify_comodule_system
from ..coring import CoringFrobeniusWitness, decide_coring_frobenius, verify_coring_witness
from ..exactla import Mat, Q, fmt, kron, rank
from ..frobenius import (FrobeniusSystem, check_strict_morita, decide_second_kind, decide_adjoint_pair,
                         ring_extension_frobenius, trivial_context, twisted_partner,
                         verify_frobenius_system)
from ..hopf import casimir_sections, fundamental_iso_alpha, hopf_frobenius_verdict, integral_space
from .registry import Registry, instance_hash

CERT_FORMAT = "frobpair-certificate/1"
PASS, FAIL = "pass", "fail"


class QueryError(ValueError):
    """Dispatch problem: unknown kind, dangling reference, mismatched algebras."""


class HashMismatch(ValueError):
    pass


@dataclass
class QueryResult:
    name: str
    spec: dict
    outcome: str
    reason: str = ""
    lines: list[str] = field(default_factory=list)
    payload: dict | None = None

    @property
    def exit_code(self) -> int:
        return {V.YES: 0, PASS: 0, V.NO: 1, FAIL: 1, V.INCONCLUSIVE: 2}[self.outcome]


# -- encoding -----------------------------------------------------------------

def enc_vec(v) -> list[str]:
    return [fmt(Q(x)) for x in v]


def enc_mat(m: Mat) -> dict:
    return {"shape": [m.nrows, m.ncols], "rows": [enc_vec(r) for r in m.to_lists()]}


def _rat(s) -> object:
    if not isinstance(s, str):
        raise ValueError(f"expected a rational string, got {s!r}")
    return Q(Fraction(s))


def dec_vec(v) -> tuple:
    if not isinstance(v, list):
        raise ValueError("expected a list of rationals")
    return tuple(_rat(x) for x in v)


def dec_mat(d) -> Mat:
    r, c = d["shape"]
    rows = [dec_vec(row) for row in d["rows"]]
    if len(rows) != r or any(len(row) != c for row in rows):
        raise ValueError("matrix rows do not match the declared shape")
    return Mat.from_rows(rows, ncols=c) if r else Mat(0, c)


def _sys_payload(s: FrobeniusSystem) -> dict:
    return {"z": enc_vec(s.z), "omega": enc_mat(s.omega)}


def _sys_of(d: dict) -> FrobeniusSystem:
    return FrobeniusSystem(dec_vec(d["z"]), dec_mat(d["omega"]))


# -- resolving query objects ----------------------------------------------------

def _obj(reg: Registry, spec: dict, key: str, kind: str):
    name = spec.get(key)
    try:
        return reg.get(name, kind).obj
    except KeyError:
        raise QueryError(f"dangling reference: no {kind} named {name!r}") from None


def _contexts(reg: Registry, spec: dict, i):
    if "u" in spec:
        return _obj(reg, spec, "u", "morita"), _obj(reg, spec, "v", "morita")
    return trivial_context(i.source), trivial_context(i.target)


def _adjoint_objects(reg, spec):
    return _obj(reg, spec, "lam", "bimodule"), _obj(reg, spec, "x", "bimodule")


def _coring_objects(reg, spec):
    c = _obj(reg, spec, "coring", "coring")
    q = _obj(reg, spec, "q", "bimodule") if "q" in spec else regular_bimodule(c.base)
    return c, q


def _spec_text(spec: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in spec.items())


def _detail_text(details: dict) -> str:
    return " ".join(f"{k}={details[k]}" for k in sorted(details) if details[k] is not None)


# -- running --------------------------------------------------------------------

def _verdict_result(name, spec, v: V.Verdict, payload_fn) -> QueryResult:
    res = QueryResult(name, spec, v.outcome, v.reason)
    res.lines.append(f"  verdict: {v}")
    if v.details:
        res.lines.append(f"  details: {_detail_text(v.details)}")
    if v.yes:
        res.payload = payload_fn(v.certificate)
    return res


def _second_kind_payload(cert) -> dict:
    return {"first": _sys_payload(cert.first), "second": _sys_payload(cert.second)}


def run_query(reg: Registry, name: str, seed: int = 0, *, max_random_tries: int = MAX_RANDOM_TRIES,
              grid_threshold: int = GRID_THRESHOLD) -> QueryResult:
    try:
        item = reg.get(name, "query")
    except KeyError:
        raise QueryError(f"no query named {name!r}") from None
    spec = dict(item.obj)
    kind = spec.get("kind")
    search = {"max_random_tries": max_random_tries, "grid_threshold": grid_threshold}
    try:
        if kind == "adjoint":
            lam, x = _adjoint_objects(reg, spec)
            v = decide_adjoint_pair(lam, x, seed, **search)
            res = _verdict_result(name, spec, v, _sys_payload)
        elif kind == "frobenius2":
            lam, x = _adjoint_objects(reg, spec)
            u, w = _obj(reg, spec, "u", "morita"), _obj(reg, spec, "v", "morita")
            v = decide_second_kind(x, lam, u, w, seed, **search)
            res = _verdict_result(name, spec, v, _second_kind_payload)
        elif kind == "extension":
            i = _obj(reg, spec, "map", "map")
            u, w = _contexts(reg, spec, i)
            v = ring_extension_frobenius(i, u, w, seed, **search)
            res = _verdict_result(name, spec, v, _second_kind_payload)
        elif kind == "hopf":
            res = _run_hopf(name, spec, _obj(reg, spec, "hopf", "hopf"), seed)
        elif kind == "integrals":
            res = _run_integrals(name, spec, _obj(reg, spec, "hopf", "hopf"))
        elif kind == "comodule-adjoint":
            lam, x = _obj(reg, spec, "lam", "bicomodule"), _obj(reg, spec, "x", "bicomodule")
            v = decide_comodule_adjoint(lam, x, seed, **search)
            res = _verdict_result(name, spec, v,
                                  lambda s: {"psi": enc_mat(s.psi), "omega": enc_mat(s.omega)})
        elif kind == "coring":
            c, q = _coring_objects(reg, spec)
            v = decide_coring_frobenius(c, q, seed)
            res = _verdict_result(name, spec, v,
                                  lambda w: {"theta": enc_mat(w.theta), "z": enc_vec(w.z)})
        else:
            raise QueryError(f"unknown query kind {kind!r}")
    except MalformedQuery as err:
        raise QueryError(f"dispatch error: {err}") from None
    except ValueError as err:
        if isinstance(err, QueryError):
            raise
        raise QueryError(f"dispatch error: {err}") from None
    res.lines.insert(0, f"query {name} ({_spec_text(spec)})")
    return res


def _run_hopf(name, spec, h, seed) -> QueryResult:
    v = hopf_frobenius_verdict(h, seed)
    res = _verdict_result(name, spec, v, lambda s: {})
    alpha = fundamental_iso_alpha(h)
    sec = casimir_sections(h)
    res.lines.append(f"  fundamental isomorphism: {'pass' if alpha.ok else 'FAIL'}")
    res.lines.append(f"  casimir sections: {'pass' if sec.ok else 'FAIL'}")
    if v.yes:
        res.payload = {"integral": enc_vec(v.details["integral"]), **_sys_payload(v.certificate)}
    if not (alpha.ok and sec.ok) and v.yes:
        res.outcome, res.reason, res.payload = FAIL, "hopf-structure-check", None
    return res


_INTEGRAL_KEYS = (("H", "left"), ("H", "right"), ("H_dual", "left"), ("H_dual", "right"))


def _run_integrals(name, spec, h) -> QueryResult:
    payload = {}
    ok = True
    res = QueryResult(name, spec, PASS)
    for parent, side in _INTEGRAL_KEYS:
        sp = integral_space(h, parent, side)
        vecs = sp.space.vectors()
        payload[f"{parent}:{side}"] = [enc_vec(b) for b in vecs]
        shown = "; ".join("[" + ", ".join(enc_vec(b)) + "]" for b in vecs)
        res.lines.append(f"  {side} integrals in {parent}: dim {sp.dim} basis {shown}")
        ok = ok and sp.dim == 1
    res.outcome = PASS if ok else FAIL
    res.reason = "" if ok else "integral-dimension"
    res.lines.insert(0, f"  verdict: {res.outcome}")
    if ok:
        res.payload = payload
    return res


def certificate_for(res: QueryResult, reg: Registry, seed: int) -> dict | None:
    if res.payload is None:
        return None
    return {"format": CERT_FORMAT, "instance": instance_hash(reg), "query_name": res.name,
            "query": res.spec, "verdict": res.outcome, "reason": res.reason, "seed": seed,
            "payload": res.payload}


# -- verification -----------------------------------------------------------------

def verify_certificate(cert: dict, reg: Registry) -> Report:
    """Exact re-check of a certificate; no search is run.

    Raises :class:`HashMismatch` when the certificate belongs to another instance.
    """
    if cert.get("instance") != instance_hash(reg):
        raise HashMismatch("hash mismatch: certificate was issued for a different instance")
    rep = Report(f"certificate {cert.get('query_name', '?')}")
    if cert.get("format") != CERT_FORMAT:
        rep.fail(f"unknown certificate format {cert.get('format')!r}")
        return rep
    spec = cert.get("query", {})
    kind = spec.get("kind")
    p = cert.get("payload", {})
    try:
        if kind == "adjoint":
            lam, x = _adjoint_objects(reg, spec)
            _merge(rep, verify_frobenius_system(_sys_of(p), x, lam))
        elif kind in ("frobenius2", "extension"):
            if kind == "extension":
                i = _obj(reg, spec, "map", "map")
                lam, x = regular_bimodules(i)
                u, w = _contexts(reg, spec, i)
            else:
                lam, x = _adjoint_objects(reg, spec)
                u, w = _obj(reg, spec, "u", "morita"), _obj(reg, spec, "v", "morita")
            for label, c in (("U", u), ("V", w)):
                if not check_strict_morita(c):
                    rep.fail(f"context {label} is not strict")
            _merge(rep, verify_frobenius_system(_sys_of(p["first"]), x, lam), "first: ")
            partner = twisted_partner(lam, u, w)
            _merge(rep, verify_frobenius_system(_sys_of(p["second"]), partner, x), "second: ")
        elif kind == "hopf":
            _verify_hopf(rep, _obj(reg, spec, "hopf", "hopf"), p)
        elif kind == "integrals":
            _verify_integrals(rep, _obj(reg, spec, "hopf", "hopf"), p)
        elif kind == "comodule-adjoint":
            lam, x = _obj(reg, spec, "lam", "bicomodule"), _obj(reg, spec, "x", "bicomodule")
            sysc = ComoduleFrobeniusSystem(dec_mat(p["psi"]), dec_mat(p["omega"]))
            _merge(rep, verify_comodule_system(sysc, lam, x))
        elif kind == "coring":
            c, q = _coring_objects(reg, spec)
            w = CoringFrobeniusWitness(dec_mat(p["theta"]), dec_vec(p["z"]))
            _merge(rep, verify_coring_witness(c, q, w, int(cert.get("seed", 0))))
        else:
            rep.fail(f"unknown query kind {kind!r}")
    except (KeyError, TypeError, ValueError) as err:
        rep.fail(f"malformed payload: {err}")
    return rep


def _merge(rep: Report, other: Report, prefix: str = "") -> None:
    for f in other.failures:
        rep.fail(prefix + f)


def _verify_hopf(rep: Report, h, p: dict) -> None:
    t = dec_vec(p["integral"])
    A = h.algebra
    if len(t) != h.dim or not any(t):
        rep.fail("integral must be a nonzero vector of the right length")
        return
    for a in range(h.dim):
        if A.left_mult[a] @ t != tuple(h.counit[a] * x for x in t):
            rep.fail(f"left integral law fails for {A.basis_names[a]}")
    lam_ext, x_ext = regular_bimodules(unit_map(A))
    lam, x = x_ext, lam_ext
    tp = tensor_over(x, lam)
    z = tp.proj @ (kron(Mat.identity(h.dim), h.antipode) @ h.comul @ t)
    s = _sys_of(p)
    if tuple(s.z) != tuple(z):
        rep.fail("z is not the Casimir element of the integral")
    _merge(rep, verify_frobenius_system(s, x, lam))


def _verify_integrals(rep: Report, h, p: dict) -> None:
    for parent, side in _INTEGRAL_KEYS:
        vecs = [dec_vec(v) for v in p[f"{parent}:{side}"]]
        space = integral_space(h, parent, side).space
        if any(len(v) != h.dim for v in vecs):
            rep.fail(f"{side} integrals in {parent}: vector of the wrong length")
            continue
        for j, v in enumerate(vecs):
            if not space.contains(v):
                rep.fail(f"{side} integrals in {parent}: vector {j} is not an integral")
        if len(vecs) != space.dim or (vecs and rank(Mat.from_rows(vecs)) != len(vecs)):
            rep.fail(f"{side} integrals in {parent}: listed vectors are not a basis")
        elif [tuple(v) for v in vecs] != [tuple(v) for v in space.vectors()]:
            # the certificate pins the canonical (echelon) basis, not just any basis
            rep.fail(f"{side} integrals in {parent}: basis is not the canonical one")
