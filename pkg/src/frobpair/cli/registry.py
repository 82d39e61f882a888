"""Definition files to validated objects and back.

One namespace is shared by every section; names must be defined before
they are referenced.  Serialization writes every structure as explicit
tables (``sparse = true``, zero entries omitted) except corings and Morita
contexts, which are recorded by constructor.
"""

from __future__ import annotations

import hashlib
import re
from fractions import Fraction
from dataclasses import dataclass, field

from ..algebra import (AlgebraError, AlgebraMap, FDAlgebra, build_standard, check_algebra,
                       check_algebra_map, identity_map, inner_automorphism)
from ..bimodule import (Bimodule, check_bimodule, direct_sum, linear_dual, regular_bimodule,
                        regular_bimodules, tensor_over, twist)
from ..coalgebra import (Bicomodule, FDCoalgebra, check_bicomodule, check_coalgebra,
                         dual_coalgebra, grouplike_coalgebra, regular_bicomodule, trivial_coalgebra)
from ..coring import check_coring, sweedler_coring, trivial_coring
from ..exactla import Mat, fmt
from ..frobenius import ContextError, matrix_context, trivial_context, twist_context
from ..hopf import FDHopf, check_hopf, cyclic_group_hopf, dual_hopf, field_hopf, sweedler_h4
from .syntax import (NAME, DefinitionError, Entry, Section, format_linear, parse_linear,
                     parse_pairs, parse_rational, split_sections, tensor_vector_of, vector_of)

QUERY_KINDS = {
    "adjoint": ("lam", "x"),
    "frobenius2": ("lam", "x", "u", "v"),
    "extension": ("map",),
    "hopf": ("hopf",),
    "integrals": ("hopf",),
    "comodule-adjoint": ("lam", "x"),
    "coring": ("coring",),
}
# which registry kind each query key refers to
QUERY_REFS = {"lam": None, "x": None, "u": "morita", "v": "morita", "map": "map",
              "hopf": "hopf", "coring": "coring", "q": "bimodule"}


@dataclass
class Item:
    kind: str
    name: str
    obj: object
    meta: dict = field(default_factory=dict)


@dataclass
class Registry:
    items: dict[str, Item] = field(default_factory=dict)

    def add(self, item: Item) -> None:
        self.items[item.name] = item

    def get(self, name: str, kind: str | None = None) -> Item:
        it = self.items.get(name)
        if it is None or (kind is not None and it.kind != kind):
            raise KeyError(name)
        return it

    def of_kind(self, kind: str) -> dict[str, Item]:
        return {n: it for n, it in self.items.items() if it.kind == kind}

    @property
    def queries(self) -> dict[str, Item]:
        return self.of_kind("query")

    def __eq__(self, other):
        if not isinstance(other, Registry) or list(self.items) != list(other.items):
            return False
        return all(_same(a, other.items[n]) for n, a in self.items.items())


def _same(a: Item, b: Item) -> bool:
    if a.kind != b.kind:
        return False
    if a.kind == "query":
        return a.obj == b.obj
    if a.kind in ("bimodule",):
        return a.obj.same_structure(b.obj) and a.meta["basis"] == b.meta["basis"]
    if a.kind == "bicomodule":
        x, y = a.obj, b.obj
        return (x.left_coalg == y.left_coalg and x.right_coalg == y.right_coalg
                and x.left_coaction == y.left_coaction and x.right_coaction == y.right_coaction
                and a.meta["basis"] == b.meta["basis"])
    if a.kind in ("coring", "morita"):
        return a.meta["spec"] == b.meta["spec"]
    if a.kind in ("algebra", "hopf", "coalgebra"):
        names = lambda it: (it.obj.algebra.basis_names if it.kind == "hopf" else it.obj.basis_names)
        return a.obj == b.obj and names(a) == names(b)
    return a.obj == b.obj


# -- parsing ---------------------------------------------------------------

class _Ctx:
    def __init__(self, sec: Section, reg: Registry):
        self.sec, self.reg = sec, reg
        self.singles: dict[str, Entry] = {}
        self.multi: dict[str, list[Entry]] = {}
        for e in sec.entries:
            if e.args:
                self.multi.setdefault(e.key, []).append(e)
            else:
                if e.key in self.singles:
                    raise DefinitionError(e.line, e.col, f"syntax error: duplicate key {e.key!r}")
                self.singles[e.key] = e

    def fail(self, msg: str, e: Entry | None = None):
        if e is None:
            raise DefinitionError(self.sec.line, self.sec.col, msg)
        raise DefinitionError(e.line, e.col, msg)

    def single(self, key: str, required: bool = False) -> Entry | None:
        e = self.singles.get(key)
        if e is None and required:
            self.fail(f"{key} missing")
        return e

    def words(self, key: str, required: bool = False) -> tuple[list[str], Entry] | None:
        e = self.single(key, required)
        if e is None:
            return None
        return e.value.split(), e

    def ref(self, name: str, kind: str, e: Entry, col: int | None = None):
        try:
            return self.reg.get(name, kind)
        except KeyError:
            c = e.value_col if col is None else col
            raise DefinitionError(e.line, c, f"undefined reference: no {kind} named {name!r}") from None

    def sparse(self) -> bool:
        e = self.single("sparse")
        if e is None:
            return False
        if e.value not in ("true", "false"):
            raise DefinitionError(e.line, e.value_col, "syntax error: sparse must be true or false")
        return e.value == "true"

    def allowed(self, keys: set[str]) -> None:
        for e in self.sec.entries:
            if e.key not in keys:
                raise DefinitionError(e.line, e.col, f"syntax error: unknown key {e.key!r} in [{self.sec.kind}]")

    def col_of(self, e: Entry, idx: int) -> int:
        """Column of the ``idx``-th whitespace-separated word of the value."""
        words = list(re.finditer(r"\S+", e.value))
        if idx >= len(words):
            return e.value_col + len(e.value)
        return e.value_col + words[idx].start()


def _index(names) -> dict[str, int]:
    return {n: i for i, n in enumerate(names)}


def _int_arg(ctx: _Ctx, e: Entry, words: list[str], i: int) -> int:
    if len(words) <= i:
        ctx.fail("syntax error: missing integer argument", e)
    try:
        n = int(words[i])
    except ValueError:
        raise DefinitionError(e.line, ctx.col_of(e, i), f"syntax error: expected an integer, got {words[i]!r}") from None
    if n < 1:
        raise DefinitionError(e.line, ctx.col_of(e, i), "invalid spec: size must be at least 1")
    return n


def _basis(ctx: _Ctx) -> list[str] | None:
    b = ctx.words("basis")
    d = ctx.single("dim")
    if b is not None:
        names, e = b
        if len(set(names)) != len(names):
            ctx.fail("syntax error: repeated basis name", e)
        for i, n in enumerate(names):
            if not NAME.fullmatch(n):
                raise DefinitionError(e.line, ctx.col_of(e, i), f"syntax error: bad basis name {n!r}")
        if d is not None and parse_rational(d.value, d.line, d.value_col) != len(names):
            ctx.fail("dim does not match the number of basis names", d)
        return names
    if d is not None:
        n = parse_rational(d.value, d.line, d.value_col)
        if not isinstance(n, int) or n < 1:
            raise DefinitionError(d.line, d.value_col, "syntax error: dim must be a positive integer")
        return [f"b{i}" for i in range(n)]
    return None


def _bilinear_table(ctx: _Ctx, key: str, left: list[str], right: list[str], out: list[str],
                    sparse: bool, swap: bool = False) -> dict:
    """Entries ``key a b = expr``; returns {(ia, ib): vector over ``out``}."""
    li, ri, oi = _index(left), _index(right), _index(out)
    table = {}
    for e in ctx.multi.get(key, []):
        if len(e.args) != 2:
            ctx.fail(f"syntax error: '{key}' takes two basis names", e)
        a, b = e.args
        for nm, idx in ((a, li), (b, ri)):
            if nm not in idx:
                raise DefinitionError(e.line, e.col + len(key) + 1, f"undefined reference: unknown basis name {nm!r}")
        k = (li[a], ri[b])
        if k in table:
            ctx.fail(f"syntax error: duplicate entry {key} {a} {b}", e)
        table[k] = vector_of(parse_linear(e.value, e.line, e.value_col), oi, e.line)
    if not sparse:
        for a in left:
            for b in right:
                if (li[a], ri[b]) not in table:
                    ctx.fail(f"incomplete table: '{key} {a} {b}' missing (declare sparse = true to default to 0)")
    return table


def _unary_table(ctx: _Ctx, key: str, src: list[str], parse, sparse: bool, zero) -> list:
    si = _index(src)
    vals: dict[int, object] = {}
    for e in ctx.multi.get(key, []):
        if len(e.args) != 1:
            ctx.fail(f"syntax error: '{key}' takes one basis name", e)
        a = e.args[0]
        if a not in si:
            raise DefinitionError(e.line, e.col + len(key) + 1, f"undefined reference: unknown basis name {a!r}")
        if si[a] in vals:
            ctx.fail(f"syntax error: duplicate entry {key} {a}", e)
        vals[si[a]] = parse(e)
    if not sparse:
        for a in src:
            if si[a] not in vals:
                ctx.fail(f"incomplete table: '{key} {a}' missing (declare sparse = true to default to 0)")
    return [vals.get(i, zero) for i in range(len(src))]


def _validated(ctx: _Ctx, rep) -> None:
    if not rep.ok:
        ctx.fail("axiom failure: " + "; ".join(rep.failures))


def _algebra_tables(ctx: _Ctx) -> FDAlgebra:
    names = _basis(ctx)
    if names is None:
        ctx.fail("basis missing")
    ue = ctx.single("unit")
    if ue is None:
        ctx.fail("unit missing")
    sparse = ctx.sparse()
    table = _bilinear_table(ctx, "mul", names, names, names, sparse)
    unit = vector_of(parse_linear(ue.value, ue.line, ue.value_col), _index(names), ue.line)
    try:
        alg = FDAlgebra.from_table(names, table, unit, validate=False)
    except ValueError as err:
        ctx.fail(f"axiom failure: {err}")
    _validated(ctx, check_algebra(alg))
    return FDAlgebra(alg.dim, alg.basis_names, alg.mul, alg.unit)


def _standard_algebra(ctx: _Ctx, e: Entry) -> FDAlgebra:
    w = e.value.split()
    kind = w[0]
    try:
        if kind in ("field", "dual_numbers"):
            return build_standard(kind)
        if kind in ("matrix", "cyclic", "upper_triangular"):
            return build_standard(kind, _int_arg(ctx, e, w, 1))
        if kind == "group":
            if len(w) > 1 and w[1] == "cyclic":
                return build_standard("cyclic", _int_arg(ctx, e, w, 2))
            return build_standard("cyclic", _int_arg(ctx, e, w, 1))
        if kind == "product":
            if len(w) != 3:
                ctx.fail("syntax error: product takes two algebra names", e)
            a = ctx.ref(w[1], "algebra", e, ctx.col_of(e, 1)).obj
            b = ctx.ref(w[2], "algebra", e, ctx.col_of(e, 2)).obj
            return build_standard("product", a, b)
        if kind == "opposite":
            if len(w) != 2:
                ctx.fail("syntax error: opposite takes one algebra name", e)
            return build_standard("opposite", ctx.ref(w[1], "algebra", e, ctx.col_of(e, 1)).obj)
    except AlgebraError as err:
        ctx.fail(f"axiom failure: {err}", e)
    raise DefinitionError(e.line, e.value_col, f"invalid spec: unknown standard algebra {kind!r}")


def _parse_algebra(ctx: _Ctx) -> Item:
    std = ctx.single("standard")
    if std is not None:
        ctx.allowed({"standard"})
        return Item("algebra", ctx.sec.name, _standard_algebra(ctx, std))
    ctx.allowed({"basis", "dim", "unit", "mul", "sparse"})
    return Item("algebra", ctx.sec.name, _algebra_tables(ctx))


def _parse_map(ctx: _Ctx) -> Item:
    ctx.allowed({"source", "target", "kind", "image", "element", "sparse"})
    se, te = ctx.single("source", True), ctx.single("target", True)
    src = ctx.ref(se.value, "algebra", se)
    tgt = ctx.ref(te.value, "algebra", te)
    S, T = src.obj, tgt.obj
    ke = ctx.single("kind")
    kind = ke.value if ke else "explicit"
    if kind == "unit":
        if S.dim != 1:
            ctx.fail("invalid map: unit map needs a one-dimensional source", ke)
        mat = Mat.from_columns([tuple(Fraction(u) / S.unit[0] for u in T.unit)], nrows=T.dim)
    elif kind == "identity":
        mat = Mat.identity(S.dim) if S == T else None
        if mat is None:
            ctx.fail("invalid map: identity needs source = target", ke)
    elif kind == "inner":
        if S != T:
            ctx.fail("invalid map: inner automorphism needs source = target", ke)
        el = ctx.single("element", True)
        u = vector_of(parse_linear(el.value, el.line, el.value_col), _index(S.basis_names), el.line)
        try:
            mat = inner_automorphism(S, u).matrix
        except ValueError as err:
            ctx.fail(f"invalid map: {err}", el)
    elif kind == "explicit":
        cols = _unary_table(ctx, "image", list(S.basis_names),
                            lambda e: vector_of(parse_linear(e.value, e.line, e.value_col),
                                                _index(T.basis_names), e.line),
                            ctx.sparse(), [0] * T.dim)
        mat = Mat.from_columns(cols, nrows=T.dim)
    else:
        raise DefinitionError(ke.line, ke.value_col, f"syntax error: unknown map kind {kind!r}")
    f = AlgebraMap(S, T, mat)
    _validated(ctx, check_algebra_map(f))
    return Item("map", ctx.sec.name, f, {"source": src.name, "target": tgt.name})


def _map_or_id(ctx: _Ctx, name: str, alg: FDAlgebra, e: Entry, col: int) -> AlgebraMap:
    if name == "id":
        return identity_map(alg)
    return ctx.ref(name, "map", e, col).obj


def _alg_name(reg: Registry, alg: FDAlgebra) -> str | None:
    for n, it in reg.of_kind("algebra").items():
        if it.obj == alg:
            return n
    return None


def _bimodule_item(ctx: _Ctx, m: Bimodule, basis: list[str]) -> Item:
    ln = _alg_name(ctx.reg, m.left_alg)
    rn = _alg_name(ctx.reg, m.right_alg)
    if ln is None or rn is None:
        ctx.fail("undefined reference: the acting algebras must be declared as [algebra] sections")
    _validated(ctx, check_bimodule(m))
    return Item("bimodule", ctx.sec.name, m, {"left": ln, "right": rn, "basis": list(basis)})


def _parse_bimodule(ctx: _Ctx) -> Item:
    ke = ctx.single("kind")
    if ke is not None:
        ctx.allowed({"kind"})
        w = ke.value.split()
        col = lambda i: ctx.col_of(ke, i)
        kind = w[0]
        need = {"regular": 2, "extension-left": 2, "extension-right": 2, "twist": 4,
                "dual": 2, "sum": 3, "tensor": 3}
        if kind not in need:
            raise DefinitionError(ke.line, ke.value_col, f"syntax error: unknown bimodule kind {kind!r}")
        if len(w) != need[kind]:
            ctx.fail(f"syntax error: '{kind}' takes {need[kind] - 1} argument(s)", ke)
        try:
            if kind == "regular":
                a = ctx.ref(w[1], "algebra", ke, col(1)).obj
                return _bimodule_item(ctx, regular_bimodule(a), list(a.basis_names))
            if kind in ("extension-left", "extension-right"):
                i = ctx.ref(w[1], "map", ke, col(1)).obj
                lam, x = regular_bimodules(i)
                m = lam if kind == "extension-left" else x
                return _bimodule_item(ctx, m, list(i.target.basis_names))
            if kind == "twist":
                base = ctx.ref(w[1], "bimodule", ke, col(1))
                mu = _map_or_id(ctx, w[2], base.obj.left_alg, ke, col(2))
                phi = _map_or_id(ctx, w[3], base.obj.right_alg, ke, col(3))
                return _bimodule_item(ctx, twist(base.obj, mu, phi), base.meta["basis"])
            if kind == "dual":
                base = ctx.ref(w[1], "bimodule", ke, col(1))
                return _bimodule_item(ctx, linear_dual(base.obj), [f"{b}'" for b in base.meta["basis"]])
            a = ctx.ref(w[1], "bimodule", ke, col(1)).obj
            b = ctx.ref(w[2], "bimodule", ke, col(2)).obj
            if kind == "sum":
                m = direct_sum(a, b)
            else:
                m = tensor_over(a, b).module
            return _bimodule_item(ctx, m, [f"v{i}" for i in range(m.dim)])
        except ValueError as err:
            ctx.fail(f"invalid spec: {err}", ke)
    ctx.allowed({"left", "right", "basis", "dim", "act_left", "act_right", "sparse"})
    le, re_ = ctx.single("left", True), ctx.single("right", True)
    L = ctx.ref(le.value, "algebra", le).obj
    R = ctx.ref(re_.value, "algebra", re_).obj
    basis = _basis(ctx)
    if basis is None:
        ctx.fail("basis missing")
    sparse = ctx.sparse()
    n = len(basis)
    lt = _bilinear_table(ctx, "act_left", list(L.basis_names), basis, basis, sparse)
    rt = _bilinear_table(ctx, "act_right", basis, list(R.basis_names), basis, sparse)
    zero = [0] * n
    left = tuple(Mat.from_columns([lt.get((r, v), zero) for v in range(n)], nrows=n) for r in range(L.dim))
    right = tuple(Mat.from_columns([rt.get((v, s), zero) for v in range(n)], nrows=n) for s in range(R.dim))
    return _bimodule_item(ctx, Bimodule(L, R, n, left, right), basis)


def _hopf_structure(ctx: _Ctx, alg: FDAlgebra) -> FDHopf:
    names = list(alg.basis_names)
    idx = _index(names)
    sparse = ctx.sparse()
    n = alg.dim
    comul = _unary_table(ctx, "comul", names,
                         lambda e: tensor_vector_of(parse_linear(e.value, e.line, e.value_col), idx, idx, e.line),
                         sparse, [0] * (n * n))
    counit = _unary_table(ctx, "counit", names, lambda e: parse_rational(e.value, e.line, e.value_col),
                          sparse, 0)
    anti = _unary_table(ctx, "antipode", names,
                        lambda e: vector_of(parse_linear(e.value, e.line, e.value_col), idx, e.line),
                        sparse, [0] * n)
    return FDHopf(alg, Mat.from_columns(comul, nrows=n * n), tuple(counit),
                  Mat.from_columns(anti, nrows=n))


def _parse_hopf(ctx: _Ctx) -> Item:
    std = ctx.single("standard")
    if std is not None:
        ctx.allowed({"standard"})
        w = std.value.split()
        if w[0] == "sweedler":
            h = sweedler_h4()
        elif w[0] == "field":
            h = field_hopf()
        elif w[0] in ("cyclic", "group"):
            k = 2 if len(w) > 1 and w[1] == "cyclic" else 1
            h = cyclic_group_hopf(_int_arg(ctx, std, w, k))
        elif w[0] == "dual":
            if len(w) != 2:
                ctx.fail("syntax error: dual takes one Hopf algebra name", std)
            h = dual_hopf(ctx.ref(w[1], "hopf", std, ctx.col_of(std, 1)).obj)
        else:
            raise DefinitionError(std.line, std.value_col, f"invalid spec: unknown standard Hopf algebra {w[0]!r}")
        return Item("hopf", ctx.sec.name, h)
    ctx.allowed({"algebra", "basis", "dim", "unit", "mul", "sparse", "comul", "counit", "antipode"})
    ae = ctx.single("algebra")
    alg = ctx.ref(ae.value, "algebra", ae).obj if ae is not None else _algebra_tables(ctx)
    h = _hopf_structure(ctx, alg)
    _validated(ctx, check_hopf(h))
    return Item("hopf", ctx.sec.name, h)


def _parse_coalgebra(ctx: _Ctx) -> Item:
    std = ctx.single("standard")
    if std is not None:
        ctx.allowed({"standard"})
        w = std.value.split()
        if w[0] == "trivial":
            c = trivial_coalgebra()
        elif w[0] == "grouplike":
            c = grouplike_coalgebra(_int_arg(ctx, std, w, 1))
        elif w[0] == "dual":
            if len(w) != 2:
                ctx.fail("syntax error: dual takes one algebra name", std)
            c = dual_coalgebra(ctx.ref(w[1], "algebra", std, ctx.col_of(std, 1)).obj)
        else:
            raise DefinitionError(std.line, std.value_col, f"invalid spec: unknown standard coalgebra {w[0]!r}")
        return Item("coalgebra", ctx.sec.name, c)
    ctx.allowed({"basis", "dim", "sparse", "comul", "counit"})
    names = _basis(ctx)
    if names is None:
        ctx.fail("basis missing")
    idx = _index(names)
    n = len(names)
    sparse = ctx.sparse()
    comul = _unary_table(ctx, "comul", names,
                         lambda e: tensor_vector_of(parse_linear(e.value, e.line, e.value_col), idx, idx, e.line),
                         sparse, [0] * (n * n))
    counit = _unary_table(ctx, "counit", names, lambda e: parse_rational(e.value, e.line, e.value_col),
                          sparse, 0)
    c = FDCoalgebra(n, Mat.from_columns(comul, nrows=n * n), tuple(counit), tuple(names))
    _validated(ctx, check_coalgebra(c))
    return Item("coalgebra", ctx.sec.name, c)


def _coalg_name(reg: Registry, c: FDCoalgebra) -> str | None:
    for n, it in reg.of_kind("coalgebra").items():
        if it.obj == c:
            return n
    return None


def _parse_bicomodule(ctx: _Ctx) -> Item:
    ke = ctx.single("kind")
    if ke is not None:
        ctx.allowed({"kind"})
        w = ke.value.split()
        if w[0] != "regular" or len(w) != 2:
            raise DefinitionError(ke.line, ke.value_col, "syntax error: bicomodule kind must be 'regular C'")
        cit = ctx.ref(w[1], "coalgebra", ke, ctx.col_of(ke, 1))
        b = regular_bicomodule(cit.obj)
        _validated(ctx, check_bicomodule(b))
        return Item("bicomodule", ctx.sec.name, b,
                    {"left": cit.name, "right": cit.name, "basis": list(cit.obj.basis_names)})
    ctx.allowed({"left", "right", "basis", "dim", "sparse", "coact_left", "coact_right"})
    le, re_ = ctx.single("left", True), ctx.single("right", True)
    D = ctx.ref(le.value, "coalgebra", le)
    C = ctx.ref(re_.value, "coalgebra", re_)
    basis = _basis(ctx)
    if basis is None:
        ctx.fail("basis missing")
    n = len(basis)
    bi = _index(basis)
    sparse = ctx.sparse()
    di, ci = _index(D.obj.basis_names), _index(C.obj.basis_names)
    lc = _unary_table(ctx, "coact_left", basis,
                      lambda e: tensor_vector_of(parse_linear(e.value, e.line, e.value_col), di, bi, e.line),
                      sparse, [0] * (D.obj.dim * n))
    rc = _unary_table(ctx, "coact_right", basis,
                      lambda e: tensor_vector_of(parse_linear(e.value, e.line, e.value_col), bi, ci, e.line),
                      sparse, [0] * (n * C.obj.dim))
    b = Bicomodule(D.obj, C.obj, n, Mat.from_columns(lc, nrows=D.obj.dim * n),
                   Mat.from_columns(rc, nrows=n * C.obj.dim))
    _validated(ctx, check_bicomodule(b))
    return Item("bicomodule", ctx.sec.name, b, {"left": D.name, "right": C.name, "basis": basis})


def _parse_coring(ctx: _Ctx) -> Item:
    ctx.allowed({"kind"})
    ke = ctx.single("kind", True)
    w = ke.value.split()
    if len(w) != 2 or w[0] not in ("sweedler", "trivial"):
        raise DefinitionError(ke.line, ke.value_col, "syntax error: coring kind must be 'sweedler MAP' or 'trivial ALGEBRA'")
    if w[0] == "sweedler":
        c = sweedler_coring(ctx.ref(w[1], "map", ke, ctx.col_of(ke, 1)).obj)
    else:
        c = trivial_coring(ctx.ref(w[1], "algebra", ke, ctx.col_of(ke, 1)).obj)
    _validated(ctx, check_coring(c))
    return Item("coring", ctx.sec.name, c, {"spec": " ".join(w)})


def _parse_morita(ctx: _Ctx) -> Item:
    ctx.allowed({"kind"})
    ke = ctx.single("kind", True)
    w = ke.value.split()
    try:
        if w[0] == "trivial" and len(w) == 2:
            ctx_obj = trivial_context(ctx.ref(w[1], "algebra", ke, ctx.col_of(ke, 1)).obj)
        elif w[0] == "twist" and len(w) == 3:
            R = ctx.ref(w[1], "algebra", ke, ctx.col_of(ke, 1)).obj
            mu = ctx.ref(w[2], "map", ke, ctx.col_of(ke, 2)).obj
            if mu.source != R or mu.target != R or not mu.is_invertible():
                ctx.fail("invalid twist: map must be an automorphism of the algebra", ke)
            ctx_obj = twist_context(R, mu)
        elif w[0] == "matrix" and len(w) == 2:
            ctx_obj = matrix_context(_int_arg(ctx, ke, w, 1))
        else:
            raise DefinitionError(ke.line, ke.value_col,
                                  "syntax error: morita kind must be 'trivial R', 'twist R MAP' or 'matrix n'")
    except ContextError as err:
        ctx.fail(f"axiom failure: {err}", ke)
    return Item("morita", ctx.sec.name, ctx_obj, {"spec": " ".join(w)})


def _parse_query(ctx: _Ctx) -> Item:
    pairs: dict[str, tuple[str, Entry, int]] = {}
    for e in ctx.sec.entries:
        if e.key == "query":
            for k, (v, c) in parse_pairs(e).items():
                if k in pairs:
                    raise DefinitionError(e.line, c, f"syntax error: duplicate key {k!r}")
                pairs[k] = (v, e, c)
        else:
            if e.args:
                ctx.fail("syntax error: query entries take no arguments", e)
            if e.key in pairs:
                raise DefinitionError(e.line, e.col, f"syntax error: duplicate key {e.key!r}")
            pairs[e.key] = (e.value, e, e.value_col)
    if "kind" not in pairs:
        ctx.fail("kind missing")
    kind, ke, kc = pairs["kind"]
    if kind not in QUERY_KINDS:
        raise DefinitionError(ke.line, kc, f"unknown query kind {kind!r}")
    allowed = set(QUERY_KINDS[kind]) | {"kind"}
    if kind == "extension":
        allowed |= {"contexts", "u", "v"}
    if kind == "coring":
        allowed |= {"q"}
    for k, (v, e, c) in pairs.items():
        if k not in allowed:
            raise DefinitionError(e.line, c, f"syntax error: key {k!r} does not apply to kind {kind}")
    for k in QUERY_KINDS[kind]:
        if k not in pairs:
            ctx.fail(f"{k} missing")
    if kind == "extension":
        has_uv = "u" in pairs or "v" in pairs
        ctxs = pairs.get("contexts")
        if ctxs and ctxs[0] != "trivial":
            raise DefinitionError(ctxs[1].line, ctxs[2], "syntax error: contexts must be 'trivial'")
        if has_uv and ctxs:
            ctx.fail("syntax error: give either contexts=trivial or u and v")
        if has_uv and not ("u" in pairs and "v" in pairs):
            ctx.fail("syntax error: u and v must be given together")
    for k, (v, e, c) in pairs.items():
        if k == "kind" or k == "contexts":
            continue
        want = QUERY_REFS[k]
        if want is None:
            want = "bicomodule" if kind == "comodule-adjoint" else "bimodule"
        ctx.ref(v, want, e, c)
    spec = {k: v for k, (v, _, _) in pairs.items()}
    return Item("query", ctx.sec.name, spec, {"line": ctx.sec.line})


_PARSERS = {
    "algebra": _parse_algebra, "map": _parse_map, "bimodule": _parse_bimodule,
    "hopf": _parse_hopf, "coalgebra": _parse_coalgebra, "bicomodule": _parse_bicomodule,
    "coring": _parse_coring, "morita": _parse_morita, "query": _parse_query,
}


def parse_definition(text: str) -> Registry:
    """Parse and validate a definition file; raises :class:`DefinitionError`."""
    reg = Registry()
    for sec in split_sections(text):
        if sec.name in reg.items:
            raise DefinitionError(sec.line, sec.col, f"duplicate name {sec.name!r}")
        ctx = _Ctx(sec, reg)
        try:
            item = _PARSERS[sec.kind](ctx)
        except DefinitionError:
            raise
        except (AlgebraError, ValueError) as err:
            raise DefinitionError(sec.line, sec.col, f"axiom failure: {err}") from None
        reg.add(item)
    return reg


# -- serialization -----------------------------------------------------------

def _algebra_lines(a: FDAlgebra) -> list[str]:
    names = list(a.basis_names)
    out = [f"basis = {' '.join(names)}", f"unit = {format_linear(a.unit, names)}", "sparse = true"]
    n = a.dim
    for i in range(n):
        for j in range(n):
            v = a.mul.col(i * n + j)
            if any(v):
                out.append(f"mul {names[i]} {names[j]} = {format_linear(v, names)}")
    return out


def _serialize_item(it: Item) -> list[str]:
    o = it.obj
    lines = [f"[{it.kind} {it.name}]"]
    if it.kind == "algebra":
        lines += _algebra_lines(o)
    elif it.kind == "map":
        tn = list(o.target.basis_names)
        lines += [f"source = {it.meta['source']}", f"target = {it.meta['target']}", "sparse = true"]
        for j, b in enumerate(o.source.basis_names):
            v = o.matrix.col(j)
            if any(v):
                lines.append(f"image {b} = {format_linear(v, tn)}")
    elif it.kind == "bimodule":
        basis = it.meta["basis"]
        lines += [f"left = {it.meta['left']}", f"right = {it.meta['right']}",
                  f"basis = {' '.join(basis)}", "sparse = true"]
        for r, rn in enumerate(o.left_alg.basis_names):
            for v, vn in enumerate(basis):
                col = o.left_action[r].col(v)
                if any(col):
                    lines.append(f"act_left {rn} {vn} = {format_linear(col, basis)}")
        for v, vn in enumerate(basis):
            for s, sn in enumerate(o.right_alg.basis_names):
                col = o.right_action[s].col(v)
                if any(col):
                    lines.append(f"act_right {vn} {sn} = {format_linear(col, basis)}")
    elif it.kind == "hopf":
        names = list(o.algebra.basis_names)
        lines += _algebra_lines(o.algebra)
        for j, b in enumerate(names):
            lines.append(f"comul {b} = {format_linear(o.comul.col(j), names, second=names)}")
        for j, b in enumerate(names):
            if o.counit[j]:
                lines.append(f"counit {b} = {fmt(o.counit[j])}")
        for j, b in enumerate(names):
            v = o.antipode.col(j)
            if any(v):
                lines.append(f"antipode {b} = {format_linear(v, names)}")
    elif it.kind == "coalgebra":
        names = list(o.basis_names)
        lines += [f"basis = {' '.join(names)}", "sparse = true"]
        for j, b in enumerate(names):
            lines.append(f"comul {b} = {format_linear(o.comul.col(j), names, second=names)}")
        for j, b in enumerate(names):
            if o.counit[j]:
                lines.append(f"counit {b} = {fmt(o.counit[j])}")
    elif it.kind == "bicomodule":
        basis = it.meta["basis"]
        dn, cn = list(o.left_coalg.basis_names), list(o.right_coalg.basis_names)
        lines += [f"left = {it.meta['left']}", f"right = {it.meta['right']}",
                  f"basis = {' '.join(basis)}", "sparse = true"]
        for j, b in enumerate(basis):
            v = o.left_coaction.col(j)
            if any(v):
                lines.append(f"coact_left {b} = {format_linear(v, dn, second=basis)}")
        for j, b in enumerate(basis):
            v = o.right_coaction.col(j)
            if any(v):
                lines.append(f"coact_right {b} = {format_linear(v, basis, second=cn)}")
    elif it.kind in ("coring", "morita"):
        lines.append(f"kind = {it.meta['spec']}")
    elif it.kind == "query":
        for k, v in it.obj.items():
            lines.append(f"{k} = {v}")
    return lines


def serialize(reg: Registry, include_queries: bool = True) -> str:
    blocks = []
    for it in reg.items.values():
        if it.kind == "query" and not include_queries:
            continue
        blocks.append("\n".join(_serialize_item(it)))
    return "\n\n".join(blocks) + "\n"


def instance_hash(reg: Registry) -> str:
    """sha256 of the canonical serialization, queries excluded."""
    return hashlib.sha256(serialize(reg, include_queries=False).encode("utf-8")).hexdigest()
