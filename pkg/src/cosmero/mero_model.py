"""A finite exact model of mero functions.

The graded space is ``A = Q[t]/(t^(D+1))`` with basis ``t^0 .. t^D``,
grading ``K = t d/dt`` and translation ``T = d/dt``.  A field insertion acts
by ``W_g(z) h = g(t + z) h`` truncated to degree ``D``; it is commutative.

Elements and element-valued functions are :class:`~cosmero.series.Poly`
objects whose variable 0 is ``t``; the remaining variables hold formal
parameters such as ``z_i`` or ``zeta``.

Two kinds of cochains live here:

* :class:`Cochain` -- scalar valued, a table from basis tuples to rational
  functions of ``z_1..z_l`` with a pole bound table.  The axiom checkers act
  on these.
* :class:`ModelCochain` -- element valued, given by a multilinear map
  ``Phi: A^l -> A`` through ``F(g; z) = Phi(g_1(t+z_1), ..., g_l(t+z_l))``.
  These span the spaces of the double complex.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from .errors import DomainError, TruncationError, UnsupportedOperation, ValidationError
from .series import Poly, RationalFunctionValue, as_rational

__all__ = [
    "ModelAlgebra",
    "BetaTable",
    "Cochain",
    "Report",
    "pairing_cochain",
    "two_point_cochain",
    "check_tg_property",
    "check_kg_property",
    "check_pole_bounds",
    "shuffles",
    "permutation_sign",
    "shuffle_sum",
    "block_swap",
    "shuffle_complement",
    "fusion_expand",
    "reinsert",
    "ModelCochain",
    "apply_coboundary",
]


def _const(c, nvars):
    if isinstance(c, Poly):
        if c.nvars != nvars:
            raise ValidationError("parameter lives in a different variable set")
        return c
    return Poly.constant(as_rational(c) if not isinstance(c, Fraction) else c, nvars)


def _nvars(*xs):
    n = {x.nvars for x in xs if isinstance(x, Poly)}
    if len(n) > 1:
        raise ValidationError("mixed variable sets")
    return n.pop() if n else 1


def _t_degree(p: Poly) -> int:
    return max((e[0] for e, _ in p.terms()), default=-1)


class ModelAlgebra:
    """Truncated polynomial algebra ``Q[t]/(t^(D+1))`` with its insertions.

    ``left_action`` and ``right_action`` are the two module insertions used by
    the coboundary; both default to truncated multiplication.  Override them
    in a subclass to model distinct left and right actions.
    """

    # the model satisfies the scaling law with z scaled by 1/lambda
    kg_z_scaling = -1

    def __init__(self, degree: int = 6):
        if degree < 0:
            raise DomainError("degree bound must be non-negative")
        self.degree = degree
        self.dim = degree + 1

    def __repr__(self):
        return f"ModelAlgebra(degree={self.degree})"

    # basis and operators

    def basis(self, a: int, nvars: int = 1) -> Poly:
        if not 0 <= a <= self.degree:
            raise TruncationError(f"t^{a} outside degree bound {self.degree}")
        return Poly.variable(0, nvars) ** a

    def k_matrix(self):
        return [[Fraction(i if i == j else 0) for j in range(self.dim)] for i in range(self.dim)]

    def t_matrix(self):
        return [[Fraction(j if i == j - 1 else 0) for j in range(self.dim)] for i in range(self.dim)]

    def commutator_ok(self) -> bool:
        """``[K, T] = -T``."""
        k, t = self.k_matrix(), self.t_matrix()
        n = self.dim
        for i in range(n):
            for j in range(n):
                kt = sum(k[i][m] * t[m][j] for m in range(n))
                tk = sum(t[i][m] * k[m][j] for m in range(n))
                if kt - tk != -t[i][j]:
                    return False
        return True

    def apply_t(self, g: Poly) -> Poly:
        return g.derivative(0)

    # polynomial plumbing

    def truncate(self, p: Poly) -> Poly:
        return Poly(p.nvars, {e: v for e, v in p.terms() if e[0] <= self.degree})

    def translate(self, g: Poly, shift) -> Poly:
        """``g(t + shift)`` without truncation."""
        n = g.nvars
        s = Poly.variable(0, n) + _const(shift, n)
        powers = {}
        out = Poly(n)
        for e, v in g.terms():
            a = e[0]
            if a not in powers:
                powers[a] = s ** a
            rest = Poly(n, {(0,) + tuple(e[1:]): v})
            out = out + powers[a] * rest
        return out

    def project(self, p: Poly, r: int) -> Poly:
        """Coefficient of ``t^r`` as a polynomial in the other variables."""
        return Poly(p.nvars, {(0,) + tuple(e[1:]): v for e, v in p.terms() if e[0] == r})

    def insert(self, g: Poly, z, h: Poly) -> Poly:
        """``W_g(z) h``."""
        n = _nvars(g, z, h)
        return self.left_action(self.translate(_lift(g, n), _const(z, n)), _lift(h, n))

    def left_action(self, p: Poly, v: Poly) -> Poly:
        return self.truncate(p * v)

    def right_action(self, v: Poly, p: Poly) -> Poly:
        return self.truncate(v * p)

    def validate(self, check_commutation: bool = True) -> list:
        """Run the structural checks; returns a list of failure messages."""
        bad = []
        if not self.commutator_ok():
            bad.append("[K, T] != -T")
        one = Poly.constant(1, 2)
        z = Poly.variable(1, 2)
        for a in range(self.dim):
            g = self.basis(a, 2)
            if self.insert(g, 0, one) != g:
                bad.append(f"creation property fails for t^{a}")
            for c in range(self.dim):
                h = self.basis(c, 2)
                lhs = self.insert(g, z, h).derivative(1)
                rhs = self.insert(self.apply_t(g), z, h)
                if lhs != rhs:
                    bad.append(f"translation property fails for t^{a} on t^{c}")
        if check_commutation:
            bad.extend(self.commutation_failures())
        return bad

    def commutation_failures(self) -> list:
        """Basis pairs where ``W_g(z) W_h(w) != W_h(w) W_g(z)``."""
        n = 3
        z, w = Poly.variable(1, n), Poly.variable(2, n)
        out = []
        for a in range(self.dim):
            for b in range(self.dim):
                g, h = self.basis(a, n), self.basis(b, n)
                for c in range(self.dim):
                    v = self.basis(c, n)
                    if self.insert(g, z, self.insert(h, w, v)) != self.insert(h, w, self.insert(g, z, v)):
                        out.append(f"insertions of t^{a} and t^{b} do not commute on t^{c}")
                        break
        return out


def _lift(p, nvars):
    if isinstance(p, Poly):
        if p.nvars == nvars:
            return p
        if p.nvars == 1:
            return Poly(nvars, {e + (0,) * (nvars - 1): v for e, v in p.terms()})
        raise ValidationError("cannot lift polynomial to a different variable set")
    return Poly.constant(p, nvars)


# ---------------------------------------------------------------------------
# scalar cochains


@dataclass
class BetaTable:
    """Pole bounds ``beta(a, b)`` between basis degrees; symmetric lookup."""

    default: int = 0
    entries: dict = field(default_factory=dict)

    def bound(self, a: int, b: int) -> int:
        if (a, b) in self.entries:
            return self.entries[(a, b)]
        return self.entries.get((b, a), self.default)

    def to_json(self):
        return {"default": self.default,
                "entries": [[a, b, v] for (a, b), v in sorted(self.entries.items())]}

    @classmethod
    def from_json(cls, data):
        if data is None:
            return cls()
        return cls(int(data.get("default", 0)),
                   {(int(a), int(b)): int(v) for a, b, v in data.get("entries", [])})


class Cochain:
    """Scalar ``l``-point cochain on the basis of a model algebra.

    ``values`` maps a tuple of basis degrees to a rational function of
    ``z_1..z_l``; missing tuples are zero.
    """

    def __init__(self, l: int, degree: int, values=None, beta: BetaTable | None = None, k: int = 0):
        if l < 1:
            raise DomainError("a cochain has at least one point")
        self.l = l
        self.k = k
        self.degree = degree
        self.beta = beta or BetaTable()
        vals = {}
        for key, v in (values or {}).items():
            key = tuple(int(a) for a in key)
            if len(key) != l or not all(0 <= a <= degree for a in key):
                raise ValidationError(f"basis tuple {key} outside the model")
            if isinstance(v, Poly):
                v = RationalFunctionValue(v)
            if v.nvars != l:
                raise ValidationError(f"value at {key} has {v.nvars} variables, expected {l}")
            if not v.is_zero():
                vals[key] = v
        self.values = vals

    def value(self, key) -> RationalFunctionValue:
        return self.values.get(tuple(key)) or RationalFunctionValue.constant(0, self.l)

    def keys(self):
        return sorted(self.values)

    def is_zero(self):
        return not self.values

    def _like(self, values):
        return Cochain(self.l, self.degree, values, self.beta, self.k)

    def __add__(self, other: "Cochain"):
        if (other.l, other.degree) != (self.l, self.degree):
            raise ValidationError("cochains of different shapes")
        vals = dict(self.values)
        for key, v in other.values.items():
            vals[key] = vals[key] + v if key in vals else v
        return self._like(vals)

    def __neg__(self):
        return self._like({k: -v for k, v in self.values.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = as_rational(c) if not isinstance(c, Fraction) else c
        return self._like({k: v * c for k, v in self.values.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return (self.l, self.degree) == (other.l, other.degree) and self.values == other.values

    def act(self, rho) -> "Cochain":
        """``(rho F)(x_1..x_l) = F(x_rho(1), ..., x_rho(l))`` (0-based ``rho``).

        Argument slots and variables move together.
        """
        rho = tuple(rho)
        if sorted(rho) != list(range(self.l)):
            raise ValidationError(f"{rho} is not a permutation of {self.l} slots")
        vals = {}
        for key, v in self.values.items():
            # old slot j receives x_rho(j), so variable j becomes z_rho(j)
            new_key = [0] * self.l
            for j in range(self.l):
                new_key[rho[j]] = key[j]
            vals[tuple(new_key)] = v.permute(rho)
        return self._like(vals)

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "k": self.k,
            "degree": self.degree,
            "beta": self.beta.to_json(),
            "values": [dict({"tuple": list(k)}, **self.values[k].to_json()) for k in self.keys()],
        }

    @classmethod
    def from_json(cls, data) -> "Cochain":
        try:
            l, degree = int(data["l"]), int(data["degree"])
            vals = {}
            for item in data.get("values", []):
                key = tuple(int(a) for a in item["tuple"])
                v = RationalFunctionValue.from_json(l, item)
                vals[key] = vals[key] + v if key in vals else v
            return cls(l, degree, vals, BetaTable.from_json(data.get("beta")), int(data.get("k", 0)))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed cochain: {exc}") from exc


def pairing_cochain(model: ModelAlgebra, l: int, b: int) -> Cochain:
    """``F_b(t^a_1, ..., t^a_l; z) = [t^b] prod_i (t + z_i)^a_i`` (no truncation)."""
    if b < 0:
        raise DomainError("pairing degree must be non-negative")
    n = l + 1
    t = Poly.variable(0, n)
    shifted = [[(t + Poly.variable(i + 1, n)) ** a for a in range(model.dim)] for i in range(l)]
    vals = {}
    for key in product(range(model.dim), repeat=l):
        p = Poly.constant(1, n)
        for i, a in enumerate(key):
            p = p * shifted[i][a]
        coeff = {tuple(e[1:]): v for e, v in p.terms() if e[0] == b}
        if coeff:
            vals[key] = RationalFunctionValue(Poly(l, coeff))
    return Cochain(l, model.degree, vals, BetaTable(model.degree + 1))


def two_point_cochain(model: ModelAlgebra) -> Cochain:
    """``F(t^a, t^0; z_1, z_2) = (z_1 - z_2)^(-a-1)``, zero elsewhere."""
    vals = {(a, 0): RationalFunctionValue.difference_power(0, 1, a + 1, 2) for a in range(model.dim)}
    return Cochain(2, model.degree, vals, BetaTable(model.degree + 1))


@dataclass
class Report:
    ok: bool
    checked: int = 0
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {"ok": self.ok, "checked": self.checked,
                "violations": self.violations, **self.details}


def check_tg_property(F: Cochain, model: ModelAlgebra | None = None, total: Cochain | None = None) -> Report:
    """``d/dz_i F(.. g_i ..) = F(.. T g_i ..)`` on every basis tuple and slot.

    If ``total`` is given, also ``sum_i d/dz_i F = total`` (the action of T
    on the output side).
    """
    model = model or ModelAlgebra(F.degree)
    tm = model.t_matrix()
    viol = []
    checked = 0
    for key in product(range(F.degree + 1), repeat=F.l):
        v = F.value(key)
        for i in range(F.l):
            lhs = v.derivative(i)
            rhs = RationalFunctionValue.constant(0, F.l)
            a = key[i]
            for j in range(F.degree + 1):
                c = tm[j][a]
                if c:
                    rhs = rhs + F.value(key[:i] + (j,) + key[i + 1:]) * c
            checked += 1
            if lhs != rhs:
                viol.append({"tuple": list(key), "slot": i + 1})
        if total is not None:
            s = RationalFunctionValue.constant(0, F.l)
            for i in range(F.l):
                s = s + v.derivative(i)
            checked += 1
            if s != total.value(key):
                viol.append({"tuple": list(key), "slot": "total"})
    return Report(not viol, checked, viol)


def check_kg_property(F: Cochain, weight: int, z_scaling: int = 1) -> Report:
    """Each value is homogeneous with ``sum deg g_i + z_scaling * zdeg == weight``.

    ``z_scaling = 1`` is the law ``lambda^K F(x) = F(lambda^K g, lambda z)``;
    the polynomial model obeys it with ``z_scaling = -1``.
    """
    viol = []
    weights = set()
    for key in F.keys():
        v = F.values[key]
        d = v.degree()
        if d is None:
            # report the weight of every homogeneous piece
            poles = sum(v.poles.values())
            ws = sorted({sum(key) + z_scaling * (sum(e) - poles) for e, _ in v.numerator.terms()})
            weights.update(ws)
            viol.append({"tuple": list(key), "reason": "inhomogeneous", "weights": ws})
            continue
        w = sum(key) + z_scaling * d
        weights.add(w)
        if w != weight:
            viol.append({"tuple": list(key), "weight": w})
    return Report(not viol, len(F.values), viol, {"weights": sorted(weights)})


def check_pole_bounds(F: Cochain) -> Report:
    viol = []
    actual = {}
    for key in F.keys():
        for (i, j), e in F.values[key].poles.items():
            bound = F.beta.bound(key[i], key[j])
            actual[(i, j)] = max(actual.get((i, j), 0), e)
            if e > bound:
                viol.append({"tuple": list(key), "pair": [i + 1, j + 1], "order": e, "bound": bound})
    return Report(not viol, len(F.values), viol,
                  {"max_orders": [[i + 1, j + 1, e] for (i, j), e in sorted(actual.items())]})


# ---------------------------------------------------------------------------
# shuffles


def permutation_sign(p) -> int:
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def shuffles(l: int, p: int) -> list:
    """``(p, l-p)`` shuffles as 0-based tuples ``sigma`` with both blocks increasing."""
    if not 0 <= p <= l:
        raise DomainError("need 0 <= p <= l")
    out = []
    for first in combinations(range(l), p):
        rest = [i for i in range(l) if i not in first]
        out.append(tuple(first) + tuple(rest))
    return sorted(out)


def _inverse(p):
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def shuffle_sum(F: Cochain, p: int) -> Cochain:
    """``sum over sigma in J^-1 of sign(sigma) * sigma F``.

    ``J`` is the set of ``(p, l-p)`` shuffles; the inverses act through
    :meth:`Cochain.act`.
    """
    if not 1 <= p <= F.l - 1:
        raise DomainError("shuffle sums need 1 <= p <= l-1")
    out = F._like({})
    for s in shuffles(F.l, p):
        term = F.act(_inverse(s))
        out = out + (term if permutation_sign(s) > 0 else -term)
    return out


def block_swap(l: int, p: int) -> tuple:
    """Permutation moving the last ``l-p`` slots in front of the first ``p``."""
    return tuple(range(p, l)) + tuple(range(p))


# ---------------------------------------------------------------------------
# fusion


def fusion_expand(model: ModelAlgebra, g1, z1, g2, z2, zeta, cutoff: int | None = None) -> dict:
    """Projections ``P_r`` of ``W(g1, z1-zeta) W(g2, z2-zeta) 1`` with no truncation.

    Returns ``{r: coefficient}`` where coefficients are polynomials in the
    parameter variables (variable 0, ``t``, is absent).  The product has
    degree up to ``2 D``, which is why ``cutoff`` may exceed ``D``.
    """
    if cutoff is None:
        cutoff = 2 * model.degree
    if cutoff > 2 * model.degree:
        raise DomainError("fusion cutoff is at most twice the degree bound")
    if isinstance(g1, int):
        g1 = model.basis(g1, _nvars(z1, z2, zeta, g2))
    if isinstance(g2, int):
        g2 = model.basis(g2, _nvars(z1, z2, zeta, g1))
    n = _nvars(g1, g2, z1, z2, zeta)
    g1, g2 = _lift(g1, n), _lift(g2, n)
    zeta = _const(zeta, n)
    h = model.translate(g1, _const(z1, n) - zeta) * model.translate(g2, _const(z2, n) - zeta)
    top = _t_degree(h)
    if top > cutoff:
        raise TruncationError(f"fusion has degree {top} above cutoff {cutoff}")
    out = {}
    for r in range(top + 1):
        c = model.project(h, r)
        if not c.is_zero():
            out[r] = c
    return out


def reinsert(model: ModelAlgebra, parts: dict, zeta) -> Poly:
    """``sum_r W(P_r h, zeta) 1`` without truncation."""
    if not parts:
        return Poly(_nvars(zeta))
    n = next(iter(parts.values())).nvars
    t = Poly.variable(0, n)
    s = t + _const(zeta, n)
    out = Poly(n)
    for r, c in parts.items():
        out = out + c * s ** r
    return out


# ---------------------------------------------------------------------------
# element-valued cochains


class ModelCochain:
    """Multilinear ``Phi: A^l -> A`` stored as ``{(c, b_1..b_l): coefficient}``.

    The key means ``Phi(t^b_1, ..., t^b_l)`` has ``t^c`` coefficient equal to
    the stored value.
    """

    def __init__(self, model: ModelAlgebra, l: int, coeffs=None):
        if l < 0:
            raise DomainError("cochain degree must be non-negative")
        self.model = model
        self.l = l
        c = {}
        for key, v in (coeffs or {}).items():
            key = tuple(int(a) for a in key)
            if len(key) != l + 1 or not all(0 <= a <= model.degree for a in key):
                raise ValidationError(f"key {key} outside the model")
            v = as_rational(v) if not isinstance(v, Fraction) else v
            if v:
                c[key] = c.get(key, 0) + v
        self.coeffs = {k: v for k, v in c.items() if v}

    @staticmethod
    def basis_keys(model: ModelAlgebra, l: int) -> list:
        return list(product(range(model.dim), repeat=l + 1))

    def weights(self) -> set:
        """``c - sum(b)`` over the support; the coboundary preserves it."""
        return {k[0] - sum(k[1:]) for k in self.coeffs}

    def __eq__(self, other):
        if not isinstance(other, ModelCochain):
            return NotImplemented
        return self.l == other.l and self.coeffs == other.coeffs

    def phi(self, args) -> Poly:
        """``Phi`` on truncated elements (polynomials in ``t`` and parameters)."""
        if len(args) != self.l:
            raise ValidationError(f"expected {self.l} arguments")
        m = self.model
        n = _nvars(*args) if args else 1
        coeff_tables = [{r: m.project(_lift(a, n), r) for r in range(m.dim)} for a in args]
        t = Poly.variable(0, n)
        out = Poly(n)
        for key, v in self.coeffs.items():
            term = Poly.constant(v, n)
            for i, b in enumerate(key[1:]):
                term = term * coeff_tables[i][b]
                if term.is_zero():
                    break
            if not term.is_zero():
                out = out + term * t ** key[0]
        return out

    def evaluate(self, xs) -> Poly:
        """``F(x_1..x_l)`` for ``x_i = (element, z_i)``: translate, truncate, apply Phi."""
        m = self.model
        n = _nvars(*[v for x in xs for v in x]) if xs else 1
        args = [m.truncate(m.translate(_lift(g, n), _const(z, n))) for g, z in xs]
        return self.phi(args)

    def pair(self, b: int) -> Cochain:
        """Scalar cochain ``[t^b] F(t^a_1, ..., t^a_l; z)`` as polynomials in ``z``."""
        if self.l < 1:
            raise UnsupportedOperation("pairing needs at least one point")
        m = self.model
        l = self.l
        n = l + 1
        vals = {}
        zs = [Poly.variable(i + 1, n) for i in range(l)]
        for key in product(range(m.dim), repeat=l):
            xs = [(m.basis(a, n), zs[i]) for i, a in enumerate(key)]
            p = m.project(self.evaluate(xs), b)
            if not p.is_zero():
                vals[key] = RationalFunctionValue(Poly(l, {e[1:]: v for e, v in p.terms()}))
        return Cochain(l, m.degree, vals, BetaTable(m.degree + 1))


def default_zetas(l: int) -> tuple:
    return tuple(Fraction(i, l + 2) for i in range(1, l + 1))


def apply_coboundary(F: ModelCochain, xs, zetas=None) -> Poly:
    """The coboundary of ``F`` evaluated at ``l+1`` points, term by term.

    First term: left insertion of ``x_1`` on ``F(x_2..)``.  Middle terms:
    ``x_i, x_{i+1}`` fused around ``zeta_i`` and re-inserted at ``zeta_i``.
    Last term: right insertion of ``x_{l+1}`` on ``F(x_1..x_l)``.
    """
    m = F.model
    l = F.l
    if len(xs) != l + 1:
        raise ValidationError(f"coboundary of an {l}-cochain takes {l + 1} points")
    zetas = default_zetas(l) if zetas is None else tuple(zetas)
    n = _nvars(*[v for x in xs for v in x], *zetas)
    xs = [(_lift(g, n), _const(z, n)) for g, z in xs]
    g1, z1 = xs[0]
    out = m.left_action(m.translate(g1, z1), F.evaluate(xs[1:]))
    for i in range(1, l + 1):
        (ga, za), (gb, zb) = xs[i - 1], xs[i]
        zeta = _const(zetas[i - 1], n)
        parts = fusion_expand(m, ga, za, gb, zb, zeta)
        fused = sum((c * Poly.variable(0, n) ** r for r, c in parts.items()), Poly(n))
        val = F.evaluate(xs[:i - 1] + [(fused, zeta)] + xs[i + 1:])
        out = out + (val if i % 2 == 0 else -val)
    gl, zl = xs[l]
    last = m.right_action(F.evaluate(xs[:l]), m.translate(gl, zl))
    out = out + (last if (l + 1) % 2 == 0 else -last)
    return out


def shuffle_complement(F: Cochain, p: int) -> Cochain:
    """The shuffle sum for the complementary split, rebuilt from the one at ``p``.

    Returns ``(-1)^(p(l-p))`` times the ``p``-sum with its two blocks of
    slots exchanged; this equals ``shuffle_sum(F, l - p)``.
    """
    l = F.l
    s = shuffle_sum(F, p).act(_inverse(block_swap(l, p)))
    return s if (p * (l - p)) % 2 == 0 else -s
