"""Derivations of B(Gamma, J): inner parts and the named outer generators.

Every derivation handled here is a sum

    ad_u + d_mu + f1*d1 + f2*d1bar + f3*d2 + f4*dt2 + f5*dt1

with u an element, mu an additive map Gamma -> Q, and the named maps acting
on basis symbols by

    d1:    x^{b,j} -> -b1 x^{s1+b, j} - j1 x^{s1+b, j-1_[1]}     (s1 in Gamma, J2 = {0})
    d1bar: x^{b,j} -> (b2-1) x^{s1+b, j} + j2 x^{s1+b, j-1_[2]}  (s1 in Gamma, J1 = {0})
    d2:    x^{b,0} -> -b1 x^{s2+b, 0}                            (s2 in Gamma, J = {0}x{0})
    d_mu:  x^{b,j} -> mu(b) x^{b,j}
    dt2:   x^{b,j} -> j2 x^{b, j-1_[2]}                          (J2 = N)
    dt1:   x^{b,j} -> j1 x^{b, j-1_[1]}                          (J1 = N)

d1, d1bar and d2 are the restrictions to B of inner derivations of the
J = N x N extension algebra by x^{s1,1_[2]}, x^{s1,1_[1]} and x^{s2,0}; dt1
equals ad(1) - d_{pi1}.  Requesting a map outside its definedness condition
raises UndefinedInThisAlgebra unless permissive=True, which substitutes the
zero derivation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Union

from .lattice import GroupHom, Vec2
from .core import (
    NAT,
    SIGMA1,
    SIGMA2,
    ZERO,
    AlgebraError,
    AlgebraSpec,
    BasisIdx,
    Element,
    MultiIndex,
    Span,
    SpecMismatch,
    _acc,
    _quotient,
    bracket,
    monomial,
    one,
    rat,
    reduce,
    zero,
)

_F0 = Fraction(0)
_F1 = Fraction(1)


class UndefinedInThisAlgebra(AlgebraError):
    def __init__(self, name: str, reason: str):
        self.name = name
        self.reason = reason
        super().__init__(f"{name} undefined here: {reason}")


class AlphaNotInGamma(AlgebraError):
    pass


@dataclass(frozen=True)
class Derivation:
    """Formal combination of an inner part, a d_mu part and the named maps.

    f1, f2, f3, f4, f5 are the coefficients of d1, d1bar, d2, dt2, dt1;
    each may be nonzero only where the corresponding map is defined.
    """

    spec: AlgebraSpec
    inner: Element
    mu: Optional[GroupHom] = None
    f1: Fraction = _F0
    f2: Fraction = _F0
    f3: Fraction = _F0
    f4: Fraction = _F0
    f5: Fraction = _F0

    def __post_init__(self) -> None:
        s = self.spec
        if self.inner.spec != s:
            raise SpecMismatch("inner element belongs to a different algebra")
        if self.mu is not None and self.mu.lattice != s.gamma:
            raise SpecMismatch("mu is defined on a different lattice")
        if self.f1 and not (s.has_sigma1 and s.j.j2 == ZERO):
            raise UndefinedInThisAlgebra("d1", "needs sigma1 in Gamma and J2 = {0}")
        if self.f2 and not (s.has_sigma1 and s.j.j1 == ZERO):
            raise UndefinedInThisAlgebra("d1bar", "needs sigma1 in Gamma and J1 = {0}")
        if self.f3 and not (s.has_sigma2 and s.j.j1 == ZERO and s.j.j2 == ZERO):
            raise UndefinedInThisAlgebra("d2", "needs sigma2 in Gamma and J = {0}x{0}")
        if self.f4 and s.j.j2 != NAT:
            raise UndefinedInThisAlgebra("dt2", "needs J2 = N")
        if self.f5 and s.j.j1 != NAT:
            raise UndefinedInThisAlgebra("dt1", "needs J1 = N")

    def __add__(self, other: "Derivation") -> "Derivation":
        if self.spec != other.spec:
            raise SpecMismatch("derivations on different algebras")
        return Derivation(
            self.spec,
            self.inner + other.inner,
            _mu_add(self.mu, other.mu),
            self.f1 + other.f1,
            self.f2 + other.f2,
            self.f3 + other.f3,
            self.f4 + other.f4,
            self.f5 + other.f5,
        )

    def __sub__(self, other: "Derivation") -> "Derivation":
        return self + (-1) * other

    def __rmul__(self, r) -> "Derivation":
        r = rat(r)
        mu = self.mu
        if mu is not None:
            mu = GroupHom(mu.lattice, tuple(r * v for v in mu.values))
            if not any(mu.values):
                mu = None
        return Derivation(
            self.spec,
            r * self.inner,
            mu,
            r * self.f1,
            r * self.f2,
            r * self.f3,
            r * self.f4,
            r * self.f5,
        )

    __mul__ = __rmul__

    def __neg__(self) -> "Derivation":
        return (-1) * self

    def __call__(self, v: Element) -> Element:
        return apply(self, v)


def _mu_add(a: Optional[GroupHom], b: Optional[GroupHom]) -> Optional[GroupHom]:
    if a is None:
        return b
    if b is None:
        return a
    vals = tuple(x + y for x, y in zip(a.values, b.values))
    return GroupHom(a.lattice, vals) if any(vals) else None


def zero_derivation(spec: AlgebraSpec) -> Derivation:
    return Derivation(spec, zero(spec))


def ad(u: Element) -> Derivation:
    return Derivation(u.spec, u)


def make_dmu(spec: AlgebraSpec, mu: GroupHom) -> Derivation:
    return Derivation(spec, zero(spec), mu=mu)


def _make_named(spec, name, defined, reason, permissive, **coeff) -> Derivation:
    if not defined:
        if permissive:
            return zero_derivation(spec)
        raise UndefinedInThisAlgebra(name, reason)
    return Derivation(spec, zero(spec), **coeff)


def make_d1(spec: AlgebraSpec, permissive: bool = False) -> Derivation:
    return _make_named(
        spec, "d1", spec.has_sigma1 and spec.j.j2 == ZERO,
        "needs sigma1 in Gamma and J2 = {0}", permissive, f1=_F1,
    )


def make_d1bar(spec: AlgebraSpec, permissive: bool = False) -> Derivation:
    return _make_named(
        spec, "d1bar", spec.has_sigma1 and spec.j.j1 == ZERO,
        "needs sigma1 in Gamma and J1 = {0}", permissive, f2=_F1,
    )


def make_d2(spec: AlgebraSpec, permissive: bool = False) -> Derivation:
    return _make_named(
        spec, "d2",
        spec.has_sigma2 and spec.j.j1 == ZERO and spec.j.j2 == ZERO,
        "needs sigma2 in Gamma and J = {0}x{0}", permissive, f3=_F1,
    )


def make_dt2(spec: AlgebraSpec, permissive: bool = False) -> Derivation:
    return _make_named(spec, "dt2", spec.j.j2 == NAT, "needs J2 = N", permissive, f4=_F1)


def make_dt1(spec: AlgebraSpec, permissive: bool = False) -> Derivation:
    return _make_named(spec, "dt1", spec.j.j1 == NAT, "needs J1 = N", permissive, f5=_F1)


def _map_terms(spec: AlgebraSpec, v: Element, emit) -> Element:
    out: dict[BasisIdx, Fraction] = {}
    for (be, jj), c in v.terms.items():
        emit(out, be, jj, c)
    return _quotient(spec, out)


def apply(d: Derivation, v: Element) -> Element:
    """Value of the derivation on v, as a reduced element of B."""
    if d.spec != v.spec:
        raise SpecMismatch("element belongs to a different algebra")
    spec = d.spec
    acc = bracket(d.inner, v) if d.inner.terms else zero(spec)
    if d.mu is not None:
        mu = d.mu
        acc = acc + _map_terms(
            spec, v, lambda out, be, jj, c: _acc(spec, out, be, jj, c * mu(be))
        )
    if d.f1:
        f = d.f1

        def e1(out, be, jj, c):
            t = SIGMA1 + be
            _acc(spec, out, t, jj, -f * c * be.c1)
            _acc(spec, out, t, (jj[0] - 1, jj[1]), -f * c * jj[0])

        acc = acc + _map_terms(spec, v, e1)
    if d.f2:
        f = d.f2

        def e2(out, be, jj, c):
            t = SIGMA1 + be
            _acc(spec, out, t, jj, f * c * (be.c2 - 1))
            _acc(spec, out, t, (jj[0], jj[1] - 1), f * c * jj[1])

        acc = acc + _map_terms(spec, v, e2)
    if d.f3:
        f = d.f3
        acc = acc + _map_terms(
            spec, v,
            lambda out, be, jj, c: _acc(spec, out, SIGMA2 + be, jj, -f * c * be.c1),
        )
    if d.f4:
        f = d.f4
        acc = acc + _map_terms(
            spec, v,
            lambda out, be, jj, c: _acc(spec, out, be, (jj[0], jj[1] - 1), f * c * jj[1]),
        )
    if d.f5:
        f = d.f5
        acc = acc + _map_terms(
            spec, v,
            lambda out, be, jj, c: _acc(spec, out, be, (jj[0] - 1, jj[1]), f * c * jj[0]),
        )
    return acc


Operator = Union[Derivation, Callable[[Element], Element]]


def _as_callable(d: Operator) -> Callable[[Element], Element]:
    if isinstance(d, Derivation):
        return lambda w: apply(d, w)
    return d


@dataclass
class LawReport:
    checked: int
    failures: list  # list of (u, v) pairs violating the Leibniz law

    @property
    def ok(self) -> bool:
        return not self.failures


def check_derivation_law(d: Operator, pairs: Iterable[tuple[Element, Element]]) -> LawReport:
    """Check D[u,v] = [Du,v] + [u,Dv] exactly on each pair."""
    f = _as_callable(d)
    checked = 0
    failures = []
    for u, v in pairs:
        checked += 1
        lhs = f(bracket(u, v))
        rhs = bracket(f(u), v) + bracket(u, f(v))
        if lhs != rhs:
            failures.append((u, v))
    return LawReport(checked, failures)


def is_homogeneous(d: Derivation, alpha: Vec2, window: Sequence[BasisIdx]) -> bool:
    """True iff D maps each window basis element into degree alpha + beta."""
    for be, jj in window:
        x = reduce(d.spec, monomial(d.spec, be, jj))
        if x.is_zero():
            continue
        target = alpha + be
        if any(k[0] != target for k in apply(d, x).terms):
            return False
    return True


def nilpotence_degree(d: Derivation, v: Element, cap: int) -> Optional[int]:
    """Least k <= cap with D^k(v) = 0, or None when the cap is exceeded.

    D^1(0) = 0, so nilpotence_degree(D, zero, cap) == 1 for any D.
    """
    w = v
    for k in range(1, cap + 1):
        w = apply(d, w)
        if w.is_zero():
            return k
    return None


@dataclass(frozen=True)
class TraceStep:
    step: int
    dim: int
    terms: int
    max_level: int


@dataclass(frozen=True)
class ClosureDim:
    dim: int


@dataclass(frozen=True)
class GrowthWitness:
    steps: int
    trace: tuple[TraceStep, ...]


def local_finiteness_probe(
    d: Derivation, v: Element, cap: int
) -> Union[ClosureDim, GrowthWitness]:
    """One-sided probe of local finiteness of D at v.

    Iterates v, D(v), D^2(v), ...  Once an iterate is linearly dependent on
    the earlier ones the cyclic span is D-invariant and finite-dimensional:
    ClosureDim(dim).  If cap+1 iterates stay independent the span escalated
    strictly at every step; that certificate (with a per-step trace) is
    returned as GrowthWitness.  Inner ad(x^{beta,i}) with beta_1 != 0 always
    ends this way: the k-th iterate of x^{2beta,0} has leading term
    k!*beta_1^k at degree (k+2)beta, index k*i.
    """
    span = Span()
    trace: list[TraceStep] = []
    w = v
    for k in range(cap + 1):
        if not span.add(w):
            return ClosureDim(span.dim)
        lvl = max((jj[0] + jj[1] for _, jj in w.terms), default=0)
        trace.append(TraceStep(k, span.dim, len(w.terms), lvl))
        w = apply(d, w)
    return GrowthWitness(cap + 1, tuple(trace))


def hom_star_basis(spec: AlgebraSpec) -> list[GroupHom]:
    """Basis of the canonical complement Hom* inside Hom(Gamma, Q).

    When pi1(Gamma) != {0} and J1 = {0}, ad(1) acts as d_{pi1}, so the inner
    part already covers the pi1 line; Hom* is then {mu : mu(b1) = 0} for the
    echelon pivot b1.  Otherwise Hom* is all of Hom.
    """
    lat = spec.gamma
    duals = []
    for i in range(lat.rank):
        vals = tuple(_F1 if k == i else _F0 for k in range(lat.rank))
        duals.append(GroupHom(lat, vals))
    if spec.j.j1 == ZERO and lat.proj_generator(1) != 0:
        return duals[1:]
    return duals


def der_component_generators(
    spec: AlgebraSpec, alpha: Vec2, window: Sequence[BasisIdx]
) -> list[Derivation]:
    """Generating family of the degree-alpha derivations seen in the window:
    ads of degree-alpha basis elements, plus the outer generators attached to
    degree 0 (Hom* and dt2), sigma1 (d1, d1bar) and sigma2 (d2)."""
    if not spec.gamma.contains(alpha):
        raise AlphaNotInGamma(f"{alpha} not in {spec.gamma}")
    gens: list[Derivation] = []
    for be, jj in window:
        if be != alpha:
            continue
        x = reduce(spec, monomial(spec, be, jj))
        if not x.is_zero():
            gens.append(ad(x))
    if alpha.is_zero():
        for mu in hom_star_basis(spec):
            gens.append(make_dmu(spec, mu))
        if spec.j.j2 == NAT:
            gens.append(make_dt2(spec))
    if alpha == SIGMA1:
        if spec.has_sigma1 and spec.j.j2 == ZERO:
            gens.append(make_d1(spec))
        if spec.has_sigma1 and spec.j.j1 == ZERO:
            gens.append(make_d1bar(spec))
    if alpha == SIGMA2 and spec.has_sigma2 and spec.j.j1 == ZERO and spec.j.j2 == ZERO:
        gens.append(make_d2(spec))
    return gens


def pi_hom(spec: AlgebraSpec, p: int) -> GroupHom:
    """The coordinate projection pi_p as a hom on Gamma."""
    lat = spec.gamma
    return GroupHom(
        lat, tuple((b.c1 if p == 1 else b.c2) for b in lat.basis)
    )
