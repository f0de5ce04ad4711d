"""Graded manifolds, the odd tangent functor and the End(R^{0|1}) action.

A :class:`GradedManifold` is a single global chart: a list of graded
coordinates. ``pit`` adjoins a differential ``dx`` for every coordinate and
records the pair in ``lifts`` so the de Rham differential and the Euler field
of each tangent level can be rebuilt later.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from typing import Mapping, Optional, Tuple

from superjets.errors import AlgebraMismatchError, GradingError, PreconditionError, Verdict
from superjets.superalg import (
    EVEN,
    ODD,
    Algebra,
    AlgebraMap,
    Derivation,
    Element,
    GenSpec,
    derivation_commutator,
    kernel_combinations,
    to_scalar,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Lift:
    base: str
    diff: str
    level: int


@dataclass(frozen=True)
class GradedManifold:
    coordinates: Tuple[GenSpec, ...]
    lifts: Tuple[Lift, ...] = ()
    algebra: Algebra = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coordinates", tuple(self.coordinates))
        object.__setattr__(self, "lifts", tuple(self.lifts))
        object.__setattr__(self, "algebra", Algebra(self.coordinates))

    @property
    def names(self):
        return self.algebra.names

    @property
    def tangent_level(self):
        return max((lift.level for lift in self.lifts), default=0)

    def gen(self, name):
        return self.algebra.gen(name)

    def lifts_at(self, level):
        return [lift for lift in self.lifts if lift.level == level]

    def is_non_negative(self):
        return all(spec.degree >= 0 for spec in self.coordinates)


def manifold(*coordinates):
    return GradedManifold(tuple(coordinates))


def is_dg_manifold(X):
    return X.algebra.parity_matches_degree()


def _prefix(level):
    return "d" if level == 1 else f"d{level}"


def pit(X, level=None):
    """Odd tangent bundle: every coordinate ``x`` gains ``dx`` of degree +1, opposite parity."""
    level = X.tangent_level + 1 if level is None else level
    prefix = _prefix(level)
    diffs = []
    lifts = list(X.lifts)
    for spec in X.coordinates:
        diff = GenSpec(prefix + spec.name, spec.degree + 1, 1 - spec.parity)
        diffs.append(diff)
        lifts.append(Lift(spec.name, diff.name, level))
    logger.debug("pit level %d adds %d coordinates", level, len(diffs))
    return GradedManifold(X.coordinates + tuple(diffs), tuple(lifts))


def pit_power(X, k):
    for _ in range(k):
        X = pit(X)
    return X


def de_rham(X, level=None):
    """The differential ``x -> dx`` of one tangent level, zero on everything else."""
    level = X.tangent_level if level is None else level
    lifts = X.lifts_at(level)
    if not lifts:
        raise PreconditionError(f"manifold has no tangent level {level}")
    values = {lift.base: X.gen(lift.diff) for lift in lifts}
    return Derivation(X.algebra, 1, ODD, values)


def euler(X, level=None):
    """Degree field of one tangent level: counts the ``d`` of that level."""
    level = X.tangent_level if level is None else level
    lifts = X.lifts_at(level)
    if not lifts:
        raise PreconditionError(f"manifold has no tangent level {level}")
    values = {lift.diff: X.gen(lift.diff) for lift in lifts}
    return Derivation(X.algebra, 0, EVEN, values)


@dataclass(frozen=True)
class QStructure:
    manifold: GradedManifold
    Q: Derivation

    def __post_init__(self):
        if self.Q.algebra != self.manifold.algebra:
            raise AlgebraMismatchError("Q is not a vector field on this manifold")
        if self.Q.degree != 1 or self.Q.parity != ODD:
            raise GradingError(
                f"a Q-structure needs an odd degree 1 field, got degree {self.Q.degree} parity {self.Q.parity}"
            )

    @property
    def algebra(self):
        return self.manifold.algebra

    def __call__(self, a):
        return self.Q(a)


def check_q(Q):
    """Verify ``Q(Q(x)) = 0`` on every coordinate, reporting grading problems separately."""
    if isinstance(Q, QStructure):
        Q = Q.Q
    grading = []
    if Q.degree != 1:
        grading.append(f"Q has degree {Q.degree}, expected 1")
    if Q.parity != ODD:
        grading.append("Q is even, expected odd")
    grading.extend(Q.consistency_errors())
    for spec in Q.algebra.gens:
        value = Q(Q.value(spec.name))
        if not value.is_zero():
            witness = {"coordinate": spec.name, "value": str(value)}
            if grading:
                witness["grading"] = grading
                return Verdict.failed(
                    "grading", f"{'; '.join(grading)}; Q^2({spec.name}) = {value}", witness
                )
            return Verdict.failed("q_squared", f"Q^2({spec.name}) = {value}", witness)
    if grading:
        return Verdict.failed("grading", "; ".join(grading), {"grading": grading})
    return Verdict.passed("Q^2 = 0")


@dataclass(frozen=True)
class CoordinateMap:
    """Polynomial map ``source -> target`` given by pulled-back target coordinates."""

    source: GradedManifold
    target: GradedManifold
    images: Mapping[str, Element]

    def __post_init__(self):
        pullback = self.pullback()
        for spec in self.target.coordinates:
            pullback(self.target.gen(spec.name))

    def pullback(self):
        return AlgebraMap(self.target.algebra, self.source.algebra, dict(self.images))

    def __call__(self, f):
        return self.pullback()(f)

    def then(self, after):
        """The composite ``after ∘ self``."""
        if after.source != self.target:
            raise AlgebraMismatchError("maps are not composable")
        images = {name: self(after.image(name)) for name in after.target.names}
        return CoordinateMap(self.source, after.target, images)

    def image(self, name):
        return self(self.target.gen(name))

    def same_as(self, other):
        return (
            self.source == other.source
            and self.target == other.target
            and all((self.image(n) - other.image(n)).is_zero() for n in self.target.names)
        )


def identity_coordinate_map(X):
    return CoordinateMap(X, X, {name: X.gen(name) for name in X.names})


def pit_map(phi):
    """Lift ``phi: X -> Y`` to ``ΠTX -> ΠTY``: ``dy`` pulls back to ``d(phi*(y))``."""
    source = pit(phi.source)
    target = pit(phi.target)
    d = de_rham(source)
    images = {}
    for lift in target.lifts_at(target.tangent_level):
        pulled = phi.image(lift.base).embed(source.algebra)
        images[lift.base] = pulled
        images[lift.diff] = d(pulled)
    return CoordinateMap(source, target, images)


@dataclass(frozen=True)
class SemigroupElement:
    """The endomorphism ``θ -> aθ + β`` of R^{0|1}; ``beta`` lives in a parameter algebra."""

    a: object
    beta: Optional[Element] = None

    def beta_in(self, algebra):
        if self.beta is None:
            return algebra.zero()
        return self.beta.embed(algebra)


def parameter_algebra(count, prefix="beta"):
    """Odd degree-0 parameters standing for points of R^{0|count}."""
    return Algebra(tuple(GenSpec(f"{prefix}{i}", 0, ODD) for i in range(1, count + 1)))


def compose_semigroup(first, second, parameters):
    """``first ∘ second`` as maps of R^{0|1}: ``(a1 a2, β1 + a1 β2)``."""
    beta = first.beta_in(parameters) + second.beta_in(parameters).scale(first.a)
    return SemigroupElement(to_scalar(first.a) * to_scalar(second.a), beta)


def semigroup_act(g, X, parameters=None, level=None):
    """Algebra endomorphism of functions on ``X`` induced by ``g`` on one tangent level.

    The target algebra is ``X``'s algebra extended by the parameter
    generators; the substitution preserves parity but not degree.
    """
    level = X.tangent_level if level is None else level
    lifts = X.lifts_at(level)
    if not lifts:
        raise PreconditionError(f"manifold has no tangent level {level}")
    parameters = parameters or (g.beta.algebra if g.beta is not None else Algebra(()))
    target = X.algebra.extended(*parameters.gens)
    beta = g.beta_in(target)
    images = {}
    for lift in lifts:
        dx = target.gen(lift.diff)
        images[lift.base] = target.gen(lift.base) + dx * beta
        images[lift.diff] = dx.scale(g.a)
    return AlgebraMap(X.algebra, target, images, graded=False)


def infinitesimal_generators(X, level=None):
    """Recover ``(d, E)`` from the action: the β-part of ``(1, β)`` and the a-part at ``a = 1``."""
    parameters = parameter_algebra(1)
    beta = parameters.gen("beta1")
    shift = semigroup_act(SemigroupElement(1, beta), X, parameters, level)
    scale = semigroup_act(SemigroupElement(2), X, parameters, level)
    d_values, e_values = {}, {}
    for name in X.names:
        _, linear = shift(X.gen(name)).split("beta1")
        d_values[name] = linear.embed(X.algebra)
        e_values[name] = (scale(X.gen(name)) - X.gen(name).embed(scale.target)).embed(X.algebra)
    return (
        Derivation(X.algebra, 1, ODD, d_values),
        Derivation(X.algebra, 0, EVEN, e_values),
    )


def check_de_rham_semigroup(X, level=None):
    """The action reproduces d and E, with ``[E, d] = d`` and ``d^2 = 0``."""
    d, E = infinitesimal_generators(X, level)
    if d != de_rham(X, level):
        return Verdict.failed("de_rham", "beta-part of the action is not the de Rham differential")
    if E != euler(X, level):
        return Verdict.failed("euler", "a-part of the action is not the Euler field")
    if derivation_commutator(E, d) != d:
        return Verdict.failed("commutator", "[E, d] differs from d")
    verdict = check_q(d)
    if not verdict.ok:
        return verdict
    return Verdict.passed("action generates d and E")


def taylor_point(X, path, theta):
    """Taylor coefficients of a map R^{0|1} -> X: ``x(θ) = x0 + ξθ`` gives ``{x: x0, dx: ξ}``.

    ``path`` maps the coordinates of ``X`` to elements of an algebra that
    contains the odd generator ``theta``; the coefficients are returned in
    that algebra with ``theta`` removed.
    """
    point = {}
    for spec in X.coordinates:
        constant, linear = path[spec.name].split(theta)
        point[spec.name] = constant
        point[_prefix(1) + spec.name] = linear
    return point


def taylor_map(X, point, theta):
    """Inverse of :func:`taylor_point`: assemble ``x0 + ξθ`` for every coordinate."""
    path = {}
    for spec in X.coordinates:
        constant = point[spec.name]
        linear = point[_prefix(1) + spec.name]
        t = constant.algebra.gen(theta)
        path[spec.name] = constant + linear * t
    return path


def odd_fiber(n):
    """R^{0|n}: odd coordinates of degree 0."""
    return manifold(*(GenSpec(f"theta{i}", 0, ODD) for i in range(1, n + 1)))


def forms_on_odd_fiber(n):
    return pit(odd_fiber(n))


def form_weight(forms, element_mono):
    """Torus weight of a monomial of forms on R^{0|n}: θ_i and dθ_i both count for slot i."""
    n = len(forms.lifts) or 1
    weight = [0] * n
    for index, exponent in element_mono:
        weight[index % n] += exponent
    return tuple(weight)


def form_basis(n, k):
    """Monomial basis of k-forms on R^{0|n}, of size ``2^n C(n+k-1, k)``."""
    forms = forms_on_odd_fiber(n)
    alg = forms.algebra
    thetas = [alg.gen(f"theta{i}") for i in range(1, n + 1)]
    dthetas = [alg.gen(f"dtheta{i}") for i in range(1, n + 1)]
    basis = []
    for size in range(n + 1):
        for subset in combinations(range(n), size):
            odd_part = alg.one()
            for i in subset:
                odd_part = odd_part * thetas[i]
            for multiset in combinations_with_replacement(range(n), k):
                even_part = alg.one()
                for i in multiset:
                    even_part = even_part * dthetas[i]
                basis.append(odd_part * even_part)
    return forms, basis


def closed_form_basis(n, k):
    """Basis of closed k-forms on R^{0|n}, computed weight space by weight space."""
    forms, basis = form_basis(n, k)
    if not forms.lifts:
        return forms, list(basis)
    d = de_rham(forms)
    by_weight = {}
    for element in basis:
        (mono,) = element.terms
        by_weight.setdefault(form_weight(forms, mono), []).append(element)
    closed = []
    for weight in sorted(by_weight):
        domain = by_weight[weight]
        closed.extend(kernel_combinations(domain, [d(e) for e in domain]))
    logger.debug("Z^%d(R^{0|%d}) has dimension %d", k, n, len(closed))
    return forms, closed
