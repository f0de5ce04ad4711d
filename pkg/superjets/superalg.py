"""Free graded supercommutative polynomial algebras over the rationals.

An :class:`Algebra` is an ordered list of generators, each carrying an integer
degree and an independent parity. Elements are sparse maps from canonical
monomials to :class:`fractions.Fraction` coefficients. A monomial is a tuple of
``(generator index, exponent)`` pairs sorted by generator index; odd generators
never appear with exponent above one. Commutation signs are decided by parity
only, never by degree.
"""

import logging
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping, Tuple

import sympy

from superjets.errors import AlgebraMismatchError, GradingError, PreconditionError, SchemaError

logger = logging.getLogger(__name__)

EVEN = 0
ODD = 1

Monomial = Tuple[Tuple[int, int], ...]


def to_scalar(value):
    """Coerce ints, strings like ``"-3/4"``, Fractions and sympy rationals."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    raise TypeError(f"cannot use {value!r} as an exact scalar")


def format_scalar(value):
    value = to_scalar(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class GenSpec:
    name: str
    degree: int
    parity: int

    def __post_init__(self):
        if self.parity not in (EVEN, ODD):
            raise GradingError(f"parity of {self.name} must be 0 or 1, got {self.parity}")
        if not self.name or not self.name.replace("_", "a").isalnum():
            raise SchemaError("name", f"invalid generator name {self.name!r}")


def even(name, degree=0):
    return GenSpec(name, degree, EVEN)


def odd(name, degree=1):
    return GenSpec(name, degree, ODD)


@dataclass(frozen=True)
class Algebra:
    """Free graded supercommutative algebra on ``gens`` in declaration order."""

    gens: Tuple[GenSpec, ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(self.gens))
        index = {}
        for position, spec in enumerate(self.gens):
            if spec.name in index:
                raise SchemaError("generators", f"duplicate generator {spec.name!r}")
            index[spec.name] = position
        object.__setattr__(self, "_index", index)

    @property
    def names(self):
        return tuple(spec.name for spec in self.gens)

    def __contains__(self, name):
        return name in self._index

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise AlgebraMismatchError(f"{name!r} is not a generator of this algebra") from None

    def spec(self, name):
        return self.gens[self.index(name)]

    def gen(self, name):
        return Element(self, {((self.index(name), 1),): Fraction(1)})

    def one(self):
        return Element(self, {(): Fraction(1)})

    def zero(self):
        return Element(self, {})

    def scalar(self, value):
        return Element(self, {(): to_scalar(value)})

    def monomial(self, mono, coefficient=1):
        return Element(self, {tuple(mono): to_scalar(coefficient)})

    def extended(self, *specs):
        return Algebra(self.gens + tuple(specs))

    def restricted(self, names):
        keep = set(names)
        return Algebra(tuple(spec for spec in self.gens if spec.name in keep))

    def parity_matches_degree(self):
        return all(spec.parity == spec.degree % 2 for spec in self.gens)

    def parse(self, text):
        return parse_polynomial(self, text)


def monomial_parity(algebra, mono):
    return sum(algebra.gens[i].parity * e for i, e in mono) % 2


def monomial_degree(algebra, mono):
    return sum(algebra.gens[i].degree * e for i, e in mono)


def _multiply_monomials(algebra, left, right):
    """Return ``(sign, monomial)`` for ``left * right`` or ``None`` when it vanishes."""
    if not left:
        return 1, right
    if not right:
        return 1, left
    gens = algebra.gens
    left_odd = [i for i, _ in left if gens[i].parity]
    swaps = 0
    if left_odd:
        for i, _ in right:
            if gens[i].parity:
                swaps += len(left_odd) - bisect_right(left_odd, i)
    merged = dict(left)
    for i, e in right:
        if i in merged:
            if gens[i].parity:
                return None
            merged[i] += e
        else:
            merged[i] = e
    return (-1 if swaps % 2 else 1), tuple(sorted(merged.items()))


class Element:
    """Exact linear combination of canonical monomials. Treated as immutable."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms=None):
        self.algebra = algebra
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    # -- construction helpers -------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Element):
            if other.algebra != self.algebra:
                raise AlgebraMismatchError("elements belong to different algebras")
            return other
        return self.algebra.scalar(other)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return Element(self.algebra, terms)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, value):
        value = to_scalar(value)
        return Element(self.algebra, {m: c * value for m, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Element):
            return self.scale(other)
        other = self._coerce(other)
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                product = _multiply_monomials(self.algebra, m1, m2)
                if product is None:
                    continue
                sign, m = product
                terms[m] = terms.get(m, 0) + sign * c1 * c2
        return Element(self.algebra, terms)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, exponent):
        if exponent < 0:
            raise PreconditionError(f"negative power {exponent} of a polynomial", {"element": str(self)})
        result = self.algebra.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __truediv__(self, value):
        return self.scale(1 / to_scalar(value))

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.algebra == other.algebra and self.terms == other.terms
        try:
            return self.terms == self.algebra.scalar(other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    # -- inspection -----------------------------------------------------------

    def coefficient(self, mono):
        return self.terms.get(tuple(mono), Fraction(0))

    def constant_term(self):
        return self.terms.get((), Fraction(0))

    def gradings(self):
        """Set of ``(degree, parity)`` pairs over the terms."""
        return {
            (monomial_degree(self.algebra, m), monomial_parity(self.algebra, m))
            for m in self.terms
        }

    def grading(self):
        """``(degree, parity)`` of a homogeneous element, ``None`` for zero."""
        gradings = self.gradings()
        if not gradings:
            return None
        if len(gradings) > 1:
            raise GradingError(f"element {self} is not homogeneous")
        return next(iter(gradings))

    def parity(self):
        parities = {p for _, p in self.gradings()}
        if len(parities) > 1:
            raise GradingError(f"element {self} has mixed parity")
        return parities.pop() if parities else EVEN

    def components_by_degree(self):
        parts = {}
        for m, c in self.terms.items():
            parts.setdefault(monomial_degree(self.algebra, m), {})[m] = c
        return {d: Element(self.algebra, t) for d, t in parts.items()}

    def components_by_length(self):
        """Split by polynomial degree (total exponent) of the monomials."""
        parts = {}
        for m, c in self.terms.items():
            parts.setdefault(sum(e for _, e in m), {})[m] = c
        return {k: Element(self.algebra, t) for k, t in parts.items()}

    def generators_used(self):
        return {self.algebra.gens[i].name for m in self.terms for i, _ in m}

    def split(self, name):
        """Write ``self = a0 + a1 * g`` with ``g`` moved to the right end.

        ``a0`` is free of ``g``. For an odd ``g`` the pair is unique; for an
        even ``g`` one power is divided out of every term containing it.
        """
        g = self.algebra.index(name)
        gens = self.algebra.gens
        free, linear = {}, {}
        for m, c in self.terms.items():
            exponents = dict(m)
            if g not in exponents:
                free[m] = c
                continue
            sign = 1
            if gens[g].parity:
                after = sum(gens[i].parity * e for i, e in m if i > g)
                sign = -1 if after % 2 else 1
            if exponents[g] == 1:
                del exponents[g]
            else:
                exponents[g] -= 1
            rest = tuple(sorted(exponents.items()))
            linear[rest] = linear.get(rest, 0) + sign * c
        return Element(self.algebra, free), Element(self.algebra, linear)

    def embed(self, target):
        """Same element inside an algebra containing all of its generators."""
        if target == self.algebra:
            return self
        mapping = {}
        for i, spec in enumerate(self.algebra.gens):
            if spec.name in target and target.spec(spec.name) == spec:
                mapping[i] = target.index(spec.name)
        result = target.zero()
        for m, c in self.terms.items():
            if any(i not in mapping for i, _ in m):
                raise AlgebraMismatchError(f"target algebra lacks generators of {self}")
            # multiplying in the target order picks up the reordering sign
            element = target.scalar(c)
            for i, e in m:
                element = element * target.monomial(((mapping[i], e),))
            result = result + element
        return result

    # -- printing -------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: (sum(e for _, e in item[0]), item[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for m, c in self.sorted_terms():
            factors = []
            for i, e in m:
                name = self.algebra.gens[i].name
                factors.append(name if e == 1 else f"{name}**{e}")
            magnitude = abs(c)
            if factors and magnitude == 1:
                body = "*".join(factors)
            elif factors:
                body = format_scalar(magnitude) + "*" + "*".join(factors)
            else:
                body = format_scalar(magnitude)
            pieces.append(("-" if c < 0 else "+", body))
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Element({self})"


def elements_equal(a, b):
    return (a - b).is_zero()


def parse_polynomial(algebra, text):
    """Parse a polynomial in the algebra's even generators from a string.

    Only even generators may appear: sympy treats every symbol as commuting.
    """
    symbols = {spec.name: sympy.Symbol(spec.name) for spec in algebra.gens}
    try:
        expr = sympy.sympify(str(text), locals=symbols)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise SchemaError("polynomial", f"cannot parse {text!r}: {exc}") from None
    used = {s.name for s in expr.free_symbols}
    unknown = used - set(symbols)
    if unknown:
        raise SchemaError("polynomial", f"unknown variables {sorted(unknown)} in {text!r}")
    odd_used = [name for name in used if algebra.spec(name).parity]
    if odd_used:
        raise SchemaError("polynomial", f"odd generators {sorted(odd_used)} cannot be parsed")
    gens = [symbols[spec.name] for spec in algebra.gens if spec.name in used]
    if not gens:
        value = sympy.nsimplify(expr)
        if not value.is_Rational:
            raise SchemaError("polynomial", f"{text!r} is not a rational constant")
        return algebra.scalar(value)
    poly = sympy.Poly(sympy.expand(expr), *gens)
    if poly.get_domain() not in (sympy.ZZ, sympy.QQ):
        raise SchemaError("polynomial", f"{text!r} must have rational coefficients")
    terms = {}
    for exponents, coeff in poly.terms():
        mono = tuple(sorted(
            (algebra.index(g.name), e) for g, e in zip(gens, exponents) if e
        ))
        terms[mono] = to_scalar(sympy.Rational(coeff))
    return Element(algebra, terms)


def mul(a, b):
    """Supercommutative product; both factors must share an algebra."""
    if a.algebra != b.algebra:
        raise AlgebraMismatchError("mul: elements belong to different algebras")
    return a * b


class Derivation:
    """Graded derivation given by its values on generators.

    ``values`` maps generator names to elements; missing generators map to 0.
    With ``strict`` the value on each generator must be homogeneous of degree
    ``deg(x) + degree`` and parity ``p(x) + parity``.
    """

    def __init__(self, algebra, degree, parity, values, strict=True):
        self.algebra = algebra
        self.degree = degree
        self.parity = parity % 2
        self._values = {}
        for name, value in values.items():
            index = algebra.index(name)
            if not isinstance(value, Element):
                value = algebra.scalar(value)
            if value.algebra != algebra:
                raise AlgebraMismatchError(f"value on {name} lives in another algebra")
            if not value.is_zero():
                self._values[index] = value
        if strict:
            problems = self.consistency_errors()
            if problems:
                raise GradingError("; ".join(problems))

    def consistency_errors(self):
        problems = []
        for index, value in sorted(self._values.items()):
            spec = self.algebra.gens[index]
            expected = (spec.degree + self.degree, (spec.parity + self.parity) % 2)
            for grading in sorted(value.gradings()):
                if grading[0] != expected[0]:
                    problems.append(
                        f"degree of D({spec.name}) is {grading[0]}, expected {expected[0]}"
                    )
                if grading[1] != expected[1]:
                    problems.append(
                        f"parity of D({spec.name}) is {grading[1]}, expected {expected[1]}"
                    )
        return problems

    def value(self, name):
        return self._values.get(self.algebra.index(name), self.algebra.zero())

    @property
    def values(self):
        return {self.algebra.gens[i].name: v for i, v in sorted(self._values.items())}

    def apply(self, a):
        if a.algebra != self.algebra:
            raise AlgebraMismatchError("derivation and element belong to different algebras")
        result = {}
        alg = self.algebra
        for mono, coeff in a.terms.items():
            for position, (index, exponent) in enumerate(mono):
                image = self._values.get(index)
                if image is None:
                    continue
                prefix = mono[:position]
                sign = -1 if self.parity and monomial_parity(alg, prefix) else 1
                left = prefix + (((index, exponent - 1),) if exponent > 1 else ())
                term = alg.monomial(left) * image * alg.monomial(mono[position + 1:])
                factor = coeff * exponent * sign
                for m, c in term.terms.items():
                    result[m] = result.get(m, 0) + factor * c
        return Element(alg, result)

    __call__ = apply

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return (
            self.algebra == other.algebra
            and self.degree == other.degree
            and self.parity == other.parity
            and self._values == other._values
        )

    def __add__(self, other):
        if (self.algebra, self.degree, self.parity) != (other.algebra, other.degree, other.parity):
            raise GradingError("only derivations of equal degree and parity can be added")
        values = {spec.name: self.value(spec.name) + other.value(spec.name) for spec in self.algebra.gens}
        return Derivation(self.algebra, self.degree, self.parity, values, strict=False)

    def scale(self, value):
        values = {name: v.scale(value) for name, v in self.values.items()}
        return Derivation(self.algebra, self.degree, self.parity, values, strict=False)

    def is_zero(self):
        return not self._values

    def square_on_generators(self):
        return {spec.name: self(self.value(spec.name)) for spec in self.algebra.gens}

    def __repr__(self):
        body = ", ".join(f"{k} -> {v}" for k, v in self.values.items())
        return f"Derivation(deg={self.degree}, parity={self.parity}, {{{body}}})"


def derivation_apply(derivation, a):
    return derivation.apply(a)


def derivation_commutator(first, second):
    """Graded commutator ``[D1, D2] = D1 D2 - (-1)^{p1 p2} D2 D1``."""
    if first.algebra != second.algebra:
        raise AlgebraMismatchError("commutator of derivations on different algebras")
    sign = -1 if first.parity and second.parity else 1
    values = {}
    for spec in first.algebra.gens:
        x = first.algebra.gen(spec.name)
        values[spec.name] = first(second(x)) - second(first(x)).scale(sign)
    return Derivation(
        first.algebra, first.degree + second.degree, first.parity + second.parity,
        values, strict=False,
    )


def partial(algebra, name):
    """Left graded partial derivative with respect to a generator."""
    spec = algebra.spec(name)
    return Derivation(algebra, -spec.degree, spec.parity, {name: algebra.one()})


def _check_image(spec, image, graded):
    grading = image.gradings()
    for degree, parity in grading:
        if parity != spec.parity:
            raise GradingError(f"image of {spec.name} has parity {parity}, expected {spec.parity}")
        if graded and degree != spec.degree:
            raise GradingError(f"image of {spec.name} has degree {degree}, expected {spec.degree}")


def substitute(images, a, target=None, graded=True):
    """Apply the algebra morphism determined by generator images to ``a``.

    Generators without an image go to the equally named generator of
    ``target``. With ``graded=False`` only parity is required to be preserved,
    as for functor-of-points substitutions with degree-0 odd parameters.
    """
    source = a.algebra
    if target is None:
        targets = {value.algebra for value in images.values() if isinstance(value, Element)}
        if len(targets) > 1:
            raise AlgebraMismatchError("substitution images live in different algebras")
        target = targets.pop() if targets else source
    resolved = {}
    for index, spec in enumerate(source.gens):
        if spec.name in images:
            image = images[spec.name]
            if not isinstance(image, Element):
                image = target.scalar(image)
            if image.algebra != target:
                raise AlgebraMismatchError(f"image of {spec.name} lives in another algebra")
        elif spec.name in target:
            if target.spec(spec.name) != spec:
                raise GradingError(f"generator {spec.name} changes grading in the target")
            image = target.gen(spec.name)
        else:
            continue
        _check_image(spec, image, graded)
        resolved[index] = image
    result = target.zero()
    powers = {}
    for mono, coeff in a.terms.items():
        term = target.scalar(coeff)
        for index, exponent in mono:
            if index not in resolved:
                raise AlgebraMismatchError(
                    f"no image for generator {source.gens[index].name}"
                )
            key = (index, exponent)
            if key not in powers:
                powers[key] = resolved[index] ** exponent
            term = term * powers[key]
        result = result + term
    return result


@dataclass(frozen=True)
class AlgebraMap:
    """Algebra morphism ``source -> target`` given on generators."""

    source: Algebra
    target: Algebra
    images: Mapping[str, Element]
    graded: bool = True

    def __call__(self, a):
        if a.algebra != self.source:
            a = a.embed(self.source)
        return substitute(self.images, a, self.target, self.graded)

    def image(self, name):
        return self(self.source.gen(name))

    def compose(self, inner):
        """``self ∘ inner``: first ``inner`` then ``self``."""
        if inner.target != self.source:
            raise AlgebraMismatchError("maps are not composable")
        images = {spec.name: self(inner.image(spec.name)) for spec in inner.source.gens}
        return AlgebraMap(inner.source, self.target, images, self.graded and inner.graded)

    def same_as(self, other):
        return self.source == other.source and all(
            elements_equal(self.image(spec.name), other.image(spec.name)) for spec in self.source.gens
        )


def identity_map(algebra, graded=True):
    return AlgebraMap(algebra, algebra, {spec.name: algebra.gen(spec.name) for spec in algebra.gens}, graded)


def jacobi_violations(derivations):
    """Generators where the graded Jacobi identity fails for a derivation triple."""
    a, b, c = derivations

    def sign(x, y):
        return -1 if x.parity and y.parity else 1

    lhs = derivation_commutator(a, derivation_commutator(b, c))
    rhs1 = derivation_commutator(derivation_commutator(a, b), c)
    rhs2 = derivation_commutator(b, derivation_commutator(a, c)).scale(sign(a, b))
    failures = []
    for spec in a.algebra.gens:
        diff = lhs.value(spec.name) - rhs1.value(spec.name) - rhs2.value(spec.name)
        if not diff.is_zero():
            failures.append(spec.name)
    return failures


def coefficient_matrix(elements, keys=None):
    """Columns are the coefficient vectors of ``elements`` over ``keys``.

    Returns ``(matrix, keys)``; ``keys`` defaults to every monomial that
    occurs, in canonical order.
    """
    if keys is None:
        keys = sorted({m for e in elements for m in e.terms})
    row = {m: r for r, m in enumerate(keys)}
    matrix = sympy.zeros(len(keys), len(elements))
    for col, element in enumerate(elements):
        for m, c in element.terms.items():
            matrix[row[m], col] = sympy.Rational(c.numerator, c.denominator)
    return matrix, keys


def span_rank(elements):
    if not elements:
        return 0
    matrix, keys = coefficient_matrix(elements)
    if not keys:
        return 0
    return matrix.rank()


def kernel_combinations(domain, images):
    """Combinations of ``domain`` elements whose ``images`` cancel.

    ``images[i]`` is the image of ``domain[i]`` under some linear map.
    """
    if not domain:
        return []
    algebra = domain[0].algebra
    matrix, keys = coefficient_matrix(images)
    if not keys:
        return list(domain)
    basis = []
    for vector in matrix.nullspace():
        combo = algebra.zero()
        for coeff, element in zip(vector, domain):
            if coeff != 0:
                combo = combo + element.scale(to_scalar(sympy.Rational(coeff)))
        basis.append(combo)
    return basis
