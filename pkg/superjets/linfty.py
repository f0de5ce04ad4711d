"""L-infinity algebras as Q-structures on V[1].

Conventions used throughout:

* a basis vector ``e`` of degree ``|e| <= 0`` has a coordinate of the same
  name, of degree ``1 - |e|`` and opposite parity;
* bracket tables are keyed by argument tuples sorted in basis order, and the
  entry for inputs ``a`` and output ``c`` is minus the coefficient of the
  monomial ``ξ^a`` in ``Q(ξ^c)``;
* brackets of ordered arguments pick up the Koszul sign of sorting them
  (computed with coordinate parities) and a factor ``mult!`` per repeated
  argument.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Dict, Mapping, Tuple

from superjets.dgman import GradedManifold, QStructure, check_q
from superjets.errors import GradingError, PreconditionError, SchemaError, Verdict
from superjets.parallel import parallel_map
from superjets.superalg import (
    EVEN,
    ODD,
    Derivation,
    Element,
    GenSpec,
    coefficient_matrix,
    format_scalar,
    substitute,
    to_scalar,
)

logger = logging.getLogger(__name__)


def coordinate_spec(vector):
    return GenSpec(vector.name, 1 - vector.degree, 1 - vector.parity)


def basis_spec(coordinate):
    return GenSpec(coordinate.name, 1 - coordinate.degree, 1 - coordinate.parity)


@dataclass(frozen=True)
class LInftyAlgebra:
    """Finite basis plus multibracket tables ``{arity: {inputs: {output: coeff}}}``."""

    basis: Tuple[GenSpec, ...]
    brackets: Mapping[int, Mapping[Tuple[str, ...], Mapping[str, Fraction]]]
    _position: Dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        position = {}
        for i, vector in enumerate(self.basis):
            if vector.name in position:
                raise SchemaError("basis", f"duplicate basis vector {vector.name!r}")
            if vector.degree > 0:
                raise GradingError(f"basis vector {vector.name} has positive degree {vector.degree}")
            position[vector.name] = i
        object.__setattr__(self, "_position", position)
        cleaned = {}
        for arity, table in self.brackets.items():
            for inputs, outputs in table.items():
                inputs = tuple(inputs)
                self._validate(arity, inputs, outputs)
                for output, coeff in outputs.items():
                    coeff = to_scalar(coeff)
                    if coeff:
                        cleaned.setdefault(arity, {}).setdefault(inputs, {})[output] = coeff
        object.__setattr__(self, "brackets", cleaned)

    def _validate(self, arity, inputs, outputs):
        if len(inputs) != arity or arity < 1:
            raise SchemaError("brackets", f"arity {arity} entry has inputs {inputs}")
        for name in inputs + tuple(outputs):
            if name not in self._position:
                raise SchemaError("brackets", f"unknown basis vector {name!r}")
        order = [self._position[name] for name in inputs]
        if order != sorted(order):
            raise SchemaError("brackets", f"inputs {inputs} are not in basis order")
        for a, b in zip(inputs, inputs[1:]):
            if a == b and coordinate_spec(self.vector(a)).parity == ODD:
                raise SchemaError("brackets", f"{a} is repeated but its coordinate is odd")
        in_degree = sum(self.vector(name).degree for name in inputs)
        in_parity = sum(self.vector(name).parity for name in inputs)
        for output, coeff in outputs.items():
            if not to_scalar(coeff):
                continue
            vector = self.vector(output)
            if vector.degree != in_degree + 2 - arity:
                raise GradingError(
                    f"bracket {inputs} -> {output} has degree {vector.degree - in_degree}, expected {2 - arity}"
                )
            if vector.parity != (in_parity + arity) % 2:
                raise GradingError(f"bracket {inputs} -> {output} has the wrong parity")

    @property
    def names(self):
        return tuple(vector.name for vector in self.basis)

    def vector(self, name):
        return self.basis[self._position[name]]

    def position(self, name):
        return self._position[name]

    @property
    def max_arity(self):
        return max(self.brackets, default=0)

    def table(self, arity):
        return self.brackets.get(arity, {})

    def coordinate_manifold(self):
        return GradedManifold(tuple(coordinate_spec(vector) for vector in self.basis))

    def to_dict(self):
        return {
            "basis": [
                {"name": v.name, "degree": v.degree, "parity": v.parity} for v in self.basis
            ],
            "brackets": {
                str(arity): [
                    {"inputs": list(inputs), "output": output, "coefficient": format_scalar(coeff)}
                    for inputs, outputs in sorted(table.items())
                    for output, coeff in sorted(outputs.items())
                ]
                for arity, table in sorted(self.brackets.items())
            },
        }


def _koszul_sort(L, args):
    """Sort ``args`` into basis order; return ``(sign, sorted_args)`` or ``(0, ...)``."""
    items = list(args)
    sign = 1
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            a, b = items[j], items[j + 1]
            if L.position(a) > L.position(b):
                if coordinate_spec(L.vector(a)).parity and coordinate_spec(L.vector(b)).parity:
                    sign = -sign
                items[j], items[j + 1] = b, a
    for a, b in zip(items, items[1:]):
        if a == b and coordinate_spec(L.vector(a)).parity == ODD:
            return 0, tuple(items)
    return sign, tuple(items)


def bracket(L, args):
    """Bracket of ordered basis arguments, as ``{output: coefficient}``."""
    for name in args:
        if name not in L.names:
            raise SchemaError("bracket", f"unknown basis vector {name!r}")
    sign, key = _koszul_sort(L, args)
    if sign == 0:
        return {}
    multiplicity = 1
    for name in set(key):
        multiplicity *= factorial(key.count(name))
    outputs = L.table(len(args)).get(key, {})
    return {out: sign * multiplicity * coeff for out, coeff in sorted(outputs.items())}


def _sorted_key(algebra, mono):
    names = []
    for index, exponent in mono:
        names.extend([algebra.gens[index].name] * exponent)
    return tuple(names)


def brackets_from_q(Q):
    """Read the bracket tables off the homogeneous components of ``Q``."""
    if isinstance(Q, QStructure):
        Q = Q.Q
    algebra = Q.algebra
    for spec in algebra.gens:
        if spec.degree < 1:
            raise PreconditionError(
                f"coordinate {spec.name} has degree {spec.degree}; L-infinity coordinates need degree >= 1"
            )
    basis = tuple(basis_spec(spec) for spec in algebra.gens)
    brackets = {}
    for spec in algebra.gens:
        for mono, coeff in Q.value(spec.name).terms.items():
            if not mono:
                raise PreconditionError(f"Q({spec.name}) has a constant term")
            key = _sorted_key(algebra, mono)
            brackets.setdefault(len(key), {}).setdefault(key, {})[spec.name] = -coeff
    return LInftyAlgebra(basis, brackets)


def q_from_brackets(L):
    """Assemble ``Q(ξ^c) = -Σ B[a][c] ξ^a`` on the coordinate manifold."""
    X = L.coordinate_manifold()
    algebra = X.algebra
    values = {name: algebra.zero() for name in L.names}
    for arity, table in L.brackets.items():
        for inputs, outputs in table.items():
            monomial = algebra.one()
            for name in inputs:
                monomial = monomial * algebra.gen(name)
            for output, coeff in outputs.items():
                values[output] = values[output] - monomial.scale(coeff)
    return QStructure(X, Derivation(algebra, 1, ODD, values))


def max_coordinate_degree(L):
    return max((1 - vector.degree for vector in L.basis), default=0)


@dataclass(frozen=True)
class LieAlgebra:
    """Even Lie algebra in degree 0; ``constants[(x, y)] = {z: c}`` stored for x before y."""

    basis: Tuple[str, ...]
    constants: Mapping[Tuple[str, str], Mapping[str, Fraction]]

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        if len(set(self.basis)) != len(self.basis):
            raise SchemaError("basis", "duplicate basis names")
        object.__setattr__(self, "constants", _normalise_constants(self.basis, self.constants))

    @property
    def dim(self):
        return len(self.basis)

    def structure(self, x, y):
        """``[x, y]`` for basis names, as ``{z: c}``."""
        if x == y:
            return {}
        if self.basis.index(x) < self.basis.index(y):
            return dict(self.constants.get((x, y), {}))
        return {z: -c for z, c in self.constants.get((y, x), {}).items()}

    def bracket(self, u, v):
        """Bracket of vectors given as ``{name: coefficient}``."""
        out = {}
        for x, a in u.items():
            for y, b in v.items():
                for z, c in self.structure(x, y).items():
                    out[z] = out.get(z, 0) + a * b * c
        return {z: c for z, c in out.items() if c}

    def to_dict(self):
        return {
            "basis": list(self.basis),
            "brackets": [
                [x, y, {z: format_scalar(c) for z, c in sorted(outputs.items())}]
                for (x, y), outputs in sorted(
                    self.constants.items(),
                    key=lambda item: (self.basis.index(item[0][0]), self.basis.index(item[0][1])),
                )
            ],
        }


def _normalise_constants(basis, constants):
    position = {name: i for i, name in enumerate(basis)}
    table = {}
    for (x, y), outputs in constants.items():
        for name in (x, y, *outputs):
            if name not in position:
                raise SchemaError("brackets", f"unknown basis vector {name!r}")
        outputs = {z: to_scalar(c) for z, c in outputs.items() if to_scalar(c)}
        if x == y:
            if outputs:
                raise PreconditionError(f"[{x}, {x}] must vanish for a Lie bracket", {"pair": [x, y]})
            continue
        if position[x] > position[y]:
            key, outputs = (y, x), {z: -c for z, c in outputs.items()}
        else:
            key = (x, y)
        if key in table and table[key] != outputs:
            raise PreconditionError(
                f"structure constants are not antisymmetric in [{x}, {y}]", {"pair": [x, y]}
            )
        if outputs:
            table[key] = outputs
    return table


def lie_algebra(basis, entries):
    """Build from ``[[x, y, {z: c}], ...]`` rows as found in input documents."""
    constants = {}
    for x, y, outputs in entries:
        key = (x, y)
        if key in constants:
            raise SchemaError("brackets", f"[{x}, {y}] given twice")
        constants[key] = outputs
    return LieAlgebra(tuple(basis), constants)


def _jacobiator(args):
    lie, (x, y, z) = args
    ex, ey, ez = ({x: Fraction(1)}, {y: Fraction(1)}, {z: Fraction(1)})
    total = {}
    for a, b, c in ((ex, ey, ez), (ey, ez, ex), (ez, ex, ey)):
        for name, coeff in lie.bracket(a, lie.bracket(b, c)).items():
            total[name] = total.get(name, 0) + coeff
    return {name: coeff for name, coeff in total.items() if coeff}


def jacobi_violations(lie, workers=None):
    """Basis triples whose Jacobiator is non-zero, with the offending vector."""
    triples = list(combinations(lie.basis, 3))
    results = parallel_map(_jacobiator, [(lie, t) for t in triples], workers)
    return [
        {"triple": list(t), "jacobiator": {k: format_scalar(v) for k, v in sorted(r.items())}}
        for t, r in zip(triples, results)
        if r
    ]


def lie_to_linfty(lie):
    basis = tuple(GenSpec(name, 0, EVEN) for name in lie.basis)
    return LInftyAlgebra(basis, {2: dict(lie.constants)})


def ce_from_lie(lie):
    """Chevalley-Eilenberg Q on g[1]: ``Q(ξ^k) = -1/2 c^k_ij ξ^i ξ^j``."""
    return q_from_brackets(lie_to_linfty(lie))


def mc_residual(alpha, L, d_ambient):
    """Per-coordinate residual ``d α^c - α(Q ξ^c)`` of a Maurer-Cartan candidate.

    ``alpha`` maps every coordinate to an element of the ambient algebra of
    matching degree and parity.
    """
    Q = q_from_brackets(L)
    target = d_ambient.algebra
    images = {name: alpha.get(name, target.zero()) for name in L.names}
    residual = {}
    for name in L.names:
        residual[name] = d_ambient(images[name]) - substitute(images, Q.Q.value(name), target)
    return residual


def mc_check(alpha, L, d_ambient):
    try:
        residual = mc_residual(alpha, L, d_ambient)
    except GradingError as exc:
        raise GradingError(f"inhomogeneous Maurer-Cartan candidate: {exc}") from None
    failing = {name: str(value) for name, value in residual.items() if not value.is_zero()}
    if failing:
        return Verdict.failed("maurer_cartan", "Maurer-Cartan equation fails", failing)
    return Verdict.passed("Maurer-Cartan equation holds")


def dga_morphism_check(images, source, d_target):
    """Is ``x -> images[x]`` a morphism of dg algebras from ``source`` to ``d_target``'s algebra?"""
    if isinstance(source, QStructure):
        source = source.Q
    target = d_target.algebra
    images = {name: images.get(name, target.zero()) for name in source.algebra.names}
    for name in source.algebra.names:
        lhs = substitute(images, source.value(name), target)
        rhs = d_target(substitute(images, source.algebra.gen(name), target))
        difference = lhs - rhs
        if not difference.is_zero():
            return Verdict.failed(
                "dga_morphism",
                f"map does not commute with the differentials on {name}",
                {"coordinate": name, "difference": str(difference)},
            )
    return Verdict.passed("commutes with the differentials")


def is_q_isomorphism(images, source, target):
    """Degree-preserving dg isomorphism test: a dg morphism with invertible linear part."""
    verdict = dga_morphism_check(images, source, target.Q)
    if not verdict.ok:
        return verdict
    src = source.algebra
    tgt = target.algebra
    if len(src.gens) != len(tgt.gens):
        return Verdict.failed("isomorphism", "coordinate counts differ")
    linear_keys = [((i, 1),) for i in range(len(tgt.gens))]
    linear_parts = []
    for name in src.names:
        image = images[name]
        linear_parts.append(Element(tgt, {m: image.coefficient(m) for m in linear_keys}))
    matrix, _ = coefficient_matrix(linear_parts, linear_keys)
    if matrix.rank() != len(tgt.gens):
        return Verdict.failed("isomorphism", "linear part of the coordinate change is singular")
    return Verdict.passed("dg isomorphism")


def abelian_lie(n, prefix="e"):
    return LieAlgebra(tuple(f"{prefix}{i}" for i in range(1, n + 1)), {})


def heisenberg_lie():
    return LieAlgebra(("e1", "e2", "e3"), {("e1", "e2"): {"e3": 1}})


def sl2():
    return LieAlgebra(
        ("h", "e", "f"),
        {("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): {"h": 1}},
    )


def upper_triangular_lie(n=4):
    """Strictly upper triangular n x n matrices, ``[E_ij, E_jk] = E_ik``."""
    basis = tuple(f"E{i}{j}" for i in range(1, n + 1) for j in range(i + 1, n + 1))
    constants = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(j + 1, n + 1):
                constants[(f"E{i}{j}", f"E{j}{k}")] = {f"E{i}{k}": 1}
    return LieAlgebra(basis, constants)


def single_constant_mutations(lie):
    """Every Lie algebra differing from ``lie`` by +1 in one structure constant."""
    for x, y in combinations(lie.basis, 2):
        for z in lie.basis:
            constants = {key: dict(value) for key, value in lie.constants.items()}
            outputs = constants.setdefault((x, y), {})
            outputs[z] = outputs.get(z, 0) + 1
            yield (x, y, z), LieAlgebra(lie.basis, constants)


def jacobi_matches_q_squared(lie):
    """``check_q`` of the CE differential agrees with the direct Jacobi test."""
    return check_q(ce_from_lie(lie)).ok == (not jacobi_violations(lie))
