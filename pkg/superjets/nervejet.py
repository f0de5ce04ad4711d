"""First-order jets of nerves of polynomial groups, and descent data on R^{0|1}.

Group elements are points in coordinates with the identity at the origin. A
point with values in some algebra is a dict ``{coordinate: element}``; group
laws are polynomials in slot variables ``c_1`` (left factor) and ``c_2``
(right factor).
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import List, Mapping, Tuple

import sympy

from superjets.dgman import GradedManifold, QStructure, check_q, pit, manifold
from superjets.errors import PreconditionError, SchemaError, Verdict
from superjets.linfty import (
    LieAlgebra,
    ce_from_lie,
    is_q_isomorphism,
    jacobi_violations,
    lie_to_linfty,
    mc_check,
    mc_residual,
)
from superjets.superalg import (
    ODD,
    Algebra,
    Derivation,
    GenSpec,
    even,
    substitute,
    to_scalar,
)

logger = logging.getLogger(__name__)

RESERVED = {"theta", "theta1", "theta2", "theta3", "dtheta", "beta"}


@lru_cache(maxsize=None)
def _slot_algebra(coordinates, k):
    return Algebra(tuple(even(f"{c}_{s}") for s in range(1, k + 1) for c in coordinates))


@dataclass(frozen=True)
class PolyGroupLaw:
    """Polynomial group law ``F(x, y)`` with identity at 0.

    ``law[c]`` is the ``c`` component of the product as a polynomial in
    ``slot_algebra(2)``.
    """

    coordinates: Tuple[str, ...]
    law: Mapping[str, object]

    def __post_init__(self):
        object.__setattr__(self, "coordinates", tuple(self.coordinates))
        if len(set(self.coordinates)) != len(self.coordinates):
            raise SchemaError("coordinates", "duplicate coordinate names")
        reserved = RESERVED & set(self.coordinates)
        if reserved or any(c.startswith("beta") for c in self.coordinates):
            raise SchemaError("coordinates", f"reserved coordinate names {sorted(reserved) or 'beta*'}")
        slots = self.slot_algebra(2)
        law = {}
        for c in self.coordinates:
            value = self.law.get(c)
            if value is None:
                raise SchemaError("law", f"missing component {c!r}")
            if isinstance(value, str):
                value = slots.parse(value)
            if value.algebra != slots:
                raise SchemaError("law", f"component {c!r} is not a polynomial in the two slots")
            law[c] = value
        object.__setattr__(self, "law", law)

    @property
    def dim(self):
        return len(self.coordinates)

    def slot_algebra(self, k):
        return _slot_algebra(self.coordinates, k)

    def slot_point(self, slot, target):
        return {c: target.gen(f"{c}_{slot}") for c in self.coordinates}

    def identity_point(self, target):
        return {c: target.zero() for c in self.coordinates}

    def multiply(self, u, v, target):
        images = {}
        for c in self.coordinates:
            images[f"{c}_1"] = u[c]
            images[f"{c}_2"] = v[c]
        return {c: substitute(images, self.law[c], target, graded=False) for c in self.coordinates}

    def check(self):
        """Two-sided identity at 0 and associativity, symbolically."""
        three = self.slot_algebra(3)
        x, y, z = (self.slot_point(s, three) for s in (1, 2, 3))
        zero = self.identity_point(three)
        for c, value in self.multiply(x, zero, three).items():
            if value != x[c]:
                return Verdict.failed("identity", f"F(x, 0) != x in component {c}", {"component": c})
        for c, value in self.multiply(zero, y, three).items():
            if value != y[c]:
                return Verdict.failed("identity", f"F(0, y) != y in component {c}", {"component": c})
        left = self.multiply(self.multiply(x, y, three), z, three)
        right = self.multiply(x, self.multiply(y, z, three), three)
        for c in self.coordinates:
            difference = left[c] - right[c]
            if not difference.is_zero():
                return Verdict.failed(
                    "associativity", f"F(F(x,y),z) != F(x,F(y,z)) in component {c}",
                    {"component": c, "difference": str(difference)},
                )
        return Verdict.passed("polynomial group law")

    def to_dict(self):
        return {"coordinates": list(self.coordinates), "law": {c: str(self.law[c]) for c in self.coordinates}}


def _fixed_point(F, u, target_point, target, what):
    """Solve ``F(u, v) = target_point`` for ``v`` by ``v += target_point - F(u, v)``."""
    v = {c: target_point[c] - u[c] for c in F.coordinates}
    for _ in range(4 * (F.dim + 2)):
        product = F.multiply(u, v, target)
        residual = {c: target_point[c] - product[c] for c in F.coordinates}
        if all(r.is_zero() for r in residual.values()):
            return v
        v = {c: v[c] + residual[c] for c in F.coordinates}
    raise PreconditionError(f"{what}: fixed-point iteration did not terminate; is the law nilpotent?")


def group_inverse(F, u, target):
    return _fixed_point(F, u, F.identity_point(target), target, "group inverse")


def lie_from_group_law(F):
    """``c^k_ij`` = coefficient of ``x_i y_j`` in ``F^k`` minus that of ``x_j y_i``."""
    verdict = F.check()
    if not verdict.ok:
        raise PreconditionError(verdict.message, verdict.witness)
    slots = F.slot_algebra(2)
    constants = {}
    for i, j in combinations(F.coordinates, 2):
        (ij,) = (slots.gen(f"{i}_1") * slots.gen(f"{j}_2")).terms
        (ji,) = (slots.gen(f"{j}_1") * slots.gen(f"{i}_2")).terms
        row = {}
        for k in F.coordinates:
            value = F.law[k].coefficient(ij) - F.law[k].coefficient(ji)
            if value:
                row[k] = value
        if row:
            constants[(i, j)] = row
    lie = LieAlgebra(F.coordinates, constants)
    violations = jacobi_violations(lie)
    if violations:
        raise PreconditionError("derived bracket violates the Jacobi identity", violations[0])
    return lie


def abelian_law(n, prefix="x"):
    coords = tuple(f"{prefix}{i}" for i in range(1, n + 1))
    return PolyGroupLaw(coords, {c: f"{c}_1 + {c}_2" for c in coords})


def heisenberg_law():
    return PolyGroupLaw(
        ("x", "y", "z"),
        {"x": "x_1 + x_2", "y": "y_1 + y_2", "z": "z_1 + z_2 + x_1*y_2"},
    )


def upper_triangular_law(n=4):
    """Unipotent n x n matrices ``I + A`` in the coordinates ``A_ij``, ``i < j``."""
    coords = tuple(f"E{i}{j}" for i in range(1, n + 1) for j in range(i + 1, n + 1))
    law = {}
    for i in range(1, n + 1):
        for k in range(i + 1, n + 1):
            terms = [f"E{i}{k}_1", f"E{i}{k}_2"]
            terms += [f"E{i}{j}_1*E{j}{k}_2" for j in range(i + 1, k)]
            law[f"E{i}{k}"] = " + ".join(terms)
    return PolyGroupLaw(coords, law)


# -- the 1-jet of the nerve ----------------------------------------------------


@dataclass
class NerveJet:
    q_structure: QStructure
    ce: QStructure
    images: Mapping[str, object]
    isomorphism: Verdict
    degrees: Mapping[str, int]
    levels: List[dict] = field(default_factory=list)

    @property
    def ok(self):
        return self.isomorphism.ok and check_q(self.q_structure).ok

    def to_dict(self):
        return {
            "q": {name: str(value) for name, value in self.q_structure.Q.values.items()},
            "ce": {name: str(value) for name, value in self.ce.Q.values.items()},
            "isomorphism": {name: str(value) for name, value in self.images.items()},
            "verdict": self.isomorphism.to_dict(),
            "degrees": dict(self.degrees),
            "levels": self.levels,
        }


def _splitting_matrix(F, splitting):
    n = F.dim
    if splitting is None:
        return sympy.eye(n)
    matrix = sympy.Matrix([[sympy.Rational(str(to_scalar(c))) for c in row] for row in splitting])
    if matrix.shape != (n, n) or matrix.det() == 0:
        raise PreconditionError("splitting must be an invertible square matrix")
    return matrix


def _strings(values):
    return {k: str(v) for k, v in values.items()}


def nerve_one_jet(F, splitting=None):
    """Build H^(1) and H^(2) of the group nerve and read Q off the End(R^{0|1}) action.

    The 1-simplex jets are ``g(θ) = ηθ`` with ``η = Pξ`` for the splitting
    ``P`` (identity by default). The 2-simplex over a horn ``(g(θ1), g(θ2))``
    is the unique ``v`` with ``F(g(θ1), v) = g(θ2)``. Acting by
    ``θ -> aθ + β`` gives ``η' = ``θ-coefficient of ``v(β, aθ + β)``; ``Q``
    is its β-part at ``a = 1`` and the degrees are the weights at ``a = 2``.
    The result equals ``-Q_CE`` in ``η``, so ``ξ_CE -> -η`` is an isomorphism.
    """
    lie = lie_from_group_law(F)
    P = _splitting_matrix(F, splitting)
    coords = F.coordinates
    work = Algebra(
        tuple(GenSpec(c, 1, ODD) for c in coords)
        + tuple(GenSpec(n, 0, ODD) for n in ("theta1", "theta2", "theta", "beta"))
    )
    eta = {}
    for row, k in enumerate(coords):
        value = work.zero()
        for col, j in enumerate(coords):
            if P[row, col] != 0:
                value = value + work.gen(j).scale(to_scalar(P[row, col]))
        eta[k] = value
    def path(theta):
        return {k: eta[k] * theta for k in coords}

    theta1, theta2 = work.gen("theta1"), work.gen("theta2")
    filler = _fixed_point(F, path(theta1), path(theta2), work, "horn lift")
    levels = [
        {"level": 0, "coordinates": 0, "point": {k: "0" for k in coords}},
        {"level": 1, "coordinates": len(coords), "jets": _strings(path(work.gen("theta")))},
        {"level": 2, "coordinates": len(coords), "horn_lift": _strings(filler)},
    ]

    def act(a, beta):
        images = {"theta1": beta, "theta2": work.gen("theta").scale(a) + beta}
        moved = {}
        for k in coords:
            value = substitute(images, filler[k], work, graded=False)
            constant, linear = value.split("theta")
            if not constant.is_zero():
                raise PreconditionError("translated path does not start at the identity", {"coordinate": k})
            moved[k] = linear
        return moved

    shifted = act(1, work.gen("beta"))
    scaled = act(2, work.zero())
    degrees = {}
    for k in coords:
        ratio = scaled[k] - eta[k].scale(2)
        if not ratio.is_zero():
            raise PreconditionError("scaling weight is not 1", {"coordinate": k})
        degrees[k] = 1
    q_eta = {k: shifted[k].split("beta")[1] for k in coords}
    P_inv = P.inv()
    X = GradedManifold(tuple(GenSpec(c, 1, ODD) for c in coords))
    values = {}
    for row, j in enumerate(coords):
        value = work.zero()
        for col, k in enumerate(coords):
            if P_inv[row, col] != 0:
                value = value + q_eta[k].scale(to_scalar(P_inv[row, col]))
        values[j] = value.embed(X.algebra)
    jet = QStructure(X, Derivation(X.algebra, 1, ODD, values))
    ce = ce_from_lie(lie)
    images = {k: -eta[k].embed(X.algebra) for k in coords}
    verdict = is_q_isomorphism(images, ce, jet)
    if verdict.ok:
        verdict = Verdict.passed("nerve jet is isomorphic to the Chevalley-Eilenberg differential")
    logger.info("nerve jet of a %d-dimensional law: %s", F.dim, verdict.message)
    return NerveJet(jet, ce, images, verdict, degrees, levels)


# -- descent data and Maurer-Cartan elements -----------------------------------


def odd_parameter_basis(parameters):
    """Monomials of odd length in the odd parameters: a basis of the odd part."""
    basis = []
    names = parameters.names
    for size in range(1, len(names) + 1, 2):
        for subset in combinations(names, size):
            m = parameters.one()
            for name in subset:
                m = m * parameters.gen(name)
            basis.append(m)
    return basis


def descent_algebra(parameters):
    return parameters.extended(*(GenSpec(f"theta{i}", 0, ODD) for i in (1, 2, 3)))


def fiber_form_algebra(parameters):
    forms = pit(manifold(GenSpec("theta", 0, ODD)))
    ambient = forms.algebra.extended(*parameters.gens)
    d = Derivation(ambient, 1, ODD, {"theta": ambient.gen("dtheta")})
    return ambient, d


def descent_datum(F, w, target):
    """``g(θ1, θ2) = γ(θ1)^{-1} γ(θ2)`` for the path ``γ(θ) = wθ``."""
    def gamma(theta):
        return {k: w[k].embed(target) * target.gen(theta) for k in F.coordinates}

    return F.multiply(group_inverse(F, gamma("theta1"), target), gamma("theta2"), target)


def descent_residuals(F, g, target):
    """``(identity, component, g(θ,θ) - e or g12 g23 - g13)`` for every coordinate."""
    residuals = []
    for k in F.coordinates:
        diagonal = substitute({"theta2": target.gen("theta1")}, g[k], target)
        residuals.append(("g(θ,θ) = e", k, diagonal))
    g23 = {k: substitute({"theta1": target.gen("theta2"), "theta2": target.gen("theta3")}, g[k], target) for k in F.coordinates}
    g13 = {k: substitute({"theta2": target.gen("theta3")}, g[k], target) for k in F.coordinates}
    product = F.multiply(g, g23, target)
    for k in F.coordinates:
        residuals.append(("g(θ1,θ2) g(θ2,θ3) = g(θ1,θ3)", k, product[k] - g13[k]))
    return residuals


def descent_violations(F, g, target):
    """``g(θ, θ) = e`` and ``g(θ1, θ2) g(θ2, θ3) = g(θ1, θ3)``."""
    return [
        {"identity": identity, "component": k}
        for identity, k, residual in descent_residuals(F, g, target)
        if not residual.is_zero()
    ]


def descent_to_connection(F, g, ambient):
    """``α^k = -(θ2-coefficient of g^k at θ1 = θ) dθ``."""
    alpha = {}
    for k in F.coordinates:
        _, linear = g[k].split("theta2")
        restricted = substitute({"theta1": ambient.gen("theta")}, linear, ambient)
        alpha[k] = -(restricted * ambient.gen("dtheta"))
    return alpha


def connection_to_path(F, alpha, parameters):
    """Inverse on the descent side: ``w = -a`` where ``α = a dθ + b θ dθ``."""
    w = {}
    for k in F.coordinates:
        at_base = substitute({"theta": alpha[k].algebra.zero()}, alpha[k], alpha[k].algebra)
        _, a = at_base.split("dtheta")
        w[k] = -a.embed(parameters)
    return w


def mc_from_parameters(lie, a, ambient):
    """The Maurer-Cartan element with ``dθ``-part ``a``: ``b^c = -Σ_{i<j} c^c_ij a^i a^j``."""
    alpha = {}
    for c in lie.basis:
        b = ambient.zero()
        for (i, j), row in lie.constants.items():
            if c in row:
                b = b - (a[i] * a[j]).scale(row[c])
        alpha[c] = a[c] * ambient.gen("dtheta") + b * ambient.gen("theta") * ambient.gen("dtheta")
    return alpha


# -- generic solutions ---------------------------------------------------------


def _parameter_length(names):
    return sum(1 for name in names if name.startswith("beta"))


def _shapes(names, parity):
    """Subsets of the odd generators ``names`` whose size has the given parity."""
    return [subset for size in range(parity, len(names) + 1, 2) for subset in combinations(names, size)]


def _product(algebra, names):
    result = algebra.one()
    for name in names:
        result = result * algebra.gen(name)
    return result


def _with_unknowns(parameters, count):
    return parameters.extended(*(even(f"u{i}") for i in range(1, count + 1)))


@dataclass
class _Ansatz:
    """One unknown even coefficient ``u_i`` per coordinate and shape.

    The unknowns are generators of the parameter algebra, so every
    construction downstream treats them as constants.
    """

    parameters: Algebra
    ring: Algebra
    values: Mapping[str, object]
    lengths: Mapping[str, int]

    @property
    def symbols(self):
        return {name: sympy.Symbol(name) for name in self.lengths}


def _ansatz(F, parameters, shapes, ring_of, tail=None):
    extended = _with_unknowns(parameters, len(F.coordinates) * len(shapes))
    ring = ring_of(extended)
    last = ring.gen(tail) if tail else ring.one()
    values, lengths = {}, {}
    index = 0
    for k in F.coordinates:
        values[k] = ring.zero()
        for shape in shapes:
            index += 1
            name = f"u{index}"
            lengths[name] = _parameter_length(shape)
            values[k] = values[k] + ring.gen(name) * _product(ring, shape) * last
    return _Ansatz(extended, ring, values, lengths)


def _coefficient_equations(residuals, ansatz):
    """One polynomial in the unknowns per residual and remaining monomial, keyed by length."""
    symbols = ansatz.symbols
    collected = {}
    for position, element in enumerate(residuals):
        gens = element.algebra.gens
        for mono, c in element.terms.items():
            rest = tuple((i, e) for i, e in mono if gens[i].name not in symbols)
            term = sympy.Rational(c.numerator, c.denominator)
            for i, e in mono:
                if gens[i].name in symbols:
                    term = term * symbols[gens[i].name] ** e
            key = (position, rest)
            collected[key] = collected.get(key, 0) + term
    equations = {}
    for (position, rest), expression in collected.items():
        gens = residuals[position].algebra.gens
        length = _parameter_length([gens[i].name for i, _ in rest])
        equations.setdefault(length, []).append(expression)
    return equations


def _solve_by_length(equations, ansatz):
    """Solve one odd-parameter length at a time.

    Unknowns of the current length enter their equations linearly, with the
    shorter unknowns left free acting as parameters. ``None`` if inconsistent.
    """
    symbols = ansatz.symbols
    fresh = {}
    for name, length in ansatz.lengths.items():
        fresh.setdefault(length, []).append(symbols[name])
    solution = {}
    for length in sorted(set(equations) | set(fresh)):
        pending = [sympy.expand(sympy.sympify(eq).subs(solution)) for eq in equations.get(length, [])]
        pending = [eq for eq in pending if eq != 0]
        if not pending:
            continue
        if not fresh.get(length):
            return None
        found = sympy.solve(pending, fresh[length], dict=True)
        if len(found) != 1:
            return None
        solution.update({symbol: sympy.expand(value) for symbol, value in found[0].items()})
    return solution


def _from_sympy(expression, ring, ansatz):
    names = {symbol: name for name, symbol in ansatz.symbols.items()}
    free = sorted(expression.free_symbols, key=str)
    if not free:
        return ring.scalar(to_scalar(expression))
    result = ring.zero()
    for exponents, coeff in sympy.Poly(expression, *free).terms():
        term = ring.scalar(to_scalar(coeff))
        for symbol, e in zip(free, exponents):
            term = term * ring.gen(names[symbol]) ** e
        result = result + term
    return result


def _generic(ansatz, solution):
    """The ansatz with solved unknowns replaced by their values in the free ones."""
    values = {}
    for k, value in ansatz.values.items():
        ring = value.algebra
        images = {
            name: _from_sympy(solution[symbol], ring, ansatz)
            for name, symbol in ansatz.symbols.items()
            if symbol in solution
        }
        values[k] = substitute(images, value, ring)
    return values


def _free_count(ansatz, solution):
    return sum(1 for symbol in ansatz.symbols.values() if symbol not in solution)


@dataclass
class DescentReport:
    q: int
    descent_dimension: int
    mc_dimension: int
    unknowns: int
    generic_connection: Mapping[str, str] = field(default_factory=dict)
    failures: List[dict] = field(default_factory=list)

    @property
    def dimension(self):
        return self.descent_dimension

    @property
    def ok(self):
        return not self.failures

    def to_dict(self):
        return {
            "q": self.q,
            "dimension": self.dimension,
            "descent_dimension": self.descent_dimension,
            "mc_dimension": self.mc_dimension,
            "unknowns": self.unknowns,
            "generic_connection": dict(self.generic_connection),
            "failures": self.failures,
            "ok": self.ok,
        }


def _beta_names(q):
    return tuple(f"beta{i}" for i in range(1, q + 1))


def general_descent_datum(F, q):
    """Every descent datum on R^{0|1} x R^{0|q}, as ``(g, ansatz, free count)``.

    ``g^k`` starts as an arbitrary even function of ``θ1, θ2`` and the odd
    parameters; the unknown coefficients solving both descent identities are
    substituted, the free ones remain as even generators ``u_i``.
    """
    parameters = Algebra(tuple(GenSpec(name, 0, ODD) for name in _beta_names(q)))
    shapes = _shapes(("theta1", "theta2") + _beta_names(q), 0)
    ansatz = _ansatz(F, parameters, shapes, descent_algebra)
    residuals = [r for _, _, r in descent_residuals(F, ansatz.values, ansatz.ring)]
    solution = _solve_by_length(_coefficient_equations(residuals, ansatz), ansatz)
    if solution is None:
        return None, ansatz, 0
    return _generic(ansatz, solution), ansatz, _free_count(ansatz, solution)


def general_mc_element(F, q):
    """Every Maurer-Cartan element of ``Ω(R^{0|1}) ⊗ Λ^q ⊗ g``, as ``(α, ansatz, free count)``.

    ``α^k`` is an arbitrary odd multiple of ``dθ``; solved unknowns are
    substituted, the free ones remain as even generators ``u_i``.
    """
    L = lie_to_linfty(lie_from_group_law(F))
    parameters = Algebra(tuple(GenSpec(name, 0, ODD) for name in _beta_names(q)))
    shapes = _shapes(("theta",) + _beta_names(q), 1)
    ansatz = _ansatz(F, parameters, shapes, lambda p: fiber_form_algebra(p)[0], "dtheta")
    _, d = fiber_form_algebra(ansatz.parameters)
    residual = mc_residual(ansatz.values, L, d)
    solution = _solve_by_length(_coefficient_equations(list(residual.values()), ansatz), ansatz)
    if solution is None:
        return None, ansatz, 0
    return _generic(ansatz, solution), ansatz, _free_count(ansatz, solution)


def _differs(first, second):
    return [k for k in first if not (first[k] - second[k]).is_zero()]


def descent_mc_bijection(F, q):
    """Descent data on R^{0|1} x R^{0|q} against Maurer-Cartan elements.

    Both solution sets are computed in general, with unknown coefficients
    over the odd parameters. ``α = Ψ(g)`` and ``w = -a`` are then checked to
    be mutually inverse on the generic solutions, so they agree on every
    specialisation.
    """
    lie = lie_from_group_law(F)
    L = lie_to_linfty(lie)
    failures = []
    g, descent_ansatz, descent_dim = general_descent_datum(F, q)
    alpha, mc_ansatz, mc_dim = general_mc_element(F, q)
    unknowns = len(descent_ansatz.lengths) + len(mc_ansatz.lengths)
    if g is None:
        failures.append({"identity": "descent", "message": "descent system is inconsistent"})
    if alpha is None:
        failures.append({"identity": "maurer_cartan", "message": "Maurer-Cartan system is inconsistent"})
    if failures:
        return DescentReport(q, descent_dim, mc_dim, unknowns, {}, failures)
    if descent_dim != mc_dim:
        failures.append({"identity": "dimension", "descent": descent_dim, "maurer_cartan": mc_dim})

    # descent -> MC -> descent
    params = descent_ansatz.parameters
    ring = descent_algebra(params)
    ambient, d = fiber_form_algebra(params)
    image = descent_to_connection(F, g, ambient)
    verdict = mc_check(image, L, d)
    if not verdict.ok:
        failures.append({"identity": "maurer_cartan", "witness": verdict.witness})
    back = descent_datum(F, connection_to_path(F, image, params), ring)
    for k in _differs(back, g):
        failures.append({"identity": "injective", "component": k})

    # MC -> descent -> MC
    params = mc_ansatz.parameters
    ring = descent_algebra(params)
    ambient, _ = fiber_form_algebra(params)
    w = connection_to_path(F, alpha, params)
    preimage = descent_datum(F, w, ring)
    for failure in descent_violations(F, preimage, ring):
        failures.append({"identity": "preimage", **failure})
    for k in _differs(descent_to_connection(F, preimage, ambient), alpha):
        failures.append({"identity": "surjective", "component": k})
    expected = mc_from_parameters(lie, {k: -w[k].embed(ambient) for k in F.coordinates}, ambient)
    for k in _differs(expected, alpha):
        failures.append({"identity": "parametrisation", "component": k})

    logger.info(
        "descent/MC for q=%d: dimensions %d and %d from %d unknowns, %d failures",
        q, descent_dim, mc_dim, unknowns, len(failures),
    )
    connection = {k: str(alpha[k]) for k in F.coordinates}
    return DescentReport(q, descent_dim, mc_dim, unknowns, connection, failures)


def descent_naturality(F, q, q_prime, images):
    """``Ψ`` commutes with a parameter morphism ``beta_i -> images[beta_i]``.

    The images are odd elements of the algebra on ``gamma1..gamma{q_prime}``.
    Checked on the generic path ``w^k = Σ u_i m_i`` over the odd monomials.
    """
    verdict = F.check()
    if not verdict.ok:
        raise PreconditionError(verdict.message, verdict.witness)
    source = Algebra(tuple(GenSpec(name, 0, ODD) for name in _beta_names(q)))
    target = Algebra(tuple(GenSpec(f"gamma{j}", 0, ODD) for j in range(1, q_prime + 1)))
    basis = odd_parameter_basis(source)
    source = _with_unknowns(source, len(F.coordinates) * len(basis))
    target = _with_unknowns(target, len(F.coordinates) * len(basis))
    w, index = {}, 0
    for k in F.coordinates:
        w[k] = source.zero()
        for m in basis:
            index += 1
            w[k] = w[k] + source.gen(f"u{index}") * m.embed(source)
    images = {name: value.embed(target) for name, value in images.items()}
    src_ambient, _ = fiber_form_algebra(source)
    tgt_ambient, _ = fiber_form_algebra(target)
    mapped_w = {k: substitute(images, w[k], target, graded=False) for k in F.coordinates}
    alpha_then_map = descent_to_connection(F, descent_datum(F, w, descent_algebra(source)), src_ambient)
    lifted = {name: value.embed(tgt_ambient) for name, value in images.items()}
    lifted.update({"theta": tgt_ambient.gen("theta"), "dtheta": tgt_ambient.gen("dtheta")})
    alpha_then_map = {k: substitute(lifted, v, tgt_ambient) for k, v in alpha_then_map.items()}
    map_then_alpha = descent_to_connection(F, descent_datum(F, mapped_w, descent_algebra(target)), tgt_ambient)
    failures = [{"component": k} for k in _differs(alpha_then_map, map_then_alpha)]
    if failures:
        return Verdict.failed("naturality", "descent/MC map is not natural", failures)
    return Verdict.passed("natural in the parameter algebra")
