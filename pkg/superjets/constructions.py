"""Worked constructions: crossed modules, group cocycles, Weil algebras,
gerbe two-forms and the jets of mapping presheaves out of odd points."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Mapping, Optional, Tuple

from superjets.dgman import (
    GradedManifold,
    QStructure,
    check_q,
    closed_form_basis,
    de_rham,
    manifold,
    pit,
)
from superjets.errors import (
    CocycleError,
    CrossedModuleError,
    PreconditionError,
    SchemaError,
    Verdict,
)
from superjets.linfty import (
    LieAlgebra,
    LInftyAlgebra,
    dga_morphism_check,
    heisenberg_lie,
    is_q_isomorphism,
    jacobi_violations,
)
from superjets.nervejet import lie_from_group_law
from superjets.superalg import (
    EVEN,
    ODD,
    Algebra,
    Derivation,
    Element,
    GenSpec,
    derivation_commutator,
    even,
    format_scalar,
    kernel_combinations,
    partial,
    substitute,
    to_scalar,
)

logger = logging.getLogger(__name__)


def _vector_str(vector):
    return {k: format_scalar(v) for k, v in sorted(vector.items()) if v}


def _sub(u, v):
    out = dict(u)
    for k, c in v.items():
        out[k] = out.get(k, 0) - c
    return {k: c for k, c in out.items() if c}


# -- crossed modules ---------------------------------------------------------


@dataclass(frozen=True)
class CrossedModule:
    """Infinitesimal crossed module ``m: h -> g`` with ``g`` acting on ``h`` by derivations.

    ``m[a]`` is the image of ``h_a`` in ``g``; ``action[(x, a)]`` is ``μ(x) h_a``.
    The axioms are checked on construction.
    """

    g: LieAlgebra
    h: LieAlgebra
    m: Mapping[str, Mapping[str, Fraction]]
    action: Mapping[Tuple[str, str], Mapping[str, Fraction]]

    def __post_init__(self):
        clash = set(self.g.basis) & set(self.h.basis)
        if clash:
            raise SchemaError("h", f"basis names shared with g: {sorted(clash)}")
        m = {a: {k: to_scalar(c) for k, c in row.items() if to_scalar(c)} for a, row in self.m.items()}
        action = {
            tuple(key): {b: to_scalar(c) for b, c in row.items() if to_scalar(c)}
            for key, row in self.action.items()
        }
        for a, row in m.items():
            if a not in self.h.basis or any(k not in self.g.basis for k in row):
                raise SchemaError("m", f"row {a!r} refers to unknown basis vectors")
        for (x, a), row in action.items():
            if x not in self.g.basis or a not in self.h.basis or any(b not in self.h.basis for b in row):
                raise SchemaError("action", f"entry ({x}, {a}) refers to unknown basis vectors")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "action", action)
        verdict = crossed_module_axioms(self)
        if not verdict.ok:
            raise CrossedModuleError(verdict.kind, verdict.message, verdict.witness)

    def apply_m(self, u):
        out = {}
        for a, coeff in u.items():
            for k, c in self.m.get(a, {}).items():
                out[k] = out.get(k, 0) + coeff * c
        return {k: c for k, c in out.items() if c}

    def act(self, x_vec, h_vec):
        out = {}
        for x, cx in x_vec.items():
            for a, ca in h_vec.items():
                for b, c in self.action.get((x, a), {}).items():
                    out[b] = out.get(b, 0) + cx * ca * c
        return {k: c for k, c in out.items() if c}


def crossed_module_axioms(cm):
    """Check the axioms in a fixed order and name the first one that fails."""
    g, h = cm.g, cm.h

    def e(name):
        return {name: Fraction(1)}

    for a, b in combinations(h.basis, 2):
        diff = _sub(cm.apply_m(h.bracket(e(a), e(b))), g.bracket(cm.apply_m(e(a)), cm.apply_m(e(b))))
        if diff:
            return Verdict.failed("lie_map", f"m[{a}, {b}] != [m {a}, m {b}]", {"h": [a, b], "difference": _vector_str(diff)})
    for x in g.basis:
        for a in h.basis:
            diff = _sub(cm.apply_m(cm.act(e(x), e(a))), g.bracket(e(x), cm.apply_m(e(a))))
            if diff:
                return Verdict.failed(
                    "equivariance", f"m(μ({x}){a}) != [{x}, m {a}]", {"g": x, "h": a, "difference": _vector_str(diff)}
                )
    for a in h.basis:
        for b in h.basis:
            diff = _sub(cm.act(cm.apply_m(e(a)), e(b)), h.bracket(e(a), e(b)))
            if diff:
                return Verdict.failed(
                    "peiffer", f"μ(m {a}){b} != [{a}, {b}]", {"h": [a, b], "difference": _vector_str(diff)}
                )
    for x, y in combinations(g.basis, 2):
        for a in h.basis:
            lhs = cm.act(g.bracket(e(x), e(y)), e(a))
            rhs = _sub(cm.act(e(x), cm.act(e(y), e(a))), cm.act(e(y), cm.act(e(x), e(a))))
            diff = _sub(lhs, rhs)
            if diff:
                return Verdict.failed(
                    "action", f"μ([{x}, {y}]) != [μ({x}), μ({y})] on {a}", {"g": [x, y], "h": a, "difference": _vector_str(diff)}
                )
    for x in g.basis:
        for a, b in combinations(h.basis, 2):
            lhs = cm.act(e(x), h.bracket(e(a), e(b)))
            rhs = h.bracket(cm.act(e(x), e(a)), e(b))
            for k, c in h.bracket(e(a), cm.act(e(x), e(b))).items():
                rhs[k] = rhs.get(k, 0) + c
            diff = _sub(lhs, rhs)
            if diff:
                return Verdict.failed(
                    "derivation", f"μ({x}) is not a derivation on [{a}, {b}]", {"g": x, "h": [a, b], "difference": _vector_str(diff)}
                )
    return Verdict.passed("crossed module axioms hold")


def crossed_to_dgla(cm):
    """Two-term DGLA: ``g`` in degree 0, ``h`` in degree -1, differential ``m``."""
    basis = tuple(GenSpec(x, 0, EVEN) for x in cm.g.basis) + tuple(GenSpec(a, -1, ODD) for a in cm.h.basis)
    brackets = {1: {}, 2: {}}
    for a, row in cm.m.items():
        if row:
            brackets[1][(a,)] = dict(row)
    for key, row in cm.g.constants.items():
        brackets[2][key] = dict(row)
    for (x, a), row in cm.action.items():
        if row:
            brackets[2][(x, a)] = dict(row)
    L = LInftyAlgebra(basis, brackets)
    logger.debug("crossed module gives a DGLA with %d basis vectors", len(basis))
    return L


def identity_crossed_module():
    line_g = LieAlgebra(("x",), {})
    line_h = LieAlgebra(("y",), {})
    return CrossedModule(line_g, line_h, {"y": {"x": 1}}, {})


def heisenberg_center_crossed_module():
    g = heisenberg_lie()
    h = LieAlgebra(("z",), {})
    return CrossedModule(g, h, {"z": {"e3": 1}}, {})


def adjoint_crossed_module(lie, sign_flip=None):
    """``m = id`` and ``μ = ad`` on a renamed copy of ``lie``.

    ``sign_flip=(x, a)`` negates one action entry for mutation tests; the
    constructor then rejects the result.
    """
    rename = {name: f"h_{name}" for name in lie.basis}
    h = LieAlgebra(
        tuple(rename[n] for n in lie.basis),
        {(rename[x], rename[y]): {rename[z]: c for z, c in row.items()} for (x, y), row in lie.constants.items()},
    )
    m = {rename[n]: {n: 1} for n in lie.basis}
    action = {}
    for x in lie.basis:
        for a in lie.basis:
            row = {rename[z]: c for z, c in lie.structure(x, a).items()}
            if sign_flip == (x, a):
                row = {k: -c for k, c in row.items()}
            if row:
                action[(x, rename[a])] = row
    return CrossedModule(lie, h, m, action)


# -- group cocycles ----------------------------------------------------------


@dataclass(frozen=True)
class GroupCocycle:
    """Polynomial n-cochain ``φ: G^n -> h`` on a polynomial group.

    ``phi[k]`` lives in ``group.slot_algebra(n)``. ``action[(b, a)]`` is the
    matrix entry of ``μ(g)`` in ``group.slot_algebra(1)``; ``None`` means
    the trivial action.
    """

    group: object
    h: Tuple[str, ...]
    n: int
    phi: Mapping[str, object]
    action: Optional[Mapping[Tuple[str, str], object]] = None

    def __post_init__(self):
        object.__setattr__(self, "h", tuple(self.h))
        if self.n < 2:
            raise PreconditionError("cocycle arity must be at least 2")
        slots = self.group.slot_algebra(self.n)
        for k in self.h:
            if k in self.phi and self.phi[k].algebra != slots:
                raise SchemaError("phi", f"component {k} is not a polynomial in {self.n} group slots")

    def component(self, k):
        return self.phi.get(k, self.group.slot_algebra(self.n).zero())

    def evaluate(self, points, target):
        """``φ(points)`` where each point maps group coordinates to elements of ``target``."""
        images = {}
        for slot, point in enumerate(points, start=1):
            for c in self.group.coordinates:
                images[f"{c}_{slot}"] = point[c]
        return {k: substitute(images, self.component(k), target, graded=False) for k in self.h}

    def act(self, point, vector, target):
        if self.action is None:
            return dict(vector)
        images = {f"{c}_1": point[c] for c in self.group.coordinates}
        out = {b: target.zero() for b in self.h}
        for (b, a), entry in self.action.items():
            out[b] = out[b] + substitute(images, entry, target, graded=False) * vector[a]
        return out


def group_cocycle_check(cocycle):
    """Inhomogeneous differential ``δφ(g_1..g_{n+1})`` vanishes identically."""
    group, n = cocycle.group, cocycle.n
    target = group.slot_algebra(n + 1)
    points = [group.slot_point(s, target) for s in range(1, n + 2)]
    total = {k: target.zero() for k in cocycle.h}
    first = cocycle.act(points[0], cocycle.evaluate(points[1:], target), target)
    for k in cocycle.h:
        total[k] = total[k] + first[k]
    for i in range(1, n + 1):
        merged = points[: i - 1] + [group.multiply(points[i - 1], points[i], target)] + points[i + 1:]
        term = cocycle.evaluate(merged, target)
        for k in cocycle.h:
            total[k] = total[k] + term[k].scale((-1) ** i)
    last = cocycle.evaluate(points[:n], target)
    for k in cocycle.h:
        total[k] = total[k] + last[k].scale((-1) ** (n + 1))
    failing = {k: str(v) for k, v in total.items() if not v.is_zero()}
    if failing:
        return Verdict.failed("group_cocycle", "group cocycle identity fails", failing)
    return Verdict.passed("group cocycle identity holds")


def vanest(cocycle):
    """Antisymmetrised mixed first derivatives at the identity, without a 1/n! factor.

    Returns ``{sorted g-coordinate tuple: {h: coefficient}}``.
    """
    verdict = group_cocycle_check(cocycle)
    if not verdict.ok:
        raise CocycleError(verdict.message, verdict.witness)
    group, n = cocycle.group, cocycle.n
    slots = group.slot_algebra(n)
    table = {}
    for indices in combinations(group.coordinates, n):
        row = {}
        for perm in permutations(range(n)):
            sign = _perm_sign(perm)
            mono = slots.one()
            for slot, position in enumerate(perm, start=1):
                mono = mono * slots.gen(f"{indices[position]}_{slot}")
            (key,) = mono.terms
            for k in cocycle.h:
                coeff = cocycle.component(k).coefficient(key)
                if coeff:
                    row[k] = row.get(k, 0) + sign * coeff
        row = {k: c for k, c in row.items() if c}
        if row:
            table[indices] = row
    return table


def _perm_sign(perm):
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def infinitesimal_action(cocycle):
    """``ρ(x)[b][a]``: linear part of the action matrix at the identity."""
    rho = {}
    if cocycle.action is None:
        return rho
    slots = cocycle.group.slot_algebra(1)
    for (b, a), entry in cocycle.action.items():
        for x in cocycle.group.coordinates:
            (key,) = slots.gen(f"{x}_1").terms
            coeff = entry.coefficient(key)
            if coeff:
                rho.setdefault(x, {}).setdefault(b, {})[a] = coeff
    return rho


def _cochain_eval(table, vectors, position):
    """Multilinear antisymmetric evaluation of a cochain table on vectors."""
    out = {}

    def walk(depth, names, coeff):
        if depth == len(vectors):
            if len(set(names)) < len(names):
                return
            order = sorted(range(len(names)), key=lambda i: position[names[i]])
            key = tuple(names[i] for i in order)
            row = table.get(key)
            if row is None:
                return
            sign = _perm_sign(order)
            for k, c in row.items():
                out[k] = out.get(k, 0) + sign * coeff * c
            return
        for name, c in vectors[depth].items():
            walk(depth + 1, names + [name], coeff * c)

    walk(0, [], Fraction(1))
    return {k: c for k, c in out.items() if c}


def lie_cocycle_violations(lie, table, rho=None):
    """Chevalley-Eilenberg differential of an h-valued cochain on basis tuples."""
    rho = rho or {}
    n = len(next(iter(table))) if table else 0
    if n == 0:
        return []
    position = {name: i for i, name in enumerate(lie.basis)}
    failures = []
    for args in combinations(lie.basis, n + 1):
        vecs = [{a: Fraction(1)} for a in args]
        total = {}
        for i, x in enumerate(args):
            rest = vecs[:i] + vecs[i + 1:]
            value = _cochain_eval(table, rest, position)
            for b, row in rho.get(x, {}).items():
                for a, c in row.items():
                    if a in value:
                        total[b] = total.get(b, 0) + (-1) ** i * c * value[a]
        for i, j in combinations(range(n + 1), 2):
            rest = [v for p, v in enumerate(vecs) if p not in (i, j)]
            value = _cochain_eval(table, [lie.bracket(vecs[i], vecs[j])] + rest, position)
            for k, c in value.items():
                total[k] = total.get(k, 0) + (-1) ** (i + j) * c
        total = {k: c for k, c in total.items() if c}
        if total:
            failures.append({"arguments": list(args), "value": _vector_str(total)})
    return failures


def extension_linfty(lie, h, n, table, rho=None):
    """``g`` in degree 0, abelian ``h`` in degree ``2 - n`` and an arity-n bracket from an h-valued n-cochain.

    ``rho[x][b][a]`` is the g-action on h; ``table`` maps sorted g-tuples to ``{h: c}``.
    """
    overlap = set(lie.basis) & set(h)
    if overlap:
        raise SchemaError("h", f"names shared with the group coordinates: {sorted(overlap)}")
    basis = tuple(GenSpec(x, 0, EVEN) for x in lie.basis) + tuple(
        GenSpec(k, 2 - n, n % 2) for k in h
    )
    brackets = {2: {key: dict(row) for key, row in lie.constants.items()}}
    for x, matrix in (rho or {}).items():
        for b, row in matrix.items():
            for a, c in row.items():
                brackets[2].setdefault((x, a), {})[b] = c
    for key, row in table.items():
        merged = brackets.setdefault(n, {}).setdefault(key, {})
        for k, c in row.items():
            merged[k] = merged.get(k, 0) + c
    return LInftyAlgebra(basis, brackets)


def cocycle_to_linfty(cocycle):
    """The Van Est bracket of a group cocycle placed at arity n over the Lie algebra of the group."""
    lie = lie_from_group_law(cocycle.group)
    return extension_linfty(lie, cocycle.h, cocycle.n, vanest(cocycle), infinitesimal_action(cocycle))


# -- Weil algebra ------------------------------------------------------------


@dataclass(frozen=True)
class WeilAlgebra:
    lie: LieAlgebra
    manifold: GradedManifold
    d: Derivation

    def xi(self, a):
        return f"xi_{a}"

    def t(self, a):
        return f"t_{a}"

    @property
    def q_structure(self):
        return QStructure(self.manifold, self.d)

    def contraction(self, a):
        """``ι_a``: ``ξ^b -> δ_ab``, ``t^b -> 0``."""
        return Derivation(self.manifold.algebra, -1, ODD, {self.xi(a): self.manifold.algebra.one()})

    def lie_derivative(self, a):
        return derivation_commutator(self.d, self.contraction(a))

    def combination(self, vector, builder, degree, parity):
        total = Derivation(self.manifold.algebra, degree, parity, {})
        for name, coeff in vector.items():
            total = total + builder(name).scale(coeff)
        return total


def weil(lie, check=True):
    """``dξ^a = t^a - 1/2 c^a_bc ξ^b ξ^c`` and ``dt^a = -c^a_bc ξ^b t^c``.

    With ``check`` the structure constants must satisfy Jacobi.
    """
    if check:
        violations = jacobi_violations(lie)
        if violations:
            raise PreconditionError("structure constants violate the Jacobi identity", violations[0])
    coords = tuple(GenSpec(f"xi_{a}", 1, ODD) for a in lie.basis) + tuple(
        GenSpec(f"t_{a}", 2, EVEN) for a in lie.basis
    )
    X = GradedManifold(coords)
    alg = X.algebra
    values = {}
    for a in lie.basis:
        value = alg.gen(f"t_{a}")
        dt = alg.zero()
        for b in lie.basis:
            for c in lie.basis:
                coeff = lie.structure(b, c).get(a, 0)
                if not coeff:
                    continue
                value = value - (alg.gen(f"xi_{b}") * alg.gen(f"xi_{c}")).scale(Fraction(coeff) / 2)
                dt = dt - (alg.gen(f"xi_{b}") * alg.gen(f"t_{c}")).scale(coeff)
        values[f"xi_{a}"] = value
        values[f"t_{a}"] = dt
    return WeilAlgebra(lie, X, Derivation(alg, 1, ODD, values))


def cartan_violations(W):
    """Relations among d, ι and L that fail, each named with its indices."""
    failures = []
    verdict = check_q(W.d)
    if not verdict.ok:
        failures.append({"relation": "d^2 = 0", "witness": verdict.witness})
    basis = W.lie.basis
    zero_odd = Derivation(W.manifold.algebra, -1, ODD, {})
    for a in basis:
        if not derivation_commutator(W.d, W.lie_derivative(a)).is_zero():
            failures.append({"relation": "[d, L] = 0", "indices": [a]})
        for b in basis:
            if derivation_commutator(W.contraction(a), W.contraction(b)) != zero_odd:
                failures.append({"relation": "[i, i] = 0", "indices": [a, b]})
            bracket = W.lie.structure(a, b)
            expected_i = W.combination(bracket, W.contraction, -1, ODD)
            if derivation_commutator(W.lie_derivative(a), W.contraction(b)) != expected_i:
                failures.append({"relation": "[L, i] = i[,]", "indices": [a, b]})
            expected_l = W.combination(bracket, W.lie_derivative, 0, EVEN)
            if derivation_commutator(W.lie_derivative(a), W.lie_derivative(b)) != expected_l:
                failures.append({"relation": "[L, L] = L[,]", "indices": [a, b]})
    return failures


# -- gerbe descent data --------------------------------------------------------

SLOTS = ("x", "y", "z", "w")


def point_algebra(fiber_dim, points=3):
    """Even coordinates ``x1..xp, y1..yp, ...`` for ``points`` points of the fiber."""
    return Algebra(tuple(even(f"{s}{i}") for s in SLOTS[:points] for i in range(1, fiber_dim + 1)))


def fiber_forms(fiber_dim):
    return pit(manifold(*(even(f"x{i}") for i in range(1, fiber_dim + 1))))


def _relabel(h, fiber_dim, slots, target):
    images = {
        f"{s}{i}": target.gen(f"{new}{i}")
        for s, new in zip(SLOTS, slots)
        for i in range(1, fiber_dim + 1)
    }
    return substitute(images, h, target)


def gerbe_cocycle_check(h, fiber_dim):
    """Additive cocycle: ``h(x,x,y) = h(x,y,y) = 0`` and the four-point identity."""
    four = point_algebra(fiber_dim, 4)
    checks = (
        ("h(x,x,y) = 0", _relabel(h, fiber_dim, "xxy", four)),
        ("h(x,y,y) = 0", _relabel(h, fiber_dim, "xyy", four)),
        (
            "h(x,y,z) + h(x,z,w) = h(x,y,w) + h(y,z,w)",
            _relabel(h, fiber_dim, "xyz", four)
            + _relabel(h, fiber_dim, "xzw", four)
            - _relabel(h, fiber_dim, "xyw", four)
            - _relabel(h, fiber_dim, "yzw", four),
        ),
    )
    for identity, value in checks:
        if not value.is_zero():
            return Verdict.failed("gerbe_cocycle", f"{identity} fails", {"identity": identity, "value": str(value)})
    return Verdict.passed("additive cocycle")


def _on_diagonal(value, fiber_dim, forms):
    images = {f"{s}{i}": forms.gen(f"x{i}") for s in SLOTS[:3] for i in range(1, fiber_dim + 1)}
    return substitute(images, value, forms.algebra)


def gerbe_two_form(h, fiber_dim):
    """``ω = Σ_{i<j} (∂_{y_i}∂_{z_j} - ∂_{y_j}∂_{z_i}) h |_{x=y=z} dx_i dx_j``."""
    verdict = gerbe_cocycle_check(h, fiber_dim)
    if not verdict.ok:
        raise CocycleError(verdict.message, verdict.witness)
    alg = h.algebra
    forms = fiber_forms(fiber_dim)
    omega = forms.algebra.zero()
    for i, j in combinations(range(1, fiber_dim + 1), 2):
        mixed = partial(alg, f"y{i}")(partial(alg, f"z{j}")(h)) - partial(alg, f"y{j}")(partial(alg, f"z{i}")(h))
        coefficient = _on_diagonal(mixed, fiber_dim, forms)
        omega = omega + coefficient * forms.gen(f"dx{i}") * forms.gen(f"dx{j}")
    return forms, omega


def bilinear_cocycle(fiber_dim, matrix):
    """``h(x,y,z) = B(y - x, z - y)`` for the bilinear form with the given matrix."""
    alg = point_algebra(fiber_dim)
    h = alg.zero()
    for i in range(fiber_dim):
        for j in range(fiber_dim):
            coeff = to_scalar(matrix[i][j])
            if coeff:
                u = alg.gen(f"y{i + 1}") - alg.gen(f"x{i + 1}")
                v = alg.gen(f"z{j + 1}") - alg.gen(f"y{j + 1}")
                h = h + (u * v).scale(coeff)
    return h


def coboundary_cocycle(a, fiber_dim):
    """``h = a(y,z) - a(x,z) + a(x,y)`` for ``a`` in the x/y point variables."""
    alg = point_algebra(fiber_dim)
    return (
        _relabel(a, fiber_dim, "yz", alg)
        - _relabel(a, fiber_dim, "xz", alg)
        + _relabel(a, fiber_dim, "xy", alg)
    )


def coboundary_one_form(a, fiber_dim):
    """``θ = Σ_j ∂_{y_j} a |_{y=x} dx_j``; its differential is the gerbe form of the coboundary."""
    forms = fiber_forms(fiber_dim)
    theta = forms.algebra.zero()
    for j in range(1, fiber_dim + 1):
        coefficient = _on_diagonal(partial(a.algebra, f"y{j}")(a), fiber_dim, forms)
        theta = theta + coefficient * forms.gen(f"dx{j}")
    return forms, theta


def degree_two_line():
    """R[2]: one even coordinate ``t`` of degree 2 with ``dt = 0``."""
    X = manifold(GenSpec("t", 2, EVEN))
    return QStructure(X, Derivation(X.algebra, 1, ODD, {}))


def two_form_basis(fiber_dim, max_degree):
    """Monomial 2-forms ``x^α dx_i dx_j`` with polynomial degree at most ``max_degree``."""
    forms = fiber_forms(fiber_dim)
    alg = forms.algebra
    coords = [f"x{i}" for i in range(1, fiber_dim + 1)]
    monomials = [alg.one()]
    frontier = [alg.one()]
    for _ in range(max_degree):
        frontier = list({m * alg.gen(c) for m in frontier for c in coords})
        monomials.extend(frontier)
    basis = []
    for i, j in combinations(range(1, fiber_dim + 1), 2):
        for m in sorted(monomials, key=str):
            basis.append(m * alg.gen(f"dx{i}") * alg.gen(f"dx{j}"))
    return forms, basis


def app1_closed_two_forms(fiber_dim, max_degree):
    """2-forms ``ω`` for which ``t -> ω`` is a dg morphism out of R[2], as a kernel basis."""
    forms, basis = two_form_basis(fiber_dim, max_degree)
    source = degree_two_line()
    d = de_rham(forms)

    def defect(omega):
        images = {"t": omega}
        return d(omega) - substitute(images, source.Q.value("t"), forms.algebra)

    morphisms = kernel_combinations(basis, [defect(omega) for omega in basis])
    for omega in morphisms:
        verdict = dga_morphism_check({"t": omega}, source, d)
        if not verdict.ok:
            raise PreconditionError("kernel element fails the morphism check", verdict.witness)
    logger.info("app1 on a %d-dimensional fiber: %d morphisms up to degree %d", fiber_dim, len(morphisms), max_degree)
    return forms, morphisms


# -- jets of mapping presheaves ------------------------------------------------


def _pair_names(i):
    return f"x{i}", f"xi{i}", f"tau{i}", f"t{i}"


def pair_maps_jet_raw(p):
    """Q induced on ``f = x + ξθ1 + τθ2 + tθ1θ2`` by the diagonal shift ``θ_i -> θ_i + β``.

    Degrees are the weights of the scaling ``θ_i -> 2θ_i``.
    """
    params = (GenSpec("theta1", 0, ODD), GenSpec("theta2", 0, ODD), GenSpec("beta", 0, ODD))
    ungraded = []
    for i in range(1, p + 1):
        x, xi, tau, t = _pair_names(i)
        ungraded += [GenSpec(x, 0, EVEN), GenSpec(xi, 0, ODD), GenSpec(tau, 0, ODD), GenSpec(t, 0, EVEN)]
    work = Algebra(tuple(ungraded) + params)
    th1, th2, beta = work.gen("theta1"), work.gen("theta2"), work.gen("beta")

    def expand(f):
        low, high = f.split("theta2")
        c0, c1 = low.split("theta1")
        c2, c12 = high.split("theta1")
        return c0, c1, c2, c12

    raw_values, degrees = {}, {}
    for i in range(1, p + 1):
        names = _pair_names(i)
        x, xi, tau, t = (work.gen(n) for n in names)
        f = x + xi * th1 + tau * th2 + t * th1 * th2
        shifted = substitute({"theta1": th1 + beta, "theta2": th2 + beta}, f, work, graded=False)
        scaled = substitute({"theta1": th1.scale(2), "theta2": th2.scale(2)}, f, work, graded=False)
        for name, coeff, weight in zip(names, expand(shifted), expand(scaled)):
            _, linear = coeff.split("beta")
            raw_values[name] = linear
            ratio = weight.coefficient(next(iter(work.gen(name).terms)))
            degrees[name] = {1: 0, 2: 1, 4: 2}[int(ratio)]
    coords = tuple(GenSpec(spec.name, degrees[spec.name], spec.parity) for spec in ungraded)
    X = GradedManifold(coords)
    values = {}
    for name, value in raw_values.items():
        # the jet coordinates keep their positions, so monomials transfer as they are
        values[name] = Element(X.algebra, value.terms)
    return QStructure(X, Derivation(X.algebra, 1, ODD, values))


def pair_maps_jet(p, n=1):
    """Canonical presentation ``dx = ξ, dξ = 0, dτ = t, dt = 0`` after ``ξ -> ξ + τ``."""
    if n != 1:
        raise PreconditionError("only first-order jets of pair maps are supported")
    raw = pair_maps_jet_raw(p)
    X = raw.manifold
    values = {}
    images = {}
    for i in range(1, p + 1):
        x, xi, tau, t = _pair_names(i)
        values[x] = X.gen(xi)
        values[tau] = X.gen(t)
        images.update({x: raw.manifold.gen(x), xi: raw.manifold.gen(xi) + raw.manifold.gen(tau),
                       tau: raw.manifold.gen(tau), t: raw.manifold.gen(t)})
    canonical = QStructure(X, Derivation(X.algebra, 1, ODD, values))
    verdict = is_q_isomorphism(images, canonical, raw)
    if not verdict.ok:
        raise PreconditionError("canonical change of coordinates failed", verdict.witness)
    return canonical


@dataclass(frozen=True)
class FormSpace:
    degree: int
    basis: Tuple[object, ...]

    @property
    def dim(self):
        return len(self.basis)


def closed_forms_jet(k):
    """Closed k-forms on R^{0|1}: a line in degree k spanned by ``(dθ)^k``."""
    if k < 0:
        raise PreconditionError("form degree must be non-negative")
    _, closed = closed_form_basis(1, k)
    return FormSpace(k, tuple(closed))
