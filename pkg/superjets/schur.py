"""Young diagrams, Schur functor dimensions and the decomposition of iterated forms on R^{0|2}."""

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from math import factorial
from typing import Dict, List, Tuple

import sympy

from superjets.dgman import closed_form_basis, de_rham, form_basis, form_weight
from superjets.errors import PreconditionError, SchemaError, Verdict
from superjets.parallel import parallel_map

logger = logging.getLogger(__name__)

EVEN = "even"
ODD = "odd"

# torus variables of the Ω_[2] check; the s-variables carry the truncation degree
TORUS = ("t1", "t2", "s1", "s2")
S_SLOTS = (2, 3)


@dataclass(frozen=True)
class YoungDiagram:
    rows: Tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        if any(r <= 0 for r in rows):
            raise SchemaError("rows", "row lengths must be positive")
        if any(a < b for a, b in zip(rows, rows[1:])):
            raise SchemaError("rows", f"row lengths {list(rows)} are not weakly decreasing")
        object.__setattr__(self, "rows", rows)

    @property
    def size(self):
        return sum(self.rows)

    @property
    def columns(self):
        return self.rows[0] if self.rows else 0

    def column_height(self, j):
        """Height of column ``j`` (1-based)."""
        return sum(1 for r in self.rows if r >= j)

    def boxes(self):
        for i, r in enumerate(self.rows):
            for j in range(r):
                yield i, j

    def hook(self, i, j):
        arm = self.rows[i] - j - 1
        leg = self.column_height(j + 1) - i - 1
        return arm + leg + 1

    def to_list(self):
        return list(self.rows)

    def __str__(self):
        return str(list(self.rows))


def young(rows):
    return YoungDiagram(tuple(rows))


def transpose(diagram):
    return YoungDiagram(tuple(diagram.column_height(j) for j in range(1, diagram.columns + 1)))


def partitions(m, largest=None):
    """Partitions of ``m`` as weakly decreasing tuples, largest first."""
    largest = m if largest is None else largest
    if m == 0:
        yield ()
        return
    for first in range(min(m, largest), 0, -1):
        for rest in partitions(m - first, first):
            yield (first,) + rest


def two_column_diagrams(max_size):
    """Diagrams with exactly two columns and at most ``max_size`` squares."""
    out = []
    for twos in range(1, max_size // 2 + 1):
        for ones in range(0, max_size - 2 * twos + 1):
            out.append(YoungDiagram((2,) * twos + (1,) * ones))
    return out


# -- dimensions ----------------------------------------------------------------


def hook_content_dim(diagram, n):
    value = Fraction(1)
    for i, j in diagram.boxes():
        value *= Fraction(n + j - i, diagram.hook(i, j))
    return int(value)


def _tableaux(diagram, n):
    """Content vectors of all semistandard tableaux with entries ``1..n``."""
    boxes = list(diagram.boxes())
    filling = {}
    contents = []

    def fill(position):
        if position == len(boxes):
            content = [0] * n
            for value in filling.values():
                content[value - 1] += 1
            contents.append(tuple(content))
            return
        i, j = boxes[position]
        low = 1
        if j > 0:
            low = max(low, filling[(i, j - 1)])
        if i > 0:
            low = max(low, filling[(i - 1, j)] + 1)
        for value in range(low, n + 1):
            filling[(i, j)] = value
            fill(position + 1)
        filling.pop((i, j), None)

    fill(0)
    return contents


def schur_polynomial(diagram, n):
    """Schur polynomial in ``n`` variables as ``{exponent tuple: coefficient}``."""
    return dict(Counter(_tableaux(diagram, n)))


def ssyt_count(diagram, n):
    return len(_tableaux(diagram, n))


def schur_dim(diagram, n, parity=EVEN):
    """Dimension of the Schur functor of ``diagram`` on an n-dimensional space of the given parity.

    On an odd space the functor is the one of the transposed diagram.
    """
    if n < 0:
        raise PreconditionError("dimension must be non-negative")
    if parity not in (EVEN, ODD):
        raise SchemaError("parity", f"unknown parity {parity!r}")
    if parity == ODD:
        diagram = transpose(diagram)
    return ssyt_count(diagram, n)


def tensor_jet_dim(diagram, n):
    """Sections over R^{0|n} of the bundle attached to ``diagram``: ``2^n`` times the odd fiber."""
    return 2 ** n * schur_dim(diagram, n, ODD)


@lru_cache(maxsize=None)
def _mn_character(beta, cycles):
    if not cycles:
        return 1
    r, rest = cycles[0], cycles[1:]
    members = set(beta)
    total = 0
    for b in beta:
        moved = b - r
        if moved < 0 or moved in members:
            continue
        sign = (-1) ** sum(1 for c in beta if moved < c < b)
        new_beta = tuple(sorted((members - {b}) | {moved}, reverse=True))
        total += sign * _mn_character(new_beta, rest)
    return total


def character_value(diagram, cycle_type):
    """Irreducible symmetric-group character on a cycle type, by rim-hook removal."""
    cycle_type = tuple(sorted(cycle_type, reverse=True))
    if sum(cycle_type) != diagram.size:
        raise PreconditionError("cycle type and diagram have different sizes")
    length = len(diagram.rows)
    beta = tuple(r + length - 1 - i for i, r in enumerate(diagram.rows))
    return _mn_character(beta, cycle_type)


def _centralizer(cycle_type):
    value = 1
    for part, count in Counter(cycle_type).items():
        value *= part ** count * factorial(count)
    return value


def tensor_power_dim(diagram, n):
    """Multiplicity space dimension in ``V^{⊗m}``: average of ``χ(σ) n^{cycles(σ)}`` over ``S_m``."""
    total = Fraction(0)
    for cycle_type in partitions(diagram.size):
        total += Fraction(character_value(diagram, cycle_type) * n ** len(cycle_type), _centralizer(cycle_type))
    return int(total)


# -- composition series ------------------------------------------------------------


def composition_series(diagram):
    """Subquotient diagrams for a two-column diagram.

    Each step moves the lowest square of the second column to the end of the
    first row, until the second column has a single square.
    """
    if diagram.columns != 2:
        raise PreconditionError(f"composition series needs a two-column diagram, got {diagram}")
    series = [diagram]
    rows = list(diagram.rows)
    while sum(1 for r in rows if r >= 2) > 1:
        lowest = max(i for i, r in enumerate(rows) if r >= 2)
        rows[lowest] -= 1
        rows[0] += 1
        series.append(YoungDiagram(tuple(rows)))
    return series


def closed_forms_dim(k, n):
    if k < 0 or n < 0:
        raise PreconditionError("form degree and fiber dimension must be non-negative")
    _, closed = closed_form_basis(n, k)
    return len(closed)


# -- characters ------------------------------------------------------------------------


@dataclass
class CharacterSeries:
    """Power series in the torus variables, truncated in the degree of the ``graded`` slots."""

    truncation: int
    coefficients: Dict[Tuple[int, ...], int] = field(default_factory=dict)
    variables: Tuple[str, ...] = TORUS
    graded: Tuple[int, ...] = S_SLOTS

    def __post_init__(self):
        self.coefficients = {
            e: c for e, c in self.coefficients.items() if c and self.degree(e) <= self.truncation
        }

    def degree(self, exponents):
        return sum(exponents[i] for i in self.graded)

    def _like(self, coefficients):
        return CharacterSeries(self.truncation, coefficients, self.variables, self.graded)

    def __add__(self, other):
        out = Counter(self.coefficients)
        out.update(other.coefficients)
        return self._like(dict(out))

    def __sub__(self, other):
        out = Counter(self.coefficients)
        out.subtract(other.coefficients)
        return self._like(dict(out))

    def __mul__(self, other):
        out = Counter()
        for e1, c1 in self.coefficients.items():
            for e2, c2 in other.coefficients.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if self.degree(e) <= self.truncation:
                    out[e] += c1 * c2
        return self._like(dict(out))

    def __eq__(self, other):
        if not isinstance(other, CharacterSeries):
            return NotImplemented
        return self.truncation == other.truncation and self.coefficients == other.coefficients

    def slice(self, d):
        return self._like({e: c for e, c in self.coefficients.items() if self.degree(e) == d})

    def dimension(self, d=None):
        if d is None:
            return sum(self.coefficients.values())
        return sum(c for e, c in self.coefficients.items() if self.degree(e) == d)

    def monomial_str(self, exponents):
        parts = []
        for name, power in zip(self.variables, exponents):
            if power == 1:
                parts.append(name)
            elif power:
                parts.append(f"{name}^{power}")
        return "*".join(parts) or "1"

    def to_dict(self):
        return {self.monomial_str(e): c for e, c in sorted(self.coefficients.items())}


def jet_character(diagram, slots, truncation):
    """Character of sections of the ``diagram`` bundle over R^{0|2}, placed in two torus slots.

    Functions on the fiber contribute ``(1 + u1)(1 + u2)``; the odd fiber
    contributes the Schur polynomial of the transposed diagram.
    """
    width = len(TORUS)
    out = Counter()
    for exps, coeff in schur_polynomial(transpose(diagram), 2).items():
        for extra in ((0, 0), (1, 0), (0, 1), (1, 1)):
            e = [0] * width
            for slot, power, bump in zip(slots, exps, extra):
                e[slot] = power + bump
            out[tuple(e)] += coeff
    return CharacterSeries(truncation, dict(out))


# generators of functions on Hom(R^{0|2}, R^{0|2}) and their torus weights (t1, t2, s1, s2)
def hom_generators():
    even_gens = []
    odd_gens = []
    for i in (0, 1):
        s = [0, 0, 0, 0]
        s[2 + i] = 1
        odd_gens.append((f"beta{i + 1}", tuple(s)))
        odd_gens.append((f"gamma{i + 1}", (1, 1) + tuple(s[2:])))
        for j in (0, 1):
            w = list(s)
            w[j] = 1
            even_gens.append((f"a{i + 1}{j + 1}", tuple(w)))
    return even_gens, odd_gens


def _hom_slice(degree):
    even_gens, odd_gens = hom_generators()
    out = Counter()
    for odd_count in range(0, min(degree, len(odd_gens)) + 1):
        for odd_part in combinations(odd_gens, odd_count):
            for even_part in combinations_with_replacement(even_gens, degree - odd_count):
                weight = [0, 0, 0, 0]
                for _, w in odd_part + even_part:
                    weight = [a + b for a, b in zip(weight, w)]
                out[tuple(weight)] += 1
    return dict(out)


def hom_character(truncation, workers=None):
    """Brute-force character of polynomial functions on Hom(R^{0|2}, R^{0|2})."""
    slices = parallel_map(_hom_slice, range(truncation + 1), workers)
    total = Counter()
    for piece in slices:
        total.update(piece)
    return CharacterSeries(truncation, dict(total))


def generic_character(truncation):
    """Sum over two-column diagrams of (dual sections in t) times (sections in s)."""
    total = CharacterSeries(truncation)
    for diagram in two_column_diagrams(truncation):
        left = jet_character(diagram, (0, 1), truncation)
        right = jet_character(diagram, S_SLOTS, truncation)
        total = total + left * right
    return total


def _form_data(max_degree):
    """Monomial bases of forms on R^{0|2}, their weights, parities and d-matrices."""
    bases, weights, parities, d_images = [], [], [], []
    for p in range(max_degree + 2):
        forms, basis = form_basis(2, p)
        monos = [next(iter(e.terms)) for e in basis]
        bases.append(monos)
        weights.append([form_weight(forms, m) for m in monos])
        odd = {forms.algebra.index("theta1"), forms.algebra.index("theta2")}
        parities.append([sum(x for g, x in m if g in odd) % 2 for m in monos])
        d = de_rham(forms)
        d_images.append([dict(d(e).terms) for e in basis])
    return bases, weights, parities, d_images


def _quotient_slice(degree):
    """Cokernel character, at s-degree ``degree``, of ``f*⊗η ↦ ±f*⊗dη − dᵗf*⊗η``."""
    bases, weights, parities, d_images = _form_data(degree + 1)
    position = [{m: i for i, m in enumerate(b)} for b in bases]

    def s_ok(p, i):
        return sum(weights[p][i]) == degree

    targets = {}
    for p in range(degree + 1):
        for f in range(len(bases[p])):
            for eta in range(len(bases[p])):
                if s_ok(p, eta):
                    targets[(p, f, eta)] = weights[p][f] + weights[p][eta]
    images = []
    for p in range(1, degree + 2):
        for f in range(len(bases[p])):
            sign = -1 if parities[p][f] else 1
            for eta in range(len(bases[p - 1])):
                if not s_ok(p - 1, eta):
                    continue
                image = Counter()
                for mono, coeff in d_images[p - 1][eta].items():
                    image[(p, f, position[p][mono])] += sign * coeff
                # (dᵗ f*) = Σ_g f*(dg) g*
                for g in range(len(bases[p - 1])):
                    coeff = d_images[p - 1][g].get(bases[p][f], 0)
                    if coeff:
                        image[(p - 1, g, eta)] -= coeff
                images.append((weights[p][f] + weights[p - 1][eta], image))
    by_weight = Counter(targets.values())
    blocks = {}
    for weight, image in images:
        blocks.setdefault(weight, []).append(image)
    out = {}
    for weight, count in by_weight.items():
        rows = sorted(k for k, w in targets.items() if w == weight)
        rank = 0
        if blocks.get(weight):
            row = {k: r for r, k in enumerate(rows)}
            matrix = sympy.zeros(len(rows), len(blocks[weight]))
            for col, image in enumerate(blocks[weight]):
                for key, coeff in image.items():
                    if coeff:
                        matrix[row[key], col] = sympy.Rational(Fraction(coeff).numerator, Fraction(coeff).denominator)
            rank = matrix.rank()
        if count - rank:
            out[weight] = count - rank
    return out


def quotient_character(truncation, workers=None):
    slices = parallel_map(_quotient_slice, range(truncation + 1), workers)
    total = Counter()
    for piece in slices:
        total.update(piece)
    return CharacterSeries(truncation, dict(total))


@dataclass
class OmegaReport:
    truncation: int
    calibrated: bool
    slices: List[dict]
    verdict: Verdict

    @property
    def ok(self):
        return self.verdict.ok

    def to_dict(self):
        return {
            "truncation": self.truncation,
            "calibrated": self.calibrated,
            "slices": self.slices,
            "verdict": self.verdict.to_dict(),
        }


CALIBRATION_DEGREE = 2


def _compare(lhs, generic, quotient, degree):
    left = lhs.slice(degree)
    right = (generic + quotient).slice(degree)
    entry = {
        "degree": degree,
        "lhs_dim": left.dimension(),
        "generic_dim": generic.dimension(degree),
        "quotient_dim": quotient.dimension(degree),
        "ok": left == right,
    }
    if not entry["ok"]:
        difference = left - right
        entry["difference"] = difference.to_dict()
    return entry


def omega2_character_identity(truncation, workers=None):
    """Compare both sides of the Ω_[2](R^{0|2}) decomposition as torus characters.

    Degrees up to ``CALIBRATION_DEGREE`` are compared first; a mismatch there
    is reported as a calibration failure and the remaining degrees are not run.
    """
    if truncation < 1:
        raise PreconditionError("truncation degree must be at least 1")
    calibration = min(truncation, CALIBRATION_DEGREE)
    slices = []
    lhs = hom_character(calibration, workers)
    generic = generic_character(calibration)
    quotient = quotient_character(calibration, workers)
    for degree in range(calibration + 1):
        slices.append(_compare(lhs, generic, quotient, degree))
    if not all(s["ok"] for s in slices):
        failed = next(s for s in slices if not s["ok"])
        logger.warning("Ω_[2] calibration failed at degree %d", failed["degree"])
        verdict = Verdict.failed("calibration", f"character mismatch at degree {failed['degree']}", failed)
        return OmegaReport(truncation, False, slices, verdict)
    if truncation > calibration:
        lhs = hom_character(truncation, workers)
        generic = generic_character(truncation)
        quotient = quotient_character(truncation, workers)
        for degree in range(calibration + 1, truncation + 1):
            slices.append(_compare(lhs, generic, quotient, degree))
    bad = [s for s in slices if not s["ok"]]
    if bad:
        verdict = Verdict.failed("character", f"character mismatch at degree {bad[0]['degree']}", bad[0])
    else:
        verdict = Verdict.passed(f"characters agree through degree {truncation}")
    logger.info("Ω_[2] identity through degree %d: %s", truncation, verdict.ok)
    return OmegaReport(truncation, True, slices, verdict)
