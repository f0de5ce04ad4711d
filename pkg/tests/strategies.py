"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from superjets.schur import YoungDiagram
from superjets.superalg import EVEN, ODD, Derivation, monomial_parity

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def monomials(draw, algebra, max_exponent=2):
    mono = []
    for index, spec in enumerate(algebra.gens):
        top = 1 if spec.parity else max_exponent
        exponent = draw(st.integers(min_value=0, max_value=top))
        if exponent:
            mono.append((index, exponent))
    return tuple(mono)


@st.composite
def elements(draw, algebra, max_terms=4):
    result = algebra.zero()
    for _ in range(draw(st.integers(min_value=0, max_value=max_terms))):
        result = result + algebra.monomial(draw(monomials(algebra)), draw(small_fractions))
    return result


@st.composite
def homogeneous_elements(draw, algebra, parity=None, max_terms=3):
    """Sums of monomials sharing one parity; ``parity`` is drawn when omitted."""
    if parity is None:
        parity = draw(st.sampled_from((EVEN, ODD)))
    same = monomials(algebra, max_exponent=1).filter(
        lambda mono: monomial_parity(algebra, mono) == parity
    )
    result = algebra.zero()
    for _ in range(draw(st.integers(min_value=0, max_value=max_terms))):
        result = result + algebra.monomial(draw(same), draw(small_fractions))
    return result


@st.composite
def derivations(draw, algebra, max_terms=2):
    """Derivations of a drawn parity; degrees are not tracked, signs only see parity."""
    parity = draw(st.sampled_from((EVEN, ODD)))
    values = {}
    for spec in algebra.gens:
        values[spec.name] = draw(homogeneous_elements(algebra, (spec.parity + parity) % 2, max_terms))
    return Derivation(algebra, 0, parity, values, strict=False)


@st.composite
def young_diagrams(draw, max_size=6):
    """Weakly decreasing positive rows with at most ``max_size`` boxes"""
    rows = []
    remaining = draw(st.integers(min_value=0, max_value=max_size))
    while remaining:
        cap = min(remaining, rows[-1]) if rows else remaining
        row = draw(st.integers(min_value=1, max_value=cap))
        rows.append(row)
        remaining -= row
    return YoungDiagram(tuple(rows))
