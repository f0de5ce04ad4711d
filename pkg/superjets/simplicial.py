"""Finite truncated simplicial sets, horn filling and morphism enumeration.

Levels ``0..m+1`` are stored explicitly. Simplices are addressed by their
index within a level; face and degeneracy maps are numpy index arrays with
one row per map, so ``faces[n][i][x]`` is the index of ``d_i x`` in level
``n - 1``.
"""

import logging
from dataclasses import dataclass, field
from functools import partial
from itertools import product
from typing import Dict, Hashable, List, Tuple

import numpy as np

from superjets.errors import PreconditionError, SchemaError, Verdict
from superjets.parallel import parallel_map

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PointedFiniteSet:
    elements: Tuple[Hashable, ...]
    basepoint: Hashable

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if len(set(self.elements)) != len(self.elements):
            raise SchemaError("pointed_set", "duplicate elements")
        if self.basepoint not in self.elements:
            raise SchemaError("pointed_set", f"basepoint {self.basepoint!r} is not an element")

    @property
    def others(self):
        return tuple(e for e in self.elements if e != self.basepoint)

    def __len__(self):
        return len(self.elements)


@dataclass(frozen=True)
class Horn:
    n: int
    k: int
    faces: Tuple[int, ...]


@dataclass
class TruncatedSimplicialSet:
    m: int
    levels: List[List[Hashable]]
    faces: Dict[int, np.ndarray]
    degeneracies: Dict[int, np.ndarray]
    name: str = ""
    _index: List[Dict[Hashable, int]] = field(default_factory=list, repr=False)

    def __post_init__(self):
        if len(self.levels) != self.m + 2:
            raise SchemaError("levels", f"expected levels 0..{self.m + 1}, got {len(self.levels)}")
        self._index = []
        for n, labels in enumerate(self.levels):
            index = {label: i for i, label in enumerate(labels)}
            if len(index) != len(labels):
                raise SchemaError("levels", f"duplicate simplices in level {n}")
            self._index.append(index)
        for n in range(1, self.m + 2):
            array = np.asarray(self.faces[n], dtype=np.int64)
            if array.shape != (n + 1, len(self.levels[n])):
                raise SchemaError("faces", f"level {n} face table has shape {array.shape}")
            if array.size and (array.min() < 0 or array.max() >= len(self.levels[n - 1])):
                raise SchemaError("faces", f"level {n} face table points outside level {n - 1}")
            self.faces[n] = array
        for n in range(0, self.m + 1):
            array = np.asarray(self.degeneracies[n], dtype=np.int64)
            if array.shape != (n + 1, len(self.levels[n])):
                raise SchemaError("degeneracies", f"level {n} degeneracy table has shape {array.shape}")
            if array.size and (array.min() < 0 or array.max() >= len(self.levels[n + 1])):
                raise SchemaError("degeneracies", f"level {n} degeneracies point outside level {n + 1}")
            self.degeneracies[n] = array
        verdict = simplicial_identities(self)
        if not verdict.ok:
            raise PreconditionError(verdict.message, verdict.witness)

    @property
    def top(self):
        return self.m + 1

    def size(self, n):
        return len(self.levels[n])

    def sizes(self):
        return [len(level) for level in self.levels]

    def index(self, n, label):
        return self._index[n][label]

    def label(self, n, x):
        return self.levels[n][x]

    def face(self, n, i, x):
        return int(self.faces[n][i][x])

    def degeneracy(self, n, i, x):
        return int(self.degeneracies[n][i][x])

    def to_dict(self):
        return {
            "m": self.m,
            "levels": [[_label_str(label) for label in level] for level in self.levels],
            "faces": {str(n): self.faces[n].tolist() for n in sorted(self.faces)},
            "degeneracies": {str(n): self.degeneracies[n].tolist() for n in sorted(self.degeneracies)},
        }


def _label_str(label):
    if isinstance(label, tuple):
        return "(" + ",".join(_label_str(x) for x in label) + ")"
    return str(label)


def simplicial_identities(X):
    """Check the face/degeneracy identities wherever both sides are stored."""
    for n in range(2, X.m + 2):
        d_n, d_low = X.faces[n], X.faces[n - 1]
        for j in range(n + 1):
            for i in range(j):
                lhs = d_low[i][d_n[j]]
                rhs = d_low[j - 1][d_n[i]]
                bad = np.nonzero(lhs != rhs)[0]
                if bad.size:
                    x = int(bad[0])
                    return Verdict.failed(
                        "simplicial_identity", f"d_{i} d_{j} != d_{j - 1} d_{i} at level {n}",
                        {"level": n, "simplex": _label_str(X.label(n, x))},
                    )
    for n in range(0, X.m + 1):
        s_n, d_up = X.degeneracies[n], X.faces[n + 1]
        identity = np.arange(X.size(n))
        for j in range(n + 1):
            for i in range(n + 2):
                lhs = d_up[i][s_n[j]]
                if i < j:
                    rhs = X.degeneracies[n - 1][j - 1][X.faces[n][i]]
                elif i in (j, j + 1):
                    rhs = identity
                else:
                    rhs = X.degeneracies[n - 1][j][X.faces[n][i - 1]]
                bad = np.nonzero(lhs != rhs)[0]
                if bad.size:
                    return Verdict.failed(
                        "simplicial_identity", f"d_{i} s_{j} identity fails at level {n}",
                        {"level": n, "simplex": _label_str(X.label(n, int(bad[0])))},
                    )
        if n + 1 <= X.m:
            s_up = X.degeneracies[n + 1]
            for j in range(n + 1):
                for i in range(j + 1):
                    if np.any(s_up[i][s_n[j]] != s_up[j + 1][s_n[i]]):
                        return Verdict.failed(
                            "simplicial_identity", f"s_{i} s_{j} != s_{j + 1} s_{i} at level {n}", {"level": n}
                        )
    return Verdict.passed("simplicial identities hold")


def from_functions(m, levels, face, degeneracy, name=""):
    """Build from labels per level and functions ``face(n, i, label)``, ``degeneracy(n, i, label)``."""
    levels = [list(level) for level in levels]
    index = [{label: i for i, label in enumerate(level)} for level in levels]
    faces = {}
    for n in range(1, m + 2):
        faces[n] = np.array(
            [[index[n - 1][face(n, i, label)] for label in levels[n]] for i in range(n + 1)],
            dtype=np.int64,
        ).reshape(n + 1, len(levels[n]))
    degeneracies = {}
    for n in range(0, m + 1):
        degeneracies[n] = np.array(
            [[index[n + 1][degeneracy(n, i, label)] for label in levels[n]] for i in range(n + 1)],
            dtype=np.int64,
        ).reshape(n + 1, len(levels[n]))
    return TruncatedSimplicialSet(m, levels, faces, degeneracies, name)


def from_explicit(document):
    """Simplicial set given level by level with label-valued face and degeneracy tables."""
    try:
        m = int(document["m"])
        levels = [[str(label) for label in level] for level in document["levels"]]
        index = [{label: i for i, label in enumerate(level)} for level in levels]
        faces = {
            int(n): [[index[int(n) - 1][str(label)] for label in row] for row in rows]
            for n, rows in document["faces"].items()
        }
        degeneracies = {
            int(n): [[index[int(n) + 1][str(label)] for label in row] for row in rows]
            for n, rows in document.get("degeneracies", {}).items()
        }
    except KeyError as exc:
        raise SchemaError("simplicial_set", f"missing or unknown entry {exc}") from None
    return TruncatedSimplicialSet(m, levels, faces, degeneracies, document.get("name", "explicit"))


# -- builders ------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteGroup:
    elements: Tuple[str, ...]
    table: np.ndarray = field(compare=False)
    identity: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(str(e) for e in self.elements))
        table = np.asarray(self.table, dtype=np.int64)
        n = len(self.elements)
        if table.shape != (n, n) or (n and (table.min() < 0 or table.max() >= n)):
            raise SchemaError("table", "group table must be a square table of element indices")
        object.__setattr__(self, "table", table)
        identities = [e for e in range(n) if np.array_equal(table[e], np.arange(n)) and np.array_equal(table[:, e], np.arange(n))]
        if not identities:
            raise PreconditionError("group table has no identity")
        object.__setattr__(self, "identity", identities[0])
        left = table[table, :]  # left[a, b, c] = (ab)c
        right = table[:, table]  # right[a, b, c] = a(bc)
        bad = np.argwhere(left != right)
        if bad.size:
            a, b, c = (self.elements[int(i)] for i in bad[0])
            raise PreconditionError("group table is not associative", {"triple": [a, b, c]})
        for e in range(n):
            if self.identity not in table[e]:
                raise PreconditionError("element has no inverse", {"element": self.elements[e]})

    @property
    def order(self):
        return len(self.elements)

    def mul(self, a, b):
        return int(self.table[a, b])


def group_from_table(elements, table):
    """Table given with element labels, as in input documents."""
    position = {str(e): i for i, e in enumerate(elements)}
    try:
        indices = [[position[str(x)] for x in row] for row in table]
    except KeyError as exc:
        raise SchemaError("table", f"unknown element {exc}") from None
    return FiniteGroup(tuple(elements), np.array(indices, dtype=np.int64).reshape(len(elements), len(elements)))


def cyclic_group(n):
    return FiniteGroup(tuple(str(i) for i in range(n)), np.add.outer(np.arange(n), np.arange(n)) % n)


def klein_group():
    table = np.array([[a ^ b for b in range(4)] for a in range(4)])
    return FiniteGroup(("e", "a", "b", "ab"), table)


def nerve_group(G, m=2):
    """Nerve with ``X_n = G^n``; faces multiply adjacent entries, degeneracies insert the identity."""
    levels = [list(product(range(G.order), repeat=n)) for n in range(m + 2)]

    def face(n, i, g):
        if i == 0:
            return g[1:]
        if i == n:
            return g[:-1]
        return g[: i - 1] + (G.mul(g[i - 1], g[i]),) + g[i + 1:]

    def degeneracy(n, i, g):
        return g[:i] + (G.identity,) + g[i:]

    return from_functions(m, levels, face, degeneracy, name=f"nerve({G.order})")


def _monotone(p, length):
    if length == 0:
        return [()]
    out = []
    for seq in product(range(p + 1), repeat=length):
        if all(a <= b for a, b in zip(seq, seq[1:])):
            out.append(seq)
    return out


def _drop(seq, i):
    return seq[:i] + seq[i + 1:]


def _repeat(seq, i):
    return seq[: i + 1] + seq[i:]


def delta_simplex(p, m=1):
    """The standard simplex Δ[p]: weakly increasing sequences in ``0..p``."""
    levels = [_monotone(p, n + 1) for n in range(m + 2)]
    return from_functions(m, levels, lambda n, i, s: _drop(s, i), lambda n, i, s: _repeat(s, i), name=f"delta[{p}]")


def discrete(points, m=0):
    """Constant simplicial set on a finite set: every simplex is degenerate on a vertex."""
    points = list(points)
    levels = [points for _ in range(m + 2)]
    return from_functions(m, levels, lambda n, i, x: x, lambda n, i, x: x, name="discrete")


def pair_nerve(S, m=2):
    """All maps ``[n] -> S`` as tuples, with faces dropping and degeneracies repeating entries."""
    elements = S.elements if isinstance(S, PointedFiniteSet) else tuple(S)
    levels = [list(product(elements, repeat=n + 1)) for n in range(m + 2)]
    return from_functions(m, levels, lambda n, i, s: _drop(s, i), lambda n, i, s: _repeat(s, i), name="pairs")


def pair_filtration(S, k, n):
    """``S^(k)_n``: maps with image of size at most k+1, starting at the basepoint when exactly k+1."""
    out = []
    for simplex in product(S.elements, repeat=n + 1):
        image = len(set(simplex))
        if image < k + 1 or (image == k + 1 and simplex[0] == S.basepoint):
            out.append(simplex)
    return out


# -- horns -----------------------------------------------------------------------


def _check_horn_range(X, n, k):
    if not 1 <= n <= X.top:
        raise PreconditionError(f"horn dimension {n} outside 1..{X.top}")
    if not 0 <= k <= n:
        raise PreconditionError(f"horn index {k} outside 0..{n}")


def horn_set(X, n, k):
    """All compatible face families ``(y_i)_{i != k}`` with ``d_i y_j = d_{j-1} y_i`` for ``i < j``."""
    _check_horn_range(X, n, k)
    positions = [i for i in range(n + 1) if i != k]
    candidates = range(X.size(n - 1))
    horns = []
    chosen = {}

    def compatible(j, y):
        if n < 2:
            return True
        for i, x in chosen.items():
            if X.faces[n - 1][i][y] != X.faces[n - 1][j - 1][x]:
                return False
        return True

    def extend(position):
        if position == len(positions):
            horns.append(Horn(n, k, tuple(chosen[i] for i in positions)))
            return
        j = positions[position]
        for y in candidates:
            if compatible(j, y):
                chosen[j] = y
                extend(position + 1)
                del chosen[j]

    extend(0)
    return horns


def horn_of(X, n, k, x):
    return Horn(n, k, tuple(X.face(n, i, x) for i in range(n + 1) if i != k))


def horn_fillers(X, horn):
    faces = X.faces[horn.n]
    mask = np.ones(X.size(horn.n), dtype=bool)
    positions = [i for i in range(horn.n + 1) if i != horn.k]
    for i, y in zip(positions, horn.faces):
        mask &= faces[i] == y
    return [int(x) for x in np.nonzero(mask)[0]]


def _horn_witness(X, horn):
    return {
        "n": horn.n,
        "k": horn.k,
        "faces": [_label_str(X.label(horn.n - 1, y)) for y in horn.faces],
    }


def _restriction_counts(X, n, k):
    counts = {}
    for x in range(X.size(n)):
        key = horn_of(X, n, k, x).faces
        counts[key] = counts.get(key, 0) + 1
    return counts


def is_kan(X):
    """Every horn at every stored level has a filler."""
    for n in range(1, X.top + 1):
        for k in range(n + 1):
            counts = _restriction_counts(X, n, k)
            for horn in horn_set(X, n, k):
                if horn.faces not in counts:
                    return Verdict.failed("kan", f"horn ({n},{k}) has no filler", _horn_witness(X, horn))
    return Verdict.passed("Kan at all stored levels")


def is_truncated(X, m):
    """Horn restriction is a bijection for every stored ``n >= m``."""
    for n in range(max(m, 1), X.top + 1):
        for k in range(n + 1):
            counts = _restriction_counts(X, n, k)
            for horn in horn_set(X, n, k):
                count = counts.get(horn.faces, 0)
                if count != 1:
                    witness = _horn_witness(X, horn)
                    witness["fillers"] = count
                    return Verdict.failed("truncation", f"horn ({n},{k}) has {count} fillers", witness)
    return Verdict.passed(f"{m}-truncated at all stored levels")


# -- the G^(k) chain -----------------------------------------------------------------


@dataclass
class GChain:
    """``levels[k]`` lists maps ``S^k -> X_k`` as tuples ordered like ``product(S, repeat=k)``."""

    pointed: PointedFiniteSet
    m: int
    levels: List[List[Tuple[int, ...]]]
    transitions: List[np.ndarray]
    surjective: List[bool]
    bijective: List[bool]

    @property
    def sizes(self):
        return [len(level) for level in self.levels]

    @property
    def count(self):
        return len(self.levels[self.m])

    def to_dict(self):
        return {
            "sizes": self.sizes,
            "count": self.count,
            "surjective": self.surjective,
            "bijective": self.bijective,
        }


def _chain_keys(S, k):
    return list(product(S.elements, repeat=k))


def _extensions(S, X, k, g):
    """All lifts of ``g: S^k -> X_k`` to ``S^(k+1) -> X_{k+1}``, by horn filling."""
    keys = _chain_keys(S, k)
    position = {key: i for i, key in enumerate(keys)}
    options = []
    for s in _chain_keys(S, k + 1):
        simplex = (S.basepoint,) + s
        repeat = next((j for j in range(k + 1) if simplex[j] == simplex[j + 1]), None)
        if repeat is not None:
            face = g[position[_drop(s, repeat)]]
            options.append([X.degeneracy(k, repeat, face)])
            continue
        faces = tuple(g[position[_drop(s, i - 1)]] for i in range(1, k + 2))
        fillers = horn_fillers(X, Horn(k + 1, 0, faces))
        if not fillers:
            raise PreconditionError("horn without filler while extending", {"simplex": [str(e) for e in s]})
        options.append(fillers)
    return [tuple(choice) for choice in product(*options)]


def g_chain(S, X, workers=None):
    """Build ``G^(0) .. G^(m+1)`` for a Kan, m-truncated ``X`` by filling horns in every way.

    ``G^(0)`` is ``X_0``; an element of ``G^(k)`` assigns to each ``s`` in
    ``S^k`` the image of the simplex ``(*, s_1, .., s_k)``. Degenerate
    simplices take the matching degeneracy of their face; the others range
    over all fillers of the ``(k+1, 0)`` horn. The transition to ``G^(k)``
    reads ``g(s) = d_{k+1} g~(s, s_k)``.
    """
    for verdict in (is_kan(X), is_truncated(X, X.m)):
        if not verdict.ok:
            raise PreconditionError(f"g_chain precondition: {verdict.message}", verdict.witness)
    levels = [[(x,) for x in range(X.size(0))]]
    transitions, surjective, bijective = [], [], []
    for k in range(0, X.m + 1):
        lifted = parallel_map(partial(_extensions, S, X, k), levels[k], workers)
        upper = sorted({g for group in lifted for g in group})
        position = {g: i for i, g in enumerate(upper)}
        keys = _chain_keys(S, k)
        upper_keys = {key: i for i, key in enumerate(_chain_keys(S, k + 1))}
        lower_index = {g: i for i, g in enumerate(levels[k])}
        transition = np.empty(len(upper), dtype=np.int64)
        for g_up in upper:
            restricted = []
            for s in keys:
                last = s[-1] if s else S.basepoint
                restricted.append(X.face(k + 1, k + 1, g_up[upper_keys[s + (last,)]]))
            transition[position[g_up]] = lower_index[tuple(restricted)] if k else lower_index[(restricted[0],)]
        covered = set(transition.tolist())
        surjective.append(len(covered) == len(levels[k]))
        bijective.append(surjective[-1] and len(upper) == len(levels[k]))
        transitions.append(transition)
        levels.append(upper)
        logger.debug("G^(%d) has %d elements", k + 1, len(upper))
    return GChain(S, X.m, levels, transitions, surjective, bijective)


# -- brute-force oracle -------------------------------------------------------------


def _level_candidates(source, X, n, previous):
    """Per-simplex candidate images at level ``n`` given the map on level ``n - 1``."""
    lookup = {}
    faces = X.faces[n]
    for x in range(X.size(n)):
        lookup.setdefault(tuple(int(faces[i][x]) for i in range(n + 1)), []).append(x)
    options = []
    for sigma in range(source.size(n)):
        key = tuple(previous[source.face(n, i, sigma)] for i in range(n + 1))
        options.append(lookup.get(key, []))
    return options


def _degeneracies_respected(source, X, n, lower, upper):
    for i in range(n + 1):
        for sigma in range(source.size(n)):
            if upper[source.degeneracy(n, i, sigma)] != X.degeneracy(n, i, lower[sigma]):
                return False
    return True


def _morphisms_from(source, X, f0):
    results = []

    def extend(maps):
        n = len(maps)
        options = _level_candidates(source, X, n, maps[-1])
        if any(not o for o in options):
            return
        if n == X.top:
            # horn-determined level: the image must exist and be unique
            if all(len(o) == 1 for o in options):
                upper = tuple(o[0] for o in options)
                if _degeneracies_respected(source, X, n - 1, maps[-1], upper):
                    results.append(tuple(maps))
            return
        for choice in product(*options):
            if _degeneracies_respected(source, X, n - 1, maps[-1], choice):
                extend(maps + [choice])

    extend([f0])
    return results


def hom_enumerate(source, X, workers=None):
    """All simplicial maps ``source -> X`` through level ``m``, checked one level higher."""
    if source.top < X.top:
        raise PreconditionError("source must store at least as many levels as the target")
    firsts = list(product(range(X.size(0)), repeat=source.size(0)))
    batches = parallel_map(partial(_morphisms_from, source, X), firsts, workers)
    morphisms = sorted(f for batch in batches for f in batch)
    logger.debug("oracle found %d morphisms", len(morphisms))
    return morphisms


def restrict_to_chain(S, source, f, m):
    """The element of ``G^(m)`` underlying a morphism from the pair nerve."""
    level = f[m]
    return tuple(level[source.index(m, (S.basepoint,) + s)] for s in _chain_keys(S, m))


def pull_back_chain_element(g, u, S_src, S_tgt, k):
    """Precompose ``g: S_tgt^k -> X_k`` with a pointed map ``u: S_src -> S_tgt``."""
    if u[S_src.basepoint] != S_tgt.basepoint:
        raise PreconditionError("map must preserve basepoints")
    position = {key: i for i, key in enumerate(_chain_keys(S_tgt, k))}
    return tuple(g[position[tuple(u[e] for e in s)]] for s in _chain_keys(S_src, k))


def pull_back_morphism(f, u, S_src, S_tgt, source_src, source_tgt):
    """Precompose a morphism of pair nerves with the map induced by ``u``."""
    out = []
    for n, level in enumerate(f):
        out.append(tuple(
            level[source_tgt.index(n, tuple(u[e] for e in sigma))]
            for sigma in source_src.levels[n]
        ))
    return tuple(out)


def descent_count(G, S):
    return G.order ** (len(S) - 1)
