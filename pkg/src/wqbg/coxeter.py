"""Finite Coxeter group elements and the longest-element machinery.

An element is the signed permutation it induces on the positive roots,
stored as a numpy int16 array ``images`` with 1-based signed entries:
``images[k] = +-(j+1)`` means ``w(beta_k) = +-beta_j``.  This makes length an
inversion count, composition a single gather, and right descents an O(1)
lookup (the simple roots sit at indices 0..rank-1).

Dihedral factors participate through the same encoding; their generator
images are derived from exact rotation-index arithmetic, so no dihedral
cosines are ever materialized.

Bruhat order uses the one-branch descent recursion:

    u <= w  iff  u = e, or for s with ws < w:
                 (us <= ws if us < u else u <= ws)

which costs O(l(w)) group operations per query.

Reflection length is the codimension of the fixed space in the reflection
representation, computed by exact rank (rational or Q(phi) elimination); a
breadth-first factorization search over reflections is available as an
independent cross-check for enumerable groups.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .cartan import RootSystem, build_root_system
from .linalg import exact_rank
from .scalars import Golden

DEFAULT_ENUM_BUDGET = 10**6

_GROUP_CACHE: dict[str, "CoxeterGroup"] = {}


def get_group(label: str) -> "CoxeterGroup":
    """Shared per-label group instance (root data are immutable)."""
    if label not in _GROUP_CACHE:
        _GROUP_CACHE[label] = CoxeterGroup(build_root_system(label))
    return _GROUP_CACHE[label]


class BudgetExceeded(RuntimeError):
    """Enumeration or scan refused: group order above the configured budget."""


class WitnessError(RuntimeError):
    """A transcribed witness failed its defining assertions."""


# ---------------------------------------------------------------------------
# elements


class GroupElement:
    __slots__ = ("group", "images", "_hash", "_length")

    def __init__(self, group: "CoxeterGroup", images: np.ndarray):
        self.group = group
        images.setflags(write=False)
        self.images = images
        self._hash = None
        self._length = None

    def __eq__(self, other):
        return isinstance(other, GroupElement) and np.array_equal(
            self.images, other.images
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.images.tobytes())
        return self._hash

    def __repr__(self):
        return f"<{self.group.label} element {self.word() or 'e'}>"

    def key(self) -> bytes:
        return self.images.tobytes()

    def length(self) -> int:
        if self._length is None:
            self._length = int(np.count_nonzero(self.images < 0))
        return self._length

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.group, compose_images(self.images, other.images))

    def inverse(self) -> "GroupElement":
        im = self.images
        inv = np.empty_like(im)
        idx = np.abs(im) - 1
        inv[idx] = np.sign(im) * np.arange(1, len(im) + 1, dtype=im.dtype)
        return GroupElement(self.group, inv)

    def is_identity(self) -> bool:
        return self.length() == 0

    def right_descents(self) -> list[int]:
        return [i for i in range(self.group.rank) if self.images[i] < 0]

    def apply_root(self, k: int) -> int:
        """Signed image of positive root k, as a signed 1-based index."""
        return int(self.images[k])

    def word(self) -> str:
        """A reduced word, 1-based generators, greedy smallest right descent."""
        return " ".join(str(i + 1) for i in self.word_indices())

    def word_indices(self) -> list[int]:
        w = self
        out: list[int] = []
        while True:
            ds = w.right_descents()
            if not ds:
                return out[::-1]
            i = ds[0]
            out.append(i)
            w = w * w.group.gens[i]


def compose_images(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Images of a*b (apply b first): c[k] = sign(b[k]) * a[|b[k]|-1]."""
    idx = np.abs(b) - 1
    c = a[idx].copy()
    np.negative(c, out=c, where=b < 0)
    return c


# ---------------------------------------------------------------------------
# the group


_COXETER_ORDER = {
    "A": lambda n: _factorial(n + 1),
    "B": lambda n: 2**n * _factorial(n),
    "C": lambda n: 2**n * _factorial(n),
    "D": lambda n: 2 ** (n - 1) * _factorial(n),
    "E": lambda n: {6: 51840, 7: 2903040, 8: 696729600}[n],
    "F": lambda n: 1152,
    "G": lambda n: 12,
    "H": lambda n: {3: 120, 4: 14400}[n],
    "I": lambda m: 2 * m,
    "GL": lambda n: _factorial(n),
}


def _factorial(n: int) -> int:
    return 1 if n <= 1 else n * _factorial(n - 1)


class CoxeterGroup:
    """The finite Coxeter/Weyl group of a root system."""

    def __init__(self, root_system: RootSystem):
        self.rs = root_system
        self.label = root_system.label
        self.rank = root_system.rank
        self.n_pos = root_system.n_pos_roots
        dtype = np.int16 if self.n_pos < 2**14 else np.int32
        self._dtype = dtype
        self.identity = GroupElement(
            self, np.arange(1, self.n_pos + 1, dtype=dtype)
        )
        self.gens = [self._gen_element(i) for i in range(self.rank)]
        self._w0: Optional[GroupElement] = None
        self._enum: Optional[ElementTable] = None
        self._reflections: Optional[list[GroupElement]] = None

    # -- construction ------------------------------------------------------

    def _gen_element(self, i: int) -> GroupElement:
        im = np.empty(self.n_pos, dtype=self._dtype)
        for k in range(self.n_pos):
            sign, j = self.rs.reflect_root(k, i)
            im[k] = sign * (j + 1)
        return GroupElement(self, im)

    @classmethod
    def from_label(cls, label: str) -> "CoxeterGroup":
        return cls(build_root_system(label))

    def order(self) -> int:
        n = 1
        for letter, r in self.rs.factor_types:
            n *= _COXETER_ORDER[letter](r)
        return n

    # -- words ---------------------------------------------------------------

    def element_from_word(self, word: str | Sequence[int]) -> GroupElement:
        """Parse a 1-based generator word ("1 2 1" or an int sequence)."""
        if isinstance(word, str):
            letters = [int(t) for t in word.replace(",", " ").split()]
        else:
            letters = [int(t) for t in word]
        el = self.identity
        for t in letters:
            if not 1 <= t <= self.rank:
                raise ValueError(f"generator index {t} out of range")
            el = el * self.gens[t - 1]
        return el

    # -- basic ops -----------------------------------------------------------

    def longest_element(self) -> GroupElement:
        if self._w0 is None:
            w = self.identity
            while True:
                asc = next(
                    (i for i in range(self.rank) if w.images[i] > 0), None
                )
                if asc is None:
                    break
                w = w * self.gens[asc]
            assert w.length() == self.n_pos
            self._w0 = w
        return self._w0

    def ad_w0_permutation(self) -> "Automorphism":
        """The diagram permutation psi with w0 s_i w0 = s_{psi(i)}."""
        w0 = self.longest_element()
        perm = []
        gen_keys = {g.key(): i for i, g in enumerate(self.gens)}
        for i in range(self.rank):
            conj = w0 * self.gens[i] * w0
            perm.append(gen_keys[conj.key()])
        return Automorphism(self, tuple(perm))

    def bruhat_leq(self, u: GroupElement, w: GroupElement) -> bool:
        lu, lw = u.length(), w.length()
        while True:
            if lu == 0:
                return True
            if lu > lw:
                return False
            i = next(j for j in range(self.rank) if w.images[j] < 0)
            w = w * self.gens[i]
            lw -= 1
            if u.images[i] < 0:
                u = u * self.gens[i]
                lu -= 1

    # -- enumeration -----------------------------------------------------------

    def enumerate(self, budget: int = DEFAULT_ENUM_BUDGET) -> "ElementTable":
        if self._enum is not None:
            return self._enum
        n = self.order()
        if n > budget:
            raise BudgetExceeded(
                f"|W({self.label})| = {n} exceeds the enumeration budget {budget}"
            )
        gen_mats = [(np.abs(g.images) - 1, np.sign(g.images)) for g in self.gens]
        rows = [self.identity.images]
        index = {self.identity.key(): 0}
        frontier = np.array([self.identity.images])
        while len(frontier):
            new_rows = []
            for gi, (gidx, gsgn) in enumerate(gen_mats):
                cand = frontier[:, gidx] * gsgn
                for r in cand:
                    key = r.tobytes()
                    if key not in index:
                        index[key] = len(rows)
                        rows.append(r)
                        new_rows.append(r)
            frontier = np.array(new_rows) if new_rows else np.empty((0, self.n_pos))
        mat = np.vstack(rows)
        assert len(rows) == n, (len(rows), n)
        return self._cache_enum(mat, index)

    def _cache_enum(self, mat, index) -> "ElementTable":
        lengths = (mat < 0).sum(axis=1).astype(np.int32)
        self._enum = ElementTable(self, mat, index, lengths)
        return self._enum

    def elements(self, budget: int = DEFAULT_ENUM_BUDGET) -> Iterator[GroupElement]:
        table = self.enumerate(budget)
        for i in range(len(table)):
            yield table.element(i)

    # -- reflections ------------------------------------------------------------

    def reflections(self) -> list[GroupElement]:
        """The reflection t_beta for every positive root index."""
        if self._reflections is None:
            out = []
            for k in range(self.n_pos):
                im = np.empty(self.n_pos, dtype=self._dtype)
                for j in range(self.n_pos):
                    sign, idx = self.rs.reflect_root(j, k)
                    im[j] = sign * (idx + 1)
                out.append(GroupElement(self, im))
            self._reflections = out
        return self._reflections

    # -- reflection length --------------------------------------------------------

    def reflection_length(self, w: GroupElement) -> int:
        """dim V - dim V^w, factor by factor, by exact matrix rank."""
        total = 0
        for fi, fac in enumerate(self.rs.factors):
            if fac is None:
                continue
            off = self.rs._factor_simple_offset[fi]
            if fac.kind == "dihedral":
                # reflections have odd length on the factor, rotations even
                neg = 0
                moved = False
                for k in range(fac.n_pos):
                    g = self.rs.global_root_index(fi, k)
                    v = int(w.images[g])
                    if v < 0:
                        neg += 1
                    if abs(v) - 1 != g:
                        moved = True
                if neg % 2 == 1:
                    total += 1
                elif moved or neg:
                    total += 2
                continue
            rows = []
            identityish = True
            for i in range(fac.n):
                v = int(w.images[off + i])
                sign, gidx = (1, v - 1) if v > 0 else (-1, -v - 1)
                gfi, local = self.rs.root_record(gidx)
                assert gfi == fi
                coords = list(fac.roots[local])
                if sign < 0:
                    coords = [-c for c in coords]
                coords[i] = coords[i] - 1  # subtract identity column
                rows.append(coords)
                if any(not _is_zero(c) for c in coords):
                    identityish = False
            if identityish:
                continue
            total += exact_rank(list(map(list, zip(*rows))))
        return total

    def reflection_length_bfs(self, w: GroupElement, budget: int = 10**6) -> int:
        """Independent oracle: shortest factorization into reflections."""
        if w.is_identity():
            return 0
        refl = self.reflections()
        seen = {self.identity.key()}
        frontier = [self.identity]
        target = w.key()
        depth = 0
        while True:
            depth += 1
            nxt = []
            for u in frontier:
                for t in refl:
                    v = u * t
                    k = v.key()
                    if k == target:
                        return depth
                    if k not in seen:
                        seen.add(k)
                        nxt.append(v)
            if len(seen) > budget:
                raise BudgetExceeded("reflection factorization search too large")
            frontier = nxt

    def reflection_lengths_all(self, budget: int = DEFAULT_ENUM_BUDGET) -> np.ndarray:
        """BFS distances from e in the reflection Cayley graph, all elements."""
        table = self.enumerate(budget)
        refl = self.reflections()
        dist = np.full(len(table), -1, dtype=np.int8)
        dist[table.index_of(self.identity)] = 0
        frontier = [table.index_of(self.identity)]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for i in frontier:
                u = table.element(i)
                for t in refl:
                    j = table.index_of(u * t)
                    if dist[j] < 0:
                        dist[j] = d
                        nxt.append(j)
            frontier = nxt
        return dist


def _is_zero(c) -> bool:
    if isinstance(c, Golden):
        return c.is_zero()
    return c == 0


# ---------------------------------------------------------------------------
# element tables


class ElementTable:
    """All group elements, BFS-by-length order, with dense indexing."""

    def __init__(self, group, mat, index, lengths):
        self.group = group
        self.mat = mat
        self._index = index
        self.lengths = lengths
        self._by_length: Optional[list[np.ndarray]] = None

    def __len__(self):
        return len(self.mat)

    def element(self, i: int) -> GroupElement:
        return GroupElement(self.group, self.mat[i])

    def index_of(self, el: GroupElement) -> int:
        return self._index[el.key()]

    def index_of_images(self, images: np.ndarray) -> int:
        return self._index[images.tobytes()]

    def by_length(self) -> list[np.ndarray]:
        if self._by_length is None:
            lmax = int(self.lengths.max()) if len(self.mat) else 0
            self._by_length = [
                np.nonzero(self.lengths == L)[0] for L in range(lmax + 1)
            ]
        return self._by_length


# ---------------------------------------------------------------------------
# automorphisms


@dataclass(frozen=True)
class Automorphism:
    """A Coxeter-matrix-preserving permutation of the simple reflections."""

    group: CoxeterGroup
    perm: tuple[int, ...]  # 0-based: sigma(s_i) = s_{perm[i]}

    def __post_init__(self):
        m = self.group.rs.coxeter_matrix
        n = self.group.rank
        if sorted(self.perm) != list(range(n)):
            raise ValueError("not a permutation of the simple reflections")
        for i in range(n):
            for j in range(n):
                if m[self.perm[i]][self.perm[j]] != m[i][j]:
                    raise ValueError("permutation does not preserve the Coxeter matrix")
        rp = self._build_root_perm()
        rpi = np.empty_like(rp)
        rpi[rp] = np.arange(len(rp))
        object.__setattr__(self, "_root_perm", rp)
        object.__setattr__(self, "_root_perm_inv", rpi)

    def _build_root_perm(self) -> np.ndarray:
        """Induced permutation of the positive roots (sigma is length-preserving)."""
        rs = self.group.rs
        rp = np.full(rs.n_pos_roots, -1, dtype=np.int64)
        for i in range(self.group.rank):
            rp[i] = self.perm[i]
        # closure: beta = s_i(gamma) > 0  =>  sigma(beta) = s_{perm(i)}(sigma(gamma))
        changed = True
        while changed:
            changed = False
            for k in range(rs.n_pos_roots):
                if rp[k] < 0:
                    continue
                for i in range(self.group.rank):
                    sign, j = rs.reflect_root(k, i)
                    if sign < 0 or rp[j] >= 0:
                        continue
                    sign2, j2 = rs.reflect_root(int(rp[k]), self.perm[i])
                    assert sign2 > 0
                    rp[j] = j2
                    changed = True
        assert (rp >= 0).all()
        return rp

    def is_identity(self) -> bool:
        return all(p == i for i, p in enumerate(self.perm))

    def apply(self, el: GroupElement) -> GroupElement:
        """sigma(w) = rho o w o rho^{-1} on signed root permutations."""
        im = el.images[self._root_perm_inv]
        out = np.sign(im) * (self._root_perm[np.abs(im) - 1] + 1)
        return GroupElement(self.group, out.astype(el.images.dtype))

    def apply_many(self, mat: np.ndarray) -> np.ndarray:
        im = mat[:, self._root_perm_inv]
        return (np.sign(im) * (self._root_perm[np.abs(im) - 1] + 1)).astype(mat.dtype)

    def apply_gen_index(self, i: int) -> int:
        return self.perm[i]

    def inverse(self) -> "Automorphism":
        inv = [0] * len(self.perm)
        for i, p in enumerate(self.perm):
            inv[p] = i
        return Automorphism(self.group, tuple(inv))

    def compose(self, other: "Automorphism") -> "Automorphism":
        # self after other
        return Automorphism(
            self.group, tuple(self.perm[other.perm[i]] for i in range(len(self.perm)))
        )

    def one_line(self) -> str:
        return " ".join(str(p + 1) for p in self.perm)


def identity_automorphism(group: CoxeterGroup) -> Automorphism:
    return Automorphism(group, tuple(range(group.rank)))


def automorphism_from_one_line(group: CoxeterGroup, text: str) -> Automorphism:
    perm = tuple(int(t) - 1 for t in text.replace(",", " ").split())
    return Automorphism(group, perm)


def diagram_automorphisms(group: CoxeterGroup) -> list[Automorphism]:
    """All Coxeter-matrix-preserving permutations (including the identity)."""
    m = group.rs.coxeter_matrix
    n = group.rank
    out = []
    for perm in itertools.permutations(range(n)):
        if all(m[perm[i]][perm[j]] == m[i][j] for i in range(n) for j in range(n)):
            out.append(Automorphism(group, perm))
    return out


# ---------------------------------------------------------------------------
# twisted conjugacy


@dataclass
class TwistedClass:
    """The orbit of `representative` under x . w = x w sigma(x)^{-1}."""

    representative: GroupElement
    sigma: Automorphism
    members: list[GroupElement]

    def __len__(self):
        return len(self.members)


def twisted_class(
    group: CoxeterGroup, w: GroupElement, sigma: Automorphism, budget: int = DEFAULT_ENUM_BUDGET
) -> TwistedClass:
    """Orbit BFS over generators: w -> s_i w s_{sigma(i)}."""
    seen = {w.key(): w}
    frontier = [w]
    while frontier:
        nxt = []
        for u in frontier:
            for i in range(group.rank):
                v = group.gens[i] * u * group.gens[sigma.perm[i]]
                if v.key() not in seen:
                    seen[v.key()] = v
                    nxt.append(v)
        if len(seen) > budget:
            raise BudgetExceeded("twisted class orbit exceeds budget")
        frontier = nxt
    return TwistedClass(w, sigma, list(seen.values()))


def class_min_reflection_length(group: CoxeterGroup, cls: TwistedClass) -> int:
    return min(group.reflection_length(u) for u in cls.members)


def lr_class_of_longest(group: CoxeterGroup, sigma: Automorphism) -> int:
    """l_R of the twisted class of w0 (orbit BFS + Carter rank)."""
    cls = twisted_class(group, group.longest_element(), sigma)
    return class_min_reflection_length(group, cls)


# ---------------------------------------------------------------------------
# the maximal-length scan


def max_length_twisted_coset(
    group: CoxeterGroup,
    sigma: Automorphism,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> tuple[int, GroupElement]:
    """max{l(x) : x <= sigma(x) w0} with an argmax witness, exhaustively.

    Levels above l(w0)/2 cannot contain solutions (length comparison with
    sigma(x) w0), so the scan walks levels downward from floor(l(w0)/2) and
    stops inside the first level containing a solution.
    """
    table = group.enumerate(budget)
    w0 = group.longest_element()
    lw0 = w0.length()
    w0_idx = np.abs(w0.images) - 1
    w0_sgn = np.sign(w0.images)
    by_len = table.by_length()
    for level in range(lw0 // 2, -1, -1):
        idx = by_len[level]
        if not len(idx):
            continue
        rows = table.mat[idx]
        targets = sigma.apply_many(rows)[:, w0_idx] * w0_sgn
        for r, row in enumerate(rows):
            x = GroupElement(group, row)
            if group.bruhat_leq(x, GroupElement(group, targets[r])):
                return level, x
    raise AssertionError("unreachable: x = e always satisfies e <= w0")


# ---------------------------------------------------------------------------
# witness construction (explicit elements, verified after construction)


def _srange(b: int, a: int) -> list[int]:
    """s_{[b,a]} = s_b s_{b-1} ... s_a (1-based letters, empty if a > b)."""
    return list(range(b, a - 1, -1))


def _srange_inv(b: int, a: int) -> list[int]:
    return list(range(a, b + 1))


def _alt(first: int, other: int, length: int) -> list[int]:
    return [first if i % 2 == 0 else other for i in range(length)]


def _witness_table_row(letter: str, n: int):
    """Induction data: (J, sub-letter, sub-rank, y-word, z-word, sharp, diff).

    Words are in the ambient type's own 1-based Bourbaki labels; J is the
    sub-diagram generating the parabolic used for the inductive step.
    """
    if letter == "A":
        sharp = (n * n) // 4
        diff = n // 2
        return dict(
            J=list(range(2, n + 1)), sub=("A", n - 1),
            y=_srange_inv(n // 2, 1), z=_srange_inv(n, 1),
            sharp=sharp, diff=diff,
        )
    if letter in ("B", "C"):
        sharp = (n * n - n) // 2
        sub = ("A", 1) if n == 2 else (letter, n - 1)
        return dict(
            J=list(range(2, n + 1)), sub=sub,
            y=_srange_inv(n - 1, 1), z=_srange_inv(n, 1) + _srange(n - 1, 1),
            sharp=sharp, diff=n - 1,
        )
    if letter == "D":
        sharp = -(-(n * (n - 2)) // 2)  # ceil
        diff = n - 1 if n % 2 else n - 2
        sub = ("D", n - 1) if n - 1 >= 4 else ("A", 3)
        y = _srange_inv(n - 1, 1) if n % 2 else _srange_inv(n - 2, 1)
        return dict(
            J=list(range(2, n + 1)), sub=sub,
            y=y, z=_srange_inv(n, 1) + _srange(n - 2, 1),
            sharp=sharp, diff=diff,
        )
    if letter == "E" and n == 6:
        z = _srange(6, 1) + [4, 3, 5, 4, 2] + _srange(6, 3) + [1]
        return dict(J=[1, 2, 3, 4, 5], sub=("D", 5),
                    y=_srange(6, 1) + [4, 5], z=z, sharp=16, diff=8)
    if letter == "E" and n == 7:
        z = (_srange(7, 1) + [4, 3, 5, 4, 2] + _srange(6, 3) + [1]
             + _srange(7, 2) + _srange_inv(7, 4))
        return dict(J=[1, 2, 3, 4, 5, 6], sub=("E", 6),
                    y=_srange(7, 1) + [4, 3, 5, 4, 6], z=z, sharp=28, diff=12)
    if letter == "E" and n == 8:
        block = (_srange(8, 1) + [4, 3, 5, 4, 2] + _srange(6, 3) + [1]
                 + _srange(7, 2) + _srange_inv(7, 4))
        y = (_srange(8, 1) + [4, 3, 5, 4, 2] + _srange(6, 3)
             + _srange(7, 4) + [2] + _srange(8, 3))
        return dict(J=[1, 2, 3, 4, 5, 6, 7], sub=("E", 7),
                    y=y, z=block + block + [8], sharp=56, diff=28)
    if letter == "F":
        z = _srange(4, 1) + [3, 2, 3, 4, 3, 2, 3] + _srange_inv(4, 1)
        return dict(J=[1, 2, 3], sub=("B", 3),
                    y=_srange(4, 1) + [3, 2, 4], z=z, sharp=10, diff=7)
    if letter == "H" and n == 3:
        return dict(J=[2, 3], sub=("A", 2),
                    y=[1, 2, 3, 1, 2], z=[1, 2, 1, 2, 3, 2, 1, 2, 1, 3, 2, 1],
                    sharp=6, diff=5)
    if letter == "H" and n == 4:
        inner = _srange(4, 1) + [2, 1] + _srange(3, 1) + [2, 3]
        y = _srange(4, 1) + [2, 3, 1, 2, 1, 4, 2, 3, 2, 1, 2, 4, 3, 1, 2, 1, 2, 3]
        return dict(J=[1, 2, 3], sub=("H", 3),
                    y=y, z=inner * 4 + [4], sharp=28, diff=22)
    if letter in ("G", "I"):
        m = 6 if letter == "G" else n
        sharp = -(-m // 2) - 1  # ceil(m/2) - 1
        return dict(J=[2], sub=("A", 1),
                    y=_alt(1, 2, sharp), z=_alt(1, 2, m - 1),
                    sharp=sharp, diff=sharp)
    raise WitnessError(f"no witness table row for {letter}{n}")


def _diagram_embeddings(group: CoxeterGroup, J: list[int], sub_letter: str, sub_rank: int):
    """All label maps from the standard sub-type diagram onto the nodes J.

    Returns maps f with f[standard 0-based index] = ambient 0-based index,
    preserving the Coxeter matrix.  Several may exist (fork symmetry); the
    caller tries each and keeps the one whose witness verifies.
    """
    sub = build_root_system(f"{sub_letter}{sub_rank}" if sub_letter != "I" else f"I{sub_rank}")
    ms = sub.coxeter_matrix
    ma = group.rs.coxeter_matrix
    nodes = [j - 1 for j in J]
    n = len(nodes)
    assert n == sub.rank
    out = []
    for perm in itertools.permutations(nodes):
        if all(
            ma[perm[i]][perm[j]] == ms[i][j] for i in range(n) for j in range(n)
        ):
            out.append(list(perm))
    return out


def _witness_id_irreducible(group: CoxeterGroup, letter: str, n: int) -> GroupElement:
    """x with x <= x w0 and l(x) = (l(w0) - l_R(w0))/2, by the table induction."""
    if letter == "A" and n == 1:
        return group.identity
    row = _witness_table_row(letter, n)
    sub_letter, sub_rank = row["sub"]
    y = group.element_from_word(row["y"])
    w0 = group.longest_element()
    candidates = []
    if sub_letter == "A" and sub_rank == 1:
        candidates = [group.identity]
    else:
        for emb in _diagram_embeddings(group, row["J"], sub_letter, sub_rank):
            subgroup = CoxeterGroup.from_label(f"{sub_letter}{sub_rank}")
            x_sub = _witness_id_irreducible(subgroup, sub_letter, sub_rank)
            word = [emb[i] + 1 for i in x_sub.word_indices()]
            candidates.append(group.element_from_word(word))
    for x_sub_emb in candidates:
        x = x_sub_emb * y
        if x.length() == row["sharp"] and group.bruhat_leq(x, x * w0):
            return x
    raise WitnessError(f"witness construction failed for {letter}{n}")


def _irreducible_type(group: CoxeterGroup) -> tuple[str, int]:
    if len(group.rs.factor_types) != 1:
        raise WitnessError("irreducible construction on a reducible group")
    return group.rs.factor_types[0]


def parabolic_longest(group: CoxeterGroup, J: Sequence[int]) -> GroupElement:
    """Longest element of the standard parabolic W_J (J is 1-based)."""
    w = group.identity
    letters = [j - 1 for j in J]
    while True:
        asc = next(
            (i for i in letters if (w * group.gens[i]).length() > w.length()), None
        )
        if asc is None:
            return w
        w = w * group.gens[asc]


def check_witness_table_row(label: str) -> dict:
    """Verify the four induction-step conditions for one witness-table row.

    Conditions: y is minimal in W'_0 y; z (w0^{-1} y w0) is minimal in its
    W'_0 coset; y <= z (w0^{-1} y w0) in Bruhat order; l(y) equals the sharp
    difference.  The z column itself is verified against w0 = w'_0 z, and the
    sharp value against Carter's formula.
    """
    group = get_group(label)
    letter, n = _irreducible_type(group)
    row = _witness_table_row(letter, n)
    w0 = group.longest_element()
    y = group.element_from_word(row["y"])
    z = group.element_from_word(row["z"])
    w0p = parabolic_longest(group, row["J"])

    def minimal_in_left_coset(v: GroupElement) -> bool:
        return all(
            (group.gens[j - 1] * v).length() > v.length() for j in row["J"]
        )

    target = z * (w0 * y * w0)  # w0^{-1} = w0
    sub_letter, sub_rank = row["sub"]
    sharp_sub = 0 if (sub_letter, sub_rank) == ("A", 1) else _witness_table_row(
        sub_letter, sub_rank
    )["sharp"]
    checks = {
        "z_factorization": w0p * z == w0
        and z.length() == w0.length() - w0p.length(),
        "sharp_is_carter": 2 * row["sharp"]
        == w0.length() - group.reflection_length(w0),
        "diff_consistent": row["diff"] == row["sharp"] - sharp_sub,
        "y_length": y.length() == row["diff"],
        "y_minimal": minimal_in_left_coset(y),
        "target_minimal": minimal_in_left_coset(target),
        "bruhat": group.bruhat_leq(y, target),
    }
    return dict(type=label, checks=checks, ok=all(checks.values()))


def build_witness(group: CoxeterGroup, sigma: Automorphism) -> GroupElement:
    """The explicit x with x <= sigma(x) w0 and l(w0) - 2 l(x) = l_R(O).

    Construction follows the published tables for the identity case, the
    inversion trick for Ad(w0), closed forms for the genuinely twisted
    irreducible cases, and the alternating component patterns for groups
    whose factors are permuted.  Every branch re-verifies the two defining
    conditions before returning; a verification failure raises WitnessError
    rather than returning a guess.
    """
    x = _build_witness_unchecked(group, sigma)
    w0 = group.longest_element()
    if not group.bruhat_leq(x, sigma.apply(x) * w0):
        raise WitnessError(f"witness for {group.label} fails x <= sigma(x) w0")
    lr = lr_class_of_longest(group, sigma)
    if w0.length() - 2 * x.length() != lr:
        raise WitnessError(
            f"witness for {group.label} has the wrong length "
            f"({w0.length()} - 2*{x.length()} != {lr})"
        )
    return x


def _build_witness_unchecked(group: CoxeterGroup, sigma: Automorphism) -> GroupElement:
    factors = group.rs.factor_types
    if len(factors) > 1:
        return _witness_reducible(group, sigma)
    letter, n = factors[0]
    if sigma.is_identity():
        return _witness_id_irreducible(group, letter, n)
    ad = group.ad_w0_permutation()
    if sigma.perm == ad.perm:
        # x <= w0 x  iff  x^{-1} <= x^{-1} w0: invert the identity witness
        return _witness_id_irreducible(group, letter, n).inverse()

    # genuinely twisted irreducible cases
    if letter == "D" and n == 4 and _perm_order(sigma.perm) == 3:
        return group.element_from_word([4, 3, 1, 2, 1])
    if letter == "D" and n % 2 == 0:
        return _witness_2d_even(group, n, sigma)
    if letter == "F" and n == 4:
        return group.element_from_word([2, 1, 3, 2, 4, 3, 2, 1, 3, 2, 4, 3])
    if letter in ("I", "G"):
        m = 6 if letter == "G" else n
        if m % 2 == 0:
            for first in (1, 2):
                cand = group.element_from_word(_alt(first, 3 - first, m // 2))
                w0 = group.longest_element()
                if group.bruhat_leq(cand, sigma.apply(cand) * w0):
                    return cand
    raise WitnessError(
        f"no explicit witness recipe for type {letter}{n} with sigma {sigma.one_line()}"
    )


def _witness_2d_even(group: CoxeterGroup, n: int, sigma: Automorphism) -> GroupElement:
    """Type D_{2k} with the flip swapping the fork nodes (2k-1, 2k)."""
    k = n // 2
    if k == 2:
        base = group.element_from_word([1, 3, 2, 1, 3])
        # the flip may swap nodes other than (3,4) for D4; relabel through sigma
        for relabel in diagram_automorphisms(group):
            cand = relabel.apply(base)
            if group.bruhat_leq(cand, sigma.apply(cand) * group.longest_element()):
                return cand
        raise WitnessError("no D4 flip witness found")
    # W0' = <s_2 .. s_2k> of type D_{2k-1}, sigma restricted = Ad(w0'),
    # x = x' y with y = s_1 s_2 ... s_{2k-1}
    sub = CoxeterGroup.from_label(f"D{n - 1}")
    x_sub = _witness_id_irreducible(sub, "D", n - 1).inverse()
    word = [i + 2 for i in x_sub.word_indices()]  # embed via i -> i+1
    y = list(range(1, n))  # s_1 ... s_{2k-1}
    return group.element_from_word(word + y)


def _perm_order(perm: tuple[int, ...]) -> int:
    order = 1
    n = len(perm)
    cur = list(perm)
    ident = list(range(n))
    while cur != ident:
        cur = [perm[c] for c in cur]
        order += 1
    return order


def _witness_reducible(group: CoxeterGroup, sigma: Automorphism) -> GroupElement:
    """Assemble a witness over sigma-orbits of isomorphic components."""
    blocks = _factor_blocks(group)
    orbits = _sigma_factor_orbits(group, sigma, blocks)
    x = group.identity
    for orbit in orbits:
        x = x * _witness_orbit(group, sigma, blocks, orbit)
    return x


def _factor_blocks(group: CoxeterGroup) -> list[list[int]]:
    """0-based simple indices of each irreducible factor."""
    out = []
    for fi, fac in enumerate(group.rs.factors):
        if fac is None:
            out.append([])
            continue
        off = group.rs._factor_simple_offset[fi]
        out.append(list(range(off, off + fac.n)))
    return out


def _sigma_factor_orbits(group, sigma, blocks) -> list[list[int]]:
    fmap = {}
    for bi, block in enumerate(blocks):
        for i in block:
            fmap[i] = bi
    succ = {}
    for bi, block in enumerate(blocks):
        if not block:
            continue
        images = {fmap[sigma.perm[i]] for i in block}
        if len(images) != 1:
            raise WitnessError("sigma does not permute the irreducible factors")
        succ[bi] = images.pop()
    orbits, seen = [], set()
    for bi in succ:
        if bi in seen:
            continue
        orbit = [bi]
        seen.add(bi)
        cur = succ[bi]
        while cur != bi:
            orbit.append(cur)
            seen.add(cur)
            cur = succ[cur]
        orbits.append(orbit)
    return orbits


def _embed_word(group, blocks, factor_idx, word_indices) -> GroupElement:
    block = blocks[factor_idx]
    return group.element_from_word([block[i] + 1 for i in word_indices])


def _witness_orbit(group, sigma, blocks, orbit) -> GroupElement:
    """The alternating pattern along one sigma-orbit of components.

    Per-component elements are built in the first component of the orbit and
    transported to the j-th by applying sigma^j, which matches the paper's
    identification of the cyclic components.  Both phase choices of the
    alternating pattern are tried; the verified one is returned.
    """
    l = len(orbit)
    first = orbit[0]
    letter, n = group.rs.factor_types[first]
    ref = CoxeterGroup.from_label(f"{letter}{n}")
    if l == 1:
        tau_perm = tuple(
            blocks[first].index(sigma.perm[i]) for i in blocks[first]
        )
        tau = Automorphism(ref, tau_perm)
        x_ref = _build_witness_unchecked(ref, tau)
        return _embed_word(group, blocks, first, x_ref.word_indices())

    w0_ref = ref.longest_element()
    if l % 2 == 0:
        patterns = [
            [w0_ref if j % 2 == 0 else ref.identity for j in range(l)],
            [w0_ref if j % 2 == 1 else ref.identity for j in range(l)],
        ]
    else:
        # tau = sigma^l restricted to the first component
        tau_perm = []
        for i in blocks[first]:
            cur = i
            for _ in range(l):
                cur = sigma.perm[cur]
            tau_perm.append(blocks[first].index(cur))
        tau = Automorphism(ref, tuple(tau_perm))
        wprime = _build_witness_unchecked(ref, tau)
        patterns = [
            [
                wprime if (j + phase) % 2 == 0 else wprime * w0_ref
                for j in range(l)
            ]
            for phase in (0, 1)
        ]

    w0 = group.longest_element()
    for pattern in patterns:
        x = group.identity
        for j, el in enumerate(pattern):
            placed = _embed_word(group, blocks, first, el.word_indices())
            for _ in range(j):
                placed = sigma.apply(placed)
            x = x * placed
        if group.bruhat_leq(x, sigma.apply(x) * w0):
            return x
    raise WitnessError("no component pattern verified for the orbit")
