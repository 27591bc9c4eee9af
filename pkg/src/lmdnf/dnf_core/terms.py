"""Terms, DNF formulas and assignments over {0,1}^n.

Assignments are plain Python ints used as bitsets: bit ``i - 1`` holds the
value of variable ``x_i``. A term is stored as its sorted literal sequence
(signed 1-based ints, ``+i`` for ``x_i`` and ``-i`` for its negation) and
carries the equivalent ``(mask, value)`` pair so that ``T(x) = 1`` iff
``x & mask == value``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np


class Literal(NamedTuple):
    var: int
    positive: bool

    def __int__(self) -> int:
        return self.var if self.positive else -self.var

    @classmethod
    def from_int(cls, lit: int) -> "Literal":
        if lit == 0:
            raise ValueError("literal 0 is not a variable")
        return cls(abs(lit), lit > 0)


@dataclass(frozen=True)
class Term:
    """A conjunction of literals, identified with its set of literals."""

    literals: tuple[int, ...]
    mask: int = field(init=False, repr=False, compare=False)
    value: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lits = tuple(sorted((int(l) for l in self.literals), key=lambda l: (abs(l), l)))
        mask = value = 0
        for lit in lits:
            if lit == 0:
                raise ValueError("literal 0 is not a variable")
            bit = 1 << (abs(lit) - 1)
            if mask & bit:
                raise ValueError(f"variable x{abs(lit)} appears twice in term")
            mask |= bit
            if lit > 0:
                value |= bit
        object.__setattr__(self, "literals", lits)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "value", value)

    @classmethod
    def of(cls, *literals: int) -> "Term":
        return cls(tuple(literals))

    @classmethod
    def from_mask(cls, mask: int, value: int) -> "Term":
        lits = []
        i = 0
        m = mask
        while m:
            if m & 1:
                lits.append(i + 1 if (value >> i) & 1 else -(i + 1))
            m >>= 1
            i += 1
        return cls(tuple(lits))

    @property
    def width(self) -> int:
        return self.mask.bit_count()

    def __len__(self) -> int:
        return self.width

    @property
    def variables(self) -> frozenset[int]:
        return frozenset(abs(l) for l in self.literals)

    def __iter__(self) -> Iterator[int]:
        return iter(self.literals)

    def satisfied_by(self, x: int) -> bool:
        return (x & self.mask) == self.value

    def falsified_count(self, x: int) -> int:
        """Number of literals of the term that ``x`` falsifies."""
        return ((x ^ self.value) & self.mask).bit_count()

    def __str__(self) -> str:
        if not self.literals:
            return "TRUE"
        return " & ".join(f"x{l}" if l > 0 else f"~x{-l}" for l in self.literals)


class Dnf:
    """A disjunction of terms over ``n`` variables.

    An empty term list is the constant-0 formula.
    """

    def __init__(self, n: int, terms: Iterable[Term]):
        self.n = int(n)
        self.terms: tuple[Term, ...] = tuple(terms)
        for t in self.terms:
            if t.mask >> self.n:
                raise ValueError(f"term {t} mentions a variable beyond n={self.n}")
        self._masks = np.array([t.mask for t in self.terms], dtype=np.int64)
        self._values = np.array([t.value for t in self.terms], dtype=np.int64)

    @property
    def s(self) -> int:
        return len(self.terms)

    @property
    def k(self) -> int:
        """Common term width if the formula is exact-k, else 0."""
        widths = {t.width for t in self.terms}
        return widths.pop() if len(widths) == 1 else 0

    def is_exact(self, k: int | None = None) -> bool:
        widths = {t.width for t in self.terms}
        if len(widths) != 1:
            return False
        return k is None or widths == {k}

    def __call__(self, x: int) -> int:
        return self.eval(x)

    def eval(self, x: int) -> int:
        if x < 0 or x >> self.n:
            raise ValueError(f"assignment does not fit in n={self.n} bits")
        for t in self.terms:
            if (x & t.mask) == t.value:
                return 1
        return 0

    def eval_batch(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        if not self.terms:
            return np.zeros(xs.shape, dtype=bool)
        return ((xs[..., None] & self._masks) == self._values).any(axis=-1)

    def __eq__(self, other) -> bool:
        return isinstance(other, Dnf) and self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n, self.terms))

    def __repr__(self) -> str:
        return f"Dnf(n={self.n}, terms=[{', '.join(map(str, self.terms))}])"


# -- assignments ---------------------------------------------------------


def assignment(bits: str | Sequence[int]) -> int:
    """Pack ``"101"`` (x1 first) or ``[1, 0, 1]`` into the int bitset."""
    x = 0
    for i, b in enumerate(bits):
        if b in ("1", 1, True):
            x |= 1 << i
        elif b not in ("0", 0, False):
            raise ValueError(f"bad bit {b!r}")
    return x


def bits_of(x: int, n: int) -> str:
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


def flip(x: int, i: int) -> int:
    """Flip the 1-based coordinate ``i``."""
    return x ^ (1 << (i - 1))


# -- distances and induced terms -----------------------------------------


def term_distance(t1: Term, t2: Term) -> int:
    common = (t1.mask & t2.mask & ~(t1.value ^ t2.value)).bit_count()
    return min(t1.width - common, t2.width - common)


def sat_distance(x: int, terms: Iterable[Term]) -> float:
    """Hamming distance from ``x`` to the nearest satisfier of the disjunction.

    Returns ``math.inf`` for an empty collection.
    """
    best = math.inf
    for t in terms:
        d = ((x ^ t.value) & t.mask).bit_count()
        if d < best:
            best = d
            if d == 0:
                break
    return best


def induced_term(y: int, coords: Iterable[int]) -> Term:
    mask = 0
    for i in coords:
        mask |= 1 << (i - 1)
    return Term.from_mask(mask, y & mask)


def restrict_term(t: Term, coords: Iterable[int]) -> Term:
    keep = set(coords)
    return Term(tuple(l for l in t.literals if abs(l) in keep))


def largest_common_term(points: Sequence[int], n: int) -> Term:
    """Longest term satisfied by every point: the literals of shared coordinates."""
    if len(points) == 0:
        raise ValueError("largest_common_term needs at least one point")
    full = (1 << n) - 1
    first = int(points[0])
    agree = full
    for p in points[1:]:
        agree &= ~(int(p) ^ first)
    agree &= full
    return Term.from_mask(agree, first & agree)


def largest_common_terms_batch(points: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ``largest_common_term`` over the last axis.

    ``points`` has shape ``(..., r)``; returns ``(mask, value)`` arrays of shape ``(...)``.
    """
    points = np.asarray(points, dtype=np.int64)
    full = np.int64((1 << n) - 1)
    first = points[..., 0]
    disagree = np.bitwise_or.reduce(points ^ first[..., None], axis=-1)
    mask = ~disagree & full
    return mask, first & mask


# -- term enumeration ----------------------------------------------------


def all_terms(n: int, k: int) -> Iterator[Term]:
    """Every width-``k`` term over ``n`` variables, C(n,k)·2^k of them."""
    for vars_ in combinations(range(1, n + 1), k):
        for signs in product((1, -1), repeat=k):
            yield Term(tuple(s * v for s, v in zip(signs, vars_)))


def count_terms(n: int, k: int) -> int:
    return math.comb(n, k) * 2**k


def terms_to_arrays(terms: Sequence[Term]) -> tuple[np.ndarray, np.ndarray]:
    masks = np.fromiter((t.mask for t in terms), dtype=np.int64, count=len(terms))
    values = np.fromiter((t.value for t in terms), dtype=np.int64, count=len(terms))
    return masks, values


def sample_term_satisfying(t: Term, n: int, rng: np.random.Generator, size: int | None = None):
    """Uniform satisfier of ``t``: term coordinates fixed, the rest fair coins."""
    if t.mask >> n:
        raise ValueError("term does not fit in n variables")
    if size is None:
        free = int(rng.integers(0, 1 << n, dtype=np.int64)) if n else 0
        return (free & ~t.mask) | t.value
    free = rng.integers(0, 1 << n, size=size, dtype=np.int64) if n else np.zeros(size, np.int64)
    return (free & ~np.int64(t.mask)) | np.int64(t.value)


def dedup(terms: Iterable[Term]) -> list[Term]:
    """Structural de-duplication keeping first occurrences."""
    seen: set[Term] = set()
    out = []
    for t in terms:
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


# -- DNF text format -----------------------------------------------------


def format_dnf(f: Dnf) -> str:
    lines = [f"{f.n} {f.k} {f.s}"]
    lines += [" ".join(str(l) for l in t.literals) for t in f.terms]
    return "\n".join(lines) + "\n"


def parse_dnf(text: str) -> Dnf:
    lines = [ln.strip() for ln in text.splitlines()]
    while lines and not lines[0]:
        lines.pop(0)
    if not lines:
        raise ValueError("empty DNF file")
    try:
        n, k, s = (int(tok) for tok in lines[0].split())
    except ValueError as exc:
        raise ValueError(f"bad DNF header {lines[0]!r}; expected 'n k s'") from exc
    body = lines[1 : 1 + s]
    if len(body) < s:
        raise ValueError(f"header promises {s} terms, found {len(body)}")
    terms = [Term(tuple(int(tok) for tok in ln.split())) for ln in body]
    f = Dnf(n, terms)
    if k and not f.is_exact(k):
        raise ValueError(f"header says exact-{k} but term widths differ")
    return f


def read_dnf(path) -> Dnf:
    with open(path) as fh:
        return parse_dnf(fh.read())


def write_dnf(f: Dnf, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_dnf(f))
