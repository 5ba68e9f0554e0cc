"""Graded free modules, Koszul signs, tensor words and the shift identification.

Conventions used throughout the package:

* complexes are cohomological (differentials of degree +1);
* a tensor word is written with the last factor applied first, so the
  display order f_i (x) ... (x) f_1 puts the first morphism rightmost;
  words are stored as tuples in display order (index 0 is the leftmost
  letter f_i);
* deg'(x) = deg(x) + 1 is the degree of the letter on the shifted side;
* a degree-n map of arity i and its shifted avatar of degree n+i-1 differ
  by the global sign (-1)^(n+i-1) together with the Koszul signs picked up
  by moving one desuspension past each prefix of the word, which comes out
  to (-1)^(sum over letters of (position from the right - 1) * deg').

The two checkers built on top of this file (the literal associativity
checker on unshifted operations, and the coderivation checker on shifted
ones) must agree; the shift transform here is an involution and is locked
by round-trip tests.
"""

from .errors import DegreeMismatch, RingMismatch
from .lincomb import add_into, add_lin


def koszul_sign(deg_g, deg_x):
    """Sign (-1)^(deg g * deg x) from moving g past x."""
    return -1 if (deg_g * deg_x) % 2 else 1


class GradedModule:
    """Finite-rank free graded module with a named basis.

    Basis keys are arbitrary hashables (names at the API boundary,
    interned ints or word tuples internally); each has an integer degree.
    """

    def __init__(self, basis):
        self.items = list(basis)
        self.degree = {}
        for key, deg in self.items:
            if key in self.degree:
                raise DegreeMismatch(f"duplicate basis key {key!r}")
            self.degree[key] = deg
        self.index = {key: n for n, (key, _) in enumerate(self.items)}

    def keys(self):
        return [k for k, _ in self.items]

    def deg(self, key):
        return self.degree[key]

    @property
    def rank(self):
        return len(self.items)

    def __contains__(self, key):
        return key in self.degree

    def __repr__(self):
        return f"GradedModule(rank={self.rank})"


def tensor_module(left, right):
    """Tensor product basis; keys are pairs (left key, right key)."""
    basis = [
        ((kl, kr), dl + dr) for kl, dl in left.items for kr, dr in right.items
    ]
    return GradedModule(basis)


def word_module(letters, length):
    """Module of words of a fixed length in the given letters (algebra case)."""
    words = [((), 0)]
    for _ in range(length):
        words = [
            (w + (k,), d + letters.deg(k)) for w, d in words for k in letters.keys()
        ]
    return GradedModule(words)


def word_degp(letter_degrees):
    """Shifted degree of a word: sum of deg' over its letters."""
    return sum(d + 1 for d in letter_degrees)


def shift_sign(letter_degrees, degree):
    """Per-word sign relating an unshifted arity-i degree-n map to its
    shifted form of degree n+i-1 (same sign in both directions).

    ``letter_degrees`` lists the unshifted degrees in display order
    (leftmost letter first).
    """
    i = len(letter_degrees)
    exp = degree + i - 1
    for j, d in enumerate(letter_degrees):
        exp += (i - 1 - j) * (d + 1)
    return -1 if exp % 2 else 1


class GradedMap:
    """Sparse linear map between free graded modules.

    entries[src_key] is a {tgt_key: coefficient} map.  ``degree`` may be
    None for an inhomogeneous map; when set, every entry is checked.
    """

    def __init__(self, ring, source, target, degree=None, entries=None, check=True):
        self.ring = ring
        self.source = source
        self.target = target
        self.degree = degree
        self.entries = {}
        if entries:
            for sk, col in entries.items():
                for tk, c in col.items():
                    self.set(sk, tk, c)
        if check and degree is not None:
            self.check_degrees()

    def set(self, src_key, tgt_key, coeff):
        if self.ring.is_zero(coeff):
            col = self.entries.get(src_key)
            if col:
                col.pop(tgt_key, None)
                if not col:
                    del self.entries[src_key]
            return
        self.entries.setdefault(src_key, {})[tgt_key] = coeff

    def add(self, src_key, tgt_key, coeff):
        col = self.entries.setdefault(src_key, {})
        add_into(col, tgt_key, coeff, self.ring)
        if not col:
            del self.entries[src_key]

    def check_degrees(self):
        for sk, col in self.entries.items():
            sd = self.source.deg(sk)
            for tk in col:
                if self.target.deg(tk) != sd + self.degree:
                    raise DegreeMismatch(
                        f"entry {sk!r} -> {tk!r}: target degree "
                        f"{self.target.deg(tk)} != {sd} + {self.degree}"
                    )

    def is_homogeneous(self):
        degs = {
            self.target.deg(tk) - self.source.deg(sk)
            for sk, col in self.entries.items()
            for tk in col
        }
        return len(degs) <= 1

    def apply_key(self, src_key):
        return dict(self.entries.get(src_key, {}))

    def apply(self, lin):
        """Apply to a linear combination {src_key: coeff}."""
        out = {}
        for sk, c in lin.items():
            col = self.entries.get(sk)
            if col:
                add_lin(out, col, self.ring, factor=c)
        return out

    def compose(self, inner):
        """self o inner."""
        if inner.ring != self.ring:
            raise RingMismatch(f"{inner.ring} vs {self.ring}")
        deg = None
        if self.degree is not None and inner.degree is not None:
            deg = self.degree + inner.degree
        out = GradedMap(self.ring, inner.source, self.target, deg, check=False)
        for sk, col in inner.entries.items():
            for mk, c in col.items():
                col2 = self.entries.get(mk)
                if col2:
                    for tk, c2 in col2.items():
                        out.add(sk, tk, self.ring.mul(c2, c))
        return out

    def plus(self, other, sign=1):
        out = GradedMap(
            self.ring,
            self.source,
            self.target,
            self.degree if self.degree == other.degree else None,
            check=False,
        )
        for sk, col in self.entries.items():
            for tk, c in col.items():
                out.add(sk, tk, c)
        for sk, col in other.entries.items():
            for tk, c in col.items():
                out.add(sk, tk, c if sign == 1 else self.ring.neg(c))
        return out

    def scaled(self, factor):
        out = GradedMap(self.ring, self.source, self.target, self.degree, check=False)
        for sk, col in self.entries.items():
            for tk, c in col.items():
                out.add(sk, tk, self.ring.mul(factor, c))
        return out

    def is_zero(self):
        return not self.entries

    @classmethod
    def identity(cls, ring, module):
        gm = cls(ring, module, module, 0, check=False)
        one = ring.one()
        for k, _ in module.items:
            gm.set(k, k, one)
        return gm

    def to_matrix(self):
        from .linalg import SparseMatrix

        m = SparseMatrix(self.ring, self.target.rank, self.source.rank)
        for sk, col in self.entries.items():
            j = self.source.index[sk]
            for tk, c in col.items():
                m[self.target.index[tk], j] = c
        return m

    def __repr__(self):
        return f"GradedMap(deg={self.degree}, nnz={sum(len(c) for c in self.entries.values())})"


def tensor_maps(f, g):
    """Tensor product with the Koszul rule:
    (f (x) g)(x (x) y) = (-1)^(deg g * deg x) f(x) (x) g(y).

    g must be homogeneous (its degree is moved past x).
    """
    if f.ring != g.ring:
        raise RingMismatch(f"{f.ring} vs {g.ring}")
    if g.degree is None:
        if not g.is_homogeneous():
            raise DegreeMismatch("tensor_maps needs homogeneous right factor")
        gdeg = next(
            (
                g.target.deg(tk) - g.source.deg(sk)
                for sk, col in g.entries.items()
                for tk in col
            ),
            0,
        )
    else:
        gdeg = g.degree
    ring = f.ring
    src = tensor_module(f.source, g.source)
    tgt = tensor_module(f.target, g.target)
    deg = None if f.degree is None else f.degree + gdeg
    out = GradedMap(ring, src, tgt, deg, check=False)
    for sk1, col1 in f.entries.items():
        sign = koszul_sign(gdeg, f.source.deg(sk1))
        for sk2, col2 in g.entries.items():
            for tk1, c1 in col1.items():
                for tk2, c2 in col2.items():
                    c = ring.mul(c1, c2)
                    if sign < 0:
                        c = ring.neg(c)
                    out.add((sk1, sk2), (tk1, tk2), c)
    return out


def shifted_module(letters):
    """Same basis keys with all degrees dropped by one (the suspension)."""
    return GradedModule([(k, d - 1) for k, d in letters.items])


def shift_operation(op, letters, arity, direction="to_shifted"):
    """Identify an arity-i operation with its shifted (bar-side) form.

    ``op`` is a GradedMap from length-``arity`` words in ``letters`` to
    ``letters``; ``letters`` always carries the unshifted degrees.  The
    result is the same table between the suspended modules, each column
    rescaled by the word's shift sign.  The two directions compose to the
    identity.
    """
    assert direction in ("to_shifted", "to_unshifted")
    ring = op.ring
    if direction == "to_shifted":
        n = op.degree
        sletters = shifted_module(letters)
        src = word_module(sletters, arity)
        out = GradedMap(ring, src, sletters, n + arity - 1, check=False)
    else:
        n = op.degree - arity + 1
        src = word_module(letters, arity)
        out = GradedMap(ring, src, letters, n, check=False)
    for word, col in op.entries.items():
        degs = [letters.deg(k) for k in word]
        sign = shift_sign(degs, n)
        for tk, c in col.items():
            out.add(word, tk, c if sign == 1 else ring.neg(c))
    return out
