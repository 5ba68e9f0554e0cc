"""Canonical and seeded-random instances used by tests and CLI demos.

The random dg categories are full subcategories of complexes: objects are
small complexes over the ring, homs are the elementary-matrix bases of
the mapping complexes, the differential is the commutator with the inner
differentials and the composition is matrix composition.  These are dg by
construction, which makes them exact test fodder for the checkers.
"""

import random

from .quiver import GradedQuiver
from .structures import AInftyFunctor, AInftyStructure, Prenat


def ground_ring_category(ring, obj="*", unit="1"):
    """The ring itself as a one-object strictly unital dg category."""
    Q = GradedQuiver([obj], {(obj, obj): [(unit, 0)]})
    u = Q.letter(obj, obj, unit)
    one = ring.one()
    ops = {(u, u): {u: one}}
    return AInftyStructure.from_unshifted(
        ring, Q, 2, ops, units={obj: {u: one}}, name="ground"
    )


def dual_numbers(ring, obj="*"):
    """K[e]/(e^2) with e in degree 0 and zero differential."""
    Q = GradedQuiver([obj], {(obj, obj): [("1", 0), ("e", 0)]})
    u = Q.letter(obj, obj, "1")
    e = Q.letter(obj, obj, "e")
    one = ring.one()
    ops = {
        (u, u): {u: one},
        (u, e): {e: one},
        (e, u): {e: one},
    }
    return AInftyStructure.from_unshifted(
        ring, Q, 4, ops, units={obj: {u: one}}, name="dual-numbers"
    )


def m3_only(ring, max_arity=7):
    """One object, x in degree 1, y in degree 2, the only operation being
    the triple product x,x,x -> y; passes the relations at every arity."""
    Q = GradedQuiver(["*"], {("*", "*"): [("x", 1), ("y", 2)]})
    x = Q.letter("*", "*", "x")
    y = Q.letter("*", "*", "y")
    ops = {(x, x, x): {y: ring.one()}}
    return AInftyStructure.from_unshifted(ring, Q, max_arity, ops, name="m3-only")


def nonassociative(ring):
    """a, b, c in degree 0 with aa = b, ab = c and all other products zero:
    fails the relation at arity 3."""
    Q = GradedQuiver(["*"], {("*", "*"): [("a", 0), ("b", 0), ("c", 0)]})
    a = Q.letter("*", "*", "a")
    b = Q.letter("*", "*", "b")
    c = Q.letter("*", "*", "c")
    one = ring.one()
    ops = {(a, a): {b: one}, (a, b): {c: one}}
    return AInftyStructure.from_unshifted(ring, Q, 4, ops, name="nonassociative")


def zero_category(ring, obj="*"):
    Q = GradedQuiver([obj], {})
    return AInftyStructure(ring, Q, 2, {}, name="zero")


class Complex:
    """Finite free complex: ranks per degree and differential matrices.

    diff[q] is the matrix of d: C^q -> C^(q+1), stored as
    {(i, j): coeff} with i indexing the target basis.
    """

    def __init__(self, ring, ranks, diff=None, name="C"):
        self.ring = ring
        self.ranks = dict(ranks)
        self.diff = {q: dict(m) for q, m in (diff or {}).items()}
        self.name = name
        self.check()

    def rank(self, q):
        return self.ranks.get(q, 0)

    def d_entry(self, q, i, j):
        return self.diff.get(q, {}).get((i, j), self.ring.zero())

    def check(self):
        R = self.ring
        for q, m in self.diff.items():
            for (i, j) in m:
                assert 0 <= j < self.rank(q) and 0 <= i < self.rank(q + 1)
        for q in list(self.diff):
            if q + 1 not in self.diff:
                continue
            rk2 = self.rank(q + 2)
            rk0 = self.rank(q)
            for j in range(rk0):
                for i in range(rk2):
                    s = R.zero()
                    for k in range(self.rank(q + 1)):
                        s = R.add(
                            s, R.mul(self.d_entry(q + 1, i, k), self.d_entry(q, k, j))
                        )
                    assert R.is_zero(s), "complex differential does not square to zero"


def two_term_complex(ring, entry, name="P"):
    """0 -> R -> R -> 0 in degrees 0, 1 with the given differential entry."""
    diff = {}
    e = ring.coerce(entry)
    if not ring.is_zero(e):
        diff[0] = {(0, 0): e}
    return Complex(ring, {0: 1, 1: 1}, diff, name=name)


def endo_letter_name(q, i, j):
    return f"f{q}[{i},{j}]"


def complex_endo_category(ring, complexes, max_arity=6, name="endo"):
    """Full dg subcategory of complexes on the given objects."""
    objs = [C.name for C in complexes]
    by_name = {C.name: C for C in complexes}
    hom = {}
    for X in complexes:
        for Y in complexes:
            basis = []
            for q, rq in sorted(X.ranks.items()):
                for q2, r2 in sorted(Y.ranks.items()):
                    n = q2 - q
                    for i in range(r2):
                        for j in range(rq):
                            basis.append((endo_letter_name(q, i, j) + f"->{q2}", n))
            hom[(X.name, Y.name)] = basis
    Q = GradedQuiver(objs, hom)

    def lid(X, Y, q, q2, i, j):
        return Q.letter(X.name, Y.name, endo_letter_name(q, i, j) + f"->{q2}")

    ops = {}

    def add_op(word, out, c):
        if ring.is_zero(c):
            return
        col = ops.setdefault(word, {})
        s = ring.add(col.get(out, ring.zero()), c)
        if ring.is_zero(s):
            col.pop(out, None)
            if not col:
                del ops[word]
        else:
            col[out] = s

    # m1 = d o f - (-1)^{deg f} f o d
    for X in complexes:
        for Y in complexes:
            for q in sorted(X.ranks):
                for q2 in sorted(Y.ranks):
                    for i in range(Y.rank(q2)):
                        for j in range(X.rank(q)):
                            f = lid(X, Y, q, q2, i, j)
                            sgn = -1 if (q2 - q) % 2 else 1
                            for i2 in range(Y.rank(q2 + 1)):
                                c = Y.d_entry(q2, i2, i)
                                add_op((f,), lid(X, Y, q, q2 + 1, i2, j), c)
                            for j2 in range(X.rank(q - 1)):
                                c = X.d_entry(q - 1, j, j2)
                                c = ring.mul(ring.coerce(-sgn), c)
                                add_op((f,), lid(X, Y, q - 1, q2, i, j2), c)
    # m2 = composition
    for X in complexes:
        for Y in complexes:
            for Z in complexes:
                for q in sorted(X.ranks):
                    for q2 in sorted(Y.ranks):
                        for q3 in sorted(Z.ranks):
                            for i in range(Z.rank(q3)):
                                for k in range(Y.rank(q2)):
                                    for j in range(X.rank(q)):
                                        g = lid(Y, Z, q2, q3, i, k)
                                        f = lid(X, Y, q, q2, k, j)
                                        add_op(
                                            (g, f),
                                            lid(X, Z, q, q3, i, j),
                                            ring.one(),
                                        )
    units = {}
    for X in complexes:
        lin = {}
        for q in sorted(X.ranks):
            for i in range(X.rank(q)):
                lin[lid(X, X, q, q, i, i)] = ring.one()
        if lin:
            units[X.name] = lin
    return AInftyStructure.from_unshifted(
        ring, Q, max_arity, ops, units=units, name=name
    )


def contractible_endo(ring, max_arity=6):
    """Endomorphism dg algebra of the contractible two-term complex id: R -> R."""
    return complex_endo_category(
        ring, [two_term_complex(ring, 1, name="P")], max_arity, name="endo-contractible"
    )


def two_term_integer_algebra(ring):
    """One object, hom complex R -> R given by multiplication by 2 in degrees
    0, 1 and zero multiplication; over Z this is not cohomologically unital."""
    Q = GradedQuiver(["*"], {("*", "*"): [("x", 0), ("y", 1)]})
    x = Q.letter("*", "*", "x")
    y = Q.letter("*", "*", "y")
    ops = {(x,): {y: ring.coerce(2)}}
    return AInftyStructure.from_unshifted(ring, Q, 2, ops, name="times-two")


# ---------------------------------------------------------------------------
# seeded random generators
# ---------------------------------------------------------------------------

def random_complex(ring, rng, degrees=(0, 1), max_rank=2):
    """Random finite free complex with exact d o d = 0: a random
    differential is placed only between levels with no composable
    successor, so the square vanishes identically over any ring."""
    ranks = {q: rng.randint(1, max_rank) for q in degrees}
    diff = {}
    for q in sorted(degrees):
        if q + 1 not in ranks or (q - 1) in diff:
            continue
        m = {}
        for i in range(ranks[q + 1]):
            for j in range(ranks[q]):
                if rng.random() < 0.5:
                    m[(i, j)] = ring.coerce(rng.randint(-1, 1))
        if m:
            diff[q] = m
    return Complex(ring, ranks, diff, name=f"C{rng.randint(0, 10**6)}")


def random_dg_category(ring, seed, n_objects=1, max_rank=1, max_arity=6):
    rng = random.Random(seed)
    complexes = [
        random_complex(ring, rng, degrees=(0, 1), max_rank=max_rank)
        for _ in range(n_objects)
    ]
    A = complex_endo_category(
        ring, complexes, max_arity=max_arity, name=f"dg-seed{seed}"
    )
    return A


def broken_variant(A, seed):
    """Copy of A with one operation coefficient bumped by one: generally
    breaks the relations somewhere at or above the tampered arity."""
    rng = random.Random(seed)
    B = A.copy()
    B.name = A.name + "-broken"
    words = sorted(B.b, key=lambda w: (len(w), w))
    words = [w for w in words if len(w) >= 2] or words
    if not words:
        return B
    w = words[rng.randrange(len(words))]
    col = B.b[w]
    lid = sorted(col)[0]
    col[lid] = B.ring.add(col[lid], B.ring.one())
    if B.ring.is_zero(col[lid]):
        col[lid] = B.ring.one()
    B._m_cache = None
    return B


def random_prenat(F, G, degree, seed, max_arity=3, density=0.5):
    """Random prenat F -> G of the given degree with theta^0 = 0."""
    rng = random.Random(seed)
    A, B = F.source, F.target
    QA, QB = A.quiver, B.quiver
    R = F.ring
    comps = {}
    for n in range(1, max_arity + 1):
        for word in QA.words(n):
            want = QA.word_deg(word) + degree - n
            fa = F.obj_map[QA.word_src(word)]
            ga = G.obj_map[QA.word_tgt(word)]
            col = {}
            for out in QB.pair_lids[(fa, ga)]:
                if QB.deg(out) == want and rng.random() < density:
                    c = R.coerce(rng.randint(1, 4))
                    if not R.is_zero(c):
                        col[out] = c
            if col:
                comps[word] = col
    return Prenat(F, G, degree, {}, comps, name=f"theta-seed{seed}").validate()


def identity_functor(A):
    return AInftyFunctor.identity(A).validate()
