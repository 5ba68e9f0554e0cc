"""Truncated bar and cobar constructions and the strict-unit quotient.

The bar side works with plain tensor words in the suspended letters; its
coderivation is the one stored on the structure, and d o d = 0 on all
words up to the bound is a matrix-level relation oracle.

The cobar-of-bar resolution has, for each object pair, a basis of
composition-indexed words: a word is a tuple of factors, each factor a
nonempty tuple of letters (display order, leftmost letter last applied).
The differential extends the sum of the letterwise differential, the
deconcatenation part (splitting one factor in two) and the interior
operations (contracting a window inside a factor, strictly lowering the
letter count for arities above one), by the Leibniz rule over factors.

The strict-unit quotient is presented by reduced words over a unit-adapted
basis: any factor of length at least two containing the unit letter dies,
and length-one unit factors are deleted; a word of unit factors only
collapses to the one-letter unit word.
"""

from .errors import NotAInfty, SchemaError, SplitUnitsRequired
from .lincomb import add_into, add_lin
from .quiver import GradedQuiver
from .relations import compositions
from .structures import AInftyFunctor, AInftyStructure

# ---------------------------------------------------------------------------
# bar construction
# ---------------------------------------------------------------------------

class BarTruncation:
    """Words of bounded length in the suspended letters with the
    coderivation induced by the shifted operations."""

    def __init__(self, A, word_bound):
        self.A = A
        self.L = word_bound

    def words(self, pair=None):
        Q = self.A.quiver
        for n in range(1, self.L + 1):
            if pair is None:
                yield from Q.words(n)
            else:
                yield from Q.words(n, src=pair[0], tgt=pair[1])

    def differential(self, word):
        return self.A.coderivation(word)

    def cocomposition(self, word):
        """Deconcatenation: list of (left part, right part)."""
        return [(word[:i], word[i:]) for i in range(1, len(word))]

    def d_squared_report(self):
        """First word (by length) where d o d fails to vanish, or None."""
        R = self.A.ring
        for n in range(1, self.L + 1):
            for word in self.A.quiver.words(n):
                acc = {}
                for w1, c1 in self.differential(word).items():
                    add_lin(acc, self.differential(w1), R, factor=c1)
                if acc:
                    return (word, acc)
        return None


def bar(A, word_bound):
    """Bar truncation with d o d verified on all words up to the bound;
    raises NotAInfty with the witness word otherwise."""
    bt = BarTruncation(A, word_bound)
    bad = bt.d_squared_report()
    if bad is not None:
        word, acc = bad
        names = A.quiver.word_names(word)
        raise NotAInfty(
            f"bar differential fails to square to zero on {'|'.join(names)}",
            witness=(word, acc),
        )
    return bt


# ---------------------------------------------------------------------------
# cobar words
# ---------------------------------------------------------------------------

def word_letters(cword):
    return tuple(l for factor in cword for l in factor)


def letter_count(cword):
    return sum(len(f) for f in cword)


class CobarBarHom:
    """Cobar-of-bar hom data for one structure at a word bound."""

    def __init__(self, A, L):
        self.A = A
        self.L = L
        self.Q = A.quiver

    def factor_degree(self, factor):
        # desuspension of a word of suspended letters: deg - 1 per letter,
        # then + 1; same parity as the spec's deg'-sum bookkeeping
        return self.Q.word_deg(factor) - len(factor) + 1

    def word_degree(self, cword):
        return sum(self.factor_degree(f) for f in cword)

    def words(self, src, tgt, max_letters=None):
        """All cobar words from src to tgt with at most L letters."""
        L = self.L if max_letters is None else max_letters
        Q = self.Q
        for n in range(1, L + 1):
            for chain in Q.words(n, src=src, tgt=tgt):
                # chain is display order; factorize by compositions of n
                for comp in compositions(n):
                    # comp lists factor sizes right to left; cut display
                    # order from the right
                    factors = []
                    pos = n
                    for size in comp:
                        factors.append(chain[pos - size : pos])
                        pos -= size
                    yield tuple(reversed(factors))

    # -- differential pieces -------------------------------------------

    def d_factor(self, factor, letter_preserving_only=False):
        """Differential of a single-factor generator: deconcatenation plus
        interior operations; {tuple of factors: coeff}."""
        Q, R = self.Q, self.A.ring
        b = self.A.b
        n = len(factor)
        out = {}
        # deconcatenation: split into (left, right); sign from the degree
        # of the desuspended left part
        for i in range(1, n):
            left, right = factor[:i], factor[i:]
            sign = -1 if (self.factor_degree(left)) % 2 else 1
            add_into(out, (left, right), R.coerce(sign), R)
        # interior operations: window replaced by the shifted operation
        # output; Koszul sign of the suspended letters left of the window,
        # and a global minus from the desuspension
        left_degp = 0
        for a in range(n):
            for k in range(1, n - a + 1):
                if letter_preserving_only and k != 1:
                    continue
                col = b.get(factor[a : a + k])
                if col:
                    sign = 1 if left_degp % 2 else -1
                    pre, post = factor[:a], factor[a + k :]
                    for lid, c in col.items():
                        add_into(
                            out,
                            (pre + (lid,) + post,),
                            c if sign == 1 else R.neg(c),
                            R,
                        )
            left_degp += Q.degp(factor[a])
        return out

    def differential(self, cword, letter_preserving_only=False):
        """Full differential by the Leibniz rule over factors."""
        R = self.A.ring
        out = {}
        sign = 1
        for i, factor in enumerate(cword):
            dfac = self.d_factor(factor, letter_preserving_only)
            pre, post = cword[:i], cword[i + 1 :]
            for piece, c in dfac.items():
                add_into(
                    out, pre + piece + post, c if sign == 1 else R.neg(c), R
                )
            if self.factor_degree(factor) % 2:
                sign = -sign
        return out

    def d_graded(self, cword):
        """The letter-count preserving part of the differential."""
        return self.differential(cword, letter_preserving_only=True)

    def d_lower(self, cword):
        """The strictly letter-lowering part."""
        R = self.A.ring
        full = self.differential(cword)
        n = letter_count(cword)
        return {w: c for w, c in full.items() if letter_count(w) < n}

    # -- contraction of the graded pieces --------------------------------

    def r_homotopy(self, cword):
        """Contraction of the letter-count graded piece: merges a bare
        leading letter into the next factor; zero otherwise."""
        R = self.A.ring
        if len(cword) < 2 or len(cword[0]) != 1:
            return {}
        letter = cword[0][0]
        merged = (cword[0] + cword[1],) + cword[2:]
        sign = -1 if self.Q.deg(letter) % 2 else 1
        return {merged: R.coerce(sign)}

    def d_squared_report(self, src, tgt):
        R = self.A.ring
        for cword in self.words(src, tgt):
            acc = {}
            for w1, c1 in self.differential(cword).items():
                add_lin(acc, self.differential(w1), R, factor=c1)
            if acc:
                return (cword, acc)
        return None


def cobar_of_bar(A, L):
    return CobarBarHom(A, L)


# ---------------------------------------------------------------------------
# the resolution as a dg structure, and the unit of the adjunction
# ---------------------------------------------------------------------------

def cobar_word_name(Q, cword):
    return "".join("(" + ",".join(Q.name(l) for l in f) + ")" for f in cword)


def cobar_structure(A, L, name=None):
    """The truncated cobar-of-bar resolution as a dg structure: letters
    are cobar words, the differential is the cobar differential and the
    binary operation is concatenation (zero above the letter bound)."""
    C = CobarBarHom(A, L)
    Q = A.quiver
    R = A.ring
    hom = {}
    tables = {}
    for a in Q.objects:
        for bb in Q.objects:
            basis = []
            for w in C.words(a, bb):
                basis.append((cobar_word_name(Q, w), C.word_degree(w)))
                tables.setdefault((a, bb), []).append(w)
            hom[(a, bb)] = basis
    Q2 = GradedQuiver(Q.objects, hom)

    def lid_of(cword):
        a = Q.src(word_letters(cword)[-1])
        bb = Q.tgt(word_letters(cword)[0])
        return Q2.letter(a, bb, cobar_word_name(Q, cword))

    ops = {}
    for pair, ws in tables.items():
        for w in ws:
            col = {}
            for w2, c in C.differential(w).items():
                add_into(col, lid_of(w2), c, R)
            if col:
                ops[(lid_of(w),)] = col
    # concatenation: strictly associative, no signs
    for pair, ws in tables.items():
        for w1 in ws:
            for pair2, ws2 in tables.items():
                if pair2[0] != pair[1]:
                    continue
                for w2 in ws2:
                    if letter_count(w1) + letter_count(w2) > L:
                        continue
                    ops[(lid_of(w2), lid_of(w1))] = {lid_of(w2 + w1): R.one()}
    U = AInftyStructure.from_unshifted(
        R, Q2, max(A.max_arity, 2), ops, name=name or f"U({A.name})"
    )
    U._cobar_words = tables
    U._cobar_base = A
    U._cobar_bound = L
    return U


def eta(A, L, target=None):
    """The resolution unit: the functor into the truncated cobar-of-bar
    structure whose shifted components send a word to the corresponding
    one-factor cobar word with coefficient one."""
    U = target if target is not None else cobar_structure(A, L)
    Q, Q2 = A.quiver, U.quiver
    R = A.ring
    shifted = {}
    for n in range(1, L + 1):
        for word in Q.words(n):
            a, bb = Q.word_src(word), Q.word_tgt(word)
            lid = Q2.letter(a, bb, cobar_word_name(Q, (word,)))
            shifted[word] = {lid: R.one()}
    F = AInftyFunctor.from_shifted(
        A, U, {o: o for o in Q.objects}, shifted, L, name=f"eta({A.name})"
    )
    return F.validate()


# ---------------------------------------------------------------------------
# strict-unit quotient
# ---------------------------------------------------------------------------

def check_split_witness(A, retractions):
    """Validate designated letter units plus retractions p with p(id) = 1
    supported in degree 0; raises SplitUnitsRequired when unusable."""
    Q, R = A.quiver, A.ring
    units = {}
    if retractions is None:
        raise SplitUnitsRequired("no retraction witness supplied")
    for obj in Q.objects:
        u = A.unit_letter(obj)
        if u is None:
            raise SplitUnitsRequired(
                f"object {obj} has no designated single-letter strict unit"
            )
        units[obj] = u
        p = retractions.get(obj)
        if p is None:
            raise SplitUnitsRequired(f"no retraction at {obj}")
        if p.get(u) != R.one():
            raise SplitUnitsRequired(f"retraction at {obj} does not fix the unit")
        for lid, c in p.items():
            if Q.src(lid) != obj or Q.tgt(lid) != obj:
                raise SplitUnitsRequired("retraction supported off the endo module")
            if Q.deg(lid) != 0 and not R.is_zero(c):
                raise SplitUnitsRequired("retraction must vanish outside degree 0")
    return units


def rebase_split_units(A, retractions):
    """Change basis on the endomorphism modules so the retraction becomes
    the coordinate projection onto the unit letter: every non-unit basis
    letter x is replaced by x - p(x) id.  Returns (structure, adapted
    retractions); when p is already adapted, returns the input."""
    Q, R = A.quiver, A.ring
    units = check_split_witness(A, retractions)
    adapted = all(
        all(
            R.is_zero(c)
            for lid, c in retractions[obj].items()
            if lid != units[obj]
        )
        for obj in Q.objects
    )
    if adapted:
        return A, retractions
    # old letter in terms of new basis and back; only endo letters move
    unit_of_letter = {}
    pval = {}
    for obj, u in units.items():
        for lid, c in retractions[obj].items():
            if lid != u and not R.is_zero(c):
                unit_of_letter[lid] = u
                pval[lid] = c

    def expand_old(lid):
        # old basis letter as a combination of new basis letters
        if lid in pval:
            return {lid: R.one(), unit_of_letter[lid]: pval[lid]}
        return {lid: R.one()}

    def contract_new(lid):
        # new basis letter as a combination of old basis letters
        if lid in pval:
            return {lid: R.one(), unit_of_letter[lid]: R.neg(pval[lid])}
        return {lid: R.one()}

    m = A.unshifted_ops()
    ops = {}
    for n in sorted({len(w) for w in m}):
        for word in Q.words(n):
            # expand each slot of the new word into old letters
            acc = {}

            def emit(pos, old_word, coeff):
                if pos == n:
                    col = m.get(old_word)
                    if col:
                        for out, c in col.items():
                            add_into(acc, out, R.mul(coeff, c), R)
                    return
                for old, c in contract_new(word[pos]).items():
                    emit(pos + 1, old_word + (old,), R.mul(coeff, c))

            emit(0, (), R.one())
            if not acc:
                continue
            col2 = {}
            for out, c in acc.items():
                for new, c2 in expand_old(out).items():
                    add_into(col2, new, R.mul(c, c2), R)
            if col2:
                ops[word] = col2
    p2 = {obj: {units[obj]: R.one()} for obj in Q.objects}
    A2 = AInftyStructure.from_unshifted(
        R, Q, A.max_arity, ops, units={o: {u: R.one()} for o, u in units.items()},
        name=A.name + "-adapted",
    )
    return A2, p2


class StrictQuotient:
    """Reduced-word presentation of the strict-unit quotient at a bound."""

    def __init__(self, A, retractions, L):
        A2, p2 = rebase_split_units(A, retractions)
        self.base = A2
        self.L = L
        self.Q = A2.quiver
        self.units = {obj: A2.unit_letter(obj) for obj in self.Q.objects}
        self.unit_lids = set(self.units.values())
        self.C = CobarBarHom(A2, L)

    # -- reduction -------------------------------------------------------

    def reduce_word(self, cword):
        """Normal form of a basis word: the word itself, a shorter word, a
        one-letter unit word, or None (the zero class)."""
        for f in cword:
            if len(f) >= 2 and any(l in self.unit_lids for l in f):
                return None
        kept = tuple(
            f for f in cword if not (len(f) == 1 and f[0] in self.unit_lids)
        )
        if kept:
            return kept
        # all factors were bare units at the same object
        return (cword[0],)

    def reduce_lin(self, lin):
        R = self.base.ring
        out = {}
        for w, c in lin.items():
            nf = self.reduce_word(w)
            if nf is not None:
                add_into(out, nf, c, R)
        return out

    def is_normal_form(self, cword):
        if all(l not in self.unit_lids for l in word_letters(cword)):
            return True
        return len(cword) == 1 and len(cword[0]) == 1 and cword[0][0] in self.unit_lids

    def normal_forms(self, src, tgt):
        for w in self.C.words(src, tgt):
            if self.is_normal_form(w):
                yield w

    def differential(self, cword):
        return self.reduce_lin(self.C.differential(cword))

    def d_graded(self, cword):
        """Induced differential on the letter-count graded piece."""
        n = letter_count(cword)
        full = self.reduce_lin(self.C.d_graded(cword))
        return {w: c for w, c in full.items() if letter_count(w) == n}

    def r_homotopy(self, cword):
        return self.reduce_lin(self.C.r_homotopy(cword))

    # -- the ideal -------------------------------------------------------

    def ideal_generators(self, src, tgt):
        """Kernel generators inside the truncation: insertion differences
        and words with a unit inside a longer factor."""
        R = self.base.ring
        gens = []
        for w in self.C.words(src, tgt):
            for f in w:
                if len(f) >= 2 and any(l in self.unit_lids for l in f):
                    gens.append({w: R.one()})
                    break
        for w in self.C.words(src, tgt, max_letters=self.L - 1):
            l = len(w)
            for i in range(l + 1):
                # object at the insertion boundary
                if i == 0:
                    at = self.Q.src(word_letters(w)[-1])
                elif i == l:
                    at = self.Q.tgt(word_letters(w)[0])
                else:
                    # between factor i and i+1 counted from the right: the
                    # target object of the factor on the right
                    at = self.Q.tgt(w[l - i][0])
                u = self.units[at]
                ins = w[: l - i] + ((u,),) + w[l - i :]
                gens.append({w: R.one(), ins: R.neg(R.one())})
        return gens

    def split_map_u(self, cword):
        """The graded splitting map: alternating sum over deletions of
        length-one endomorphism factors weighted by the retraction.

        In the adapted basis the retraction is the unit-coordinate
        projection, so on reduced words this vanishes; it is exercised on
        arbitrary words in the tests of ideal preservation."""
        Q, R = self.Q, self.base.ring
        deletable = [
            i
            for i, f in enumerate(cword)
            if len(f) == 1 and Q.src(f[0]) == Q.tgt(f[0])
        ]
        out = {}
        for mask in range(1, 1 << len(deletable)):
            chosen = [deletable[i] for i in range(len(deletable)) if mask >> i & 1]
            coeff = R.one()
            for i in chosen:
                # adapted retraction: coefficient of the unit letter
                coeff = R.mul(
                    coeff,
                    R.one() if cword[i][0] in self.unit_lids else R.zero(),
                )
            if R.is_zero(coeff):
                continue
            if len(chosen) % 2 == 0:
                coeff = R.neg(coeff)
            rest = tuple(f for i, f in enumerate(cword) if i not in chosen)
            if not rest:
                at = Q.src(cword[0][0])
                rest = ((self.units[at],),)
            add_into(out, rest, coeff, R)
        return out


def strict_quotient(A, retractions, L):
    """Quotient tables, the projection onto normal forms and the ideal
    generator lists, per object pair."""
    SQ = StrictQuotient(A, retractions, L)
    return SQ
