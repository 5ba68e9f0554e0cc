"""Relation checkers: associativity, functor and naturality residuals.

Two independent evaluation routes exist on purpose.  The literal route
works on unshifted operations and transcribes the defining relations with
their explicit sign exponents; the coderivation route works on the stored
shifted tables where every sign is a Koszul sign.  Both must agree word
for word after the shift identification, and the bar construction gives a
third, matrix-level route (see barcobar).
"""

from dataclasses import dataclass, field
from typing import Optional

from .errors import ArityUnderflow, SchemaError
from .lincomb import add_into, add_lin
from .structures import AInftyFunctor, Prenat


from functools import lru_cache


@lru_cache(maxsize=None)
def compositions(n):
    """All ordered tuples of positive integers summing to n; (()) for n=0."""
    if n == 0:
        return ((),)
    out = []
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            out.append((first,) + rest)
    return tuple(out)


@dataclass
class Violation:
    arity: int
    word: tuple
    word_names: list
    residual: dict

    def describe(self):
        return f"arity {self.arity} on {'|'.join(self.word_names)}"


@dataclass
class CheckReport:
    ok: bool
    checked_through: int
    method: str = "literal"
    violation: Optional[Violation] = None
    notes: dict = field(default_factory=dict)

    @property
    def first_violating_arity(self):
        return None if self.violation is None else self.violation.arity


# ---------------------------------------------------------------------------
# literal associativity relation
# ---------------------------------------------------------------------------

def literal_stasheff_residual(A, word):
    """Signed double sum of the associativity relation at this word,
    evaluated with unshifted operations; {out lid: coeff}."""
    R, Q = A.ring, A.quiver
    m = A.unshifted_ops()
    n = len(word)
    out = {}
    left_deg = [0] * (n + 1)
    for j in range(n):
        left_deg[j + 1] = left_deg[j] + Q.deg(word[j])
    for k in range(1, n + 1):
        for i in range(0, n - k + 1):
            a = n - i - k  # letters left of the window in display order
            col = m.get(word[a : a + k])
            if not col:
                continue
            exp = i + k * (n - i - k) + (2 - k) * left_deg[a]
            sign = -1 if exp % 2 else 1
            pre, post = word[:a], word[a + k :]
            for mid, c in col.items():
                col2 = m.get(pre + (mid,) + post)
                if not col2:
                    continue
                add_lin(out, col2, R, factor=c if sign == 1 else R.neg(c))
    return out


def shifted_stasheff_residual(A, word):
    return A.stasheff_residual(word)


def check_stasheff(A, up_to=None, method="literal"):
    """Relation check through the given arity; reports the first violation."""
    if up_to is None:
        up_to = A.max_arity
    Q = A.quiver
    residual = (
        literal_stasheff_residual if method == "literal" else shifted_stasheff_residual
    )
    for n in range(1, up_to + 1):
        for word in Q.words(n):
            res = residual(A, word)
            if res:
                return CheckReport(
                    False,
                    n,
                    method=method,
                    violation=Violation(
                        n,
                        word,
                        Q.word_names(word),
                        {Q.name(l): A.ring.show(c) for l, c in res.items()},
                    ),
                )
    return CheckReport(True, up_to, method=method)


# ---------------------------------------------------------------------------
# literal functor relation
# ---------------------------------------------------------------------------

def functor_residual(F, word):
    """LHS minus RHS of the functor relation at this word; {target lid: coeff}."""
    A, B = F.source, F.target
    R = F.ring
    QA, QB = A.quiver, B.quiver
    mA = A.unshifted_ops()
    mB = B.unshifted_ops()
    n = len(word)
    out = {}
    left_deg = [0] * (n + 1)
    for j in range(n):
        left_deg[j + 1] = left_deg[j] + QA.deg(word[j])
    # LHS: F^{n-k+1} o (id x m_k x id)
    for k in range(1, n + 1):
        for i in range(0, n - k + 1):
            a = n - i - k
            col = mA.get(word[a : a + k])
            if not col:
                continue
            exp = i + k * (n - i - k) + (2 - k) * left_deg[a]
            sign = -1 if exp % 2 else 1
            pre, post = word[:a], word[a + k :]
            for mid, c in col.items():
                colF = F.comps.get(pre + (mid,) + post)
                if not colF:
                    continue
                add_lin(out, colF, R, factor=c if sign == 1 else R.neg(c))
    # RHS (subtracted): m_r o (F-blocks), blocks right to left
    for comp in compositions(n):
        r = len(comp)
        # block t (t = 1..r from the right) covers display slice
        # [n - S_t : n - S_{t-1}] where S_t = comp[0] + ... + comp[t-1]
        bounds = [0]
        for it in comp:
            bounds.append(bounds[-1] + it)
        blocks = [word[n - bounds[t] : n - bounds[t - 1]] for t in range(1, r + 1)]
        cols = []
        ok = True
        for blk in blocks:
            colF = F.comps.get(blk)
            if not colF:
                ok = False
                break
            cols.append(colF)
        if not ok:
            continue
        exp = 0
        for t in range(r):
            for u in range(t + 1, r):
                exp += (1 - comp[t]) * comp[u]
        # Koszul from evaluating the tensor of the F-blocks: block t counted
        # from the right has degree (1 - i_t) and moves past the letters of
        # the blocks left of it
        for t in range(1, r + 1):
            d_map = 1 - comp[t - 1]
            if d_map % 2:
                exp += d_map * left_deg[n - bounds[t]]
        sign = -1 if exp % 2 else 1
        # outer word: block outputs in display order (leftmost block first)
        def emit(t, outw, coeff):
            if t == 0:
                colm = mB.get(outw)
                if colm:
                    add_lin(out, colm, R, factor=R.neg(coeff) if sign == 1 else coeff)
                return
            for lid, c in cols[t - 1].items():
                emit(t - 1, outw + (lid,), R.mul(coeff, c))

        emit(r, (), R.one())
    return out


def check_functor(F, up_to=None):
    if up_to is None:
        up_to = F.max_arity
    F.validate()
    QA = F.source.quiver
    for n in range(1, up_to + 1):
        for word in QA.words(n):
            res = functor_residual(F, word)
            if res:
                QB = F.target.quiver
                return CheckReport(
                    False,
                    n,
                    violation=Violation(
                        n,
                        word,
                        QA.word_names(word),
                        {QB.name(l): F.ring.show(c) for l, c in res.items()},
                    ),
                )
    return CheckReport(True, up_to)


# ---------------------------------------------------------------------------
# naturality: the differential of prenatural transformations
# ---------------------------------------------------------------------------

def _kos_prime(Q, word):
    """Exponent of the word transport sign: sum over letters of
    (position from the right - 1) * deg'."""
    n = len(word)
    return sum((n - 1 - j) * (Q.deg(word[j]) + 1) for j in range(n))


class M1Context:
    """Evaluator for the differential of prenatural transformations.

    Everything is computed on the shifted side, where the coderivation
    bookkeeping has Koszul-only signs: the stored shifted operations of
    the target act on blockwise images of the bar cofunctors of F and G
    flanking one shifted theta component, plus the precomposition with
    the source coderivation.  Components are transported back to the
    unshifted convention word by word.  The arity-0 transport is
    s(theta^0) times (-1)^p, the unique choice under which completing a
    homotopy by strict units yields a natural transformation.
    """

    def __init__(self, F, G, theta):
        self.F = F
        self.G = G
        self.theta = theta
        self.R = F.ring
        self.QA = F.source.quiver
        self.QB = F.target.quiver
        self.bB = F.target.b
        self.bA = F.source.b
        p = theta.degree
        self.p = p
        self.Fhat = F.shifted_comps()
        self.Ghat = G.shifted_comps()
        R, QA = self.R, self.QA
        self.that = {}
        for w, col in theta.comps.items():
            exp = (p - 1) + _kos_prime(QA, w)
            if exp % 2:
                self.that[w] = {k: R.neg(c) for k, c in col.items()}
            else:
                self.that[w] = dict(col)
        self.that0 = {}
        for obj, lin in theta.comps0.items():
            if p % 2:
                self.that0[obj] = {k: R.neg(c) for k, c in lin.items()}
            else:
                self.that0[obj] = dict(lin)

    def arity0(self, obj):
        """(d theta)^0 at an object: the differential of theta^0."""
        R = self.R
        out = {}
        lin = self.that0.get(obj)
        if lin:
            for lid, c in lin.items():
                col = self.bB.get((lid,))
                if col:
                    add_lin(out, col, R, factor=c)
        # transport back with the arity-0 rule at degree p+1
        if self.p % 2:
            return out
        return {k: R.neg(c) for k, c in out.items()}

    def component(self, word):
        R, QA = self.R, self.QA
        p = self.p
        n = len(word)
        acc = {}
        degp = [QA.deg(l) + 1 for l in word]
        left_degp = [0] * (n + 1)
        for j in range(n):
            left_degp[j + 1] = left_degp[j] + degp[j]

        # block term: b_{r+s+1} o (G-blocks x theta^k x F-blocks), with the
        # Koszul sign of moving theta-hat past the G-part letters
        for k in range(0, n + 1):
            for iS in range(0, n - k + 1):
                jS = n - k - iS
                if k == 0:
                    at = QA.word_tgt(word) if iS == n else QA.src(word[n - iS - 1])
                    colT = self.that0.get(at)
                else:
                    colT = self.that.get(word[n - iS - k : n - iS])
                if not colT:
                    continue
                exp0 = (p - 1) * left_degp[jS]
                for comp_i in compositions(iS):
                    r = len(comp_i)
                    bi = [0]
                    for it in comp_i:
                        bi.append(bi[-1] + it)
                    fcols = []
                    okF = True
                    for t in range(1, r + 1):
                        cF = self.Fhat.get(word[n - bi[t] : n - bi[t - 1]])
                        if not cF:
                            okF = False
                            break
                        fcols.append(cF)
                    if not okF:
                        continue
                    for comp_j in compositions(jS):
                        s = len(comp_j)
                        bj = [0]
                        for jt in comp_j:
                            bj.append(bj[-1] + jt)
                        gcols = []
                        okG = True
                        for t in range(1, s + 1):
                            cG = self.Ghat.get(word[jS - bj[t] : jS - bj[t - 1]])
                            if not cG:
                                okG = False
                                break
                            gcols.append(cG)
                        if not okG:
                            continue
                        sign = -1 if exp0 % 2 else 1

                        def emit_f(t, outw, coeff):
                            if t == 0:
                                emit_theta(outw, coeff)
                                return
                            for lid, c in fcols[t - 1].items():
                                emit_f(t - 1, outw + (lid,), R.mul(coeff, c))

                        def emit_theta(outw, coeff):
                            for lid, c in colT.items():
                                emit_g(s, (lid,) + outw, R.mul(coeff, c))

                        def emit_g(t, outw, coeff):
                            if t == 0:
                                colm = self.bB.get(outw)
                                if colm:
                                    add_lin(
                                        acc,
                                        colm,
                                        R,
                                        factor=coeff if sign == 1 else R.neg(coeff),
                                    )
                                return
                            for lid, c in gcols[t - 1].items():
                                emit_g(t - 1, (lid,) + outw, R.mul(coeff, c))

                        emit_f(r, (), R.one())

        # coderivation term: (-1)^p theta-hat^{n-k+1} o (id x b_k x id)
        for a in range(n):
            for k in range(1, n - a + 1):
                col = self.bA.get(word[a : a + k])
                if not col:
                    continue
                exp = p + left_degp[a]
                sign = -1 if exp % 2 else 1
                pre, post = word[:a], word[a + k :]
                for mid, c in col.items():
                    colT = self.that.get(pre + (mid,) + post)
                    if not colT:
                        continue
                    add_lin(acc, colT, R, factor=c if sign == 1 else R.neg(c))

        if not acc:
            return acc
        # transport back to the unshifted convention
        exp = p + _kos_prime(QA, word)
        if exp % 2:
            return {k: R.neg(c) for k, c in acc.items()}
        return acc


def m1_arity0(F, G, theta, obj, ctx=None):
    """Arity-0 component of the prenat differential at an object."""
    if ctx is None:
        ctx = M1Context(F, G, theta)
    return ctx.arity0(obj)


def m1_component(F, G, theta, word, ctx=None):
    """Arity-n component (n >= 1) of the prenat differential on a word.

    F and G are passed explicitly so that inductively built targets can be
    used while theta is reinterpreted between them.
    """
    if ctx is None:
        ctx = M1Context(F, G, theta)
    return ctx.component(word)


def m1_prenat(theta, src_fun=None, dst_fun=None, up_to=None):
    """The prenat differential: a degree p+1 prenat whose components are
    the naturality defect; theta is natural iff the result vanishes."""
    F = src_fun or theta.src_fun
    G = dst_fun or theta.dst_fun
    if up_to is None:
        up_to = min(F.max_arity, G.max_arity)
    QA = F.source.quiver
    ctx = M1Context(F, G, theta)
    comps0 = {}
    comps = {}
    for obj in QA.objects:
        lin = ctx.arity0(obj)
        if lin:
            comps0[obj] = lin
    for n in range(1, up_to + 1):
        for word in QA.words(n):
            lin = ctx.component(word)
            if lin:
                comps[word] = lin
    return Prenat(F, G, theta.degree + 1, comps0, comps, name=f"m1({theta.name})")


def check_natural(theta, up_to=None):
    F, G = theta.src_fun, theta.dst_fun
    if up_to is None:
        up_to = min(F.max_arity, G.max_arity)
    theta.validate()
    QA = F.source.quiver
    QB = F.target.quiver
    R = theta.ring
    ctx = M1Context(F, G, theta)
    for obj in QA.objects:
        lin = ctx.arity0(obj)
        if lin:
            return CheckReport(
                False,
                0,
                violation=Violation(
                    0, (), [str(obj)], {QB.name(l): R.show(c) for l, c in lin.items()}
                ),
            )
    for n in range(1, up_to + 1):
        for word in QA.words(n):
            lin = ctx.component(word)
            if lin:
                return CheckReport(
                    False,
                    n,
                    violation=Violation(
                        n,
                        word,
                        QA.word_names(word),
                        {QB.name(l): R.show(c) for l, c in lin.items()},
                    ),
                )
    return CheckReport(True, up_to)


# ---------------------------------------------------------------------------
# composition of functors (bar-side, hence sign-free)
# ---------------------------------------------------------------------------

def compose_functors(G, F, max_arity=None):
    """The functor whose bar cofunctor is the composite of the two bars."""
    if F.target is not G.source:
        raise SchemaError("compose_functors needs target(F) = source(G)")
    bound = min(F.max_arity, G.max_arity)
    if max_arity is None:
        max_arity = bound
    if max_arity > bound:
        raise ArityUnderflow(
            f"composite determined only through arity {bound}, requested {max_arity}"
        )
    R = F.ring
    QA = F.source.quiver
    Fh = F.shifted_comps()
    Gh = G.shifted_comps()
    shifted = {}
    for n in range(1, max_arity + 1):
        for word in QA.words(n):
            acc = {}
            for comp in compositions(n):
                r = len(comp)
                bounds = [0]
                for it in comp:
                    bounds.append(bounds[-1] + it)
                blocks = [
                    word[n - bounds[t] : n - bounds[t - 1]] for t in range(1, r + 1)
                ]
                cols = []
                ok = True
                for blk in blocks:
                    cF = Fh.get(blk)
                    if not cF:
                        ok = False
                        break
                    cols.append(cF)
                if not ok:
                    continue

                def emit(t, outw, coeff):
                    if t == 0:
                        colG = Gh.get(outw)
                        if colG:
                            add_lin(acc, colG, R, factor=coeff)
                        return
                    for lid, c in cols[t - 1].items():
                        emit(t - 1, outw + (lid,), R.mul(coeff, c))

                emit(r, (), R.one())
            if acc:
                shifted[word] = acc
    obj_map = {a: G.obj_map[F.obj_map[a]] for a in QA.objects}
    H = AInftyFunctor.from_shifted(
        F.source, G.target, obj_map, shifted, max_arity, name=f"{G.name}o{F.name}"
    )
    return H.validate()
