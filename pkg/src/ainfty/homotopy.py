"""Homotopies of functors: perturbation, composition, reversal.

A homotopy from F to G is a degree-0 prenatural transformation theta with
vanishing arity-0 part such that G^i = F^i + (d theta)^i for i > 0, the
differential taken in the mixed sense (G-components left of the theta
block, F-components right).  Perturbing F by an arbitrary such theta
produces a valid functor: the n-th component of the defect only involves
components of G below n, so G can be built inductively.

Composition of homotopies is the componentwise sum of the transformations
(the sum of an (F,G)- and a (G,H)-coderivation is an (F,H)-coderivation
with the same corestriction, since the cross terms cancel against the
difference of the cofunctors); reversal is a linear solve and only
automatic over a field.
"""

from dataclasses import dataclass

from .errors import NotAHomotopy, SchemaError, UnsupportedRing
from .lincomb import add_into, sub_lin
from .relations import M1Context, check_functor
from .structures import AInftyFunctor, Prenat


@dataclass
class HomotopyCertificate:
    src: AInftyFunctor
    dst: AInftyFunctor
    theta: Prenat
    up_to: int

    def verify(self):
        defect = homotopy_defect(self.src, self.dst, self.theta, self.up_to)
        if defect is not None:
            raise NotAHomotopy(
                f"homotopy equation fails at arity {defect[0]}", witness=defect
            )
        return True


def homotopy_defect(F, G, theta, up_to):
    """First (arity, word) where G^i != F^i + (d theta)^i, or None."""
    if theta.degree != 0 or theta.comps0:
        return (0, ())
    if F.obj_map != G.obj_map:
        return (0, ())
    QA = F.source.quiver
    R = F.ring
    ctx = M1Context(F, G, theta)
    for n in range(1, up_to + 1):
        for word in QA.words(n):
            want = sub_lin(
                G.comps.get(word, {}), F.comps.get(word, {}), R
            )
            got = ctx.component(word)
            if want != got:
                return (n, word)
    return None


def perturb_by_homotopy(F, theta, up_to=None):
    """Functor G homotopic to F along theta (degree 0, theta^0 = 0),
    with G^i = F^i + (d theta)^i; returns (G, certificate)."""
    if theta.degree != 0:
        raise SchemaError("perturbation needs a degree-0 prenat")
    if theta.comps0:
        raise SchemaError("perturbation needs theta^0 = 0")
    if up_to is None:
        up_to = F.max_arity
    QA = F.source.quiver
    R = F.ring
    G = AInftyFunctor(
        F.source,
        F.target,
        dict(F.obj_map),
        {},
        F.max_arity,
        name=f"{F.name}+d(theta)",
    )
    for n in range(1, up_to + 1):
        # the arity-n defect only reads components of G below arity n
        ctx = M1Context(F, G, theta)
        for word in QA.words(n):
            col = dict(F.comps.get(word, {}))
            for lid, c in ctx.component(word).items():
                add_into(col, lid, c, R)
            if col:
                G.comps[word] = col
    G.validate()
    cert = HomotopyCertificate(F, G, theta, up_to)
    cert.verify()
    rep = check_functor(G, up_to)
    if not rep.ok:
        raise NotAHomotopy(
            f"perturbed functor fails relations: {rep.violation.describe()}"
        )
    return G, cert


def compose_homotopies(cert1, cert2):
    """Certificate for F ~ H out of F ~ G and G ~ H.

    The naive componentwise sum is not a homotopy in general (the mixed
    differentials against (F,G) and (G,H) do not splice), so the
    composite is found by a linear solve with the components below the
    first arity where the second homotopy acts pinned to those of the
    first, matching the prefix property of homotopy composition."""
    if cert1.dst.comps != cert2.src.comps or cert1.dst.obj_map != cert2.src.obj_map:
        raise SchemaError("homotopies do not chain")
    F, H = cert1.src, cert2.dst
    up_to = min(cert1.up_to, cert2.up_to)
    n0 = min((len(w) for w in cert2.theta.comps), default=up_to + 1)
    fixed = {
        w: dict(col) for w, col in cert1.theta.comps.items() if len(w) < n0
    }
    theta = solve_homotopy(F, H, up_to, fixed=fixed)
    if theta is None:
        raise NotAHomotopy("no composite homotopy found at this truncation")
    theta.name = f"{cert1.theta.name}*{cert2.theta.name}"
    cert = HomotopyCertificate(F, H, theta, up_to)
    cert.verify()
    return cert


def solve_homotopy(F, H, up_to, fixed=None):
    """Find theta (degree 0, theta^0 = 0) with H^i = F^i + (d theta)^i
    through the bound, keeping the supplied lower components; returns None
    when the truncated linear system has no solution."""
    from .linalg import SparseMatrix, solve_linear

    R = F.ring
    if not R.is_field:
        raise UnsupportedRing("homotopy solving needs field coefficients")
    QA = F.source.quiver
    fixed = fixed or {}
    fixed_pre = Prenat(F, H, 0, {}, {w: dict(c) for w, c in fixed.items()})
    ctx_fixed = M1Context(F, H, fixed_pre)
    slots = [
        (w, out) for (w, out) in _theta_slots(F, H, 0, up_to) if w not in fixed
    ]
    eq_index = {}
    rows = []
    rhs = {}

    def eq_row(word, out):
        key = (word, out)
        if key not in eq_index:
            eq_index[key] = len(rows)
            rows.append({})
        return eq_index[key]

    for n in range(1, up_to + 1):
        for word in QA.words(n):
            diff = sub_lin(H.comps.get(word, {}), F.comps.get(word, {}), R)
            diff = sub_lin(diff, ctx_fixed.component(word), R)
            for out, c in diff.items():
                rhs[eq_row(word, out)] = c
    for j, (tword, tout) in enumerate(slots):
        unit = Prenat(F, H, 0, {}, {tword: {tout: R.one()}})
        ctx = M1Context(F, H, unit)
        for n in range(len(tword), up_to + 1):
            for word in QA.words(n):
                for out, c in ctx.component(word).items():
                    i = eq_row(word, out)
                    rows[i][j] = R.add(rows[i].get(j, R.zero()), c)
    M = SparseMatrix(R, len(rows), len(slots))
    for i, row in enumerate(rows):
        for j, c in row.items():
            M[i, j] = c
    x = solve_linear(M, rhs)
    if x is None:
        return None
    comps = {w: dict(c) for w, c in fixed.items()}
    for j, c in x.items():
        word, out = slots[j]
        if not R.is_zero(c):
            comps.setdefault(word, {})[out] = c
    return Prenat(F, H, 0, {}, comps)


def _theta_slots(F, G, degree, up_to):
    """All degree-valid (word, out) component slots for a prenat F -> G."""
    QA, QB = F.source.quiver, F.target.quiver
    slots = []
    for n in range(1, up_to + 1):
        for word in QA.words(n):
            want = QA.word_deg(word) + degree - n
            fa = F.obj_map[QA.word_src(word)]
            ga = G.obj_map[QA.word_tgt(word)]
            for out in QB.pair_lids[(fa, ga)]:
                if QB.deg(out) == want:
                    slots.append((word, out))
    return slots


def reverse_homotopy(F, G, theta, up_to):
    """A homotopy G ~ F reversing the given one, found by a joint linear
    solve across all arities; needs field coefficients."""
    theta_rev = solve_homotopy(G, F, up_to)
    if theta_rev is None:
        return None
    theta_rev.name = f"reverse({theta.name})"
    cert = HomotopyCertificate(G, F, theta_rev, up_to)
    cert.verify()
    return cert


def homotopy_to_weak_equiv(F, G, theta, up_to=None):
    """Upgrade a homotopy to a natural transformation with strict units in
    the arity-0 slot (invertible in cohomology, hence a weak equivalence)."""
    from .errors import NotUnital
    from .relations import check_natural

    if up_to is None:
        up_to = min(F.max_arity, G.max_arity)
    defect = homotopy_defect(F, G, theta, up_to)
    if defect is not None:
        raise NotAHomotopy(
            f"not a homotopy: equation fails at arity {defect[0]}", witness=defect
        )
    B = F.target
    comps0 = {}
    for a in F.source.quiver.objects:
        unit = B.unit_of(F.obj_map[a])
        if not unit:
            raise NotUnital(f"target has no designated strict unit at {F.obj_map[a]}")
        comps0[a] = dict(unit)
    tilde = Prenat(F, G, 0, comps0, {w: dict(c) for w, c in theta.comps.items()},
                   name=f"tilde({theta.name})")
    rep = check_natural(tilde, up_to)
    return tilde, rep
