"""Structure-building operations: strict-unit augmentation and the tensor
product of dg categories."""

from .errors import NotDg, SchemaError
from .graded import koszul_sign
from .quiver import GradedQuiver
from .structures import AInftyStructure


def augment(A, unit_prefix="1@"):
    """Adjoin a formal strict unit to every endomorphism module.

    The operations extend uniquely so that each new generator is a strict
    unit: it multiplies as an identity under the binary operation and
    kills every other operation.
    """
    Q = A.quiver
    R = A.ring
    hom = {}
    for a in Q.objects:
        for b in Q.objects:
            basis = [(Q.name(l), Q.deg(l)) for l in Q.pair_lids[(a, b)]]
            if a == b:
                uname = unit_prefix + str(a)
                if any(n == uname for n, _ in basis):
                    raise SchemaError(f"basis name {uname} already taken")
                basis = basis + [(uname, 0)]
            hom[(a, b)] = basis
    Q2 = GradedQuiver(Q.objects, hom)

    def tr(lid):
        return Q2.letter(Q.src(lid), Q.tgt(lid), Q.name(lid))

    ops = {}
    for word, col in A.unshifted_ops().items():
        ops[tuple(tr(l) for l in word)] = {tr(out): c for out, c in col.items()}
    one = R.one()
    units = {}
    for a in Q2.objects:
        u = Q2.letter(a, a, unit_prefix + str(a))
        units[a] = {u: one}
        ops[(u, u)] = {u: one}
        for b in Q2.objects:
            for name, _deg in hom[(a, b)]:
                f = Q2.letter(a, b, name)
                if f != u:
                    ops.setdefault((f, u), {})[f] = one
            for name, _deg in hom[(b, a)]:
                f = Q2.letter(b, a, name)
                if f != u:
                    ops.setdefault((u, f), {})[f] = one
    return AInftyStructure.from_unshifted(
        R, Q2, A.max_arity, ops, units=units, name=f"{A.name}+"
    )


def tensor_dg(A, B):
    """Tensor product of two dg categories: objects are pairs, homs are
    tensor products, with the Koszul differential and composition."""
    if not A.is_dg():
        raise NotDg("left factor has operations above arity 2")
    if not B.is_dg():
        raise NotDg("right factor has operations above arity 2")
    if A.ring != B.ring:
        raise SchemaError("tensor factors live over different rings")
    R = A.ring
    QA, QB = A.quiver, B.quiver

    def oname(a, b):
        return f"({a},{b})"

    def lname(la, lb):
        return f"{QA.name(la)}(x){QB.name(lb)}"

    objects = [oname(a, b) for a in QA.objects for b in QB.objects]
    hom = {}
    for a in QA.objects:
        for b in QB.objects:
            for a2 in QA.objects:
                for b2 in QB.objects:
                    basis = [
                        (lname(la, lb), QA.deg(la) + QB.deg(lb))
                        for la in QA.pair_lids[(a, a2)]
                        for lb in QB.pair_lids[(b, b2)]
                    ]
                    hom[(oname(a, b), oname(a2, b2))] = basis
    Q = GradedQuiver(objects, hom)

    def lid(la, lb):
        return Q.letter(
            oname(QA.src(la), QB.src(lb)),
            oname(QA.tgt(la), QB.tgt(lb)),
            lname(la, lb),
        )

    mA = A.unshifted_ops()
    mB = B.unshifted_ops()
    ops = {}

    def add_op(word, out, c):
        if R.is_zero(c):
            return
        col = ops.setdefault(word, {})
        s = R.add(col.get(out, R.zero()), c)
        if R.is_zero(s):
            col.pop(out, None)
            if not col:
                del ops[word]
        else:
            col[out] = s

    n_a = QA.n_letters
    n_b = QB.n_letters
    # differential: d(a (x) b) = da (x) b + (-1)^{deg a} a (x) db
    for la in range(n_a):
        for lb in range(n_b):
            f = lid(la, lb)
            for out, c in mA.get((la,), {}).items():
                add_op((f,), lid(out, lb), c)
            s = koszul_sign(1, QA.deg(la))
            for out, c in mB.get((lb,), {}).items():
                add_op((f,), lid(la, out), c if s == 1 else R.neg(c))
    # composition with the Koszul interchange sign
    for la2 in range(n_a):
        for lb2 in range(n_b):
            for la1 in range(n_a):
                if QA.src(la2) != QA.tgt(la1):
                    continue
                colA = mA.get((la2, la1))
                if not colA:
                    continue
                for lb1 in range(n_b):
                    if QB.src(lb2) != QB.tgt(lb1):
                        continue
                    colB = mB.get((lb2, lb1))
                    if not colB:
                        continue
                    s = koszul_sign(QB.deg(lb2), QA.deg(la1))
                    for outa, ca in colA.items():
                        for outb, cb in colB.items():
                            c = R.mul(ca, cb)
                            add_op(
                                (lid(la2, lb2), lid(la1, lb1)),
                                lid(outa, outb),
                                c if s == 1 else R.neg(c),
                            )
    units = {}
    for a, ua in A.units.items():
        for b, ub in B.units.items():
            lin = {}
            for la, ca in ua.items():
                for lb, cb in ub.items():
                    lin[lid(la, lb)] = R.mul(ca, cb)
            units[oname(a, b)] = lin
    return AInftyStructure.from_unshifted(
        R, Q, 2, ops, units=units, name=f"{A.name}(x){B.name}"
    )
